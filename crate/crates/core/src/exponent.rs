//! Bounds on the sparse multiplication exponent `σ(r)`, the unique solution
//! of `ω(σ - 1, 2 - σ, 1 + r - σ) = σ`.
//!
//! Numeric bounds come from a table of certified rectangular bounds
//! `ω(a, b, c) ≤ w`. Scaling and subadditivity of `ω` turn any nonnegative
//! combination of table rows into a new bound, so the best derivable bound on
//! `ω(a, b, c)` is a small linear program.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest `μ` with `ω(μ, 1, 1) = 1 + 2μ`, as currently known.
pub const MU: f64 = 0.5286;
/// Largest known `α` with `ω(α, 1, 1) = 2`.
pub const ALPHA: f64 = 0.3138;

const EPS: f64 = 1e-9;

mod simplex {
    //! Two-phase simplex on a dense tableau for `min c·x, Ax = b, x ≥ 0`.

    use super::EPS;

    pub struct Solution {
        pub value: f64,
        pub x: Vec<f64>,
    }

    struct Tableau {
        // Constraint rows then the objective row; last column is the rhs.
        t: Vec<Vec<f64>>,
        basis: Vec<usize>,
    }

    impl Tableau {
        fn rhs(&self) -> usize {
            self.t[0].len() - 1
        }

        fn pivot(&mut self, row: usize, col: usize) {
            let p = self.t[row][col];
            for v in &mut self.t[row] {
                *v /= p;
            }
            let pivot_row = self.t[row].clone();
            for (i, r) in self.t.iter_mut().enumerate() {
                if i == row {
                    continue;
                }
                let f = r[col];
                if f.abs() > 0.0 {
                    for (v, pv) in r.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
            self.basis[row] = col;
        }

        /// Runs to optimality over columns `0..allowed` with Bland's rule.
        /// Returns false when unbounded.
        fn optimize(&mut self, allowed: usize) -> bool {
            let m = self.basis.len();
            let rhs = self.rhs();
            loop {
                let Some(col) = (0..allowed).find(|&j| self.t[m][j] < -EPS) else {
                    return true;
                };
                let mut best: Option<(f64, usize, usize)> = None;
                for i in 0..m {
                    let a = self.t[i][col];
                    if a > EPS {
                        let ratio = self.t[i][rhs] / a;
                        let better = match best {
                            None => true,
                            Some((r, _, b)) => ratio < r - EPS || (ratio <= r + EPS && self.basis[i] < b),
                        };
                        if better {
                            best = Some((ratio, i, self.basis[i]));
                        }
                    }
                }
                match best {
                    Some((_, row, _)) => self.pivot(row, col),
                    None => return false,
                }
            }
        }
    }

    pub fn minimize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<Solution> {
        let (m, n) = (a.len(), c.len());
        let width = n + m + 1;
        let mut t = Vec::with_capacity(m + 1);
        for i in 0..m {
            let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
            let mut row = vec![0.0; width];
            for j in 0..n {
                row[j] = sign * a[i][j];
            }
            row[n + i] = 1.0;
            row[width - 1] = sign * b[i];
            t.push(row);
        }
        // Phase 1: minimize the sum of artificials.
        let mut obj = vec![0.0; width];
        for row in &t {
            for j in 0..n {
                obj[j] -= row[j];
            }
            obj[width - 1] -= row[width - 1];
        }
        t.push(obj);
        let mut tab = Tableau {
            t,
            basis: (n..n + m).collect(),
        };
        tab.optimize(n + m);
        if -tab.t[m][width - 1] > 1e-7 {
            return None;
        }
        // Drive remaining artificials out of the basis where possible.
        for i in 0..m {
            if tab.basis[i] >= n {
                if let Some(j) = (0..n).find(|&j| tab.t[i][j].abs() > EPS) {
                    tab.pivot(i, j);
                }
            }
        }
        // Phase 2.
        let mut obj = vec![0.0; width];
        obj[..n].copy_from_slice(c);
        for i in 0..m {
            let cb = if tab.basis[i] < n { c[tab.basis[i]] } else { 0.0 };
            if cb != 0.0 {
                for (v, tv) in obj.iter_mut().zip(&tab.t[i]) {
                    *v -= cb * tv;
                }
            }
        }
        tab.t[m] = obj;
        if !tab.optimize(n) {
            return None;
        }
        let mut x = vec![0.0; n];
        for i in 0..m {
            if tab.basis[i] < n {
                x[tab.basis[i]] = tab.t[i][width - 1];
            }
        }
        let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
        Some(Solution { value, x })
    }
}

/// A certified bound `ω(a, b, c) ≤ omega`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaBound {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub omega: f64,
}

impl OmegaBound {
    pub fn new(a: f64, b: f64, c: f64, omega: f64) -> Self {
        OmegaBound { a, b, c, omega }
    }

    fn check(&self) -> Result<()> {
        let OmegaBound { a, b, c, omega } = *self;
        if [a, b, c, omega].iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument(format!("bound {self:?} has a negative or non-finite value")));
        }
        let lower = (a + b).max(a + c).max(b + c);
        if omega < lower - EPS || omega > a + b + c + EPS {
            return Err(Error::InvalidArgument(format!(
                "bound ω({a}, {b}, {c}) ≤ {omega} lies outside [{lower}, {}]",
                a + b + c
            )));
        }
        Ok(())
    }

    fn permutations(&self) -> [OmegaBound; 6] {
        let OmegaBound { a, b, c, omega } = *self;
        [
            OmegaBound::new(a, b, c, omega),
            OmegaBound::new(a, c, b, omega),
            OmegaBound::new(b, a, c, omega),
            OmegaBound::new(b, c, a, omega),
            OmegaBound::new(c, a, b, omega),
            OmegaBound::new(c, b, a, omega),
        ]
    }
}

/// A finite set of bounds, closed under permutation of the dimensions and
/// always containing the unit rows `ω(1, 0, 0) ≤ 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OmegaTable {
    rows: Vec<OmegaBound>,
}

/// Which first-dimension constraint the σ program uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpVariant {
    /// `Σλa = σ - 1`, matching the definition of `σ(r)`.
    #[default]
    Definition,
    /// `Σλa = 1 + σ`.
    Printed,
}

/// An optimal combination of table rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub value: f64,
    pub terms: Vec<(f64, OmegaBound)>,
}

impl OmegaTable {
    pub fn new(bounds: impl IntoIterator<Item = OmegaBound>) -> Result<Self> {
        let mut rows: Vec<OmegaBound> = Vec::new();
        let units = [OmegaBound::new(1.0, 0.0, 0.0, 1.0)];
        for bound in units.into_iter().chain(bounds) {
            bound.check()?;
            for p in bound.permutations() {
                match rows.iter_mut().find(|r| r.a == p.a && r.b == p.b && r.c == p.c) {
                    Some(r) => r.omega = r.omega.min(p.omega),
                    None => rows.push(p),
                }
            }
        }
        Ok(OmegaTable { rows })
    }

    /// Only the unit rows, giving `ω(a, b, c) ≤ a + b + c`.
    pub fn trivial() -> Self {
        Self::new([]).expect("unit rows are valid")
    }

    /// Square bound, the two `ω(1, k, 1)` anchors and the `α`, `μ` witnesses.
    pub fn default_bounds() -> Self {
        Self::new([
            OmegaBound::new(1.0, 1.0, 1.0, 2.3719),
            OmegaBound::new(1.0, 1.3, 1.0, 2.6217),
            OmegaBound::new(1.0, 1.4, 1.0, 2.7085),
            OmegaBound::new(ALPHA, 1.0, 1.0, 2.0),
            OmegaBound::new(MU, 1.0, 1.0, 1.0 + 2.0 * MU),
        ])
        .expect("default bounds are valid")
    }

    /// The table under the hypothesis `ω = 2`, where `ω(a, b, c)` is the
    /// largest pairwise sum.
    pub fn omega2() -> Self {
        Self::new([OmegaBound::new(1.0, 1.0, 1.0, 2.0)]).expect("ω = 2 row is valid")
    }

    pub fn rows(&self) -> &[OmegaBound] {
        &self.rows
    }

    /// Parses CSV with header `a,b,c,omega`; `#` starts a comment.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut bounds = Vec::new();
        let mut header = false;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if !header {
                if fields != ["a", "b", "c", "omega"] {
                    return Err(Error::Parse {
                        line: n + 1,
                        message: format!("expected header a,b,c,omega, found {line:?}"),
                    });
                }
                header = true;
                continue;
            }
            if fields.len() != 4 {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("expected 4 fields, found {}", fields.len()),
                });
            }
            let vals = fields
                .iter()
                .map(|f| {
                    f.parse::<f64>().map_err(|e| Error::Parse {
                        line: n + 1,
                        message: format!("bad number {f:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let bound = OmegaBound::new(vals[0], vals[1], vals[2], vals[3]);
            bound.check().map_err(|e| Error::Parse {
                line: n + 1,
                message: e.to_string(),
            })?;
            bounds.push(bound);
        }
        if !header {
            return Err(Error::Parse {
                line: 1,
                message: "missing header a,b,c,omega".into(),
            });
        }
        Self::new(bounds)
    }

    pub fn from_csv_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv(&fs::read_to_string(path)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,c,omega\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.a, r.b, r.c, r.omega);
        }
        out
    }

    /// Best bound on `ω(a, b, c)` from nonnegative combinations of rows whose
    /// dimensions sum to `(a, b, c)` exactly.
    pub fn omega_upper(&self, a: f64, b: f64, c: f64) -> Result<f64> {
        self.certificate(a, b, c).map(|c| c.value)
    }

    pub fn certificate(&self, a: f64, b: f64, c: f64) -> Result<Certificate> {
        if [a, b, c].iter().any(|v| !v.is_finite() || *v < -EPS) {
            return Err(Error::InvalidArgument(format!("dimensions ({a}, {b}, {c}) must be nonnegative")));
        }
        let (a, b, c) = (a.max(0.0), b.max(0.0), c.max(0.0));
        let cost: Vec<f64> = self.rows.iter().map(|r| r.omega).collect();
        let constraints = vec![
            self.rows.iter().map(|r| r.a).collect(),
            self.rows.iter().map(|r| r.b).collect(),
            self.rows.iter().map(|r| r.c).collect(),
        ];
        let sol = simplex::minimize(&cost, &constraints, &[a, b, c])
            .ok_or_else(|| Error::InvalidArgument("ω program is infeasible".into()))?;
        let terms = sol
            .x
            .iter()
            .zip(&self.rows)
            .filter(|(l, _)| **l > EPS)
            .map(|(l, r)| (*l, *r))
            .collect();
        Ok(Certificate { value: sol.value, terms })
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(0.0..=2.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("r must lie in [0, 2], got {r}")));
    }
    Ok(())
}

/// `[max(1, r), 1 + r/2]`.
pub fn sigma_trivial(r: f64) -> Result<(f64, f64)> {
    check_r(r)?;
    Ok((r.max(1.0), 1.0 + r / 2.0))
}

/// `σ(r)` if `ω = 2`: `max(1 + r/3, r)`.
pub fn sigma_closed_form_omega2(r: f64) -> Result<f64> {
    check_r(r)?;
    Ok((1.0 + r / 3.0).max(r))
}

/// Piecewise-linear bound through `σ(0) = 1`, `σ(1) = 1 + μ/(1+μ)`,
/// `σ(1 + 1/(1+α)) = 1 + 1/(1+α)` and `σ(2) = 2`.
pub fn sigma_algebraic_with(r: f64, mu: f64, alpha: f64) -> Result<f64> {
    check_r(r)?;
    if !(0.5..=1.0).contains(&mu) || !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("need 1/2 ≤ μ ≤ 1 and 0 < α ≤ 1, got μ={mu}, α={alpha}")));
    }
    let first = 1.0 + r * mu / (1.0 + mu);
    let second = (2.0 + alpha) * mu / (1.0 + mu) + r * (1.0 - alpha * mu) / (1.0 + mu);
    Ok(first.max(second).max(r))
}

/// [`sigma_algebraic_with`] at the default constants, with `r` clamped to
/// `[0, 2]`.
pub fn sigma_algebraic(r: f64) -> f64 {
    sigma_algebraic_with(r.clamp(0.0, 2.0), MU, ALPHA).expect("default constants are in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub variant: LpVariant,
}

impl Default for SigmaOptions {
    fn default() -> Self {
        SigmaOptions {
            tol: 1e-4,
            max_iter: 60,
            variant: LpVariant::Definition,
        }
    }
}

/// Upper bound on `σ(r)` from `table`, by bisection on `σ` over the trivial
/// bracket. A probe `σ` succeeds when the table certifies
/// `ω(σ - 1, 2 - σ, 1 + r - σ) ≤ σ`; the returned value always succeeds.
pub fn sigma_numeric(r: f64, table: &OmegaTable, opts: &SigmaOptions) -> Result<f64> {
    let (mut lo, mut hi) = sigma_trivial(r)?;
    let feasible = |s: f64| -> Result<bool> {
        let first = match opts.variant {
            LpVariant::Definition => s - 1.0,
            LpVariant::Printed => 1.0 + s,
        };
        Ok(table.omega_upper(first, 2.0 - s, 1.0 + r - s)? <= s + EPS)
    };
    if !feasible(hi)? {
        return Err(Error::InvalidArgument(format!(
            "σ program is infeasible on the whole bracket [{lo}, {hi}] at r = {r}"
        )));
    }
    if feasible(lo)? {
        return Ok(lo);
    }
    let mut iter = 0;
    while hi - lo > opts.tol && iter < opts.max_iter {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iter += 1;
    }
    Ok(hi)
}

/// Solves `ω(μ, 1, 1) = 1 + 2μ` on `[0, 1]` against the table.
pub fn mu_hat(table: &OmegaTable) -> Result<f64> {
    let h = |m: f64| -> Result<f64> { Ok(table.omega_upper(m, 1.0, 1.0)? - (1.0 + 2.0 * m)) };
    let (mut lo, mut hi) = (0.0, 1.0);
    if h(hi)? > 0.0 {
        return Ok(1.0);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if h(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaMethod {
    /// Upper end of the trivial bracket.
    Trivial,
    Algebraic,
    Omega2,
    Lp,
}

impl SigmaMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SigmaMethod::Trivial => "trivial",
            SigmaMethod::Algebraic => "algebraic",
            SigmaMethod::Omega2 => "omega2",
            SigmaMethod::Lp => "lp",
        }
    }
}

impl std::str::FromStr for SigmaMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(SigmaMethod::Trivial),
            "algebraic" => Ok(SigmaMethod::Algebraic),
            "omega2" => Ok(SigmaMethod::Omega2),
            "lp" => Ok(SigmaMethod::Lp),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub r: f64,
    pub sigma: f64,
    pub method: SigmaMethod,
}

pub fn sigma(r: f64, method: SigmaMethod, table: &OmegaTable, opts: &SigmaOptions) -> Result<f64> {
    match method {
        SigmaMethod::Trivial => sigma_trivial(r).map(|(_, hi)| hi),
        SigmaMethod::Algebraic => sigma_algebraic_with(r, MU, ALPHA),
        SigmaMethod::Omega2 => sigma_closed_form_omega2(r),
        SigmaMethod::Lp => sigma_numeric(r, table, opts),
    }
}

/// `r = 0, step, 2·step, …` up to 2 inclusive.
pub fn grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 2.0) {
        return Err(Error::InvalidArgument(format!("grid step must lie in (0, 2], got {step}")));
    }
    let n = (2.0 / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| (k as f64 * step * 1e9).round() / 1e9).collect())
}

pub fn sigma_sweep(rs: &[f64], methods: &[SigmaMethod], table: &OmegaTable, opts: &SigmaOptions) -> Result<Vec<SweepRow>> {
    let mut out = Vec::with_capacity(rs.len() * methods.len());
    for &r in rs {
        for &method in methods {
            out.push(SweepRow {
                r,
                sigma: sigma(r, method, table, opts)?,
                method,
            });
        }
    }
    Ok(out)
}

/// CSV with header `r,sigma,method`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("r,sigma,method\n");
    for row in rows {
        let _ = writeln!(out, "{:.2},{:.4},{}", row.r, row.sigma, row.method.name());
    }
    out
}
