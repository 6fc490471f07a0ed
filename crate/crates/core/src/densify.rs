//! Output densification.
//!
//! [`recover`] computes `AB` from a superset `S` of its support by hashing
//! the columns of `B` into few buckets, so that the backend only ever sees
//! products with `x'·z' ≤ 4|S|`. The three recursions below compute such a
//! superset by folding rows of `A` together and recursing.

use num_bigint::{BigInt, RandBigInt};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::DenseAlgo;
use crate::error::{Error, Result};
use crate::input_sparse::{dense_product, multiply_input_sparse, InputSparseConfig, DEFAULT_BUDGET_CELLS};
use crate::isolation::{build_deterministic_family, isolated_mask, random_function, HashFamily};
use crate::matrix::{SparseMatrix, SupportSet};
use crate::naive::{check_dims, naive_multiply, RowAccumulator};
use crate::scalar::{BigInteger, CancellationFree, IntegerDomain, Ring, Semiring};
use crate::trace::{BackendCall, Candidate, Trace};

/// The product algorithm handed the compressed instances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Backend {
    Naive,
    Dense { algo: DenseAlgo, budget_cells: usize },
    InputSparse(InputSparseConfig),
}

impl Default for Backend {
    fn default() -> Self {
        Backend::InputSparse(InputSparseConfig::default())
    }
}

impl Backend {
    pub fn dense(algo: DenseAlgo) -> Self {
        Backend::Dense {
            algo,
            budget_cells: DEFAULT_BUDGET_CELLS,
        }
    }

    pub fn multiply<D: Semiring>(
        &self,
        dom: &D,
        a: &SparseMatrix<D::Elem>,
        b: &SparseMatrix<D::Elem>,
        trace: &mut Trace,
    ) -> Result<SparseMatrix<D::Elem>> {
        match self {
            Backend::Naive => naive_multiply(dom, a, b),
            Backend::Dense { algo, budget_cells } => dense_product(dom, a, b, *algo, *budget_cells, trace),
            Backend::InputSparse(cfg) => multiply_input_sparse(dom, a, b, cfg, trace),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum HashMode {
    #[default]
    Deterministic,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensifyConfig {
    pub hash: HashMode,
    pub seed: u64,
    /// Ring group width `w`; defaults to `2^⌈√log₂ m_in⌉`.
    pub group_width: Option<usize>,
    /// Ring repetitions per node; defaults to `10⌈log₂ m_in⌉`.
    pub repetitions: Option<usize>,
    /// Random hash functions per recover level; defaults to `10⌈log₂ m_in⌉`.
    pub hash_repetitions: Option<usize>,
    /// Recursion stops and multiplies naively once `A` has at most this many
    /// rows.
    pub leaf_rows: usize,
    /// Record the candidate support of every recursion node in the trace.
    pub capture_candidates: bool,
}

impl Default for DensifyConfig {
    fn default() -> Self {
        DensifyConfig {
            hash: HashMode::Deterministic,
            seed: 0,
            group_width: None,
            repetitions: None,
            hash_repetitions: None,
            leaf_rows: 1,
            capture_candidates: false,
        }
    }
}

/// `⌈log₂ n⌉`, with 0 for `n ≤ 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `10⌈log₂ m_in⌉`, at least 1.
pub fn default_repetitions(m_in: usize) -> usize {
    (10 * ceil_log2(m_in)).max(1)
}

/// `2^⌈√log₂ m_in⌉`, at least 2.
pub fn default_group_width(m_in: usize) -> usize {
    let l = (m_in.max(2) as f64).log2();
    (1usize << (l.sqrt().ceil() as u32)).max(2)
}

struct Ctx<'a> {
    backend: &'a Backend,
    cfg: &'a DensifyConfig,
    rng: ChaCha8Rng,
    trace: Trace,
}

impl<'a> Ctx<'a> {
    fn new(backend: &'a Backend, cfg: &'a DensifyConfig) -> Self {
        Ctx {
            backend,
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            trace: Trace::default(),
        }
    }
}

/// Column-sums `B` within the buckets of `h`.
fn compress<D: Semiring>(dom: &D, b: &SparseMatrix<D::Elem>, h: &[usize], buckets: usize) -> Result<SparseMatrix<D::Elem>> {
    let mut acc = RowAccumulator::new(buckets);
    let mut per_row = Vec::with_capacity(b.rows());
    for k in 0..b.rows() {
        let (js, vs) = b.row(k);
        for (&j, v) in js.iter().zip(vs) {
            acc.add(dom, h[j], v.clone())?;
        }
        per_row.push(acc.drain(dom));
    }
    Ok(SparseMatrix::from_canonical_rows(b.rows(), buckets, per_row))
}

/// `AB`, given `S ⊇ supp(AB)`.
///
/// In random mode a pair that no sampled function isolates is reported as
/// [`Error::NotIsolated`] rather than silently left at zero.
pub fn recover<D: Semiring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    s: &SupportSet,
    backend: &Backend,
    cfg: &DensifyConfig,
) -> Result<(SparseMatrix<D::Elem>, Trace)> {
    let mut ctx = Ctx::new(backend, cfg);
    let c = recover_in(dom, a, b, s, &mut ctx)?;
    Ok((c, ctx.trace))
}

fn recover_in<D: Semiring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    s: &SupportSet,
    ctx: &mut Ctx<'_>,
) -> Result<SparseMatrix<D::Elem>> {
    check_dims(a, b)?;
    if s.rows() != a.rows() || s.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "support is {}x{}, product is {}x{}",
            s.rows(),
            s.cols(),
            a.rows(),
            b.cols()
        )));
    }
    ctx.trace.recover_calls += 1;
    let (x, z) = (a.rows(), b.cols());
    let mut out: Vec<Vec<(usize, D::Elem)>> = vec![Vec::new(); x];
    if s.is_empty() {
        return Ok(SparseMatrix::from_canonical_rows(x, z, out));
    }
    let m_in = (a.nnz() + b.nnz()).max(2);

    let mut levels: Vec<Vec<usize>> = Vec::new();
    for i in 0..x {
        let d = s.degree(i);
        if d > 0 {
            let l = d.ilog2() as usize;
            if levels.len() <= l {
                levels.resize(l + 1, Vec::new());
            }
            levels[l].push(i);
        }
    }

    for (l, rows) in levels.iter().enumerate() {
        if rows.is_empty() {
            continue;
        }
        let z_l = 1usize << (l + 2);
        let a_l = a.select_rows(rows);
        let s_l = SupportSet::from_row_lists(rows.len(), z, rows.iter().map(|&i| s.row(i).to_vec()).collect());
        let mut done = vec![false; s_l.len()];
        let mut remaining = s_l.len();

        let mut apply = |h: &[usize], buckets: usize, ctx: &mut Ctx<'_>, done: &mut [bool], remaining: &mut usize| -> Result<()> {
            ctx.trace.hash_functions += 1;
            let b_c = compress(dom, b, h, buckets)?;
            ctx.trace.backend_calls.push(BackendCall {
                rows: a_l.rows(),
                inner: a_l.cols(),
                cols: buckets,
                support: s.len(),
            });
            let c_c = ctx.backend.multiply(dom, &a_l, &b_c, &mut ctx.trace)?;
            for (p, ((r, j), iso)) in s_l.pairs().zip(isolated_mask(&s_l, h)).enumerate() {
                if iso && !done[p] {
                    done[p] = true;
                    *remaining -= 1;
                    if let Some(v) = c_c.get(r, h[j]) {
                        out[rows[r]].push((j, v.clone()));
                    }
                }
            }
            Ok(())
        };

        if z <= z_l {
            // Every column gets its own bucket.
            let id = HashFamily::identity(z, z)?;
            apply(id.function(0), z, ctx, &mut done, &mut remaining)?;
        } else {
            match ctx.cfg.hash {
                HashMode::Deterministic => {
                    let fam = build_deterministic_family(&s_l, 1 << (l + 1))?;
                    for f in fam.functions() {
                        apply(f, fam.buckets(), ctx, &mut done, &mut remaining)?;
                    }
                }
                HashMode::Random => {
                    let count = ctx.cfg.hash_repetitions.unwrap_or_else(|| default_repetitions(m_in));
                    for _ in 0..count {
                        if remaining == 0 {
                            break;
                        }
                        let h = random_function(z, z_l, &mut ctx.rng);
                        apply(&h, z_l, ctx, &mut done, &mut remaining)?;
                    }
                }
            }
        }
        if remaining > 0 {
            let p = done.iter().position(|&d| !d).unwrap_or(0);
            let (r, j) = s_l.pairs().nth(p).unwrap_or((0, 0));
            return Err(Error::NotIsolated { row: rows[r], col: j });
        }
    }
    for row in &mut out {
        row.sort_unstable_by_key(|&(j, _)| j);
    }
    Ok(SparseMatrix::from_canonical_rows(x, z, out))
}

/// `{(g·w + t, j) : (g, j) ∈ supp(C'), t < w}`, clipped to `x` rows.
fn expand_support<E>(c: &SparseMatrix<E>, w: usize, x: usize) -> SupportSet
where
    E: Clone + PartialEq,
{
    let mut lists = vec![Vec::new(); x];
    for g in 0..c.rows() {
        let (js, _) = c.row(g);
        for t in 0..w {
            let i = g * w + t;
            if i < x {
                lists[i].extend_from_slice(js);
            }
        }
    }
    SupportSet::from_row_lists(x, c.cols(), lists)
}

/// Rows `g·w + t` for `t` in `subset`, weighted by `coef(t)` and summed into
/// row `g`.
fn fold_rows<D: Semiring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    w: usize,
    subset: &[usize],
    coef: impl Fn(usize) -> Option<D::Elem>,
) -> Result<SparseMatrix<D::Elem>> {
    let groups = a.rows().div_ceil(w);
    let mut acc = RowAccumulator::new(a.cols());
    let mut per_row = Vec::with_capacity(groups);
    for g in 0..groups {
        for &t in subset {
            let i = g * w + t;
            if i >= a.rows() {
                continue;
            }
            let c = coef(t);
            let (ks, vs) = a.row(i);
            for (&k, v) in ks.iter().zip(vs) {
                let term = match &c {
                    Some(c) => dom.mul(c, v)?,
                    None => v.clone(),
                };
                acc.add(dom, k, term)?;
            }
        }
        per_row.push(acc.drain(dom));
    }
    Ok(SparseMatrix::from_canonical_rows(groups, a.cols(), per_row))
}

fn record_candidate(ctx: &mut Ctx<'_>, depth: usize, s: &SupportSet) {
    if ctx.cfg.capture_candidates {
        ctx.trace.candidates.push(Candidate {
            depth,
            support: s.clone(),
        });
    }
}

/// Exact product over a cancellation-free semiring, deterministic when the
/// hash mode is.
pub fn multiply_nonnegative<D: CancellationFree>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    backend: &Backend,
    cfg: &DensifyConfig,
) -> Result<(SparseMatrix<D::Elem>, Trace)> {
    check_dims(a, b)?;
    let mut ctx = Ctx::new(backend, cfg);
    let c = nonneg_node(dom, a, b, 1, &mut ctx)?;
    Ok((c, ctx.trace))
}

fn nonneg_node<D: Semiring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    depth: usize,
    ctx: &mut Ctx<'_>,
) -> Result<SparseMatrix<D::Elem>> {
    ctx.trace.enter(depth);
    if a.rows() <= ctx.cfg.leaf_rows.max(1) {
        return naive_multiply(dom, a, b);
    }
    let folded = fold_rows(dom, a, 2, &[0, 1], |_| None)?;
    let c = nonneg_node(dom, &folded, b, depth + 1, ctx)?;
    let s = expand_support(&c, 2, a.rows());
    record_candidate(ctx, depth, &s);
    recover_in(dom, a, b, &s, ctx)
}

/// Exact product over an integer domain with high probability. The support
/// recursion folds row pairs as `A[2i] + r·A[2i+1]` in unbounded precision,
/// with a fresh `r ∈ [1, m_in^10]` per level.
pub fn multiply_integer<D: IntegerDomain>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    backend: &Backend,
    cfg: &DensifyConfig,
) -> Result<(SparseMatrix<D::Elem>, Trace)> {
    check_dims(a, b)?;
    let mut ctx = Ctx::new(backend, cfg);
    ctx.trace.enter(1);
    if a.rows() <= cfg.leaf_rows.max(1) {
        return Ok((naive_multiply(dom, a, b)?, ctx.trace));
    }
    let big = BigInteger;
    let m_in = (a.nnz() + b.nnz()).max(2);
    let r_max = BigInt::from(m_in).pow(10);
    let ab = a.convert(&big, |v| Ok(dom.to_bigint(v)))?;
    let bb = b.convert(&big, |v| Ok(dom.to_bigint(v)))?;
    let r = ctx.rng.gen_bigint_range(&BigInt::one(), &(r_max.clone() + 1));
    let folded = fold_rows(&big, &ab, 2, &[0, 1], |t| (t == 1).then(|| r.clone()))?;
    let c = integer_node(&big, &folded, &bb, &r_max, 2, &mut ctx)?;
    let s = expand_support(&c, 2, a.rows());
    record_candidate(&mut ctx, 1, &s);
    let out = recover_in(dom, a, b, &s, &mut ctx)?;
    Ok((out, ctx.trace))
}

fn integer_node(
    big: &BigInteger,
    a: &SparseMatrix<BigInt>,
    b: &SparseMatrix<BigInt>,
    r_max: &BigInt,
    depth: usize,
    ctx: &mut Ctx<'_>,
) -> Result<SparseMatrix<BigInt>> {
    ctx.trace.enter(depth);
    if a.rows() <= ctx.cfg.leaf_rows.max(1) {
        return naive_multiply(big, a, b);
    }
    let r = ctx.rng.gen_bigint_range(&BigInt::one(), &(r_max.clone() + 1));
    let folded = fold_rows(big, a, 2, &[0, 1], |t| (t == 1).then(|| r.clone()))?;
    let c = integer_node(big, &folded, b, r_max, depth + 1, ctx)?;
    let s = expand_support(&c, 2, a.rows());
    record_candidate(ctx, depth, &s);
    recover_in(big, a, b, &s, ctx)
}

/// Exact product over any ring with high probability, by random subset sums
/// of `w` consecutive rows, repeated `L` times per node.
pub fn multiply_ring<D: Ring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    backend: &Backend,
    cfg: &DensifyConfig,
) -> Result<(SparseMatrix<D::Elem>, Trace)> {
    check_dims(a, b)?;
    let m_in = a.nnz() + b.nnz();
    let w = cfg.group_width.unwrap_or_else(|| default_group_width(m_in));
    if w < 2 {
        return Err(Error::InvalidArgument(format!("group width must be at least 2, got {w}")));
    }
    if cfg.repetitions == Some(0) {
        return Err(Error::InvalidArgument("need at least one repetition".into()));
    }
    let mut ctx = Ctx::new(backend, cfg);
    let c = ring_node(dom, a, b, w, 1, &mut ctx)?;
    Ok((c, ctx.trace))
}

fn ring_node<D: Semiring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    w: usize,
    depth: usize,
    ctx: &mut Ctx<'_>,
) -> Result<SparseMatrix<D::Elem>> {
    ctx.trace.enter(depth);
    if a.rows() <= ctx.cfg.leaf_rows.max(1) {
        return naive_multiply(dom, a, b);
    }
    let reps = ctx.cfg.repetitions.unwrap_or_else(|| default_repetitions(a.nnz() + b.nnz()));
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); a.rows()];
    for _ in 0..reps {
        let subset: Vec<usize> = (0..w).filter(|_| ctx.rng.gen::<bool>()).collect();
        let folded = fold_rows(dom, a, w, &subset, |_| None)?;
        let c = ring_node(dom, &folded, b, w, depth + 1, ctx)?;
        for g in 0..c.rows() {
            let (js, _) = c.row(g);
            if js.is_empty() {
                continue;
            }
            for t in 0..w {
                let i = g * w + t;
                if i < a.rows() {
                    lists[i].extend_from_slice(js);
                }
            }
        }
    }
    let s = SupportSet::from_row_lists(a.rows(), b.cols(), lists);
    record_candidate(ctx, depth, &s);
    recover_in(dom, a, b, &s, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Boolean, Integer, NonNegative, ZMod};

    fn random_matrix<D: Semiring>(
        dom: &D,
        rng: &mut ChaCha8Rng,
        r: usize,
        c: usize,
        p: f64,
        gen: impl Fn(&mut ChaCha8Rng) -> i64,
    ) -> SparseMatrix<D::Elem> {
        let mut ts = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if rng.gen_bool(p) {
                    let v = gen(rng);
                    ts.push((i, j, dom.from_i64(v).unwrap()));
                }
            }
        }
        SparseMatrix::from_triplets(dom, r, c, ts).unwrap()
    }

    fn backends() -> Vec<Backend> {
        vec![
            Backend::Naive,
            Backend::dense(DenseAlgo::Strassen { cutoff: 2 }),
            Backend::default(),
        ]
    }

    #[test]
    fn log_helpers() {
        assert_eq!((ceil_log2(0), ceil_log2(1), ceil_log2(2), ceil_log2(3), ceil_log2(1024), ceil_log2(1025)), (0, 0, 1, 2, 10, 11));
        assert_eq!(default_repetitions(1), 1);
        assert_eq!(default_repetitions(1000), 100);
        assert_eq!(default_group_width(1), 2);
        // log₂ 1000 ≈ 9.97, √ ≈ 3.16, rounded up to 4.
        assert_eq!(default_group_width(1000), 16);
    }

    #[test]
    fn recover_identity() {
        let id = SparseMatrix::identity(&Integer, 2);
        let s = SupportSet::from_pairs(2, 2, vec![(0, 0), (1, 1)]).unwrap();
        let (c, _) = recover(&Integer, &id, &id, &s, &Backend::Naive, &DensifyConfig::default()).unwrap();
        assert_eq!(c, id);
    }

    #[test]
    fn recover_random_32_with_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for hash in [HashMode::Deterministic, HashMode::Random] {
            for seed in 0..20 {
                let a = random_matrix(&Integer, &mut rng, 32, 32, 0.1, |r| r.gen_range(-3..=3));
                let b = random_matrix(&Integer, &mut rng, 32, 32, 0.1, |r| r.gen_range(-3..=3));
                let want = naive_multiply(&Integer, &a, &b).unwrap();
                let cfg = DensifyConfig {
                    hash,
                    seed,
                    ..Default::default()
                };
                for backend in backends() {
                    let (c, t) = recover(&Integer, &a, &b, &want.support(), &backend, &cfg).unwrap();
                    assert_eq!(c, want);
                    assert!(t.caps_within_bound());
                }
            }
        }
    }

    #[test]
    fn recover_with_padded_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let a = random_matrix(&Integer, &mut rng, 40, 30, 0.05, |r| r.gen_range(1..=4));
            let b = random_matrix(&Integer, &mut rng, 30, 70, 0.05, |r| r.gen_range(-4..=4));
            let want = naive_multiply(&Integer, &a, &b).unwrap();
            let mut pairs: Vec<_> = want.support().pairs().collect();
            let extra = 2 * pairs.len() + 5;
            pairs.extend((0..extra).map(|_| (rng.gen_range(0..40), rng.gen_range(0..70))));
            let s = SupportSet::from_pairs(40, 70, pairs).unwrap();
            for hash in [HashMode::Deterministic, HashMode::Random] {
                let cfg = DensifyConfig { hash, ..Default::default() };
                let (c, t) = recover(&Integer, &a, &b, &s, &Backend::Naive, &cfg).unwrap();
                assert_eq!(c, want);
                assert!(t.caps_within_bound());
            }
        }
    }

    #[test]
    fn recover_random_reports_unisolated_pairs() {
        // Rows of degree 3 hashed into 8 buckets by a single function: some
        // seeds must leave a pair unisolated, and those must error out.
        let z = 64;
        let a = SparseMatrix::from_triplets(&Integer, 4, 4, (0..4).map(|i| (i, i, 1))).unwrap();
        let b = SparseMatrix::from_triplets(
            &Integer,
            4,
            z,
            (0..4).flat_map(|i| (0..3).map(move |t| (i, 10 * i + t, 1 + t as i64))),
        )
        .unwrap();
        let want = naive_multiply(&Integer, &a, &b).unwrap();
        let s = SupportSet::from_pairs(4, z, (0..4).flat_map(|i| (0..3).map(move |t| (i, 10 * i + t)))).unwrap();
        let mut failures = 0;
        for seed in 0..200 {
            let cfg = DensifyConfig {
                hash: HashMode::Random,
                hash_repetitions: Some(1),
                seed,
                ..Default::default()
            };
            match recover(&Integer, &a, &b, &s, &Backend::Naive, &cfg) {
                Ok((c, _)) => {
                    for (i, j) in s.pairs() {
                        assert_eq!(c.get(i, j), want.get(i, j));
                    }
                }
                Err(Error::NotIsolated { .. }) => failures += 1,
                Err(e) => panic!("{e}"),
            }
        }
        assert!(failures > 0);
    }

    #[test]
    fn nonnegative_examples() {
        let n = 12;
        let perm = SparseMatrix::from_triplets(&Boolean, n, n, (0..n).map(|i| (i, (i * 5 + 3) % n, true))).unwrap();
        let (c, _) = multiply_nonnegative(&Boolean, &perm, &perm, &Backend::Naive, &DensifyConfig::default()).unwrap();
        assert_eq!(c, naive_multiply(&Boolean, &perm, &perm).unwrap());

        let col = SparseMatrix::from_triplets(&NonNegative, n, 1, (0..n).map(|i| (i, 0, 1))).unwrap();
        let row = col.transpose();
        let (c, _) = multiply_nonnegative(&NonNegative, &col, &row, &Backend::default(), &DensifyConfig::default()).unwrap();
        assert_eq!(c.nnz(), n * n);
    }

    #[test]
    fn nonnegative_random_with_candidates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for it in 0..300 {
            let (x, y, z) = (rng.gen_range(1..=100), rng.gen_range(1..=100), rng.gen_range(1..=100));
            let p = [0.01, 0.03, 0.08][it % 3];
            let a = random_matrix(&NonNegative, &mut rng, x, y, p, |r| r.gen_range(1..=3));
            let b = random_matrix(&NonNegative, &mut rng, y, z, p, |r| r.gen_range(1..=3));
            let want = naive_multiply(&NonNegative, &a, &b).unwrap();
            let cfg = DensifyConfig {
                capture_candidates: true,
                ..Default::default()
            };
            let backend = backends()[it % 3];
            let (c, t) = multiply_nonnegative(&NonNegative, &a, &b, &backend, &cfg).unwrap();
            assert_eq!(c, want);
            assert!(t.caps_within_bound());
            assert!(t.max_depth <= ceil_log2(x) + 1);
            // Rebuild each level's folded matrix independently.
            let mut level = vec![a.clone()];
            while level.last().unwrap().rows() > 1 {
                let prev = level.last().unwrap();
                let ts = prev.entries().map(|(i, k, v)| (i / 2, k, *v));
                level.push(SparseMatrix::from_triplets(&NonNegative, prev.rows().div_ceil(2), y, ts).unwrap());
            }
            for cand in &t.candidates {
                let exact = naive_multiply(&NonNegative, &level[cand.depth - 1], &b).unwrap().support();
                assert!(exact.is_subset(&cand.support));
                assert!(cand.support.len() <= 2 * exact.len());
            }
        }
    }

    #[test]
    fn integer_minimal_cancellation() {
        let a = SparseMatrix::from_triplets(&Integer, 2, 1, vec![(0, 0, 1), (1, 0, -1)]).unwrap();
        let b = SparseMatrix::from_triplets(&Integer, 1, 1, vec![(0, 0, 5)]).unwrap();
        for seed in 0..50 {
            let cfg = DensifyConfig { seed, ..Default::default() };
            let (c, _) = multiply_integer(&Integer, &a, &b, &Backend::Naive, &cfg).unwrap();
            assert_eq!(c.to_triplets(), vec![(0, 0, 5), (1, 0, -5)]);
        }
    }

    #[test]
    fn integer_random_signed() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for seed in 0..100 {
            let (x, y, z) = (rng.gen_range(1..=40), rng.gen_range(1..=40), rng.gen_range(1..=40));
            let a = random_matrix(&Integer, &mut rng, x, y, 0.1, |r| r.gen_range(-5..=5));
            let b = random_matrix(&Integer, &mut rng, y, z, 0.1, |r| r.gen_range(-5..=5));
            let cfg = DensifyConfig {
                seed,
                hash: if seed % 2 == 0 { HashMode::Deterministic } else { HashMode::Random },
                ..Default::default()
            };
            let (c, t) = multiply_integer(&Integer, &a, &b, &backends()[seed as usize % 3], &cfg).unwrap();
            assert_eq!(c, naive_multiply(&Integer, &a, &b).unwrap());
            assert!(t.max_depth <= ceil_log2(x) + 1);
        }
    }

    #[test]
    fn ring_gf2_identity_and_random() {
        let gf2 = ZMod::gf2();
        let id = SparseMatrix::identity(&gf2, 16);
        let (c, _) = multiply_ring(&gf2, &id, &id, &Backend::Naive, &DensifyConfig::default()).unwrap();
        assert_eq!(c, id);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..100 {
            let a = random_matrix(&gf2, &mut rng, 64, 64, 0.03, |_| 1);
            let b = random_matrix(&gf2, &mut rng, 64, 64, 0.03, |_| 1);
            let cfg = DensifyConfig {
                seed,
                leaf_rows: 4,
                ..Default::default()
            };
            let (c, _) = multiply_ring(&gf2, &a, &b, &Backend::default(), &cfg).unwrap();
            assert_eq!(c, naive_multiply(&gf2, &a, &b).unwrap());
        }
    }

    #[test]
    fn ring_z4_and_node_bound() {
        let z4 = ZMod::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for seed in 0..20 {
            let (x, y, z) = (rng.gen_range(2..=24), rng.gen_range(1..=24), rng.gen_range(1..=24));
            let a = random_matrix(&z4, &mut rng, x, y, 0.15, |r| r.gen_range(1..4));
            let b = random_matrix(&z4, &mut rng, y, z, 0.15, |r| r.gen_range(1..4));
            let (w, l) = (4, 12);
            let cfg = DensifyConfig {
                seed,
                group_width: Some(w),
                repetitions: Some(l),
                ..Default::default()
            };
            let (c, t) = multiply_ring(&z4, &a, &b, &Backend::Naive, &cfg).unwrap();
            assert_eq!(c, naive_multiply(&z4, &a, &b).unwrap());
            let mut depth = 0;
            while w.pow(depth) < x {
                depth += 1;
            }
            assert!(t.nodes <= l.pow(depth + 1), "{} nodes", t.nodes);
        }
    }

    #[test]
    fn ring_rejects_bad_config() {
        let id = SparseMatrix::identity(&Integer, 3);
        let cfg = DensifyConfig {
            group_width: Some(1),
            ..Default::default()
        };
        assert!(multiply_ring(&Integer, &id, &id, &Backend::Naive, &cfg).is_err());
    }

    #[test]
    fn subset_sum_zero_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trials = 10_000;
        let bound = 0.5 + 3.0 * (0.25f64 / trials as f64).sqrt();
        for modulus in [2u64, 4] {
            let ring = ZMod::new(modulus).unwrap();
            for _ in 0..20 {
                let w = rng.gen_range(1..=8);
                let mut a: Vec<u64> = (0..w).map(|_| rng.gen_range(0..modulus)).collect();
                if a.iter().all(|&v| v == 0) {
                    a[0] = 1;
                }
                let zeros = (0..trials)
                    .filter(|_| {
                        let mut s = 0;
                        for v in &a {
                            if rng.gen::<bool>() {
                                s = ring.add(&s, v).unwrap();
                            }
                        }
                        s == 0
                    })
                    .count();
                assert!((zeros as f64 / trials as f64) <= bound, "{a:?}: {zeros}");
            }
        }
    }

    #[test]
    fn modes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for seed in 0..30 {
            let a = random_matrix(&NonNegative, &mut rng, 30, 30, 0.08, |r| r.gen_range(1..=2));
            let b = random_matrix(&NonNegative, &mut rng, 30, 30, 0.08, |r| r.gen_range(1..=2));
            let det = multiply_nonnegative(&NonNegative, &a, &b, &Backend::Naive, &DensifyConfig::default()).unwrap().0;
            let cfg = DensifyConfig {
                hash: HashMode::Random,
                seed,
                ..Default::default()
            };
            let rnd = multiply_nonnegative(&NonNegative, &a, &b, &Backend::Naive, &cfg).unwrap().0;
            assert_eq!(det, rnd);
            assert_eq!(det, naive_multiply(&NonNegative, &a, &b).unwrap());
        }
    }
}
