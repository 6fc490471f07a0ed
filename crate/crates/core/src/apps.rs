//! Reductions to sparse matrix multiplication: all-edges triangle detection
//! and counting, the integer-entry reductions, product correction and
//! transitive closure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::generate;
use crate::matrix::SparseMatrix;
use crate::pipeline::{multiply_sparse, Routed, SparseOptions};
use crate::scalar::{BigInteger, Boolean, NonNegative, Ring};
use crate::trace::Trace;

/// A tripartite graph on parts `X`, `Y`, `Z`, each numbered from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripartiteGraph {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub xy: Vec<(usize, usize)>,
    pub yz: Vec<(usize, usize)>,
    pub xz: Vec<(usize, usize)>,
}

fn canonical_edges(name: &str, mut e: Vec<(usize, usize)>, n1: usize, n2: usize) -> Result<Vec<(usize, usize)>> {
    e.sort_unstable();
    if let Some(w) = e.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument(format!("duplicate {name} edge {:?}", w[0])));
    }
    if let Some(&(u, v)) = e.iter().find(|&&(u, v)| u >= n1 || v >= n2) {
        return Err(Error::InvalidArgument(format!("{name} edge ({u}, {v}) outside {n1}x{n2}")));
    }
    Ok(e)
}

impl TripartiteGraph {
    pub fn new(
        (nx, ny, nz): (usize, usize, usize),
        xy: Vec<(usize, usize)>,
        yz: Vec<(usize, usize)>,
        xz: Vec<(usize, usize)>,
    ) -> Result<Self> {
        Ok(TripartiteGraph {
            nx,
            ny,
            nz,
            xy: canonical_edges("X-Y", xy, nx, ny)?,
            yz: canonical_edges("Y-Z", yz, ny, nz)?,
            xz: canonical_edges("X-Z", xz, nx, nz)?,
        })
    }

    /// Each `X×Y`, `Y×Z`, `X×Z` pair is an edge with probability `p`.
    pub fn random((nx, ny, nz): (usize, usize, usize), p: f64, seed: u64) -> Self {
        let mut rng = generate::rng(seed);
        let mut pick = |n1: usize, n2: usize| -> Vec<(usize, usize)> {
            (0..n1)
                .flat_map(|u| (0..n2).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(p))
                .collect()
        };
        let xy = pick(nx, ny);
        let yz = pick(ny, nz);
        let xz = pick(nx, nz);
        TripartiteGraph { nx, ny, nz, xy, yz, xz }
    }

    /// The unbalanced regime with one sparse edge part: `|X| = ⌈n^μ⌉`,
    /// `|Y| = |Z| = n`, about `n^(1+μ)` edges in `Y×Z`, `X×Z` complete and
    /// `X×Y` at density 1/2.
    pub fn psaet(n: usize, seed: u64) -> Self {
        let mut rng = generate::rng(seed);
        let nx = (n as f64).powf(crate::exponent::MU).ceil() as usize;
        let p_yz = ((n as f64).powf(1.0 + crate::exponent::MU) / (n * n).max(1) as f64).min(1.0);
        let xy = (0..nx).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.5)).collect();
        let yz = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p_yz)).collect();
        let xz = (0..nx).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
        TripartiteGraph {
            nx,
            ny: n,
            nz: n,
            xy,
            yz,
            xz,
        }
    }

    /// Parses lines `part1 part2 u v` with parts among `X`, `Y`, `Z`, plus an
    /// optional `sizes nx ny nz` line; otherwise part sizes are inferred.
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut xy, mut yz, mut xz) = (Vec::new(), Vec::new(), Vec::new());
        let mut sizes: Option<(usize, usize, usize)> = None;
        let mut seen = [0usize; 3];
        let num = |s: &str, line: usize| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad index {s:?}"),
            })
        };
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let f: Vec<&str> = body.split_whitespace().collect();
            if f[0] == "sizes" {
                if f.len() != 4 {
                    return Err(Error::Parse {
                        line,
                        message: "expected `sizes nx ny nz`".into(),
                    });
                }
                sizes = Some((num(f[1], line)?, num(f[2], line)?, num(f[3], line)?));
                continue;
            }
            if f.len() != 4 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `part1 part2 u v`, found {body:?}"),
                });
            }
            let (u, v) = (num(f[2], line)?, num(f[3], line)?);
            let (p1, p2) = (f[0].to_ascii_uppercase(), f[1].to_ascii_uppercase());
            let (list, a, b) = match (p1.as_str(), p2.as_str()) {
                ("X", "Y") => (&mut xy, 0, 1),
                ("Y", "Z") => (&mut yz, 1, 2),
                ("X", "Z") => (&mut xz, 0, 2),
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown part pair {} {}", f[0], f[1]),
                    })
                }
            };
            list.push((u, v));
            seen[a] = seen[a].max(u + 1);
            seen[b] = seen[b].max(v + 1);
        }
        let sizes = sizes.unwrap_or((seen[0], seen[1], seen[2]));
        Self::new(sizes, xy, yz, xz)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("sizes {} {} {}\n", self.nx, self.ny, self.nz);
        for (tag, list) in [("X Y", &self.xy), ("Y Z", &self.yz), ("X Z", &self.xz)] {
            for (u, v) in list {
                let _ = writeln!(out, "{tag} {u} {v}");
            }
        }
        out
    }

    fn biadjacency(&self) -> (SparseMatrix<bool>, SparseMatrix<bool>) {
        let a = SparseMatrix::from_triplets(&Boolean, self.nx, self.ny, self.xy.iter().map(|&(u, v)| (u, v, true))).unwrap();
        let b = SparseMatrix::from_triplets(&Boolean, self.ny, self.nz, self.yz.iter().map(|&(u, v)| (u, v, true))).unwrap();
        (a, b)
    }
}

/// `X×Z` edges that lie in a triangle, via one Boolean product.
pub fn ae_triangle_via_mm(g: &TripartiteGraph, opts: &SparseOptions) -> Result<(Vec<(usize, usize)>, Trace)> {
    let (a, b) = g.biadjacency();
    let (c, trace) = multiply_sparse(&Boolean, &a, &b, opts)?;
    let edges = g.xz.iter().copied().filter(|&(i, j)| c.get(i, j).is_some()).collect();
    Ok((edges, trace))
}

/// Number of triangles through each `X×Z` edge, via one product of counts.
pub fn count_triangles_via_mm(g: &TripartiteGraph, opts: &SparseOptions) -> Result<(BTreeMap<(usize, usize), u64>, Trace)> {
    let (a, b) = g.biadjacency();
    let ac = a.convert(&NonNegative, |_| Ok(1u64))?;
    let bc = b.convert(&NonNegative, |_| Ok(1u64))?;
    let (c, trace) = multiply_sparse(&NonNegative, &ac, &bc, opts)?;
    let counts = g.xz.iter().map(|&(i, j)| ((i, j), c.get(i, j).copied().unwrap_or(0))).collect();
    Ok((counts, trace))
}

/// Exhaustive count over `X×Y×Z`.
pub fn count_triangles_brute(g: &TripartiteGraph) -> BTreeMap<(usize, usize), u64> {
    let xy: BTreeSet<_> = g.xy.iter().copied().collect();
    let yz: BTreeSet<_> = g.yz.iter().copied().collect();
    g.xz.iter()
        .map(|&(i, j)| {
            let n = (0..g.ny).filter(|&k| xy.contains(&(i, k)) && yz.contains(&(k, j))).count();
            ((i, j), n as u64)
        })
        .collect()
}

pub fn ae_triangle_brute(g: &TripartiteGraph) -> Vec<(usize, usize)> {
    count_triangles_brute(g).into_iter().filter(|&(_, n)| n > 0).map(|(e, _)| e).collect()
}

/// `{0,1}` layers `M_ℓ` with `M = Σ 2^ℓ M_ℓ`, lowest bit first.
pub fn bit_layers(m: &SparseMatrix<u64>) -> Vec<SparseMatrix<u64>> {
    let top = m.entries().map(|(_, _, v)| 64 - v.leading_zeros()).max().unwrap_or(0);
    (0..top)
        .map(|l| {
            let layer = m.convert(&NonNegative, |v| Ok((v >> l) & 1)).unwrap();
            assert!(layer.entries().all(|(i, j, _)| m.get(i, j).is_some()), "layer support escapes the matrix");
            layer
        })
        .collect()
}

/// Product of nonnegative matrices from products of their bit layers:
/// `AB = Σ 2^(ℓ₁+ℓ₂) A_ℓ₁ B_ℓ₂`. `inner` only ever sees `{0,1}` matrices.
pub fn bit_split_multiply<F>(a: &SparseMatrix<u64>, b: &SparseMatrix<u64>, mut inner: F) -> Result<SparseMatrix<BigInt>>
where
    F: FnMut(&SparseMatrix<u64>, &SparseMatrix<u64>) -> Result<SparseMatrix<u64>>,
{
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, B is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let big = BigInteger;
    let mut acc = SparseMatrix::<BigInt>::zeros(a.rows(), b.cols());
    let (la, lb) = (bit_layers(a), bit_layers(b));
    for (l1, x) in la.iter().enumerate() {
        for (l2, y) in lb.iter().enumerate() {
            let p = inner(x, y)?;
            let scaled = p.convert(&big, |v| Ok(BigInt::from(*v) << (l1 + l2)))?;
            acc = acc.add(&big, &scaled)?;
        }
    }
    Ok(acc)
}

/// Product of signed matrices from four nonnegative products. With
/// `Δ = max |entry|`, `A₀ = A + Δ` on `supp(A)` and `A₁ = Δ` on `supp(A)`,
/// so `A = A₀ - A₁` and `AB = A₀B₀ - A₀B₁ - A₁B₀ + A₁B₁`.
pub fn shift_multiply<F>(a: &SparseMatrix<i64>, b: &SparseMatrix<i64>, mut inner: F) -> Result<SparseMatrix<BigInt>>
where
    F: FnMut(&SparseMatrix<u64>, &SparseMatrix<u64>) -> Result<SparseMatrix<BigInt>>,
{
    let delta = a.entries().chain(b.entries()).map(|(_, _, v)| v.unsigned_abs()).max().unwrap_or(0);
    let nn = NonNegative;
    let shift = |m: &SparseMatrix<i64>| -> Result<(SparseMatrix<u64>, SparseMatrix<u64>)> {
        let m0 = m.convert(&nn, |v| {
            // v + Δ with |v| ≤ Δ, computed without leaving u64.
            if *v >= 0 {
                delta.checked_add(*v as u64).ok_or_else(|| Error::Overflow("nonneg".into()))
            } else {
                Ok(delta - v.unsigned_abs())
            }
        })?;
        let m1 = m.convert(&nn, |_| Ok(delta))?;
        Ok((m0, m1))
    };
    let (a0, a1) = shift(a)?;
    let (b0, b1) = shift(b)?;
    let big = BigInteger;
    let neg = |m: SparseMatrix<BigInt>| m.convert(&big, |v| Ok(-v.clone()));
    let mut c = inner(&a0, &b0)?;
    c = c.add(&big, &neg(inner(&a0, &b1)?)?)?;
    c = c.add(&big, &neg(inner(&a1, &b0)?)?)?;
    c.add(&big, &inner(&a1, &b1)?)
}

/// Signed product through the whole reduction chain: shift to nonnegative
/// entries, split into bit layers, multiply `{0,1}` layers with the
/// nonnegative pipeline.
pub fn multiply_signed_via_reductions(a: &SparseMatrix<i64>, b: &SparseMatrix<i64>, opts: &SparseOptions) -> Result<SparseMatrix<BigInt>> {
    shift_multiply(a, b, |x, y| bit_split_multiply(x, y, |p, q| multiply_sparse(&NonNegative, p, q, opts).map(|(c, _)| c)))
}

/// Corrected product and the correction `E = AB - C̃` it applied.
#[derive(Clone, Debug, PartialEq)]
pub struct Correction<E> {
    pub product: SparseMatrix<E>,
    pub error: SparseMatrix<E>,
    pub trace: Trace,
}

/// Recovers `AB` from an approximation `C̃` with few wrong entries, through
/// one product of `A' = (A | -I)` and `B' = (B ; C̃)`.
pub fn correct_product<D: Routed + Ring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    c_tilde: &SparseMatrix<D::Elem>,
    opts: &SparseOptions,
) -> Result<Correction<D::Elem>> {
    let (x, y, z) = (a.rows(), a.cols(), b.cols());
    if b.rows() != y || c_tilde.rows() != x || c_tilde.cols() != z {
        return Err(Error::DimensionMismatch(format!(
            "A {}x{}, B {}x{}, C̃ {}x{}",
            x,
            y,
            b.rows(),
            z,
            c_tilde.rows(),
            c_tilde.cols()
        )));
    }
    let minus_one = dom.neg(&dom.one())?;
    let a_ext = SparseMatrix::from_triplets(
        dom,
        x,
        y + x,
        a.to_triplets().into_iter().chain((0..x).map(|i| (i, y + i, minus_one.clone()))),
    )?;
    let b_ext = SparseMatrix::from_triplets(
        dom,
        y + x,
        z,
        b.to_triplets()
            .into_iter()
            .chain(c_tilde.entries().map(|(i, j, v)| (y + i, j, v.clone()))),
    )?;
    let (error, trace) = multiply_sparse(dom, &a_ext, &b_ext, opts)?;
    let product = c_tilde.add(dom, &error)?;
    Ok(Correction { product, error, trace })
}

/// A directed graph on nodes `0..n` with sorted, distinct arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        Ok(Digraph {
            n,
            arcs: canonical_edges("arc", arcs, n, n)?,
        })
    }

    /// Each ordered pair, self-loops included, is an arc with probability `p`.
    pub fn random(n: usize, p: f64, seed: u64) -> Self {
        let mut rng = generate::rng(seed);
        let arcs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
        Digraph { n, arcs }
    }

    /// Lines `u v`; `#` starts a comment. An optional `nodes n` line fixes
    /// the node count, which is otherwise inferred.
    pub fn parse(text: &str) -> Result<Self> {
        let mut arcs = Vec::new();
        let mut n: Option<usize> = None;
        let mut seen = 0;
        for (k, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let f: Vec<&str> = body.split_whitespace().collect();
            let bad = || Error::Parse {
                line: k + 1,
                message: format!("expected `u v`, found {body:?}"),
            };
            if f.len() == 2 && f[0] == "nodes" {
                n = Some(f[1].parse().map_err(|_| bad())?);
                continue;
            }
            if f.len() != 2 {
                return Err(bad());
            }
            let (u, v): (usize, usize) = (f[0].parse().map_err(|_| bad())?, f[1].parse().map_err(|_| bad())?);
            seen = seen.max(u + 1).max(v + 1);
            arcs.push((u, v));
        }
        Self::new(n.unwrap_or(seen), arcs)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("nodes {}\n", self.n);
        for (u, v) in &self.arcs {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    fn adjacency(&self) -> SparseMatrix<bool> {
        SparseMatrix::from_triplets(&Boolean, self.n, self.n, self.arcs.iter().map(|&(u, v)| (u, v, true))).unwrap()
    }
}

/// Closure statistics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ClosureRun {
    pub closure: Option<Digraph>,
    /// Squarings performed, the fixpoint check included.
    pub rounds: usize,
    pub traces: Vec<Trace>,
}

/// Arcs `(u, v)` for every nonempty path from `u` to `v`, so `(u, u)`
/// appears exactly when `u` lies on a cycle. Squares `I + adj` until it
/// stops changing, then multiplies once by `adj`.
pub fn transitive_closure(g: &Digraph, opts: &SparseOptions) -> Result<ClosureRun> {
    let adj = g.adjacency();
    let mut reach = adj.add(&Boolean, &SparseMatrix::identity(&Boolean, g.n))?;
    let mut run = ClosureRun::default();
    loop {
        let (next, trace) = multiply_sparse(&Boolean, &reach, &reach, opts)?;
        run.rounds += 1;
        run.traces.push(trace);
        if next == reach {
            break;
        }
        reach = next;
    }
    let (plus, trace) = multiply_sparse(&Boolean, &adj, &reach, opts)?;
    run.traces.push(trace);
    run.closure = Some(Digraph {
        n: g.n,
        arcs: plus.entries().map(|(i, j, _)| (i, j)).collect(),
    });
    Ok(run)
}

/// Floyd–Warshall over nonempty paths.
pub fn closure_brute(g: &Digraph) -> Digraph {
    let n = g.n;
    let mut r = vec![vec![false; n]; n];
    for &(u, v) in &g.arcs {
        r[u][v] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    let arcs = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| r[i][j]).collect();
    Digraph { n, arcs }
}

/// Adds `delta` to `count` distinct random entries of `c`.
pub fn corrupt<D: Ring, R: Rng>(dom: &D, c: &SparseMatrix<D::Elem>, count: usize, delta: &D::Elem, rng: &mut R) -> Result<SparseMatrix<D::Elem>> {
    let cells = c.rows() * c.cols();
    if count > cells {
        return Err(Error::InvalidArgument(format!("cannot corrupt {count} of {cells} cells")));
    }
    let picks = rand::seq::index::sample(rng, cells, count);
    let t = picks.into_iter().map(|p| (p / c.cols(), p % c.cols(), delta.clone()));
    let noise = SparseMatrix::from_triplets(dom, c.rows(), c.cols(), t)?;
    c.add(dom, &noise)
}

/// Whether a big-integer matrix equals an `i64` one.
pub fn big_equals(big: &SparseMatrix<BigInt>, small: &SparseMatrix<i64>) -> bool {
    big.rows() == small.rows()
        && big.cols() == small.cols()
        && big.nnz() == small.nnz()
        && big
            .entries()
            .zip(small.entries())
            .all(|((i, j, v), (p, q, w))| i == p && j == q && !v.is_zero() && *v == BigInt::from(*w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive::naive_multiply;
    use crate::scalar::{Integer, ZMod};

    fn opts() -> SparseOptions {
        SparseOptions::default()
    }

    #[test]
    fn single_triangle_and_open_path() {
        let g = TripartiteGraph::new((1, 1, 1), vec![(0, 0)], vec![(0, 0)], vec![(0, 0)]).unwrap();
        assert_eq!(ae_triangle_via_mm(&g, &opts()).unwrap().0, vec![(0, 0)]);
        let open = TripartiteGraph::new((1, 1, 1), vec![(0, 0)], vec![(0, 0)], vec![]).unwrap();
        assert!(ae_triangle_via_mm(&open, &opts()).unwrap().0.is_empty());
        let empty = TripartiteGraph::new((3, 3, 3), vec![], vec![], vec![]).unwrap();
        assert!(ae_triangle_brute(&empty).is_empty());
    }

    #[test]
    fn complete_k222() {
        let all = |n1: usize, n2: usize| (0..n1).flat_map(|u| (0..n2).map(move |v| (u, v))).collect::<Vec<_>>();
        let g = TripartiteGraph::new((2, 2, 2), all(2, 2), all(2, 2), all(2, 2)).unwrap();
        let (counts, _) = count_triangles_via_mm(&g, &opts()).unwrap();
        assert_eq!(counts.len(), 4);
        assert!(counts.values().all(|&c| c == 2));
        assert_eq!(counts, count_triangles_brute(&g));
    }

    #[test]
    fn random_graphs_match_brute_force() {
        for seed in 0..30 {
            let g = TripartiteGraph::random((7 + seed as usize % 9, 11, 6), 0.3, seed);
            assert_eq!(ae_triangle_via_mm(&g, &opts()).unwrap().0, ae_triangle_brute(&g));
            assert_eq!(count_triangles_via_mm(&g, &opts()).unwrap().0, count_triangles_brute(&g));
        }
        let g = TripartiteGraph::psaet(30, 1);
        assert_eq!(g.nx, 7);
        assert_eq!(ae_triangle_via_mm(&g, &opts()).unwrap().0, ae_triangle_brute(&g));
    }

    #[test]
    fn graph_text_round_trip() {
        let g = TripartiteGraph::random((4, 5, 6), 0.4, 2);
        assert_eq!(TripartiteGraph::parse(&g.to_text()).unwrap(), g);
        assert!(TripartiteGraph::parse("X Y 0 0\nX Y 0 0\n").is_err());
        assert!(matches!(TripartiteGraph::parse("X Q 0 0\n"), Err(Error::Parse { line: 1, .. })));
        let d = Digraph::random(9, 0.2, 3);
        assert_eq!(Digraph::parse(&d.to_text()).unwrap(), d);
        assert!(matches!(Digraph::parse("1 2\n3\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn bit_split_examples() {
        let nn = NonNegative;
        let a = SparseMatrix::from_triplets(&nn, 1, 1, [(0, 0, 3u64)]).unwrap();
        let b = SparseMatrix::from_triplets(&nn, 1, 1, [(0, 0, 5u64)]).unwrap();
        let mut calls = 0;
        let c = bit_split_multiply(&a, &b, |x, y| {
            calls += 1;
            naive_multiply(&nn, x, y)
        })
        .unwrap();
        assert_eq!(calls, 6);
        assert_eq!(c.get(0, 0), Some(&BigInt::from(15)));

        let mut rng = generate::rng(4);
        for _ in 0..20 {
            let a = generate::random_sparse(&nn, 12, 9, 0.3, &mut rng, |r| r.gen_range(1..1000));
            let b = generate::random_sparse(&nn, 9, 10, 0.3, &mut rng, |r| r.gen_range(1..1000));
            let want = naive_multiply(&nn, &a, &b).unwrap();
            let got = bit_split_multiply(&a, &b, |x, y| multiply_sparse(&nn, x, y, &opts()).map(|r| r.0)).unwrap();
            assert_eq!(got, want.convert(&BigInteger, |v| Ok(BigInt::from(*v))).unwrap());
        }
        // {0,1} inputs take a single layer product.
        let ones = generate::random_sparse(&nn, 5, 5, 0.5, &mut rng, |_| 1);
        let mut calls = 0;
        bit_split_multiply(&ones, &ones, |x, y| {
            calls += 1;
            naive_multiply(&nn, x, y)
        })
        .unwrap();
        assert_eq!(calls, 1);
    }

    #[test]
    fn shift_examples() {
        let a = SparseMatrix::from_triplets(&Integer, 1, 1, [(0, 0, -1i64)]).unwrap();
        let b = SparseMatrix::from_triplets(&Integer, 1, 1, [(0, 0, 1i64)]).unwrap();
        let c = multiply_signed_via_reductions(&a, &b, &opts()).unwrap();
        assert!(big_equals(&c, &naive_multiply(&Integer, &a, &b).unwrap()));

        let mut rng = generate::rng(5);
        for _ in 0..20 {
            let a = generate::random_int(10, 8, 0.3, 50, &mut rng);
            let b = generate::random_int(8, 12, 0.3, 50, &mut rng);
            let c = multiply_signed_via_reductions(&a, &b, &opts()).unwrap();
            assert!(big_equals(&c, &naive_multiply(&Integer, &a, &b).unwrap()));
        }
        // Nonnegative inputs: equals the plain product.
        let nn = NonNegative;
        let a = generate::random_sparse(&nn, 6, 6, 0.4, &mut rng, |r| r.gen_range(1..9));
        let ai = a.convert(&Integer, |v| Ok(*v as i64)).unwrap();
        let c = shift_multiply(&ai, &ai, |x, y| naive_multiply(&nn, x, y)?.convert(&BigInteger, |v| Ok(BigInt::from(*v)))).unwrap();
        assert!(big_equals(&c, &naive_multiply(&Integer, &ai, &ai).unwrap()));
    }

    #[test]
    fn correction_examples() {
        let mut rng = generate::rng(6);
        let a = generate::random_int(30, 20, 0.1, 5, &mut rng);
        let b = generate::random_int(20, 25, 0.1, 5, &mut rng);
        let c = naive_multiply(&Integer, &a, &b).unwrap();
        let exact = correct_product(&Integer, &a, &b, &c, &opts()).unwrap();
        assert_eq!(exact.product, c);
        assert_eq!(exact.error.nnz(), 0);

        let one_off = corrupt(&Integer, &c, 1, &7, &mut rng).unwrap();
        let fixed = correct_product(&Integer, &a, &b, &one_off, &opts()).unwrap();
        assert_eq!(fixed.product, c);
        assert_eq!(fixed.error.nnz(), 1);
        assert_eq!(fixed.error.entries().next().unwrap().2, &-7);

        let z = ZMod::new(4).unwrap();
        let az = a.convert(&z, |v| Ok(z.reduce(*v))).unwrap();
        let bz = b.convert(&z, |v| Ok(z.reduce(*v))).unwrap();
        let cz = naive_multiply(&z, &az, &bz).unwrap();
        let bad = corrupt(&z, &cz, 10, &1, &mut rng).unwrap();
        let fixed = correct_product(&z, &az, &bz, &bad, &opts()).unwrap();
        assert_eq!(fixed.product, cz);
        assert_eq!(fixed.error.nnz(), 10);

        assert!(correct_product(&Integer, &a, &b, &a, &opts()).is_err());
    }

    #[test]
    fn closure_examples() {
        let path = Digraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let c = transitive_closure(&path, &opts()).unwrap().closure.unwrap();
        assert_eq!(c.arcs, vec![(0, 1), (0, 2), (1, 2)]);
        let empty = Digraph::new(4, vec![]).unwrap();
        assert!(transitive_closure(&empty, &opts()).unwrap().closure.unwrap().arcs.is_empty());
        for seed in 0..20 {
            let g = Digraph::random(25, 0.05, seed);
            let run = transitive_closure(&g, &opts()).unwrap();
            let c = run.closure.unwrap();
            assert_eq!(c, closure_brute(&g));
            assert!(run.rounds <= crate::densify::ceil_log2(g.n) + 1);
            assert_eq!(transitive_closure(&c, &opts()).unwrap().closure.unwrap(), c);
        }
    }
}
