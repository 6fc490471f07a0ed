//! Hash families that isolate every pair of a support set.
//!
//! A pair `(i, j) ∈ S` is isolated under `h` when no other `j'` in row `i`
//! shares its bucket. The deterministic builder picks hash values one column
//! at a time by conditional expectations, so that each new function leaves at
//! most half of the still-active pairs unisolated.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SupportSet;

/// Explicitly tabulated functions `[z] -> [buckets]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HashFamily {
    z: usize,
    buckets: usize,
    functions: Vec<Vec<usize>>,
}

impl HashFamily {
    pub fn new(z: usize, buckets: usize, functions: Vec<Vec<usize>>) -> Result<Self> {
        if buckets == 0 {
            return Err(Error::InvalidArgument("hash family needs at least one bucket".into()));
        }
        for (k, f) in functions.iter().enumerate() {
            if f.len() != z {
                return Err(Error::InvalidArgument(format!(
                    "function {k} is tabulated on {} points, expected {z}",
                    f.len()
                )));
            }
            if let Some(&b) = f.iter().find(|&&b| b >= buckets) {
                return Err(Error::InvalidArgument(format!("function {k} maps to bucket {b} >= {buckets}")));
            }
        }
        Ok(HashFamily { z, buckets, functions })
    }

    /// The single function `j ↦ j`, which isolates everything when `z ≤ buckets`.
    pub fn identity(z: usize, buckets: usize) -> Result<Self> {
        Self::new(z, buckets, vec![(0..z).collect()])
    }

    pub fn z(&self) -> usize {
        self.z
    }

    pub fn buckets(&self) -> usize {
        self.buckets
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[Vec<usize>] {
        &self.functions
    }

    pub fn function(&self, k: usize) -> &[usize] {
        &self.functions[k]
    }

    /// Every pair of `s` is isolated under some member.
    pub fn isolates(&self, s: &SupportSet) -> bool {
        let mut covered = vec![false; s.len()];
        for f in &self.functions {
            for (c, iso) in covered.iter_mut().zip(isolated_mask(s, f)) {
                *c |= iso;
            }
        }
        covered.into_iter().all(|c| c)
    }

    /// CSV dump with header `function,j,bucket`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("function,j,bucket\n");
        for (k, f) in self.functions.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                let _ = writeln!(out, "{k},{j},{b}");
            }
        }
        out
    }
}

pub(crate) fn random_function<R: Rng>(z: usize, buckets: usize, rng: &mut R) -> Vec<usize> {
    (0..z).map(|_| rng.gen_range(0..buckets)).collect()
}

/// `count` independent uniform functions `[z] -> [buckets]`.
pub fn sample_random_family(z: usize, buckets: usize, count: usize, seed: u64) -> Result<HashFamily> {
    if buckets == 0 {
        return Err(Error::InvalidArgument("hash family needs at least one bucket".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let functions = (0..count).map(|_| random_function(z, buckets, &mut rng)).collect();
    HashFamily::new(z, buckets, functions)
}

/// Isolation flag for every pair of `s`, in the order of [`SupportSet::pairs`].
pub(crate) fn isolated_mask(s: &SupportSet, h: &[usize]) -> Vec<bool> {
    let mut out = Vec::with_capacity(s.len());
    let mut counts: HashMap<usize, u32> = HashMap::new();
    for i in 0..s.rows() {
        let row = s.row(i);
        if row.len() <= 1 {
            out.extend(std::iter::repeat_n(true, row.len()));
            continue;
        }
        counts.clear();
        for &j in row {
            *counts.entry(h[j]).or_insert(0) += 1;
        }
        out.extend(row.iter().map(|&j| counts[&h[j]] == 1));
    }
    out
}

/// The pairs of `s` isolated under `h`.
pub fn isolated_pairs(s: &SupportSet, h: &[usize]) -> Result<Vec<(usize, usize)>> {
    if h.len() < s.cols() {
        return Err(Error::InvalidArgument(format!(
            "hash function defined on {} points, support has {} columns",
            h.len(),
            s.cols()
        )));
    }
    Ok(s.pairs()
        .zip(isolated_mask(s, h))
        .filter_map(|(p, iso)| iso.then_some(p))
        .collect())
}

/// Fenwick tree over buckets that only materializes touched nodes.
#[derive(Clone, Debug, Default)]
struct SparseFenwick {
    nodes: HashMap<usize, u64>,
}

impl SparseFenwick {
    fn add(&mut self, n: usize, b: usize) {
        let mut k = b + 1;
        while k <= n {
            *self.nodes.entry(k).or_insert(0) += 1;
            k += k & k.wrapping_neg();
        }
    }

    fn prefix(&self, b: usize) -> u64 {
        let mut k = b;
        let mut s = 0;
        while k > 0 {
            s += self.nodes.get(&k).copied().unwrap_or(0);
            k &= k - 1;
        }
        s
    }

    /// Sum over buckets `lo..hi`.
    fn range(&self, lo: usize, hi: usize) -> u64 {
        if self.nodes.is_empty() || lo >= hi {
            return 0;
        }
        // Power-of-two aligned blocks are a single node.
        if hi & hi.wrapping_neg() == hi - lo {
            return self.nodes.get(&hi).copied().unwrap_or(0);
        }
        self.prefix(hi) - self.prefix(lo)
    }

    fn point(&self, b: usize) -> u64 {
        self.range(b, b + 1)
    }

    fn clear(&mut self) {
        self.nodes.clear();
    }
}

/// Counters for one round of the deterministic builder.
///
/// `M[i, b]` counts pairs `(i, j) ∈ S` already hashed to `b`, and `M_H[i, b]`
/// the same restricted to active pairs. `collisions` is `|C_H(h)|` for the
/// partial function `h` assigned so far.
#[derive(Clone, Debug)]
pub struct IsolationState<'a> {
    s: &'a SupportSet,
    buckets: usize,
    active: Vec<bool>,
    row_active: Vec<usize>,
    // For each column, the pairs touching it as (row, pair offset).
    by_col: Vec<Vec<(usize, usize)>>,
    m: Vec<SparseFenwick>,
    m_active: Vec<SparseFenwick>,
    h: Vec<Option<usize>>,
    collisions: u64,
}

impl<'a> IsolationState<'a> {
    /// All pairs active, every hash value unassigned.
    pub fn new(s: &'a SupportSet, buckets: usize) -> Result<Self> {
        Self::with_active(s, buckets, vec![true; s.len()])
    }

    pub fn with_active(s: &'a SupportSet, buckets: usize, active: Vec<bool>) -> Result<Self> {
        if buckets == 0 {
            return Err(Error::InvalidArgument("need at least one bucket".into()));
        }
        if active.len() != s.len() {
            return Err(Error::InvalidArgument(format!(
                "active mask has {} flags for {} pairs",
                active.len(),
                s.len()
            )));
        }
        let mut by_col = vec![Vec::new(); s.cols()];
        let mut row_active = vec![0; s.rows()];
        for (p, (i, j)) in s.pairs().enumerate() {
            by_col[j].push((i, p));
            row_active[i] += active[p] as usize;
        }
        Ok(IsolationState {
            s,
            buckets,
            active,
            row_active,
            by_col,
            m: vec![SparseFenwick::default(); s.rows()],
            m_active: vec![SparseFenwick::default(); s.rows()],
            h: vec![None; s.cols()],
            collisions: 0,
        })
    }

    pub fn buckets(&self) -> usize {
        self.buckets
    }

    pub fn active_len(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn is_active(&self, pair: usize) -> bool {
        self.active[pair]
    }

    pub fn assigned(&self, j: usize) -> Option<usize> {
        self.h[j]
    }

    /// `|C_H(h)|` for the current partial function.
    pub fn collisions(&self) -> u64 {
        self.collisions
    }

    // Pairs touching column j whose row still has an active pair. Rows
    // without active pairs contribute nothing to either collision term.
    fn live(&self, j: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.by_col[j].iter().copied().filter(|&(i, _)| self.row_active[i] > 0)
    }

    fn interval_delta(&self, j: usize, lo: usize, hi: usize) -> u64 {
        self.live(j)
            .map(|(i, p)| {
                let own = if self.active[p] { self.m[i].range(lo, hi) } else { 0 };
                own + self.m_active[i].range(lo, hi)
            })
            .sum()
    }

    /// New collisions caused by `h(j) = b`.
    pub fn delta(&self, j: usize, b: usize) -> u64 {
        self.live(j)
            .map(|(i, p)| {
                let own = if self.active[p] { self.m[i].point(b) } else { 0 };
                own + self.m_active[i].point(b)
            })
            .sum()
    }

    /// A bucket whose delta is at most the mean over all buckets, found by
    /// halving the bucket range toward the half with the smaller mean. Ties
    /// go to the lower half.
    pub fn select_bucket(&self, j: usize) -> Result<usize> {
        if let Some(b) = self.h[j] {
            return Err(Error::AlreadyAssigned { col: j, bucket: b });
        }
        if self.live(j).next().is_none() {
            return Ok(0);
        }
        let (mut lo, mut hi) = (0, self.buckets);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let left = self.interval_delta(j, lo, mid) as u128;
            let right = self.interval_delta(j, mid, hi) as u128;
            // Compare means left/|B1| and right/|B2| without division.
            if left * ((hi - mid) as u128) <= right * ((mid - lo) as u128) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(lo)
    }

    pub fn assign(&mut self, j: usize, b: usize) -> Result<()> {
        if let Some(old) = self.h[j] {
            return Err(Error::AlreadyAssigned { col: j, bucket: old });
        }
        if b >= self.buckets {
            return Err(Error::InvalidArgument(format!("bucket {b} >= {}", self.buckets)));
        }
        self.collisions += self.delta(j, b);
        self.h[j] = Some(b);
        let n = self.buckets;
        for k in 0..self.by_col[j].len() {
            let (i, p) = self.by_col[j][k];
            if self.row_active[i] == 0 {
                continue;
            }
            self.m[i].add(n, b);
            if self.active[p] {
                self.m_active[i].add(n, b);
            }
        }
        Ok(())
    }

    /// Assigns every column in order by [`select_bucket`](Self::select_bucket).
    pub fn run_round(&mut self) -> Result<()> {
        for j in 0..self.h.len() {
            let b = self.select_bucket(j)?;
            self.assign(j, b)?;
        }
        Ok(())
    }

    /// Finishes the round: returns the completed function, deactivates the
    /// pairs it isolates and resets the counters for the next round.
    pub fn finish_round(&mut self) -> Vec<usize> {
        let h: Vec<usize> = self.h.iter().map(|b| b.unwrap_or(0)).collect();
        for (p, iso) in isolated_mask(self.s, &h).into_iter().enumerate() {
            if iso && self.active[p] {
                self.active[p] = false;
            }
        }
        self.row_active.iter_mut().for_each(|c| *c = 0);
        for (p, (i, _)) in self.s.pairs().enumerate() {
            self.row_active[i] += self.active[p] as usize;
        }
        self.m.iter_mut().for_each(SparseFenwick::clear);
        self.m_active.iter_mut().for_each(SparseFenwick::clear);
        self.h.iter_mut().for_each(|b| *b = None);
        self.collisions = 0;
        h
    }
}

/// Per-round statistics of a deterministic build.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BuildStats {
    /// `|S_H|` before each round, followed by the final (zero) count.
    pub active_sizes: Vec<usize>,
    /// `|C_H(h)|` of the function chosen in each round.
    pub collisions: Vec<u64>,
}

/// Deterministic family over `2s` buckets isolating every pair of `s`.
pub fn build_deterministic_family(support: &SupportSet, s: usize) -> Result<HashFamily> {
    build_deterministic_family_with_stats(support, s).map(|(f, _)| f)
}

pub fn build_deterministic_family_with_stats(support: &SupportSet, s: usize) -> Result<(HashFamily, BuildStats)> {
    for i in 0..support.rows() {
        if support.degree(i) > s {
            return Err(Error::RowTooLarge {
                row: i,
                found: support.degree(i),
                bound: s,
            });
        }
    }
    let buckets = (2 * s).max(1);
    let mut state = IsolationState::new(support, buckets)?;
    let mut stats = BuildStats::default();
    let mut functions = Vec::new();
    let mut active = state.active_len();
    while active > 0 {
        stats.active_sizes.push(active);
        state.run_round()?;
        stats.collisions.push(state.collisions());
        functions.push(state.finish_round());
        let next = state.active_len();
        if next > active.div_ceil(2) {
            return Err(Error::InvalidArgument(format!(
                "round left {next} of {active} pairs active; counters are inconsistent"
            )));
        }
        active = next;
    }
    stats.active_sizes.push(0);
    Ok((HashFamily::new(support.cols(), buckets, functions)?, stats))
}
