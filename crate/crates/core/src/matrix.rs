//! Sparse matrices in canonical coordinate order and support sets.
//!
//! Entries are stored row-compressed, which is the coordinate list sorted by
//! `(row, col)` with the row index factored out. Indices are 0-based.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Semiring;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<E> {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<E>,
}

impl<E: Clone + PartialEq> SparseMatrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity<D: Semiring<Elem = E>>(dom: &D, n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![dom.one(); n],
        }
    }

    /// Builds the canonical matrix from arbitrary triplets: duplicates are
    /// summed in the domain and resulting zeros are dropped.
    pub fn from_triplets<D, I>(dom: &D, rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        D: Semiring<Elem = E>,
        I: IntoIterator<Item = (usize, usize, E)>,
    {
        let mut ts: Vec<(usize, usize, E)> = triplets.into_iter().collect();
        for (i, j, v) in &ts {
            if *i >= rows || *j >= cols {
                return Err(Error::IndexOutOfRange {
                    row: *i,
                    col: *j,
                    rows,
                    cols,
                });
            }
            if !dom.contains(v) {
                return Err(dom.domain_error(dom.format(v)));
            }
        }
        ts.sort_by_key(|(i, j, _)| (*i, *j));
        Self::from_sorted_triplets(dom, rows, cols, ts)
    }

    /// Same as [`from_triplets`](Self::from_triplets) for input already
    /// sorted by `(row, col)` and in range; duplicates may still occur.
    pub(crate) fn from_sorted_triplets<D>(dom: &D, rows: usize, cols: usize, ts: Vec<(usize, usize, E)>) -> Result<Self>
    where
        D: Semiring<Elem = E>,
    {
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(ts.len());
        let mut values: Vec<E> = Vec::with_capacity(ts.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows_of = Vec::with_capacity(ts.len());
        for (i, j, v) in ts {
            if last == Some((i, j)) {
                let acc = values.last_mut().expect("duplicate follows an entry");
                dom.add_assign(acc, &v)?;
                continue;
            }
            last = Some((i, j));
            rows_of.push(i);
            col_idx.push(j);
            values.push(v);
        }
        // Drop entries that summed to zero.
        let mut keep = 0;
        for t in 0..values.len() {
            if !dom.is_zero(&values[t]) {
                rows_of.swap(keep, t);
                col_idx.swap(keep, t);
                values.swap(keep, t);
                keep += 1;
            }
        }
        rows_of.truncate(keep);
        col_idx.truncate(keep);
        values.truncate(keep);
        for &i in &rows_of {
            row_ptr[i + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(SparseMatrix {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Assembles a matrix from per-row entry lists that are already
    /// canonical (sorted, unique, nonzero).
    pub(crate) fn from_canonical_rows(rows: usize, cols: usize, per_row: Vec<Vec<(usize, E)>>) -> Self {
        debug_assert_eq!(per_row.len(), rows);
        let mut row_ptr = Vec::with_capacity(rows + 1);
        row_ptr.push(0);
        let nnz = per_row.iter().map(Vec::len).sum();
        let mut col_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        for row in per_row {
            for (j, v) in row {
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[E]) {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[s..e], &self.values[s..e])
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&E> {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).ok().map(|p| &vals[p])
    }

    /// Entries in `(row, col)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &E)> + '_ {
        (0..self.rows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, v)| (i, j, v))
        })
    }

    pub fn to_triplets(&self) -> Vec<(usize, usize, E)> {
        self.entries().map(|(i, j, v)| (i, j, v.clone())).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.cols + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for j in 0..self.cols {
            counts[j + 1] += counts[j];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0usize; self.nnz()];
        let mut slots: Vec<Option<E>> = vec![None; self.nnz()];
        for (i, j, v) in self.entries() {
            let p = next[j];
            next[j] += 1;
            col_idx[p] = i;
            slots[p] = Some(v.clone());
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            row_ptr,
            col_idx,
            values: slots.into_iter().map(|v| v.expect("every slot filled")).collect(),
        }
    }

    pub fn support(&self) -> SupportSet {
        SupportSet {
            rows: self.rows,
            cols: self.cols,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
        }
    }

    /// Number of nonzeros in each column.
    pub fn column_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.cols];
        for &j in &self.col_idx {
            counts[j] += 1;
        }
        counts
    }

    pub fn to_dense<D: Semiring<Elem = E>>(&self, dom: &D) -> DenseMatrix<E> {
        let mut out = DenseMatrix::filled(self.rows, self.cols, dom.zero());
        for (i, j, v) in self.entries() {
            out.set(i, j, v.clone());
        }
        out
    }

    pub fn from_dense<D: Semiring<Elem = E>>(dom: &D, dense: &DenseMatrix<E>) -> Self {
        let per_row = (0..dense.rows())
            .map(|i| {
                dense
                    .row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !dom.is_zero(v))
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        Self::from_canonical_rows(dense.rows(), dense.cols(), per_row)
    }

    /// Rows `picks[0], picks[1], ...` of `self`, stacked in that order.
    pub fn select_rows(&self, picks: &[usize]) -> Self {
        let per_row = picks
            .iter()
            .map(|&i| {
                let (cols, vals) = self.row(i);
                cols.iter().copied().zip(vals.iter().cloned()).collect()
            })
            .collect();
        Self::from_canonical_rows(picks.len(), self.cols, per_row)
    }

    /// Keeps the columns with `map[j] = Some(new_j)`, relabelled. The map
    /// must be increasing on the kept columns.
    pub fn select_cols(&self, map: &[Option<usize>], new_cols: usize) -> Self {
        let per_row = (0..self.rows)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter()
                    .zip(vals)
                    .filter_map(|(&j, v)| map[j].map(|nj| (nj, v.clone())))
                    .collect()
            })
            .collect();
        Self::from_canonical_rows(self.rows, new_cols, per_row)
    }

    /// Converts every value into another domain, dropping entries that map to
    /// zero there.
    pub fn convert<D2, F>(&self, target: &D2, f: F) -> Result<SparseMatrix<D2::Elem>>
    where
        D2: Semiring,
        F: Fn(&E) -> Result<D2::Elem>,
    {
        let per_row = (0..self.rows)
            .map(|i| {
                let (cols, vals) = self.row(i);
                let mut out = Vec::with_capacity(cols.len());
                for (&j, v) in cols.iter().zip(vals) {
                    let w = f(v)?;
                    if !target.is_zero(&w) {
                        out.push((j, w));
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_canonical_rows(self.rows, self.cols, per_row))
    }

    /// `self + other` in the domain.
    pub fn add<D: Semiring<Elem = E>>(&self, dom: &D, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut ts = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.rows {
            let (ca, va) = self.row(i);
            let (cb, vb) = other.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ca.len() || q < cb.len() {
                if q == cb.len() || (p < ca.len() && ca[p] < cb[q]) {
                    ts.push((i, ca[p], va[p].clone()));
                    p += 1;
                } else {
                    ts.push((i, cb[q], vb[q].clone()));
                    q += 1;
                }
            }
        }
        Self::from_sorted_triplets(dom, self.rows, self.cols, ts)
    }

    /// Every stored value is nonzero and rows are strictly sorted.
    pub fn is_canonical<D: Semiring<Elem = E>>(&self, dom: &D) -> bool {
        (0..self.rows).all(|i| {
            let (cols, vals) = self.row(i);
            cols.windows(2).all(|w| w[0] < w[1])
                && cols.iter().all(|&j| j < self.cols)
                && vals.iter().all(|v| !dom.is_zero(v) && dom.contains(v))
        })
    }
}

/// A set of `(row, col)` positions grouped by row, columns sorted per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
}

impl SupportSet {
    pub fn empty(rows: usize, cols: usize) -> Self {
        SupportSet {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
        }
    }

    /// Deduplicating constructor.
    pub fn from_pairs<I>(rows: usize, cols: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut ps: Vec<(usize, usize)> = pairs.into_iter().collect();
        if let Some(&(i, j)) = ps.iter().find(|(i, j)| *i >= rows || *j >= cols) {
            return Err(Error::IndexOutOfRange {
                row: i,
                col: j,
                rows,
                cols,
            });
        }
        ps.sort_unstable();
        ps.dedup();
        Ok(Self::from_sorted_unique(rows, cols, ps))
    }

    fn from_sorted_unique(rows: usize, cols: usize, ps: Vec<(usize, usize)>) -> Self {
        let mut row_ptr = vec![0usize; rows + 1];
        for &(i, _) in &ps {
            row_ptr[i + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        SupportSet {
            rows,
            cols,
            row_ptr,
            col_idx: ps.into_iter().map(|(_, j)| j).collect(),
        }
    }

    pub(crate) fn from_row_lists(rows: usize, cols: usize, lists: Vec<Vec<usize>>) -> Self {
        let mut row_ptr = Vec::with_capacity(rows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        for mut l in lists {
            l.sort_unstable();
            l.dedup();
            col_idx.extend(l);
            row_ptr.push(col_idx.len());
        }
        SupportSet {
            rows,
            cols,
            row_ptr,
            col_idx,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.col_idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.col_idx.is_empty()
    }

    /// Number of pairs in row `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.rows).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.rows && self.row(i).binary_search(&j).is_ok()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |i| self.row(i).iter().map(move |&j| (i, j)))
    }

    /// Whether every pair of `self` lies in `other`.
    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.pairs().all(|(i, j)| other.contains(i, j))
    }

    /// Restriction to the rows in `keep` (a sorted list), preserving indices.
    pub fn restrict_rows(&self, keep: &[usize]) -> SupportSet {
        let mut lists = vec![Vec::new(); self.rows];
        for &i in keep {
            lists[i] = self.row(i).to_vec();
        }
        Self::from_row_lists(self.rows, self.cols, lists)
    }

    pub fn union(&self, other: &SupportSet) -> Result<SupportSet> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("support shapes differ".into()));
        }
        let lists = (0..self.rows)
            .map(|i| {
                let mut l = self.row(i).to_vec();
                l.extend_from_slice(other.row(i));
                l
            })
            .collect();
        Ok(Self::from_row_lists(self.rows, self.cols, lists))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Boolean, Integer};
    use proptest::prelude::*;

    #[test]
    fn empty_triplets() {
        let m = SparseMatrix::from_triplets(&Integer, 3, 3, vec![]).unwrap();
        assert_eq!((m.rows(), m.cols(), m.nnz()), (3, 3, 0));
        assert!(m.support().is_empty());
    }

    #[test]
    fn duplicates_fold() {
        let m = SparseMatrix::from_triplets(&Integer, 2, 2, vec![(0, 0, 2), (0, 0, 3)]).unwrap();
        assert_eq!(m.to_triplets(), vec![(0, 0, 5)]);
    }

    #[test]
    fn cancellation_is_dropped() {
        let m = SparseMatrix::from_triplets(&Integer, 2, 2, vec![(0, 0, 2), (1, 1, 4), (0, 0, -2)]).unwrap();
        assert_eq!(m.to_triplets(), vec![(1, 1, 4)]);
        assert!(m.is_canonical(&Integer));
    }

    #[test]
    fn out_of_range_rejected() {
        let err = SparseMatrix::from_triplets(&Integer, 2, 2, vec![(2, 0, 1)]).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { row: 2, .. }));
    }

    #[test]
    fn transpose_identity() {
        let id = SparseMatrix::identity(&Boolean, 5);
        assert_eq!(id.transpose(), id);
    }

    #[test]
    fn support_degrees_sum() {
        let s = SupportSet::from_pairs(3, 4, vec![(0, 1), (0, 3), (2, 0), (0, 1)]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!((s.degree(0), s.degree(1), s.degree(2)), (2, 0, 1));
        assert!(s.contains(2, 0) && !s.contains(1, 0));
    }

    fn arb_matrix() -> impl Strategy<Value = SparseMatrix<i64>> {
        (1usize..12, 1usize..12).prop_flat_map(|(r, c)| {
            proptest::collection::vec((0..r, 0..c, -5i64..5), 0..40)
                .prop_map(move |ts| SparseMatrix::from_triplets(&Integer, r, c, ts).unwrap())
        })
    }

    proptest! {
        #[test]
        fn transpose_is_involution(m in arb_matrix()) {
            prop_assert_eq!(m.transpose().transpose(), m.clone());
            prop_assert!(m.transpose().is_canonical(&Integer));
        }

        #[test]
        fn dense_round_trip(m in arb_matrix()) {
            prop_assert_eq!(SparseMatrix::from_dense(&Integer, &m.to_dense(&Integer)), m);
        }
    }
}
