//! Exact rational arithmetic and sparse linear algebra over the rationals.
//!
//! Everything downstream (differentials, strata, matrix groups) reduces to
//! rank, kernel and image-membership questions for sparse matrices over Q.
//! All arithmetic is exact: scalars are arbitrary-precision rationals kept
//! in lowest terms with positive denominator, which is what
//! [`num_rational::BigRational`] guarantees.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar: arbitrary-precision, lowest terms, denominator > 0.
pub type Rat = BigRational;

/// Shorthand rational constructor from machine integers.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Sparse vector over Q indexed by `usize`; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QVector {
    entries: BTreeMap<usize, Rat>,
}

impl QVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// The standard basis vector with a 1 in coordinate `i`.
    pub fn unit(i: usize) -> Self {
        let mut v = Self::new();
        v.set(i, Rat::one());
        v
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, Rat)>>(entries: I) -> Self {
        let mut v = Self::new();
        for (i, c) in entries {
            v.add_to(i, &c);
        }
        v
    }

    /// Coefficient at `i` (zero if absent).
    pub fn get(&self, i: usize) -> Rat {
        self.entries.get(&i).cloned().unwrap_or_else(Rat::zero)
    }

    /// Set coordinate `i`, dropping the entry when the value is zero.
    pub fn set(&mut self, i: usize, value: Rat) {
        if value.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, value);
        }
    }

    /// Add `c` to coordinate `i`.
    pub fn add_to(&mut self, i: usize, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let cur = self.get(i) + c;
        self.set(i, cur);
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &QVector, scale: &Rat) {
        if scale.is_zero() {
            return;
        }
        for (&i, c) in &other.entries {
            self.add_to(i, &(c * scale));
        }
    }

    pub fn scaled(&self, scale: &Rat) -> QVector {
        let mut v = QVector::new();
        v.add_scaled(self, scale);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.entries.iter().map(|(&i, c)| (i, c))
    }

    /// Number of stored (nonzero) entries.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }
}

/// Sparse matrix over Q with explicit shape; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

/// A sparse row used during elimination: column-sorted `(col, coeff)` pairs.
type Row = Vec<(usize, Rat)>;

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Build from dense rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(nrows, ncols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Dense integer constructor, convenient in tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat_int(v)).collect())
                .collect(),
        )
    }

    /// Assemble from columns over a fixed row dimension.
    pub fn from_columns(rows: usize, columns: &[QVector]) -> Self {
        let mut m = Self::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            m.set_column(j, col);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rat) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of shape");
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter_entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn column(&self, j: usize) -> QVector {
        let mut v = QVector::new();
        for i in 0..self.rows {
            if let Some(c) = self.entries.get(&(i, j)) {
                v.set(i, c.clone());
            }
        }
        v
    }

    pub fn set_column(&mut self, j: usize, col: &QVector) {
        for (i, c) in col.iter() {
            self.set(i, j, c.clone());
        }
    }

    /// New matrix with extra columns appended on the right.
    pub fn with_appended_columns(&self, extra: &[QVector]) -> QMatrix {
        let mut m = QMatrix::zero(self.rows, self.cols + extra.len());
        for (&(i, j), c) in &self.entries {
            m.set(i, j, c.clone());
        }
        for (k, col) in extra.iter().enumerate() {
            m.set_column(self.cols + k, col);
        }
        m
    }

    /// Submatrix formed by the given row and column indices, in the given order.
    pub fn submatrix(&self, keep_rows: &[usize], keep_cols: &[usize]) -> QMatrix {
        let row_pos: BTreeMap<usize, usize> =
            keep_rows.iter().enumerate().map(|(p, &r)| (r, p)).collect();
        let col_pos: BTreeMap<usize, usize> =
            keep_cols.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        let mut m = QMatrix::zero(keep_rows.len(), keep_cols.len());
        for (&(i, j), v) in &self.entries {
            if let (Some(&pi), Some(&pj)) = (row_pos.get(&i), col_pos.get(&j)) {
                m.set(pi, pj, v.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> QMatrix {
        let mut m = QMatrix::zero(self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            m.set(j, i, v.clone());
        }
        m
    }

    /// Matrix product; shapes must agree.
    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "product shape mismatch");
        let mut m = QMatrix::zero(self.rows, rhs.cols);
        // accumulate over the sparse left factor
        let mut acc: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for (&(kk, j), b) in rhs.entries.range((k, 0)..=(k, rhs.cols)) {
                debug_assert_eq!(k, kk);
                let e = acc.entry((i, j)).or_insert_with(Rat::zero);
                *e += a * b;
            }
        }
        for ((i, j), v) in acc {
            m.set(i, j, v);
        }
        m
    }

    /// Matrix-vector product `M v`.
    pub fn apply(&self, v: &QVector) -> QVector {
        let mut out = QVector::new();
        for (&(i, j), c) in &self.entries {
            let vj = v.get(j);
            if !vj.is_zero() {
                out.add_to(i, &(c * vj));
            }
        }
        out
    }

    fn to_sparse_rows(&self) -> Vec<Row> {
        let mut rows: Vec<Row> = vec![Vec::new(); self.rows];
        for (&(i, j), c) in &self.entries {
            rows[i].push((j, c.clone()));
        }
        rows
    }

    /// Exact rank over Q.
    pub fn rank(&self) -> usize {
        let (_, pivots) = echelonize(self.to_sparse_rows(), self.cols, false);
        pivots.len()
    }

    /// A basis of `ker M`, one vector per free column, derived from the
    /// reduced echelon form over the natural column order. The output is
    /// canonical: it does not depend on pivoting choices.
    pub fn kernel_basis(&self) -> Vec<QVector> {
        let (rref, pivots) = echelonize(self.to_sparse_rows(), self.cols, true);
        let pivot_set: BTreeMap<usize, usize> = pivots
            .iter()
            .enumerate()
            .map(|(row, &col)| (col, row))
            .collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains_key(&free) {
                continue;
            }
            let mut v = QVector::unit(free);
            for (&pcol, &prow) in &pivot_set {
                let coeff = row_get(&rref[prow], free);
                if !coeff.is_zero() {
                    v.set(pcol, -coeff);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `M x = v` exactly; returns a witness with free variables at zero.
    pub fn solve(&self, v: &QVector) -> Option<QVector> {
        if let Some(top) = v.max_index() {
            assert!(top < self.rows, "right-hand side exceeds row count");
        }
        // eliminate the augmented system [M | v]
        let mut rows = self.to_sparse_rows();
        for (i, c) in v.iter() {
            rows[i].push((self.cols, c.clone()));
        }
        let (rref, pivots) = echelonize(rows, self.cols + 1, true);
        if pivots.last() == Some(&self.cols) {
            return None; // a pivot in the augmented column: inconsistent
        }
        let mut x = QVector::new();
        for (row, &col) in pivots.iter().enumerate() {
            let rhs = row_get(&rref[row], self.cols);
            x.set(col, rhs);
        }
        Some(x)
    }

    /// Is `v` in the column space of `M`?
    pub fn in_image(&self, v: &QVector) -> bool {
        self.solve(v).is_some()
    }
}

fn row_get(row: &Row, col: usize) -> Rat {
    match row.binary_search_by_key(&col, |&(c, _)| c) {
        Ok(p) => row[p].1.clone(),
        Err(_) => Rat::zero(),
    }
}

/// `target -= factor * source`, both column-sorted.
fn row_axpy(target: &Row, source: &Row, factor: &Rat) -> Row {
    let mut out = Row::with_capacity(target.len() + source.len());
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < source.len() {
        let ca = target.get(a).map(|&(c, _)| c);
        let cb = source.get(b).map(|&(c, _)| c);
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => {
                let v = &target[a].1 - factor * &source[b].1;
                if !v.is_zero() {
                    out.push((x, v));
                }
                a += 1;
                b += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push((x, target[a].1.clone()));
                a += 1;
            }
            (Some(_), Some(_)) | (None, Some(_)) => {
                out.push((source[b].0, -(factor * &source[b].1)));
                b += 1;
            }
            (Some(x), None) => {
                out.push((x, target[a].1.clone()));
                a += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Bit size of a rational: the pivot-selection heuristic that keeps
/// coefficient growth down during elimination.
fn bit_size(r: &Rat) -> u64 {
    r.numer().abs().bits() + r.denom().bits()
}

/// Gaussian elimination over Q on sparse rows.
///
/// Processes columns left to right; among candidate rows (leading entry in
/// the current column) the pivot is the one with smallest leading-entry bit
/// size. With `reduce` set, produces the reduced echelon form: pivots are 1
/// and pivot columns are cleared above, which makes the result canonical.
///
/// Returns the echelon rows (one per pivot, in pivot order) and the pivot
/// columns.
fn echelonize(rows: Vec<Row>, cols: usize, reduce: bool) -> (Vec<Row>, Vec<usize>) {
    let mut pending: Vec<Row> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut done: Vec<Row> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();

    for col in 0..cols {
        // split off the rows whose leading entry sits in this column
        let mut cands: Vec<Row> = Vec::new();
        let mut rest: Vec<Row> = Vec::with_capacity(pending.len());
        for row in pending {
            if row[0].0 == col {
                cands.push(row);
            } else {
                rest.push(row);
            }
        }
        pending = rest;
        if cands.is_empty() {
            continue;
        }
        let best = cands
            .iter()
            .enumerate()
            .min_by_key(|(pos, row)| (bit_size(&row[0].1), row.len(), *pos))
            .map(|(pos, _)| pos)
            .unwrap();
        let mut pivot_row = cands.swap_remove(best);
        if reduce {
            let lead = pivot_row[0].1.clone();
            if !lead.is_one() {
                for (_, v) in pivot_row.iter_mut() {
                    *v /= &lead;
                }
            }
        }
        let pivot_lead = pivot_row[0].1.clone();
        for row in cands {
            let factor = &row[0].1 / &pivot_lead;
            let reduced = row_axpy(&row, &pivot_row, &factor);
            if !reduced.is_empty() {
                debug_assert!(reduced[0].0 > col);
                pending.push(reduced);
            }
        }
        if reduce {
            for prev in done.iter_mut() {
                let c = row_get(prev, col);
                if !c.is_zero() {
                    *prev = row_axpy(prev, &pivot_row, &c);
                }
            }
        }
        done.push(pivot_row);
        pivots.push(col);
    }
    (done, pivots)
}

/// Incremental independence tester: feed vectors one at a time, each kept
/// only if it enlarges the span so far.
#[derive(Default)]
pub struct RankProbe {
    // echelon rows keyed by leading column
    rows: BTreeMap<usize, Row>,
}

impl RankProbe {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert `v`; returns true when it was independent of the span so far.
    pub fn insert(&mut self, v: &QVector) -> bool {
        let mut row: Row = v.iter().map(|(i, c)| (i, c.clone())).collect();
        while let Some(&(lead, _)) = row.first() {
            match self.rows.get(&lead) {
                Some(pivot) => {
                    let factor = &row[0].1 / &pivot[0].1;
                    row = row_axpy(&row, pivot, &factor);
                }
                None => {
                    self.rows.insert(lead, row);
                    return true;
                }
            }
        }
        false
    }
}
