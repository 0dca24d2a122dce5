//! The Chevalley-Eilenberg chain complex of a finite-dimensional Lie algebra.
//!
//! For an algebra `E`, the chains form the exterior algebra on a degree-1
//! copy `sE`: degree-`q` monomials are wedges `s z_{i_1} ∧ ... ∧ s z_{i_q}`
//! with strictly increasing basis indices. The differential takes
//!
//! ```text
//! d(s z_1 ∧ ... ∧ s z_p) = Σ_{i<j} (-1)^{i+j} s[z_i, z_j] ∧ s z_1 ∧ ... ẑ_i ... ẑ_j ... ∧ s z_p
//! ```
//!
//! (positions 1-based, the bracket factor in front), then recanonicalizes
//! each term: sorting contributes the permutation sign and a repeated index
//! kills the term. Homology over Q is `dim ker d_q - rank d_{q+1}`, computed
//! exactly.

use itertools::Itertools;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lie::FinLieAlgebra;
use crate::linalg::{QMatrix, QVector, RankProbe, Rat};
use num_traits::{One, Zero};

/// A canonical wedge monomial: strictly increasing basis indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ChainMonomial {
    indices: Vec<usize>,
}

impl ChainMonomial {
    /// The degree-0 monomial spanning `C_0 = Q`.
    pub fn empty() -> Self {
        Self { indices: Vec::new() }
    }

    /// Construct from already strictly increasing indices.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStructure(format!(
                "monomial indices {indices:?} are not strictly increasing"
            )));
        }
        Ok(Self { indices })
    }

    /// Sort an arbitrary index list into canonical form, returning the
    /// permutation sign; `None` when an index repeats (the monomial dies).
    pub fn canonicalize(mut indices: Vec<usize>) -> Option<(Self, i32)> {
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..indices.len() {
            let mut j = i;
            while j > 0 && indices[j - 1] > indices[j] {
                indices.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((Self { indices }, sign))
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

impl fmt::Display for ChainMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// A rational combination of monomials of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    degree: usize,
    terms: BTreeMap<ChainMonomial, Rat>,
}

/// One serialized chain term: `{"indices": [...], "coeff": "p/q"}`.
#[derive(Debug, Serialize)]
pub struct ChainTerm {
    pub indices: Vec<usize>,
    pub coeff: String,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_monomial(monomial: ChainMonomial, coeff: Rat) -> Self {
        let mut c = Self::zero(monomial.degree());
        c.add_term(monomial, coeff);
        c
    }

    /// Build from a possibly unsorted index list; the canonicalization sign
    /// is folded into the coefficient and a repeated index yields zero.
    pub fn from_indices(indices: Vec<usize>, coeff: Rat) -> Self {
        let degree = indices.len();
        match ChainMonomial::canonicalize(indices) {
            Some((mono, sign)) => {
                let signed = if sign < 0 { -coeff } else { coeff };
                Self::from_monomial(mono, signed)
            }
            None => Self::zero(degree),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, monomial: &ChainMonomial) -> Rat {
        self.terms.get(monomial).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, monomial: ChainMonomial, coeff: Rat) {
        assert_eq!(monomial.degree(), self.degree, "degree mismatch");
        if coeff.is_zero() {
            return;
        }
        let cur = self.coeff(&monomial) + coeff;
        if cur.is_zero() {
            self.terms.remove(&monomial);
        } else {
            self.terms.insert(monomial, cur);
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &Chain, scale: &Rat) {
        assert_eq!(other.degree, self.degree, "degree mismatch");
        for (mono, c) in &other.terms {
            self.add_term(mono.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: &Rat) -> Chain {
        let mut out = Chain::zero(self.degree);
        out.add_scaled(self, scale);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChainMonomial, &Rat)> {
        self.terms.iter()
    }

    /// Serializable term list (JSON shape `[{indices, coeff}]`).
    pub fn to_terms(&self) -> Vec<ChainTerm> {
        self.terms
            .iter()
            .map(|(m, c)| ChainTerm {
                indices: m.indices().to_vec(),
                coeff: c.to_string(),
            })
            .collect()
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (mono, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{mono}")?;
        }
        Ok(())
    }
}

/// All `C(dim, q)` canonical degree-`q` monomials in lexicographic order.
/// Empty when `q > dim`; the single empty monomial when `q = 0`.
pub fn chain_basis(algebra: &FinLieAlgebra, q: usize) -> Vec<ChainMonomial> {
    if q > algebra.dim() {
        return Vec::new();
    }
    (0..algebra.dim())
        .combinations(q)
        .map(|indices| ChainMonomial { indices })
        .collect()
}

/// The differential of a single canonical monomial.
fn differential_monomial(algebra: &FinLieAlgebra, monomial: &ChainMonomial) -> Chain {
    let q = monomial.degree();
    let mut out = Chain::zero(q.saturating_sub(1));
    if q < 2 {
        return out;
    }
    let idx = monomial.indices();
    for i in 0..q {
        for j in (i + 1)..q {
            let bracket = algebra.bracket_basis(idx[i], idx[j]);
            if bracket.is_zero() {
                continue;
            }
            // (-1)^{i+j} with 1-based positions is (-1)^{i+j} for 0-based too
            let pair_sign = if (i + j) % 2 == 0 {
                Rat::one()
            } else {
                -Rat::one()
            };
            let rest: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != i && p != j)
                .map(|(_, &z)| z)
                .collect();
            for (k, c) in bracket.iter() {
                let mut term_indices = Vec::with_capacity(q - 1);
                term_indices.push(k);
                term_indices.extend_from_slice(&rest);
                if let Some((mono, sort_sign)) = ChainMonomial::canonicalize(term_indices) {
                    let mut coeff = &pair_sign * c;
                    if sort_sign < 0 {
                        coeff = -coeff;
                    }
                    out.add_term(mono, coeff);
                }
            }
        }
    }
    out
}

/// Linear extension of the differential; drops degree by one and vanishes
/// on degrees 0 and 1.
pub fn differential(algebra: &FinLieAlgebra, chain: &Chain) -> Chain {
    let mut out = Chain::zero(chain.degree().saturating_sub(1));
    for (mono, c) in chain.terms() {
        out.add_scaled(&differential_monomial(algebra, mono), c);
    }
    out
}

/// The matrix of `d: C_q -> C_{q-1}` over the lexicographic bases;
/// column `j` is the differential of the `j`-th degree-`q` monomial.
pub fn differential_matrix(algebra: &FinLieAlgebra, q: usize) -> QMatrix {
    let source = chain_basis(algebra, q);
    let target = if q == 0 {
        Vec::new()
    } else {
        chain_basis(algebra, q - 1)
    };
    let mut mat = QMatrix::zero(target.len(), source.len());
    for (col, mono) in source.iter().enumerate() {
        let image = differential_monomial(algebra, mono);
        for (m, c) in image.terms() {
            let row = target
                .binary_search(m)
                .expect("differential lands in the target basis");
            mat.set(row, col, c.clone());
        }
    }
    mat
}

fn rank_d(algebra: &FinLieAlgebra, q: usize) -> usize {
    if q == 0 || q > algebra.dim() {
        return 0;
    }
    differential_matrix(algebra, q).rank()
}

/// Exact Betti number `dim H_q = dim ker d_q - rank d_{q+1}`.
pub fn homology_dim(algebra: &FinLieAlgebra, q: usize) -> usize {
    if q > algebra.dim() {
        return 0;
    }
    let dim_chains = chain_basis(algebra, q).len();
    dim_chains - rank_d(algebra, q) - rank_d(algebra, q + 1)
}

/// Cycles whose classes form a basis of `H_q`: reduced-echelon kernel
/// vectors of `d_q`, pruned against the image of `d_{q+1}`. Deterministic
/// over the lexicographic monomial order.
pub fn homology_representatives(algebra: &FinLieAlgebra, q: usize) -> Vec<Chain> {
    if q > algebra.dim() {
        return Vec::new();
    }
    let basis = chain_basis(algebra, q);
    let kernel: Vec<QVector> = if q == 0 {
        vec![QVector::unit(0)]
    } else {
        differential_matrix(algebra, q).kernel_basis()
    };
    let image = differential_matrix(algebra, q + 1);
    let mut probe = RankProbe::new();
    for j in 0..image.cols() {
        probe.insert(&image.column(j));
    }
    let mut reps = Vec::new();
    for v in kernel {
        if probe.insert(&v) {
            let mut chain = Chain::zero(q);
            for (i, c) in v.iter() {
                chain.add_term(basis[i].clone(), c.clone());
            }
            reps.push(chain);
        }
    }
    reps
}

/// One homology table row for a truncation: `{m, q, dim_chain, rank_d, dim}`.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyRecord {
    pub m: usize,
    pub q: usize,
    pub dim_chain: usize,
    pub rank_d: usize,
    pub dim: usize,
}

/// Full homology row of a truncation-`m` algebra at degree `q`.
pub fn homology_record(algebra: &FinLieAlgebra, m: usize, q: usize) -> HomologyRecord {
    HomologyRecord {
        m,
        q,
        dim_chain: chain_basis(algebra, q).len(),
        rank_d: rank_d(algebra, q),
        dim: homology_dim(algebra, q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::lamplighter_truncation;
    use crate::linalg::rat_int;

    fn mono(indices: &[usize]) -> ChainMonomial {
        ChainMonomial::new(indices.to_vec()).unwrap()
    }

    #[test]
    fn basis_enumeration() {
        let l = lamplighter_truncation(2).unwrap(); // dim 3
        let b = chain_basis(&l, 2);
        assert_eq!(b, vec![mono(&[0, 1]), mono(&[0, 2]), mono(&[1, 2])]);
        assert_eq!(chain_basis(&l, 0), vec![ChainMonomial::empty()]);
        assert!(chain_basis(&l, 4).is_empty());
        for m in 1..=6 {
            let l = lamplighter_truncation(m).unwrap();
            assert_eq!(chain_basis(&l, 2).len(), (m + 1) * m / 2);
        }
    }

    #[test]
    fn canonicalization_signs() {
        let (m, s) = ChainMonomial::canonicalize(vec![3, 0, 1]).unwrap();
        assert_eq!(m, mono(&[0, 1, 3]));
        assert_eq!(s, 1); // cyclic: two transpositions
        let (m, s) = ChainMonomial::canonicalize(vec![1, 0]).unwrap();
        assert_eq!(m, mono(&[0, 1]));
        assert_eq!(s, -1);
        assert!(ChainMonomial::canonicalize(vec![2, 2]).is_none());
    }

    #[test]
    fn paper_identity_for_xx_t_wedges() {
        // d(s x^r ∧ s x^s ∧ s t) = s x^{r+1} ∧ s x^s + s x^r ∧ s x^{s+1},
        // with terms truncated at the cutoff and killed on index collision
        let m = 6;
        let l = lamplighter_truncation(m).unwrap();
        let t = m;
        for r in 0..m {
            for s in (r + 1)..m {
                let c = Chain::from_monomial(mono(&[r, s, t]), rat_int(1));
                let mut expected = Chain::zero(2);
                if r + 1 < m && r + 1 != s {
                    expected.add_scaled(
                        &Chain::from_indices(vec![r + 1, s], rat_int(1)),
                        &rat_int(1),
                    );
                }
                if s + 1 < m {
                    expected.add_scaled(
                        &Chain::from_indices(vec![r, s + 1], rat_int(1)),
                        &rat_int(1),
                    );
                }
                assert_eq!(differential(&l, &c), expected, "r={r} s={s}");
            }
        }
    }

    #[test]
    fn pure_x_wedges_are_cycles() {
        let l = lamplighter_truncation(5).unwrap();
        let c = Chain::from_monomial(mono(&[0, 2, 4]), rat_int(3));
        assert!(differential(&l, &c).is_zero());
    }

    #[test]
    fn telescoping_boundary_example() {
        // d(s x^0 ∧ s x^3 ∧ s t - s x^1 ∧ s x^2 ∧ s t) = s x^0 ∧ s x^4
        let l = lamplighter_truncation(5).unwrap();
        let t = 5;
        let mut c = Chain::from_monomial(mono(&[0, 3, t]), rat_int(1));
        c.add_term(mono(&[1, 2, t]), rat_int(-1));
        let expected = Chain::from_monomial(mono(&[0, 4]), rat_int(1));
        assert_eq!(differential(&l, &c), expected);
    }

    #[test]
    fn differential_matrix_degree_one_is_zero() {
        let l = lamplighter_truncation(4).unwrap();
        let d1 = differential_matrix(&l, 1);
        assert_eq!((d1.rows(), d1.cols()), (1, 5));
        assert!(d1.is_zero());
    }

    #[test]
    fn differential_matrix_m2_q2_rank_one() {
        let l = lamplighter_truncation(2).unwrap();
        let d2 = differential_matrix(&l, 2);
        assert_eq!((d2.rows(), d2.cols()), (3, 3));
        assert_eq!(d2.rank(), 1);
    }

    #[test]
    fn d_squared_vanishes() {
        for m in 1..=5 {
            let l = lamplighter_truncation(m).unwrap();
            for q in 2..=l.dim() {
                let dq = differential_matrix(&l, q - 1);
                let dq1 = differential_matrix(&l, q);
                assert!(dq.mul(&dq1).is_zero(), "m={m} q={q}");
            }
        }
    }

    #[test]
    fn homology_dims_small() {
        for m in 1..=6 {
            let l = lamplighter_truncation(m).unwrap();
            assert_eq!(homology_dim(&l, 0), 1, "H_0 at m={m}");
            assert_eq!(homology_dim(&l, 1), 2, "H_1 at m={m}");
            // top degree: the full wedge is a cycle (its differential kills
            // every term by collision or the cutoff), so H_top = 1
            let top = l.dim();
            assert!(differential_matrix(&l, top).is_zero(), "d_top at m={m}");
            assert_eq!(homology_dim(&l, top), 1, "H_top at m={m}");
        }
    }

    #[test]
    fn euler_characteristic_matches() {
        for m in 1..=6 {
            let l = lamplighter_truncation(m).unwrap();
            let mut chi_chains: i64 = 0;
            let mut chi_homology: i64 = 0;
            for q in 0..=l.dim() {
                let sign = if q % 2 == 0 { 1 } else { -1 };
                chi_chains += sign * chain_basis(&l, q).len() as i64;
                chi_homology += sign * homology_dim(&l, q) as i64;
            }
            assert_eq!(chi_chains, chi_homology, "m={m}");
        }
    }

    #[test]
    fn representatives_q0_and_q1() {
        let l = lamplighter_truncation(4).unwrap();
        let r0 = homology_representatives(&l, 0);
        assert_eq!(r0.len(), 1);
        assert_eq!(r0[0].coeff(&ChainMonomial::empty()), rat_int(1));

        // H_1 representatives reduce to {s x^0, s t} modulo the image of d_2,
        // which is spanned by s x^1, ..., s x^{m-1}
        let r1 = homology_representatives(&l, 1);
        assert_eq!(r1.len(), 2);
        let m = 4;
        let mut reduced = Vec::new();
        for rep in &r1 {
            let x0 = rep.coeff(&mono(&[0]));
            let t = rep.coeff(&mono(&[m]));
            reduced.push((x0, t));
        }
        // the two (x^0, t)-parts must be linearly independent
        let det = &reduced[0].0 * &reduced[1].1 - &reduced[0].1 * &reduced[1].0;
        assert!(!det.is_zero());
    }

    #[test]
    fn representative_class_of_x0_wedge_x3() {
        // q = 2, m = 4: the class of s x^0 ∧ s x^3 is nonzero and expressible
        // in the representative basis modulo boundaries
        let l = lamplighter_truncation(4).unwrap();
        let basis = chain_basis(&l, 2);
        let reps = homology_representatives(&l, 2);
        assert!(!reps.is_empty());
        let image = differential_matrix(&l, 3);
        let target = mono(&[0, 3]);
        let pos = basis.binary_search(&target).unwrap();
        // not a boundary
        assert!(!image.in_image(&QVector::unit(pos)));
        // but in the span of [image | representatives]
        let rep_cols: Vec<QVector> = reps
            .iter()
            .map(|c| {
                QVector::from_entries(c.terms().map(|(m, r)| {
                    (basis.binary_search(m).unwrap(), r.clone())
                }))
            })
            .collect();
        let stacked = image.with_appended_columns(&rep_cols);
        let witness = stacked.solve(&QVector::unit(pos)).expect("cycle class");
        let rep_part_nonzero = (0..rep_cols.len())
            .any(|k| !witness.get(image.cols() + k).is_zero());
        assert!(rep_part_nonzero);
    }

    #[test]
    fn representative_count_and_independence() {
        for m in 2..=4 {
            let l = lamplighter_truncation(m).unwrap();
            for q in 0..=l.dim() {
                let reps = homology_representatives(&l, q);
                assert_eq!(reps.len(), homology_dim(&l, q), "m={m} q={q}");
                if q == 0 {
                    continue;
                }
                // classes independent: [image | reps] has rank rank + h
                let basis = chain_basis(&l, q);
                let image = differential_matrix(&l, q + 1);
                let cols: Vec<QVector> = reps
                    .iter()
                    .map(|c| {
                        QVector::from_entries(c.terms().map(|(mn, r)| {
                            (basis.binary_search(mn).unwrap(), r.clone())
                        }))
                    })
                    .collect();
                let stacked = image.with_appended_columns(&cols);
                assert_eq!(stacked.rank(), image.rank() + reps.len());
                // and each representative is a cycle
                for rep in &reps {
                    assert!(differential(&l, rep).is_zero());
                }
            }
        }
    }

    #[test]
    fn chain_json_terms() {
        let mut c = Chain::from_monomial(mono(&[0, 3]), rat_int(1));
        c.add_term(mono(&[1, 2]), crate::linalg::rat(-1, 2));
        let json = serde_json::to_string(&c.to_terms()).unwrap();
        assert_eq!(
            json,
            r#"[{"indices":[0,3],"coeff":"1"},{"indices":[1,2],"coeff":"-1/2"}]"#
        );
    }
}
