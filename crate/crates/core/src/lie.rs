//! Finite-dimensional Lie algebras by structure constants, the lamplighter
//! truncations, and their matrix model.
//!
//! The lamplighter Lie algebra is `Q[x] ⋊ Qt` with `[p, t] = x·p` and the
//! polynomial part abelian. Its truncation of size `m` has basis
//! `x^0 < x^1 < ... < x^{m-1} < t` (this order is fixed globally; every sign
//! downstream depends on it) and brackets `[x^r, t] = x^{r+1}`, truncated to
//! zero at the cutoff. The isomorphic matrix model lives inside the strictly
//! upper triangular `(m+1) x (m+1)` matrices: a free first row
//! `(0, b_0, ..., b_{m-1})` and a constant superdiagonal `a` below it.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, QVector, Rat};
use num_traits::{One, Zero};

/// Basis label of a lamplighter truncation: the monomial `x^r` or the
/// generator `t`. Within a truncation of size `m`, `X(r)` requires `r < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LampLabel {
    X(usize),
    T,
}

impl fmt::Display for LampLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LampLabel::X(r) => write!(f, "x^{r}"),
            LampLabel::T => write!(f, "t"),
        }
    }
}

/// A finite-dimensional Lie algebra given by structure constants.
///
/// Brackets are stored for ordered pairs `i < j` only; antisymmetry and
/// `[z_i, z_i] = 0` are implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinLieAlgebra {
    labels: Vec<String>,
    brackets: BTreeMap<(usize, usize), QVector>,
}

impl FinLieAlgebra {
    pub fn new(labels: Vec<String>, brackets: BTreeMap<(usize, usize), QVector>) -> Result<Self> {
        let dim = labels.len();
        for (&(i, j), v) in &brackets {
            if i >= j {
                return Err(Error::InvalidStructure(format!(
                    "bracket key ({i},{j}) is not an ordered pair"
                )));
            }
            if j >= dim {
                return Err(Error::IndexOutOfRange { index: j, dim });
            }
            if let Some(top) = v.max_index() {
                if top >= dim {
                    return Err(Error::IndexOutOfRange { index: top, dim });
                }
            }
        }
        Ok(Self { labels, brackets })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `[z_i, z_j]` for any pair, with antisymmetry folded in.
    pub fn bracket_basis(&self, i: usize, j: usize) -> QVector {
        if i == j {
            return QVector::new();
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        let v = self.brackets.get(&(a, b)).cloned().unwrap_or_default();
        if flip {
            v.scaled(&-Rat::one())
        } else {
            v
        }
    }

    /// Bilinear, antisymmetric extension of the structure constants.
    pub fn bracket(&self, v: &QVector, w: &QVector) -> Result<QVector> {
        for side in [v, w] {
            if let Some(top) = side.max_index() {
                if top >= self.dim() {
                    return Err(Error::IndexOutOfRange {
                        index: top,
                        dim: self.dim(),
                    });
                }
            }
        }
        let mut out = QVector::new();
        for (i, a) in v.iter() {
            for (j, b) in w.iter() {
                let coeff = a * b;
                out.add_scaled(&self.bracket_basis(i, j), &coeff);
            }
        }
        Ok(out)
    }

    /// Exact Jacobi identity over all basis triples `i < j < k`.
    pub fn verify_jacobi(&self) -> bool {
        let dim = self.dim();
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    let mut acc = QVector::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.bracket_basis(a, b);
                        let outer = self
                            .bracket(&inner, &QVector::unit(c))
                            .expect("indices in range");
                        acc.add_scaled(&outer, &Rat::one());
                    }
                    if !acc.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Plain-text structure-constant export: a header `dim labels...`
    /// followed by one line `i j k c` per nonzero coefficient, meaning
    /// `[z_i, z_j]` contains `c·z_k`.
    pub fn structure_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.dim().to_string());
        for label in &self.labels {
            out.push(' ');
            out.push_str(label);
        }
        out.push('\n');
        for (&(i, j), v) in &self.brackets {
            for (k, c) in v.iter() {
                out.push_str(&format!("{i} {j} {k} {c}\n"));
            }
        }
        out
    }
}

/// The size-`m` lamplighter truncation: basis `x^0, ..., x^{m-1}, t`,
/// brackets `[x^r, t] = x^{r+1}` (zero once `r+1` hits the cutoff), all
/// `x`-`x` brackets zero.
pub fn lamplighter_truncation(m: usize) -> Result<FinLieAlgebra> {
    if m == 0 {
        return Err(Error::InvalidTruncation);
    }
    let mut labels: Vec<String> = (0..m).map(|r| LampLabel::X(r).to_string()).collect();
    labels.push(LampLabel::T.to_string());
    let t = m;
    let mut brackets = BTreeMap::new();
    for r in 0..m.saturating_sub(1) {
        brackets.insert((r, t), QVector::unit(r + 1));
    }
    FinLieAlgebra::new(labels, brackets)
}

/// Element of the matrix model: the `(m+1) x (m+1)` strictly upper
/// triangular matrix with first row `(0, b_0, ..., b_{m-1})` and constant
/// superdiagonal `a` starting at row 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EMatrix {
    m: usize,
    a: Rat,
    b: Vec<Rat>,
}

impl EMatrix {
    pub fn new(m: usize, a: Rat, b: Vec<Rat>) -> Self {
        assert_eq!(b.len(), m, "need exactly m first-row coefficients");
        Self { m, a, b }
    }

    pub fn zero(m: usize) -> Self {
        Self::new(m, Rat::zero(), vec![Rat::zero(); m])
    }

    pub fn truncation(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &[Rat] {
        &self.b
    }

    /// Expand to the full `(m+1) x (m+1)` matrix.
    pub fn expand(&self) -> QMatrix {
        let n = self.m + 1;
        let mut mat = QMatrix::zero(n, n);
        for (j, c) in self.b.iter().enumerate() {
            mat.set(0, j + 1, c.clone());
        }
        for i in 1..self.m {
            mat.set(i, i + 1, self.a.clone());
        }
        mat
    }

    /// Recognize a matrix as an element of the model span: free first row,
    /// one constant superdiagonal below it, zero elsewhere.
    pub fn from_matrix(mat: &QMatrix) -> Option<EMatrix> {
        let n = mat.rows();
        if n != mat.cols() || n < 2 {
            return None;
        }
        let m = n - 1;
        let mut e = EMatrix::zero(m);
        for (i, j, c) in mat.iter_entries() {
            if i == 0 && j >= 1 {
                e.b[j - 1] = c.clone();
            } else if i >= 1 && j == i + 1 {
                if e.a.is_zero() {
                    e.a = c.clone();
                } else if e.a != *c {
                    return None; // superdiagonal not constant
                }
            } else {
                return None; // entry outside the model pattern
            }
        }
        // reject a non-constant superdiagonal with zeros in it
        if !e.a.is_zero() && m >= 2 {
            for i in 1..m {
                if mat.get(i, i + 1) != e.a {
                    return None;
                }
            }
        }
        Some(e)
    }
}

/// The generators of the model: `A` (pure superdiagonal) and
/// `B_0, ..., B_{m-1}` (first-row units). They satisfy `A·B_r = 0`,
/// `B_r·B_s = 0`, `[B_r, A] = B_r·A = B_{r+1}` for `r <= m-2`, and
/// `[B_{m-1}, A] = 0`.
pub fn e_model(m: usize) -> Result<(EMatrix, Vec<EMatrix>)> {
    if m == 0 {
        return Err(Error::InvalidTruncation);
    }
    let a = EMatrix::new(m, Rat::one(), vec![Rat::zero(); m]);
    let bs = (0..m)
        .map(|r| {
            let mut b = vec![Rat::zero(); m];
            b[r] = Rat::one();
            EMatrix::new(m, Rat::zero(), b)
        })
        .collect();
    Ok((a, bs))
}

fn commutator(x: &QMatrix, y: &QMatrix) -> QMatrix {
    let xy = x.mul(y);
    let yx = y.mul(x);
    let mut out = QMatrix::zero(xy.rows(), xy.cols());
    for (i, j, c) in xy.iter_entries() {
        out.set(i, j, c.clone());
    }
    for (i, j, c) in yx.iter_entries() {
        let cur = out.get(i, j) - c;
        out.set(i, j, cur);
    }
    out
}

fn model_images_flat(m: usize) -> Result<Vec<QVector>> {
    let (a, bs) = e_model(m)?;
    let mut images: Vec<QMatrix> = bs.iter().map(EMatrix::expand).collect();
    images.push(a.expand());
    let n = m + 1;
    Ok(images
        .iter()
        .map(|mat| {
            QVector::from_entries(mat.iter_entries().map(|(i, j, c)| (i * n + j, c.clone())))
        })
        .collect())
}

/// Does the linear map `x^r -> B_r`, `t -> A` carry every structure-constant
/// bracket of `algebra` (which must be `(m+1)`-dimensional, `t` last) to the
/// matrix commutator? At `m = 1` this holds degenerately: both sides are
/// abelian (and `A` expands to zero, so the map is not injective there; see
/// [`phi_images_independent`]).
pub fn phi_check_algebra(algebra: &FinLieAlgebra, m: usize) -> Result<bool> {
    if algebra.dim() != m + 1 {
        return Err(Error::SizeMismatch {
            left: algebra.dim(),
            right: m + 1,
        });
    }
    let (a, bs) = e_model(m)?;
    let mut images: Vec<QMatrix> = bs.iter().map(EMatrix::expand).collect();
    images.push(a.expand());
    let flattened = model_images_flat(m)?;

    for i in 0..algebra.dim() {
        for j in (i + 1)..algebra.dim() {
            let mut lhs = QVector::new();
            for (k, c) in algebra.bracket_basis(i, j).iter() {
                lhs.add_scaled(&flattened[k], c);
            }
            let n = m + 1;
            let comm = commutator(&images[i], &images[j]);
            let rhs = QVector::from_entries(
                comm.iter_entries().map(|(r, s, c)| (r * n + s, c.clone())),
            );
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `phi_check_algebra` against the lamplighter truncation itself.
pub fn phi_check(m: usize) -> Result<bool> {
    phi_check_algebra(&lamplighter_truncation(m)?, m)
}

/// Are the basis images `B_0, ..., B_{m-1}, A` linearly independent? True
/// for every `m >= 2`; at `m = 1` the superdiagonal is empty and `A = 0`.
pub fn phi_images_independent(m: usize) -> Result<bool> {
    let flattened = model_images_flat(m)?;
    let n = m + 1;
    Ok(QMatrix::from_columns(n * n, &flattened).rank() == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat_int, QMatrix};

    #[test]
    fn truncation_of_size_one_is_abelian() {
        let l = lamplighter_truncation(1).unwrap();
        assert_eq!(l.dim(), 2);
        assert!(l.bracket_basis(0, 1).is_zero());
    }

    #[test]
    fn truncation_rejects_zero() {
        assert!(matches!(
            lamplighter_truncation(0),
            Err(Error::InvalidTruncation)
        ));
    }

    #[test]
    fn truncation_m3_bracket_table() {
        let l = lamplighter_truncation(3).unwrap();
        let t = 3;
        assert_eq!(l.bracket_basis(0, t), QVector::unit(1));
        assert_eq!(l.bracket_basis(1, t), QVector::unit(2));
        assert!(l.bracket_basis(2, t).is_zero());
        assert!(l.bracket_basis(0, 1).is_zero());
        assert!(l.bracket_basis(0, 2).is_zero());
        assert!(l.bracket_basis(1, 2).is_zero());
    }

    #[test]
    fn bracket_is_antisymmetric_and_linear() {
        let l = lamplighter_truncation(3).unwrap();
        let v = QVector::from_entries([(0, rat_int(1)), (1, rat_int(1))]);
        let t = QVector::unit(3);
        // bracket(v, v) = 0
        assert!(l.bracket(&v, &v).unwrap().is_zero());
        // [x^0 + x^1, t] = x^1 + x^2
        let expect = QVector::from_entries([(1, rat_int(1)), (2, rat_int(1))]);
        assert_eq!(l.bracket(&v, &t).unwrap(), expect);
        // [t, x^0] = -x^1
        let back = l.bracket(&t, &QVector::unit(0)).unwrap();
        assert_eq!(back, QVector::unit(1).scaled(&rat_int(-1)));
    }

    #[test]
    fn bracket_rejects_out_of_range() {
        let l = lamplighter_truncation(2).unwrap();
        let bad = QVector::unit(7);
        assert!(matches!(
            l.bracket(&bad, &QVector::unit(0)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn jacobi_holds_up_to_m10() {
        for m in 1..=10 {
            assert!(lamplighter_truncation(m).unwrap().verify_jacobi(), "m={m}");
        }
    }

    #[test]
    fn jacobi_detects_corruption() {
        // lamplighter m=3 table plus a spurious [x^0, x^1] = x^0; then
        // J(x^0, x^1, t) = [x^0, t] = x^1 != 0
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 3), QVector::unit(1));
        brackets.insert((1, 3), QVector::unit(2));
        brackets.insert((0, 1), QVector::unit(0));
        let labels = lamplighter_truncation(3).unwrap().labels().to_vec();
        let l = FinLieAlgebra::new(labels, brackets).unwrap();
        assert!(!l.verify_jacobi());
    }

    #[test]
    fn jacobi_trivial_on_abelian() {
        let l = FinLieAlgebra::new(
            (0..5).map(|i| format!("z{i}")).collect(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(l.verify_jacobi());
    }

    #[test]
    fn e_model_relations_m2() {
        let (a, bs) = e_model(2).unwrap();
        let (a, b0, b1) = (a.expand(), bs[0].expand(), bs[1].expand());
        assert_eq!(commutator(&b0, &a), b1);
        assert!(commutator(&b1, &a).is_zero());
        assert!(b0.mul(&b1).is_zero());
        assert!(b1.mul(&b0).is_zero());
    }

    #[test]
    fn e_model_products_vanish() {
        for m in 1..=6 {
            let (a, bs) = e_model(m).unwrap();
            let a = a.expand();
            for r in 0..m {
                assert!(a.mul(&bs[r].expand()).is_zero(), "A·B_{r} at m={m}");
                for s in 0..m {
                    assert!(
                        bs[r].expand().mul(&bs[s].expand()).is_zero(),
                        "B_{r}·B_{s} at m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn a_powers_shift_the_superdiagonal() {
        let m = 5;
        let (a, _) = e_model(m).unwrap();
        let a = a.expand();
        let mut power = QMatrix::identity(m + 1);
        for k in 1..=m {
            power = power.mul(&a);
            let mut expected = QMatrix::zero(m + 1, m + 1);
            for i in 1..=m {
                if i + k <= m {
                    expected.set(i, i + k, rat_int(1));
                }
            }
            assert_eq!(power, expected, "A^{k}");
        }
        // nilpotency: A^m = 0 since rows 1..m feed a chain of length m-1
        assert!(power.is_zero());
    }

    #[test]
    fn phi_check_small_truncations() {
        for m in 1..=8 {
            assert!(phi_check(m).unwrap(), "m={m}");
        }
        // injectivity on basis vectors holds from m = 2 on; at m = 1 the
        // model collapses A to zero and only bracket preservation survives
        assert!(!phi_images_independent(1).unwrap());
        for m in 2..=8 {
            assert!(phi_images_independent(m).unwrap(), "m={m}");
        }
    }

    #[test]
    fn phi_check_rejects_scaled_bracket() {
        // redefine [x^0, t] = 2 x^1
        let m = 3;
        let mut brackets = BTreeMap::new();
        brackets.insert((0, m), QVector::unit(1).scaled(&rat_int(2)));
        brackets.insert((1, m), QVector::unit(2));
        let labels = lamplighter_truncation(m).unwrap().labels().to_vec();
        let l = FinLieAlgebra::new(labels, brackets).unwrap();
        assert!(!phi_check_algebra(&l, m).unwrap());
    }

    #[test]
    fn derived_subalgebra_is_the_shifted_x_span() {
        // [L, L] = span(x^1, ..., x^{m-1}): rank of all basis brackets
        for m in 2..=6 {
            let l = lamplighter_truncation(m).unwrap();
            let mut cols = Vec::new();
            for i in 0..l.dim() {
                for j in (i + 1)..l.dim() {
                    cols.push(l.bracket_basis(i, j));
                }
            }
            let image = QMatrix::from_columns(l.dim(), &cols);
            assert_eq!(image.rank(), m - 1, "m={m}");
            // so the abelianization is 2-dimensional (classes of x^0 and t)
            assert_eq!(l.dim() - image.rank(), 2);
            // and x-x brackets vanish: the x-span is abelian
            for r in 0..m {
                for s in (r + 1)..m {
                    assert!(l.bracket_basis(r, s).is_zero());
                }
            }
        }
    }

    #[test]
    fn structure_text_golden_m3() {
        let l = lamplighter_truncation(3).unwrap();
        let expected = "4 x^0 x^1 x^2 t\n0 3 1 1\n1 3 2 1\n";
        assert_eq!(l.structure_text(), expected);
    }

    #[test]
    fn ematrix_pattern_recognition() {
        let (a, bs) = e_model(3).unwrap();
        assert_eq!(EMatrix::from_matrix(&a.expand()), Some(a.clone()));
        assert_eq!(EMatrix::from_matrix(&bs[1].expand()), Some(bs[1].clone()));
        // an off-pattern entry is rejected
        let mut bad = a.expand();
        bad.set(2, 3, rat_int(0));
        assert_eq!(EMatrix::from_matrix(&bad), None);
        let mut bad2 = a.expand();
        bad2.set(1, 3, rat_int(5));
        assert_eq!(EMatrix::from_matrix(&bad2), None);
    }
}
