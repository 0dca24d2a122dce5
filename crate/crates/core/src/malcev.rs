//! Exact exponential/logarithm between strictly triangular and
//! unitriangular matrices, the induced group law, and the stage-`m`
//! correspondence with the lamplighter group presentation.
//!
//! Strictly upper triangular matrices are nilpotent, so `exp` and `log` are
//! polynomials and mutually inverse bijections; `bch(X, Y) = log(exp X · exp Y)`
//! realizes the group law on the Lie side exactly, with no series in
//! iterated brackets.
//!
//! On the group side, words in the presentation generators `a, b` map into
//! unitriangular matrices through `ψ(a) = exp(B_0) = I + B_0` and
//! `ψ(b) = exp(-A)` (the sign matters: flipping it silently transposes the
//! direction of the shift `[B_r, A] = B_{r+1}`). Conjugation is
//! `u^v = v·u·v^{-1}`, so `ψ(a^{b^i}) = e^{-iA} e^{B_0} e^{iA} = I + B_0 e^{iA}`
//! and every defining relation `[a, a^{b^i}]` lands on the identity.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lie::{e_model, EMatrix};
use crate::linalg::{rat_int, QMatrix, QVector, Rat};
use num_traits::{One, Zero};

/// Dense square matrix with zeros on and below the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictTriangular {
    size: usize,
    entries: Vec<Vec<Rat>>,
}

/// Dense square matrix with unit diagonal and zeros below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unitriangular {
    size: usize,
    entries: Vec<Vec<Rat>>,
}

impl StrictTriangular {
    pub fn zero(size: usize) -> Self {
        Self {
            size,
            entries: vec![vec![Rat::zero(); size]; size],
        }
    }

    pub fn from_entries(entries: Vec<Vec<Rat>>) -> Result<Self> {
        let size = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidMatrix("ragged rows".into()));
            }
            for (j, v) in row.iter().enumerate() {
                if i >= j && !v.is_zero() {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i},{j}) below or on the diagonal is nonzero"
                    )));
                }
            }
        }
        Ok(Self { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rat) {
        assert!(i < j, "strictly triangular entries need i < j");
        self.entries[i][j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Rat::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        let mut out = Self::zero(self.size);
        for i in 0..self.size {
            for j in (i + 1)..self.size {
                out.entries[i][j] = &self.entries[i][j] + &other.entries[i][j];
            }
        }
        out
    }

    pub fn scaled(&self, scale: &Rat) -> Self {
        let mut out = Self::zero(self.size);
        for i in 0..self.size {
            for j in (i + 1)..self.size {
                out.entries[i][j] = &self.entries[i][j] * scale;
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-Rat::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        let mut out = Self::zero(self.size);
        for i in 0..self.size {
            for j in (i + 2)..self.size {
                let mut acc = Rat::zero();
                for k in (i + 1)..j {
                    acc += &self.entries[i][k] * &other.entries[k][j];
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self).neg())
    }

    /// Build from the expansion of a model element.
    pub fn from_ematrix(e: &EMatrix) -> Self {
        let expanded = e.expand();
        let mut out = Self::zero(expanded.rows());
        for (i, j, c) in expanded.iter_entries() {
            out.set(i, j, c.clone());
        }
        out
    }

    /// `self · U` for unitriangular `U`; the product stays strict.
    pub fn mul_unitriangular(&self, u: &Unitriangular) -> Self {
        assert_eq!(self.size, u.size);
        let mut out = Self::zero(self.size);
        for i in 0..self.size {
            for j in (i + 1)..self.size {
                let mut acc = Rat::zero();
                for k in (i + 1)..=j {
                    if !self.entries[i][k].is_zero() {
                        acc += &self.entries[i][k] * u.get(k, j);
                    }
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    /// `I + self` as a unitriangular matrix.
    pub fn plus_identity(&self) -> Unitriangular {
        from_nilpotent(self)
    }

    /// Flatten into a sparse vector over row-major coordinates, for span
    /// membership through linear solving.
    pub fn flatten(&self) -> QVector {
        let mut v = QVector::new();
        for i in 0..self.size {
            for j in (i + 1)..self.size {
                if !self.entries[i][j].is_zero() {
                    v.set(i * self.size + j, self.entries[i][j].clone());
                }
            }
        }
        v
    }

    /// Seeded random matrix with numerators in `[-9, 9]` and denominators in
    /// `{1, 2, 3}`: nontrivial arithmetic with bounded bit growth.
    pub fn random<R: Rng>(size: usize, rng: &mut R) -> Self {
        let mut out = Self::zero(size);
        for i in 0..size {
            for j in (i + 1)..size {
                out.entries[i][j] = random_rat(rng);
            }
        }
        out
    }
}

impl Unitriangular {
    pub fn identity(size: usize) -> Self {
        let mut entries = vec![vec![Rat::zero(); size]; size];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = Rat::one();
        }
        Self { size, entries }
    }

    pub fn from_entries(entries: Vec<Vec<Rat>>) -> Result<Self> {
        let size = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidMatrix("ragged rows".into()));
            }
            for (j, v) in row.iter().enumerate() {
                if i == j && !v.is_one() {
                    return Err(Error::InvalidMatrix(format!("diagonal ({i},{i}) is not 1")));
                }
                if i > j && !v.is_zero() {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i},{j}) below the diagonal is nonzero"
                    )));
                }
            }
        }
        Ok(Self { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i][j]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        let mut out = Self::identity(self.size);
        for i in 0..self.size {
            for j in (i + 1)..self.size {
                let mut acc = Rat::zero();
                for k in i..=j {
                    acc += &self.entries[i][k] * &other.entries[k][j];
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    /// The strictly triangular part `U - I`.
    pub fn nilpotent_part(&self) -> StrictTriangular {
        let mut out = StrictTriangular::zero(self.size);
        for i in 0..self.size {
            for j in (i + 1)..self.size {
                out.entries[i][j] = self.entries[i][j].clone();
            }
        }
        out
    }

    /// Exact inverse via the terminating Neumann series of `U - I`.
    pub fn inverse(&self) -> Self {
        let n = self.nilpotent_part();
        let mut acc = StrictTriangular::zero(self.size);
        let mut power = n.neg();
        for _ in 1..self.size {
            acc = acc.add(&power);
            power = power.mul(&n.neg());
        }
        from_nilpotent(&acc)
    }

    /// Integer power, via the inverse for negative exponents.
    pub fn pow(&self, exponent: i64) -> Self {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity(self.size);
        for _ in 0..exponent.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }
}

fn random_rat<R: Rng>(rng: &mut R) -> Rat {
    let numer: i64 = rng.random_range(-9..=9);
    let denom: i64 = [1, 2, 3][rng.random_range(0..3usize)];
    crate::linalg::rat(numer, denom)
}

fn from_nilpotent(n: &StrictTriangular) -> Unitriangular {
    let mut u = Unitriangular::identity(n.size);
    for i in 0..n.size {
        for j in (i + 1)..n.size {
            u.entries[i][j] = n.entries[i][j].clone();
        }
    }
    u
}

/// `exp M = Σ_{k < size} M^k / k!`, exact because `M` is nilpotent.
pub fn mat_exp(m: &StrictTriangular) -> Unitriangular {
    let size = m.size;
    let mut acc = StrictTriangular::zero(size);
    let mut term = m.clone();
    let mut factorial = Rat::one();
    for k in 1..size {
        factorial *= rat_int(k as i64);
        acc = acc.add(&term.scaled(&factorial.recip()));
        term = term.mul(m);
    }
    from_nilpotent(&acc)
}

/// `log U = Σ_{k < size} (-1)^{k+1} (U-I)^k / k`, exact and inverse to `exp`.
pub fn mat_log(u: &Unitriangular) -> StrictTriangular {
    let n = u.nilpotent_part();
    let mut acc = StrictTriangular::zero(u.size);
    let mut power = n.clone();
    for k in 1..u.size {
        let coeff = if k % 2 == 1 {
            Rat::one() / rat_int(k as i64)
        } else {
            -Rat::one() / rat_int(k as i64)
        };
        acc = acc.add(&power.scaled(&coeff));
        power = power.mul(&n);
    }
    acc
}

/// The group law transported to the Lie side:
/// `bch(X, Y) = log(exp X · exp Y)`, total and exact by nilpotency.
pub fn bch(x: &StrictTriangular, y: &StrictTriangular) -> Result<StrictTriangular> {
    if x.size != y.size {
        return Err(Error::SizeMismatch {
            left: x.size,
            right: y.size,
        });
    }
    Ok(mat_log(&mat_exp(x).mul(&mat_exp(y))))
}

/// Presentation generators of the lamplighter group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    A,
    B,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::A => write!(f, "a"),
            Generator::B => write!(f, "b"),
        }
    }
}

/// A word in the generators, kept normalized: nonzero exponents and no two
/// adjacent letters on the same generator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupWord {
    letters: Vec<(Generator, i64)>,
}

impl GroupWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator) -> Self {
        Self::power(g, 1)
    }

    pub fn power(g: Generator, exponent: i64) -> Self {
        let mut w = Self::empty();
        w.push(g, exponent);
        w
    }

    pub fn letters(&self) -> &[(Generator, i64)] {
        &self.letters
    }

    fn push(&mut self, g: Generator, exponent: i64) {
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == g {
                last.1 += exponent;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((g, exponent));
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &(g, e) in &other.letters {
            out.push(g, e);
        }
        out
    }

    pub fn inverse(&self) -> Self {
        let mut out = Self::empty();
        for &(g, e) in self.letters.iter().rev() {
            out.push(g, -e);
        }
        out
    }

    /// `self` conjugated by `v`: `v · self · v^{-1}`.
    pub fn conjugated_by(&self, v: &Self) -> Self {
        v.concat(self).concat(&v.inverse())
    }

    /// The commutator `[u, v] = u v u^{-1} v^{-1}`.
    pub fn commutator(u: &Self, v: &Self) -> Self {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, (g, e)) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Parse words like `b^-2 a b^2 a^-1`; the empty string (or `1`) is the
    /// identity.
    fn from_str(s: &str) -> Result<Self> {
        let mut w = GroupWord::empty();
        for token in s.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (head, exp) = match token.split_once('^') {
                Some((h, e)) => {
                    let exp: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{token}`")))?;
                    (h, exp)
                }
                None => (token, 1),
            };
            let g = match head {
                "a" => Generator::A,
                "b" => Generator::B,
                _ => return Err(Error::Parse(format!("unknown generator `{head}`"))),
            };
            w.push(g, exp);
        }
        Ok(w)
    }
}

/// The conjugate `a^{b^i} = b^i · a · b^{-i}`.
pub fn conjugated_a(i: i64) -> GroupWord {
    GroupWord::generator(Generator::A).conjugated_by(&GroupWord::power(Generator::B, i))
}

/// The defining relation `[a, a^{b^i}]` of the lamplighter presentation.
pub fn lamplighter_relation(i: i64) -> GroupWord {
    GroupWord::commutator(&GroupWord::generator(Generator::A), &conjugated_a(i))
}

/// Images of the generators at stage `m`: `ψ(a) = exp(B_0)`, `ψ(b) = exp(-A)`.
pub fn psi_generators(m: usize) -> Result<(Unitriangular, Unitriangular)> {
    let (a, bs) = e_model(m)?;
    let psi_a = mat_exp(&StrictTriangular::from_ematrix(&bs[0]));
    let psi_b = mat_exp(&StrictTriangular::from_ematrix(&a).neg());
    Ok((psi_a, psi_b))
}

/// Evaluate a word in `T(m+1)` through the stage-`m` generator images.
pub fn psi_eval(word: &GroupWord, m: usize) -> Result<Unitriangular> {
    let (psi_a, psi_b) = psi_generators(m)?;
    let mut out = Unitriangular::identity(m + 1);
    for &(g, e) in word.letters() {
        let factor = match g {
            Generator::A => psi_a.pow(e),
            Generator::B => psi_b.pow(e),
        };
        out = out.mul(&factor);
    }
    Ok(out)
}

/// Sample pairs from the span of `basis`, multiply their exponentials, and
/// test that the logarithm of the product stays inside the span (a linear
/// solve in the span coordinates). Returns true when every trial stays in.
pub fn span_closure_probe(basis: &[StrictTriangular], trials: usize, seed: u64) -> bool {
    if basis.is_empty() {
        return true;
    }
    let size = basis[0].size();
    let columns: Vec<QVector> = basis.iter().map(StrictTriangular::flatten).collect();
    let span = QMatrix::from_columns(size * size, &columns);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| {
        let mut acc = StrictTriangular::zero(size);
        for b in basis {
            acc = acc.add(&b.scaled(&random_rat(rng)));
        }
        acc
    };
    for _ in 0..trials {
        let p = sample(&mut rng);
        let q = sample(&mut rng);
        let z = mat_log(&mat_exp(&p).mul(&mat_exp(&q)));
        if !span.in_image(&z.flatten()) {
            return false;
        }
    }
    true
}

/// Closure probe for the stage-`m` model span `{A, B_0, ..., B_{m-1}}`:
/// true when `log(exp P · exp Q)` lands back in the span for every sampled
/// pair, i.e. the exponential image behaves as a subgroup.
pub fn group_closure_probe(m: usize, trials: usize, seed: u64) -> Result<bool> {
    let (a, bs) = e_model(m)?;
    let mut basis = vec![StrictTriangular::from_ematrix(&a)];
    basis.extend(bs.iter().map(StrictTriangular::from_ematrix));
    Ok(span_closure_probe(&basis, trials, seed))
}

/// JSON form of a matrix: row-major nested arrays of exact `p/q` strings.
#[derive(Serialize, Deserialize)]
struct MatrixJson(Vec<Vec<String>>);

fn entries_to_json(entries: &[Vec<Rat>]) -> String {
    let rows = entries
        .iter()
        .map(|row| row.iter().map(Rat::to_string).collect())
        .collect();
    serde_json::to_string(&MatrixJson(rows)).expect("serializable")
}

fn entries_from_json(s: &str) -> Result<Vec<Vec<Rat>>> {
    let MatrixJson(rows) =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|cell| {
                    Rat::from_str(&cell)
                        .map_err(|_| Error::Parse(format!("bad rational `{cell}`")))
                })
                .collect()
        })
        .collect()
}

impl StrictTriangular {
    pub fn to_json(&self) -> String {
        entries_to_json(&self.entries)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_entries(entries_from_json(s)?)
    }
}

impl Unitriangular {
    pub fn to_json(&self) -> String {
        entries_to_json(&self.entries)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_entries(entries_from_json(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn b0_strict(m: usize) -> StrictTriangular {
        let (_, bs) = e_model(m).unwrap();
        StrictTriangular::from_ematrix(&bs[0])
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert!(mat_exp(&StrictTriangular::zero(4)).is_identity());
    }

    #[test]
    fn exp_of_b0_is_i_plus_b0() {
        let b0 = b0_strict(3);
        let u = mat_exp(&b0);
        let mut expected = Unitriangular::identity(4);
        expected.entries[0][1] = Rat::one();
        assert_eq!(u, expected);
    }

    #[test]
    fn exp_of_superdiagonal_has_corner_half() {
        let mut n = StrictTriangular::zero(3);
        n.set(0, 1, rat_int(1));
        n.set(1, 2, rat_int(1));
        let u = mat_exp(&n);
        assert_eq!(*u.get(0, 1), rat_int(1));
        assert_eq!(*u.get(1, 2), rat_int(1));
        assert_eq!(*u.get(0, 2), rat(1, 2));
    }

    #[test]
    fn log_of_identity_is_zero() {
        assert!(mat_log(&Unitriangular::identity(5)).is_zero());
    }

    #[test]
    fn log_inverts_exp_on_seeded_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..50 {
            let size = 2 + (trial % 6); // sizes 2..=7
            let m = StrictTriangular::random(size, &mut rng);
            assert_eq!(mat_log(&mat_exp(&m)), m, "trial {trial}");
        }
    }

    #[test]
    fn exp_of_negative_is_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = StrictTriangular::random(5, &mut rng);
            assert_eq!(mat_exp(&m).inverse(), mat_exp(&m.neg()));
        }
    }

    #[test]
    fn bch_degenerates_on_commuting_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let x = StrictTriangular::random(5, &mut rng);
            // y = 2x + x^2/3 commutes with x
            let y = x.scaled(&rat_int(2)).add(&x.mul(&x).scaled(&rat(1, 3)));
            assert_eq!(bch(&x, &y).unwrap(), x.add(&y));
        }
    }

    #[test]
    fn bch_identity_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = StrictTriangular::random(4, &mut rng);
        let zero = StrictTriangular::zero(4);
        assert_eq!(bch(&x, &zero).unwrap(), x);
        assert_eq!(bch(&zero, &x).unwrap(), x);
    }

    #[test]
    fn bch_size3_closed_form() {
        // size 3 kills all triple products, so the quadratic truncation
        // X + Y + [X,Y]/2 is an independent route to the same element
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..20 {
            let x = StrictTriangular::random(3, &mut rng);
            let y = StrictTriangular::random(3, &mut rng);
            let closed = x.add(&y).add(&x.commutator(&y).scaled(&rat(1, 2)));
            assert_eq!(bch(&x, &y).unwrap(), closed);
        }
    }

    #[test]
    fn bch_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..5 {
            let x = StrictTriangular::random(4, &mut rng);
            let y = StrictTriangular::random(4, &mut rng);
            let z = StrictTriangular::random(4, &mut rng);
            let left = bch(&bch(&x, &y).unwrap(), &z).unwrap();
            let right = bch(&x, &bch(&y, &z).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn bch_rejects_size_mismatch() {
        let x = StrictTriangular::zero(3);
        let y = StrictTriangular::zero(4);
        assert!(matches!(bch(&x, &y), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn word_parsing_and_display() {
        let w: GroupWord = "b^-2 a b^2 a^-1".parse().unwrap();
        assert_eq!(
            w.letters(),
            &[
                (Generator::B, -2),
                (Generator::A, 1),
                (Generator::B, 2),
                (Generator::A, -1)
            ]
        );
        assert_eq!(w.to_string(), "b^-2 a b^2 a^-1");
        let roundtrip: GroupWord = w.to_string().parse().unwrap();
        assert_eq!(roundtrip, w);
        assert_eq!(GroupWord::empty().to_string(), "1");
        assert!(GroupWord::from_str("c^2").is_err());
    }

    #[test]
    fn word_normalization() {
        let w: GroupWord = "a a".parse().unwrap();
        assert_eq!(w.letters(), &[(Generator::A, 2)]);
        let cancel: GroupWord = "a b b^-1 a^-1".parse().unwrap();
        assert!(cancel.letters().is_empty());
        let w = GroupWord::generator(Generator::A);
        assert!(w.concat(&w.inverse()).letters().is_empty());
    }

    #[test]
    fn psi_of_conjugates_matches_closed_form() {
        // ψ(a^{b^i}) = I + B_0 · exp(iA)
        for m in 1..=6 {
            let (a, bs) = e_model(m).unwrap();
            let a_strict = StrictTriangular::from_ematrix(&a);
            let b0 = StrictTriangular::from_ematrix(&bs[0]);
            let bound = (m + 2) as i64;
            for i in -bound..=bound {
                let got = psi_eval(&conjugated_a(i), m).unwrap();
                let e_ia = mat_exp(&a_strict.scaled(&rat_int(i)));
                let expected = b0.mul_unitriangular(&e_ia).plus_identity();
                assert_eq!(got, expected, "m={m} i={i}");
            }
        }
    }

    #[test]
    fn psi_kills_the_relations() {
        for m in 1..=6 {
            let bound = (m + 2) as i64;
            for i in -bound..=bound {
                let w = lamplighter_relation(i);
                assert!(psi_eval(&w, m).unwrap().is_identity(), "m={m} i={i}");
            }
        }
    }

    #[test]
    fn psi_of_empty_word_is_identity() {
        assert!(psi_eval(&GroupWord::empty(), 4).unwrap().is_identity());
    }

    #[test]
    fn psi_is_a_homomorphism_on_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let m = 4;
        for _ in 0..20 {
            let mut w1 = GroupWord::empty();
            let mut w2 = GroupWord::empty();
            for _ in 0..4 {
                let g = if rng.random_range(0..2) == 0 {
                    Generator::A
                } else {
                    Generator::B
                };
                w1 = w1.concat(&GroupWord::power(g, rng.random_range(-3..=3)));
                let g = if rng.random_range(0..2) == 0 {
                    Generator::A
                } else {
                    Generator::B
                };
                w2 = w2.concat(&GroupWord::power(g, rng.random_range(-3..=3)));
            }
            let lhs = psi_eval(&w1.concat(&w2), m).unwrap();
            let rhs = psi_eval(&w1, m).unwrap().mul(&psi_eval(&w2, m).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn model_span_is_a_subalgebra() {
        for m in 1..=5 {
            let (a, bs) = e_model(m).unwrap();
            let mut basis = vec![StrictTriangular::from_ematrix(&a)];
            basis.extend(bs.iter().map(StrictTriangular::from_ematrix));
            let columns: Vec<QVector> =
                basis.iter().map(StrictTriangular::flatten).collect();
            let span = QMatrix::from_columns((m + 1) * (m + 1), &columns);
            for x in &basis {
                for y in &basis {
                    assert!(span.in_image(&x.commutator(y).flatten()), "m={m}");
                }
            }
        }
    }

    #[test]
    fn closure_probe_passes_on_model_span() {
        for m in 1..=4 {
            assert!(group_closure_probe(m, 25, 0x4c41_4d50).unwrap(), "m={m}");
        }
    }

    #[test]
    fn closure_probe_on_partial_spans() {
        // {A, B_1} at m=2 is an honest subalgebra ([B_1, A] = 0): closed
        let (a, bs) = e_model(2).unwrap();
        let basis2 = vec![
            StrictTriangular::from_ematrix(&a),
            StrictTriangular::from_ematrix(&bs[1]),
        ];
        assert!(span_closure_probe(&basis2, 25, 1));

        // {A, B_1} at m=4 is not: log(e^{B_1} e^{A}) has a B_2 component 1/2
        let (a, bs) = e_model(4).unwrap();
        let a4 = StrictTriangular::from_ematrix(&a);
        let b1 = StrictTriangular::from_ematrix(&bs[1]);
        let z = mat_log(&mat_exp(&b1).mul(&mat_exp(&a4)));
        let b2 = StrictTriangular::from_ematrix(&bs[2]);
        let columns = vec![a4.flatten(), b1.flatten()];
        let span = QMatrix::from_columns(25, &columns);
        assert!(!span.in_image(&z.flatten()));
        // the missing component really is B_2/2
        let mut coeff = Rat::zero();
        for i in 0..5 {
            for j in (i + 1)..5 {
                if !b2.get(i, j).is_zero() {
                    coeff = z.get(i, j).clone();
                }
            }
        }
        assert_eq!(coeff, rat(1, 2));
    }

    #[test]
    fn matrix_json_roundtrip() {
        let mut m = StrictTriangular::zero(3);
        m.set(0, 1, rat(1, 2));
        m.set(0, 2, rat_int(-3));
        let json = m.to_json();
        assert_eq!(json, r#"[["0","1/2","-3"],["0","0","0"],["0","0","0"]]"#);
        assert_eq!(StrictTriangular::from_json(&json).unwrap(), m);
        let u = mat_exp(&m);
        assert_eq!(Unitriangular::from_json(&u.to_json()).unwrap(), u);
        assert!(StrictTriangular::from_json("[[\"1\"]]").is_err());
    }
}
