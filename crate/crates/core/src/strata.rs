//! Weight strata of pure-`x` wedges and the differentials between them.
//!
//! A degree-`q`, weight-`n` stratum `V_{q,n}` is spanned by the sequences
//! `(i_1, ..., i_q)` with `0 <= i_1 < ... < i_q` and `Σ i_j = n` — the pure
//! polynomial wedges `s x^{i_1} ∧ ... ∧ s x^{i_q}`. It splits as
//! `V = W ⊕ E` by whether the least exponent is positive or zero, with
//! projection `ρ: V -> E`.
//!
//! Wedging with `st` and applying the chain differential sends weight `n` to
//! weight `n+1`; the matrix of that map is assembled here by delegating each
//! column to the chain-complex differential inside a large enough
//! truncation, so every sign is derived from the one general formula. The
//! identification used is `Φ ↦ st ∧ Φ` (the suspension in front); with the
//! wedge on the other side every entry flips by `(-1)^q`, which would break
//! the shift squares below, so the convention matters and is pinned by
//! tests.
//!
//! The shift maps `φ(i_1, ..., i_q) = (i_1 - 1, ..., i_q - 1)` on `W` and
//! `ψ(0, i_2, ..., i_q) = (i_2 - 1, ..., i_q - 1)` on `E` are weight-graded
//! bijections onto lower strata; both commute with the differentials
//! (`φ` against `d`, `ψ` against `ρ∘d`), and those two squares transport
//! injectivity down the induction.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::ce::{differential, Chain, ChainMonomial};
use crate::error::{Error, Result};
use crate::lie::lamplighter_truncation;
use crate::linalg::{QMatrix, QVector, Rat};
use num_traits::One;

/// A strictly increasing exponent sequence; its weight is the entry sum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct XSeq {
    exponents: Vec<usize>,
}

impl XSeq {
    pub fn new(exponents: Vec<usize>) -> Result<Self> {
        if exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStructure(format!(
                "exponents {exponents:?} are not strictly increasing"
            )));
        }
        Ok(Self { exponents })
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.exponents.iter().sum()
    }

    pub fn starts_at_zero(&self) -> bool {
        self.exponents.first() == Some(&0)
    }
}

impl fmt::Display for XSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.exponents.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Which part of the splitting `V = W ⊕ E` a basis enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Part {
    /// All sequences of the given weight.
    V,
    /// Least exponent >= 1.
    W,
    /// Least exponent = 0.
    E,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Part::V => "V",
            Part::W => "W",
            Part::E => "E",
        };
        write!(f, "{s}")
    }
}

/// The enumerated basis of one stratum, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumBasis {
    pub q: usize,
    pub n: usize,
    pub part: Part,
    pub elements: Vec<XSeq>,
}

impl StratumBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Position of a sequence in this basis (they are lex-sorted).
    pub fn index_of(&self, seq: &XSeq) -> Option<usize> {
        self.elements.binary_search(seq).ok()
    }
}

fn enumerate_into(
    out: &mut Vec<XSeq>,
    prefix: &mut Vec<usize>,
    slots: usize,
    weight: usize,
    min: usize,
) {
    if slots == 0 {
        if weight == 0 {
            out.push(XSeq {
                exponents: prefix.clone(),
            });
        }
        return;
    }
    // least possible sum of `slots` distinct values starting at `v` is
    // slots*v + slots*(slots-1)/2
    let tri = slots * (slots - 1) / 2;
    let mut v = min;
    while slots * v + tri <= weight {
        prefix.push(v);
        enumerate_into(out, prefix, slots - 1, weight - v, v + 1);
        prefix.pop();
        v += 1;
    }
}

/// All weight-`n`, length-`q` sequences of the requested part, lex-ordered.
/// Empty whenever `n < q(q-1)/2`.
pub fn stratum(q: usize, n: usize, part: Part) -> StratumBasis {
    assert!(q >= 1, "strata need at least one exponent");
    let mut elements = Vec::new();
    let mut prefix = Vec::with_capacity(q);
    match part {
        Part::V => enumerate_into(&mut elements, &mut prefix, q, n, 0),
        Part::W => enumerate_into(&mut elements, &mut prefix, q, n, 1),
        Part::E => {
            prefix.push(0);
            enumerate_into(&mut elements, &mut prefix, q - 1, n, 1);
        }
    }
    StratumBasis {
        q,
        n,
        part,
        elements,
    }
}

/// The matrix of `Φ ↦ d(st ∧ Φ)` from `V_{q,n}` to `V_{q,n+1}`, computed in
/// the ambient truncation of size `ambient` (which must exceed every
/// exponent that can appear, i.e. `ambient >= n + 2`). Entries are
/// independent of the ambient size once it fits; that freedom is what the
/// witness checks exercise.
pub fn d_stratum_ambient(q: usize, n: usize, ambient: usize) -> Result<QMatrix> {
    assert!(q >= 1);
    if ambient < n + 2 {
        return Err(Error::AmbientTooSmall {
            ambient,
            weight: n,
        });
    }
    let source = stratum(q, n, Part::V);
    let target = stratum(q, n + 1, Part::V);
    let algebra = lamplighter_truncation(ambient)?;
    let t_index = ambient;
    let mut mat = QMatrix::zero(target.dim(), source.dim());
    for (col, seq) in source.elements.iter().enumerate() {
        // st in front; canonicalization moves it past q factors and supplies
        // the sign of the identification
        let mut indices = Vec::with_capacity(q + 1);
        indices.push(t_index);
        indices.extend_from_slice(seq.exponents());
        let chain = Chain::from_indices(indices, Rat::one());
        let image = differential(&algebra, &chain);
        for (mono, c) in image.terms() {
            let exps = mono.indices().to_vec();
            assert!(
                exps.iter().all(|&e| e < ambient),
                "stratum differential produced a t-factor"
            );
            let seq = XSeq::new(exps).expect("canonical monomial");
            assert_eq!(seq.weight(), n + 1, "off-weight term in stratum differential");
            let row = target
                .index_of(&seq)
                .expect("weight-(n+1) sequence in the target basis");
            mat.set(row, col, c.clone());
        }
    }
    Ok(mat)
}

/// `d_stratum_ambient` at the smallest valid ambient truncation.
pub fn d_stratum(q: usize, n: usize) -> QMatrix {
    d_stratum_ambient(q, n, n + 2).expect("ambient is large enough")
}

fn part_positions(basis: &StratumBasis, part: Part) -> Vec<usize> {
    basis
        .elements
        .iter()
        .enumerate()
        .filter(|(_, seq)| match part {
            Part::V => true,
            Part::W => !seq.starts_at_zero(),
            Part::E => seq.starts_at_zero(),
        })
        .map(|(i, _)| i)
        .collect()
}

/// The matrix of `ρ∘d: E_{q,n} -> E_{q,n+1}` in the `E`-bases: the stratum
/// differential restricted to the zero-leading columns, with the `W`-rows
/// projected away.
pub fn rho_d(q: usize, n: usize) -> QMatrix {
    let full = d_stratum(q, n);
    let source = stratum(q, n, Part::V);
    let target = stratum(q, n + 1, Part::V);
    let cols = part_positions(&source, Part::E);
    let rows = part_positions(&target, Part::E);
    full.submatrix(&rows, &cols)
}

/// A verified bijection between two stratum bases, as index pairs
/// `(source position, target position)`.
#[derive(Clone, Debug)]
pub struct ShiftTable {
    pub source: StratumBasis,
    pub target: StratumBasis,
    pub pairs: Vec<(usize, usize)>,
}

impl ShiftTable {
    /// Target position for a source position.
    pub fn image_of(&self, source_pos: usize) -> usize {
        self.pairs[source_pos].1
    }

    pub fn is_bijection(&self) -> bool {
        if self.source.dim() != self.target.dim() {
            return false;
        }
        let mut hit = vec![false; self.target.dim()];
        for &(_, t) in &self.pairs {
            if hit[t] {
                return false;
            }
            hit[t] = true;
        }
        hit.iter().all(|&h| h)
    }
}

fn build_shift<F>(source: StratumBasis, target: StratumBasis, map: F, name: &str) -> Result<ShiftTable>
where
    F: Fn(&XSeq) -> Result<XSeq>,
{
    let mut pairs = Vec::with_capacity(source.dim());
    for (i, seq) in source.elements.iter().enumerate() {
        let image = map(seq)?;
        let j = target.index_of(&image).ok_or_else(|| Error::OutsideDomain {
            element: image.to_string(),
            map: name.to_string(),
        })?;
        pairs.push((i, j));
    }
    Ok(ShiftTable {
        source,
        target,
        pairs,
    })
}

/// `φ: W_{q,n} -> V_{q,n-q}`, subtracting one from every exponent.
pub fn shift_phi(q: usize, n: usize) -> Result<ShiftTable> {
    let source = stratum(q, n, Part::W);
    if n < q && source.dim() > 0 {
        return Err(Error::OutsideDomain {
            element: format!("W_{{{q},{n}}}"),
            map: "phi".into(),
        });
    }
    let target = stratum(q, n.saturating_sub(q), Part::V);
    build_shift(source, target, |seq| {
        if seq.starts_at_zero() {
            return Err(Error::OutsideDomain {
                element: seq.to_string(),
                map: "phi".into(),
            });
        }
        XSeq::new(seq.exponents().iter().map(|&e| e - 1).collect())
    }, "phi")
}

/// `ψ: E_{q,n} -> V_{q-1,n-q+1}`, dropping the leading zero and subtracting
/// one from the remaining exponents.
pub fn shift_psi(q: usize, n: usize) -> Result<ShiftTable> {
    assert!(q >= 2, "psi needs at least two exponents");
    let source = stratum(q, n, Part::E);
    let target = stratum(q - 1, (n + 1).saturating_sub(q), Part::V);
    build_shift(source, target, |seq| {
        if !seq.starts_at_zero() {
            return Err(Error::OutsideDomain {
                element: seq.to_string(),
                map: "psi".into(),
            });
        }
        XSeq::new(seq.exponents()[1..].iter().map(|&e| e - 1).collect())
    }, "psi")
}

/// Which commuting square to verify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareKind {
    /// `φ∘d = d∘φ` on `W_{q,n}`.
    Phi,
    /// `ψ∘(ρ∘d) = d∘ψ` on `E_{q,n}`.
    Psi,
}

fn squares_match(
    upper: &ShiftTable,
    lower: &ShiftTable,
    left: &QMatrix,  // source stratum -> its next weight, restricted
    right: &QMatrix, // shifted stratum -> its next weight
) -> bool {
    for col in 0..left.cols() {
        let down_then_shift = {
            let mut v = QVector::new();
            for (row, c) in left.column(col).iter() {
                v.set(lower.image_of(row), c.clone());
            }
            v
        };
        let shift_then_down = right.column(upper.image_of(col));
        if down_then_shift != shift_then_down {
            return false;
        }
    }
    true
}

/// Verify one of the two shift squares entrywise at `(q, n)`. Empty strata
/// verify vacuously.
pub fn verify_square(q: usize, n: usize, kind: SquareKind) -> Result<bool> {
    match kind {
        SquareKind::Phi => {
            let w_n = stratum(q, n, Part::W);
            if w_n.dim() == 0 {
                return Ok(true);
            }
            let full = d_stratum(q, n);
            let v_n = stratum(q, n, Part::V);
            let v_n1 = stratum(q, n + 1, Part::V);
            let w_cols = part_positions(&v_n, Part::W);
            let w_rows = part_positions(&v_n1, Part::W);
            // d(W) must stay inside W: E-rows of W-columns vanish
            let e_rows = part_positions(&v_n1, Part::E);
            let leak = full.submatrix(&e_rows, &w_cols);
            if !leak.is_zero() {
                return Ok(false);
            }
            let left = full.submatrix(&w_rows, &w_cols);
            let right = d_stratum(q, n - q);
            let upper = shift_phi(q, n)?;
            let lower = shift_phi(q, n + 1)?;
            Ok(upper.is_bijection()
                && lower.is_bijection()
                && squares_match(&upper, &lower, &left, &right))
        }
        SquareKind::Psi => {
            let e_n = stratum(q, n, Part::E);
            if e_n.dim() == 0 {
                return Ok(true);
            }
            let left = rho_d(q, n);
            let right = d_stratum(q - 1, n + 1 - q);
            let upper = shift_psi(q, n)?;
            let lower = shift_psi(q, n + 1)?;
            Ok(upper.is_bijection()
                && lower.is_bijection()
                && squares_match(&upper, &lower, &left, &right))
        }
    }
}

/// The candidate homology witness `(0, 1, ..., q-2, r)`.
pub fn witness_sequence(q: usize, r: usize) -> Result<XSeq> {
    if q < 2 {
        return Err(Error::InvalidWitness("need q >= 2".into()));
    }
    if r <= q - 2 {
        return Err(Error::InvalidWitness(format!(
            "need r > q-2, got q={q} r={r}"
        )));
    }
    if (q + r).is_multiple_of(2) {
        return Err(Error::InvalidWitness(format!(
            "need q+r odd, got q={q} r={r}"
        )));
    }
    let mut exps: Vec<usize> = (0..=(q - 2)).collect();
    exps.push(r);
    XSeq::new(exps)
}

/// Check that the witness `(0, 1, ..., q-2, r)` is a cycle and not a
/// boundary of the stratum differential, inside the given ambient
/// truncation. Returns `true` when it is NOT in the image.
pub fn witness_not_boundary_ambient(q: usize, r: usize, ambient: usize) -> Result<bool> {
    let seq = witness_sequence(q, r)?;
    let n = seq.weight();
    if ambient < n + 2 {
        return Err(Error::AmbientTooSmall {
            ambient,
            weight: n,
        });
    }
    // pure-x wedges are cycles; assert it rather than assume it
    let algebra = lamplighter_truncation(ambient)?;
    let mono = ChainMonomial::new(seq.exponents().to_vec())?;
    let cycle = differential(&algebra, &Chain::from_monomial(mono, Rat::one()));
    assert!(cycle.is_zero(), "witness is not a cycle");

    let target = stratum(q, n, Part::V);
    let pos = target.index_of(&seq).ok_or_else(|| Error::OutsideDomain {
        element: seq.to_string(),
        map: format!("V_{{{q},{n}}}"),
    })?;
    let d = if n == 0 {
        QMatrix::zero(target.dim(), 0)
    } else {
        d_stratum_ambient(q, n - 1, ambient)?
    };
    Ok(!d.in_image(&QVector::unit(pos)))
}

/// `witness_not_boundary_ambient` at the smallest valid ambient truncation.
pub fn witness_not_boundary(q: usize, r: usize) -> Result<bool> {
    let seq = witness_sequence(q, r)?;
    witness_not_boundary_ambient(q, r, seq.weight() + 2)
}

/// Per-stratum verification record. Injectivity means full column rank for
/// `d` on `V`, `d` restricted to `W`, and `ρ∘d` on `E` simultaneously.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StratumRecord {
    pub q: usize,
    pub n: usize,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    #[serde(rename = "dimW")]
    pub dim_w: usize,
    #[serde(rename = "dimE")]
    pub dim_e: usize,
    #[serde(rename = "rank_dV")]
    pub rank_d_v: usize,
    #[serde(rename = "rank_dW")]
    pub rank_d_w: usize,
    #[serde(rename = "rank_rhodE")]
    pub rank_rho_d_e: usize,
    pub injective: bool,
}

/// Rank sweep over `2 <= q <= q_max`, `1 <= n <= n_max`: one record per
/// stratum plus a failure line for every broken claim (injectivity on all
/// three restrictions, and at `q = 2` the odd-weight isomorphism).
#[derive(Clone, Debug, Serialize)]
pub struct InjectivityReport {
    pub q_max: usize,
    pub n_max: usize,
    pub records: Vec<StratumRecord>,
    pub failures: Vec<String>,
    pub passed: bool,
}

pub fn injectivity_report(q_max: usize, n_max: usize) -> InjectivityReport {
    assert!(q_max >= 2);
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for q in 2..=q_max {
        for n in 1..=n_max {
            let v_n = stratum(q, n, Part::V);
            let v_n1 = stratum(q, n + 1, Part::V);
            let dim_v = v_n.dim();
            let dim_w = stratum(q, n, Part::W).dim();
            let dim_e = stratum(q, n, Part::E).dim();
            let full = d_stratum(q, n);
            let rank_d_v = full.rank();
            let w_cols = part_positions(&v_n, Part::W);
            let w_rows = part_positions(&v_n1, Part::W);
            let rank_d_w = full.submatrix(&w_rows, &w_cols).rank();
            let rank_rho_d_e = rho_d(q, n).rank();
            let injective = rank_d_v == dim_v && rank_d_w == dim_w && rank_rho_d_e == dim_e;
            if rank_d_v != dim_v {
                failures.push(format!("q={q} n={n}: d on V has rank {rank_d_v} < {dim_v}"));
            }
            if rank_d_w != dim_w {
                failures.push(format!("q={q} n={n}: d on W has rank {rank_d_w} < {dim_w}"));
            }
            if rank_rho_d_e != dim_e {
                failures.push(format!(
                    "q={q} n={n}: rho∘d on E has rank {rank_rho_d_e} < {dim_e}"
                ));
            }
            if q == 2 && n % 2 == 1 && rank_d_v != v_n1.dim() {
                failures.push(format!(
                    "q=2 n={n}: expected an isomorphism at odd weight, rank {rank_d_v} vs target dim {}",
                    v_n1.dim()
                ));
            }
            records.push(StratumRecord {
                q,
                n,
                dim_v,
                dim_w,
                dim_e,
                rank_d_v,
                rank_d_w,
                rank_rho_d_e,
                injective,
            });
        }
    }
    let passed = failures.is_empty();
    InjectivityReport {
        q_max,
        n_max,
        records,
        failures,
        passed,
    }
}
