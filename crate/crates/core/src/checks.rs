//! Named verification checks behind a common trait, selected at runtime.
//!
//! Every machine-checkable claim ships as one [`Check`] in the registry:
//! the matrix-model isomorphism (`lemma1`), the stage-`m` group
//! correspondence (`lemma2`), the degree-2 stratum analysis (`lemma3`), the
//! shifted injectivity lemmas with their commuting squares (`lemma4`),
//! global stratum injectivity (`lemma5`), the non-bounding witness families
//! (`theorem`), and chain-complex soundness (`soundness`). The CLI and the
//! acceptance suite run them by name with configurable [`Bounds`]; the
//! defaults reproduce the full verification sweep.

use serde::Serialize;
use serde_json::json;

use crate::ce::{chain_basis, differential, differential_matrix, homology_dim, Chain};
use crate::lie::{e_model, lamplighter_truncation, phi_check, phi_images_independent};
use crate::linalg::{rat_int, QMatrix, QVector, Rat};
use crate::malcev::{
    bch, conjugated_a, group_closure_probe, lamplighter_relation, mat_exp, mat_log, psi_eval,
    StrictTriangular,
};
use crate::strata::{
    d_stratum, injectivity_report, stratum, verify_square, witness_not_boundary_ambient,
    witness_sequence, Part, SquareKind, XSeq,
};
use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sweep bounds shared by all checks. The defaults are the full
/// verification bounds; smaller values give quick smoke runs.
#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    /// Truncation sizes for algebra-level checks.
    pub m_max: usize,
    /// Largest wedge degree for stratum sweeps.
    pub q_max: usize,
    /// Largest weight for stratum sweeps.
    pub n_max: usize,
    /// Conjugation exponent bound for relation checks (raised to `m + 2`
    /// per truncation when smaller).
    pub i_max: i64,
    /// Trials per randomized probe.
    pub trials: usize,
    /// Seed for every randomized probe.
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 0x4c41_4d50;

impl Default for Bounds {
    fn default() -> Self {
        Self {
            m_max: 8,
            q_max: 6,
            n_max: 40,
            i_max: 8,
            trials: 100,
            seed: DEFAULT_SEED,
        }
    }
}

/// Structured result of one check run.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Check-specific summary data, JSON-stable for a fixed seed.
    pub details: serde_json::Value,
    /// One line per violated claim; empty iff `passed`.
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &str, details: serde_json::Value, failures: Vec<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: failures.is_empty(),
            details,
            failures,
        }
    }
}

/// One verification strategy, selectable by name.
pub trait Check {
    fn name(&self) -> &'static str;
    /// Alternative names accepted by lookup (`"3"` for `"lemma3"`, ...).
    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }
    fn description(&self) -> &'static str;
    fn run(&self, bounds: &Bounds) -> CheckOutcome;
}

/// All registered checks, in presentation order.
pub fn registry() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(Lemma1Check),
        Box::new(Lemma2Check),
        Box::new(Lemma3Check),
        Box::new(Lemma4Check),
        Box::new(Lemma5Check),
        Box::new(TheoremCheck),
        Box::new(SoundnessCheck),
    ]
}

/// Look a check up by name or alias.
pub fn find(name: &str) -> Option<Box<dyn Check>> {
    registry()
        .into_iter()
        .find(|c| c.name() == name || c.aliases().contains(&name))
}

/// The structure-constant / matrix-model isomorphism at every truncation.
struct Lemma1Check;

impl Check for Lemma1Check {
    fn name(&self) -> &'static str {
        "lemma1"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["1"]
    }
    fn description(&self) -> &'static str {
        "matrix model: A/B_r relations and bracket-preserving basis map, m = 1..m_max"
    }
    fn run(&self, bounds: &Bounds) -> CheckOutcome {
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for m in 1..=bounds.m_max {
            let (a, bs) = e_model(m).expect("m >= 1");
            let a = a.expand();
            let expanded: Vec<QMatrix> = bs.iter().map(|b| b.expand()).collect();
            for r in 0..m {
                checked += 1;
                if !a.mul(&expanded[r]).is_zero() {
                    failures.push(format!("m={m}: A·B_{r} != 0"));
                }
                for s in 0..m {
                    if !expanded[r].mul(&expanded[s]).is_zero() {
                        failures.push(format!("m={m}: B_{r}·B_{s} != 0"));
                    }
                }
                let comm = {
                    let a_br = a.mul(&expanded[r]);
                    let mut out = expanded[r].mul(&a);
                    for (i, j, c) in a_br.iter_entries() {
                        let cur = out.get(i, j) - c;
                        out.set(i, j, cur);
                    }
                    out
                };
                if r + 1 < m {
                    if comm != expanded[r + 1] {
                        failures.push(format!("m={m}: [B_{r}, A] != B_{}", r + 1));
                    }
                } else if !comm.is_zero() {
                    failures.push(format!("m={m}: [B_{}, A] != 0", m - 1));
                }
            }
            if !phi_check(m).expect("m >= 1") {
                failures.push(format!("m={m}: basis map is not bracket-preserving"));
            }
            if m >= 2 && !phi_images_independent(m).expect("m >= 1") {
                failures.push(format!("m={m}: basis images are not independent"));
            }
        }
        CheckOutcome::new(
            self.name(),
            json!({ "m_max": bounds.m_max, "relations_checked": checked }),
            failures,
        )
    }
}

/// The finite-stage group correspondence: generator images, relation
/// killing, exp/log exactness, degenerate products, closure probe.
struct Lemma2Check;

impl Check for Lemma2Check {
    fn name(&self) -> &'static str {
        "lemma2"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["2", "malcev"]
    }
    fn description(&self) -> &'static str {
        "group stage: psi formulas and relations, exp/log round trips, closure probe"
    }
    fn run(&self, bounds: &Bounds) -> CheckOutcome {
        let mut failures = Vec::new();
        for m in 1..=bounds.m_max {
            let bound = bounds.i_max.max((m + 2) as i64);
            let (a, bs) = e_model(m).expect("m >= 1");
            let a_strict = StrictTriangular::from_ematrix(&a);
            let b0 = StrictTriangular::from_ematrix(&bs[0]);
            for i in -bound..=bound {
                // psi(a^{b^i}) = I + B_0 exp(iA)
                let got = psi_eval(&conjugated_a(i), m).expect("m >= 1");
                let shifted = b0.mul_unitriangular(&mat_exp(&a_strict.scaled(&rat_int(i))));
                if got != shifted.plus_identity() {
                    failures.push(format!("m={m} i={i}: psi(a^(b^{i})) formula broken"));
                }
                let relation = psi_eval(&lamplighter_relation(i), m).expect("m >= 1");
                if !relation.is_identity() {
                    failures.push(format!("m={m} i={i}: relation [a, a^(b^{i})] not killed"));
                }
            }
        }

        // exp/log round trips on seeded random matrices of size <= 7
        let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
        let mut roundtrips = 0usize;
        for trial in 0..50 {
            let size = 2 + (trial % 6);
            let m = StrictTriangular::random(size, &mut rng);
            if mat_log(&mat_exp(&m)) != m {
                failures.push(format!("exp/log round trip failed at trial {trial}"));
            } else {
                roundtrips += 1;
            }
        }

        // commuting pairs degenerate to the sum
        for size in 3..=6 {
            let x = StrictTriangular::random(size, &mut rng);
            let scale: i64 = rng.random_range(1..=4);
            let y = x.scaled(&rat_int(scale)).add(&x.mul(&x));
            if bch(&x, &y).expect("same size") != x.add(&y) {
                failures.push(format!("bch on a commuting pair of size {size} is not X+Y"));
            }
        }

        let mut probes = Vec::new();
        for m in 1..=bounds.m_max.min(5) {
            let ok = group_closure_probe(m, bounds.trials, bounds.seed).expect("m >= 1");
            probes.push(json!({ "m": m, "closed": ok }));
            if !ok {
                failures.push(format!("closure probe failed at m={m}"));
            }
        }

        CheckOutcome::new(
            self.name(),
            json!({
                "m_max": bounds.m_max,
                "i_max": bounds.i_max,
                "roundtrips": roundtrips,
                "closure_probes": probes,
            }),
            failures,
        )
    }
}

/// Degree-2 strata: dimension formulas, injectivity, odd-weight
/// isomorphism, cokernel generators, and the telescoping boundary identity.
struct Lemma3Check;

impl Check for Lemma3Check {
    fn name(&self) -> &'static str {
        "lemma3"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["3"]
    }
    fn description(&self) -> &'static str {
        "degree-2 strata: dims, injectivity, odd-weight iso, cokernel class of (0,p)"
    }
    fn run(&self, bounds: &Bounds) -> CheckOutcome {
        let mut failures = Vec::new();
        let mut dim_rows = Vec::new();

        for half in 1..=(bounds.n_max / 2) {
            let even = stratum(2, 2 * half, Part::V).dim();
            let odd = stratum(2, 2 * half + 1, Part::V).dim();
            dim_rows.push(json!({ "n": 2 * half, "dim": even }));
            dim_rows.push(json!({ "n": 2 * half + 1, "dim": odd }));
            if even != half {
                failures.push(format!("dim V_(2,{}) = {even}, expected {half}", 2 * half));
            }
            if odd != half + 1 {
                failures.push(format!(
                    "dim V_(2,{}) = {odd}, expected {}",
                    2 * half + 1,
                    half + 1
                ));
            }
        }

        for n in 1..=bounds.n_max {
            let d = d_stratum(2, n);
            let source = stratum(2, n, Part::V).dim();
            let target = stratum(2, n + 1, Part::V);
            let rank = d.rank();
            if rank != source {
                failures.push(format!("d on V_(2,{n}) has rank {rank} < {source}"));
            }
            if n % 2 == 1 && rank != target.dim() {
                failures.push(format!("d on V_(2,{n}) is not onto V_(2,{})", n + 1));
            }
            // cokernel of d: V_{2,p-1} -> V_{2,p} at p = n+1
            let p = n + 1;
            let coker = target.dim() - rank;
            if p % 2 == 1 {
                if coker != 1 {
                    failures.push(format!("coker into weight {p} has dim {coker}, expected 1"));
                }
                let gen = XSeq::new(vec![0, p]).expect("increasing");
                let pos = target.index_of(&gen).expect("(0,p) has weight p");
                if d.in_image(&QVector::unit(pos)) {
                    failures.push(format!("(0,{p}) is a boundary but should generate the cokernel"));
                }
            } else if coker != 0 {
                failures.push(format!("coker into weight {p} has dim {coker}, expected 0"));
            }
        }

        // s x^0 ∧ s x^{2n} = d( Σ_{i<n} (-1)^i s x^i ∧ s x^{2n-i-1} ∧ s t )
        for n in 1..=10usize.min(bounds.n_max) {
            let m = 2 * n + 1;
            let algebra = lamplighter_truncation(m).expect("m >= 1");
            let t = m;
            let mut gamma = Chain::zero(3);
            for i in 0..n {
                let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
                gamma.add_scaled(
                    &Chain::from_indices(vec![i, 2 * n - i - 1, t], Rat::one()),
                    &sign,
                );
            }
            let boundary = differential(&algebra, &gamma);
            let expected = Chain::from_indices(vec![0, 2 * n], Rat::one());
            if boundary != expected {
                failures.push(format!("telescoping boundary identity failed at n={n}"));
            }
        }

        CheckOutcome::new(
            self.name(),
            json!({ "n_max": bounds.n_max, "dims": dim_rows }),
            failures,
        )
    }
}

/// Shifted injectivity on `W` and `E` plus both commuting squares, with the
/// dimension bookkeeping of the splitting.
struct Lemma4Check;

impl Check for Lemma4Check {
    fn name(&self) -> &'static str {
        "lemma4"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["4"]
    }
    fn description(&self) -> &'static str {
        "W/E injectivity, shift squares, splitting counts, vanishing bound"
    }
    fn run(&self, bounds: &Bounds) -> CheckOutcome {
        let mut failures = Vec::new();
        let report = injectivity_report(bounds.q_max, bounds.n_max);
        for rec in &report.records {
            if rec.rank_d_w != rec.dim_w {
                failures.push(format!(
                    "q={} n={}: d on W has rank {} < {}",
                    rec.q, rec.n, rec.rank_d_w, rec.dim_w
                ));
            }
            if rec.rank_rho_d_e != rec.dim_e {
                failures.push(format!(
                    "q={} n={}: rho∘d on E has rank {} < {}",
                    rec.q, rec.n, rec.rank_rho_d_e, rec.dim_e
                ));
            }
            if rec.dim_v != rec.dim_w + rec.dim_e {
                failures.push(format!("q={} n={}: V != W ⊕ E counts", rec.q, rec.n));
            }
        }
        for q in 2..=bounds.q_max {
            for n in 1..=bounds.n_max {
                match verify_square(q, n, SquareKind::Phi) {
                    Ok(true) => {}
                    _ => failures.push(format!("phi square broken at q={q} n={n}")),
                }
                match verify_square(q, n, SquareKind::Psi) {
                    Ok(true) => {}
                    _ => failures.push(format!("psi square broken at q={q} n={n}")),
                }
                // shift identities on dimensions
                let w = stratum(q, n, Part::W).dim();
                let w_shift = if n >= q { stratum(q, n - q, Part::V).dim() } else { 0 };
                if w != w_shift {
                    failures.push(format!("|W_({q},{n})| != |V_({q},{})|", n as i64 - q as i64));
                }
                let e = stratum(q, n, Part::E).dim();
                let e_shift = if n + 1 >= q {
                    stratum(q - 1, n + 1 - q, Part::V).dim()
                } else {
                    0
                };
                if e != e_shift {
                    failures.push(format!("|E_({q},{n})| != |V_({},{})|", q - 1, n + 1 - q));
                }
            }
        }
        // vanishing below the triangular weight, through q = 8 regardless
        // of the sweep bound
        for q in 2..=bounds.q_max.max(8) {
            for n in 0..(q * (q - 1) / 2) {
                let dim = stratum(q, n, Part::V).dim();
                if dim != 0 {
                    failures.push(format!("V_({q},{n}) = {dim} below the vanishing bound"));
                }
            }
        }
        CheckOutcome::new(
            self.name(),
            serde_json::to_value(&report).expect("serializable"),
            failures,
        )
    }
}

/// Global injectivity of the stratum differential.
struct Lemma5Check;

impl Check for Lemma5Check {
    fn name(&self) -> &'static str {
        "lemma5"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["5"]
    }
    fn description(&self) -> &'static str {
        "d injective on every V_(q,n) in range"
    }
    fn run(&self, bounds: &Bounds) -> CheckOutcome {
        let mut failures = Vec::new();
        let report = injectivity_report(bounds.q_max, bounds.n_max);
        for rec in &report.records {
            if rec.rank_d_v != rec.dim_v {
                failures.push(format!(
                    "q={} n={}: d on V has rank {} < {}",
                    rec.q, rec.n, rec.rank_d_v, rec.dim_v
                ));
            }
        }
        CheckOutcome::new(
            self.name(),
            serde_json::to_value(&report).expect("serializable"),
            failures,
        )
    }
}

/// The non-bounding witness families `(0, 1, ..., q-2, r)`.
struct TheoremCheck;

impl TheoremCheck {
    /// Witness exponents for one `q`: the `x^{q^2+1}·Q[[x^2]]` family heads
    /// plus every admissible `r <= 25`.
    fn witness_exponents(q: usize) -> Vec<usize> {
        let mut rs = vec![q * q + 1, q * q + 3, q * q + 5];
        for r in 0..=25 {
            if r > q - 2 && (q + r) % 2 == 1 && !rs.contains(&r) {
                rs.push(r);
            }
        }
        rs.sort_unstable();
        rs
    }
}

impl Check for TheoremCheck {
    fn name(&self) -> &'static str {
        "theorem"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["final", "witnesses"]
    }
    fn description(&self) -> &'static str {
        "witness classes (0,1,...,q-2,r) are cycles and never boundaries, independent of the ambient truncation"
    }
    fn run(&self, bounds: &Bounds) -> CheckOutcome {
        let mut failures = Vec::new();
        let mut rows = Vec::new();
        for q in 2..=bounds.q_max.min(5) {
            for r in Self::witness_exponents(q) {
                let n = match witness_sequence(q, r) {
                    Ok(seq) => seq.weight(),
                    Err(e) => {
                        failures.push(format!("q={q} r={r}: {e}"));
                        continue;
                    }
                };
                let ambients = [n + 2, n + 4, n + 7];
                let verdicts: Vec<bool> = ambients
                    .iter()
                    .map(|&m| {
                        witness_not_boundary_ambient(q, r, m).unwrap_or_else(|e| {
                            failures.push(format!("q={q} r={r} ambient={m}: {e}"));
                            false
                        })
                    })
                    .collect();
                if verdicts.iter().any(|&v| !v) {
                    failures.push(format!("q={q} r={r}: witness is a boundary"));
                }
                if verdicts.windows(2).any(|w| w[0] != w[1]) {
                    failures.push(format!("q={q} r={r}: verdict depends on the ambient truncation"));
                }
                rows.push(json!({ "q": q, "r": r, "n": n, "not_boundary": verdicts[0] }));
            }
        }
        CheckOutcome::new(
            self.name(),
            json!({ "q_max": bounds.q_max.min(5), "witnesses": rows }),
            failures,
        )
    }
}

/// Chain-complex soundness: `d∘d = 0`, the Euler characteristic identity,
/// and the low-degree homology of every truncation.
struct SoundnessCheck;

impl Check for SoundnessCheck {
    fn name(&self) -> &'static str {
        "soundness"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["ce", "homology"]
    }
    fn description(&self) -> &'static str {
        "d∘d = 0, Euler characteristic, H_0 = 1 and H_1 = 2 for every truncation"
    }
    fn run(&self, bounds: &Bounds) -> CheckOutcome {
        let mut failures = Vec::new();
        let mut rows = Vec::new();
        for m in 1..=bounds.m_max {
            let algebra = lamplighter_truncation(m).expect("m >= 1");
            let dim = algebra.dim();
            let mut chi_chains: i64 = 0;
            let mut chi_homology: i64 = 0;
            for q in 0..=dim {
                let sign = if q % 2 == 0 { 1 } else { -1 };
                chi_chains += sign * chain_basis(&algebra, q).len() as i64;
                chi_homology += sign * homology_dim(&algebra, q) as i64;
                if q >= 2 {
                    let dq = differential_matrix(&algebra, q - 1);
                    let dq1 = differential_matrix(&algebra, q);
                    if !dq.mul(&dq1).is_zero() {
                        failures.push(format!("m={m}: d∘d != 0 out of degree {q}"));
                    }
                }
            }
            if chi_chains != chi_homology {
                failures.push(format!(
                    "m={m}: Euler characteristic mismatch {chi_chains} vs {chi_homology}"
                ));
            }
            let h0 = homology_dim(&algebra, 0);
            let h1 = homology_dim(&algebra, 1);
            if h0 != 1 {
                failures.push(format!("m={m}: H_0 = {h0}, expected 1"));
            }
            if m >= 2 && h1 != 2 {
                failures.push(format!("m={m}: H_1 = {h1}, expected 2"));
            }
            rows.push(json!({ "m": m, "h0": h0, "h1": h1, "euler": chi_chains }));
        }
        CheckOutcome::new(
            self.name(),
            json!({ "m_max": bounds.m_max, "rows": rows }),
            failures,
        )
    }
}
