//! Randomized invariants of the exact kernels: rank/kernel accounting,
//! witness exactness, differential linearity and nilpotency, exp/log
//! round trips.

use proptest::prelude::*;

use lamplighter_core::ce::{differential, Chain, ChainMonomial};
use lamplighter_core::lie::lamplighter_truncation;
use lamplighter_core::linalg::{rat, QMatrix, QVector, Rat};
use lamplighter_core::malcev::{mat_exp, mat_log, StrictTriangular};

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn arb_matrix() -> impl Strategy<Value = QMatrix> {
    (1usize..=7, 1usize..=7).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec(
            ((0..rows), (0..cols), arb_rat()),
            0..=(rows * cols),
        )
        .prop_map(move |entries| {
            let mut m = QMatrix::zero(rows, cols);
            for (i, j, v) in entries {
                m.set(i, j, v);
            }
            m
        })
    })
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_column_count(m in arb_matrix()) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.apply(v).is_zero());
        }
    }

    #[test]
    fn rank_is_transpose_invariant(m in arb_matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn image_membership_has_exact_witnesses(m in arb_matrix()) {
        let x = QVector::from_entries((0..m.cols()).map(|j| (j, rat(j as i64 % 5 - 2, 1 + (j as i64 % 2)))));
        let v = m.apply(&x);
        let witness = m.solve(&v);
        prop_assert!(witness.is_some());
        prop_assert_eq!(m.apply(&witness.unwrap()), v);
    }

    #[test]
    fn canonicalization_sign_is_permutation_parity(perm in Just(vec![0usize,1,2,3,4]).prop_shuffle()) {
        // count inversions independently
        let mut inversions = 0;
        for i in 0..perm.len() {
            for j in (i + 1)..perm.len() {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let expected = if inversions % 2 == 0 { 1 } else { -1 };
        let (mono, sign) = ChainMonomial::canonicalize(perm).unwrap();
        prop_assert_eq!(mono.indices(), &[0, 1, 2, 3, 4]);
        prop_assert_eq!(sign, expected);
    }
}

fn arb_chain(m: usize, q: usize) -> impl Strategy<Value = Chain> {
    let dim = m + 1;
    proptest::collection::vec(
        (proptest::sample::subsequence((0..dim).collect::<Vec<_>>(), q), arb_rat()),
        0..=4,
    )
    .prop_map(move |terms| {
        let mut chain = Chain::zero(q);
        for (indices, coeff) in terms {
            chain.add_scaled(&Chain::from_indices(indices, coeff), &Rat::from_integer(1.into()));
        }
        chain
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn differential_is_linear(c1 in arb_chain(4, 3), c2 in arb_chain(4, 3), a in arb_rat(), b in arb_rat()) {
        let l = lamplighter_truncation(4).unwrap();
        let mut combo = c1.scaled(&a);
        combo.add_scaled(&c2, &b);
        let mut expected = differential(&l, &c1).scaled(&a);
        expected.add_scaled(&differential(&l, &c2), &b);
        prop_assert_eq!(differential(&l, &combo), expected);
    }

    #[test]
    fn differential_squares_to_zero(c in arb_chain(5, 4)) {
        let l = lamplighter_truncation(5).unwrap();
        prop_assert!(differential(&l, &differential(&l, &c)).is_zero());
    }

    #[test]
    fn exp_log_roundtrip(size in 2usize..=6, seedling in proptest::collection::vec(arb_rat(), 15)) {
        let mut m = StrictTriangular::zero(size);
        let mut it = seedling.into_iter();
        for i in 0..size {
            for j in (i + 1)..size {
                if let Some(v) = it.next() {
                    m.set(i, j, v);
                }
            }
        }
        prop_assert_eq!(mat_log(&mat_exp(&m)), m.clone());
        prop_assert_eq!(mat_exp(&m).inverse(), mat_exp(&m.neg()));
    }
}
