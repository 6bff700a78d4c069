mod common;

use common::{identity_oracle, sigma_oracle, sorted_desc};
use majorize::{
    interlace_check, pi_degree, sigma_degree_sequence, sigma_identity_rhs, ChainError,
    ExtendedDegree, Factor, PolyChain,
};
use proptest::prelude::*;

/// An interlaced pair `(δ, ε, y)`: `ε` of length `x + y` and every
/// `δ_i` squeezed between `ε_i` and `ε_{i+y}` factor by factor.
fn interlaced_pair(max_degree: u64) -> impl Strategy<Value = (PolyChain, PolyChain, usize)> {
    (0usize..=5, 0usize..=4, 1usize..=3)
        .prop_flat_map(move |(x, y, k)| {
            let rows = prop::collection::vec(
                (
                    1..=max_degree,
                    prop::collection::vec(0u64..=5, x + y),
                    prop::collection::vec(any::<prop::sample::Index>(), x),
                ),
                k,
            );
            (Just(x), Just(y), rows)
        })
        .prop_map(|(x, y, rows)| {
            let mut eps_rows = Vec::new();
            let mut delta_rows = Vec::new();
            for (i, (degree, mut e, picks)) in rows.into_iter().enumerate() {
                e.sort_unstable();
                let mut d: Vec<u64> = Vec::with_capacity(x);
                for (j, pick) in picks.iter().enumerate() {
                    let lo = e[j].max(d.last().copied().unwrap_or(0));
                    let hi = e[j + y];
                    d.push(lo + pick.index((hi - lo + 1) as usize) as u64);
                }
                let f = Factor::new(format!("q{i}"), degree);
                eps_rows.push((f.clone(), e));
                delta_rows.push((f, d));
            }
            (
                PolyChain::new(x, delta_rows).unwrap(),
                PolyChain::new(x + y, eps_rows).unwrap(),
                y,
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn sigma_sequence_equals_partition_formula((delta, eps, y) in interlaced_pair(1)) {
        prop_assert!(interlace_check(&delta, &eps, y).unwrap());
        let lhs = sigma_degree_sequence(&delta, &eps, y).unwrap();
        let rhs = sigma_identity_rhs(&delta, &eps, y).unwrap();
        prop_assert_eq!(&lhs, &rhs);
    }

    #[test]
    fn weighted_sigma_sequence_equals_partition_formula((delta, eps, y) in interlaced_pair(3)) {
        let lhs = sigma_degree_sequence(&delta, &eps, y).unwrap();
        let rhs = sigma_identity_rhs(&delta, &eps, y).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(rhs.parts().to_vec(), identity_oracle(&delta, &eps));
    }

    #[test]
    fn sigma_matches_symbolic_products((delta, eps, y) in interlaced_pair(3)) {
        let symbolic = sigma_oracle(&delta, &eps).unwrap();
        prop_assert!(symbolic.iter().all(|&v| v >= 0));
        let symbolic = sorted_desc(symbolic.into_iter().map(|v| v as u64).collect());
        prop_assert_eq!(sigma_degree_sequence(&delta, &eps, y).unwrap().parts().to_vec(), symbolic);
    }

    #[test]
    fn sigma_total_telescopes((delta, eps, y) in interlaced_pair(3)) {
        let sigma = sigma_degree_sequence(&delta, &eps, y).unwrap();
        let pi = |i| match pi_degree(i, &delta, &eps).unwrap() {
            ExtendedDegree::Finite(v) => v,
            ExtendedDegree::Infinite => unreachable!(),
        };
        prop_assert_eq!(sigma.weight(), pi(y) - pi(0));
    }
}

#[test]
fn wrong_length_is_reported() {
    let one = PolyChain::trivial(1);
    let three = PolyChain::trivial(3);
    assert!(matches!(
        sigma_degree_sequence(&one, &three, 1),
        Err(ChainError::LengthMismatch {
            expected: 2,
            found: 3
        })
    ));
}

#[test]
fn non_interlaced_pair_is_an_error() {
    let f = Factor::linear("q");
    let delta = PolyChain::new(1, vec![(f.clone(), vec![3])]).unwrap();
    let eps = PolyChain::new(2, vec![(f, vec![0, 1])]).unwrap();
    assert_eq!(interlace_check(&delta, &eps, 1), Ok(false));
    assert!(matches!(
        sigma_degree_sequence(&delta, &eps, 1),
        Err(ChainError::NotInterlaced)
    ));
    assert!(matches!(
        sigma_identity_rhs(&delta, &eps, 1),
        Err(ChainError::NotInterlaced)
    ));
}
