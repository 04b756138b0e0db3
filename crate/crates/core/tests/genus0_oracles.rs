use rspin_core::algebra::rational::{int, rat};
use rspin_core::genus0::{
    admissible_insertions, correlator_sl2, correlator_wdvv, cyclic_identity_residual, sl2_invariant_dim,
    WdvvSolver,
};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Multiplicities of irreducibles in a tensor product, by repeated Clebsch-Gordan.
fn clebsch_gordan_invariants(weights: &[u32]) -> u64 {
    let mut mult: Vec<u64> = vec![1];
    for &w in weights {
        let w = w as usize;
        let mut next = vec![0u64; mult.len() + w];
        for (k, &m) in mult.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let lo = k.abs_diff(w);
            let mut j = lo;
            while j <= k + w {
                next[j] += m;
                j += 2;
            }
        }
        mult = next;
    }
    mult[0]
}

#[test]
fn invariant_dim_matches_clebsch_gordan() {
    let mut cases = 0;
    for n in 0..6usize {
        let mut w = vec![0u32; n];
        loop {
            assert_eq!(
                sl2_invariant_dim(&w),
                BigInt::from(clebsch_gordan_invariants(&w)),
                "{w:?}"
            );
            cases += 1;
            let mut i = 0;
            while i < n && w[i] == 5 {
                w[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            w[i] += 1;
        }
    }
    assert!(cases > 1000);
}

#[test]
fn both_routes_agree_on_every_admissible_key() {
    for r in 2..=8u32 {
        let mut solver = WdvvSolver::new(r);
        for n in 3..=6usize.min(r as usize + 1) {
            for a in admissible_insertions(r, n) {
                let s = correlator_sl2(r, &a).unwrap();
                assert_eq!(s, solver.correlator(&a), "r={r} a={a:?}");
            }
        }
    }
}

#[test]
fn four_point_values() {
    for r in 3..=10u32 {
        assert_eq!(correlator_wdvv(r, &[1, 1, r - 2, r - 2]).unwrap(), rat(1, r as i64));
        for a in 1..=r - 2 {
            for b in 1..=r - 2 {
                let s = 2 * r as i64 - 3 - a as i64 - b as i64;
                if (1..=r as i64 - 2).contains(&s) {
                    let v = correlator_wdvv(r, &[a, b, s as u32, 1]).unwrap();
                    assert_eq!(v, rat(1, r as i64), "r={r} ({a},{b},{s},1)");
                }
            }
        }
    }
    assert_eq!(correlator_sl2(2, &[0, 0, 0]).unwrap(), int(1));
}

proptest! {
    #[test]
    fn cyclic_identity(xs in prop::collection::vec(-4i64..6, 1..5)) {
        prop_assert!(cyclic_identity_residual(&xs).is_zero());
    }

    #[test]
    fn correlator_symmetric(r in 3u32..8, seed in 0usize..1000) {
        let keys: Vec<Vec<u32>> = (4..=5).flat_map(|n| admissible_insertions(r, n)).collect();
        prop_assume!(!keys.is_empty());
        let a = &keys[seed % keys.len()];
        let mut rev = a.clone();
        rev.rotate_left(seed % a.len());
        prop_assert_eq!(correlator_wdvv(r, a).unwrap(), correlator_wdvv(r, &rev).unwrap());
    }
}
