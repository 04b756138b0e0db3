use rspin_core::algebra::rational::{int, Rational};
use rspin_core::strata::decorated::DecoratedGraph;
use rspin_core::strata::graph::StableGraph;
use rspin_core::witten::*;

#[test]
fn genus_one_limit_is_fundamental_class() {
    for n in 1..=3 {
        let a = vec![0; n];
        let cert = certify_polynomiality(1, &a, None, 12).unwrap();
        assert!(cert.divisible_by_r_minus_1);
        let principal = DecoratedGraph::from_stable(&StableGraph::trivial(1, n));
        assert_eq!(cert.evaluate(&int(7)).coeff(&principal), int(6));
        let lim = r0_limit_bernoulli(1, &a).unwrap();
        assert_eq!(lim.coeff(&principal), int(1));
        assert_eq!(lim.len(), 1);
        assert_eq!(cert.r0_limit(), lim);
    }
}

#[test]
fn genus_two_limits() {
    for (a, target) in [(vec![2u32], weierstrass_target()), (vec![1, 1], conjugate_pair_target())] {
        let cert = certify_polynomiality(2, &a, None, 16).unwrap();
        assert!(cert.divisible_by_r_minus_1, "{a:?}");
        let r = int(9);
        let table = genus2_table(&a, &r).unwrap();
        let direct = rescaled_witten_class(9, 2, &a).unwrap().divisor_coefficients().unwrap();
        let scaled: std::collections::BTreeMap<_, Rational> = table.iter().map(|(k, v)| (k.clone(), v * &r)).collect();
        assert_eq!(direct, scaled);
        let via_cert = cert.r0_limit();
        let via_bernoulli = r0_limit_bernoulli(2, &a).unwrap();
        assert_eq!(via_cert, via_bernoulli, "{a:?}");
        let div = via_bernoulli.divisor_coefficients().unwrap();
        let reduced = eliminate_kappa1_g2(&div, a.len()).unwrap();
        assert_eq!(reduced, target, "{a:?}: {div:?}");
        eprintln!("{a:?}: window {:?} degree {}", cert.window, cert.degree);
    }
}
