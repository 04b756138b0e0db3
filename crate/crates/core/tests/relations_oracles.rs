use num_traits::{One, Zero};
use rspin_core::algebra::matrix::QMatrix;
use rspin_core::algebra::partition::{partitions, Partition};
use rspin_core::algebra::rational::{int, rat, Rational};
use rspin_core::algebra::series::Series;
use rspin_core::frobenius::{FrobeniusAlgebra, Shift};
use rspin_core::relations::{
    a_matrix_entry, betti_bound, check_interior_hypotheses, d_series, interior_expression, k_coefficient,
    ka_column_sum, principal_part, relation_boundary, relation_interior, sin_residue, verify_ma_triangular,
};
use rspin_core::strata::decorated::{BoundaryDivisor, DecoratedClass, Divisor};
use rspin_core::strata::givental::givental_degree_part;
use rspin_core::strata::pushforward::pushforward_forget;
use rspin_core::Error;

#[test]
fn genus_one_family_forces_lambda_relations() {
    let mut rows = Vec::new();
    for r in 2..=9u32 {
        for a in (0..=r - 2).filter(|a| (r - a) % 2 == 0) {
            let rel = relation_boundary(r, 1, &[a], 1).unwrap();
            let d = rel.divisor_coefficients().unwrap();
            let get = |k: &Divisor| d.get(k).cloned().unwrap_or_else(|| int(0));
            rows.push(vec![get(&Divisor::Psi(1)), get(&Divisor::Kappa1), get(&Divisor::Boundary(BoundaryDivisor::Irreducible))]);
        }
    }
    let m = QMatrix::from_rows(rows);
    let ker = m.kernel();
    assert_eq!(ker.len(), 1);
    let v = &ker[0];
    let norm = v[0].clone();
    assert_eq!(v.iter().map(|x| x / &norm).collect::<Vec<_>>(), vec![int(1), int(1), int(12)]);
}

#[test]
fn boundary_relation_preconditions() {
    // D = a / r in genus one
    assert!(matches!(relation_boundary(4, 1, &[2], 0), Err(Error::Hypothesis(_))));
    assert!(relation_boundary(4, 1, &[2], 1).is_ok());
    assert!(relation_boundary(4, 1, &[0], 2).unwrap().is_empty());
}

fn mul_psi(class: &DecoratedClass, extra: &[u32]) -> DecoratedClass {
    let mut out = DecoratedClass::new(class.g, class.n);
    for (graph, c) in class.terms() {
        let mut g = graph.clone();
        for (leg, &e) in g.legs.iter_mut().zip(extra) {
            leg.psi += e;
        }
        out.add_term(&g, c.clone());
    }
    out
}

fn tqft_scale(r: u32, g: u32, b: &[u32], odd: bool) -> Rational {
    let alg = FrobeniusAlgebra::new(r, Shift::TauLast).unwrap();
    let mut acc = alg.handle_power(g);
    for &x in b {
        acc = alg.mul_basis(&acc, x as usize);
    }
    if odd {
        acc = alg.mul_basis(&acc, r as usize - 2);
    }
    alg.counit(&acc)
}

#[test]
fn interior_relation_is_principal_part_of_pushed_boundary_relation() {
    let mut checked = 0;
    let cases: Vec<(u32, u32, Vec<u32>, Vec<u32>)> = vec![
        (3, 2, vec![], vec![]),
        (3, 2, vec![0], vec![]),
        (3, 2, vec![], vec![1]),
        (3, 2, vec![], vec![3]),
        (3, 2, vec![1], vec![1]),
        (3, 1, vec![0], vec![1]),
        (3, 1, vec![1], vec![3]),
        (4, 2, vec![], vec![1]),
        (4, 2, vec![2], vec![]),
        (4, 1, vec![0], vec![2]),
        (4, 1, vec![1, 0], vec![]),
        (5, 1, vec![2], vec![1]),
        (5, 2, vec![5], vec![]),
        (5, 1, vec![0], vec![6]),
    ];
    for (r, g, a, sigma) in cases {
        let sigma = Partition::new(sigma);
        let n = a.len();
        for d in 0..=4u32 {
            if check_interior_hypotheses(r, g, &a, &sigma, d).is_err() {
                continue;
            }
            let all: Vec<u32> = a.iter().chain(sigma.parts()).copied().collect();
            let b: Vec<u32> = all.iter().map(|x| x % r).collect();
            let c: Vec<u32> = all.iter().map(|x| x / r).collect();
            let big_c: u32 = c.iter().sum();
            if d < big_c || (d - big_c) as i64 > 3 * g as i64 - 3 + all.len() as i64 {
                continue;
            }
            let x = principal_part(&givental_degree_part(r, Shift::TauLast, g, &b, d - big_c).unwrap());
            let extra: Vec<u32> = c.iter().enumerate().map(|(i, &ci)| if i < n { ci } else { ci + 1 }).collect();
            let pushed = principal_part(&pushforward_forget(&mul_psi(&x, &extra), sigma.len()).unwrap());
            let rel = relation_interior(r, g, &a, &sigma, d).unwrap();
            let scale = tqft_scale(r, g, &b, (d - big_c) % 2 == 1);
            assert!(!scale.is_zero(), "r={r} g={g} a={a:?} sigma={sigma:?}");
            assert_eq!(pushed, rel.expression.scale(&scale), "r={r} g={g} a={a:?} sigma={sigma:?} d={d}");
            checked += 1;
        }
    }
    assert!(checked >= 10, "only {checked} cases");
}

#[test]
fn interior_hypotheses() {
    let s = Partition::empty();
    assert!(matches!(relation_interior(3, 2, &[], &s, 0), Err(Error::Hypothesis(_))));
    assert!(matches!(relation_interior(3, 2, &[2], &s, 3), Err(Error::ForbiddenResidue { .. })));
    // bound 2 in genus three: d = 1 fails parity, d = 2 holds
    assert!(matches!(relation_interior(3, 3, &[], &s, 1), Err(Error::Hypothesis(_))));
    assert!(relation_interior(3, 3, &[], &s, 2).is_ok());
}

#[test]
fn r4_series() {
    let d0 = d_series(0, 4).unwrap();
    assert_eq!(d0.coeff(0), int(1));
    assert_eq!(d0.coeff(1), rat(-3, 64));
    let d1 = d_series(1, 4).unwrap();
    assert!(d1.coeff(0).is_zero());
    let b2 = rspin_core::rmatrix::b_series(4, 2, 4).unwrap();
    for k in 1..=4 {
        assert_eq!(d1.coeff(k), b2.coeff(k) - d0.coeff(k));
    }
}

#[test]
fn k_examples() {
    let e = Partition::empty();
    assert_eq!(k_coefficient(&e, &e).unwrap(), int(1));
    for j in 1..=4 {
        let t = Partition::new(vec![j]);
        assert_eq!(k_coefficient(&e, &t).unwrap(), -d_series(0, 4).unwrap().coeff(j as usize));
    }
    let one = Partition::new(vec![1]);
    assert_eq!(k_coefficient(&one, &one).unwrap(), d_series(1, 1).unwrap().coeff(1));
    for sigma in [vec![1, 1], vec![2, 1, 1]] {
        for tau in partitions(3) {
            let s = Partition::new(sigma.clone());
            if s.len() > tau.len() {
                assert!(k_coefficient(&s, &tau).unwrap().is_zero());
            }
        }
    }
}

/// Degree-`d` kappa polynomial of the r = 4 generating series equals its expansion in the
/// pushforward basis with K coefficients, for sigma whose series have no constant term.
#[test]
fn k_matches_pushforward_expansion() {
    let g = 12u32;
    for sigma in [vec![], vec![1], vec![1, 1], vec![1, 1, 1]] {
        let sigma = Partition::new(sigma);
        for d in 1..=5u32 {
            let order = d as usize;
            let distinct: Vec<Series> = sigma.parts().iter().map(|&s| d_series(s, order).unwrap()).collect();
            let u = &Series::one(order) - &d_series(0, order).unwrap();
            let lhs = interior_expression(g, 0, &[], &distinct, &u, d).unwrap();
            let mut rhs = DecoratedClass::new(g, 0);
            for tau in partitions(d) {
                let k = k_coefficient(&sigma, &tau).unwrap();
                if k.is_zero() {
                    continue;
                }
                let basis: Vec<Series> = tau.parts().iter().map(|&t| Series::monomial(Rational::one(), t as usize, order)).collect();
                let e = interior_expression(g, 0, &[], &basis, &Series::zero(order), d).unwrap();
                rhs.add_class(&e.scale(&k));
            }
            assert_eq!(lhs, rhs, "sigma={sigma:?} d={d}");
        }
    }
}

#[test]
fn a_examples() {
    for k in 1..=5u32 {
        let p = Partition::new(vec![k]);
        let want = Rational::from_integer(rspin_core::algebra::rational::factorial(2 * k as u64 + 2))
            / Rational::from_integer(rspin_core::algebra::rational::double_factorial(2 * k as u64 + 1));
        assert_eq!(a_matrix_entry(&p, &p), want);
    }
    assert_eq!(a_matrix_entry(&Partition::new(vec![2]), &Partition::new(vec![2])), int(48));
    assert_eq!(a_matrix_entry(&Partition::new(vec![1, 1]), &Partition::new(vec![2])), int(560));
    assert!(a_matrix_entry(&Partition::new(vec![2]), &Partition::new(vec![1, 1])).is_zero());
    assert!(a_matrix_entry(&Partition::new(vec![2]), &Partition::new(vec![3])).is_zero());
}

#[test]
fn ma_is_triangular() {
    for d in 1..=6 {
        let rep = verify_ma_triangular(d).unwrap();
        assert!(rep.triangular, "d={d}");
        assert!(rep.diagonal_nonzero, "d={d}");
        assert!(rep.passed());
    }
    assert_eq!(verify_ma_triangular(1).unwrap().ma.rows(), 1);
}

#[test]
fn ma_column_vanishing() {
    for k in 1..=6u32 {
        for s in 0..k.saturating_sub(1) {
            for sigma in partitions(s) {
                assert!(ka_column_sum(&sigma, k).unwrap().is_zero(), "k={k} sigma={sigma:?}");
            }
        }
        assert!(!ka_column_sum(&Partition::new(vec![k - 1].into_iter().filter(|&x| x > 0).collect()), k).unwrap().is_zero());
    }
}

#[test]
fn sin_residues() {
    assert!(!sin_residue(4).unwrap().is_zero());
    // sin^2 theta = t / 4 + O(t^2)
    assert_eq!(sin_residue(2).unwrap(), int(4));
    for e in (6..=30).step_by(2) {
        assert!(sin_residue(e).unwrap().is_zero(), "e={e}");
    }
}

#[test]
fn betti_bounds() {
    for g in 2..=20u32 {
        assert_eq!(betti_bound(g, g - 2).unwrap(), 1);
        assert_eq!(betti_bound(g, g - 1).unwrap(), 0);
        assert_eq!(betti_bound(g, g + 3).unwrap(), 0);
        if g >= 3 {
            assert_eq!(betti_bound(g, g - 3).unwrap(), 1 + (g as u64 - 3) / 2);
        }
        for d in 0..g {
            let brute = partitions(d).iter().filter(|p| p.len() as i64 <= g as i64 - 1 - d as i64).count() as u64;
            assert_eq!(betti_bound(g, d).unwrap(), brute, "g={g} d={d}");
        }
    }
}

/// Orbit-weighted refinement sum equals the plain sum over labelled functions.
#[test]
fn a_matches_labelled_count() {
    use rspin_core::algebra::rational::{double_factorial, factorial};
    fn labelled(t: &[u32], m: &[u32]) -> Rational {
        let mut total = Rational::zero();
        let n = m.len();
        let mut f = vec![0usize; t.len()];
        loop {
            let mut fill = vec![0u32; n];
            let mut cnt = vec![0u64; n];
            for (i, &k) in f.iter().enumerate() {
                fill[k] += t[i];
                cnt[k] += 1;
            }
            if fill == m {
                let mut w = Rational::one();
                for k in 0..n {
                    w *= Rational::from_integer(factorial(cnt[k] + 2 * m[k] as u64 + 1));
                }
                for &j in t {
                    w /= Rational::from_integer(double_factorial(2 * j as u64 + 1));
                }
                total += w;
            }
            let mut i = 0;
            loop {
                if i == f.len() {
                    return total;
                }
                f[i] += 1;
                if f[i] < n {
                    break;
                }
                f[i] = 0;
                i += 1;
            }
        }
    }
    for d in 1..=6 {
        for tau in partitions(d) {
            for mu in partitions(d) {
                assert_eq!(a_matrix_entry(&tau, &mu), labelled(tau.parts(), mu.parts()), "{tau:?} {mu:?}");
            }
        }
    }
}

#[test]
fn r4_interior_relation_in_halved_form() {
    let g = 6;
    for halved in [vec![], vec![2], vec![3, 2], vec![2, 2]] {
        let sigma = Partition::new(halved.iter().map(|s| 2 * s).collect());
        for d in 1..=5u32 {
            if check_interior_hypotheses(4, g, &[], &sigma, d).is_err() {
                continue;
            }
            let rel = relation_interior(4, g, &[], &sigma, d).unwrap();
            let order = d as usize;
            let distinct: Vec<Series> = halved.iter().map(|&s| d_series(s, order).unwrap()).collect();
            let u = &Series::one(order) - &d_series(0, order).unwrap();
            assert_eq!(rel.expression, interior_expression(g, 0, &[], &distinct, &u, d).unwrap());
        }
    }
}
