use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::decorated::{DecoratedClass, DecoratedGraph, KappaMonomial};
use crate::algebra::rational::{factorial, int, Rational};
use crate::algebra::series::Series;
use crate::error::{Error, Result};

/// Polynomial in the kappa classes of a single moduli space.
pub type KappaPoly = BTreeMap<KappaMonomial, Rational>;

/// Push a class forward along the map forgetting its last `forget_count` markings.
///
/// Every forgotten leg must carry a positive psi power; its vertex kappa classes are
/// rewritten through `kappa_b = p^* kappa_b + psi^b`.
pub fn pushforward_forget(class: &DecoratedClass, forget_count: usize) -> Result<DecoratedClass> {
    if forget_count > class.n {
        return Err(Error::DimensionMismatch(format!("cannot forget {forget_count} of {} markings", class.n)));
    }
    let n = class.n - forget_count;
    if 2 * class.g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g: class.g, n });
    }
    let mut current = class.clone();
    for _ in 0..forget_count {
        current = forget_last(&current)?;
    }
    Ok(current)
}

fn forget_last(class: &DecoratedClass) -> Result<DecoratedClass> {
    let mut out = DecoratedClass::new(class.g, class.n - 1);
    for (graph, c) in class.terms() {
        let leg = *graph.legs.last().unwrap();
        if leg.psi == 0 {
            return Err(Error::Unsupported("forgotten leg carries no psi power".into()));
        }
        let v = leg.vertex;
        let valence = graph.valence(v) - 1;
        let genus = graph.vertices[v].genus;
        if 2 * genus as usize + valence <= 2 {
            continue;
        }
        let kappa0 = int(2 * genus as i64 - 2 + valence as i64);
        let mut base = graph.clone();
        base.legs.pop();
        let b = &graph.vertices[v].kappa.0;
        for mask in 0u32..(1 << b.len()) {
            let mut rest = Vec::new();
            let mut idx = leg.psi - 1;
            for (i, &bi) in b.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    idx += bi;
                } else {
                    rest.push(bi);
                }
            }
            let mut coeff = c.clone();
            if idx == 0 {
                coeff *= &kappa0;
            } else {
                rest.push(idx);
            }
            rest.sort_unstable();
            let mut term = base.clone();
            term.vertices[v].kappa = KappaMonomial(rest);
            out.add_term(&term, coeff);
        }
    }
    Ok(out)
}

fn kpoly_add(acc: &mut KappaPoly, mono: KappaMonomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(mono).or_insert_with(Rational::zero);
    *e += c;
}

fn kpoly_mul(a: &KappaPoly, b: &KappaPoly, max_degree: u32) -> KappaPoly {
    let mut out = KappaPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if ma.degree() + mb.degree() <= max_degree {
                kpoly_add(&mut out, ma.mul(mb), ca * cb);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn kpoly_one() -> KappaPoly {
    KappaPoly::from([(KappaMonomial::one(), Rational::one())])
}

/// `kappa[F] = sum_e F_e kappa_e`, with `kappa_0` the given scalar.
fn kappa_linear(f: &Series, kappa0: &Rational, max_degree: u32) -> KappaPoly {
    let mut out = KappaPoly::new();
    for e in 0..=(max_degree as usize).min(f.order()) {
        let c = f.coeff(e);
        if e == 0 {
            kpoly_add(&mut out, KappaMonomial::one(), c * kappa0);
        } else {
            kpoly_add(&mut out, KappaMonomial::single(e as u32), c);
        }
    }
    out
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for i in 0..n {
        let mut next = Vec::new();
        for p in out {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(i);
                next.push(q);
            }
            let mut q = p;
            q.push(vec![i]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// Pushforward to `Mbar_{g,n}` of `prod_j z g_j(psi_{n+j})` times
/// `sum_m 1/m! prod_{k <= m} z u(psi_{n+l+k})`, where `u(0) = 0`.
///
/// `kappa0 = 2g - 2 + n` is the value of `kappa_0` on the target.
pub fn pushforward_series(kappa0: &Rational, distinct: &[Series], repeated: &Series, max_degree: u32) -> Result<KappaPoly> {
    if !repeated.coeff(0).is_zero() {
        return Err(Error::Unsupported("repeated factor must vanish at z = 0".into()));
    }
    let order = max_degree as usize;
    let u = repeated.truncate(order);
    // cycles made only of repeated legs
    let mut log_part = KappaPoly::new();
    let mut upow = u.clone();
    for s in 1..=order {
        for (m, c) in kappa_linear(&upow, kappa0, max_degree) {
            kpoly_add(&mut log_part, m, c / int(s as i64));
        }
        upow = &upow * &u;
    }
    let mut exp_part = kpoly_one();
    let mut power = kpoly_one();
    for k in 1..=max_degree {
        power = kpoly_mul(&power, &log_part, max_degree);
        let inv = Rational::new(One::one(), factorial(k as u64));
        for (m, c) in &power {
            kpoly_add(&mut exp_part, m.clone(), c * &inv);
        }
    }
    let gs: Vec<Series> = distinct.iter().map(|g| g.truncate(order)).collect();
    let mut distinct_part = KappaPoly::new();
    for partition in set_partitions(gs.len()) {
        let mut prod = kpoly_one();
        for block in &partition {
            let mut base = Series::one(order);
            for &i in block {
                base = &base * &gs[i];
            }
            let mut factor = KappaPoly::new();
            let mut uj = Series::one(order);
            for j in 0..=order {
                let w = Rational::new(factorial((block.len() + j - 1) as u64), factorial(j as u64));
                for (m, c) in kappa_linear(&(&base * &uj), kappa0, max_degree) {
                    kpoly_add(&mut factor, m, c * &w);
                }
                uj = &uj * &u;
            }
            prod = kpoly_mul(&prod, &factor, max_degree);
        }
        for (m, c) in prod {
            kpoly_add(&mut distinct_part, m, c);
        }
    }
    let mut out = kpoly_mul(&exp_part, &distinct_part, max_degree);
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Single-vertex class on `Mbar_{g,n}` with the given psi powers and kappa monomial.
pub fn principal_term(g: u32, psi: &[u32], kappa: KappaMonomial) -> DecoratedGraph {
    let mut graph = DecoratedGraph::from_stable(&super::graph::StableGraph::trivial(g, psi.len()));
    for (leg, &p) in graph.legs.iter_mut().zip(psi) {
        leg.psi = p;
    }
    graph.vertices[0].kappa = kappa;
    graph
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn single(g: u32, psi: &[u32], kappa: &[u32], c: Rational) -> DecoratedClass {
        let mut out = DecoratedClass::new(g, psi.len());
        out.add_term(&principal_term(g, psi, KappaMonomial(kappa.to_vec())), c);
        out
    }

    #[test]
    fn psi_squared_gives_kappa1() {
        let p = pushforward_forget(&single(1, &[0, 2], &[], int(1)), 1).unwrap();
        assert_eq!(p, single(1, &[0], &[1], int(1)));
    }

    #[test]
    fn two_legs_give_kappa1_squared_plus_kappa2() {
        let p = pushforward_forget(&single(2, &[2, 2], &[], int(1)), 2).unwrap();
        let mut want = single(2, &[], &[1, 1], int(1));
        want.add_class(&single(2, &[], &[2], int(1)));
        assert_eq!(p, want);
    }

    #[test]
    fn psi_one_gives_euler_characteristic() {
        let p = pushforward_forget(&single(2, &[0, 1], &[], int(1)), 1).unwrap();
        assert_eq!(p, single(2, &[0], &[], int(3)));
    }

    #[test]
    fn unstable_target_rejected() {
        assert!(pushforward_forget(&single(1, &[2], &[], int(1)), 1).is_err());
    }

    #[test]
    fn series_matches_sequential_pushforward() {
        // p_* of psi^3 psi^2 plus half of the square of the repeated factor on Mbar_{2,0}
        let order = 6;
        let g1 = Series::monomial(int(1), 2, order);
        let u = Series::new(vec![int(0), rat(1, 2), int(3)], order);
        let got = pushforward_series(&int(2), &[g1], &u, 4).unwrap();
        let mut direct = DecoratedClass::new(2, 0);
        let mut add = |psi: &[u32], c: Rational| {
            let pushed = pushforward_forget(&single(2, psi, &[], c), psi.len()).unwrap();
            direct.add_class(&pushed);
        };
        add(&[3], int(1));
        add(&[3, 2], rat(1, 2));
        add(&[3, 3], int(3));
        add(&[3, 2, 2], rat(1, 8));
        let mut want = KappaPoly::new();
        for (graph, c) in direct.terms() {
            if graph.degree() <= 4 {
                kpoly_add(&mut want, graph.vertices[0].kappa.clone(), c.clone());
            }
        }
        want.retain(|_, c| !c.is_zero());
        assert_eq!(got, want);
    }
}
