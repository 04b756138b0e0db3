use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::matrix::QMatrix;
use crate::algebra::partition::{count_partitions, partitions, Partition};
use crate::algebra::rational::{double_factorial, factorial, int, to_canonical_string, Rational};
use crate::algebra::series::Series;
use crate::error::{Error, Result};
use crate::frobenius::Shift;
use crate::genus0::witten_degree;
use crate::rmatrix::b_series;
use crate::strata::decorated::DecoratedClass;
use crate::strata::givental::givental_degree_part;
use crate::strata::pushforward::{principal_term, pushforward_series, KappaPoly};

/// Degree-`d` part of the first-shift graph sum, a relation whenever `d` exceeds the Witten degree.
pub fn relation_boundary(r: u32, g: u32, a: &[u32], d: u32) -> Result<DecoratedClass> {
    let n = a.len();
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let deg = witten_degree(r, g, a)?;
    if int(d as i64) <= deg {
        return Err(Error::Hypothesis(format!("degree {d} is not above Witten degree {deg}")));
    }
    if d as i64 > 3 * g as i64 - 3 + n as i64 {
        return Ok(DecoratedClass::new(g, n));
    }
    givental_degree_part(r, Shift::TauLast, g, a, d)
}

/// A psi/kappa relation on the open moduli space `M_{g,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteriorRelation {
    pub r: u32,
    pub g: u32,
    pub n: usize,
    pub a: Vec<u32>,
    pub sigma: Partition,
    pub d: u32,
    pub expression: DecoratedClass,
}

impl InteriorRelation {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": "rspin.interior_relation/1",
            "r": self.r,
            "g": self.g,
            "n": self.n,
            "a": self.a,
            "sigma": self.sigma.parts(),
            "d": self.d,
            "expression": self.expression.to_json(),
        })
    }
}

pub fn check_interior_hypotheses(r: u32, g: u32, a: &[u32], sigma: &Partition, d: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidR { r, min: 2 });
    }
    for &x in a.iter().chain(sigma.parts()) {
        if x % r == r - 1 {
            return Err(Error::ForbiddenResidue { r, a: x });
        }
    }
    let n = a.len();
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let rhs = (r as i64 - 2) * (g as i64 - 1) + sigma.size() as i64 + a.iter().map(|&x| x as i64).sum::<i64>();
    let lhs = r as i64 * d as i64;
    if lhs <= rhs || (lhs - rhs) % 2 != 0 {
        return Err(Error::Hypothesis(format!("hypotheses not met: r d = {lhs}, bound {rhs}")));
    }
    Ok(())
}

/// Degree-`d` part of `prod_i B_{r,a_i}(psi_i) sum_m 1/m! p_* prod_j B_{r,sigma_j+r} prod_k (T - T B_{r,0})`
/// on `M_{g,n}`.
pub fn relation_interior(r: u32, g: u32, a: &[u32], sigma: &Partition, d: u32) -> Result<InteriorRelation> {
    check_interior_hypotheses(r, g, a, sigma, d)?;
    let n = a.len();
    let expression = interior_expression(g, n, &a.iter().map(|&x| b_series(r, x, d as usize)).collect::<Result<Vec<_>>>()?, &sigma.parts().iter().map(|&s| b_series(r, s, d as usize)).collect::<Result<Vec<_>>>()?, &(&Series::one(d as usize) - &b_series(r, 0, d as usize)?), d)?;
    Ok(InteriorRelation { r, g, n, a: a.to_vec(), sigma: sigma.clone(), d, expression })
}

/// Degree-`d` part of `prod_i legs_i(psi_i)` times the pushforward with distinct factors
/// `z g_j(z)` and repeated factor `z u(z)`, as a single-vertex class on `Mbar_{g,n}`.
pub fn interior_expression(g: u32, n: usize, legs: &[Series], distinct: &[Series], u: &Series, d: u32) -> Result<DecoratedClass> {
    let kappa0 = int(2 * g as i64 - 2 + n as i64);
    let kappa = pushforward_series(&kappa0, distinct, u, d)?;
    let mut out = DecoratedClass::new(g, n);
    let mut psi = vec![0u32; n];
    fn rec(i: usize, left: u32, legs: &[Series], psi: &mut Vec<u32>, c: Rational, kappa: &KappaPoly, g: u32, out: &mut DecoratedClass) {
        if i == legs.len() {
            for (mono, k) in kappa {
                if mono.degree() == left {
                    out.add_term(&principal_term(g, psi, mono.clone()), &c * k);
                }
            }
            return;
        }
        for p in 0..=left.min(legs[i].order() as u32) {
            let lc = legs[i].coeff(p as usize);
            if lc.is_zero() {
                continue;
            }
            psi[i] = p;
            rec(i + 1, left - p, legs, psi, &c * lc, kappa, g, out);
        }
        psi[i] = 0;
    }
    rec(0, d, legs, &mut psi, Rational::one(), &kappa, g, &mut out);
    Ok(out)
}

/// Single-vertex part of a class.
pub fn principal_part(class: &DecoratedClass) -> DecoratedClass {
    class.filter(|g| g.is_principal())
}

/// `D_s = B_{4,2s}`, except `D_1 = B_{4,2} - B_{4,0}` which has no constant term.
pub fn d_series(s: u32, order: usize) -> Result<Series> {
    let b = b_series(4, 2 * s, order)?;
    if s == 1 {
        return Ok(&b - &b_series(4, 0, order)?);
    }
    Ok(b)
}

fn injections(k: usize, n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(k: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(k, n, used, cur, f);
                cur.pop();
                used[j] = false;
            }
        }
    }
    if k <= n {
        rec(k, n, &mut vec![false; n], &mut Vec::new(), f);
    }
}

/// Coefficient of the pushforward basis element for `tau` in the `r = 4` relation indexed by `sigma`.
pub fn k_coefficient(sigma: &Partition, tau: &Partition) -> Result<Rational> {
    let order = tau.parts().first().copied().unwrap_or(0) as usize;
    let d0 = d_series(0, order)?;
    let ds: Vec<Series> = sigma.parts().iter().map(|&s| d_series(s, order)).collect::<Result<_>>()?;
    let t = tau.parts();
    let mut total = Rational::zero();
    injections(sigma.len(), t.len(), &mut |phi| {
        let mut hit = vec![false; t.len()];
        let mut prod = Rational::one();
        for (i, &j) in phi.iter().enumerate() {
            hit[j] = true;
            prod *= ds[i].coeff(t[j] as usize);
        }
        for (j, &h) in hit.iter().enumerate() {
            if !h {
                prod *= d0.coeff(t[j] as usize);
            }
        }
        total += prod;
    });
    let sign = if (t.len() - sigma.len().min(t.len())) % 2 == 0 { int(1) } else { int(-1) };
    Ok(total * sign / Rational::from_integer(tau.aut()))
}

/// Entry of the auxiliary matrix pairing refinements of `tau` onto `mu`, summed over
/// assignments of the parts of `tau` up to permuting equal parts.
pub fn a_matrix_entry(tau: &Partition, mu: &Partition) -> Rational {
    if tau.size() != mu.size() {
        return Rational::zero();
    }
    let (t, m) = (tau.parts(), mu.parts());
    let mut total = Rational::zero();
    let mut assign = vec![0usize; t.len()];
    fn rec(i: usize, t: &[u32], m: &[u32], fill: &mut Vec<u32>, assign: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if i == t.len() {
            if fill.iter().zip(m).all(|(a, b)| a == b) {
                f(assign);
            }
            return;
        }
        // equal parts of tau are interchangeable, so their targets are taken non-decreasing
        let from = if i > 0 && t[i] == t[i - 1] { assign[i - 1] } else { 0 };
        for k in from..m.len() {
            if fill[k] + t[i] <= m[k] {
                fill[k] += t[i];
                assign[i] = k;
                rec(i + 1, t, m, fill, assign, f);
                fill[k] -= t[i];
            }
        }
    }
    let mut weight_tau = Rational::one();
    for &j in t {
        weight_tau /= Rational::from_integer(double_factorial(2 * j as u64 + 1));
    }
    let aut_tau = Rational::from_integer(tau.aut());
    rec(0, t, m, &mut vec![0; m.len()], &mut assign, &mut |assign| {
        let mut w = aut_tau.clone();
        for (k, &mk) in m.iter().enumerate() {
            let pre: Vec<u32> = t.iter().zip(assign).filter(|(_, &a)| a == k).map(|(&p, _)| p).collect();
            let pre = Partition::new(pre);
            w /= Rational::from_integer(pre.aut());
            w *= Rational::from_integer(factorial(pre.len() as u64 + 2 * mk as u64 + 1));
        }
        total += w * &weight_tau;
    });
    total
}

fn minus_one(sigma: &Partition) -> Partition {
    Partition::new(sigma.parts().iter().map(|&p| p - 1).collect())
}

/// Partitions of `d` ordered by the number of parts equal to one, then lexicographically.
pub fn ordered_partitions(d: u32) -> Vec<Partition> {
    let mut ps = partitions(d);
    ps.sort_by(|a, b| a.count_of(1).cmp(&b.count_of(1)).then_with(|| a.parts().cmp(b.parts())));
    ps
}

#[derive(Clone, Debug)]
pub struct MaReport {
    pub d: u32,
    pub partitions: Vec<Partition>,
    pub m: QMatrix,
    pub a: QMatrix,
    pub ma: QMatrix,
    pub triangular: bool,
    pub diagonal_nonzero: bool,
    pub residue_e4_nonzero: bool,
    pub residue_even_vanishes: bool,
}

impl MaReport {
    pub fn passed(&self) -> bool {
        self.triangular && self.diagonal_nonzero && self.residue_e4_nonzero && self.residue_even_vanishes
    }

    pub fn to_json(&self) -> Value {
        let mat = |m: &QMatrix| -> Vec<Vec<String>> {
            (0..m.rows()).map(|i| m.row(i).iter().map(to_canonical_string).collect()).collect()
        };
        json!({
            "schema": "rspin.verify_ma/1",
            "d": self.d,
            "partitions": self.partitions.iter().map(|p| p.parts().to_vec()).collect::<Vec<_>>(),
            "M": mat(&self.m),
            "A": mat(&self.a),
            "MA": mat(&self.ma),
            "triangular": self.triangular,
            "diagonal_nonzero": self.diagonal_nonzero,
            "residue_sin4_nonzero": self.residue_e4_nonzero,
            "residue_even_vanishes": self.residue_even_vanishes,
            "passed": self.passed(),
        })
    }
}

pub fn verify_ma_triangular(d: u32) -> Result<MaReport> {
    if d == 0 {
        return Err(Error::Hypothesis("d must be positive".into()));
    }
    let ps = ordered_partitions(d);
    let k = ps.len();
    let rows: Vec<Vec<Rational>> = ps
        .par_iter()
        .map(|s| ps.iter().map(|t| k_coefficient(&minus_one(s), t)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let m = QMatrix::from_rows(rows);
    let a = QMatrix::from_fn(k, k, |i, j| a_matrix_entry(&ps[i], &ps[j]));
    let ma = &m * &a;
    let triangular = ma.is_upper_triangular();
    let diagonal_nonzero = (0..k).all(|i| !ma.get(i, i).is_zero());
    let max_e = 2 * d + 6;
    let residue_e4_nonzero = !sin_residue(4)?.is_zero();
    let residue_even_vanishes = (6..=max_e).step_by(2).map(sin_residue).collect::<Result<Vec<_>>>()?.iter().all(Zero::is_zero);
    Ok(MaReport { d, partitions: ps, m, a, ma, triangular, diagonal_nonzero, residue_e4_nonzero, residue_even_vanishes })
}

/// `sum_tau K(sigma, tau) A_{tau,(k)}`.
pub fn ka_column_sum(sigma: &Partition, k: u32) -> Result<Rational> {
    let col = Partition::new(vec![k]);
    let mut total = Rational::zero();
    for tau in partitions(k) {
        total += k_coefficient(sigma, &tau)? * a_matrix_entry(&tau, &col);
    }
    Ok(total)
}

/// Coefficient of `t^{-1}` in `1 / sin^e(theta)` with `theta = arcsin(sqrt t) / 2`, `e` even.
pub fn sin_residue(e: u32) -> Result<Rational> {
    if e % 2 != 0 || e == 0 {
        return Err(Error::Hypothesis("exponent must be positive and even".into()));
    }
    let half = (e / 2) as usize;
    let order = half;
    // sin^2 theta = (1 - sqrt(1 - t)) / 2 = t h(t)
    let mut sqrt = vec![Rational::one()];
    for k in 1..=order + 1 {
        let prev = sqrt[k - 1].clone();
        sqrt.push(prev * (Rational::new(BigInt::from(2 * k as i64 - 3), BigInt::from(2 * k as i64))));
    }
    let h = Series::from_fn(order, |k| -sqrt[k + 1].clone() / int(2));
    let inv = h.inverse()?.pow(half as u32);
    Ok(inv.coeff(half - 1))
}

/// `|P(d, g - 1 - d)|`, the bound on `dim RH^d(M_g)`.
pub fn betti_bound(g: u32, d: u32) -> Result<u64> {
    if g < 2 {
        return Err(Error::Hypothesis("genus must be at least 2".into()));
    }
    if d + 1 >= g {
        return Ok(0);
    }
    Ok(count_partitions(d, g - 1 - d))
}
