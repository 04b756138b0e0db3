use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::decorated::DecoratedClass;
use crate::algebra::rational::{factorial, Rational};
use crate::error::{Error, Result};

/// `int_{Mbar_{0,m}} prod psi_i^{k_i} kappa_{b_1} ... kappa_{b_s}`.
pub fn genus0_integral(psi: &[u32], kappa: &[u32]) -> Rational {
    let m = psi.len();
    let total: u32 = psi.iter().sum::<u32>() + kappa.iter().sum::<u32>();
    if m < 3 || total as usize != m - 3 {
        return Rational::zero();
    }
    let Some((&last, rest)) = kappa.split_last() else {
        let mut den = BigInt::one();
        for &k in psi {
            den *= factorial(k as u64);
        }
        return Rational::new(factorial((m - 3) as u64), den);
    };
    // kappa_b on Mbar_{0,m} is the pushforward of psi_{m+1}^{b+1}; the other kappas pull back
    // with a correction by powers of psi_{m+1}
    let mut out = Rational::zero();
    for mask in 0u32..(1 << rest.len()) {
        let mut up = psi.to_vec();
        let mut extra = last + 1;
        let mut kept = Vec::new();
        for (i, &b) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                extra += b;
            } else {
                kept.push(b);
            }
        }
        up.push(extra);
        let v = genus0_integral(&up, &kept);
        if mask.count_ones() % 2 == 0 {
            out += v;
        } else {
            out -= v;
        }
    }
    out
}

/// Integral over `Mbar_{0,n}` of a decorated class; only top-degree terms contribute.
pub fn integrate_genus0(class: &DecoratedClass) -> Result<Rational> {
    if class.g != 0 {
        return Err(Error::Unsupported("integration is implemented in genus 0 only".into()));
    }
    if class.n < 3 {
        return Err(Error::Unstable { g: 0, n: class.n });
    }
    let top = (class.n - 3) as u32;
    let mut total = Rational::zero();
    for (graph, c) in class.terms() {
        if graph.degree() != top {
            continue;
        }
        let mut value = c.clone();
        for (v, vert) in graph.vertices.iter().enumerate() {
            let mut psi: Vec<u32> = graph.legs.iter().filter(|l| l.vertex == v).map(|l| l.psi).collect();
            psi.extend(graph.edges.iter().flatten().filter(|h| h.vertex == v).map(|h| h.psi));
            value *= genus0_integral(&psi, &vert.kappa.0);
            if value.is_zero() {
                break;
            }
        }
        total += value;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    #[test]
    fn small_integrals() {
        assert_eq!(genus0_integral(&[0, 0, 0], &[]), int(1));
        assert_eq!(genus0_integral(&[1, 0, 0, 0], &[]), int(1));
        assert_eq!(genus0_integral(&[0, 0, 0, 0], &[1]), int(1));
        assert_eq!(genus0_integral(&[1, 1, 0, 0, 0], &[]), int(2));
        assert_eq!(genus0_integral(&[0; 5], &[1, 1]), int(5));
        assert_eq!(genus0_integral(&[0; 5], &[2]), int(1));
        assert_eq!(genus0_integral(&[2, 0, 0, 0, 0], &[]), int(1));
        assert_eq!(genus0_integral(&[3, 2, 1, 0, 0, 0, 0, 0, 0], &[]), rat(720, 12));
    }
}
