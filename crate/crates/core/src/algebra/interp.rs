use num_traits::Zero;

use super::polynomial::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Coefficients `c_0..c_{k-1}` of the unique polynomial of degree `< k` through `k` points.
pub fn interpolate_coeffs(xs: &[Rational], ys: &[Rational]) -> Result<Vec<Rational>> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::Interpolation("need matching, nonempty sample lists".into()));
    }
    let k = xs.len();
    // Newton divided differences
    let mut dd: Vec<Rational> = ys.to_vec();
    for level in 1..k {
        for i in (level..k).rev() {
            let den = &xs[i] - &xs[i - level];
            if den.is_zero() {
                return Err(Error::Interpolation("repeated sample point".into()));
            }
            dd[i] = (&dd[i] - &dd[i - 1]) / den;
        }
    }
    // Expand the Newton form from the innermost bracket outward.
    let mut coeffs = vec![Rational::zero(); k];
    for i in (0..k).rev() {
        // coeffs <- coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![Rational::zero(); k];
        for j in 0..k {
            if coeffs[j].is_zero() {
                continue;
            }
            if j + 1 < k {
                next[j + 1] += &coeffs[j];
            }
            next[j] -= &coeffs[j] * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    Ok(coeffs)
}

pub fn eval_coeffs(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn univariate(var: &str, coeffs: &[Rational]) -> Polynomial {
    let mut p = Polynomial::zero(&[var]);
    for (k, c) in coeffs.iter().enumerate() {
        p.add_term(vec![k as u32], c.clone());
    }
    p
}

/// Tensor-product interpolation on the grid `xs x ys` with `values[i][j] = f(xs[i], ys[j])`.
pub fn interpolate_grid(
    vars: (&str, &str),
    xs: &[Rational],
    ys: &[Rational],
    values: &[Vec<Rational>],
) -> Result<Polynomial> {
    let rows: Vec<Vec<Rational>> =
        values.iter().map(|row| interpolate_coeffs(ys, row)).collect::<Result<_>>()?;
    let mut p = Polynomial::zero(&[vars.0, vars.1]);
    for j in 0..ys.len() {
        let col: Vec<Rational> = rows.iter().map(|r| r[j].clone()).collect();
        let cx = interpolate_coeffs(xs, &col)?;
        for (i, c) in cx.into_iter().enumerate() {
            p.add_term(vec![i as u32, j as u32], c);
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    #[test]
    fn recovers_cubic() {
        let f = |x: i64| int(2 * x * x * x - x + 5);
        let xs: Vec<Rational> = (0..6).map(int).collect();
        let ys: Vec<Rational> = (0..6).map(f).collect();
        let c = interpolate_coeffs(&xs, &ys).unwrap();
        assert_eq!(c, vec![int(5), int(-1), int(0), int(2), int(0), int(0)]);
        assert_eq!(eval_coeffs(&c, &int(10)), f(10));
    }

    #[test]
    fn grid() {
        let xs: Vec<Rational> = (2..5).map(int).collect();
        let ys: Vec<Rational> = (0..3).map(int).collect();
        let vals: Vec<Vec<Rational>> =
            (2..5).map(|x| (0..3).map(|y| int(x * y * y + x)).collect()).collect();
        let p = interpolate_grid(("r", "a"), &xs, &ys, &vals).unwrap();
        assert_eq!(p.eval(&[int(7), int(5)]), int(7 * 25 + 7));
    }
}
