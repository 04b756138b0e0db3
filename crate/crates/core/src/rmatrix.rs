//! R-matrices of the shifted theories and the series and polynomials that build them.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::interp::interpolate_grid;
use crate::algebra::matrix::{QMatrix, SeriesMatrix};
use crate::algebra::polynomial::Polynomial;
use crate::algebra::rational::{binomial, int, pow, powi, Rational};
use crate::algebra::series::Series;
use crate::error::{Error, Result};
use crate::frobenius::{FrobeniusAlgebra, Shift};

fn check_r(r: u32) -> Result<()> {
    if r < 2 {
        Err(Error::InvalidR { r, min: 2 })
    } else {
        Ok(())
    }
}

/// `B_{r,a}(T)` truncated at `T^order`, extended to large `a` by `B_{r,a+rb} = T^b B_{r,a}`.
pub fn b_series(r: u32, a: u32, order: usize) -> Result<Series> {
    check_r(r)?;
    if a % r == r - 1 {
        return Err(Error::ForbiddenResidue { r, a });
    }
    let (a0, shift) = (a % r, (a / r) as usize);
    let (r, a0) = (r as i64, a0 as i64);
    let step = Rational::new(BigInt::from(-1), BigInt::from(16 * r * r));
    let mut coeffs = vec![Rational::one()];
    for i in 1..=order as i64 {
        let prev = coeffs.last().unwrap().clone();
        let f = int(((2 * i - 1) * r - 2 * (a0 + 1)) * ((2 * i - 1) * r + 2 * (a0 + 1))) / int(i);
        coeffs.push(prev * f * &step);
    }
    Ok(Series::new(coeffs, order).shift(shift))
}

/// Coefficient of `T` in `B_{r,a}`, `(2a + 2 + r)(2a + 2 - r) / (16 r^2)`.
pub fn b_coefficient(r: u32, a: u32) -> Rational {
    let (r, a) = (r as i64, a as i64);
    Rational::new(BigInt::from((2 * a + 2 + r) * (2 * a + 2 - r)), BigInt::from(16 * r * r))
}

pub fn r_matrix_tau(r: u32, order: usize) -> Result<SeriesMatrix> {
    tau_matrix(r, order, false)
}

pub fn r_inverse_tau(r: u32, order: usize) -> Result<SeriesMatrix> {
    tau_matrix(r, order, true)
}

fn tau_matrix(r: u32, order: usize, inverse: bool) -> Result<SeriesMatrix> {
    check_r(r)?;
    let n = (r - 1) as usize;
    let split: Vec<(Series, Series)> =
        (0..n).map(|a| b_series(r, a as u32, order).map(|s| s.even_odd())).collect::<Result<_>>()?;
    Ok(SeriesMatrix::from_entries(n, order, |row, col| {
        let anti = row + col == n - 1;
        let mut s = Series::zero(order);
        if row == col {
            let idx = if inverse { col } else { n - 1 - col };
            s = &s + &split[idx].0;
        }
        if anti {
            let odd = &split[col].1;
            s = if inverse { &s + odd } else { &s - odd };
        }
        s
    }))
}

/// Pointwise values `P_m(r, a)` for `m <= max_m`, `0 <= a <= max_a`, from the defining recursion.
pub struct PmTable {
    r: u32,
    values: Vec<Vec<Rational>>,
}

impl PmTable {
    pub fn new(r: u32, max_m: usize, max_a: usize) -> Result<Self> {
        check_r(r)?;
        let width = max_a.max(r as usize) + 1;
        let ri = r as i64;
        let mut values = vec![vec![Rational::one(); width]];
        for m in 1..=max_m as i64 {
            let prev = &values[m as usize - 1];
            let mut constant = Rational::zero();
            for b in 1..=(ri - 2) {
                let w = (ri - 1 - b) * (2 * m * ri - b) * (2 * m * ri - ri - 2 * b);
                constant += int(w) * &prev[(b - 1) as usize];
            }
            constant = -constant / int(4 * m * ri * (ri - 1));
            let mut row = Vec::with_capacity(width);
            let mut partial = Rational::zero();
            row.push(constant.clone());
            for a in 1..width as i64 {
                partial += int(2 * m * ri - ri - 2 * a) * &prev[(a - 1) as usize] / int(2);
                row.push(&partial + &constant);
            }
            values.push(row);
        }
        Ok(PmTable { r, values })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn get(&self, m: usize, a: usize) -> &Rational {
        &self.values[m][a]
    }
}

static P_CACHE: Mutex<Vec<Polynomial>> = Mutex::new(Vec::new());

/// `P_m(r, a)` as a polynomial in the variables `r, a`.
///
/// Built by tensor interpolation of pointwise values on a `(2m+1) x (2m+1)` grid, then checked
/// against the difference identity in `a` and the boundary identity `P_m(r,0) = P_m(r,r-1)`.
pub fn p_polynomial(m: usize) -> Result<Polynomial> {
    if let Some(p) = P_CACHE.lock().unwrap().get(m) {
        return Ok(p.clone());
    }
    let start = P_CACHE.lock().unwrap().len();
    for k in start..=m {
        let p = build_p_polynomial(k)?;
        let prev = if k == 0 { None } else { Some(P_CACHE.lock().unwrap()[k - 1].clone()) };
        validate_p_polynomial(k, &p, prev.as_ref())?;
        let mut cache = P_CACHE.lock().unwrap();
        if cache.len() == k {
            cache.push(p);
        }
    }
    Ok(P_CACHE.lock().unwrap()[m].clone())
}

fn build_p_polynomial(m: usize) -> Result<Polynomial> {
    let pts = 2 * m + 1;
    let rs: Vec<u32> = (2..2 + pts as u32).collect();
    let xs: Vec<Rational> = rs.iter().map(|&r| int(r as i64)).collect();
    let ys: Vec<Rational> = (0..pts).map(|a| int(a as i64)).collect();
    let mut grid = Vec::new();
    for &r in &rs {
        let t = PmTable::new(r, m, pts)?;
        grid.push((0..pts).map(|a| t.get(m, a).clone()).collect());
    }
    interpolate_grid(("r", "a"), &xs, &ys, &grid)
}

fn validate_p_polynomial(m: usize, p: &Polynomial, prev: Option<&Polynomial>) -> Result<()> {
    let v = ["r", "a"];
    let r = Polynomial::var(&v, "r");
    let a = Polynomial::var(&v, "a");
    let one = Polynomial::constant(&v, int(1));
    if let Some(prev) = prev {
        let shifted = p.substitute(1, &(&a - &one));
        let prev_shifted = prev.substitute(1, &(&a - &one));
        let mi = int(m as i64);
        let factor = (&(&r.scale(&(int(2) * &mi)) - &r) - &a.scale(&int(2)))
            .scale(&Rational::new(1.into(), 2.into()));
        let lhs = &(p - &shifted) - &(&factor * &prev_shifted);
        if !lhs.is_zero() {
            return Err(Error::Validation(format!("difference identity fails for P_{m}")));
        }
    } else if *p != Polynomial::constant(&v, int(1)) {
        return Err(Error::Validation("P_0 must be 1".into()));
    }
    let at0 = p.substitute(1, &Polynomial::zero(&v));
    let at_top = p.substitute(1, &(&r - &one));
    if at0 != at_top {
        return Err(Error::Validation(format!("boundary identity fails for P_{m}")));
    }
    Ok(())
}

pub fn p_value(m: usize, r: &Rational, a: &Rational) -> Result<Rational> {
    Ok(p_polynomial(m)?.eval(&[r.clone(), a.clone()]))
}

pub fn r_matrix_tilde(r: u32, order: usize) -> Result<SeriesMatrix> {
    tilde_matrix(r, order, false)
}

pub fn r_inverse_tilde(r: u32, order: usize) -> Result<SeriesMatrix> {
    tilde_matrix(r, order, true)
}

fn tilde_matrix(r: u32, order: usize, inverse: bool) -> Result<SeriesMatrix> {
    check_r(r)?;
    let n = (r - 1) as usize;
    let table = PmTable::new(r, order, n)?;
    let base = int(r as i64) * int(r as i64 - 1);
    let base = if inverse { base } else { -base };
    let mut coeffs = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let scale = powi(&base, -(m as i64))?;
        coeffs.push(QMatrix::from_fn(n, n, |row, col| {
            if (row + m) % n != col % n {
                return Rational::zero();
            }
            let arg = if inverse { col } else { n - 1 - row };
            table.get(m, arg) * &scale
        }));
    }
    Ok(SeriesMatrix::from_coeffs(coeffs))
}

pub fn r_matrix(r: u32, shift: Shift, order: usize) -> Result<SeriesMatrix> {
    match shift {
        Shift::TauLast => r_matrix_tau(r, order),
        Shift::TauSecond => r_matrix_tilde(r, order),
    }
}

pub fn r_inverse(r: u32, shift: Shift, order: usize) -> Result<SeriesMatrix> {
    match shift {
        Shift::TauLast => r_inverse_tau(r, order),
        Shift::TauSecond => r_inverse_tilde(r, order),
    }
}

/// `[R_{m+1}, xi] = (m + mu) R_m` for every `m < order` (requires `R` known to `order`).
pub fn verify_r_recursion(r_mat: &SeriesMatrix, xi: &QMatrix, mu: &QMatrix, order: usize) -> bool {
    if r_mat.order() < order {
        return false;
    }
    let n = r_mat.dim();
    (0..order).all(|m| {
        let lhs = r_mat.coeff_ref(m + 1).commutator(xi);
        let shift = &QMatrix::identity(n).scale(&int(m as i64)) + mu;
        lhs == &shift * r_mat.coeff_ref(m)
    })
}

pub fn verify_r_recursion_for(r: u32, shift: Shift, order: usize) -> Result<bool> {
    let alg = FrobeniusAlgebra::new(r, shift)?;
    let (xi, mu) = alg.euler_grading_matrices();
    Ok(verify_r_recursion(&r_matrix(r, shift, order)?, &xi, &mu, order))
}

/// `B^ev_a B^ev_{r-2-a} - B^odd_a B^odd_{r-2-a} - 1`, which vanishes.
pub fn symplectic_residual(r: u32, a: u32, order: usize) -> Result<Series> {
    if a + 2 > r {
        return Err(Error::IndexOutOfRange { index: a, r });
    }
    let (e1, o1) = b_series(r, a, order)?.even_odd();
    let (e2, o2) = b_series(r, r - 2 - a, order)?.even_odd();
    Ok(&(&(&e1 * &e2) - &(&o1 * &o2)) - &Series::one(order))
}

pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(m as u64 + 1, k as u64)) * bk;
        }
        b.push(-acc / int(m as i64 + 1));
    }
    b
}

/// `B_m(x)`, defined by `t e^{xt} / (e^t - 1) = sum B_m(x) t^m / m!`.
pub fn bernoulli_polynomial(m: usize) -> Polynomial {
    let b = bernoulli_numbers(m);
    let mut p = Polynomial::zero(&["x"]);
    for (k, bk) in b.iter().enumerate() {
        p.add_term(vec![(m - k) as u32], Rational::from_integer(binomial(m as u64, k as u64)) * bk);
    }
    p
}

/// `Q_0..Q_order` in the variable `a`, from
/// `sum z^m Q_m(a) = exp(-sum_{m>=1} z^m B_{m+1}(a+1) / (m(m+1)))`.
pub fn q_polynomials(order: usize) -> Vec<Polynomial> {
    let v = ["a"];
    let shift = &Polynomial::var(&v, "a") + &Polynomial::constant(&v, int(1));
    let f: Vec<Polynomial> = (0..=order)
        .map(|m| {
            if m == 0 {
                return Polynomial::zero(&v);
            }
            let b = bernoulli_polynomial(m + 1);
            let b = rename(&b, "a").substitute(0, &shift);
            b.scale(&(-Rational::new(BigInt::one(), BigInt::from((m * (m + 1)) as i64))))
        })
        .collect();
    let mut e = vec![Polynomial::constant(&v, int(1))];
    for m in 1..=order {
        let mut acc = Polynomial::zero(&v);
        for k in 1..=m {
            acc = &acc + &(&f[k] * &e[m - k]).scale(&int(k as i64));
        }
        e.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(m as i64))));
    }
    e
}

pub fn q_polynomial(m: usize) -> Polynomial {
    q_polynomials(m).pop().unwrap()
}

fn rename(p: &Polynomial, var: &str) -> Polynomial {
    let mut out = Polynomial::zero(&[var]);
    for (e, c) in p.terms() {
        out.add_term(e.clone(), c.clone());
    }
    out
}

/// Coefficients `Q_m(w)` for `m <= order` at an integer weight, using the Bernoulli exponential.
pub fn q_values(order: usize, w: i64) -> Vec<Rational> {
    q_polynomials(order).iter().map(|p| p.eval(&[int(w)])).collect()
}

pub fn p_values(table: &PmTable, order: usize, a: usize) -> Vec<Rational> {
    (0..=order).map(|m| table.get(m, a).clone()).collect()
}

pub fn rational_power(x: i64, e: u32) -> Rational {
    pow(&int(x), e)
}
