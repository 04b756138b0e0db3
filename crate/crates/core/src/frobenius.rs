//! The two shifted Frobenius algebras of the A_{r-1} singularity, in the flat frame at `phi = 1`.

use std::f64::consts::PI;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::matrix::QMatrix;
use crate::algebra::rational::{int, pow, Rational};
use crate::error::{Error, Result};

/// Which point of the deformation family the algebra sits at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shift {
    /// Shift along the last flat coordinate.
    TauLast,
    /// Shift along the second-to-last flat coordinate.
    TauSecond,
}

impl std::str::FromStr for Shift {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "last" | "taulast" | "tau-last" | "tau" => Ok(Shift::TauLast),
            "second" | "tausecond" | "tau-second" | "tau-tilde" => Ok(Shift::TauSecond),
            _ => Err(Error::Parse(format!("unknown shift {s:?}; expected 'last' or 'second'"))),
        }
    }
}

impl std::fmt::Display for Shift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Shift::TauLast => "last",
            Shift::TauSecond => "second",
        })
    }
}

pub type Vector = Vec<Rational>;

/// Commutative Frobenius algebra with basis `e_0..e_{r-2}`, unit `e_0` and metric
/// `eta(e_a, e_b) = [a + b = r - 2]`.
#[derive(Clone, Debug)]
pub struct FrobeniusAlgebra {
    r: u32,
    shift: Shift,
    /// `products[a][b]` lists the nonzero `(c, C_ab^c)`.
    products: Vec<Vec<Vec<(usize, Rational)>>>,
    handle: Vector,
}

impl FrobeniusAlgebra {
    pub fn new(r: u32, shift: Shift) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidR { r, min: 2 });
        }
        let n = (r - 1) as usize;
        let mut products = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                products[a][b] = match shift {
                    Shift::TauLast => {
                        let lo = (a + b).saturating_sub(n - 1);
                        (lo..=a.min(b)).map(|k| (a + b - 2 * k, Rational::one())).collect()
                    }
                    Shift::TauSecond => vec![((a + b) % n, Rational::one())],
                };
                products[a][b].sort_by_key(|p| p.0);
            }
        }
        let mut alg = FrobeniusAlgebra { r, shift, products, handle: Vec::new() };
        let mut h = alg.zero();
        for x in 0..n {
            let p = alg.mul(&alg.basis(x), &alg.basis(n - 1 - x));
            add_assign(&mut h, &p);
        }
        alg.handle = h;
        Ok(alg)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn shift(&self) -> Shift {
        self.shift
    }

    pub fn dim(&self) -> usize {
        (self.r - 1) as usize
    }

    pub fn zero(&self) -> Vector {
        vec![Rational::zero(); self.dim()]
    }

    pub fn basis(&self, a: usize) -> Vector {
        let mut v = self.zero();
        v[a] = Rational::one();
        v
    }

    pub fn unit(&self) -> Vector {
        self.basis(0)
    }

    pub fn check_index(&self, a: u32) -> Result<usize> {
        if a + 2 > self.r {
            Err(Error::IndexOutOfRange { index: a, r: self.r })
        } else {
            Ok(a as usize)
        }
    }

    /// `e_a * e_b` expanded in the basis.
    pub fn quantum_product(&self, a: u32, b: u32) -> Result<Vector> {
        let (a, b) = (self.check_index(a)?, self.check_index(b)?);
        Ok(self.mul(&self.basis(a), &self.basis(b)))
    }

    pub fn structure_constants(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.products[a][b]
    }

    pub fn mul(&self, u: &[Rational], v: &[Rational]) -> Vector {
        let mut out = self.zero();
        for (a, x) in u.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in v.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (c, k) in &self.products[a][b] {
                    out[*c] += &xy * k;
                }
            }
        }
        out
    }

    /// `u * e_b`, cheaper than a full product.
    pub fn mul_basis(&self, u: &[Rational], b: usize) -> Vector {
        let mut out = self.zero();
        for (a, x) in u.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (c, k) in &self.products[a][b] {
                out[*c] += x * k;
            }
        }
        out
    }

    pub fn eta(&self, a: usize, b: usize) -> Rational {
        if a + b + 2 == self.r as usize {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    pub fn eta_matrix(&self) -> QMatrix {
        QMatrix::from_fn(self.dim(), self.dim(), |a, b| self.eta(a, b))
    }

    /// Inverse metric; the metric is an involution here so it is its own inverse.
    pub fn eta_inverse(&self) -> QMatrix {
        self.eta_matrix()
    }

    /// `eta(v, 1)`, the counit.
    pub fn counit(&self, v: &[Rational]) -> Rational {
        v[self.dim() - 1].clone()
    }

    pub fn handle(&self) -> &Vector {
        &self.handle
    }

    /// `H^g`.
    pub fn handle_power(&self, g: u32) -> Vector {
        let mut acc = self.unit();
        for _ in 0..g {
            acc = self.mul(&acc, &self.handle);
        }
        acc
    }

    /// Degree-zero part of the CohFT on vector inputs: `eps(v_1 * ... * v_n * H^g)`.
    pub fn tqft_vectors(&self, g: u32, inputs: &[Vector]) -> Result<Rational> {
        if 2 * g as i64 - 2 + inputs.len() as i64 <= 0 {
            return Err(Error::Unstable { g, n: inputs.len() });
        }
        let mut acc = self.handle_power(g);
        for v in inputs {
            acc = self.mul(&acc, v);
        }
        Ok(self.counit(&acc))
    }

    pub fn tqft_exact(&self, g: u32, a: &[u32]) -> Result<Rational> {
        let inputs: Vec<Vector> =
            a.iter().map(|&x| self.check_index(x).map(|i| self.basis(i))).collect::<Result<_>>()?;
        self.tqft_vectors(g, &inputs)
    }

    /// Matrix of `xi`: superscript is the row, subscript the column.
    pub fn euler_matrix(&self) -> QMatrix {
        let n = self.dim();
        let (gen, scale) = match self.shift {
            Shift::TauLast => (n - 1, int(2)),
            Shift::TauSecond => (1 % n, int(self.r as i64 - 1)),
        };
        // multiplication by scale * e_gen
        QMatrix::from_fn(n, n, |row, col| {
            self.products[col][gen]
                .iter()
                .find(|(c, _)| *c == row)
                .map(|(_, k)| k * &scale)
                .unwrap_or_else(Rational::zero)
        })
    }

    /// Grading operator, `diag((2a - r + 2) / (2r))`.
    pub fn grading_matrix(&self) -> QMatrix {
        let r = self.r as i64;
        QMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                Rational::new((2 * i as i64 - r + 2).into(), (2 * r).into())
            } else {
                Rational::zero()
            }
        })
    }

    pub fn euler_grading_matrices(&self) -> (QMatrix, QMatrix) {
        (self.euler_matrix(), self.grading_matrix())
    }
}

pub fn add_assign(acc: &mut [Rational], v: &[Rational]) {
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += b;
        }
    }
}

pub fn scaled(v: &[Rational], c: &Rational) -> Vector {
    v.iter().map(|x| x * c).collect()
}

/// Closed form of the degree-zero theory at the second shift.
pub fn tqft_second_closed_form(r: u32, g: u32, a: &[u32]) -> Rational {
    let m = r as i64 - 1;
    let s: i64 = g as i64 - 1 - a.iter().map(|&x| x as i64).sum::<i64>();
    if s.rem_euclid(m) == 0 {
        pow(&int(m), g)
    } else {
        Rational::zero()
    }
}

/// Floating-point idempotent frame of the first shift:
/// `v_k = sqrt(2/r) sum_a sin((a+1) k pi / r) e_a` for `k = 1..r-1`.
#[derive(Clone, Debug)]
pub struct IdempotentFrame {
    pub r: u32,
    pub vectors: Vec<Vec<f64>>,
    /// `eta(v_k, v_l)`.
    pub gram: Vec<Vec<f64>>,
    /// `v_k * v_k = lambda_k v_k`, with the predicted `lambda_k = sqrt(r/2)/sin(k pi/r)`.
    pub eigenvalues: Vec<f64>,
    pub predicted_eigenvalues: Vec<f64>,
    /// Largest deviation from `eta(v_k, v_l) = (-1)^(k-1) delta_kl` and from the idempotent relations.
    pub max_error: f64,
}

pub fn idempotents(r: u32) -> Result<IdempotentFrame> {
    let alg = FrobeniusAlgebra::new(r, Shift::TauLast)?;
    let n = alg.dim();
    let rf = r as f64;
    let vectors: Vec<Vec<f64>> = (1..r)
        .map(|k| {
            (0..n)
                .map(|a| (2.0 / rf).sqrt() * (((a + 1) as f64) * k as f64 * PI / rf).sin())
                .collect()
        })
        .collect();
    let mul = |u: &[f64], v: &[f64]| {
        let mut out = vec![0.0; n];
        for a in 0..n {
            for b in 0..n {
                for (c, k) in alg.structure_constants(a, b) {
                    out[*c] += u[a] * v[b] * crate::algebra::rational::to_f64(k);
                }
            }
        }
        out
    };
    let eta = |u: &[f64], v: &[f64]| (0..n).map(|a| u[a] * v[n - 1 - a]).sum::<f64>();
    let mut max_error: f64 = 0.0;
    let mut gram = vec![vec![0.0; n]; n];
    let mut eigenvalues = Vec::new();
    let mut predicted = Vec::new();
    for k in 0..n {
        for l in 0..n {
            gram[k][l] = eta(&vectors[k], &vectors[l]);
            let want = if k == l { if k % 2 == 0 { 1.0 } else { -1.0 } } else { 0.0 };
            max_error = max_error.max((gram[k][l] - want).abs());
            let p = mul(&vectors[k], &vectors[l]);
            if k != l {
                max_error = max_error.max(p.iter().fold(0.0f64, |m, x| m.max(x.abs())));
            }
        }
        let sq = mul(&vectors[k], &vectors[k]);
        let lambda_pred = (rf / 2.0).sqrt() / ((k + 1) as f64 * PI / rf).sin();
        let (idx, _) = vectors[k]
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (i, x)| if x.abs() > best.1 { (i, x.abs()) } else { best });
        let lambda = sq[idx] / vectors[k][idx];
        for a in 0..n {
            max_error = max_error.max((sq[a] - lambda_pred * vectors[k][a]).abs());
        }
        eigenvalues.push(lambda);
        predicted.push(lambda_pred);
    }
    Ok(IdempotentFrame { r, vectors, gram, eigenvalues, predicted_eigenvalues: predicted, max_error })
}

/// Degree-zero theory at the first shift via the idempotent basis (floating point).
pub fn tqft_trig(r: u32, g: u32, a: &[u32]) -> Result<f64> {
    if r < 2 {
        return Err(Error::InvalidR { r, min: 2 });
    }
    if let Some(&bad) = a.iter().find(|&&x| x + 2 > r) {
        return Err(Error::IndexOutOfRange { index: bad, r });
    }
    let n = a.len() as i32;
    if 2 * g as i32 - 2 + n <= 0 {
        return Err(Error::Unstable { g, n: a.len() });
    }
    let rf = r as f64;
    let mut total = 0.0;
    for k in 1..r {
        let th = k as f64 * PI / rf;
        let e = (k as i64 - 1) * (g as i64 - 1);
        let sign = if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let num: f64 = a.iter().map(|&x| ((x as f64 + 1.0) * th).sin()).product();
        total += sign * num / th.sin().powi(2 * g as i32 - 2 + n);
    }
    Ok((rf / 2.0).powi(g as i32 - 1) * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        let a = FrobeniusAlgebra::new(5, Shift::TauLast).unwrap();
        let mut want = a.zero();
        want[1] = int(1);
        want[3] = int(1);
        assert_eq!(a.quantum_product(2, 1).unwrap(), want);
        let b = FrobeniusAlgebra::new(5, Shift::TauSecond).unwrap();
        assert_eq!(b.quantum_product(3, 3).unwrap(), b.basis(2));
        assert!(a.quantum_product(4, 0).is_err());
    }

    #[test]
    fn euler_field_entries() {
        let a = FrobeniusAlgebra::new(5, Shift::TauLast).unwrap();
        let xi = a.euler_matrix();
        assert_eq!(xi.get(0, 3), &int(2));
        assert_eq!(xi.get(1, 2), &int(2));
        let b = FrobeniusAlgebra::new(3, Shift::TauSecond).unwrap();
        let xi = b.euler_matrix();
        assert_eq!(xi.get(0, 1), &int(2));
        assert_eq!(xi.get(1, 0), &int(2));
    }

    #[test]
    fn tqft_values() {
        for r in 3..=9u32 {
            let a = FrobeniusAlgebra::new(r, Shift::TauLast).unwrap();
            assert_eq!(a.tqft_exact(1, &[0]).unwrap(), int(r as i64 - 1));
            for x in 0..=r - 2 {
                if (r - x) % 2 == 0 {
                    assert_eq!(a.tqft_exact(1, &[r - 2 - x]).unwrap(), int(x as i64 + 1));
                }
            }
            let b = FrobeniusAlgebra::new(r, Shift::TauSecond).unwrap();
            let ins = [1, (r - 2).min(2)];
            assert_eq!(b.tqft_exact(2, &ins).unwrap(), tqft_second_closed_form(r, 2, &ins));
        }
        let a = FrobeniusAlgebra::new(4, Shift::TauLast).unwrap();
        assert!(a.tqft_exact(0, &[0, 0]).is_err());
    }
}
