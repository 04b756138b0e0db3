//! Genus-zero correlators of Witten's class, by two independent routes.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::polynomial::Polynomial;
use crate::algebra::rational::{factorial, int, pow, Rational};
use crate::error::{Error, Result};

/// Degree `((r-2)(g-1) + sum a) / r` of Witten's class, as a rational.
pub fn witten_degree(r: u32, g: u32, a: &[u32]) -> Result<Rational> {
    if r < 2 {
        return Err(Error::InvalidR { r, min: 2 });
    }
    let num = (r as i64 - 2) * (g as i64 - 1) + a.iter().map(|&x| x as i64).sum::<i64>();
    Ok(Rational::new(BigInt::from(num), BigInt::from(r)))
}

/// The degree when it is a non-negative integer, `None` when the class vanishes for degree reasons.
pub fn witten_degree_integral(r: u32, g: u32, a: &[u32]) -> Result<Option<u32>> {
    let d = witten_degree(r, g, a)?;
    if d.is_integer() && d >= Rational::zero() {
        Ok(Some(d.to_integer().try_into().expect("degree fits in u32")))
    } else {
        Ok(None)
    }
}

/// Dimension of the sl2-invariants in `rho_{b_1} (x) ... (x) rho_{b_N}`, `rho_k` of dimension `k+1`.
pub fn sl2_invariant_dim(weights: &[u32]) -> BigInt {
    let Some((_, rest)) = weights.split_last() else {
        return BigInt::one();
    };
    let total: u64 = weights.iter().map(|&w| w as u64).sum();
    if total % 2 == 1 {
        return BigInt::zero();
    }
    let s = (total / 2) as usize;
    // coefficients of prod (1 + t + ... + t^{b_i}) over all weights but the last
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for &b in rest {
        let b = b as usize;
        let mut next = vec![BigInt::zero(); c.len() + b];
        // prefix-sum convolution with a block of b+1 ones
        let mut window = BigInt::zero();
        for k in 0..next.len() {
            if k < c.len() {
                window += &c[k];
            }
            if k > b && k - b - 1 < c.len() {
                window -= &c[k - b - 1];
            }
            next[k] = window.clone();
        }
        c = next;
    }
    let at = |k: usize| c.get(k).cloned().unwrap_or_else(BigInt::zero);
    let d = at(s) - at(s + 1);
    if d < BigInt::zero() {
        BigInt::zero()
    } else {
        d
    }
}

fn check_insertions(r: u32, a: &[u32]) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidR { r, min: 2 });
    }
    if let Some(&bad) = a.iter().find(|&&x| x > r - 2) {
        return Err(Error::IndexOutOfRange { index: bad, r });
    }
    let n = a.len();
    if n < 3 {
        return Err(Error::Unstable { g: 0, n });
    }
    if n > r as usize + 1 {
        return Err(Error::TooManyInsertions { n, bound: r + 1 });
    }
    let sum: i64 = a.iter().map(|&x| x as i64).sum();
    let want = (n as i64 - 2) * r as i64 - 2;
    if sum != want {
        return Err(Error::DegreeMismatch(format!(
            "sum of insertions is {sum}, genus-zero top degree needs (n-2)r-2 = {want}"
        )));
    }
    Ok(())
}

/// `(n-3)!/r^(n-3) * dim (rho_{r-2-a_1} (x) ... (x) rho_{r-2-a_n})^{sl2}`.
pub fn correlator_sl2(r: u32, a: &[u32]) -> Result<Rational> {
    check_insertions(r, a)?;
    let n = a.len() as u64;
    let weights: Vec<u32> = a.iter().map(|&x| r - 2 - x).collect();
    let dim = Rational::from_integer(sl2_invariant_dim(&weights));
    let pref = Rational::from_integer(factorial(n - 3)) / pow(&int(r as i64), (n - 3) as u32);
    Ok(pref * dim)
}

pub fn correlator_wdvv(r: u32, a: &[u32]) -> Result<Rational> {
    check_insertions(r, a)?;
    Ok(WdvvSolver::new(r).correlator(a))
}

/// Memoized recursion for genus-zero correlators driven by associativity.
///
/// Correlators outside the admissible range evaluate to zero here; the checked
/// entry point is [`correlator_wdvv`].
pub struct WdvvSolver {
    r: u32,
    memo: HashMap<Vec<u32>, Rational>,
}

impl WdvvSolver {
    pub fn new(r: u32) -> Self {
        assert!(r >= 2);
        WdvvSolver { r, memo: HashMap::new() }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn correlator(&mut self, a: &[u32]) -> Rational {
        let r = self.r as i64;
        let n = a.len();
        if n < 3 || a.iter().any(|&x| x as i64 > r - 2) {
            return Rational::zero();
        }
        let sum: i64 = a.iter().map(|&x| x as i64).sum();
        if sum != (n as i64 - 2) * r - 2 {
            return Rational::zero();
        }
        if n == 3 {
            return Rational::one();
        }
        if a.contains(&0) {
            return Rational::zero();
        }
        let mut key = a.to_vec();
        key.sort_unstable_by(|x, y| y.cmp(x));
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let value = self.recurse(&key);
        self.memo.insert(key, value.clone());
        value
    }

    fn recurse(&mut self, key: &[u32]) -> Rational {
        let r = self.r;
        let (a, b, c) = (key[0], key[1], key[2]);
        if c < 2 {
            // only <r-2, r-2, 1, 1> survives the degree constraint here
            return if key.len() == 4 && a == r - 2 && b == r - 2 {
                Rational::new(BigInt::one(), BigInt::from(r))
            } else {
                Rational::zero()
            };
        }
        // associativity on four special points (A, B, C, D) = (a, 1, c-1, b) and the rest as xs
        let xs = &key[3..];
        let (pa, pb, pc, pd) = (a as i64, 1i64, c as i64 - 1, b as i64);
        let mut value = Rational::zero();
        value += self.principal(xs, &[pa, pc, pb + pd]);
        value += self.principal(xs, &[pb, pd, pa + pc]);
        value -= self.principal(xs, &[pb, pc, pa + pd]);
        value += self.mixed(xs, (pa, pc), (pb, pd));
        value -= self.mixed(xs, (pa, pd), (pb, pc));
        value
    }

    fn principal(&mut self, xs: &[u32], three: &[i64]) -> Rational {
        if three.iter().any(|&x| x < 0 || x > self.r as i64 - 2) {
            return Rational::zero();
        }
        let mut ins: Vec<u32> = xs.to_vec();
        ins.extend(three.iter().map(|&x| x as u32));
        self.correlator(&ins)
    }

    /// Splits of the xs with both sides nonempty, glued along `* + *' = r - 2`.
    fn mixed(&mut self, xs: &[u32], left: (i64, i64), right: (i64, i64)) -> Rational {
        let k = xs.len();
        let mut acc = Rational::zero();
        if k < 2 {
            return acc;
        }
        for mask in 1..(1u32 << k) - 1 {
            let (mut li, mut ri): (Vec<u32>, Vec<u32>) = (Vec::new(), Vec::new());
            for (i, &x) in xs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    li.push(x);
                } else {
                    ri.push(x);
                }
            }
            for star in 0..=(self.r - 2) {
                let mut l = li.clone();
                l.extend([left.0 as u32, left.1 as u32, star]);
                let lv = self.correlator(&l);
                if lv.is_zero() {
                    continue;
                }
                let mut rr = ri.clone();
                rr.extend([right.0 as u32, right.1 as u32, self.r - 2 - star]);
                let rv = self.correlator(&rr);
                acc += lv * rv;
            }
        }
        acc
    }
}

type Laurent = BTreeMap<[i64; 3], Rational>;

fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn laurent_add(acc: &mut Laurent, b: &Laurent, scale: &Rational) {
    for (e, c) in b {
        *acc.entry(*e).or_insert_with(Rational::zero) += c * scale;
    }
    acc.retain(|_, c| !c.is_zero());
}

/// `(p^x q - q^x p) / (p - q)` in the variables at positions `p`, `q`.
fn divided_difference(p: usize, q: usize, x: i64) -> Laurent {
    let mut out = Laurent::new();
    let m = x - 1;
    let mut push = |ep: i64, eq: i64, c: i64| {
        let mut e = [0i64; 3];
        e[p] += ep + 1;
        e[q] += eq + 1;
        *out.entry(e).or_insert_with(Rational::zero) += int(c);
    };
    if m > 0 {
        for i in 0..m {
            push(i, m - 1 - i, 1);
        }
    } else if m < 0 {
        let k = -m;
        for i in 0..k {
            push(i - k, -1 - i, -1);
        }
    }
    out
}

/// The cyclic sum behind the associativity recursion, expanded as a polynomial in `t, u, v`
/// after clearing the monomial denominator. It vanishes identically.
pub fn cyclic_identity_residual(xs: &[i64]) -> Polynomial {
    let k = xs.len();
    let mut total = Laurent::new();
    for (t, u, v) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
        let mut inner = Laurent::new();
        for mask in 0u32..(1 << k) {
            let mut prod: Laurent = [([0i64; 3], Rational::one())].into_iter().collect();
            let mut size_i = 0u64;
            for (i, &x) in xs.iter().enumerate() {
                let f = if mask & (1 << i) != 0 {
                    size_i += 1;
                    divided_difference(t, v, x)
                } else {
                    divided_difference(u, v, x)
                };
                prod = laurent_mul(&prod, &f);
            }
            let weight = Rational::from_integer(factorial(size_i) * factorial(k as u64 - size_i));
            laurent_add(&mut inner, &prod, &weight);
        }
        let mut front = Laurent::new();
        let mut e = [0i64; 3];
        e[t] = 1;
        e[v] = 1;
        front.insert(e, Rational::one());
        let mut e = [0i64; 3];
        e[u] = 1;
        e[v] = 1;
        front.insert(e, -Rational::one());
        laurent_add(&mut total, &laurent_mul(&front, &inner), &Rational::one());
    }
    let shift: Vec<i64> =
        (0..3).map(|i| total.keys().map(|e| e[i]).min().unwrap_or(0).min(0)).collect();
    let mut out = Polynomial::zero(&["t", "u", "v"]);
    for (e, c) in total {
        out.add_term((0..3).map(|i| (e[i] - shift[i]) as u32).collect(), c);
    }
    out
}

/// Every admissible insertion list (sorted non-increasing) for `n` points at level `r`.
pub fn admissible_insertions(r: u32, n: usize) -> Vec<Vec<u32>> {
    let target = (n as i64 - 2) * r as i64 - 2;
    let mut out = Vec::new();
    fn rec(max: u32, left: usize, rest: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rest < 0 || rest > max as i64 * left as i64 {
            return;
        }
        for x in (0..=max.min(rest.max(0) as u32)).rev() {
            cur.push(x);
            rec(x, left - 1, rest - x as i64, cur, out);
            cur.pop();
        }
    }
    if r >= 2 && n >= 3 {
        rec(r - 2, n, target, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn degree() {
        assert_eq!(witten_degree(5, 2, &[2]).unwrap(), int(1));
        assert_eq!(witten_degree_integral(5, 2, &[1]).unwrap(), None);
        assert_eq!(witten_degree_integral(3, 0, &[1, 1, 1, 1]).unwrap(), Some(1));
        assert!(witten_degree(1, 0, &[]).is_err());
    }

    #[test]
    fn invariant_dims() {
        assert_eq!(sl2_invariant_dim(&[1, 1]), BigInt::from(1));
        assert_eq!(sl2_invariant_dim(&[1, 1, 1, 1]), BigInt::from(2));
        assert_eq!(sl2_invariant_dim(&[1, 2]), BigInt::from(0));
        assert_eq!(sl2_invariant_dim(&[]), BigInt::from(1));
        assert_eq!(sl2_invariant_dim(&[0]), BigInt::from(1));
        assert_eq!(sl2_invariant_dim(&[2]), BigInt::from(0));
    }

    #[test]
    fn examples() {
        assert_eq!(correlator_sl2(3, &[1, 1, 1, 1]).unwrap(), rat(1, 3));
        assert_eq!(correlator_wdvv(3, &[1, 1, 1, 1]).unwrap(), rat(1, 3));
        assert_eq!(correlator_sl2(4, &[2, 2, 1, 1]).unwrap(), rat(1, 4));
        assert_eq!(correlator_sl2(5, &[0, 1, 2]).unwrap(), int(1));
        assert!(matches!(correlator_sl2(4, &[2, 2, 2, 1]), Err(Error::DegreeMismatch(_))));
        assert!(matches!(correlator_sl2(3, &[1, 1, 1, 1, 1]), Err(Error::TooManyInsertions { .. })));
        assert!(matches!(correlator_sl2(3, &[2, 0, 0]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn cyclic_identity_vanishes() {
        for xs in [vec![1], vec![2, 3], vec![-1, 2], vec![0, 4, -2], vec![3, 3, 1]] {
            assert!(cyclic_identity_residual(&xs).is_zero(), "{xs:?}");
        }
    }
}
