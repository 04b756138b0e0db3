use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{pow, Rational};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with rational coefficients over named variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &[&str]) -> Self {
        Polynomial { vars: vars.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn var(vars: &[&str], name: &str) -> Self {
        let mut p = Self::zero(vars);
        let i = p.var_index(name).expect("unknown variable");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        p.add_term(e, Rational::one());
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        assert_eq!(exps.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        if !c.is_zero() {
            for (e, v) in &self.terms {
                out.terms.insert(e.clone(), v * c);
            }
        }
        out
    }

    pub fn eval(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in values.iter().zip(e) {
                if k > 0 {
                    t *= pow(x, k);
                }
            }
            acc += t;
        }
        acc
    }

    /// Replace variable `var` by the polynomial `value` (same variable set).
    pub fn substitute(&self, var: usize, value: &Polynomial) -> Self {
        assert_eq!(self.vars, value.vars);
        let mut out = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        let mut powers: Vec<Polynomial> = vec![Polynomial::constant(&self.var_refs(), Rational::one())];
        for (e, c) in &self.terms {
            while powers.len() <= e[var] as usize {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[var] = 0;
            let mut mono = Polynomial::zero(&self.var_refs());
            mono.add_term(rest, c.clone());
            out = &out + &(&mono * &powers[e[var] as usize]);
        }
        out
    }

    pub fn substitute_value(&self, var: usize, value: &Rational) -> Self {
        let mut out = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[var] = 0;
            out.add_term(rest, c * pow(value, e[var]));
        }
        out
    }

    fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    /// Exact quotient by `(x_var - c)`; fails when the remainder is nonzero.
    pub fn div_linear(&self, var: usize, c: &Rational) -> Result<Self> {
        // Group by the exponents of the other variables and do synthetic division in each group.
        let mut groups: BTreeMap<Vec<u32>, BTreeMap<u32, Rational>> = BTreeMap::new();
        for (e, v) in &self.terms {
            let mut rest = e.clone();
            rest[var] = 0;
            groups.entry(rest).or_default().insert(e[var], v.clone());
        }
        let mut out = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (rest, uni) in groups {
            let deg = *uni.keys().max().unwrap();
            let mut carry = Rational::zero();
            for k in (0..=deg).rev() {
                let a = uni.get(&k).cloned().unwrap_or_else(Rational::zero) + &carry;
                if k == 0 {
                    if !a.is_zero() {
                        return Err(Error::NotDivisible(format!(
                            "remainder {a} on division by ({} - {c})",
                            self.vars[var]
                        )));
                    }
                } else {
                    let mut e = rest.clone();
                    e[var] = k - 1;
                    out.add_term(e, a.clone());
                    carry = a * c;
                }
            }
        }
        Ok(out)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, other: &Polynomial) -> Polynomial {
        self + &(-other)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, other.vars);
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Polynomial { vars: self.vars.clone(), terms: acc }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (v, &k) in self.vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    #[test]
    fn arithmetic_and_eval() {
        let v = ["r", "a"];
        let r = Polynomial::var(&v, "r");
        let a = Polynomial::var(&v, "a");
        let p = &(&r * &a) - &(&a * &a);
        assert_eq!(p.eval(&[int(5), int(2)]), int(6));
        let q = p.substitute(1, &(&r - &Polynomial::constant(&v, int(1))));
        assert_eq!(q.eval(&[int(5), int(0)]), int(4));
        assert_eq!(p.substitute_value(0, &rat(1, 2)).eval(&[int(9), int(3)]), rat(-15, 2));
    }

    #[test]
    fn synthetic_division() {
        let v = ["r"];
        let r = Polynomial::var(&v, "r");
        let one = Polynomial::constant(&v, int(1));
        let p = &(&r - &one) * &(&r * &r);
        assert_eq!(p.div_linear(0, &int(1)).unwrap(), &r * &r);
        assert!(matches!((&p + &one).div_linear(0, &int(1)), Err(Error::NotDivisible(_))));
    }
}
