use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::interp::{eval_coeffs, interpolate_coeffs, univariate};
use crate::algebra::polynomial::Polynomial;
use crate::algebra::rational::{int, pow, rat, to_canonical_string, Rational};
use crate::error::{Error, Result};
use crate::frobenius::Shift;
use crate::genus0::witten_degree_integral;
use crate::rmatrix::{q_polynomials, PmTable};
use crate::strata::decorated::{aut_factor, BoundaryDivisor, DecoratedClass, DecoratedGraph, Divisor};
use crate::strata::givental::givental_degree_part;
use crate::strata::graph::enumerate_stable_graphs;
use crate::strata::weighting::{divide_edges, numerator_class, weighted_class, NumeratorKey, WeightedSum};

/// Witten's class as the degree-`D` part of the shifted graph sum; zero when `D` is not an
/// integer or exceeds the dimension.
pub fn witten_class(r: u32, g: u32, a: &[u32], shift: Shift) -> Result<DecoratedClass> {
    let n = a.len();
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    match witten_degree_integral(r, g, a)? {
        Some(d) if (d as i64) <= 3 * g as i64 - 3 + n as i64 => givental_degree_part(r, shift, g, a, d),
        _ => Ok(DecoratedClass::new(g, n)),
    }
}

fn check_canonical_weights(g: u32, a: &[u32]) -> Result<()> {
    if g == 0 {
        return Err(Error::Hypothesis("genus must be positive".into()));
    }
    if a.iter().sum::<u32>() != 2 * g - 2 {
        return Err(Error::Hypothesis(format!("weights {a:?} do not sum to 2g - 2 = {}", 2 * g - 2)));
    }
    if 2 * g as i64 - 2 + a.len() as i64 <= 0 {
        return Err(Error::Unstable { g, n: a.len() });
    }
    Ok(())
}

/// `r^{g-1} W^r_{g,n}(a)` from the weighting formula with the polynomials `P_m(r, w)`.
pub fn rescaled_witten_class(r: u32, g: u32, a: &[u32]) -> Result<DecoratedClass> {
    check_canonical_weights(g, a)?;
    let min_r = a.iter().max().copied().unwrap_or(0) + 2;
    if r < min_r.max(2) {
        return Err(Error::InvalidR { r, min: min_r.max(2) });
    }
    let d = g - 1;
    let table = PmTable::new(r, d as usize, (r - 2) as usize)?;
    let sum = WeightedSum::new(r, d, |m, w| table.get(m, w as usize).clone())?;
    weighted_class(&sum, g, a)
}

/// Polynomial fit of a family of keyed values, certified on two held-out sample points.
#[derive(Clone, Debug)]
pub struct StableFit<K> {
    pub start: u32,
    pub points: u32,
    pub held_out: [u32; 2],
    pub coeffs: BTreeMap<K, Vec<Rational>>,
}

/// Fit each key by the polynomial through `start..start+k`, growing `k` until the next two
/// samples agree; if no window up to `max_points` works the start moves up by one.
pub fn fit_stable<K, F>(start: u32, max_points: u32, max_shift: u32, f: F) -> Result<StableFit<K>>
where
    K: Ord + Clone + Send,
    F: Fn(u32) -> Result<BTreeMap<K, Rational>> + Sync,
{
    let mut cache: HashMap<u32, BTreeMap<K, Rational>> = HashMap::new();
    let last = start + max_shift + max_points + 2;
    let samples: Vec<(u32, BTreeMap<K, Rational>)> =
        (start..=last).into_par_iter().map(|x| Ok((x, f(x)?))).collect::<Result<_>>()?;
    cache.extend(samples);
    for s0 in start..=start + max_shift {
        for k in 1..=max_points {
            let xs: Vec<u32> = (s0..s0 + k).collect();
            let mut keys: Vec<K> = Vec::new();
            for x in xs.iter().chain([s0 + k, s0 + k + 1].iter()) {
                keys.extend(cache[x].keys().cloned());
            }
            keys.sort();
            keys.dedup();
            let xq: Vec<Rational> = xs.iter().map(|&x| int(x as i64)).collect();
            let mut coeffs = BTreeMap::new();
            let mut ok = true;
            for key in keys {
                let ys: Vec<Rational> =
                    xs.iter().map(|x| cache[x].get(&key).cloned().unwrap_or_else(Rational::zero)).collect();
                let c = interpolate_coeffs(&xq, &ys)?;
                for h in [s0 + k, s0 + k + 1] {
                    let want = cache[&h].get(&key).cloned().unwrap_or_else(Rational::zero);
                    if eval_coeffs(&c, &int(h as i64)) != want {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    break;
                }
                coeffs.insert(key, c);
            }
            if ok {
                coeffs.retain(|_, c: &mut Vec<Rational>| c.iter().any(|x| !x.is_zero()));
                return Ok(StableFit { start: s0, points: k, held_out: [s0 + k, s0 + k + 1], coeffs });
            }
        }
    }
    Err(Error::Interpolation("window too small / not yet polynomial".into()))
}

fn trim(mut c: Vec<Rational>) -> Vec<Rational> {
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

/// `r^{g-1} W` as a polynomial in `r` on each decorated stratum.
#[derive(Clone, Debug)]
pub struct PolynomialCertificate {
    pub g: u32,
    pub a: Vec<u32>,
    pub terms: Vec<(DecoratedGraph, Polynomial)>,
    pub window: (u32, u32),
    pub held_out: [u32; 2],
    pub degree: u32,
    pub divisible_by_r_minus_1: bool,
}

impl PolynomialCertificate {
    pub fn evaluate(&self, r: &Rational) -> DecoratedClass {
        let mut out = DecoratedClass::new(self.g, self.a.len());
        for (graph, p) in &self.terms {
            out.add_term(graph, p.eval(std::slice::from_ref(r)));
        }
        out
    }

    /// `(-1)^g` times the value at `r = 0`.
    pub fn r0_limit(&self) -> DecoratedClass {
        let sign = if self.g % 2 == 0 { int(1) } else { int(-1) };
        self.evaluate(&Rational::zero()).scale(&sign)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": "rspin.poly_cert/1",
            "g": self.g,
            "a": self.a,
            "window": [self.window.0, self.window.1],
            "held_out": self.held_out,
            "degree": self.degree,
            "divisible_by_r_minus_1": self.divisible_by_r_minus_1,
            "terms": self.terms.iter().map(|(graph, p)| {
                let mut coeffs = vec![Rational::zero(); p.degree_in(0).map_or(0, |d| d as usize + 1)];
                for (e, c) in p.terms() {
                    coeffs[e[0] as usize] = c.clone();
                }
                json!({
                    "graph": graph.to_json(),
                    "r_coeffs": coeffs.iter().map(to_canonical_string).collect::<Vec<_>>(),
                })
            }).collect::<Vec<_>>(),
        })
    }
}

/// Interpolate `r^{g-1} W^r_{g,n}(a)` in `r`, starting at `r_min` (default `max(a) + 3`).
pub fn certify_polynomiality(g: u32, a: &[u32], r_min: Option<u32>, max_points: u32) -> Result<PolynomialCertificate> {
    check_canonical_weights(g, a)?;
    let floor = a.iter().max().copied().unwrap_or(0) + 3;
    let start = r_min.unwrap_or(floor).max(floor);
    let fit = fit_stable(start, max_points, 0, |r| {
        let class = rescaled_witten_class(r, g, a)?;
        Ok(class.terms().map(|(k, c)| (k.clone(), c.clone())).collect())
    })?;
    let mut divisible = true;
    let mut degree = 0;
    let mut terms = Vec::new();
    for (graph, c) in fit.coeffs {
        let c = trim(c);
        degree = degree.max(c.len() as u32 - 1);
        let p = univariate("r", &c);
        divisible &= p.div_linear(0, &Rational::one()).is_ok();
        terms.push((graph, p));
    }
    Ok(PolynomialCertificate {
        g,
        a: a.to_vec(),
        terms,
        window: (fit.start, fit.start + fit.points - 1),
        held_out: fit.held_out,
        degree,
        divisible_by_r_minus_1: divisible,
    })
}

/// `(-1)^g W_{g;a}(0)` directly from the Bernoulli form of the graph sum: for each graph the
/// weighting sum is interpolated in the modulus, evaluated at zero, and then divided by the
/// edge factors.
pub fn r0_limit_bernoulli(g: u32, a: &[u32]) -> Result<DecoratedClass> {
    check_canonical_weights(g, a)?;
    let d = g - 1;
    let n = a.len();
    let q: Vec<Polynomial> = q_polynomials(d as usize);
    let graphs = enumerate_stable_graphs(g, n, d as usize)?;
    let start = a.iter().max().copied().unwrap_or(0) + 3;
    let mut out = DecoratedClass::new(g, n);
    for graph in &graphs {
        let fit = fit_stable::<NumeratorKey, _>(start, 24, 6, |s| {
            let sum = WeightedSum::new(s, d, |m, w| q[m].eval(&[int(w as i64)]))?;
            sum.numerator(graph, a)
        })?;
        let at_zero: BTreeMap<NumeratorKey, Rational> =
            fit.coeffs.into_iter().map(|(k, c)| (k, c[0].clone())).filter(|(_, c)| !c.is_zero()).collect();
        let divided = divide_edges(&at_zero, graph.num_edges())?;
        let h1 = graph.h1() as u32;
        let sign = if (g - 1 + h1) % 2 == 0 { int(1) } else { int(-1) };
        numerator_class(graph, &divided, &(sign * aut_factor(graph)), &mut out);
    }
    Ok(out)
}

fn sep(genus: u32, markers: &[u32]) -> Divisor {
    Divisor::Boundary(BoundaryDivisor::Separating { genus, markers: markers.to_vec() })
}

fn nonsep() -> Divisor {
    Divisor::Boundary(BoundaryDivisor::Irreducible)
}

/// Expression of `kappa_1` on `Mbar_{2,n}` in psi and boundary divisors, pulled back from `Mbar_2`
/// where `kappa_1 = delta_irr / 5 + 7 delta_1 / 5`.  For `n = 2`, `kappa_1 = pi^* kappa_1 + psi_1 + psi_2 - alpha`
/// because `psi_1` differs from its pullback by the rational-tail divisor `alpha`.
pub fn kappa1_boundary_relation_g2(n: usize) -> Result<BTreeMap<Divisor, Rational>> {
    match n {
        1 => Ok(BTreeMap::from([
            (Divisor::Psi(1), int(1)),
            (sep(1, &[1]), rat(7, 5)),
            (nonsep(), rat(1, 5)),
        ])),
        2 => Ok(BTreeMap::from([
            (Divisor::Psi(1), int(1)),
            (Divisor::Psi(2), int(1)),
            (sep(0, &[1, 2]), int(-1)),
            (sep(1, &[1]), rat(7, 5)),
            (sep(1, &[1, 2]), rat(7, 5)),
            (nonsep(), rat(1, 5)),
        ])),
        _ => Err(Error::Unsupported(format!("kappa_1 relation only tabulated for n = 1, 2 (got {n})"))),
    }
}

pub fn eliminate_kappa1_g2(divisors: &BTreeMap<Divisor, Rational>, n: usize) -> Result<BTreeMap<Divisor, Rational>> {
    let mut out = divisors.clone();
    if let Some(k) = out.remove(&Divisor::Kappa1) {
        for (d, c) in kappa1_boundary_relation_g2(n)? {
            *out.entry(d).or_insert_with(Rational::zero) += c * &k;
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Divisor classes of the Weierstrass locus on `Mbar_{2,1}`.
pub fn weierstrass_target() -> BTreeMap<Divisor, Rational> {
    BTreeMap::from([(Divisor::Psi(1), int(3)), (sep(1, &[1]), rat(-6, 5)), (nonsep(), rat(-1, 10))])
}

/// Divisor classes of the conjugate-pair locus on `Mbar_{2,2}`.
pub fn conjugate_pair_target() -> BTreeMap<Divisor, Rational> {
    BTreeMap::from([
        (Divisor::Psi(1), int(1)),
        (Divisor::Psi(2), int(1)),
        (sep(0, &[1, 2]), int(-3)),
        (sep(1, &[1]), rat(-1, 5)),
        (sep(1, &[1, 2]), rat(-6, 5)),
        (nonsep(), rat(-1, 10)),
    ])
}

/// Second-shift genus-2 coefficients from the appendix tables, as exact functions of `r`.
pub fn genus2_table(a: &[u32], r: &Rational) -> Result<BTreeMap<Divisor, Rational>> {
    let den = int(24) * r;
    let one = Rational::one();
    let k = (r - &one) * (r - int(2)) * (int(2) * r - &one) / &den;
    let s = (r - &one) * (r - int(2)) * (int(2) * r - int(13)) / &den;
    let p = (r - &one) * (int(2) * pow(r, 2) - int(29) * r + int(74)) / &den;
    let ns = -(r - &one) * (r - int(2)) / &den;
    match a {
        [2] => Ok(BTreeMap::from([(Divisor::Kappa1, k), (Divisor::Psi(1), -p), (sep(1, &[1]), s), (nonsep(), ns)])),
        [1, 1] => Ok(BTreeMap::from([
            (Divisor::Kappa1, k.clone()),
            (Divisor::Psi(1), -s.clone()),
            (Divisor::Psi(2), -s.clone()),
            (sep(0, &[1, 2]), p),
            (sep(1, &[1]), k),
            (sep(1, &[1, 2]), s),
            (nonsep(), ns),
        ])),
        _ => Err(Error::Unsupported(format!("no table for a = {a:?}"))),
    }
}

/// Route used for the `r -> 0` limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitPath {
    /// Weighting sums with Bernoulli leg and kappa factors, evaluated at `r = 0` per graph.
    Bernoulli,
    /// Constant term of the interpolated polynomiality certificate.
    Certificate,
}

pub fn r0_limit_class(g: u32, a: &[u32], path: LimitPath) -> Result<DecoratedClass> {
    match path {
        LimitPath::Bernoulli => r0_limit_bernoulli(g, a),
        LimitPath::Certificate => Ok(certify_polynomiality(g, a, None, 16)?.r0_limit()),
    }
}
