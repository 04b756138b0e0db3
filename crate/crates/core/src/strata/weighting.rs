use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::decorated::{aut_factor, DecoratedClass, DecoratedGraph, KappaMonomial};
use super::graph::{enumerate_stable_graphs, StableGraph};
use crate::algebra::rational::{factorial, int, pow, Rational};
use crate::algebra::series::Series;
use crate::error::{Error, Result};

/// Half-edge values in `0..=r-2`: one per leg, a pair per edge summing to `r - 2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weighting {
    pub legs: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
}

fn check_legs(graph: &StableGraph, r: u32, a: &[u32]) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidR { r, min: 2 });
    }
    if a.len() > graph.legs.len() {
        return Err(Error::DimensionMismatch(format!("{} weights for {} legs", a.len(), graph.legs.len())));
    }
    if let Some(&bad) = a.iter().find(|&&x| x > r - 2) {
        return Err(Error::IndexOutOfRange { index: bad, r });
    }
    Ok(())
}

/// All weightings of `graph`; legs past `a.len()` are kappa legs and carry 0.
pub fn enumerate_weightings(graph: &StableGraph, r: u32, a: &[u32]) -> Result<Vec<Weighting>> {
    check_legs(graph, r, a)?;
    let mut legs = a.to_vec();
    legs.resize(graph.legs.len(), 0);
    let mut out = vec![Weighting { legs, edges: Vec::new() }];
    for _ in &graph.edges {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..=r - 2).map(move |x| {
                    let mut w = w.clone();
                    w.edges.push((x, r - 2 - x));
                    w
                })
            })
            .collect();
    }
    Ok(out)
}

/// Whether every vertex satisfies `g_v - 1 - sum a_h = 0 mod r - 1`, the support of the
/// second-shift topological field theory.
pub fn supports_tqft(graph: &StableGraph, r: u32, w: &Weighting) -> bool {
    let p = r as i64 - 1;
    (0..graph.num_vertices()).all(|v| {
        let mut x = graph.genera[v] as i64 - 1;
        for (i, &lv) in graph.legs.iter().enumerate() {
            if lv == v {
                x -= w.legs[i] as i64;
            }
        }
        for (e, &(s, t)) in graph.edges.iter().enumerate() {
            if s == v {
                x -= w.edges[e].0 as i64;
            }
            if t == v {
                x -= w.edges[e].1 as i64;
            }
        }
        x.rem_euclid(p) == 0
    })
}

pub fn tqft_supported_weightings(graph: &StableGraph, r: u32, a: &[u32]) -> Result<Vec<Weighting>> {
    Ok(enumerate_weightings(graph, r, a)?.into_iter().filter(|w| supports_tqft(graph, r, w)).collect())
}

/// Psi powers on legs and half-edges plus a kappa monomial per vertex, on a fixed graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NumeratorKey {
    pub legs: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    pub kappa: Vec<KappaMonomial>,
}

pub type Numerator = BTreeMap<NumeratorKey, Rational>;

/// Per-half-edge coefficients `c_m(w)` of a graph sum with vertex variables mod `r - 1`.
pub struct WeightedSum {
    r: u32,
    degree: u32,
    coeffs: Vec<Vec<Rational>>,
    vertex: Vec<(KappaMonomial, Rational)>,
}

impl WeightedSum {
    /// `coeff(m, w)` for `m <= degree` and `0 <= w <= r - 2`; the vertex factor is
    /// `exp(-sum_M c'_M x^M kappa_M)` with `c' = log sum_m coeff(m, 0) z^m`.
    pub fn new(r: u32, degree: u32, coeff: impl Fn(usize, u32) -> Rational) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidR { r, min: 2 });
        }
        let order = degree as usize;
        let coeffs: Vec<Vec<Rational>> = (0..=r - 2).map(|w| (0..=order).map(|m| coeff(m, w)).collect()).collect();
        let f = Series::new(coeffs[0].clone(), order);
        let c = f.log()?;
        let mut y: BTreeMap<KappaMonomial, Rational> = BTreeMap::new();
        for m in 1..=order {
            if !c.coeff(m).is_zero() {
                y.insert(KappaMonomial::single(m as u32), -c.coeff(m));
            }
        }
        let mut vertex: BTreeMap<KappaMonomial, Rational> = BTreeMap::from([(KappaMonomial::one(), Rational::one())]);
        let mut power = vertex.clone();
        for k in 1..=degree {
            let mut next = BTreeMap::new();
            for (ma, ca) in &power {
                for (mb, cb) in &y {
                    if ma.degree() + mb.degree() <= degree {
                        *next.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
                    }
                }
            }
            power = next;
            let inv = Rational::new(One::one(), factorial(k as u64));
            for (m, cm) in &power {
                *vertex.entry(m.clone()).or_insert_with(Rational::zero) += cm * &inv;
            }
        }
        let vertex = vertex.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(WeightedSum { r, degree, coeffs, vertex })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Sum over weightings of the undivided edge numerators, legs and vertex factors, keeping the
    /// terms of total degree `degree` whose vertex-variable exponents all vanish mod `r - 1`.
    pub fn numerator(&self, graph: &StableGraph, a: &[u32]) -> Result<Numerator> {
        let mut out = Numerator::new();
        for w in enumerate_weightings(graph, self.r, a)? {
            let mut walk = Walk { sum: self, graph, w: &w, key: NumeratorKey { legs: vec![], edges: vec![], kappa: vec![] }, x: Vec::new() };
            walk.x = (0..graph.num_vertices())
                .map(|v| {
                    let mut x = graph.genera[v] as i64 - 1;
                    for (i, &lv) in graph.legs.iter().enumerate() {
                        if lv == v {
                            x -= w.legs[i] as i64;
                        }
                    }
                    for (e, &(s, t)) in graph.edges.iter().enumerate() {
                        if s == v {
                            x -= w.edges[e].0 as i64;
                        }
                        if t == v {
                            x -= w.edges[e].1 as i64;
                        }
                    }
                    x
                })
                .collect();
            walk.run(0, &Rational::one(), &mut out);
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

struct Walk<'a> {
    sum: &'a WeightedSum,
    graph: &'a StableGraph,
    w: &'a Weighting,
    key: NumeratorKey,
    x: Vec<i64>,
}

impl Walk<'_> {
    fn run(&mut self, used: u32, coeff: &Rational, out: &mut Numerator) {
        let budget = self.sum.degree - used;
        let coeffs = &self.sum.coeffs;
        if self.key.legs.len() < self.graph.legs.len() {
            let i = self.key.legs.len();
            let (v, a) = (self.graph.legs[i], self.w.legs[i] as usize);
            for m in 0..=budget {
                let c = &coeffs[a][m as usize];
                if c.is_zero() {
                    continue;
                }
                self.key.legs.push(m);
                self.x[v] += m as i64;
                self.run(used + m, &(coeff * c), out);
                self.x[v] -= m as i64;
                self.key.legs.pop();
            }
        } else if self.key.edges.len() < self.graph.edges.len() {
            let e = self.key.edges.len();
            let (s, t) = self.graph.edges[e];
            let (a, b) = (self.w.edges[e].0 as usize, self.w.edges[e].1 as usize);
            for total in 1..=budget {
                for m in 0..=total {
                    let l = total - m;
                    let c = -(&coeffs[a][m as usize] * &coeffs[b][l as usize]);
                    if c.is_zero() {
                        continue;
                    }
                    self.key.edges.push((m, l));
                    self.x[s] += m as i64;
                    self.x[t] += l as i64;
                    self.run(used + total, &(coeff * c), out);
                    self.x[s] -= m as i64;
                    self.x[t] -= l as i64;
                    self.key.edges.pop();
                }
            }
        } else if self.key.kappa.len() < self.graph.num_vertices() {
            let v = self.key.kappa.len();
            for (mono, c) in &self.sum.vertex {
                let k = mono.degree();
                if k > budget {
                    continue;
                }
                self.key.kappa.push(mono.clone());
                self.x[v] += k as i64;
                self.run(used + k, &(coeff * c), out);
                self.x[v] -= k as i64;
                self.key.kappa.pop();
            }
        } else if used == self.sum.degree {
            let p = self.sum.r as i64 - 1;
            if self.x.iter().all(|x| x.rem_euclid(p) == 0) {
                *out.entry(self.key.clone()).or_insert_with(Rational::zero) += coeff;
            }
        }
    }
}

/// Divide by `psi'_e + psi''_e` for every edge; fails when a remainder is left.
pub fn divide_edges(num: &Numerator, num_edges: usize) -> Result<Numerator> {
    let mut current = num.clone();
    for e in 0..num_edges {
        // group by the key with edge e blanked, then by total degree on the edge
        let mut groups: BTreeMap<(NumeratorKey, u32), BTreeMap<u32, Rational>> = BTreeMap::new();
        for (k, c) in &current {
            let (m, l) = k.edges[e];
            let mut rest = k.clone();
            rest.edges[e] = (0, 0);
            groups.entry((rest, m + l)).or_default().insert(m, c.clone());
        }
        let mut next = Numerator::new();
        for ((rest, s), coeffs) in groups {
            let get = |m: u32| coeffs.get(&m).cloned().unwrap_or_else(Rational::zero);
            if s == 0 {
                return Err(Error::NotDivisible("edge factor not divisible".into()));
            }
            let mut q: Vec<Rational> = Vec::with_capacity(s as usize);
            q.push(get(0));
            for i in 1..s {
                let prev = q[i as usize - 1].clone();
                q.push(get(i) - prev);
            }
            if get(s) != q[s as usize - 1] {
                return Err(Error::NotDivisible("edge factor not divisible".into()));
            }
            for (i, c) in q.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut k = rest.clone();
                k.edges[e] = (i as u32, s - 1 - i as u32);
                next.insert(k, c);
            }
        }
        current = next;
    }
    Ok(current)
}

/// Turn a divided numerator on `graph` into decorated terms scaled by `factor`.
pub fn numerator_class(graph: &StableGraph, num: &Numerator, factor: &Rational, out: &mut DecoratedClass) {
    for (k, c) in num {
        let mut d = DecoratedGraph::from_stable(graph);
        for (leg, &p) in d.legs.iter_mut().zip(&k.legs) {
            leg.psi = p;
        }
        for (edge, &(p, q)) in d.edges.iter_mut().zip(&k.edges) {
            edge[0].psi = p;
            edge[1].psi = q;
        }
        for (v, mono) in d.vertices.iter_mut().zip(&k.kappa) {
            v.kappa = mono.clone();
        }
        out.add_term(&d, c * factor);
    }
}

/// The rescaled graph sum with weightings and vertex variables: degree `d` part, coefficients
/// `P_m(r, w)`, prefactor `(r-1)^{1-h^1} / |Aut|`.  In degree `g - 1` this is `r^{g-1} W`.
pub fn weighted_class(sum: &WeightedSum, g: u32, a: &[u32]) -> Result<DecoratedClass> {
    let n = a.len();
    let d = sum.degree;
    let graphs = enumerate_stable_graphs(g, n, d as usize)?;
    let p = int(sum.r as i64 - 1);
    let parts: Vec<DecoratedClass> = graphs
        .par_iter()
        .map(|graph| {
            let mut out = DecoratedClass::new(g, n);
            let num = sum.numerator(graph, a)?;
            let num = divide_edges(&num, graph.num_edges())?;
            let h1 = graph.h1() as i64;
            let pre = if h1 <= 1 { pow(&p, (1 - h1) as u32) } else { Rational::one() / pow(&p, (h1 - 1) as u32) };
            numerator_class(graph, &num, &(pre * aut_factor(graph)), &mut out);
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut out = DecoratedClass::new(g, n);
    for part in &parts {
        out.add_class(part);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_graph() -> StableGraph {
        StableGraph { genera: vec![0], legs: vec![0], edges: vec![(0, 0)] }
    }

    #[test]
    fn weighting_counts() {
        let r = 6;
        assert_eq!(enumerate_weightings(&StableGraph::trivial(2, 1), r, &[2]).unwrap().len(), 1);
        assert_eq!(enumerate_weightings(&loop_graph(), r, &[0]).unwrap().len(), 5);
        let sep = StableGraph { genera: vec![1, 1], legs: vec![0], edges: vec![(0, 1)] };
        assert_eq!(enumerate_weightings(&sep, r, &[2]).unwrap().len(), 5);
        assert_eq!(tqft_supported_weightings(&loop_graph(), r, &[0]).unwrap().len(), 5);
        assert_eq!(tqft_supported_weightings(&loop_graph(), r, &[1]).unwrap().len(), 0);
        assert_eq!(tqft_supported_weightings(&sep, r, &[2]).unwrap().len(), 0);
        assert_eq!(tqft_supported_weightings(&sep, r, &[1]).unwrap().len(), 1);
    }

    #[test]
    fn out_of_range_weight_rejected() {
        assert!(enumerate_weightings(&loop_graph(), 4, &[3]).is_err());
    }
}
