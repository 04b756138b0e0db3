use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::decorated::{aut_factor, DecoratedClass, DecoratedGraph, KappaMonomial};
use super::graph::{enumerate_stable_graphs, StableGraph};
use crate::algebra::matrix::QMatrix;
use crate::algebra::rational::{factorial, int, Rational};
use crate::frobenius::{add_assign, scaled, FrobeniusAlgebra, Shift, Vector};
use crate::error::{Error, Result};
use crate::rmatrix::r_inverse;

/// Algebra-valued kappa polynomial, the vertex factor produced by the kappa legs.
pub type KappaVector = BTreeMap<KappaMonomial, Vector>;

/// Everything the graph sum needs from `(r, shift)` up to a fixed degree.
pub struct GiventalData {
    alg: FrobeniusAlgebra,
    max_degree: u32,
    rinv: Vec<QMatrix>,
    edge: Vec<Vec<QMatrix>>,
    kappa: Vec<(KappaMonomial, Vector)>,
    handle_powers: Vec<Vector>,
}

impl GiventalData {
    pub fn new(r: u32, shift: Shift, max_degree: u32) -> Result<Self> {
        let alg = FrobeniusAlgebra::new(r, shift)?;
        let order = max_degree as usize;
        let rinv_series = r_inverse(r, shift, order.max(1))?;
        let rinv: Vec<QMatrix> = (0..=order).map(|m| rinv_series.coeff(m)).collect();
        let edge = edge_bivectors(&alg, &rinv, order)?;
        let kappa = kappa_vector(&alg, &rinv, max_degree).into_iter().collect();
        Ok(GiventalData { alg, max_degree, rinv, edge, kappa, handle_powers: Vec::new() })
    }

    pub fn algebra(&self) -> &FrobeniusAlgebra {
        &self.alg
    }

    pub fn r_inverse_coeff(&self, m: usize) -> &QMatrix {
        &self.rinv[m]
    }

    /// Coefficient of `psi'^p psi''^q` of the edge bivector, as a matrix indexed by the two half-edges.
    pub fn edge_coeff(&self, p: usize, q: usize) -> &QMatrix {
        &self.edge[p][q]
    }

    pub fn kappa_element(&self) -> &[(KappaMonomial, Vector)] {
        &self.kappa
    }

    fn handle_power(&self, g: u32) -> Vector {
        self.handle_powers.get(g as usize).cloned().unwrap_or_else(|| self.alg.handle_power(g))
    }

    fn with_handles(mut self, g: u32) -> Self {
        self.handle_powers = (0..=g).map(|k| self.alg.handle_power(k)).collect();
        self
    }
}

/// Divides `eta^{-1} - R^{-1}(z) eta^{-1} R^{-1}(w)^T` by `z + w`; `edge[p][q]` holds the
/// coefficient of `z^p w^q` for `p + q < order`.
fn edge_bivectors(alg: &FrobeniusAlgebra, rinv: &[QMatrix], order: usize) -> Result<Vec<Vec<QMatrix>>> {
    let eta_inv = alg.eta_inverse();
    let dim = alg.dim();
    let numerator = |m: usize, l: usize| -> QMatrix {
        let prod = &(&rinv[m] * &eta_inv) * &rinv[l].transpose();
        let mut out = prod.scale(&int(-1));
        if m == 0 && l == 0 {
            out = &out + &eta_inv;
        }
        out
    };
    let mut edge = vec![vec![QMatrix::zeros(dim, dim); order + 1]; order + 1];
    if !numerator(0, 0).is_zero() {
        return Err(Error::NotDivisible("edge factor not divisible".into()));
    }
    for s in 1..=order {
        edge[0][s - 1] = numerator(0, s);
        for i in 1..s {
            edge[i][s - 1 - i] = &numerator(i, s - i) - &edge[i - 1][s - i];
        }
        if numerator(s, 0) != edge[s - 1][0] {
            return Err(Error::NotDivisible("edge factor not divisible".into()));
        }
    }
    Ok(edge)
}

fn series_mul(alg: &FrobeniusAlgebra, a: &[Vector], b: &[Vector], order: usize) -> Vec<Vector> {
    let mut out = vec![alg.zero(); order + 1];
    for (i, u) in a.iter().enumerate() {
        if u.iter().all(Zero::is_zero) {
            continue;
        }
        for (j, v) in b.iter().enumerate().take(order + 1 - i) {
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            add_assign(&mut out[i + j], &alg.mul(u, v));
        }
    }
    out
}

/// `exp(-sum_M [log R^{-1}(z) e_0]_M kappa_M)` in the algebra tensored with the kappa ring.
pub fn kappa_vector(alg: &FrobeniusAlgebra, rinv: &[QMatrix], max_degree: u32) -> KappaVector {
    let order = max_degree as usize;
    let e0 = alg.unit();
    let mut u: Vec<Vector> = (0..=order).map(|m| if m < rinv.len() { rinv[m].column(0) } else { alg.zero() }).collect();
    u[0] = alg.zero();
    let _ = &e0;
    let mut log = vec![alg.zero(); order + 1];
    let mut power = u.clone();
    for k in 1..=order {
        let sign = if k % 2 == 1 { int(1) } else { int(-1) };
        let c = sign / int(k as i64);
        for (m, v) in power.iter().enumerate() {
            add_assign(&mut log[m], &scaled(v, &c));
        }
        power = series_mul(alg, &power, &u, order);
    }
    let mut y = KappaVector::new();
    for (m, v) in log.iter().enumerate().skip(1) {
        if v.iter().any(|x| !x.is_zero()) {
            y.insert(KappaMonomial::single(m as u32), scaled(v, &int(-1)));
        }
    }
    let mul = |a: &KappaVector, b: &KappaVector| {
        let mut out = KappaVector::new();
        for (ma, va) in a {
            for (mb, vb) in b {
                if ma.degree() + mb.degree() > max_degree {
                    continue;
                }
                let prod = alg.mul(va, vb);
                let entry = out.entry(ma.mul(mb)).or_insert_with(|| alg.zero());
                add_assign(entry, &prod);
            }
        }
        out.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        out
    };
    let mut result = KappaVector::from([(KappaMonomial::one(), alg.unit())]);
    let mut power = KappaVector::from([(KappaMonomial::one(), alg.unit())]);
    for k in 1..=max_degree {
        power = mul(&power, &y);
        let inv = Rational::new(One::one(), factorial(k as u64));
        for (m, v) in &power {
            let entry = result.entry(m.clone()).or_insert_with(|| alg.zero());
            add_assign(entry, &scaled(v, &inv));
        }
    }
    result.retain(|_, v| v.iter().any(|x| !x.is_zero()));
    result
}

/// Parts of degree `lo..=hi` of `R.omega` for the given shift, evaluated on `e_{a_1} x ... x e_{a_n}`.
pub fn givental_range(r: u32, shift: Shift, g: u32, a: &[u32], lo: u32, hi: u32) -> Result<DecoratedClass> {
    let n = a.len();
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let dim_bound = 3 * g as i64 - 3 + n as i64;
    if (hi as i64) > dim_bound {
        return Err(Error::DegreeMismatch(format!("degree {hi} exceeds dim Mbar_{{{g},{n}}} = {dim_bound}")));
    }
    let data = GiventalData::new(r, shift, hi)?.with_handles(g);
    for &ai in a {
        data.alg.check_index(ai)?;
    }
    givental_with(&data, g, a, lo, hi)
}

pub fn givental_action(r: u32, shift: Shift, g: u32, a: &[u32], degree_cap: u32) -> Result<DecoratedClass> {
    givental_range(r, shift, g, a, 0, degree_cap)
}

pub fn givental_degree_part(r: u32, shift: Shift, g: u32, a: &[u32], d: u32) -> Result<DecoratedClass> {
    givental_range(r, shift, g, a, d, d)
}

pub fn givental_with(data: &GiventalData, g: u32, a: &[u32], lo: u32, hi: u32) -> Result<DecoratedClass> {
    if hi > data.max_degree {
        return Err(Error::DegreeMismatch(format!("precomputed to degree {}", data.max_degree)));
    }
    let n = a.len();
    let graphs = enumerate_stable_graphs(g, n, hi as usize)?;
    let parts: Vec<DecoratedClass> =
        graphs.par_iter().map(|graph| graph_contribution(data, graph, a, lo, hi)).collect::<Result<_>>()?;
    let mut out = DecoratedClass::new(g, n);
    for p in &parts {
        out.add_class(p);
    }
    Ok(out)
}

struct Slots<'a> {
    data: &'a GiventalData,
    graph: &'a StableGraph,
    a: &'a [u32],
    lo: u32,
    hi: u32,
    legs: Vec<u32>,
    edges: Vec<(u32, u32)>,
    kappas: Vec<usize>,
}

fn graph_contribution(data: &GiventalData, graph: &StableGraph, a: &[u32], lo: u32, hi: u32) -> Result<DecoratedClass> {
    let mut out = DecoratedClass::new(graph.genus(), graph.legs.len());
    let e = graph.num_edges() as u32;
    if e > hi {
        return Ok(out);
    }
    let mut slots = Slots {
        data,
        graph,
        a,
        lo,
        hi,
        legs: Vec::with_capacity(graph.legs.len()),
        edges: Vec::with_capacity(graph.edges.len()),
        kappas: Vec::with_capacity(graph.num_vertices()),
    };
    let weight = aut_factor(graph);
    slots.assign(e, &weight, &mut out);
    Ok(out)
}

impl Slots<'_> {
    fn assign(&mut self, used: u32, weight: &Rational, out: &mut DecoratedClass) {
        let budget = self.hi - used;
        if self.legs.len() < self.graph.legs.len() {
            let col = self.a[self.legs.len()] as usize;
            for p in 0..=budget {
                if self.data.rinv[p as usize].column(col).iter().all(Zero::is_zero) {
                    continue;
                }
                self.legs.push(p);
                self.assign(used + p, weight, out);
                self.legs.pop();
            }
        } else if self.edges.len() < self.graph.edges.len() {
            for s in 0..=budget {
                for p in 0..=s {
                    if self.data.edge[p as usize][(s - p) as usize].is_zero() {
                        continue;
                    }
                    self.edges.push((p, s - p));
                    self.assign(used + s, weight, out);
                    self.edges.pop();
                }
            }
        } else if self.kappas.len() < self.graph.num_vertices() {
            for (i, (mono, _)) in self.data.kappa.iter().enumerate() {
                if mono.degree() <= budget {
                    self.kappas.push(i);
                    self.assign(used + mono.degree(), weight, out);
                    self.kappas.pop();
                }
            }
        } else if used >= self.lo {
            let value = self.evaluate();
            if !value.is_zero() {
                out.add_term(&self.decorated(), value * weight);
            }
        }
    }

    fn decorated(&self) -> DecoratedGraph {
        let mut d = DecoratedGraph::from_stable(self.graph);
        for (leg, &p) in d.legs.iter_mut().zip(&self.legs) {
            leg.psi = p;
        }
        for (edge, &(p, q)) in d.edges.iter_mut().zip(&self.edges) {
            edge[0].psi = p;
            edge[1].psi = q;
        }
        for (v, &k) in d.vertices.iter_mut().zip(&self.kappas) {
            v.kappa = self.data.kappa[k].0.clone();
        }
        d
    }

    fn evaluate(&self) -> Rational {
        let alg = &self.data.alg;
        let base: Vec<Vector> = (0..self.graph.num_vertices())
            .map(|v| {
                let mut acc = alg.mul(&self.data.kappa[self.kappas[v]].1, &self.data.handle_power(self.graph.genera[v]));
                for (i, &lv) in self.graph.legs.iter().enumerate() {
                    if lv == v {
                        let leg = self.data.rinv[self.legs[i] as usize].column(self.a[i] as usize);
                        acc = alg.mul(&acc, &leg);
                    }
                }
                acc
            })
            .collect();
        let entries: Vec<Vec<(usize, usize, &Rational)>> = self
            .edges
            .iter()
            .map(|&(p, q)| {
                let m = &self.data.edge[p as usize][q as usize];
                let mut v = Vec::new();
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        let c = m.get(i, j);
                        if !c.is_zero() {
                            v.push((i, j, c));
                        }
                    }
                }
                v
            })
            .collect();
        let mut total = Rational::zero();
        let mut vectors = base.clone();
        self.contract(0, &entries, &mut vectors, &Rational::one(), &mut total);
        total
    }

    fn contract(
        &self,
        k: usize,
        entries: &[Vec<(usize, usize, &Rational)>],
        vectors: &mut Vec<Vector>,
        coeff: &Rational,
        total: &mut Rational,
    ) {
        let alg = &self.data.alg;
        if k == entries.len() {
            let mut value = coeff.clone();
            for v in vectors.iter() {
                value *= alg.counit(v);
                if value.is_zero() {
                    return;
                }
            }
            *total += value;
            return;
        }
        let (u, w) = self.graph.edges[k];
        for &(i, j, c) in &entries[k] {
            let (saved_u, saved_w) = (vectors[u].clone(), vectors[w].clone());
            vectors[u] = alg.mul_basis(&vectors[u], i);
            vectors[w] = alg.mul_basis(&vectors[w], j);
            if vectors[u].iter().any(|x| !x.is_zero()) && vectors[w].iter().any(|x| !x.is_zero()) {
                self.contract(k + 1, entries, vectors, &(coeff * c), total);
            }
            vectors[u] = saved_u;
            vectors[w] = saved_w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_is_tqft() {
        for shift in [Shift::TauLast, Shift::TauSecond] {
            let c = givental_degree_part(5, shift, 1, &[2, 1], 0).unwrap();
            let alg = FrobeniusAlgebra::new(5, shift).unwrap();
            let want = alg.tqft_exact(1, &[2, 1]).unwrap();
            let principal = DecoratedGraph::from_stable(&StableGraph::trivial(1, 2));
            assert_eq!(c.coeff(&principal), want);
            assert_eq!(c.len(), usize::from(!want.is_zero()));
        }
    }

    #[test]
    fn edge_division_exact() {
        for r in 2..=6 {
            for shift in [Shift::TauLast, Shift::TauSecond] {
                GiventalData::new(r, shift, 6).unwrap();
            }
        }
    }
}
