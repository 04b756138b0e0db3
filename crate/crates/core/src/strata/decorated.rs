use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::graph::{for_each_block_permutation, StableGraph};
use crate::algebra::rational::{parse_rational, to_canonical_string, Rational};
use crate::error::{Error, Result};

pub const CLASS_SCHEMA: &str = "rspin.decorated_class/1";

/// Monomial `kappa_{m_1} ... kappa_{m_k}` stored as the sorted list of indices (all `>= 1`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KappaMonomial(pub Vec<u32>);

impl KappaMonomial {
    pub fn one() -> Self {
        KappaMonomial(Vec::new())
    }

    pub fn single(m: u32) -> Self {
        KappaMonomial(vec![m])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        KappaMonomial(v)
    }

    pub fn exponents(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &k in &self.0 {
            *m.entry(k).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for KappaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|(m, e)| if e == 1 { format!("kappa{m}") } else { format!("kappa{m}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub genus: u32,
    pub kappa: KappaMonomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub vertex: usize,
    pub psi: u32,
}

/// Stable graph carrying psi powers on legs and half-edges and a kappa monomial per vertex.
/// As a class it stands for the pushforward of the decoration along the gluing map; the
/// automorphism factor lives in the coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedGraph {
    pub vertices: Vec<Vertex>,
    /// `legs[i]` carries marker `i + 1`.
    pub legs: Vec<HalfEdge>,
    pub edges: Vec<[HalfEdge; 2]>,
}

impl DecoratedGraph {
    pub fn from_stable(graph: &StableGraph) -> Self {
        DecoratedGraph {
            vertices: graph.genera.iter().map(|&g| Vertex { genus: g, kappa: KappaMonomial::one() }).collect(),
            legs: graph.legs.iter().map(|&v| HalfEdge { vertex: v, psi: 0 }).collect(),
            edges: graph
                .edges
                .iter()
                .map(|&(a, b)| [HalfEdge { vertex: a, psi: 0 }, HalfEdge { vertex: b, psi: 0 }])
                .collect(),
        }
    }

    pub fn stable_graph(&self) -> StableGraph {
        StableGraph {
            genera: self.vertices.iter().map(|v| v.genus).collect(),
            legs: self.legs.iter().map(|l| l.vertex).collect(),
            edges: self
                .edges
                .iter()
                .map(|[a, b]| (a.vertex.min(b.vertex), a.vertex.max(b.vertex)))
                .collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.edges.len() as u32
            + self.legs.iter().map(|l| l.psi).sum::<u32>()
            + self.edges.iter().map(|[a, b]| a.psi + b.psi).sum::<u32>()
            + self.vertices.iter().map(|v| v.kappa.degree()).sum::<u32>()
    }

    pub fn is_principal(&self) -> bool {
        self.vertices.len() == 1 && self.edges.is_empty()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|l| l.vertex == v).count()
            + self.edges.iter().map(|[a, b]| (a.vertex == v) as usize + (b.vertex == v) as usize).sum::<usize>()
    }

    fn vertex_key(&self, v: usize) -> (u32, KappaMonomial, Vec<(usize, u32)>, Vec<u32>) {
        let legs: Vec<(usize, u32)> =
            self.legs.iter().enumerate().filter(|(_, l)| l.vertex == v).map(|(i, l)| (i, l.psi)).collect();
        let mut ends: Vec<u32> = self
            .edges
            .iter()
            .flat_map(|e| e.iter())
            .filter(|h| h.vertex == v)
            .map(|h| h.psi)
            .collect();
        ends.sort_unstable();
        (self.vertices[v].genus, self.vertices[v].kappa.clone(), legs, ends)
    }

    fn relabel(&self, perm: &[usize]) -> Self {
        let mut vertices = self.vertices.clone();
        for (v, vert) in self.vertices.iter().enumerate() {
            vertices[perm[v]] = vert.clone();
        }
        let legs = self.legs.iter().map(|l| HalfEdge { vertex: perm[l.vertex], psi: l.psi }).collect();
        let mut edges: Vec<[HalfEdge; 2]> = self
            .edges
            .iter()
            .map(|[a, b]| {
                let mut e = [
                    HalfEdge { vertex: perm[a.vertex], psi: a.psi },
                    HalfEdge { vertex: perm[b.vertex], psi: b.psi },
                ];
                e.sort();
                e
            })
            .collect();
        edges.sort();
        DecoratedGraph { vertices, legs, edges }
    }

    pub fn canonical(&self) -> Self {
        let keys: Vec<_> = (0..self.vertices.len()).map(|v| self.vertex_key(v)).collect();
        let mut best: Option<DecoratedGraph> = None;
        for_each_block_permutation(&keys, |perm| {
            let cand = self.relabel(perm);
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        });
        best.unwrap()
    }

    /// Boundary divisor named by this graph, when it has exactly one edge.
    pub fn boundary_divisor(&self) -> Option<BoundaryDivisor> {
        if self.edges.len() != 1 {
            return None;
        }
        let [a, b] = self.edges[0];
        if a.vertex == b.vertex {
            return Some(BoundaryDivisor::Irreducible);
        }
        let side = |v: usize| {
            let markers: Vec<u32> =
                self.legs.iter().enumerate().filter(|(_, l)| l.vertex == v).map(|(i, _)| i as u32 + 1).collect();
            (self.vertices[v].genus, markers)
        };
        let (sa, sb) = (side(a.vertex), side(b.vertex));
        let pick = if !self.legs.is_empty() {
            if sa.1.contains(&1) { sa } else { sb }
        } else if sa.0 <= sb.0 {
            sa
        } else {
            sb
        };
        Some(BoundaryDivisor::Separating { genus: pick.0, markers: pick.1 })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|v| {
                let kappa: serde_json::Map<String, Value> = v.kappa.exponents().into_iter()
                    .map(|(m, e)| (m.to_string(), json!(e))).collect();
                json!({"genus": v.genus, "kappa": kappa})
            }).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|[a, b]| json!([
                {"v": a.vertex, "psi": a.psi}, {"v": b.vertex, "psi": b.psi}
            ])).collect::<Vec<_>>(),
            "legs": self.legs.iter().enumerate().map(|(i, l)| json!({
                "marker": i + 1, "v": l.vertex, "psi": l.psi
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("decorated graph: {what}"));
        let as_u = |v: &Value, what: &str| v.as_u64().ok_or_else(|| bad(what));
        let vertices = v["vertices"]
            .as_array()
            .ok_or_else(|| bad("vertices"))?
            .iter()
            .map(|vx| {
                let mut kappa = Vec::new();
                if let Some(map) = vx["kappa"].as_object() {
                    for (m, e) in map {
                        let m: u32 = m.parse().map_err(|_| bad("kappa index"))?;
                        for _ in 0..as_u(e, "kappa exponent")? {
                            kappa.push(m);
                        }
                    }
                }
                kappa.sort_unstable();
                Ok(Vertex { genus: as_u(&vx["genus"], "genus")? as u32, kappa: KappaMonomial(kappa) })
            })
            .collect::<Result<Vec<_>>>()?;
        let half = |h: &Value| -> Result<HalfEdge> {
            Ok(HalfEdge { vertex: as_u(&h["v"], "v")? as usize, psi: as_u(&h["psi"], "psi")? as u32 })
        };
        let mut legs: Vec<(u64, HalfEdge)> = v["legs"]
            .as_array()
            .ok_or_else(|| bad("legs"))?
            .iter()
            .map(|l| Ok((as_u(&l["marker"], "marker")?, half(l)?)))
            .collect::<Result<_>>()?;
        legs.sort_by_key(|x| x.0);
        let edges = v["edges"]
            .as_array()
            .ok_or_else(|| bad("edges"))?
            .iter()
            .map(|e| {
                let pair = e.as_array().ok_or_else(|| bad("edge"))?;
                if pair.len() != 2 {
                    return Err(bad("edge arity"));
                }
                Ok([half(&pair[0])?, half(&pair[1])?])
            })
            .collect::<Result<_>>()?;
        let g = DecoratedGraph { vertices, legs: legs.into_iter().map(|x| x.1).collect(), edges };
        if g.legs.iter().chain(g.edges.iter().flatten()).any(|h| h.vertex >= g.vertices.len()) {
            return Err(bad("vertex index out of range"));
        }
        Ok(g)
    }
}

impl fmt::Display for DecoratedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            let mut s = format!("v{v}(g={}", vert.genus);
            if !vert.kappa.is_one() {
                s += &format!(", {}", vert.kappa);
            }
            s += ")";
            parts.push(s);
        }
        for (i, l) in self.legs.iter().enumerate() {
            let p = if l.psi > 0 { format!(" psi^{}", l.psi) } else { String::new() };
            parts.push(format!("{}@v{}{p}", i + 1, l.vertex));
        }
        for [a, b] in &self.edges {
            let p = |h: &HalfEdge| if h.psi > 0 { format!("[psi^{}]", h.psi) } else { String::new() };
            parts.push(format!("v{}{}-v{}{}", a.vertex, p(a), b.vertex, p(b)));
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryDivisor {
    /// Self-node.
    Irreducible,
    /// Separating node; records the side holding marker 1 (or the lower-genus side when `n = 0`).
    Separating { genus: u32, markers: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Divisor {
    Kappa1,
    Psi(u32),
    /// The Q-class of the boundary locus, i.e. `xi_* 1 / |Aut|`.
    Boundary(BoundaryDivisor),
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divisor::Kappa1 => write!(f, "kappa1"),
            Divisor::Psi(i) => write!(f, "psi{i}"),
            Divisor::Boundary(BoundaryDivisor::Irreducible) => write!(f, "delta_irr"),
            Divisor::Boundary(BoundaryDivisor::Separating { genus, markers }) => {
                let m: Vec<String> = markers.iter().map(u32::to_string).collect();
                write!(f, "delta_{{{genus};{}}}", m.join(","))
            }
        }
    }
}

/// Finite linear combination of decorated strata in `H^*(Mbar_{g,n})`, kept in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedClass {
    pub g: u32,
    pub n: usize,
    terms: BTreeMap<DecoratedGraph, Rational>,
}

impl DecoratedClass {
    pub fn new(g: u32, n: usize) -> Self {
        DecoratedClass { g, n, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, graph: &DecoratedGraph, c: Rational) {
        self.add_canonical(graph.canonical(), c);
    }

    /// Add a term whose graph is already canonical.
    pub fn add_canonical(&mut self, graph: DecoratedGraph, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(graph) {
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

    pub fn add_class(&mut self, other: &DecoratedClass) {
        for (k, v) in &other.terms {
            self.add_canonical(k.clone(), v.clone());
        }
    }

    pub fn sub_class(&self, other: &DecoratedClass) -> DecoratedClass {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_canonical(k.clone(), -v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> DecoratedClass {
        let mut out = DecoratedClass::new(self.g, self.n);
        if !c.is_zero() {
            for (k, v) in &self.terms {
                out.terms.insert(k.clone(), v * c);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DecoratedGraph, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, graph: &DecoratedGraph) -> Rational {
        self.terms.get(&graph.canonical()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_part(&self, d: u32) -> DecoratedClass {
        DecoratedClass {
            g: self.g,
            n: self.n,
            terms: self.terms.iter().filter(|(k, _)| k.degree() == d).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    pub fn filter(&self, keep: impl Fn(&DecoratedGraph) -> bool) -> DecoratedClass {
        DecoratedClass {
            g: self.g,
            n: self.n,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(DecoratedGraph::degree).max()
    }

    /// Coefficients of a degree-one class in the standard divisor classes.
    pub fn divisor_coefficients(&self) -> Result<BTreeMap<Divisor, Rational>> {
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            let div = if k.is_principal() {
                let kappa = &k.vertices[0].kappa;
                let psi: Vec<usize> = (0..k.legs.len()).filter(|&i| k.legs[i].psi > 0).collect();
                match (kappa.0.as_slice(), psi.as_slice()) {
                    ([1], []) => Divisor::Kappa1,
                    ([], [i]) if k.legs[*i].psi == 1 => Divisor::Psi(*i as u32 + 1),
                    _ => return Err(Error::Unsupported(format!("not a divisor term: {k}"))),
                }
            } else if k.degree() == 1 {
                let aut = k.stable_graph().automorphism_count();
                let d = k.boundary_divisor().expect("one-edge graph");
                *out.entry(Divisor::Boundary(d)).or_insert_with(Rational::zero) +=
                    c * Rational::from_integer(aut);
                continue;
            } else {
                return Err(Error::Unsupported(format!("not a divisor term: {k}")));
            };
            *out.entry(div).or_insert_with(Rational::zero) += c;
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": CLASS_SCHEMA,
            "g": self.g,
            "n": self.n,
            "terms": self.terms.iter().map(|(k, c)| {
                let mut t = k.to_json();
                t["coeff"] = json!(to_canonical_string(c));
                t
            }).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("decorated class: {what}"));
        if v.get("schema").and_then(Value::as_str).is_some_and(|s| s != CLASS_SCHEMA) {
            return Err(bad("unknown schema"));
        }
        let g = v["g"].as_u64().ok_or_else(|| bad("g"))? as u32;
        let n = v["n"].as_u64().ok_or_else(|| bad("n"))? as usize;
        let mut out = DecoratedClass::new(g, n);
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let graph = DecoratedGraph::from_json(t)?;
            if graph.legs.len() != n {
                return Err(bad("leg count"));
            }
            let c = parse_rational(t["coeff"].as_str().ok_or_else(|| bad("coeff"))?)?;
            out.add_term(&graph, c);
        }
        Ok(out)
    }
}

impl fmt::Display for DecoratedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{:>12}  {k}", c.to_string())?;
        }
        Ok(())
    }
}

pub fn aut_factor(graph: &StableGraph) -> Rational {
    Rational::new(BigInt::one(), graph.automorphism_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn loop_graph(p: u32, q: u32) -> DecoratedGraph {
        DecoratedGraph {
            vertices: vec![Vertex { genus: 0, kappa: KappaMonomial::one() }],
            legs: vec![HalfEdge { vertex: 0, psi: 0 }],
            edges: vec![[HalfEdge { vertex: 0, psi: p }, HalfEdge { vertex: 0, psi: q }]],
        }
    }

    #[test]
    fn canonical_merges_isomorphic() {
        let mut c = DecoratedClass::new(1, 1);
        c.add_term(&loop_graph(1, 0), int(1));
        c.add_term(&loop_graph(0, 1), int(2));
        assert_eq!(c.len(), 1);
        assert_eq!(c.coeff(&loop_graph(0, 1)), int(3));
        let g = loop_graph(2, 1);
        assert_eq!(g.canonical().canonical(), g.canonical());
    }

    #[test]
    fn json_roundtrip() {
        let mut c = DecoratedClass::new(1, 1);
        c.add_term(&loop_graph(0, 0), rat(-1, 3));
        let mut p = DecoratedGraph::from_stable(&StableGraph::trivial(1, 1));
        p.vertices[0].kappa = KappaMonomial(vec![1, 1, 2]);
        c.add_term(&p, rat(5, 7));
        let v = c.to_json();
        assert_eq!(DecoratedClass::from_json(&v).unwrap(), c);
        let terms = v["terms"].as_array().unwrap();
        assert!(terms.iter().any(|t| t["vertices"][0]["kappa"]["1"] == json!(2)));
    }

    #[test]
    fn divisor_readout_uses_locus_classes() {
        let mut c = DecoratedClass::new(1, 1);
        c.add_term(&loop_graph(0, 0), rat(1, 2));
        let d = c.divisor_coefficients().unwrap();
        assert_eq!(d[&Divisor::Boundary(BoundaryDivisor::Irreducible)], int(1));
    }
}
