use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::rational::factorial;
use crate::error::{Error, Result};

/// Stable graph: vertex genera, the vertex of each marked leg (`legs[i]` carries marker `i+1`)
/// and edges as vertex pairs `(u, v)` with `u <= v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableGraph {
    pub genera: Vec<u32>,
    pub legs: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl StableGraph {
    pub fn trivial(g: u32, n: usize) -> Self {
        StableGraph { genera: vec![g], legs: vec![0; n], edges: Vec::new() }
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn h1(&self) -> usize {
        self.edges.len() + 1 - self.genera.len()
    }

    pub fn genus(&self) -> u32 {
        self.genera.iter().sum::<u32>() + self.h1() as u32
    }

    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|&&x| x == v).count()
            + self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum::<usize>()
    }

    pub fn is_stable(&self) -> bool {
        (0..self.num_vertices()).all(|v| 2 * self.genera[v] as i64 - 2 + self.valence(v) as i64 > 0)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn relabel(&self, perm: &[usize]) -> StableGraph {
        let mut genera = vec![0; self.genera.len()];
        for (v, &g) in self.genera.iter().enumerate() {
            genera[perm[v]] = g;
        }
        let legs = self.legs.iter().map(|&v| perm[v]).collect();
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        StableGraph { genera, legs, edges }
    }

    fn vertex_key(&self, v: usize) -> (u32, Vec<usize>, usize) {
        let legs: Vec<usize> = (0..self.legs.len()).filter(|&i| self.legs[i] == v).collect();
        (self.genera[v], legs, self.valence(v))
    }

    /// Representative of the isomorphism class (legs are labelled and fixed).
    pub fn canonical(&self) -> StableGraph {
        let keys: Vec<_> = (0..self.num_vertices()).map(|v| self.vertex_key(v)).collect();
        let mut best: Option<StableGraph> = None;
        for_each_block_permutation(&keys, |perm| {
            let cand = self.relabel(perm);
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        });
        best.unwrap()
    }

    /// Order of the automorphism group, counting half-edge swaps on loops and permutations
    /// of parallel edges.
    pub fn automorphism_count(&self) -> BigInt {
        let keys: Vec<_> = (0..self.num_vertices()).map(|v| self.vertex_key(v)).collect();
        let base = self.relabel(&(0..self.num_vertices()).collect::<Vec<_>>());
        let mut vertex_perms = 0u64;
        for_each_block_permutation(&keys, |perm| {
            if self.relabel(perm) == base {
                vertex_perms += 1;
            }
        });
        let mut acc = BigInt::from(vertex_perms);
        let mut classes: std::collections::BTreeMap<(usize, usize), u64> = Default::default();
        for &(a, b) in &self.edges {
            *classes.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        for ((a, b), k) in classes {
            acc *= factorial(k);
            if a == b {
                acc *= BigInt::one() << k;
            }
        }
        acc
    }

    /// All graphs obtained by degenerating one vertex (adding one edge), canonicalized.
    pub fn degenerations(&self) -> BTreeSet<StableGraph> {
        let mut out = BTreeSet::new();
        for v in 0..self.num_vertices() {
            if self.genera[v] >= 1 {
                let mut g = self.clone();
                g.genera[v] -= 1;
                g.edges.push((v, v));
                out.insert(g.canonical());
            }
            // half-edges at v: legs by marker, then edge ends (edge, side)
            let leg_ids: Vec<usize> = (0..self.legs.len()).filter(|&i| self.legs[i] == v).collect();
            let mut ends: Vec<(usize, usize)> = Vec::new();
            for (e, &(a, b)) in self.edges.iter().enumerate() {
                if a == v {
                    ends.push((e, 0));
                }
                if b == v {
                    ends.push((e, 1));
                }
            }
            let total = leg_ids.len() + ends.len();
            let w = self.num_vertices();
            for mask in 0u64..(1 << total) {
                let moved = mask.count_ones() as i64;
                let stay = total as i64 - moved;
                for gw in 0..=self.genera[v] {
                    let gv = self.genera[v] - gw;
                    if 2 * gw as i64 - 1 + moved <= 0 || 2 * gv as i64 - 1 + stay <= 0 {
                        continue;
                    }
                    let mut g = self.clone();
                    g.genera[v] = gv;
                    g.genera.push(gw);
                    for (i, &l) in leg_ids.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            g.legs[l] = w;
                        }
                    }
                    for (j, &(e, side)) in ends.iter().enumerate() {
                        if mask & (1 << (leg_ids.len() + j)) != 0 {
                            if side == 0 {
                                g.edges[e].0 = w;
                            } else {
                                g.edges[e].1 = w;
                            }
                        }
                    }
                    g.edges.push((v, w));
                    for e in g.edges.iter_mut() {
                        *e = (e.0.min(e.1), e.0.max(e.1));
                    }
                    out.insert(g.canonical());
                }
            }
        }
        out
    }
}

/// Calls `f` with every permutation `perm` (old vertex -> new position) that sends vertices to
/// positions sorted by `keys`, permuting freely inside blocks of equal keys.
pub(crate) fn for_each_block_permutation<K: Ord>(keys: &[K], mut f: impl FnMut(&[usize])) {
    let n = keys.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    // blocks of equal keys in sorted order
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match blocks.last_mut() {
            Some(b) if keys[b[0]] == keys[v] => b.push(v),
            _ => blocks.push(vec![v]),
        }
    }
    let mut perm = vec![0usize; n];
    fn rec(blocks: &[Vec<usize>], start: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        let Some((first, rest)) = blocks.split_first() else {
            f(perm);
            return;
        };
        let mut items = first.clone();
        permute(&mut items, 0, &mut |p: &[usize]| {
            for (i, &v) in p.iter().enumerate() {
                perm[v] = start + i;
            }
            rec(rest, start + first.len(), perm, f);
        });
    }
    fn permute(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == items.len() {
            f(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, f);
            items.swap(k, i);
        }
    }
    rec(&blocks, 0, &mut perm, &mut f);
}

/// Stable graphs of type `(g, n)` with at most `max_edges` edges, up to isomorphism,
/// ordered by edge count and then canonical form.
pub fn enumerate_stable_graphs(g: u32, n: usize, max_edges: usize) -> Result<Vec<StableGraph>> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let max_edges = max_edges.min((3 * g as i64 - 3 + n as i64) as usize);
    let mut levels: Vec<BTreeSet<StableGraph>> = vec![[StableGraph::trivial(g, n)].into_iter().collect()];
    for _ in 0..max_edges {
        let next: BTreeSet<StableGraph> =
            levels.last().unwrap().iter().flat_map(|gr| gr.degenerations()).collect();
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    Ok(levels.into_iter().flatten().collect())
}
