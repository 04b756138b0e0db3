use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::rational::factorial;

/// Integer partition with parts in non-increasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    pub fn count_of(&self, part: u32) -> usize {
        self.0.iter().filter(|&&p| p == part).count()
    }

    /// Order of the automorphism group: product of factorials of multiplicities.
    pub fn aut(&self) -> BigInt {
        self.multiplicities().values().fold(BigInt::one(), |acc, &m| acc * factorial(m as u64))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Number of partitions of `n` into at most `k` parts.
pub fn count_partitions(n: u32, k: u32) -> u64 {
    // p(n, k) = p(n, k - 1) + p(n - k, k)
    let n = n as usize;
    let mut table = vec![0u64; n + 1];
    table[0] = 1;
    for part in 1..=(k as usize).min(n.max(1)) {
        for m in part..=n {
            table[m] += table[m - part];
        }
    }
    if k == 0 {
        return (n == 0) as u64;
    }
    table[n]
}

/// All partitions of `n` with at most `max_parts` parts, in reverse lexicographic order.
pub fn partitions_max_parts(n: u32, max_parts: usize) -> Vec<Partition> {
    fn rec(rest: u32, max_part: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_parts, &mut Vec::new(), &mut out);
    out
}

pub fn partitions(n: u32) -> Vec<Partition> {
    partitions_max_parts(n, n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(count_partitions(6, 3), 7);
        assert_eq!(count_partitions(3, 2), 2);
        assert_eq!(count_partitions(0, 0), 1);
        assert_eq!(count_partitions(4, 0), 0);
        assert_eq!(count_partitions(0, 5), 1);
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions_max_parts(6, 3).len(), 7);
    }

    #[test]
    fn aut_and_display() {
        let p = Partition::new(vec![1, 2, 1, 0, 1]);
        assert_eq!(p.parts(), &[2, 1, 1, 1]);
        assert_eq!(p.aut(), BigInt::from(6));
        assert_eq!(p.to_string(), "(2,1,1,1)");
    }
}
