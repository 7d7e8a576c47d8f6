//! Finite posets and their Möbius functions.

use std::sync::OnceLock;

use crate::bitset::BitSet;

/// A partial order on `0..size`, stored as down-sets and up-sets.
pub struct FinitePoset {
    below: Vec<BitSet>,
    above: Vec<BitSet>,
    /// `mu_to[y]` lists the nonzero `(x, mu(x, y))`, filled on first request.
    mu_to: Vec<OnceLock<Vec<(usize, i64)>>>,
}

impl std::fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinitePoset")
            .field("size", &self.size())
            .finish()
    }
}

impl FinitePoset {
    /// `leq(x, y)` must be a partial order; this is not checked.
    pub fn from_fn(size: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let below: Vec<BitSet> = (0..size)
            .map(|y| BitSet::from_indices(size, (0..size).filter(|&x| leq(x, y))))
            .collect();
        Self::from_down_sets(below)
    }

    /// `below[y]` is the set of `x <= y` (reflexive).
    pub fn from_down_sets(below: Vec<BitSet>) -> Self {
        let size = below.len();
        let mut above = vec![BitSet::new(size); size];
        for (y, d) in below.iter().enumerate() {
            for x in d.iter() {
                above[x].insert(y);
            }
        }
        FinitePoset {
            below,
            above,
            mu_to: (0..size).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.below.len()
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.below[y].contains(x)
    }

    pub fn down_set(&self, y: usize) -> &BitSet {
        &self.below[y]
    }

    pub fn up_set(&self, x: usize) -> &BitSet {
        &self.above[x]
    }

    /// Nonzero values `mu(x, y)` for fixed `y`, in decreasing position of `x`.
    pub fn moebius_to(&self, y: usize) -> &[(usize, i64)] {
        self.mu_to[y].get_or_init(|| {
            let down = &self.below[y];
            // larger down-sets first gives a reverse linear extension
            let mut order: Vec<usize> = down.iter().collect();
            order.sort_by_key(|&x| std::cmp::Reverse(self.below[x].len()));
            let mut val = vec![0i64; self.size()];
            let mut out = Vec::new();
            for x in order {
                let v = if x == y {
                    1
                } else {
                    -self.above[x]
                        .intersection(down)
                        .iter()
                        .filter(|&z| z != x)
                        .map(|z| val[z])
                        .sum::<i64>()
                };
                val[x] = v;
                if v != 0 {
                    out.push((x, v));
                }
            }
            out
        })
    }

    pub fn moebius(&self, x: usize, y: usize) -> i64 {
        if !self.leq(x, y) {
            return 0;
        }
        self.moebius_to(y)
            .iter()
            .find(|&&(z, _)| z == x)
            .map_or(0, |&(_, v)| v)
    }

    /// The order restricted to `subset`; element `i` of the result is `subset[i]`.
    pub fn induced_subposet(&self, subset: &[usize]) -> FinitePoset {
        let n = subset.len();
        let below = (0..n)
            .map(|j| BitSet::from_indices(n, (0..n).filter(|&i| self.leq(subset[i], subset[j]))))
            .collect();
        FinitePoset::from_down_sets(below)
    }

    /// Componentwise order on pairs; `(x, y)` is element `x * q.size() + y`.
    pub fn product_poset(&self, q: &FinitePoset) -> FinitePoset {
        let m = q.size();
        let n = self.size() * m;
        let below = (0..n)
            .map(|b| {
                let (b1, b2) = (b / m, b % m);
                let mut s = BitSet::new(n);
                for a1 in self.below[b1].iter() {
                    for a2 in q.below[b2].iter() {
                        s.insert(a1 * m + a2);
                    }
                }
                s
            })
            .collect();
        FinitePoset::from_down_sets(below)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn divisor_poset(n: usize) -> (Vec<usize>, FinitePoset) {
        let ds: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        let p = FinitePoset::from_fn(ds.len(), |x, y| ds[y].is_multiple_of(ds[x]));
        (ds, p)
    }

    /// Alternating count of strict chains from x to y.
    fn chain_sum(p: &FinitePoset, x: usize, y: usize) -> i64 {
        if x == y {
            return 1;
        }
        if !p.leq(x, y) {
            return 0;
        }
        // chains x < z < ... < y, recursing on the first step
        -(0..p.size())
            .filter(|&z| z != x && p.leq(x, z) && p.leq(z, y))
            .map(|z| chain_sum(p, z, y))
            .sum::<i64>()
    }

    #[test]
    fn divisor_lattice_gives_number_theoretic_moebius() {
        let (ds, p) = divisor_poset(60);
        for (x, &dx) in ds.iter().enumerate() {
            for (y, &dy) in ds.iter().enumerate() {
                let expect = if dy % dx == 0 {
                    crate::arith::moebius((dy / dx) as u64)
                } else {
                    0
                };
                assert_eq!(p.moebius(x, y), expect);
            }
        }
    }

    #[test]
    fn recursion_and_chain_oracle() {
        let (_, p) = divisor_poset(36);
        for y in 0..p.size() {
            for x in 0..p.size() {
                if p.leq(x, y) {
                    let s: i64 = (0..p.size())
                        .filter(|&z| p.leq(x, z) && p.leq(z, y))
                        .map(|z| p.moebius(x, z))
                        .sum();
                    assert_eq!(s, (x == y) as i64);
                }
                assert_eq!(p.moebius(x, y), chain_sum(&p, x, y));
            }
        }
    }

    #[test]
    fn product_poset_moebius_factors() {
        let (_, a) = divisor_poset(12);
        let (_, b) = divisor_poset(18);
        let ab = a.product_poset(&b);
        let m = b.size();
        for x in 0..ab.size() {
            for y in 0..ab.size() {
                assert_eq!(
                    ab.moebius(x, y),
                    a.moebius(x / m, y / m) * b.moebius(x % m, y % m)
                );
            }
        }
    }

    #[test]
    fn induced_subposet_recomputes() {
        // 1 < 2,3 < 6 with the bottom removed leaves an antichain plus top
        let (_, p) = divisor_poset(6);
        let sub = p.induced_subposet(&[1, 2, 3]);
        assert_eq!(sub.moebius(0, 2), -1);
        assert_eq!(sub.moebius(0, 1), 0);
        // a chain stays a chain
        let (_, c) = divisor_poset(16);
        let sub = c.induced_subposet(&[0, 2, 4]);
        assert_eq!(sub.moebius(0, 1), -1);
        assert_eq!(sub.moebius(0, 2), 0);
    }

    proptest! {
        #[test]
        fn inversion_round_trip(vals in proptest::collection::vec(-50i64..50, 12)) {
            let (_, p) = divisor_poset(60);
            let g: Vec<i64> = (0..p.size())
                .map(|y| p.down_set(y).iter().map(|x| vals[x]).sum())
                .collect();
            for (y, &v) in vals.iter().enumerate().take(p.size()) {
                let f: i64 = p.moebius_to(y).iter().map(|&(x, m)| m * g[x]).sum();
                prop_assert_eq!(f, v);
            }
        }
    }
}
