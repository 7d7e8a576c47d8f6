//! The subgroup lattice of a finite group with conjugacy data.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::group::FiniteGroup;
use crate::poset::FinitePoset;
use crate::subgroup::SubgroupSet;

pub struct SubgroupLattice {
    subgroups: Vec<SubgroupSet>,
    index: HashMap<BitSet, usize>,
    poset: FinitePoset,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    normalizer_order: Vec<usize>,
    /// `conj[g * count + u]` is the index of `g U g^-1`.
    conj: Vec<u32>,
}

impl std::fmt::Debug for SubgroupLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubgroupLattice")
            .field("subgroups", &self.subgroups.len())
            .field("classes", &self.classes.len())
            .finish()
    }
}

impl SubgroupLattice {
    /// All subgroups, found by closing the cyclic subgroups under joins.
    pub fn enumerate(g: &FiniteGroup) -> Self {
        let mut cyclic: Vec<SubgroupSet> = Vec::new();
        let mut seen: HashMap<BitSet, ()> = HashMap::new();
        for x in g.elements() {
            let c = SubgroupSet::generated(g, [x]);
            if seen.insert(c.mask().clone(), ()).is_none() {
                cyclic.push(c);
            }
        }
        // every subgroup is a join of cyclic ones, so joining with cyclics suffices
        let mut all = cyclic.clone();
        let mut frontier = cyclic.clone();
        while let Some(s) = frontier.pop() {
            for c in &cyclic {
                if c.is_subset(&s) {
                    continue;
                }
                let j = s.join(c, g);
                if seen.insert(j.mask().clone(), ()).is_none() {
                    all.push(j.clone());
                    frontier.push(j);
                }
            }
        }
        Self::from_subgroups(g, all)
    }

    /// Builds the lattice from a complete list of subgroups (any order).
    pub fn from_subgroups(g: &FiniteGroup, mut subgroups: Vec<SubgroupSet>) -> Self {
        subgroups.sort();
        subgroups.dedup();
        let count = subgroups.len();
        let index: HashMap<BitSet, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.mask().clone(), i))
            .collect();
        // bucket by order so containment tests only run against larger groups
        let below: Vec<BitSet> = subgroups
            .iter()
            .map(|y| {
                BitSet::from_indices(
                    count,
                    subgroups.iter().enumerate().filter_map(|(i, x)| {
                        (y.order() % x.order() == 0 && x.is_subset(y)).then_some(i)
                    }),
                )
            })
            .collect();
        let poset = FinitePoset::from_down_sets(below);

        let mut conj = Vec::new();
        let abelian = g.is_abelian();
        if !abelian {
            conj.reserve(g.order() * count);
            for x in g.elements() {
                for s in &subgroups {
                    let c = s.conjugate(g, x);
                    conj.push(index[c.mask()] as u32);
                }
            }
        }
        let mut class_of = vec![usize::MAX; count];
        let mut classes = Vec::new();
        let mut normalizer_order = vec![g.order(); count];
        for u in 0..count {
            if class_of[u] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![u];
            if !abelian {
                let mut stab = 0;
                for x in 0..g.order() {
                    let v = conj[x * count + u] as usize;
                    if v == u {
                        stab += 1;
                    }
                    if !members.contains(&v) {
                        members.push(v);
                    }
                }
                members.sort_unstable();
                for &m in &members {
                    normalizer_order[m] = stab;
                }
            }
            for &m in &members {
                class_of[m] = id;
            }
            classes.push(members);
        }
        SubgroupLattice {
            subgroups,
            index,
            poset,
            class_of,
            classes,
            normalizer_order,
            conj,
        }
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[SubgroupSet] {
        &self.subgroups
    }

    pub fn get(&self, i: usize) -> &SubgroupSet {
        &self.subgroups[i]
    }

    pub fn index_of(&self, s: &SubgroupSet) -> Option<usize> {
        self.index.get(s.mask()).copied()
    }

    pub fn index_of_mask(&self, m: &BitSet) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    /// Indices of subgroups of `self.get(u)`.
    pub fn below(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.poset.down_set(u).iter()
    }

    pub fn above(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.poset.up_set(u).iter()
    }

    /// Nonzero `(u', mu(u', u))` over the subgroup poset.
    pub fn moebius_to(&self, u: usize) -> &[(usize, i64)] {
        self.poset.moebius_to(u)
    }

    pub fn moebius(&self, x: usize, y: usize) -> i64 {
        self.poset.moebius(x, y)
    }

    pub fn class_of(&self, u: usize) -> usize {
        self.class_of[u]
    }

    /// Conjugacy classes, ordered by representative; members increasing.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// The lexicographically smallest conjugate.
    pub fn representative(&self, u: usize) -> usize {
        self.classes[self.class_of[u]][0]
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn normalizer_order(&self, u: usize) -> usize {
        self.normalizer_order[u]
    }

    /// Index of `x U x^-1`.
    pub fn conjugate(&self, x: u32, u: usize) -> usize {
        if self.conj.is_empty() {
            u
        } else {
            self.conj[x as usize * self.subgroups.len() + u] as usize
        }
    }
}
