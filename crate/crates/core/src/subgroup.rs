//! Element-listed subgroups, sections and quotients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use crate::bitset::BitSet;
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubgroupError {
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("lower subgroup is not contained in the upper one")]
    NotContained,
    #[error("lower subgroup is not normal in the upper one")]
    NotNormal,
}

/// A subgroup in canonical form: the strictly increasing list of its elements.
#[derive(Clone)]
pub struct SubgroupSet {
    elements: Vec<u32>,
    mask: BitSet,
}

impl PartialEq for SubgroupSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}
impl Eq for SubgroupSet {}

impl Hash for SubgroupSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state)
    }
}

impl PartialOrd for SubgroupSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for SubgroupSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements.cmp(&other.elements)
    }
}

impl std::fmt::Debug for SubgroupSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<{:?}>", self.elements)
    }
}

impl SubgroupSet {
    /// Wraps an element mask without checking closure.
    pub fn from_mask(mask: BitSet) -> Self {
        let elements = mask.iter().map(|x| x as u32).collect();
        SubgroupSet { elements, mask }
    }

    /// Checks closure and identity membership.
    pub fn from_elements(
        g: &FiniteGroup,
        elems: impl IntoIterator<Item = u32>,
    ) -> Result<Self, SubgroupError> {
        let mask = BitSet::from_indices(g.order(), elems.into_iter().map(|x| x as usize));
        let s = SubgroupSet::from_mask(mask);
        if s.is_subgroup_of(g) {
            Ok(s)
        } else {
            Err(SubgroupError::NotSubgroup)
        }
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        SubgroupSet::from_mask(BitSet::from_indices(g.order(), [g.identity() as usize]))
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        SubgroupSet::from_mask(BitSet::full(g.order()))
    }

    /// The subgroup generated by `gens`.
    pub fn generated(g: &FiniteGroup, gens: impl IntoIterator<Item = u32>) -> Self {
        let gens: Vec<u32> = gens.into_iter().collect();
        let mut mask = BitSet::new(g.order());
        mask.insert(g.identity() as usize);
        let mut frontier = vec![g.identity()];
        while let Some(x) = frontier.pop() {
            for &s in &gens {
                let y = g.mul(x, s);
                if mask.insert(y as usize) {
                    frontier.push(y);
                }
            }
        }
        SubgroupSet::from_mask(mask)
    }

    /// Smallest subgroup containing both.
    pub fn join(&self, other: &SubgroupSet, g: &FiniteGroup) -> Self {
        if other.is_subset(self) {
            return self.clone();
        }
        if self.is_subset(other) {
            return other.clone();
        }
        // extend self by the generators of other that are missing
        let mut mask = self.mask.clone();
        let mut frontier: Vec<u32> = self.elements.clone();
        let gens: Vec<u32> = self
            .elements
            .iter()
            .chain(other.elements.iter())
            .copied()
            .collect();
        for &x in &other.elements {
            if mask.insert(x as usize) {
                frontier.push(x);
            }
        }
        while let Some(x) = frontier.pop() {
            for &s in &gens {
                let y = g.mul(x, s);
                if mask.insert(y as usize) {
                    frontier.push(y);
                }
            }
        }
        SubgroupSet::from_mask(mask)
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn mask(&self) -> &BitSet {
        &self.mask
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.mask.contains(x as usize)
    }

    pub fn is_subset(&self, other: &SubgroupSet) -> bool {
        self.mask.is_subset(&other.mask)
    }

    pub fn intersection(&self, other: &SubgroupSet) -> SubgroupSet {
        SubgroupSet::from_mask(self.mask.intersection(&other.mask))
    }

    pub fn is_subgroup_of(&self, g: &FiniteGroup) -> bool {
        if !self.contains(g.identity()) {
            return false;
        }
        self.elements.iter().all(|&a| {
            self.contains(g.inv(a)) && self.elements.iter().all(|&b| self.contains(g.mul(a, b)))
        })
    }

    /// `x U x^-1`
    pub fn conjugate(&self, g: &FiniteGroup, x: u32) -> SubgroupSet {
        SubgroupSet::from_mask(BitSet::from_indices(
            g.order(),
            self.elements.iter().map(|&u| g.conj(x, u) as usize),
        ))
    }

    /// The set product `self * other`; a subgroup whenever one factor normalizes the other.
    pub fn product(&self, other: &SubgroupSet, g: &FiniteGroup) -> SubgroupSet {
        let mut mask = BitSet::new(g.order());
        for &a in &self.elements {
            for &b in &other.elements {
                mask.insert(g.mul(a, b) as usize);
            }
        }
        SubgroupSet::from_mask(mask)
    }

    pub fn normalizer(&self, g: &FiniteGroup) -> SubgroupSet {
        let mask = BitSet::from_indices(
            g.order(),
            g.elements()
                .filter(|&x| self.elements.iter().all(|&u| self.contains(g.conj(x, u))))
                .map(|x| x as usize),
        );
        SubgroupSet::from_mask(mask)
    }

    /// Whether `self` is a normal subgroup of `upper`.
    pub fn is_normal_in(&self, upper: &SubgroupSet, g: &FiniteGroup) -> bool {
        self.is_subset(upper)
            && upper
                .elements
                .iter()
                .all(|&x| self.elements.iter().all(|&k| self.contains(g.conj(x, k))))
    }

    /// Image under a map on element indices.
    pub fn map(&self, capacity: usize, f: impl Fn(u32) -> u32) -> SubgroupSet {
        SubgroupSet::from_mask(BitSet::from_indices(
            capacity,
            self.elements.iter().map(|&x| f(x) as usize),
        ))
    }
}

/// A pair `(upper, lower)` with `lower` normal in `upper`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Section {
    pub upper: SubgroupSet,
    pub lower: SubgroupSet,
}

impl Section {
    pub fn new(
        upper: SubgroupSet,
        lower: SubgroupSet,
        g: &FiniteGroup,
    ) -> Result<Self, SubgroupError> {
        if !lower.is_subset(&upper) {
            return Err(SubgroupError::NotContained);
        }
        if !lower.is_normal_in(&upper, g) {
            return Err(SubgroupError::NotNormal);
        }
        Ok(Section { upper, lower })
    }

    pub fn quotient_order(&self) -> usize {
        self.upper.order() / self.lower.order()
    }

    /// Minimal element of the coset `x * lower`.
    pub fn block(&self, g: &FiniteGroup, x: u32) -> u32 {
        self.lower
            .elements()
            .iter()
            .map(|&k| g.mul(x, k))
            .min()
            .expect("lower subgroup is nonempty")
    }

    pub fn quotient(&self, g: &FiniteGroup) -> QuotientGroup {
        QuotientGroup::new(self.clone(), g)
    }
}

/// `upper / lower` with cosets named by their minimal element.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    pub base: Section,
    /// Coset representatives (minimal elements), increasing.
    pub reps: Vec<u32>,
    /// Block id of every element of the upper subgroup.
    pub block_of: BTreeMap<u32, usize>,
    /// Cayley table over block ids.
    pub table: Vec<usize>,
}

impl QuotientGroup {
    fn new(base: Section, g: &FiniteGroup) -> Self {
        let mut reps: Vec<u32> = base
            .upper
            .elements()
            .iter()
            .map(|&x| base.block(g, x))
            .collect();
        reps.sort_unstable();
        reps.dedup();
        let block_of: BTreeMap<u32, usize> = base
            .upper
            .elements()
            .iter()
            .map(|&x| {
                let b = base.block(g, x);
                (x, reps.binary_search(&b).unwrap())
            })
            .collect();
        let n = reps.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &reps {
            for &b in &reps {
                table.push(block_of[&g.mul(a, b)]);
            }
        }
        QuotientGroup {
            base,
            reps,
            block_of,
            table,
        }
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Checks that the block product does not depend on representatives.
    pub fn is_well_defined(&self, g: &FiniteGroup) -> bool {
        let n = self.reps.len();
        self.block_of.iter().all(|(&x, &bx)| {
            self.block_of
                .iter()
                .all(|(&y, &by)| self.block_of[&g.mul(x, y)] == self.table[bx * n + by])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> std::sync::Arc<FiniteGroup> {
        FiniteGroup::symmetric(3).unwrap()
    }

    fn a_transposition(g: &FiniteGroup) -> u32 {
        g.elements().find(|&x| g.element_order(x) == 2).unwrap()
    }

    #[test]
    fn normalizer_of_a_transposition_in_s3() {
        let g = s3();
        let t = a_transposition(&g);
        let u = SubgroupSet::generated(&g, [t]);
        assert_eq!(u.order(), 2);
        assert_eq!(u.normalizer(&g), u);
    }

    #[test]
    fn quotients() {
        let g = s3();
        let whole = SubgroupSet::whole(&g);
        let q = Section::new(whole.clone(), SubgroupSet::trivial(&g), &g)
            .unwrap()
            .quotient(&g);
        assert_eq!(q.order(), 6);
        assert!(q.is_well_defined(&g));
        let q = Section::new(whole.clone(), whole.clone(), &g)
            .unwrap()
            .quotient(&g);
        assert_eq!(q.order(), 1);
        let a3 = SubgroupSet::generated(&g, g.elements().filter(|&x| g.element_order(x) == 3));
        let q = Section::new(whole.clone(), a3, &g).unwrap().quotient(&g);
        assert_eq!(q.order(), 2);
        assert!(q.is_well_defined(&g));
        let t = SubgroupSet::generated(&g, [a_transposition(&g)]);
        assert_eq!(Section::new(whole, t, &g), Err(SubgroupError::NotNormal));
    }

    #[test]
    fn join_and_product() {
        let g = FiniteGroup::cyclic(12);
        let a = SubgroupSet::generated(&g, [4]);
        let b = SubgroupSet::generated(&g, [6]);
        assert_eq!(a.join(&b, &g).order(), 6);
        assert_eq!(a.product(&b, &g), a.join(&b, &g));
        assert!(SubgroupSet::from_elements(&g, [0, 1]).is_err());
    }
}
