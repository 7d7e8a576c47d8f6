//! Indexed subgroup spaces of `G x H`, composable triples with cached
//! star tables, and a registry sharing them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::goursat;
use crate::group::{configured_max_order, FiniteGroup, GroupError};
use crate::lattice::SubgroupLattice;
use crate::names::parse_group;
use crate::rational::Q;
use crate::subgroup::SubgroupSet;

/// Projections and kernels of a subgroup of `G x H`, as lattice indices of
/// `G` (`p1`, `k1`) and `H` (`p2`, `k2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    pub p1: u32,
    pub k1: u32,
    pub p2: u32,
    pub k2: u32,
}

/// The subgroups of `G x H` with their Goursat shapes.
pub struct ProductSpace {
    left: Arc<FiniteGroup>,
    right: Arc<FiniteGroup>,
    group: Arc<FiniteGroup>,
    shapes: Vec<Shape>,
}

impl std::fmt::Debug for ProductSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ProductSpace({} x {})",
            self.left.label(),
            self.right.label()
        )
    }
}

impl ProductSpace {
    pub fn new(left: &Arc<FiniteGroup>, right: &Arc<FiniteGroup>) -> Result<Self, GroupError> {
        Self::with_bound(left, right, configured_max_order())
    }

    pub fn with_bound(
        left: &Arc<FiniteGroup>,
        right: &Arc<FiniteGroup>,
        bound: usize,
    ) -> Result<Self, GroupError> {
        let group = FiniteGroup::direct_product(left, right);
        group.subgroups_bounded(bound)?;
        Self::from_product(group, bound)
    }

    /// Uses the lattice already installed on (or enumerable for) `group`.
    pub fn from_product(group: Arc<FiniteGroup>, bound: usize) -> Result<Self, GroupError> {
        let (left, right) = group
            .factors()
            .map(|(a, b)| (a.clone(), b.clone()))
            .ok_or_else(|| {
                GroupError::Unsupported(format!("{} is not a direct product", group.label()))
            })?;
        let ll = left.subgroups_bounded(bound)?;
        let rl = right.subgroups_bounded(bound)?;
        let lat = group.subgroups_bounded(bound)?;
        let find = |lat: &SubgroupLattice, s: &SubgroupSet| {
            lat.index_of(s).expect("projection is a subgroup") as u32
        };
        let shapes = lat
            .subgroups()
            .iter()
            .map(|l| {
                let q = goursat::quintuple_from_subgroup(&group, l).expect("product group");
                Shape {
                    p1: find(ll, &q.p1),
                    k1: find(ll, &q.k1),
                    p2: find(rl, &q.p2),
                    k2: find(rl, &q.k2),
                }
            })
            .collect();
        Ok(ProductSpace {
            left,
            right,
            group,
            shapes,
        })
    }

    pub fn left(&self) -> &Arc<FiniteGroup> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteGroup> {
        &self.right
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        self.group
            .subgroups_bounded(usize::MAX)
            .expect("cached at construction")
    }

    pub fn left_lattice(&self) -> &SubgroupLattice {
        self.left
            .subgroups_bounded(usize::MAX)
            .expect("cached at construction")
    }

    pub fn right_lattice(&self) -> &SubgroupLattice {
        self.right
            .subgroups_bounded(usize::MAX)
            .expect("cached at construction")
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn shape(&self, l: usize) -> Shape {
        self.shapes[l]
    }

    pub fn subgroup(&self, l: usize) -> &SubgroupSet {
        self.lattice().get(l)
    }

    pub fn index_of(&self, s: &SubgroupSet) -> Option<usize> {
        self.lattice().index_of(s)
    }

    pub fn label(&self) -> String {
        format!("{},{}", self.left.label(), self.right.label())
    }

    /// `{(g, h) : g in U, h in V}`.
    pub fn product_index(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.left_lattice().get(u), self.right_lattice().get(v));
        let mut mask = crate::bitset::BitSet::new(self.group.order());
        for &x in a.elements() {
            for &y in b.elements() {
                mask.insert(self.group.pair(x, y) as usize);
            }
        }
        self.lattice()
            .index_of_mask(&mask)
            .expect("product of subgroups")
    }

    /// `Delta_phi = {(phi(x), x)}` for an automorphism given on elements; `G = H` required.
    pub fn graph_index(&self, phi: impl Fn(u32) -> u32) -> usize {
        let mask = crate::bitset::BitSet::from_indices(
            self.group.order(),
            self.right
                .elements()
                .map(|x| self.group.pair(phi(x), x) as usize),
        );
        self.lattice()
            .index_of_mask(&mask)
            .expect("graph of a homomorphism")
    }

    /// `Delta(G)`.
    pub fn diagonal_index(&self) -> usize {
        self.graph_index(|x| x)
    }
}

/// Index of `L°` in the space of `H x G`.
pub fn opposite_index(gh: &ProductSpace, hg: &ProductSpace, l: usize) -> usize {
    let o = goursat::opposite(gh.group(), hg.group(), gh.subgroup(l));
    hg.index_of(&o).expect("opposite is a subgroup")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("spaces {0} and {1} are not composable")]
pub struct NotComposable(pub String, pub String);

/// Spaces for `G x H`, `H x K` and `G x K` with a lazily filled star table.
pub struct Triple {
    pub gh: Arc<ProductSpace>,
    pub hk: Arc<ProductSpace>,
    pub gk: Arc<ProductSpace>,
    star: Vec<OnceLock<u32>>,
    pub(crate) constants: OnceLock<crate::ghost::StructureConstantTable>,
}

impl std::fmt::Debug for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Triple({}, {}, {})",
            self.gh.left().label(),
            self.gh.right().label(),
            self.hk.right().label()
        )
    }
}

impl Triple {
    pub fn new(
        gh: Arc<ProductSpace>,
        hk: Arc<ProductSpace>,
        gk: Arc<ProductSpace>,
    ) -> Result<Self, NotComposable> {
        let ok = gh.right().same_as(hk.left())
            && gk.left().same_as(gh.left())
            && gk.right().same_as(hk.right());
        if !ok {
            return Err(NotComposable(gh.label(), hk.label()));
        }
        let n = gh.len() * hk.len();
        Ok(Triple {
            gh,
            hk,
            gk,
            star: (0..n).map(|_| OnceLock::new()).collect(),
            constants: OnceLock::new(),
        })
    }

    pub fn middle(&self) -> &Arc<FiniteGroup> {
        self.gh.right()
    }

    /// Index of `L * M` in the `G x K` space.
    pub fn star(&self, l: usize, m: usize) -> usize {
        *self.star[l * self.hk.len() + m].get_or_init(|| {
            let s = goursat::star_unchecked(
                self.gh.group(),
                self.hk.group(),
                self.gk.group(),
                self.gh.subgroup(l),
                self.hk.subgroup(m),
            );
            self.gk.index_of(&s).expect("star is a subgroup") as u32
        }) as usize
    }

    /// `|k2(L) & k1(M)|`
    pub fn kernel_meet(&self, l: usize, m: usize) -> usize {
        let a = self.gh.right_lattice().get(self.gh.shape(l).k2 as usize);
        let b = self.hk.left_lattice().get(self.hk.shape(m).k1 as usize);
        a.mask().intersection_len(b.mask())
    }

    /// `kappa(L, M) = |k2(L) & k1(M)| / |H|`
    pub fn kappa(&self, l: usize, m: usize) -> Q {
        Q::new(self.kernel_meet(l, m) as i64, self.middle().order() as i64)
    }

    /// `p2(L) = p1(M)`
    pub fn composable(&self, l: usize, m: usize) -> bool {
        self.gh.shape(l).p2 == self.hk.shape(m).p1
    }
}

/// Registry of groups, spaces and triples keyed by group label.
pub struct Universe {
    bound: usize,
    groups: Mutex<HashMap<String, Arc<FiniteGroup>>>,
    spaces: Mutex<HashMap<(String, String), Arc<ProductSpace>>>,
    triples: Mutex<HashMap<(String, String, String), Arc<Triple>>>,
}

impl Default for Universe {
    fn default() -> Self {
        Self::with_bound(configured_max_order())
    }
}

impl Universe {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_bound(bound: usize) -> Self {
        Universe {
            bound,
            groups: Mutex::default(),
            spaces: Mutex::default(),
            triples: Mutex::default(),
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Registers `g` under its label, or returns the group already there.
    pub fn insert_group(&self, g: Arc<FiniteGroup>) -> Result<Arc<FiniteGroup>, GroupError> {
        let mut groups = self.groups.lock().unwrap();
        match groups.get(g.label()) {
            Some(old) if old.same_as(&g) => Ok(old.clone()),
            Some(_) => Err(GroupError::Unsupported(format!(
                "two different groups labelled {}",
                g.label()
            ))),
            None => {
                groups.insert(g.label().to_string(), g.clone());
                Ok(g)
            }
        }
    }

    pub fn group(&self, name: &str) -> Result<Arc<FiniteGroup>, GroupError> {
        if let Some(g) = self.groups.lock().unwrap().get(name) {
            return Ok(g.clone());
        }
        self.insert_group(parse_group(name)?)
    }

    /// Registers a space built elsewhere, for instance with an installed lattice.
    pub fn insert_space(&self, s: Arc<ProductSpace>) -> Arc<ProductSpace> {
        let key = (s.left().label().to_string(), s.right().label().to_string());
        self.spaces.lock().unwrap().entry(key).or_insert(s).clone()
    }

    pub fn space(
        &self,
        g: &Arc<FiniteGroup>,
        h: &Arc<FiniteGroup>,
    ) -> Result<Arc<ProductSpace>, GroupError> {
        let g = self.insert_group(g.clone())?;
        let h = self.insert_group(h.clone())?;
        let key = (g.label().to_string(), h.label().to_string());
        if let Some(s) = self.spaces.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let s = Arc::new(ProductSpace::with_bound(&g, &h, self.bound)?);
        Ok(self.spaces.lock().unwrap().entry(key).or_insert(s).clone())
    }

    pub fn triple(
        &self,
        g: &Arc<FiniteGroup>,
        h: &Arc<FiniteGroup>,
        k: &Arc<FiniteGroup>,
    ) -> Result<Arc<Triple>, GroupError> {
        let key = (
            g.label().to_string(),
            h.label().to_string(),
            k.label().to_string(),
        );
        if let Some(t) = self.triples.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let t = Triple::new(self.space(g, h)?, self.space(h, k)?, self.space(g, k)?)
            .map_err(|e| GroupError::Unsupported(e.to_string()))?;
        Ok(self
            .triples
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(Arc::new(t))
            .clone())
    }

    /// Triple over one group `G`.
    pub fn cube(&self, g: &Arc<FiniteGroup>) -> Result<Arc<Triple>, GroupError> {
        self.triple(g, g, g)
    }
}
