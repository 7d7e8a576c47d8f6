//! Burnside groups `B(G, H)` in the standard basis, the Mackey product, an
//! orbit-counting tensor oracle, and the maps into `Q S_{G x H}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::bitset::BitSet;
use crate::rational::{qi, Q};
use crate::space::{ProductSpace, Triple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("element lives over {found}, expected {expected}")]
    SpaceMismatch { expected: String, found: String },
}

fn check_space(
    expected: &Arc<ProductSpace>,
    found: &Arc<ProductSpace>,
) -> Result<(), AlgebraError> {
    if Arc::ptr_eq(expected, found) {
        Ok(())
    } else {
        Err(AlgebraError::SpaceMismatch {
            expected: expected.label(),
            found: found.label(),
        })
    }
}

/// Sparse vector with nonzero coefficients keyed by subgroup index.
fn push(coeffs: &mut BTreeMap<usize, Q>, key: usize, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = coeffs.entry(key).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        coeffs.remove(&key);
    }
}

macro_rules! sparse_vector {
    ($name:ident) => {
        impl $name {
            pub fn zero(space: &Arc<ProductSpace>) -> Self {
                $name {
                    space: space.clone(),
                    coeffs: BTreeMap::new(),
                }
            }

            pub fn space(&self) -> &Arc<ProductSpace> {
                &self.space
            }

            pub fn coeffs(&self) -> &BTreeMap<usize, Q> {
                &self.coeffs
            }

            pub fn coeff(&self, key: usize) -> Q {
                self.coeffs.get(&key).copied().unwrap_or_else(Q::zero)
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs.is_empty()
            }

            pub fn scaled(&self, c: Q) -> Self {
                let mut out = Self::zero(&self.space);
                for (&k, &v) in &self.coeffs {
                    push(&mut out.coeffs, k, v * c);
                }
                out
            }

            pub fn plus(&self, other: &Self) -> Self {
                assert!(
                    Arc::ptr_eq(&self.space, &other.space),
                    "adding across spaces"
                );
                let mut out = self.clone();
                for (&k, &v) in &other.coeffs {
                    push(&mut out.coeffs, k, v);
                }
                out
            }

            pub fn minus(&self, other: &Self) -> Self {
                self.plus(&other.scaled(-qi(1)))
            }
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                Arc::ptr_eq(&self.space, &other.space) && self.coeffs == other.coeffs
            }
        }

        impl std::fmt::Debug for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, "{}[{}]", stringify!($name), self.space.label())?;
                f.debug_map()
                    .entries(self.coeffs.iter().map(|(k, v)| (k, format!("{v}"))))
                    .finish()
            }
        }
    };
}

/// A vector in `Q S_{G x H}`.
#[derive(Clone)]
pub struct GhostElement {
    space: Arc<ProductSpace>,
    coeffs: BTreeMap<usize, Q>,
}
sparse_vector!(GhostElement);

impl GhostElement {
    pub fn basis(space: &Arc<ProductSpace>, l: usize) -> Self {
        Self::from_terms(space, [(l, qi(1))])
    }

    pub fn from_terms(
        space: &Arc<ProductSpace>,
        terms: impl IntoIterator<Item = (usize, Q)>,
    ) -> Self {
        let mut out = Self::zero(space);
        for (k, c) in terms {
            assert!(k < space.len(), "subgroup index out of range");
            push(&mut out.coeffs, k, c);
        }
        out
    }

    pub fn add_term(&mut self, l: usize, c: Q) {
        push(&mut self.coeffs, l, c);
    }
}

/// A vector in `Q B(G, H)`, keyed by conjugacy-class representatives.
#[derive(Clone)]
pub struct BisetElement {
    space: Arc<ProductSpace>,
    coeffs: BTreeMap<usize, Q>,
}
sparse_vector!(BisetElement);

impl BisetElement {
    /// `[G x H / L]` for any `L`; the key is the class representative.
    pub fn basis(space: &Arc<ProductSpace>, l: usize) -> Self {
        Self::from_terms(space, [(l, qi(1))])
    }

    pub fn from_terms(
        space: &Arc<ProductSpace>,
        terms: impl IntoIterator<Item = (usize, Q)>,
    ) -> Self {
        let lat = space.lattice();
        let mut out = Self::zero(space);
        for (k, c) in terms {
            push(&mut out.coeffs, lat.representative(k), c);
        }
        out
    }

    pub fn add_term(&mut self, l: usize, c: Q) {
        let r = self.space.lattice().representative(l);
        push(&mut self.coeffs, r, c);
    }
}

/// Class representatives of `S_{G x H}`, the standard basis of `B(G, H)`.
pub fn standard_basis(space: &Arc<ProductSpace>) -> Vec<BisetElement> {
    space
        .lattice()
        .representatives()
        .into_iter()
        .map(|r| BisetElement::basis(space, r))
        .collect()
}

/// Which element of each double coset serves as representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CosetChoice {
    #[default]
    Smallest,
    Largest,
}

/// Representatives of `p2(L) \ H / p1(M)`.
pub fn double_coset_reps(t: &Triple, l: usize, m: usize, choice: CosetChoice) -> Vec<u32> {
    let h = t.middle();
    let left = t.gh.right_lattice().get(t.gh.shape(l).p2 as usize);
    let right = t.hk.left_lattice().get(t.hk.shape(m).p1 as usize);
    let mut seen = BitSet::new(h.order());
    let mut reps = Vec::new();
    let order: Vec<u32> = match choice {
        CosetChoice::Smallest => h.elements().collect(),
        CosetChoice::Largest => (0..h.order() as u32).rev().collect(),
    };
    for x in order {
        if seen.contains(x as usize) {
            continue;
        }
        reps.push(x);
        for &a in left.elements() {
            let ax = h.mul(a, x);
            for &b in right.elements() {
                seen.insert(h.mul(ax, b) as usize);
            }
        }
    }
    reps
}

/// `[G x H / L] . [H x K / M]` as a sum of `G x K` class representatives.
pub fn mackey_basis(t: &Triple, l: usize, m: usize, choice: CosetChoice) -> BTreeMap<usize, i64> {
    let hk_lat = t.hk.lattice();
    let gk_lat = t.gk.lattice();
    let k_id = t.hk.right().identity();
    let mut out = BTreeMap::new();
    for h in double_coset_reps(t, l, m, choice) {
        let mh = hk_lat.conjugate(t.hk.group().pair(h, k_id), m);
        *out.entry(gk_lat.representative(t.star(l, mh))).or_insert(0) += 1;
    }
    out
}

pub fn mackey_product(
    t: &Triple,
    a: &BisetElement,
    b: &BisetElement,
) -> Result<BisetElement, AlgebraError> {
    mackey_product_with(t, a, b, CosetChoice::Smallest)
}

pub fn mackey_product_with(
    t: &Triple,
    a: &BisetElement,
    b: &BisetElement,
    choice: CosetChoice,
) -> Result<BisetElement, AlgebraError> {
    check_space(&t.gh, &a.space)?;
    check_space(&t.hk, &b.space)?;
    let mut out = BisetElement::zero(&t.gk);
    for (&l, &x) in &a.coeffs {
        for (&m, &y) in &b.coeffs {
            for (n, c) in mackey_basis(t, l, m, choice) {
                push(&mut out.coeffs, n, x * y * qi(c));
            }
        }
    }
    Ok(out)
}

/// Orbit data of `X x_H Y` for `X = (G x H)/L`, `Y = (H x K)/M`.
#[derive(Debug, Clone)]
pub struct TensorOrbits {
    /// Points of `X x_H Y`.
    pub points: usize,
    /// Stabilizer (as `G x K` subgroup index) and size of each `G x K`-orbit.
    pub orbits: Vec<(usize, usize)>,
}

/// Left cosets of `u` in `g`: coset id of every element, and one element per coset.
fn cosets(
    g: &crate::group::FiniteGroup,
    u: &crate::subgroup::SubgroupSet,
) -> (Vec<usize>, Vec<u32>) {
    let mut id = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if id[x as usize] != usize::MAX {
            continue;
        }
        for &y in u.elements() {
            id[g.mul(x, y) as usize] = reps.len();
        }
        reps.push(x);
    }
    (id, reps)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Materializes both bisets and decomposes the tensor product into orbits.
pub fn tensor_orbits(t: &Triple, l: usize, m: usize) -> TensorOrbits {
    let (gh, hk, gk) = (t.gh.group(), t.hk.group(), t.gk.group());
    let (g, h, k) = (t.gh.left(), t.middle(), t.hk.right());
    let (xid, xrep) = cosets(gh, t.gh.subgroup(l));
    let (yid, yrep) = cosets(hk, t.hk.subgroup(m));
    let (nx, ny) = (xrep.len(), yrep.len());
    // left multiplication by a group element on coset indices
    let act_x = |e: u32, p: usize| xid[gh.mul(e, xrep[p]) as usize];
    let act_y = |e: u32, p: usize| yid[hk.mul(e, yrep[p]) as usize];
    let pair = |x: usize, y: usize| x * ny + y;

    // (x.h, y) ~ (x, h.y); x.h is left multiplication by (1, h^-1)
    let mut uf = UnionFind((0..nx * ny).collect());
    for c in h.elements() {
        let right_on_x = gh.pair(g.identity(), h.inv(c));
        let left_on_y = hk.pair(c, k.identity());
        for x in 0..nx {
            let xh = act_x(right_on_x, x);
            for y in 0..ny {
                uf.union(pair(xh, y), pair(x, act_y(left_on_y, y)));
            }
        }
    }
    let classes: Vec<usize> = (0..nx * ny).map(|p| uf.find(p)).collect();
    let mut class_points: Vec<usize> = classes.clone();
    class_points.sort_unstable();
    class_points.dedup();

    // (g, k).[x, y] = [g.x, y.k^-1]
    let act = |e: u32, p: usize, uf: &mut UnionFind| {
        let (a, b) = gk.split(e);
        let x = act_x(gh.pair(a, h.identity()), p / ny);
        let y = act_y(hk.pair(h.identity(), b), p % ny);
        uf.find(pair(x, y))
    };
    let mut visited = BitSet::new(nx * ny);
    let mut orbits = Vec::new();
    for &c in &class_points {
        if visited.contains(c) {
            continue;
        }
        let mut size = 0;
        let mut stack = vec![c];
        visited.insert(c);
        while let Some(p) = stack.pop() {
            size += 1;
            for e in gk.elements() {
                let q = act(e, p, &mut uf);
                if visited.insert(q) {
                    stack.push(q);
                }
            }
        }
        let stab = BitSet::from_indices(
            gk.order(),
            gk.elements()
                .filter(|&e| act(e, c, &mut uf) == c)
                .map(|e| e as usize),
        );
        let s =
            t.gk.lattice()
                .index_of_mask(&stab)
                .expect("stabilizer is a subgroup");
        orbits.push((s, size));
    }
    TensorOrbits {
        points: class_points.len(),
        orbits,
    }
}

/// `[X x_H Y]` for `X = (G x H)/L`, `Y = (H x K)/M`, by explicit orbit decomposition.
pub fn biset_tensor_oracle(t: &Triple, l: usize, m: usize) -> BisetElement {
    let o = tensor_orbits(t, l, m);
    debug_assert_eq!(o.orbits.iter().map(|x| x.1).sum::<usize>(), o.points);
    BisetElement::from_terms(&t.gk, o.orbits.into_iter().map(|(s, _)| (s, qi(1))))
}

/// `|(Gamma/L)^U|` by counting `gamma` with `U^gamma <= L`.
pub fn fixed_points(space: &ProductSpace, u: usize, l: usize) -> usize {
    let lat = space.lattice();
    let gamma = space.group();
    let (su, sl) = (lat.get(u), lat.get(l));
    if sl.order() % su.order() != 0 {
        return 0;
    }
    let count = gamma
        .elements()
        .filter(|&x| lat.poset().leq(lat.conjugate(gamma.inv(x), u), l))
        .count();
    count / sl.order()
}

/// The mark homomorphism.
pub fn marks(a: &BisetElement) -> GhostElement {
    let space = &a.space;
    let mut out = GhostElement::zero(space);
    for u in 0..space.len() {
        let c: Q = a
            .coeffs
            .iter()
            .map(|(&l, &x)| x * qi(fixed_points(space, u, l) as i64))
            .sum();
        push(&mut out.coeffs, u, c);
    }
    out
}

/// `[Gamma/U] -> [N(U):U] [U]^+`.
pub fn alpha(a: &BisetElement) -> GhostElement {
    let space = &a.space;
    let lat = space.lattice();
    let mut out = GhostElement::zero(space);
    for (&u, &x) in &a.coeffs {
        let index = (lat.normalizer_order(u) / lat.get(u).order()) as i64;
        for &v in &lat.classes()[lat.class_of(u)] {
            push(&mut out.coeffs, v, x * qi(index));
        }
    }
    out
}

/// `U -> sum of U' <= U`.
pub fn zeta(x: &GhostElement) -> GhostElement {
    let lat = x.space.lattice();
    let mut out = GhostElement::zero(&x.space);
    for (&u, &c) in &x.coeffs {
        for v in lat.below(u) {
            push(&mut out.coeffs, v, c);
        }
    }
    out
}

/// Inverse of [`zeta`]: `U -> sum mu(U', U) U'`.
pub fn mu_inv(x: &GhostElement) -> GhostElement {
    let lat = x.space.lattice();
    let mut out = GhostElement::zero(&x.space);
    for (&u, &c) in &x.coeffs {
        for &(v, mu) in lat.moebius_to(u) {
            push(&mut out.coeffs, v, c * qi(mu));
        }
    }
    out
}

/// Class sums `[L]^+`, one per conjugacy class, in representative order.
pub fn fixed_point_basis(space: &Arc<ProductSpace>) -> Vec<GhostElement> {
    space
        .lattice()
        .classes()
        .iter()
        .map(|c| GhostElement::from_terms(space, c.iter().map(|&v| (v, qi(1)))))
        .collect()
}

/// `-°` on ghost vectors.
pub fn ghost_opposite(x: &GhostElement, target: &Arc<ProductSpace>) -> GhostElement {
    GhostElement::from_terms(
        target,
        x.coeffs
            .iter()
            .map(|(&l, &c)| (crate::space::opposite_index(&x.space, target, l), c)),
    )
}

/// `-°` on biset vectors.
pub fn biset_opposite(x: &BisetElement, target: &Arc<ProductSpace>) -> BisetElement {
    BisetElement::from_terms(
        target,
        x.coeffs
            .iter()
            .map(|(&l, &c)| (crate::space::opposite_index(&x.space, target, l), c)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Universe;

    #[test]
    fn identity_and_example_product() {
        let u = Universe::new();
        let c2 = u.group("C2").unwrap();
        let t = u.cube(&c2).unwrap();
        let d = t.gh.diagonal_index();
        let whole =
            t.gh.index_of(&crate::subgroup::SubgroupSet::whole(t.gh.group()))
                .unwrap();
        let x = BisetElement::basis(&t.gh, whole);
        let y = BisetElement::basis(&t.gh, d);
        assert_eq!(mackey_product(&t, &x, &y).unwrap(), x);
        assert_eq!(biset_tensor_oracle(&t, whole, d), x);
        for b in standard_basis(&t.gh) {
            assert_eq!(mackey_product(&t, &y, &b).unwrap(), b);
            assert_eq!(mackey_product(&t, &b, &y).unwrap(), b);
        }
    }

    #[test]
    fn tensor_oracle_partitions_points() {
        let u = Universe::new();
        let s3 = u.group("S3").unwrap();
        let t = u.cube(&s3).unwrap();
        for l in t.gh.lattice().representatives() {
            for m in t.hk.lattice().representatives() {
                let o = tensor_orbits(&t, l, m);
                assert_eq!(o.orbits.iter().map(|x| x.1).sum::<usize>(), o.points);
                // each orbit has size |G x K| / |stabilizer|
                for (s, size) in o.orbits {
                    assert_eq!(size * t.gk.subgroup(s).order(), t.gk.group().order());
                }
            }
        }
    }

    #[test]
    fn mackey_matches_oracle_on_c4() {
        let u = Universe::new();
        let c4 = u.group("C4").unwrap();
        let t = u.cube(&c4).unwrap();
        for l in t.gh.lattice().representatives() {
            for m in t.hk.lattice().representatives() {
                let a = mackey_product(
                    &t,
                    &BisetElement::basis(&t.gh, l),
                    &BisetElement::basis(&t.hk, m),
                )
                .unwrap();
                assert_eq!(a, biset_tensor_oracle(&t, l, m));
            }
        }
    }

    #[test]
    fn coset_choice_is_irrelevant_and_opposite_reverses() {
        let u = Universe::new();
        let s3 = u.group("S3").unwrap();
        let t = u.cube(&s3).unwrap();
        let basis = standard_basis(&t.gh);
        for a in &basis {
            for b in &basis {
                let x = mackey_product_with(&t, a, b, CosetChoice::Smallest).unwrap();
                let y = mackey_product_with(&t, a, b, CosetChoice::Largest).unwrap();
                assert_eq!(x, y);
                let lhs = biset_opposite(&x, &t.gh);
                let rhs = mackey_product(&t, &biset_opposite(b, &t.gh), &biset_opposite(a, &t.gh))
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn marks_of_s3() {
        let u = Universe::new();
        let s3 = u.group("S3").unwrap();
        let one = u.group("C1").unwrap();
        let sp = u.space(&s3, &one).unwrap();
        let lat = sp.lattice();
        let reps = lat.representatives();
        assert_eq!(reps.len(), 4);
        // rows [S3/U], columns over class representatives
        let table: Vec<Vec<Q>> = reps
            .iter()
            .map(|&l| {
                let m = marks(&BisetElement::basis(&sp, l));
                reps.iter().map(|&v| m.coeff(v)).collect()
            })
            .collect();
        let orders: Vec<usize> = reps.iter().map(|&r| lat.get(r).order()).collect();
        assert_eq!(orders, vec![1, 2, 6, 3]);
        let expect = [[6, 0, 0, 0], [3, 1, 0, 0], [1, 1, 1, 1], [2, 0, 0, 2]];
        for (row, e) in table.iter().zip(expect) {
            assert_eq!(row, &e.iter().map(|&v| qi(v)).collect::<Vec<_>>());
        }
        // free orbit and trivial orbit
        let whole = lat
            .index_of(&crate::subgroup::SubgroupSet::whole(sp.group()))
            .unwrap();
        let m = marks(&BisetElement::basis(&sp, whole));
        assert!((0..sp.len()).all(|v| m.coeff(v) == qi(1)));
        let m = marks(&BisetElement::basis(&sp, 0));
        assert_eq!(m, GhostElement::from_terms(&sp, [(0, qi(6))]));
    }

    #[test]
    fn alpha_on_s3_and_zeta_round_trip() {
        let u = Universe::new();
        let s3 = u.group("S3").unwrap();
        let one = u.group("C1").unwrap();
        let sp = u.space(&s3, &one).unwrap();
        let lat = sp.lattice();
        let t = (0..sp.len()).find(|&v| lat.get(v).order() == 2).unwrap();
        let a = alpha(&BisetElement::basis(&sp, t));
        assert_eq!(a.coeffs().len(), 3);
        assert!(a.coeffs().values().all(|&c| c == qi(1)));
        for b in standard_basis(&sp) {
            assert_eq!(zeta(&alpha(&b)), marks(&b));
        }
        let x = GhostElement::from_terms(&sp, (0..sp.len()).map(|v| (v, Q::new(v as i64 - 2, 3))));
        assert_eq!(mu_inv(&zeta(&x)), x);
        assert_eq!(zeta(&mu_inv(&x)), x);
        assert_eq!(
            zeta(&GhostElement::basis(&sp, 0)),
            GhostElement::basis(&sp, 0)
        );
    }
}
