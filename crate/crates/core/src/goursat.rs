//! Subgroups of direct products as quintuples `(p1, k1, eta, p2, k2)`,
//! their composition `L * M`, and the Zassenhaus butterfly.

use std::collections::{BTreeMap, BTreeSet};

use crate::bitset::BitSet;
use crate::group::FiniteGroup;
use crate::subgroup::{Section, SubgroupError, SubgroupSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GoursatError {
    #[error("group {0} is not a direct product")]
    NotProduct(String),
    #[error("middle groups differ: {0} vs {1}")]
    MiddleMismatch(String, String),
    #[error("eta is not an isomorphism: {0}")]
    NotIsomorphism(&'static str),
    #[error(transparent)]
    Section(#[from] SubgroupError),
}

/// `eta` sends the minimal element of a coset of `k2` in `p2` to the minimal
/// element of the matching coset of `k1` in `p1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoursatQuintuple {
    pub p1: SubgroupSet,
    pub k1: SubgroupSet,
    pub eta: BTreeMap<u32, u32>,
    pub p2: SubgroupSet,
    pub k2: SubgroupSet,
}

/// Subgroups `B', A', D', C'` and `beta: D'/C' -> B'/A'` on minimal coset elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ButterflyData {
    pub b: SubgroupSet,
    pub a: SubgroupSet,
    pub d: SubgroupSet,
    pub c: SubgroupSet,
    pub beta: BTreeMap<u32, u32>,
}

fn factors(gh: &FiniteGroup) -> Result<(&FiniteGroup, &FiniteGroup), GoursatError> {
    gh.factors()
        .map(|(a, b)| (a.as_ref(), b.as_ref()))
        .ok_or_else(|| GoursatError::NotProduct(gh.label().to_string()))
}

fn block(g: &FiniteGroup, k: &SubgroupSet, x: u32) -> u32 {
    k.elements().iter().map(|&y| g.mul(x, y)).min().unwrap()
}

pub fn quintuple_from_subgroup(
    gh: &FiniteGroup,
    l: &SubgroupSet,
) -> Result<GoursatQuintuple, GoursatError> {
    let (g, h) = factors(gh)?;
    let (mut p1, mut k1) = (BitSet::new(g.order()), BitSet::new(g.order()));
    let (mut p2, mut k2) = (BitSet::new(h.order()), BitSet::new(h.order()));
    for &x in l.elements() {
        let (a, b) = gh.split(x);
        p1.insert(a as usize);
        p2.insert(b as usize);
        if b == h.identity() {
            k1.insert(a as usize);
        }
        if a == g.identity() {
            k2.insert(b as usize);
        }
    }
    let (p1, k1) = (SubgroupSet::from_mask(p1), SubgroupSet::from_mask(k1));
    let (p2, k2) = (SubgroupSet::from_mask(p2), SubgroupSet::from_mask(k2));
    let mut eta = BTreeMap::new();
    for &x in l.elements() {
        let (a, b) = gh.split(x);
        eta.insert(block(h, &k2, b), block(g, &k1, a));
    }
    Ok(GoursatQuintuple {
        p1,
        k1,
        eta,
        p2,
        k2,
    })
}

pub fn subgroup_from_quintuple(
    gh: &FiniteGroup,
    q: &GoursatQuintuple,
) -> Result<SubgroupSet, GoursatError> {
    let (g, h) = factors(gh)?;
    Section::new(q.p1.clone(), q.k1.clone(), g)?;
    Section::new(q.p2.clone(), q.k2.clone(), h)?;
    let dom: BTreeSet<u32> =
        q.p2.elements()
            .iter()
            .map(|&y| block(h, &q.k2, y))
            .collect();
    let cod: BTreeSet<u32> =
        q.p1.elements()
            .iter()
            .map(|&x| block(g, &q.k1, x))
            .collect();
    if dom.len() != cod.len() || q.eta.keys().copied().collect::<BTreeSet<_>>() != dom {
        return Err(GoursatError::NotIsomorphism("domain or size mismatch"));
    }
    if q.eta.values().copied().collect::<BTreeSet<_>>() != cod {
        return Err(GoursatError::NotIsomorphism("not surjective"));
    }
    for (&y1, &x1) in &q.eta {
        for (&y2, &x2) in &q.eta {
            let lhs = q.eta[&block(h, &q.k2, h.mul(y1, y2))];
            if lhs != block(g, &q.k1, g.mul(x1, x2)) {
                return Err(GoursatError::NotIsomorphism("not a homomorphism"));
            }
        }
    }
    let mut mask = BitSet::new(gh.order());
    for &b in q.p2.elements() {
        let target = q.eta[&block(h, &q.k2, b)];
        for &a in q.p1.elements() {
            if block(g, &q.k1, a) == target {
                mask.insert(gh.pair(a, b) as usize);
            }
        }
    }
    Ok(SubgroupSet::from_mask(mask))
}

fn check_middle(gh: &FiniteGroup, hk: &FiniteGroup) -> Result<(), GoursatError> {
    let (_, h1) = factors(gh)?;
    let (h2, _) = factors(hk)?;
    if !h1.same_as(h2) {
        return Err(GoursatError::MiddleMismatch(
            h1.label().into(),
            h2.label().into(),
        ));
    }
    Ok(())
}

/// `L * M` by scanning pairs; `gk` must be `G x K`.
pub fn star(
    gh: &FiniteGroup,
    hk: &FiniteGroup,
    gk: &FiniteGroup,
    l: &SubgroupSet,
    m: &SubgroupSet,
) -> Result<SubgroupSet, GoursatError> {
    check_middle(gh, hk)?;
    Ok(star_unchecked(gh, hk, gk, l, m))
}

pub(crate) fn star_unchecked(
    gh: &FiniteGroup,
    hk: &FiniteGroup,
    gk: &FiniteGroup,
    l: &SubgroupSet,
    m: &SubgroupSet,
) -> SubgroupSet {
    let nk = factors(hk).unwrap().1.order();
    debug_assert_eq!(gk.order(), factors(gh).unwrap().0.order() * nk);
    let mut mask = BitSet::new(gk.order());
    for &x in l.elements() {
        let (g, h) = gh.split(x);
        let base = h as usize * nk;
        for k in 0..nk {
            if m.contains((base + k) as u32) {
                mask.insert(g as usize * nk + k);
            }
        }
    }
    SubgroupSet::from_mask(mask)
}

/// Sections `(B, A)` and `(D, C)` of one group.
pub fn butterfly(g: &FiniteGroup, s1: &Section, s2: &Section) -> ButterflyData {
    let (b0, a0) = (&s1.upper, &s1.lower);
    let (d0, c0) = (&s2.upper, &s2.lower);
    let bd = b0.intersection(d0);
    let b = bd.product(a0, g);
    let a = b0.intersection(c0).product(a0, g);
    let d = bd.product(c0, g);
    let c = d0.intersection(a0).product(c0, g);
    let beta = bd
        .elements()
        .iter()
        .map(|&x| (block(g, &c, x), block(g, &a, x)))
        .collect();
    ButterflyData { b, a, d, c, beta }
}

/// `L * M` assembled from the butterfly of `(p2(L), k2(L))` and `(p1(M), k1(M))`.
pub fn star_via_butterfly(
    gh: &FiniteGroup,
    hk: &FiniteGroup,
    gk: &FiniteGroup,
    l: &SubgroupSet,
    m: &SubgroupSet,
) -> Result<SubgroupSet, GoursatError> {
    check_middle(gh, hk)?;
    let (g, h) = factors(gh)?;
    let (_, k) = factors(hk)?;
    let ql = quintuple_from_subgroup(gh, l)?;
    let qm = quintuple_from_subgroup(hk, m)?;
    // L = (P1,K1,phi,P2,K2), M = (P3,K3,psi,P4,K4)
    let bf = butterfly(
        h,
        &Section {
            upper: ql.p2.clone(),
            lower: ql.k2.clone(),
        },
        &Section {
            upper: qm.p1.clone(),
            lower: qm.k1.clone(),
        },
    );
    let (p2p, k2p, p3p, k3p) = (&bf.b, &bf.a, &bf.d, &bf.c);
    let phi_image = |s: &SubgroupSet| -> BTreeSet<u32> {
        s.elements()
            .iter()
            .map(|&y| ql.eta[&block(h, &ql.k2, y)])
            .collect()
    };
    let (img_p, img_k) = (phi_image(p2p), phi_image(k2p));
    let k1p: Vec<u32> = ql
        .p1
        .elements()
        .iter()
        .copied()
        .filter(|&x| img_k.contains(&block(g, &ql.k1, x)))
        .collect();
    let psi = |z: u32| qm.eta[&block(k, &qm.k2, z)];
    let mut mask = BitSet::new(gk.order());
    let nk = k.order() as u32;
    for &z in qm.p2.elements() {
        let h3 = psi(z);
        if !p3p.contains(h3) {
            continue;
        }
        // beta: x K3' -> x K2' for x in P2 & P3
        let y = bf.beta[&block(h, k3p, h3)];
        let x = ql.eta[&block(h, &ql.k2, y)];
        debug_assert!(img_p.contains(&block(g, &ql.k1, x)));
        for &a in &k1p {
            mask.insert((g.mul(x, a) * nk + z) as usize);
        }
    }
    Ok(SubgroupSet::from_mask(mask))
}

/// `(B, A)` and `(D, C)` linked.
pub fn linked(g: &FiniteGroup, s1: &Section, s2: &Section) -> bool {
    let (b, a) = (&s1.upper, &s1.lower);
    let (d, c) = (&s2.upper, &s2.lower);
    let db = d.intersection(b);
    d.intersection(a) == c.intersection(b) && &db.product(c, g) == d && &db.product(a, g) == b
}

/// `L° = {(h, g) : (g, h) in L}` inside `hg = H x G`.
pub fn opposite(gh: &FiniteGroup, hg: &FiniteGroup, l: &SubgroupSet) -> SubgroupSet {
    l.map(hg.order(), |x| {
        let (a, b) = gh.split(x);
        hg.pair(b, a)
    })
}

/// `(P, K, id, P, K)` inside `gg = G x G`.
pub fn idempotent_section(
    gg: &FiniteGroup,
    p: &SubgroupSet,
    k: &SubgroupSet,
) -> Result<SubgroupSet, GoursatError> {
    let (g, _) = factors(gg)?;
    Section::new(p.clone(), k.clone(), g)?;
    let mut mask = BitSet::new(gg.order());
    for &x in p.elements() {
        for &y in p.elements() {
            if block(g, k, x) == block(g, k, y) {
                mask.insert(gg.pair(x, y) as usize);
            }
        }
    }
    Ok(SubgroupSet::from_mask(mask))
}

/// The section criterion for `L * L = L` when `L <= G x G`.
pub fn idempotent_by_sections(gg: &FiniteGroup, l: &SubgroupSet) -> Result<bool, GoursatError> {
    let (g, _) = factors(gg)?;
    let q = quintuple_from_subgroup(gg, l)?;
    let s1 = Section {
        upper: q.p1.clone(),
        lower: q.k1.clone(),
    };
    let s2 = Section {
        upper: q.p2.clone(),
        lower: q.k2.clone(),
    };
    if !linked(g, &s1, &s2) {
        return Ok(false);
    }
    Ok(butterfly(g, &s1, &s2).beta == q.eta)
}
