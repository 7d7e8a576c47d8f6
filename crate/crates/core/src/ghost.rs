//! The twisted product `*κ`, the ghost product and its structure constants
//! `a^{L,M}_N`, the idempotents `e_G`, and condensation.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;

use crate::burnside::{alpha, standard_basis, AlgebraError, BisetElement, GhostElement};
use crate::group::{FiniteGroup, GroupError};
use crate::linalg;
use crate::par::Exec;
use crate::poset::FinitePoset;
use crate::rational::{qi, Q};
use crate::space::{ProductSpace, Triple, Universe};

/// `kappa(L, M) = |k2(L) & k1(M)| / |H|`.
pub fn kappa(t: &Triple, l: usize, m: usize) -> Q {
    t.kappa(l, m)
}

fn check(t: &Triple, x: &GhostElement, y: &GhostElement) -> Result<(), AlgebraError> {
    for (want, got) in [(&t.gh, x.space()), (&t.hk, y.space())] {
        if !Arc::ptr_eq(want, got) {
            return Err(AlgebraError::SpaceMismatch {
                expected: want.label(),
                found: got.label(),
            });
        }
    }
    Ok(())
}

/// `L *κ M = kappa(L, M) (L * M)`, extended bilinearly.
pub fn twisted_product(
    t: &Triple,
    x: &GhostElement,
    y: &GhostElement,
) -> Result<GhostElement, AlgebraError> {
    check(t, x, y)?;
    let mut out = GhostElement::zero(&t.gk);
    for (&l, &a) in x.coeffs() {
        for (&m, &b) in y.coeffs() {
            out.add_term(t.star(l, m), a * b * t.kappa(l, m));
        }
    }
    Ok(out)
}

/// `a^{L,M}_N` from its defining Möbius sum over the product poset.
pub fn structure_constant_def(t: &Triple, l: usize, m: usize, n: usize) -> Q {
    let (lg, lh) = (t.gh.lattice(), t.hk.lattice());
    let leq = |a: usize, b: usize| t.gk.lattice().poset().leq(a, b);
    let mut sum = 0i64;
    for &(l1, mu1) in lg.moebius_to(l) {
        for &(m1, mu2) in lh.moebius_to(m) {
            if leq(n, t.star(l1, m1)) {
                sum += mu1 * mu2 * t.kernel_meet(l1, m1) as i64;
            }
        }
    }
    Q::new(sum, t.middle().order() as i64)
}

/// `a^{L,M}_N` for every `N` at once from the defining sum.
pub fn structure_row_def(t: &Triple, l: usize, m: usize) -> BTreeMap<usize, Q> {
    let (lg, lh, lk) = (t.gh.lattice(), t.hk.lattice(), t.gk.lattice());
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for &(l1, mu1) in lg.moebius_to(l) {
        for &(m1, mu2) in lh.moebius_to(m) {
            let c = mu1 * mu2 * t.kernel_meet(l1, m1) as i64;
            for n in lk.below(t.star(l1, m1)) {
                *acc.entry(n).or_insert(0) += c;
            }
        }
    }
    let h = t.middle().order() as i64;
    acc.into_iter()
        .filter(|&(_, v)| v != 0)
        .map(|(n, v)| (n, Q::new(v, h)))
        .collect()
}

/// How the middle condition of the fixed-point subposet is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MiddleCondition {
    /// `p2(L) = p1(M)`
    #[default]
    Matched,
    /// `p2(L) = p2(M)` compared as element sets (meaningful only when `H = K`).
    RightProjections,
}

/// Membership of `(L, M)` in the subposet of pairs fixed by the closure map for `N`.
pub fn in_fixed_subposet(
    t: &Triple,
    l: usize,
    m: usize,
    n: usize,
    reading: MiddleCondition,
) -> bool {
    let (sl, sm, sn) = (t.gh.shape(l), t.hk.shape(m), t.gk.shape(n));
    let middle = match reading {
        MiddleCondition::Matched => sl.p2 == sm.p1,
        MiddleCondition::RightProjections => {
            t.gh.right_lattice().get(sl.p2 as usize).elements()
                == t.hk.right_lattice().get(sm.p2 as usize).elements()
        }
    };
    sl.p1 == sn.p1 && middle && sm.p2 == sn.p2 && t.gk.lattice().poset().leq(n, t.star(l, m))
}

/// `a^{L,M}_N` as a Möbius sum over the induced fixed-point subposet below `(L, M)`.
pub fn structure_constant_thm(t: &Triple, l: usize, m: usize, n: usize) -> Q {
    structure_constant_thm_with(t, l, m, n, MiddleCondition::Matched)
}

pub fn structure_constant_thm_with(
    t: &Triple,
    l: usize,
    m: usize,
    n: usize,
    reading: MiddleCondition,
) -> Q {
    if !in_fixed_subposet(t, l, m, n, reading) {
        return Q::zero();
    }
    let (lg, lh) = (t.gh.lattice(), t.hk.lattice());
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for l1 in lg.below(l) {
        if t.gh.shape(l1).p1 != t.gk.shape(n).p1 {
            continue;
        }
        for m1 in lh.below(m) {
            if in_fixed_subposet(t, l1, m1, n, reading) {
                pairs.push((l1, m1));
            }
        }
    }
    let top = pairs
        .iter()
        .position(|&p| p == (l, m))
        .expect("(L, M) lies in its own down-set");
    let sub = FinitePoset::from_fn(pairs.len(), |i, j| {
        lg.poset().leq(pairs[i].0, pairs[j].0) && lh.poset().leq(pairs[i].1, pairs[j].1)
    });
    sub.moebius_to(top)
        .iter()
        .map(|&(i, mu)| qi(mu) * t.kappa(pairs[i].0, pairs[i].1))
        .sum()
}

/// Nonzero `a^{L,M}_N` over the candidates `N <= L * M` with matching projections.
pub fn structure_row_thm(t: &Triple, l: usize, m: usize) -> BTreeMap<usize, Q> {
    if !t.composable(l, m) {
        return BTreeMap::new();
    }
    let (sl, sm) = (t.gh.shape(l), t.hk.shape(m));
    t.gk.lattice()
        .below(t.star(l, m))
        .filter(|&n| {
            let sn = t.gk.shape(n);
            sn.p1 == sl.p1 && sn.p2 == sm.p2
        })
        .map(|n| (n, structure_constant_thm(t, l, m, n)))
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("structure constant a^({l},{m})_{n}: defining sum {def}, fixed-point sum {thm}")]
pub struct Disagreement {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub def: Q,
    pub thm: Q,
}

#[derive(Debug, thiserror::Error)]
pub enum GhostError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Disagreement(#[from] Disagreement),
}

type Row = Arc<Vec<(u32, Q)>>;

/// Rows `N -> a^{L,M}_N`, stored only once both evaluators agree on them.
pub struct StructureConstantTable {
    rows: Vec<OnceLock<Row>>,
}

impl StructureConstantTable {
    fn new(len: usize) -> Self {
        StructureConstantTable {
            rows: (0..len).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn filled(&self) -> usize {
        self.rows.iter().filter(|r| r.get().is_some()).count()
    }
}

/// Both evaluators over all `N`, or the first `N` where they differ.
pub fn compare_row(t: &Triple, l: usize, m: usize) -> Result<BTreeMap<usize, Q>, Disagreement> {
    let def = structure_row_def(t, l, m);
    let thm = structure_row_thm(t, l, m);
    if def == thm {
        return Ok(def);
    }
    let n = def
        .keys()
        .chain(thm.keys())
        .copied()
        .find(|n| def.get(n) != thm.get(n))
        .expect("rows differ");
    Err(Disagreement {
        l,
        m,
        n,
        def: def.get(&n).copied().unwrap_or_else(Q::zero),
        thm: thm.get(&n).copied().unwrap_or_else(Q::zero),
    })
}

impl Triple {
    pub fn structure_constants(&self) -> &StructureConstantTable {
        self.constants
            .get_or_init(|| StructureConstantTable::new(self.gh.len() * self.hk.len()))
    }

    /// Cached row of `L ~*κ M`.
    pub fn ghost_row(&self, l: usize, m: usize) -> Result<Row, Disagreement> {
        let cell = &self.structure_constants().rows[l * self.hk.len() + m];
        if let Some(r) = cell.get() {
            return Ok(r.clone());
        }
        let row = compare_row(self, l, m)?;
        let row: Row = Arc::new(row.into_iter().map(|(n, v)| (n as u32, v)).collect());
        Ok(cell.get_or_init(|| row).clone())
    }

    /// Fills every row, failing on the first disagreement in row order.
    pub fn fill_structure_constants(&self, exec: Exec) -> Result<(), Disagreement> {
        let nm = self.hk.len();
        exec.try_for_range(self.gh.len() * nm, |i| {
            self.ghost_row(i / nm, i % nm).map(|_| ())
        })
    }
}

/// `x ~*κ y`.
pub fn ghost_product(
    t: &Triple,
    x: &GhostElement,
    y: &GhostElement,
) -> Result<GhostElement, GhostError> {
    check(t, x, y)?;
    let mut out = GhostElement::zero(&t.gk);
    for (&l, &a) in x.coeffs() {
        for (&m, &b) in y.coeffs() {
            for &(n, c) in t.ghost_row(l, m)?.iter() {
                out.add_term(n as usize, a * b * c);
            }
        }
    }
    Ok(out)
}

/// `e_G = sum over g of Delta_g(G)` in the space of `G x G`.
pub fn idempotent_e(gg: &Arc<ProductSpace>) -> GhostElement {
    let g = gg.left().clone();
    let mut e = GhostElement::zero(gg);
    for x in g.elements() {
        e.add_term(gg.graph_index(|y| g.conj(x, y)), qi(1));
    }
    e
}

/// `zeta(e_G)`.
pub fn tilde_e(gg: &Arc<ProductSpace>) -> GhostElement {
    crate::burnside::zeta(&idempotent_e(gg))
}

/// `|G| Delta(G)`, the identity of `*κ` on `G x G`.
pub fn twisted_identity(gg: &Arc<ProductSpace>) -> GhostElement {
    GhostElement::from_terms(gg, [(gg.diagonal_index(), qi(gg.left().order() as i64))])
}

#[derive(Debug, Clone, Default)]
pub struct CondensationReport {
    pub left: String,
    pub right: String,
    pub dimension: usize,
    pub failures: Vec<String>,
}

impl CondensationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `e_G` idempotent, the sandwich formula for every `L <= G x H`, and
/// `alpha(Q B(G, H)) = fixed points = e_G *κ Q S *κ e_H`; when `G = H` also
/// that `alpha` is multiplicative and injective.
pub fn condensation_check(
    u: &Universe,
    g: &Arc<FiniteGroup>,
    h: &Arc<FiniteGroup>,
) -> Result<CondensationReport, GroupError> {
    let ggh = u.triple(g, g, h)?;
    let ghh = u.triple(g, h, h)?;
    let gh = ggh.hk.clone();
    let mut rep = CondensationReport {
        left: g.label().into(),
        right: h.label().into(),
        ..Default::default()
    };
    let mut fail = |s: String| rep.failures.push(s);
    for (name, t, sp) in [
        ("G", u.cube(g)?, ggh.gh.clone()),
        ("H", u.cube(h)?, ghh.hk.clone()),
    ] {
        let e = idempotent_e(&sp);
        if twisted_product(&t, &e, &e).unwrap() != e {
            fail(format!("e_{name} is not idempotent"));
        }
        let te = tilde_e(&sp);
        match ghost_product(&t, &te, &te) {
            Ok(x) if x == te => {}
            Ok(_) => fail(format!("zeta(e_{name}) is not idempotent")),
            Err(err) => fail(err.to_string()),
        }
    }
    let (eg, eh) = (idempotent_e(&ggh.gh), idempotent_e(&ghh.hk));
    let lat = gh.lattice();
    let order = gh.group().order() as i64;
    let mut sandwiches = Vec::new();
    for l in 0..gh.len() {
        let left = twisted_product(&ggh, &eg, &GhostElement::basis(&gh, l)).unwrap();
        let s = twisted_product(&ghh, &left, &eh).unwrap();
        let class = &lat.classes()[lat.class_of(l)];
        let c = Q::new(lat.normalizer_order(l) as i64, order);
        let expect = GhostElement::from_terms(&gh, class.iter().map(|&v| (v, c)));
        if s != expect {
            fail(format!("e_G *κ L *κ e_H formula fails at subgroup {l}"));
        }
        sandwiches.push(s.coeffs().clone());
    }
    let alphas: Vec<_> = standard_basis(&gh)
        .iter()
        .map(|b| alpha(b).coeffs().clone())
        .collect();
    let fixed: Vec<_> = crate::burnside::fixed_point_basis(&gh)
        .iter()
        .map(|x| x.coeffs().clone())
        .collect();
    rep.dimension = linalg::rank(&fixed);
    if linalg::rank(&alphas) != alphas.len() {
        fail("alpha is not injective".into());
    }
    if !linalg::same_span(&alphas, &fixed) {
        fail("alpha image differs from the fixed points".into());
    }
    if !linalg::same_span(&fixed, &sandwiches) {
        fail("fixed points differ from e_G *κ Q S *κ e_H".into());
    }
    if g.same_as(h) {
        let t = u.cube(g)?;
        let basis = standard_basis(&t.gh);
        for a in &basis {
            for b in &basis {
                let ab = crate::burnside::mackey_product(&t, a, b).unwrap();
                let lhs = alpha(&ab);
                let rhs = twisted_product(&t, &alpha(a), &alpha(b)).unwrap();
                if lhs != rhs {
                    fail(format!(
                        "alpha(ab) != alpha(a) *κ alpha(b) for {a:?}, {b:?}"
                    ));
                }
            }
        }
    }
    Ok(rep)
}

/// `alpha(a . b) = alpha(a) *κ alpha(b)` for one pair.
pub fn alpha_multiplicative(
    t: &Triple,
    a: &BisetElement,
    b: &BisetElement,
) -> Result<bool, GhostError> {
    let ab = crate::burnside::mackey_product(t, a, b)?;
    Ok(alpha(&ab) == twisted_product(t, &alpha(a), &alpha(b))?)
}

/// `rho(a . b) = rho(a) ~*κ rho(b)` for one pair.
pub fn rho_multiplicative(
    t: &Triple,
    a: &BisetElement,
    b: &BisetElement,
) -> Result<bool, GhostError> {
    use crate::burnside::marks;
    let ab = crate::burnside::mackey_product(t, a, b)?;
    Ok(marks(&ab) == ghost_product(t, &marks(a), &marks(b))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::{marks, mu_inv, zeta};
    use crate::subgroup::SubgroupSet;

    fn whole(sp: &ProductSpace) -> usize {
        sp.index_of(&SubgroupSet::whole(sp.group())).unwrap()
    }

    #[test]
    fn kappa_values() {
        let u = Universe::new();
        let s3 = u.group("S3").unwrap();
        let t = u.cube(&s3).unwrap();
        let d = t.gh.diagonal_index();
        assert_eq!(kappa(&t, d, d), Q::new(1, 6));
        assert_eq!(kappa(&t, whole(&t.gh), whole(&t.hk)), qi(1));
    }

    #[test]
    fn evaluators_agree_on_c2_and_reproduce_zeta_transport() {
        let u = Universe::new();
        let c2 = u.group("C2").unwrap();
        let t = u.cube(&c2).unwrap();
        let n = t.gh.len();
        for l in 0..n {
            for m in 0..n {
                let row = compare_row(&t, l, m).unwrap();
                for k in 0..n {
                    let v = structure_constant_def(&t, l, m, k);
                    assert_eq!(v, row.get(&k).copied().unwrap_or_else(Q::zero));
                    assert_eq!(v, structure_constant_thm(&t, l, m, k));
                }
                // sum_N a N = zeta(mu(L) *κ mu(M))
                let lhs = GhostElement::from_terms(&t.gk, row);
                let x = mu_inv(&GhostElement::basis(&t.gh, l));
                let y = mu_inv(&GhostElement::basis(&t.hk, m));
                assert_eq!(lhs, zeta(&twisted_product(&t, &x, &y).unwrap()));
            }
        }
    }

    #[test]
    fn left_free_pairs() {
        let u = Universe::new();
        let s3 = u.group("S3").unwrap();
        let t = u.cube(&s3).unwrap();
        let ll = t.gh.left_lattice();
        let trivial = ll.index_of(&SubgroupSet::trivial(&s3)).unwrap() as u32;
        for l in 0..t.gh.len() {
            for m in 0..t.hk.len() {
                if t.gh.shape(l).k1 != trivial || t.hk.shape(m).k1 != trivial {
                    continue;
                }
                let got = ghost_product(
                    &t,
                    &GhostElement::basis(&t.gh, l),
                    &GhostElement::basis(&t.hk, m),
                )
                .unwrap();
                let expect = if t.composable(l, m) {
                    GhostElement::from_terms(&t.gk, [(t.star(l, m), Q::new(1, 6))])
                } else {
                    GhostElement::zero(&t.gk)
                };
                assert_eq!(got, expect);
            }
        }
    }

    #[test]
    fn right_projection_middle_condition_disagrees_with_the_definition() {
        let u = Universe::new();
        let c2 = u.group("C2").unwrap();
        let t = u.cube(&c2).unwrap();
        let n = t.gh.len();
        let mut mismatches = 0;
        for l in 0..n {
            for m in 0..n {
                for k in 0..n {
                    let def = structure_constant_def(&t, l, m, k);
                    if def
                        != structure_constant_thm_with(
                            &t,
                            l,
                            m,
                            k,
                            MiddleCondition::RightProjections,
                        )
                    {
                        mismatches += 1;
                    }
                    assert_eq!(def, structure_constant_thm(&t, l, m, k));
                }
            }
        }
        assert!(mismatches > 0);
    }

    #[test]
    fn identities_and_idempotents() {
        let u = Universe::new();
        for name in ["C3", "S3"] {
            let g = u.group(name).unwrap();
            let t = u.cube(&g).unwrap();
            let one = twisted_identity(&t.gh);
            let e = idempotent_e(&t.gh);
            assert_eq!(twisted_product(&t, &e, &e).unwrap(), e);
            for l in [0, t.gh.diagonal_index(), whole(&t.gh)] {
                let x = GhostElement::basis(&t.gh, l);
                assert_eq!(twisted_product(&t, &one, &x).unwrap(), x);
                assert_eq!(twisted_product(&t, &x, &one).unwrap(), x);
            }
            let te = tilde_e(&t.gh);
            assert_eq!(ghost_product(&t, &te, &te).unwrap(), te);
            if g.is_abelian() {
                assert_eq!(e, one);
            }
        }
    }

    #[test]
    fn conjugation_by_graphs() {
        let u = Universe::new();
        let s3 = u.group("S3").unwrap();
        let t = u.cube(&s3).unwrap();
        let lat = t.gh.lattice();
        for a in s3.elements() {
            for b in s3.elements() {
                let da = t.gh.graph_index(|y| s3.conj(a, y));
                let db = t.gh.graph_index(|y| s3.conj(b, y));
                for l in 0..t.gh.len() {
                    let x = t.star(t.star(da, l), db);
                    let conj = lat.conjugate(t.gh.group().pair(a, s3.inv(b)), l);
                    assert_eq!(x, conj);
                }
            }
        }
    }

    #[test]
    fn rho_is_multiplicative_on_c3() {
        let u = Universe::new();
        let c3 = u.group("C3").unwrap();
        let t = u.cube(&c3).unwrap();
        let basis = standard_basis(&t.gh);
        for a in &basis {
            for b in &basis {
                assert!(alpha_multiplicative(&t, a, b).unwrap());
                assert!(rho_multiplicative(&t, a, b).unwrap());
            }
        }
        let _ = marks(&basis[0]);
    }
}
