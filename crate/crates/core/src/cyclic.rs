//! Products of cyclic groups: subgroup codes `(k; a, i, b)`, the cocycle
//! `lambda` and its cochain `mu`, the tilde basis, the inverse category of
//! sections, and the chain of isomorphisms onto matrix rings over the group
//! algebras `Q[(Z/k)^x]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::arith::{
    divisors, euler_phi, gcd, inverse_mod, moebius, p_part, primes_dividing, reduce_unit, units_mod,
};
use crate::burnside::{alpha, mackey_product, zeta, BisetElement, GhostElement};
use crate::ghost::ghost_product;
use crate::group::{FiniteGroup, GroupError};
use crate::lattice::SubgroupLattice;
use crate::linalg;
use crate::par::Exec;
use crate::poset::FinitePoset;
use crate::rational::{format_q, qi, Q};
use crate::report::Report;
use crate::space::{ProductSpace, Triple, Universe};
use crate::subgroup::SubgroupSet;

#[derive(Debug, thiserror::Error)]
pub enum CyclicError {
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("{0} is not a product of two cyclic groups C<n> with generator 1")]
    NotCyclic(String),
    #[error("{0:?} and {1:?} do not compose")]
    NotComposable(CyclicCode, CyclicCode),
    #[error("{t} is not a unit mod {k}")]
    NotUnit { t: u64, k: u64 },
    #[error("no section with index {index} for k = {k}")]
    NoSection { k: u64, index: usize },
    #[error("family must be a nonempty list of positive orders")]
    EmptyFamily,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `{}_{C_n}(k; a, i, b)_{C_m}`: `p1 = <n/a>`, `k1 = <nk/a>`, `p2 = <m/b>`,
/// `k2 = <mk/b>`, and the generator `m/b` of `p2/k2` goes to `i n/a`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicCode {
    pub n: u64,
    pub m: u64,
    pub k: u64,
    pub a: u64,
    pub i: u64,
    pub b: u64,
}

impl fmt::Display for CyclicCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{},{},{})", self.k, self.a, self.i, self.b)
    }
}

impl fmt::Debug for CyclicCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}{}C{}", self.n, self, self.m)
    }
}

impl CyclicCode {
    /// Validates and reduces `i` into `1..=k`.
    pub fn new(n: u64, m: u64, k: u64, a: u64, i: u64, b: u64) -> Result<Self, CyclicError> {
        let bad = || CyclicError::InvalidCode(format!("C{n}({k};{a},{i},{b})C{m}"));
        if n == 0 || m == 0 || a == 0 || b == 0 || k == 0 {
            return Err(bad());
        }
        if !n.is_multiple_of(a)
            || !m.is_multiple_of(b)
            || !gcd(a, b).is_multiple_of(k)
            || gcd(i, k) != 1
        {
            return Err(bad());
        }
        Ok(CyclicCode {
            n,
            m,
            k,
            a,
            i: reduce_unit(i as i64, k),
            b,
        })
    }

    /// Every subgroup of `C_n x C_m`.
    pub fn all(n: u64, m: u64) -> Vec<Self> {
        let mut out = Vec::new();
        for a in divisors(n) {
            for b in divisors(m) {
                for k in divisors(gcd(a, b)) {
                    for i in units_mod(k) {
                        out.push(CyclicCode { n, m, k, a, i, b });
                    }
                }
            }
        }
        out
    }

    /// `s(L) = [p1(L) : k1(L)]`.
    pub fn s(&self) -> u64 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.a * self.b / self.k
    }

    pub fn kernel_orders(&self) -> (u64, u64) {
        (self.a / self.k, self.b / self.k)
    }

    pub fn opposite(&self) -> Self {
        CyclicCode {
            n: self.m,
            m: self.n,
            k: self.k,
            a: self.b,
            i: inverse_mod(self.i, self.k).expect("i is a unit"),
            b: self.a,
        }
    }

    /// The same projections with `s` lowered to `l`, which must divide `k`.
    pub fn with_s(&self, l: u64) -> Self {
        debug_assert_eq!(self.k % l, 0);
        CyclicCode {
            k: l,
            i: reduce_unit(self.i as i64, l),
            ..*self
        }
    }

    /// The subgroups `L' <= L` with the same projections: `(k'; a, i', b)`
    /// with `k | k' | gcd(a, b)` and `i' = i mod k`.
    pub fn refinements(&self) -> Vec<Self> {
        let mut out = Vec::new();
        for k2 in divisors(gcd(self.a, self.b))
            .into_iter()
            .filter(|d| d % self.k == 0)
        {
            for i2 in units_mod(k2)
                .into_iter()
                .filter(|t| reduce_unit(*t as i64, self.k) == self.i)
            {
                out.push(CyclicCode {
                    k: k2,
                    i: i2,
                    ..*self
                });
            }
        }
        out
    }

    /// `true` for the idempotent endomorphisms `(k; a, 1, a)`.
    pub fn is_idempotent_shape(&self) -> bool {
        self.n == self.m && self.a == self.b && self.i == 1
    }

    /// The subgroup of `product = C_n x C_m`.
    pub fn decode(&self, product: &FiniteGroup) -> Result<SubgroupSet, CyclicError> {
        let (n, m) = cyclic_factors(product)?;
        if (n, m) != (self.n, self.m) {
            return Err(CyclicError::InvalidCode(format!(
                "{self:?} does not live in {}",
                product.label()
            )));
        }
        let (a, b, k, i) = (self.a, self.b, self.k, self.i);
        let mut elems = Vec::with_capacity(self.order() as usize);
        for t in 0..b {
            let y = t * (m / b);
            let base = t * i * (n / a);
            for s in 0..a / k {
                let x = (base + s * (n * k / a)) % n;
                elems.push(product.pair(x as u32, y as u32));
            }
        }
        Ok(SubgroupSet::from_elements(product, elems).expect("codes describe subgroups"))
    }

    pub fn encode(product: &FiniteGroup, l: &SubgroupSet) -> Result<Self, CyclicError> {
        let (n, m) = cyclic_factors(product)?;
        let mut p1 = std::collections::BTreeSet::new();
        let mut p2 = std::collections::BTreeSet::new();
        let mut k1 = 0u64;
        for &e in l.elements() {
            let (x, y) = product.split(e);
            p1.insert(x);
            p2.insert(y);
            if y == 0 {
                k1 += 1;
            }
        }
        let (a, b) = (p1.len() as u64, p2.len() as u64);
        let k = a / k1;
        let i = if k == 1 {
            1
        } else {
            let y = (m / b) as u32;
            let x = l
                .elements()
                .iter()
                .map(|&e| product.split(e))
                .find(|&(_, yy)| yy == y)
                .map(|(x, _)| x as u64)
                .expect("generator of p2 is hit");
            (x / (n / a)) % k
        };
        CyclicCode::new(n, m, k, a, i, b)
    }
}

fn cyclic_factors(product: &FiniteGroup) -> Result<(u64, u64), CyclicError> {
    let not = || CyclicError::NotCyclic(product.label().to_string());
    let (g, h) = product.factors().ok_or_else(not)?;
    for f in [g, h] {
        if !f.same_as(&FiniteGroup::cyclic(f.order())) {
            return Err(not());
        }
    }
    Ok((g.order() as u64, h.order() as u64))
}

/// `(k; a, i, b) * (l; b, j, c) = (gcd(k, l); a, ij, c)`.
pub fn star_cyclic(x: &CyclicCode, y: &CyclicCode) -> Result<CyclicCode, CyclicError> {
    if x.m != y.n || x.b != y.a {
        return Err(CyclicError::NotComposable(*x, *y));
    }
    let g = gcd(x.k, y.k);
    Ok(CyclicCode {
        n: x.n,
        m: y.m,
        k: g,
        a: x.a,
        i: reduce_unit((x.i * y.i) as i64, g),
        b: y.b,
    })
}

pub fn composable(x: &CyclicCode, y: &CyclicCode) -> bool {
    x.m == y.n && x.b == y.a
}

pub fn lambda_p(l: &CyclicCode, m: &CyclicCode, p: u64) -> Q {
    assert_eq!(l.m, m.n, "middle groups differ");
    if p_part(l.b, p) != p_part(m.a, p) {
        return Q::zero();
    }
    let meet = p_part(gcd(l.kernel_orders().1, m.kernel_orders().0), p);
    let top = if p_part(l.k, p) == 1 && p_part(m.k, p) == 1 {
        euler_phi(meet)
    } else {
        meet
    };
    Q::new(top as i64, p_part(l.m, p) as i64)
}

/// `lambda(L, M) = prod_p lambda_p(L, M)`; only primes dividing `|H|` contribute.
pub fn lambda(l: &CyclicCode, m: &CyclicCode) -> Q {
    if l.b != m.a {
        return Q::zero();
    }
    primes_dividing(l.m)
        .into_iter()
        .map(|p| lambda_p(l, m, p))
        .product()
}

pub fn mu_p(l: &CyclicCode, p: u64) -> Q {
    let hp = p_part(l.m, p) as i64;
    if p_part(l.k, p) == 1 {
        Q::new(euler_phi(p_part(l.a, p)) as i64, hp)
    } else {
        Q::new(p_part(l.kernel_orders().0, p) as i64, hp)
    }
}

pub fn mu_coboundary(l: &CyclicCode) -> Q {
    primes_dividing(l.n * l.m)
        .into_iter()
        .map(|p| mu_p(l, p))
        .product()
}

/// `L~ = sum of the L' <= L with p1(L') = p1(L) and p2(L') = p2(L)`.
pub fn tilde_basis(space: &Arc<ProductSpace>, l: usize) -> GhostElement {
    let sh = space.shape(l);
    let terms = space
        .lattice()
        .below(l)
        .filter(|&x| {
            let s = space.shape(x);
            s.p1 == sh.p1 && s.p2 == sh.p2
        })
        .map(|x| (x, qi(1)));
    GhostElement::from_terms(space, terms)
}

/// A space `C_n x C_m` whose lattice was built from codes, with the code of
/// every lattice index.
pub struct CodedSpace {
    space: Arc<ProductSpace>,
    codes: Vec<CyclicCode>,
    index: HashMap<CyclicCode, usize>,
}

impl CodedSpace {
    pub fn build(u: &Universe, n: u64, m: u64) -> Result<Self, CyclicError> {
        let g = u.group(&format!("C{n}"))?;
        let h = u.group(&format!("C{m}"))?;
        let product = FiniteGroup::direct_product(&g, &h);
        let subgroups = CyclicCode::all(n, m)
            .iter()
            .map(|c| c.decode(&product))
            .collect::<Result<Vec<_>, _>>()?;
        product.install_lattice(SubgroupLattice::from_subgroups(&product, subgroups));
        let space = u.insert_space(Arc::new(ProductSpace::from_product(product, usize::MAX)?));
        let codes = space
            .lattice()
            .subgroups()
            .iter()
            .map(|s| CyclicCode::encode(space.group(), s))
            .collect::<Result<Vec<_>, _>>()?;
        let index = codes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Ok(CodedSpace {
            space,
            codes,
            index,
        })
    }

    pub fn space(&self) -> &Arc<ProductSpace> {
        &self.space
    }

    pub fn code(&self, l: usize) -> CyclicCode {
        self.codes[l]
    }

    pub fn codes(&self) -> &[CyclicCode] {
        &self.codes
    }

    pub fn index(&self, c: &CyclicCode) -> usize {
        self.index[c]
    }
}

/// Element of the category algebra of the inverse category (twisted or not).
pub type CategoryElement = BTreeMap<CyclicCode, Q>;

/// Entry `(row, col)` of the `k` component, carrying the unit `t mod k`.
/// Rows and columns count from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatrixEntry {
    pub k: u64,
    pub row: usize,
    pub col: usize,
    pub unit: u64,
}

/// Element of the product of the matrix rings `Mat_{n(k)}(Q[(Z/k)^x])`.
pub type MatrixTuple = BTreeMap<MatrixEntry, Q>;

fn add_into<K: Ord>(map: &mut BTreeMap<K, Q>, key: K, c: Q) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
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

fn sum_into<K: Ord + Clone>(acc: &mut BTreeMap<K, Q>, x: &BTreeMap<K, Q>, c: Q) {
    for (k, v) in x {
        add_into(acc, k.clone(), *v * c);
    }
}

/// Untwisted product: `s t = s * t` when composable, else 0.
pub fn category_product(x: &CategoryElement, y: &CategoryElement) -> CategoryElement {
    let mut out = CategoryElement::new();
    for (s, a) in x {
        for (t, b) in y {
            if let Ok(st) = star_cyclic(s, t) {
                add_into(&mut out, st, a * b);
            }
        }
    }
    out
}

/// Product twisted by `lambda`.
pub fn twisted_category_product(x: &CategoryElement, y: &CategoryElement) -> CategoryElement {
    let mut out = CategoryElement::new();
    for (s, a) in x {
        for (t, b) in y {
            if let Ok(st) = star_cyclic(s, t) {
                add_into(&mut out, st, a * b * lambda(s, t));
            }
        }
    }
    out
}

pub fn matrix_product(x: &MatrixTuple, y: &MatrixTuple) -> MatrixTuple {
    let mut out = MatrixTuple::new();
    for (e, a) in x {
        for (f, b) in y.range(
            MatrixEntry {
                k: e.k,
                row: e.col,
                col: 0,
                unit: 0,
            }..,
        ) {
            if f.k != e.k || f.row != e.col {
                break;
            }
            let key = MatrixEntry {
                k: e.k,
                row: e.row,
                col: f.col,
                unit: reduce_unit((e.unit * f.unit) as i64, e.k),
            };
            add_into(&mut out, key, a * b);
        }
    }
    out
}

/// A finite set of cyclic groups, with every space `C_n x C_m` built from
/// codes and the sections of each order `k` in a fixed order.
pub struct CyclicFamily {
    orders: Vec<u64>,
    universe: Universe,
    spaces: BTreeMap<(u64, u64), CodedSpace>,
    sections: BTreeMap<u64, Vec<(u64, u64)>>,
}

impl fmt::Debug for CyclicFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicFamily({:?})", self.orders)
    }
}

impl CyclicFamily {
    pub fn new(orders: &[u64]) -> Result<Self, CyclicError> {
        let mut orders = orders.to_vec();
        orders.sort_unstable();
        orders.dedup();
        if orders.is_empty() || orders[0] == 0 {
            return Err(CyclicError::EmptyFamily);
        }
        let universe = Universe::with_bound(usize::MAX);
        let mut spaces = BTreeMap::new();
        for &n in &orders {
            for &m in &orders {
                spaces.insert((n, m), CodedSpace::build(&universe, n, m)?);
            }
        }
        // sections (G, a) with C_k = <n/a>/<nk/a>, sorted by (|G|, a)
        let mut sections: BTreeMap<u64, Vec<(u64, u64)>> = BTreeMap::new();
        for &n in &orders {
            for a in divisors(n) {
                for k in divisors(a) {
                    sections.entry(k).or_default().push((n, a));
                }
            }
        }
        for v in sections.values_mut() {
            v.sort_unstable();
        }
        Ok(CyclicFamily {
            orders,
            universe,
            spaces,
            sections,
        })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn coded(&self, n: u64, m: u64) -> &CodedSpace {
        &self.spaces[&(n, m)]
    }

    pub fn space(&self, n: u64, m: u64) -> &Arc<ProductSpace> {
        self.coded(n, m).space()
    }

    pub fn code(&self, n: u64, m: u64, l: usize) -> CyclicCode {
        self.coded(n, m).code(l)
    }

    pub fn triple(&self, n: u64, m: u64, q: u64) -> Arc<Triple> {
        let g = |x: u64| {
            self.universe
                .group(&format!("C{x}"))
                .expect("family member")
        };
        self.universe
            .triple(&g(n), &g(m), &g(q))
            .expect("spaces are installed")
    }

    /// The orders `k` of cyclic sections, i.e. the components.
    pub fn ks(&self) -> Vec<u64> {
        self.sections.keys().copied().collect()
    }

    /// `n(k)`.
    pub fn n_of(&self, k: u64) -> usize {
        self.sections.get(&k).map_or(0, Vec::len)
    }

    pub fn sections(&self, k: u64) -> &[(u64, u64)] {
        self.sections.get(&k).map_or(&[], Vec::as_slice)
    }

    /// 1-based position of `(|G|, a)` among the sections of order `k`.
    pub fn section_index(&self, k: u64, order: u64, a: u64) -> usize {
        1 + self.sections[&k]
            .binary_search(&(order, a))
            .expect("section of this order")
    }

    fn section(&self, k: u64, index: usize) -> Result<(u64, u64), CyclicError> {
        index
            .checked_sub(1)
            .and_then(|i| self.sections(k).get(i).copied())
            .ok_or(CyclicError::NoSection { k, index })
    }

    /// `sum over G, H of the number of subgroups of G x H`.
    pub fn dimension(&self) -> usize {
        self.spaces.values().map(|s| s.space().len()).sum()
    }

    /// `sum over k of n(k)^2 phi(k)`.
    pub fn matrix_dimension(&self) -> usize {
        self.sections
            .iter()
            .map(|(&k, v)| v.len() * v.len() * euler_phi(k) as usize)
            .sum()
    }

    /// Standard basis of `B^D` as `(|G|, |H|, lattice index)`.
    pub fn standard_basis(&self) -> Vec<(u64, u64, usize)> {
        self.spaces
            .iter()
            .flat_map(|(&(n, m), s)| (0..s.space().len()).map(move |l| (n, m, l)))
            .collect()
    }

    /// `gamma = zeta . alpha` on `[G x H / L]`.
    pub fn gamma(&self, n: u64, m: u64, l: usize) -> GhostElement {
        zeta(&alpha(&BisetElement::basis(self.space(n, m), l)))
    }

    /// `delta`: coordinates in the tilde basis, read as morphisms.
    /// `L = sum over L' in P(L) of mu(s(L')/s(L)) L'~`.
    pub fn delta(&self, n: u64, m: u64, x: &GhostElement) -> CategoryElement {
        let cs = self.coded(n, m);
        let mut out = CategoryElement::new();
        for (&l, &c) in x.coeffs() {
            let code = cs.code(l);
            for r in code.refinements() {
                add_into(&mut out, r, c * qi(moebius(r.k / code.k)));
            }
        }
        out
    }

    /// Inverse of `delta`, split by space.
    pub fn delta_inv(&self, x: &CategoryElement) -> BTreeMap<(u64, u64), GhostElement> {
        let mut out: BTreeMap<(u64, u64), GhostElement> = BTreeMap::new();
        for (s, &c) in x {
            let cs = self.coded(s.n, s.m);
            let v = tilde_basis(cs.space(), cs.index(s)).scaled(c);
            let e = out
                .entry((s.n, s.m))
                .or_insert_with(|| GhostElement::zero(cs.space()));
            *e = e.plus(&v);
        }
        out
    }

    /// `epsilon: L -> mu(L) L`.
    pub fn epsilon(&self, x: &CategoryElement) -> CategoryElement {
        x.iter().map(|(s, &c)| (*s, c * mu_coboundary(s))).collect()
    }

    pub fn epsilon_inv(&self, x: &CategoryElement) -> CategoryElement {
        x.iter().map(|(s, &c)| (*s, c / mu_coboundary(s))).collect()
    }

    /// `omega`, using `s = sum over l | k of (l; a, i, b)` underlined.
    pub fn omega(&self, x: &CategoryElement) -> MatrixTuple {
        let mut out = MatrixTuple::new();
        for (s, &c) in x {
            for l in divisors(s.k) {
                let key = MatrixEntry {
                    k: l,
                    row: self.section_index(l, s.n, s.a),
                    col: self.section_index(l, s.m, s.b),
                    unit: reduce_unit(s.i as i64, l),
                };
                add_into(&mut out, key, c);
            }
        }
        out
    }

    /// `omega . epsilon . delta . gamma` on `[G x H / L]`.
    pub fn chain(&self, n: u64, m: u64, l: usize) -> MatrixTuple {
        self.omega(&self.epsilon(&self.delta(n, m, &self.gamma(n, m, l))))
    }

    /// The product in `B^D` of two standard basis elements, as coordinates in
    /// the standard basis of `B(G, K)`; `None` when the middle groups differ.
    pub fn biset_product(
        &self,
        x: (u64, u64, usize),
        y: (u64, u64, usize),
    ) -> Option<(u64, u64, BTreeMap<usize, Q>)> {
        if x.1 != y.0 {
            return None;
        }
        let t = self.triple(x.0, x.1, y.1);
        let p = mackey_product(
            &t,
            &BisetElement::basis(&t.gh, x.2),
            &BisetElement::basis(&t.hk, y.2),
        )
        .expect("spaces come from the triple");
        Some((x.0, y.1, p.coeffs().clone()))
    }

    /// `b(k; i, t, j) = sum over l | k of mu(k/l) (l; a_i, t, a_j)`.
    pub fn matrix_unit_preimage(
        &self,
        k: u64,
        i: usize,
        t: u64,
        j: usize,
    ) -> Result<CategoryElement, CyclicError> {
        if gcd(t, k) != 1 {
            return Err(CyclicError::NotUnit { t, k });
        }
        let (gi, ai) = self.section(k, i)?;
        let (gj, aj) = self.section(k, j)?;
        let mut out = CategoryElement::new();
        for l in divisors(k) {
            let code = CyclicCode::new(gi, gj, l, ai, t, aj)?;
            add_into(&mut out, code, qi(moebius(k / l)));
        }
        Ok(out)
    }

    /// `e_k = sum over i of b(k; i, 1, i)`.
    pub fn central_idempotent(&self, k: u64) -> CategoryElement {
        let mut out = CategoryElement::new();
        for i in 1..=self.n_of(k) {
            let b = self
                .matrix_unit_preimage(k, i, 1, i)
                .expect("valid section");
            sum_into(&mut out, &b, qi(1));
        }
        out
    }

    /// Sum of the identity morphisms `(a; a, 1, a)` of all objects.
    pub fn identity(&self) -> CategoryElement {
        let mut out = CategoryElement::new();
        for &n in &self.orders {
            for a in divisors(n) {
                out.insert(CyclicCode::new(n, n, a, a, 1, a).unwrap(), qi(1));
            }
        }
        out
    }

    /// Every matrix entry position, numbered.
    pub fn matrix_positions(&self) -> BTreeMap<MatrixEntry, usize> {
        let mut out = BTreeMap::new();
        for (&k, v) in &self.sections {
            for row in 1..=v.len() {
                for col in 1..=v.len() {
                    for unit in units_mod(k) {
                        let next = out.len();
                        out.insert(MatrixEntry { k, row, col, unit }, next);
                    }
                }
            }
        }
        out
    }

    pub fn iso_chain(&self, exec: Exec) -> MatrixDecomposition {
        let basis = self.standard_basis();
        let images = exec.map(&basis, |&(n, m, l)| self.chain(n, m, l));
        MatrixDecomposition {
            family: self.orders.clone(),
            components: self.sections.iter().map(|(&k, v)| (k, v.clone())).collect(),
            images: basis
                .into_iter()
                .zip(images)
                .map(|((n, m, l), img)| ((n, m, self.code(n, m, l)), img))
                .collect(),
        }
    }
}

/// Images of the standard basis of `B^D` in the product of matrix rings.
#[derive(Debug, Clone)]
pub struct MatrixDecomposition {
    pub family: Vec<u64>,
    /// `k` with the sections `(|G|, a)` of order `k`.
    pub components: Vec<(u64, Vec<(u64, u64)>)>,
    pub images: BTreeMap<(u64, u64, CyclicCode), MatrixTuple>,
}

impl MatrixDecomposition {
    pub fn image(&self, n: u64, m: u64, code: &CyclicCode) -> &MatrixTuple {
        &self.images[&(n, m, *code)]
    }

    pub fn to_json(&self) -> Value {
        let components = self
            .components
            .iter()
            .map(|(k, secs)| {
                let k = *k;
                let size = secs.len();
                let mut images = Map::new();
                for ((n, m, code), img) in &self.images {
                    let mut matrix = vec![vec![Map::new(); size]; size];
                    let mut any = false;
                    for (e, c) in img.iter().filter(|(e, _)| e.k == k) {
                        matrix[e.row - 1][e.col - 1].insert(e.unit.to_string(), Value::String(format_q(c)));
                        any = true;
                    }
                    if any {
                        let rows: Vec<Value> = matrix
                            .into_iter()
                            .map(|r| Value::Array(r.into_iter().map(Value::Object).collect()))
                            .collect();
                        images.insert(format!("C{n},C{m},{code}"), Value::Array(rows));
                    }
                }
                json!({
                    "k": k,
                    "n": size,
                    "units_mod_k": units_mod(k),
                    "sections": secs.iter().map(|&(g, a)| json!({"group": format!("C{g}"), "a": a})).collect::<Vec<_>>(),
                    "basis_images": images,
                })
            })
            .collect::<Vec<_>>();
        json!({ "family": self.family, "components": components })
    }
}

/// `L~ ~*κ M~ = lambda(L, M) (L * M)~` for every `L <= C_n x C_m`, `M <= C_m x C_q`.
pub fn product_of_hats_check(fam: &CyclicFamily, n: u64, m: u64, q: u64, exec: Exec) -> Report {
    let mut rep = Report::new(format!("product of hats C{n},C{m},C{q}"));
    let t = fam.triple(n, m, q);
    if let Err(e) = t.fill_structure_constants(exec) {
        rep.fail(e.to_string());
        return rep;
    }
    let left: Vec<_> = (0..t.gh.len()).map(|l| tilde_basis(&t.gh, l)).collect();
    let right: Vec<_> = (0..t.hk.len()).map(|l| tilde_basis(&t.hk, l)).collect();
    let results = exec.map_range(t.gh.len() * t.hk.len(), |idx| {
        let (l, mm) = (idx / t.hk.len(), idx % t.hk.len());
        let lhs = ghost_product(&t, &left[l], &right[mm]).expect("same spaces");
        let (cl, cm) = (fam.code(n, m, l), fam.code(m, q, mm));
        let lam = lambda(&cl, &cm);
        let rhs = tilde_basis(&t.gk, t.star(l, mm)).scaled(lam);
        (lhs == rhs, cl, cm)
    });
    for (ok, cl, cm) in results {
        rep.check(ok, || format!("{cl:?} ~* {cm:?}"));
    }
    rep
}

/// `lambda(L, M) = mu(L) mu(M) / mu(L * M)` on every composable pair over the orders.
pub fn coboundary_check(orders: &[u64]) -> Report {
    let mut rep = Report::new("lambda is the coboundary of mu");
    for &n in orders {
        for &m in orders {
            for &q in orders {
                for l in CyclicCode::all(n, m) {
                    for mm in CyclicCode::all(m, q).iter().filter(|c| c.a == l.b) {
                        let lm = star_cyclic(&l, mm).unwrap();
                        let lhs = lambda(&l, mm);
                        let rhs = mu_coboundary(&l) * mu_coboundary(mm) / mu_coboundary(&lm);
                        rep.check(lhs == rhs, || {
                            format!("{l:?}, {mm:?}: lambda {lhs}, mu ratio {rhs}")
                        });
                    }
                }
            }
        }
    }
    rep
}

/// `omega . epsilon . delta . gamma` is a bijective algebra map.
pub fn decomposition_check(fam: &CyclicFamily, exec: Exec) -> Report {
    let mut rep = Report::new(format!("matrix decomposition of {:?}", fam.orders()));
    let (dim, mdim) = (fam.dimension(), fam.matrix_dimension());
    rep.check(dim == mdim, || {
        format!("dim B^D = {dim}, sum n(k)^2 phi(k) = {mdim}")
    });
    rep.note(format!("dimension {dim}"));

    let basis = fam.standard_basis();
    let images = exec.map(&basis, |&(n, m, l)| fam.chain(n, m, l));
    let position: HashMap<(u64, u64, usize), usize> =
        basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();

    let pos = fam.matrix_positions();
    let vectors: Vec<BTreeMap<usize, Q>> = images
        .iter()
        .map(|img| img.iter().map(|(e, &c)| (pos[e], c)).collect())
        .collect();
    let r = linalg::rank(&vectors);
    rep.check(r == dim && r == pos.len(), || {
        format!("rank {r} of {dim} images in {} coordinates", pos.len())
    });

    // identity
    let mut id = MatrixTuple::new();
    for &n in fam.orders() {
        let sp = fam.space(n, n);
        sum_into(
            &mut id,
            &images[position[&(n, n, sp.diagonal_index())]],
            qi(1),
        );
    }
    let expect: MatrixTuple = pos
        .keys()
        .filter(|e| e.row == e.col && e.unit == 1)
        .map(|&e| (e, qi(1)))
        .collect();
    rep.check(id == expect, || {
        "image of the identity is not the identity".into()
    });

    let pairs = basis.len() * basis.len();
    let results = exec.map_range(pairs, |idx| {
        let (x, y) = (basis[idx / basis.len()], basis[idx % basis.len()]);
        let lhs = match fam.biset_product(x, y) {
            None => MatrixTuple::new(),
            Some((n, q, coeffs)) => {
                let mut acc = MatrixTuple::new();
                for (l, c) in coeffs {
                    sum_into(&mut acc, &images[position[&(n, q, l)]], c);
                }
                acc
            }
        };
        let rhs = matrix_product(&images[idx / basis.len()], &images[idx % basis.len()]);
        (lhs == rhs, x, y)
    });
    for (ok, x, y) in results {
        rep.check(ok, || {
            format!(
                "chain not multiplicative on {:?} . {:?}",
                fam.code(x.0, x.1, x.2),
                fam.code(y.0, y.1, y.2)
            )
        });
    }
    rep
}

/// Matrix units `b(k; i, t, j)` and the central idempotents `e_k`.
pub fn matrix_units_check(fam: &CyclicFamily) -> Report {
    let mut rep = Report::new(format!("matrix units of {:?}", fam.orders()));
    let mut units: Vec<(MatrixEntry, CategoryElement)> = Vec::new();
    for k in fam.ks() {
        let nk = fam.n_of(k);
        for i in 1..=nk {
            for j in 1..=nk {
                for t in units_mod(k) {
                    let b = fam.matrix_unit_preimage(k, i, t, j).unwrap();
                    let e = MatrixEntry {
                        k,
                        row: i,
                        col: j,
                        unit: t,
                    };
                    let img = fam.omega(&b);
                    rep.check(img == MatrixTuple::from([(e, qi(1))]), || {
                        format!("omega(b({k};{i},{t},{j})) = {img:?}")
                    });
                    units.push((e, b));
                }
            }
        }
    }
    // b(k;i,t,j) b(k;j',u,l) = [j = j'] b(k;i,tu,l), and 0 across components
    for (e, x) in &units {
        for (f, y) in &units {
            let got = category_product(x, y);
            let want = if e.k == f.k && e.col == f.row {
                let t = reduce_unit((e.unit * f.unit) as i64, e.k);
                fam.matrix_unit_preimage(e.k, e.row, t, f.col).unwrap()
            } else {
                CategoryElement::new()
            };
            rep.check(got == want, || format!("b{e:?} b{f:?}"));
        }
    }

    let idems: Vec<(u64, CategoryElement)> = fam
        .ks()
        .into_iter()
        .map(|k| (k, fam.central_idempotent(k)))
        .collect();
    let mut total = CategoryElement::new();
    for (k, e) in &idems {
        sum_into(&mut total, e, qi(1));
        for (l, f) in &idems {
            let p = category_product(e, f);
            let want = if k == l {
                e.clone()
            } else {
                CategoryElement::new()
            };
            rep.check(p == want, || format!("e_{k} e_{l}"));
        }
        for (_, x) in &units {
            rep.check(category_product(e, x) == category_product(x, e), || {
                format!("e_{k} is not central")
            });
        }
    }
    rep.check(total == fam.identity(), || {
        "sum of e_k is not the identity".into()
    });

    // the same idempotents pulled back to the ghost algebra
    let pull = |x: &CategoryElement| fam.delta_inv(&fam.epsilon_inv(x));
    for (k, e) in &idems {
        let g = pull(e);
        for (l, f) in &idems {
            let h = pull(f);
            let mut prod: BTreeMap<(u64, u64), GhostElement> = BTreeMap::new();
            for (&(a, b), x) in &g {
                for (&(c, d), y) in &h {
                    if b != c {
                        continue;
                    }
                    let t = fam.triple(a, b, d);
                    let z = ghost_product(&t, x, y).expect("structure constants agree");
                    let acc = prod
                        .entry((a, d))
                        .or_insert_with(|| GhostElement::zero(&t.gk));
                    *acc = acc.plus(&z);
                }
            }
            prod.retain(|_, v| !v.is_zero());
            let mut want = if k == l { g.clone() } else { BTreeMap::new() };
            want.retain(|_, v| !v.is_zero());
            rep.check(prod == want, || {
                format!("pulled back e_{k} e_{l} in the ghost algebra")
            });
        }
    }
    rep
}

/// Inverse-category axioms of the sections category, using the subgroup-level star.
pub fn inverse_category_check(fam: &CyclicFamily) -> Report {
    let mut rep = Report::new(format!("inverse category of {:?}", fam.orders()));
    let orders = fam.orders().to_vec();
    let compose = |s: &CyclicCode, t: &CyclicCode| -> CyclicCode {
        let tr = fam.triple(s.n, s.m, t.m);
        let l = fam.coded(s.n, s.m).index(s);
        let m = fam.coded(t.n, t.m).index(t);
        fam.code(s.n, t.m, tr.star(l, m))
    };

    for &n in &orders {
        for &m in &orders {
            for &l in fam.coded(n, m).codes() {
                let op = l.opposite();
                rep.check(compose(&compose(&l, &op), &l) == l, || {
                    format!("L L° L != L for {l:?}")
                });
                rep.check(compose(&compose(&op, &l), &op) == op, || {
                    format!("L° L L° != L° for {l:?}")
                });
                let partners: Vec<CyclicCode> = fam
                    .coded(m, n)
                    .codes()
                    .iter()
                    .filter(|c| c.a == l.b && c.b == l.a)
                    .filter(|c| {
                        compose(&compose(&l, c), &l) == l && compose(&compose(c, &l), c) == **c
                    })
                    .copied()
                    .collect();
                rep.check(partners == [op], || {
                    format!("generalized inverses of {l:?}: {partners:?}")
                });
            }
        }
    }

    let mut idempotents = Vec::new();
    for &n in &orders {
        for &e in fam.coded(n, n).codes().iter().filter(|c| c.a == c.b) {
            let idem = compose(&e, &e) == e;
            rep.check(idem == e.is_idempotent_shape(), || {
                format!("idempotent classification at {e:?}")
            });
            if idem {
                idempotents.push(e);
            }
        }
    }
    for e in &idempotents {
        for f in &idempotents {
            let witness = fam.coded(f.n, e.n).codes().iter().any(|s| {
                s.b == e.a
                    && s.a == f.a
                    && compose(&s.opposite(), s) == *e
                    && compose(s, &s.opposite()) == *f
            });
            rep.check(witness == (e.k == f.k), || {
                format!("equivalence of {e:?} and {f:?}")
            });
        }
        let gamma = fam
            .coded(e.n, e.n)
            .codes()
            .iter()
            .filter(|u| u.a == e.a && u.b == e.a)
            .filter(|u| compose(&u.opposite(), u) == *e && compose(u, &u.opposite()) == *e)
            .count();
        rep.check(gamma as u64 == euler_phi(e.k), || {
            format!("|Gamma_e| = {gamma} for {e:?}")
        });
    }

    // the order below a morphism and its Möbius function
    for &n in &orders {
        for &m in &orders {
            let src: Vec<CyclicCode> = idempotents.iter().filter(|e| e.n == m).copied().collect();
            for &s in fam.coded(n, m).codes() {
                let mut below: Vec<CyclicCode> = src
                    .iter()
                    .filter(|e| e.a == s.b)
                    .map(|e| compose(&s, e))
                    .collect();
                below.sort_unstable();
                below.dedup();
                let mut want: Vec<CyclicCode> =
                    divisors(s.k).into_iter().map(|l| s.with_s(l)).collect();
                want.sort_unstable();
                rep.check(below == want, || {
                    format!("morphisms below {s:?}: {below:?}")
                });
                let leq = |u: &CyclicCode, t: &CyclicCode| {
                    src.iter().any(|e| e.a == t.b && compose(t, e) == *u)
                };
                let poset = FinitePoset::from_fn(below.len(), |i, j| leq(&below[i], &below[j]));
                let top = below.iter().position(|u| *u == s).unwrap();
                for (i, u) in below.iter().enumerate() {
                    let mu = poset.moebius(i, top);
                    rep.check(mu == moebius(s.k / u.k), || {
                        format!("mu({u:?}, {s:?}) = {mu}")
                    });
                }
            }
        }
    }
    rep
}

/// `star_cyclic` against the subgroup-level star, and decode/encode round trips.
pub fn code_consistency_check(fam: &CyclicFamily) -> Report {
    let mut rep = Report::new(format!("codes of {:?}", fam.orders()));
    let orders = fam.orders().to_vec();
    for &n in &orders {
        for &m in &orders {
            let cs = fam.coded(n, m);
            rep.check(cs.codes().len() == CyclicCode::all(n, m).len(), || {
                format!("subgroup count C{n} x C{m}")
            });
            for (l, c) in cs.codes().iter().enumerate() {
                let back = c.decode(cs.space().group()).unwrap();
                rep.check(cs.space().subgroup(l) == &back, || format!("decode {c:?}"));
                let pi = tilde_basis(cs.space(), l);
                let want: BTreeMap<usize, Q> = c
                    .refinements()
                    .iter()
                    .map(|r| (cs.index(r), qi(1)))
                    .collect();
                rep.check(pi.coeffs() == &want, || format!("tilde basis of {c:?}"));
            }
            for &q in &orders {
                let t = fam.triple(n, m, q);
                for (l, cl) in fam.coded(n, m).codes().iter().enumerate() {
                    for (mm, cm) in fam.coded(m, q).codes().iter().enumerate() {
                        if !composable(cl, cm) {
                            continue;
                        }
                        let got = fam.code(n, q, t.star(l, mm));
                        let want = star_cyclic(cl, cm).unwrap();
                        rep.check(got == want, || {
                            format!("{cl:?} * {cm:?}: {got:?} vs {want:?}")
                        });
                    }
                }
            }
        }
    }
    rep
}
