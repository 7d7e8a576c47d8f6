//! Finite groups given by Cayley tables.

use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use crate::lattice::SubgroupLattice;

/// Default bound on the order of groups whose subgroups are enumerated.
pub const DEFAULT_MAX_ORDER: usize = 120;

/// Environment variable overriding [`DEFAULT_MAX_ORDER`].
pub const MAX_ORDER_ENV: &str = "GHOST_MAX_ORDER";

pub fn configured_max_order() -> usize {
    std::env::var(MAX_ORDER_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

#[derive(Debug, thiserror::Error)]
pub enum GroupError {
    #[error("cayley table line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: u32, b: u32, c: u32 },
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(u32),
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    TooLarge { order: usize, bound: usize },
    #[error("unsupported group: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
    label: String,
    factors: Option<(Arc<FiniteGroup>, Arc<FiniteGroup>)>,
    lattice: OnceLock<SubgroupLattice>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major Cayley table, checking the axioms.
    pub fn from_table(
        label: impl Into<String>,
        order: usize,
        table: Vec<u32>,
    ) -> Result<Self, GroupError> {
        if order == 0 || table.len() != order * order {
            return Err(GroupError::Malformed {
                line: 1,
                message: format!("expected {}x{} entries", order, order),
            });
        }
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= order) {
            return Err(GroupError::Malformed {
                line: 0,
                message: format!("entry {bad} out of range"),
            });
        }
        let at = |a: u32, b: u32| table[a as usize * order + b as usize];
        let identity = (0..order as u32)
            .find(|&e| (0..order as u32).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(order);
        for x in 0..order as u32 {
            let inv = (0..order as u32)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or(GroupError::NoInverse(x))?;
            inverse.push(inv);
        }
        for a in 0..order as u32 {
            for b in 0..order as u32 {
                let ab = at(a, b);
                for c in 0..order as u32 {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(Self::trusted(
            label.into(),
            order,
            table,
            identity,
            inverse,
            None,
        ))
    }

    fn trusted(
        label: String,
        order: usize,
        table: Vec<u32>,
        identity: u32,
        inverse: Vec<u32>,
        factors: Option<(Arc<FiniteGroup>, Arc<FiniteGroup>)>,
    ) -> Self {
        FiniteGroup {
            order,
            table,
            identity,
            inverse,
            label,
            factors,
            lattice: OnceLock::new(),
        }
    }

    /// Cyclic group of order `n`; element `i` is `i mod n`, the generator is `1`.
    pub fn cyclic(n: usize) -> Arc<Self> {
        assert!(n >= 1, "cyclic group of order zero");
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        let inverse = (0..n).map(|a| ((n - a) % n) as u32).collect();
        Arc::new(Self::trusted(format!("C{n}"), n, table, 0, inverse, None))
    }

    /// Dihedral group of the given (even) order; element `j*n + i` is `r^i s^j`.
    pub fn dihedral(order: usize) -> Result<Arc<Self>, GroupError> {
        if order < 2 || !order.is_multiple_of(2) {
            return Err(GroupError::Unsupported(format!(
                "dihedral group of order {order}"
            )));
        }
        let n = order / 2;
        let mul = |x: usize, y: usize| {
            let (a, b) = (x % n, x / n);
            let (c, d) = (y % n, y / n);
            let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
            ((b + d) % 2) * n + rot
        };
        let table: Vec<u32> = (0..order)
            .flat_map(|x| (0..order).map(move |y| mul(x, y) as u32))
            .collect();
        let inverse = (0..order)
            .map(|x| (0..order).find(|&y| mul(x, y) == 0).unwrap() as u32)
            .collect();
        Ok(Arc::new(Self::trusted(
            format!("D{order}"),
            order,
            table,
            0,
            inverse,
            None,
        )))
    }

    /// Symmetric group on `n <= 5` points; elements are permutations in
    /// lexicographic order, so element `0` is the identity.
    pub fn symmetric(n: usize) -> Result<Arc<Self>, GroupError> {
        if n == 0 || n > 5 {
            return Err(GroupError::Unsupported(format!("S{n}")));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        perms.sort();
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let order = perms.len();
        let mut table = Vec::with_capacity(order * order);
        for s in &perms {
            for t in &perms {
                // (st)(x) = s(t(x))
                let st: Vec<usize> = (0..n).map(|x| s[t[x]]).collect();
                table.push(index(&st) as u32);
            }
        }
        let inverse = perms
            .iter()
            .map(|s| {
                let mut inv = vec![0; n];
                for (x, &y) in s.iter().enumerate() {
                    inv[y] = x;
                }
                index(&inv) as u32
            })
            .collect();
        Ok(Arc::new(Self::trusted(
            format!("S{n}"),
            order,
            table,
            0,
            inverse,
            None,
        )))
    }

    /// Parses the whitespace-separated Cayley file format: the order on the
    /// first line, then one row per element.
    pub fn parse_cayley(label: impl Into<String>, text: &str) -> Result<Self, GroupError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(GroupError::Malformed {
            line: 1,
            message: "empty file".into(),
        })?;
        let order: usize = first.trim().parse().map_err(|_| GroupError::Malformed {
            line: 1,
            message: format!("expected group order, found {:?}", first.trim()),
        })?;
        let mut table = Vec::with_capacity(order * order);
        let mut rows = 0;
        for (ln, line) in lines {
            let row: Result<Vec<u32>, _> = line.split_whitespace().map(str::parse).collect();
            let row = row.map_err(|_| GroupError::Malformed {
                line: ln + 1,
                message: "non-integer entry".into(),
            })?;
            if row.len() != order {
                return Err(GroupError::Malformed {
                    line: ln + 1,
                    message: format!("expected {order} entries, found {}", row.len()),
                });
            }
            table.extend(row);
            rows += 1;
        }
        if rows != order {
            return Err(GroupError::Malformed {
                line: rows + 2,
                message: format!("expected {order} rows, found {rows}"),
            });
        }
        Self::from_table(label, order, table)
    }

    pub fn from_cayley_file(path: &Path) -> Result<Arc<Self>, GroupError> {
        let text = std::fs::read_to_string(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "G".into());
        Ok(Arc::new(Self::parse_cayley(label, &text)?))
    }

    /// Direct product `G x H`; the pair `(g, h)` is element `g*|H| + h`.
    pub fn direct_product(g: &Arc<Self>, h: &Arc<Self>) -> Arc<Self> {
        let (n, m) = (g.order, h.order);
        let order = n * m;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (x1, x2) = (x / m, x % m);
            for y in 0..order {
                let (y1, y2) = (y / m, y % m);
                let z1 = g.mul(x1 as u32, y1 as u32) as usize;
                let z2 = h.mul(x2 as u32, y2 as u32) as usize;
                table.push((z1 * m + z2) as u32);
            }
        }
        let identity = g.identity * m as u32 + h.identity;
        let inverse = (0..order)
            .map(|x| g.inv((x / m) as u32) * m as u32 + h.inv((x % m) as u32))
            .collect();
        Arc::new(Self::trusted(
            format!("{}x{}", g.label, h.label),
            order,
            table,
            identity,
            inverse,
            Some((g.clone(), h.clone())),
        ))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    #[inline]
    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    /// `g x g^-1`
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn factors(&self) -> Option<(&Arc<FiniteGroup>, &Arc<FiniteGroup>)> {
        self.factors.as_ref().map(|(a, b)| (a, b))
    }

    /// Splits a direct-product element into its components.
    pub fn split(&self, x: u32) -> (u32, u32) {
        let (_, h) = self.factors().expect("not a direct product");
        let m = h.order() as u32;
        (x / m, x % m)
    }

    pub fn pair(&self, g: u32, h: u32) -> u32 {
        let (_, hh) = self.factors().expect("not a direct product");
        g * hh.order() as u32 + h
    }

    /// Same order, identity and multiplication table.
    pub fn same_as(&self, other: &FiniteGroup) -> bool {
        std::ptr::eq(self, other)
            || (self.order == other.order
                && self.identity == other.identity
                && self.table == other.table)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u32)
            .all(|a| (0..self.order as u32).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, x: u32) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|x| self.element_order(x))
            .fold(1, num_integer::lcm)
    }

    /// The subgroup lattice, enumerated on first use under the configured bound.
    pub fn subgroups(&self) -> Result<&SubgroupLattice, GroupError> {
        self.subgroups_bounded(configured_max_order())
    }

    pub fn subgroups_bounded(&self, bound: usize) -> Result<&SubgroupLattice, GroupError> {
        if let Some(l) = self.lattice.get() {
            return Ok(l);
        }
        if self.order > bound {
            return Err(GroupError::TooLarge {
                order: self.order,
                bound,
            });
        }
        Ok(self
            .lattice
            .get_or_init(|| SubgroupLattice::enumerate(self)))
    }

    /// Installs a lattice computed by other means (for example from closed-form
    /// subgroup lists). Returns `false` if one was already cached.
    pub fn install_lattice(&self, lattice: SubgroupLattice) -> bool {
        self.lattice.set(lattice).is_ok()
    }

    pub fn has_lattice(&self) -> bool {
        self.lattice.get().is_some()
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups() {
        let c1 = FiniteGroup::cyclic(1);
        assert_eq!(c1.order(), 1);
        let c6 = FiniteGroup::cyclic(6);
        assert_eq!(c6.element_order(1), 6);
        let c4 = FiniteGroup::cyclic(4);
        assert_eq!(c4.inv(3), 1);
    }

    #[test]
    fn small_nonabelian_groups() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let d8 = FiniteGroup::dihedral(8).unwrap();
        assert_eq!(d8.order(), 8);
        assert!(!d8.is_abelian());
        assert_eq!(FiniteGroup::symmetric(4).unwrap().order(), 24);
        // the built-in tables satisfy the axioms
        for g in [&s3, &d8] {
            let t: Vec<u32> = (0..g.order() as u32)
                .flat_map(|a| (0..g.order() as u32).map(move |b| (a, b)))
                .map(|(a, b)| g.mul(a, b))
                .collect();
            FiniteGroup::from_table("copy", g.order(), t).unwrap();
        }
    }

    #[test]
    fn direct_products() {
        let c2 = FiniteGroup::cyclic(2);
        let c3 = FiniteGroup::cyclic(3);
        let v4 = FiniteGroup::direct_product(&c2, &c2);
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.exponent(), 2);
        let c6 = FiniteGroup::direct_product(&c2, &c3);
        assert_eq!(c6.exponent(), 6);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let s3s3 = FiniteGroup::direct_product(&s3, &s3);
        assert_eq!(s3s3.order(), 36);
        let x = s3s3.pair(4, 5);
        assert_eq!(s3s3.split(x), (4, 5));
    }

    #[test]
    fn cayley_validation_names_the_failing_triple() {
        // x*y = x - y mod 3 is not associative
        let text = "3\n0 2 1\n1 0 2\n2 1 0\n";
        match FiniteGroup::parse_cayley("bad", text) {
            Err(GroupError::NoIdentity) => {}
            other => panic!("unexpected {other:?}"),
        }
        // a quasigroup with identity 0 that is not associative
        let text = "5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n";
        match FiniteGroup::parse_cayley("bad", text) {
            Err(GroupError::NotAssociative { a, b, c }) => {
                let g: Vec<Vec<u32>> = text
                    .lines()
                    .skip(1)
                    .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
                    .collect();
                let m = |x: u32, y: u32| g[x as usize][y as usize];
                assert_ne!(m(m(a, b), c), m(a, m(b, c)));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            FiniteGroup::parse_cayley("short", "2\n0 1\n"),
            Err(GroupError::Malformed { .. })
        ));
        let ok = FiniteGroup::parse_cayley("c3", "3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
        assert_eq!(ok.identity(), 0);
    }
}
