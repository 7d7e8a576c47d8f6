//! Exact rank, determinant and span comparison over the rationals.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::rational::{to_big, Q};

/// Sparse row vectors in row-echelon form, keyed by pivot column.
#[derive(Debug, Default, Clone)]
pub struct EchelonBasis {
    rows: BTreeMap<usize, BTreeMap<usize, BigRational>>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &BTreeMap<usize, BigRational>) -> BTreeMap<usize, BigRational> {
        let mut v = v.clone();
        loop {
            let Some((&col, coef)) = v.iter().find(|(c, _)| self.rows.contains_key(c)) else {
                return v;
            };
            let coef = coef.clone();
            for (&c, x) in &self.rows[&col] {
                let e = v.entry(c).or_insert_with(BigRational::zero);
                *e -= &coef * x;
                if e.is_zero() {
                    v.remove(&c);
                }
            }
        }
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &BTreeMap<usize, Q>) -> bool {
        let big = v
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(&k, x)| (k, to_big(x)))
            .collect();
        self.insert_big(big)
    }

    fn insert_big(&mut self, v: BTreeMap<usize, BigRational>) -> bool {
        let mut r = self.reduce(&v);
        let Some((&pivot, lead)) = r.iter().next() else {
            return false;
        };
        let inv = BigRational::one() / lead.clone();
        for x in r.values_mut() {
            *x *= &inv;
        }
        // keep rows fully reduced against the new pivot
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                for (&k, x) in &r {
                    let e = row.entry(k).or_insert_with(BigRational::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        row.remove(&k);
                    }
                }
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    pub fn contains(&self, v: &BTreeMap<usize, Q>) -> bool {
        let big = v
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(&k, x)| (k, to_big(x)))
            .collect();
        self.reduce(&big).is_empty()
    }
}

pub fn rank<'a>(vectors: impl IntoIterator<Item = &'a BTreeMap<usize, Q>>) -> usize {
    let mut b = EchelonBasis::new();
    for v in vectors {
        b.insert(v);
    }
    b.rank()
}

/// Whether two families span the same subspace.
pub fn same_span(a: &[BTreeMap<usize, Q>], b: &[BTreeMap<usize, Q>]) -> bool {
    let mut ea = EchelonBasis::new();
    for v in a {
        ea.insert(v);
    }
    let mut eb = EchelonBasis::new();
    for v in b {
        eb.insert(v);
    }
    ea.rank() == eb.rank() && b.iter().all(|v| ea.contains(v))
}

/// Determinant of a dense square matrix by Gaussian elimination.
pub fn determinant(m: &[Vec<Q>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "matrix is not square");
            r.iter().map(to_big).collect()
        })
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        let (upper, lower) = a.split_at_mut(col + 1);
        let prow = &upper[col];
        for row in lower {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot;
            for (x, p) in row[col..].iter_mut().zip(&prow[col..]) {
                *x -= &f * p;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn v(xs: &[(usize, Q)]) -> BTreeMap<usize, Q> {
        xs.iter().copied().collect()
    }

    #[test]
    fn rank_and_span() {
        let a = [
            v(&[(0, qi(1)), (1, qi(2))]),
            v(&[(1, qi(1))]),
            v(&[(0, qi(2)), (1, qi(3))]),
        ];
        assert_eq!(rank(&a), 2);
        let b = [v(&[(0, qi(1))]), v(&[(1, q(1, 3))])];
        assert!(same_span(&a, &b));
        let c = [v(&[(0, qi(1))]), v(&[(2, qi(1))])];
        assert!(!same_span(&a, &c));
    }

    #[test]
    fn determinants() {
        let m = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        assert_eq!(determinant(&m), to_big(&qi(5)));
        let m = vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]];
        assert_eq!(determinant(&m), to_big(&qi(-1)));
        let m = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert!(determinant(&m).is_zero());
    }
}
