use std::collections::BTreeMap;

use dbr_core::arith::divisors;
use dbr_core::cyclic::{
    composable, lambda, lambda_p, mu_coboundary, product_of_hats_check, star_cyclic, tilde_basis,
    CyclicCode, CyclicFamily, MatrixEntry, MatrixTuple,
};
use dbr_core::goursat::star;
use dbr_core::group::FiniteGroup;
use dbr_core::par::Exec;
use dbr_core::rational::{q, qi, Q};
use dbr_core::subgroup::SubgroupSet;

fn code(n: u64, m: u64, k: u64, a: u64, i: u64, b: u64) -> CyclicCode {
    CyclicCode::new(n, m, k, a, i, b).unwrap()
}

fn phi(n: u64) -> u64 {
    (1..=n).filter(|&x| num_integer::gcd(x, n) == 1).count() as u64
}

#[test]
fn encode_decode_round_trip() {
    for n in divisors(12) {
        for m in divisors(12) {
            let g = FiniteGroup::direct_product(
                &FiniteGroup::cyclic(n as usize),
                &FiniteGroup::cyclic(m as usize),
            );
            let mut seen = std::collections::BTreeSet::new();
            for c in CyclicCode::all(n, m) {
                let s = c.decode(&g).unwrap();
                assert_eq!(s.order() as u64, c.order());
                assert_eq!(CyclicCode::encode(&g, &s).unwrap(), c);
                assert!(seen.insert(s.elements().to_vec()));
            }
            assert_eq!(
                CyclicCode::encode(&g, &SubgroupSet::trivial(&g)).unwrap(),
                code(n, m, 1, 1, 1, 1)
            );
            assert_eq!(
                CyclicCode::encode(&g, &SubgroupSet::whole(&g)).unwrap(),
                code(n, m, 1, n, 1, m)
            );
            if n == m {
                let diag =
                    SubgroupSet::from_elements(&g, (0..n as u32).map(|x| g.pair(x, x))).unwrap();
                assert_eq!(
                    CyclicCode::encode(&g, &diag).unwrap(),
                    code(n, n, n, n, 1, n)
                );
            }
        }
    }
    let s3 = dbr_core::names::parse_group("S3xC2").unwrap();
    assert!(CyclicCode::encode(&s3, &SubgroupSet::whole(&s3)).is_err());
}

#[test]
fn star_of_codes_matches_subgroup_star() {
    assert_eq!(
        star_cyclic(&code(4, 4, 2, 4, 1, 2), &code(4, 4, 2, 2, 1, 4)).unwrap(),
        code(4, 4, 2, 4, 1, 4)
    );
    assert_eq!(
        star_cyclic(&code(6, 6, 2, 6, 1, 6), &code(6, 6, 3, 6, 2, 6)).unwrap(),
        code(6, 6, 1, 6, 1, 6)
    );
    let cyc = |n: u64| FiniteGroup::cyclic(n as usize);
    for n in [2u64, 4, 6] {
        for m in [2u64, 3, 6] {
            for p in [3u64, 4] {
                let (gh, hk, gk) = (
                    FiniteGroup::direct_product(&cyc(n), &cyc(m)),
                    FiniteGroup::direct_product(&cyc(m), &cyc(p)),
                    FiniteGroup::direct_product(&cyc(n), &cyc(p)),
                );
                for x in CyclicCode::all(n, m) {
                    for y in CyclicCode::all(m, p)
                        .into_iter()
                        .filter(|y| composable(&x, y))
                    {
                        let s = star(
                            &gh,
                            &hk,
                            &gk,
                            &x.decode(&gh).unwrap(),
                            &y.decode(&hk).unwrap(),
                        )
                        .unwrap();
                        assert_eq!(
                            CyclicCode::encode(&gk, &s).unwrap(),
                            star_cyclic(&x, &y).unwrap()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn tilde_basis_sizes() {
    for p in [2u64, 3, 5] {
        let fam = CyclicFamily::new(&[p]).unwrap();
        let cs = fam.coded(p, p);
        let whole = cs.index(&code(p, p, 1, p, 1, p));
        assert_eq!(tilde_basis(cs.space(), whole).coeffs().len() as u64, p);
        let diag = cs.space().diagonal_index();
        assert_eq!(
            tilde_basis(cs.space(), diag)
                .coeffs()
                .keys()
                .collect::<Vec<_>>(),
            [&diag]
        );
        let trivial = cs.index(&code(p, p, 1, 1, 1, 1));
        assert_eq!(tilde_basis(cs.space(), trivial).coeffs().len(), 1);
    }
}

#[test]
fn lambda_and_mu_examples() {
    for n in [2u64, 4, 6, 12] {
        assert_eq!(mu_coboundary(&code(n, n, n, n, 1, n)), q(1, n as i64));
        assert_eq!(
            mu_coboundary(&code(n, n, 1, n, 1, n)),
            q(phi(n) as i64, n as i64)
        );
        // graphs of automorphisms compose with lambda = 1/n
        for i in (1..n).filter(|&i| num_integer::gcd(i, n) == 1) {
            let g = code(n, n, n, n, i, n);
            assert_eq!(lambda(&g, &g), q(1, n as i64));
        }
    }
    for p in [2u64, 3, 7] {
        let l = code(p, p, 1, p, 1, p);
        assert_eq!(lambda_p(&l, &l, p), q(p as i64 - 1, p as i64));
    }
    assert_eq!(
        lambda(&code(4, 4, 1, 4, 1, 2), &code(4, 4, 1, 4, 1, 4)),
        qi(0)
    );
    // lambda is the coboundary of mu
    let all: Vec<_> = divisors(12)
        .into_iter()
        .flat_map(|n| divisors(12).into_iter().map(move |m| (n, m)))
        .collect();
    let mut pairs = 0;
    for &(n, m) in &all {
        for x in CyclicCode::all(n, m) {
            for k in divisors(12) {
                for y in CyclicCode::all(m, k)
                    .into_iter()
                    .filter(|y| composable(&x, y))
                {
                    let xy = star_cyclic(&x, &y).unwrap();
                    assert_eq!(
                        lambda(&x, &y),
                        mu_coboundary(&x) * mu_coboundary(&y) / mu_coboundary(&xy)
                    );
                    pairs += 1;
                }
            }
        }
    }
    assert!(pairs > 1000);
}

#[test]
fn product_of_hats_small() {
    for (orders, (n, m, q)) in [
        (&[2u64][..], (2, 2, 2)),
        (&[6], (6, 6, 6)),
        (&[2, 3, 6], (2, 6, 3)),
    ] {
        let fam = CyclicFamily::new(orders).unwrap();
        let rep = product_of_hats_check(&fam, n, m, q, Exec::Sequential);
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.checked > 0);
    }
}

#[test]
fn decomposition_dimensions_and_identity() {
    let fam = CyclicFamily::new(&[2]).unwrap();
    assert_eq!((fam.dimension(), fam.matrix_dimension()), (5, 5));
    assert_eq!((fam.n_of(1), fam.n_of(2)), (2, 1));
    let fam = CyclicFamily::new(&[12]).unwrap();
    let expect: u64 = divisors(12)
        .into_iter()
        .map(|k| (divisors(12 / k).len() as u64).pow(2) * phi(k))
        .sum();
    assert_eq!(fam.dimension() as u64, expect);
    assert_eq!(fam.matrix_dimension() as u64, expect);

    for orders in [&[12u64][..], &[2, 3]] {
        let fam = CyclicFamily::new(orders).unwrap();
        let mut image = MatrixTuple::new();
        for &n in orders {
            let d = fam.space(n, n).diagonal_index();
            for (e, c) in fam.chain(n, n, d) {
                *image.entry(e).or_insert(qi(0)) += c;
            }
        }
        image.retain(|_, c| *c != qi(0));
        let mut want: BTreeMap<MatrixEntry, Q> = BTreeMap::new();
        for k in fam.ks() {
            for row in 1..=fam.n_of(k) {
                want.insert(
                    MatrixEntry {
                        k,
                        row,
                        col: row,
                        unit: 1,
                    },
                    qi(1),
                );
            }
        }
        assert_eq!(image, want, "{orders:?}");
        assert_eq!(fam.omega(&fam.identity()), want);
    }
}
