//! The thirteen acceptance checks, each producing a [`Report`] and a wall-clock time.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::burnside::{
    alpha, biset_tensor_oracle, fixed_point_basis, mackey_product, marks, standard_basis, zeta,
    BisetElement, GhostElement,
};
use crate::cyclic::{
    coboundary_check, decomposition_check, inverse_category_check, matrix_units_check,
    product_of_hats_check, CyclicFamily,
};
use crate::ghost::{
    alpha_multiplicative, condensation_check, ghost_product, rho_multiplicative,
    structure_constant_def, structure_constant_thm, structure_row_def,
};
use crate::linalg;
use crate::par::Exec;
use crate::rational::{qi, Q};
use crate::report::Report;
use crate::space::{ProductSpace, Triple, Universe};
use crate::subgroup::SubgroupSet;

const SEED: u64 = 0x5eed_b0c5;

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub budget: Option<Duration>,
    pub run: fn(Exec) -> Report,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub report: Report,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl Outcome {
    pub fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.elapsed <= b)
    }

    pub fn passed(&self) -> bool {
        self.report.passed() && self.within_budget()
    }

    pub fn line(&self) -> String {
        let budget = match self.budget {
            Some(b) if !self.within_budget() => format!(" (over budget {}s)", b.as_secs()),
            _ => String::new(),
        };
        format!(
            "criterion {:>2} {}: {} ({} checks, {} failed, {:.2}s){}",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.report.checked,
            self.report.failed,
            self.elapsed.as_secs_f64(),
            budget
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        Criterion {
            id: 1,
            title: "zeta . alpha = rho, bijectivity",
            budget: secs(10),
            run: diagram,
        },
        Criterion {
            id: 2,
            title: "Mackey formula against the tensor oracle",
            budget: secs(60),
            run: mackey_vs_oracle,
        },
        Criterion {
            id: 3,
            title: "alpha and rho are multiplicative",
            budget: secs(180),
            run: multiplicativity,
        },
        Criterion {
            id: 4,
            title: "two structure-constant evaluators agree",
            budget: None,
            run: evaluators_agree,
        },
        Criterion {
            id: 5,
            title: "support, vanishing and left-free laws on S3",
            budget: None,
            run: support_laws,
        },
        Criterion {
            id: 6,
            title: "kappa is a 2-cocycle",
            budget: None,
            run: cocycle,
        },
        Criterion {
            id: 7,
            title: "condensation by e_G",
            budget: None,
            run: condensation,
        },
        Criterion {
            id: 8,
            title: "index of alpha",
            budget: None,
            run: index_formula,
        },
        Criterion {
            id: 9,
            title: "product of hats",
            budget: secs(120),
            run: hats,
        },
        Criterion {
            id: 10,
            title: "lambda is a coboundary",
            budget: None,
            run: coboundary,
        },
        Criterion {
            id: 11,
            title: "cyclic matrix decomposition",
            budget: secs(180),
            run: decomposition,
        },
        Criterion {
            id: 12,
            title: "matrix units and central idempotents",
            budget: None,
            run: matrix_units,
        },
        Criterion {
            id: 13,
            title: "inverse category axioms",
            budget: None,
            run: inverse_category,
        },
    ]
}

pub fn run_criterion(c: &Criterion, exec: Exec) -> Outcome {
    let start = Instant::now();
    let report = (c.run)(exec);
    Outcome {
        id: c.id,
        title: c.title,
        report,
        elapsed: start.elapsed(),
        budget: c.budget,
    }
}

/// Runs the criteria in order (each one may use `exec` internally).
pub fn run_all(exec: Exec) -> Vec<Outcome> {
    criteria().iter().map(|c| run_criterion(c, exec)).collect()
}

fn group_or_fail(
    rep: &mut Report,
    u: &Universe,
    name: &str,
) -> Option<std::sync::Arc<crate::group::FiniteGroup>> {
    match u.group(name) {
        Ok(g) => Some(g),
        Err(e) => {
            rep.fail(format!("{name}: {e}"));
            None
        }
    }
}

fn coords(x: &GhostElement) -> BTreeMap<usize, Q> {
    x.coeffs().clone()
}

/// `zeta . alpha = rho` on the standard basis, with injectivity and images.
pub fn diagram_on(rep: &mut Report, sp: &std::sync::Arc<ProductSpace>) {
    let label = sp.label();
    let basis = standard_basis(sp);
    let mut a_img = Vec::new();
    let mut r_img = Vec::new();
    for b in &basis {
        let a = alpha(b);
        let r = marks(b);
        rep.check(zeta(&a) == r, || {
            format!("{label}: zeta(alpha) != rho at {b:?}")
        });
        a_img.push(coords(&a));
        r_img.push(coords(&r));
    }
    let fixed: Vec<_> = fixed_point_basis(sp).iter().map(coords).collect();
    let zfixed: Vec<_> = fixed_point_basis(sp)
        .iter()
        .map(|x| coords(&zeta(x)))
        .collect();
    rep.check(linalg::rank(&a_img) == basis.len(), || {
        format!("{label}: alpha not injective")
    });
    rep.check(linalg::same_span(&a_img, &fixed), || {
        format!("{label}: alpha not onto the fixed points")
    });
    rep.check(linalg::rank(&r_img) == basis.len(), || {
        format!("{label}: rho not injective")
    });
    rep.check(linalg::same_span(&r_img, &zfixed), || {
        format!("{label}: rho image is not zeta(fixed points)")
    });
    let all: Vec<_> = (0..sp.len())
        .map(|l| coords(&zeta(&GhostElement::basis(sp, l))))
        .collect();
    rep.check(linalg::rank(&all) == sp.len(), || {
        format!("{label}: zeta not bijective")
    });
}

/// Criterion 1, on `B(G) = B(G, 1)` and on `B(G, G)`.
pub fn diagram(_exec: Exec) -> Report {
    let mut rep = Report::new("diagram");
    let u = Universe::new();
    let Some(one) = group_or_fail(&mut rep, &u, "C1") else {
        return rep;
    };
    for name in ["C4", "C6", "C2xC2", "S3", "D8"] {
        let Some(g) = group_or_fail(&mut rep, &u, name) else {
            continue;
        };
        for h in [&one, &g] {
            match u.space(&g, h) {
                Ok(sp) => diagram_on(&mut rep, &sp),
                Err(e) => rep.fail(format!("{name}: {e}")),
            }
        }
    }
    rep
}

/// Criterion 2.
pub fn mackey_vs_oracle(exec: Exec) -> Report {
    let mut rep = Report::new("mackey vs oracle");
    let u = Universe::new();
    for name in ["C2", "C3", "C4", "C2xC2", "S3"] {
        let Some(g) = group_or_fail(&mut rep, &u, name) else {
            continue;
        };
        let t = u.cube(&g).expect("small group");
        let reps = t.gh.lattice().representatives();
        let results = exec.map_range(reps.len() * reps.len(), |i| {
            let (l, m) = (reps[i / reps.len()], reps[i % reps.len()]);
            let x = mackey_product(
                &t,
                &BisetElement::basis(&t.gh, l),
                &BisetElement::basis(&t.hk, m),
            )
            .unwrap();
            (x == biset_tensor_oracle(&t, l, m), l, m)
        });
        for (ok, l, m) in results {
            rep.check(ok, || format!("{name}: [{l}] . [{m}]"));
        }
    }
    rep
}

/// Criterion 3.
pub fn multiplicativity(exec: Exec) -> Report {
    let mut rep = Report::new("multiplicativity");
    let u = Universe::new();
    for name in ["C2", "C3", "C4", "C6", "S3"] {
        let Some(g) = group_or_fail(&mut rep, &u, name) else {
            continue;
        };
        let t = u.cube(&g).expect("small group");
        if let Err(e) = t.fill_structure_constants(exec) {
            rep.fail(format!("{name}: {e}"));
            continue;
        }
        let basis = standard_basis(&t.gh);
        let results = exec.map_range(basis.len() * basis.len(), |i| {
            let (a, b) = (&basis[i / basis.len()], &basis[i % basis.len()]);
            (
                alpha_multiplicative(&t, a, b).unwrap_or(false),
                rho_multiplicative(&t, a, b).unwrap_or(false),
                i,
            )
        });
        for (ok_a, ok_r, i) in results {
            rep.check(ok_a, || format!("{name}: alpha on pair {i}"));
            rep.check(ok_r, || format!("{name}: rho on pair {i}"));
        }
    }
    rep
}

fn compare_all(rep: &mut Report, t: &Triple, exec: Exec) {
    let (nl, nm, nn) = (t.gh.len(), t.hk.len(), t.gk.len());
    let results = exec.map_range(nl * nm, |i| {
        let (l, m) = (i / nm, i % nm);
        let def = structure_row_def(t, l, m);
        let bad: Vec<usize> = (0..nn)
            .filter(|&n| {
                def.get(&n).copied().unwrap_or_else(|| qi(0)) != structure_constant_thm(t, l, m, n)
            })
            .collect();
        (l, m, bad)
    });
    for (l, m, bad) in results {
        rep.checked += nn - bad.len();
        for n in bad {
            rep.check(false, || format!("{:?}: a^({l},{m})_{n}", t));
        }
    }
}

/// Criterion 4.
pub fn evaluators_agree(exec: Exec) -> Report {
    let mut rep = Report::new("evaluators");
    let u = Universe::new();
    let names = ["C2", "C3", "C4", "C6", "S3"];
    let groups: Vec<_> = names
        .iter()
        .filter_map(|n| group_or_fail(&mut rep, &u, n))
        .collect();
    for g in &groups {
        for h in &groups {
            for k in &groups {
                if g.order() * h.order() > 36 || h.order() * k.order() > 36 {
                    continue;
                }
                let t = u.triple(g, h, k).expect("small groups");
                compare_all(&mut rep, &t, exec);
            }
        }
    }
    let Some(d8) = group_or_fail(&mut rep, &u, "D8") else {
        return rep;
    };
    let t = u.cube(&d8).expect("order 64");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    // a third uniform; the rest composable with N admissible, where constants can be nonzero
    let samples: Vec<(usize, usize, usize)> = (0..10_000)
        .map(|i| {
            let l = rng.gen_range(0..t.gh.len());
            if i % 3 == 0 {
                return (
                    l,
                    rng.gen_range(0..t.hk.len()),
                    rng.gen_range(0..t.gk.len()),
                );
            }
            let sl = t.gh.shape(l);
            let ms: Vec<usize> = (0..t.hk.len())
                .filter(|&m| t.hk.shape(m).p1 == sl.p2)
                .collect();
            let m = ms[rng.gen_range(0..ms.len())];
            let sm = t.hk.shape(m);
            let below: Vec<usize> = t.gk.lattice().below(t.star(l, m)).collect();
            let admissible: Vec<usize> = below
                .iter()
                .copied()
                .filter(|&n| t.gk.shape(n).p1 == sl.p1 && t.gk.shape(n).p2 == sm.p2)
                .collect();
            let pool = if admissible.is_empty() {
                &below
            } else {
                &admissible
            };
            (l, m, pool[rng.gen_range(0..pool.len())])
        })
        .collect();
    let results = exec.map(&samples, |&(l, m, n)| {
        let def = structure_constant_def(&t, l, m, n);
        (
            def == structure_constant_thm(&t, l, m, n),
            def != qi(0),
            l,
            m,
            n,
        )
    });
    let nonzero = results.iter().filter(|r| r.1).count();
    for (ok, _, l, m, n) in results {
        rep.check(ok, || format!("D8: a^({l},{m})_{n}"));
    }
    rep.note(format!("{nonzero} of the D8 samples are nonzero"));
    rep
}

/// Criterion 5.
pub fn support_laws(exec: Exec) -> Report {
    let mut rep = Report::new("support laws");
    let u = Universe::new();
    let Some(s3) = group_or_fail(&mut rep, &u, "S3") else {
        return rep;
    };
    let t = u.cube(&s3).expect("order 36");
    if let Err(e) = t.fill_structure_constants(exec) {
        rep.fail(e.to_string());
        return rep;
    }
    let trivial =
        t.gh.left_lattice()
            .index_of(&SubgroupSet::trivial(&s3))
            .expect("trivial subgroup") as u32;
    let h = qi(s3.order() as i64);
    for l in 0..t.gh.len() {
        for m in 0..t.hk.len() {
            let x = ghost_product(
                &t,
                &GhostElement::basis(&t.gh, l),
                &GhostElement::basis(&t.hk, m),
            )
            .unwrap();
            let (sl, sm) = (t.gh.shape(l), t.hk.shape(m));
            for &n in x.coeffs().keys() {
                let sn = t.gk.shape(n);
                rep.check(sn.p1 == sl.p1 && sn.p2 == sm.p2, || {
                    format!("support of {l} ~* {m} at {n}")
                });
                rep.check(t.gk.lattice().poset().leq(n, t.star(l, m)), || {
                    format!("{n} not below {l} * {m}")
                });
            }
            if !t.composable(l, m) {
                rep.check(x.is_zero(), || format!("{l} ~* {m} should vanish"));
            }
            let left_free = sl.k1 == trivial && sm.k1 == trivial;
            let right_free = sl.k2 == trivial && sm.k2 == trivial;
            if left_free || right_free {
                let want = if t.composable(l, m) {
                    GhostElement::from_terms(&t.gk, [(t.star(l, m), qi(1) / h)])
                } else {
                    GhostElement::zero(&t.gk)
                };
                rep.check(x == want, || format!("free formula for {l} ~* {m}"));
            }
        }
    }
    rep
}

fn cocycle_holds(
    t1: &Triple,
    t2: &Triple,
    t3: &Triple,
    t4: &Triple,
    l: usize,
    m: usize,
    n: usize,
) -> bool {
    // t1 = (G,H,K), t2 = (G,K,I), t3 = (H,K,I), t4 = (G,H,I)
    let lm = t1.star(l, m);
    let mn = t3.star(m, n);
    let lhs = t1.kappa(l, m) * t2.kappa(lm, n);
    let rhs = t4.kappa(l, mn) * t3.kappa(m, n);
    lhs == rhs && t2.star(lm, n) == t4.star(l, mn)
}

/// The cocycle relation on a cube, on every triple of subgroups or on
/// `samples` seeded random ones.
pub fn cocycle_on(t: &Triple, samples: Option<usize>, exec: Exec) -> Report {
    let label = t.gh.left().label().to_string();
    let mut rep = Report::new(format!("cocycle {label}"));
    let n = t.gh.len();
    let triples: Vec<(usize, usize, usize)> = match samples {
        None => (0..n * n * n)
            .map(|i| (i / (n * n), (i / n) % n, i % n))
            .collect(),
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
            (0..s)
                .map(|_| {
                    (
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                    )
                })
                .collect()
        }
    };
    let results = exec.map(&triples, |&(l, m, k)| {
        (cocycle_holds(t, t, t, t, l, m, k), l, m, k)
    });
    for (ok, l, m, k) in results {
        rep.check(ok, || format!("{label}: ({l}, {m}, {k})"));
    }
    rep
}

/// Criterion 6.
pub fn cocycle(exec: Exec) -> Report {
    let mut rep = Report::new("cocycle");
    let u = Universe::new();
    for (name, samples) in [("C6", None), ("S3", Some(10_000usize))] {
        let Some(g) = group_or_fail(&mut rep, &u, name) else {
            continue;
        };
        let t = u.cube(&g).expect("order 36");
        let sub = cocycle_on(&t, samples, exec);
        rep.checked += sub.checked;
        rep.failed += sub.failed;
        rep.failures.extend(sub.failures);
    }
    rep
}

/// Criterion 7.
pub fn condensation(_exec: Exec) -> Report {
    let mut rep = Report::new("condensation");
    let u = Universe::new();
    let names = ["C4", "S3"];
    for a in names {
        for b in names {
            let (Some(g), Some(h)) = (
                group_or_fail(&mut rep, &u, a),
                group_or_fail(&mut rep, &u, b),
            ) else {
                continue;
            };
            match condensation_check(&u, &g, &h) {
                Ok(r) => {
                    rep.checked += 1;
                    rep.note(format!("{a},{b}: dimension {}", r.dimension));
                    for f in r.failures {
                        rep.fail(format!("{a},{b}: {f}"));
                    }
                }
                Err(e) => rep.fail(format!("{a},{b}: {e}")),
            }
        }
    }
    rep
}

/// Criterion 8: `det` of `alpha` from `[G/U]` to `[U]^+` is `prod [N_G(U) : U]`.
pub fn index_formula(_exec: Exec) -> Report {
    let mut rep = Report::new("index");
    let u = Universe::new();
    let Some(one) = group_or_fail(&mut rep, &u, "C1") else {
        return rep;
    };
    for name in ["C6", "S3", "D8"] {
        let Some(g) = group_or_fail(&mut rep, &u, name) else {
            continue;
        };
        let sp = u.space(&g, &one).expect("small group");
        let lat = sp.lattice();
        let reps = lat.representatives();
        let matrix: Vec<Vec<Q>> = reps
            .iter()
            .map(|&r| {
                let a = alpha(&BisetElement::basis(&sp, r));
                reps.iter().map(|&s| a.coeff(s)).collect()
            })
            .collect();
        let det = linalg::determinant(&matrix);
        let product: i64 = reps
            .iter()
            .map(|&r| {
                let s = lat.get(r);
                (s.normalizer(sp.group()).order() / s.order()) as i64
            })
            .product();
        let want = crate::rational::to_big(&qi(product));
        rep.check(det == want || det == -want.clone(), || {
            format!("{name}: det {det}, product {product}")
        });
        rep.note(format!("{name}: index {product}"));
    }
    rep
}

const DIVISORS_12: [u64; 6] = [1, 2, 3, 4, 6, 12];

/// Criterion 9.
pub fn hats(exec: Exec) -> Report {
    let mut rep = Report::new("hats");
    let fam = match CyclicFamily::new(&DIVISORS_12) {
        Ok(f) => f,
        Err(e) => {
            rep.fail(e.to_string());
            return rep;
        }
    };
    for n in DIVISORS_12 {
        for m in DIVISORS_12 {
            for q in DIVISORS_12 {
                rep.absorb(product_of_hats_check(&fam, n, m, q, exec));
            }
        }
    }
    rep
}

/// Criterion 10.
pub fn coboundary(_exec: Exec) -> Report {
    coboundary_check(&DIVISORS_12)
}

/// Criterion 11.
pub fn decomposition(exec: Exec) -> Report {
    let mut rep = Report::new("decomposition");
    for fam in [&[12u64][..], &[4, 6]] {
        match CyclicFamily::new(fam) {
            Ok(f) => rep.absorb(decomposition_check(&f, exec)),
            Err(e) => rep.fail(e.to_string()),
        }
    }
    rep
}

/// Criterion 12.
pub fn matrix_units(_exec: Exec) -> Report {
    match CyclicFamily::new(&[12]) {
        Ok(f) => matrix_units_check(&f),
        Err(e) => {
            let mut rep = Report::new("matrix units");
            rep.fail(e.to_string());
            rep
        }
    }
}

/// Criterion 13.
pub fn inverse_category(_exec: Exec) -> Report {
    match CyclicFamily::new(&[1, 2, 3, 6]) {
        Ok(f) => inverse_category_check(&f),
        Err(e) => {
            let mut rep = Report::new("inverse category");
            rep.fail(e.to_string());
            rep
        }
    }
}
