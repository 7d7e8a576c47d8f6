use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use dbr_core::burnside::{mackey_product, standard_basis};
use dbr_core::cyclic::{product_of_hats_check, CyclicFamily};
use dbr_core::par::Exec;
use dbr_core::space::{Triple, Universe};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn fresh_cube(name: &str) -> Arc<Triple> {
    let u = Universe::new();
    u.cube(&u.group(name).unwrap()).unwrap()
}

fn mackey_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("mackey_table");
    group.sample_size(10);
    for name in ["S3", "D8"] {
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), &exec, |b, &exec| {
                b.iter_batched(
                    || fresh_cube(name),
                    |t| {
                        let basis = standard_basis(&t.gh);
                        let pairs: Vec<_> = basis
                            .iter()
                            .flat_map(|x| basis.iter().map(move |y| (x, y)))
                            .collect();
                        exec.map(&pairs, |(x, y)| {
                            mackey_product(&t, x, y).unwrap().coeffs().len()
                        })
                    },
                    BatchSize::PerIteration,
                )
            });
        }
    }
    group.finish();
}

fn structure_constants(c: &mut Criterion) {
    let mut group = c.benchmark_group("structure_constants");
    group.sample_size(10);
    for name in ["C6", "S3", "C2xC2"] {
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), &exec, |b, &exec| {
                b.iter_batched(
                    || fresh_cube(name),
                    |t| {
                        t.fill_structure_constants(exec).unwrap();
                        black_box(t.structure_constants().filled())
                    },
                    BatchSize::PerIteration,
                )
            });
        }
    }
    group.finish();
}

fn hats(c: &mut Criterion) {
    let mut group = c.benchmark_group("product_of_hats");
    group.sample_size(10);
    for (mode, exec) in MODES {
        group.bench_function(BenchmarkId::new(mode, "C6"), |b| {
            b.iter_batched(
                || CyclicFamily::new(&[6]).unwrap(),
                |fam| black_box(product_of_hats_check(&fam, 6, 6, 6, exec).checked),
                BatchSize::PerIteration,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, mackey_table, structure_constants, hats);
criterion_main!(benches);
