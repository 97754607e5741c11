//! Parallel against sequential execution on the heaviest relation checks.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use linfty::bridge::{bridge_algebras, Bridge};
use linfty::examples::{adjoint, sl2, sl2_dgla, sl2_space};
use linfty::exec::Exec;
use linfty::linfty::{check_linfty_with, check_morphism_upto, LInftyStructure};
use linfty::multibracket::bracket_terms;
use linfty::poisson::build_lhm;
use linfty::rota_baxter::{build_lhrb, Hlr};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn workloads() -> Vec<(&'static str, LInftyStructure)> {
    let rep = adjoint(&sl2_dgla(), 2);
    let hlr = Hlr::new(rep.g.space.clone(), rep.v.clone(), 3).unwrap();
    vec![("lhm sl2 n=2 W=4", build_lhm(sl2_space(), 2, 4).unwrap().structure), ("lhrb sl2 adjoint cap 3", build_lhrb(&hlr).unwrap().structure)]
}

fn jacobi(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_linfty");
    group.sample_size(10);
    for (name, l) in workloads() {
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), &l, |b, l| b.iter(|| black_box(check_linfty_with(l, exec))));
        }
    }
    group.finish();
}

fn square(c: &mut Criterion) {
    let mut group = c.benchmark_group("bracket_terms [m,m]");
    for (name, l) in workloads() {
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), &l, |b, l| {
                b.iter(|| black_box(bracket_terms(l.degrees(), &l.m.terms, &l.m.terms, l.cap(), exec)))
            });
        }
    }
    group.finish();
}

fn bridge_map(c: &mut Criterion) {
    let m = sl2(2);
    let b = Bridge::new(m.space.clone(), 2, 4).unwrap();
    let alg = bridge_algebras(&b).unwrap();
    let mut group = c.benchmark_group("bridge strict map");
    group.sample_size(10);
    for (mode, exec) in MODES {
        group.bench_function(BenchmarkId::new(mode, "sl2 n=2 W=4 arity 4"), |bch| bch.iter(|| black_box(check_morphism_upto(&alg.map, 4, exec))));
    }
    group.finish();
}

criterion_group!(benches, jacobi, square, bridge_map);
criterion_main!(benches);
