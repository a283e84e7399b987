use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use permlab::action::{orbit_with, Hf, DEFAULT_ENUM_CAP};
use permlab::random::{random_hf, rng_for};
use permlab::verify::{run_suite, VerifyConfig};
use permlab::{Exec, Prime, Subspace};

fn modes() -> Vec<(&'static str, Exec)> {
    let v = vec![("sequential", Exec::Sequential)];
    #[cfg(feature = "parallel")]
    let v = [v, vec![("parallel", Exec::Parallel)]].concat();
    v
}

fn orbit_enumeration(c: &mut Criterion) {
    let p = Prime::THREE;
    let k = 8;
    let x: Hf = random_hf(&mut rng_for(1, "bench", 0), p, k, 3);
    let full = Subspace::full(p, k);
    let mut g = c.benchmark_group("orbit p=3 k=8");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| orbit_with(black_box(&x), &full, k, DEFAULT_ENUM_CAP, exec).unwrap().len())
        });
    }
    g.finish();
}

fn suites(c: &mut Criterion) {
    for suite in ["ac3-support-reduction", "ac1-action-laws"] {
        let mut g = c.benchmark_group(suite);
        g.sample_size(10);
        for (name, exec) in modes() {
            let cfg = VerifyConfig { exec, ..VerifyConfig::default() };
            g.bench_function(name, |b| b.iter(|| run_suite(suite, &cfg).unwrap().passed));
        }
        g.finish();
    }
}

criterion_group!(benches, orbit_enumeration, suites);
criterion_main!(benches);
