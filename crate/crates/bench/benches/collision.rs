use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use landau_bench::{bimodal_setup, maxwellian};
use landau_core::collision::{entropy_dissipation, landau_q, ConvolutionPlan, DissipationMethod, Form, KernelSpec};
use landau_core::grid::build_grid;

fn collision(c: &mut Criterion) {
    let mut group = c.benchmark_group("landau_q");
    group.sample_size(10);
    for n in [16, 32] {
        let (plan, f) = bimodal_setup(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| landau_q(&f, &f, &plan, Form::Divergence).unwrap())
        });
    }
    group.finish();
}

fn plan_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("plan");
    group.sample_size(10);
    for n in [16, 32] {
        let g = build_grid(8.0, n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing())))
        });
    }
    group.finish();
}

fn dissipation(c: &mut Criterion) {
    let (plan, _) = bimodal_setup(16);
    let mu = maxwellian(16);
    let mut group = c.benchmark_group("dissipation_n16");
    group.sample_size(10);
    for (name, method) in [("single", DissipationMethod::Single), ("double", DissipationMethod::Double)] {
        group.bench_function(name, |b| b.iter(|| entropy_dissipation(&mu, &plan, method).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, collision, plan_build, dissipation);
criterion_main!(benches);
