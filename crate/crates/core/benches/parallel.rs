use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ruled_core::similarity::check_similar_surfaces;
use ruled_core::synthesis::{synthesize_similar, SynthesisOptions};
use ruled_core::{frenet_frame, parse_expression, presets, Execution, SimilarityOptions, Vector3};

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn frames(c: &mut Criterion) {
    let mut g = c.benchmark_group("frenet_frame");
    for samples in [512, 4096] {
        let n = presets::by_name_with("offset-hyperboloid", samples).unwrap();
        for (label, exec) in STRATEGIES {
            let n = n.clone().with_execution(exec);
            g.bench_with_input(BenchmarkId::new(label, samples), &n, |b, n| b.iter(|| frenet_frame(n).unwrap()));
        }
    }
    g.finish();
}

fn compare(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_similar_surfaces");
    g.sample_size(20);
    let beta = presets::hyperboloid();
    let lambda = parse_expression("1.3 + 0.2*sin(u)").unwrap();
    let theta = parse_expression("0.6").unwrap();
    let out = synthesize_similar(&beta, &lambda, &theta, Vector3::zeros(), &SynthesisOptions::default()).unwrap();
    let alpha = out.to_surface("alpha").unwrap();
    for (label, exec) in STRATEGIES {
        let (b, a) = (beta.clone().with_execution(exec), alpha.clone().with_execution(exec));
        let opts = SimilarityOptions { exec, offset_search: true, ..Default::default() };
        g.bench_function(label, |bench| bench.iter(|| check_similar_surfaces(&b, &a, &opts).unwrap()));
    }
    g.finish();
}

fn synthesis(c: &mut Criterion) {
    let mut g = c.benchmark_group("synthesize_similar");
    g.sample_size(10);
    let beta = presets::hyperboloid();
    let lambda = parse_expression("1.3 + 0.2*sin(u)").unwrap();
    let theta = parse_expression("0.6 + 0.1*cos(u)").unwrap();
    for (label, exec) in STRATEGIES {
        let b = beta.clone().with_execution(exec);
        let opts = SynthesisOptions { exec, ..Default::default() };
        g.bench_function(label, |bench| {
            bench.iter(|| synthesize_similar(&b, &lambda, &theta, Vector3::zeros(), &opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, frames, compare, synthesis);
criterion_main!(benches);
