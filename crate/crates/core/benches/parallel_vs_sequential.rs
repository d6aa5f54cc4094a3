use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gcstego::decoder::{build_coset_table_tjoin, covering_radius_tjoin};
use gcstego::graph::{build_code, complete_graph, wheel_graph};
use gcstego::{build_coset_table_bruteforce, embed_stream, BitVector, Execution};

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn bench_tjoin_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("tjoin_table");
    for (name, graph) in [
        ("K8", complete_graph(8).unwrap()),
        ("K12", complete_graph(12).unwrap()),
        ("W13", wheel_graph(13).unwrap()),
    ] {
        let code = build_code(graph).unwrap();
        for exec in MODES {
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), name), &code, |b, code| {
                b.iter(|| build_coset_table_tjoin(code, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_covering_radius(c: &mut Criterion) {
    let mut group = c.benchmark_group("covering_radius_tjoin");
    for q in [10, 14, 16] {
        let g = complete_graph(q).unwrap();
        for exec in MODES {
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), format!("K{q}")), &g, |b, g| {
                b.iter(|| covering_radius_tjoin(g, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_embed_stream(c: &mut Criterion) {
    let mut group = c.benchmark_group("embed_stream");
    let code = build_code(complete_graph(5).unwrap()).unwrap();
    let table = build_coset_table_bruteforce(&code).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cover = BitVector::from_bits((0..512 * 512).map(|_| rng.gen::<bool>() as u8));
    let payload = BitVector::from_bits((0..8 * 8 * 1024).map(|_| rng.gen::<bool>() as u8));
    for exec in MODES {
        group.bench_function(BenchmarkId::new(format!("{exec:?}"), "K5/8KiB"), |b| {
            b.iter(|| embed_stream(&cover, &payload, &table, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_tjoin_table, bench_covering_radius, bench_embed_stream);
criterion_main!(benches);
