use std::hint::black_box;
use std::thread;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use islands::{extremal_size, flat_oracle, Mode, SearchConfig, Shape};

fn workers() -> usize {
    thread::available_parallelism().map_or(2, |n| n.get().max(2))
}

/// Sequential against data-parallel front search on the same instances.
fn front_search(c: &mut Criterion) {
    let cases = [
        ("cube4x4x4-max", Shape::cube(3, 4).unwrap(), Mode::Max, true),
        ("square7-max", Shape::cube(2, 7).unwrap(), Mode::Max, true),
        (
            "rect5x4-max",
            Shape::new(vec![5, 4]).unwrap(),
            Mode::Max,
            false,
        ),
        (
            "box3x3x2-min",
            Shape::new(vec![3, 3, 2]).unwrap(),
            Mode::Min,
            false,
        ),
    ];
    let mut group = c.benchmark_group("front");
    group.sample_size(10);
    for (name, shape, mode, cubic) in &cases {
        for degree in [1, workers()] {
            let config = SearchConfig::new(*mode, *cubic).with_parallel_degree(degree);
            group.bench_with_input(
                BenchmarkId::new(*name, format!("threads={degree}")),
                &config,
                |b, config| b.iter(|| extremal_size(black_box(shape), config).unwrap().value),
            );
        }
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let shape = Shape::new(vec![3, 3]).unwrap();
    let config = SearchConfig::new(Mode::Max, false);
    c.bench_function("flat/rect3x3-max", |b| {
        b.iter(|| flat_oracle(black_box(&shape), &config).unwrap().value)
    });
}

criterion_group!(benches, front_search, oracle);
criterion_main!(benches);
