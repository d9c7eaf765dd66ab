use criterion::{criterion_group, criterion_main, Criterion};

use walgebra::finite::finite_table;
use walgebra::zhu::{zhu_table, ZhuRoute};
use walgebra::{Route, WAlgebra};
use walgebra_bench::{setups, walgebras};

fn generators(c: &mut Criterion) {
    let mut g = c.benchmark_group("generators");
    for (label, setup) in setups() {
        g.bench_function(&label, |b| b.iter(|| WAlgebra::new(setup.clone()).unwrap()));
    }
    g.finish();
}

fn lambda_tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("lambda_table");
    g.sample_size(10);
    for (label, wa) in walgebras() {
        for (route, name) in [(Route::Closed, "closed"), (Route::Direct, "direct"), (Route::Skew, "skew")] {
            g.bench_function(format!("{label} {name}"), |b| b.iter(|| wa.table(route)));
        }
    }
    g.finish();
}

fn finite_and_zhu(c: &mut Criterion) {
    let mut g = c.benchmark_group("finite");
    g.sample_size(10);
    for (label, wa) in walgebras() {
        g.bench_function(format!("{label} finite"), |b| b.iter(|| finite_table(wa.setup())));
        g.bench_function(format!("{label} zhu"), |b| b.iter(|| zhu_table(&wa, ZhuRoute::Closed)));
    }
    g.finish();
}

criterion_group!(benches, generators, lambda_tables, finite_and_zhu);
criterion_main!(benches);
