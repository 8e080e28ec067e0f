//! Compares the chunked range mapper against its always-sequential twin on
//! the two closures the scans actually spend time in: corank of projective
//! points against a fixed span, and evaluation of a recovered sextic. With
//! one hardware thread the two should track each other; the gap appears with
//! cores.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lagten::epw::{self, LagrangianSubspace};
use lagten::exec;
use lagten::field::FieldSpec;
use lagten::tens;

fn corank_scan(c: &mut Criterion) {
    let f11 = FieldSpec::prime(11).unwrap();
    let ten = tens::ruling_ten(&f11, 1).unwrap();
    let a = LagrangianSubspace::from_config(&ten).unwrap();
    let total: u64 = 4000;
    let work = |s: u64, e: u64| -> Vec<u64> {
        let mut hits = 0;
        for idx in s..e {
            let v = tens::proj_point_from_index(&f11, 5, idx as u128);
            if epw::corank(&a, &v) > 0 {
                hits += 1;
            }
        }
        vec![hits]
    };

    let mut group = c.benchmark_group("corank-scan");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("points", "chunked"), |b| {
        b.iter(|| exec::map_ranges(total, 256, work).iter().sum::<u64>())
    });
    group.bench_function(BenchmarkId::new("points", "sequential"), |b| {
        b.iter(|| exec::map_ranges_sequential(total, 256, work).iter().sum::<u64>())
    });
    group.finish();
}

fn sextic_eval_scan(c: &mut Criterion) {
    let data = tens::construct_3331(0).unwrap();
    let a = LagrangianSubspace::from_config(&data.config).unwrap();
    let form = epw::epw_form(&a, 0).unwrap();
    let sextic = form.sextic.expect("the three conic span is not degenerate");
    let field = form.field.clone();
    let total: u64 = 2000;
    let work = |s: u64, e: u64| -> Vec<u64> {
        let mut zeros = 0;
        for idx in s..e {
            let v = tens::proj_point_from_index(&field, 5, idx as u128);
            if field.is_zero(&sextic.eval(&field, &v)) {
                zeros += 1;
            }
        }
        vec![zeros]
    };

    let mut group = c.benchmark_group("sextic-eval");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("points", "chunked"), |b| {
        b.iter(|| exec::map_ranges(total, 128, work).iter().sum::<u64>())
    });
    group.bench_function(BenchmarkId::new("points", "sequential"), |b| {
        b.iter(|| exec::map_ranges_sequential(total, 128, work).iter().sum::<u64>())
    });
    group.finish();
}

criterion_group!(scans, corank_scan, sextic_eval_scan);
criterion_main!(scans);
