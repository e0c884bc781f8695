use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lanepilot::analysis::{analyze_driver, hausdorff, AnalysisOptions};
use lanepilot::persona::{fit_case, FitCase, FitOptions};
use lanepilot::sim::{default_scenario, run_scenario, ControllerConfig, SimConfig};
use lanepilot::{HeadwayTable, LateralParams};
use lanepilot_bench::reference_log;

fn bench_hausdorff(c: &mut Criterion) {
    let mut group = c.benchmark_group("hausdorff");
    for n in [50usize, 200, 1000] {
        let a: Vec<[f64; 2]> = (0..n).map(|k| [k as f64 * 0.1, (k as f64 * 0.07).sin()]).collect();
        let b: Vec<[f64; 2]> = (0..n).map(|k| [k as f64 * 0.1, 0.3 * (k as f64 * 0.05).cos()]).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| hausdorff(black_box(&a), black_box(&b)).unwrap())
        });
    }
    group.finish();
}

fn bench_run_scenario(c: &mut Criterion) {
    let spec = default_scenario();
    let controller = ControllerConfig {
        headways: HeadwayTable::constant(1.5).unwrap(),
        lateral: LateralParams::new(0.8, 1.0).unwrap(),
    };
    let mut group = c.benchmark_group("run_scenario");
    group.sample_size(20);
    for kappa in [0.0, 0.3] {
        let sim = SimConfig::with_kappa(kappa);
        group.bench_with_input(BenchmarkId::new("kappa", kappa), &sim, |bench, sim| {
            bench.iter(|| run_scenario(black_box(&spec), &controller, sim).unwrap())
        });
    }
    group.finish();
}

fn bench_fit_case(c: &mut Criterion) {
    let log = reference_log(0.65, 0.8);
    let case = FitCase {
        ego: &log.ego,
        lead: &log.lead,
        window: log.case_windows[0].span(),
    };
    let opts = FitOptions::default();
    c.bench_function("fit_case", |bench| bench.iter(|| fit_case(black_box(&case), &opts).unwrap()));
}

fn bench_analyze(c: &mut Criterion) {
    let log = reference_log(0.65, 0.8);
    let opts = AnalysisOptions::default();
    c.bench_function("analyze_driver", |bench| {
        bench.iter(|| analyze_driver("bench", &log.ego, &log.lead, &log.case_windows, None, &opts).unwrap())
    });
}

criterion_group!(benches, bench_hausdorff, bench_run_scenario, bench_fit_case, bench_analyze);
criterion_main!(benches);
