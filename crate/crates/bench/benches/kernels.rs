use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use transduction_core::bogoliubov::{bogoliubov_channel_metrics, detuned_params};
use transduction_core::matching::detect_half_matched;
use transduction_core::metrics::{half_matching_cnu, ChannelMetrics};
use transduction_core::model::{extract_channel, scattering_ladder, BathSpec, ChannelDirection, SystemParams};
use transduction_core::symplectic::bloch_messiah;
use transduction_lab::config::{Axis, SweepConfig};
use transduction_lab::run_sweep_with_threads;

fn kernels(c: &mut Criterion) {
    let p = SystemParams::from_cooperativities(0.5, 0.1).with_extraction(0.95, 0.99).with_thermal(0.1);
    c.bench_function("scattering_ladder", |b| b.iter(|| scattering_ladder(black_box(&p), 0.01).unwrap()));

    let baths = BathSpec::from_params(&p);
    c.bench_function("extract_channel_metrics", |b| {
        b.iter(|| {
            let ch = extract_channel(black_box(&p), 0.0, ChannelDirection::OpticalToMicrowave, &baths).unwrap();
            ChannelMetrics::from_channel(&ch)
        })
    });

    let sx = scattering_ladder(&p, 0.0).unwrap().quadrature().unwrap();
    c.bench_function("bloch_messiah_8x8", |b| b.iter(|| bloch_messiah(black_box(&sx), 1e-9).unwrap()));

    let block = scattering_ladder(&SystemParams::from_cooperativities(0.25, half_matching_cnu(0.25)), 0.0)
        .unwrap()
        .coupling_block()
        .unwrap();
    c.bench_function("detect_half_matched", |b| b.iter(|| detect_half_matched(black_box(&block), 1e-9).unwrap()));

    let q = detuned_params(0.3, 0.8, 0.9, 0.97);
    c.bench_function("squeezed_frame_metrics", |b| b.iter(|| bogoliubov_channel_metrics(black_box(&q), false).unwrap()));
}

fn sweeps(c: &mut Criterion) {
    let mut cfg = SweepConfig::default();
    cfg.set_axis(Axis::linear("c_g", 0.01, 2.0, 40).unwrap());
    cfg.set_axis(Axis::linear("c_nu", 0.0, 1.0, 40).unwrap());
    let mut group = c.benchmark_group("sweep_40x40");
    group.sample_size(20);
    group.bench_function("serial", |b| b.iter(|| run_sweep_with_threads(black_box(&cfg), Some(1)).unwrap()));
    group.bench_function("parallel", |b| b.iter(|| run_sweep_with_threads(black_box(&cfg), None).unwrap()));
    group.finish();
}

criterion_group!(benches, kernels, sweeps);
criterion_main!(benches);
