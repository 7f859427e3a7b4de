//! One test per reproducibility criterion; each prints a PASS/FAIL line.

use transduction_lab::checks::{self, CheckResult};

fn report(r: CheckResult) {
    println!("{r}");
    assert!(r.passed, "{r}");
}

#[test]
fn criterion_1_transmissivity_oracle() {
    report(checks::transmissivity_oracle());
}

#[test]
fn criterion_2_symplecticity() {
    report(checks::symplecticity());
}

#[test]
fn criterion_3_half_matching() {
    report(checks::half_matching());
}

#[test]
fn criterion_4_half_transmissivity_crossings() {
    report(checks::half_transmissivity_crossings());
}

#[test]
fn criterion_5_capacity_formula() {
    report(checks::capacity_formula());
}

#[test]
fn criterion_6_bloch_messiah() {
    report(checks::bloch_messiah_decomposition());
}

#[test]
fn criterion_7_squeezed_frame_identities() {
    report(checks::bogoliubov_identities());
}

#[test]
fn criterion_8_figure_shapes() {
    report(checks::figure_shapes());
}

#[test]
fn criterion_9_thermal_occupancy() {
    report(checks::thermal_occupancy());
}
