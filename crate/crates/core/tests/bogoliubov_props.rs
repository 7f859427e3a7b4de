use std::f64::consts::PI;

use proptest::prelude::*;
use transduction_core::bogoliubov::{
    amplified_noise, bogoliubov_channel_metrics, build_frame, detuned_params, elimination_params, rwa_validity,
    squeezed_bath_noise, squeezing_from_beta,
};
use transduction_core::metrics::{eta_closed_form, ChannelMetrics};
use transduction_core::model::{extract_channel, BathSpec, ChannelDirection, SystemParams};

#[test]
fn frame_identities_over_beta() {
    for k in 0..=19 {
        let beta = 0.05 * k as f64;
        let r = squeezing_from_beta(beta).unwrap();
        assert!(((2.0 * r).cosh() * (1.0 - beta * beta).sqrt() - 1.0).abs() < 1e-12);
        for c_g in [0.01, 0.1, 1.0] {
            let f = build_frame(&detuned_params(c_g, beta, 1.0, 1.0)).unwrap();
            assert!((f.c_s - c_g * r.cosh().powi(2)).abs() < 1e-12 * f.c_s.max(1.0));
            assert!(f.omega_s > 0.0);
            assert_eq!(f.kappa_s, 0.2);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn elimination_cancels_noise(r in 0.0f64..3.0, theta in -PI..PI) {
        let (lambda, phi) = elimination_params(r, theta);
        prop_assert!(squeezed_bath_noise(r, lambda, theta, phi, 0.0).abs() < 1e-14 * r.cosh().powi(4).max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn squeezed_bath_noise_is_nonnegative(
        r in 0.0f64..3.0,
        lambda in 0.0f64..3.0,
        theta in -PI..PI,
        phi in -PI..PI,
        n_th in 0.0f64..5.0,
    ) {
        prop_assert!(squeezed_bath_noise(r, lambda, theta, phi, n_th) >= 0.0);
    }

    #[test]
    fn unsqueezed_bath_reduces_to_amplified_noise(r in 0.0f64..3.0, theta in -PI..PI, phi in -PI..PI) {
        let a = amplified_noise(r, 0.0);
        prop_assert!((a - squeezed_bath_noise(r, 0.0, theta, phi, 0.0)).abs() < 1e-12 * a.max(1.0));
    }

    #[test]
    fn eliminated_noise_leaves_loss_bound(c_g in 0.001f64..3.0, beta in 0.0f64..0.99, zo in 0.5f64..=1.0, ze in 0.5f64..=1.0) {
        let m = bogoliubov_channel_metrics(&detuned_params(c_g, beta, zo, ze), true).unwrap();
        if let Some(n_e) = m.n_e() {
            prop_assert_eq!(n_e, 0.0);
            let expected = (m.eta / (1.0 - m.eta)).abs().log2().max(0.0);
            prop_assert!((m.q_lb - expected).abs() < 1e-12 * expected.max(1.0));
        }
    }
}

#[test]
fn unpumped_frame_matches_resonant_closed_form() {
    for c_g in [0.05, 0.3, 1.0, 2.5] {
        let m = bogoliubov_channel_metrics(&detuned_params(c_g, 0.0, 0.9, 0.97), false).unwrap();
        let eta = eta_closed_form(c_g, 0.0, 0.9, 0.97).unwrap();
        assert!((m.eta - eta).abs() < 1e-12);
    }
}

#[test]
fn unpumped_detuned_model_agrees_with_frame() {
    // without pump the frame is exact; the signal sits on the Bogoliubov resonance
    let p = detuned_params(0.4, 0.0, 1.0, 1.0);
    let f = build_frame(&p).unwrap();
    let numeric = ChannelMetrics::from_channel(
        &extract_channel(&p, f.omega_s, ChannelDirection::OpticalToMicrowave, &BathSpec::vacuum()).unwrap(),
    );
    let frame = bogoliubov_channel_metrics(&p, false).unwrap();
    assert!((numeric.eta - frame.eta).abs() < 1e-10, "{} vs {}", numeric.eta, frame.eta);
}

#[test]
fn rwa_holds_for_default_detuned_points() {
    for beta in [0.0, 0.5, 0.8, 0.95] {
        let p = detuned_params(1.0, beta, 1.0, 1.0);
        let f = build_frame(&p).unwrap();
        let report = rwa_validity(&p, &f);
        assert!(report.valid(), "beta={beta}: {report:?}");
    }
}

#[test]
fn out_of_regime_is_rejected() {
    let mut p = SystemParams::from_cooperativities(0.1, 0.0).with_detuning(-1.0, 1.0);
    p.nu = 0.6;
    assert!(build_frame(&p).is_err());
}
