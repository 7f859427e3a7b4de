//! Squeezed-frame (Bogoliubov) picture of the detuned, parametrically driven
//! microwave resonator.
//!
//! For `beta = 2 nu / Delta_e < 1` the mode `b_s = cosh(r) b + e^{-i theta}
//! sinh(r) b†` with `tanh(2r) = beta` diagonalizes the driven resonator, and
//! the optical mode couples to it through a beam splitter with enhanced rate
//! `g cosh(r)`.

use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{AddedNoise, ChannelMetrics, UNIT_GAIN_TOL};
use crate::model::{SystemParams, DEFAULT_KAPPA_E, DEFAULT_KAPPA_O};

/// Largest `beta` accepted before clamping.
pub const BETA_CAP: f64 = 0.999;

/// Microwave detuning, in units of `kappa_e`, used by [`detuned_params`].
pub const DEFAULT_DETUNING_RATIO: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovFrame {
    pub beta: f64,
    /// Effective squeezing, `tanh(2 r) = beta`.
    pub r: f64,
    pub g_s: f64,
    pub omega_s: f64,
    pub kappa_s: f64,
    pub c_s: f64,
    pub zeta_s: f64,
    /// Set when the requested `beta` exceeded [`BETA_CAP`] and was clamped.
    pub beta_capped: bool,
}

/// `r = artanh(2 nu / Delta_e) / 2`; requires `Delta_e > 2 nu >= 0`.
pub fn effective_squeezing(nu: f64, delta_e: f64) -> Result<f64> {
    if nu < 0.0 {
        return Err(Error::Precondition("pump strength must be nonnegative".into()));
    }
    if nu == 0.0 {
        return Ok(0.0);
    }
    let beta = if delta_e > 0.0 { 2.0 * nu / delta_e } else { f64::INFINITY };
    squeezing_from_beta(beta)
}

pub fn squeezing_from_beta(beta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::OutOfRegime { beta });
    }
    Ok(0.5 * beta.atanh())
}

pub fn build_frame(p: &SystemParams) -> Result<BogoliubovFrame> {
    p.validate()?;
    let mut r = effective_squeezing(p.nu, p.delta_e)?;
    let mut beta = if p.nu == 0.0 { 0.0 } else { 2.0 * p.nu / p.delta_e };
    let beta_capped = beta > BETA_CAP;
    if beta_capped {
        warn!("beta = {beta} exceeds {BETA_CAP}; clamping");
        beta = BETA_CAP;
        r = squeezing_from_beta(beta)?;
    }
    // omega_s = sqrt(Delta_e^2 - (2 nu)^2) = |Delta_e| sqrt(1 - beta^2)
    let omega_s = p.delta_e.abs() * (1.0 - beta * beta).sqrt();
    let g_s = p.g * r.cosh();
    let kappa_s = p.kappa_e;
    Ok(BogoliubovFrame {
        beta,
        r,
        g_s,
        omega_s,
        kappa_s,
        c_s: 4.0 * g_s * g_s / (p.kappa_o * kappa_s),
        zeta_s: p.zeta_e,
        beta_capped,
    })
}

/// A detuned operating point at cooperativity `c_g` and `beta`, with
/// `Delta_e = 1000 kappa_e` and the optical detuning matched to the
/// Bogoliubov mode (`Delta_o = -omega_s`).
pub fn detuned_params(c_g: f64, beta: f64, zeta_o: f64, zeta_e: f64) -> SystemParams {
    detuned_params_with_rates(c_g, beta, zeta_o, zeta_e, DEFAULT_KAPPA_O, DEFAULT_KAPPA_E)
}

pub fn detuned_params_with_rates(
    c_g: f64,
    beta: f64,
    zeta_o: f64,
    zeta_e: f64,
    kappa_o: f64,
    kappa_e: f64,
) -> SystemParams {
    let delta_e = DEFAULT_DETUNING_RATIO * kappa_e;
    let omega_s = delta_e * (1.0 - beta * beta).max(0.0).sqrt();
    let mut p = SystemParams::from_cooperativities_with_rates(c_g, 0.0, kappa_o, kappa_e)
        .with_extraction(zeta_o, zeta_e)
        .with_detuning(-omega_s, delta_e);
    p.nu = beta * delta_e / 2.0;
    p
}

/// `eta_s = 4 C_s / (1 + C_s)^2 zeta_o zeta_s`
pub fn eta_bogoliubov(c_s: f64, zeta_o: f64, zeta_s: f64) -> f64 {
    4.0 * c_s / (1.0 + c_s).powi(2) * zeta_o * zeta_s
}

/// Bath occupancy seen by the Bogoliubov mode, `cosh(2r) n_th + sinh^2(r)`.
pub fn amplified_noise(r: f64, n_th: f64) -> f64 {
    (2.0 * r).cosh() * n_th + r.sinh().powi(2)
}

/// Occupancy seen by the Bogoliubov mode when the microwave bath is itself a
/// squeezed thermal state (squeezing `lambda`, phase `phi`).
///
/// With `b_nu = A b_th + B b_th†`, the occupancy is `|B|^2 + n_th (1 + 2|B|^2)`
/// and `|B|^2 = cosh^2 r sinh^2 lambda + sinh^2 r cosh^2 lambda
/// + cos(theta - phi) sinh(2r) sinh(2 lambda) / 2`.
pub fn squeezed_bath_noise(r: f64, lambda: f64, theta: f64, phi: f64, n_th: f64) -> f64 {
    let b_sq = r.cosh().powi(2) * lambda.sinh().powi(2)
        + r.sinh().powi(2) * lambda.cosh().powi(2)
        + 0.5 * (theta - phi).cos() * (2.0 * r).sinh() * (2.0 * lambda).sinh();
    // |B|^2 >= 0 analytically; clip cancellation error
    let b_sq = b_sq.max(0.0);
    b_sq + n_th * (1.0 + 2.0 * b_sq)
}

/// Bath squeezing `(lambda, phi)` that cancels the amplified noise:
/// `lambda = r`, `phi = theta - pi`.
pub fn elimination_params(r: f64, theta: f64) -> (f64, f64) {
    (r, theta - PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwaThresholds {
    /// Upper bound on `g_s / omega_s`.
    pub max_coupling_ratio: f64,
    /// Upper bound on `||Delta_o| - omega_s| / (|Delta_o| + omega_s)`.
    pub max_detuning_ratio: f64,
}

impl Default for RwaThresholds {
    fn default() -> Self {
        Self { max_coupling_ratio: 1.0, max_detuning_ratio: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwaReport {
    pub coupling_ratio: f64,
    pub detuning_ratio: f64,
    pub weak_coupling: bool,
    pub matched_detuning: bool,
}

impl RwaReport {
    pub fn valid(&self) -> bool {
        self.weak_coupling && self.matched_detuning
    }
}

pub fn rwa_validity(p: &SystemParams, frame: &BogoliubovFrame) -> RwaReport {
    rwa_validity_with(p, frame, RwaThresholds::default())
}

pub fn rwa_validity_with(p: &SystemParams, frame: &BogoliubovFrame, limits: RwaThresholds) -> RwaReport {
    let coupling_ratio = frame.g_s / frame.omega_s;
    let d = p.delta_o.abs();
    let detuning_ratio = (d - frame.omega_s).abs() / (d + frame.omega_s);
    RwaReport {
        coupling_ratio,
        detuning_ratio,
        weak_coupling: coupling_ratio < limits.max_coupling_ratio,
        matched_detuning: detuning_ratio < limits.max_detuning_ratio,
    }
}

/// Channel metrics in the Bogoliubov picture, treating the conversion as a
/// loss channel whose environment holds the (optionally eliminated)
/// amplified noise.
pub fn bogoliubov_channel_metrics(p: &SystemParams, eliminate_noise: bool) -> Result<ChannelMetrics> {
    let frame = build_frame(p)?;
    let eta = eta_bogoliubov(frame.c_s, p.zeta_o, frame.zeta_s);
    let occupancy = if eliminate_noise { p.n_th } else { amplified_noise(frame.r, p.n_th) };
    Ok(loss_channel_metrics(eta, occupancy))
}

/// Metrics of a loss channel `T = sqrt(eta) I`, `N = (1 - eta)(2n + 1) I`.
pub fn loss_channel_metrics(eta: f64, occupancy: f64) -> ChannelMetrics {
    let noise = if (eta - 1.0).abs() <= UNIT_GAIN_TOL {
        AddedNoise::UnitGain { sigma_sq: (1.0 - eta).abs() * (2.0 * occupancy + 1.0) }
    } else {
        AddedNoise::Thermal { n_e: occupancy }
    };
    ChannelMetrics::from_parts(eta, noise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn effective_squeezing_examples() {
        assert_eq!(effective_squeezing(0.0, 1.0).unwrap(), 0.0);
        assert_relative_eq!(effective_squeezing(0.4, 1.0).unwrap(), 0.5 * 3.0_f64.ln(), max_relative = 1e-14);
        assert_abs_diff_eq!(squeezing_from_beta(0.95).unwrap(), 0.915_89, epsilon = 1e-5);
        assert!(matches!(effective_squeezing(0.5, 1.0), Err(Error::OutOfRegime { .. })));
        assert!(matches!(effective_squeezing(0.6, 1.0), Err(Error::OutOfRegime { .. })));
    }

    #[test]
    fn frame_at_beta_point_eight() {
        let mut p = SystemParams::from_cooperativities(0.3, 0.0).with_detuning(-0.6, 1.0);
        p.nu = 0.4;
        let f = build_frame(&p).unwrap();
        assert_abs_diff_eq!(f.omega_s, 0.6, epsilon = 1e-14);
        assert_abs_diff_eq!(f.r.cosh(), 2.0 / 3.0_f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(f.g_s, 2.0 * p.g / 3.0_f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(f.c_s, 4.0 / 3.0 * p.c_g(), max_relative = 1e-14);
        assert_eq!(f.kappa_s, p.kappa_e);
        assert!(!f.beta_capped);
    }

    #[test]
    fn unpumped_frame_is_bare() {
        let p = SystemParams::from_cooperativities(0.3, 0.0).with_detuning(-2.0, 2.0);
        let f = build_frame(&p).unwrap();
        assert_eq!(f.g_s, p.g);
        assert_eq!(f.omega_s, 2.0);
        assert_relative_eq!(f.c_s, p.c_g(), max_relative = 1e-15);
    }

    #[test]
    fn beta_is_capped() {
        let p = detuned_params(0.1, 0.9995, 1.0, 1.0);
        let f = build_frame(&p).unwrap();
        assert!(f.beta_capped);
        assert_eq!(f.beta, BETA_CAP);
    }

    #[test]
    fn coupling_enhancement_grows_toward_threshold() {
        let mut last = 1.0;
        for k in 1..100 {
            let beta = 0.01 * k as f64 * 0.999;
            let f = build_frame(&detuned_params(0.1, beta, 1.0, 1.0)).unwrap();
            let p = detuned_params(0.1, beta, 1.0, 1.0);
            let ratio = f.g_s / p.g;
            assert!(ratio > last);
            last = ratio;
        }
    }

    #[test]
    fn eta_bogoliubov_examples() {
        assert_eq!(eta_bogoliubov(1.0, 0.9, 0.8), 0.9 * 0.8);
        let c_s = 0.1 * 4.0 / 3.0;
        assert_relative_eq!(eta_bogoliubov(c_s, 1.0, 1.0), 4.0 * (2.0 / 15.0) / (17.0_f64 / 15.0).powi(2), max_relative = 1e-14);
        assert_abs_diff_eq!(eta_bogoliubov(c_s, 1.0, 1.0), 0.4152, epsilon = 1e-4);
    }

    #[test]
    fn amplified_noise_examples() {
        assert_eq!(amplified_noise(0.0, 0.3), 0.3);
        assert_abs_diff_eq!(amplified_noise(0.5 * 3.0_f64.ln(), 0.0), 1.0 / 3.0, epsilon = 1e-14);
        let mut last = 0.0;
        for k in 1..50 {
            let n = amplified_noise(0.05 * k as f64, 0.0);
            assert!(n > last);
            last = n;
        }
    }

    #[test]
    fn squeezed_bath_examples() {
        let r = 0.7;
        assert_relative_eq!(squeezed_bath_noise(r, 0.0, 0.4, 1.1, 0.0), r.sinh().powi(2), max_relative = 1e-14);
        assert_abs_diff_eq!(squeezed_bath_noise(r, r, 0.4, 0.4 - PI, 0.0), 0.0, epsilon = 1e-14);
        assert_relative_eq!(squeezed_bath_noise(r, r, 0.4, 0.4, 0.0), (2.0 * r).sinh().powi(2), max_relative = 1e-14);
        // thermal generalization reduces to the amplified noise at lambda = 0
        assert_relative_eq!(squeezed_bath_noise(r, 0.0, 0.0, 0.0, 0.3), amplified_noise(r, 0.3), max_relative = 1e-14);
    }

    #[test]
    fn elimination_examples() {
        let (lambda, phi) = elimination_params(0.0, 0.2);
        assert_eq!(lambda, 0.0);
        assert_abs_diff_eq!(phi, 0.2 - PI);
        let r = 0.5493;
        let (lambda, phi) = elimination_params(r, 0.0);
        assert_eq!((lambda, phi), (r, -PI));
        assert_abs_diff_eq!(squeezed_bath_noise(r, lambda, 0.0, phi, 0.0), 0.0, epsilon = 1e-14);
        for k in [1.0, 3.0, 5.0, -1.0] {
            assert_abs_diff_eq!(squeezed_bath_noise(r, r, 0.0, -k * PI, 0.0), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn rwa_examples() {
        let p = SystemParams::from_cooperativities_with_rates(0.0, 0.0, 1.0, 1.0).with_detuning(-50.0, 50.0);
        let mut p = p;
        p.g = 0.5;
        let f = build_frame(&p).unwrap();
        assert!(rwa_validity(&p, &f).valid());

        let mut p = SystemParams::from_cooperativities_with_rates(0.0, 0.0, 1.0, 1.0).with_detuning(-1.0, 1.0);
        p.g = 0.2;
        p.nu = 0.999 / 2.0;
        let f = build_frame(&p).unwrap();
        assert!(!rwa_validity(&p, &f).weak_coupling);

        let beta: f64 = 0.95;
        let delta_e = 10.0;
        let omega_s = delta_e * (1.0 - beta * beta).sqrt();
        let r = squeezing_from_beta(beta).unwrap();
        let mut p = SystemParams::from_cooperativities_with_rates(0.0, 0.0, 1.0, 1.0).with_detuning(omega_s, delta_e);
        p.nu = beta * delta_e / 2.0;
        p.g = 0.5 * omega_s / r.cosh();
        let f = build_frame(&p).unwrap();
        let report = rwa_validity(&p, &f);
        assert_abs_diff_eq!(report.coupling_ratio, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(report.detuning_ratio, 0.0, epsilon = 1e-12);
        assert!(report.valid());
    }

    #[test]
    fn unpumped_metrics_match_resonant_loss_channel() {
        let c_g = 0.4;
        let m = bogoliubov_channel_metrics(&detuned_params(c_g, 0.0, 1.0, 1.0), false).unwrap();
        let eta = crate::metrics::eta_closed_form(c_g, 0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(m.eta, eta, max_relative = 1e-12);
        assert_eq!(m.n_e(), Some(0.0));
    }

    #[test]
    fn elimination_removes_added_noise() {
        let p = detuned_params(0.1, 0.8, 1.0, 1.0);
        let m = bogoliubov_channel_metrics(&p, true).unwrap();
        assert_eq!(m.n_e(), Some(0.0));
        assert_relative_eq!(m.q_lb, (m.eta / (1.0 - m.eta)).log2().max(0.0), max_relative = 1e-14);
        let noisy = bogoliubov_channel_metrics(&p, false).unwrap();
        assert_abs_diff_eq!(noisy.n_e().unwrap(), 1.0 / 3.0, epsilon = 1e-12);
    }
}
