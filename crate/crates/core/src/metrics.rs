//! Figures of merit of single-mode Gaussian channels, and the closed forms
//! the transducer model is checked against.

use std::f64::consts::{E, LN_10};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::symplectic::{cp_min_eigenvalue, max_abs, QuadratureMatrix};

/// `|eta - 1|` below which the unit-gain branch of the added noise is used.
pub const UNIT_GAIN_TOL: f64 = 1e-9;
/// `sigma^2` below which a unit-gain channel has unbounded capacity.
pub const NOISELESS_TOL: f64 = 1e-15;

const CP_TOL: f64 = 1e-9;

/// `det N / max|N|^2` below which `N` is treated as singular.
const RANK_TOL: f64 = 1e-12;

/// Gaussian channel `V -> T V T^T + N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    t: QuadratureMatrix,
    n: QuadratureMatrix,
}

impl GaussianChannel {
    /// Checks complete positivity, with the tolerance scaled by the size of
    /// `T` and `N`.
    pub fn new(t: QuadratureMatrix, n: QuadratureMatrix) -> Result<Self> {
        let min = cp_min_eigenvalue(&t, &n)?;
        let scale = 1.0_f64.max(max_abs(n.entries())).max(max_abs(t.entries()).powi(2));
        if min < -CP_TOL * scale {
            return Err(Error::NotCompletelyPositive { min_eigenvalue: min });
        }
        Ok(Self { t, n })
    }

    pub fn new_unchecked(t: QuadratureMatrix, n: QuadratureMatrix) -> Self {
        Self { t, n }
    }

    pub fn t(&self) -> &QuadratureMatrix {
        &self.t
    }

    pub fn n(&self) -> &QuadratureMatrix {
        &self.n
    }

    /// Single-mode bosonic loss channel with a thermal environment:
    /// `T = sqrt(eta) I`, `N = (1 - eta)(2 n + 1) I`.
    pub fn thermal_loss(eta: f64, occupancy: f64) -> Result<Self> {
        let t = QuadratureMatrix::from_row_slice(2, 2, &[eta.sqrt(), 0.0, 0.0, eta.sqrt()])?;
        let w = (1.0 - eta) * (2.0 * occupancy + 1.0);
        let n = QuadratureMatrix::from_row_slice(2, 2, &[w, 0.0, 0.0, w])?;
        Self::new(t, n)
    }
}

/// Noise added by the channel: thermal photons `n_e` when `eta != 1`, or the
/// additive variance `sigma^2` at unit gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AddedNoise {
    Thermal { n_e: f64 },
    UnitGain { sigma_sq: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelMetrics {
    pub eta: f64,
    pub noise: AddedNoise,
    /// Quantum-capacity lower bound; `f64::INFINITY` for a noiseless unit-gain
    /// channel.
    pub q_lb: f64,
}

impl ChannelMetrics {
    pub fn from_channel(c: &GaussianChannel) -> Self {
        let eta = transmissivity(c);
        Self::from_parts(eta, added_noise(c))
    }

    pub fn from_parts(eta: f64, noise: AddedNoise) -> Self {
        Self { eta, noise, q_lb: capacity_lower_bound(eta, noise) }
    }

    pub fn n_e(&self) -> Option<f64> {
        match self.noise {
            AddedNoise::Thermal { n_e } => Some(n_e),
            AddedNoise::UnitGain { .. } => None,
        }
    }

    pub fn sigma_sq(&self) -> Option<f64> {
        match self.noise {
            AddedNoise::UnitGain { sigma_sq } => Some(sigma_sq),
            AddedNoise::Thermal { .. } => None,
        }
    }
}

/// `eta = det T`
pub fn transmissivity(c: &GaussianChannel) -> f64 {
    c.t.entries().determinant()
}

/// `n_e = sqrt(det N) / (2 |1 - eta|) - 1/2`, or `sigma^2 = sqrt(det N)` when
/// `|eta - 1| <= 1e-9`.
pub fn added_noise(c: &GaussianChannel) -> AddedNoise {
    let eta = transmissivity(c);
    let n = c.n.entries();
    let det = n.determinant();
    // a rank-deficient N only reaches det N = 0 up to rounding
    let root = if det <= RANK_TOL * max_abs(n).powi(2) { 0.0 } else { det.sqrt() };
    if (eta - 1.0).abs() <= UNIT_GAIN_TOL {
        AddedNoise::UnitGain { sigma_sq: root }
    } else {
        // complete positivity gives det N >= (1 - eta)^2; clip rounding
        AddedNoise::Thermal { n_e: (root / (2.0 * (1.0 - eta).abs()) - 0.5).max(0.0) }
    }
}

/// `g(n) = (n + 1) log2(n + 1) - n log2 n`, with `g(0) = 0`.
pub fn entropy_g(n: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    (n + 1.0) * (n + 1.0).log2() - n * n.log2()
}

/// Quantum-capacity lower bound of a single-mode Gaussian channel.
pub fn capacity_lower_bound(eta: f64, noise: AddedNoise) -> f64 {
    match noise {
        AddedNoise::Thermal { n_e } => {
            let ratio = (eta / (1.0 - eta)).abs();
            (ratio.log2() - entropy_g(n_e)).max(0.0)
        }
        AddedNoise::UnitGain { sigma_sq } if sigma_sq < NOISELESS_TOL => f64::INFINITY,
        AddedNoise::UnitGain { sigma_sq } => (2.0 / (E * sigma_sq)).log2().max(0.0),
    }
}

/// `C_nu < (1 + C_g)^2 / 4`
pub fn stability_check(c_g: f64, c_nu: f64) -> bool {
    c_nu < (1.0 + c_g).powi(2) / 4.0
}

fn require_stable(c_g: f64, c_nu: f64) -> Result<()> {
    if stability_check(c_g, c_nu) {
        Ok(())
    } else {
        Err(Error::Unstable { c_g, c_nu })
    }
}

/// On-resonance transmissivity `4 C_g zeta_o zeta_e / ((1 + C_g)^2 - 4 C_nu)`.
pub fn eta_closed_form(c_g: f64, c_nu: f64, zeta_o: f64, zeta_e: f64) -> Result<f64> {
    require_stable(c_g, c_nu)?;
    Ok(4.0 * c_g * zeta_o * zeta_e / ((1.0 + c_g).powi(2) - 4.0 * c_nu))
}

/// Transmissivity with detunings `chi_o = Delta_o / kappa_o`,
/// `chi_e = Delta_e / kappa_e`.
pub fn eta_detuned(c_g: f64, c_nu: f64, chi_o: f64, chi_e: f64, zeta_o: f64, zeta_e: f64) -> Result<f64> {
    let denom = c_g * c_g
        + c_g * (2.0 + 8.0 * chi_e * chi_o)
        + (1.0 - 4.0 * c_nu + 4.0 * chi_e * chi_e) * (1.0 + 4.0 * chi_o * chi_o);
    if denom <= 0.0 {
        return Err(Error::DegenerateDenominator { value: denom });
    }
    Ok(4.0 * c_g * zeta_o * zeta_e / denom)
}

/// Coefficients of the on-resonance transmissivity spectrum
/// `eta(w) = numer / (a + b w^2 + 16 w^4)`.
fn bandwidth_coefficients(p: &SystemParams) -> Result<(f64, f64, f64)> {
    p.validate()?;
    if !p.is_resonant() {
        return Err(Error::Precondition("bandwidth formula requires zero detuning".into()));
    }
    let (c_g, c_nu) = (p.c_g(), p.c_nu());
    require_stable(c_g, c_nu)?;
    let (ko, ke) = (p.kappa_o, p.kappa_e);
    let numer = 4.0 * c_g * ke * ke * ko * ko * p.zeta_e * p.zeta_o;
    let a = ((1.0 + c_g).powi(2) - 4.0 * c_nu) * ke * ke * ko * ko;
    let b = 4.0 * ((1.0 - 4.0 * c_nu) * ke * ke - 2.0 * c_g * ke * ko + ko * ko);
    Ok((numer, a, b))
}

/// On-resonance transmissivity at signal frequency `omega`.
pub fn eta_bandwidth(p: &SystemParams, omega: f64) -> Result<f64> {
    let (numer, a, b) = bandwidth_coefficients(p)?;
    let w2 = omega * omega;
    Ok(numer / (a + b * w2 + 16.0 * w2 * w2))
}

/// Full width at half maximum of `eta(w)` about `w = 0`.
///
/// The denominator is quadratic in `w^2`, so the outermost half-maximum point
/// solves `16 u^2 + b u - a = 0` for `u = w^2`.
pub fn bandwidth_fwhm(p: &SystemParams) -> Result<f64> {
    let (_, a, b) = bandwidth_coefficients(p)?;
    let disc = (b * b + 64.0 * a).sqrt();
    // positive root, picking the form without cancellation
    let u = if b >= 0.0 { 2.0 * a / (b + disc) } else { (disc - b) / 32.0 };
    Ok(2.0 * u.sqrt())
}

/// Squeezing cooperativity on the half-matching curve, `(1 - C_g)^2 / 4`.
pub fn half_matching_cnu(c_g: f64) -> f64 {
    (1.0 - c_g).powi(2) / 4.0
}

const PLANCK: f64 = 6.626_070_15e-34;
const BOLTZMANN: f64 = 1.380_649e-23;

/// `log10` of the Bose-Einstein occupancy at `frequency_hz` and
/// `temperature_k`, evaluated without underflow.
pub fn thermal_occupancy_log10(frequency_hz: f64, temperature_k: f64) -> f64 {
    let x = PLANCK * frequency_hz / (BOLTZMANN * temperature_k);
    // ln n = -ln(e^x - 1) = -x - ln(1 - e^-x)
    let ln_n = if x > 1.0 { -x - (-(-x).exp()).ln_1p() } else { -x.exp_m1().ln() };
    ln_n / LN_10
}

/// Bose-Einstein occupancy `1 / (e^{h f / k T} - 1)`.
pub fn thermal_occupancy(frequency_hz: f64, temperature_k: f64) -> f64 {
    10f64.powf(thermal_occupancy_log10(frequency_hz, temperature_k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DbConvention {
    /// `10 log10 e^{4 lambda}`
    #[default]
    FourLambda,
    /// Variance ratio `10 log10 e^{2 lambda}`
    VarianceRatio,
}

pub fn squeezing_db(lambda: f64) -> f64 {
    squeezing_db_with(lambda, DbConvention::default())
}

pub fn squeezing_db_with(lambda: f64, convention: DbConvention) -> f64 {
    let exponent = match convention {
        DbConvention::FourLambda => 4.0 * lambda,
        DbConvention::VarianceRatio => 2.0 * lambda,
    };
    10.0 * exponent / LN_10
}
