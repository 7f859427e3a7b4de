//! Reproducibility checks run by `transduction-lab check`.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transduction_core::bogoliubov::{
    amplified_noise, build_frame, detuned_params, elimination_params, squeezed_bath_noise,
};
use transduction_core::matching::{compose_channel, detect_half_matched, perfect_transduction_plan, two_way_plan};
use transduction_core::metrics::{
    bandwidth_fwhm, capacity_lower_bound, eta_closed_form, half_matching_cnu,
    thermal_occupancy_log10, transmissivity, AddedNoise, ChannelMetrics, GaussianChannel,
};
use transduction_core::model::{extract_channel, scattering_ladder, BathSpec, ChannelDirection, SystemParams};
use transduction_core::symplectic::{bloch_messiah, max_abs, symplectic_residual};

use crate::presets::{list_presets, preset};
use crate::sweep::run_sweep;
use crate::table::ResultTable;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

type Outcome = std::result::Result<String, String>;

fn finish(name: &'static str, outcome: Outcome) -> CheckResult {
    match outcome {
        Ok(detail) => CheckResult { name, passed: true, detail },
        Err(detail) => CheckResult { name, passed: false, detail },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

const DIRECTIONS: [ChannelDirection; 2] = [ChannelDirection::OpticalToMicrowave, ChannelDirection::MicrowaveToOptical];

/// 20x20 resonant grid with `C_nu` up to 90% of the stability bound.
fn stable_grid() -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(400);
    for i in 0..20 {
        let c_g = 0.01 + (3.0 - 0.01) * i as f64 / 19.0;
        for j in 0..20 {
            pts.push((c_g, 0.9 * (1.0 + c_g).powi(2) / 4.0 * j as f64 / 19.0));
        }
    }
    pts
}

fn vacuum_eta(p: &SystemParams, dir: ChannelDirection) -> std::result::Result<f64, String> {
    Ok(transmissivity(&extract_channel(p, 0.0, dir, &BathSpec::vacuum()).map_err(err)?))
}

pub fn transmissivity_oracle() -> CheckResult {
    let run = || -> Outcome {
        let start = Instant::now();
        let mut worst = 0.0f64;
        for (c_g, c_nu) in stable_grid() {
            let p = SystemParams::from_cooperativities(c_g, c_nu);
            let closed = eta_closed_form(c_g, c_nu, 1.0, 1.0).map_err(err)?;
            let eta = vacuum_eta(&p, ChannelDirection::OpticalToMicrowave)?;
            worst = worst.max(((closed - eta) / closed).abs());
        }
        let elapsed = start.elapsed();
        ensure(worst < 1e-10, || format!("max relative error {worst:.3e}"))?;
        ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
        Ok(format!("max relative error {worst:.3e} over 400 points in {elapsed:.2?}"))
    };
    finish("closed-form transmissivity vs scattering model", run())
}

pub fn symplecticity() -> CheckResult {
    let run = || -> Outcome {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (mut worst, mut found) = (0.0f64, 0);
        while found < 500 {
            let c_g: f64 = rng.random_range(0.01..3.0);
            let c_nu = rng.random_range(0.0..0.95) * (1.0 + c_g).powi(2) / 4.0;
            let p = SystemParams::from_cooperativities(c_g, c_nu)
                .with_detuning(rng.random_range(-50.0..50.0), rng.random_range(-0.1..0.1))
                .with_phase(rng.random_range(-PI..PI));
            if !p.is_dynamically_stable().map_err(err)? {
                continue;
            }
            let s = scattering_ladder(&p, rng.random_range(-0.5..0.5)).map_err(err)?;
            worst = worst.max(symplectic_residual(s.quadrature().map_err(err)?.entries()).map_err(err)?);
            found += 1;
        }
        ensure(worst < 1e-10, || format!("max residual {worst:.3e}"))?;
        Ok(format!("max |S Omega S^T - Omega| = {worst:.3e} over 500 random stable points"))
    };
    finish("symplecticity of the scattering matrix", run())
}

pub fn half_matching() -> CheckResult {
    let run = || -> Outcome {
        let (mut refl, mut eta_err, mut t_err, mut n_det) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for c_g in [0.1, 0.25, 0.5, 2.0] {
            let p = SystemParams::from_cooperativities(c_g, half_matching_cnu(c_g));
            let s = scattering_ladder(&p, 0.0).map_err(err)?;
            let block = s.coupling_block().map_err(err)?;
            let f = detect_half_matched(&block, 1e-9).map_err(err)?.ok_or(format!("no half-matched form at C_g={c_g}"))?;
            let c = f.frame.to_canonical(block.entries());
            refl = refl.max(c[(0, 0)].abs()).max(c[(3, 3)].abs());
            for dir in DIRECTIONS {
                eta_err = eta_err.max((vacuum_eta(&p, dir)? - 1.0).abs());
            }
            let one_way = perfect_transduction_plan(&f, 1.0).map_err(err)?;
            let mut channels = vec![compose_channel(&block, &one_way, ChannelDirection::OpticalToMicrowave).map_err(err)?];
            for dir in DIRECTIONS {
                channels.push(compose_channel(&block, &two_way_plan(&f), dir).map_err(err)?);
            }
            for ch in &channels {
                t_err = t_err.max((ch.t().entries().determinant() - 1.0).abs());
                n_det = n_det.max(ch.n().entries().determinant().abs());
            }
        }
        ensure(refl < 1e-12, || format!("matched reflection {refl:.3e}"))?;
        ensure(eta_err < 1e-10, || format!("|eta - 1| = {eta_err:.3e}"))?;
        ensure(t_err < 1e-12 && n_det < 1e-12, || format!("|det T - 1| = {t_err:.3e}, |det N| = {n_det:.3e}"))?;
        Ok(format!(
            "reflection {refl:.1e}, |eta - 1| {eta_err:.1e}, composed |det T - 1| {t_err:.1e}, |det N| {n_det:.1e}"
        ))
    };
    finish("half matching gives a perfect channel", run())
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn half_transmissivity_crossings() -> CheckResult {
    let run = || -> Outcome {
        let mut worst = 0.0f64;
        for c_nu in [0.0, 0.1, 0.2] {
            let f = |c_g: f64| eta_closed_form(c_g, c_nu, 1.0, 1.0).map(|e| e - 0.5).unwrap_or(f64::NAN);
            // 4 C_g / ((1 + C_g)^2 - 4 C_nu) = 1/2  <=>  C_g^2 - 6 C_g + 1 - 4 C_nu = 0
            let disc = (8.0 + 4.0 * c_nu).sqrt();
            for (expected, lo, hi) in [(3.0 - disc, 1e-6, 1.0), (3.0 + disc, 1.0, 20.0)] {
                let root = bisect(f, lo, hi);
                worst = worst.max((root - expected).abs());
            }
        }
        let lower = 3.0 - 2.0 * 2f64.sqrt();
        ensure(worst < 1e-9, || format!("max root error {worst:.3e}"))?;
        Ok(format!("max root error {worst:.3e}; C_nu=0 lower crossing at C_g={lower:.12}"))
    };
    finish("eta = 1/2 crossings", run())
}

pub fn capacity_formula() -> CheckResult {
    let run = || -> Outcome {
        let q08 = capacity_lower_bound(0.8, AddedNoise::Thermal { n_e: 0.0 });
        let q05 = capacity_lower_bound(0.5, AddedNoise::Thermal { n_e: 0.0 });
        // 1 - 0.8 is inexact in binary, so the ratio is 4 to within one ulp
        ensure((q08 - 2.0).abs() <= 1e-15, || format!("Q_LB(0.8, 0) = {q08:?}"))?;
        ensure(q05 == 0.0, || format!("Q_LB(0.5, 0) = {q05:?}"))?;
        let mut worst = 0.0f64;
        for n in [0.0, 0.5, 3.0] {
            for eta in [0.2, 0.5, 0.9] {
                let ch = GaussianChannel::thermal_loss(eta, n).map_err(err)?;
                let n_e = ChannelMetrics::from_channel(&ch).n_e().ok_or("loss channel reported as unit gain")?;
                worst = worst.max((n_e - n).abs());
            }
        }
        ensure(worst < 1e-12, || format!("loss-channel n_e error {worst:.3e}"))?;
        Ok(format!("Q_LB(0.8,0) = {q08:?}, Q_LB(0.5,0) = {q05}, loss n_e error {worst:.1e}"))
    };
    finish("capacity bound formula", run())
}

pub fn bloch_messiah_decomposition() -> CheckResult {
    let run = || -> Outcome {
        let mut worst = 0.0f64;
        for (c_g, c_nu) in stable_grid() {
            let sx = scattering_ladder(&SystemParams::from_cooperativities(c_g, c_nu), 0.0)
                .and_then(|s| s.quadrature())
                .map_err(err)?;
            let bm = bloch_messiah(&sx, 1e-9).map_err(err)?;
            worst = worst.max(max_abs(&(bm.reconstruct() - sx.entries())));
        }
        ensure(worst < 1e-9, || format!("max reconstruction error {worst:.3e}"))?;
        let (c_g, c_nu): (f64, f64) = (0.25, 0.140625);
        let expected = (1.0 + c_g + 2.0 * c_nu.sqrt()) / (1.0 + c_g - 2.0 * c_nu.sqrt());
        let block = scattering_ladder(&SystemParams::from_cooperativities(c_g, c_nu), 0.0)
            .and_then(|s| s.coupling_block())
            .map_err(err)?;
        let d = bloch_messiah(&block, 1e-9).map_err(err)?.squeezing()[0];
        ensure((d - expected).abs() < 1e-10, || format!("squeezing {d} vs {expected}"))?;
        Ok(format!("max reconstruction error {worst:.3e}; squeezing at C_g=0.25, C_nu=0.140625: {d:.15}"))
    };
    finish("Bloch-Messiah decomposition", run())
}

pub fn bogoliubov_identities() -> CheckResult {
    let run = || -> Outcome {
        let mut worst = 0.0f64;
        let betas = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95];
        for beta in betas {
            let c_g = 0.1;
            let f = build_frame(&detuned_params(c_g, beta, 1.0, 1.0)).map_err(err)?;
            worst = worst.max(((2.0 * f.r).cosh() * (1.0 - beta * beta).sqrt() - 1.0).abs());
            let c_s = c_g * f.r.cosh().powi(2);
            worst = worst.max(((f.c_s - c_s) / c_s).abs());
        }
        ensure(worst < 1e-12, || format!("identity error {worst:.3e}"))?;
        let r = build_frame(&detuned_params(0.1, 0.8, 1.0, 1.0)).map_err(err)?.r;
        let n_nu = amplified_noise(r, 0.0);
        ensure((n_nu - 1.0 / 3.0).abs() < 1e-12, || format!("n_nu(0.8) = {n_nu}"))?;
        let mut residual = 0.0f64;
        for beta in betas {
            let r = build_frame(&detuned_params(0.1, beta, 1.0, 1.0)).map_err(err)?.r;
            for theta in [-PI / 2.0, 0.0, 1.0] {
                let (lambda, phi) = elimination_params(r, theta);
                residual = residual.max(squeezed_bath_noise(r, lambda, theta, phi, 0.0).abs());
            }
        }
        ensure(residual < 1e-14, || format!("eliminated noise {residual:.3e}"))?;
        Ok(format!("identity error {worst:.1e}, n_nu(0.8) = {n_nu:.15}, eliminated noise {residual:.1e}"))
    };
    finish("squeezed-frame identities", run())
}

fn column(t: &ResultTable, name: &str) -> std::result::Result<Vec<Option<f64>>, String> {
    t.values(name).ok_or_else(|| format!("missing column '{name}'"))
}

fn fig2b_sign_change(t: &ResultTable) -> Outcome {
    let (c_g, c_nu, eta) = (column(t, "c_g")?, column(t, "c_nu")?, column(t, "eta")?);
    let (mut checked, mut skipped) = (0, 0);
    for k in 0..t.rows.len() {
        let (Some(g), Some(nu), Some(e)) = (c_g[k], c_nu[k], eta[k]) else { continue };
        let offset = nu - half_matching_cnu(g);
        if offset.abs() < 1e-9 {
            skipped += 1;
            continue;
        }
        ensure((e > 1.0) == (offset > 0.0), || format!("eta = {e} at C_g={g}, C_nu={nu}"))?;
        checked += 1;
    }
    Ok(format!("fig2b: {checked} stable points on the expected side ({skipped} on the curve)"))
}

/// Full width at half maximum of sampled `(x, y)`, by linear interpolation
/// at the outermost crossings.
fn sampled_fwhm(x: &[f64], y: &[f64]) -> Option<f64> {
    let peak = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let half = peak / 2.0;
    let first = y.iter().position(|&v| v >= half)?;
    let last = y.iter().rposition(|&v| v >= half)?;
    if first == 0 || last + 1 == y.len() {
        return None;
    }
    let cross = |i: usize, j: usize| x[i] + (half - y[i]) * (x[j] - x[i]) / (y[j] - y[i]);
    Some(cross(last, last + 1) - cross(first - 1, first))
}

fn appfig1_bandwidth(t: &ResultTable) -> Outcome {
    let (c_nu, omega, eta) = (column(t, "c_nu")?, column(t, "omega")?, column(t, "eta")?);
    let mut widths = Vec::new();
    for nu in [0.0, 0.1, 0.2] {
        let rows: Vec<usize> = (0..t.rows.len()).filter(|&k| c_nu[k] == Some(nu)).collect();
        let x: Vec<f64> = rows.iter().map(|&k| omega[k].unwrap_or(f64::NAN)).collect();
        let y: Vec<f64> = rows.iter().map(|&k| eta[k].unwrap_or(f64::NAN)).collect();
        let w = sampled_fwhm(&x, &y).ok_or(format!("no FWHM at C_nu={nu}"))?;
        let exact = bandwidth_fwhm(&SystemParams::from_cooperativities_with_rates(0.1, nu, 100.0, 0.2)).map_err(err)?;
        ensure((w - exact).abs() < 1e-3 * exact, || format!("sampled FWHM {w} vs {exact} at C_nu={nu}"))?;
        widths.push(w);
    }
    ensure(widths.windows(2).all(|w| w[1] < w[0]), || format!("FWHM not decreasing: {widths:?}"))?;
    Ok(format!("appfig1: FWHM {widths:.5?}"))
}

/// Rows of a squeezed-frame table at one `(eliminate_noise, beta)` cut, as
/// `(c_g, q_lb)` pairs.
fn capacity_cut(t: &ResultTable, eliminate: f64, beta: f64) -> std::result::Result<Vec<(f64, f64)>, String> {
    let (el, b, c_g, q) = (column(t, "eliminate_noise")?, column(t, "beta")?, column(t, "c_g")?, column(t, "q_lb")?);
    let cut: Vec<(f64, f64)> = (0..t.rows.len())
        .filter(|&k| el[k] == Some(eliminate) && b[k] == Some(beta))
        .filter_map(|k| Some((c_g[k]?, q[k]?)))
        .collect();
    ensure(!cut.is_empty(), || format!("empty cut at beta={beta}"))?;
    Ok(cut)
}

fn fig3c_optimum(t: &ResultTable) -> Outcome {
    let argmax = |cut: &[(f64, f64)]| cut.iter().copied().fold((f64::NAN, f64::NEG_INFINITY), |m, p| if p.1 > m.1 { p } else { m }).0;
    let mut parts = Vec::new();
    for eliminate in [0.0, 1.0] {
        let at0 = argmax(&capacity_cut(t, eliminate, 0.0)?);
        let at95 = argmax(&capacity_cut(t, eliminate, 0.95)?);
        ensure(at95 < at0, || format!("optimal C_g {at95} (beta=0.95) vs {at0} (beta=0), elimination={eliminate}"))?;
        parts.push(format!("{at95:.4} < {at0:.4}"));
    }
    Ok(format!("fig3c: optimal C_g {}", parts.join(", ")))
}

fn fig3d_interval(t: &ResultTable) -> Outcome {
    let width = |cut: &[(f64, f64)]| {
        let pos: Vec<f64> = cut.iter().filter(|p| p.1 > 0.0).map(|p| p.0).collect();
        pos.iter().copied().fold(f64::NEG_INFINITY, f64::max) - pos.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let without = width(&capacity_cut(t, 0.0, 0.95)?);
    let with = width(&capacity_cut(t, 1.0, 0.95)?);
    ensure(with > without, || format!("interval width {with} with elimination vs {without} without"))?;
    Ok(format!("fig3d: positive-capacity C_g width {with:.4} with elimination > {without:.4} without"))
}

pub fn figure_shapes() -> CheckResult {
    let run = || -> Outcome {
        let mut notes = Vec::new();
        let mut slowest = (Duration::ZERO, "");
        for info in list_presets() {
            let start = Instant::now();
            let t = run_sweep(&preset(info.name).map_err(err)?).map_err(err)?;
            let elapsed = start.elapsed();
            ensure(elapsed < Duration::from_secs(60), || format!("preset {} took {elapsed:?}", info.name))?;
            if elapsed > slowest.0 {
                slowest = (elapsed, info.name);
            }
            let note = match info.name {
                "fig2b" => fig2b_sign_change(&t)?,
                "appfig1" => appfig1_bandwidth(&t)?,
                "fig3c" => fig3c_optimum(&t)?,
                "fig3d" => fig3d_interval(&t)?,
                _ => continue,
            };
            notes.push(note);
        }
        notes.push(format!("slowest preset {} in {:.2?}", slowest.1, slowest.0));
        Ok(notes.join("; "))
    };
    finish("figure shapes and preset runtimes", run())
}

pub fn thermal_occupancy() -> CheckResult {
    let l = thermal_occupancy_log10(10e9, 1e-3);
    let outcome = if (-215.0..=-195.0).contains(&l) {
        Ok(format!("log10 n_th(10 GHz, 1 mK) = {l:.3}"))
    } else {
        Err(format!("log10 n_th(10 GHz, 1 mK) = {l}"))
    };
    finish("thermal occupancy at millikelvin", outcome)
}

/// Every check, in order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        transmissivity_oracle(),
        symplecticity(),
        half_matching(),
        half_transmissivity_crossings(),
        capacity_formula(),
        bloch_messiah_decomposition(),
        bogoliubov_identities(),
        figure_shapes(),
        thermal_occupancy(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_fwhm_of_a_triangle() {
        let x: Vec<f64> = (0..5).map(|k| k as f64).collect();
        let y = [0.0, 0.5, 1.0, 0.5, 0.0];
        assert_eq!(sampled_fwhm(&x, &y), Some(2.0));
        assert_eq!(sampled_fwhm(&x, &[1.0, 1.0, 1.0, 1.0, 1.0]), None);
    }

    #[test]
    fn bisection_finds_sqrt2() {
        assert!((bisect(|x| x * x - 2.0, 0.0, 2.0) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn display_line() {
        let r = CheckResult { name: "x", passed: false, detail: "y".into() };
        assert_eq!(r.to_string(), "FAIL x: y");
    }

    #[test]
    fn cheap_checks_pass() {
        for r in [half_transmissivity_crossings(), capacity_formula(), bogoliubov_identities(), thermal_occupancy()] {
            assert!(r.passed, "{r}");
        }
    }
}
