use std::collections::BTreeMap;

use rayon::prelude::*;
use transduction_core::bogoliubov::{
    bogoliubov_channel_metrics, build_frame, detuned_params_with_rates, rwa_validity,
};
use transduction_core::metrics::{stability_check, ChannelMetrics};
use transduction_core::model::{
    channel_from_scattering, scattering_ladder, BathSpec, ChannelDirection, SystemParams,
};
use transduction_core::Error;

use crate::config::{Direction, SweepConfig, PARAMETERS};
use crate::error::{LabError, Result};
use crate::table::{format_value, ResultTable};

pub const THREADS_ENV: &str = "TRANSDUCTION_LAB_THREADS";

pub const SCATTERING_COLUMNS: [&str; 6] = ["eta", "n_e", "sigma_sq", "q_lb", "stable", "ill_conditioned"];

pub const SQUEEZED_COLUMNS: [&str; 13] = [
    "eta",
    "n_e",
    "sigma_sq",
    "q_lb",
    "stable",
    "beta_capped",
    "coupling_enhancement",
    "cooperativity_enhancement",
    "c_s",
    "n_nu",
    "rwa_coupling_ratio",
    "rwa_detuning_ratio",
    "rwa_valid",
];

type Values<'a> = BTreeMap<&'a str, f64>;

fn flag(b: bool) -> Option<f64> {
    Some(if b { 1.0 } else { 0.0 })
}

fn metric_cells(m: &ChannelMetrics) -> [Option<f64>; 4] {
    [Some(m.eta), m.n_e(), m.sigma_sq(), Some(m.q_lb)]
}

fn config_or_numerical(e: Error) -> LabError {
    match e {
        Error::Precondition(msg) | Error::Dimension(msg) => LabError::Config(msg),
        other => LabError::Numerical(other),
    }
}

fn require_nonnegative(v: &Values, names: &[&str]) -> Result<()> {
    for n in names {
        if let Some(x) = v.get(n) {
            if *x < 0.0 {
                return Err(LabError::config(format!("'{n}' must be nonnegative, got {x}")));
            }
        }
    }
    Ok(())
}

pub fn scattering_params(v: &Values) -> Result<SystemParams> {
    require_nonnegative(v, &["c_g", "c_nu"])?;
    let p = SystemParams::from_cooperativities_with_rates(v["c_g"], v["c_nu"], v["kappa_o"], v["kappa_e"])
        .with_extraction(v["zeta_o"], v["zeta_e"])
        .with_detuning(v["chi_o"] * v["kappa_o"], v["chi_e"] * v["kappa_e"])
        .with_phase(v["theta"])
        .with_thermal(v["n_th"]);
    p.validate().map_err(config_or_numerical)?;
    Ok(p)
}

pub fn squeezed_params(v: &Values) -> Result<SystemParams> {
    require_nonnegative(v, &["c_g", "beta"])?;
    let p = detuned_params_with_rates(v["c_g"], v["beta"], v["zeta_o"], v["zeta_e"], v["kappa_o"], v["kappa_e"])
        .with_thermal(v["n_th"]);
    p.validate().map_err(config_or_numerical)?;
    Ok(p)
}

fn is_stable(p: &SystemParams) -> Result<bool> {
    let dynamic = p.is_dynamically_stable().map_err(config_or_numerical)?;
    Ok(dynamic && (!p.is_resonant() || stability_check(p.c_g(), p.c_nu())))
}

/// Full scattering-model metrics at one point, in [`SCATTERING_COLUMNS`] order.
pub fn evaluate_scattering(v: &Values, dir: ChannelDirection) -> Result<Vec<Option<f64>>> {
    let p = scattering_params(v)?;
    let mut row = vec![None; SCATTERING_COLUMNS.len()];
    if !is_stable(&p)? {
        row[4] = flag(false);
        return Ok(row);
    }
    row[4] = flag(true);
    let s = match scattering_ladder(&p, v["omega"]) {
        Ok(s) => s,
        Err(Error::Singular { .. }) => {
            row[5] = flag(true);
            return Ok(row);
        }
        Err(e) => return Err(config_or_numerical(e)),
    };
    row[5] = flag(s.is_ill_conditioned());
    let sx = s.quadrature()?;
    let ch = channel_from_scattering(&sx, dir, &BathSpec::from_params(&p))?;
    row[..4].copy_from_slice(&metric_cells(&ChannelMetrics::from_channel(&ch)));
    Ok(row)
}

/// Squeezed-frame metrics at one point, in [`SQUEEZED_COLUMNS`] order.
pub fn evaluate_squeezed(v: &Values) -> Result<Vec<Option<f64>>> {
    let p = squeezed_params(v)?;
    let mut row = vec![None; SQUEEZED_COLUMNS.len()];
    let frame = match build_frame(&p) {
        Ok(f) => f,
        Err(Error::OutOfRegime { .. }) => {
            row[4] = flag(false);
            return Ok(row);
        }
        Err(e) => return Err(config_or_numerical(e)),
    };
    let eliminate = v["eliminate_noise"] != 0.0;
    let m = bogoliubov_channel_metrics(&p, eliminate)?;
    let rwa = rwa_validity(&p, &frame);
    row[..4].copy_from_slice(&metric_cells(&m));
    row[4] = flag(true);
    row[5] = flag(frame.beta_capped);
    row[6] = Some(frame.r.cosh());
    row[7] = Some(frame.r.cosh().powi(2));
    row[8] = Some(frame.c_s);
    row[9] = Some(if eliminate {
        p.n_th
    } else {
        transduction_core::bogoliubov::amplified_noise(frame.r, p.n_th)
    });
    row[10] = Some(rwa.coupling_ratio);
    row[11] = Some(rwa.detuning_ratio);
    row[12] = flag(rwa.valid());
    Ok(row)
}

fn require_finite(v: &Values, row: &[Option<f64>]) -> Result<()> {
    if row.iter().flatten().any(|x| x.is_nan()) {
        let at: Vec<String> = v.iter().map(|(k, x)| format!("{k}={x:?}")).collect();
        return Err(LabError::NonFinite(format!("metrics are undefined at {}", at.join(", "))));
    }
    Ok(())
}

/// Parallelism cap from `TRANSDUCTION_LAB_THREADS`; `None` lets rayon decide.
pub fn thread_limit() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(LabError::config(format!("{THREADS_ENV} must be a positive integer, got '{s}'"))),
            Ok(n) => Ok(Some(n)),
        },
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<ResultTable> {
    run_sweep_with_threads(cfg, thread_limit()?)
}

/// Evaluates every grid point; rows follow the grid order regardless of
/// `threads`.
pub fn run_sweep_with_threads(cfg: &SweepConfig, threads: Option<usize>) -> Result<ResultTable> {
    cfg.validate()?;
    let squeezed = cfg.uses_beta();
    let metrics: &[&str] = if squeezed { &SQUEEZED_COLUMNS } else { &SCATTERING_COLUMNS };
    let mut columns: Vec<String> = cfg.axes.iter().map(|a| a.name.clone()).collect();
    columns.extend(metrics.iter().map(|m| m.to_string()));

    let dir = cfg.direction.channel();
    let eval = |k: usize| -> Result<Vec<Option<f64>>> {
        let v = cfg.point(k);
        let mut row: Vec<Option<f64>> = cfg.axes.iter().map(|a| Some(v[a.name.as_str()])).collect();
        row.extend(if squeezed { evaluate_squeezed(&v)? } else { evaluate_scattering(&v, dir)? });
        require_finite(&v, &row)?;
        Ok(row)
    };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| LabError::config(format!("thread pool: {e}")))?;
    let rows = pool.install(|| (0..cfg.n_points()).into_par_iter().map(eval).collect::<Result<Vec<_>>>())?;

    Ok(ResultTable { metadata: metadata(cfg, squeezed), columns, rows })
}

fn metadata(cfg: &SweepConfig, squeezed: bool) -> Vec<(String, String)> {
    let mut meta = vec![
        ("tool".to_string(), format!("transduction-lab {}", env!("CARGO_PKG_VERSION"))),
        ("preset".to_string(), cfg.preset.clone().unwrap_or_else(|| "none".into())),
        ("evaluation".to_string(), if squeezed { "squeezed-frame" } else { "scattering" }.to_string()),
        ("direction".to_string(), Direction::as_str(cfg.direction).to_string()),
    ];
    for a in &cfg.axes {
        let first = a.values.first().copied().unwrap_or(f64::NAN);
        let last = a.values.last().copied().unwrap_or(f64::NAN);
        let mut desc = format!("{} values from {} to {}", a.values.len(), format_value(first), format_value(last));
        if let Some(label) = &a.label {
            desc = format!("{label}; {desc}");
        }
        meta.push((format!("axis.{}", a.name), desc));
    }
    let v = cfg.point(0);
    for (name, _) in PARAMETERS {
        if cfg.axes.iter().any(|a| a.name == name) {
            continue;
        }
        if let Some(x) = v.get(name) {
            meta.push((format!("param.{name}"), format_value(*x)));
        }
    }
    meta
}

/// All metrics at a single parameter set, as `(name, value)` pairs.
pub fn evaluate_point(cfg: &SweepConfig) -> Result<Vec<(String, Option<f64>)>> {
    cfg.validate()?;
    if cfg.n_points() != 1 {
        return Err(LabError::config("a point evaluation cannot have swept axes"));
    }
    let v = cfg.point(0);
    let mut out: Vec<(String, Option<f64>)> = Vec::new();
    if cfg.uses_beta() {
        let row = evaluate_squeezed(&v)?;
        require_finite(&v, &row)?;
        out.extend(SQUEEZED_COLUMNS.iter().map(|c| c.to_string()).zip(row));
        // full scattering model at the Bogoliubov resonance, for comparison
        let p = squeezed_params(&v)?;
        if let Ok(frame) = build_frame(&p) {
            let m = scattering_ladder(&p, frame.omega_s)
                .and_then(|s| s.quadrature())
                .and_then(|sx| channel_from_scattering(&sx, cfg.direction.channel(), &BathSpec::from_params(&p)))
                .map(|ch| ChannelMetrics::from_channel(&ch));
            if let Ok(m) = m {
                let names = ["model_eta", "model_n_e", "model_sigma_sq", "model_q_lb"];
                out.extend(names.iter().map(|n| n.to_string()).zip(metric_cells(&m)));
            }
            out.push(("omega_s".into(), Some(frame.omega_s)));
        }
    } else {
        let row = evaluate_scattering(&v, cfg.direction.channel())?;
        require_finite(&v, &row)?;
        out.extend(SCATTERING_COLUMNS.iter().map(|c| c.to_string()).zip(row));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Axis;

    fn cfg(axes: Vec<Axis>, fixed: &[(&str, f64)]) -> SweepConfig {
        let mut c = SweepConfig::default();
        for (k, v) in fixed {
            c.set_fixed(k, *v).unwrap();
        }
        for a in axes {
            c.set_axis(a);
        }
        c
    }

    #[test]
    fn resonant_point_matches_closed_form() {
        let c = cfg(vec![], &[("c_g", 0.5), ("c_nu", 0.1)]);
        let out = evaluate_point(&c).unwrap();
        let eta = transduction_core::metrics::eta_closed_form(0.5, 0.1, 1.0, 1.0).unwrap();
        assert!((out[0].1.unwrap() - eta).abs() < 1e-12);
        assert_eq!(out[4], ("stable".into(), Some(1.0)));
    }

    #[test]
    fn unstable_points_are_kept_and_flagged() {
        let c = cfg(vec![Axis::list("c_nu", &[0.1, 5.0]).unwrap()], &[("c_g", 0.5)]);
        let t = run_sweep_with_threads(&c, Some(1)).unwrap();
        assert_eq!(t.rows.len(), 2);
        let stable = t.values("stable").unwrap();
        assert_eq!(stable, vec![Some(1.0), Some(0.0)]);
        assert_eq!(t.values("eta").unwrap()[1], None);
    }

    #[test]
    fn invalid_values_are_config_errors() {
        let c = cfg(vec![Axis::list("zeta_o", &[0.5, 1.5]).unwrap()], &[("c_g", 0.5)]);
        assert!(matches!(run_sweep_with_threads(&c, Some(1)), Err(LabError::Config(_))));
        let c = cfg(vec![], &[("c_g", -1.0)]);
        assert!(matches!(evaluate_point(&c), Err(LabError::Config(_))));
    }

    #[test]
    fn squeezed_frame_columns() {
        let c = cfg(vec![], &[("c_g", 0.1), ("beta", 0.8)]);
        let out: BTreeMap<String, Option<f64>> = evaluate_point(&c).unwrap().into_iter().collect();
        assert!((out["cooperativity_enhancement"].unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!((out["n_nu"].unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(out["rwa_valid"], Some(1.0));
        assert!(out.contains_key("model_eta"));
    }

    #[test]
    fn overflow_is_a_numerical_error() {
        let c = cfg(vec![], &[("c_g", 1e300)]);
        let e = evaluate_point(&c).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{e}");
    }

    #[test]
    fn out_of_regime_beta_is_flagged() {
        let c = cfg(vec![Axis::list("beta", &[0.5, 1.2]).unwrap()], &[("c_g", 0.1)]);
        let t = run_sweep_with_threads(&c, Some(1)).unwrap();
        assert_eq!(t.values("stable").unwrap(), vec![Some(1.0), Some(0.0)]);
    }

    #[test]
    fn parallelism_does_not_change_output() {
        let c = cfg(
            vec![Axis::linear("c_g", 0.01, 2.0, 13).unwrap(), Axis::linear("c_nu", 0.0, 1.0, 11).unwrap()],
            &[("zeta_o", 0.9)],
        );
        let one = run_sweep_with_threads(&c, Some(1)).unwrap();
        let four = run_sweep_with_threads(&c, Some(4)).unwrap();
        assert_eq!(one.to_csv(), four.to_csv());
    }

    #[test]
    fn metadata_lists_fixed_parameters() {
        let c = cfg(vec![Axis::list("c_g", &[0.1, 0.2]).unwrap()], &[("zeta_o", 0.9)]);
        let t = run_sweep_with_threads(&c, Some(1)).unwrap();
        assert_eq!(t.meta("param.zeta_o"), Some("9.0000000000000002e-1"));
        assert!(t.meta("param.c_g").is_none());
        assert_eq!(t.meta("evaluation"), Some("scattering"));
    }
}
