//! Named sweeps, one per figure of the transducer study. Heat maps default
//! to 200x200 grids.

use crate::config::{Axis, SweepConfig};
use crate::error::{LabError, Result};

pub const BETA_LABEL: &str = "β = 2ν/Δ_e";

const MAP: usize = 200;

pub struct PresetInfo {
    pub name: &'static str,
    pub description: &'static str,
}

pub const PRESETS: [PresetInfo; 16] = [
    PresetInfo { name: "fig2a", description: "transmissivity vs C_g for C_nu in {0, 0.1, 0.2}, unit extraction" },
    PresetInfo { name: "fig2b", description: "capacity bound map over (C_g, C_nu), unit extraction" },
    PresetInfo { name: "fig2c", description: "added noise over (zeta_o, zeta_e) at C_g=0.14, C_nu=0.16" },
    PresetInfo { name: "fig2d", description: "capacity bound map over (C_g, C_nu) with zeta_o=0.95, zeta_e=0.99" },
    PresetInfo {
        name: "fig2e",
        description: "transmissivity vs detunings (chi_o, chi_e) at C_g=0.4, C_nu=0.15, zeta_e=0.99, zeta_o=0.95",
    },
    PresetInfo { name: "fig3a", description: "coupling and cooperativity enhancement and amplified noise vs beta" },
    PresetInfo { name: "fig3b", description: "squeezed-frame transmissivity vs C_g for beta in {0, 0.8, 0.95}" },
    PresetInfo {
        name: "fig3c",
        description: "capacity bound vs C_g for beta in {0, 0.8, 0.95}, with and without noise elimination",
    },
    PresetInfo {
        name: "fig3d",
        description: "capacity bound vs C_g for beta in {0, 0.95}, zeta_e=0.97, zeta_o=0.9, with and without elimination",
    },
    PresetInfo { name: "appfig1", description: "transmissivity spectrum at C_g=0.1 for C_nu in {0, 0.1, 0.2}" },
    PresetInfo { name: "fig5a", description: "capacity bound map over (C_g, beta), unit extraction, amplified noise" },
    PresetInfo { name: "fig5b", description: "capacity bound cuts vs C_g, unit extraction, with and without elimination" },
    PresetInfo { name: "fig5c", description: "capacity bound map over (C_g, beta), unit extraction, noise eliminated" },
    PresetInfo { name: "fig5d", description: "capacity bound map over (C_g, beta), zeta_e=0.97, zeta_o=0.9, amplified noise" },
    PresetInfo { name: "fig5e", description: "capacity bound cuts vs C_g, zeta_e=0.97, zeta_o=0.9, with and without elimination" },
    PresetInfo { name: "fig5f", description: "capacity bound map over (C_g, beta), zeta_e=0.97, zeta_o=0.9, noise eliminated" },
];

pub fn list_presets() -> &'static [PresetInfo] {
    &PRESETS
}

fn beta_axis(values: &[f64]) -> Result<Axis> {
    Ok(Axis::list("beta", values)?.with_label(BETA_LABEL))
}

fn base(name: &str, axes: Vec<Axis>, fixed: &[(&str, f64)]) -> Result<SweepConfig> {
    let mut cfg = SweepConfig { preset: Some(name.to_string()), ..Default::default() };
    for (k, v) in fixed {
        cfg.set_fixed(k, *v)?;
    }
    for a in axes {
        cfg.set_axis(a);
    }
    Ok(cfg)
}

const LOSSY_FRAME: [(&str, f64); 2] = [("zeta_e", 0.97), ("zeta_o", 0.9)];

pub fn preset(name: &str) -> Result<SweepConfig> {
    let c_g_line = || Axis::linear("c_g", 0.001, 1.0, MAP);
    let c_g_map = || Axis::linear("c_g", 0.001, 2.0, MAP);
    let c_nu_map = || Axis::linear("c_nu", 0.0, 1.0, MAP);
    let c_g_frame = || Axis::log("c_g", 1e-3, 3.0, MAP);
    let beta_map = || Ok::<_, LabError>(Axis::linear("beta", 0.0, 0.99, MAP)?.with_label(BETA_LABEL));
    let toggle = || Axis::list("eliminate_noise", &[0.0, 1.0]);
    match name {
        "fig2a" => base(name, vec![Axis::list("c_nu", &[0.0, 0.1, 0.2])?, c_g_line()?], &[]),
        "fig2b" => base(name, vec![c_g_map()?, c_nu_map()?], &[]),
        "fig2c" => base(
            name,
            vec![Axis::linear("zeta_o", 0.9, 1.0, MAP)?, Axis::linear("zeta_e", 0.9, 1.0, MAP)?],
            &[("c_g", 0.14), ("c_nu", 0.16)],
        ),
        "fig2d" => base(name, vec![c_g_map()?, c_nu_map()?], &[("zeta_o", 0.95), ("zeta_e", 0.99)]),
        "fig2e" => base(
            name,
            vec![Axis::linear("chi_o", -0.5, 0.5, MAP)?, Axis::linear("chi_e", -0.5, 0.5, MAP)?],
            &[("c_g", 0.4), ("c_nu", 0.15), ("zeta_e", 0.99), ("zeta_o", 0.95)],
        ),
        "fig3a" => base(name, vec![beta_map()?], &[("c_g", 0.1)]),
        "fig3b" => base(name, vec![beta_axis(&[0.0, 0.8, 0.95])?, c_g_frame()?], &[]),
        "fig3c" => base(name, vec![toggle()?, beta_axis(&[0.0, 0.8, 0.95])?, c_g_frame()?], &[]),
        "fig3d" => base(name, vec![toggle()?, beta_axis(&[0.0, 0.95])?, c_g_frame()?], &LOSSY_FRAME),
        "appfig1" => base(
            name,
            vec![Axis::list("c_nu", &[0.0, 0.1, 0.2])?, Axis::linear("omega", -0.4, 0.4, 801)?],
            &[("c_g", 0.1), ("kappa_o", 100.0), ("kappa_e", 0.2)],
        ),
        "fig5a" => base(name, vec![beta_map()?, c_g_frame()?], &[]),
        "fig5b" => base(name, vec![toggle()?, beta_axis(&[0.0, 0.8, 0.95])?, c_g_frame()?], &[]),
        "fig5c" => base(name, vec![beta_map()?, c_g_frame()?], &[("eliminate_noise", 1.0)]),
        "fig5d" => base(name, vec![beta_map()?, c_g_frame()?], &LOSSY_FRAME),
        "fig5e" => base(name, vec![toggle()?, beta_axis(&[0.0, 0.8, 0.95])?, c_g_frame()?], &LOSSY_FRAME),
        "fig5f" => base(
            name,
            vec![beta_map()?, c_g_frame()?],
            &[LOSSY_FRAME[0], LOSSY_FRAME[1], ("eliminate_noise", 1.0)],
        ),
        other => {
            let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
            Err(LabError::config(format!("unknown preset '{other}' (available: {})", names.join(", "))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_preset_builds_and_validates() {
        for info in list_presets() {
            let cfg = preset(info.name).unwrap();
            cfg.validate().unwrap();
            assert_eq!(cfg.preset.as_deref(), Some(info.name));
            assert!(cfg.n_points() <= MAP * MAP * 2, "{}", info.name);
        }
    }

    #[test]
    fn required_names_present() {
        for name in [
            "fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig3a", "fig3b", "fig3c", "fig3d", "appfig1", "fig5a",
            "fig5b", "fig5c", "fig5d", "fig5e", "fig5f",
        ] {
            assert!(list_presets().iter().any(|p| p.name == name), "{name}");
        }
    }

    #[test]
    fn caption_parameters() {
        let c = preset("fig2c").unwrap();
        assert_eq!((c.fixed["c_g"], c.fixed["c_nu"]), (0.14, 0.16));
        let d = preset("fig2d").unwrap();
        assert_eq!((d.fixed["zeta_o"], d.fixed["zeta_e"]), (0.95, 0.99));
        let d = preset("fig3d").unwrap();
        assert_eq!((d.fixed["zeta_e"], d.fixed["zeta_o"]), (0.97, 0.9));
        for name in ["fig5d", "fig5e", "fig5f"] {
            let c = preset(name).unwrap();
            assert_eq!((c.fixed["zeta_e"], c.fixed["zeta_o"]), (0.97, 0.9));
        }
    }

    #[test]
    fn beta_axes_are_labelled() {
        for name in ["fig3a", "fig3b", "fig3c", "fig3d", "fig5a", "fig5f"] {
            let cfg = preset(name).unwrap();
            let beta = cfg.axes.iter().find(|a| a.name == "beta").unwrap();
            assert_eq!(beta.label.as_deref(), Some(BETA_LABEL));
        }
    }

    #[test]
    fn unknown_preset_is_config_error() {
        assert!(matches!(preset("fig9"), Err(LabError::Config(_))));
    }
}
