//! Heisenberg-Langevin model of the driven electro-optic transducer.
//!
//! The intracavity vector is `(a, a†, b, b†)` with `a` optical and `b`
//! microwave. Inputs and outputs are ordered by [`MODEL_PORTS`]: optical
//! coupling, optical intrinsic, microwave coupling, microwave intrinsic.
//! Frequency-domain operators follow `O[w] = ∫ O(t) e^{i w t} dt`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::GaussianChannel;
use crate::symplectic::{
    ladder_to_quadrature, CovarianceMatrix, LadderMatrix, Port, QuadratureMatrix, RealMatrix, MODEL_PORTS,
};

/// Pump phase at which the coupling-port scattering matrix takes the
/// block form with squeezing along `x^a`/`p^b` (the textbook form used by the
/// half-matching and decomposition fixtures).
pub const CANONICAL_PUMP_PHASE: f64 = -FRAC_PI_2;

/// Total optical dissipation rate used when a point is specified by
/// cooperativities only.
pub const DEFAULT_KAPPA_O: f64 = 100.0;
/// Total microwave dissipation rate used when a point is specified by
/// cooperativities only.
pub const DEFAULT_KAPPA_E: f64 = 0.2;

/// Resolvent condition number above which the scattering matrix is refused.
pub const MAX_CONDITION: f64 = 1e12;
/// Condition number above which results are flagged as ill conditioned.
pub const FLAG_CONDITION: f64 = MAX_CONDITION / 10.0;

/// Physical parameters of the transducer.
///
/// Rates share one (arbitrary) unit. `delta_o` and `delta_e` are the effective
/// detunings in the frame rotating at half the pump frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub g: f64,
    pub nu: f64,
    pub theta: f64,
    pub kappa_o: f64,
    pub kappa_e: f64,
    pub zeta_o: f64,
    pub zeta_e: f64,
    pub delta_o: f64,
    pub delta_e: f64,
    pub n_th: f64,
}

impl SystemParams {
    /// On-resonance, unit-extraction point at the given cooperativities.
    pub fn from_cooperativities(c_g: f64, c_nu: f64) -> Self {
        Self::from_cooperativities_with_rates(c_g, c_nu, DEFAULT_KAPPA_O, DEFAULT_KAPPA_E)
    }

    pub fn from_cooperativities_with_rates(c_g: f64, c_nu: f64, kappa_o: f64, kappa_e: f64) -> Self {
        Self {
            g: (c_g.max(0.0) * kappa_o * kappa_e).sqrt() / 2.0,
            nu: c_nu.max(0.0).sqrt() * kappa_e / 2.0,
            theta: CANONICAL_PUMP_PHASE,
            kappa_o,
            kappa_e,
            zeta_o: 1.0,
            zeta_e: 1.0,
            delta_o: 0.0,
            delta_e: 0.0,
            n_th: 0.0,
        }
    }

    pub fn with_extraction(mut self, zeta_o: f64, zeta_e: f64) -> Self {
        self.zeta_o = zeta_o;
        self.zeta_e = zeta_e;
        self
    }

    pub fn with_detuning(mut self, delta_o: f64, delta_e: f64) -> Self {
        self.delta_o = delta_o;
        self.delta_e = delta_e;
        self
    }

    pub fn with_phase(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_thermal(mut self, n_th: f64) -> Self {
        self.n_th = n_th;
        self
    }

    /// `C_g = 4 g^2 / (kappa_o kappa_e)`
    pub fn c_g(&self) -> f64 {
        4.0 * self.g * self.g / (self.kappa_o * self.kappa_e)
    }

    /// `C_nu = 4 nu^2 / kappa_e^2`
    pub fn c_nu(&self) -> f64 {
        4.0 * self.nu * self.nu / (self.kappa_e * self.kappa_e)
    }

    pub fn chi_o(&self) -> f64 {
        self.delta_o / self.kappa_o
    }

    pub fn chi_e(&self) -> f64 {
        self.delta_e / self.kappa_e
    }

    pub fn is_resonant(&self) -> bool {
        self.delta_o == 0.0 && self.delta_e == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.g, self.nu, self.theta, self.kappa_o, self.kappa_e, self.zeta_o, self.zeta_e, self.delta_o,
            self.delta_e, self.n_th,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Precondition("parameters must be finite".into()));
        }
        if self.kappa_o <= 0.0 || self.kappa_e <= 0.0 {
            return Err(Error::Precondition("dissipation rates must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.zeta_o) || !(0.0..=1.0).contains(&self.zeta_e) {
            return Err(Error::Precondition("extraction ratios must lie in [0, 1]".into()));
        }
        if self.nu < 0.0 || self.g < 0.0 {
            return Err(Error::Precondition("g and nu must be nonnegative".into()));
        }
        if self.n_th < 0.0 {
            return Err(Error::Precondition("thermal occupancy must be nonnegative".into()));
        }
        Ok(())
    }

    /// Whether every eigenvalue of the dynamical matrix has negative real part.
    pub fn is_dynamically_stable(&self) -> Result<bool> {
        Ok(dynamical_eigenvalues(self)?.iter().all(|z| z.re < 0.0))
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const INTRACAVITY: [Port; 2] = [Port::Mode(0), Port::Mode(1)];

/// Drift matrix `A` of `d/dt (a, a†, b, b†) = A (a, a†, b, b†) + B a_in`.
pub fn build_dynamical_matrix(p: &SystemParams) -> Result<LadderMatrix> {
    p.validate()?;
    let (ko, ke) = (p.kappa_o / 2.0, p.kappa_e / 2.0);
    let pump = 2.0 * p.nu;
    let mut a = DMatrix::<Complex64>::zeros(4, 4);
    a[(0, 0)] = c(-ko, p.delta_o);
    a[(1, 1)] = c(-ko, -p.delta_o);
    a[(2, 2)] = c(-ke, -p.delta_e);
    a[(3, 3)] = c(-ke, p.delta_e);
    a[(0, 2)] = c(0.0, -p.g);
    a[(2, 0)] = c(0.0, -p.g);
    a[(1, 3)] = c(0.0, p.g);
    a[(3, 1)] = c(0.0, p.g);
    // -i 2 nu e^{-i theta} and i 2 nu e^{i theta}
    a[(2, 3)] = c(0.0, -pump) * Complex64::from_polar(1.0, -p.theta);
    a[(3, 2)] = c(0.0, pump) * Complex64::from_polar(1.0, p.theta);
    LadderMatrix::new(a, INTRACAVITY.to_vec(), INTRACAVITY.to_vec())
}

/// Eigenvalues of the drift matrix.
pub fn dynamical_eigenvalues(p: &SystemParams) -> Result<Vec<Complex64>> {
    // The quadrature-basis drift matrix is real and similar to A.
    let a = ladder_to_quadrature(&build_dynamical_matrix(p)?)?;
    Ok(a.entries().complex_eigenvalues().iter().copied().collect())
}

/// Coupling matrix `B` between intracavity modes and the eight port fields.
fn coupling_matrix(p: &SystemParams) -> DMatrix<Complex64> {
    let rates = [
        (p.zeta_o * p.kappa_o).sqrt(),
        ((1.0 - p.zeta_o) * p.kappa_o).sqrt(),
        (p.zeta_e * p.kappa_e).sqrt(),
        ((1.0 - p.zeta_e) * p.kappa_e).sqrt(),
    ];
    let mut b = DMatrix::<Complex64>::zeros(4, 8);
    for (port, rate) in rates.iter().enumerate() {
        // ports 0, 1 couple to the optical mode, 2, 3 to the microwave mode
        let mode = port / 2;
        b[(2 * mode, 2 * port)] = c(*rate, 0.0);
        b[(2 * mode + 1, 2 * port + 1)] = c(*rate, 0.0);
    }
    b
}

/// Frequency-domain scattering matrix together with the conditioning of the
/// resolvent it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringMatrix {
    ladder: LadderMatrix,
    condition: f64,
}

impl ScatteringMatrix {
    pub fn ladder(&self) -> &LadderMatrix {
        &self.ladder
    }

    pub fn quadrature(&self) -> Result<QuadratureMatrix> {
        ladder_to_quadrature(&self.ladder)
    }

    /// 4x4 quadrature matrix between the two coupling ports.
    pub fn coupling_block(&self) -> Result<QuadratureMatrix> {
        let ports = [Port::OpticalCoupling, Port::MicrowaveCoupling];
        self.quadrature()?.select(&ports, &ports)
    }

    pub fn resolvent_condition(&self) -> f64 {
        self.condition
    }

    pub fn is_ill_conditioned(&self) -> bool {
        self.condition > FLAG_CONDITION
    }
}

/// `S_a[w] = B^T (-i w D_4 - A)^-1 B - I_8` with `D_4 = diag(1, -1, 1, -1)`.
pub fn scattering_ladder(p: &SystemParams, omega: f64) -> Result<ScatteringMatrix> {
    let a = build_dynamical_matrix(p)?;
    let mut resolvent = -a.entries().clone();
    for k in 0..4 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        resolvent[(k, k)] += c(0.0, -omega * sign);
    }

    let sv = resolvent.clone().singular_values();
    let (max, min) = sv.iter().fold((0.0_f64, f64::INFINITY), |(hi, lo), &s| (hi.max(s), lo.min(s)));
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(Error::Singular { condition });
    }
    let inverse = resolvent.try_inverse().ok_or(Error::Singular { condition })?;

    let b = coupling_matrix(p);
    let s = b.transpose() * inverse * &b - DMatrix::<Complex64>::identity(8, 8);
    Ok(ScatteringMatrix {
        ladder: LadderMatrix::new(s, MODEL_PORTS.to_vec(), MODEL_PORTS.to_vec())?,
        condition,
    })
}

/// State of the field entering one port.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PortBath {
    Vacuum,
    Thermal { n: f64 },
    /// Squeezing factor `lambda`, squeezing phase `phi`, underlying thermal
    /// occupancy `n`.
    Squeezed { lambda: f64, phi: f64, n: f64 },
}

impl PortBath {
    pub fn covariance(&self) -> Result<CovarianceMatrix> {
        match *self {
            PortBath::Vacuum => Ok(CovarianceMatrix::vacuum(1)),
            PortBath::Thermal { n } => CovarianceMatrix::thermal(1, n),
            PortBath::Squeezed { lambda, phi, n } => CovarianceMatrix::squeezed_thermal(lambda, phi, n),
        }
    }
}

/// Which microwave environment ports receive an injected squeezed bath.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SqueezeTarget {
    #[default]
    BothMicrowavePorts,
    CouplingPortOnly,
}

/// Bath assignment for all four ports; channel extraction reads the ones
/// that act as environment for the chosen direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    baths: [PortBath; 4],
}

impl Default for BathSpec {
    fn default() -> Self {
        Self::vacuum()
    }
}

fn port_index(port: Port) -> usize {
    MODEL_PORTS.iter().position(|&p| p == port).expect("only model ports carry baths")
}

impl BathSpec {
    pub fn vacuum() -> Self {
        Self { baths: [PortBath::Vacuum; 4] }
    }

    /// Every port thermal with the same occupancy.
    pub fn uniform_thermal(n: f64) -> Self {
        Self { baths: [PortBath::Thermal { n }; 4] }
    }

    /// Optical ports in vacuum, microwave ports thermal with `p.n_th`.
    pub fn from_params(p: &SystemParams) -> Self {
        let mw = if p.n_th > 0.0 { PortBath::Thermal { n: p.n_th } } else { PortBath::Vacuum };
        Self { baths: [PortBath::Vacuum, PortBath::Vacuum, mw, mw] }
    }

    /// Replace the microwave environment with a squeezed thermal bath.
    pub fn with_squeezed_microwave(mut self, lambda: f64, phi: f64, n: f64, target: SqueezeTarget) -> Self {
        let bath = PortBath::Squeezed { lambda, phi, n };
        self.baths[2] = bath;
        if target == SqueezeTarget::BothMicrowavePorts {
            self.baths[3] = bath;
        }
        self
    }

    pub fn set(mut self, port: Port, bath: PortBath) -> Self {
        self.baths[port_index(port)] = bath;
        self
    }

    pub fn get(&self, port: Port) -> PortBath {
        self.baths[port_index(port)]
    }

    /// Covariance of the environment ports of `dir`, in port order.
    pub fn environment_covariance(&self, dir: ChannelDirection) -> Result<CovarianceMatrix> {
        let baths: Vec<PortBath> = dir.environment_ports().iter().map(|&p| self.get(p)).collect();
        assemble_environment_covariance(&baths)
    }
}

/// Block-diagonal covariance of independent port baths.
pub fn assemble_environment_covariance(baths: &[PortBath]) -> Result<CovarianceMatrix> {
    let blocks = baths
        .iter()
        .enumerate()
        .map(|(port, b)| b.covariance().map_err(|_| Error::Unphysical { port }))
        .collect::<Result<Vec<_>>>()?;
    CovarianceMatrix::direct_sum(&blocks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelDirection {
    OpticalToMicrowave,
    MicrowaveToOptical,
}

impl ChannelDirection {
    pub fn signal_input(&self) -> Port {
        match self {
            Self::OpticalToMicrowave => Port::OpticalCoupling,
            Self::MicrowaveToOptical => Port::MicrowaveCoupling,
        }
    }

    pub fn signal_output(&self) -> Port {
        match self {
            Self::OpticalToMicrowave => Port::MicrowaveCoupling,
            Self::MicrowaveToOptical => Port::OpticalCoupling,
        }
    }

    pub fn environment_ports(&self) -> Vec<Port> {
        let signal = self.signal_input();
        MODEL_PORTS.iter().copied().filter(|&p| p != signal).collect()
    }

    pub fn reversed(&self) -> Self {
        match self {
            Self::OpticalToMicrowave => Self::MicrowaveToOptical,
            Self::MicrowaveToOptical => Self::OpticalToMicrowave,
        }
    }
}

/// Single-mode Gaussian channel `V -> T V T^T + N` seen by the signal.
pub fn extract_channel(
    p: &SystemParams,
    omega: f64,
    dir: ChannelDirection,
    baths: &BathSpec,
) -> Result<GaussianChannel> {
    let sx = scattering_ladder(p, omega)?.quadrature()?;
    channel_from_scattering(&sx, dir, baths)
}

/// Channel from an already computed 8x8 quadrature scattering matrix.
pub fn channel_from_scattering(
    sx: &QuadratureMatrix,
    dir: ChannelDirection,
    baths: &BathSpec,
) -> Result<GaussianChannel> {
    let out = [dir.signal_output()];
    let t = sx.select(&out, &[dir.signal_input()])?;
    let e = sx.select(&out, &dir.environment_ports())?;
    let v = baths.environment_covariance(dir)?;
    let n: RealMatrix = e.entries() * v.matrix() * e.entries().transpose();
    // symmetrize away rounding
    let n = (&n + n.transpose()) * 0.5;
    let n = QuadratureMatrix::new(n, out.to_vec(), out.to_vec())?;
    GaussianChannel::new(t, n)
}
