//! Half impedance matching: the on-resonance quadrature relations, detection
//! of the half-matched scattering form, and the local squeezers that turn a
//! half-matched transducer into a perfect channel.
//!
//! All 4x4 matrices here act on `(x_a, p_a, x_b, p_b)`, with `a` the optical
//! and `b` the microwave coupling port.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{stability_check, GaussianChannel};
use crate::model::ChannelDirection;
use crate::symplectic::{is_symplectic, max_abs, QuadratureMatrix, RealMatrix};

/// Which quadrature of the microwave output is free of reflected input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReflectionlessBranch {
    /// `x_b,out` carries no `x_b,in` (r = C_g).
    X,
    /// `p_b,out` carries no `p_b,in` (1/r = C_g).
    P,
}

/// On-resonance input-output relations at unit extraction:
///
/// `x_b,out = x_transmission p_a,in + x_reflection x_b,in`
/// `p_b,out = p_transmission x_a,in + p_reflection p_b,in`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRelations {
    /// `r = (1 + C_g + 2 sqrt(C_nu)) / (1 + C_g - 2 sqrt(C_nu))`
    pub r: f64,
    pub x_transmission: f64,
    pub x_reflection: f64,
    pub p_transmission: f64,
    pub p_reflection: f64,
}

impl QuadratureRelations {
    /// The quadrature whose reflection is below `tol`, if exactly one is.
    pub fn reflectionless_branch(&self, tol: f64) -> Option<ReflectionlessBranch> {
        match (self.x_reflection.abs() < tol, self.p_reflection.abs() < tol) {
            (true, false) => Some(ReflectionlessBranch::X),
            (false, true) => Some(ReflectionlessBranch::P),
            _ => None,
        }
    }
}

pub fn quadrature_relations(c_g: f64, c_nu: f64) -> Result<QuadratureRelations> {
    if c_g < 0.0 || c_nu < 0.0 {
        return Err(Error::Precondition("cooperativities must be nonnegative".into()));
    }
    if !stability_check(c_g, c_nu) {
        return Err(Error::Unstable { c_g, c_nu });
    }
    let s = 2.0 * c_nu.sqrt();
    let r = (1.0 + c_g + s) / (1.0 + c_g - s);
    let k = c_g.sqrt() / (1.0 + c_g);
    Ok(QuadratureRelations {
        r,
        x_transmission: k * (1.0 + r),
        x_reflection: (r - c_g) / (1.0 + c_g),
        p_transmission: -k * (1.0 + 1.0 / r),
        p_reflection: (1.0 / r - c_g) / (1.0 + c_g),
    })
}

/// Phase-space rotation by a multiple of a quarter turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QuarterTurn(u8);

impl QuarterTurn {
    pub const ALL: [QuarterTurn; 4] = [QuarterTurn(0), QuarterTurn(1), QuarterTurn(2), QuarterTurn(3)];

    pub fn new(quarters: u8) -> Self {
        Self(quarters % 4)
    }

    pub fn quarters(&self) -> u8 {
        self.0
    }

    /// `[[cos t, -sin t], [sin t, cos t]]` with `t = k pi / 2`.
    pub fn matrix(&self) -> RealMatrix {
        let (c, s) = match self.0 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        RealMatrix::from_row_slice(2, 2, &[c, -s, s, c])
    }
}

/// Per-port rotations taking a scattering matrix to its canonical form,
/// `S' = F_out S F_in^T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Frame {
    pub a_in: QuarterTurn,
    pub b_in: QuarterTurn,
    pub a_out: QuarterTurn,
    pub b_out: QuarterTurn,
}

impl Frame {
    pub fn input_matrix(&self) -> RealMatrix {
        block_diag(&self.a_in.matrix(), &self.b_in.matrix())
    }

    pub fn output_matrix(&self) -> RealMatrix {
        block_diag(&self.a_out.matrix(), &self.b_out.matrix())
    }

    pub fn to_canonical(&self, s: &RealMatrix) -> RealMatrix {
        self.output_matrix() * s * self.input_matrix().transpose()
    }

    pub fn from_canonical(&self, s: &RealMatrix) -> RealMatrix {
        self.output_matrix().transpose() * s * self.input_matrix()
    }

    fn all() -> impl Iterator<Item = Frame> {
        QuarterTurn::ALL.into_iter().flat_map(|a_in| {
            QuarterTurn::ALL.into_iter().flat_map(move |b_in| {
                QuarterTurn::ALL.into_iter().flat_map(move |a_out| {
                    QuarterTurn::ALL.into_iter().map(move |b_out| Frame { a_in, b_in, a_out, b_out })
                })
            })
        })
    }
}

fn block_diag(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    let mut m = RealMatrix::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(a);
    m.view_mut((2, 2), (2, 2)).copy_from(b);
    m
}

/// Half-matched scattering matrix in canonical form:
///
/// ```text
/// x_a,out = x_b,in / xi_r
/// p_a,out = xi_r p_b,in - gamma_r p_a,in
/// x_b,out = xi x_a,in + gamma x_b,in
/// p_b,out = p_a,in / xi
/// ```
///
/// Symplecticity forces `gamma_r = gamma xi_r / xi`. The symmetric case
/// `xi_r = xi` has `gamma_r = gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfMatchedForm {
    pub xi: f64,
    pub gamma: f64,
    pub xi_reverse: f64,
    pub gamma_reverse: f64,
    pub frame: Frame,
}

impl HalfMatchedForm {
    pub fn canonical_matrix(&self) -> RealMatrix {
        #[rustfmt::skip]
        let m = RealMatrix::from_row_slice(4, 4, &[
            0.0, 0.0, 1.0 / self.xi_reverse, 0.0,
            0.0, -self.gamma_reverse, 0.0, self.xi_reverse,
            self.xi, 0.0, self.gamma, 0.0,
            0.0, 1.0 / self.xi, 0.0, 0.0,
        ]);
        m
    }

    /// The scattering matrix in the original frame.
    pub fn reconstruct(&self) -> RealMatrix {
        self.frame.from_canonical(&self.canonical_matrix())
    }
}

// entries of the canonical form that must vanish
const ZEROS: [(usize, usize); 10] =
    [(0, 0), (0, 1), (0, 3), (1, 0), (1, 2), (2, 1), (2, 3), (3, 0), (3, 2), (3, 3)];

/// Searches the 256 quarter-turn frames for the half-matched form. `tol` is
/// relative to the largest entry of `s`.
pub fn detect_half_matched(s: &QuadratureMatrix, tol: f64) -> Result<Option<HalfMatchedForm>> {
    let m = s.entries();
    if m.shape() != (4, 4) {
        return Err(Error::Dimension(format!("expected a 4x4 matrix, got {:?}", m.shape())));
    }
    let scale = max_abs(m).max(1.0);
    if !is_symplectic(s, tol * scale * scale)? {
        return Err(Error::Precondition("scattering matrix is not symplectic".into()));
    }
    let eps = tol * scale;
    for frame in Frame::all() {
        let c = frame.to_canonical(m);
        if ZEROS.iter().any(|&ij| c[ij].abs() > eps) {
            continue;
        }
        let (xi, xi_reverse) = (c[(2, 0)], c[(1, 3)]);
        if xi <= eps || xi_reverse <= eps {
            continue;
        }
        if (c[(3, 1)] * xi - 1.0).abs() > tol * scale || (c[(0, 2)] * xi_reverse - 1.0).abs() > tol * scale {
            continue;
        }
        return Ok(Some(HalfMatchedForm {
            xi,
            gamma: c[(2, 2)],
            xi_reverse,
            gamma_reverse: -c[(1, 1)],
            frame,
        }));
    }
    Ok(None)
}

/// Single-mode squeezers on the four coupling ports. Each acts as
/// `diag(s, 1/s)` in the canonical frame of the half-matched form, so the
/// physical encoders are `R_in^T Z` and the decoders `Z R_out`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezerPlan {
    pub a_in: f64,
    pub b_in: f64,
    pub a_out: f64,
    pub b_out: f64,
    pub frame: Frame,
}

fn squeeze(s: f64) -> RealMatrix {
    RealMatrix::from_row_slice(2, 2, &[s, 0.0, 0.0, 1.0 / s])
}

impl SqueezerPlan {
    pub fn identity(frame: Frame) -> Self {
        Self { a_in: 1.0, b_in: 1.0, a_out: 1.0, b_out: 1.0, frame }
    }

    pub fn encoder_a(&self) -> RealMatrix {
        self.frame.a_in.matrix().transpose() * squeeze(self.a_in)
    }

    pub fn encoder_b(&self) -> RealMatrix {
        self.frame.b_in.matrix().transpose() * squeeze(self.b_in)
    }

    pub fn decoder_a(&self) -> RealMatrix {
        squeeze(self.a_out) * self.frame.a_out.matrix()
    }

    pub fn decoder_b(&self) -> RealMatrix {
        squeeze(self.b_out) * self.frame.b_out.matrix()
    }
}

/// Squeezers for optical-to-microwave transduction: the input is squeezed by
/// `s` and the output by `1 / (xi s)`, leaving noise variance `(gamma / (xi s))^2`
/// on one output quadrature.
pub fn perfect_transduction_plan(f: &HalfMatchedForm, s: f64) -> Result<SqueezerPlan> {
    if s.is_nan() || s < 1.0 {
        return Err(Error::Precondition(format!("input squeeze factor must be at least 1, got {s}")));
    }
    Ok(SqueezerPlan { a_in: s, b_out: 1.0 / (f.xi * s), ..SqueezerPlan::identity(f.frame) })
}

/// One squeezer assignment that makes both directions noiseless at unit gain.
pub fn two_way_plan(f: &HalfMatchedForm) -> SqueezerPlan {
    two_way_plan_with_encoding(f, 1.0)
}

/// As [`two_way_plan`], with encoding squeeze `s` on both inputs; the residual
/// noise in each direction scales as `1 / s^2`.
pub fn two_way_plan_with_encoding(f: &HalfMatchedForm, s: f64) -> SqueezerPlan {
    SqueezerPlan {
        a_in: s,
        b_in: 1.0 / s,
        a_out: f.xi_reverse * s,
        b_out: 1.0 / (f.xi * s),
        frame: f.frame,
    }
}

/// Directional channel of `decoder * S * encoder` with vacuum on the idle
/// input port.
pub fn compose_channel(s: &QuadratureMatrix, plan: &SqueezerPlan, dir: ChannelDirection) -> Result<GaussianChannel> {
    let m = s.entries();
    if m.shape() != (4, 4) {
        return Err(Error::Dimension(format!("expected a 4x4 matrix, got {:?}", m.shape())));
    }
    let block = |r: usize, c: usize| m.view((2 * r, 2 * c), (2, 2)).into_owned();
    let (t, env) = match dir {
        ChannelDirection::OpticalToMicrowave => (
            plan.decoder_b() * block(1, 0) * plan.encoder_a(),
            plan.decoder_b() * block(1, 1) * plan.encoder_b(),
        ),
        ChannelDirection::MicrowaveToOptical => (
            plan.decoder_a() * block(0, 1) * plan.encoder_b(),
            plan.decoder_a() * block(0, 0) * plan.encoder_a(),
        ),
    };
    let n = &env * env.transpose();
    GaussianChannel::new(QuadratureMatrix::from_modes(t)?, QuadratureMatrix::from_modes(n)?)
}
