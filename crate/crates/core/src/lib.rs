//! Gaussian-channel model of a cavity electro-optic transducer whose microwave
//! resonator is parametrically pumped.
//!
//! The crate builds the frequency-domain scattering matrix of the two-mode
//! system, reduces it to single-mode Gaussian channels, and evaluates their
//! transmissivity, added noise and quantum-capacity lower bound. Closed forms
//! for the resonant and detuned cases, the squeezed-frame picture, and the
//! half-matching analysis are provided alongside.

pub mod bogoliubov;
pub mod error;
pub mod matching;
pub mod metrics;
pub mod model;
pub mod symplectic;

pub use bogoliubov::{build_frame, BogoliubovFrame, RwaReport};
pub use error::{Error, Result};
pub use matching::{detect_half_matched, HalfMatchedForm, SqueezerPlan};
pub use metrics::{AddedNoise, ChannelMetrics, GaussianChannel};
pub use model::{BathSpec, ChannelDirection, PortBath, ScatteringMatrix, SystemParams};
pub use symplectic::{CovarianceMatrix, LadderMatrix, Port, QuadratureMatrix};
