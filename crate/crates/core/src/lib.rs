//! Massless Klein-Gordon scattering off rectangular quaternionic potentials.
//!
//! The crate is organised bottom-up:
//!
//! * [`quaternion`]: Hamilton algebra and the symplectic `α + jβ` split.
//! * [`model`]: barrier parameters, dispersion and the interior mode structure.
//! * [`linalg`]: small dense complex LU with partial pivoting.
//! * [`matcher`]: the 8×8 wave-matching system and its numerical solution.
//! * [`closedform`]: analytic amplitudes, the complex limit and the small-parameter expansion.
//! * [`wavefield`]: piecewise field evaluation, continuity checks and sampling.
//! * [`multilayer`]: transfer matrices for stacked segments and the ordering experiment.
//!
//! Units are natural (`c = ħ = 1`); angles are radians.

pub mod amplitudes;
pub mod closedform;
pub mod error;
pub mod linalg;
pub mod matcher;
pub mod model;
pub mod multilayer;
pub mod quaternion;
pub mod wavefield;

pub use amplitudes::Amplitudes;
pub use error::{Error, Result};
pub use model::BarrierSpec;
pub use num_complex::Complex64;
pub use quaternion::{Quaternion, SymplecticPair, UnitImaginaryDirection};
