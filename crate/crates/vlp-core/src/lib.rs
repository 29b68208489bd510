//! Indoor visible-light positioning with a single LED and wall-mounted
//! single-element mirror reflectors (OIRS).
//!
//! The library models the optical RSS channel (Lambertian LED, specular
//! mirror bounce, signal-dependent shot + thermal noise), implements
//! closed-form ML/RML estimators for the LED-PD and mirror-PD distances,
//! derives the corresponding Fisher information and error bounds (DEB/PEB),
//! and runs the full iterative localization loop in which a weighted
//! least-squares position fix feeds an adaptive beam-steering update of
//! every mirror.
//!
//! Layout:
//! - [`geometry`]: scene description, specular reflection points, tilt
//!   kinematics and the steering bisector.
//! - [`channel`]: channel gains, noise variances and SNR.
//! - [`observation`]: seeded synthetic photocurrent sampling and LoS
//!   subtraction.
//! - [`estimation`]: ML and relaxed-ML distance estimators.
//! - [`bounds`]: Fisher information, distance and position error bounds.
//! - [`localization`]: IWLS solver and the outer steering loop.
//! - [`harness`]: Monte Carlo sweeps, coverage maps and named presets.
//! - [`config`] / [`csvio`]: plain-text configuration and CSV emission.

pub mod bounds;
pub mod channel;
pub mod config;
pub mod csvio;
pub mod error;
pub mod estimation;
pub mod geometry;
pub mod harness;
pub mod localization;
pub mod observation;
mod vec3;

pub use error::{InvalidReflection, VlpError};
pub use vec3::Vec3;
