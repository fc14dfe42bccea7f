//! Secrecy capacity region of the two-user multi-antenna Gaussian broadcast
//! channel with confidential messages.
//!
//! A transmitter with `t ≥ 2` antennas sends one confidential message to
//! each of two single-antenna users; each message must stay secret from the
//! other user. This crate computes
//!
//! * the channel spectrum: the largest generalized eigenpairs of the pencils
//!   `(I + Phhᴴ, I + Pggᴴ)` and `(I + Pggᴴ, I + Phhᴴ)` ([`channel`]),
//! * the capacity region as the convex hull of a family of rate rectangles,
//!   in two equivalent parametrizations ([`regions`]),
//! * the secret dirty-paper coding rates for arbitrary covariances and the
//!   covariances that reach the boundary ([`sdpc`]),
//! * the Sato-type outer bound and an inner/outer consistency audit
//!   ([`sato`]).
//!
//! ```
//! use secrecy_region::{channel::{ChannelPair, ExampleVariant}, regions};
//!
//! let ch = ChannelPair::example(ExampleVariant::TextG);
//! let caps = regions::max_rates(&ch).unwrap();
//! assert!(caps.r1 > 0.0 && caps.r2 > 0.0);
//! ```

pub mod channel;
pub mod error;
pub mod export;
pub mod geometry;
pub mod linalg;
mod par;
pub mod regions;
pub mod sato;
pub mod sdpc;

pub use channel::{ChannelPair, ChannelSpectrum, ExampleVariant, FieldMode};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use geometry::RatePair;
pub use regions::{RegionBoundary, SweepConfig};
