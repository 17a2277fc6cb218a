//! Mechanics of an infinitesimal gyroscope moving on the Mylar balloon.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] – incomplete elliptic integrals (Carlson symmetric forms).
//! * [`geometry`] – the balloon surface in conformal coordinates: embedding,
//!   fundamental forms, metric, connections, orthonormal frame, curvature.
//! * [`dynamics`] – kinetic energy, configuration metric, Legendre map,
//!   Hamiltonian, model potentials and trajectory integration.
//! * [`action`] – Hamilton–Jacobi separation: radicand, turning points,
//!   action quadrature, radicand polynomials in `x = tanh u`, residues,
//!   closed-form action relations, phase-space regions, radius quantization.
//! * [`verify`] – sweeps and trajectory checks confronting the closed-form
//!   action relations with direct quadrature.
//!
//! Batch work (sweeps, many trajectories) runs on rayon when the `parallel`
//! feature is enabled and falls back to plain iterators otherwise.

pub mod action;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod ode;
pub mod parallel;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::BalloonParams;
