//! Simulation engines for classical-wave readings of quantum constructions.
//!
//! * [`phasor`], [`cesaro`], [`quadrature`]: phasor arithmetic, traveling
//!   waves and the oscillatory-integral machinery.
//! * [`epr`]: coincidence amplitudes, correlations and CHSH for photon pairs.
//! * [`holography`]: one-bit parity localization with frequency diversity.
//! * [`cavity`], [`commutator`]: mode-family thermalization and the shared
//!   commutator scale.
//! * [`statespace`]: linear evolution, characteristic roots, Schrödinger propagation.
//! * [`hj`]: Hamilton-Jacobi plane-wave residuals and the correspondence ratio.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity;
pub mod cesaro;
pub mod commutator;
pub mod epr;
pub mod error;
pub mod hj;
pub mod holography;
pub mod phasor;
pub mod quadrature;
pub mod rng;
pub mod statespace;

pub use error::{Error, Result};
pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;
pub use phasor::{ComplexAmplitude, PolarizationPhasor, TravelingMode};
