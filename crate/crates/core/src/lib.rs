//! Decoherence of an even cat state (superposition of two coherent states) in a
//! thermal Markovian channel.
//!
//! The crate evolves the normally ordered characteristic function of the cat
//! in closed form, evaluates s-ordered quasiprobabilities, and computes the
//! rescaled time `tau = gamma * t` at which each of several nonclassicality
//! witnesses declares the state classical:
//!
//! * fringe visibility of the Wigner interference term (never reaches zero),
//! * nonclassical depth (negativity of the P function),
//! * negativity of the Wigner function,
//! * Vogel's characteristic-function criterion (first and second order),
//! * Klyshko's photon-number criterion `B(n) < 0`.
//!
//! An independent Fock-space integrator of the master equation lives in
//! [`fock`] and is used to cross-check the analytic path.
//!
//! Data-parallel work (time scans, parameter sweeps, grid searches) goes
//! through [`exec`], which uses rayon when the `parallel` feature is enabled
//! and falls back to plain iterators otherwise.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criteria;
pub mod error;
pub mod exec;
pub mod fock;
pub mod numerics;
pub mod phase_space;
pub mod sweep;

pub use error::{Error, Result};
pub use phase_space::{
    CatState, ChannelCoefficients, OrderingParameter, PhasePoint, ThermalChannel,
};
