//! Shared-control workbench.
//!
//! A linear attractor system is reshaped from demonstrations by a Gaussian
//! process over rotation and speed-scaling parameters. The reshaped field is
//! turned into a chain of local springs whose stiffness and guidance tunnel
//! follow the GP's confidence, and a simulated master device is driven by the
//! resulting force together with a scripted or live human. Leaving the tunnel
//! hands control to the human; what they demonstrate next is merged into the
//! model.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod authority;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod gp;
pub mod motion;
pub mod scenario;
pub mod session;
pub mod sim;
pub mod vsds;

pub use error::{Error, Result};
