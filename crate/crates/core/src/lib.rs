//! Zeroes and critical points of random polynomials.
//!
//! Root-form and coefficient-form polynomials with a log-derivative core,
//! simultaneous and local critical-point finders, seeded samplers for three
//! random-polynomial models, Cauchy-Stieltjes transforms, zero/critical-point
//! pairing statistics and a reproducible Monte Carlo harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cst;
pub mod ensembles;
pub mod error;
pub mod harness;
pub mod pairing;
pub mod polycore;
pub mod rootfind;
pub mod stats;

pub use error::{Error, Result};
pub use polycore::{CoeffFormPoly, ComplexScalar, RootFormPoly};
