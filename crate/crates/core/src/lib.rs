//! Exact intersection theory on low-degree Hurwitz spaces.
//!
//! The layers build on one another: [`symkernel`] provides rationals and
//! polynomials, [`chow`] graded rings with integration, [`bundles`] the
//! splitting types of the Tschirnhausen and syzygy bundles. On top of those
//! [`family_calc`] computes the invariants of one-parameter families and
//! the pencil records, [`divisor_classes`] the classes `λ, δ, D` and the
//! Maroni, Casnati–Ekedahl and `X` divisors, [`directrix`] the rotating
//! directrix class, and [`graphs`] the boundary dual graphs. [`yeff`]
//! combines records and graphs into an effectivity certificate.

// Errors carry exact rationals so that failures report the offending value.
#![allow(clippy::result_large_err)]

pub mod bundles;
pub mod chow;
pub mod directrix;
pub mod divisor_classes;
pub mod family_calc;
pub mod graphs;
pub mod selftest;
pub mod symkernel;
pub mod yeff;

use thiserror::Error;

pub use divisor_classes::{admissible, class_x, class_x_at};
pub use family_calc::{partial_pencil_record, PencilKind, PencilParams, PencilRecord};
pub use graphs::{DivisorType, DualGraph};
pub use symkernel::{Poly, Q};
pub use yeff::{certify, verify_certificate, Certificate};

/// Any error raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Sym(#[from] symkernel::SymError),
    #[error(transparent)]
    Chow(#[from] chow::ChowError),
    #[error(transparent)]
    Bundle(#[from] bundles::BundleError),
    #[error(transparent)]
    Family(#[from] family_calc::FamilyError),
    #[error(transparent)]
    Class(#[from] divisor_classes::ClassError),
    #[error(transparent)]
    Directrix(#[from] directrix::DirectrixError),
    #[error(transparent)]
    Graph(#[from] graphs::GraphError),
    #[error(transparent)]
    Yeff(#[from] yeff::YeffError),
}
