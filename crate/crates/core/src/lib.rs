//! Explicit Sato-Tate machinery for a handful of classical eigenforms.
//!
//! The crate is organised bottom-up: [`arith`] and [`qexp`] provide exact
//! integer arithmetic and q-expansions, [`newforms`] builds the seven forms and
//! their Hecke angles, [`satotate`] and [`bounds`] handle the analytic side,
//! [`density`] runs the nonvanishing-density pipeline and [`quadform`] treats
//! theta series of two quadratic forms. [`acceptance`] bundles the end-to-end
//! checks shared by the test suite and the CLI.

pub mod acceptance;
pub mod arith;
pub mod bounds;
pub mod density;
pub mod hiprec;
pub mod newforms;
pub mod qexp;
pub mod quadform;
pub mod quadrature;
pub mod satotate;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision shortfall: need {needed}, have {available}")]
    Precision { needed: usize, available: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("Deligne bound violated at p = {p}: a(p) = {a}")]
    Deligne { p: u64, a: String },
    #[error("relation failed: {0}")]
    Relation(String),
    #[error("malformed series data: {0}")]
    Parse(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
