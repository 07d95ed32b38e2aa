//! Nullstellensatz refutations of pebbling formulas.
//!
//! Certificates are checked with exact arithmetic, either modulo a prime or
//! over the rationals. [`compile`] turns a reversible pebbling into a
//! multilinear refutation whose size is one more than the time and whose
//! degree equals the space; [`extract`] goes the other way through the
//! configuration graph of the refutation.

mod certificate;
mod compile;
mod extract;
mod field;
mod formula;
mod poly;

use thiserror::Error;

use crate::pebbling::PebblingError;

pub use certificate::{multilinearize, verify, AxiomId, CertMode, Certificate, VerifyReport};
pub use compile::{compile, Compiled};
pub use extract::{check_weights, config_graph, extract, ConfigEdge, ConfigGraph, WeightReport};
pub use field::FieldSpec;
pub use formula::{pebbling_formula, PebblingFormula};
pub use poly::{multilinear_product, Monomial, Poly, PolyDisplay};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NsError {
    #[error("polynomials over different fields ({0} and {1})")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("coefficient not representable: {0}")]
    NotRepresentable(String),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("certificate is not multilinear")]
    NotMultilinear,
    #[error("Boolean-axiom multipliers are only allowed in standard mode")]
    BooleanMultipliersInMultilinearMode,
    #[error("graph has no designated sink; restrict it to one sink first")]
    NoDesignatedSink,
    #[error("strategy is not a legal reversible pebbling: {0}")]
    StrategyIllegal(PebblingError),
    #[error("strategy never pebbles the sink")]
    SinkNeverReached,
    #[error("certificate is not a valid refutation; residual {0}")]
    CertificateInvalid(String),
    #[error("no path from the empty configuration to the sink")]
    NoPathToSink,
    #[error("multilinearized certificate is not a valid refutation")]
    ResultInvalid,
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("malformed certificate: {0}")]
    Format(String),
}
