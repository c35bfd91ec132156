use thiserror::Error;

use crate::params::ValidationReport;
use crate::rational::Rational;

/// Errors raised by the capacity, oracle, tradeoff and code-simulation APIs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(ValidationReport),

    #[error("no admissible d_C: lower bound {min} exceeds upper bound {max}")]
    NoAdmissibleDc { min: i64, max: i64 },

    #[error("invalid selected-node distribution: {0}")]
    InvalidDistribution(String),

    #[error("no selected-node distribution with s_0 = {s0}: {reason}")]
    NoDistribution { s0: usize, reason: String },

    #[error("cluster order does not match distribution: {0}")]
    OrderMismatch(String),

    #[error("invalid separate positions: {0}")]
    InvalidSeparatePositions(String),

    #[error("no closed-form candidate: {0}")]
    NoClosedForm(String),

    #[error("repair step {step} needs {needed} helpers but only {available} are alive")]
    InsufficientHelpers { step: usize, needed: usize, available: usize },

    #[error("enumeration needs {needed} graphs, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("infeasible: capacity falls short of the file size by {}", crate::rational::to_fraction_string(.deficit))]
    Infeasible { deficit: Rational },

    #[error("no interference-alignment plan exists for failed node {failed}")]
    NoAlignment { failed: usize },

    #[error("code construction failed: {0}")]
    CodeConstruction(String),

    #[error("repair failed: {0}")]
    Repair(String),

    #[error("parse error: {0}")]
    Parse(String),
}
