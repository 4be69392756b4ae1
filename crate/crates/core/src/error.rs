use thiserror::Error;

use crate::convergence::AxiomViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("carrier must have at least one point")]
    EmptyCarrier,
    #[error("carrier of {size} points exceeds the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown point label {0:?}")]
    UnknownLabel(String),
    #[error("subset bits {bits:#b} do not fit a carrier of {size} points")]
    SubsetWidth { bits: u32, size: usize },
    #[error("operands live on different carriers")]
    CarrierMismatch,
    #[error("operation requires a non-degenerate filter")]
    DegenerateFilter,
    #[error("family is not a filter: {0}")]
    NotAFilter(String),
    #[error("invalid ultrafilter selection: {0}")]
    InvalidSelection(String),
    #[error("relation is not a map: {0}")]
    NotAMap(String),
    #[error("map is not surjective")]
    NotSurjective,
    #[error("limit table has {} axiom violation(s): {}", .0.len(), describe(.0))]
    Axioms(Vec<AxiomViolation>),
    #[error("empty list of convergences")]
    EmptyList,
    #[error("{functor} is not a {expected}")]
    WrongFunctorKind { functor: String, expected: &'static str },
    #[error("enumeration of {class} on {size} points exceeds the cap of {cap} without sampling")]
    EnumerationCap { class: String, size: usize, cap: usize },
    #[error("filter class {0} is not transferable")]
    NotTransferable(String),
    #[error("unknown search predicate {0:?}")]
    UnknownPredicate(String),
    #[error("set is not representable on {carrier}: {reason}")]
    Unrepresentable { carrier: &'static str, reason: String },
    #[error("implementations disagree: {0}")]
    Disagreement(String),
    #[error("invalid document: {0}")]
    Document(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn describe(violations: &[AxiomViolation]) -> String {
    violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}
