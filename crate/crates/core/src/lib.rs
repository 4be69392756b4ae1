//! Finite convergence spaces.
//!
//! Filters, grills and adherences on carriers of at most 16 points,
//! adherence-determined reflectors, classification of surjections into
//! quotient-like and perfect-like classes, compactness of relations, and a
//! small symbolic layer for cofinite filters on two countable exemplars.

pub mod compact;
pub mod convergence;
pub mod enumerate;
pub mod error;
pub mod family;
pub mod functor;
pub mod io;
pub mod laws;
pub mod maps;
pub mod symbolic;

pub use convergence::{AxiomViolation, Convergence};
pub use error::{Error, Result};
pub use family::{Carrier, CarrierMap, FiniteFilter, FiniteRelation, SetFamily, Subset};
pub use functor::{FilterClass, Functor};
pub use maps::{ClassificationReport, MapContext};
