//! Cofinite filters on two countable exemplars, with a finite truncation
//! oracle behind every decision.

pub mod exemplar;
pub mod filter;
pub mod set;
pub mod truncation;

pub use exemplar::{fan_check, prime_check, FanReport, PrimeReport};
pub use filter::{SymbolicFilter, UltrafiltersAbove};
pub use set::{Exemplar, Point, RowSet, SymbolicSet};
pub use truncation::{cross_check, CrossCheckReport, Truncation};
