//! Exact homology, Floer-degree bookkeeping and ADC certificates for
//! Weinstein domains and their contact boundaries.
//!
//! Everything integral is arbitrary precision and everything with an
//! action is an exact rational. The only floating point lives in
//! [`scaling`], which checks the one-dimensional profile behind the
//! conformal bound of the scaling contactomorphism.

pub mod chords;
pub mod error;
pub mod floer;
pub mod graded;
pub mod num;
pub mod scaling;
pub mod surgery;
pub mod weinstein;

pub use error::{Error, Result};

pub(crate) use graded::complex_io::{matrix_rows as graded_matrix_rows, parse_matrix as graded_parse_matrix};
