//! Integer linear algebra and finitely generated graded abelian groups.

mod complex;
pub(crate) mod complex_io {
    pub(crate) use super::complex::{matrix_rows, parse_matrix};
}
mod group;
mod matrix;
mod snf;

pub use complex::{cohomology_from_homology, ChainComplex};
pub use group::{cancel_summand, AbelianGroup, Coefficients, GradedGroup};
pub use matrix::IntegerMatrix;
pub use snf::{smith_normal_form, Smith};
