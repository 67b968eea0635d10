//! Exact integer linear algebra for finitely generated abelian groups.

mod group;
mod matrix;
mod snf;

pub use group::{quotient, solve_hom, FgAbelianGroup, GroupElement, Hom, HomSolution, InconsistencyWitness};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbelianError {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize, context: String },
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("matrix parse error: {0}")]
    Parse(String),
}
