//! Dense Hermitian operators and permutation-built projectors.

mod hermitian;
pub mod lowrank;
mod projectors;

pub use hermitian::{min_eigenvalue, Eigh, HermitianOperator, HERMITICITY_TOL};
pub use projectors::{
    digits, from_digits, isotypic_projector, orthonormalize, permutation_matrix, permute_vector, permuted_index,
    subspace_sym_projector, sym_projector, ORTHONORMAL_TOL,
};
