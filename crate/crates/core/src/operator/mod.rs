//! Dense complex operator carrier, Hermitian forms, the 5×5 block form and
//! shift constructors.

mod block;
mod hermitian;
mod matrix;
mod null_vector;
mod shift;

pub use block::{block_decompose, is_zero_position, BlockForm};
pub use hermitian::{HermitianForm, HERMITIAN_TOL};
pub use matrix::{vector_norm, ComplexSquareMatrix, MatrixJson, SINGULAR_CONDITION};
pub use null_vector::NullVectorParams;
pub use shift::{build_shift, conjugate_by_diagonal_unitary, normalized_weight, superdiagonal};
