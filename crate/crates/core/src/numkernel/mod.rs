//! Dense complex linear algebra for small operators.

pub mod dense;
pub mod eig;
pub mod func;
pub mod matrix;
pub mod ops;

pub use dense::{condition_number, inverse, null_space, range_basis, rank, singular_values};
pub use eig::{hermitian_eig, hermitian_eigenvalues, HermEig};
pub use func::{matrix_fn, psd_check, sqrtm, support_projector, MatrixFn, OffSupport, ZERO_CUTOFF};
pub use matrix::{c, r, CMatrix, C64, ONE, ZERO};
pub use ops::{kron, kron_all, partial_trace, partial_transpose, permute_systems, reduce};
