//! Dense complex linear algebra used by every other module.

mod decomp;
mod matrix;
pub mod random;
mod tensor;

pub use decomp::{
    general_eigenvalues, hermitian_eig, hermitian_eig_tol, matrix_sqrt_psd, singular_values,
    spectral_map, takagi_decompose, unitarity_defect, HermitianEigen, Takagi, EPS_PSD, TAU_HERM,
    TAU_SYM,
};
pub use matrix::{ComplexMatrix, DimSpec, DEFAULT_SIZE_CAP};
pub use random::{random_ginibre, random_unitary, seeded_rng, stream_rng, SeededRng};
pub use tensor::{kron, kron_all, kron_capped, move_subsystem_first, partial_trace, partial_transpose};
