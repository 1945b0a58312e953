//! Absorption spectra of Bethe–Salpeter Hamiltonians by structure-preserving
//! Lanczos iteration with Gauss and generalized averaged Gauss quadrature.
//!
//! The Hamiltonian `H = [[A, B], [−B̄, −Ā]]` is held by its blocks in
//! [`BseHamiltonian`]. [`exact_spectrum`] diagonalizes it fully and serves as a
//! reference; the Lanczos engines in [`lanczos`] and [`variants`] produce
//! tridiagonal recurrences that [`quadrature`] turns into spectra.

pub mod error;
pub mod generate;
pub mod hamiltonian;
pub mod io;
pub mod lanczos;
pub mod linalg;
pub mod metrics;
pub mod oracle;
pub mod quadrature;
pub mod solver;
pub mod spectrum;
pub mod variants;

pub use error::{Error, Result};
pub use generate::{generate_paper_example_46, generate_random_definite, random_transition_vector, ExampleDiagonal};
pub use hamiltonian::{
    apply_h_structured, build_hamiltonian, check_definiteness, BseHamiltonian, Definiteness, ScalarField,
    TransitionVector,
};
pub use lanczos::{
    lanczos_m_inner, lanczos_omega_inner, lanczos_tda, retained_basis_orthogonality, LanczosOptions, LanczosRun,
    Reorthogonalization, Variant,
};
pub use metrics::{convergence_history, curve_angle, first_k_within, two_rule_error_estimate, CurvePair, HistoryRow};
pub use oracle::{exact_spectrum, full_diagonalize, StructuredEigenDecomposition};
pub use quadrature::{assemble_bse_spectrum, assemble_tda_spectrum, tridiag_eig, QuadratureNodes, SymTridiagonal};
pub use solver::{approximate_spectrum, SolverConfig};
pub use spectrum::{BroadeningKernel, KernelShape, OmegaGrid, Spectrum, SpectrumMeta, SpectrumSource};
pub use variants::{assemble_gmg_spectrum, assemble_paired_spectrum, lanczos_gmg, lanczos_paired, PairedInner};
