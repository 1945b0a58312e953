//! Alternative structure-preserving Lanczos procedures kept for comparison:
//! Lanczos on `H` in the Ω inner product ([`lanczos_gmg`]) and the
//! paired-vector procedures ([`lanczos_paired`]).

mod gmg;
mod paired;

pub use gmg::{assemble_gmg_spectrum, lanczos_gmg, ZeroDiagTridiagonal};
pub use paired::{assemble_paired_spectrum, lanczos_paired, PairedInner, PairedProjectedHamiltonian};
