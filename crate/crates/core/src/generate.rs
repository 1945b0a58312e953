//! Test-problem generators.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::hamiltonian::{build_hamiltonian, default_structure_tolerance, BseHamiltonian, Definiteness, ScalarField, TransitionVector};
use crate::linalg::{hermitian_min_eigenvalue, symmetric_min_eigenvalue, CMatrix, CVector, C64};

fn draw(rng: &mut ChaCha8Rng, field: ScalarField) -> C64 {
    match field {
        ScalarField::Real => C64::new(StandardNormal.sample(rng), 0.0),
        ScalarField::Complex => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(s * re, s * im)
        }
    }
}

/// Random definite Hamiltonian, deterministic in `(n, seed, field)`.
///
/// `A₀` is a Hermitian Wigner matrix with spectral radius close to 1 and `B₀`
/// a complex-symmetric one with radius close to 1/2. The diagonal of `A` is
/// then shifted so that `λ_min(Ω) = diag_shift`.
pub fn generate_random_definite(n: usize, seed: u64, field: ScalarField, diag_shift: f64) -> BseHamiltonian {
    assert!(n >= 1, "block dimension must be positive");
    assert!(diag_shift > 0.0, "diag_shift must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (2.0 * n as f64).sqrt();
    let g = CMatrix::from_fn(n, n, |_, _| draw(&mut rng, field));
    let a0 = (&g + g.adjoint()).map(|z| z * (0.5 * scale));
    let g = CMatrix::from_fn(n, n, |_, _| draw(&mut rng, field));
    let b0 = (&g + g.transpose()).map(|z| z * (0.25 * scale));

    let tol = default_structure_tolerance(&a0, &b0);
    let h0 = build_hamiltonian(a0, b0, tol).expect("blocks are exactly structured");
    let lambda_min = match field {
        ScalarField::Real => {
            let (m, k) = h0.real_blocks();
            symmetric_min_eigenvalue(&m).min(symmetric_min_eigenvalue(&k))
        }
        ScalarField::Complex => hermitian_min_eigenvalue(&h0.omega_dense()),
    };
    let shift = diag_shift - lambda_min;
    let mut a = h0.a().clone();
    for i in 0..n {
        a[(i, i)] += C64::new(shift, 0.0);
    }
    let mut h = build_hamiltonian(a, h0.b().clone(), tol).expect("blocks are exactly structured");
    h.set_definiteness(Definiteness::Definite);
    h
}

/// Random transition vector drawn from a stream independent of the matrices.
pub fn random_transition_vector(n: usize, seed: u64, field: ScalarField) -> TransitionVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let d = CVector::from_fn(n, |_, _| draw(&mut rng, field));
    TransitionVector::new(d).expect("a Gaussian draw is nonzero")
}

/// Reading of the diagonal `B(i,i) = i^{i-1}` of the artificial `n = 16`
/// example.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleDiagonal {
    /// `i` is the imaginary unit: `B(i,i) ∈ {1, ı, −1, −ı}`. Ω is positive
    /// definite and `[d; 0]`, `[0; d̄]` are Ω-orthogonal.
    ImaginaryUnit,
    /// `i` is the row index: `B(i,i) = i^{i−1}`. Ω is indefinite.
    RowIndex,
}

/// The `n = 16` example: `A = tridiag(1, 4, 1)`, diagonal `B`,
/// `d(i) = (−1)^{i−1}`.
pub fn generate_paper_example_46(reading: ExampleDiagonal) -> (BseHamiltonian, TransitionVector) {
    let n = 16;
    let a = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(4.0, 0.0)
        } else if i.abs_diff(j) == 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let diag = CVector::from_fn(n, |i, _| match reading {
        ExampleDiagonal::ImaginaryUnit => C64::new(0.0, 1.0).powu(i as u32),
        ExampleDiagonal::RowIndex => C64::new(((i + 1) as f64).powi(i as i32), 0.0),
    });
    let b = CMatrix::from_diagonal(&diag);
    let d = TransitionVector::from_real(&(0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>())
        .expect("nonzero");
    let h = build_hamiltonian(a, b, 0.0).expect("exactly structured");
    let h = match reading {
        ExampleDiagonal::ImaginaryUnit => h.verified().expect("Ω ≻ 0 for the imaginary-unit reading"),
        ExampleDiagonal::RowIndex => h.waive_definiteness(),
    };
    (h, d)
}
