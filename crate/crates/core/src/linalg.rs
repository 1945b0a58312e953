//! Small dense helpers shared by the engines.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);

/// `aᴴ b`, accumulated left to right.
pub fn dotc(a: &CVector, b: &CVector) -> C64 {
    a.iter()
        .zip(b.iter())
        .fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

/// `Re(aᴴ b)` without forming the imaginary part.
pub fn re_dotc(a: &CVector, b: &CVector) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc + x.re * y.re + x.im * y.im)
}

pub fn conj(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

pub fn norm2(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `y ← y − s·x` for real `s`.
pub(crate) fn axpy_real(y: &mut CVector, s: f64, x: &CVector) {
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi -= xi * s;
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()))
}

pub fn max_abs_real(m: &RMatrix) -> f64 {
    m.iter().fold(0.0, |acc: f64, z| acc.max(z.abs()))
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

pub fn real_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn hermitian_min_eigenvalue(m: &CMatrix) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |acc, &x| acc.min(x))
}

pub fn symmetric_min_eigenvalue(m: &RMatrix) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |acc, &x| acc.min(x))
}

/// Deterministic pseudo-random unit-ish vector used to seed power iterations.
pub(crate) fn seeded_vector(len: usize, seed: u64) -> CVector {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    CVector::from_fn(len, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    })
}

/// Eigenvalues of a general complex matrix from its complex Schur form.
pub fn general_eigenvalues(m: &CMatrix) -> Vec<C64> {
    let (_, t) = nalgebra::linalg::Schur::new(m.clone()).unpack();
    t.diagonal().iter().copied().collect()
}
