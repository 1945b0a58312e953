//! Full-diagonalization reference for definite Hamiltonians.
//!
//! With `Ω = L Lᴴ`, the Hermitian matrix `W = Lᴴ C_n L` is similar to `H`
//! (`W = Lᴴ H L⁻ᴴ`), so its eigenvalues come in exact `±λ` pairs. A positive
//! eigenpair `(λ, w)` maps back to `z = √λ · L⁻ᴴ w`, which satisfies
//! `zᴴ Ω z = λ` and therefore `xᴴx − yᴴy = 1`.

use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::hamiltonian::{BseHamiltonian, TransitionVector};
use crate::linalg::{dotc, CMatrix, CVector, C64};
use crate::spectrum::{sample_odd_sum, BroadeningKernel, OmegaGrid, Spectrum, SpectrumMeta, SpectrumSource};

/// Positive half of the structured eigendecomposition of `H`.
#[derive(Debug, Clone)]
pub struct StructuredEigenDecomposition {
    /// `λ₁ ≥ … ≥ λ_n > 0`.
    pub lambdas: Vec<f64>,
    pub x: CMatrix,
    pub y: CMatrix,
}

impl StructuredEigenDecomposition {
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// `z_j = [x_j; y_j]`.
    pub fn eigenvector(&self, j: usize) -> CVector {
        let n = self.n();
        CVector::from_fn(2 * n, |i, _| if i < n { self.x[(i, j)] } else { self.y[(i - n, j)] })
    }
}

pub fn full_diagonalize(h: &BseHamiltonian) -> Result<StructuredEigenDecomposition> {
    let n = h.n();
    let omega = h.omega_dense();
    let chol = Cholesky::new(omega)
        .ok_or_else(|| Error::NotDefinite("Cholesky factorization of Ω failed".into()))?;
    let l = chol.l();
    // Complex Cholesky takes square roots of negative pivots instead of failing.
    if l.diagonal().iter().any(|p| !(p.re > 0.0) || p.im.abs() > 1e-8 * p.re) {
        return Err(Error::NotDefinite("Ω has a nonpositive pivot".into()));
    }
    let mut cl = l.clone();
    cl.view_mut((n, 0), (n, 2 * n)).neg_mut();
    let w = l.adjoint() * cl;
    let w = (&w + w.adjoint()).map(|z| z * 0.5);
    let eig = w.symmetric_eigen();

    let mut order: Vec<usize> = (0..2 * n).filter(|&i| eig.eigenvalues[i] > 0.0).collect();
    if order.len() != n {
        return Err(Error::NotDefinite(format!(
            "expected {n} positive eigenvalues, found {}",
            order.len()
        )));
    }
    // Descending; stable for ties.
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let lh = l.adjoint();
    let mut x = CMatrix::zeros(n, n);
    let mut y = CMatrix::zeros(n, n);
    let mut lambdas = Vec::with_capacity(n);
    for (col, &i) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[i];
        let wv = eig.eigenvectors.column(i).into_owned();
        let z = lh
            .solve_upper_triangular(&wv)
            .ok_or_else(|| Error::NotDefinite("singular Cholesky factor".into()))?
            * C64::new(lambda.sqrt(), 0.0);
        x.column_mut(col).copy_from(&z.rows(0, n));
        y.column_mut(col).copy_from(&z.rows(n, n));
        lambdas.push(lambda);
    }
    Ok(StructuredEigenDecomposition { lambdas, x, y })
}

/// Oscillator strengths `|dᴴx_j − d̄ᴴy_j|²`, aligned with `decomp.lambdas`.
pub fn oscillator_strengths(decomp: &StructuredEigenDecomposition, d: &TransitionVector) -> Vec<f64> {
    let dv = d.as_vector();
    let dbar = dv.map(|z| z.conj());
    (0..decomp.n())
        .map(|j| {
            let xj = decomp.x.column(j).into_owned();
            let yj = decomp.y.column(j).into_owned();
            (dotc(dv, &xj) - dotc(&dbar, &yj)).norm_sqr()
        })
        .collect()
}

/// `ε_σ(ω) = scale · Σ_j s_j [g(ω − λ_j) − g(ω + λ_j)]` from a decomposition.
pub fn exact_spectrum_from(
    decomp: &StructuredEigenDecomposition,
    d: &TransitionVector,
    kernel: BroadeningKernel,
    grid: &OmegaGrid,
    scale: f64,
) -> Result<Spectrum> {
    if d.len() != decomp.n() {
        return Err(Error::DimensionMismatch(format!(
            "d has length {}, Hamiltonian block size is {}",
            d.len(),
            decomp.n()
        )));
    }
    let strengths: Vec<f64> = oscillator_strengths(decomp, d).into_iter().map(|s| s * scale).collect();
    let values = sample_odd_sum(&kernel, grid, &decomp.lambdas, &strengths);
    Ok(Spectrum {
        omegas: grid.points().to_vec(),
        values,
        imag: None,
        meta: SpectrumMeta {
            source: SpectrumSource::Exact,
            k: 0,
            gagq: false,
            kernel,
            norm_const: d.as_vector().norm_squared(),
            scale,
            dropped_count: 0,
            breakdown_at: None,
        },
    })
}

pub fn exact_spectrum(
    h: &BseHamiltonian,
    d: &TransitionVector,
    kernel: BroadeningKernel,
    grid: &OmegaGrid,
) -> Result<Spectrum> {
    let decomp = full_diagonalize(h)?;
    exact_spectrum_from(&decomp, d, kernel, grid, 1.0)
}
