//! Short-recurrence Lanczos engines.
//!
//! Three procedures share the [`LanczosRun`] output:
//!
//! * [`lanczos_tda`]: Hermitian Lanczos on `A` (Tamm–Dancoff).
//! * [`lanczos_m_inner`]: Lanczos on `KM` in the `M = A + B` inner product
//!   (real Hamiltonians).
//! * [`lanczos_omega_inner`]: Lanczos on `H²` in the Ω inner product, started
//!   from `[d; d̄]` and carried out on the top halves only.
//!
//! Each step costs two block matvecs. By default only the last two Lanczos
//! pairs are kept; set [`LanczosOptions::retain_basis`] to keep all of them.

mod m_inner;
mod omega;
mod tda;

pub use m_inner::lanczos_m_inner;
pub use omega::lanczos_omega_inner;
pub use tda::{lanczos_tda, HermitianOperator};

use crate::error::{Error, Result};
use crate::hamiltonian::BseHamiltonian;
use crate::linalg::{dotc, CVector, RVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    TdaHermitian,
    RealMInner,
    ComplexOmegaInner,
    GmgOmegaInner,
    PairedOmegaInner,
    PairedCInner,
}

impl Variant {
    /// Quadrature nodes are square roots of the tridiagonal eigenvalues.
    pub fn squared_nodes(self) -> bool {
        matches!(self, Variant::RealMInner | Variant::ComplexOmegaInner)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reorthogonalization {
    #[default]
    None,
    /// Two classical Gram–Schmidt passes in the native inner product against
    /// every previous Lanczos vector.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LanczosOptions {
    pub steps: usize,
    pub reorth: Reorthogonalization,
    pub retain_basis: bool,
}

impl LanczosOptions {
    pub fn new(steps: usize) -> Self {
        LanczosOptions {
            steps,
            reorth: Reorthogonalization::None,
            retain_basis: false,
        }
    }

    pub fn with_reorth(mut self, reorth: Reorthogonalization) -> Self {
        self.reorth = reorth;
        self
    }

    pub fn retaining_basis(mut self) -> Self {
        self.retain_basis = true;
        self
    }

    fn keep_all(&self) -> bool {
        self.retain_basis || self.reorth == Reorthogonalization::Full
    }
}

/// Lanczos vectors kept for diagnostics.
#[derive(Debug, Clone)]
pub enum LanczosBasis {
    /// Euclidean-orthonormal `u_1, …`.
    Hermitian { u: Vec<CVector> },
    /// `M`-orthonormal `u_j` together with `v_j = M u_j`.
    MInner { u: Vec<RVector>, v: Vec<RVector> },
    /// Top halves of `[u_j; ū_j]` and `v_j = A u_j + B ū_j`.
    Omega { u: Vec<CVector>, v: Vec<CVector> },
    /// Top halves `w_j` of `q_j = [w_j; s_j w̄_j]` with `s_j = (−1)^{j−1}`.
    Gmg { w: Vec<CVector> },
}

/// Recurrence coefficients of a Lanczos run.
#[derive(Debug, Clone)]
pub struct LanczosRun {
    pub variant: Variant,
    /// `α_1, …, α_k`.
    pub alphas: Vec<f64>,
    /// `β_1, …, β_k`; `β_k` is the residual coefficient.
    pub betas: Vec<f64>,
    /// `‖d‖²` in the variant's normalization (e.g. `Re(dᴴAd + dᴴBd̄)`).
    pub norm_const: f64,
    /// Step at which a lucky breakdown occurred (`β` set to zero there).
    pub breakdown_at: Option<usize>,
    pub basis: Option<LanczosBasis>,
}

impl LanczosRun {
    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    /// The first `k` steps of this run, identical to rerunning with `k` steps.
    pub fn truncated(&self, k: usize) -> LanczosRun {
        let k = k.min(self.k());
        LanczosRun {
            variant: self.variant,
            alphas: self.alphas[..k].to_vec(),
            betas: self.betas[..k].to_vec(),
            norm_const: self.norm_const,
            breakdown_at: self.breakdown_at.filter(|&b| b <= k),
            basis: None,
        }
    }
}

/// Breakdown threshold relative to the norm of the operator whose Krylov space
/// is being built.
pub(crate) fn breakdown_tolerance(op_norm: f64) -> f64 {
    1e-12 * op_norm
}

/// Power-iteration budget for the norm estimate behind the breakdown test.
pub(crate) const NORM_ESTIMATE_ITERATIONS: usize = 5;

/// Classifies the radicand `xᴴ(Wx)` of a weighted norm.
///
/// Values below `−1e-10 · ‖x‖·‖Wx‖` mean the weight is not positive definite;
/// smaller negative values are rounding noise and are clamped to zero.
pub(crate) fn checked_radicand(radicand: f64, x_norm: f64, wx_norm: f64, step: usize) -> Result<f64> {
    if radicand < -1e-10 * x_norm * wx_norm {
        return Err(Error::IndefiniteInnerProduct { step, radicand });
    }
    Ok(radicand.max(0.0))
}

fn max_dev<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Largest entrywise deviation of the retained basis from its ideal
/// orthogonality relation.
///
/// * TDA: `UᴴU = I`.
/// * M inner product: `UᵀMU = I`.
/// * Ω inner product: `[V U; V̄ −Ū]ᴴ [U V; Ū −V̄] = 2I` (with `V` recomputed as
///   `AU + BŪ`).
/// * GMG: `Q̃ᴴ Ω Q̃ = I`.
pub fn retained_basis_orthogonality(run: &LanczosRun, h: &BseHamiltonian) -> Result<f64> {
    let basis = run.basis.as_ref().ok_or(Error::BasisNotRetained)?;
    let kron = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let dev = match basis {
        LanczosBasis::Hermitian { u } => max_dev((0..u.len()).flat_map(|i| {
            (0..u.len()).map(move |j| (dotc(&u[i], &u[j]) - C64::new(kron(i, j), 0.0)).norm())
        })),
        LanczosBasis::MInner { u, .. } => {
            let (m, _) = h.real_blocks();
            let mu: Vec<RVector> = u.iter().map(|x| &m * x).collect();
            max_dev((0..u.len()).flat_map(|i| {
                let mu = &mu;
                (0..u.len()).map(move |j| (u[i].dot(&mu[j]) - kron(i, j)).abs())
            }))
        }
        LanczosBasis::Omega { u, .. } => {
            let v: Vec<CVector> = u.iter().map(|x| h.apply_half(x, 1.0)).collect();
            let k = u.len();
            let mut dev = 0.0f64;
            for i in 0..k {
                for j in 0..k {
                    // Top-left block V_iᴴU_j + V_iᵀŪ_j = 2 Re(v_iᴴ u_j).
                    let tl = 2.0 * dotc(&v[i], &u[j]).re - 2.0 * kron(i, j);
                    let br = 2.0 * dotc(&u[i], &v[j]).re - 2.0 * kron(i, j);
                    // Off-diagonal blocks: v_iᴴv_j − conj(v_iᴴv_j) and u_iᴴu_j − conj(u_iᴴu_j).
                    let tr = 2.0 * dotc(&v[i], &v[j]).im;
                    let bl = 2.0 * dotc(&u[i], &u[j]).im;
                    dev = dev.max(tl.abs()).max(br.abs()).max(tr.abs()).max(bl.abs());
                }
            }
            dev
        }
        LanczosBasis::Gmg { w } => {
            let parity = |j: usize| if j % 2 == 0 { 1.0 } else { -1.0 };
            let g: Vec<CVector> = w.iter().enumerate().map(|(j, x)| h.apply_half(x, parity(j))).collect();
            let mut dev = 0.0f64;
            for i in 0..w.len() {
                for j in 0..w.len() {
                    let p = dotc(&w[i], &g[j]);
                    let ip = p + p.conj() * (parity(i) * parity(j));
                    dev = dev.max((ip - C64::new(kron(i, j), 0.0)).norm());
                }
            }
            dev
        }
    };
    Ok(dev)
}
