use super::{
    breakdown_tolerance, checked_radicand, LanczosBasis, LanczosOptions, LanczosRun, Reorthogonalization, Variant,
    NORM_ESTIMATE_ITERATIONS,
};
use crate::error::{Error, Result};
use crate::hamiltonian::{BseHamiltonian, ScalarField, TransitionVector};
use crate::linalg::{axpy_real, re_dotc, CVector, C64};

/// Lanczos on `H²` in the Ω inner product, carried on top halves.
///
/// The full Lanczos vectors are `[u_j; ū_j]` and `[v_j; −v̄_j]` with
/// `v_j = A u_j + B ū_j`. The tridiagonal `T_k` is real, and its eigenvalues
/// are squared Ritz values of `H`.
pub fn lanczos_omega_inner(h: &BseHamiltonian, d: &TransitionVector, opts: LanczosOptions) -> Result<LanczosRun> {
    let k = opts.steps;
    if k < 1 {
        return Err(Error::InvalidSteps(k));
    }
    let n = h.n();
    if d.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "transition vector has length {}, Hamiltonian has dimension {n}",
            d.len()
        )));
    }
    let d = d.as_vector();
    let norm_const = re_dotc(d, &h.apply_half(d, 1.0));
    if norm_const <= 0.0 {
        return Err(Error::IndefiniteInnerProduct { step: 0, radicand: norm_const });
    }
    let h_norm = h.norm_estimate(NORM_ESTIMATE_ITERATIONS);
    let tol = breakdown_tolerance(h_norm * h_norm);
    let full = opts.reorth == Reorthogonalization::Full;
    // For complex data the iterates also satisfy Im(u_iᴴ u_j) = 0, which the Ω
    // inner product does not see. Full reorthogonalization keeps a real
    // orthonormal basis of span{v_i, ı·u_i} and projects against it too.
    let structural = full && h.field() == ScalarField::Complex;
    let mut constraints: Vec<CVector> = Vec::new();

    let mut us: Vec<CVector> = Vec::new();
    let mut vs: Vec<CVector> = Vec::new();
    let mut alphas = Vec::with_capacity(k);
    let mut betas = Vec::with_capacity(k);
    let mut breakdown_at = None;

    let s = norm_const.sqrt();
    let mut u = d.map(|z| z / s);
    let mut v = h.apply_half(d, 1.0).map(|z| z / s);
    let mut u_prev: Option<CVector> = None;
    let mut beta_prev = 0.0;

    for j in 1..=k {
        let mut x = h.apply_half(&v, -1.0);
        if let Some(up) = &u_prev {
            axpy_real(&mut x, beta_prev, up);
        }
        let alpha = re_dotc(&v, &x);
        axpy_real(&mut x, alpha, &u);
        if opts.keep_all() {
            us.push(u.clone());
            vs.push(v.clone());
        }
        if structural {
            push_constraint(&mut constraints, v.clone());
            push_constraint(&mut constraints, u.map(|z| C64::new(-z.im, z.re)));
        }
        if full {
            for _ in 0..2 {
                for (ui, vi) in us.iter().zip(&vs) {
                    let c = re_dotc(vi, &x);
                    axpy_real(&mut x, c, ui);
                }
            }
            for _ in 0..2 {
                for q in &constraints {
                    let c = re_dotc(q, &x);
                    axpy_real(&mut x, c, q);
                }
            }
        }
        let y = h.apply_half(&x, 1.0);
        let rad = checked_radicand(re_dotc(&x, &y), x.norm(), y.norm(), j)?;
        let beta = rad.sqrt();
        alphas.push(alpha);
        if beta <= tol || j >= n {
            betas.push(0.0);
            breakdown_at = Some(j);
            break;
        }
        betas.push(beta);
        u_prev = Some(std::mem::replace(&mut u, x.map(|z| z / beta)));
        v = y.map(|z| z / beta);
        beta_prev = beta;
    }

    Ok(LanczosRun {
        variant: Variant::ComplexOmegaInner,
        alphas,
        betas,
        norm_const,
        breakdown_at,
        basis: opts.retain_basis.then_some(LanczosBasis::Omega { u: us, v: vs }),
    })
}

/// Appends `w` to a basis orthonormal in `Re(aᴴb)`, unless it is already
/// (numerically) in its span.
fn push_constraint(basis: &mut Vec<CVector>, mut w: CVector) {
    let norm0 = w.norm();
    for _ in 0..2 {
        for q in basis.iter() {
            let c = re_dotc(q, &w);
            axpy_real(&mut w, c, q);
        }
    }
    let norm = w.norm();
    if norm > 1e-10 * norm0 {
        basis.push(w.map(|z| z / norm));
    }
}
