use super::{
    breakdown_tolerance, checked_radicand, LanczosBasis, LanczosOptions, LanczosRun, Reorthogonalization, Variant,
    NORM_ESTIMATE_ITERATIONS,
};
use crate::error::{Error, Result};
use crate::hamiltonian::{BseHamiltonian, ScalarField, TransitionVector};
use crate::linalg::{real_part, RVector};

fn dot(a: &RVector, b: &RVector) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc + x * y)
}

/// Lanczos on `KM` in the `M` inner product for a real Hamiltonian.
///
/// `A` and `B` are applied separately (`Kv = Av − Bv`, `Mx = Ax + Bx`) so the
/// coefficient stream tracks [`lanczos_omega_inner`](super::lanczos_omega_inner)
/// on the same input to rounding level.
pub fn lanczos_m_inner(h: &BseHamiltonian, d: &TransitionVector, opts: LanczosOptions) -> Result<LanczosRun> {
    let k = opts.steps;
    if k < 1 {
        return Err(Error::InvalidSteps(k));
    }
    if h.field() != ScalarField::Real || !d.is_real() {
        return Err(Error::NotRealField);
    }
    let n = h.n();
    if d.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "transition vector has length {}, Hamiltonian has dimension {n}",
            d.len()
        )));
    }
    let a = real_part(h.a());
    let b = if h.is_tda() { None } else { Some(real_part(h.b())) };
    let apply = |x: &RVector, s: f64| -> RVector {
        let mut out = &a * x;
        if let Some(b) = &b {
            let bx = b * x;
            out.axpy(s, &bx, 1.0);
        }
        out
    };

    let d = d.as_vector().map(|z| z.re);
    let md = apply(&d, 1.0);
    let norm_const = dot(&d, &md);
    if norm_const <= 0.0 {
        return Err(Error::IndefiniteInnerProduct { step: 0, radicand: norm_const });
    }
    let h_norm = h.norm_estimate(NORM_ESTIMATE_ITERATIONS);
    let tol = breakdown_tolerance(h_norm * h_norm);
    let full = opts.reorth == Reorthogonalization::Full;

    let mut us: Vec<RVector> = Vec::new();
    let mut vs: Vec<RVector> = Vec::new();
    let mut alphas = Vec::with_capacity(k);
    let mut betas = Vec::with_capacity(k);
    let mut breakdown_at = None;

    let s = norm_const.sqrt();
    let mut u = d / s;
    let mut v = md / s;
    let mut u_prev: Option<RVector> = None;
    let mut beta_prev = 0.0;

    for j in 1..=k {
        let mut x = apply(&v, -1.0);
        if let Some(up) = &u_prev {
            x.axpy(-beta_prev, up, 1.0);
        }
        let alpha = dot(&v, &x);
        x.axpy(-alpha, &u, 1.0);
        if opts.keep_all() {
            us.push(u.clone());
            vs.push(v.clone());
        }
        if full {
            for _ in 0..2 {
                for (ui, vi) in us.iter().zip(&vs) {
                    let c = dot(vi, &x);
                    x.axpy(-c, ui, 1.0);
                }
            }
        }
        let y = apply(&x, 1.0);
        let rad = checked_radicand(dot(&x, &y), x.norm(), y.norm(), j)?;
        let beta = rad.sqrt();
        alphas.push(alpha);
        if beta <= tol || j >= n {
            betas.push(0.0);
            breakdown_at = Some(j);
            break;
        }
        betas.push(beta);
        u_prev = Some(std::mem::replace(&mut u, x / beta));
        v = y / beta;
        beta_prev = beta;
    }

    Ok(LanczosRun {
        variant: Variant::RealMInner,
        alphas,
        betas,
        norm_const,
        breakdown_at,
        basis: opts.retain_basis.then_some(LanczosBasis::MInner { u: us, v: vs }),
    })
}
