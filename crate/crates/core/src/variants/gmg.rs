use crate::error::{Error, Result};
use crate::hamiltonian::{BseHamiltonian, TransitionVector};
use crate::lanczos::{
    breakdown_tolerance, checked_radicand, LanczosBasis, LanczosOptions, LanczosRun, Reorthogonalization, Variant,
    NORM_ESTIMATE_ITERATIONS,
};
use crate::linalg::{axpy_real, re_dotc, CVector, C64};
use crate::quadrature::{tridiag_eig, SymTridiagonal};
use crate::spectrum::{sample_odd_sum, BroadeningKernel, OmegaGrid, Spectrum, SpectrumMeta, SpectrumSource};

/// Zero-diagonal tridiagonal `T̃` produced by Lanczos on `H` itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroDiagTridiagonal {
    /// `β̃_1, …, β̃_{m−1}`.
    pub betas_tilde: Vec<f64>,
    /// Residual coefficient `β̃_m`, absent after a breakdown.
    pub beta_ext: Option<f64>,
}

impl ZeroDiagTridiagonal {
    pub fn from_run(run: &LanczosRun) -> Self {
        let m = run.k();
        ZeroDiagTridiagonal {
            betas_tilde: run.betas[..m.saturating_sub(1)].to_vec(),
            beta_ext: if run.breakdown_at.is_some() { None } else { run.betas.last().copied() },
        }
    }

    pub fn dim(&self) -> usize {
        self.betas_tilde.len() + 1
    }

    pub fn tridiagonal(&self) -> SymTridiagonal {
        SymTridiagonal {
            diag: vec![0.0; self.dim()],
            offdiag: self.betas_tilde.clone(),
        }
    }

    /// The `(2m−1)`-dimensional averaged matrix, or `None` after a breakdown.
    pub fn averaged(&self) -> Option<SymTridiagonal> {
        let ext = self.beta_ext?;
        let m = self.dim();
        if m < 2 {
            return None;
        }
        let mut offdiag = self.betas_tilde.clone();
        offdiag.push(ext);
        offdiag.extend(self.betas_tilde[..m - 2].iter().rev());
        Some(SymTridiagonal {
            diag: vec![0.0; 2 * m - 1],
            offdiag,
        })
    }
}

fn parity(j: usize) -> f64 {
    // Zero-based index: q_1 = [w; w̄], q_2 = [w; −w̄], …
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Lanczos on `H` in the Ω inner product from `q̃_1 = d_l / ‖d_l‖_Ω`.
///
/// Every Lanczos vector stays structured, `q̃_j = [w_j; s_j w̄_j]` with
/// alternating `s_j`, so only top halves are stored. The diagonal of `T̃`
/// vanishes identically; `alphas` is all zeros and `betas` holds `β̃`.
/// `norm_const` is `‖d_l‖²_Ω = 2 Re(dᴴAd + dᴴBd̄)`.
pub fn lanczos_gmg(h: &BseHamiltonian, d: &TransitionVector, opts: LanczosOptions) -> Result<LanczosRun> {
    let k2 = opts.steps;
    if k2 < 2 {
        return Err(Error::InvalidSteps(k2));
    }
    if k2 % 2 == 1 {
        return Err(Error::OddStepCount(k2));
    }
    let n = h.n();
    if d.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "transition vector has length {}, Hamiltonian has dimension {n}",
            d.len()
        )));
    }
    let d = d.as_vector();
    let half = re_dotc(d, &h.apply_half(d, 1.0));
    if half <= 0.0 {
        return Err(Error::IndefiniteInnerProduct { step: 0, radicand: half });
    }
    let norm_const = 2.0 * half;
    let tol = breakdown_tolerance(h.norm_estimate(NORM_ESTIMATE_ITERATIONS));
    let full = opts.reorth == Reorthogonalization::Full;
    let keep = opts.retain_basis || full;

    let mut ws: Vec<CVector> = Vec::new();
    let mut gs: Vec<CVector> = Vec::new();
    let mut betas = Vec::with_capacity(k2);
    let mut breakdown_at = None;

    let mut w = d / C64::new(norm_const.sqrt(), 0.0);
    let mut w_prev: Option<CVector> = None;
    let mut beta_prev = 0.0;

    for j in 0..k2 {
        let s = parity(j);
        let p = -s;
        let mut r = h.apply_half(&w, s);
        if let Some(wp) = &w_prev {
            axpy_real(&mut r, beta_prev, wp);
        }
        if keep {
            ws.push(w.clone());
            if full {
                gs.push(h.apply_half(&w, s));
            }
        }
        if full {
            for _ in 0..2 {
                for (i, (wi, gi)) in ws.iter().zip(&gs).enumerate() {
                    if parity(i) == p {
                        let c = 2.0 * re_dotc(gi, &r);
                        axpy_real(&mut r, c, wi);
                    }
                }
            }
        }
        let g = h.apply_half(&r, p);
        let rad = checked_radicand(2.0 * re_dotc(&r, &g), r.norm(), g.norm(), j + 1)?;
        let beta = rad.sqrt();
        if beta <= tol || j + 1 >= 2 * n {
            betas.push(0.0);
            breakdown_at = Some(j + 1);
            break;
        }
        betas.push(beta);
        let next = r / C64::new(beta, 0.0);
        w_prev = Some(std::mem::replace(&mut w, next));
        beta_prev = beta;
    }

    Ok(LanczosRun {
        variant: Variant::GmgOmegaInner,
        alphas: vec![0.0; betas.len()],
        betas,
        norm_const,
        breakdown_at,
        basis: opts.retain_basis.then_some(LanczosBasis::Gmg { w: ws }),
    })
}

/// Positive nodes and weights of the zero-diagonal rule.
///
/// The eigenvalues of a zero-diagonal tridiagonal come in `±θ` pairs, plus a
/// zero in odd dimension; only the upper half is kept.
fn positive_half(t: &SymTridiagonal) -> Result<(Vec<f64>, Vec<f64>)> {
    let (eig, first) = tridiag_eig(t)?;
    let m = eig.len();
    let keep = m / 2;
    let thetas = eig[m - keep..].to_vec();
    let weights = first[m - keep..].iter().map(|z| z * z).collect();
    let scale = thetas.last().copied().unwrap_or(0.0);
    if thetas.first().is_some_and(|&t| t <= 1e-12 * scale) || keep == 0 {
        return Err(Error::SingularProjection);
    }
    Ok((thetas, weights))
}

/// `ε(ω) = scale · ‖d_l‖²_Ω · Σ_{θ>0} s_θ² [g(ω − θ) − g(ω + θ)] / θ`, i.e.
/// `e₁ᴴ g(ωI − T̃) T̃⁻¹ e₁` scaled by the squared Ω-norm of `d_l`.
///
/// With `use_gagq`, the rule uses the `2m−1` positive eigenvalues of the
/// averaged `(4k−1)`-dimensional matrix (`m = 2k`), falling back to the
/// plain rule after a breakdown.
pub fn assemble_gmg_spectrum(
    run: &LanczosRun,
    use_gagq: bool,
    kernel: BroadeningKernel,
    grid: &OmegaGrid,
    scale: f64,
) -> Result<Spectrum> {
    if run.variant != Variant::GmgOmegaInner {
        return Err(Error::InvalidArgument(format!("cannot assemble a {:?} run here", run.variant)));
    }
    let zt = ZeroDiagTridiagonal::from_run(run);
    let (t, gagq) = match zt.averaged().filter(|_| use_gagq) {
        Some(t) => (t, true),
        None => (zt.tridiagonal(), false),
    };
    let (thetas, weights) = positive_half(&t)?;
    let pref = scale * run.norm_const;
    let coeffs: Vec<f64> = thetas.iter().zip(&weights).map(|(t, w)| pref * w / t).collect();
    Ok(Spectrum {
        omegas: grid.points().to_vec(),
        values: sample_odd_sum(&kernel, grid, &thetas, &coeffs),
        imag: None,
        meta: SpectrumMeta {
            source: SpectrumSource::Lanczos(Variant::GmgOmegaInner),
            k: run.k(),
            gagq,
            kernel,
            norm_const: run.norm_const,
            scale,
            dropped_count: 0,
            breakdown_at: run.breakdown_at,
        },
    })
}
