//! Gauss and generalized averaged Gauss quadrature on Lanczos tridiagonals,
//! and assembly of broadened spectra from the resulting nodes.

mod tridiag;

pub use tridiag::{build_gagq, build_tk, tridiag_eig, SymTridiagonal};

use crate::error::{Error, Result};
use crate::lanczos::{LanczosRun, Variant};
use crate::spectrum::{sample_odd_sum, BroadeningKernel, OmegaGrid, Spectrum, SpectrumMeta, SpectrumSource};

/// What to do with a quadrature node `θ ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NonpositiveNodePolicy {
    /// Remove the node and its weight.
    #[default]
    Drop,
    /// Keep every eigenvalue and evaluate the integrand as zero on `t ≤ 0`.
    ZeroIntegrand,
}

/// Nodes and weights of a quadrature rule for `dᴴ f(·) d`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureNodes {
    /// Ascending, all positive.
    pub thetas: Vec<f64>,
    /// `|S(1,j)|²`, matched to `thetas`.
    pub weights: Vec<f64>,
    pub dropped_count: usize,
    /// Whether the generalized averaged rule was used.
    pub gagq: bool,
}

/// Raw rule: tridiagonal eigenvalues and squared first components.
fn raw_rule(run: &LanczosRun, use_gagq: bool) -> Result<(Vec<f64>, Vec<f64>, bool)> {
    let (t, gagq) = if use_gagq {
        match build_gagq(run) {
            Ok(t) => (t, true),
            Err(Error::BreakdownExact(_)) | Err(Error::InsufficientSteps { .. }) => (build_tk(run), false),
            Err(e) => return Err(e),
        }
    } else {
        (build_tk(run), false)
    };
    let (eig, first) = tridiag_eig(&t)?;
    Ok((eig, first.iter().map(|z| z * z).collect(), gagq))
}

/// Quadrature nodes of a run: eigenvalues of `T_k` (Gauss) or `T̂_k` (GAGQ),
/// square-rooted for the `H²` engines, with nonpositive nodes discarded.
///
/// The GAGQ rule falls back to the exact Gauss rule after a lucky breakdown
/// and when fewer than two steps are available.
pub fn quadrature_nodes(run: &LanczosRun, use_gagq: bool) -> Result<QuadratureNodes> {
    let (eig, w, gagq) = raw_rule(run, use_gagq)?;
    let mut thetas = Vec::with_capacity(eig.len());
    let mut weights = Vec::with_capacity(eig.len());
    let mut dropped = 0;
    for (&e, &wj) in eig.iter().zip(&w) {
        if e <= 0.0 {
            dropped += 1;
            continue;
        }
        thetas.push(if run.variant.squared_nodes() { e.sqrt() } else { e });
        weights.push(wj);
    }
    if dropped > 1 {
        return Err(Error::MultipleNonpositiveNodes(dropped));
    }
    Ok(QuadratureNodes {
        thetas,
        weights,
        dropped_count: dropped,
        gagq,
    })
}

fn check_variant(run: &LanczosRun, allowed: &[Variant]) -> Result<()> {
    if allowed.contains(&run.variant) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("cannot assemble a {:?} run here", run.variant)))
    }
}

fn meta(run: &LanczosRun, gagq: bool, kernel: BroadeningKernel, scale: f64, dropped: usize) -> SpectrumMeta {
    SpectrumMeta {
        source: SpectrumSource::Lanczos(run.variant),
        k: run.k(),
        gagq,
        kernel,
        norm_const: run.norm_const,
        scale,
        dropped_count: dropped,
        breakdown_at: run.breakdown_at,
    }
}

/// `ε(ω) = scale · ‖d‖² Σ_j w_j [g(ω − θ_j) − g(ω + θ_j)]` with Ritz values of `A`.
pub fn assemble_tda_spectrum(
    run: &LanczosRun,
    use_gagq: bool,
    kernel: BroadeningKernel,
    grid: &OmegaGrid,
    scale: f64,
) -> Result<Spectrum> {
    assemble_with_policy(run, use_gagq, kernel, grid, scale, NonpositiveNodePolicy::Drop)
}

/// `ε(ω) = scale · norm_const · Σ_j w_j [g(ω − θ_j) − g(ω + θ_j)] / θ_j` with
/// `θ_j = √eig_j`.
pub fn assemble_bse_spectrum(
    run: &LanczosRun,
    use_gagq: bool,
    kernel: BroadeningKernel,
    grid: &OmegaGrid,
    scale: f64,
) -> Result<Spectrum> {
    assemble_with_policy(run, use_gagq, kernel, grid, scale, NonpositiveNodePolicy::Drop)
}

/// Assembly of a TDA, M-inner or Ω-inner run with an explicit rule for
/// nonpositive nodes.
pub fn assemble_with_policy(
    run: &LanczosRun,
    use_gagq: bool,
    kernel: BroadeningKernel,
    grid: &OmegaGrid,
    scale: f64,
    policy: NonpositiveNodePolicy,
) -> Result<Spectrum> {
    check_variant(run, &[Variant::TdaHermitian, Variant::RealMInner, Variant::ComplexOmegaInner])?;
    let squared = run.variant.squared_nodes();
    let pref = scale * run.norm_const;
    let (nodes, coeffs, dropped, gagq) = match policy {
        NonpositiveNodePolicy::Drop => {
            let q = quadrature_nodes(run, use_gagq)?;
            let coeffs: Vec<f64> = q
                .thetas
                .iter()
                .zip(&q.weights)
                .map(|(t, w)| if squared { pref * w / t } else { pref * w })
                .collect();
            (q.thetas, coeffs, q.dropped_count, q.gagq)
        }
        NonpositiveNodePolicy::ZeroIntegrand => {
            let (eig, w, gagq) = raw_rule(run, use_gagq)?;
            let zeroed = eig.iter().filter(|&&e| e <= 0.0).count();
            // A zero coefficient makes the term vanish identically in ω.
            let nodes: Vec<f64> = eig.iter().map(|&e| if squared { e.max(0.0).sqrt() } else { e }).collect();
            let coeffs: Vec<f64> = eig
                .iter()
                .zip(&w)
                .zip(&nodes)
                .map(|((&e, &wj), &t)| match (e > 0.0, squared) {
                    (false, _) => 0.0,
                    (true, true) => pref * wj / t,
                    (true, false) => pref * wj,
                })
                .collect();
            (nodes, coeffs, zeroed, gagq)
        }
    };
    Ok(Spectrum {
        omegas: grid.points().to_vec(),
        values: sample_odd_sum(&kernel, grid, &nodes, &coeffs),
        imag: None,
        meta: meta(run, gagq, kernel, scale, dropped),
    })
}
