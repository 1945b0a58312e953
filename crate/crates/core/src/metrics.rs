//! Angle between sampled curves and convergence bookkeeping.

use crate::error::{Error, Result};
use crate::hamiltonian::{BseHamiltonian, TransitionVector};
use crate::lanczos::{LanczosRun, Variant};
use crate::solver::{assemble, run_variant, SolverConfig, Trace};
use crate::spectrum::{BroadeningKernel, OmegaGrid, Spectrum};

/// Two curves sampled on one strictly ascending grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePair {
    omegas: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl CurvePair {
    pub fn new(omegas: Vec<f64>, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != omegas.len() || b.len() != omegas.len() {
            return Err(Error::DimensionMismatch(format!(
                "grid has {} points, curves have {} and {}",
                omegas.len(),
                a.len(),
                b.len()
            )));
        }
        if omegas.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("grid must be strictly ascending".into()));
        }
        Ok(CurvePair { omegas, a, b })
    }

    /// Real parts of two spectra on the same grid.
    pub fn from_spectra(a: &Spectrum, b: &Spectrum) -> Result<Self> {
        if a.omegas != b.omegas {
            return Err(Error::DimensionMismatch("spectra sampled on different grids".into()));
        }
        Self::new(a.omegas.clone(), a.values.clone(), b.values.clone())
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }
}

/// Angle between two curves in `L²(ω > 0)`, in `[0, π/2]`.
///
/// Integrals use the left-point rectangle rule on the positive samples (the
/// last sample reuses the preceding spacing). The angle is evaluated as
/// `2·atan2(‖a − b‖, ‖a + b‖)` on unit-normalized weighted samples, which
/// stays accurate for nearly parallel curves where `arccos` loses half the
/// digits. Anti-correlated curves are clamped to `π/2`.
pub fn curve_angle(pair: &CurvePair) -> Result<f64> {
    let w = &pair.omegas;
    let m = w.len();
    let mut xa = Vec::with_capacity(m);
    let mut xb = Vec::with_capacity(m);
    for i in 0..m {
        if w[i] <= 0.0 {
            continue;
        }
        let h = if i + 1 < m {
            w[i + 1] - w[i]
        } else if i > 0 {
            w[i] - w[i - 1]
        } else {
            1.0
        };
        let s = h.sqrt();
        xa.push(s * pair.a[i]);
        xb.push(s * pair.b[i]);
    }
    let na = xa.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = xb.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 || !na.is_finite() || !nb.is_finite() {
        return Err(Error::ZeroNormCurve);
    }
    let (mut diff, mut sum) = (0.0, 0.0);
    for (x, y) in xa.iter().zip(&xb) {
        let (x, y) = (x / na, y / nb);
        diff += (x - y) * (x - y);
        sum += (x + y) * (x + y);
    }
    let angle = 2.0 * diff.sqrt().atan2(sum.sqrt());
    Ok(angle.min(std::f64::consts::FRAC_PI_2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryRow {
    pub k: usize,
    pub angle: f64,
    pub dropped_count: usize,
    pub breakdown_at: Option<usize>,
}

/// Angle to `oracle` for `k = 1, …, k_max` (even `k` only for GMG).
///
/// A single run to `k_max` is truncated at every `k`; truncation reproduces a
/// fresh `k`-step run exactly because Lanczos coefficients depend only on
/// earlier steps. Past a lucky breakdown the rows repeat the exact result.
pub fn convergence_history(
    h: &BseHamiltonian,
    d: &TransitionVector,
    cfg: &SolverConfig,
    k_max: usize,
    kernel: BroadeningKernel,
    grid: &OmegaGrid,
    oracle: &Spectrum,
) -> Result<Vec<HistoryRow>> {
    let gmg = cfg.variant == Variant::GmgOmegaInner;
    let k_max = if gmg { k_max - k_max % 2 } else { k_max };
    let trace = run_variant(h, d, cfg, k_max)?;
    let ks: Vec<usize> = if gmg { (2..=k_max).step_by(2).collect() } else { (1..=k_max).collect() };
    let mut rows = Vec::with_capacity(ks.len());
    for k in ks {
        let t = trace.truncated(k);
        let s = assemble(&t, cfg.gagq, kernel, grid, oracle.meta.scale)?;
        rows.push(HistoryRow {
            k,
            angle: curve_angle(&CurvePair::from_spectra(&s, oracle)?)?,
            dropped_count: s.meta.dropped_count,
            breakdown_at: t.breakdown_at(),
        });
    }
    Ok(rows)
}

/// Smallest `k` whose angle is at most `tol`.
pub fn first_k_within(rows: &[HistoryRow], tol: f64) -> Option<usize> {
    rows.iter().find(|r| r.angle <= tol).map(|r| r.k)
}

/// The two a-posteriori error estimates for a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoRuleEstimate {
    /// Angle between the Gauss and averaged Gauss spectra at step `k`.
    pub gauss_vs_gagq: f64,
    /// Angle between the Gauss spectra at steps `k` and `k − 1`
    /// (`k − 2` for the GMG variant).
    pub consecutive: f64,
}

/// Both estimates; a run that ended in a lucky breakdown is exact and gets
/// zero for both.
pub fn two_rule_error_estimate(run: &LanczosRun, kernel: BroadeningKernel, grid: &OmegaGrid) -> Result<TwoRuleEstimate> {
    if run.breakdown_at.is_some() {
        return Ok(TwoRuleEstimate {
            gauss_vs_gagq: 0.0,
            consecutive: 0.0,
        });
    }
    let back = if run.variant == Variant::GmgOmegaInner { 2 } else { 1 };
    let k = run.k();
    if k < 2 * back {
        return Err(Error::InsufficientSteps { required: 2 * back, got: k });
    }
    let trace = Trace::Lanczos(run.clone());
    let gauss = assemble(&trace, false, kernel, grid, 1.0)?;
    let gagq = assemble(&trace, true, kernel, grid, 1.0)?;
    let prev = assemble(&trace.truncated(k - back), false, kernel, grid, 1.0)?;
    Ok(TwoRuleEstimate {
        gauss_vs_gagq: curve_angle(&CurvePair::from_spectra(&gauss, &gagq)?)?,
        consecutive: curve_angle(&CurvePair::from_spectra(&gauss, &prev)?)?,
    })
}
