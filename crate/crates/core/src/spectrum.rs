//! Broadening kernels, frequency grids and sampled spectra.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lanczos::Variant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelShape {
    Gaussian,
    Lorentzian,
}

/// Smooth stand-in `g_σ` for the Dirac delta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BroadeningKernel {
    shape: KernelShape,
    sigma: f64,
}

impl BroadeningKernel {
    pub fn new(shape: KernelShape, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
        }
        Ok(BroadeningKernel { shape, sigma })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(KernelShape::Gaussian, sigma)
    }

    pub fn lorentzian(sigma: f64) -> Result<Self> {
        Self::new(KernelShape::Lorentzian, sigma)
    }

    pub fn shape(&self) -> KernelShape {
        self.shape
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let s = self.sigma;
        match self.shape {
            KernelShape::Gaussian => (-(x * x) / (2.0 * s * s)).exp() / ((2.0 * PI).sqrt() * s),
            KernelShape::Lorentzian => s / (PI * (x * x + s * s)),
        }
    }

    /// `g(ω − θ) − g(ω + θ)`, the odd pair contributed by a node `θ`.
    #[inline]
    pub fn odd_pair(&self, omega: f64, theta: f64) -> f64 {
        self.eval(omega - theta) - self.eval(omega + theta)
    }
}

/// Ascending frequency samples.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaGrid(Vec<f64>);

impl OmegaGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("empty frequency grid".into()));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("frequency grid must be strictly ascending".into()));
        }
        Ok(OmegaGrid(points))
    }

    /// `points` equispaced samples on `[lo, hi]`, endpoints included.
    pub fn uniform(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points < 2 || !(hi > lo) {
            return Err(Error::InvalidArgument(format!(
                "uniform grid needs hi > lo and at least 2 points (got [{lo}, {hi}], {points})"
            )));
        }
        let h = (hi - lo) / (points - 1) as f64;
        Self::new((0..points).map(|i| lo + h * i as f64).collect())
    }

    /// Grid on `[-hi, hi]` whose samples are exact negatives of each other.
    pub fn symmetric(hi: f64, points_per_side: usize) -> Result<Self> {
        let pos = Self::uniform(0.0, hi, points_per_side + 1)?;
        let mut v: Vec<f64> = pos.0[1..].iter().rev().map(|x| -x).collect();
        v.extend_from_slice(&pos.0);
        Self::new(v)
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// How a spectrum was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    /// Full diagonalization.
    Exact,
    Lanczos(Variant),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMeta {
    pub source: SpectrumSource,
    /// Lanczos steps actually used (0 for the exact spectrum).
    pub k: usize,
    pub gagq: bool,
    pub kernel: BroadeningKernel,
    pub norm_const: f64,
    pub scale: f64,
    pub dropped_count: usize,
    pub breakdown_at: Option<usize>,
}

/// Sampled absorption spectrum `ε_σ(ω)`.
///
/// `imag` is only populated for the complex-valued diagnostic assembled from
/// the paired Ω-inner-product procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub imag: Option<Vec<f64>>,
    pub meta: SpectrumMeta,
}

impl Spectrum {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.imag
            .as_ref()
            .map(|im| im.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
            .unwrap_or(0.0)
    }

    /// Smallest value over `ω > 0` (`+∞` if the grid has no positive samples).
    pub fn min_positive_frequency_value(&self) -> f64 {
        self.omegas
            .iter()
            .zip(&self.values)
            .filter(|(w, _)| **w > 0.0)
            .fold(f64::INFINITY, |m, (_, v)| m.min(*v))
    }
}

/// Weighted node sum `Σ_j c_j · [g(ω−θ_j) − g(ω+θ_j)]` on every grid point.
pub(crate) fn sample_odd_sum(
    kernel: &BroadeningKernel,
    grid: &OmegaGrid,
    nodes: &[f64],
    coeffs: &[f64],
) -> Vec<f64> {
    grid.points()
        .iter()
        .map(|&w| {
            nodes
                .iter()
                .zip(coeffs)
                .map(|(&t, &c)| c * kernel.odd_pair(w, t))
                .sum()
        })
        .collect()
}
