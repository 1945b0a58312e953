//! One entry point over all Lanczos variants.

use crate::error::{Error, Result};
use crate::hamiltonian::{BseHamiltonian, TransitionVector};
use crate::lanczos::{
    lanczos_m_inner, lanczos_omega_inner, lanczos_tda, LanczosOptions, LanczosRun, Reorthogonalization, Variant,
};
use crate::quadrature::{assemble_bse_spectrum, assemble_tda_spectrum};
use crate::spectrum::{BroadeningKernel, OmegaGrid, Spectrum};
use crate::variants::{
    assemble_gmg_spectrum, assemble_paired_spectrum, lanczos_gmg, lanczos_paired, PairedInner,
    PairedProjectedHamiltonian,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub variant: Variant,
    pub gagq: bool,
    pub reorth: Reorthogonalization,
}

impl SolverConfig {
    pub fn new(variant: Variant) -> Self {
        SolverConfig {
            variant,
            gagq: false,
            reorth: Reorthogonalization::None,
        }
    }

    pub fn with_gagq(mut self, gagq: bool) -> Self {
        self.gagq = gagq;
        self
    }

    pub fn with_reorth(mut self, reorth: Reorthogonalization) -> Self {
        self.reorth = reorth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.gagq && matches!(self.variant, Variant::PairedOmegaInner | Variant::PairedCInner) {
            return Err(Error::InvalidArgument("averaged quadrature is not defined for paired variants".into()));
        }
        Ok(())
    }
}

/// Output of a Lanczos run of any variant, truncatable to fewer steps.
#[derive(Debug, Clone)]
pub enum Trace {
    Lanczos(LanczosRun),
    Paired(PairedProjectedHamiltonian),
}

impl Trace {
    pub fn k(&self) -> usize {
        match self {
            Trace::Lanczos(r) => r.k(),
            Trace::Paired(p) => p.k(),
        }
    }

    pub fn breakdown_at(&self) -> Option<usize> {
        match self {
            Trace::Lanczos(r) => r.breakdown_at,
            Trace::Paired(p) => p.breakdown_at,
        }
    }

    pub fn truncated(&self, k: usize) -> Trace {
        match self {
            Trace::Lanczos(r) => Trace::Lanczos(r.truncated(k)),
            Trace::Paired(p) => Trace::Paired(p.truncated(k)),
        }
    }
}

/// Runs `steps` steps of the configured variant. For the GMG variant `steps`
/// counts Lanczos steps on `H` and must be even.
pub fn run_variant(h: &BseHamiltonian, d: &TransitionVector, cfg: &SolverConfig, steps: usize) -> Result<Trace> {
    cfg.validate()?;
    let opts = LanczosOptions::new(steps).with_reorth(cfg.reorth);
    Ok(match cfg.variant {
        Variant::TdaHermitian => Trace::Lanczos(lanczos_tda(h, d, opts)?),
        Variant::RealMInner => Trace::Lanczos(lanczos_m_inner(h, d, opts)?),
        Variant::ComplexOmegaInner => Trace::Lanczos(lanczos_omega_inner(h, d, opts)?),
        Variant::GmgOmegaInner => Trace::Lanczos(lanczos_gmg(h, d, opts)?),
        Variant::PairedOmegaInner => Trace::Paired(lanczos_paired(h, d, steps, PairedInner::OmegaCondition43)?),
        Variant::PairedCInner => Trace::Paired(lanczos_paired(h, d, steps, PairedInner::CCondition44)?),
    })
}

/// Assembles the broadened spectrum of a trace.
pub fn assemble(trace: &Trace, gagq: bool, kernel: BroadeningKernel, grid: &OmegaGrid, scale: f64) -> Result<Spectrum> {
    match trace {
        Trace::Lanczos(run) => match run.variant {
            Variant::TdaHermitian => assemble_tda_spectrum(run, gagq, kernel, grid, scale),
            Variant::GmgOmegaInner => assemble_gmg_spectrum(run, gagq, kernel, grid, scale),
            _ => assemble_bse_spectrum(run, gagq, kernel, grid, scale),
        },
        Trace::Paired(p) => assemble_paired_spectrum(p, kernel, grid, scale),
    }
}

/// Runs a variant and assembles its spectrum.
pub fn approximate_spectrum(
    h: &BseHamiltonian,
    d: &TransitionVector,
    cfg: &SolverConfig,
    steps: usize,
    kernel: BroadeningKernel,
    grid: &OmegaGrid,
    scale: f64,
) -> Result<Spectrum> {
    let trace = run_variant(h, d, cfg, steps)?;
    assemble(&trace, cfg.gagq, kernel, grid, scale)
}
