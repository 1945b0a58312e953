//! Command-line front end: argument parsing, job validation and execution.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use bsespec_core::io::{format_spectrum, read_matrix, read_vector, write_matrix, write_vector, SpectrumFormat};
use bsespec_core::linalg::CMatrix;
use bsespec_core::solver::{assemble, run_variant};
use bsespec_core::{
    convergence_history, curve_angle, exact_spectrum, generate_paper_example_46, generate_random_definite,
    random_transition_vector, BroadeningKernel, BseHamiltonian, CurvePair, ExampleDiagonal, KernelShape, OmegaGrid,
    Reorthogonalization, ScalarField, SolverConfig, TransitionVector, Variant,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bsespec", version, about = "Absorption spectra of Bethe-Salpeter Hamiltonians by Lanczos quadrature")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate a spectrum and write it to a file.
    Run(RunArgs),
    /// Write a generated test problem to disk.
    Gen(GenArgs),
    /// Tabulate the angle to the exact spectrum against the step count.
    Converge(ConvergeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Tda,
    RealM,
    Omega,
    Gmg,
    PairedOmega,
    PairedC,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Tda => Variant::TdaHermitian,
            VariantArg::RealM => Variant::RealMInner,
            VariantArg::Omega => Variant::ComplexOmegaInner,
            VariantArg::Gmg => Variant::GmgOmegaInner,
            VariantArg::PairedOmega => Variant::PairedOmegaInner,
            VariantArg::PairedC => Variant::PairedCInner,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Gaussian,
    Lorentzian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReorthArg {
    None,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for ScalarField {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => ScalarField::Real,
            FieldArg::Complex => ScalarField::Complex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorArg {
    Random,
    /// The 16×16 example with `A = tridiag(1, 4, 1)` and diagonal `B`.
    #[value(name = "artificial16", alias = "paper-eq46")]
    Artificial16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagonalReadingArg {
    ImaginaryUnit,
    RowIndex,
}

/// Where the Hamiltonian and transition vector come from.
#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Matrix file for A (MatrixMarket coordinate or dense text).
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Matrix file for B; omitted means B = 0.
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// Transition vector file (n x 1 matrix).
    #[arg(long)]
    pub d: Option<PathBuf>,
    /// Generate the problem instead of reading files.
    #[arg(long, value_enum, conflicts_with_all = ["a", "b", "d"])]
    pub generate: Option<GeneratorArg>,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
    pub field: FieldArg,
    #[arg(long, default_value_t = 0.5)]
    pub diag_shift: f64,
    /// Reading of the diagonal of B in the artificial n = 16 example.
    #[arg(long, value_enum, default_value_t = DiagonalReadingArg::ImaginaryUnit)]
    pub diagonal_reading: DiagonalReadingArg,
}

/// Method, kernel and sampling grid.
#[derive(Debug, Clone, Args)]
pub struct MethodArgs {
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    /// Use generalized averaged Gauss quadrature.
    #[arg(long)]
    pub gagq: bool,
    #[arg(long, value_enum, default_value_t = KernelArg::Gaussian)]
    pub kernel: KernelArg,
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    /// Upper end of the frequency grid; defaults to 1.5 times an estimate of the largest excitation energy.
    #[arg(long)]
    pub omega_max: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    pub grid_points: usize,
    #[arg(long, value_enum, default_value_t = ReorthArg::None)]
    pub reorth: ReorthArg,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct RunArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub method: MethodArgs,
    /// Number of Lanczos steps.
    #[arg(long)]
    pub k: usize,
    /// Overall factor applied to the spectrum.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Also compute the spectrum by full diagonalization and report the angle.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct GenArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Directory or file prefix; writes `<prefix>A.dat`, `<prefix>B.dat`, `<prefix>d.dat`.
    #[arg(long)]
    pub out_prefix: String,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub method: MethodArgs,
    #[arg(long)]
    pub kmax: usize,
    /// Output file for the `k,angle` table; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a CLI job with a stable kind name and exit code.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError {
            kind: "ConfigError",
            code: 3,
            message: message.into(),
        }
    }

    /// One-line machine-parsable form.
    pub fn line(&self) -> String {
        format!("error kind={} code={} message={:?}", self.kind, self.code, self.message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

impl std::error::Error for CliError {}

impl From<bsespec_core::Error> for CliError {
    fn from(e: bsespec_core::Error) -> Self {
        use bsespec_core::Error as E;
        let code = match &e {
            E::InvalidArgument(_) => 3,
            E::Io(_) => 4,
            E::Parse { .. } => 5,
            E::DimensionMismatch(_) => 6,
            E::StructureViolation(_) => 7,
            E::NotDefinite(_) => 8,
            E::NotRealField => 9,
            E::InvalidSteps(_) => 10,
            E::ZeroStartVector => 11,
            E::IndefiniteInnerProduct { .. } => 12,
            E::BasisNotRetained => 13,
            E::InsufficientSteps { .. } => 14,
            E::BreakdownExact(_) => 15,
            E::ConvergenceFailure(_) => 16,
            E::MultipleNonpositiveNodes(_) => 17,
            E::OddStepCount(_) => 18,
            E::SingularProjection => 19,
            E::NeutralVectorBreakdown(_) => 20,
            E::GramFactorizationFailure(_) => 21,
            E::ZeroNormCurve => 22,
        };
        CliError {
            kind: e.kind(),
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        bsespec_core::Error::Io(e).into()
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A validated `run` job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub hamiltonian: BseHamiltonian,
    pub d: TransitionVector,
    pub solver: SolverConfig,
    pub k: usize,
    pub kernel: BroadeningKernel,
    pub grid: OmegaGrid,
    pub scale: f64,
    pub oracle: bool,
    pub out: PathBuf,
    pub format: SpectrumFormat,
}

pub fn load_problem(p: &ProblemArgs) -> CliResult<(BseHamiltonian, TransitionVector)> {
    match p.generate {
        Some(GeneratorArg::Random) => {
            if p.n == 0 {
                return Err(CliError::config("--n must be positive"));
            }
            if !(p.diag_shift > 0.0) {
                return Err(CliError::config("--diag-shift must be positive"));
            }
            let field = p.field.into();
            Ok((
                generate_random_definite(p.n, p.seed, field, p.diag_shift),
                random_transition_vector(p.n, p.seed, field),
            ))
        }
        Some(GeneratorArg::Artificial16) => Ok(generate_paper_example_46(match p.diagonal_reading {
            DiagonalReadingArg::ImaginaryUnit => ExampleDiagonal::ImaginaryUnit,
            DiagonalReadingArg::RowIndex => ExampleDiagonal::RowIndex,
        })),
        None => {
            let (Some(a), Some(d)) = (&p.a, &p.d) else {
                return Err(CliError::config("either --generate or both --a and --d are required"));
            };
            let a = read_matrix(a)?;
            let b = match &p.b {
                Some(b) => read_matrix(b)?,
                None => CMatrix::zeros(a.nrows(), a.ncols()),
            };
            let h = BseHamiltonian::new(a, b)?;
            let d = TransitionVector::new(read_vector(d)?)?;
            if d.len() != h.n() {
                return Err(bsespec_core::Error::DimensionMismatch(format!(
                    "d has length {}, A is {}x{}",
                    d.len(),
                    h.n(),
                    h.n()
                ))
                .into());
            }
            Ok((h, d))
        }
    }
}

/// Largest excitation energy estimate used for the default grid.
fn lambda_max_estimate(h: &BseHamiltonian) -> f64 {
    h.norm_estimate(50)
}

fn method_config(
    m: &MethodArgs,
    h: BseHamiltonian,
) -> CliResult<(BseHamiltonian, SolverConfig, BroadeningKernel, OmegaGrid)> {
    let variant: Variant = m.variant.into();
    let h = if variant == Variant::TdaHermitian { h.with_tda(true) } else { h };
    if variant == Variant::RealMInner && h.field() != ScalarField::Real {
        return Err(CliError::config("variant real-m requires a real Hamiltonian"));
    }
    let solver = SolverConfig::new(variant).with_gagq(m.gagq).with_reorth(match m.reorth {
        ReorthArg::None => Reorthogonalization::None,
        ReorthArg::Full => Reorthogonalization::Full,
    });
    solver.validate().map_err(|e| CliError::config(e.to_string()))?;
    if !(m.sigma > 0.0) || !m.sigma.is_finite() {
        return Err(CliError::config("--sigma must be positive"));
    }
    let shape = match m.kernel {
        KernelArg::Gaussian => KernelShape::Gaussian,
        KernelArg::Lorentzian => KernelShape::Lorentzian,
    };
    let kernel = BroadeningKernel::new(shape, m.sigma)?;
    if m.grid_points < 2 {
        return Err(CliError::config("--grid-points must be at least 2"));
    }
    let omega_max = match m.omega_max {
        Some(w) if w > 0.0 && w.is_finite() => w,
        Some(_) => return Err(CliError::config("--omega-max must be positive")),
        None => 1.5 * lambda_max_estimate(&h),
    };
    let grid = OmegaGrid::uniform(0.0, omega_max, m.grid_points)?;
    Ok((h, solver, kernel, grid))
}

impl JobConfig {
    pub fn from_args(args: &RunArgs) -> CliResult<Self> {
        let (h, d) = load_problem(&args.problem)?;
        if h.field() == ScalarField::Real && !d.is_real() && args.method.variant == VariantArg::RealM {
            return Err(CliError::config("variant real-m requires a real transition vector"));
        }
        let (hamiltonian, solver, kernel, grid) = method_config(&args.method, h)?;
        if args.k == 0 {
            return Err(CliError::config("--k must be positive"));
        }
        if solver.variant == Variant::GmgOmegaInner && args.k % 2 == 1 {
            return Err(CliError::config("variant gmg requires an even --k"));
        }
        if !args.scale.is_finite() {
            return Err(CliError::config("--scale must be finite"));
        }
        Ok(JobConfig {
            hamiltonian,
            d,
            solver,
            k: args.k,
            kernel,
            grid,
            scale: args.scale,
            oracle: args.oracle,
            out: args.out.clone(),
            format: match args.format {
                FormatArg::Csv => SpectrumFormat::Csv,
                FormatArg::Tsv => SpectrumFormat::Tsv,
            },
        })
    }
}

/// `spec.csv` → `spec.oracle.csv`.
pub fn oracle_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.oracle.{}", ext.to_string_lossy()),
        None => format!("{stem}.oracle"),
    };
    out.with_file_name(name)
}

/// What a completed run reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub steps: usize,
    pub dropped_count: usize,
    pub breakdown_at: Option<usize>,
    pub angle: Option<f64>,
}

/// Executes a job, writing the spectrum files and a `key=value` summary to `log`.
pub fn run_job(cfg: &JobConfig, log: &mut dyn Write) -> CliResult<RunReport> {
    let trace = run_variant(&cfg.hamiltonian, &cfg.d, &cfg.solver, cfg.k)?;
    let spectrum = assemble(&trace, cfg.solver.gagq, cfg.kernel, &cfg.grid, cfg.scale)?;
    std::fs::write(&cfg.out, format_spectrum(&spectrum, cfg.format))?;
    let mut report = RunReport {
        steps: trace.k(),
        dropped_count: spectrum.meta.dropped_count,
        breakdown_at: trace.breakdown_at(),
        angle: None,
    };
    if cfg.oracle {
        let mut exact = exact_spectrum(&cfg.hamiltonian, &cfg.d, cfg.kernel, &cfg.grid)?;
        for v in exact.values.iter_mut() {
            *v *= cfg.scale;
        }
        std::fs::write(oracle_path(&cfg.out), format_spectrum(&exact, cfg.format))?;
        report.angle = Some(curve_angle(&CurvePair::from_spectra(&spectrum, &exact)?)?);
    }
    write!(log, "steps={} dropped_count={}", report.steps, report.dropped_count)?;
    if let Some(b) = report.breakdown_at {
        write!(log, " breakdown_at={b}")?;
    }
    if let Some(a) = report.angle {
        write!(log, " angle={a:.6e}")?;
    }
    writeln!(log)?;
    Ok(report)
}

pub fn run_gen(args: &GenArgs, log: &mut dyn Write) -> CliResult<()> {
    let (h, d) = load_problem(&args.problem)?;
    let prefix = &args.out_prefix;
    if let Some(parent) = Path::new(&format!("{prefix}A.dat")).parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    write_matrix(h.a(), format!("{prefix}A.dat"))?;
    write_matrix(h.b(), format!("{prefix}B.dat"))?;
    write_vector(d.as_vector(), format!("{prefix}d.dat"))?;
    writeln!(log, "n={} wrote={prefix}A.dat,{prefix}B.dat,{prefix}d.dat", h.n())?;
    Ok(())
}

pub fn run_converge(args: &ConvergeArgs, log: &mut dyn Write) -> CliResult<()> {
    let (h, d) = load_problem(&args.problem)?;
    let (h, solver, kernel, grid) = method_config(&args.method, h)?;
    if args.kmax == 0 {
        return Err(CliError::config("--kmax must be positive"));
    }
    let oracle = exact_spectrum(&h, &d, kernel, &grid)?;
    let rows = convergence_history(&h, &d, &solver, args.kmax, kernel, &grid, &oracle)?;
    let mut table = String::from("k,angle\n");
    for r in rows {
        table.push_str(&format!("{},{:.11e}\n", r.k, r.angle));
    }
    match &args.out {
        Some(p) => std::fs::write(p, table)?,
        None => log.write_all(table.as_bytes())?,
    }
    Ok(())
}

/// Dispatches a parsed command line.
pub fn execute(cli: &Cli, log: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Run(args) => run_job(&JobConfig::from_args(args)?, log).map(|_| ()),
        Command::Gen(args) => run_gen(args, log),
        Command::Converge(args) => run_converge(args, log),
    }
}
