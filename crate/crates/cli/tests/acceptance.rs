//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL line
//! each and exits nonzero if any failed.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use bsespec_core::lanczos::LanczosBasis;
use bsespec_core::linalg::{CMatrix, CVector, C64};
use bsespec_core::quadrature::{assemble_with_policy, build_tk, NonpositiveNodePolicy};
use bsespec_core::solver::{assemble, run_variant};
use bsespec_core::variants::ZeroDiagTridiagonal;
use bsespec_core::{
    assemble_gmg_spectrum, curve_angle, exact_spectrum, full_diagonalize, generate_paper_example_46,
    generate_random_definite, lanczos_gmg, lanczos_m_inner, lanczos_omega_inner, lanczos_paired,
    random_transition_vector, retained_basis_orthogonality, tridiag_eig, BroadeningKernel, BseHamiltonian, CurvePair,
    ExampleDiagonal, LanczosOptions, LanczosRun, OmegaGrid, PairedInner, Reorthogonalization, ScalarField,
    SolverConfig, Spectrum, TransitionVector, Variant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// One GAGQ assembly seen while checking criteria 1–8.
struct DropRecord {
    context: String,
    dropped: Result<usize, String>,
    /// Angles to the exact spectrum when dropping and when zeroing, recorded
    /// only when a nonpositive node occurred.
    angles: Option<(f64, f64)>,
}

#[derive(Default)]
struct DropLog(Vec<DropRecord>);

impl DropLog {
    /// Assembles a GAGQ spectrum of a TDA/M/Ω run under both node policies.
    fn record(&mut self, context: String, run: &LanczosRun, kernel: BroadeningKernel, grid: &OmegaGrid, exact: &Spectrum) {
        let dropped = assemble_with_policy(run, true, kernel, grid, 1.0, NonpositiveNodePolicy::Drop);
        let zeroed = assemble_with_policy(run, true, kernel, grid, 1.0, NonpositiveNodePolicy::ZeroIntegrand);
        let rec = match (dropped, zeroed) {
            (Ok(s), Ok(z)) => {
                let angles = (s.meta.dropped_count > 0).then(|| (angle(&s, exact), angle(&z, exact)));
                DropRecord {
                    context,
                    dropped: Ok(s.meta.dropped_count),
                    angles,
                }
            }
            (Err(e), _) | (_, Err(e)) => DropRecord {
                context,
                dropped: Err(e.to_string()),
                angles: None,
            },
        };
        self.0.push(rec);
    }

    fn record_gmg(&mut self, context: String, s: &Spectrum) {
        self.0.push(DropRecord {
            context,
            dropped: Ok(s.meta.dropped_count),
            angles: None,
        });
    }
}

fn angle(a: &Spectrum, b: &Spectrum) -> f64 {
    curve_angle(&CurvePair::from_spectra(a, b).expect("same grid")).expect("nonzero curves")
}

fn kernel() -> BroadeningKernel {
    BroadeningKernel::gaussian(0.1).unwrap()
}

fn grid_for(h: &BseHamiltonian, points: usize) -> OmegaGrid {
    OmegaGrid::uniform(0.0, 1.5 * h.norm_estimate(50), points).unwrap()
}

fn random_instance(n: usize, seed: u64, field: ScalarField, shift: f64) -> (BseHamiltonian, TransitionVector) {
    (generate_random_definite(n, seed, field, shift), random_transition_vector(n, seed, field))
}

fn t_k_eigenvalues(run: &LanczosRun) -> Vec<f64> {
    tridiag_eig(&build_tk(run)).expect("QL converges").0
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn criterion_1(log: &mut DropLog) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_lmin = f64::INFINITY;
    for case in 0..200 {
        let n = rng.random_range(2..=64);
        let k = rng.random_range(1..=n);
        // A few near-singular instances to exercise nonpositive GAGQ nodes.
        let shift = if case % 4 == 0 { 1e-3 } else { rng.random_range(0.05..1.0) };
        let (h, d) = random_instance(n, 1000 + case, ScalarField::Complex, shift);
        let run = lanczos_omega_inner(&h, &d, LanczosOptions::new(k)).map_err(|e| format!("case {case}: {e}"))?;
        if run.alphas.iter().chain(&run.betas).any(|x| !x.is_finite()) {
            return Err(format!("case {case}: non-finite coefficient"));
        }
        if let Some(a) = run.alphas.iter().find(|a| **a < 0.0) {
            return Err(format!("case {case}: negative alpha {a}"));
        }
        if let Some(b) = run.betas.iter().find(|b| **b < 0.0) {
            return Err(format!("case {case}: negative beta {b}"));
        }
        let eig = t_k_eigenvalues(&run);
        let norm = eig.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
        let rel = eig[0] / norm;
        worst_lmin = worst_lmin.min(rel);
        if eig[0] <= -1e-10 * norm {
            return Err(format!("case {case}: lambda_min(T_k) = {} with norm {norm}", eig[0]));
        }
        let grid = grid_for(&h, 400);
        let exact = exact_spectrum(&h, &d, kernel(), &grid).map_err(|e| e.to_string())?;
        log.record(format!("c1 case {case} n={n} k={k}"), &run, kernel(), &grid, &exact);
    }
    Ok(format!("200 instances, min lambda_min(T_k)/||T_k|| = {worst_lmin:.3e}"))
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (i, n) in [2usize, 5, 9, 16, 24, 33, 48, 64].into_iter().enumerate() {
        for k in [1usize, 4, 11, 20, 32] {
            let k = k.min(n);
            let (h, d) = random_instance(n, 2000 + i as u64, ScalarField::Complex, 0.2);
            let opts = LanczosOptions::new(k).with_reorth(Reorthogonalization::Full).retaining_basis();
            let run = lanczos_omega_inner(&h, &d, opts).map_err(|e| e.to_string())?;
            if !matches!(run.basis, Some(LanczosBasis::Omega { .. })) {
                return Err("basis not retained".into());
            }
            let dev = retained_basis_orthogonality(&run, &h).map_err(|e| e.to_string())?;
            worst = worst.max(dev);
            count += 1;
            if dev > 1e-9 {
                return Err(format!("n={n} k={k}: deviation from 2I is {dev:.3e}"));
            }
        }
    }
    Ok(format!("{count} runs, max deviation from 2I = {worst:.3e}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = f64::NEG_INFINITY;
    for case in 0..100u64 {
        let n = rng.random_range(2..=40);
        let k = rng.random_range(1..=n);
        let (h, d) = random_instance(n, 3000 + case, ScalarField::Complex, rng.random_range(0.05..1.0));
        let opts = LanczosOptions::new(k).with_reorth(Reorthogonalization::Full);
        let run = lanczos_omega_inner(&h, &d, opts).map_err(|e| e.to_string())?;
        let mut lam2: Vec<f64> = full_diagonalize(&h).map_err(|e| e.to_string())?.lambdas.iter().map(|l| l * l).collect();
        lam2.sort_by(f64::total_cmp);
        let theta = t_k_eigenvalues(&run);
        let k = theta.len();
        let slack = 1e-9 * lam2[n - 1];
        for (i, t) in theta.iter().enumerate() {
            let (lo, hi) = (lam2[i], lam2[n - k + i]);
            let violation = (lo - t).max(t - hi);
            worst = worst.max(violation / lam2[n - 1]);
            if violation > slack {
                return Err(format!("case {case}: theta_{i} = {t} outside [{lo}, {hi}]"));
            }
        }
    }
    Ok(format!("100 instances, max relative violation = {worst:.3e} (negative means strict)"))
}

fn check_sign_and_parity(name: &str, s: &Spectrum) -> Result<(), String> {
    let max = s.max_abs();
    let min = s.min_positive_frequency_value();
    if min < -1e-12 * max {
        return Err(format!("{name}: min over omega>0 is {min:.3e}, max |eps| {max:.3e}"));
    }
    let m = s.omegas.len();
    for i in 0..m {
        let j = m - 1 - i;
        debug_assert_eq!(s.omegas[i], -s.omegas[j]);
        if (s.values[i] + s.values[j]).abs() > 1e-14 * max {
            return Err(format!("{name}: eps(-w) != -eps(w) at w = {}", s.omegas[j]));
        }
    }
    Ok(())
}

fn criterion_4(log: &mut DropLog) -> Outcome {
    let mut runs = 0;
    for seed in 0..12u64 {
        let n = 6 + 3 * seed as usize;
        let field = if seed % 2 == 0 { ScalarField::Real } else { ScalarField::Complex };
        let shift = if seed % 3 == 0 { 1e-3 } else { 0.3 };
        let (h, d) = random_instance(n, 4000 + seed, field, shift);
        let grid = OmegaGrid::symmetric(1.5 * h.norm_estimate(50), 300).unwrap();
        let exact = exact_spectrum(&h, &d, kernel(), &grid).map_err(|e| e.to_string())?;
        let mut variants = vec![Variant::TdaHermitian, Variant::ComplexOmegaInner, Variant::GmgOmegaInner, Variant::PairedCInner];
        if field == ScalarField::Real {
            variants.push(Variant::RealMInner);
        }
        for variant in variants {
            let h = if variant == Variant::TdaHermitian { h.clone().with_tda(true) } else { h.clone() };
            let steps = match variant {
                Variant::GmgOmegaInner => 2 * (n / 2).max(1),
                _ => (n / 2).max(1),
            };
            let gagq_options: &[bool] = if variant == Variant::PairedCInner { &[false] } else { &[false, true] };
            for &gagq in gagq_options {
                let cfg = SolverConfig::new(variant).with_gagq(gagq);
                let trace = run_variant(&h, &d, &cfg, steps).map_err(|e| format!("{variant:?}: {e}"))?;
                let s = assemble(&trace, gagq, kernel(), &grid, 1.0).map_err(|e| format!("{variant:?}: {e}"))?;
                check_sign_and_parity(&format!("{variant:?} gagq={gagq} seed {seed}"), &s)?;
                runs += 1;
                if gagq {
                    let context = format!("c4 {variant:?} seed {seed}");
                    match &trace {
                        bsespec_core::solver::Trace::Lanczos(run) if variant == Variant::GmgOmegaInner => log.record_gmg(context, &s),
                        bsespec_core::solver::Trace::Lanczos(run) => {
                            let exact = if variant == Variant::TdaHermitian {
                                exact_spectrum(&h, &d, kernel(), &grid).map_err(|e| e.to_string())?
                            } else {
                                exact.clone()
                            };
                            log.record(context, run, kernel(), &grid, &exact)
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    Ok(format!("{runs} assembled spectra on symmetric grids"))
}

/// `A = diag(A₁, A₂)`, `B = diag(B₁, B₂)` with `d` supported on the first block.
fn block_instance(n1: usize, n2: usize, seed: u64, field: ScalarField) -> (BseHamiltonian, TransitionVector) {
    let h1 = generate_random_definite(n1, seed, field, 0.4);
    let h2 = generate_random_definite(n2, seed + 1, field, 0.4);
    let n = n1 + n2;
    let mut a = CMatrix::zeros(n, n);
    let mut b = CMatrix::zeros(n, n);
    a.view_mut((0, 0), (n1, n1)).copy_from(h1.a());
    b.view_mut((0, 0), (n1, n1)).copy_from(h1.b());
    a.view_mut((n1, n1), (n2, n2)).copy_from(h2.a());
    b.view_mut((n1, n1), (n2, n2)).copy_from(h2.b());
    let d1 = random_transition_vector(n1, seed, field);
    let d = CVector::from_fn(n, |i, _| if i < n1 { d1.as_vector()[i] } else { C64::new(0.0, 0.0) });
    (BseHamiltonian::new(a, b).unwrap(), TransitionVector::new(d).unwrap())
}

fn exactness_check(
    label: &str,
    h: &BseHamiltonian,
    d: &TransitionVector,
    variant: Variant,
    steps: usize,
    expect_breakdown: Option<usize>,
    log: &mut DropLog,
    worst: &mut f64,
) -> Result<(), String> {
    let h = if variant == Variant::TdaHermitian { h.clone().with_tda(true) } else { h.clone() };
    let grid = grid_for(&h, 600);
    let exact = exact_spectrum(&h, d, kernel(), &grid).map_err(|e| e.to_string())?;
    let gagq_options: &[bool] = if matches!(variant, Variant::PairedCInner) { &[false] } else { &[false, true] };
    for &gagq in gagq_options {
        let cfg = SolverConfig::new(variant).with_gagq(gagq);
        let trace = run_variant(&h, d, &cfg, steps).map_err(|e| format!("{label} {variant:?}: {e}"))?;
        if let Some(b) = expect_breakdown {
            if trace.breakdown_at() != Some(b) {
                return Err(format!("{label} {variant:?}: breakdown at {:?}, expected {b}", trace.breakdown_at()));
            }
        }
        let s = assemble(&trace, gagq, kernel(), &grid, 1.0).map_err(|e| e.to_string())?;
        let a = angle(&s, &exact);
        *worst = worst.max(a);
        if a > 1e-8 {
            return Err(format!("{label} {variant:?} gagq={gagq}: angle {a:.3e}"));
        }
        if gagq {
            if let bsespec_core::solver::Trace::Lanczos(run) = &trace {
                let context = format!("c5 {label} {variant:?}");
                if variant == Variant::GmgOmegaInner {
                    log.record_gmg(context, &s);
                } else {
                    log.record(context, run, kernel(), &grid, &exact);
                }
            }
        }
    }
    Ok(())
}

fn criterion_5(log: &mut DropLog) -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..4u64 {
        let field = if seed % 2 == 0 { ScalarField::Real } else { ScalarField::Complex };
        let (h, d) = block_instance(3, 7, 5000 + 2 * seed, field);
        let mut variants = vec![Variant::TdaHermitian, Variant::ComplexOmegaInner, Variant::GmgOmegaInner];
        if field == ScalarField::Real {
            variants.push(Variant::RealMInner);
        }
        for v in variants {
            let (steps, expect) = if v == Variant::GmgOmegaInner { (20, 6) } else { (10, 3) };
            exactness_check(&format!("lucky seed {seed}"), &h, &d, v, steps, Some(expect), log, &mut worst)?;
        }
    }
    for n in 1..=12usize {
        let field = if n % 2 == 0 { ScalarField::Real } else { ScalarField::Complex };
        let (h, d) = random_instance(n, 5100 + n as u64, field, 0.3);
        let mut variants = vec![
            Variant::TdaHermitian,
            Variant::ComplexOmegaInner,
            Variant::GmgOmegaInner,
            Variant::PairedCInner,
        ];
        if field == ScalarField::Real {
            variants.push(Variant::RealMInner);
        }
        for v in variants {
            let steps = if v == Variant::GmgOmegaInner { 2 * n } else { n };
            exactness_check(&format!("k=n={n}"), &h, &d, v, steps, None, log, &mut worst)?;
        }
    }
    Ok(format!("lucky breakdown and k = n, max angle = {worst:.3e}"))
}

fn criterion_6() -> Outcome {
    let mut worst_coef: f64 = 0.0;
    let mut worst_angle: f64 = 0.0;
    for seed in 0..50u64 {
        let n = 4 + (seed as usize * 7) % 60;
        let k = (n / 2).clamp(1, 30);
        let (h, d) = random_instance(n, 6000 + seed, ScalarField::Real, 0.1 + 0.02 * seed as f64);
        let m = lanczos_m_inner(&h, &d, LanczosOptions::new(k)).map_err(|e| e.to_string())?;
        let o = lanczos_omega_inner(&h, &d, LanczosOptions::new(k)).map_err(|e| e.to_string())?;
        if m.k() != o.k() {
            return Err(format!("seed {seed}: lengths {} vs {}", m.k(), o.k()));
        }
        for (x, y) in m.alphas.iter().chain(&m.betas).zip(o.alphas.iter().chain(&o.betas)) {
            if x.abs().max(y.abs()) > 0.0 {
                worst_coef = worst_coef.max(rel_diff(*x, *y));
            }
        }
        worst_coef = worst_coef.max(rel_diff(m.norm_const, o.norm_const));
        let grid = grid_for(&h, 500);
        let sm = assemble(&bsespec_core::solver::Trace::Lanczos(m), false, kernel(), &grid, 1.0).map_err(|e| e.to_string())?;
        let so = assemble(&bsespec_core::solver::Trace::Lanczos(o), false, kernel(), &grid, 1.0).map_err(|e| e.to_string())?;
        worst_angle = worst_angle.max(angle(&sm, &so));
    }
    if worst_coef > 1e-12 {
        return Err(format!("coefficient streams differ by {worst_coef:.3e} relative"));
    }
    if worst_angle > 1e-12 {
        return Err(format!("spectra differ by angle {worst_angle:.3e}"));
    }
    Ok(format!("50 instances, max coefficient rel diff {worst_coef:.3e}, max angle {worst_angle:.3e}"))
}

fn criterion_7(log: &mut DropLog) -> Outcome {
    let mut worst_ritz: f64 = 0.0;
    let mut worst_angle: f64 = 0.0;
    for seed in 0..50u64 {
        let n = 4 + (seed as usize * 5) % 40;
        let k = (n / 3).max(1);
        let field = if seed % 2 == 0 { ScalarField::Complex } else { ScalarField::Real };
        let (h, d) = random_instance(n, 7000 + seed, field, 0.25);
        let o = lanczos_omega_inner(&h, &d, LanczosOptions::new(k)).map_err(|e| e.to_string())?;
        let g = lanczos_gmg(&h, &d, LanczosOptions::new(2 * k)).map_err(|e| e.to_string())?;
        let expected: Vec<f64> = t_k_eigenvalues(&o).iter().map(|x| x.max(0.0).sqrt()).collect();
        let (eig, _) = tridiag_eig(&ZeroDiagTridiagonal::from_run(&g).tridiagonal()).map_err(|e| e.to_string())?;
        let positive: Vec<f64> = eig.into_iter().filter(|x| *x > 0.0).collect();
        if positive.len() != expected.len() {
            return Err(format!("seed {seed}: {} positive Ritz values, expected {}", positive.len(), expected.len()));
        }
        for (p, e) in positive.iter().zip(&expected) {
            worst_ritz = worst_ritz.max(rel_diff(*p, *e));
        }
        let grid = grid_for(&h, 500);
        let so = assemble(&bsespec_core::solver::Trace::Lanczos(o.clone()), false, kernel(), &grid, 1.0).map_err(|e| e.to_string())?;
        let sg = assemble_gmg_spectrum(&g, false, kernel(), &grid, 1.0).map_err(|e| e.to_string())?;
        worst_angle = worst_angle.max(angle(&so, &sg));

        let exact = exact_spectrum(&h, &d, kernel(), &grid).map_err(|e| e.to_string())?;
        log.record(format!("c7 seed {seed} omega"), &o, kernel(), &grid, &exact);
        let sg = assemble_gmg_spectrum(&g, true, kernel(), &grid, 1.0).map_err(|e| e.to_string())?;
        log.record_gmg(format!("c7 seed {seed} gmg"), &sg);
    }
    if worst_ritz > 1e-9 {
        return Err(format!("Ritz values differ by {worst_ritz:.3e} relative"));
    }
    if worst_angle > 1e-9 {
        return Err(format!("spectra differ by angle {worst_angle:.3e}"));
    }
    Ok(format!("50 instances, max Ritz rel diff {worst_ritz:.3e}, max angle {worst_angle:.3e}"))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

fn criterion_8(log: &mut DropLog) -> Outcome {
    let n = 500;
    let (k_cmp, k_max) = (32, 100);
    let mut gauss_angles = Vec::new();
    let mut gagq_angles = Vec::new();
    let mut first_reach = Vec::new();
    for seed in 0..10u64 {
        let (h, d) = random_instance(n, 8000 + seed, ScalarField::Complex, 0.5);
        let grid = grid_for(&h, 2000);
        let exact = exact_spectrum(&h, &d, kernel(), &grid).map_err(|e| e.to_string())?;
        let run = lanczos_omega_inner(&h, &d, LanczosOptions::new(k_max)).map_err(|e| e.to_string())?;
        let at = |k: usize, gagq: bool| -> Result<f64, String> {
            let s = assemble(&bsespec_core::solver::Trace::Lanczos(run.truncated(k)), gagq, kernel(), &grid, 1.0)
                .map_err(|e| e.to_string())?;
            Ok(angle(&s, &exact))
        };
        gauss_angles.push(at(k_cmp, false)?);
        gagq_angles.push(at(k_cmp, true)?);
        let mut reached = None;
        for k in 1..=run.k() {
            let t = run.truncated(k);
            log.record(format!("c8 seed {seed} k={k}"), &t, kernel(), &grid, &exact);
            if reached.is_none() && at(k, true)? <= 1e-3 {
                reached = Some(k);
            }
        }
        match reached {
            Some(k) => first_reach.push(k),
            None => return Err(format!("seed {seed}: GAGQ angle never reached 1e-3 by k = {k_max}")),
        }
    }
    let (mg, ma) = (median(gauss_angles), median(gagq_angles));
    if !(ma < mg) {
        return Err(format!("median angle at k = {k_cmp}: GAGQ {ma:.3e} not below Gauss {mg:.3e}"));
    }
    Ok(format!(
        "median angle at k = {k_cmp}: Gauss {mg:.3e}, GAGQ {ma:.3e}; 1e-3 reached at k in {}..={}",
        first_reach.iter().min().unwrap(),
        first_reach.iter().max().unwrap()
    ))
}

fn criterion_9() -> Outcome {
    let (h, d) = generate_paper_example_46(ExampleDiagonal::ImaginaryUnit);
    let proj = lanczos_paired(&h, &d, 4, PairedInner::OmegaCondition43).map_err(|e| e.to_string())?;
    let grid = OmegaGrid::uniform(0.0, 12.0, 2000).unwrap();
    let s = assemble(&bsespec_core::solver::Trace::Paired(proj), false, kernel(), &grid, 1.0).map_err(|e| e.to_string())?;
    let (re, im) = (s.max_abs(), s.max_abs_imag());
    let min_re = s.min_positive_frequency_value();
    if !(im > 1e-6 * re) {
        return Err(format!("max |Im| = {im:.3e} vs max |Re| = {re:.3e}"));
    }
    if !(min_re < 0.0) {
        return Err(format!("min Re over omega > 0 is {min_re:.3e}"));
    }
    Ok(format!("max |Im| / max |Re| = {:.3e}, min Re = {min_re:.3e}", im / re))
}

fn criterion_10(log: &DropLog) -> Outcome {
    let mut with_drop = 0;
    let mut worst: f64 = 0.0;
    for r in &log.0 {
        match &r.dropped {
            Err(e) => return Err(format!("{}: {e}", r.context)),
            Ok(c) if *c > 1 => return Err(format!("{}: dropped_count = {c}", r.context)),
            Ok(_) => {}
        }
        if let Some((a_drop, a_zero)) = r.angles {
            with_drop += 1;
            let increase = (a_drop - a_zero) / a_zero.max(f64::MIN_POSITIVE);
            worst = worst.max(increase);
            if a_drop > a_zero * (1.0 + 1e-9) {
                return Err(format!("{}: dropping gives angle {a_drop:.6e}, zeroing {a_zero:.6e}", r.context));
            }
        }
    }
    Ok(format!(
        "{} GAGQ assemblies, {with_drop} with a nonpositive node, max relative angle increase {worst:.3e}",
        log.0.len()
    ))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |x: &Path| x.to_str().unwrap().to_string();
    let scalar_out = dir.path().join("scalar_omega.csv");
    let artificial_out = dir.path().join("artificial16_paired_k4.csv");
    let jobs: Vec<(Vec<String>, Vec<(PathBuf, PathBuf)>)> = vec![
        (
            [
                "run", "--a", &p(&fixture("scalar_A.mtx")), "--b", &p(&fixture("scalar_B.mtx")), "--d",
                &p(&fixture("scalar_d.mtx")), "--variant", "omega", "--k", "1", "--sigma", "0.1", "--omega-max", "4",
                "--grid-points", "201", "--oracle", "--out", &p(&scalar_out),
            ]
            .map(String::from)
            .to_vec(),
            vec![
                (scalar_out.clone(), fixture("scalar_omega.csv")),
                (dir.path().join("scalar_omega.oracle.csv"), fixture("scalar_omega.oracle.csv")),
            ],
        ),
        (
            [
                "run", "--generate", "paper-eq46", "--variant", "paired-omega", "--k", "4", "--sigma", "0.1",
                "--omega-max", "12", "--grid-points", "241", "--out", &p(&artificial_out),
            ]
            .map(String::from)
            .to_vec(),
            vec![(artificial_out.clone(), fixture("artificial16_paired_k4.csv"))],
        ),
    ];
    let mut files = 0;
    for (args, outputs) in jobs {
        let mut stdouts = Vec::new();
        for _ in 0..2 {
            let o = Command::new(env!("CARGO_BIN_EXE_bsespec")).args(&args).output().map_err(|e| e.to_string())?;
            if !o.status.success() {
                return Err(String::from_utf8_lossy(&o.stderr).into_owned());
            }
            stdouts.push(o.stdout);
            for (got, want) in &outputs {
                let (g, w) = (std::fs::read(got).map_err(|e| e.to_string())?, std::fs::read(want).map_err(|e| e.to_string())?);
                if g != w {
                    return Err(format!("{} differs from {}", got.display(), want.display()));
                }
                files += 1;
            }
        }
        if stdouts[0] != stdouts[1] {
            return Err("stdout differs between identical runs".into());
        }
    }
    Ok(format!("{files} output files byte-identical to the committed fixtures across repeated runs"))
}

fn main() {
    // Skip when the harness only asks for the test list.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut log = DropLog::default();
    let mut failed = Vec::new();
    let mut run = |id: u32, name: &str, limit: Option<f64>, out: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let mut out = out();
        let secs = t.elapsed().as_secs_f64();
        if let (Ok(_), Some(limit)) = (&out, limit) {
            if secs > limit {
                out = Err(format!("runtime {secs:.1}s exceeds {limit}s"));
            }
        }
        let (tag, detail) = match &out {
            Ok(s) => ("PASS", s),
            Err(s) => ("FAIL", s),
        };
        println!("criterion {id:>2} {tag} [{secs:7.2}s] {name}: {detail}");
        if out.is_err() {
            failed.push(id);
        }
    };
    let cell = std::cell::RefCell::new(&mut log);
    run(1, "tridiagonal structure", Some(60.0), &|| criterion_1(&mut cell.borrow_mut()));
    run(2, "bi-orthogonality with full reorthogonalization", None, &criterion_2);
    run(3, "interlacing", None, &criterion_3);
    run(4, "nonnegativity and oddness", None, &|| criterion_4(&mut cell.borrow_mut()));
    run(5, "exactness", None, &|| criterion_5(&mut cell.borrow_mut()));
    run(6, "real/complex equivalence", None, &criterion_6);
    run(7, "GMG equivalence", None, &|| criterion_7(&mut cell.borrow_mut()));
    run(8, "GAGQ benefit at n = 500", Some(300.0), &|| criterion_8(&mut cell.borrow_mut()));
    run(9, "complex spectrum of the paired Omega variant", None, &criterion_9);
    run(10, "node-drop safety", None, &|| criterion_10(&cell.borrow()));
    run(11, "CLI golden files and determinism", None, &criterion_11);

    if failed.is_empty() {
        println!("acceptance: all 11 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
