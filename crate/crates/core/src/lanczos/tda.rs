use super::{breakdown_tolerance, LanczosBasis, LanczosOptions, LanczosRun, Reorthogonalization, Variant, NORM_ESTIMATE_ITERATIONS};
use crate::error::{Error, Result};
use crate::hamiltonian::{BseHamiltonian, TransitionVector};
use crate::linalg::{dotc, seeded_vector, CMatrix, CVector, C64};

/// A Hermitian linear map given only through its action on vectors.
pub trait HermitianOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &CVector) -> CVector;
}

impl HermitianOperator for CMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &CVector) -> CVector {
        self * x
    }
}

/// The `A` block of a Hamiltonian, i.e. the Tamm–Dancoff operator.
impl HermitianOperator for BseHamiltonian {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &CVector) -> CVector {
        self.a() * x
    }
}

fn operator_norm_estimate<O: HermitianOperator + ?Sized>(op: &O) -> f64 {
    let mut x = seeded_vector(op.dim(), 0x5eed);
    let mut est = 0.0;
    for _ in 0..NORM_ESTIMATE_ITERATIONS {
        let nx = x.norm();
        if nx == 0.0 {
            return 0.0;
        }
        x /= C64::new(nx, 0.0);
        let y = op.apply(&x);
        est = y.norm();
        x = y;
    }
    est
}

/// Hermitian Lanczos on `op` started from `d / ‖d‖₂`.
pub fn lanczos_tda<O: HermitianOperator + ?Sized>(
    op: &O,
    d: &TransitionVector,
    opts: LanczosOptions,
) -> Result<LanczosRun> {
    let k = opts.steps;
    if k < 1 {
        return Err(Error::InvalidSteps(k));
    }
    let n = op.dim();
    if d.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "transition vector has length {}, operator has dimension {n}",
            d.len()
        )));
    }
    let d = d.as_vector();
    let norm_const = d.norm_squared();
    if norm_const == 0.0 {
        return Err(Error::ZeroStartVector);
    }
    let tol = breakdown_tolerance(operator_norm_estimate(op));
    let full = opts.reorth == Reorthogonalization::Full;

    let mut basis: Vec<CVector> = Vec::new();
    let mut alphas = Vec::with_capacity(k);
    let mut betas = Vec::with_capacity(k);
    let mut breakdown_at = None;

    let mut u = d / C64::new(norm_const.sqrt(), 0.0);
    let mut u_prev: Option<CVector> = None;
    let mut beta_prev = 0.0;

    for j in 1..=k {
        let mut w = op.apply(&u);
        if let Some(up) = &u_prev {
            w.axpy(C64::new(-beta_prev, 0.0), up, C64::new(1.0, 0.0));
        }
        let alpha = dotc(&u, &w).re;
        w.axpy(C64::new(-alpha, 0.0), &u, C64::new(1.0, 0.0));
        if opts.keep_all() {
            basis.push(u.clone());
        }
        if full {
            for _ in 0..2 {
                for q in &basis {
                    let c = dotc(q, &w);
                    w.axpy(-c, q, C64::new(1.0, 0.0));
                }
            }
        }
        let mut beta = w.norm();
        alphas.push(alpha);
        if beta <= tol || j >= n {
            beta = 0.0;
            betas.push(beta);
            breakdown_at = Some(j);
            break;
        }
        betas.push(beta);
        let next = w / C64::new(beta, 0.0);
        u_prev = Some(std::mem::replace(&mut u, next));
        beta_prev = beta;
    }

    Ok(LanczosRun {
        variant: Variant::TdaHermitian,
        alphas,
        betas,
        norm_const,
        breakdown_at,
        basis: opts.retain_basis.then_some(LanczosBasis::Hermitian { u: basis }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_random_definite, random_transition_vector};
    use crate::hamiltonian::ScalarField;
    use crate::lanczos::retained_basis_orthogonality;
    use crate::linalg::RMatrix;
    use nalgebra::DVector;

    fn diag(v: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|&x| C64::new(x, 0.0))))
    }

    #[test]
    fn one_by_one() {
        let a = diag(&[3.0]);
        let d = TransitionVector::from_real(&[2.0]).unwrap();
        let run = lanczos_tda(&a, &d, LanczosOptions::new(1)).unwrap();
        assert_eq!(run.alphas, vec![3.0]);
        assert_eq!(run.betas, vec![0.0]);
        assert_eq!(run.breakdown_at, Some(1));
        assert_eq!(run.norm_const, 4.0);
    }

    #[test]
    fn eigenvector_start_breaks_down() {
        let a = diag(&[1.0, 2.0]);
        let d = TransitionVector::from_real(&[1.0, 0.0]).unwrap();
        let run = lanczos_tda(&a, &d, LanczosOptions::new(1)).unwrap();
        assert_eq!(run.alphas, vec![1.0]);
        assert_eq!(run.breakdown_at, Some(1));
    }

    #[test]
    fn two_steps_recover_both_eigenvalues() {
        let a = diag(&[1.0, 2.0]);
        let s = 0.5f64.sqrt();
        let d = TransitionVector::from_real(&[s, s]).unwrap();
        let run = lanczos_tda(&a, &d, LanczosOptions::new(2)).unwrap();
        let t = RMatrix::from_row_slice(2, 2, &[run.alphas[0], run.betas[0], run.betas[0], run.alphas[1]]);
        let mut ev: Vec<f64> = t.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_zero_steps() {
        let a = diag(&[1.0]);
        let d = TransitionVector::from_real(&[1.0]).unwrap();
        assert!(matches!(lanczos_tda(&a, &d, LanczosOptions::new(0)), Err(Error::InvalidSteps(0))));
    }

    #[test]
    fn full_reorth_keeps_basis_orthonormal() {
        let h = generate_random_definite(50, 3, ScalarField::Complex, 0.5);
        let d = random_transition_vector(50, 3, ScalarField::Complex);
        let opts = LanczosOptions::new(30).with_reorth(Reorthogonalization::Full).retaining_basis();
        let run = lanczos_tda(&h, &d, opts).unwrap();
        assert!(retained_basis_orthogonality(&run, &h).unwrap() <= 1e-10);
    }

    #[test]
    fn single_vector_is_normalized() {
        let h = generate_random_definite(10, 1, ScalarField::Complex, 0.5);
        let d = random_transition_vector(10, 1, ScalarField::Complex);
        let run = lanczos_tda(&h, &d, LanczosOptions::new(1).retaining_basis()).unwrap();
        assert!(retained_basis_orthogonality(&run, &h).unwrap() <= 1e-14);
    }
}
