//! The structured Bethe–Salpeter Hamiltonian `H = [[A, B], [-B̄, -Ā]]`.
//!
//! Only the two `n×n` blocks are stored. `A` is Hermitian and `B` is complex
//! symmetric; the companion matrix `Ω = [[A, B], [B̄, Ā]]` must be positive
//! definite for the spectrum to be well defined ("definite" Hamiltonian).
//! Every vector that the Lanczos engines touch lives in one of the two
//! real-linear spaces `{[u; ū]}` or `{[u; -ū]}`, so the operators here act on
//! the top half `u` only.

use crate::error::{Error, Result};
use crate::linalg::{
    conj, hermitian_min_eigenvalue, max_abs, real_part, seeded_vector, symmetric_min_eigenvalue,
    CMatrix, CVector, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarField {
    Real,
    Complex,
}

/// Whether positive definiteness of `Ω` has been established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    Unchecked,
    Definite,
    /// Deliberately not enforced (used for artificial counterexamples).
    Waived,
}

#[derive(Debug, Clone)]
pub struct BseHamiltonian {
    a: CMatrix,
    b: CMatrix,
    field: ScalarField,
    tda: bool,
    definiteness: Definiteness,
}

/// Default entrywise structure tolerance `1e-12 · max(‖A‖_max, ‖B‖_max, 1)`.
pub fn default_structure_tolerance(a: &CMatrix, b: &CMatrix) -> f64 {
    1e-12 * max_abs(a).max(max_abs(b)).max(1.0)
}

/// Validates the block structure and symmetrizes the blocks.
///
/// `A ← (A + Aᴴ)/2` and `B ← (B + Bᵀ)/2` once the deviations are within
/// `tol`; the scalar field is `Real` when every imaginary part is within `tol`.
pub fn build_hamiltonian(a: CMatrix, b: CMatrix, tol: f64) -> Result<BseHamiltonian> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    if n == 0 {
        return Err(Error::DimensionMismatch("empty blocks".into()));
    }
    let herm_dev = max_abs(&(&a - a.adjoint()));
    if herm_dev > tol {
        return Err(Error::StructureViolation(format!(
            "A is not Hermitian (max deviation {herm_dev:e})"
        )));
    }
    let sym_dev = max_abs(&(&b - b.transpose()));
    if sym_dev > tol {
        return Err(Error::StructureViolation(format!(
            "B is not symmetric (max deviation {sym_dev:e})"
        )));
    }
    let a = (&a + a.adjoint()).map(|z| z * 0.5);
    let b = (&b + b.transpose()).map(|z| z * 0.5);
    let imag = a.iter().chain(b.iter()).fold(0.0f64, |m, z| m.max(z.im.abs()));
    let field = if imag <= tol {
        ScalarField::Real
    } else {
        ScalarField::Complex
    };
    let (a, b) = if field == ScalarField::Real {
        (a.map(|z| C64::new(z.re, 0.0)), b.map(|z| C64::new(z.re, 0.0)))
    } else {
        (a, b)
    };
    Ok(BseHamiltonian {
        a,
        b,
        field,
        tda: false,
        definiteness: Definiteness::Unchecked,
    })
}

impl BseHamiltonian {
    /// Builds with the default structure tolerance.
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        let tol = default_structure_tolerance(&a, &b);
        build_hamiltonian(a, b, tol)
    }

    /// Builds from blocks that are structured up to rounding, bypassing the
    /// tolerance check. Used for projected matrices assembled internally.
    pub(crate) fn from_projected(a: CMatrix, b: CMatrix) -> Self {
        let a = (&a + a.adjoint()).map(|z| z * 0.5);
        let b = (&b + b.transpose()).map(|z| z * 0.5);
        BseHamiltonian {
            a,
            b,
            field: ScalarField::Complex,
            tda: false,
            definiteness: Definiteness::Unchecked,
        }
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    /// The stored `B` block (ignored by every operator when `tda()` is set).
    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn is_tda(&self) -> bool {
        self.tda
    }

    pub fn definiteness(&self) -> Definiteness {
        self.definiteness
    }

    /// Treat `B` as zero from now on.
    pub fn with_tda(mut self, tda: bool) -> Self {
        self.tda = tda;
        self
    }

    pub(crate) fn set_definiteness(&mut self, d: Definiteness) {
        self.definiteness = d;
    }

    pub fn waive_definiteness(mut self) -> Self {
        self.definiteness = Definiteness::Waived;
        self
    }

    /// Runs `check_definiteness` with the default threshold and records the
    /// outcome.
    pub fn verified(mut self) -> Result<Self> {
        if check_definiteness(&self, default_definiteness_tolerance(&self)) {
            self.definiteness = Definiteness::Definite;
            Ok(self)
        } else {
            Err(Error::NotDefinite("smallest eigenvalue of Ω below threshold".into()))
        }
    }

    fn b_active(&self) -> bool {
        !self.tda
    }

    /// `A·w + s·B·w̄`; the top half of `H·[w; s·w̄]` is this vector and the
    /// bottom half is `-s·conj(·)`.
    pub fn apply_half(&self, w: &CVector, s: f64) -> CVector {
        let mut out = &self.a * w;
        if self.b_active() {
            let bw = &self.b * conj(w);
            out.axpy(C64::new(s, 0.0), &bw, C64::new(1.0, 0.0));
        }
        out
    }

    /// `M = A + B` and `K = A − B` as real matrices (meaningful for real fields).
    pub fn real_blocks(&self) -> (crate::linalg::RMatrix, crate::linalg::RMatrix) {
        let a = real_part(&self.a);
        if self.b_active() {
            let b = real_part(&self.b);
            (&a + &b, &a - &b)
        } else {
            (a.clone(), a)
        }
    }

    /// Dense `Ω = [[A, B], [B̄, Ā]]`.
    pub fn omega_dense(&self) -> CMatrix {
        let n = self.n();
        let mut m = CMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.a);
        m.view_mut((n, n), (n, n)).copy_from(&self.a.map(|z| z.conj()));
        if self.b_active() {
            m.view_mut((0, n), (n, n)).copy_from(&self.b);
            m.view_mut((n, 0), (n, n)).copy_from(&self.b.map(|z| z.conj()));
        }
        m
    }

    /// Dense `H = C_n Ω`.
    pub fn dense(&self) -> CMatrix {
        let n = self.n();
        let mut m = self.omega_dense();
        m.view_mut((n, 0), (n, 2 * n)).neg_mut();
        m
    }

    /// `Ω` applied to a general `2n` vector.
    pub fn apply_omega_full(&self, x: &CVector) -> CVector {
        let n = self.n();
        let top = x.rows(0, n).into_owned();
        let bot = x.rows(n, n).into_owned();
        let mut out = CVector::zeros(2 * n);
        let mut t = &self.a * &top;
        let mut bb = self.a.map(|z| z.conj()) * &bot;
        if self.b_active() {
            t += &self.b * &bot;
            bb += self.b.map(|z| z.conj()) * &top;
        }
        out.rows_mut(0, n).copy_from(&t);
        out.rows_mut(n, n).copy_from(&bb);
        out
    }

    /// `H` applied to a general `2n` vector.
    pub fn apply_full(&self, x: &CVector) -> CVector {
        let n = self.n();
        let mut out = self.apply_omega_full(x);
        out.rows_mut(n, n).neg_mut();
        out
    }

    /// Power-iteration estimate of the largest `|λ|` of `H`.
    pub fn norm_estimate(&self, iterations: usize) -> f64 {
        let mut x = seeded_vector(2 * self.n(), 0x5eed);
        let mut est = 0.0;
        for _ in 0..iterations.max(1) {
            let nx = x.norm();
            if nx == 0.0 {
                return 0.0;
            }
            x /= C64::new(nx, 0.0);
            let y = self.apply_full(&x);
            est = y.norm();
            x = y;
        }
        est
    }
}

/// Default definiteness threshold `1e-10 · ‖Ω‖_max`.
pub fn default_definiteness_tolerance(h: &BseHamiltonian) -> f64 {
    let bmax = if h.is_tda() { 0.0 } else { max_abs(h.b()) };
    1e-10 * max_abs(h.a()).max(bmax)
}

/// True iff `Ω ≻ tol`; for real fields both `A + B` and `A − B` are checked.
pub fn check_definiteness(h: &BseHamiltonian, tol: f64) -> bool {
    match h.field() {
        ScalarField::Real => {
            let (m, k) = h.real_blocks();
            symmetric_min_eigenvalue(&m) > tol && symmetric_min_eigenvalue(&k) > tol
        }
        ScalarField::Complex => {
            if h.is_tda() {
                hermitian_min_eigenvalue(h.a()) > tol
            } else {
                hermitian_min_eigenvalue(&h.omega_dense()) > tol
            }
        }
    }
}

/// `v = A·u + B·ū`, i.e. `H·[u; ū] = [v; -v̄]`. In TDA mode returns `A·u`.
pub fn apply_h_structured(h: &BseHamiltonian, u: &CVector) -> Result<CVector> {
    if u.len() != h.n() {
        return Err(Error::DimensionMismatch(format!(
            "vector has length {}, Hamiltonian block size is {}",
            u.len(),
            h.n()
        )));
    }
    Ok(h.apply_half(u, 1.0))
}

/// Optical transition vector `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionVector(CVector);

impl TransitionVector {
    pub fn new(d: CVector) -> Result<Self> {
        if d.is_empty() || d.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            return Err(Error::ZeroStartVector);
        }
        Ok(TransitionVector(d))
    }

    pub fn from_real(d: &[f64]) -> Result<Self> {
        Self::new(CVector::from_iterator(
            d.len(),
            d.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    /// `d_l = [d; d̄]`.
    pub fn left(&self) -> CVector {
        let n = self.len();
        CVector::from_fn(2 * n, |i, _| if i < n { self.0[i] } else { self.0[i - n].conj() })
    }

    /// `d_r = [d; -d̄]`.
    pub fn right(&self) -> CVector {
        let n = self.len();
        CVector::from_fn(2 * n, |i, _| if i < n { self.0[i] } else { -self.0[i - n].conj() })
    }
}
