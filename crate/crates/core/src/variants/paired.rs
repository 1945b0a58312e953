use crate::error::{Error, Result};
use crate::hamiltonian::{BseHamiltonian, TransitionVector};
use crate::lanczos::{Variant, NORM_ESTIMATE_ITERATIONS};
use crate::linalg::{dotc, CMatrix, CVector, C64};
use crate::oracle::{exact_spectrum_from, full_diagonalize};
use crate::spectrum::{BroadeningKernel, OmegaGrid, Spectrum, SpectrumMeta, SpectrumSource};

/// Orthogonality imposed on the paired Lanczos blocks `[p_j, p_j^♯]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairedInner {
    /// `P_iᴴ Ω P_j = δ_ij I₂`.
    OmegaCondition43,
    /// `C₂ P_iᴴ C_n P_j = δ_ij I₂`.
    CCondition44,
}

impl PairedInner {
    pub fn variant(self) -> Variant {
        match self {
            PairedInner::OmegaCondition43 => Variant::PairedOmegaInner,
            PairedInner::CCondition44 => Variant::PairedCInner,
        }
    }
}

/// Projection of `H` onto the paired Krylov basis
/// `P = [p_1 … p_k, p_1^♯ … p_k^♯]`, with `[u; v]^♯ = [v̄; ū]`.
///
/// `H_k = [[A_k, B_k], [−B̄_k, −Ā_k]]`. Under the C condition `H_k` is a
/// definite BSH; under the Ω condition it is Hermitian.
#[derive(Debug, Clone)]
pub struct PairedProjectedHamiltonian {
    pub inner: PairedInner,
    pub a_k: CMatrix,
    pub b_k: CMatrix,
    /// `d_rᴴ P`, length `2k`.
    pub dr_p: CVector,
    /// `Pᴴ Ω d_l`, length `2k`.
    pub p_omega_dl: CVector,
    /// `‖d‖₂²`.
    pub norm_const: f64,
    pub breakdown_at: Option<usize>,
    /// Retained `p_j` (2n-vectors).
    pub basis: Vec<CVector>,
}

impl PairedProjectedHamiltonian {
    pub fn k(&self) -> usize {
        self.a_k.nrows()
    }

    pub fn h_k(&self) -> CMatrix {
        let k = self.k();
        let mut m = CMatrix::zeros(2 * k, 2 * k);
        m.view_mut((0, 0), (k, k)).copy_from(&self.a_k);
        m.view_mut((0, k), (k, k)).copy_from(&self.b_k);
        m.view_mut((k, 0), (k, k)).copy_from(&-self.b_k.map(|z| z.conj()));
        m.view_mut((k, k), (k, k)).copy_from(&-self.a_k.map(|z| z.conj()));
        m
    }

    /// The projection a `k`-step run would have produced.
    pub fn truncated(&self, k: usize) -> PairedProjectedHamiltonian {
        let k = k.min(self.k());
        let full = self.k();
        let pick = |v: &CVector| CVector::from_iterator(2 * k, (0..k).chain(full..full + k).map(|i| v[i]));
        PairedProjectedHamiltonian {
            inner: self.inner,
            a_k: self.a_k.view((0, 0), (k, k)).into_owned(),
            b_k: self.b_k.view((0, 0), (k, k)).into_owned(),
            dr_p: pick(&self.dr_p),
            p_omega_dl: pick(&self.p_omega_dl),
            norm_const: self.norm_const,
            breakdown_at: self.breakdown_at.filter(|&b| b <= k),
            basis: self.basis[..k].to_vec(),
        }
    }
}

fn sharp(x: &CVector) -> CVector {
    let n = x.len() / 2;
    CVector::from_fn(2 * n, |i, _| if i < n { x[i + n].conj() } else { x[i - n].conj() })
}

/// `yᴴ C x` with `C = diag(I, −I)`.
fn c_inner(y: &CVector, x: &CVector) -> C64 {
    let n = x.len() / 2;
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        s += y[i].conj() * x[i];
    }
    for i in n..2 * n {
        s -= y[i].conj() * x[i];
    }
    s
}

struct Block {
    p: CVector,
    ps: CVector,
    omega_p: CVector,
    omega_ps: CVector,
}

impl Block {
    fn new(h: &BseHamiltonian, p: CVector) -> Self {
        let ps = sharp(&p);
        let omega_p = h.apply_omega_full(&p);
        let omega_ps = sharp(&omega_p);
        Block { p, ps, omega_p, omega_ps }
    }
}

/// Removes the components of `x` along all retained blocks, twice.
fn orthogonalize(inner: PairedInner, blocks: &[Block], x: &mut CVector) {
    let one = C64::new(1.0, 0.0);
    for _ in 0..2 {
        for b in blocks {
            match inner {
                PairedInner::OmegaCondition43 => {
                    let c1 = dotc(&b.omega_p, x);
                    let c2 = dotc(&b.omega_ps, x);
                    x.axpy(-c1, &b.p, one);
                    x.axpy(-c2, &b.ps, one);
                }
                PairedInner::CCondition44 => {
                    let c1 = c_inner(&b.p, x);
                    let c2 = c_inner(&b.ps, x);
                    x.axpy(-c1, &b.p, one);
                    x.axpy(c2, &b.ps, one);
                }
            }
        }
    }
}

/// Lanczos with paired vectors started from `p_1 ∝ [d; 0]`.
///
/// Each step adds one vector and its `♯` image, orthogonalized in full
/// against all previous blocks. Under the Ω condition the new pair is
/// orthonormalized through the symmetric inverse square root of its 2×2 Gram
/// matrix, which keeps the `♯` pairing.
pub fn lanczos_paired(
    h: &BseHamiltonian,
    d: &TransitionVector,
    steps: usize,
    inner: PairedInner,
) -> Result<PairedProjectedHamiltonian> {
    if steps < 1 {
        return Err(Error::InvalidSteps(steps));
    }
    let n = h.n();
    if d.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "transition vector has length {}, Hamiltonian has dimension {n}",
            d.len()
        )));
    }
    let h_norm = h.norm_estimate(NORM_ESTIMATE_ITERATIONS);
    let tol = 1e-12 * h_norm;

    let mut r = CVector::zeros(2 * n);
    r.rows_mut(0, n).copy_from(d.as_vector());
    let mut blocks: Vec<Block> = Vec::new();
    let mut breakdown_at = None;

    for j in 1..=steps {
        let p = normalize(h, inner, &r, j)?;
        blocks.push(Block::new(h, p));
        if j >= n {
            breakdown_at = Some(j);
            break;
        }
        let last = blocks.last().unwrap();
        let mut x = h.apply_full(&last.p);
        let scale = last.p.norm();
        orthogonalize(inner, &blocks, &mut x);
        if x.norm() <= tol * scale {
            breakdown_at = Some(j);
            break;
        }
        r = x;
    }
    Ok(project(h, d, inner, blocks, breakdown_at))
}

fn normalize(h: &BseHamiltonian, inner: PairedInner, r: &CVector, step: usize) -> Result<CVector> {
    match inner {
        PairedInner::CCondition44 => {
            let gamma = c_inner(r, r).re;
            if gamma.abs() <= 1e-12 * r.norm_squared() {
                return Err(Error::NeutralVectorBreakdown(step));
            }
            Ok(if gamma > 0.0 {
                r / C64::new(gamma.sqrt(), 0.0)
            } else {
                sharp(r) / C64::new((-gamma).sqrt(), 0.0)
            })
        }
        PairedInner::OmegaCondition43 => {
            let omega_r = h.apply_omega_full(r);
            let gamma = dotc(r, &omega_r).re;
            let rs = sharp(r);
            let delta = dotc(&rs, &omega_r);
            let mag = delta.norm();
            if gamma - mag <= 1e-12 * (gamma.abs() + mag) {
                return Err(Error::GramFactorizationFailure(step));
            }
            let hi = (gamma + mag).powf(-0.5);
            let lo = (gamma - mag).powf(-0.5);
            let a = 0.5 * (hi + lo);
            let b = 0.5 * (hi - lo);
            let phase = if mag > 0.0 { delta / mag } else { C64::new(1.0, 0.0) };
            Ok(r * C64::new(a, 0.0) + rs * (phase * b))
        }
    }
}

fn project(
    h: &BseHamiltonian,
    d: &TransitionVector,
    inner: PairedInner,
    blocks: Vec<Block>,
    breakdown_at: Option<usize>,
) -> PairedProjectedHamiltonian {
    let k = blocks.len();
    let mut a_k = CMatrix::zeros(k, k);
    let mut b_k = CMatrix::zeros(k, k);
    match inner {
        PairedInner::CCondition44 => {
            for i in 0..k {
                for j in 0..k {
                    a_k[(i, j)] = dotc(&blocks[i].p, &blocks[j].omega_p);
                    b_k[(i, j)] = dotc(&blocks[i].p, &blocks[j].omega_ps);
                }
            }
        }
        PairedInner::OmegaCondition43 => {
            let hp: Vec<CVector> = blocks.iter().map(|b| h.apply_full(&b.p)).collect();
            // H p^♯ = −(H p)^♯
            let hps: Vec<CVector> = hp.iter().map(|x| -sharp(x)).collect();
            for i in 0..k {
                for j in 0..k {
                    a_k[(i, j)] = dotc(&blocks[i].omega_p, &hp[j]);
                    b_k[(i, j)] = dotc(&blocks[i].omega_p, &hps[j]);
                }
            }
        }
    }
    let dl = d.left();
    let dr = d.right();
    let omega_dl = h.apply_omega_full(&dl);
    let cols = |f: &dyn Fn(&CVector) -> C64| {
        CVector::from_iterator(2 * k, blocks.iter().map(|b| f(&b.p)).chain(blocks.iter().map(|b| f(&b.ps))))
    };
    let dr_p = cols(&|p| dotc(&dr, p));
    let p_omega_dl = cols(&|p| dotc(p, &omega_dl));
    PairedProjectedHamiltonian {
        inner,
        a_k,
        b_k,
        dr_p,
        p_omega_dl,
        norm_const: d.as_vector().norm_squared(),
        breakdown_at,
        basis: blocks.into_iter().map(|b| b.p).collect(),
    }
}

/// Broadened spectrum from a paired projection.
///
/// * C condition: `‖d‖² Σ_j |S₁(1,j) − S₂(1,j)|² [g(ω − θ_j) − g(ω + θ_j)]`
///   from the structured eigendecomposition of the definite `H_k`.
/// * Ω condition: `Σ_j (d_rᴴ P s_j)(s_jᴴ Pᴴ Ω d_l) g(ω − θ_j)` over all `2k`
///   eigenpairs of the Hermitian `H_k`. This need not be real; the imaginary
///   part is returned in [`Spectrum::imag`].
pub fn assemble_paired_spectrum(
    proj: &PairedProjectedHamiltonian,
    kernel: BroadeningKernel,
    grid: &OmegaGrid,
    scale: f64,
) -> Result<Spectrum> {
    let meta = SpectrumMeta {
        source: SpectrumSource::Lanczos(proj.inner.variant()),
        k: proj.k(),
        gagq: false,
        kernel,
        norm_const: proj.norm_const,
        scale,
        dropped_count: 0,
        breakdown_at: proj.breakdown_at,
    };
    match proj.inner {
        PairedInner::CCondition44 => {
            let hk = BseHamiltonian::from_projected(proj.a_k.clone(), proj.b_k.clone());
            let decomp = full_diagonalize(&hk)?;
            let mut e1 = CVector::zeros(proj.k());
            e1[0] = C64::new(proj.norm_const.sqrt(), 0.0);
            let mut s = exact_spectrum_from(&decomp, &TransitionVector::new(e1)?, kernel, grid, scale)?;
            s.meta = meta;
            Ok(s)
        }
        PairedInner::OmegaCondition43 => {
            let eig = nalgebra::SymmetricEigen::new(proj.h_k());
            let m = eig.eigenvalues.len();
            let coeffs: Vec<C64> = (0..m)
                .map(|j| {
                    let v = eig.eigenvectors.column(j).into_owned();
                    let left = proj.dr_p.transpose() * &v;
                    let right = v.adjoint() * &proj.p_omega_dl;
                    left[(0, 0)] * right[(0, 0)] * scale
                })
                .collect();
            let mut re = Vec::with_capacity(grid.len());
            let mut im = Vec::with_capacity(grid.len());
            for &w in grid.points() {
                let mut acc = C64::new(0.0, 0.0);
                for (j, c) in coeffs.iter().enumerate() {
                    acc += c * kernel.eval(w - eig.eigenvalues[j]);
                }
                re.push(acc.re);
                im.push(acc.im);
            }
            Ok(Spectrum {
                omegas: grid.points().to_vec(),
                values: re,
                imag: Some(im),
                meta,
            })
        }
    }
}
