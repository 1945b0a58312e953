use crate::error::{Error, Result};
use crate::lanczos::LanczosRun;
use crate::linalg::RMatrix;

/// Real symmetric tridiagonal matrix stored by diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch(format!(
                "tridiagonal with {} diagonal and {} off-diagonal entries",
                diag.len(),
                offdiag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite tridiagonal entry".into()));
        }
        Ok(SymTridiagonal { diag, offdiag })
    }

    /// `T_k` of a run (its length already reflects any breakdown).
    pub fn from_run(run: &LanczosRun) -> Self {
        build_tk(run)
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn dense(&self) -> RMatrix {
        let m = self.dim();
        let mut t = RMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = self.diag[i];
        }
        for (i, &b) in self.offdiag.iter().enumerate() {
            t[(i, i + 1)] = b;
            t[(i + 1, i)] = b;
        }
        t
    }
}

/// `T_k = tridiag(β, α, β)` from the recurrence coefficients.
pub fn build_tk(run: &LanczosRun) -> SymTridiagonal {
    let k = run.k();
    SymTridiagonal {
        diag: run.alphas.clone(),
        offdiag: run.betas[..k.saturating_sub(1)].to_vec(),
    }
}

/// The `(2k−1)×(2k−1)` matrix of the generalized averaged Gauss rule:
/// `T_k` glued to the reversed `T_{k−1}` through `β_k`.
pub fn build_gagq(run: &LanczosRun) -> Result<SymTridiagonal> {
    let k = run.k();
    if let Some(j) = run.breakdown_at {
        return Err(Error::BreakdownExact(j));
    }
    if k < 2 {
        return Err(Error::InsufficientSteps { required: 2, got: k });
    }
    let a = &run.alphas;
    let b = &run.betas;
    let mut diag = a.clone();
    diag.extend(a[..k - 1].iter().rev());
    let mut offdiag = b[..k].to_vec();
    offdiag.extend(b[..k - 2].iter().rev());
    Ok(SymTridiagonal { diag, offdiag })
}

/// Eigenvalues (ascending) and first eigenvector components of a symmetric
/// tridiagonal matrix, by implicit QL iteration with Wilkinson-type shifts.
///
/// Only the first row of the eigenvector matrix is accumulated.
pub fn tridiag_eig(t: &SymTridiagonal) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = t.dim();
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    let max_iter = 30 * n.max(1);
    let mut iters = 0;
    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                iters += 1;
                if iters > max_iter {
                    return Err(Error::ConvergenceFailure(max_iter));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let zh = z[i + 1];
                    z[i + 1] = s * z[i] + c * zh;
                    z[i] = c * z[i] - s * zh;
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    Ok((idx.iter().map(|&i| d[i]).collect(), idx.iter().map(|&i| z[i]).collect()))
}
