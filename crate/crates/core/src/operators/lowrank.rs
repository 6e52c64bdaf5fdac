//! Minimum eigenvalue of `W - V V†` for real symmetric `W` with a cached
//! eigendecomposition and a thin complex `V`.
//!
//! With `W = Q Λ Qᵀ` and `B = Qᵀ V`, for every `λ` below the smallest
//! eigenvalue of `W` the number of eigenvalues of `W - VV†` below `λ` equals
//! the number of eigenvalues of `G(λ) = B† (Λ - λ)^{-1} B` above one
//! (Sylvester inertia). The largest eigenvalue of `G(λ)` is convex and
//! increasing in `λ`, so the crossing point is found by safeguarded Newton
//! iteration inside a bisection bracket.

use faer::{c64, Mat, Side};

use super::hermitian::HermitianOperator;
use crate::error::{Error, Result};

/// Real symmetric eigendecomposition, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct RealSpectral {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

impl RealSpectral {
    pub fn new(w: &Mat<f64>) -> Result<Self> {
        let evd = w.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenFailure)?;
        Ok(Self {
            values: evd.S().column_vector().iter().copied().collect(),
            vectors: evd.U().to_owned(),
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Spectral norm.
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Result of the low-rank route. `vector` is absent when the minimum is the
/// smallest eigenvalue of `W` itself (to within the pole guard).
#[derive(Debug, Clone)]
pub struct LowRankMin {
    pub value: f64,
    pub vector: Option<Vec<c64>>,
}

/// `V` with `V V† = ρ`, keeping eigenvalues above `cutoff`.
pub fn gram_factor(rho: &HermitianOperator, cutoff: f64) -> Result<Mat<c64>> {
    let eig = rho.eigh()?;
    let keep: Vec<usize> = (0..eig.values.len()).filter(|&i| eig.values[i] > cutoff).collect();
    let n = rho.dim();
    Ok(Mat::from_fn(n, keep.len(), |i, j| {
        let col = keep[j];
        eig.vectors[(i, col)] * eig.values[col].sqrt()
    }))
}

/// Column-wise Kronecker product `a ⊗ b`.
pub fn kron_thin(a: &Mat<c64>, b: &Mat<c64>) -> Mat<c64> {
    let (ra, rb) = (a.nrows(), b.nrows());
    let (ca, cb) = (a.ncols(), b.ncols());
    Mat::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

struct Secular<'a> {
    values: &'a [f64],
    b: &'a Mat<c64>,
}

impl Secular<'_> {
    /// Largest eigenvalue of `G(λ)`, its eigenvector, and the derivative.
    fn top(&self, lambda: f64) -> Result<(f64, Vec<c64>, f64)> {
        let (d, r) = (self.b.nrows(), self.b.ncols());
        let scaled = Mat::from_fn(d, r, |i, j| self.b[(i, j)] / (self.values[i] - lambda).sqrt());
        let g = scaled.adjoint() * &scaled;
        let evd = g.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenFailure)?;
        let top = evd.S().column_vector()[r - 1].re;
        let y: Vec<c64> = evd.U().col(r - 1).iter().copied().collect();
        let mut deriv = 0.0;
        for i in 0..d {
            let by: c64 = (0..r).map(|j| self.b[(i, j)] * y[j]).sum();
            let gap = self.values[i] - lambda;
            deriv += by.norm_sqr() / (gap * gap);
        }
        Ok((top, y, deriv))
    }
}

/// Smallest eigenvalue of `W - V V†`.
///
/// Returns `Ok(None)` when the eigenvector residual check fails, so callers
/// can fall back to a dense solve.
pub fn min_eig_minus_gram(spec: &RealSpectral, v: &Mat<c64>) -> Result<Option<LowRankMin>> {
    let d = spec.dim();
    if v.nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.nrows(),
        });
    }
    let lambda1 = spec.values[0];
    if v.ncols() == 0 {
        return Ok(Some(LowRankMin {
            value: lambda1,
            vector: None,
        }));
    }

    let vr = Mat::from_fn(d, v.ncols(), |i, j| v[(i, j)].re);
    let vi = Mat::from_fn(d, v.ncols(), |i, j| v[(i, j)].im);
    let qt = spec.vectors.transpose();
    let br = qt * &vr;
    let bi = qt * &vi;
    let b = Mat::from_fn(d, v.ncols(), |i, j| c64::new(br[(i, j)], bi[(i, j)]));

    let secular = Secular {
        values: &spec.values,
        b: &b,
    };
    let scale = spec.norm().max(1.0);
    let guard = 1e-12 * scale;
    let mut hi = lambda1 - guard;
    let (f_hi, mut y, mut deriv) = secular.top(hi)?;
    if f_hi <= 1.0 {
        return Ok(Some(LowRankMin {
            value: lambda1,
            vector: None,
        }));
    }
    let gram_norm: f64 = v.norm_l2().powi(2);
    let mut lo = lambda1 - gram_norm - 1.0;
    let mut f_cur = f_hi;
    let mut x = hi;
    for _ in 0..200 {
        if hi - lo <= 1e-15 * scale {
            break;
        }
        // Newton from the right stays right of the root for convex f
        let newton = x - (f_cur - 1.0) / deriv;
        let next = if deriv > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let (f, yy, dd) = secular.top(next)?;
        if f > 1.0 {
            hi = next;
            y = yy;
            deriv = dd;
            f_cur = f;
            x = next;
        } else {
            lo = next;
            if (f - 1.0).abs() <= 1e-15 {
                hi = next;
                y = yy;
                break;
            }
            // restart Newton from the right end
            let (f, yy, dd) = secular.top(hi)?;
            f_cur = f;
            y = yy;
            deriv = dd;
            x = hi;
        }
        if (f_cur - 1.0).abs() <= 1e-15 {
            break;
        }
    }
    let mu = hi;

    // eigenvector in the eigenbasis of W: x = (Λ - μ)^{-1} B y
    let r = b.ncols();
    let mut coords: Vec<c64> = (0..d)
        .map(|i| {
            let by: c64 = (0..r).map(|j| b[(i, j)] * y[j]).sum();
            by / (spec.values[i] - mu)
        })
        .collect();
    let n = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    coords.iter_mut().for_each(|z| *z /= n);

    // residual ‖(Λ - B B† - μ) x‖
    let btx: Vec<c64> = (0..r)
        .map(|j| (0..d).map(|i| b[(i, j)].conj() * coords[i]).sum())
        .collect();
    let mut res2 = 0.0;
    for i in 0..d {
        let bbx: c64 = (0..r).map(|j| b[(i, j)] * btx[j]).sum();
        res2 += (coords[i] * (spec.values[i] - mu) - bbx).norm_sqr();
    }
    let op_scale = scale + gram_norm;
    if res2.sqrt() > 1e-9 * op_scale {
        return Ok(None);
    }

    let q = &spec.vectors;
    let vector: Vec<c64> = (0..d)
        .map(|row| (0..d).map(|i| coords[i] * q[(row, i)]).sum())
        .collect();
    Ok(Some(LowRankMin {
        value: mu,
        vector: Some(vector),
    }))
}
