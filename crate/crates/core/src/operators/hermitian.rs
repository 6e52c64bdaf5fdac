use faer::{c64, Mat, Side};

use crate::error::{Error, Result};

/// Hermiticity tolerance applied at construction.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Dense Hermitian matrix.
///
/// Hermiticity is checked when the operator is built and then enforced
/// exactly by averaging with the adjoint.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    mat: Mat<c64>,
}

/// Eigenvalues in ascending order with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: Mat<c64>,
}

fn max_hermitian_deviation(mat: &Mat<c64>) -> f64 {
    let n = mat.nrows();
    let mut dev: f64 = 0.0;
    for j in 0..n {
        for i in 0..=j {
            dev = dev.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    dev
}

impl HermitianOperator {
    pub fn new(mat: Mat<c64>) -> Result<Self> {
        Self::with_tolerance(mat, HERMITICITY_TOL)
    }

    /// Accepts `mat` when `|A_ij - conj(A_ji)| ≤ tol · max(1, max|A_ij|)`.
    pub fn with_tolerance(mat: Mat<c64>, tol: f64) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                found: mat.ncols(),
            });
        }
        let scale = mat
            .col_iter()
            .flat_map(|c| c.iter().map(|z| z.norm()).collect::<Vec<_>>())
            .fold(1.0f64, f64::max);
        let dev = max_hermitian_deviation(&mat);
        if dev > tol * scale {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self::from_mat_symmetrized(mat))
    }

    /// Averages with the adjoint without checking.
    pub fn from_mat_symmetrized(mat: Mat<c64>) -> Self {
        let n = mat.nrows();
        let sym = Mat::from_fn(n, n, |i, j| (mat[(i, j)] + mat[(j, i)].conj()) * 0.5);
        Self { mat: sym }
    }

    pub fn from_real(mat: &Mat<f64>) -> Result<Self> {
        Self::new(Mat::from_fn(mat.nrows(), mat.ncols(), |i, j| c64::new(mat[(i, j)], 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: Mat::from_fn(dim, dim, |i, j| c64::new(if i == j { 1.0 } else { 0.0 }, 0.0)),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { mat: Mat::zeros(dim, dim) }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            mat: Mat::from_fn(n, n, |i, j| c64::new(if i == j { values[i] } else { 0.0 }, 0.0)),
        }
    }

    /// `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn pure_state(v: &[c64]) -> Self {
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let n = v.len();
        Self::from_mat_symmetrized(Mat::from_fn(n, n, |i, j| v[i] * v[j].conj() / norm2))
    }

    /// `Σ_k |v_k⟩⟨v_k|` over the columns of `vectors`.
    pub fn gram(vectors: &Mat<c64>) -> Self {
        Self::from_mat_symmetrized(vectors * vectors.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_mat(&self) -> &Mat<c64> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.mat
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> c64 {
        self.mat[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// `Tr(A B)` for Hermitian `A`, `B` (real).
    pub fn trace_product(&self, other: &Self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for j in 0..n {
            for i in 0..n {
                acc += (self.mat[(i, j)] * other.mat[(j, i)]).re;
            }
        }
        acc
    }

    pub fn purity(&self) -> f64 {
        self.trace_product(self)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim(), other.dim());
        Self {
            mat: Mat::from_fn(a * b, a * b, |i, j| {
                self.mat[(i / b, j / b)] * other.mat[(i % b, j % b)]
            }),
        }
    }

    pub fn kron_power(&self, n: usize) -> Self {
        let mut acc = Self::identity(1);
        for _ in 0..n {
            acc = acc.kron(self);
        }
        acc
    }

    pub fn scale(&self, f: f64) -> Self {
        Self {
            mat: Mat::from_fn(self.dim(), self.dim(), |i, j| self.mat[(i, j)] * f),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            mat: &self.mat - &other.mat,
        })
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, u: &Mat<c64>) -> Self {
        Self::from_mat_symmetrized(u * &self.mat * u.adjoint())
    }

    pub fn apply(&self, v: &[c64]) -> Vec<c64> {
        let n = self.dim();
        let mut out = vec![c64::new(0.0, 0.0); n];
        for j in 0..n {
            let vj = v[j];
            if vj == c64::new(0.0, 0.0) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.mat[(i, j)] * vj;
            }
        }
        out
    }

    /// `⟨v|A|v⟩`.
    pub fn expectation(&self, v: &[c64]) -> f64 {
        let av = self.apply(v);
        v.iter().zip(&av).map(|(a, b)| (a.conj() * b).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm_l2()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                m = m.max((self.mat[(i, j)] - other.mat[(i, j)]).norm());
            }
        }
        m
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.mat
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::EigenFailure)
    }

    pub fn eigh(&self) -> Result<Eigh> {
        let evd = self.mat.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenFailure)?;
        let values = evd.S().column_vector().iter().map(|z| z.re).collect();
        Ok(Eigh {
            values,
            vectors: evd.U().to_owned(),
        })
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> Result<f64> {
        let ev = self.eigenvalues()?;
        Ok(ev.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    }

    /// Checks positivity (minimum eigenvalue `≥ -tol`) and unit trace.
    pub fn check_density(&self, tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let min = self.eigenvalues()?.first().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::NotDensity(format!("minimum eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// Smallest eigenvalue and a unit eigenvector.
///
/// Fails with [`Error::EigenFailure`] when the solver does not converge or
/// the residual `‖A v - λ v‖` exceeds `1e-9 · ‖A‖`.
pub fn min_eigenvalue(op: &HermitianOperator) -> Result<(f64, Vec<c64>)> {
    let Eigh { values, vectors } = op.eigh()?;
    let Some(&value) = values.first() else {
        return Err(Error::EigenFailure);
    };
    let v: Vec<c64> = vectors.col(0).iter().copied().collect();
    let norm = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let av = op.apply(&v);
    let residual = av
        .iter()
        .zip(&v)
        .map(|(a, b)| (a - b * value).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > 1e-9 * norm.max(f64::MIN_POSITIVE) && residual > 1e-300 {
        return Err(Error::EigenFailure);
    }
    Ok((value, v))
}
