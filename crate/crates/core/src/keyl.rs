//! Leading principal minors, the generalized power function, Keyl
//! divergence and the highest-weight discrimination scheme.

use std::cmp::Ordering;

use faer::{c64, Mat};

use crate::combinatorics::{approximate_spectrum, binomial, dim_specht, snapped_ceil, Partition, SortedCone, Spectrum};
use crate::error::{Error, Result};
use crate::limits::{pow_sat, Limits};
use crate::operators::{orthonormalize, permute_vector, HermitianOperator};
use crate::diagram::Perm;
use crate::random::stream_rng;
use crate::scenario::{assemble_product, haar_sample_vector, tau_map_vector, MarginalScenario};

/// Tolerance for the unitary and reconstruction checks of [`KeylContext`].
pub const CONTEXT_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are treated as degenerate when ordering
/// eigenvectors.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// `(Λ_1(σ), …, Λ_d(σ))`, the determinants of the upper-left `i × i` blocks.
pub fn principal_minors(sigma: &HermitianOperator) -> Vec<f64> {
    let m = sigma.as_mat();
    (1..=sigma.dim())
        .map(|i| m.as_ref().submatrix(0, 0, i, i).determinant().re)
        .collect()
}

/// `Π_i Λ_i^{δ_i}` with `0^0 = 1`; non-positive minors count as zero.
pub fn gpf_from_minors(delta: &[f64], minors: &[f64]) -> f64 {
    delta
        .iter()
        .zip(minors)
        .map(|(&e, &m)| if e == 0.0 { 1.0 } else if m <= 0.0 { 0.0 } else { m.powf(e) })
        .product()
}

/// Generalized power function `Δ_x(σ) = Π_i Λ_i(σ)^{δ_i(x)}`.
pub fn gpf(x: &SortedCone, sigma: &HermitianOperator) -> Result<f64> {
    if x.len() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            found: x.len(),
        });
    }
    Ok(gpf_from_minors(&x.delta(), &principal_minors(sigma)))
}

fn partition_cone(lambda: &Partition, d: usize) -> Result<SortedCone> {
    SortedCone::from_partition(lambda, d)
}

/// A state `ρ = U diag(s) U†` with its spectrum in descending order.
#[derive(Debug, Clone)]
pub struct KeylContext {
    rho: HermitianOperator,
    spectrum: Spectrum,
    unitary: Mat<c64>,
}

fn phase_normalized(col: &[c64]) -> Vec<c64> {
    let Some(lead) = col.iter().find(|z| z.norm() > DEGENERACY_TOL) else {
        return col.to_vec();
    };
    let phase = lead.conj() / lead.norm();
    col.iter().map(|z| z * phase).collect()
}

fn lex_cmp(a: &[c64], b: &[c64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

impl KeylContext {
    /// Diagonalizes `rho`. Eigenvectors are ordered by descending eigenvalue;
    /// within a degenerate block (gap ≤ [`DEGENERACY_TOL`]) each vector is
    /// rotated so its first nonzero entry is real positive, and vectors are
    /// ordered by descending lexicographic comparison of `(re, im)` entries.
    pub fn new(rho: &HermitianOperator) -> Result<Self> {
        rho.check_density(CONTEXT_TOL)?;
        let eig = rho.eigh()?;
        let d = rho.dim();
        let mut cols: Vec<(f64, Vec<c64>)> = (0..d)
            .map(|j| {
                let col: Vec<c64> = eig.vectors.col(j).iter().copied().collect();
                (eig.values[j], phase_normalized(&col))
            })
            .collect();
        cols.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut start = 0;
        while start < d {
            let mut end = start + 1;
            while end < d && cols[end - 1].0 - cols[end].0 <= DEGENERACY_TOL {
                end += 1;
            }
            cols[start..end].sort_by(|a, b| lex_cmp(&a.1, &b.1));
            start = end;
        }
        let values: Vec<f64> = cols.iter().map(|c| c.0).collect();
        let spectrum = Spectrum::from_eigenvalues(&values, CONTEXT_TOL)?;
        let unitary = Mat::from_fn(d, d, |i, j| cols[j].1[i]);

        let id_dev = (&unitary * unitary.adjoint() - Mat::<c64>::identity(d, d)).norm_max();
        let recon = Mat::from_fn(d, d, |i, j| unitary[(i, j)] * spectrum.values()[j]) * unitary.adjoint();
        let rec_dev = (recon - rho.as_mat()).norm_max();
        if id_dev > CONTEXT_TOL || rec_dev > CONTEXT_TOL {
            return Err(Error::EigenFailure);
        }
        Ok(Self {
            rho: rho.clone(),
            spectrum,
            unitary,
        })
    }

    pub fn rho(&self) -> &HermitianOperator {
        &self.rho
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn unitary(&self) -> &Mat<c64> {
        &self.unitary
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// `U† σ U`.
    pub fn rotate(&self, sigma: &HermitianOperator) -> Result<HermitianOperator> {
        if sigma.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: sigma.dim(),
            });
        }
        Ok(sigma.conjugate_by(&self.unitary.adjoint().to_owned()))
    }

    /// `Δ_x(diag s)` for the partition `λ` padded to `d`.
    fn gpf_diag(&self, lambda: &Partition) -> Result<f64> {
        let d = self.dim();
        let s = self.spectrum.padded(d);
        let mut minors = Vec::with_capacity(d);
        let mut acc = 1.0;
        for v in &s {
            acc *= v;
            minors.push(acc);
        }
        Ok(gpf_from_minors(&partition_cone(lambda, d)?.delta(), &minors))
    }
}

/// `K(ρ‖σ) = Σ_i s_i ln s_i - δ_i(s) ln Λ_i(U†σU)`, with `0 ln 0 = 0` and
/// `+∞` when a minor vanishes against a positive exponent.
///
/// Independent of the basis chosen inside degenerate eigenspaces of `ρ`:
/// `δ_i(s) = 0` inside a block, and at a block end `Λ_i` is the determinant
/// of `σ` compressed to the leading eigenspaces.
pub fn keyl_divergence(ctx: &KeylContext, sigma: &HermitianOperator) -> Result<f64> {
    let minors = principal_minors(&ctx.rotate(sigma)?);
    let s = ctx.spectrum.padded(ctx.dim());
    let delta = ctx.spectrum.as_cone().delta();
    let mut k = 0.0;
    for i in 0..s.len() {
        if s[i] > 0.0 {
            k += s[i] * s[i].ln();
        }
        if delta[i] > 0.0 {
            if minors[i] <= 0.0 {
                return Ok(f64::INFINITY);
            }
            k -= delta[i] * minors[i].ln();
        }
    }
    Ok(k)
}

/// Classical relative entropy `Σ s_i (ln s_i - ln t_i)`.
pub fn kl_divergence(s: &[f64], t: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&a, &b) in s.iter().zip(t) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            acc += a * (a.ln() - b.ln());
        }
    }
    acc
}

/// `Tr ρ (ln ρ - ln σ)`; `+∞` when the support of `ρ` is not inside that of `σ`.
pub fn quantum_relative_entropy(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    let er = rho.eigh()?;
    let es = sigma.eigh()?;
    let d = rho.dim();
    // Tr ρ ln ρ
    let mut acc: f64 = er.values.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum();
    // Tr ρ ln σ = Σ_{ij} p_i |⟨r_i|s_j⟩|² ln q_j
    let overlap = er.vectors.adjoint() * &es.vectors;
    for i in 0..d {
        if er.values[i] <= 0.0 {
            continue;
        }
        for j in 0..d {
            let w = overlap[(i, j)].norm_sqr();
            if w <= 1e-15 {
                continue;
            }
            if es.values[j] <= 0.0 {
                return Ok(f64::INFINITY);
            }
            acc -= er.values[i] * w * es.values[j].ln();
        }
    }
    Ok(acc)
}

/// `μ^k` with `δ_i(μ^k) = ⌈δ_i(k s)⌉`.
pub fn mu_sequence(s: &Spectrum, k: u64) -> Partition {
    approximate_spectrum(s, k)
}

/// `λ^n`: the largest `k` with `n - C(d+1,2) + 1 ≤ |μ^k| ≤ n`, with the
/// first row of `μ^k` extended to size `n`.
pub fn lambda_sequence(s: &Spectrum, n: u64) -> Partition {
    let slack = binomial(s.len() + 1, 2) as i64 - 1;
    let lower = n as i64 - slack;
    let mut best = Partition::empty();
    for k in 0..=n {
        let mu = mu_sequence(s, k);
        let size = mu.size() as i64;
        if size > n as i64 {
            // sizes are non-decreasing in k
            break;
        }
        if size >= lower {
            best = mu;
        }
    }
    let extra = n as usize - best.size();
    best.with_first_row_extended(extra)
}

/// `D(s) = s_1^{1 - C(d+1,2)} Π_i (s_1⋯s_i)^{-⌈δ_i(s)⌉}`.
pub fn discrimination_constant(s: &Spectrum) -> f64 {
    let d = s.len();
    let values = s.values();
    let c = binomial(d + 1, 2) as i32;
    let mut out = values[0].powi(1 - c);
    let mut prefix = 1.0;
    let delta = s.as_cone().delta();
    for i in 0..d {
        prefix *= values[i];
        let e = snapped_ceil(delta[i]).max(0) as i32;
        if e > 0 {
            out *= prefix.powi(-e);
        }
    }
    out
}

/// `Tr(Φ^U_{λ^n} σ^{⊗n}) / Tr(Φ^U_{λ^n} ρ^{⊗n})`, evaluated as a ratio of
/// generalized power functions.
pub fn discrimination_ratio(ctx: &KeylContext, sigma: &HermitianOperator, n: u64) -> Result<f64> {
    let lambda = lambda_sequence(&ctx.spectrum, n);
    let cone = partition_cone(&lambda, ctx.dim())?;
    let num = gpf(&cone, &ctx.rotate(sigma)?)?;
    let den = ctx.gpf_diag(&lambda)?;
    if den == 0.0 {
        return Err(Error::ZeroDenominator(format!(
            "Δ_{lambda}(diag s) vanishes for spectrum {:?}",
            ctx.spectrum.values()
        )));
    }
    Ok(num / den)
}

/// `D(s) · exp(-(n - C(d+1,2) + 1) · K)` with `0 · ∞ = 0`.
///
/// The exponent offset `C(d+1,2) - 1` is never larger than `d²`, the cruder
/// offset sometimes quoted for this bound.
pub fn discrimination_bound(s: &Spectrum, keyl: f64, n: u64) -> f64 {
    let offset = n as f64 - binomial(s.len() + 1, 2) as f64 + 1.0;
    let exponent = if offset == 0.0 { 0.0 } else { -offset * keyl };
    discrimination_constant(s) * exponent.exp()
}

/// `Φ^U_λ`: projector onto `U^{⊗n} span{T(π) v_λ}`, where `v_λ` puts basis
/// vector `e_r` on every box of row `r` and is antisymmetrized over columns.
/// Test oracle for [`gpf`]; cost grows as `d^{2|λ|}`.
pub fn hwv_projector_oracle(
    lambda: &Partition,
    d: usize,
    unitary: &Mat<c64>,
    limits: &Limits,
) -> Result<HermitianOperator> {
    if lambda.len() > d {
        return Err(Error::InvalidPartition(lambda.parts().to_vec()));
    }
    if unitary.nrows() != d || unitary.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: unitary.nrows(),
        });
    }
    let n = lambda.size();
    let dim128 = pow_sat(d, n);
    limits.check_dense(dim128)?;
    limits.check_nm(n)?;
    let dim = dim128 as usize;

    // boxes in row-major order are wires 0..n
    let mut row_of = Vec::with_capacity(n);
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); lambda.part(0)];
    for (r, &len) in lambda.parts().iter().enumerate() {
        for col in columns.iter_mut().take(len) {
            col.push(row_of.len());
            row_of.push(r);
        }
    }
    let mut seed = vec![c64::new(0.0, 0.0); dim];
    seed[row_of.iter().fold(0, |acc, &r| acc * d + r)] = c64::new(1.0, 0.0);

    // column antisymmetrizer: product over columns of signed sums
    let mut v = seed;
    for col in &columns {
        if col.len() < 2 {
            continue;
        }
        let mut acc = vec![c64::new(0.0, 0.0); dim];
        for local in Perm::all(col.len()) {
            let sign = if (col.len() - local.num_cycles()) % 2 == 0 { 1.0 } else { -1.0 };
            let mut images: Vec<usize> = (0..n).collect();
            for (a, &wire) in col.iter().enumerate() {
                images[wire] = col[local.image(a)];
            }
            let perm = Perm::new(images)?;
            for (x, y) in acc.iter_mut().zip(permute_vector(&perm, d, &v)) {
                *x += y * sign;
            }
        }
        v = acc;
    }

    let orbit: Vec<Vec<c64>> = Perm::all(n).map(|p| permute_vector(&p, d, &v)).collect();
    let basis = orthonormalize(orbit);
    let expected = dim_specht(lambda) as usize;
    if basis.len() != expected {
        return Err(Error::Input(format!(
            "orbit span has rank {} instead of {expected}",
            basis.len()
        )));
    }

    // U^{⊗n} applied to every basis vector, one factor at a time
    let rotated: Vec<Vec<c64>> = basis
        .into_iter()
        .map(|mut x| {
            let mut stride = 1;
            for _ in 0..n {
                let mut y = vec![c64::new(0.0, 0.0); dim];
                for (idx, &val) in x.iter().enumerate() {
                    if val == c64::new(0.0, 0.0) {
                        continue;
                    }
                    let digit = (idx / stride) % d;
                    let base = idx - digit * stride;
                    for r in 0..d {
                        y[base + r * stride] += unitary[(r, digit)] * val;
                    }
                }
                x = y;
                stride *= d;
            }
            x
        })
        .collect();
    let cols = Mat::from_fn(dim, rotated.len(), |i, j| rotated[j][i]);
    Ok(HermitianOperator::gram(&cols))
}

/// Heuristic upper bound on `inf_σ K(ρ_M‖σ)` over compatible `σ`, from the
/// minimum over `samples` Haar-random compatible product states. Sample `j`
/// uses stream `j` of `seed`.
pub fn sampled_inf_keyl_upper_bound(
    rho_m: &HermitianOperator,
    scenario: &MarginalScenario,
    samples: u64,
    seed: u64,
    limits: &Limits,
) -> Result<f64> {
    let ctx = KeylContext::new(rho_m)?;
    let mut best = f64::INFINITY;
    for j in 0..samples {
        let psi = haar_sample_vector(scenario.joint(), &mut stream_rng(seed, j));
        let sigma = assemble_product(&tau_map_vector(&psi, scenario)?, limits)?;
        best = best.min(keyl_divergence(&ctx, &sigma)?);
    }
    Ok(best)
}
