//! Witness operators `W_n` and the order-`n` compatibility test
//! `ρ_M^{⊗n} ≤ W_n`.

use std::fmt;
use std::sync::OnceLock;

use faer::{c64, Mat};
use serde::Serialize;

use crate::combinatorics::{binomial, character, dim_specht, enumerate_partitions, factorial, Partition};
use crate::diagram::{symmetrizer_contraction, weighted_contraction, PermTermSum};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::operators::lowrank::{gram_factor, kron_thin, min_eig_minus_gram, RealSpectral};
use crate::operators::{min_eigenvalue, HermitianOperator};
use crate::parallel::{fold_range, Execution};
use crate::random::stream_rng;
use crate::scenario::{assemble_product, haar_sample_vector, tau_map_vector, MarginalScenario, ProductState};

/// Relative violation tolerance: violated when `min_eig < -tol · max(1, ‖W‖)`.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Eigenvalues of product-state factors at or below this are dropped when
/// factoring `ρ = V V†` for the low-rank route.
pub const RANK_CUTOFF: f64 = 1e-13;
/// Smallest witness dimension for which the low-rank route is considered.
pub const LOW_RANK_MIN_DIM: usize = 256;

/// How the minimum eigenvalue of `W_n - ρ^{⊗n}` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Low-rank route when `rank(ρ^{⊗n}) ≤ dim/4` and `dim ≥ 256`, dense otherwise.
    #[default]
    Auto,
    Dense,
    LowRank,
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub tol: f64,
    pub exec: Execution,
    pub limits: Limits,
    pub route: Route,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            exec: Execution::default(),
            limits: Limits::default(),
            route: Route::Auto,
        }
    }
}

/// Outcome of one order-`n` check.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub order: usize,
    pub min_eig: f64,
    pub violated: bool,
    /// Unit vector `v` on `H_M^{⊗n}` with `⟨v|(W_n - ρ^{⊗n})|v⟩ = min_eig`,
    /// present iff `violated`.
    #[serde(skip)]
    pub certificate: Option<Vec<c64>>,
    pub witness_trace: f64,
    pub witness_norm: f64,
    pub threshold: f64,
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={}  min_eig={:+.6e}  threshold={:.1e}  {}",
            self.order,
            self.min_eig,
            -self.threshold,
            if self.violated { "VIOLATED" } else { "satisfied" }
        )
    }
}

/// `W_n` with its exact term sum and a lazily computed eigendecomposition.
#[derive(Debug)]
pub struct Witness {
    terms: PermTermSum,
    matrix: Mat<f64>,
    spectral: OnceLock<RealSpectral>,
}

impl Witness {
    pub fn from_terms(terms: PermTermSum, exec: Execution, limits: &Limits) -> Result<Self> {
        let matrix = terms.materialize_real(exec, limits)?;
        Ok(Self {
            terms,
            matrix,
            spectral: OnceLock::new(),
        })
    }

    pub fn terms(&self) -> &PermTermSum {
        &self.terms
    }

    pub fn order(&self) -> usize {
        self.terms.order()
    }

    pub fn scenario(&self) -> &MarginalScenario {
        self.terms.scenario()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.matrix
    }

    pub fn operator(&self) -> HermitianOperator {
        HermitianOperator::from_mat_symmetrized(Mat::from_fn(self.dim(), self.dim(), |i, j| {
            c64::new(self.matrix[(i, j)], 0.0)
        }))
    }

    pub fn spectral(&self) -> Result<&RealSpectral> {
        if let Some(s) = self.spectral.get() {
            return Ok(s);
        }
        let s = RealSpectral::new(&self.matrix)?;
        Ok(self.spectral.get_or_init(|| s))
    }

    /// Spectral norm `‖W_n‖`.
    pub fn norm(&self) -> Result<f64> {
        Ok(self.spectral()?.norm())
    }

    /// `Tr(W_n) = C(nm + d_J - 1, nm)`, checked in exact arithmetic.
    pub fn trace_identity_holds(&self) -> bool {
        let s = self.scenario();
        let nm = self.order() * s.m();
        self.terms.trace_equals(binomial(nm + s.joint().dim() - 1, nm))
    }

    /// Checks `scale · ρ^{⊗n} ≤ W_n`.
    fn check_scaled(&self, p: &ProductState, scale: f64, opts: &CheckOptions) -> Result<WitnessReport> {
        let n = self.order();
        let s = self.scenario();
        if p.factors().len() != s.m() {
            return Err(Error::SizeMismatch {
                expected: s.m(),
                found: p.factors().len(),
            });
        }
        for (i, f) in p.factors().iter().enumerate() {
            if f.dim() != s.context_dim(i) {
                return Err(Error::DimensionMismatch {
                    expected: s.context_dim(i),
                    found: f.dim(),
                });
            }
        }
        let dim = self.dim();
        let norm = self.norm()?;
        let threshold = opts.tol * norm.max(1.0);

        // thin factor of ρ_M^{⊗n}
        let mut v_single = Mat::from_fn(1, 1, |_, _| c64::new(1.0, 0.0));
        for f in p.factors() {
            v_single = kron_thin(&v_single, &gram_factor(f, RANK_CUTOFF)?);
        }
        let rank = v_single.ncols().saturating_pow(n as u32);
        let low_rank = match opts.route {
            Route::Dense => false,
            Route::LowRank => true,
            Route::Auto => dim >= LOW_RANK_MIN_DIM && rank.saturating_mul(4) <= dim,
        };

        let mut result = None;
        if low_rank {
            let mut v = Mat::from_fn(1, 1, |_, _| c64::new(scale.sqrt(), 0.0));
            for _ in 0..n {
                v = kron_thin(&v, &v_single);
            }
            if let Some(lr) = min_eig_minus_gram(self.spectral()?, &v)? {
                let violated = lr.value < -threshold;
                if !violated || lr.vector.is_some() {
                    result = Some((lr.value, lr.vector));
                }
            }
        }
        let (min_eig, vector) = match result {
            Some(r) => r,
            None => {
                let rho = assemble_product(p, &opts.limits)?;
                let power = rho.kron_power(n);
                let op = HermitianOperator::from_mat_symmetrized(Mat::from_fn(dim, dim, |i, j| {
                    c64::new(self.matrix[(i, j)], 0.0) - power.get(i, j) * scale
                }));
                let (value, vec) = min_eigenvalue(&op)?;
                (value, Some(vec))
            }
        };
        let violated = min_eig < -threshold;
        Ok(WitnessReport {
            order: n,
            min_eig,
            violated,
            certificate: if violated { vector } else { None },
            witness_trace: self.terms.trace(),
            witness_norm: norm,
            threshold,
        })
    }

    /// Checks `ρ_M^{⊗n} ≤ W_n`.
    pub fn check(&self, p: &ProductState, opts: &CheckOptions) -> Result<WitnessReport> {
        self.check_scaled(p, 1.0, opts)
    }
}

/// `W_n = Tr^{⊗n}_{mJ\M}(Π^{(nm)}_J)`.
pub fn build_witness(scenario: &MarginalScenario, n: usize, exec: Execution, limits: &Limits) -> Result<Witness> {
    limits.check_dense(scenario.product_dim_power(n))?;
    let terms = symmetrizer_contraction(scenario, n, exec, limits)?;
    Witness::from_terms(terms, exec, limits)
}

/// Builds `W_n` and checks `ρ_M^{⊗n} ≤ W_n`.
pub fn check_order_n(
    scenario: &MarginalScenario,
    p: &ProductState,
    n: usize,
    opts: &CheckOptions,
) -> Result<WitnessReport> {
    build_witness(scenario, n, opts.exec, &opts.limits)?.check(p, opts)
}

/// Result of scanning `n = 1..=n_max`.
#[derive(Debug, Clone, Serialize)]
pub struct ScanOutcome {
    pub n_max: usize,
    /// Smallest violating order; absent means inconclusive up to `n_max`.
    pub first_violation: Option<usize>,
    pub reports: Vec<WitnessReport>,
}

impl fmt::Display for ScanOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_violation {
            Some(n) => write!(f, "incompatible: violation certified at n={n}"),
            None => write!(f, "inconclusive up to n={}", self.n_max),
        }
    }
}

/// Scans orders `1..=n_max`, stopping at the first violation.
pub fn find_min_violating_order(
    scenario: &MarginalScenario,
    p: &ProductState,
    n_max: usize,
    opts: &CheckOptions,
) -> Result<ScanOutcome> {
    let mut reports = Vec::new();
    for n in 1..=n_max {
        let report = check_order_n(scenario, p, n, opts)?;
        let violated = report.violated;
        reports.push(report);
        if violated {
            return Ok(ScanOutcome {
                n_max,
                first_violation: Some(n),
                reports,
            });
        }
    }
    Ok(ScanOutcome {
        n_max,
        first_violation: None,
        reports,
    })
}

/// `Σ_{λ ⊢ nm, ℓ(λ) ≤ v} Tr^{⊗n}_{mJ\M}(Π^λ_J)` as an exact term sum.
///
/// Each permutation is weighted by `Σ_λ dim S^λ · χ^λ(π)` over the common
/// denominator `(nm)!`.
pub fn ortho_count_terms(
    scenario: &MarginalScenario,
    v: usize,
    n: usize,
    exec: Execution,
    limits: &Limits,
) -> Result<PermTermSum> {
    if v == 0 {
        return Err(Error::Input("v must be at least 1".into()));
    }
    let k = n * scenario.m();
    limits.check_nm(k)?;
    let shapes = enumerate_partitions(k, v);
    let classes = enumerate_partitions(k, k);
    let weights: Vec<(Partition, i128)> = classes
        .into_iter()
        .map(|ct| {
            let w = shapes
                .iter()
                .map(|l| dim_specht(l) as i128 * character(l, &ct).expect("sizes agree") as i128)
                .sum();
            (ct, w)
        })
        .collect();
    weighted_contraction(
        scenario,
        n,
        factorial(k),
        |ct| {
            weights
                .iter()
                .find(|(c, _)| c == ct)
                .map(|(_, w)| *w)
                .expect("every cycle type is listed")
        },
        exec,
        limits,
    )
}

/// Checks `v^{nm} ρ_M^{⊗n} ≤ Σ_{λ ∈ Y^v_{nm}} Tr^{⊗n}_{mJ\M}(Π^λ_J)`.
/// A violation certifies that fewer than `v` mutually orthogonal joint
/// pure states reproduce `ρ_M`.
pub fn check_ortho_count(
    scenario: &MarginalScenario,
    p: &ProductState,
    v: usize,
    n: usize,
    opts: &CheckOptions,
) -> Result<WitnessReport> {
    opts.limits.check_dense(scenario.product_dim_power(n))?;
    let terms = ortho_count_terms(scenario, v, n, opts.exec, &opts.limits)?;
    let witness = Witness::from_terms(terms, opts.exec, &opts.limits)?;
    let scale = (v as f64).powi((n * scenario.m()) as i32);
    witness.check_scaled(p, scale, opts)
}

/// Monte-Carlo comparison of `C(nm+d_J-1, nm) · E[τ_M(ψ)^{⊗n}]` with `W_n`.
#[derive(Debug, Clone, Serialize)]
pub struct DeFinettiReport {
    pub order: usize,
    pub samples: u64,
    pub seed: u64,
    pub normalization: u128,
    /// `‖estimate - W_n‖_F / ‖W_n‖_F`.
    pub relative_error: f64,
    /// Trace of the estimate, to be compared with `normalization`.
    pub estimate_trace: f64,
}

/// Sample `j` uses the stream `j` of `seed`, so the estimate does not depend
/// on the execution strategy beyond floating-point summation order.
pub fn definetti_validate(
    scenario: &MarginalScenario,
    n: usize,
    samples: u64,
    seed: u64,
    exec: Execution,
    limits: &Limits,
) -> Result<DeFinettiReport> {
    if samples == 0 {
        return Err(Error::Input("at least one sample is required".into()));
    }
    let witness = build_witness(scenario, n, exec, limits)?;
    let dim = witness.dim();
    let joint = scenario.joint();
    let sum = fold_range(
        exec,
        samples as u128,
        || vec![c64::new(0.0, 0.0); dim * dim],
        |mut acc, j| {
            let psi = haar_sample_vector(joint, &mut stream_rng(seed, j as u64));
            let p = tau_map_vector(&psi, scenario).expect("unit vector of the joint dimension");
            let rho = assemble_product(&p, limits).expect("checked by the witness guard");
            let power = rho.kron_power(n);
            for c in 0..dim {
                for r in 0..dim {
                    acc[c * dim + r] += power.get(r, c);
                }
            }
            acc
        },
        |mut a, b| {
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            a
        },
    );
    let nm = n * scenario.m();
    let normalization = binomial(nm + joint.dim() - 1, nm);
    let factor = normalization as f64 / samples as f64;
    let w = witness.matrix();
    let mut diff2 = 0.0;
    let mut w2 = 0.0;
    let mut trace = 0.0;
    for c in 0..dim {
        for r in 0..dim {
            let est = sum[c * dim + r] * factor;
            diff2 += (est - c64::new(w[(r, c)], 0.0)).norm_sqr();
            w2 += w[(r, c)] * w[(r, c)];
            if r == c {
                trace += est.re;
            }
        }
    }
    Ok(DeFinettiReport {
        order: n,
        samples,
        seed,
        normalization,
        relative_error: (diff2 / w2).sqrt(),
        estimate_trace: trace,
    })
}

/// Unit vector on `H_M` pairing the two occurrences of every label with a
/// singlet `(|01⟩ - |10⟩)/√2`. Requires every label to be a qubit appearing
/// in exactly two contexts.
pub fn singlet_pairing_vector(scenario: &MarginalScenario) -> Result<Vec<c64>> {
    let joint = scenario.joint();
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); joint.len()];
    let mut slots = 0;
    for ctx in scenario.contexts() {
        for &x in ctx {
            occurrences[x].push(slots);
            slots += 1;
        }
    }
    for (x, occ) in occurrences.iter().enumerate() {
        if occ.len() != 2 || joint.subsystems()[x].dim != 2 {
            return Err(Error::InvalidScenario(format!(
                "label {:?} must be a qubit in exactly two contexts",
                joint.subsystems()[x].label
            )));
        }
    }
    let amp = std::f64::consts::FRAC_1_SQRT_2.powi(joint.len() as i32);
    let dim = 1usize << slots;
    Ok((0..dim)
        .map(|idx| {
            let bit = |s: usize| (idx >> (slots - 1 - s)) & 1;
            let mut sign = 1.0;
            for occ in &occurrences {
                match (bit(occ[0]), bit(occ[1])) {
                    (0, 1) => {}
                    (1, 0) => sign = -sign,
                    _ => return c64::new(0.0, 0.0),
                }
            }
            c64::new(sign * amp, 0.0)
        })
        .collect())
}

/// `⟨v|ρ_M|v⟩`.
pub fn product_overlap(p: &ProductState, v: &[c64], limits: &Limits) -> Result<f64> {
    let rho = assemble_product(p, limits)?;
    if rho.dim() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: v.len(),
        });
    }
    Ok(rho.expectation(v))
}
