//! Joint contexts, marginal scenarios, product states and partial traces.

use std::collections::BTreeSet;
use std::fmt;

use faer::{c64, Mat};
use rand::Rng;

use crate::error::{Error, Result};
use crate::limits::{pow_sat, Limits};
use crate::operators::HermitianOperator;
use crate::random::haar_vector;

/// Tolerance on `Tr(ψ²) = 1` for pure inputs.
pub const PURITY_TOL: f64 = 1e-10;
/// Positivity and trace tolerance for density operators.
pub const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
}

/// Ordered list of labelled subsystems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointContext {
    subsystems: Vec<Subsystem>,
}

impl JointContext {
    pub fn new<S: Into<String>>(subsystems: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        Self::with_limits(subsystems, &Limits::default())
    }

    pub fn with_limits<S: Into<String>>(
        subsystems: impl IntoIterator<Item = (S, usize)>,
        limits: &Limits,
    ) -> Result<Self> {
        let subsystems: Vec<Subsystem> = subsystems
            .into_iter()
            .map(|(l, dim)| Subsystem { label: l.into(), dim })
            .collect();
        if subsystems.is_empty() {
            return Err(Error::InvalidScenario("joint context is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for s in &subsystems {
            if s.label.is_empty() {
                return Err(Error::InvalidScenario("empty subsystem label".into()));
            }
            if !seen.insert(s.label.as_str()) {
                return Err(Error::InvalidScenario(format!("duplicate label {:?}", s.label)));
            }
            if s.dim < 2 {
                return Err(Error::InvalidScenario(format!(
                    "subsystem {:?} has dimension {} (< 2)",
                    s.label, s.dim
                )));
            }
        }
        let total = subsystems.iter().fold(1u128, |acc, s| acc.saturating_mul(s.dim as u128));
        limits.check_joint(total)?;
        Ok(Self { subsystems })
    }

    /// All subsystems with the same dimension, labelled `A`, `B`, ...
    pub fn uniform(count: usize, dim: usize) -> Result<Self> {
        Self::new((0..count).map(|i| (((b'A' + i as u8) as char).to_string(), dim)))
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|s| s.dim).collect()
    }

    pub fn dim(&self) -> usize {
        self.subsystems.iter().map(|s| s.dim).product()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.subsystems.iter().position(|s| s.label == label)
    }

    /// Resolves labels to joint positions, sorted into joint order.
    pub fn resolve<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        if labels.is_empty() {
            return Err(Error::InvalidScenario("empty context".into()));
        }
        let mut idx = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            let i = self
                .index_of(l)
                .ok_or_else(|| Error::InvalidScenario(format!("unknown label {l:?}")))?;
            if idx.contains(&i) {
                return Err(Error::InvalidScenario(format!("label {l:?} repeated within a context")));
            }
            idx.push(i);
        }
        idx.sort_unstable();
        Ok(idx)
    }

    pub fn context_dim(&self, context: &[usize]) -> usize {
        context.iter().map(|&i| self.subsystems[i].dim).product()
    }

    pub fn context_label(&self, context: &[usize]) -> String {
        context.iter().map(|&i| self.subsystems[i].label.as_str()).collect()
    }
}

/// Classification of a marginal scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioClass {
    /// No two contexts share a label.
    Disjoint,
    /// Some contexts share labels, none repeats, none is the whole joint context.
    Overlapping,
    /// A context repeats or equals the whole joint context.
    Degenerate,
}

impl fmt::Display for ScenarioClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Disjoint => "disjoint",
            Self::Overlapping => "overlapping",
            Self::Degenerate => "degenerate",
        })
    }
}

/// A joint context with an ordered tuple of contexts, each stored as sorted
/// joint positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalScenario {
    joint: JointContext,
    contexts: Vec<Vec<usize>>,
}

impl MarginalScenario {
    pub fn new<S: AsRef<str>>(joint: JointContext, contexts: &[Vec<S>]) -> Result<Self> {
        if contexts.is_empty() {
            return Err(Error::InvalidScenario("scenario has no contexts".into()));
        }
        let contexts = contexts.iter().map(|c| joint.resolve(c)).collect::<Result<_>>()?;
        Ok(Self { joint, contexts })
    }

    /// Contexts given as label strings of single-character labels, e.g.
    /// `["AB", "BC"]`.
    pub fn from_compact(joint: JointContext, contexts: &[&str]) -> Result<Self> {
        let split: Vec<Vec<String>> = contexts
            .iter()
            .map(|c| c.chars().map(|ch| ch.to_string()).collect())
            .collect();
        Self::new(joint, &split)
    }

    pub fn joint(&self) -> &JointContext {
        &self.joint
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    /// Number of contexts `m`.
    pub fn m(&self) -> usize {
        self.contexts.len()
    }

    pub fn context_dim(&self, i: usize) -> usize {
        self.joint.context_dim(&self.contexts[i])
    }

    /// `d_M = Π_i dim(S_i)`.
    pub fn product_dim(&self) -> u128 {
        (0..self.m()).fold(1u128, |acc, i| acc.saturating_mul(self.context_dim(i) as u128))
    }

    pub fn product_dim_power(&self, n: usize) -> u128 {
        let base = self.product_dim();
        (0..n).fold(1u128, |acc, _| acc.saturating_mul(base))
    }

    pub fn classify(&self) -> ScenarioClass {
        let full: Vec<usize> = (0..self.joint.len()).collect();
        let mut seen = BTreeSet::new();
        for c in &self.contexts {
            if *c == full || !seen.insert(c.clone()) {
                return ScenarioClass::Degenerate;
            }
        }
        for (i, a) in self.contexts.iter().enumerate() {
            for b in &self.contexts[i + 1..] {
                if a.iter().any(|x| b.contains(x)) {
                    return ScenarioClass::Overlapping;
                }
            }
        }
        ScenarioClass::Disjoint
    }
}

impl fmt::Display for MarginalScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self.contexts.iter().map(|c| self.joint.context_label(c)).collect();
        write!(f, "({})", ctx.join(","))
    }
}

/// Builds a scenario from resolved labels and returns its class.
pub fn validate_scenario<S: AsRef<str>>(
    joint: &JointContext,
    contexts: &[Vec<S>],
) -> Result<(MarginalScenario, ScenarioClass)> {
    let s = MarginalScenario::new(joint.clone(), contexts)?;
    let class = s.classify();
    Ok((s, class))
}

/// One density operator per context.
#[derive(Debug, Clone)]
pub struct ProductState {
    factors: Vec<HermitianOperator>,
}

impl ProductState {
    pub fn new(scenario: &MarginalScenario, factors: Vec<HermitianOperator>) -> Result<Self> {
        if factors.len() != scenario.m() {
            return Err(Error::SizeMismatch {
                expected: scenario.m(),
                found: factors.len(),
            });
        }
        for (i, f) in factors.iter().enumerate() {
            let expected = scenario.context_dim(i);
            if f.dim() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    found: f.dim(),
                });
            }
            f.check_density(DENSITY_TOL)?;
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[HermitianOperator] {
        &self.factors
    }
}

/// `Tr_{J \ keep}(op)`, where `dims` lists the joint factor dimensions and
/// `keep` holds sorted joint positions.
pub fn partial_trace_dims(op: &HermitianOperator, dims: &[usize], keep: &[usize]) -> Result<HermitianOperator> {
    let total: usize = dims.iter().product();
    if op.dim() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: op.dim(),
        });
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let kept_dim: usize = keep.iter().map(|&i| dims[i]).product();
    let traced_dim: usize = traced.iter().map(|&i| dims[i]).product();
    // stride of each joint factor in the composite index
    let mut stride = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let offset = |positions: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &p in positions.iter().rev() {
            off += (idx % dims[p]) * stride[p];
            idx /= dims[p];
        }
        off
    };
    let kept_off: Vec<usize> = (0..kept_dim).map(|k| offset(keep, k)).collect();
    let traced_off: Vec<usize> = (0..traced_dim).map(|t| offset(&traced, t)).collect();
    let mat = op.as_mat();
    let out = Mat::from_fn(kept_dim, kept_dim, |r, c| {
        traced_off
            .iter()
            .map(|&t| mat[(kept_off[r] + t, kept_off[c] + t)])
            .sum::<c64>()
    });
    Ok(HermitianOperator::from_mat_symmetrized(out))
}

/// `Tr_{J \ keep}(op)` with `keep` given by labels.
pub fn partial_trace<S: AsRef<str>>(op: &HermitianOperator, joint: &JointContext, keep: &[S]) -> Result<HermitianOperator> {
    let keep = joint.resolve(keep)?;
    partial_trace_dims(op, &joint.dims(), &keep)
}

/// Reduced state of the unit vector `psi` on the sorted positions `keep`.
pub fn reduced_from_vector(psi: &[c64], dims: &[usize], keep: &[usize]) -> HermitianOperator {
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let kept_dim: usize = keep.iter().map(|&i| dims[i]).product();
    let traced_dim: usize = traced.iter().map(|&i| dims[i]).product();
    let mut stride = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let offset = |positions: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &p in positions.iter().rev() {
            off += (idx % dims[p]) * stride[p];
            idx /= dims[p];
        }
        off
    };
    let traced_off: Vec<usize> = (0..traced_dim).map(|t| offset(&traced, t)).collect();
    let m = Mat::from_fn(kept_dim, traced_dim, |k, t| psi[offset(keep, k) + traced_off[t]]);
    HermitianOperator::gram(&m)
}

/// `τ_M(ψ)`: the marginals of a pure joint state on each context.
pub fn tau_map(psi: &HermitianOperator, scenario: &MarginalScenario) -> Result<ProductState> {
    let joint = scenario.joint();
    if psi.dim() != joint.dim() {
        return Err(Error::DimensionMismatch {
            expected: joint.dim(),
            found: psi.dim(),
        });
    }
    let purity = psi.purity();
    if (purity - 1.0).abs() > PURITY_TOL || (psi.trace() - 1.0).abs() > PURITY_TOL {
        return Err(Error::NotPure(purity));
    }
    let dims = joint.dims();
    let factors = scenario
        .contexts()
        .iter()
        .map(|c| partial_trace_dims(psi, &dims, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductState { factors })
}

/// `τ_M` for a unit state vector.
pub fn tau_map_vector(psi: &[c64], scenario: &MarginalScenario) -> Result<ProductState> {
    let joint = scenario.joint();
    if psi.len() != joint.dim() {
        return Err(Error::DimensionMismatch {
            expected: joint.dim(),
            found: psi.len(),
        });
    }
    let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm2 - 1.0).abs() > PURITY_TOL {
        return Err(Error::NotPure(norm2 * norm2));
    }
    let dims = joint.dims();
    let factors = scenario
        .contexts()
        .iter()
        .map(|c| reduced_from_vector(psi, &dims, c))
        .collect();
    Ok(ProductState { factors })
}

/// Haar-random pure state vector on `H_J`.
pub fn haar_sample_vector<R: Rng + ?Sized>(joint: &JointContext, rng: &mut R) -> Vec<c64> {
    haar_vector(joint.dim(), rng)
}

/// Haar-random pure density operator on `H_J`.
pub fn haar_sample_pure<R: Rng + ?Sized>(joint: &JointContext, rng: &mut R) -> HermitianOperator {
    HermitianOperator::pure_state(&haar_sample_vector(joint, rng))
}

/// `ρ_{S_1} ⊗ ⋯ ⊗ ρ_{S_m}`.
pub fn assemble_product(p: &ProductState, limits: &Limits) -> Result<HermitianOperator> {
    let dim = p
        .factors
        .iter()
        .fold(1u128, |acc, f| acc.saturating_mul(f.dim() as u128));
    limits.check_dense(dim)?;
    let mut acc = HermitianOperator::identity(1);
    for f in &p.factors {
        acc = acc.kron(f);
    }
    Ok(acc)
}

/// `d^k` guard helper for dense tensor powers.
pub fn check_power(limits: &Limits, base: usize, exp: usize) -> Result<()> {
    limits.check_dense(pow_sat(base, exp))
}
