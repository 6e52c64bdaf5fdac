//! Worked examples with closed-form values: the three-qubit pairwise
//! overlaps, the disjoint two-party witness, and the repeated-context case.

use faer::c64;
use serde::Serialize;

use crate::error::Result;
use crate::limits::Limits;
use crate::operators::HermitianOperator;
use crate::parallel::Execution;
use crate::scenario::{JointContext, MarginalScenario, ProductState};
use crate::witness::{build_witness, check_order_n, product_overlap, singlet_pairing_vector, CheckOptions};

/// Agreement required between a reproduced value and its closed form.
pub const REPRODUCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct ReproLine {
    pub name: String,
    pub value: f64,
    pub expected: f64,
}

impl ReproLine {
    pub fn matches(&self) -> bool {
        (self.value - self.expected).abs() <= REPRODUCE_TOL
    }
}

fn c(re: f64) -> c64 {
    c64::new(re, 0.0)
}

/// `⟨v|ρ_{AB}⊗ρ_{AC}⊗ρ_{BC}|v⟩` for the singlet-pairing vector `v`, which
/// `W_1` annihilates.
fn pairwise_overlaps(limits: &Limits) -> Result<Vec<ReproLine>> {
    let s = MarginalScenario::from_compact(JointContext::uniform(3, 2)?, &["AB", "AC", "BC"])?;
    let v = singlet_pairing_vector(&s)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = HermitianOperator::pure_state(&[c(0.0), c(h), c(-h), c(0.0)]);
    let anti = HermitianOperator::diagonal(&[0.0, 0.5, 0.5, 0.0]);
    let mixed = HermitianOperator::identity(4).scale(0.25);
    let zero = HermitianOperator::diagonal(&[1.0, 0.0, 0.0, 0.0]);
    let one = HermitianOperator::diagonal(&[0.0, 0.0, 0.0, 1.0]);
    let cases = [
        ("anticorrelated triple", [anti.clone(), anti.clone(), anti], 1.0 / 32.0),
        ("singlet triple", [singlet.clone(), singlet.clone(), singlet], 1.0 / 16.0),
        ("maximally mixed triple", [mixed.clone(), mixed.clone(), mixed], 1.0 / 64.0),
        ("|00>,|11>,|00> triple", [zero.clone(), one, zero], 0.0),
    ];
    cases
        .into_iter()
        .map(|(name, factors, expected)| {
            let p = ProductState::new(&s, factors.to_vec())?;
            Ok(ReproLine {
                name: format!("pairwise overlap, {name}"),
                value: product_overlap(&p, &v, limits)?,
                expected,
            })
        })
        .collect()
}

/// `W_1` for `(A, B)` is `(1+ab)/2 · I`; reports the common diagonal value,
/// or NaN if the matrix is not exactly a multiple of the identity.
fn disjoint_identity(exec: Execution, limits: &Limits) -> Result<Vec<ReproLine>> {
    let mut out = Vec::new();
    for (a, b) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let s = MarginalScenario::from_compact(JointContext::new([("A", a), ("B", b)])?, &["A", "B"])?;
        let w = build_witness(&s, 1, exec, limits)?;
        let m = w.matrix();
        let diag = m[(0, 0)];
        let scalar = (0..w.dim()).all(|i| (0..w.dim()).all(|j| m[(i, j)] == if i == j { diag } else { 0.0 }));
        out.push(ReproLine {
            name: format!("disjoint W_1 for (a,b)=({a},{b}), multiple of I"),
            value: if scalar { diag } else { f64::NAN },
            expected: (1 + a * b) as f64 / 2.0,
        });
    }
    Ok(out)
}

/// `ρ⊗σ ≤ Π_sym` for the repeated context `(X, X)`: the minimum eigenvalue
/// is `-√((1 - Tr ρσ)/2)` for pure inputs and vanishes only for equal pure states.
fn repeated_context(exec: Execution, limits: &Limits) -> Result<Vec<ReproLine>> {
    let s = MarginalScenario::from_compact(JointContext::new([("X", 2)])?, &["X", "X"])?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = HermitianOperator::pure_state(&[c(1.0), c(0.0)]);
    let plus = HermitianOperator::pure_state(&[c(h), c(h)]);
    let half = HermitianOperator::identity(2).scale(0.5);
    let opts = CheckOptions {
        exec,
        limits: *limits,
        ..Default::default()
    };
    let cases = [
        ("equal pure states", [zero.clone(), zero.clone()], 0.0),
        ("|0>,|+>", [zero, plus], -0.5),
        ("maximally mixed pair", [half.clone(), half], -0.25),
    ];
    cases
        .into_iter()
        .map(|(name, factors, expected)| {
            let p = ProductState::new(&s, factors.to_vec())?;
            Ok(ReproLine {
                name: format!("(X,X) min eigenvalue, {name}"),
                value: check_order_n(&s, &p, 1, &opts)?.min_eig,
                expected,
            })
        })
        .collect()
}

pub fn reproduce(exec: Execution, limits: &Limits) -> Result<Vec<ReproLine>> {
    let mut lines = pairwise_overlaps(limits)?;
    lines.extend(disjoint_identity(exec, limits)?);
    lines.extend(repeated_context(exec, limits)?);
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_line_matches() {
        for line in reproduce(Execution::Sequential, &Limits::default()).unwrap() {
            assert!(line.matches(), "{line:?}");
        }
    }
}
