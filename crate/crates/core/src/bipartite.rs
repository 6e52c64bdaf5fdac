//! The two-party scenario `(A, B)`: spectrum equality, the exponent `Ω`,
//! its Pinsker lower bound, and the Schur-polynomial inequalities implied by
//! the order-`n` witness.
//!
//! The exponent is written in terms of the two spectra; no distinction is
//! made between a state's spectrum and its eigenvalue vector.

use serde::Serialize;

use crate::combinatorics::{dim_specht, dim_weyl, enumerate_partitions, lr_coefficient, schur_polynomial, Partition};
use crate::error::{Error, Result};
use crate::keyl::kl_divergence;
use crate::operators::HermitianOperator;

/// Mass below this counts as zero when deciding whether a spectrum fits in
/// its first `ℓ` entries.
pub const SUPPORT_TOL: f64 = 1e-15;

fn descending_spectrum(rho: &HermitianOperator) -> Result<Vec<f64>> {
    let mut ev = rho.eigenvalues()?;
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

fn pad(v: &[f64], d: usize) -> Vec<f64> {
    let mut out = v.to_vec();
    out.resize(d.max(v.len()), 0.0);
    out
}

/// Whether the descending spectra agree entrywise within `tol` after
/// zero-padding to a common length.
pub fn bipartite_compatible(rho_a: &HermitianOperator, rho_b: &HermitianOperator, tol: f64) -> Result<bool> {
    let sa = descending_spectrum(rho_a)?;
    let sb = descending_spectrum(rho_b)?;
    let d = sa.len().max(sb.len());
    Ok(pad(&sa, d).iter().zip(&pad(&sb, d)).all(|(x, y)| (x - y).abs() <= tol))
}

/// Minimizer `r* = (s_A + s_B)/2` of `KL(s_A‖r) + KL(s_B‖r)` over spectra of
/// length `ℓ`, or `None` when either spectrum has mass beyond entry `ℓ`.
pub fn omega_minimizer(sa: &[f64], sb: &[f64], ell: usize) -> Option<Vec<f64>> {
    let d = sa.len().max(sb.len()).max(ell);
    let (sa, sb) = (pad(sa, d), pad(sb, d));
    if sa[ell..].iter().chain(&sb[ell..]).any(|&x| x > SUPPORT_TOL) {
        return None;
    }
    Some((0..ell).map(|i| 0.5 * (sa[i] + sb[i])).collect())
}

/// `Ω = inf_{r ∈ Σ^ℓ} KL(s_A‖r) + KL(s_B‖r)`; `+∞` when either spectrum has
/// mass outside the first `ℓ` entries.
pub fn omega(sa: &[f64], sb: &[f64], ell: usize) -> f64 {
    match omega_minimizer(sa, sb, ell) {
        None => f64::INFINITY,
        Some(r) => {
            let (sa, sb) = (pad(sa, ell), pad(sb, ell));
            kl_divergence(&sa[..ell], &r) + kl_divergence(&sb[..ell], &r)
        }
    }
}

/// `‖s_A - s_B‖₁² / 6`, a lower bound on [`omega`].
pub fn pinsker_bound(sa: &[f64], sb: &[f64]) -> f64 {
    let d = sa.len().max(sb.len());
    let l1: f64 = pad(sa, d).iter().zip(&pad(sb, d)).map(|(x, y)| (x - y).abs()).sum();
    l1 * l1 / 6.0
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BipartiteCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Right-hand side `Σ_{λ ∈ Y^ℓ_{2n}} c^λ_{αβ} dim W^a_λ dim W^b_λ / dim S^λ`.
pub fn bipartite_rhs(alpha: &Partition, beta: &Partition, a: usize, b: usize) -> f64 {
    let ell = a.min(b);
    enumerate_partitions(alpha.size() + beta.size(), ell)
        .iter()
        .map(|lambda| {
            let c = lr_coefficient(alpha, beta, lambda);
            if c == 0 {
                return 0.0;
            }
            c as f64 * dim_weyl(lambda, a) as f64 * dim_weyl(lambda, b) as f64 / dim_specht(lambda) as f64
        })
        .sum()
}

/// `s_α(r_A) s_β(r_B) ≤ Σ_λ c^λ_{αβ} dim W^a_λ dim W^b_λ / dim S^λ`.
pub fn bipartite_inequality_check(
    rho_a: &HermitianOperator,
    rho_b: &HermitianOperator,
    n: usize,
    alpha: &Partition,
    beta: &Partition,
) -> Result<BipartiteCheck> {
    let (a, b) = (rho_a.dim(), rho_b.dim());
    for (p, d) in [(alpha, a), (beta, b)] {
        if p.size() != n || p.len() > d {
            return Err(Error::Input(format!(
                "partition {p} must have size {n} and at most {d} parts"
            )));
        }
    }
    let ra = descending_spectrum(rho_a)?;
    let rb = descending_spectrum(rho_b)?;
    let lhs = schur_polynomial(alpha, &ra)? * schur_polynomial(beta, &rb)?;
    let rhs = bipartite_rhs(alpha, beta, a, b);
    Ok(BipartiteCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
    })
}

/// Eigenvalue of `W_n` for `(A, B)` on the isotypic block `(α, β)`.
///
/// `W_n` commutes with `U^{⊗n} ⊗ V^{⊗n}` and with independent permutations
/// of the `A` and `B` wires, so it is a scalar on each block; the trace
/// against the block projector gives [`bipartite_rhs`] divided by the
/// multiplicity-space dimensions.
pub fn block_eigenvalue(alpha: &Partition, beta: &Partition, a: usize, b: usize) -> f64 {
    bipartite_rhs(alpha, beta, a, b) / (dim_weyl(alpha, a) as f64 * dim_weyl(beta, b) as f64)
}

/// Largest eigenvalue of `ρ^{⊗n}` on the `λ`-isotypic block: the
/// highest-weight monomial `Π s_i^{λ_i}` of the descending spectrum.
fn top_weight(lambda: &Partition, s: &[f64]) -> f64 {
    lambda.parts().iter().zip(s).map(|(&l, &x)| x.powi(l as i32)).product()
}

/// Order-`n` check of `ρ_A^{⊗n} ⊗ ρ_B^{⊗n} ≤ W_n` without building `W_n`.
#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    pub order: usize,
    pub min_eig: f64,
    pub violated: bool,
    pub witness_norm: f64,
    pub threshold: f64,
    /// Block `(α, β)` attaining `min_eig`.
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
}

/// Minimum eigenvalue of `W_n - ρ_A^{⊗n} ⊗ ρ_B^{⊗n}` for the scenario
/// `(A, B)` with joint context `AB`, block by block. Violated when
/// `min_eig < -tol · max(1, ‖W_n‖)`, as for the dense checker.
pub fn bipartite_block_check(
    rho_a: &HermitianOperator,
    rho_b: &HermitianOperator,
    n: usize,
    tol: f64,
) -> Result<BlockReport> {
    if n == 0 {
        return Err(Error::Input("order must be at least 1".into()));
    }
    let (a, b) = (rho_a.dim(), rho_b.dim());
    let (sa, sb) = (descending_spectrum(rho_a)?, descending_spectrum(rho_b)?);
    let mut best: Option<(f64, Partition, Partition)> = None;
    let mut norm = 0.0f64;
    for alpha in enumerate_partitions(n, a) {
        for beta in enumerate_partitions(n, b) {
            let w = block_eigenvalue(&alpha, &beta, a, b);
            norm = norm.max(w);
            let gap = w - top_weight(&alpha, &sa) * top_weight(&beta, &sb);
            if best.as_ref().is_none_or(|(g, _, _)| gap < *g) {
                best = Some((gap, alpha.clone(), beta));
            }
        }
    }
    let (min_eig, alpha, beta) = best.expect("Y_n is never empty");
    let threshold = tol * norm.max(1.0);
    Ok(BlockReport {
        order: n,
        min_eig,
        violated: min_eig < -threshold,
        witness_norm: norm,
        threshold,
        alpha: alpha.parts().to_vec(),
        beta: beta.parts().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::parallel::Execution;
    use crate::random::{random_density, rng_from_seed};
    use crate::scenario::{JointContext, MarginalScenario, ProductState};
    use crate::witness::{build_witness, CheckOptions};

    fn ab(a: usize, b: usize) -> MarginalScenario {
        MarginalScenario::from_compact(JointContext::new([("A", a), ("B", b)]).unwrap(), &["A", "B"]).unwrap()
    }

    #[test]
    fn block_eigenvalues_match_dense_witness() {
        for (a, b, n) in [(2, 2, 1), (2, 2, 2), (2, 3, 2), (2, 2, 3)] {
            let w = build_witness(&ab(a, b), n, Execution::Sequential, &Limits::default()).unwrap();
            let mut dense = w.operator().eigenvalues().unwrap();
            let mut blocks = Vec::new();
            for alpha in enumerate_partitions(n, a) {
                for beta in enumerate_partitions(n, b) {
                    let mult = dim_specht(&alpha) * dim_weyl(&alpha, a) * dim_specht(&beta) * dim_weyl(&beta, b);
                    let e = block_eigenvalue(&alpha, &beta, a, b);
                    blocks.extend(std::iter::repeat_n(e, mult as usize));
                }
            }
            dense.sort_by(f64::total_cmp);
            blocks.sort_by(f64::total_cmp);
            assert_eq!(dense.len(), blocks.len());
            for (x, y) in dense.iter().zip(&blocks) {
                assert!((x - y).abs() < 1e-10, "a={a} b={b} n={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn block_route_matches_dense_checker() {
        let mut rng = rng_from_seed(21);
        for (a, b, n) in [(2, 2, 2), (2, 3, 2), (2, 2, 3)] {
            let s = ab(a, b);
            let w = build_witness(&s, n, Execution::Sequential, &Limits::default()).unwrap();
            for rank in [1, 2] {
                let (ra, rb) = (random_density(a, rank, &mut rng), random_density(b, rank, &mut rng));
                let p = ProductState::new(&s, vec![ra.clone(), rb.clone()]).unwrap();
                let dense = w.check(&p, &CheckOptions::default()).unwrap();
                let block = bipartite_block_check(&ra, &rb, n, 1e-9).unwrap();
                assert!((dense.min_eig - block.min_eig).abs() < 1e-10, "{} {}", dense.min_eig, block.min_eig);
                assert_eq!(dense.violated, block.violated);
            }
        }
    }

    #[test]
    fn compatibility_examples() {
        let half = HermitianOperator::identity(2).scale(0.5);
        let third = HermitianOperator::identity(3).scale(1.0 / 3.0);
        assert!(bipartite_compatible(&half, &half, 1e-12).unwrap());
        assert!(!bipartite_compatible(&half, &third, 1e-12).unwrap());
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&[0.6, 0.4], &[0.6, 0.4], 2), 0.0);
        let v = omega(&[1.0, 0.0], &[0.5, 0.5], 2);
        let r = [0.75, 0.25];
        let expected = kl_divergence(&[1.0, 0.0], &r) + kl_divergence(&[0.5, 0.5], &r);
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.4315).abs() < 1e-4);
        assert_eq!(omega(&[0.5, 0.3, 0.2], &[0.5, 0.5], 2), f64::INFINITY);
    }

    #[test]
    fn rhs_example() {
        let one = Partition::row(1);
        assert!((bipartite_rhs(&one, &one, 2, 2) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn pure_rows_saturate_at_one() {
        let pure = HermitianOperator::diagonal(&[1.0, 0.0]);
        for n in 1..=3 {
            let row = Partition::row(n);
            let r = bipartite_inequality_check(&pure, &pure, n, &row, &row).unwrap();
            assert!((r.lhs - 1.0).abs() < 1e-14);
            assert!(r.holds);
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let half = HermitianOperator::identity(2).scale(0.5);
        let col = Partition::column(3);
        assert!(bipartite_inequality_check(&half, &half, 3, &col, &Partition::row(3)).is_err());
    }
}
