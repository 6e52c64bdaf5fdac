mod common;

use qmarginal::diagram::{contract_scenario_permutation, trace_permutation_wires_with_dim, Perm};
use qmarginal::scenario::{JointContext, MarginalScenario};

use common::{dense_partial_trace, residual_operator, Layout};

#[test]
fn wire_traces_match_dense_for_every_permutation() {
    for k in 1..=4 {
        for d in 1..=3 {
            for mask in 0..(1u32 << k) {
                let traced: Vec<bool> = (0..k).map(|t| mask >> t & 1 == 1).collect();
                let layout = Layout::uniform(d, &traced);
                for perm in Perm::all(k) {
                    let (coeff, residual) = trace_permutation_wires_with_dim(&perm, &traced, d);
                    assert_eq!(
                        residual_operator(&layout, coeff, &[residual]),
                        dense_partial_trace(&layout, &perm),
                        "k={k} d={d} traced={traced:?} perm={perm:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn scenario_contractions_match_dense_with_mixed_dims() {
    let cases: [(&[(&str, usize)], &[&str], usize); 5] = [
        (&[("A", 3), ("B", 2)], &["B", "AB"], 2),
        (&[("A", 2), ("B", 3), ("C", 2)], &["AC", "B"], 2),
        (&[("A", 3), ("B", 2), ("C", 2)], &["AB", "AC", "BC"], 1),
        (&[("A", 2), ("B", 3)], &["A", "A", "B"], 1),
        (&[("A", 2), ("B", 2), ("C", 2)], &["ABC", "A"], 2),
    ];
    for (dims, contexts, n) in cases {
        let s = MarginalScenario::from_compact(JointContext::new(dims.iter().copied()).unwrap(), contexts).unwrap();
        let layout = Layout::scenario(&s, n);
        for perm in Perm::all(n * s.m()) {
            let (coeff, residuals) = contract_scenario_permutation(&s, n, &perm).unwrap();
            assert_eq!(
                residual_operator(&layout, coeff, &residuals),
                dense_partial_trace(&layout, &perm),
                "{s} n={n} perm={perm:?}"
            );
        }
    }
}
