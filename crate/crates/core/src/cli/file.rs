//! JSON input files. Complex entries are `[re, im]` pairs.

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::HermitianOperator;
use crate::scenario::{JointContext, MarginalScenario, ProductState};

/// Hermiticity tolerance for matrices read from files.
pub const FILE_HERMITICITY_TOL: f64 = 1e-10;

/// Square complex matrix as rows of `[re, im]` pairs.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsystemSpec {
    pub label: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub subsystems: Vec<SubsystemSpec>,
    pub contexts: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<ComplexRows>>,
}

/// Two states on the same space, for the `keyl` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatePairFile {
    pub rho: ComplexRows,
    pub sigma: ComplexRows,
}

pub fn matrix_from_rows(rows: &ComplexRows) -> Result<HermitianOperator> {
    let d = rows.len();
    if d == 0 {
        return Err(Error::Input("empty matrix".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::Input(format!("matrix is not square: row of length {} in a {d}-row matrix", bad.len())));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Input("matrix has a non-finite entry".into()));
    }
    let mat = Mat::from_fn(d, d, |i, j| c64::new(rows[i][j][0], rows[i][j][1]));
    HermitianOperator::with_tolerance(mat, FILE_HERMITICITY_TOL)
}

pub fn rows_from_matrix(op: &HermitianOperator) -> ComplexRows {
    let d = op.dim();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let z = op.get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed scenario file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn scenario(&self) -> Result<MarginalScenario> {
        let joint = JointContext::new(self.subsystems.iter().map(|s| (s.label.clone(), s.dim)))?;
        MarginalScenario::new(joint, &self.contexts)
    }

    /// The product state, or `None` when the file carries no states.
    pub fn product_state(&self, scenario: &MarginalScenario) -> Result<Option<ProductState>> {
        let Some(states) = &self.states else {
            return Ok(None);
        };
        let factors = states.iter().map(matrix_from_rows).collect::<Result<Vec<_>>>()?;
        ProductState::new(scenario, factors).map(Some)
    }

    /// Inverse of [`ScenarioFile::scenario`] / [`ScenarioFile::product_state`].
    pub fn from_parts(scenario: &MarginalScenario, state: Option<&ProductState>) -> Self {
        let joint = scenario.joint();
        let labels: Vec<&str> = joint.subsystems().iter().map(|s| s.label.as_str()).collect();
        Self {
            subsystems: joint
                .subsystems()
                .iter()
                .map(|s| SubsystemSpec {
                    label: s.label.clone(),
                    dim: s.dim,
                })
                .collect(),
            contexts: scenario
                .contexts()
                .iter()
                .map(|c| c.iter().map(|&x| labels[x].to_string()).collect())
                .collect(),
            states: state.map(|p| p.factors().iter().map(rows_from_matrix).collect()),
        }
    }
}

impl StatePairFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed state-pair file: {e}")))
    }

    pub fn states(&self) -> Result<(HermitianOperator, HermitianOperator)> {
        Ok((matrix_from_rows(&self.rho)?, matrix_from_rows(&self.sigma)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIPLE: &str = r#"{
        "subsystems": [{"label": "A", "dim": 2}, {"label": "B", "dim": 2}],
        "contexts": [["A"], ["B"]],
        "states": [
            [[[0.5, 0], [0, -0.5]], [[0, 0.5], [0.5, 0]]],
            [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]
        ]
    }"#;

    #[test]
    fn round_trip() {
        let f = ScenarioFile::parse(TRIPLE).unwrap();
        let s = f.scenario().unwrap();
        let p = f.product_state(&s).unwrap().unwrap();
        let back = ScenarioFile::parse(&ScenarioFile::from_parts(&s, Some(&p)).to_json()).unwrap();
        assert_eq!(back.subsystems, f.subsystems);
        assert_eq!(back.contexts, f.contexts);
        let p2 = back.product_state(&back.scenario().unwrap()).unwrap().unwrap();
        for (a, b) in p.factors().iter().zip(p2.factors()) {
            assert!(a.max_abs_diff(b) <= 1e-15);
        }
    }

    #[test]
    fn errors_name_the_position() {
        let e = ScenarioFile::parse("{\"subsystems\": [}").unwrap_err().to_string();
        assert!(e.contains("line 1"), "{e}");
        let ragged = TRIPLE.replace("[[1, 0], [0, 0]], [[0, 0], [0, 0]]", "[[1, 0]], [[0, 0], [0, 0]]");
        let f = ScenarioFile::parse(&ragged).unwrap();
        assert!(f.product_state(&f.scenario().unwrap()).is_err());
    }

    #[test]
    fn rejects_non_hermitian() {
        let rows = vec![vec![[0.5, 0.0], [0.1, 0.0]], vec![[0.0, 0.0], [0.5, 0.0]]];
        assert!(matrix_from_rows(&rows).is_err());
    }
}
