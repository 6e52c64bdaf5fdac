//! Partial traces of permutation operators, evaluated by loop counting.
//!
//! The nm wires of `H_J^{⊗nm}` are numbered `t = b·m + i` (block `b`, slot
//! `i`, both 0-based). Tracing out the labels missing from each slot's
//! context turns `T_J(π)` into a product over labels of smaller permutation
//! operators times a power of each dimension.

mod perm;

use std::collections::BTreeMap;

use faer::{c64, Mat};

pub use perm::Perm;

use crate::combinatorics::{factorial, Partition};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::operators::HermitianOperator;
use crate::parallel::{fold_range, for_each_chunk_mut, Execution};
use crate::scenario::MarginalScenario;

/// Traces the wires flagged in `traced` out of `T(π)` on `(C^d)^{⊗k}`.
///
/// Returns the number of cycles of `π` lying entirely in traced wires (each
/// contributes a factor `d`) and the first-return permutation on the kept
/// wires, renumbered in increasing order.
pub fn trace_permutation_wires(perm: &Perm, traced: &[bool]) -> (u32, Perm) {
    let k = perm.len();
    assert_eq!(traced.len(), k);
    let mut position = vec![usize::MAX; k];
    let mut kept = 0;
    for j in 0..k {
        if !traced[j] {
            position[j] = kept;
            kept += 1;
        }
    }
    let mut images = vec![0usize; kept];
    for j in (0..k).filter(|&j| !traced[j]) {
        let mut x = perm.image(j);
        while traced[x] {
            x = perm.image(x);
        }
        images[position[j]] = position[x];
    }
    let loops = perm
        .cycles()
        .iter()
        .filter(|c| c.iter().all(|&j| traced[j]))
        .count() as u32;
    (loops, Perm::new(images).expect("first-return map is a bijection"))
}

/// `(d^c, residual)` form of [`trace_permutation_wires`].
pub fn trace_permutation_wires_with_dim(perm: &Perm, traced: &[bool], d: usize) -> (u128, Perm) {
    let (loops, residual) = trace_permutation_wires(perm, traced);
    ((d as u128).pow(loops), residual)
}

/// Wire layout of `Tr^{⊗n}_{mJ\M}` for one scenario and order.
#[derive(Debug, Clone)]
pub struct WireLayout {
    /// `traced[x][t]`: label `x` is traced on wire `t`.
    traced: Vec<Vec<bool>>,
    dims: Vec<usize>,
    n: usize,
    m: usize,
}

impl WireLayout {
    pub fn new(scenario: &MarginalScenario, n: usize) -> Self {
        let m = scenario.m();
        let labels = scenario.joint().len();
        let traced = (0..labels)
            .map(|x| (0..n * m).map(|t| !scenario.contexts()[t % m].contains(&x)).collect())
            .collect();
        Self {
            traced,
            dims: scenario.joint().dims(),
            n,
            m,
        }
    }

    pub fn wires(&self) -> usize {
        self.n * self.m
    }

    pub fn labels(&self) -> usize {
        self.dims.len()
    }

    /// Kept wires of label `x`, increasing.
    pub fn kept_wires(&self, x: usize) -> Vec<usize> {
        (0..self.wires()).filter(|&t| !self.traced[x][t]).collect()
    }

    /// Contracts `T_J(π)`: returns the scalar coefficient and one residual
    /// permutation per label.
    pub fn contract(&self, perm: &Perm) -> (u128, Vec<Perm>) {
        let mut coeff: u128 = 1;
        let residuals = self
            .traced
            .iter()
            .zip(&self.dims)
            .map(|(traced, &d)| {
                let (c, r) = trace_permutation_wires_with_dim(perm, traced, d);
                coeff *= c;
                r
            })
            .collect();
        (coeff, residuals)
    }
}

/// `Tr^{⊗n}_{mJ\M}(T_J(π))` as a coefficient and per-label residuals.
pub fn contract_scenario_permutation(scenario: &MarginalScenario, n: usize, perm: &Perm) -> Result<(u128, Vec<Perm>)> {
    let layout = WireLayout::new(scenario, n);
    if perm.len() != layout.wires() {
        return Err(Error::SizeMismatch {
            expected: layout.wires(),
            found: perm.len(),
        });
    }
    Ok(layout.contract(perm))
}

/// `Σ_key (numerator_key / denominator) ⊗_X T_X(residual_X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermTermSum {
    terms: BTreeMap<Vec<Perm>, i128>,
    denominator: u128,
    scenario: MarginalScenario,
    n: usize,
}

impl PermTermSum {
    pub fn terms(&self) -> &BTreeMap<Vec<Perm>, i128> {
        &self.terms
    }

    pub fn denominator(&self) -> u128 {
        self.denominator
    }

    pub fn scenario(&self) -> &MarginalScenario {
        &self.scenario
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Numerator of the trace over the common denominator.
    pub fn trace_numerator(&self) -> i128 {
        let dims = self.scenario.joint().dims();
        self.terms
            .iter()
            .map(|(key, &c)| {
                let t: i128 = key
                    .iter()
                    .zip(&dims)
                    .map(|(p, &d)| (d as i128).pow(p.num_cycles() as u32))
                    .product();
                c * t
            })
            .sum()
    }

    /// Whether the trace equals `value` exactly.
    pub fn trace_equals(&self, value: u128) -> bool {
        self.trace_numerator() == (value * self.denominator) as i128
    }

    pub fn trace(&self) -> f64 {
        self.trace_numerator() as f64 / self.denominator as f64
    }

    /// Dimension `d_M^n` of the materialized operator.
    pub fn dim(&self) -> u128 {
        self.scenario.product_dim_power(self.n)
    }

    /// Real matrix on `H_M^{⊗n}`; composite index order is block, slot,
    /// then label in joint order.
    pub fn materialize_real(&self, exec: Execution, limits: &Limits) -> Result<Mat<f64>> {
        let dim128 = self.dim();
        limits.check_dense(dim128)?;
        let dim = dim128 as usize;
        let layout = WireLayout::new(&self.scenario, self.n);
        let dims = self.scenario.joint().dims();

        // digit slots of the composite index: (wire, label) pairs
        let mut slot_dims = Vec::new();
        let mut slot_of: Vec<Vec<usize>> = vec![Vec::new(); dims.len()];
        for t in 0..layout.wires() {
            for &x in &self.scenario.contexts()[t % layout.m] {
                slot_of[x].push(slot_dims.len());
                slot_dims.push(dims[x]);
            }
        }
        let mut weight = vec![0usize; slot_dims.len()];
        let mut acc = 1;
        for s in (0..slot_dims.len()).rev() {
            weight[s] = acc;
            acc *= slot_dims[s];
        }
        let mixed_digits = |mut idx: usize| -> Vec<usize> {
            let mut out = vec![0; slot_dims.len()];
            for s in (0..slot_dims.len()).rev() {
                out[s] = idx % slot_dims[s];
                idx /= slot_dims[s];
            }
            out
        };

        // per term and per label: map from input slot to output slot
        let terms: Vec<(Vec<(usize, usize)>, f64)> = self
            .terms
            .iter()
            .map(|(key, &c)| {
                let mut moves = Vec::new();
                for (x, res) in key.iter().enumerate() {
                    for (p, &slot) in slot_of[x].iter().enumerate() {
                        moves.push((slot, slot_of[x][res.image(p)]));
                    }
                }
                (moves, c as f64)
            })
            .collect();

        let denom = self.denominator as f64;
        let mut data = vec![0.0f64; dim * dim];
        for_each_chunk_mut(exec, &mut data, dim, |col, column| {
            let input = mixed_digits(col);
            for (moves, c) in &terms {
                let row: usize = moves.iter().map(|&(from, to)| input[from] * weight[to]).sum();
                column[row] += c;
            }
            column.iter_mut().for_each(|v| *v /= denom);
        });
        Ok(Mat::from_fn(dim, dim, |i, j| data[j * dim + i]))
    }

    pub fn materialize(&self, exec: Execution, limits: &Limits) -> Result<HermitianOperator> {
        let real = self.materialize_real(exec, limits)?;
        Ok(HermitianOperator::from_mat_symmetrized(Mat::from_fn(
            real.nrows(),
            real.ncols(),
            |i, j| c64::new(real[(i, j)], 0.0),
        )))
    }
}

/// `Σ_{π ∈ S_{nm}} w(π) Tr^{⊗n}_{mJ\M}(T_J(π)) / denominator`, collected by
/// residual key. `weight` receives the cycle type of `π`.
pub fn weighted_contraction<F>(
    scenario: &MarginalScenario,
    n: usize,
    denominator: u128,
    weight: F,
    exec: Execution,
    limits: &Limits,
) -> Result<PermTermSum>
where
    F: Fn(&Partition) -> i128 + Sync + Send,
{
    if n == 0 {
        return Err(Error::Input("order n must be positive".into()));
    }
    let k = n * scenario.m();
    limits.check_nm(k)?;
    let layout = WireLayout::new(scenario, n);
    let merge = |mut a: BTreeMap<Vec<Perm>, i128>, b: BTreeMap<Vec<Perm>, i128>| {
        let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, std::mem::take(&mut a)) };
        for (key, c) in small {
            *big.entry(key).or_insert(0) += c;
        }
        big
    };
    let mut terms = fold_range(
        exec,
        factorial(k),
        BTreeMap::new,
        |mut acc: BTreeMap<Vec<Perm>, i128>, rank| {
            let perm = Perm::from_rank(k, rank);
            let w = weight(&perm.cycle_type());
            if w != 0 {
                let (coeff, residuals) = layout.contract(&perm);
                *acc.entry(residuals).or_insert(0) += w * coeff as i128;
            }
            acc
        },
        merge,
    );
    terms.retain(|_, c| *c != 0);
    Ok(PermTermSum {
        terms,
        denominator,
        scenario: scenario.clone(),
        n,
    })
}

/// `Tr^{⊗n}_{mJ\M}(Π^{(nm)}_J)` with the symmetrizer written as the uniform
/// average over `S_{nm}`.
pub fn symmetrizer_contraction(
    scenario: &MarginalScenario,
    n: usize,
    exec: Execution,
    limits: &Limits,
) -> Result<PermTermSum> {
    let k = n * scenario.m();
    limits.check_nm(k)?;
    weighted_contraction(scenario, n, factorial(k), |_| 1, exec, limits)
}
