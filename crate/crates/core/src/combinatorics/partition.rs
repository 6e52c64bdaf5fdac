use std::fmt;

use crate::error::{Error, Result};

/// Distance from an integer below which a floating value is treated as that
/// integer before taking a ceiling.
pub const SNAP_TOL: f64 = 1e-9;

/// Tolerance on the total mass of a [`Spectrum`].
pub const SPECTRUM_SUM_TOL: f64 = 1e-12;

/// A partition: a weakly decreasing sequence of positive integers.
///
/// Stored without trailing zeros; use [`Partition::padded`] when a fixed
/// length `d` is needed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Builds a partition, dropping trailing zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// The single-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self(vec![n])
        }
    }

    /// The single-column partition `(1, ..., 1)`.
    pub fn column(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Zero-padded to length `d`, or `None` when the partition is longer.
    pub fn padded(&self, d: usize) -> Option<Vec<usize>> {
        if self.0.len() > d {
            return None;
        }
        let mut v = self.0.clone();
        v.resize(d, 0);
        Some(v)
    }

    pub fn conjugate(&self) -> Self {
        let first = self.part(0);
        Self(
            (0..first)
                .map(|j| self.0.iter().filter(|&&p| p > j).count())
                .collect(),
        )
    }

    /// Young-diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Adds `extra` boxes to the first row.
    pub fn with_first_row_extended(&self, extra: usize) -> Self {
        if extra == 0 {
            return self.clone();
        }
        let mut v = self.0.clone();
        if v.is_empty() {
            v.push(extra);
        } else {
            v[0] += extra;
        }
        Self(v)
    }

    /// Multiplicities `m_i` of each part size `i` (index 0 unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.part(0) + 1];
        for &p in &self.0 {
            m[p] += 1;
        }
        m
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

/// A weakly decreasing sequence of non-negative reals.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedCone(Vec<f64>);

impl SortedCone {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(*v >= 0.0)) || values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotSorted(values));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Finite differences `(x_1 - x_2, ..., x_{d-1} - x_d, x_d)`.
    pub fn delta(&self) -> Vec<f64> {
        let d = self.0.len();
        (0..d)
            .map(|i| {
                if i + 1 < d {
                    self.0[i] - self.0[i + 1]
                } else {
                    self.0[i]
                }
            })
            .collect()
    }

    pub fn from_partition(lambda: &Partition, d: usize) -> Result<Self> {
        let padded = lambda.padded(d).ok_or(Error::SizeMismatch {
            expected: d,
            found: lambda.len(),
        })?;
        Ok(Self(padded.into_iter().map(|p| p as f64).collect()))
    }
}

/// A sorted probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty".into()));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::NegativeEntry { index, value });
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotSorted(values));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(Error::InvalidSpectrum(format!("entries sum to {total}")));
        }
        Ok(Self(values))
    }

    /// Sorts descending before validating.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(|a, b| b.total_cmp(a));
        Self::new(values)
    }

    /// Eigenvalues of a density operator: entries in `[-tol, 0)` are clamped
    /// to zero and the result renormalized.
    pub fn from_eigenvalues(values: &[f64], tol: f64) -> Result<Self> {
        let mut v = Vec::with_capacity(values.len());
        for (index, &x) in values.iter().enumerate() {
            if x < -tol {
                return Err(Error::NegativeEntry { index, value: x });
            }
            v.push(x.max(0.0));
        }
        let total: f64 = v.iter().sum();
        if (total - 1.0).abs() > tol.max(SPECTRUM_SUM_TOL) {
            return Err(Error::InvalidSpectrum(format!("entries sum to {total}")));
        }
        v.iter_mut().for_each(|x| *x /= total);
        v.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(v))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn padded(&self, d: usize) -> Vec<f64> {
        let mut v = self.0.clone();
        if v.len() < d {
            v.resize(d, 0.0);
        }
        v
    }

    pub fn as_cone(&self) -> SortedCone {
        SortedCone(self.0.clone())
    }
}

/// Ceiling after snapping values within [`SNAP_TOL`] of an integer.
pub fn snapped_ceil(v: f64) -> i64 {
    let r = v.round();
    if (v - r).abs() <= SNAP_TOL {
        r as i64
    } else {
        v.ceil() as i64
    }
}

/// Finite differences of a weakly decreasing non-negative sequence.
pub fn delta_map(x: &[f64]) -> Result<Vec<f64>> {
    Ok(SortedCone::new(x.to_vec())?.delta())
}

/// Suffix sums of a non-negative sequence; inverse of [`delta_map`].
pub fn gamma_map(y: &[f64]) -> Result<SortedCone> {
    if let Some((index, &value)) = y.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        return Err(Error::NegativeEntry { index, value });
    }
    let mut out = vec![0.0; y.len()];
    let mut acc = 0.0;
    for i in (0..y.len()).rev() {
        acc += y[i];
        out[i] = acc;
    }
    Ok(SortedCone(out))
}

/// The partition `λ` with `δ_i(λ) = ⌈δ_i(n·s)⌉`.
///
/// Satisfies `n ≤ |λ| ≤ n + C(d+1, 2) - 1`, `0 ≤ λ_i - n s_i < d - i + 1`,
/// and preserves every degeneracy of `s`. `n = 0` gives the empty partition.
pub fn approximate_spectrum(s: &Spectrum, n: u64) -> Partition {
    let scaled: Vec<f64> = s.values().iter().map(|v| v * n as f64).collect();
    let d = scaled.len();
    let mut parts = vec![0usize; d];
    let mut acc = 0usize;
    for i in (0..d).rev() {
        let diff = if i + 1 < d {
            scaled[i] - scaled[i + 1]
        } else {
            scaled[i]
        };
        acc += snapped_ceil(diff).max(0) as usize;
        parts[i] = acc;
    }
    Partition::new(parts).expect("suffix sums of non-negative integers are decreasing")
}

/// All partitions of `n` with at most `d` parts, lexicographically descending.
pub fn enumerate_partitions(n: usize, d: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            if p * slots < remaining {
                break;
            }
            cur.push(p);
            rec(remaining - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, d, &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
