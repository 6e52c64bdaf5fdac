use std::collections::BTreeMap;

use faer::{c64, Mat};

use super::hermitian::HermitianOperator;
use crate::combinatorics::{character, dim_specht, factorial, Partition};
use crate::diagram::Perm;
use crate::error::{Error, Result};
use crate::limits::{pow_sat, Limits};

/// Orthonormality tolerance for subspace bases.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Base-`d` digits of `index`, most significant first, `k` digits.
pub fn digits(mut index: usize, d: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in (0..k).rev() {
        out[slot] = index % d;
        index /= d;
    }
    out
}

pub fn from_digits(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// Column `input` of `T(π)`: the row index of its single unit entry.
pub fn permuted_index(perm: &Perm, d: usize, input: usize) -> usize {
    let k = perm.len();
    let inp = digits(input, d, k);
    let mut out = vec![0; k];
    perm.permute_factors(&inp, &mut out);
    from_digits(&out, d)
}

/// `T(π)` on `(C^d)^{⊗k}`: output factor `π(j)` receives input factor `j`.
pub fn permutation_matrix(perm: &Perm, d: usize) -> Mat<f64> {
    let dim = d.pow(perm.len() as u32);
    let mut m = Mat::zeros(dim, dim);
    for col in 0..dim {
        m[(permuted_index(perm, d, col), col)] = 1.0;
    }
    m
}

/// `T(π) v`.
pub fn permute_vector(perm: &Perm, d: usize, v: &[c64]) -> Vec<c64> {
    let mut out = vec![c64::new(0.0, 0.0); v.len()];
    for (col, &x) in v.iter().enumerate() {
        out[permuted_index(perm, d, col)] = x;
    }
    out
}

fn check_dense_power(d: usize, k: usize, limits: &Limits) -> Result<usize> {
    let dim = pow_sat(d, k);
    limits.check_dense(dim)?;
    Ok(dim as usize)
}

fn real_to_operator(m: Mat<f64>) -> HermitianOperator {
    HermitianOperator::from_mat_symmetrized(Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        c64::new(m[(i, j)], 0.0)
    }))
}

/// Projector onto the symmetric subspace of `(C^d)^{⊗k}`.
///
/// Entry `(r, c)` of `(1/k!) Σ_π T(π)` is `Π_a m_a! / k!` when the digit
/// multisets of `r` and `c` agree (multiplicities `m_a`), otherwise zero.
pub fn sym_projector(d: usize, k: usize, limits: &Limits) -> Result<HermitianOperator> {
    let dim = check_dense_power(d, k, limits)?;
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for idx in 0..dim {
        let mut key = vec![0usize; d];
        for x in digits(idx, d, k) {
            key[x] += 1;
        }
        groups.entry(key).or_default().push(idx);
    }
    let kf = factorial(k) as f64;
    let mut m = Mat::<f64>::zeros(dim, dim);
    for (counts, members) in &groups {
        let stab: u128 = counts.iter().map(|&c| factorial(c)).product();
        let value = stab as f64 / kf;
        for &r in members {
            for &c in members {
                m[(r, c)] = value;
            }
        }
    }
    Ok(real_to_operator(m))
}

/// Exact integer sum `Σ_π w(π) T(π)` over `S_k`.
/// Column-major, `d^k × d^k`.
fn weighted_permutation_sum<F>(d: usize, k: usize, limits: &Limits, mut weight: F) -> Result<(usize, Vec<i64>)>
where
    F: FnMut(&Perm) -> i64,
{
    let dim = check_dense_power(d, k, limits)?;
    limits.check_nm(k)?;
    let mut acc = vec![0i64; dim * dim];
    for perm in Perm::all(k) {
        let w = weight(&perm);
        if w == 0 {
            continue;
        }
        for col in 0..dim {
            acc[col * dim + permuted_index(&perm, d, col)] += w;
        }
    }
    Ok((dim, acc))
}

/// Projector onto the `λ`-isotypic component of `(C^d)^{⊗k}`, `k = |λ|`,
/// from the central idempotent `(dim S^λ / k!) Σ_π χ^λ(π) T(π)`.
pub fn isotypic_projector(lambda: &Partition, d: usize, limits: &Limits) -> Result<HermitianOperator> {
    let k = lambda.size();
    let mut chars = BTreeMap::new();
    let (dim, sum) = weighted_permutation_sum(d, k, limits, |p| {
        let ct = p.cycle_type();
        *chars
            .entry(ct.clone())
            .or_insert_with(|| character(lambda, &ct).expect("sizes agree"))
    })?;
    let scale = dim_specht(lambda) as f64 / factorial(k) as f64;
    Ok(real_to_operator(Mat::from_fn(dim, dim, |i, j| sum[j * dim + i] as f64 * scale)))
}

fn inner(a: &[c64], b: &[c64]) -> c64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[c64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormalizes `candidates` by modified Gram–Schmidt with one
/// re-orthogonalization pass; vectors whose residual norm falls below
/// `ORTHONORMAL_TOL` are dropped.
pub fn orthonormalize(candidates: Vec<Vec<c64>>) -> Vec<Vec<c64>> {
    let mut basis: Vec<Vec<c64>> = Vec::new();
    for mut v in candidates {
        let start = norm(&v);
        if start == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for u in &basis {
                let c = inner(u, &v);
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = norm(&v);
        if n > ORTHONORMAL_TOL * start.max(1.0) {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    basis
}

/// Projector onto `∨^k V` inside `(C^{d})^{⊗k}`, where `basis` is an
/// orthonormal basis of `V ⊆ C^d`.
pub fn subspace_sym_projector(basis: &[Vec<c64>], k: usize, limits: &Limits) -> Result<HermitianOperator> {
    let Some(first) = basis.first() else {
        return Err(Error::Input("empty subspace basis".into()));
    };
    let d = first.len();
    for v in basis {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    let mut dev: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((inner(a, b) - c64::new(target, 0.0)).norm());
        }
    }
    if dev > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    let dim = check_dense_power(d, k, limits)?;
    limits.check_nm(k)?;

    // one symmetrized product per multiset of basis indices
    let r = basis.len();
    let mut candidates = Vec::new();
    let mut choice = vec![0usize; k];
    loop {
        let mut product = vec![c64::new(1.0, 0.0)];
        for &c in &choice {
            let mut next = Vec::with_capacity(product.len() * d);
            for &p in &product {
                next.extend(basis[c].iter().map(|&x| p * x));
            }
            product = next;
        }
        let mut sym = vec![c64::new(0.0, 0.0); dim];
        for perm in Perm::all(k) {
            for (s, t) in sym.iter_mut().zip(permute_vector(&perm, d, &product)) {
                *s += t;
            }
        }
        candidates.push(sym);

        // next non-decreasing tuple
        let mut pos = k;
        while pos > 0 && choice[pos - 1] == r - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        let v = choice[pos - 1] + 1;
        for c in &mut choice[pos - 1..] {
            *c = v;
        }
    }
    let ortho = orthonormalize(candidates);
    let cols = Mat::from_fn(dim, ortho.len(), |i, j| ortho[j][i]);
    Ok(HermitianOperator::gram(&cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{binomial, dim_weyl, enumerate_partitions};

    fn approx_eq(a: &HermitianOperator, b: &HermitianOperator, tol: f64) -> bool {
        a.dim() == b.dim() && a.max_abs_diff(b) <= tol
    }

    fn rank(p: &HermitianOperator) -> f64 {
        p.trace()
    }

    fn is_projector(p: &HermitianOperator, tol: f64) -> bool {
        let sq = HermitianOperator::from_mat_symmetrized(p.as_mat() * p.as_mat());
        approx_eq(&sq, p, tol)
    }

    fn permutation_sum_oracle(d: usize, k: usize) -> HermitianOperator {
        let dim = d.pow(k as u32);
        let mut acc = Mat::<f64>::zeros(dim, dim);
        for p in Perm::all(k) {
            acc += permutation_matrix(&p, d);
        }
        let kf = factorial(k) as f64;
        real_to_operator(Mat::from_fn(dim, dim, |i, j| acc[(i, j)] / kf))
    }

    #[test]
    fn sym_projector_matches_permutation_average() {
        let limits = Limits::default();
        for d in 1..=3 {
            for k in 1..=4 {
                let p = sym_projector(d, k, &limits).unwrap();
                assert!(approx_eq(&p, &permutation_sum_oracle(d, k), 1e-14), "d={d} k={k}");
                assert!((p.trace() - binomial(k + d - 1, k) as f64).abs() < 1e-12);
                assert!(is_projector(&p, 1e-12));
            }
        }
        let ev = sym_projector(2, 2, &limits).unwrap().eigenvalues().unwrap();
        for (a, b) in ev.iter().zip([0.0, 1.0, 1.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((sym_projector(3, 2, &limits).unwrap().trace() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn sym_projector_absorbs_permutations() {
        let limits = Limits::default();
        for k in 1..=4 {
            let p = sym_projector(2, k, &limits).unwrap();
            let pm = p.as_mat();
            for perm in Perm::all(k) {
                let t = permutation_matrix(&perm, 2);
                let tc = Mat::from_fn(t.nrows(), t.ncols(), |i, j| c64::new(t[(i, j)], 0.0));
                let left = pm * &tc;
                let right = &tc * pm;
                for j in 0..pm.ncols() {
                    for i in 0..pm.nrows() {
                        assert!((left[(i, j)] - pm[(i, j)]).norm() < 1e-13);
                        assert!((right[(i, j)] - left[(i, j)]).norm() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn isotypic_examples() {
        let limits = Limits::default();
        let row = isotypic_projector(&Partition::row(3), 2, &limits).unwrap();
        assert!(approx_eq(&row, &sym_projector(2, 3, &limits).unwrap(), 1e-14));

        let anti = isotypic_projector(&Partition::column(2), 2, &limits).unwrap();
        assert!((rank(&anti) - 1.0).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = [c64::new(0.0, 0.0), c64::new(s, 0.0), c64::new(-s, 0.0), c64::new(0.0, 0.0)];
        assert!((anti.expectation(&singlet) - 1.0).abs() < 1e-12);

        let mixed = isotypic_projector(&Partition::new(vec![2, 1]).unwrap(), 2, &limits).unwrap();
        assert!((rank(&mixed) - 4.0).abs() < 1e-12);
        assert!(is_projector(&mixed, 1e-12));
    }

    #[test]
    fn isotypic_completeness_small() {
        let limits = Limits::default();
        for (k, d) in [(3, 2), (3, 3), (4, 2)] {
            let projs: Vec<_> = enumerate_partitions(k, k)
                .iter()
                .map(|l| (l.clone(), isotypic_projector(l, d, &limits).unwrap()))
                .collect();
            let mut total = HermitianOperator::zeros(d.pow(k as u32));
            for (l, p) in &projs {
                let expected = dim_specht(l) * dim_weyl(l, d);
                assert!((rank(p) - expected as f64).abs() < 1e-10);
                total = total.add(p).unwrap();
            }
            assert!(approx_eq(&total, &HermitianOperator::identity(d.pow(k as u32)), 1e-10));
        }
    }

    #[test]
    fn subspace_projector_examples() {
        let limits = Limits::default();
        let e = |i: usize, d: usize| -> Vec<c64> {
            (0..d).map(|j| c64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()
        };
        let full: Vec<_> = (0..3).map(|i| e(i, 3)).collect();
        let p = subspace_sym_projector(&full, 2, &limits).unwrap();
        assert!(approx_eq(&p, &sym_projector(3, 2, &limits).unwrap(), 1e-12));

        let p = subspace_sym_projector(&[e(0, 2)], 3, &limits).unwrap();
        assert!((rank(&p) - 1.0).abs() < 1e-12);
        assert!((p.get(0, 0).re - 1.0).abs() < 1e-12);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = vec![c64::new(0.0, 0.0), c64::new(s, 0.0), c64::new(-s, 0.0), c64::new(0.0, 0.0)];
        let p = subspace_sym_projector(&[singlet], 2, &limits).unwrap();
        assert!((rank(&p) - 1.0).abs() < 1e-12);
        assert!(is_projector(&p, 1e-12));

        let bad = vec![e(0, 2), vec![c64::new(1.0, 0.0), c64::new(1.0, 0.0)]];
        assert!(matches!(subspace_sym_projector(&bad, 2, &limits), Err(Error::NotOrthonormal(_))));
    }

    #[test]
    fn guards_refuse_large_dimensions() {
        let limits = Limits::default();
        assert!(matches!(sym_projector(2, 13, &limits), Err(Error::GuardExceeded { .. })));
    }
}
