//! Dimensions and characters of symmetric-group and general-linear-group
//! irreducibles.

use std::collections::HashMap;

use super::partition::{factorial, Partition};
use crate::error::{Error, Result};

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn hook_lengths(lambda: &Partition) -> Vec<(usize, usize, usize)> {
    let conj = lambda.conjugate();
    let mut out = Vec::with_capacity(lambda.size());
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = conj.part(j) - i - 1;
            out.push((i, j, arm + leg + 1));
        }
    }
    out
}

/// Number of standard Young tableaux of shape `λ` (hook-length formula).
pub fn dim_specht(lambda: &Partition) -> u128 {
    let mut num = factorial(lambda.size());
    let mut den: u128 = 1;
    for (_, _, h) in hook_lengths(lambda) {
        den *= h as u128;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

/// Dimension of the `GL(d)` irreducible with highest weight `λ`
/// (hook-content formula); zero when `ℓ(λ) > d`.
pub fn dim_weyl(lambda: &Partition, d: usize) -> u128 {
    if lambda.len() > d {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for (i, j, h) in hook_lengths(lambda) {
        num *= (d + j - i) as u128;
        den *= h as u128;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    debug_assert_eq!(den, 1);
    num / den
}

fn beta_set(shape: &[usize]) -> Vec<usize> {
    let l = shape.len();
    shape.iter().enumerate().map(|(i, &p)| p + l - 1 - i).collect()
}

fn shape_from_beta(mut beta: Vec<usize>) -> Vec<usize> {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let l = beta.len();
    let mut parts: Vec<usize> = beta.iter().enumerate().map(|(i, &b)| b - (l - 1 - i)).collect();
    while parts.last() == Some(&0) {
        parts.pop();
    }
    parts
}

fn murnaghan_nakayama(shape: &[usize], cycles: &[usize], memo: &mut HashMap<(Vec<usize>, usize), i64>) -> i64 {
    let Some((&r, rest)) = cycles.split_first() else {
        return i64::from(shape.is_empty());
    };
    let key = (shape.to_vec(), cycles.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let beta = beta_set(shape);
    let mut total = 0;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r {
            continue;
        }
        let nb = b - r;
        if beta.contains(&nb) {
            continue;
        }
        // leg length of the removed rim hook
        let between = beta.iter().filter(|&&x| x > nb && x < b).count();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        let mut next = beta.clone();
        next[idx] = nb;
        total += sign * murnaghan_nakayama(&shape_from_beta(next), rest, memo);
    }
    memo.insert(key, total);
    total
}

/// Irreducible character `χ^λ` on the class of the given cycle type,
/// by the Murnaghan–Nakayama rule.
pub fn character(lambda: &Partition, cycle_type: &Partition) -> Result<i64> {
    if lambda.size() != cycle_type.size() {
        return Err(Error::SizeMismatch {
            expected: lambda.size(),
            found: cycle_type.size(),
        });
    }
    let mut memo = HashMap::new();
    Ok(murnaghan_nakayama(lambda.parts(), cycle_type.parts(), &mut memo))
}

/// Order of the centralizer of a permutation with this cycle type,
/// `z_μ = Π_i i^{m_i} m_i!`.
pub fn centralizer_order(cycle_type: &Partition) -> u128 {
    cycle_type
        .multiplicities()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &m)| (i as u128).pow(m as u32) * factorial(m))
        .product()
}

/// Number of permutations in `S_k` with the given cycle type.
pub fn class_size(cycle_type: &Partition) -> u128 {
    factorial(cycle_type.size()) / centralizer_order(cycle_type)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_partitions;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn specht_examples() {
        assert_eq!(dim_specht(&part(&[5])), 1);
        assert_eq!(dim_specht(&part(&[1, 1, 1, 1])), 1);
        assert_eq!(dim_specht(&part(&[2, 1])), 2);
        assert_eq!(dim_specht(&part(&[3, 2])), 5);
        assert_eq!(dim_specht(&part(&[4, 2, 1])), 35);
    }

    #[test]
    fn standard_tableaux_brute_force() {
        // count fillings by repeatedly removing a corner holding the largest entry
        fn count(shape: &mut Vec<usize>) -> u128 {
            if shape.is_empty() {
                return 1;
            }
            let mut total = 0;
            for i in 0..shape.len() {
                let is_corner = i + 1 == shape.len() || shape[i + 1] < shape[i];
                if is_corner {
                    shape[i] -= 1;
                    let popped = shape[i] == 0;
                    if popped {
                        shape.pop();
                    }
                    total += count(shape);
                    if popped {
                        shape.push(0);
                    }
                    shape[i] += 1;
                }
            }
            total
        }
        for k in 1..=7 {
            for lam in enumerate_partitions(k, k) {
                assert_eq!(dim_specht(&lam), count(&mut lam.parts().to_vec()), "{lam}");
            }
        }
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(dim_weyl(&part(&[2]), 2), 3);
        assert_eq!(dim_weyl(&part(&[1, 1]), 2), 1);
        assert_eq!(dim_weyl(&part(&[2, 1]), 2), 2);
        assert_eq!(dim_weyl(&part(&[1, 1, 1]), 2), 0);
        assert_eq!(dim_weyl(&part(&[2, 1]), 3), 8);
    }

    #[test]
    fn character_examples() {
        for k in 1..=5 {
            for mu in enumerate_partitions(k, k) {
                assert_eq!(character(&Partition::row(k), &mu).unwrap(), 1);
            }
        }
        assert_eq!(character(&part(&[1, 1]), &part(&[2])).unwrap(), -1);
        assert_eq!(character(&part(&[2, 1]), &part(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(character(&part(&[2, 1]), &part(&[3])).unwrap(), -1);
        assert_eq!(character(&part(&[2, 1]), &part(&[2, 1])).unwrap(), 0);
        assert!(character(&part(&[2, 1]), &part(&[2])).is_err());
    }

    #[test]
    fn character_at_identity_is_dimension() {
        for k in 1..=7 {
            for lam in enumerate_partitions(k, k) {
                let chi = character(&lam, &Partition::column(k)).unwrap();
                assert_eq!(chi as u128, dim_specht(&lam));
            }
        }
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for k in 1..=8 {
            let total: u128 = enumerate_partitions(k, k).iter().map(class_size).sum();
            assert_eq!(total, factorial(k));
        }
    }
}
