//! Schur polynomials and Littlewood–Richardson coefficients.

use super::partition::Partition;
use crate::error::{Error, Result};

/// Complete homogeneous symmetric polynomials `h_0, ..., h_max` at `x`.
fn complete_homogeneous(x: &[f64], max: usize) -> Vec<f64> {
    let mut h = vec![0.0; max + 1];
    h[0] = 1.0;
    for &xi in x {
        for k in 1..=max {
            h[k] += xi * h[k - 1];
        }
    }
    h
}

fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let pivot = (c..n)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .unwrap();
        if m[pivot][c] == 0.0 {
            return 0.0;
        }
        if pivot != c {
            m.swap(pivot, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            if f != 0.0 {
                for k in c..n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    det
}

/// Schur polynomial `s_λ(x)`.
///
/// Evaluated through the Jacobi–Trudi determinant `det[h_{λ_i - i + j}]`,
/// which stays well defined at repeated arguments where the bialternant
/// quotient degenerates.
pub fn schur_polynomial(lambda: &Partition, x: &[f64]) -> Result<f64> {
    if x.len() < lambda.len() {
        return Err(Error::SizeMismatch {
            expected: lambda.len(),
            found: x.len(),
        });
    }
    let l = lambda.len();
    if l == 0 {
        return Ok(1.0);
    }
    let h = complete_homogeneous(x, lambda.part(0) + l);
    let entry = |k: isize| if k < 0 { 0.0 } else { h[k as usize] };
    let m = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| entry(lambda.part(i) as isize - i as isize + j as isize))
                .collect()
        })
        .collect();
    Ok(determinant(m))
}

/// Littlewood–Richardson coefficient `c^λ_{αβ}`: the number of skew
/// tableaux of shape `λ/α` and content `β` whose reverse reading word is a
/// lattice word.
pub fn lr_coefficient(alpha: &Partition, beta: &Partition, lambda: &Partition) -> u64 {
    if alpha.size() + beta.size() != lambda.size() || !lambda.contains(alpha) || !lambda.contains(beta) {
        return 0;
    }
    // cells in reading order: rows top to bottom, each row right to left
    let cells: Vec<(usize, usize)> = (0..lambda.len())
        .flat_map(|r| (alpha.part(r)..lambda.part(r)).rev().map(move |c| (r, c)))
        .collect();
    let mut filling = vec![vec![0usize; lambda.part(0)]; lambda.len()];
    let mut content = vec![0usize; beta.len() + 1];
    fn go(
        idx: usize,
        cells: &[(usize, usize)],
        alpha: &Partition,
        beta: &Partition,
        lambda: &Partition,
        filling: &mut [Vec<usize>],
        content: &mut [usize],
    ) -> u64 {
        let Some(&(r, c)) = cells.get(idx) else {
            return 1;
        };
        // right neighbour already filled: entries weakly increase along rows
        let max_v = if c + 1 < lambda.part(r) {
            filling[r][c + 1]
        } else {
            beta.len()
        };
        // cell above inside the skew shape: columns strictly increase
        let min_v = if r > 0 && c >= alpha.part(r - 1) {
            filling[r - 1][c] + 1
        } else {
            1
        };
        let mut total = 0;
        for v in min_v..=max_v.min(beta.len()) {
            if content[v] >= beta.part(v - 1) {
                continue;
            }
            if v > 1 && content[v] + 1 > content[v - 1] {
                continue;
            }
            content[v] += 1;
            filling[r][c] = v;
            total += go(idx + 1, cells, alpha, beta, lambda, filling, content);
            content[v] -= 1;
        }
        filling[r][c] = 0;
        total
    }
    go(0, &cells, alpha, beta, lambda, &mut filling, &mut content)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{binomial, dim_specht, dim_weyl, enumerate_partitions};

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn schur_examples() {
        let x = [0.2, 0.5, 0.3];
        assert!((schur_polynomial(&part(&[1]), &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((schur_polynomial(&part(&[2]), &[1.0, 1.0]).unwrap() - 3.0).abs() < 1e-14);
        assert!((schur_polynomial(&part(&[1, 1]), &[0.7, 0.3]).unwrap() - 0.21).abs() < 1e-14);
        assert!(schur_polynomial(&part(&[1, 1, 1]), &[0.5, 0.5]).is_err());
    }

    #[test]
    fn schur_matches_tableau_expansion() {
        // s_(2,1)(x1,x2,x3) = sum over SSYT = m_(2,1) + 2 m_(1,1,1)
        let x = [0.3, 1.7, 0.9];
        let m21: f64 = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| x[i] * x[i] * x[j])
            .sum();
        let expect = m21 + 2.0 * x[0] * x[1] * x[2];
        assert!((schur_polynomial(&part(&[2, 1]), &x).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn schur_at_ones_is_weyl_dimension() {
        for n in 1..=6 {
            for d in 1..=4 {
                for lam in enumerate_partitions(n, d) {
                    let s = schur_polynomial(&lam, &vec![1.0; d]).unwrap();
                    assert!((s - dim_weyl(&lam, d) as f64).abs() < 1e-9, "{lam} d={d}");
                }
            }
        }
    }

    #[test]
    fn lr_examples() {
        assert_eq!(lr_coefficient(&part(&[1]), &part(&[1]), &part(&[2])), 1);
        assert_eq!(lr_coefficient(&part(&[1]), &part(&[1]), &part(&[1, 1])), 1);
        assert_eq!(lr_coefficient(&part(&[1, 1]), &part(&[1, 1]), &part(&[2, 2])), 1);
        assert_eq!(lr_coefficient(&part(&[2, 1]), &part(&[2, 1]), &part(&[3, 2, 1])), 2);
        assert_eq!(lr_coefficient(&part(&[2]), &part(&[2]), &part(&[2, 1, 1])), 0);
        assert_eq!(lr_coefficient(&part(&[1]), &part(&[1]), &part(&[3])), 0);
    }

    #[test]
    fn lr_induction_dimension_count() {
        for a in 0..=4 {
            for b in 0..=4 {
                for alpha in enumerate_partitions(a, a.max(1)) {
                    for beta in enumerate_partitions(b, b.max(1)) {
                        let lhs: u128 = enumerate_partitions(a + b, (a + b).max(1))
                            .iter()
                            .map(|lam| lr_coefficient(&alpha, &beta, lam) as u128 * dim_specht(lam))
                            .sum();
                        let rhs = dim_specht(&alpha) * dim_specht(&beta) * binomial(a + b, a);
                        assert_eq!(lhs, rhs, "{alpha} {beta}");
                    }
                }
            }
        }
    }

    #[test]
    fn lr_is_symmetric_in_factors() {
        for k in 1..=6 {
            for lam in enumerate_partitions(k, k) {
                for a in 0..=k {
                    for alpha in enumerate_partitions(a, a.max(1)) {
                        for beta in enumerate_partitions(k - a, (k - a).max(1)) {
                            assert_eq!(
                                lr_coefficient(&alpha, &beta, &lam),
                                lr_coefficient(&beta, &alpha, &lam)
                            );
                        }
                    }
                }
            }
        }
    }
}
