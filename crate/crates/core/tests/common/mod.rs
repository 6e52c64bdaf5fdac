//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use qmarginal::diagram::Perm;
use qmarginal::scenario::MarginalScenario;

/// Sparse integer matrix keyed by (row, column).
pub type IntMatrix = BTreeMap<(usize, usize), i64>;

/// Which (wire, label) slots survive the partial trace, in wire-major order.
pub struct Layout {
    pub dims: Vec<usize>,
    pub wires: usize,
    /// kept[t][x]
    pub kept: Vec<Vec<bool>>,
}

impl Layout {
    pub fn uniform(d: usize, traced: &[bool]) -> Self {
        Self {
            dims: vec![d],
            wires: traced.len(),
            kept: traced.iter().map(|&t| vec![!t]).collect(),
        }
    }

    pub fn scenario(s: &MarginalScenario, n: usize) -> Self {
        let m = s.m();
        let labels = s.joint().len();
        Self {
            dims: s.joint().dims(),
            wires: n * m,
            kept: (0..n * m)
                .map(|t| (0..labels).map(|x| s.contexts()[t % m].contains(&x)).collect())
                .collect(),
        }
    }

    fn kept_slots(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in 0..self.wires {
            for x in 0..self.dims.len() {
                if self.kept[t][x] {
                    out.push((t, x));
                }
            }
        }
        out
    }

    fn flatten(&self, digit: impl Fn(usize, usize) -> usize) -> usize {
        self.kept_slots()
            .into_iter()
            .fold(0, |acc, (t, x)| acc * self.dims[x] + digit(t, x))
    }
}

/// Mixed-radix odometer over `radices`, calling `f` on every digit vector.
fn for_each_digits(radices: &[usize], mut f: impl FnMut(&[usize])) {
    let mut digits = vec![0; radices.len()];
    loop {
        f(&digits);
        let mut i = radices.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// `Tr_traced T(π)` by brute force over every basis vector of the full
/// space; `π` moves whole wires, output wire `π(t)` receives input wire `t`.
pub fn dense_partial_trace(layout: &Layout, perm: &Perm) -> IntMatrix {
    let labels = layout.dims.len();
    let radices: Vec<usize> = (0..layout.wires).flat_map(|_| layout.dims.iter().copied()).collect();
    let mut out = IntMatrix::new();
    for_each_digits(&radices, |input| {
        let at = |v: &[usize], t: usize, x: usize| v[t * labels + x];
        let mut output = vec![0; input.len()];
        for t in 0..layout.wires {
            for x in 0..labels {
                output[perm.image(t) * labels + x] = at(input, t, x);
            }
        }
        let diagonal_on_traced =
            (0..layout.wires).all(|t| (0..labels).all(|x| layout.kept[t][x] || at(&output, t, x) == at(input, t, x)));
        if diagonal_on_traced {
            let row = layout.flatten(|t, x| at(&output, t, x));
            let col = layout.flatten(|t, x| at(input, t, x));
            *out.entry((row, col)).or_default() += 1;
        }
    });
    out
}

/// `coeff · ⊗_x T(residual_x)` on the kept slots, where `residual_x`
/// permutes the kept wires of label `x` numbered in increasing order.
pub fn residual_operator(layout: &Layout, coeff: u128, residuals: &[Perm]) -> IntMatrix {
    let slots = layout.kept_slots();
    let wires_of: Vec<Vec<usize>> = (0..layout.dims.len())
        .map(|x| (0..layout.wires).filter(|&t| layout.kept[t][x]).collect())
        .collect();
    let radices: Vec<usize> = slots.iter().map(|&(_, x)| layout.dims[x]).collect();
    let position = |t: usize, x: usize| slots.iter().position(|&s| s == (t, x)).unwrap();
    let mut out = IntMatrix::new();
    for_each_digits(&radices, |input| {
        let mut output = vec![0; input.len()];
        for (x, wires) in wires_of.iter().enumerate() {
            for (p, &t) in wires.iter().enumerate() {
                output[position(wires[residuals[x].image(p)], x)] = input[position(t, x)];
            }
        }
        let flat = |v: &[usize]| slots.iter().enumerate().fold(0, |acc, (i, &(_, x))| acc * layout.dims[x] + v[i]);
        out.insert((flat(&output), flat(input)), coeff as i64);
    });
    out
}

pub fn add_into(acc: &mut IntMatrix, other: &IntMatrix) {
    for (k, v) in other {
        *acc.entry(*k).or_default() += v;
    }
}

fn kl(s: &[f64], t: &[f64]) -> f64 {
    s.iter()
        .zip(t)
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| if b > 0.0 { a * (a / b).ln() } else { f64::INFINITY })
        .sum()
}

/// Minimum of `KL(sa‖r) + KL(sb‖r)` over a grid on the simplex of length
/// `ell` (`ell ≤ 3`) with spacing `step`, refined three times around the
/// best point with a 20-fold smaller spacing each time.
pub fn omega_grid(sa: &[f64], sb: &[f64], ell: usize, step: f64) -> f64 {
    let pad = |s: &[f64]| {
        let mut v = s.to_vec();
        v.resize(ell.max(s.len()), 0.0);
        v
    };
    let (sa, sb) = (pad(sa), pad(sb));
    if sa[ell..].iter().chain(&sb[ell..]).any(|&x| x > 0.0) {
        return f64::INFINITY;
    }
    let f = |r: &[f64]| kl(&sa[..ell], r) + kl(&sb[..ell], r);
    let mut best = (f64::INFINITY, vec![1.0 / ell as f64; ell]);
    let search = |centre: &[f64], radius: f64, h: f64, best: &mut (f64, Vec<f64>)| {
        let steps = (2.0 * radius / h).round() as i64;
        let axis = |c: f64, i: i64| c - radius + i as f64 * h;
        let mut visit = |r: Vec<f64>| {
            if r.iter().all(|&x| x >= 0.0) {
                let v = f(&r);
                if v < best.0 {
                    *best = (v, r);
                }
            }
        };
        match ell {
            1 => visit(vec![1.0]),
            2 => (0..=steps).for_each(|i| {
                let x = axis(centre[0], i);
                visit(vec![x, 1.0 - x]);
            }),
            3 => (0..=steps).for_each(|i| {
                (0..=steps).for_each(|j| {
                    let (x, y) = (axis(centre[0], i), axis(centre[1], j));
                    visit(vec![x, y, 1.0 - x - y]);
                })
            }),
            _ => panic!("grid oracle supports ell <= 3"),
        }
    };
    search(&[0.5, 0.5], 0.5, step, &mut best);
    let mut h = step;
    for _ in 0..3 {
        let centre = best.1.clone();
        search(&centre, 2.0 * h, h / 20.0, &mut best);
        h /= 20.0;
    }
    best.0
}
