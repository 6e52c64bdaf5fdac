use std::fmt;

use crate::combinatorics::{factorial, Partition};
use crate::error::{Error, Result};

/// A permutation of `{0, .., k-1}` stored by images: `self.image(j)` is
/// where wire `j` is sent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        if k > u8::MAX as usize {
            return Err(Error::Input(format!("permutation on {k} points is too large")));
        }
        let mut seen = vec![false; k];
        for &i in &images {
            if i >= k || seen[i] {
                return Err(Error::Input(format!("not a bijection: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Self(images.into_iter().map(|i| i as u8).collect()))
    }

    pub fn identity(k: usize) -> Self {
        Self((0..k as u8).collect())
    }

    /// Builds from 1-based cycles, e.g. `[[1, 2, 3]]` sends 1→2→3→1.
    pub fn from_cycles(k: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..k).collect();
        let mut touched = vec![false; k];
        for cycle in cycles {
            for (idx, &a) in cycle.iter().enumerate() {
                let b = cycle[(idx + 1) % cycle.len()];
                if a == 0 || b == 0 || a > k || b > k || touched[a - 1] {
                    return Err(Error::Input(format!("bad cycle {cycle:?} on {k} points")));
                }
                touched[a - 1] = true;
                images[a - 1] = b - 1;
            }
        }
        Self::new(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn image(&self, j: usize) -> usize {
        self.0[j] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Self(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Self {
        assert_eq!(self.len(), other.len());
        Self(other.0.iter().map(|&j| self.0[j as usize]).collect())
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let k = self.len();
        let mut seen = vec![false; k];
        let mut out = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j);
                j = self.image(j);
            }
            out.push(cycle);
        }
        out
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles().len()
    }

    pub fn cycle_type(&self) -> Partition {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(lens).expect("cycle lengths are positive")
    }

    /// The permutation of lexicographic rank `rank` in `S_k` (Lehmer code).
    pub fn from_rank(k: usize, mut rank: u128) -> Self {
        let mut pool: Vec<u8> = (0..k as u8).collect();
        let mut images = Vec::with_capacity(k);
        for i in (0..k).rev() {
            let f = factorial(i);
            let idx = (rank / f) as usize;
            rank %= f;
            images.push(pool.remove(idx));
        }
        Self(images)
    }

    /// All of `S_k` in lexicographic order of the image sequence.
    pub fn all(k: usize) -> impl Iterator<Item = Perm> {
        (0..factorial(k)).map(move |r| Self::from_rank(k, r))
    }

    /// Applies the permutation to tensor factors: output factor `π(j)`
    /// receives input factor `j`.
    pub fn permute_factors<T: Copy>(&self, input: &[T], output: &mut [T]) {
        for (j, &t) in input.iter().enumerate() {
            output[self.image(j)] = t;
        }
    }
}

impl fmt::Display for Perm {
    /// 1-based cycle notation, fixed points omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "e");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, j) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", j + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
