use crate::error::{Error, Result};

/// Size guards applied before any factorial-sized or dense computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n·m` whose symmetric group `S_{nm}` is enumerated.
    pub max_nm: usize,
    /// Largest dense matrix dimension.
    pub max_dense: usize,
    /// Largest joint Hilbert-space dimension `d_J`.
    pub max_joint_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_nm: 8,
            max_dense: 4096,
            max_joint_dim: 4096,
        }
    }
}

impl Limits {
    pub fn check_nm(&self, nm: usize) -> Result<()> {
        if nm > self.max_nm {
            return Err(Error::GuardExceeded {
                what: "n*m (symmetric group degree)",
                value: nm as u128,
                bound: self.max_nm as u128,
            });
        }
        Ok(())
    }

    pub fn check_dense(&self, dim: u128) -> Result<()> {
        if dim > self.max_dense as u128 {
            return Err(Error::GuardExceeded {
                what: "dense dimension",
                value: dim,
                bound: self.max_dense as u128,
            });
        }
        Ok(())
    }

    pub fn check_joint(&self, dim: u128) -> Result<()> {
        if dim > self.max_joint_dim as u128 {
            return Err(Error::GuardExceeded {
                what: "joint dimension d_J",
                value: dim,
                bound: self.max_joint_dim as u128,
            });
        }
        Ok(())
    }
}

/// `base^exp` as `u128`, saturating.
pub(crate) fn pow_sat(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
