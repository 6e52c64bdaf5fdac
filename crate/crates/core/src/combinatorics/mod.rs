//! Partitions, spectra, and symmetric-group / `GL(d)` representation data.

mod partition;
mod repr;
mod symmetric;

pub use partition::{
    approximate_spectrum, binomial, delta_map, enumerate_partitions, factorial, gamma_map, snapped_ceil,
    Partition, SortedCone, Spectrum, SNAP_TOL, SPECTRUM_SUM_TOL,
};
pub use repr::{centralizer_order, character, class_size, dim_specht, dim_weyl};
pub use symmetric::{lr_coefficient, schur_polynomial};
