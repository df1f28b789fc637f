//! Discrete landscape feature maps for persistence barcodes.
//!
//! The pipeline turns a barcode (a finite multiset of birth/death intervals)
//! into a fixed-width feature vector in four steps:
//!
//! 1. [`landscape`] builds the persistence landscape, a sequence of piecewise
//!    linear level functions stored as critical pairs.
//! 2. [`features`] samples the first `d` levels at a critical-point grid,
//!    producing a time series in R^d.
//! 3. [`isig`] computes the iterated-sums signature of that series, truncated
//!    by weight, giving one coefficient per word of monomials.
//! 4. [`analysis`] runs the downstream protocol: k-means, agreement scores,
//!    permutation tests, separation ratios, rank correlation and PCA.
//!
//! [`chen`] provides the continuous (iterated-integral) signature of piecewise
//! linear paths for cross-checks such as loop diagnostics of landscape paths,
//! and [`timeseries`] the time-warping arithmetic the discrete signature is
//! invariant under.

pub mod analysis;
pub mod barcode;
pub mod chen;
pub mod features;
pub mod io;
pub mod isig;
pub mod landscape;
pub mod rng;
pub mod timeseries;
