//! Multivariate time series and time-warping arithmetic.
//!
//! Two series are equivalent up to time warping and translation when they
//! reduce to the same series after collapsing consecutive repeated points and
//! shifting the first point to the origin. The iterated-sums signature is
//! invariant under exactly that equivalence, which is what makes the
//! reductions here worth having as standalone operations.

use std::fmt;

/// A series of `n >= 1` points in R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    dim: usize,
    points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimeSeriesError {
    Empty,
    DimMismatch { expected: usize, found: usize },
    LengthMismatch { left: usize, right: usize },
    TooShort { len: usize, needed: usize },
    BadPosition { at: usize, len: usize },
    ContractUnequal { at: usize },
}

impl fmt::Display for TimeSeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeSeriesError::Empty => write!(f, "a time series needs at least one point"),
            TimeSeriesError::DimMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            TimeSeriesError::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right} points")
            }
            TimeSeriesError::TooShort { len, needed } => {
                write!(f, "series of length {len} is too short, need {needed}")
            }
            TimeSeriesError::BadPosition { at, len } => {
                write!(f, "position {at} out of range for series of length {len}")
            }
            TimeSeriesError::ContractUnequal { at } => {
                write!(f, "cannot contract at {at}: neighboring points differ")
            }
        }
    }
}

impl std::error::Error for TimeSeriesError {}

/// Time-warping operators realized as column arithmetic. Each corresponds to
/// multiplying the series, read as a `d x n` matrix, by a 0/±1 matrix from
/// the right; the column forms below reproduce that product bit for bit.
///
/// Positions are 0-based column indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarpOp {
    /// Subtract the first column from every column.
    Translate,
    /// Duplicate column `at` (length grows by one).
    Extend { at: usize },
    /// Remove column `at + 1`, which must repeat column `at` exactly.
    Contract { at: usize },
    /// Consecutive differences (length shrinks by one).
    Delta,
}

fn bits_eq(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.to_bits() == y.to_bits())
}

impl TimeSeries {
    pub fn new(points: Vec<Vec<f64>>) -> Result<TimeSeries, TimeSeriesError> {
        let Some(first) = points.first() else {
            return Err(TimeSeriesError::Empty);
        };
        let dim = first.len();
        if dim == 0 {
            return Err(TimeSeriesError::Empty);
        }
        for p in &points {
            if p.len() != dim {
                return Err(TimeSeriesError::DimMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        Ok(TimeSeries { dim, points })
    }

    /// One-dimensional series from scalars.
    pub fn from_scalars(values: &[f64]) -> Result<TimeSeries, TimeSeriesError> {
        TimeSeries::new(values.iter().map(|&v| vec![v]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points; always at least 1.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false: construction rejects empty point lists.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Collapses runs of consecutive identical points (exact comparison on
    /// the float bits) to a single point.
    pub fn twr_reduce(&self) -> TimeSeries {
        let mut points: Vec<Vec<f64>> = Vec::with_capacity(self.points.len());
        for p in &self.points {
            if points.last().is_none_or(|last| !bits_eq(last, p)) {
                points.push(p.clone());
            }
        }
        TimeSeries {
            dim: self.dim,
            points,
        }
    }

    /// Subtracts the point `y` from every point.
    pub fn translated(&self, y: &[f64]) -> Result<TimeSeries, TimeSeriesError> {
        if y.len() != self.dim {
            return Err(TimeSeriesError::DimMismatch {
                expected: self.dim,
                found: y.len(),
            });
        }
        let points = self
            .points
            .iter()
            .map(|p| p.iter().zip(y).map(|(a, b)| a - b).collect())
            .collect();
        Ok(TimeSeries {
            dim: self.dim,
            points,
        })
    }

    /// Concatenation `{x | y}`: `y` is shifted so it takes off from the last
    /// point of `x`, and the junction point appears twice. The result has
    /// `x.len() + y.len()` points.
    pub fn concat_shifted(&self, y: &TimeSeries) -> Result<TimeSeries, TimeSeriesError> {
        if y.dim != self.dim {
            return Err(TimeSeriesError::DimMismatch {
                expected: self.dim,
                found: y.dim,
            });
        }
        let last = self.points.last().expect("series are nonempty");
        let y0 = &y.points[0];
        let mut points = self.points.clone();
        points.extend(y.points.iter().map(|p| {
            p.iter()
                .zip(y0)
                .zip(last)
                .map(|((a, b), c)| (a - b) + c)
                .collect::<Vec<f64>>()
        }));
        Ok(TimeSeries {
            dim: self.dim,
            points,
        })
    }

    /// Series of consecutive differences; needs at least two points.
    pub fn differences(&self) -> Result<TimeSeries, TimeSeriesError> {
        if self.points.len() < 2 {
            return Err(TimeSeriesError::TooShort {
                len: self.points.len(),
                needed: 2,
            });
        }
        let points = self
            .points
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
            .collect();
        Ok(TimeSeries {
            dim: self.dim,
            points,
        })
    }

    pub fn apply(&self, op: WarpOp) -> Result<TimeSeries, TimeSeriesError> {
        let n = self.points.len();
        match op {
            WarpOp::Translate => self.translated(&self.points[0].clone()),
            WarpOp::Extend { at } => {
                if at >= n {
                    return Err(TimeSeriesError::BadPosition { at, len: n });
                }
                let mut points = self.points.clone();
                points.insert(at + 1, self.points[at].clone());
                Ok(TimeSeries {
                    dim: self.dim,
                    points,
                })
            }
            WarpOp::Contract { at } => {
                if at + 1 >= n {
                    return Err(TimeSeriesError::BadPosition { at, len: n });
                }
                if !bits_eq(&self.points[at], &self.points[at + 1]) {
                    return Err(TimeSeriesError::ContractUnequal { at });
                }
                let mut points = self.points.clone();
                points.remove(at + 1);
                Ok(TimeSeries {
                    dim: self.dim,
                    points,
                })
            }
            WarpOp::Delta => self.differences(),
        }
    }
}

/// Distance `max_i ||x_i - y_i||_2` between series of equal length and
/// dimension.
pub fn ts_distance(x: &TimeSeries, y: &TimeSeries) -> Result<f64, TimeSeriesError> {
    if x.dim != y.dim {
        return Err(TimeSeriesError::DimMismatch {
            expected: x.dim,
            found: y.dim,
        });
    }
    if x.len() != y.len() {
        return Err(TimeSeriesError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let max = x
        .points
        .iter()
        .zip(&y.points)
        .map(|(a, b)| {
            a.iter()
                .zip(b)
                .map(|(p, q)| (p - q) * (p - q))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    Ok(max)
}
