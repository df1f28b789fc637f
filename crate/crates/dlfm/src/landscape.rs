//! Persistence landscapes stored as critical pairs.
//!
//! Every bar `[b, d)` contributes a tent `t -> max(0, min(t - b, d - t))`.
//! The landscape of a barcode is the sequence of level functions
//! `lambda_k(t) = k-th largest tent value at t`; each level is piecewise
//! linear with slopes in {-1, 0, +1}, starts and ends at value 0, and
//! dominates the next level pointwise.
//!
//! Levels are stored as `(t, value)` pairs at the points where the slope
//! changes. Slope changes can only happen at births, deaths, bar midpoints
//! `(b + d) / 2`, and crossing midpoints `(b_j + d_i) / 2` of overlapping
//! pairs with `b_i <= b_j < d_i <= d_j`, so evaluating the tents on that
//! candidate set and interpolating linearly in between reproduces the
//! landscape exactly.

use crate::barcode::{Bar, Barcode};
use serde::Serialize;

/// Tolerance for merging candidate grid values and for treating consecutive
/// segment slopes as equal.
const FLAT_TOL: f64 = 1e-12;

/// A persistence landscape: level functions on `[0, span]`, outermost first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Landscape {
    levels: Vec<Vec<(f64, f64)>>,
    span: f64,
}

fn tent(bar: &Bar, t: f64) -> f64 {
    (t - bar.birth).min(bar.death - t).max(0.0)
}

/// Sorts and deduplicates, treating values within `tol` as equal.
pub(crate) fn dedup_sorted(mut values: Vec<f64>, tol: f64) -> Vec<f64> {
    values.sort_unstable_by(f64::total_cmp);
    values.dedup_by(|next, kept| (*next - *kept).abs() <= tol);
    values
}

/// All t-values where some landscape level of `b` can change slope: births,
/// deaths, bar midpoints and crossing midpoints of overlapping bar pairs.
/// Sorted ascending, deduplicated; a superset of the true critical set.
pub fn critical_points(b: &Barcode) -> Vec<f64> {
    let bars = b.bars();
    let mut points = Vec::with_capacity(3 * bars.len());
    for bar in bars {
        points.push(bar.birth);
        points.push(bar.death);
        points.push(bar.midpoint());
    }
    for (i, x) in bars.iter().enumerate() {
        for (j, y) in bars.iter().enumerate() {
            if i == j {
                continue;
            }
            if x.birth <= y.birth && y.birth < x.death && x.death <= y.death {
                points.push((y.birth + x.death) / 2.0);
            }
        }
    }
    dedup_sorted(points, FLAT_TOL)
}

/// Builds the landscape of a barcode. The empty barcode has no levels.
pub fn landscape(b: &Barcode) -> Landscape {
    let grid = critical_points(b);
    let span = b.span();
    if grid.is_empty() {
        return Landscape {
            levels: Vec::new(),
            span,
        };
    }

    // Tent values at every grid point, sorted descending per point.
    let columns: Vec<Vec<f64>> = grid
        .iter()
        .map(|&t| {
            let mut vals: Vec<f64> = b.bars().iter().map(|bar| tent(bar, t)).collect();
            vals.sort_unstable_by(|x, y| y.total_cmp(x));
            vals
        })
        .collect();
    let depth = columns
        .iter()
        .map(|c| c.iter().filter(|&&v| v > 0.0).count())
        .max()
        .unwrap_or(0);

    let levels = (0..depth)
        .map(|k| {
            let values: Vec<f64> = columns.iter().map(|c| c[k]).collect();
            build_level(&grid, &values)
        })
        .collect();
    Landscape { levels, span }
}

/// Turns per-grid-point values of one level into critical pairs: trims the
/// flat zero tails down to one anchoring zero on each side and removes
/// interior points that do not change the slope.
fn build_level(grid: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    let first = values
        .iter()
        .position(|&v| v > 0.0)
        .expect("constructed levels are positive somewhere");
    let last = values
        .iter()
        .rposition(|&v| v > 0.0)
        .expect("constructed levels are positive somewhere");
    // The tents vanish at the extreme grid points, so a zero anchor exists on
    // both sides.
    debug_assert!(first > 0 && last + 1 < values.len());

    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(last + 3 - first);
    for i in first - 1..=last + 1 {
        let next = (grid[i], values[i]);
        while pairs.len() >= 2 {
            let a = pairs[pairs.len() - 2];
            let b = pairs[pairs.len() - 1];
            let s0 = (b.1 - a.1) / (b.0 - a.0);
            let s1 = (next.1 - b.1) / (next.0 - b.0);
            if (s0 - s1).abs() <= FLAT_TOL {
                pairs.pop();
            } else {
                break;
            }
        }
        pairs.push(next);
    }
    pairs
}

impl Landscape {
    pub fn levels(&self) -> &[Vec<(f64, f64)>] {
        &self.levels
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Right end of the domain `[0, span]`.
    pub fn span(&self) -> f64 {
        self.span
    }

    /// Value of level `k` (0-based) at `t`. Levels beyond the stored ones and
    /// t outside a level's support evaluate to 0.
    pub fn value(&self, k: usize, t: f64) -> f64 {
        let Some(pairs) = self.levels.get(k) else {
            return 0.0;
        };
        interpolate(pairs, t)
    }

    /// Values of the first `d` levels at `t`.
    pub fn values(&self, d: usize, t: f64) -> Vec<f64> {
        (0..d).map(|k| self.value(k, t)).collect()
    }

    /// Copy with exactly `d` levels: surplus levels are dropped from the
    /// bottom (highest indices), missing ones are filled with identically
    /// zero levels on the same domain.
    pub fn padded(&self, d: usize) -> Landscape {
        let mut levels: Vec<Vec<(f64, f64)>> =
            self.levels.iter().take(d).cloned().collect();
        let zero_level = if self.span > 0.0 {
            vec![(0.0, 0.0), (self.span, 0.0)]
        } else {
            vec![(0.0, 0.0)]
        };
        while levels.len() < d {
            levels.push(zero_level.clone());
        }
        Landscape {
            levels,
            span: self.span,
        }
    }
}

fn interpolate(pairs: &[(f64, f64)], t: f64) -> f64 {
    if pairs.is_empty() || t < pairs[0].0 || t > pairs[pairs.len() - 1].0 {
        return 0.0;
    }
    // Index of the first pair with t_i >= t.
    let idx = pairs.partition_point(|&(ti, _)| ti < t);
    let (t1, v1) = pairs[idx];
    if t1 == t || idx == 0 {
        return v1;
    }
    let (t0, v0) = pairs[idx - 1];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}
