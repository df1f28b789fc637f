//! Persistence barcodes and the bottleneck distance.
//!
//! A barcode is a finite multiset of intervals `[birth, death)` with
//! `0 <= birth <= death < inf`. The bottleneck distance matches bars of one
//! barcode to bars of the other or to the diagonal (a bar may be erased at
//! cost `persistence / 2`) and takes the cheapest worst pair, where the cost
//! of matching two bars is the max-norm distance of their endpoint pairs.

use std::fmt;

use serde::Deserialize;

/// One interval of a barcode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar {
    pub birth: f64,
    pub death: f64,
}

impl Bar {
    pub fn new(birth: f64, death: f64) -> Bar {
        Bar { birth, death }
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    /// Bars with zero persistence carry no landscape mass but stay in the
    /// multiset.
    pub fn is_trivial(&self) -> bool {
        self.birth == self.death
    }

    pub fn midpoint(&self) -> f64 {
        (self.birth + self.death) / 2.0
    }
}

/// A finite multiset of bars, kept sorted by `(birth, death)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Barcode {
    bars: Vec<Bar>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BarcodeError {
    /// The input was not well-formed JSON of the expected shape.
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    /// A bar violates `0 <= birth <= death < inf`.
    InvalidBar {
        index: usize,
        birth: f64,
        death: f64,
    },
}

impl fmt::Display for BarcodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BarcodeError::Json {
                line,
                column,
                message,
            } => write!(f, "barcode JSON at line {line}, column {column}: {message}"),
            BarcodeError::InvalidBar {
                index,
                birth,
                death,
            } => write!(
                f,
                "bar {index} has endpoints [{birth}, {death}); bars need 0 <= birth <= death < inf"
            ),
        }
    }
}

impl std::error::Error for BarcodeError {}

impl Barcode {
    /// Builds a barcode, validating and sorting the bars.
    pub fn new(bars: Vec<Bar>) -> Result<Barcode, BarcodeError> {
        for (index, bar) in bars.iter().enumerate() {
            let ok = bar.birth >= 0.0
                && bar.death >= bar.birth
                && bar.birth.is_finite()
                && bar.death.is_finite();
            if !ok {
                return Err(BarcodeError::InvalidBar {
                    index,
                    birth: bar.birth,
                    death: bar.death,
                });
            }
        }
        let mut bars = bars;
        bars.sort_by(|a, b| {
            (a.birth, a.death)
                .partial_cmp(&(b.birth, b.death))
                .expect("endpoints validated finite")
        });
        Ok(Barcode { bars })
    }

    pub fn empty() -> Barcode {
        Barcode { bars: Vec::new() }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Largest death value; 0 for the empty barcode.
    pub fn span(&self) -> f64 {
        self.bars.iter().map(|b| b.death).fold(0.0, f64::max)
    }
}

#[derive(Deserialize)]
struct BarcodeFile {
    bars: Vec<[f64; 2]>,
}

/// Parses the exchange format `{"bars": [[birth, death], ...]}`.
pub fn parse_barcode(text: &str) -> Result<Barcode, BarcodeError> {
    let file: BarcodeFile = serde_json::from_str(text).map_err(|e| BarcodeError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let bars = file
        .bars
        .into_iter()
        .map(|[birth, death]| Bar { birth, death })
        .collect();
    Barcode::new(bars)
}

/// Max-norm distance between the endpoint pairs of two bars.
fn pair_cost(a: &Bar, b: &Bar) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

/// Cost of erasing a bar into the diagonal.
fn diagonal_cost(bar: &Bar) -> f64 {
    bar.persistence() / 2.0
}

/// Bottleneck distance between two barcodes.
///
/// Exact: the answer is always one of the finitely many pairwise or diagonal
/// costs, so a binary search over the sorted candidate costs with a bipartite
/// feasibility check at each probe returns it without tolerance.
pub fn bottleneck_distance(a: &Barcode, b: &Barcode) -> f64 {
    let n = a.len();
    let m = b.len();
    if n == 0 && m == 0 {
        return 0.0;
    }

    let mut candidates = Vec::with_capacity(n * m + n + m + 1);
    candidates.push(0.0);
    for x in a.bars() {
        candidates.push(diagonal_cost(x));
        for y in b.bars() {
            candidates.push(pair_cost(x, y));
        }
    }
    for y in b.bars() {
        candidates.push(diagonal_cost(y));
    }
    candidates.sort_unstable_by(f64::total_cmp);
    candidates.dedup();

    // Smallest candidate admitting a perfect matching.
    let mut lo = 0;
    let mut hi = candidates.len() - 1;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if matching_feasible(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Whether every bar can be matched (to a bar of the other barcode or to the
/// diagonal) at cost at most `delta`.
///
/// Uses the standard diagonal-augmented bipartite graph: left vertices are
/// the bars of `a` plus one diagonal slot per bar of `b`, right vertices the
/// bars of `b` plus one diagonal slot per bar of `a`. A bar connects to its
/// own diagonal slot when its erasure cost fits, diagonal slots interconnect
/// freely, and feasibility is a perfect matching found by augmenting paths.
fn matching_feasible(a: &Barcode, b: &Barcode, delta: f64) -> bool {
    let n = a.len();
    let m = b.len();
    let left_count = n + m;
    let right_count = m + n;

    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); left_count];
    for (i, x) in a.bars().iter().enumerate() {
        for (j, y) in b.bars().iter().enumerate() {
            if pair_cost(x, y) <= delta {
                adjacency[i].push(j);
            }
        }
        if diagonal_cost(x) <= delta {
            adjacency[i].push(m + i);
        }
    }
    for (j, y) in b.bars().iter().enumerate() {
        if diagonal_cost(y) <= delta {
            adjacency[n + j].push(j);
        }
        adjacency[n + j].extend(m..m + n);
    }

    let mut matched_to: Vec<usize> = vec![usize::MAX; right_count];
    let mut matched = 0;
    let mut visited = vec![false; right_count];
    for left in 0..left_count {
        visited.iter_mut().for_each(|v| *v = false);
        if augment(left, &adjacency, &mut matched_to, &mut visited) {
            matched += 1;
        }
    }
    matched == left_count
}

fn augment(
    left: usize,
    adjacency: &[Vec<usize>],
    matched_to: &mut Vec<usize>,
    visited: &mut Vec<bool>,
) -> bool {
    for &right in &adjacency[left] {
        if visited[right] {
            continue;
        }
        visited[right] = true;
        if matched_to[right] == usize::MAX
            || augment(matched_to[right], adjacency, matched_to, visited)
        {
            matched_to[right] = left;
            return true;
        }
    }
    false
}
