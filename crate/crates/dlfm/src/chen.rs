//! Iterated-integral signatures of piecewise linear paths.
//!
//! The signature of a path gamma in R^d collects its iterated integrals
//! \int dgamma_{i_1} ... dgamma_{i_k} into one tensor per order k. For a
//! piecewise linear path with segment increments a_1, ..., a_m Chen's
//! identity factorizes the signature into a product of segment signatures,
//!
//! ```text
//! sigma(gamma) = exp(a_1) (x) exp(a_2) (x) ... (x) exp(a_m),
//! ```
//!
//! where exp is the tensor exponential exp(a) = sum_k a^{(x)k} / k! and (x)
//! the product of the graded tensor algebra, everything truncated at a fixed
//! order. That product is what [`pwl_signature`] evaluates; [`tensor_log`]
//! inverts exp via the log(1 + N) series, which terminates on truncated
//! input because N has no scalar part.
//!
//! Loops (paths returning to their start) are where the signature is most
//! informative for landscapes: every landscape traces a loop, its first
//! signature level vanishes and its second is the purely antisymmetric
//! tensor (1/2) sum_{i<j} a_i wedge a_j with a wedge b = a(x)b - b(x)a.
//! [`loop_diagnostics`] checks the four equivalent characterizations.

use std::fmt;

use crate::landscape::{dedup_sorted, Landscape};

/// Element of the tensor algebra over R^d truncated at a fixed order:
/// one dense level per tensor order, `levels[k]` of length `d^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSeries {
    dim: usize,
    levels: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChenError {
    /// Operands live in different algebras (dimension or order differ).
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Logarithm of an element whose scalar part is not 1.
    NotUnital { scalar: f64 },
    /// Exponential of an element whose scalar part is not 0.
    NonzeroScalar { scalar: f64 },
    /// The requested operation needs a higher truncation order.
    OrderTooLow { order: usize, needed: usize },
    /// A path needs at least one segment.
    EmptyPath,
    /// Segment dimensions disagree.
    DimMismatch { expected: usize, found: usize },
}

impl fmt::Display for ChenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChenError::ShapeMismatch { left, right } => write!(
                f,
                "tensor shape mismatch: (dim, order) {left:?} vs {right:?}"
            ),
            ChenError::NotUnital { scalar } => {
                write!(f, "tensor log needs scalar part 1, found {scalar}")
            }
            ChenError::NonzeroScalar { scalar } => {
                write!(f, "tensor exp needs scalar part 0, found {scalar}")
            }
            ChenError::OrderTooLow { order, needed } => {
                write!(f, "truncation order {order} too low, need at least {needed}")
            }
            ChenError::EmptyPath => write!(f, "a piecewise linear path needs segments"),
            ChenError::DimMismatch { expected, found } => {
                write!(f, "segment dimension mismatch: expected {expected}, found {found}")
            }
        }
    }
}

impl std::error::Error for ChenError {}

impl TensorSeries {
    /// The multiplicative unit 1 + 0 + 0 + ...
    pub fn unit(dim: usize, order: usize) -> TensorSeries {
        let mut levels = Vec::with_capacity(order + 1);
        levels.push(vec![1.0]);
        for k in 1..=order {
            levels.push(vec![0.0; dim.pow(k as u32)]);
        }
        TensorSeries { dim, levels }
    }

    fn zero(dim: usize, order: usize) -> TensorSeries {
        let mut t = TensorSeries::unit(dim, order);
        t.levels[0][0] = 0.0;
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    /// Dense order-k level, length `dim^k`.
    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k]
    }

    pub fn scalar(&self) -> f64 {
        self.levels[0][0]
    }

    /// Largest absolute entry across levels `1..=order`.
    pub fn max_abs(&self) -> f64 {
        self.levels[1..]
            .iter()
            .flatten()
            .fold(0.0, |acc, v| acc.max(v.abs()))
    }

    fn add_scaled(&mut self, other: &TensorSeries, factor: f64) {
        for (mine, theirs) in self.levels.iter_mut().zip(&other.levels) {
            for (x, y) in mine.iter_mut().zip(theirs) {
                *x += factor * y;
            }
        }
    }
}

fn shape(t: &TensorSeries) -> (usize, usize) {
    (t.dim, t.order())
}

/// Product in the truncated tensor algebra: the order-k level of the result
/// is the convolution `sum_{i+j=k} a_i (x) b_j` of Kronecker blocks.
pub fn tensor_mul(a: &TensorSeries, b: &TensorSeries) -> Result<TensorSeries, ChenError> {
    if a.dim != b.dim || a.order() != b.order() {
        return Err(ChenError::ShapeMismatch {
            left: shape(a),
            right: shape(b),
        });
    }
    let d = a.dim;
    let order = a.order();
    let mut out = TensorSeries::zero(d, order);
    for k in 0..=order {
        let target = &mut out.levels[k];
        for i in 0..=k {
            let j = k - i;
            let left = &a.levels[i];
            let right = &b.levels[j];
            let block = d.pow(j as u32);
            for (p, &lv) in left.iter().enumerate() {
                if lv == 0.0 {
                    continue;
                }
                let base = p * block;
                for (q, &rv) in right.iter().enumerate() {
                    target[base + q] += lv * rv;
                }
            }
        }
    }
    Ok(out)
}

/// Tensor exponential of a level-1 element: levels `a^{(x)k} / k!`.
pub fn tensor_exp(a: &[f64], order: usize) -> TensorSeries {
    let d = a.len();
    let mut out = TensorSeries::unit(d, order);
    let mut term = vec![1.0];
    for k in 1..=order {
        let mut next = vec![0.0; term.len() * d];
        let factor = 1.0 / k as f64;
        for (p, &tv) in term.iter().enumerate() {
            if tv == 0.0 {
                continue;
            }
            let base = p * d;
            for (q, &aq) in a.iter().enumerate() {
                next[base + q] = tv * aq * factor;
            }
        }
        out.levels[k].copy_from_slice(&next);
        term = next;
    }
    out
}

/// Exponential of a series with zero scalar part, in the same truncation.
/// Inverse of [`tensor_log`] on its image: the series `sum n^{(x)k} / k!`
/// terminates because `n` starts at order 1.
pub fn tensor_exp_series(n: &TensorSeries) -> Result<TensorSeries, ChenError> {
    if n.scalar() != 0.0 {
        return Err(ChenError::NonzeroScalar { scalar: n.scalar() });
    }
    let order = n.order();
    let mut out = TensorSeries::unit(n.dim, order);
    let mut power = TensorSeries::unit(n.dim, order);
    let mut factorial = 1.0;
    for k in 1..=order {
        power = tensor_mul(&power, n)?;
        factorial *= k as f64;
        out.add_scaled(&power, 1.0 / factorial);
    }
    Ok(out)
}

/// Tensor logarithm via the alternating log(1 + N) series; terminates because
/// N = t - 1 starts at order 1, so N^{(x)m} vanishes below order m.
pub fn tensor_log(t: &TensorSeries) -> Result<TensorSeries, ChenError> {
    if t.scalar() != 1.0 {
        return Err(ChenError::NotUnital { scalar: t.scalar() });
    }
    let order = t.order();
    let mut n = t.clone();
    n.levels[0][0] = 0.0;
    let mut out = TensorSeries::zero(t.dim, order);
    let mut power = n.clone();
    for m in 1..=order {
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        out.add_scaled(&power, sign / m as f64);
        if m < order {
            power = tensor_mul(&power, &n)?;
        }
    }
    Ok(out)
}

/// The `a (x) b - b (x) a` tensor as a flat `d*d` level.
pub fn wedge(a: &[f64], b: &[f64]) -> Vec<f64> {
    let d = a.len();
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] = a[i] * b[j] - a[j] * b[i];
        }
    }
    out
}

/// A `d x d` matrix stored as rows.
pub type Matrix = Vec<Vec<f64>>;

/// Symmetric and antisymmetric parts of the order-2 level, as `d x d` rows.
pub fn signature_matrix_parts(t: &TensorSeries) -> Result<(Matrix, Matrix), ChenError> {
    if t.order() < 2 {
        return Err(ChenError::OrderTooLow {
            order: t.order(),
            needed: 2,
        });
    }
    let d = t.dim;
    let level = t.level(2);
    let mut sym = vec![vec![0.0; d]; d];
    let mut skew = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            let fwd = level[i * d + j];
            let bwd = level[j * d + i];
            sym[i][j] = (fwd + bwd) / 2.0;
            skew[i][j] = (fwd - bwd) / 2.0;
        }
    }
    Ok((sym, skew))
}

/// A piecewise linear path given by its segment increments, normalized to a
/// minimal segment decomposition: zero segments are dropped and consecutive
/// positively parallel segments are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct PWLPath {
    dim: usize,
    segments: Vec<Vec<f64>>,
}

const PARALLEL_TOL: f64 = 1e-12;

fn is_zero(v: &[f64]) -> bool {
    v.iter().all(|&x| x == 0.0)
}

fn positively_parallel(a: &[f64], b: &[f64]) -> bool {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    if dot <= 0.0 {
        return false;
    }
    let scale = a
        .iter()
        .chain(b)
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tol = PARALLEL_TOL * scale * scale;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if (a[i] * b[j] - a[j] * b[i]).abs() > tol {
                return false;
            }
        }
    }
    true
}

impl PWLPath {
    pub fn new(segments: Vec<Vec<f64>>) -> Result<PWLPath, ChenError> {
        let Some(first) = segments.first() else {
            return Err(ChenError::EmptyPath);
        };
        let dim = first.len();
        if dim == 0 {
            return Err(ChenError::EmptyPath);
        }
        let mut minimal: Vec<Vec<f64>> = Vec::with_capacity(segments.len());
        for seg in &segments {
            if seg.len() != dim {
                return Err(ChenError::DimMismatch {
                    expected: dim,
                    found: seg.len(),
                });
            }
            if is_zero(seg) {
                continue;
            }
            match minimal.last_mut() {
                Some(last) if positively_parallel(last, seg) => {
                    for (x, y) in last.iter_mut().zip(seg) {
                        *x += y;
                    }
                }
                _ => minimal.push(seg.clone()),
            }
        }
        Ok(PWLPath {
            dim,
            segments: minimal,
        })
    }

    /// The path tracing the landscape levels: at each grid point of the
    /// union of the levels' critical t-values the path visits
    /// `(lambda_1(t), ..., lambda_d(t))`, moving linearly in between.
    pub fn from_landscape(l: &Landscape) -> Result<PWLPath, ChenError> {
        if l.num_levels() == 0 {
            return Err(ChenError::EmptyPath);
        }
        let grid = dedup_sorted(
            l.levels()
                .iter()
                .flatten()
                .map(|&(t, _)| t)
                .collect(),
            1e-12,
        );
        let d = l.num_levels();
        let values: Vec<Vec<f64>> = grid.iter().map(|&t| l.values(d, t)).collect();
        let segments = values
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
            .collect();
        PWLPath::new(segments)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Segments after normalization; a constant path has none.
    pub fn segments(&self) -> &[Vec<f64>] {
        &self.segments
    }

    pub fn displacement(&self) -> Vec<f64> {
        let mut total = vec![0.0; self.dim];
        for seg in &self.segments {
            for (t, s) in total.iter_mut().zip(seg) {
                *t += s;
            }
        }
        total
    }
}

/// Signature of a piecewise linear path, truncated at `order`: the product
/// of its segment exponentials. A constant path has the unit signature.
pub fn pwl_signature(path: &PWLPath, order: usize) -> TensorSeries {
    let mut sig = TensorSeries::unit(path.dim, order);
    for seg in &path.segments {
        sig = tensor_mul(&sig, &tensor_exp(seg, order))
            .expect("segment signatures share the algebra");
    }
    sig
}

/// Result of checking the four equivalent loop characterizations at a given
/// tolerance: zero displacement, vanishing first level of the signature and
/// its log, the order-2 identity (equality of signature and log at level 2,
/// with the level equal to `(1/2) sum_{i<j} a_i wedge a_j`), and equality of
/// signature and log at level 3.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopReport {
    pub conditions: [bool; 4],
    pub residuals: [f64; 4],
    pub is_loop: bool,
    pub consistent: bool,
}

pub fn loop_diagnostics(path: &PWLPath, tol: f64) -> LoopReport {
    let d = path.dim;
    let sig = pwl_signature(path, 3);
    let log = tensor_log(&sig).expect("signatures are unital");

    let displacement = path
        .displacement()
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));

    let first_level = sig
        .level(1)
        .iter()
        .chain(log.level(1))
        .fold(0.0f64, |acc, v| acc.max(v.abs()));

    let mut half_wedge_sum = vec![0.0; d * d];
    let segs = path.segments();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            for (acc, w) in half_wedge_sum.iter_mut().zip(wedge(&segs[i], &segs[j])) {
                *acc += 0.5 * w;
            }
        }
    }
    let second_level = sig
        .level(2)
        .iter()
        .zip(log.level(2))
        .map(|(a, b)| (a - b).abs())
        .chain(
            sig.level(2)
                .iter()
                .zip(&half_wedge_sum)
                .map(|(a, b)| (a - b).abs()),
        )
        .fold(0.0, f64::max);

    let third_level = sig
        .level(3)
        .iter()
        .zip(log.level(3))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let residuals = [displacement, first_level, second_level, third_level];
    let conditions = [
        residuals[0] <= tol,
        residuals[1] <= tol,
        residuals[2] <= tol,
        residuals[3] <= tol,
    ];
    LoopReport {
        conditions,
        residuals,
        is_loop: conditions[0],
        consistent: conditions.iter().all(|&c| c == conditions[0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn assert_close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= TOL, "{a:?} != {b:?}");
        }
    }

    #[test]
    fn unit_is_multiplicative_identity() {
        let a = tensor_exp(&[1.0, -2.0], 3);
        let e = TensorSeries::unit(2, 3);
        assert_eq!(tensor_mul(&a, &e).unwrap(), a);
        assert_eq!(tensor_mul(&e, &a).unwrap(), a);
    }

    #[test]
    fn exp_of_unit_vector() {
        let t = tensor_exp(&[1.0, 0.0], 2);
        assert_eq!(t.scalar(), 1.0);
        assert_eq!(t.level(1), &[1.0, 0.0]);
        // Level 2 = e1 (x) e1 / 2.
        assert_eq!(t.level(2), &[0.5, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn mul_respects_grading() {
        let a = tensor_exp(&[1.0, 0.0], 2);
        let b = tensor_exp(&[0.0, 1.0], 2);
        let ab = tensor_mul(&a, &b).unwrap();
        assert_eq!(ab.level(1), &[1.0, 1.0]);
        // Level 2: e1e1/2 + e1e2 + e2e2/2.
        assert_close(ab.level(2), &[0.5, 1.0, 0.0, 0.5]);
    }

    #[test]
    fn mul_rejects_mismatched_shapes() {
        let a = tensor_exp(&[1.0], 2);
        let b = tensor_exp(&[1.0, 2.0], 2);
        assert!(tensor_mul(&a, &b).is_err());
        let c = tensor_exp(&[1.0], 3);
        assert!(tensor_mul(&a, &c).is_err());
    }

    #[test]
    fn log_inverts_exp() {
        let a = [0.3, -1.2, 0.7];
        let log = tensor_log(&tensor_exp(&a, 4)).unwrap();
        assert_close(log.level(1), &a);
        for k in 2..=4 {
            for &v in log.level(k) {
                assert!(v.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn exp_series_inverts_log_on_signatures() {
        let path = PWLPath::new(vec![vec![1.0, -0.5], vec![0.25, 2.0], vec![-1.0, 0.5]]).unwrap();
        let sig = pwl_signature(&path, 3);
        let back = tensor_exp_series(&tensor_log(&sig).unwrap()).unwrap();
        for k in 0..=3 {
            for (a, b) in back.level(k).iter().zip(sig.level(k)) {
                assert!((a - b).abs() <= 1e-12, "level {k}: {a} vs {b}");
            }
        }
        // On a pure level-1 element it reproduces the segment exponential.
        let mut n = TensorSeries::unit(2, 3);
        n.levels[0][0] = 0.0;
        n.levels[1] = vec![0.5, -2.0];
        let direct = tensor_exp(&[0.5, -2.0], 3);
        assert_eq!(tensor_exp_series(&n).unwrap(), direct);
        // Nonzero scalar part is rejected.
        assert!(matches!(
            tensor_exp_series(&TensorSeries::unit(2, 2)),
            Err(ChenError::NonzeroScalar { .. })
        ));
    }

    #[test]
    fn log_level2_formula() {
        // log(sigma)^(2) = sigma^(2) - (1/2) sigma^(1) (x) sigma^(1).
        let path = PWLPath::new(vec![vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let sig = pwl_signature(&path, 2);
        let log = tensor_log(&sig).unwrap();
        let s1 = sig.level(1);
        let d = 2;
        for i in 0..d {
            for j in 0..d {
                let expected = sig.level(2)[i * d + j] - 0.5 * s1[i] * s1[j];
                assert!((log.level(2)[i * d + j] - expected).abs() <= TOL);
            }
        }
    }

    #[test]
    fn log_rejects_non_unital() {
        let mut t = TensorSeries::unit(2, 2);
        t.levels[0][0] = 2.0;
        assert!(matches!(
            tensor_log(&t),
            Err(ChenError::NotUnital { .. })
        ));
    }

    #[test]
    fn single_segment_signature_is_exponential() {
        let path = PWLPath::new(vec![vec![2.0, -1.0]]).unwrap();
        let sig = pwl_signature(&path, 3);
        assert_eq!(sig, tensor_exp(&[2.0, -1.0], 3));
    }

    #[test]
    fn path_normalization_merges_and_drops() {
        // Two positively parallel segments merge; a zero segment disappears;
        // a direction reversal does not merge.
        let path = PWLPath::new(vec![
            vec![1.0, 1.0],
            vec![2.0, 2.0],
            vec![0.0, 0.0],
            vec![-1.0, -1.0],
        ])
        .unwrap();
        assert_eq!(path.segments(), &[vec![3.0, 3.0], vec![-1.0, -1.0]]);
    }

    #[test]
    fn constant_path_has_unit_signature() {
        let path = PWLPath::new(vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(path.segments().len(), 0);
        assert_eq!(pwl_signature(&path, 3), TensorSeries::unit(2, 3));
    }

    #[test]
    fn empty_path_is_rejected() {
        assert_eq!(PWLPath::new(vec![]), Err(ChenError::EmptyPath));
    }

    #[test]
    fn unit_square_second_level() {
        // e1, e2, -e1, -e2: the loop around the unit square.
        let path = PWLPath::new(vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
        ])
        .unwrap();
        let sig = pwl_signature(&path, 3);
        assert_close(sig.level(1), &[0.0, 0.0]);
        assert_close(sig.level(2), &[0.0, 1.0, -1.0, 0.0]);

        let (sym, skew) = signature_matrix_parts(&sig).unwrap();
        assert_close(&sym.concat(), &[0.0; 4]);
        assert_close(&skew.concat(), &[0.0, 1.0, -1.0, 0.0]);

        let report = loop_diagnostics(&path, 1e-9);
        assert!(report.is_loop);
        assert!(report.consistent);
        assert_eq!(report.conditions, [true; 4]);
    }

    #[test]
    fn open_path_fails_all_loop_conditions() {
        let path = PWLPath::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let report = loop_diagnostics(&path, 1e-9);
        assert!(!report.is_loop);
        assert!(report.consistent);
        assert_eq!(report.conditions, [false; 4]);
    }

    #[test]
    fn matrix_parts_need_order_two() {
        let t = tensor_exp(&[1.0, 2.0], 1);
        assert!(matches!(
            signature_matrix_parts(&t),
            Err(ChenError::OrderTooLow { .. })
        ));
    }
}
