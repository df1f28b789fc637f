//! Iterated-sums signatures of time series, truncated by weight.
//!
//! For a series x with consecutive differences Dx_i = x_{i+1} - x_i, the
//! signature coefficient of a word p_1 (x) ... (x) p_l of monomials is
//!
//! ```text
//! < Sig(x), p_1 (x) ... (x) p_l > = sum_{i_1 < ... < i_l} p_1(Dx_{i_1}) * ... * p_l(Dx_{i_l}),
//! ```
//!
//! summing over strictly increasing index tuples into the difference series.
//! The empty word maps to 1. Letters are monomials of degree >= 1 in the d
//! coordinates; the weight of a word is the sum of its letters' degrees and
//! the feature map keeps every word of weight at most k.
//!
//! [`isig`] runs a single forward pass over the series: each word keeps one
//! accumulator, updated from its longest proper prefix's accumulator, with
//! longer words updated first so a step never consumes its own contribution.
//! That is O(n * words) against the naive sum over tuples, which survives as
//! [`isig_bruteforce`] for cross-checking on short series.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::timeseries::TimeSeries;

#[derive(Debug, Clone, PartialEq)]
pub enum IsigError {
    DimMismatch { expected: usize, found: usize },
    /// The two signatures do not share a basis (dimension or weight differ).
    BasisMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// The brute-force evaluator refuses long series.
    SeriesTooLong { len: usize, max: usize },
    /// Monomials must have degree at least 1.
    ConstantMonomial,
    /// A word label could not be parsed.
    BadLabel { label: String },
    /// Coefficient vector does not match the basis size.
    BadCoefficientCount { expected: usize, found: usize },
}

impl fmt::Display for IsigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsigError::DimMismatch { expected, found } => {
                write!(f, "series dimension {found} does not match basis dimension {expected}")
            }
            IsigError::BasisMismatch { left, right } => write!(
                f,
                "signature bases differ: (dim, weight) {left:?} vs {right:?}"
            ),
            IsigError::SeriesTooLong { len, max } => {
                write!(f, "brute-force signature limited to {max} points, got {len}")
            }
            IsigError::ConstantMonomial => write!(f, "monomials must have degree at least 1"),
            IsigError::BadLabel { label } => write!(f, "cannot parse word label {label:?}"),
            IsigError::BadCoefficientCount { expected, found } => {
                write!(f, "expected {expected} coefficients, found {found}")
            }
        }
    }
}

impl std::error::Error for IsigError {}

/// A monomial in d variables with degree >= 1, e.g. Z1^2 * Z3.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Result<Monomial, IsigError> {
        if exponents.iter().all(|&e| e == 0) {
            return Err(IsigError::ConstantMonomial);
        }
        Ok(Monomial { exponents })
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn eval(&self, delta: &[f64]) -> f64 {
        let mut out = 1.0;
        for (&e, &x) in self.exponents.iter().zip(delta) {
            if e > 0 {
                out *= x.powi(e as i32);
            }
        }
        out
    }

    /// `Z3^2` style label; factors of a product joined by `*`.
    pub fn label(&self) -> String {
        let factors: Vec<String> = self
            .exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("Z{}", i + 1)
                } else {
                    format!("Z{}^{}", i + 1, e)
                }
            })
            .collect();
        factors.join("*")
    }
}

/// A word: a nonempty sequence of monomial letters of equal dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Monomial>,
}

impl Word {
    pub fn new(letters: Vec<Monomial>) -> Result<Word, IsigError> {
        let Some(first) = letters.first() else {
            return Err(IsigError::BadLabel {
                label: String::new(),
            });
        };
        let dim = first.dim();
        for l in &letters {
            if l.dim() != dim {
                return Err(IsigError::DimMismatch {
                    expected: dim,
                    found: l.dim(),
                });
            }
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[Monomial] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self) -> u32 {
        self.letters.iter().map(Monomial::degree).sum()
    }

    /// Letters joined by `|`, e.g. `Z1^2|Z1*Z2`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.letters.iter().map(Monomial::label).collect();
        parts.join("|")
    }

    /// The word's Bombieri-Weyl weight: the product over letters of the
    /// inverse multinomial coefficient of the letter's exponents.
    pub fn bw_factor(&self) -> f64 {
        self.letters
            .iter()
            .map(|m| 1.0 / multinomial(&m.exponents))
            .product()
    }
}

/// Canonical word order: ascending weight, then ascending length, then the
/// flattened exponent sequences compared so that higher powers of earlier
/// variables in earlier letters come first (Z1^2 before Z1*Z2 before Z2^2,
/// and Z1^2|Z1 before Z1|Z1^2).
fn word_cmp(a: &Word, b: &Word) -> std::cmp::Ordering {
    a.weight()
        .cmp(&b.weight())
        .then(a.letters.len().cmp(&b.letters.len()))
        .then_with(|| {
            for (la, lb) in a.letters.iter().zip(&b.letters) {
                for (ea, eb) in la.exponents.iter().zip(&lb.exponents) {
                    let ord = eb.cmp(ea);
                    if ord != std::cmp::Ordering::Equal {
                        return ord;
                    }
                }
            }
            std::cmp::Ordering::Equal
        })
}

/// All words of weight <= `weight` over monomials in `dim` variables, in
/// canonical order, plus the plumbing the forward DP pass needs: for every
/// word the index of its longest proper prefix and of its last letter.
#[derive(Debug)]
pub struct WordBasis {
    dim: usize,
    weight: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    monomials: Vec<Monomial>,
    parent: Vec<Option<usize>>,
    last_monomial: Vec<usize>,
    update_order: Vec<usize>,
    bw_factors: Vec<f64>,
}

fn monomials_of_degree(dim: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; dim];
    // Descending first coordinate yields the canonical order directly.
    fn rec(pos: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos + 1 == exps.len() {
            exps[pos] = remaining;
            out.push(Monomial {
                exponents: exps.clone(),
            });
            return;
        }
        for e in (0..=remaining).rev() {
            exps[pos] = e;
            rec(pos + 1, remaining - e, exps, out);
        }
    }
    rec(0, degree, &mut exps, &mut out);
    out
}

/// Exact multinomial coefficient (sum of exps choose the exps).
fn multinomial(exponents: &[u32]) -> f64 {
    let mut total: u128 = 0;
    let mut result: u128 = 1;
    for &e in exponents {
        for i in 1..=e as u128 {
            total += 1;
            result = result * total / i;
        }
    }
    result as f64
}

impl WordBasis {
    pub fn new(dim: usize, weight: usize) -> WordBasis {
        assert!(dim >= 1 && weight >= 1, "basis needs dim >= 1 and weight >= 1");
        let by_degree: Vec<Vec<Monomial>> = (1..=weight as u32)
            .map(|g| monomials_of_degree(dim, g))
            .collect();
        let monomials: Vec<Monomial> = by_degree.iter().flatten().cloned().collect();
        let monomial_index: HashMap<Monomial, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();

        let mut words = Vec::new();
        let mut stack: Vec<Monomial> = Vec::new();
        fn rec(
            remaining: usize,
            by_degree: &[Vec<Monomial>],
            stack: &mut Vec<Monomial>,
            words: &mut Vec<Word>,
        ) {
            for g in 1..=remaining {
                for m in &by_degree[g - 1] {
                    stack.push(m.clone());
                    words.push(Word {
                        letters: stack.clone(),
                    });
                    rec(remaining - g, by_degree, stack, words);
                    stack.pop();
                }
            }
        }
        rec(weight, &by_degree, &mut stack, &mut words);
        words.sort_by(word_cmp);

        let index: HashMap<Word, usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let parent: Vec<Option<usize>> = words
            .iter()
            .map(|w| {
                if w.letters.len() == 1 {
                    None
                } else {
                    let prefix = Word {
                        letters: w.letters[..w.letters.len() - 1].to_vec(),
                    };
                    Some(index[&prefix])
                }
            })
            .collect();
        let last_monomial: Vec<usize> = words
            .iter()
            .map(|w| monomial_index[w.letters.last().expect("words are nonempty")])
            .collect();
        let mut update_order: Vec<usize> = (0..words.len()).collect();
        update_order.sort_by_key(|&w| std::cmp::Reverse(words[w].letters.len()));
        let bw_factors: Vec<f64> = words.iter().map(Word::bw_factor).collect();

        WordBasis {
            dim,
            weight,
            words,
            index,
            monomials,
            parent,
            last_monomial,
            update_order,
            bw_factors,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position(&self, word: &Word) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn labels(&self) -> Vec<String> {
        self.words.iter().map(Word::label).collect()
    }

    /// Bombieri-Weyl weight of each word: the product over letters of the
    /// inverse multinomial coefficient of the letter's exponents.
    pub fn bw_factors(&self) -> &[f64] {
        &self.bw_factors
    }
}

/// An iterated-sums signature: one coefficient per basis word, in canonical
/// order. The empty-word coefficient is fixed to 1 and not stored.
#[derive(Debug, Clone)]
pub struct ISig {
    basis: Arc<WordBasis>,
    coeffs: Vec<f64>,
}

impl PartialEq for ISig {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self.weight() == other.weight()
            && self.coeffs == other.coeffs
    }
}

impl ISig {
    pub fn from_parts(basis: Arc<WordBasis>, coeffs: Vec<f64>) -> Result<ISig, IsigError> {
        if coeffs.len() != basis.len() {
            return Err(IsigError::BadCoefficientCount {
                expected: basis.len(),
                found: coeffs.len(),
            });
        }
        Ok(ISig { basis, coeffs })
    }

    pub fn basis(&self) -> &Arc<WordBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim
    }

    pub fn weight(&self) -> usize {
        self.basis.weight
    }

    /// Coefficients in the basis' canonical word order.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficient(&self, word: &Word) -> Option<f64> {
        self.basis.position(word).map(|i| self.coeffs[i])
    }

    pub fn coefficient_by_label(&self, label: &str) -> Option<f64> {
        let word = parse_word_label(label, self.dim()).ok()?;
        self.coefficient(&word)
    }
}

/// Signature of `x` truncated at the given weight.
pub fn isig(x: &TimeSeries, weight: usize) -> Result<ISig, IsigError> {
    let basis = Arc::new(WordBasis::new(x.dim(), weight));
    isig_with_basis(x, &basis)
}

/// Signature of `x` against a shared basis (one basis per corpus, not one
/// per series).
pub fn isig_with_basis(x: &TimeSeries, basis: &Arc<WordBasis>) -> Result<ISig, IsigError> {
    if x.dim() != basis.dim {
        return Err(IsigError::DimMismatch {
            expected: basis.dim,
            found: x.dim(),
        });
    }
    let points = x.points();
    let mut coeffs = vec![0.0; basis.words.len()];
    let mut mono_vals = vec![0.0; basis.monomials.len()];
    let mut delta = vec![0.0; basis.dim];
    for t in 1..points.len() {
        for ((d, a), b) in delta.iter_mut().zip(&points[t]).zip(&points[t - 1]) {
            *d = a - b;
        }
        for (v, m) in mono_vals.iter_mut().zip(&basis.monomials) {
            *v = m.eval(&delta);
        }
        // Longest words first: a word reads its prefix's accumulator from
        // before this step.
        for &w in &basis.update_order {
            let prefix = match basis.parent[w] {
                Some(p) => coeffs[p],
                None => 1.0,
            };
            coeffs[w] += prefix * mono_vals[basis.last_monomial[w]];
        }
    }
    Ok(ISig {
        basis: Arc::clone(basis),
        coeffs,
    })
}

/// Maximum series length [`isig_bruteforce`] accepts.
pub const BRUTEFORCE_MAX_LEN: usize = 12;

/// Direct sum over strictly increasing index tuples. Exponential in the word
/// length and only meant as a cross-check, hence the length guard.
pub fn isig_bruteforce(x: &TimeSeries, weight: usize) -> Result<ISig, IsigError> {
    if x.len() > BRUTEFORCE_MAX_LEN {
        return Err(IsigError::SeriesTooLong {
            len: x.len(),
            max: BRUTEFORCE_MAX_LEN,
        });
    }
    let basis = Arc::new(WordBasis::new(x.dim(), weight));
    let diffs: Vec<Vec<f64>> = x
        .points()
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
        .collect();

    fn tuple_sum(letters: &[Monomial], diffs: &[Vec<f64>], start: usize) -> f64 {
        let Some((first, rest)) = letters.split_first() else {
            return 1.0;
        };
        let mut total = 0.0;
        let stop = diffs.len().saturating_sub(rest.len());
        for i in start..stop {
            total += first.eval(&diffs[i]) * tuple_sum(rest, diffs, i + 1);
        }
        total
    }

    let coeffs = basis
        .words
        .iter()
        .map(|w| tuple_sum(&w.letters, &diffs, 0))
        .collect();
    Ok(ISig {
        basis,
        coeffs,
    })
}

/// Bombieri-Weyl norm of a signature (the fixed empty-word coefficient is
/// not part of it).
pub fn bw_norm(s: &ISig) -> f64 {
    s.coeffs
        .iter()
        .zip(&s.basis.bw_factors)
        .map(|(c, f)| c * c * f)
        .sum::<f64>()
        .sqrt()
}

/// Bombieri-Weyl distance between signatures over the same basis.
pub fn bw_distance(a: &ISig, b: &ISig) -> Result<f64, IsigError> {
    if a.dim() != b.dim() || a.weight() != b.weight() {
        return Err(IsigError::BasisMismatch {
            left: (a.dim(), a.weight()),
            right: (b.dim(), b.weight()),
        });
    }
    let sum: f64 = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .zip(&a.basis.bw_factors)
        .map(|((x, y), f)| (x - y) * (x - y) * f)
        .sum();
    Ok(sum.sqrt())
}

const CONCAT_TOL: f64 = 1e-9;

/// Verifies the concatenation identity `Sig({x | y}) = Sig(x) (x) Sig(y)`:
/// every coefficient of the concatenated series must match the sum over all
/// ways to split its word between the signatures of the parts.
pub fn isig_concat_check(
    x: &TimeSeries,
    y: &TimeSeries,
    weight: usize,
) -> Result<bool, IsigError> {
    if x.dim() != y.dim() {
        return Err(IsigError::DimMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    let basis = Arc::new(WordBasis::new(x.dim(), weight));
    let sx = isig_with_basis(x, &basis)?;
    let sy = isig_with_basis(y, &basis)?;
    let z = x.concat_shifted(y).expect("dimensions checked above");
    let sz = isig_with_basis(&z, &basis)?;

    for (w, word) in basis.words.iter().enumerate() {
        let n = word.letters.len();
        let mut expected = 0.0;
        for split in 0..=n {
            let left = if split == 0 {
                1.0
            } else {
                let prefix = Word {
                    letters: word.letters[..split].to_vec(),
                };
                sx.coeffs[basis.index[&prefix]]
            };
            let right = if split == n {
                1.0
            } else {
                let suffix = Word {
                    letters: word.letters[split..].to_vec(),
                };
                sy.coeffs[basis.index[&suffix]]
            };
            expected += left * right;
        }
        if (sz.coeffs[w] - expected).abs() > CONCAT_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Parses a `|`/`*` word label against a known dimension.
pub fn parse_word_label(label: &str, dim: usize) -> Result<Word, IsigError> {
    let bad = || IsigError::BadLabel {
        label: label.to_string(),
    };
    let mut letters = Vec::new();
    for letter in label.split('|') {
        let mut exps = vec![0u32; dim];
        for factor in letter.split('*') {
            let rest = factor.strip_prefix('Z').ok_or_else(bad)?;
            let (var, exp) = match rest.split_once('^') {
                Some((v, e)) => (
                    v.parse::<usize>().map_err(|_| bad())?,
                    e.parse::<u32>().map_err(|_| bad())?,
                ),
                None => (rest.parse::<usize>().map_err(|_| bad())?, 1),
            };
            if var == 0 || var > dim || exp == 0 {
                return Err(bad());
            }
            exps[var - 1] += exp;
        }
        letters.push(Monomial::new(exps).map_err(|_| bad())?);
    }
    Word::new(letters)
}

/// Parses a full label set (e.g. a feature CSV header), inferring the
/// dimension from the largest variable index that occurs.
pub fn parse_word_labels(labels: &[&str]) -> Result<(usize, Vec<Word>), IsigError> {
    let mut dim = 0usize;
    for label in labels {
        for token in label.split(['|', '*']) {
            let rest = token.strip_prefix('Z').ok_or_else(|| IsigError::BadLabel {
                label: label.to_string(),
            })?;
            let var_text = rest.split('^').next().unwrap_or("");
            let var: usize = var_text.parse().map_err(|_| IsigError::BadLabel {
                label: label.to_string(),
            })?;
            dim = dim.max(var);
        }
    }
    if dim == 0 {
        return Err(IsigError::BadLabel {
            label: labels.first().map(|s| s.to_string()).unwrap_or_default(),
        });
    }
    let words = labels
        .iter()
        .map(|l| parse_word_label(l, dim))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((dim, words))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_series(values: &[f64]) -> TimeSeries {
        TimeSeries::from_scalars(values).unwrap()
    }

    #[test]
    fn basis_d1_k3_has_the_seven_words_in_order() {
        let basis = WordBasis::new(1, 3);
        let labels = basis.labels();
        assert_eq!(
            labels,
            vec!["Z1", "Z1^2", "Z1|Z1", "Z1^3", "Z1^2|Z1", "Z1|Z1^2", "Z1|Z1|Z1"]
        );
    }

    #[test]
    fn basis_d1_counts_are_powers_of_two_minus_one() {
        for k in 1..=8 {
            assert_eq!(WordBasis::new(1, k).len(), (1 << k) - 1);
        }
    }

    #[test]
    fn basis_d2_k2_has_nine_words_in_order() {
        let basis = WordBasis::new(2, 2);
        assert_eq!(
            basis.labels(),
            vec!["Z1", "Z2", "Z1^2", "Z1*Z2", "Z2^2", "Z1|Z1", "Z1|Z2", "Z2|Z1", "Z2|Z2"]
        );
    }

    #[test]
    fn label_roundtrip() {
        let basis = WordBasis::new(3, 4);
        for word in basis.words() {
            let parsed = parse_word_label(&word.label(), 3).unwrap();
            assert_eq!(&parsed, word);
        }
        let (dim, words) = parse_word_labels(&["Z1", "Z2", "Z1^2|Z1*Z2"]).unwrap();
        assert_eq!(dim, 2);
        assert_eq!(words[2].label(), "Z1^2|Z1*Z2");
        assert!(parse_word_labels(&["Q7"]).is_err());
    }

    #[test]
    fn tent_series_signature() {
        // The critical-point series of the single bar [0, 2): values 0, 1, 0.
        let sig = isig(&scalar_series(&[0.0, 1.0, 0.0]), 3).unwrap();
        let expect = [
            ("Z1", 0.0),
            ("Z1^2", 2.0),
            ("Z1|Z1", -1.0),
            ("Z1^3", 0.0),
            ("Z1^2|Z1", -1.0),
            ("Z1|Z1^2", 1.0),
            ("Z1|Z1|Z1", 0.0),
        ];
        for (label, value) in expect {
            assert_eq!(sig.coefficient_by_label(label).unwrap(), value, "{label}");
        }
    }

    #[test]
    fn two_level_series_signature() {
        let x = TimeSeries::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.5, 0.5],
            vec![1.0, 0.0],
            vec![3.0, 0.0],
            vec![0.0, 0.0],
        ])
        .unwrap();
        let sig = isig(&x, 2).unwrap();
        let expect = [
            ("Z1", 0.0),
            ("Z2", 0.0),
            ("Z1^2", 14.5),
            ("Z1*Z2", -0.5),
            ("Z2^2", 0.5),
            ("Z1|Z1", -7.25),
            ("Z1|Z2", 0.25),
            ("Z2|Z1", 0.25),
            ("Z2|Z2", -0.25),
        ];
        for (label, value) in expect {
            assert!(
                (sig.coefficient_by_label(label).unwrap() - value).abs() <= 1e-12,
                "{label}: {} != {value}",
                sig.coefficient_by_label(label).unwrap()
            );
        }
    }

    #[test]
    fn singleton_series_has_zero_signature() {
        let sig = isig(&scalar_series(&[5.0]), 3).unwrap();
        assert!(sig.coefficients().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn dp_matches_bruteforce() {
        let x = TimeSeries::new(vec![
            vec![0.0, 1.0],
            vec![2.0, -1.0],
            vec![1.5, 0.5],
            vec![3.0, 0.0],
            vec![-1.0, 2.0],
        ])
        .unwrap();
        let fast = isig(&x, 3).unwrap();
        let slow = isig_bruteforce(&x, 3).unwrap();
        for (a, b) in fast.coefficients().iter().zip(slow.coefficients()) {
            assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn bruteforce_guards_length() {
        let x = scalar_series(&[0.0; 13]);
        assert_eq!(
            isig_bruteforce(&x, 2),
            Err(IsigError::SeriesTooLong { len: 13, max: 12 })
        );
    }

    #[test]
    fn twt_invariance_is_exact_on_dyadic_data() {
        // Values on a 1/16 grid: all differences are exact in binary floating
        // point, so the invariance holds with zero tolerance.
        let x = TimeSeries::new(vec![
            vec![0.25, -1.5],
            vec![1.0, 0.0625],
            vec![-0.5, 2.0],
            vec![3.0, 0.75],
        ])
        .unwrap();
        let base = isig(&x, 3).unwrap();
        assert_eq!(isig(&x.twr_reduce(), 3).unwrap(), base);
        let shifted = x.translated(&[0.5, -2.25]).unwrap();
        assert_eq!(isig(&shifted, 3).unwrap(), base);
        let stuttered = x.apply(crate::timeseries::WarpOp::Extend { at: 2 }).unwrap();
        assert_eq!(isig(&stuttered, 3).unwrap(), base);
    }

    #[test]
    fn bw_factors_follow_multinomials() {
        let basis = WordBasis::new(2, 3);
        let factor = |label: &str| {
            let word = parse_word_label(label, 2).unwrap();
            basis.bw_factors()[basis.position(&word).unwrap()]
        };
        assert_eq!(factor("Z1*Z2"), 0.5);
        assert_eq!(factor("Z1|Z2"), 1.0);
        assert_eq!(factor("Z1^2"), 1.0);
        assert_eq!(factor("Z1^2*Z2"), 1.0 / 3.0);
        assert_eq!(factor("Z1*Z2|Z1"), 0.5);
    }

    #[test]
    fn bw_norm_weights_coefficients() {
        let basis = Arc::new(WordBasis::new(2, 2));
        let mut coeffs = vec![0.0; basis.len()];
        let word = parse_word_label("Z1*Z2", 2).unwrap();
        coeffs[basis.position(&word).unwrap()] = 1.0;
        let sig = ISig::from_parts(Arc::clone(&basis), coeffs).unwrap();
        assert!((bw_norm(&sig) - (0.5f64).sqrt()).abs() <= 1e-15);

        let zero = ISig::from_parts(basis, vec![0.0; 9]).unwrap();
        assert_eq!(bw_distance(&sig, &zero).unwrap(), bw_norm(&sig));
    }

    #[test]
    fn bw_distance_requires_matching_basis() {
        let a = isig(&scalar_series(&[0.0, 1.0]), 2).unwrap();
        let b = isig(&scalar_series(&[0.0, 1.0]), 3).unwrap();
        assert!(matches!(
            bw_distance(&a, &b),
            Err(IsigError::BasisMismatch { .. })
        ));
    }

    #[test]
    fn concat_identity_holds() {
        let x = scalar_series(&[0.0, 1.0]);
        let y = scalar_series(&[0.0, 2.0]);
        assert!(isig_concat_check(&x, &y, 3).unwrap());

        // <Sig(0,1,1,3), Z|Z> = <Z>_x * <Z>_y = 2 on top of each side's own
        // (vanishing) Z|Z coefficient.
        let z = x.concat_shifted(&y).unwrap();
        let sig = isig(&z, 2).unwrap();
        assert_eq!(sig.coefficient_by_label("Z1|Z1").unwrap(), 2.0);
    }
}
