//! Principal component analysis on dense row matrices.
//!
//! The covariance eigenproblem is solved with a cyclic Jacobi sweep. When a
//! matrix is wider than it is tall the eigenproblem is solved on the row
//! Gram matrix instead and eigenvectors are mapped back, which keeps the
//! cost at the smaller of the two dimensions. Components are deterministic:
//! eigenvalues descend, and each component is oriented so its
//! largest-magnitude entry is positive.

use super::{check_rows, AnalysisError};

/// Fitted principal components for a row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Pca {
    /// Column means subtracted before fitting.
    pub mean: Vec<f64>,
    /// One row per component, unit length, mutually orthogonal.
    pub components: Vec<Vec<f64>>,
    /// Variance captured by each component, descending.
    pub explained_variance: Vec<f64>,
    /// Total variance of the centered data (trace of the covariance).
    pub total_variance: f64,
    /// Input rows projected onto the components.
    pub projected: Vec<Vec<f64>>,
}

/// Relative eigenvalue threshold below which a Gram-mode eigenvector is
/// treated as null space and replaced by a basis completion.
const RANK_TOLERANCE: f64 = 1e-10;

pub fn pca(rows: &[Vec<f64>], n_components: usize) -> Result<Pca, AnalysisError> {
    let dim = check_rows(rows)?;
    if dim == 0 {
        return Err(AnalysisError::Empty);
    }
    let n = rows.len();
    if n < 2 {
        return Err(AnalysisError::TooFewRows { rows: n, needed: 2 });
    }
    let max_components = n.min(dim);
    if n_components == 0 || n_components > max_components {
        return Err(AnalysisError::BadComponentCount {
            requested: n_components,
            max: max_components,
        });
    }

    let mut mean = vec![0.0; dim];
    for row in rows {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }
    let centered: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| row.iter().zip(&mean).map(|(v, m)| v - m).collect())
        .collect();

    let scale = (n - 1) as f64;
    let total_variance: f64 = centered
        .iter()
        .flat_map(|row| row.iter().map(|v| v * v))
        .sum::<f64>()
        / scale;

    let (mut components, explained_variance) = if dim <= n {
        covariance_components(&centered, dim, scale, n_components)
    } else {
        gram_components(&centered, dim, scale, n_components)
    };

    for component in components.iter_mut() {
        orient(component);
    }

    let projected: Vec<Vec<f64>> = centered
        .iter()
        .map(|row| components.iter().map(|c| dot(row, c)).collect())
        .collect();

    Ok(Pca {
        mean,
        components,
        explained_variance,
        total_variance,
        projected,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Flip a component so its largest-magnitude entry (first on ties) is
/// positive.
fn orient(component: &mut [f64]) {
    let mut best = 0usize;
    for (i, v) in component.iter().enumerate() {
        if v.abs() > component[best].abs() {
            best = i;
        }
    }
    if component[best] < 0.0 {
        for v in component.iter_mut() {
            *v = -*v;
        }
    }
}

#[allow(clippy::needless_range_loop)]
fn covariance_components(
    centered: &[Vec<f64>],
    dim: usize,
    scale: f64,
    n_components: usize,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut cov = vec![vec![0.0; dim]; dim];
    for row in centered {
        for i in 0..dim {
            for j in i..dim {
                cov[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..dim {
        for j in i..dim {
            cov[i][j] /= scale;
            cov[j][i] = cov[i][j];
        }
    }
    let (eigenvalues, vectors) = jacobi_eigh(cov);
    let order = descending(&eigenvalues);

    let mut components = Vec::with_capacity(n_components);
    let mut explained = Vec::with_capacity(n_components);
    for &idx in order.iter().take(n_components) {
        components.push((0..dim).map(|r| vectors[r][idx]).collect());
        explained.push(eigenvalues[idx].max(0.0));
    }
    (components, explained)
}

fn gram_components(
    centered: &[Vec<f64>],
    dim: usize,
    scale: f64,
    n_components: usize,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = centered.len();
    let mut gram = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let g = dot(&centered[i], &centered[j]) / scale;
            gram[i][j] = g;
            gram[j][i] = g;
        }
    }
    let (eigenvalues, vectors) = jacobi_eigh(gram);
    let order = descending(&eigenvalues);
    let lead = eigenvalues[order[0]].max(0.0);
    let cutoff = lead * RANK_TOLERANCE;

    let mut components: Vec<Vec<f64>> = Vec::with_capacity(n_components);
    let mut explained = Vec::with_capacity(n_components);
    for &idx in order.iter().take(n_components) {
        let lambda = eigenvalues[idx].max(0.0);
        if lambda <= cutoff {
            break;
        }
        let mut component = vec![0.0; dim];
        for (r, row) in centered.iter().enumerate() {
            let u = vectors[r][idx];
            for (c, v) in component.iter_mut().zip(row) {
                *c += u * v;
            }
        }
        // Mapped eigenvectors of near-equal eigenvalues can lose a little
        // orthogonality; one re-orthogonalization pass restores it.
        for prior in &components {
            let p = dot(&component, prior);
            for (c, q) in component.iter_mut().zip(prior) {
                *c -= p * q;
            }
        }
        let norm = dot(&component, &component).sqrt();
        for c in component.iter_mut() {
            *c /= norm;
        }
        components.push(component);
        explained.push(lambda);
    }

    // The centered rows span fewer directions than components were
    // requested; complete with zero-variance directions orthogonal to the
    // span, chosen deterministically from the standard basis.
    while components.len() < n_components {
        let mut covered = vec![0.0; dim];
        for component in &components {
            for (w, c) in covered.iter_mut().zip(component) {
                *w += c * c;
            }
        }
        let pick = covered
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("dim checked nonzero");
        let mut filler = vec![0.0; dim];
        filler[pick] = 1.0;
        for _ in 0..2 {
            for component in &components {
                let p = dot(&filler, component);
                for (f, c) in filler.iter_mut().zip(component) {
                    *f -= p * c;
                }
            }
        }
        let norm = dot(&filler, &filler).sqrt();
        for f in filler.iter_mut() {
            *f /= norm;
        }
        components.push(filler);
        explained.push(0.0);
    }
    (components, explained)
}

fn descending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns the
/// eigenvalues and a matrix whose columns are the matching eigenvectors.
#[allow(clippy::needless_range_loop)]
fn jacobi_eigh(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    if n < 2 {
        return ((0..n).map(|i| a[i][i]).collect(), v);
    }

    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j].abs();
            }
        }
        if off == 0.0 {
            break;
        }

        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                // Entries that no longer move the diagonal at working
                // precision are snapped to zero so the sweep terminates.
                let g = 100.0 * apq.abs();
                if a[p][p].abs() + g == a[p][p].abs() && a[q][q].abs() + g == a[q][q].abs() {
                    a[p][q] = 0.0;
                    a[q][p] = 0.0;
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta.abs() > 1e100 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                a[p][p] -= h;
                a[q][q] += h;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = arp - s * (arq + tau * arp);
                    a[p][r] = a[r][p];
                    a[r][q] = arq + s * (arp - tau * arq);
                    a[q][r] = a[r][q];
                }
                for row in v.iter_mut() {
                    let vrp = row[p];
                    let vrq = row[q];
                    row[p] = vrp - s * (vrq + tau * vrp);
                    row[q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    ((0..n).map(|i| a[i][i]).collect(), v)
}
