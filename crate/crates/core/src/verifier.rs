//! Independent verification of realizations: pattern membership, distinct
//! eigenvalue counts, and the strong spectral property as a nullspace
//! computation. Exact rational arithmetic where the matrix permits,
//! floating arithmetic with declared tolerances otherwise.

use nalgebra::DMatrix;
use num::traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::rat::RatMatrix;

#[derive(Debug, Error)]
pub enum VerifierError {
    #[error("matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("matrix is {rows}x{cols}, graph has {n} vertices")]
    DimensionMismatch { rows: usize, cols: usize, n: usize },
    #[error("pattern check failed at ({0},{1}); ssp_check requires a pattern match")]
    PatternMismatch(usize, usize),
    #[error("eigenvalue clustering is ambiguous: {0}")]
    AmbiguousSpectrum(String),
}

/// The tolerance ladder. Scales are separated by roughly two orders each:
/// residual acceptance, entry nonzero floor, rank cut.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    /// Frobenius residual acceptance for constructed identities (M²−I etc.).
    pub residual: f64,
    /// Magnitude a declared-nonzero entry must reach at acceptance time.
    pub nonzero_floor: f64,
    /// Magnitude floor for pattern membership of an edge entry.
    pub pattern_floor: f64,
    /// Ceiling below which an entry counts as a structural zero.
    pub zero_ceiling: f64,
    /// Relative rank tolerance for floating SSP verdicts.
    pub rank: f64,
    /// Relative eigenvalue clustering tolerance.
    pub cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-10,
            nonzero_floor: 1e-6,
            pattern_floor: 1e-8,
            zero_ceiling: 1e-12,
            rank: 1e-8,
            cluster: 1e-7,
        }
    }
}

/// A symmetric matrix in either exact rational or floating representation.
#[derive(Clone, Debug)]
pub enum MatrixData {
    Exact(RatMatrix),
    Float(DMatrix<f64>),
}

impl MatrixData {
    pub fn dim(&self) -> usize {
        match self {
            MatrixData::Exact(m) => m.rows(),
            MatrixData::Float(m) => m.nrows(),
        }
    }

    pub fn to_float(&self) -> DMatrix<f64> {
        match self {
            MatrixData::Exact(m) => m.to_f64(),
            MatrixData::Float(m) => m.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, MatrixData::Exact(_))
    }

    pub fn check_symmetric(&self) -> Result<(), VerifierError> {
        match self {
            MatrixData::Exact(m) => {
                if m.rows() != m.cols() {
                    return Err(VerifierError::DimensionMismatch { rows: m.rows(), cols: m.cols(), n: m.rows() });
                }
                for i in 0..m.rows() {
                    for j in i + 1..m.cols() {
                        if m.get(i, j) != m.get(j, i) {
                            return Err(VerifierError::NotSymmetric(i, j));
                        }
                    }
                }
            }
            MatrixData::Float(m) => {
                if m.nrows() != m.ncols() {
                    return Err(VerifierError::DimensionMismatch { rows: m.nrows(), cols: m.ncols(), n: m.nrows() });
                }
                let scale = m.amax().max(1.0);
                for i in 0..m.nrows() {
                    for j in i + 1..m.ncols() {
                        if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                            return Err(VerifierError::NotSymmetric(i, j));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

// ------------------------------------------------------------ pattern check

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatternReport {
    pub ok: bool,
    /// First offending off-diagonal position, if any.
    pub violation: Option<(usize, usize)>,
}

/// Does the off-diagonal support of `a` equal the edge set of `g`?
/// Floating entries use the `pattern_floor` / `zero_ceiling` bands; entries
/// strictly between are violations (never silently classified).
pub fn pattern_check(a: &MatrixData, g: &Graph, tol: &Tolerances) -> Result<PatternReport, VerifierError> {
    a.check_symmetric()?;
    let n = a.dim();
    if n != g.n() {
        return Err(VerifierError::DimensionMismatch { rows: n, cols: n, n: g.n() });
    }
    let mut violation = None;
    'scan: for i in 0..n {
        for j in i + 1..n {
            let ok = match a {
                MatrixData::Exact(m) => {
                    let z = m.get(i, j).is_zero();
                    z != g.has_edge(i, j)
                }
                MatrixData::Float(m) => {
                    let v = m[(i, j)].abs();
                    if g.has_edge(i, j) {
                        v >= tol.pattern_floor
                    } else {
                        v <= tol.zero_ceiling
                    }
                }
            };
            if !ok {
                violation = Some((i, j));
                break 'scan;
            }
        }
    }
    Ok(PatternReport { ok: violation.is_none(), violation })
}

// ------------------------------------------------------- distinct eigenvalues

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArithmeticMode {
    Exact,
    Floating,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub mode: ArithmeticMode,
    /// All eigenvalues, ascending (floating approximations in exact mode).
    pub eigenvalues: Vec<f64>,
    /// Cluster sizes, ascending by eigenvalue.
    pub cluster_sizes: Vec<usize>,
    pub distinct_count: usize,
    /// `[m1, m2]` ordered by ascending eigenvalue, when `distinct_count == 2`.
    pub multiplicity_bipartition: Option<[usize; 2]>,
    /// Floating clustering failed the diameter / 10x-gap sanity margins.
    pub ambiguous: bool,
}

pub fn distinct_eigenvalues(a: &MatrixData, tol: &Tolerances) -> Result<SpectrumSummary, VerifierError> {
    a.check_symmetric()?;
    match a {
        MatrixData::Exact(m) => {
            let poly = m.char_poly();
            let dec = poly.squarefree_decomposition();
            let distinct: usize = dec.iter().map(|(f, _)| f.degree()).sum();
            let mut mb = None;
            if distinct == 2 {
                // Either one squarefree factor of degree 2 (equal multiplicities,
                // possibly an irrational conjugate pair) or two linear factors.
                if dec.len() == 1 && dec[0].0.degree() == 2 {
                    mb = Some([dec[0].1, dec[0].1]);
                } else if let Some(roots) = poly.rational_roots_with_multiplicity() {
                    if roots.len() == 2 {
                        mb = Some([roots[0].1, roots[1].1]);
                    }
                }
            }
            let mut eigen: Vec<f64> = float_eigenvalues(&m.to_f64());
            eigen.sort_by(f64::total_cmp);
            let cluster_sizes = exact_cluster_sizes(&dec, &eigen);
            Ok(SpectrumSummary {
                mode: ArithmeticMode::Exact,
                eigenvalues: eigen,
                cluster_sizes,
                distinct_count: distinct,
                multiplicity_bipartition: mb,
                ambiguous: false,
            })
        }
        MatrixData::Float(m) => {
            let mut eigen = float_eigenvalues(m);
            eigen.sort_by(f64::total_cmp);
            let scale = eigen.iter().fold(1.0f64, |s, &x| s.max(x.abs()));
            let gap = tol.cluster * scale;
            let mut cluster_sizes = Vec::new();
            let mut start = 0usize;
            for i in 1..=eigen.len() {
                if i == eigen.len() || eigen[i] - eigen[i - 1] > gap {
                    cluster_sizes.push(i - start);
                    start = i;
                }
            }
            // Sanity margins: tight clusters, wide separations.
            let mut ambiguous = false;
            let mut idx = 0usize;
            let mut bounds = Vec::new();
            for &sz in &cluster_sizes {
                let lo = eigen[idx];
                let hi = eigen[idx + sz - 1];
                if hi - lo > gap {
                    ambiguous = true;
                }
                bounds.push((lo, hi));
                idx += sz;
            }
            for w in bounds.windows(2) {
                if w[1].0 - w[0].1 < 10.0 * gap {
                    ambiguous = true;
                }
            }
            let distinct = cluster_sizes.len();
            let mb = (!ambiguous && distinct == 2).then(|| [cluster_sizes[0], cluster_sizes[1]]);
            Ok(SpectrumSummary {
                mode: ArithmeticMode::Floating,
                eigenvalues: eigen,
                cluster_sizes,
                distinct_count: distinct,
                multiplicity_bipartition: mb,
                ambiguous,
            })
        }
    }
}

fn float_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let sym = nalgebra::linalg::SymmetricEigen::new(m.clone());
    sym.eigenvalues.iter().copied().collect()
}

fn exact_cluster_sizes(dec: &[(crate::rat::RatPoly, usize)], eigen: &[f64]) -> Vec<usize> {
    // Group the floating approximations by nearest multiplicity structure:
    // total count per multiplicity m is m * deg(f_m); for display we greedily
    // chunk the sorted eigenvalues. Exactness lives in distinct_count, not here.
    let distinct: usize = dec.iter().map(|(f, _)| f.degree()).sum();
    if distinct == 0 || eigen.is_empty() {
        return vec![];
    }
    // Greedy split into `distinct` clusters at the largest gaps.
    let mut gaps: Vec<(f64, usize)> = eigen.windows(2).enumerate().map(|(i, w)| (w[1] - w[0], i + 1)).collect();
    gaps.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut cuts: Vec<usize> = gaps.iter().take(distinct - 1).map(|&(_, i)| i).collect();
    cuts.sort_unstable();
    cuts.push(eigen.len());
    let mut sizes = Vec::new();
    let mut prev = 0;
    for c in cuts {
        sizes.push(c - prev);
        prev = c;
    }
    sizes
}

/// Check the two-eigenvalue minimal-polynomial identity
/// `(A − λ₁I)(A − λ₂I) = 0` for a matrix whose spectrum summary reported
/// exactly two clusters. Exact matrices are checked exactly through the
/// squarefree part; floating matrices within `1e-9` of scale.
pub fn check_two_eigenvalue_identity(a: &MatrixData, summary: &SpectrumSummary) -> bool {
    if summary.distinct_count != 2 || summary.ambiguous {
        return false;
    }
    match a {
        MatrixData::Exact(m) => {
            let dec = m.char_poly().squarefree_decomposition();
            let q = dec.iter().fold(crate::rat::RatPoly::new(vec![num::traits::One::one()]), |acc, (f, _)| acc.mul(f));
            // q is the squarefree part, degree 2: q(A) must vanish.
            debug_assert_eq!(q.degree(), 2);
            let c = q.coeffs();
            let a2 = m.mul(m);
            let n = m.rows();
            let mut res = a2;
            for i in 0..n {
                for j in 0..n {
                    let mut v = res.get(i, j) + &c[1] * m.get(i, j);
                    if i == j {
                        v += &c[0];
                    }
                    res.set(i, j, v);
                }
            }
            res.is_zero()
        }
        MatrixData::Float(m) => {
            let lo = cluster_mean(summary, 0);
            let hi = cluster_mean(summary, 1);
            let n = m.nrows();
            let id = DMatrix::<f64>::identity(n, n);
            let res = (m - &id * lo) * (m - &id * hi);
            let scale = m.amax().max(1.0).powi(2);
            res.amax() <= 1e-9 * scale
        }
    }
}

/// Mean of the k-th eigenvalue cluster (ascending).
pub fn cluster_mean(summary: &SpectrumSummary, k: usize) -> f64 {
    let mut idx = 0usize;
    for (c, &sz) in summary.cluster_sizes.iter().enumerate() {
        if c == k {
            let slice = &summary.eigenvalues[idx..idx + sz];
            return slice.iter().sum::<f64>() / sz as f64;
        }
        idx += sz;
    }
    f64::NAN
}

// ----------------------------------------------------------------- SSP check

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SspVerdict {
    Ssp,
    NotSsp,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SspReport {
    pub mode: ArithmeticMode,
    pub constraint_rows: usize,
    pub constraint_cols: usize,
    pub kernel_dimension: usize,
    pub smallest_singular_value: Option<f64>,
    pub verdict: SspVerdict,
}

/// Decide the strong spectral property: the only symmetric X with zero
/// diagonal, zeros on the edges of `g`, and `AX = XA` must be X = 0.
/// The variables are one per non-edge; the Hadamard conditions are
/// eliminated structurally rather than tested.
pub fn ssp_check(a: &MatrixData, g: &Graph, tol: &Tolerances) -> Result<SspReport, VerifierError> {
    let pat = pattern_check(a, g, tol)?;
    if !pat.ok {
        let (i, j) = pat.violation.expect("violation recorded");
        return Err(VerifierError::PatternMismatch(i, j));
    }
    let n = g.n();
    let mut vars = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !g.has_edge(i, j) {
                vars.push((i, j));
            }
        }
    }
    let rows = n * (n - 1) / 2;
    let cols = vars.len();
    if cols == 0 {
        // No free entries at all: X = 0 is forced.
        return Ok(SspReport {
            mode: if a.is_exact() { ArithmeticMode::Exact } else { ArithmeticMode::Floating },
            constraint_rows: rows,
            constraint_cols: 0,
            kernel_dimension: 0,
            smallest_singular_value: None,
            verdict: SspVerdict::Ssp,
        });
    }
    let mut var_index = std::collections::HashMap::new();
    for (k, &(p, q)) in vars.iter().enumerate() {
        var_index.insert((p, q), k);
        var_index.insert((q, p), k);
    }
    // Commutator row for the strictly-upper entry (i,j):
    // (AX − XA)[i,j] = Σ_k A[i,k] X[k,j] − X[i,k] A[k,j].
    match a {
        MatrixData::Exact(m) => {
            let mut sys = RatMatrix::zeros(rows, cols);
            let mut r = 0usize;
            for i in 0..n {
                for j in i + 1..n {
                    for k in 0..n {
                        if let Some(&v) = var_index.get(&(k, j)) {
                            let c = sys.get(r, v) + m.get(i, k);
                            sys.set(r, v, c);
                        }
                        if let Some(&v) = var_index.get(&(i, k)) {
                            let c = sys.get(r, v) - m.get(k, j);
                            sys.set(r, v, c);
                        }
                    }
                    r += 1;
                }
            }
            let kernel = sys.kernel_dimension();
            Ok(SspReport {
                mode: ArithmeticMode::Exact,
                constraint_rows: rows,
                constraint_cols: cols,
                kernel_dimension: kernel,
                smallest_singular_value: None,
                verdict: if kernel == 0 { SspVerdict::Ssp } else { SspVerdict::NotSsp },
            })
        }
        MatrixData::Float(m) => {
            let mut sys = DMatrix::<f64>::zeros(rows, cols);
            let mut r = 0usize;
            for i in 0..n {
                for j in i + 1..n {
                    for k in 0..n {
                        if let Some(&v) = var_index.get(&(k, j)) {
                            sys[(r, v)] += m[(i, k)];
                        }
                        if let Some(&v) = var_index.get(&(i, k)) {
                            sys[(r, v)] -= m[(k, j)];
                        }
                    }
                    r += 1;
                }
            }
            let svals = sys.svd(false, false).singular_values;
            let smax = svals.iter().fold(0.0f64, |s, &x| s.max(x));
            let smin = if cols > rows {
                0.0
            } else {
                svals.iter().fold(f64::INFINITY, |s, &x| s.min(x))
            };
            let rank = svals.iter().filter(|&&s| s > tol.rank * smax.max(1e-300)).count();
            let kernel = cols.saturating_sub(rank.min(cols));
            // Ambiguity band: verdicts only outside [rank, 10·rank] of scale.
            let ratio = if smax > 0.0 { smin / smax } else { 0.0 };
            let verdict = if ratio > 10.0 * tol.rank {
                SspVerdict::Ssp
            } else if ratio < tol.rank {
                SspVerdict::NotSsp
            } else {
                SspVerdict::Inconclusive
            };
            Ok(SspReport {
                mode: ArithmeticMode::Floating,
                constraint_rows: rows,
                constraint_cols: cols,
                kernel_dimension: kernel,
                smallest_singular_value: Some(smin),
                verdict,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_i64, RatMatrix};

    fn exact(rows: &[&[i64]]) -> MatrixData {
        MatrixData::Exact(RatMatrix::from_i64_rows(rows))
    }

    #[test]
    fn pattern_check_cases() {
        let k2 = Graph::complete(2);
        let flip = exact(&[&[0, 1], &[1, 0]]);
        assert!(pattern_check(&flip, &k2, &Tolerances::default()).unwrap().ok);
        let id = exact(&[&[1, 0], &[0, 1]]);
        let rep = pattern_check(&id, &k2, &Tolerances::default()).unwrap();
        assert!(!rep.ok);
        assert_eq!(rep.violation, Some((0, 1)));
    }

    #[test]
    fn non_symmetric_rejected() {
        let m = exact(&[&[0, 1], &[2, 0]]);
        assert!(matches!(
            pattern_check(&m, &Graph::complete(2), &Tolerances::default()),
            Err(VerifierError::NotSymmetric(0, 1))
        ));
    }

    #[test]
    fn distinct_counts() {
        let tol = Tolerances::default();
        let id5 = MatrixData::Exact(RatMatrix::identity(5));
        assert_eq!(distinct_eigenvalues(&id5, &tol).unwrap().distinct_count, 1);
        let d = exact(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 3]]);
        let s = distinct_eigenvalues(&d, &tol).unwrap();
        assert_eq!(s.distinct_count, 2);
        assert_eq!(s.multiplicity_bipartition, Some([2, 1]));
        assert!(check_two_eigenvalue_identity(&d, &s));
        // floating path
        let f = MatrixData::Float(nalgebra::dmatrix![1.0, 0.0; 0.0, -1.0]);
        let s = distinct_eigenvalues(&f, &tol).unwrap();
        assert_eq!(s.distinct_count, 2);
        assert!(!s.ambiguous);
        assert!(check_two_eigenvalue_identity(&f, &s));
    }

    #[test]
    fn ambiguity_is_flagged() {
        let tol = Tolerances::default();
        // Two eigenvalues separated by just a few cluster tolerances.
        let eps = 3e-7;
        let f = MatrixData::Float(nalgebra::dmatrix![1.0, 0.0; 0.0, 1.0 + eps]);
        let s = distinct_eigenvalues(&f, &tol).unwrap();
        assert!(s.ambiguous, "{s:?}");
    }

    #[test]
    fn ssp_hand_cases() {
        let tol = Tolerances::default();
        // diag(1,2) on the empty graph: the lone free entry must vanish.
        let a = exact(&[&[1, 0], &[0, 2]]);
        let rep = ssp_check(&a, &Graph::empty(2), &tol).unwrap();
        assert_eq!(rep.kernel_dimension, 0);
        assert_eq!(rep.verdict, SspVerdict::Ssp);
        assert_eq!(rep.constraint_cols, 1);
        // the identity commutes with everything: kernel dimension 1.
        let id = exact(&[&[1, 0], &[0, 1]]);
        let rep = ssp_check(&id, &Graph::empty(2), &tol).unwrap();
        assert_eq!(rep.kernel_dimension, 1);
        assert_eq!(rep.verdict, SspVerdict::NotSsp);
        // complete pattern: no variables, trivially SSP.
        let flip = exact(&[&[0, 1], &[1, 0]]);
        let rep = ssp_check(&flip, &Graph::complete(2), &tol).unwrap();
        assert_eq!(rep.verdict, SspVerdict::Ssp);
        assert_eq!(rep.constraint_cols, 0);
    }

    #[test]
    fn ssp_exact_and_float_agree() {
        let tol = Tolerances::default();
        let cases: Vec<(RatMatrix, Graph)> = vec![
            (RatMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]), Graph::empty(2)),
            (RatMatrix::from_i64_rows(&[&[1, 0], &[0, 1]]), Graph::empty(2)),
            (
                RatMatrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]),
                Graph::path(3),
            ),
        ];
        for (m, g) in cases {
            let e = ssp_check(&MatrixData::Exact(m.clone()), &g, &tol).unwrap();
            let f = ssp_check(&MatrixData::Float(m.to_f64()), &g, &tol).unwrap();
            assert_eq!(e.kernel_dimension, f.kernel_dimension);
            match (e.verdict, f.verdict) {
                (SspVerdict::Ssp, SspVerdict::Ssp) | (SspVerdict::NotSsp, SspVerdict::NotSsp) => {}
                other => panic!("modes disagree: {other:?}"),
            }
        }
    }

    #[test]
    fn ssp_invariant_under_relabeling() {
        let tol = Tolerances::default();
        // a patterned matrix on P3 and a relabeled copy
        let m = RatMatrix::from_i64_rows(&[&[1, 2, 0], &[2, 0, 3], &[0, 3, -1]]);
        let g = Graph::path(3);
        let base = ssp_check(&MatrixData::Exact(m.clone()), &g, &tol).unwrap();
        let perm = [2usize, 0, 1];
        let pm = RatMatrix::from_fn(3, 3, |i, j| {
            // position (perm[i], perm[j]) of the new matrix holds old (i,j)
            let inv = |x: usize| perm.iter().position(|&p| p == x).unwrap();
            m.get(inv(i), inv(j)).clone()
        });
        let pg = g.permuted(&perm);
        let rep = ssp_check(&MatrixData::Exact(pm), &pg, &tol).unwrap();
        assert_eq!(base.kernel_dimension, rep.kernel_dimension);
        assert_eq!(base.verdict, rep.verdict);
    }

    #[test]
    fn exact_matches_float_distinct_count() {
        let tol = Tolerances::default();
        let m = RatMatrix::from_i64_rows(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        let e = distinct_eigenvalues(&MatrixData::Exact(m.clone()), &tol).unwrap();
        let f = distinct_eigenvalues(&MatrixData::Float(m.to_f64()), &tol).unwrap();
        assert!(!f.ambiguous);
        assert_eq!(e.distinct_count, f.distinct_count);
        assert_eq!(rat_i64(4), rat_i64(4));
    }
}
