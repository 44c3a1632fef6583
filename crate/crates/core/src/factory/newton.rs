//! Pattern-constrained Gauss–Newton solvers. A symmetric matrix with a fixed
//! off-diagonal support is parametrized by one variable per diagonal entry
//! and one per edge; the solvers project such matrices onto the involution
//! manifold (A² = I) or onto a fixed characteristic polynomial, with minimum
//! norm steps from an SVD least-squares solve.

use nalgebra::{DMatrix, DVector};

use crate::factory::FactoryError;
use crate::graph::Graph;

/// Variable layout for symmetric matrices supported on a graph pattern:
/// first the n diagonal entries, then the edges in row-major order.
#[derive(Clone, Debug)]
pub struct PatternVars {
    n: usize,
    positions: Vec<(usize, usize)>,
}

impl PatternVars {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut positions: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        positions.extend(g.edges());
        PatternVars { n, positions }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    /// Indices of the off-diagonal (edge) variables.
    pub fn edge_var_range(&self) -> std::ops::Range<usize> {
        self.n..self.positions.len()
    }

    pub fn matrix(&self, x: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::<f64>::zeros(self.n, self.n);
        for (k, &(i, j)) in self.positions.iter().enumerate() {
            m[(i, j)] = x[k];
            m[(j, i)] = x[k];
        }
        m
    }

    pub fn extract(&self, m: &DMatrix<f64>) -> Vec<f64> {
        self.positions.iter().map(|&(i, j)| m[(i, j)]).collect()
    }
}

/// Row index of the packed upper triangle (i ≤ j).
fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j);
    i * n - i * (i + 1) / 2 + j
}

pub struct NewtonOutcome {
    pub matrix: DMatrix<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Project onto the involution manifold: find symmetric pattern-supported A
/// with `A² = I` (optionally with a fixed trace), starting at `x0`.
pub fn project_involution(
    vars: &PatternVars,
    x0: &[f64],
    fixed_trace: Option<f64>,
    max_iter: usize,
) -> Result<NewtonOutcome, FactoryError> {
    let n = vars.dim();
    let m_rows = n * (n + 1) / 2 + usize::from(fixed_trace.is_some());
    let residual = |x: &[f64]| -> DVector<f64> {
        let a = vars.matrix(x);
        let q = &a * &a - DMatrix::<f64>::identity(n, n);
        let mut r = DVector::<f64>::zeros(m_rows);
        for i in 0..n {
            for j in i..n {
                r[upper_index(n, i, j)] = q[(i, j)];
            }
        }
        if let Some(t) = fixed_trace {
            r[m_rows - 1] = a.trace() - t;
        }
        r
    };
    let jacobian = |x: &[f64]| -> DMatrix<f64> {
        let a = vars.matrix(x);
        let mut jac = DMatrix::<f64>::zeros(m_rows, vars.len());
        for (k, &(p, q)) in vars.positions().iter().enumerate() {
            // d(A²) = E·A + A·E with E the symmetric unit at (p,q):
            // dQ[i][j] = [i=p]A[q][j] + [i=q]A[p][j] + [j=p]A[i][q] + [j=q]A[i][p]
            // (single-delta form when p = q). Only rows touching p or q are hit.
            let entry = |i: usize, j: usize| -> f64 {
                let mut v = 0.0;
                if i == p {
                    v += a[(q, j)];
                }
                if j == p {
                    v += a[(i, q)];
                }
                if p != q {
                    if i == q {
                        v += a[(p, j)];
                    }
                    if j == q {
                        v += a[(i, p)];
                    }
                }
                v
            };
            for t in 0..n {
                let (i1, j1) = if p <= t { (p, t) } else { (t, p) };
                jac[(upper_index(n, i1, j1), k)] = entry(i1, j1);
                if p != q {
                    let (i2, j2) = if q <= t { (q, t) } else { (t, q) };
                    jac[(upper_index(n, i2, j2), k)] = entry(i2, j2);
                }
            }
            if fixed_trace.is_some() && p == q {
                jac[(m_rows - 1, k)] = 1.0;
            }
        }
        jac
    };
    gauss_newton(vars, x0, residual, jacobian, max_iter, 1e-13)
}

/// Faddeev–LeVerrier characteristic polynomial of a symmetric matrix:
/// returns coefficients `c_1..c_n` of `det(xI−A) = x^n + c_1 x^{n−1} + …`
/// together with the adjugate-expansion matrices used for gradients.
pub fn charpoly_coefficients(a: &DMatrix<f64>) -> (Vec<f64>, Vec<DMatrix<f64>>) {
    let n = a.nrows();
    let mut coeffs = Vec::with_capacity(n);
    let mut stages = Vec::with_capacity(n);
    let mut m = DMatrix::<f64>::identity(n, n);
    for k in 1..=n {
        stages.push(m.clone());
        let am = a * &m;
        let c = -am.trace() / k as f64;
        coeffs.push(c);
        m = am + DMatrix::<f64>::identity(n, n) * c;
    }
    (coeffs, stages)
}

/// Project onto the isospectral set with the given characteristic-polynomial
/// coefficients (c_1..c_n), over the pattern variables. Rows are scaled by
/// the target coefficient magnitudes to keep the system balanced.
pub fn project_charpoly(
    vars: &PatternVars,
    x0: &[f64],
    target: &[f64],
    max_iter: usize,
) -> Result<NewtonOutcome, FactoryError> {
    let n = vars.dim();
    assert_eq!(target.len(), n);
    let scales: Vec<f64> = target.iter().map(|c| c.abs().max(1.0)).collect();
    let residual = |x: &[f64]| -> DVector<f64> {
        let a = vars.matrix(x);
        let (coeffs, _) = charpoly_coefficients(&a);
        DVector::from_iterator(n, coeffs.iter().zip(target).zip(&scales).map(|((c, t), s)| (c - t) / s))
    };
    let jacobian = |x: &[f64]| -> DMatrix<f64> {
        let a = vars.matrix(x);
        let (_, stages) = charpoly_coefficients(&a);
        let mut jac = DMatrix::<f64>::zeros(n, vars.len());
        for (row, stage) in stages.iter().enumerate() {
            for (k, &(p, q)) in vars.positions().iter().enumerate() {
                let g = if p == q { -stage[(p, p)] } else { -2.0 * stage[(p, q)] };
                jac[(row, k)] = g / scales[row];
            }
        }
        jac
    };
    gauss_newton(vars, x0, residual, jacobian, max_iter, 1e-12)
}

fn gauss_newton(
    vars: &PatternVars,
    x0: &[f64],
    residual: impl Fn(&[f64]) -> DVector<f64>,
    jacobian: impl Fn(&[f64]) -> DMatrix<f64>,
    max_iter: usize,
    tol: f64,
) -> Result<NewtonOutcome, FactoryError> {
    let mut x = x0.to_vec();
    let mut r = residual(&x);
    let mut rnorm = r.norm();
    for iter in 0..max_iter {
        if rnorm <= tol {
            return Ok(NewtonOutcome { matrix: vars.matrix(&x), residual_norm: rnorm, iterations: iter });
        }
        let jac = jacobian(&x);
        let svd = jac.svd(true, true);
        let Ok(step) = svd.solve(&(-&r), 1e-12) else {
            return Err(FactoryError::Convergence("SVD solve failed".into()));
        };
        // damped line search
        let mut accepted = false;
        let mut scale = 1.0f64;
        for _ in 0..8 {
            let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi + scale * si).collect();
            let rc = residual(&cand);
            let cnorm = rc.norm();
            if cnorm < rnorm {
                x = cand;
                r = rc;
                rnorm = cnorm;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            return Err(FactoryError::Convergence(format!(
                "stalled at residual {rnorm:.3e} after {iter} iterations"
            )));
        }
    }
    if rnorm <= tol {
        Ok(NewtonOutcome { matrix: vars.matrix(&x), residual_norm: rnorm, iterations: max_iter })
    } else {
        Err(FactoryError::Convergence(format!(
            "residual {rnorm:.3e} above {tol:.1e} after {max_iter} iterations"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involution_projection_from_near_solution() {
        // K3 pattern: the orthogonal complete realization perturbed slightly
        let g = Graph::complete(3);
        let vars = PatternVars::new(&g);
        let exact = DMatrix::from_row_slice(
            3,
            3,
            &[-1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0],
        );
        let mut x0 = vars.extract(&exact);
        for (i, v) in x0.iter_mut().enumerate() {
            *v += 1e-3 * ((i as f64 * 0.7).sin());
        }
        let out = project_involution(&vars, &x0, None, 50).unwrap();
        assert!(out.residual_norm <= 1e-13);
        let a = out.matrix;
        assert!((&a * &a - DMatrix::<f64>::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn charpoly_coefficients_match_known() {
        // diag(1, 2): x^2 - 3x + 2
        let a = DMatrix::from_diagonal(&nalgebra::dvector![1.0, 2.0]);
        let (c, _) = charpoly_coefficients(&a);
        assert!((c[0] + 3.0).abs() < 1e-14);
        assert!((c[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn charpoly_projection_recovers_spectrum() {
        // start near diag(1,2,3) under the complete pattern and ask for the
        // same characteristic polynomial
        let g = Graph::complete(3);
        let vars = PatternVars::new(&g);
        let target_m = DMatrix::from_fn(3, 3, |i, j| if i == j { (i + 1) as f64 } else { 0.35 });
        let (target, _) = charpoly_coefficients(&target_m);
        let mut x0 = vars.extract(&target_m);
        for (i, v) in x0.iter_mut().enumerate() {
            *v += 0.02 * ((i as f64 + 0.3).cos());
        }
        let out = project_charpoly(&vars, &x0, &target, 60).unwrap();
        let (got, _) = charpoly_coefficients(&out.matrix);
        for (a, b) in got.iter().zip(&target) {
            assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
        }
    }
}
