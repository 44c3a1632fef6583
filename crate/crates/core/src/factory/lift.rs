//! Isospectral lifts. A realization with the strong spectral property
//! extends to any supergraph on the same vertices with the same spectrum;
//! the numerical route seeds the new edges with small values and projects
//! back onto the fixed characteristic polynomial. Joined duplication of a
//! two-eigenvalue realization is done in closed form by a plane rotation of
//! the extended matrix, exactly in rational arithmetic when the spectrum is
//! rational.

use nalgebra::DMatrix;
use num::traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::factory::newton::{charpoly_coefficients, project_involution, PatternVars};
use crate::factory::{Construction, FactoryError, Params, Realization};
use crate::graph::Graph;
use crate::rat::{rat_frac, Rat, RatMatrix};
use crate::verifier::{
    cluster_mean, distinct_eigenvalues, pattern_check, ssp_check, MatrixData, SspVerdict,
    Tolerances,
};

/// Extend a realization with the strong spectral property to a supergraph of
/// its pattern, keeping the spectrum as a multiset within `1e-9` of scale.
/// New-edge entries start at a small magnitude and must stay above the
/// nonzero floor; convergence failures are reported, never silently
/// degraded.
pub fn supergraph_lift(
    a: &Realization,
    gsup: &Graph,
    seed: u64,
    tol: &Tolerances,
) -> Result<Realization, FactoryError> {
    if gsup.n() != a.pattern.n() || !a.pattern.is_spanning_subgraph_of(gsup) {
        return Err(FactoryError::InvalidInput(
            "lift target must be a supergraph on the same vertex set".into(),
        ));
    }
    let ssp = ssp_check(&a.matrix, &a.pattern, tol)?;
    if ssp.verdict != SspVerdict::Ssp {
        return Err(FactoryError::InvalidInput(
            "supergraph lift requires a verified strong spectral property".into(),
        ));
    }
    if gsup.edge_count() == a.pattern.edge_count() {
        return Ok(a.clone());
    }
    let base = a.matrix.to_float();
    let n = base.nrows();
    let spectrum = {
        let mut e = nalgebra::linalg::SymmetricEigen::new(base.clone()).eigenvalues;
        e.as_mut_slice().sort_by(f64::total_cmp);
        e
    };
    let lo = spectrum[0];
    let hi = spectrum[n - 1];
    if hi - lo < 1e-9 {
        return Err(FactoryError::InvalidInput("lift seed spectrum is a single point".into()));
    }
    // Normalize the spectrum into [-1, 1] to keep the polynomial
    // coefficients balanced, lift there, then map back.
    let center = (hi + lo) / 2.0;
    let half = (hi - lo) / 2.0;
    let id = DMatrix::<f64>::identity(n, n);
    let normalized = (&base - &id * center) / half;
    let spec = distinct_eigenvalues(&a.matrix, tol)?;
    // Two-eigenvalue seeds project onto the involution manifold with a fixed
    // trace: that pins repeated eigenvalues quadratically, where matching
    // polynomial coefficients would lose half the digits per multiplicity.
    let two_point = spec.distinct_count == 2 && !spec.ambiguous;
    let fixed_trace = two_point.then(|| normalized.trace().round());
    let target = if two_point {
        Vec::new()
    } else {
        charpoly_coefficients(&normalized).0
    };
    let vars = PatternVars::new(gsup);
    let new_edges: Vec<usize> = vars
        .edge_var_range()
        .filter(|&k| {
            let (i, j) = vars.positions()[k];
            !a.pattern.has_edge(i, j)
        })
        .collect();
    let scale_spec = spectrum.iter().fold(1.0f64, |s, &x| s.max(x.abs()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xd1f7_0c01);
    for attempt in 0..10u32 {
        let delta = 0.05 / f64::from(1 << attempt.min(6));
        let mut x0 = vars.extract(&normalized);
        for &k in &new_edges {
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            x0[k] = sign * delta * (0.5 + rng.random::<f64>());
        }
        let projected = if two_point {
            project_involution(&vars, &x0, fixed_trace, 90)
        } else {
            crate::factory::newton::project_charpoly(&vars, &x0, &target, 90)
        };
        let Ok(out) = projected else { continue };
        let lifted = out.matrix * half + &id * center;
        // spectrum as a multiset
        let mut got = nalgebra::linalg::SymmetricEigen::new(lifted.clone()).eigenvalues;
        got.as_mut_slice().sort_by(f64::total_cmp);
        let drift = spectrum
            .iter()
            .zip(got.iter())
            .fold(0.0f64, |m, (t, g)| m.max((t - g).abs()));
        if drift > 1e-9 * scale_spec {
            continue;
        }
        let x = vars.extract(&lifted);
        if new_edges.iter().any(|&k| x[k].abs() < tol.nonzero_floor) {
            continue;
        }
        let md = MatrixData::Float(lifted);
        if !pattern_check(&md, gsup, tol)?.ok {
            continue;
        }
        let ssp_after = ssp_check(&md, gsup, tol)?;
        if ssp_after.verdict != SspVerdict::Ssp {
            continue;
        }
        let mut params = a.params.clone();
        params.insert("lift_seed".into(), seed.to_string());
        params.insert("lift_attempt".into(), attempt.to_string());
        params.insert("lifted_from".into(), format!("{:?}", a.construction));
        return Realization {
            matrix: md,
            pattern: gsup.clone(),
            construction: Construction::Lift,
            params,
            claimed_distinct: a.claimed_distinct,
            claimed_ssp: true,
        }
        .verified(tol);
    }
    Err(FactoryError::Convergence(
        "supergraph lift did not reach the target spectrum on any attempt".into(),
    ))
}

/// Rational sine/cosine pairs for the duplication rotation.
const ROTATIONS: [(i64, i64, i64); 3] = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];

/// Joined duplication of a two-eigenvalue realization: normalize the matrix
/// so it squares to the identity, append the duplicated vertex as a fixed
/// point, and rotate in the (v, new) plane so the new vertex picks up
/// exactly the closed neighborhood of `v`. Exact when the two eigenvalues
/// are rational.
pub fn jdup_lift(a: &Realization, v: usize, tol: &Tolerances) -> Result<Realization, FactoryError> {
    if v >= a.pattern.n() {
        return Err(FactoryError::InvalidInput(format!("vertex {v} out of range")));
    }
    let spec = distinct_eigenvalues(&a.matrix, tol)?;
    if spec.distinct_count != 2 || spec.ambiguous {
        return Err(FactoryError::InvalidInput(
            "joined duplication needs exactly two distinct eigenvalues".into(),
        ));
    }
    let target_pattern = a.pattern.jdup(v).map_err(|e| FactoryError::InvalidInput(e.to_string()))?;
    // Exact route when both eigenvalues are rational.
    if let MatrixData::Exact(m) = &a.matrix {
        if let Some(roots) = m.char_poly().rational_roots_with_multiplicity() {
            if roots.len() == 2 {
                return jdup_exact(a, m, v, &roots, &target_pattern, tol);
            }
        }
    }
    jdup_float(a, v, &spec_bounds(&spec), &target_pattern, tol)
}

fn spec_bounds(spec: &crate::verifier::SpectrumSummary) -> (f64, f64) {
    (cluster_mean(spec, 0), cluster_mean(spec, 1))
}

fn jdup_exact(
    a: &Realization,
    m: &RatMatrix,
    v: usize,
    roots: &[(Rat, usize)],
    target_pattern: &Graph,
    tol: &Tolerances,
) -> Result<Realization, FactoryError> {
    let n = m.rows();
    let lo = &roots[0].0;
    let hi = &roots[1].0;
    let center = (lo + hi) / crate::rat::rat_i64(2);
    let half = (hi - lo) / crate::rat::rat_i64(2);
    // normalized involution
    let norm = RatMatrix::from_fn(n, n, |i, j| {
        let mut x = m.get(i, j) - if i == j { center.clone() } else { Rat::zero() };
        x /= half.clone();
        x
    });
    let d = norm.get(v, v).clone();
    // fixed-point eigenvalue for the appended vertex: pick the sign far from d
    let e: Rat = if (crate::rat::rat_i64(1) - &d).abs() >= (crate::rat::rat_i64(1) + &d).abs() {
        crate::rat::rat_i64(1)
    } else {
        crate::rat::rat_i64(-1)
    };
    let mut last_err = None;
    for &(sc, ss, hyp) in &ROTATIONS {
        let c = rat_frac(sc, hyp);
        let s = rat_frac(ss, hyp);
        let mut big = RatMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                big.set(i, j, norm.get(i, j).clone());
            }
        }
        // rotate in the (v, n) plane
        for j in 0..n {
            if j == v {
                continue;
            }
            let mvj = norm.get(v, j).clone();
            big.set(v, j, &c * &mvj);
            big.set(j, v, &c * &mvj);
            big.set(n, j, -(&s * &mvj));
            big.set(j, n, -(&s * &mvj));
        }
        let cc = &c * &c;
        let ss2 = &s * &s;
        let cs = &c * &s;
        big.set(v, v, &cc * &d + &ss2 * &e);
        big.set(n, n, &ss2 * &d + &cc * &e);
        let off = &cs * (&e - &d);
        big.set(v, n, off.clone());
        big.set(n, v, off);
        // back to the original spectrum
        let lifted = RatMatrix::from_fn(n + 1, n + 1, |i, j| {
            let mut x = big.get(i, j) * &half;
            if i == j {
                x += &center;
            }
            x
        });
        let md = MatrixData::Exact(lifted);
        if !pattern_check(&md, target_pattern, tol)?.ok {
            last_err = Some(FactoryError::Postcondition(
                "duplication rotation broke the pattern".into(),
            ));
            continue;
        }
        let ssp = ssp_check(&md, target_pattern, tol)?;
        let mut params = a.params.clone();
        params.insert("jdup_vertex".into(), v.to_string());
        params.insert("rotation".into(), format!("{sc}/{hyp},{ss}/{hyp}"));
        return Realization {
            matrix: md,
            pattern: target_pattern.clone(),
            construction: Construction::Lift,
            params,
            claimed_distinct: 2,
            claimed_ssp: ssp.verdict == SspVerdict::Ssp,
        }
        .verified(tol);
    }
    Err(last_err.unwrap_or_else(|| FactoryError::Convergence("no rotation preserved the pattern".into())))
}

fn jdup_float(
    a: &Realization,
    v: usize,
    (lo, hi): &(f64, f64),
    target_pattern: &Graph,
    tol: &Tolerances,
) -> Result<Realization, FactoryError> {
    let base = a.matrix.to_float();
    let n = base.nrows();
    let center = (hi + lo) / 2.0;
    let half = (hi - lo) / 2.0;
    let id = DMatrix::<f64>::identity(n, n);
    let norm = (&base - &id * center) / half;
    let d = norm[(v, v)];
    let e = if (1.0 - d).abs() >= (1.0 + d).abs() { 1.0 } else { -1.0 };
    let mut last_err = None;
    for &(sc, ss, hyp) in &ROTATIONS {
        let c = sc as f64 / hyp as f64;
        let s = ss as f64 / hyp as f64;
        let mut big = DMatrix::<f64>::zeros(n + 1, n + 1);
        big.view_mut((0, 0), (n, n)).copy_from(&norm);
        for j in 0..n {
            if j == v {
                continue;
            }
            let mvj = norm[(v, j)];
            big[(v, j)] = c * mvj;
            big[(j, v)] = c * mvj;
            big[(n, j)] = -s * mvj;
            big[(j, n)] = -s * mvj;
        }
        big[(v, v)] = c * c * d + s * s * e;
        big[(n, n)] = s * s * d + c * c * e;
        let off = c * s * (e - d);
        big[(v, n)] = off;
        big[(n, v)] = off;
        // polish: the normalization of a floating seed may carry residue
        let resid = (&big * &big - DMatrix::<f64>::identity(n + 1, n + 1)).norm();
        let polished = if resid > 1e-13 {
            let vars = PatternVars::new(target_pattern);
            let x0 = vars.extract(&big);
            match project_involution(&vars, &x0, None, 40) {
                Ok(out) => out.matrix,
                Err(e) => {
                    last_err = Some(e);
                    continue;
                }
            }
        } else {
            big
        };
        let lifted = polished * half + DMatrix::<f64>::identity(n + 1, n + 1) * center;
        let md = MatrixData::Float(lifted);
        if !pattern_check(&md, target_pattern, tol)?.ok {
            last_err = Some(FactoryError::Postcondition(
                "duplication rotation broke the pattern".into(),
            ));
            continue;
        }
        let ssp = ssp_check(&md, target_pattern, tol)?;
        let mut params = a.params.clone();
        params.insert("jdup_vertex".into(), v.to_string());
        params.insert("rotation".into(), format!("{sc}/{hyp},{ss}/{hyp}"));
        return Realization {
            matrix: md,
            pattern: target_pattern.clone(),
            construction: Construction::Lift,
            params,
            claimed_distinct: 2,
            claimed_ssp: ssp.verdict == SspVerdict::Ssp,
        }
        .verified(tol);
    }
    Err(last_err.unwrap_or_else(|| FactoryError::Convergence("no rotation preserved the pattern".into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{box_k2_realization, m7_matrix, ortho_complete};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn lift_identity_when_no_new_edges() {
        let r = box_k2_realization(3, &tol()).unwrap();
        let same = supergraph_lift(&r, &r.pattern.clone(), 1, &tol()).unwrap();
        assert_eq!(same.pattern, r.pattern);
    }

    #[test]
    fn lift_prism_plus_chord() {
        let r = box_k2_realization(3, &tol()).unwrap();
        let mut gsup = r.pattern.clone();
        gsup.add_edge(0, 4); // a chord across the prism
        let lifted = supergraph_lift(&r, &gsup, 7, &tol()).unwrap();
        assert_eq!(lifted.pattern, gsup);
        let spec = distinct_eigenvalues(&lifted.matrix, &tol()).unwrap();
        assert_eq!(spec.distinct_count, 2);
        let ssp = ssp_check(&lifted.matrix, &gsup, &tol()).unwrap();
        assert_eq!(ssp.verdict, SspVerdict::Ssp);
    }

    #[test]
    fn lift_requires_ssp() {
        // identity on the empty pattern has no SSP; the lift must refuse
        let bad = Realization {
            matrix: MatrixData::Float(DMatrix::<f64>::identity(3, 3)),
            pattern: Graph::empty(3),
            construction: Construction::Search,
            params: Params::new(),
            claimed_distinct: 1,
            claimed_ssp: false,
        };
        let gsup = Graph::complete(3);
        assert!(matches!(
            supergraph_lift(&bad, &gsup, 1, &tol()),
            Err(FactoryError::InvalidInput(_))
        ));
    }

    #[test]
    fn jdup_k2_gives_k3() {
        let r = ortho_complete(2, &tol()).unwrap();
        let lifted = jdup_lift(&r, 0, &tol()).unwrap();
        assert_eq!(lifted.pattern, Graph::complete(3));
        assert!(lifted.matrix.is_exact(), "rational spectrum lifts exactly");
        let spec = distinct_eigenvalues(&lifted.matrix, &tol()).unwrap();
        assert_eq!(spec.distinct_count, 2);
    }

    #[test]
    fn jdup_chain_builds_complete_family() {
        let mut r = ortho_complete(2, &tol()).unwrap();
        for t in 0..4 {
            r = jdup_lift(&r, t % r.pattern.n(), &tol()).unwrap();
            assert_eq!(r.pattern, Graph::complete(3 + t));
        }
    }

    #[test]
    fn jdup_m7_scaled() {
        // the 7-vertex matrix has rational spectrum {0, 4}; duplicating the
        // dominating vertex keeps two eigenvalues on the lifted pattern
        let r = m7_matrix(&tol()).unwrap();
        let lifted = jdup_lift(&r, 0, &tol()).unwrap();
        assert_eq!(lifted.pattern.n(), 8);
        assert!(lifted.matrix.is_exact());
        let spec = distinct_eigenvalues(&lifted.matrix, &tol()).unwrap();
        assert_eq!(spec.distinct_count, 2);
    }

    #[test]
    fn jdup_rejects_three_eigenvalues() {
        let three = Realization {
            matrix: MatrixData::Exact(RatMatrix::from_i64_rows(&[
                &[1, 0, 0],
                &[0, 2, 0],
                &[0, 0, 3],
            ])),
            pattern: Graph::empty(3),
            construction: Construction::Search,
            params: Params::new(),
            claimed_distinct: 3,
            claimed_ssp: false,
        };
        assert!(jdup_lift(&three, 0, &tol()).is_err());
        // two distinct eigenvalues on an edgeless pattern still lift: the new
        // vertex is adjacent to exactly the duplicated one
        let two = Realization {
            matrix: MatrixData::Exact(RatMatrix::from_i64_rows(&[&[1, 0], &[0, 2]])),
            pattern: Graph::empty(2),
            construction: Construction::Search,
            params: Params::new(),
            claimed_distinct: 2,
            claimed_ssp: true,
        };
        let lifted = jdup_lift(&two, 0, &tol()).unwrap();
        assert_eq!(lifted.pattern, Graph::from_edges(3, &[(0, 2)]));
    }
}
