// SPDX-License-Identifier: Apache-2.0

//! Sampled Clarke generalized Jacobians and definiteness tests.
//!
//! `∂F(x)` is the convex hull of limits of Jacobians at nearby points of
//! differentiability. It is approximated by central-difference Jacobians at
//! `m` points drawn from a ball of radius `r` around `x` (intersected with the
//! domain), deduplicated into a finite generator set.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::domain::ConvexDomain;
use crate::error::{ensure_dim, Error, Result};
use crate::hull::nearest_in_hull;
use crate::map::TestMap;
use crate::monotonicity::PairEvaluation;
use crate::par::Exec;
use crate::rng::rng_from;
use crate::types::{dot, norm, sub, TolerancePolicy, VectorPoint, ViolationWitness};

/// Generators closer than this in max-norm are merged.
pub const DEDUP_TOL: f64 = 1e-8;

const MAX_DRAWS_PER_SAMPLE: usize = 20;

pub(crate) mod matrix_serde {
    use nalgebra::DMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>, String> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err("ragged matrix".into());
        }
        Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn serialize<S: Serializer>(ms: &[DMatrix<f64>], s: S) -> Result<S::Ok, S::Error> {
        ms.iter().map(to_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<DMatrix<f64>>, D::Error> {
        let raw: Vec<Vec<Vec<f64>>> = Vec::deserialize(d)?;
        raw.iter().map(|m| from_rows(m).map_err(serde::de::Error::custom)).collect()
    }
}

/// Finite-difference Jacobian with a record of columns that fell back to
/// one-sided differences at the domain boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct FdJacobian {
    pub matrix: DMatrix<f64>,
    pub one_sided: Vec<usize>,
}

/// Central-difference Jacobian of a single-selection map.
pub fn fd_jacobian(map: &TestMap, x: &[f64], h: f64) -> Result<DMatrix<f64>> {
    fd_jacobian_in(map, x, h, None).map(|j| j.matrix)
}

/// Column `i` is `(F(x + h e_i) − F(x − h e_i)) / 2h`; when a domain is given
/// and one side leaves it, the other one-sided difference is used instead.
pub fn fd_jacobian_in(map: &TestMap, x: &[f64], h: f64, domain: Option<&ConvexDomain>) -> Result<FdJacobian> {
    map.require_single()?;
    ensure_dim(map.dim_in(), x.len())?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {h}")));
    }
    let n = map.dim_in();
    let m = map.dim_out();
    let inside = |p: &[f64]| domain.is_none_or(|d| d.contains_raw(p, 1e-12));
    let mut jac = DMatrix::zeros(m, n);
    let mut one_sided = Vec::new();
    let mut f0: Option<Vec<f64>> = None;
    for i in 0..n {
        let mut plus = x.to_vec();
        plus[i] += h;
        let mut minus = x.to_vec();
        minus[i] -= h;
        let (pin, min) = (inside(&plus), inside(&minus));
        let col: Vec<f64> = if pin == min {
            let (fp, fm) = (map.eval(0, &plus)?, map.eval(0, &minus)?);
            fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        } else {
            one_sided.push(i);
            let fx = match &f0 {
                Some(v) => v.clone(),
                None => {
                    let v = map.eval(0, x)?;
                    f0 = Some(v.clone());
                    v
                }
            };
            if pin {
                let fp = map.eval(0, &plus)?;
                fp.iter().zip(&fx).map(|(a, b)| (a - b) / h).collect()
            } else {
                let fm = map.eval(0, &minus)?;
                fx.iter().zip(&fm).map(|(a, b)| (a - b) / h).collect()
            }
        };
        for (r, v) in col.into_iter().enumerate() {
            jac[(r, i)] = v;
        }
    }
    Ok(FdJacobian { matrix: jac, one_sided })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClarkeParams {
    pub radius: f64,
    pub samples: usize,
    pub fd_step: f64,
    pub seed: u64,
}

impl ClarkeParams {
    pub fn new(radius: f64, samples: usize, fd_step: f64, seed: u64) -> Self {
        ClarkeParams { radius, samples, fd_step, seed }
    }
}

/// Finite generator set standing in for `∂F(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixHull {
    #[serde(with = "matrix_serde")]
    pub generators: Vec<DMatrix<f64>>,
    pub center: VectorPoint,
    pub radius: f64,
    pub fd_step: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MatrixHull {
    pub fn from_generators(generators: Vec<DMatrix<f64>>, center: VectorPoint) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidArgument("matrix hull needs at least one generator".into()));
        };
        let shape = first.shape();
        if generators.iter().any(|g| g.shape() != shape || g.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidArgument("generators must share a shape and be finite".into()));
        }
        Ok(MatrixHull { generators, center, radius: 0.0, fd_step: 0.0, samples: 0, seed: 0 })
    }
}

fn max_norm_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Estimates `∂F(x)` from finite-difference Jacobians at points sampled in
/// the ball of radius `radius` around `x`, intersected with `domain`.
pub fn estimate_clarke(
    map: &TestMap,
    x: &VectorPoint,
    params: &ClarkeParams,
    domain: Option<&ConvexDomain>,
    exec: Exec,
) -> Result<MatrixHull> {
    map.require_single()?;
    ensure_dim(map.dim_in(), x.dim())?;
    if params.samples == 0 {
        return Err(Error::InvalidArgument("Clarke sample count must be >= 1".into()));
    }
    if !(params.radius > params.fd_step && params.fd_step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need radius > fd_step > 0, got radius {} and step {}",
            params.radius, params.fd_step
        )));
    }

    let mut rng = rng_from(params.seed);
    let mut points = Vec::with_capacity(params.samples);
    for _ in 0..params.samples * MAX_DRAWS_PER_SAMPLE {
        if points.len() == params.samples {
            break;
        }
        let p = match domain {
            Some(d) => d.sample_ball_with(x.coords(), params.radius, &mut rng),
            None => crate::domain::ball_point(x.coords(), params.radius, &mut rng),
        };
        if domain.is_none_or(|d| d.contains_raw(&p, 1e-10)) {
            points.push(p);
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyNeighbourhood { center: x.coords().to_vec(), radius: params.radius });
    }

    let jacobians = exec.map_range(points.len(), |i| fd_jacobian_in(map, &points[i], params.fd_step, domain));
    let mut generators: Vec<DMatrix<f64>> = Vec::new();
    for j in jacobians {
        let g = j?.matrix;
        if generators.iter().all(|k| max_norm_diff(k, &g) > DEDUP_TOL) {
            generators.push(g);
        }
    }
    Ok(MatrixHull {
        generators,
        center: x.clone(),
        radius: params.radius,
        fd_step: params.fd_step,
        samples: points.len(),
        seed: params.seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    Pd,
    Psd,
    Indefinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdReport {
    pub verdict: Definiteness,
    /// Smallest eigenvalue over the symmetric parts of all generators.
    pub min_eigenvalue: f64,
    /// Direction `u` with `⟨u, G u⟩ < 0`, present iff indefinite.
    pub witness_direction: Option<Vec<f64>>,
    pub generator_index: usize,
}

/// Definiteness of the hull via the symmetric parts of its generators.
///
/// `⟨u, G u⟩ = ⟨u, sym(G) u⟩` and the PSD cone is convex, so checking the
/// generators decides the whole hull.
pub fn psd_check(hull: &MatrixHull, tol: &TolerancePolicy) -> PsdReport {
    psd_check_on(hull, None, tol)
}

/// As [`psd_check`], with quadratic forms restricted to the span of an
/// orthonormal `basis` (the tangent space of a lower-dimensional domain).
pub fn psd_check_on(hull: &MatrixHull, basis: Option<&[Vec<f64>]>, tol: &TolerancePolicy) -> PsdReport {
    let mut min_eig = f64::INFINITY;
    let mut witness = None;
    let mut index = 0;
    for (gi, g) in hull.generators.iter().enumerate() {
        let sym = (g + g.transpose()) * 0.5;
        let (restricted, b) = match basis {
            Some(dirs) => {
                let n = sym.nrows();
                let b = DMatrix::from_fn(n, dirs.len(), |i, j| dirs[j][i]);
                (b.transpose() * &sym * &b, Some(b))
            }
            None => (sym, None),
        };
        let eig = SymmetricEigen::new(restricted);
        let (k, &lam) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty matrix");
        if lam < min_eig {
            min_eig = lam;
            index = gi;
            let v: DVector<f64> = eig.eigenvectors.column(k).into_owned();
            let u = match &b {
                Some(b) => b * v,
                None => v,
            };
            witness = Some(u.iter().copied().collect::<Vec<f64>>());
        }
    }
    let verdict = if min_eig >= tol.eig_tol {
        Definiteness::Pd
    } else if min_eig >= -tol.eig_tol {
        Definiteness::Psd
    } else {
        Definiteness::Indefinite
    };
    PsdReport {
        verdict,
        min_eigenvalue: min_eig,
        witness_direction: if verdict == Definiteness::Indefinite { witness } else { None },
        generator_index: index,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub psd: PsdReport,
    pub witness: Option<ViolationWitness>,
    pub step: Option<f64>,
    /// Indefinite hull but no monotonicity witness along the direction.
    pub discrepancy: bool,
}

/// Turns an indefinite generator into a monotonicity witness: for `u` with
/// `⟨u, G u⟩ < 0`, tries `y = x + t u` for `t ∈ {10⁻¹, …, 10⁻⁶}·r` and keeps
/// the first with `⟨y − x, F(y) − F(x)⟩` below the slack.
pub fn contradiction_probe(
    map: &TestMap,
    x: &VectorPoint,
    hull: &MatrixHull,
    tol: &TolerancePolicy,
    domain: Option<&ConvexDomain>,
) -> Result<ProbeReport> {
    map.require_single()?;
    let psd = psd_check_on(hull, domain.and_then(|d| d.tangent_basis()), tol);
    let Some(u) = psd.witness_direction.clone() else {
        return Ok(ProbeReport { psd, witness: None, step: None, discrepancy: false });
    };
    let fx = map.eval(0, x.coords())?;
    let r = if hull.radius > 0.0 { hull.radius } else { 1.0 };
    for k in 1..=6 {
        let t = 10f64.powi(-k) * r;
        let raw: Vec<f64> = x.coords().iter().zip(&u).map(|(a, b)| a + t * b).collect();
        let y = match domain {
            Some(d) => d.project(&raw),
            None => raw,
        };
        if norm(&sub(&y, x.coords())) == 0.0 {
            continue;
        }
        let fy = map.eval(0, &y)?;
        let e = PairEvaluation::new(y.clone(), x.coords().to_vec(), fy.clone(), fx.clone())?;
        let scaled = tol.scaled_by_max_inner(e.d_inner.abs());
        if e.d_inner < -scaled.slack() {
            let witness = ViolationWitness {
                x: VectorPoint::new(y)?,
                y: x.clone(),
                fx: fy,
                fy: fx,
                selection_x: 0,
                selection_y: 0,
                lhs: e.d_inner,
                rhs: 0.0,
                margin: e.d_inner,
            };
            return Ok(ProbeReport { psd, witness: Some(witness), step: Some(t), discrepancy: false });
        }
    }
    Ok(ProbeReport { psd, witness: None, step: None, discrepancy: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MvtParams {
    pub segments: usize,
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for MvtParams {
    fn default() -> Self {
        MvtParams { segments: 9, radius: 1e-4, samples: 8, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MvtReport {
    /// `F(x) − F(y)`
    pub difference: Vec<f64>,
    pub hull_vectors: Vec<Vec<f64>>,
    pub distance: f64,
    pub threshold: f64,
    pub included: bool,
}

/// Tests `F(x) − F(y) ∈ conv{ G (x − y) : G ∈ ∂F(z), z ∈ [x, y] }` with
/// hulls estimated at equally spaced points of the segment.
pub fn mvt_inclusion(
    map: &TestMap,
    x: &VectorPoint,
    y: &VectorPoint,
    params: &MvtParams,
    tol: &TolerancePolicy,
    domain: Option<&ConvexDomain>,
    exec: Exec,
) -> Result<MvtReport> {
    map.require_single()?;
    let pts = crate::domain::segment_sample(x, y, params.segments)?;
    let dx = sub(x.coords(), y.coords());
    let difference = sub(&map.eval(0, x.coords())?, &map.eval(0, y.coords())?);

    let mut hull_vectors: Vec<Vec<f64>> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let cp = ClarkeParams::new(params.radius, params.samples, tol.fd_step, crate::rng::derive_seed(params.seed, &[i as u64]));
        let hull = estimate_clarke(map, p, &cp, domain, exec)?;
        for g in &hull.generators {
            let v: Vec<f64> = (0..g.nrows()).map(|r| (0..g.ncols()).map(|c| g[(r, c)] * dx[c]).sum()).collect();
            if hull_vectors.iter().all(|w| sub(w, &v).iter().any(|d| d.abs() > 1e-12)) {
                hull_vectors.push(v);
            }
        }
    }
    let proj = nearest_in_hull(&hull_vectors, &difference);
    let threshold = 1e-3 * (1.0 + norm(&difference));
    Ok(MvtReport { included: proj.distance < threshold, difference, hull_vectors, distance: proj.distance, threshold })
}

/// `⟨u, G u⟩`
pub fn quadratic_form(g: &DMatrix<f64>, u: &[f64]) -> f64 {
    let gu: Vec<f64> = (0..g.nrows()).map(|r| (0..g.ncols()).map(|c| g[(r, c)] * u[c]).sum()).collect();
    dot(u, &gu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> VectorPoint {
        VectorPoint::new(v.to_vec()).unwrap()
    }

    fn abs_map() -> TestMap {
        TestMap::from_fn("abs", 1, 1, |x| vec![x[0].abs()]).unwrap()
    }

    fn hull(gs: Vec<DMatrix<f64>>) -> MatrixHull {
        let n = gs[0].ncols();
        MatrixHull::from_generators(gs, VectorPoint::zeros(n)).unwrap()
    }

    #[test]
    fn fd_linear_is_exact() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -3.0, 0.5]);
        let m = TestMap::affine("a", a.clone(), None).unwrap();
        for h in [1e-3, 0.5, 2.0] {
            let j = fd_jacobian(&m, &[0.25, -1.0], h).unwrap();
            assert!(max_norm_diff(&j, &a) < 1e-12);
        }
    }

    #[test]
    fn fd_square_and_abs() {
        let sq = TestMap::from_fn("sq", 1, 1, |x| vec![x[0] * x[0]]).unwrap();
        let j = fd_jacobian(&sq, &[1.0], 1e-6).unwrap();
        assert!((j[(0, 0)] - 2.0).abs() < 1e-9);
        let j = fd_jacobian(&abs_map(), &[0.5], 1e-6).unwrap();
        assert!((j[(0, 0)] - 1.0).abs() < 1e-9);
        assert!(fd_jacobian(&sq, &[1.0], 0.0).is_err());
    }

    #[test]
    fn fd_one_sided_at_box_boundary() {
        let sq = TestMap::from_fn("sq", 1, 1, |x| vec![x[0] * x[0]]).unwrap();
        let d = ConvexDomain::cube(1, 0.0, 1.0).unwrap();
        let j = fd_jacobian_in(&sq, &[1.0], 1e-6, Some(&d)).unwrap();
        assert_eq!(j.one_sided, vec![0]);
        assert!((j.matrix[(0, 0)] - 2.0).abs() < 1e-5);
    }

    #[test]
    fn clarke_of_linear_has_one_generator() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 3.0]);
        let m = TestMap::affine("a", a.clone(), None).unwrap();
        let h = estimate_clarke(&m, &p(&[0.1, 0.2]), &ClarkeParams::new(1e-2, 20, 1e-6, 1), None, Exec::default()).unwrap();
        assert_eq!(h.generators.len(), 1);
        assert!(max_norm_diff(&h.generators[0], &a) < 1e-8);
    }

    #[test]
    fn clarke_of_abs_at_kink() {
        let h = estimate_clarke(&abs_map(), &p(&[0.0]), &ClarkeParams::new(1e-3, 50, 1e-7, 0), None, Exec::default())
            .unwrap();
        let mut vals: Vec<f64> = h.generators.iter().map(|g| g[(0, 0)]).collect();
        vals.sort_by(f64::total_cmp);
        assert_eq!(vals.len(), 2);
        assert!((vals[0] + 1.0).abs() < 1e-6 && (vals[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn clarke_of_square_near_derivative() {
        let sq = TestMap::from_fn("sq", 1, 1, |x| vec![x[0] * x[0]]).unwrap();
        let h = estimate_clarke(&sq, &p(&[1.0]), &ClarkeParams::new(1e-4, 20, 1e-6, 0), None, Exec::default()).unwrap();
        assert!(h.generators.iter().all(|g| (g[(0, 0)] - 2.0).abs() <= 2e-4));
    }

    #[test]
    fn clarke_rejects_bad_params_and_empty_neighbourhood() {
        let sq = TestMap::from_fn("sq", 1, 1, |x| vec![x[0] * x[0]]).unwrap();
        assert!(estimate_clarke(&sq, &p(&[1.0]), &ClarkeParams::new(1e-7, 5, 1e-6, 0), None, Exec::default()).is_err());
        assert!(estimate_clarke(&sq, &p(&[1.0]), &ClarkeParams::new(1e-2, 0, 1e-6, 0), None, Exec::default()).is_err());
        let far = ConvexDomain::cube(1, 5.0, 6.0).unwrap();
        let err = estimate_clarke(&sq, &p(&[1.0]), &ClarkeParams::new(1e-2, 5, 1e-6, 0), Some(&far), Exec::default())
            .unwrap_err();
        assert!(matches!(err, Error::EmptyNeighbourhood { .. }));
    }

    #[test]
    fn psd_examples() {
        let t = TolerancePolicy::default();
        let r = psd_check(&hull(vec![DMatrix::identity(2, 2)]), &t);
        assert_eq!(r.verdict, Definiteness::Pd);
        assert!((r.min_eigenvalue - 1.0).abs() < 1e-12);

        let r = psd_check(&hull(vec![DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])]), &t);
        assert_eq!(r.verdict, Definiteness::Psd);
        assert!(r.min_eigenvalue.abs() < 1e-15);

        let g = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        let r = psd_check(&hull(vec![g.clone()]), &t);
        assert_eq!(r.verdict, Definiteness::Indefinite);
        let u = r.witness_direction.unwrap();
        assert!((u[0].abs() - 1.0).abs() < 1e-12 && u[1].abs() < 1e-12);
        assert!((quadratic_form(&g, &u) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn psd_restricted_to_slice_tangent() {
        // Full 3x3 Jacobian of e^{-σ}(1,1,0) at σ = 0; restricted to the e1,e2 plane.
        let j = DMatrix::from_row_slice(3, 3, &[-1.0, -1.0, 0.0, -1.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
        let basis = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let r = psd_check_on(&hull(vec![j]), Some(&basis), &TolerancePolicy::default());
        assert_eq!(r.verdict, Definiteness::Indefinite);
        assert!((r.min_eigenvalue + 2.0).abs() < 1e-12);
        assert_eq!(r.witness_direction.unwrap()[2], 0.0);
    }

    #[test]
    fn probe_examples() {
        let t = TolerancePolicy::default();
        let neg = TestMap::from_fn("neg", 1, 1, |x| vec![-x[0]]).unwrap();
        let mut h = hull(vec![DMatrix::from_element(1, 1, -1.0)]);
        h.radius = 1.0;
        let r = contradiction_probe(&neg, &p(&[0.0]), &h, &t, None).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(r.step, Some(0.1));
        assert!((w.d_inner() + 0.01).abs() < 1e-15);

        let id = TestMap::from_fn("id", 2, 2, |x| x.to_vec()).unwrap();
        let r = contradiction_probe(&id, &p(&[0.0, 0.0]), &hull(vec![DMatrix::identity(2, 2)]), &t, None).unwrap();
        assert!(r.witness.is_none() && !r.discrepancy);

        let saddle = TestMap::from_fn("saddle", 2, 2, |x| vec![-x[0], x[1]]).unwrap();
        let mut h = hull(vec![DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0])]);
        h.radius = 1.0;
        let w = contradiction_probe(&saddle, &p(&[0.0, 0.0]), &h, &t, None).unwrap().witness.unwrap();
        assert!((w.d_inner() + 0.01).abs() < 1e-15);
    }

    #[test]
    fn mvt_examples() {
        let t = TolerancePolicy::default();
        let prm = MvtParams::default();
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, -1.0]);
        let lin = TestMap::affine("a", a, None).unwrap();
        let r = mvt_inclusion(&lin, &p(&[0.0, 1.0]), &p(&[1.0, -1.0]), &prm, &t, None, Exec::default()).unwrap();
        assert!(r.distance < 1e-9 && r.included);

        let sq = TestMap::from_fn("sq", 1, 1, |x| vec![x[0] * x[0]]).unwrap();
        let r = mvt_inclusion(&sq, &p(&[0.0]), &p(&[1.0]), &prm, &t, None, Exec::default()).unwrap();
        assert_eq!(r.difference, vec![-1.0]);
        assert!(r.distance < 1e-9);

        let r = mvt_inclusion(&abs_map(), &p(&[-1.0]), &p(&[1.0]), &prm, &t, None, Exec::default()).unwrap();
        assert_eq!(r.difference, vec![0.0]);
        assert!(r.distance < 1e-9);
    }

    #[test]
    fn multi_selection_unsupported() {
        let m = TestMap::from_exprs("two", 1, &[vec!["x1".into()], vec!["2*x1".into()]]).unwrap();
        assert!(matches!(fd_jacobian(&m, &[0.0], 1e-6), Err(Error::Unsupported(_))));
    }
}
