// SPDX-License-Identifier: Apache-2.0

//! Lines of dual vectors and translation families `F + ω`.
//!
//! A line `L = {u + λv}` is orthogonal to a domain when `⟨v, ·⟩` is constant
//! on it. Along a non-orthogonal line, `F + ω` is quasimonotone for every
//! `ω ∈ L` exactly when every Clarke Jacobian of `F` is positive
//! semidefinite; this module checks both sides numerically and reports
//! whether they agree.

use serde::{Deserialize, Serialize};

use crate::domain::ConvexDomain;
use crate::error::{ensure_dim, Error, Result};
use crate::jacobian::{estimate_clarke, psd_check_on, ClarkeParams, Definiteness, PsdReport};
use crate::map::{TestMap, TranslatedMap};
use crate::monotonicity::{falsify, SearchConfig};
use crate::rng::{derive_seed, stream};
use crate::types::{dot, norm, parse_csv_reals, sub, Property, PropertyVerdict, TolerancePolicy, VectorPoint};

/// `L = {u + λv}` sampled on a finite λ grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualLine {
    u: Vec<f64>,
    v: Vec<f64>,
    lambda_grid: Vec<f64>,
}

/// Evenly spaced grid of `count` points on `[start, end]`.
pub fn lambda_grid(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 || !(start.is_finite() && end.is_finite()) || (count > 1 && start >= end) {
        return Err(Error::InvalidArgument(format!("bad λ grid {start}:{end}:{count}")));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count).map(|i| start + (end - start) * i as f64 / (count - 1) as f64).collect())
}

/// 17 points on `[−2, 2]`.
pub fn default_lambda_grid() -> Vec<f64> {
    lambda_grid(-2.0, 2.0, 17).expect("static grid")
}

impl DualLine {
    pub fn new(u: Vec<f64>, v: Vec<f64>, lambda_grid: Vec<f64>) -> Result<Self> {
        ensure_dim(u.len(), v.len())?;
        if v.iter().all(|c| *c == 0.0) || v.iter().chain(&u).any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("line direction must be nonzero and finite".into()));
        }
        if lambda_grid.is_empty() || lambda_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("λ grid must be nonempty and strictly increasing".into()));
        }
        Ok(DualLine { u, v, lambda_grid })
    }

    /// `{λ v : λ ∈ grid}` through the origin.
    pub fn through_origin(v: Vec<f64>, lambda_grid: Vec<f64>) -> Result<Self> {
        Self::new(vec![0.0; v.len()], v, lambda_grid)
    }

    /// Parses `u=<csv>;v=<csv>`; `u` defaults to the origin.
    pub fn parse(text: &str, lambda_grid: Vec<f64>) -> Result<Self> {
        let mut u = None;
        let mut v = None;
        for item in text.split(';').filter(|s| !s.trim().is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| Error::Spec {
                token: item.to_string(),
                reason: "expected u=<csv> or v=<csv>".into(),
            })?;
            match key.trim() {
                "u" => u = Some(parse_csv_reals(value)?),
                "v" => v = Some(parse_csv_reals(value)?),
                other => return Err(Error::Spec { token: other.to_string(), reason: "unknown line key".into() }),
            }
        }
        let v = v.ok_or_else(|| Error::Spec { token: text.to_string(), reason: "line needs v=<csv>".into() })?;
        let u = u.unwrap_or_else(|| vec![0.0; v.len()]);
        Self::new(u, v, lambda_grid)
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn lambda_grid(&self) -> &[f64] {
        &self.lambda_grid
    }

    pub fn omega(&self, lambda: f64) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(a, b)| a + lambda * b).collect()
    }
}

/// Parses `start:end:count`.
pub fn parse_lambda_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Spec { token: text.to_string(), reason: "expected <start>:<end>:<count>".into() };
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts.as_slice() else { return Err(bad()) };
    let a = a.trim().parse::<f64>().map_err(|_| bad())?;
    let b = b.trim().parse::<f64>().map_err(|_| bad())?;
    let n = n.trim().parse::<usize>().map_err(|_| bad())?;
    lambda_grid(a, b, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Orthogonality {
    pub orthogonal: bool,
    /// `max ⟨v,p⟩ − min ⟨v,p⟩` over the domain.
    pub spread: f64,
}

/// Whether `⟨v, ·⟩` is constant on the domain.
///
/// The spread is computed exactly from the domain description (box extents,
/// polytope vertices, slice coordinate box) and cross-checked against
/// `probes` sampled points.
pub fn is_orthogonal(v: &[f64], domain: &ConvexDomain, probes: usize, seed: u64, tol: &TolerancePolicy) -> Result<Orthogonality> {
    if v.iter().all(|c| *c == 0.0) {
        return Err(Error::InvalidArgument("orthogonality of the zero vector".into()));
    }
    let mut spread = domain.linear_spread(v)?;
    if probes > 0 {
        let pts = crate::domain::domain_sample(domain, probes, seed)?;
        let vals: Vec<f64> = pts.iter().map(|p| dot(v, p.coords())).collect();
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        spread = spread.max(max - min);
    }
    Ok(Orthogonality { orthogonal: spread <= tol.orth_tol * (1.0 + norm(v)), spread })
}

/// Orthogonality of the line, which depends only on its direction.
pub fn line_orthogonal(line: &DualLine, domain: &ConvexDomain, probes: usize, seed: u64, tol: &TolerancePolicy) -> Result<Orthogonality> {
    is_orthogonal(&line.v, domain, probes, seed, tol)
}

/// Probes used when orthogonality is checked as part of a larger report.
pub const ORTH_PROBES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub omega: Vec<f64>,
    pub verdict: PropertyVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub property: Property,
    pub rows: Vec<SweepRow>,
    pub all_passed: bool,
    /// Index into `rows` of the first falsified λ.
    pub first_falsified: Option<usize>,
}

/// Runs `falsify` on `F + (u + λv)` for every λ of the grid. Each λ uses a
/// seed derived from the grid index.
pub fn sweep(map: &TestMap, domain: &ConvexDomain, line: &DualLine, property: Property, cfg: &SearchConfig) -> Result<SweepReport> {
    if !matches!(property, Property::Pseudo | Property::Quasi) {
        return Err(Error::InvalidArgument("sweeps test pseudo or quasi only".into()));
    }
    ensure_dim(map.dim_out(), line.v.len())?;
    let grid = &line.lambda_grid;
    let results = cfg.exec.map_range(grid.len(), |i| -> Result<SweepRow> {
        let omega = line.omega(grid[i]);
        let shifted = TranslatedMap::new(map.clone(), omega.clone())?.to_test_map();
        let verdict = falsify(&shifted, domain, property, &cfg.with_seed(derive_seed(cfg.seed, &[i as u64])))?;
        Ok(SweepRow { lambda: grid[i], omega, verdict })
    });
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    let first_falsified = rows.iter().position(|r| r.verdict.is_falsified());
    Ok(SweepReport { property, all_passed: first_falsified.is_none(), first_falsified, rows })
}

/// Settings for the Jacobian side of [`theorem1_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobianSide {
    pub points: usize,
    pub radius: f64,
    pub samples: usize,
}

impl Default for JacobianSide {
    fn default() -> Self {
        JacobianSide { points: 25, radius: 1e-3, samples: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem1Outcome {
    Agree,
    Disagree,
    /// Sweep passes, hull indefinite, and the line is orthogonal to the domain.
    OrthogonalityHypothesisViolated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointPsd {
    pub point: VectorPoint,
    pub generators: usize,
    pub report: PsdReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub sweep: SweepReport,
    pub psd: Vec<PointPsd>,
    pub hulls_psd: bool,
    pub min_eigenvalue: f64,
    pub orthogonality: Orthogonality,
    pub outcome: Theorem1Outcome,
    pub note: String,
}

/// Compares the quasimonotonicity sweep of `F + ω` along the line with the
/// definiteness of sampled Clarke hulls of `F`.
pub fn theorem1_check(
    map: &TestMap,
    domain: &ConvexDomain,
    line: &DualLine,
    jac: &JacobianSide,
    cfg: &SearchConfig,
) -> Result<Theorem1Report> {
    map.require_single()?;
    let sweep_report = sweep(map, domain, line, Property::Quasi, cfg)?;
    let orthogonality = line_orthogonal(line, domain, ORTH_PROBES, derive_seed(cfg.seed, &[1 << 20]), &cfg.tol)?;

    let pts = crate::domain::domain_sample(domain, jac.points.max(1), derive_seed(cfg.seed, &[1 << 21]))?;
    let basis = domain.tangent_basis();
    let mut psd = Vec::with_capacity(pts.len());
    for (i, p) in pts.into_iter().enumerate() {
        let params = ClarkeParams::new(jac.radius, jac.samples, cfg.tol.fd_step, derive_seed(cfg.seed, &[1 << 22, i as u64]));
        let hull = estimate_clarke(map, &p, &params, Some(domain), cfg.exec)?;
        let report = psd_check_on(&hull, basis, &cfg.tol);
        psd.push(PointPsd { point: p, generators: hull.generators.len(), report });
    }
    let hulls_psd = psd.iter().all(|p| p.report.verdict != Definiteness::Indefinite);
    let min_eigenvalue = psd.iter().map(|p| p.report.min_eigenvalue).fold(f64::INFINITY, f64::min);

    let (outcome, note) = match (sweep_report.all_passed, hulls_psd) {
        (a, b) if a == b => (Theorem1Outcome::Agree, "sweep and Jacobian verdicts agree".to_string()),
        (true, false) if orthogonality.orthogonal => (
            Theorem1Outcome::OrthogonalityHypothesisViolated,
            "orthogonality hypothesis violated: the line is orthogonal to the domain, so the translation \
             family cannot detect the indefinite Jacobian; consistent with the necessity of non-orthogonality"
                .to_string(),
        ),
        (true, false) => (
            Theorem1Outcome::Disagree,
            "indefinite Jacobian but no quasimonotonicity violation on the λ grid within budget".to_string(),
        ),
        _ => (
            Theorem1Outcome::Disagree,
            "quasimonotonicity violated along the line although every sampled hull is positive semidefinite".to_string(),
        ),
    };
    Ok(Theorem1Report { sweep: sweep_report, psd, hulls_psd, min_eigenvalue, orthogonality, outcome, note })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prop1Outcome {
    /// Non-orthogonal line and all three statements agree.
    Consistent,
    /// Non-orthogonal line and the statements disagree, or pseudo upheld with quasi falsified.
    EquivalenceViolated,
    /// Orthogonal line with monotonicity falsified but both sweeps upheld.
    OrthogonalityCase,
    /// Orthogonal line; the equivalence makes no claim.
    Unconstrained,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop1Report {
    pub monotone: PropertyVerdict,
    pub pseudo_sweep: SweepReport,
    pub quasi_sweep: SweepReport,
    /// (monotone upheld, pseudo sweep upheld, quasi sweep upheld)
    pub bits: [bool; 3],
    pub orthogonality: Orthogonality,
    pub outcome: Prop1Outcome,
}

/// Three-way cross-check: `F` monotone, `F + ω` pseudomonotone along the
/// line, `F + ω` quasimonotone along the line.
pub fn proposition1_crosscheck(map: &TestMap, domain: &ConvexDomain, line: &DualLine, cfg: &SearchConfig) -> Result<Prop1Report> {
    let monotone = falsify(map, domain, Property::Monotone, cfg)?;
    let pseudo_sweep = sweep(map, domain, line, Property::Pseudo, cfg)?;
    let quasi_sweep = sweep(map, domain, line, Property::Quasi, cfg)?;
    let orthogonality = line_orthogonal(line, domain, ORTH_PROBES, derive_seed(cfg.seed, &[1 << 20]), &cfg.tol)?;
    let bits = [!monotone.is_falsified(), pseudo_sweep.all_passed, quasi_sweep.all_passed];
    let chain_broken = bits[1] && !bits[2];
    let outcome = if chain_broken {
        Prop1Outcome::EquivalenceViolated
    } else if !orthogonality.orthogonal {
        if bits[0] == bits[1] && bits[1] == bits[2] {
            Prop1Outcome::Consistent
        } else {
            Prop1Outcome::EquivalenceViolated
        }
    } else if !bits[0] && bits[1] && bits[2] {
        Prop1Outcome::OrthogonalityCase
    } else {
        Prop1Outcome::Unconstrained
    };
    Ok(Prop1Report { monotone, pseudo_sweep, quasi_sweep, bits, orthogonality, outcome })
}

/// One step of the degenerate-pair argument at a fixed α and selection choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub x: VectorPoint,
    pub y: VectorPoint,
    pub z: VectorPoint,
    pub z_alpha: VectorPoint,
    pub alpha: f64,
    pub x_star: Vec<f64>,
    pub y_star: Vec<f64>,
    pub z_star: Vec<f64>,
    pub z_alpha_star: Vec<f64>,
    /// `2α⟨z*_α, z − (x+y)/2⟩`
    pub ineq1_lhs: f64,
    /// `⟨x*, z_α − x⟩ + ⟨y*, z_α − y⟩`
    pub ineq1_rhs: f64,
    /// `⟨z*, z − (x+y)/2⟩`
    pub ineq2_lhs: f64,
    /// `⟨z*_α, z − (x+y)/2⟩`
    pub ineq2_rhs: f64,
    /// `2α⟨z*, z − (x+y)/2⟩`, the left side once both inequalities are chained.
    pub combined_lhs: f64,
    /// `⟨x* − y*, y − x⟩`
    pub limit_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofTraceReport {
    pub z: VectorPoint,
    pub traces: Vec<ProofTrace>,
    pub ineq1_holds: bool,
    pub ineq2_holds: bool,
    /// Largest `⟨x* − y*, y − x⟩` over all selections.
    pub limit_estimate: f64,
    /// `limit_estimate ≤ slack`, i.e. monotone on `[x, y]`.
    pub monotone_on_segment: bool,
    pub tolerances: TolerancePolicy,
}

pub const DEFAULT_ALPHAS: [f64; 5] = [0.5, 0.2, 0.1, 0.05, 0.01];

/// Attempts allowed when searching the domain for an admissible `z`.
pub const Z_SEARCH_DRAWS: usize = 200;

/// Replays the degenerate case `⟨v, x − y⟩ = 0` of the sufficiency argument:
/// finds `z` off the level set of `⟨v, ·⟩`, forms the averaged points
/// `z_α = αz + (1−α)(x+y)/2`, and records both monotonicity inequalities and
/// the limiting quantity for every α and selection choice.
#[allow(clippy::too_many_arguments)]
pub fn proof_trace(
    map: &TestMap,
    domain: &ConvexDomain,
    line: &DualLine,
    x: &VectorPoint,
    y: &VectorPoint,
    z: Option<&VectorPoint>,
    alphas: &[f64],
    seed: u64,
    tol: &TolerancePolicy,
) -> Result<ProofTraceReport> {
    let v = &line.v;
    ensure_dim(domain.ambient_dim(), x.dim())?;
    ensure_dim(x.dim(), y.dim())?;
    ensure_dim(v.len(), x.dim())?;
    if alphas.iter().any(|a| !(*a > 0.0 && *a < 1.0)) {
        return Err(Error::InvalidArgument("α values must lie in (0, 1)".into()));
    }
    let orth = tol.orth_tol * (1.0 + norm(v));
    if dot(v, &sub(x.coords(), y.coords())).abs() > orth {
        return Err(Error::InvalidArgument("⟨v, x − y⟩ must vanish for a degenerate pair".into()));
    }
    if !(domain.contains(x)? && domain.contains(y)?) {
        return Err(Error::InvalidArgument("x and y must lie in the domain".into()));
    }
    let vx = dot(v, x.coords());
    let vy = dot(v, y.coords());
    let admissible = |p: &[f64]| (dot(v, p) - vx).abs() > orth && (dot(v, p) - vy).abs() > orth;
    let z = match z {
        Some(z) => {
            if !(domain.contains(z)? && admissible(z.coords())) {
                return Err(Error::InvalidArgument("z must lie in the domain off the level set of ⟨v, x⟩".into()));
            }
            z.clone()
        }
        None => {
            let mut rng = stream(seed, &[0x7a]);
            (0..Z_SEARCH_DRAWS)
                .map(|_| domain.sample_with(&mut rng))
                .find(|p| admissible(p))
                .map(VectorPoint::from_vec_unchecked)
                .ok_or(Error::NoAdmissibleZ { attempts: Z_SEARCH_DRAWS })?
        }
    };

    let n = x.dim();
    let mid: Vec<f64> = (0..n).map(|k| 0.5 * (x[k] + y[k])).collect();
    let w = sub(z.coords(), &mid);
    let xs = map.eval_all(x.coords())?;
    let ys = map.eval_all(y.coords())?;
    let zs = map.eval_all(z.coords())?;

    let mut traces = Vec::new();
    for &alpha in alphas {
        let za: Vec<f64> = (0..n).map(|k| alpha * z[k] + (1.0 - alpha) * mid[k]).collect();
        let zas = map.eval_all(&za)?;
        let za_minus_x = sub(&za, x.coords());
        let za_minus_y = sub(&za, y.coords());
        let y_minus_x = sub(y.coords(), x.coords());
        for xs_ in &xs {
            for ys_ in &ys {
                for zs_ in &zs {
                    for zas_ in &zas {
                        traces.push(ProofTrace {
                            x: x.clone(),
                            y: y.clone(),
                            z: z.clone(),
                            z_alpha: VectorPoint::from_vec_unchecked(za.clone()),
                            alpha,
                            ineq1_lhs: 2.0 * alpha * dot(zas_, &w),
                            ineq1_rhs: dot(xs_, &za_minus_x) + dot(ys_, &za_minus_y),
                            ineq2_lhs: dot(zs_, &w),
                            ineq2_rhs: dot(zas_, &w),
                            combined_lhs: 2.0 * alpha * dot(zs_, &w),
                            limit_estimate: dot(&sub(xs_, ys_), &y_minus_x),
                            x_star: xs_.clone(),
                            y_star: ys_.clone(),
                            z_star: zs_.clone(),
                            z_alpha_star: zas_.clone(),
                        });
                    }
                }
            }
        }
    }
    let max_inner = traces
        .iter()
        .flat_map(|t| [t.ineq1_lhs, t.ineq1_rhs, t.ineq2_lhs, t.ineq2_rhs, t.combined_lhs, t.limit_estimate])
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = tol.scaled_by_max_inner(max_inner);
    let slack = tol.slack();
    let ineq1_holds = traces.iter().all(|t| t.ineq1_lhs - t.ineq1_rhs >= -slack);
    let ineq2_holds = traces.iter().all(|t| t.ineq2_lhs - t.ineq2_rhs >= -slack);
    let limit_estimate = traces.iter().map(|t| t.limit_estimate).fold(f64::NEG_INFINITY, f64::max);
    Ok(ProofTraceReport {
        z,
        traces,
        ineq1_holds,
        ineq2_holds,
        limit_estimate,
        monotone_on_segment: limit_estimate <= slack,
        tolerances: tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub radius: f64,
    pub domain: String,
    pub line: DualLine,
    pub orthogonality: Orthogonality,
    pub monotone: PropertyVerdict,
    pub pseudo_sweep: SweepReport,
    pub quasi_sweep: SweepReport,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
    pub narrative: Option<String>,
}

/// The λ grid of the counterexample suite: −2..2 in steps of 0.25.
pub fn counterexample_grid() -> Vec<f64> {
    default_lambda_grid()
}

/// Checks that `(x, y, 0) ↦ e^{−(x+y)}(1, 1, 0)` on the truncated slice is
/// not monotone while `F + ω` stays pseudo- and quasimonotone along the
/// `e3` axis, a line orthogonal to the slice.
pub fn counterexample_suite(radius: f64, line: Option<DualLine>, cfg: &SearchConfig) -> Result<CounterexampleReport> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("truncation radius must be positive, got {radius}")));
    }
    let domain = ConvexDomain::coordinate_slice(3, 2, radius)?;
    let map = crate::registry::counterexample_map();
    let line = match line {
        Some(l) => l,
        None => DualLine::through_origin(vec![0.0, 0.0, 1.0], counterexample_grid())?,
    };
    let orthogonality = line_orthogonal(&line, &domain, ORTH_PROBES, derive_seed(cfg.seed, &[1 << 20]), &cfg.tol)?;
    let monotone = falsify(&map, &domain, Property::Monotone, cfg)?;
    let pseudo_sweep = sweep(&map, &domain, &line, Property::Pseudo, cfg)?;
    let quasi_sweep = sweep(&map, &domain, &line, Property::Quasi, cfg)?;

    let sweep_detail = |s: &SweepReport| match s.first_falsified {
        None => format!("no violation at any of {} λ values", s.rows.len()),
        Some(i) => format!("violation at λ = {}", s.rows[i].lambda),
    };
    let assertions = vec![
        Assertion {
            name: "line orthogonal to domain".into(),
            passed: orthogonality.orthogonal,
            detail: if orthogonality.orthogonal {
                format!("spread {}", orthogonality.spread)
            } else {
                format!("non-orthogonal line misuse: spread {} > 0", orthogonality.spread)
            },
        },
        Assertion {
            name: "F not monotone".into(),
            passed: monotone.is_falsified(),
            detail: match &monotone.witness {
                Some(w) => format!("witness with ⟨F(x)−F(y), x−y⟩ = {:e}", w.d_inner()),
                None => "no violation found".into(),
            },
        },
        Assertion { name: "F+ω pseudomonotone along L".into(), passed: pseudo_sweep.all_passed, detail: sweep_detail(&pseudo_sweep) },
        Assertion { name: "F+ω quasimonotone along L".into(), passed: quasi_sweep.all_passed, detail: sweep_detail(&quasi_sweep) },
    ];
    let passed = assertions.iter().all(|a| a.passed);
    let narrative = passed.then(|| {
        "F is not monotone on the slice, yet every sampled translation F+ω with ω on a line orthogonal to the \
         slice is pseudomonotone (hence quasimonotone). Without non-orthogonality of the line, the translation \
         family says nothing about monotonicity of F or definiteness of its Jacobian."
            .to_string()
    });
    Ok(CounterexampleReport {
        radius,
        domain: domain.to_string(),
        line,
        orthogonality,
        monotone,
        pseudo_sweep,
        quasi_sweep,
        assertions,
        passed,
        narrative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::lookup;

    fn p(v: &[f64]) -> VectorPoint {
        VectorPoint::new(v.to_vec()).unwrap()
    }

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn orthogonality_examples() {
        let slice = ConvexDomain::coordinate_slice(3, 2, 5.0).unwrap();
        let o = is_orthogonal(&[0.0, 0.0, 1.0], &slice, 32, 1, &tol()).unwrap();
        assert!(o.orthogonal && o.spread == 0.0);

        let boxd = ConvexDomain::cube(2, -1.0, 1.0).unwrap();
        let o = is_orthogonal(&[1.0, 0.0], &boxd, 32, 1, &tol()).unwrap();
        assert!(!o.orthogonal);
        assert_eq!(o.spread, 2.0);

        let diag = ConvexDomain::parse("slice:base=0,0,0;dirs=1/1/0;box=-5:5").unwrap();
        assert!(is_orthogonal(&[1.0, -1.0, 0.0], &diag, 32, 1, &tol()).unwrap().orthogonal);
        assert!(is_orthogonal(&[0.0, 0.0, 0.0], &diag, 32, 1, &tol()).is_err());
    }

    #[test]
    fn line_examples() {
        let slice = ConvexDomain::coordinate_slice(3, 2, 5.0).unwrap();
        let l = DualLine::through_origin(vec![0.0, 0.0, 1.0], default_lambda_grid()).unwrap();
        assert!(line_orthogonal(&l, &slice, 16, 0, &tol()).unwrap().orthogonal);
        let boxd = ConvexDomain::cube(2, -1.0, 1.0).unwrap();
        let l = DualLine::new(vec![0.0, 1.0], vec![1.0, 0.0], default_lambda_grid()).unwrap();
        assert!(!line_orthogonal(&l, &boxd, 16, 0, &tol()).unwrap().orthogonal);
        assert!(DualLine::through_origin(vec![0.0, 0.0], default_lambda_grid()).is_err());
        assert!(DualLine::through_origin(vec![1.0], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn grids() {
        let g = default_lambda_grid();
        assert_eq!(g.len(), 17);
        assert_eq!(g[1] - g[0], 0.25);
        assert_eq!(parse_lambda_grid("-2:2:17").unwrap(), g);
        assert!(parse_lambda_grid("2:-2:3").is_err());
        assert!(parse_lambda_grid("0:1").is_err());
        let l = DualLine::parse("u=0,1;v=1,0", vec![0.0, 1.0]).unwrap();
        assert_eq!(l.omega(2.0), vec![2.0, 1.0]);
    }

    #[test]
    fn identity_sweep_passes() {
        let id = lookup("identity-2d").unwrap();
        let l = DualLine::through_origin(vec![1.0, 0.0], lambda_grid(-2.0, 2.0, 9).unwrap()).unwrap();
        let s = sweep(&id.map, &id.domain, &l, Property::Quasi, &SearchConfig::new(500, 4)).unwrap();
        assert!(s.all_passed);
        assert_eq!(s.rows.len(), 9);
    }

    #[test]
    fn saddle_sweep_falsified() {
        let e = lookup("saddle-2d").unwrap();
        let l = DualLine::through_origin(vec![1.0, 0.0], default_lambda_grid()).unwrap();
        let s = sweep(&e.map, &e.domain, &l, Property::Quasi, &SearchConfig::new(1000, 4)).unwrap();
        assert!(!s.all_passed);
    }

    #[test]
    fn sweep_rejects_monotone_property() {
        let e = lookup("identity-2d").unwrap();
        let l = DualLine::through_origin(vec![1.0, 0.0], default_lambda_grid()).unwrap();
        assert!(sweep(&e.map, &e.domain, &l, Property::Monotone, &SearchConfig::new(10, 0)).is_err());
    }

    #[test]
    fn proof_trace_identity() {
        let e = lookup("identity-2d").unwrap();
        let l = DualLine::through_origin(vec![1.0, 0.0], default_lambda_grid()).unwrap();
        let r = proof_trace(&e.map, &e.domain, &l, &p(&[0.0, 0.0]), &p(&[0.0, 1.0]), Some(&p(&[1.0, 0.5])), &DEFAULT_ALPHAS, 0, &tol())
            .unwrap();
        assert!(r.ineq1_holds && r.ineq2_holds && r.monotone_on_segment);
        assert_eq!(r.traces.len(), 5);
        assert!((r.limit_estimate + 1.0).abs() < 1e-15);
        let t = &r.traces[0];
        assert_eq!(t.z_alpha, p(&[0.5, 0.5]));
        assert!((t.ineq1_lhs - 0.5).abs() < 1e-15 && (t.ineq1_rhs + 0.5).abs() < 1e-15);
    }

    #[test]
    fn proof_trace_saddle_fails_an_inequality() {
        let e = lookup("saddle-2d").unwrap();
        let l = DualLine::through_origin(vec![1.0, 0.0], default_lambda_grid()).unwrap();
        let r = proof_trace(&e.map, &e.domain, &l, &p(&[0.0, 0.0]), &p(&[0.0, 1.0]), Some(&p(&[1.0, 0.5])), &DEFAULT_ALPHAS, 0, &tol())
            .unwrap();
        assert!(!(r.ineq1_holds && r.ineq2_holds));
    }

    #[test]
    fn proof_trace_preconditions() {
        let e = lookup("identity-2d").unwrap();
        let l = DualLine::through_origin(vec![1.0, 0.0], default_lambda_grid()).unwrap();
        // Not degenerate.
        assert!(proof_trace(&e.map, &e.domain, &l, &p(&[0.0, 0.0]), &p(&[1.0, 0.0]), None, &DEFAULT_ALPHAS, 0, &tol()).is_err());
        // z sampled automatically.
        let r = proof_trace(&e.map, &e.domain, &l, &p(&[0.2, -0.5]), &p(&[0.2, 0.5]), None, &DEFAULT_ALPHAS, 3, &tol()).unwrap();
        assert!(r.ineq1_holds && r.ineq2_holds);
        // Orthogonal line: no admissible z.
        let ce = lookup(crate::registry::COUNTEREXAMPLE).unwrap();
        let l3 = DualLine::through_origin(vec![0.0, 0.0, 1.0], default_lambda_grid()).unwrap();
        let err = proof_trace(&ce.map, &ce.domain, &l3, &p(&[0.0, 0.0, 0.0]), &p(&[1.0, 0.0, 0.0]), None, &DEFAULT_ALPHAS, 0, &tol())
            .unwrap_err();
        assert!(matches!(err, Error::NoAdmissibleZ { .. }));
    }

    #[test]
    fn counterexample_with_non_orthogonal_line_fails_assertion_a() {
        let l = DualLine::through_origin(vec![1.0, 0.0, 0.0], counterexample_grid()).unwrap();
        let r = counterexample_suite(5.0, Some(l), &SearchConfig::new(200, 42)).unwrap();
        assert!(!r.assertions[0].passed);
        assert!(r.assertions[0].detail.contains("misuse"));
        assert!(!r.passed && r.narrative.is_none());
    }
}
