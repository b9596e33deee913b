// SPDX-License-Identifier: Apache-2.0

//! Pairwise monotonicity predicates and the seeded witness search.
//!
//! For a pair `(x, y)` with selected values `fx ∈ F(x)`, `fy ∈ F(y)`:
//!
//! | property  | holds when                                              |
//! |-----------|---------------------------------------------------------|
//! | monotone  | `⟨fx − fy, x − y⟩ ≥ 0`                                  |
//! | strict    | `⟨fx − fy, x − y⟩ > 0` for `x ≠ y`                      |
//! | strong(λ) | `⟨fx − fy, x − y⟩ ≥ λ‖x − y‖²`                          |
//! | pseudo    | `⟨fy, x − y⟩ ≥ 0  ⟹  ⟨fx, x − y⟩ ≥ 0`                   |
//! | quasi     | `⟨fy, x − y⟩ > 0  ⟹  ⟨fx, x − y⟩ ≥ 0`                   |
//!
//! Inequalities are realized with the margins of [`TolerancePolicy`].

use std::collections::BTreeSet;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::domain::{segment_sample, ConvexDomain};
use crate::error::{ensure_dim, Error, Result};
use crate::map::TestMap;
use crate::par::Exec;
use crate::rng::{stream, Rng};
use crate::types::{
    dot, norm, sub, Property, PropertyVerdict, TolerancePolicy, VectorPoint, VerdictStatus, ViolationWitness,
};

/// Modulus used for strong-monotonicity checks when none is given.
pub const DEFAULT_STRONG_MODULUS: f64 = 1e-6;

/// Pairs per parallel chunk; each chunk owns an RNG stream.
pub const CHUNK: usize = 256;

/// Probability that a falsifier draw is a structured anchor point instead of
/// a uniform sample.
pub const ANCHOR_RATE: f64 = 0.125;

const REFINE_HALF_WIDTH: i32 = 4;

/// Inner products of one selected pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEvaluation {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub fx: Vec<f64>,
    pub fy: Vec<f64>,
    pub selection_x: usize,
    pub selection_y: usize,
    /// `⟨fx − fy, x − y⟩`
    pub d_inner: f64,
    /// `⟨fy, x − y⟩`
    pub premise_inner: f64,
    /// `⟨fx, x − y⟩`
    pub conclusion_inner: f64,
    pub sq_dist: f64,
}

impl PairEvaluation {
    pub fn new(x: Vec<f64>, y: Vec<f64>, fx: Vec<f64>, fy: Vec<f64>) -> Result<Self> {
        Self::with_selections(x, y, fx, fy, 0, 0)
    }

    pub fn with_selections(
        x: Vec<f64>,
        y: Vec<f64>,
        fx: Vec<f64>,
        fy: Vec<f64>,
        selection_x: usize,
        selection_y: usize,
    ) -> Result<Self> {
        ensure_dim(x.len(), y.len())?;
        ensure_dim(x.len(), fx.len())?;
        ensure_dim(x.len(), fy.len())?;
        let dx = sub(&x, &y);
        let df = sub(&fx, &fy);
        Ok(PairEvaluation {
            d_inner: dot(&df, &dx),
            premise_inner: dot(&fy, &dx),
            conclusion_inner: dot(&fx, &dx),
            sq_dist: dot(&dx, &dx),
            x,
            y,
            fx,
            fy,
            selection_x,
            selection_y,
        })
    }

    fn max_abs_inner(&self) -> f64 {
        self.d_inner.abs().max(self.premise_inner.abs()).max(self.conclusion_inner.abs())
    }

    fn dist(&self) -> f64 {
        self.sq_dist.sqrt()
    }

    fn value_gap(&self) -> f64 {
        norm(&sub(&self.fx, &self.fy))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongParams {
    modulus: f64,
}

impl StrongParams {
    pub fn new(modulus: f64) -> Result<Self> {
        if !(modulus > 0.0 && modulus.is_finite()) {
            return Err(Error::InvalidArgument(format!("strong modulus must be positive, got {modulus}")));
        }
        Ok(StrongParams { modulus })
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }
}

pub fn pair_monotone(e: &PairEvaluation, tol: &TolerancePolicy) -> bool {
    e.d_inner >= -tol.slack()
}

/// Strictness test. The threshold is relative: `d_inner` must exceed
/// `strict_premise_eps · ‖fx − fy‖ · ‖x − y‖`, i.e. the cosine between the
/// value gap and the displacement must be positive beyond rounding noise.
pub fn pair_strict(e: &PairEvaluation, tol: &TolerancePolicy) -> Result<bool> {
    if e.dist() <= tol.orth_tol {
        return Err(Error::InvalidArgument("strict monotonicity is undefined for x = y".into()));
    }
    Ok(e.d_inner > strict_threshold(e, tol))
}

fn strict_threshold(e: &PairEvaluation, tol: &TolerancePolicy) -> f64 {
    tol.strict_premise_eps * e.value_gap() * e.dist()
}

pub fn pair_strong(e: &PairEvaluation, s: &StrongParams, tol: &TolerancePolicy) -> bool {
    e.d_inner >= s.modulus * e.sq_dist - tol.slack()
}

/// The non-strict premise fires at its boundary.
pub fn pair_pseudo(e: &PairEvaluation, tol: &TolerancePolicy) -> bool {
    e.premise_inner < -tol.slack() || e.conclusion_inner >= -tol.slack()
}

/// The strict premise does not fire at its boundary.
pub fn pair_quasi(e: &PairEvaluation, tol: &TolerancePolicy) -> bool {
    e.premise_inner <= tol.premise_eps() || e.conclusion_inner >= -tol.slack()
}

/// `Some(margin)` when `e` violates `property`; the margin is the quantity
/// the predicate needs to be non-negative. Degenerate pairs never violate
/// strictness.
pub fn violation_margin(property: &Property, e: &PairEvaluation, tol: &TolerancePolicy) -> Option<f64> {
    match property {
        Property::Monotone => (!pair_monotone(e, tol)).then_some(e.d_inner),
        Property::Strict => match pair_strict(e, tol) {
            Ok(false) => Some(e.d_inner - strict_threshold(e, tol)),
            _ => None,
        },
        Property::Strong { modulus } => {
            (e.d_inner < modulus * e.sq_dist - tol.slack()).then_some(e.d_inner - modulus * e.sq_dist)
        }
        Property::Pseudo => (!pair_pseudo(e, tol)).then_some(e.conclusion_inner),
        Property::Quasi => (!pair_quasi(e, tol)).then_some(e.conclusion_inner),
    }
}

fn witness_from(property: &Property, e: &PairEvaluation, margin: f64) -> ViolationWitness {
    let (lhs, rhs) = match property {
        Property::Monotone | Property::Strict => (e.d_inner, 0.0),
        Property::Strong { modulus } => (e.d_inner, modulus * e.sq_dist),
        Property::Pseudo | Property::Quasi => (e.premise_inner, e.conclusion_inner),
    };
    ViolationWitness {
        x: VectorPoint::from_vec_unchecked(e.x.clone()),
        y: VectorPoint::from_vec_unchecked(e.y.clone()),
        fx: e.fx.clone(),
        fy: e.fy.clone(),
        selection_x: e.selection_x,
        selection_y: e.selection_y,
        lhs,
        rhs,
        margin,
    }
}

/// Re-evaluates a witness under `tol`; true when it still violates `property`.
pub fn witness_violates(property: &Property, w: &ViolationWitness, tol: &TolerancePolicy) -> bool {
    PairEvaluation::with_selections(
        w.x.coords().to_vec(),
        w.y.coords().to_vec(),
        w.fx.clone(),
        w.fy.clone(),
        w.selection_x,
        w.selection_y,
    )
    .map(|e| violation_margin(property, &e, tol).is_some())
    .unwrap_or(false)
}

/// Budget, seed, tolerances and execution mode of a search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub budget: usize,
    pub seed: u64,
    pub tol: TolerancePolicy,
    pub exec: Exec,
}

impl SearchConfig {
    pub fn new(budget: usize, seed: u64) -> Self {
        SearchConfig { budget, seed, tol: TolerancePolicy::default(), exec: Exec::default() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SearchConfig { seed, ..*self }
    }

    pub fn with_budget(&self, budget: usize) -> Self {
        SearchConfig { budget, ..*self }
    }
}

fn draw(domain: &ConvexDomain, rng: &mut Rng) -> Vec<f64> {
    if rng.random_bool(ANCHOR_RATE) {
        domain.anchor_with(rng)
    } else {
        domain.sample_with(rng)
    }
}

/// The sampled points of every pair of one chunk with all selection values.
struct SampledPair {
    x: Vec<f64>,
    y: Vec<f64>,
    fx: Vec<Vec<f64>>,
    fy: Vec<Vec<f64>>,
}

fn sample_pairs(map: &TestMap, domain: &ConvexDomain, cfg: &SearchConfig) -> Result<Vec<SampledPair>> {
    let chunks = cfg.budget.div_ceil(CHUNK);
    let per_chunk = cfg.exec.map_range(chunks, |c| -> Result<Vec<SampledPair>> {
        let len = CHUNK.min(cfg.budget - c * CHUNK);
        let mut rx = stream(cfg.seed, &[c as u64, 0]);
        let mut ry = stream(cfg.seed, &[c as u64, 1]);
        (0..len)
            .map(|_| {
                let x = draw(domain, &mut rx);
                let y = draw(domain, &mut ry);
                let fx = map.eval_all(&x)?;
                let fy = map.eval_all(&y)?;
                Ok(SampledPair { x, y, fx, fy })
            })
            .collect()
    });
    let mut out = Vec::with_capacity(cfg.budget);
    for chunk in per_chunk {
        out.extend(chunk?);
    }
    Ok(out)
}

fn pair_evaluations(p: &SampledPair) -> impl Iterator<Item = PairEvaluation> + '_ {
    (0..p.fx.len()).flat_map(move |i| {
        (0..p.fy.len()).map(move |j| {
            PairEvaluation::with_selections(p.x.clone(), p.y.clone(), p.fx[i].clone(), p.fy[j].clone(), i, j)
                .expect("dimensions checked by TestMap::eval")
        })
    })
}

fn check_inputs(map: &TestMap, domain: &ConvexDomain, cfg: &SearchConfig) -> Result<()> {
    if cfg.budget == 0 {
        return Err(Error::InvalidArgument("budget must be >= 1".into()));
    }
    cfg.tol.validate()?;
    ensure_dim(domain.ambient_dim(), map.dim_in())?;
    ensure_dim(map.dim_in(), map.dim_out())
}

/// Tolerances for one pair: `base` scaled by the pair's largest inner
/// product magnitude.
pub fn pair_tolerance(e: &PairEvaluation, base: &TolerancePolicy) -> TolerancePolicy {
    base.scaled_by_max_inner(e.max_abs_inner())
}

/// Budgeted search for a pair violating `property`.
///
/// Draws `budget` pairs from two seeded streams per chunk, evaluates every
/// selection pair, and reports the first violating pair in sample order after
/// refining it on a 9×9 grid of perturbations along the pair direction. Each
/// pair is judged with tolerances scaled by its own inner products, so the
/// verdict records the witness pair's policy (or the base policy if no
/// violation was found).
pub fn falsify(map: &TestMap, domain: &ConvexDomain, property: Property, cfg: &SearchConfig) -> Result<PropertyVerdict> {
    check_inputs(map, domain, cfg)?;
    if let Property::Strong { modulus } = property {
        StrongParams::new(modulus)?;
    }
    let pairs = sample_pairs(map, domain, cfg)?;

    let modulus_estimate = match property {
        Property::Strong { .. } => pairs
            .iter()
            .flat_map(pair_evaluations)
            .filter(|e| e.sq_dist > cfg.tol.orth_tol)
            .map(|e| e.d_inner / e.sq_dist)
            .reduce(f64::min),
        _ => None,
    };

    let first = pairs
        .iter()
        .flat_map(pair_evaluations)
        .find_map(|e| violation_margin(&property, &e, &pair_tolerance(&e, &cfg.tol)).map(|m| (e, m)));

    let (status, witness, tolerances) = match first {
        None => (VerdictStatus::NoViolationFound, None, cfg.tol),
        Some((e, margin)) => {
            let (e, margin) = refine(map, domain, &property, e, margin, &cfg.tol);
            let tol = pair_tolerance(&e, &cfg.tol);
            (VerdictStatus::Falsified, Some(witness_from(&property, &e, margin)), tol)
        }
    };

    Ok(PropertyVerdict {
        property,
        status,
        witness,
        samples_used: cfg.budget,
        seed: cfg.seed,
        tolerances,
        modulus_estimate,
    })
}

/// Local refinement on a fixed grid of `fd_step` perturbations of both points
/// along the pair direction, keeping the most negative violating margin.
fn refine(
    map: &TestMap,
    domain: &ConvexDomain,
    property: &Property,
    raw: PairEvaluation,
    raw_margin: f64,
    base: &TolerancePolicy,
) -> (PairEvaluation, f64) {
    let n = raw.x.len();
    let dx = sub(&raw.x, &raw.y);
    let len = norm(&dx);
    let dir: Vec<f64> = if len > base.orth_tol {
        dx.iter().map(|v| v / len).collect()
    } else {
        crate::domain::unit_vector(n, 0)
    };
    let h = base.fd_step;
    let shifted = |p: &[f64], k: i32| -> Vec<f64> {
        let q: Vec<f64> = p.iter().zip(&dir).map(|(a, d)| a + k as f64 * h * d).collect();
        domain.project(&q)
    };

    let mut best = (raw.clone(), raw_margin);
    for a in -REFINE_HALF_WIDTH..=REFINE_HALF_WIDTH {
        let x = shifted(&raw.x, a);
        let Ok(fx) = map.eval(raw.selection_x, &x) else { continue };
        for b in -REFINE_HALF_WIDTH..=REFINE_HALF_WIDTH {
            let y = shifted(&raw.y, b);
            let Ok(fy) = map.eval(raw.selection_y, &y) else { continue };
            let Ok(e) = PairEvaluation::with_selections(x.clone(), y, fx.clone(), fy, raw.selection_x, raw.selection_y)
            else {
                continue;
            };
            if let Some(m) = violation_margin(property, &e, &pair_tolerance(&e, base)) {
                if m < best.1 {
                    best = (e, m);
                }
            }
        }
    }
    best
}

/// Monotonicity of `map` restricted to the segment `[x, y]`, over all
/// `k(k−1)/2` pairs of `k` equally spaced points and all selection pairs.
pub fn segment_monotone(
    map: &TestMap,
    x: &VectorPoint,
    y: &VectorPoint,
    k: usize,
    tol: &TolerancePolicy,
) -> Result<PropertyVerdict> {
    ensure_dim(map.dim_in(), x.dim())?;
    tol.validate()?;
    let pts = segment_sample(x, y, k)?;
    let values: Vec<Vec<Vec<f64>>> = pts.iter().map(|p| map.eval_all(p.coords())).collect::<Result<_>>()?;
    let mut evals = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            for (si, fi) in values[i].iter().enumerate() {
                for (sj, fj) in values[j].iter().enumerate() {
                    evals.push(PairEvaluation::with_selections(
                        pts[i].coords().to_vec(),
                        pts[j].coords().to_vec(),
                        fi.clone(),
                        fj.clone(),
                        si,
                        sj,
                    )?);
                }
            }
        }
    }
    let property = Property::Monotone;
    let found = evals.iter().find_map(|e| {
        let t = pair_tolerance(e, tol);
        violation_margin(&property, e, &t).map(|m| (witness_from(&property, e, m), t))
    });
    let (witness, tol) = match found {
        Some((w, t)) => (Some(w), t),
        None => (None, *tol),
    };
    Ok(PropertyVerdict {
        property,
        status: if witness.is_some() { VerdictStatus::Falsified } else { VerdictStatus::NoViolationFound },
        witness,
        samples_used: k * (k - 1) / 2,
        seed: 0,
        tolerances: tol,
        modulus_estimate: None,
    })
}

/// Property names without parameters, ordered from strongest to weakest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyClass {
    Strong,
    Strict,
    Monotone,
    Pseudo,
    Quasi,
}

impl PropertyClass {
    pub const CHAIN: [PropertyClass; 5] =
        [PropertyClass::Strong, PropertyClass::Strict, PropertyClass::Monotone, PropertyClass::Pseudo, PropertyClass::Quasi];

    pub fn of(p: &Property) -> Self {
        match p {
            Property::Strong { .. } => PropertyClass::Strong,
            Property::Strict => PropertyClass::Strict,
            Property::Monotone => PropertyClass::Monotone,
            Property::Pseudo => PropertyClass::Pseudo,
            Property::Quasi => PropertyClass::Quasi,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PropertyClass::Strong => "strong",
            PropertyClass::Strict => "strict",
            PropertyClass::Monotone => "monotone",
            PropertyClass::Pseudo => "pseudo",
            PropertyClass::Quasi => "quasi",
        }
    }
}

/// A stronger property upheld while a weaker one was falsified on the same samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainInversion {
    pub stronger: PropertyClass,
    pub weaker: PropertyClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyReport {
    /// Ordered strong, strict, monotone, pseudo, quasi.
    pub verdicts: Vec<PropertyVerdict>,
    /// Classes with no violation found.
    pub upheld: BTreeSet<PropertyClass>,
    pub inversions: Vec<ChainInversion>,
}

impl HierarchyReport {
    pub fn consistent(&self) -> bool {
        self.inversions.is_empty()
    }
}

/// Runs all five checks on the same sample stream and flags any upheld
/// property whose weaker consequence was falsified.
pub fn hierarchy_check(
    map: &TestMap,
    domain: &ConvexDomain,
    strong_modulus: Option<f64>,
    cfg: &SearchConfig,
) -> Result<HierarchyReport> {
    let modulus = strong_modulus.unwrap_or(DEFAULT_STRONG_MODULUS);
    let props = [
        Property::Strong { modulus },
        Property::Strict,
        Property::Monotone,
        Property::Pseudo,
        Property::Quasi,
    ];
    let verdicts = props.iter().map(|p| falsify(map, domain, *p, cfg)).collect::<Result<Vec<_>>>()?;
    let upheld: BTreeSet<PropertyClass> =
        verdicts.iter().filter(|v| !v.is_falsified()).map(|v| PropertyClass::of(&v.property)).collect();
    let mut inversions = Vec::new();
    for (i, stronger) in verdicts.iter().enumerate() {
        for weaker in &verdicts[i + 1..] {
            if !stronger.is_falsified() && weaker.is_falsified() {
                inversions.push(ChainInversion {
                    stronger: PropertyClass::of(&stronger.property),
                    weaker: PropertyClass::of(&weaker.property),
                });
            }
        }
    }
    Ok(HierarchyReport { verdicts, upheld, inversions })
}
