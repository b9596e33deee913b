// SPDX-License-Identifier: Apache-2.0

//! Convex domains: boxes, vertex polytopes and bounded affine slices.

use std::fmt;

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::hull::nearest_in_hull;
use crate::rng::{rng_from, Rng};
use crate::types::{dot, norm, parse_csv_reals, VectorPoint};

/// Default truncation half-width for affine slices given without a box.
pub const DEFAULT_SLICE_RADIUS: f64 = 5.0;

/// Off-plane tolerance used by [`ConvexDomain::contains`].
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-10;

/// A nonempty convex subset of `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ConvexDomain {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    VertexPolytope { vertices: Vec<Vec<f64>> },
    /// `{ base + Σ c_i d_i : lo_i ≤ c_i ≤ hi_i }` with orthonormal `d_i`.
    AffineSlice { base: Vec<f64>, dirs: Vec<Vec<f64>>, lo: Vec<f64>, hi: Vec<f64> },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

impl ConvexDomain {
    pub fn new_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() {
            return Err(invalid("box must have dimension >= 1"));
        }
        ensure_dim(lo.len(), hi.len())?;
        if !all_finite(&lo) || !all_finite(&hi) {
            return Err(invalid("box bounds must be finite"));
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(invalid(format!("box lower bound exceeds upper bound at coordinate {i}")));
        }
        Ok(ConvexDomain::Box { lo, hi })
    }

    /// `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new_box(vec![lo; dim], vec![hi; dim])
    }

    pub fn new_polytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(invalid("polytope needs at least one vertex"));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(invalid("polytope vertices must have dimension >= 1"));
        }
        for v in &vertices {
            ensure_dim(dim, v.len())?;
            if !all_finite(v) {
                return Err(invalid("polytope vertices must be finite"));
            }
        }
        Ok(ConvexDomain::VertexPolytope { vertices })
    }

    /// Normalizes each direction; directions must be pairwise orthogonal.
    pub fn new_slice(base: Vec<f64>, dirs: Vec<Vec<f64>>, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let dim = base.len();
        if dim == 0 || !all_finite(&base) {
            return Err(invalid("slice base must be a finite point"));
        }
        if dirs.is_empty() {
            return Err(invalid("slice needs at least one spanning direction"));
        }
        ensure_dim(dirs.len(), lo.len())?;
        ensure_dim(dirs.len(), hi.len())?;
        let mut unit = Vec::with_capacity(dirs.len());
        for d in dirs {
            ensure_dim(dim, d.len())?;
            let n = norm(&d);
            if !(n > 0.0 && n.is_finite()) {
                return Err(invalid("slice directions must be nonzero and finite"));
            }
            unit.push(d.iter().map(|x| x / n).collect::<Vec<_>>());
        }
        for i in 0..unit.len() {
            for j in 0..i {
                if dot(&unit[i], &unit[j]).abs() > 1e-10 {
                    return Err(invalid(format!("slice directions {j} and {i} are not orthogonal")));
                }
            }
        }
        if !all_finite(&lo) || !all_finite(&hi) || (0..lo.len()).any(|i| lo[i] > hi[i]) {
            return Err(invalid("slice coordinate box must be finite with lo <= hi"));
        }
        Ok(ConvexDomain::AffineSlice { base, dirs: unit, lo, hi })
    }

    /// `R^k × {0}` inside `R^n`, truncated to `[−radius, radius]^k`.
    pub fn coordinate_slice(ambient: usize, k: usize, radius: f64) -> Result<Self> {
        if k == 0 || k > ambient {
            return Err(invalid("slice rank must be between 1 and the ambient dimension"));
        }
        let dirs = (0..k).map(|i| unit_vector(ambient, i)).collect();
        Self::new_slice(vec![0.0; ambient], dirs, vec![-radius; k], vec![radius; k])
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            ConvexDomain::Box { lo, .. } => lo.len(),
            ConvexDomain::VertexPolytope { vertices } => vertices[0].len(),
            ConvexDomain::AffineSlice { base, .. } => base.len(),
        }
    }

    /// Membership with the default off-plane tolerance.
    pub fn contains(&self, p: &VectorPoint) -> Result<bool> {
        self.contains_tol(p, DEFAULT_MEMBERSHIP_TOL)
    }

    pub fn contains_tol(&self, p: &VectorPoint, tol: f64) -> Result<bool> {
        ensure_dim(self.ambient_dim(), p.dim())?;
        Ok(self.contains_raw(p.coords(), tol))
    }

    pub(crate) fn contains_raw(&self, p: &[f64], tol: f64) -> bool {
        match self {
            ConvexDomain::Box { lo, hi } => p.iter().zip(lo.iter().zip(hi)).all(|(x, (l, h))| l <= x && x <= h),
            ConvexDomain::VertexPolytope { vertices } => {
                let scale = 1.0 + vertices.iter().map(|v| norm(v)).fold(0.0, f64::max);
                nearest_in_hull(vertices, p).distance <= tol.max(1e-9 * scale)
            }
            ConvexDomain::AffineSlice { base, dirs, lo, hi } => {
                let (coords, residual) = slice_coords(base, dirs, p);
                let box_tol = tol * (1.0 + norm(p));
                residual <= tol
                    && coords
                        .iter()
                        .zip(lo.iter().zip(hi))
                        .all(|(c, (l, h))| *c >= l - box_tol && *c <= h + box_tol)
            }
        }
    }

    /// Uniform-style draw: per-coordinate uniform for boxes, sorted-spacings
    /// simplex weights for polytopes, coordinate-box draw for slices.
    pub(crate) fn sample_with(&self, rng: &mut Rng) -> Vec<f64> {
        match self {
            ConvexDomain::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| uniform(rng, *l, *h)).collect(),
            ConvexDomain::VertexPolytope { vertices } => {
                let w = simplex_weights(rng, vertices.len());
                combine(vertices, &w)
            }
            ConvexDomain::AffineSlice { base, dirs, lo, hi } => {
                let c: Vec<f64> = lo.iter().zip(hi).map(|(l, h)| uniform(rng, *l, *h)).collect();
                embed(base, dirs, &c)
            }
        }
    }

    /// Structured draw used by the falsifier: coordinates snapped to bounds,
    /// midpoints or zero; polytope vertices, edge midpoints or the centroid.
    pub(crate) fn anchor_with(&self, rng: &mut Rng) -> Vec<f64> {
        match self {
            ConvexDomain::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| snapped(rng, *l, *h)).collect(),
            ConvexDomain::VertexPolytope { vertices } => {
                let k = vertices.len();
                match rng.random_range(0..3u8) {
                    0 => vertices[rng.random_range(0..k)].clone(),
                    1 => {
                        let a = rng.random_range(0..k);
                        let b = rng.random_range(0..k);
                        combine(&[vertices[a].clone(), vertices[b].clone()], &[0.5, 0.5])
                    }
                    _ => combine(vertices, &vec![1.0 / k as f64; k]),
                }
            }
            ConvexDomain::AffineSlice { base, dirs, lo, hi } => {
                let c: Vec<f64> = lo.iter().zip(hi).map(|(l, h)| snapped(rng, *l, *h)).collect();
                embed(base, dirs, &c)
            }
        }
    }

    /// Draw from the ball of radius `r` around `center`, restricted to the
    /// slice plane for affine slices. The result may lie outside the domain.
    pub(crate) fn sample_ball_with(&self, center: &[f64], r: f64, rng: &mut Rng) -> Vec<f64> {
        match self {
            ConvexDomain::AffineSlice { dirs, .. } => {
                let c = ball_draw(rng, dirs.len(), r);
                let mut p = center.to_vec();
                for (ci, d) in c.iter().zip(dirs) {
                    for k in 0..p.len() {
                        p[k] += ci * d[k];
                    }
                }
                p
            }
            _ => ball_point(center, r, rng),
        }
    }

    /// Maps a nearby point back into the domain: clamping for boxes, nearest
    /// hull point for polytopes, coordinate clamping for slices.
    pub fn project(&self, p: &[f64]) -> Vec<f64> {
        match self {
            ConvexDomain::Box { lo, hi } => p.iter().zip(lo.iter().zip(hi)).map(|(x, (l, h))| x.clamp(*l, *h)).collect(),
            ConvexDomain::VertexPolytope { vertices } => nearest_in_hull(vertices, p).point,
            ConvexDomain::AffineSlice { base, dirs, lo, hi } => {
                let (coords, _) = slice_coords(base, dirs, p);
                let c: Vec<f64> = coords.iter().zip(lo.iter().zip(hi)).map(|(x, (l, h))| x.clamp(*l, *h)).collect();
                embed(base, dirs, &c)
            }
        }
    }

    /// `max ⟨v,p⟩ − min ⟨v,p⟩` over the domain, computed exactly from
    /// the box extents, the polytope vertices or the slice coordinate box.
    pub fn linear_spread(&self, v: &[f64]) -> Result<f64> {
        ensure_dim(self.ambient_dim(), v.len())?;
        Ok(match self {
            ConvexDomain::Box { lo, hi } => (0..v.len()).map(|i| v[i].abs() * (hi[i] - lo[i])).sum(),
            ConvexDomain::VertexPolytope { vertices } => {
                let vals: Vec<f64> = vertices.iter().map(|p| dot(v, p)).collect();
                let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
                max - min
            }
            ConvexDomain::AffineSlice { dirs, lo, hi, .. } => {
                dirs.iter().enumerate().map(|(i, d)| dot(v, d).abs() * (hi[i] - lo[i])).sum()
            }
        })
    }

    /// Orthonormal tangent directions when the domain is a lower-dimensional slice.
    pub fn tangent_basis(&self) -> Option<&[Vec<f64>]> {
        match self {
            ConvexDomain::AffineSlice { dirs, .. } => Some(dirs),
            _ => None,
        }
    }

    /// Parses the CLI mini-syntax:
    /// `box:<lo csv>:<hi csv>`, `poly:v1=<csv>;v2=<csv>;...`,
    /// `slice:base=<csv>;dirs=<dir>,<dir>;box=<lo>:<hi>` where a direction is
    /// `eK` or components joined by `/`, and the box bounds are a scalar or a csv.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Spec { token: spec.to_string(), reason: reason.to_string() };
        let (kind, rest) = spec.trim().split_once(':').ok_or_else(|| bad("expected <kind>:<parameters>"))?;
        match kind {
            "box" => {
                let (lo, hi) = rest.split_once(':').ok_or_else(|| bad("expected box:<lo>:<hi>"))?;
                Self::new_box(parse_csv_reals(lo)?, parse_csv_reals(hi)?)
            }
            "poly" => {
                let mut vertices = Vec::new();
                for item in rest.split(';').filter(|s| !s.trim().is_empty()) {
                    let (_, coords) = item.split_once('=').ok_or_else(|| bad("expected vK=<csv>"))?;
                    vertices.push(parse_csv_reals(coords)?);
                }
                Self::new_polytope(vertices)
            }
            "slice" => {
                let mut base = None;
                let mut dirs_text = None;
                let mut box_text = None;
                for item in rest.split(';').filter(|s| !s.trim().is_empty()) {
                    let (key, value) = item.split_once('=').ok_or_else(|| bad("expected key=value"))?;
                    match key.trim() {
                        "base" => base = Some(parse_csv_reals(value)?),
                        "dirs" => dirs_text = Some(value.to_string()),
                        "box" => box_text = Some(value.to_string()),
                        other => {
                            return Err(Error::Spec { token: other.to_string(), reason: "unknown slice key".into() })
                        }
                    }
                }
                let base = base.ok_or_else(|| bad("slice needs base=<csv>"))?;
                let dim = base.len();
                let dirs_text = dirs_text.ok_or_else(|| bad("slice needs dirs=..."))?;
                let dirs = dirs_text
                    .split(',')
                    .map(|d| parse_direction(d.trim(), dim))
                    .collect::<Result<Vec<_>>>()?;
                let k = dirs.len();
                let (lo, hi) = match box_text {
                    None => (vec![-DEFAULT_SLICE_RADIUS; k], vec![DEFAULT_SLICE_RADIUS; k]),
                    Some(b) => {
                        let (lo, hi) = b.split_once(':').ok_or_else(|| bad("expected box=<lo>:<hi>"))?;
                        (broadcast(parse_csv_reals(lo)?, k, spec)?, broadcast(parse_csv_reals(hi)?, k, spec)?)
                    }
                };
                Self::new_slice(base, dirs, lo, hi)
            }
            _ => Err(bad("unknown domain kind (expected box, poly or slice)")),
        }
    }
}

impl fmt::Display for ConvexDomain {
    /// Renders the CLI mini-syntax; slice directions are written as `/`-joined components.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let csv = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        match self {
            ConvexDomain::Box { lo, hi } => write!(f, "box:{}:{}", csv(lo), csv(hi)),
            ConvexDomain::VertexPolytope { vertices } => {
                let items: Vec<String> =
                    vertices.iter().enumerate().map(|(i, v)| format!("v{}={}", i + 1, csv(v))).collect();
                write!(f, "poly:{}", items.join(";"))
            }
            ConvexDomain::AffineSlice { base, dirs, lo, hi } => {
                let dirs: Vec<String> =
                    dirs.iter().map(|d| d.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join("/")).collect();
                write!(f, "slice:base={};dirs={};box={}:{}", csv(base), dirs.join(","), csv(lo), csv(hi))
            }
        }
    }
}

fn broadcast(v: Vec<f64>, k: usize, spec: &str) -> Result<Vec<f64>> {
    match v.len() {
        1 => Ok(vec![v[0]; k]),
        n if n == k => Ok(v),
        _ => Err(Error::Spec { token: spec.to_string(), reason: "slice box length must be 1 or the slice rank".into() }),
    }
}

fn parse_direction(text: &str, dim: usize) -> Result<Vec<f64>> {
    let bad = |reason: &str| Error::Spec { token: text.to_string(), reason: reason.into() };
    if let Some(idx) = text.strip_prefix('e') {
        let i: usize = idx.parse().map_err(|_| bad("expected eK"))?;
        if i == 0 || i > dim {
            return Err(bad("unit direction index out of range"));
        }
        return Ok(unit_vector(dim, i - 1));
    }
    let comps = text
        .split('/')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad("expected eK or /-separated components")))
        .collect::<Result<Vec<_>>>()?;
    if comps.len() != dim {
        return Err(bad("direction dimension differs from base"));
    }
    Ok(comps)
}

pub(crate) fn unit_vector(dim: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[i] = 1.0;
    e
}

fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    let u: f64 = rng.random();
    (lo + (hi - lo) * u).min(hi)
}

fn snapped(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    if rng.random_bool(0.5) {
        return uniform(rng, lo, hi);
    }
    match rng.random_range(0..4u8) {
        0 => lo,
        1 => hi,
        2 => 0.5 * (lo + hi),
        _ if lo <= 0.0 && 0.0 <= hi => 0.0,
        _ => 0.5 * (lo + hi),
    }
}

/// Sorted uniform spacings: uniform weights on the probability simplex.
fn simplex_weights(rng: &mut Rng, k: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..k.saturating_sub(1)).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut w = Vec::with_capacity(k);
    let mut prev = 0.0;
    for c in cuts {
        w.push(c - prev);
        prev = c;
    }
    w.push(1.0 - prev);
    w
}

fn combine(vertices: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let dim = vertices[0].len();
    let mut p = vec![0.0; dim];
    for (v, wi) in vertices.iter().zip(w) {
        for k in 0..dim {
            p[k] += wi * v[k];
        }
    }
    p
}

fn embed(base: &[f64], dirs: &[Vec<f64>], c: &[f64]) -> Vec<f64> {
    let mut p = base.to_vec();
    for (ci, d) in c.iter().zip(dirs) {
        for k in 0..p.len() {
            p[k] += ci * d[k];
        }
    }
    p
}

/// Slice coordinates of `p` and the norm of its off-plane residual.
fn slice_coords(base: &[f64], dirs: &[Vec<f64>], p: &[f64]) -> (Vec<f64>, f64) {
    let rel: Vec<f64> = p.iter().zip(base).map(|(a, b)| a - b).collect();
    let coords: Vec<f64> = dirs.iter().map(|d| dot(&rel, d)).collect();
    let mut residual = rel;
    for (c, d) in coords.iter().zip(dirs) {
        for k in 0..residual.len() {
            residual[k] -= c * d[k];
        }
    }
    (coords, norm(&residual))
}

fn ball_draw(rng: &mut Rng, dim: usize, r: f64) -> Vec<f64> {
    let g: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let n = norm(&g).max(f64::MIN_POSITIVE);
    let radius = r * rng.random::<f64>().powf(1.0 / dim as f64);
    g.into_iter().map(|x| x / n * radius).collect()
}

/// Uniform draw from the ball of radius `r` around `center` in `R^n`.
pub(crate) fn ball_point(center: &[f64], r: f64, rng: &mut Rng) -> Vec<f64> {
    let off = ball_draw(rng, center.len(), r);
    center.iter().zip(off).map(|(c, o)| c + o).collect()
}

/// `n` points of `d`, deterministic for a fixed seed.
pub fn domain_sample(d: &ConvexDomain, n: usize, seed: u64) -> Result<Vec<VectorPoint>> {
    if n == 0 {
        return Err(invalid("sample count must be >= 1"));
    }
    let mut rng = rng_from(seed);
    Ok((0..n).map(|_| VectorPoint::from_vec_unchecked(d.sample_with(&mut rng))).collect())
}

/// `k` equally spaced points of the segment `[x, y]`, endpoints included.
pub fn segment_sample(x: &VectorPoint, y: &VectorPoint, k: usize) -> Result<Vec<VectorPoint>> {
    ensure_dim(x.dim(), y.dim())?;
    if k < 2 {
        return Err(invalid("segment sample count must be >= 2"));
    }
    Ok((0..k)
        .map(|i| {
            let t = i as f64 / (k - 1) as f64;
            let coords = x.coords().iter().zip(y.coords()).map(|(a, b)| (1.0 - t) * a + t * b).collect();
            VectorPoint::from_vec_unchecked(coords)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[f64]) -> VectorPoint {
        VectorPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn box_contains_center() {
        let d = ConvexDomain::parse("box:-1,-1:1,1").unwrap();
        assert!(d.contains(&pt(&[0.0, 0.0])).unwrap());
        assert!(!d.contains(&pt(&[1.5, 0.0])).unwrap());
        assert!(d.contains(&pt(&[0.0])).is_err());
    }

    #[test]
    fn slice_membership() {
        let d = ConvexDomain::parse("slice:base=0,0,0;dirs=e1,e2;box=-5:5").unwrap();
        assert!(d.contains(&pt(&[1.0, 2.0, 0.0])).unwrap());
        assert!(!d.contains(&pt(&[1.0, 2.0, 0.5])).unwrap());
        assert!(!d.contains(&pt(&[6.0, 0.0, 0.0])).unwrap());
    }

    #[test]
    fn polytope_membership_matches_barycentric_grid() {
        let d = ConvexDomain::parse("poly:v1=0,0;v2=1,0;v3=0,1").unwrap();
        // Oracle: a grid of barycentric weights hits (0.25, 0.25) exactly at (0.5, 0.25, 0.25).
        let steps = 20;
        let mut found = false;
        for i in 0..=steps {
            for j in 0..=(steps - i) {
                let (a, b) = (j as f64 / steps as f64, (steps - i - j) as f64 / steps as f64);
                if (a - 0.25).abs() < 1e-12 && (b - 0.25).abs() < 1e-12 {
                    found = true;
                }
            }
        }
        assert!(found);
        assert!(d.contains(&pt(&[0.25, 0.25])).unwrap());
        assert!(!d.contains(&pt(&[0.75, 0.75])).unwrap());
    }

    #[test]
    fn box_sampling_is_deterministic() {
        let d = ConvexDomain::parse("box:0:1").unwrap();
        let a = domain_sample(&d, 3, 7).unwrap();
        let b = domain_sample(&d, 3, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| (0.0..=1.0).contains(&p[0])));
    }

    #[test]
    fn polytope_samples_are_members() {
        let d = ConvexDomain::parse("poly:v1=0,0;v2=2,0;v3=0,2").unwrap();
        for p in domain_sample(&d, 100, 3).unwrap() {
            assert!(d.contains(&p).unwrap(), "{p}");
        }
    }

    #[test]
    fn slice_samples_have_zero_third_coordinate() {
        let d = ConvexDomain::coordinate_slice(3, 2, 5.0).unwrap();
        for p in domain_sample(&d, 50, 11).unwrap() {
            assert_eq!(p[2], 0.0);
            assert!(d.contains(&p).unwrap());
        }
    }

    #[test]
    fn segment_examples() {
        let s = segment_sample(&pt(&[0.0, 0.0]), &pt(&[1.0, 1.0]), 3).unwrap();
        assert_eq!(s, vec![pt(&[0.0, 0.0]), pt(&[0.5, 0.5]), pt(&[1.0, 1.0])]);
        let s = segment_sample(&pt(&[3.0]), &pt(&[3.0]), 5).unwrap();
        assert_eq!(s, vec![pt(&[3.0]); 5]);
        let s = segment_sample(&pt(&[0.0]), &pt(&[2.0]), 5).unwrap();
        let vals: Vec<f64> = s.iter().map(|p| p[0]).collect();
        assert_eq!(vals, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert!(segment_sample(&pt(&[0.0]), &pt(&[2.0]), 1).is_err());
        assert!(segment_sample(&pt(&[0.0]), &pt(&[2.0, 1.0]), 3).is_err());
    }

    #[test]
    fn invalid_domains_rejected() {
        assert!(ConvexDomain::parse("box:1:0").is_err());
        assert!(ConvexDomain::parse("poly:").is_err());
        assert!(ConvexDomain::parse("slice:base=0,0;dirs=e1,1/1").is_err());
        assert!(ConvexDomain::parse("ball:0:1").is_err());
        assert!(ConvexDomain::parse("box:a:1").is_err());
    }

    #[test]
    fn display_round_trips() {
        for spec in ["box:-1,-1:1,1", "poly:v1=0,0;v2=1,0;v3=0,1", "slice:base=0,0,0;dirs=e1,e2;box=-5:5"] {
            let d = ConvexDomain::parse(spec).unwrap();
            assert_eq!(ConvexDomain::parse(&d.to_string()).unwrap(), d);
        }
    }

    #[test]
    fn projection_lands_in_domain() {
        let mut rng = rng_from(5);
        for spec in ["box:-1,-1:1,1", "poly:v1=0,0;v2=1,0;v3=0,1", "slice:base=0,0,0;dirs=1/1/0;box=-1:1"] {
            let d = ConvexDomain::parse(spec).unwrap();
            for _ in 0..50 {
                let p: Vec<f64> = (0..d.ambient_dim()).map(|_| uniform(&mut rng, -3.0, 3.0)).collect();
                let q = d.project(&p);
                assert!(d.contains_raw(&q, 1e-9), "{spec}: {q:?}");
            }
        }
    }

    #[test]
    fn exact_spread() {
        let d = ConvexDomain::cube(2, -1.0, 1.0).unwrap();
        assert_eq!(d.linear_spread(&[1.0, 0.0]).unwrap(), 2.0);
        let s = ConvexDomain::coordinate_slice(3, 2, 5.0).unwrap();
        assert_eq!(s.linear_spread(&[0.0, 0.0, 1.0]).unwrap(), 0.0);
    }
}
