// SPDX-License-Identifier: Apache-2.0

//! Shared value types: points, tolerance policy, properties and verdicts.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite point of `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct VectorPoint(Vec<f64>);

impl VectorPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("point must have dimension >= 1".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite coordinate {bad}")));
        }
        Ok(VectorPoint(coords))
    }

    /// Builds a point from coordinates the caller already knows are finite.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        VectorPoint(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        VectorPoint(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Parses a comma separated list of reals.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let coords = parse_csv_reals(text)?;
        VectorPoint::new(coords).map_err(|e| Error::Spec {
            token: text.to_string(),
            reason: e.to_string(),
        })
    }
}

impl TryFrom<Vec<f64>> for VectorPoint {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        VectorPoint::new(v)
    }
}

impl From<VectorPoint> for Vec<f64> {
    fn from(p: VectorPoint) -> Self {
        p.0
    }
}

impl Index<usize> for VectorPoint {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for VectorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn parse_csv_reals(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|_| Error::Spec {
                token: t.trim().to_string(),
                reason: "expected a real number".into(),
            })
        })
        .collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Numerical realization of strict versus non-strict inequalities.
///
/// `strict_premise_eps` and `conclusion_slack` are relative coefficients; the
/// absolute margins are these coefficients times `scale`, where `scale` is
/// `1 + max |inner product|` of the quantities being compared (per pair in
/// the falsifier).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub strict_premise_eps: f64,
    pub conclusion_slack: f64,
    pub orth_tol: f64,
    pub eig_tol: f64,
    pub fd_step: f64,
    pub scale: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            strict_premise_eps: 1e-9,
            conclusion_slack: 1e-9,
            orth_tol: 1e-10,
            eig_tol: 1e-8,
            fd_step: 1e-6,
            scale: 1.0,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("strict_premise_eps", self.strict_premise_eps),
            ("orth_tol", self.orth_tol),
            ("eig_tol", self.eig_tol),
            ("fd_step", self.fd_step),
            ("scale", self.scale),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.conclusion_slack >= 0.0 && self.conclusion_slack.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "conclusion_slack must be non-negative, got {}",
                self.conclusion_slack
            )));
        }
        Ok(())
    }

    /// Same policy at a new scale.
    pub fn with_scale(&self, scale: f64) -> Self {
        TolerancePolicy { scale: scale.max(1.0), ..*self }
    }

    /// Scale computed from the largest observed inner product magnitude.
    pub fn scaled_by_max_inner(&self, max_abs_inner: f64) -> Self {
        self.with_scale(1.0 + max_abs_inner)
    }

    /// Absolute margin a strict premise must exceed.
    pub fn premise_eps(&self) -> f64 {
        self.strict_premise_eps * self.scale
    }

    /// Absolute amount a non-strict conclusion may fall below zero.
    pub fn slack(&self) -> f64 {
        self.conclusion_slack * self.scale
    }
}

/// The five monotonicity classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Property {
    Monotone,
    Strict,
    Strong { modulus: f64 },
    Pseudo,
    Quasi,
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::Monotone => "monotone",
            Property::Strict => "strict",
            Property::Strong { .. } => "strong",
            Property::Pseudo => "pseudo",
            Property::Quasi => "quasi",
        }
    }

    /// Parses `monotone|strict|strong=<λ>|pseudo|quasi`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Spec { token: text.to_string(), reason: reason.into() };
        match text.trim() {
            "monotone" => Ok(Property::Monotone),
            "strict" => Ok(Property::Strict),
            "pseudo" => Ok(Property::Pseudo),
            "quasi" => Ok(Property::Quasi),
            other => {
                let Some(rest) = other.strip_prefix("strong") else {
                    return Err(bad("expected monotone, strict, strong=<modulus>, pseudo or quasi"));
                };
                let modulus = match rest.strip_prefix('=') {
                    Some(v) => v.trim().parse::<f64>().map_err(|_| bad("modulus is not a number"))?,
                    None if rest.is_empty() => crate::monotonicity::DEFAULT_STRONG_MODULUS,
                    None => return Err(bad("expected strong=<modulus>")),
                };
                if !(modulus > 0.0 && modulus.is_finite()) {
                    return Err(bad("strong modulus must be positive"));
                }
                Ok(Property::Strong { modulus })
            }
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Strong { modulus } => write!(f, "strong={modulus}"),
            p => f.write_str(p.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    NoViolationFound,
    Falsified,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictStatus::NoViolationFound => "no_violation_found",
            VerdictStatus::Falsified => "falsified",
        })
    }
}

/// A concrete pair violating one of the monotonicity predicates.
///
/// For `monotone`, `strict` and `strong`, `lhs = ⟨fx − fy, x − y⟩` and
/// `rhs = modulus·‖x − y‖²` (zero except for `strong`). For `pseudo` and
/// `quasi`, `lhs = ⟨fy, x − y⟩` (premise) and `rhs = ⟨fx, x − y⟩` (conclusion).
/// `margin` is the signed quantity the predicate requires to be non-negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationWitness {
    pub x: VectorPoint,
    pub y: VectorPoint,
    pub fx: Vec<f64>,
    pub fy: Vec<f64>,
    pub selection_x: usize,
    pub selection_y: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl ViolationWitness {
    /// `⟨fx − fy, x − y⟩` recomputed from the stored points and values.
    pub fn d_inner(&self) -> f64 {
        let dx = sub(self.x.coords(), self.y.coords());
        let df = sub(&self.fx, &self.fy);
        dot(&df, &dx)
    }
}

/// Outcome of a budgeted property check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub status: VerdictStatus,
    pub witness: Option<ViolationWitness>,
    pub samples_used: usize,
    pub seed: u64,
    pub tolerances: TolerancePolicy,
    /// Empirical strong-monotonicity modulus (minimum of `d_inner / ‖x − y‖²`),
    /// reported for `strong` checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_estimate: Option<f64>,
}

impl PropertyVerdict {
    pub fn is_falsified(&self) -> bool {
        self.status == VerdictStatus::Falsified
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_rejects_non_finite() {
        assert!(VectorPoint::new(vec![1.0, f64::NAN]).is_err());
        assert!(VectorPoint::new(vec![f64::INFINITY]).is_err());
        assert!(VectorPoint::new(vec![]).is_err());
        assert_eq!(VectorPoint::new(vec![1.0, 2.0]).unwrap().dim(), 2);
    }

    #[test]
    fn property_parse() {
        assert_eq!(Property::parse("quasi").unwrap(), Property::Quasi);
        assert_eq!(Property::parse("strong=1.5").unwrap(), Property::Strong { modulus: 1.5 });
        assert!(Property::parse("strong=-1").is_err());
        assert!(Property::parse("convex").is_err());
    }

    #[test]
    fn tolerance_scaling() {
        let t = TolerancePolicy::default().scaled_by_max_inner(9.0);
        assert_eq!(t.scale, 10.0);
        assert!((t.slack() - 1e-8).abs() < 1e-20);
        assert!(TolerancePolicy { fd_step: 0.0, ..Default::default() }.validate().is_err());
    }
}
