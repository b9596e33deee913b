// SPDX-License-Identifier: Apache-2.0

//! Evaluable maps `Ω → R^n` with one or more selections.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{ensure_dim, Error, EvalError, Result};
use crate::expr::{parse_expr, ExprAst};

pub type SelectionFn = Arc<dyn Fn(&[f64]) -> std::result::Result<Vec<f64>, EvalError> + Send + Sync>;
pub type JacobianFn = Arc<dyn Fn(&[f64]) -> std::result::Result<DMatrix<f64>, EvalError> + Send + Sync>;

/// A finitely set-valued map, given by its selections.
///
/// Selections must be pure: evaluating twice at the same point returns the
/// same vector.
#[derive(Clone)]
pub struct TestMap {
    name: String,
    dim_in: usize,
    dim_out: usize,
    selections: Vec<SelectionFn>,
    analytic_jacobian: Option<JacobianFn>,
    /// Source expressions when the map came from the expression language.
    sources: Option<Vec<Vec<String>>>,
}

impl fmt::Debug for TestMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestMap")
            .field("name", &self.name)
            .field("dim_in", &self.dim_in)
            .field("dim_out", &self.dim_out)
            .field("selections", &self.selections.len())
            .field("analytic_jacobian", &self.analytic_jacobian.is_some())
            .finish()
    }
}

impl TestMap {
    pub fn new(name: impl Into<String>, dim_in: usize, dim_out: usize, selections: Vec<SelectionFn>) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidArgument("map dimensions must be positive".into()));
        }
        if selections.is_empty() {
            return Err(Error::InvalidArgument("a map needs at least one selection".into()));
        }
        Ok(TestMap { name: name.into(), dim_in, dim_out, selections, analytic_jacobian: None, sources: None })
    }

    /// Single-selection map from a closure.
    pub fn from_fn<F>(name: impl Into<String>, dim_in: usize, dim_out: usize, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::new(name, dim_in, dim_out, vec![Arc::new(move |x: &[f64]| Ok(f(x)))])
    }

    /// Builds a map whose selections are lists of component expressions in
    /// `x1..x{dim}`.
    pub fn from_exprs(name: impl Into<String>, dim: usize, selections: &[Vec<String>]) -> Result<Self> {
        let mut fns: Vec<SelectionFn> = Vec::with_capacity(selections.len());
        let mut dim_out = None;
        for comps in selections {
            let asts: Vec<ExprAst> = comps.iter().map(|c| parse_expr(c, dim)).collect::<std::result::Result<_, _>>()?;
            match dim_out {
                None => dim_out = Some(asts.len()),
                Some(d) => ensure_dim(d, asts.len())?,
            }
            fns.push(Arc::new(move |x: &[f64]| asts.iter().map(|a| a.eval(x)).collect()));
        }
        let mut map = Self::new(name, dim, dim_out.unwrap_or(0), fns)?;
        map.sources = Some(selections.to_vec());
        Ok(map)
    }

    /// Affine map `x ↦ A x + b` with its exact Jacobian.
    pub fn affine(name: impl Into<String>, a: DMatrix<f64>, b: Option<Vec<f64>>) -> Result<Self> {
        let (rows, cols) = a.shape();
        let b = b.unwrap_or_else(|| vec![0.0; rows]);
        ensure_dim(rows, b.len())?;
        let a_eval = a.clone();
        let map = Self::new(
            name,
            cols,
            rows,
            vec![Arc::new(move |x: &[f64]| {
                if x.len() != cols {
                    return Err(EvalError::Dimension { expected: cols, got: x.len() });
                }
                Ok((0..rows).map(|i| b[i] + (0..cols).map(|j| a_eval[(i, j)] * x[j]).sum::<f64>()).collect())
            })],
        )?;
        Ok(map.with_jacobian(Arc::new(move |_x: &[f64]| Ok(a.clone()))))
    }

    pub fn with_jacobian(mut self, jac: JacobianFn) -> Self {
        self.analytic_jacobian = Some(jac);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn selection_count(&self) -> usize {
        self.selections.len()
    }

    pub fn sources(&self) -> Option<&[Vec<String>]> {
        self.sources.as_deref()
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.analytic_jacobian.is_some()
    }

    /// Evaluates selection `s` at `x`, rejecting wrong lengths and non-finite output.
    pub fn eval(&self, s: usize, x: &[f64]) -> Result<Vec<f64>> {
        let wrap = |source| Error::Evaluation { point: x.to_vec(), selection: s, source };
        if x.len() != self.dim_in {
            return Err(wrap(EvalError::Dimension { expected: self.dim_in, got: x.len() }));
        }
        let v = (self.selections[s])(x).map_err(wrap)?;
        if v.len() != self.dim_out {
            return Err(wrap(EvalError::Dimension { expected: self.dim_out, got: v.len() }));
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(wrap(EvalError::NonFinite));
        }
        Ok(v)
    }

    /// All selection values at `x`.
    pub fn eval_all(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        (0..self.selections.len()).map(|s| self.eval(s, x)).collect()
    }

    pub fn analytic_jacobian(&self, x: &[f64]) -> Option<Result<DMatrix<f64>>> {
        self.analytic_jacobian.as_ref().map(|j| {
            j(x).map_err(|source| Error::Evaluation { point: x.to_vec(), selection: 0, source })
        })
    }

    /// Ensures the map is single-valued, as required by the Jacobian machinery.
    pub fn require_single(&self) -> Result<()> {
        if self.selections.len() != 1 {
            return Err(Error::Unsupported(format!(
                "Jacobian estimation for multi-selection map `{}` ({} selections)",
                self.name,
                self.selections.len()
            )));
        }
        Ok(())
    }
}

/// `F + ω`: every selection shifted by the same offset.
#[derive(Debug, Clone)]
pub struct TranslatedMap {
    pub base: TestMap,
    pub offset: Vec<f64>,
}

impl TranslatedMap {
    pub fn new(base: TestMap, offset: Vec<f64>) -> Result<Self> {
        ensure_dim(base.dim_out(), offset.len())?;
        Ok(TranslatedMap { base, offset })
    }

    pub fn to_test_map(&self) -> TestMap {
        let base = &self.base;
        let selections = (0..base.selection_count())
            .map(|s| {
                let inner = base.selections[s].clone();
                let omega = self.offset.clone();
                Arc::new(move |x: &[f64]| {
                    let mut v = inner(x)?;
                    v.iter_mut().zip(&omega).for_each(|(a, w)| *a += w);
                    Ok(v)
                }) as SelectionFn
            })
            .collect();
        TestMap {
            name: format!("{}+omega", base.name),
            dim_in: base.dim_in,
            dim_out: base.dim_out,
            selections,
            analytic_jacobian: base.analytic_jacobian.clone(),
            sources: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_map_evaluates() {
        let m = TestMap::from_exprs(
            "exp-sum",
            3,
            &[vec!["exp(-(x1+x2))".into(), "exp(-(x1+x2))".into(), "0".into()]],
        )
        .unwrap();
        assert_eq!(m.dim_out(), 3);
        assert_eq!(m.eval(0, &[0.0, 0.0, 0.0]).unwrap(), vec![1.0, 1.0, 0.0]);
        assert!(m.eval(0, &[0.0]).is_err());
    }

    #[test]
    fn translation_shifts_every_selection() {
        let m = TestMap::from_exprs("two", 1, &[vec!["x1".into()], vec!["2*x1".into()]]).unwrap();
        let t = TranslatedMap::new(m, vec![0.5]).unwrap().to_test_map();
        assert_eq!(t.eval_all(&[1.0]).unwrap(), vec![vec![1.5], vec![2.5]]);
    }

    #[test]
    fn evaluation_error_names_point() {
        let m = TestMap::from_exprs("log", 1, &[vec!["log(x1)".into()]]).unwrap();
        let err = m.eval(0, &[-1.0]).unwrap_err().to_string();
        assert!(err.contains("[-1.0]"), "{err}");
    }

    #[test]
    fn mismatched_selection_lengths_rejected() {
        assert!(TestMap::from_exprs("bad", 1, &[vec!["x1".into()], vec!["x1".into(), "x1".into()]]).is_err());
    }
}
