// SPDX-License-Identifier: Apache-2.0

//! Built-in test maps with known classifications, and JSON map files.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::domain::ConvexDomain;
use crate::error::{Error, EvalError, Result};
use crate::map::TestMap;
use crate::monotonicity::PropertyClass;
use crate::rng::rng_from;

pub const COUNTEREXAMPLE: &str = "exp-sum-slice";

#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub name: String,
    pub map: TestMap,
    pub known_class: BTreeSet<PropertyClass>,
    pub provenance: String,
    /// Domain the classification refers to.
    pub domain: ConvexDomain,
    /// Modulus probed by hierarchy checks for the `strong` class.
    pub strong_modulus: f64,
    /// Max-norm Lipschitz constant of the analytic Jacobian on a neighbourhood
    /// of the domain; `None` for nonsmooth maps.
    pub jacobian_lipschitz: Option<f64>,
}

impl RegistryEntry {
    /// Checks that the declared classes respect the implication chain.
    pub fn class_is_closed(&self) -> bool {
        let chain = PropertyClass::CHAIN;
        chain.iter().enumerate().all(|(i, c)| {
            !self.known_class.contains(c) || chain[i + 1..].iter().all(|w| self.known_class.contains(w))
        })
    }
}

fn classes(list: &[PropertyClass]) -> BTreeSet<PropertyClass> {
    list.iter().copied().collect()
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn expr_map(name: &str, dim: usize, comps: &[&str]) -> TestMap {
    TestMap::from_exprs(name, dim, &[strs(comps)]).expect("registry expressions parse")
}

fn jac(f: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static) -> crate::map::JacobianFn {
    Arc::new(move |x: &[f64]| Ok::<_, EvalError>(f(x)))
}

/// Square matrix with entries uniform in `[−1, 1]`.
pub fn random_matrix(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = rng_from(seed);
    DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..=1.0))
}

/// `A = ½ MᵀM + ½ I + K` with `K` antisymmetric; `sym(A) ⪰ ½ I`.
pub fn positive_definite_matrix(n: usize, seed: u64) -> DMatrix<f64> {
    let m = random_matrix(n, seed);
    let k = random_matrix(n, seed ^ 0x5eed);
    m.transpose() * &m * 0.5 + DMatrix::identity(n, n) * 0.5 + (&k - k.transpose()) * 0.5
}

/// Expression source of `x ↦ A x`.
pub fn affine_components(a: &DMatrix<f64>) -> Vec<String> {
    (0..a.nrows())
        .map(|i| {
            (0..a.ncols())
                .map(|j| {
                    let c = a[(i, j)];
                    if c < 0.0 {
                        format!("(-{:?})*x{}", -c, j + 1)
                    } else {
                        format!("{c:?}*x{}", j + 1)
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        })
        .collect()
}

/// Expression-backed affine map with its exact Jacobian.
pub fn affine_map(name: &str, a: &DMatrix<f64>) -> TestMap {
    let comps = affine_components(a);
    let a = a.clone();
    TestMap::from_exprs(name, a.ncols(), &[comps]).expect("affine expressions parse").with_jacobian(jac(move |_| a.clone()))
}

/// The three-dimensional map `(x, y, 0) ↦ e^{−(x+y)}(1, 1, 0)` on `R²×{0}`.
pub fn counterexample_map() -> TestMap {
    expr_map(COUNTEREXAMPLE, 3, &["exp(-(x1+x2))", "exp(-(x1+x2))", "0"]).with_jacobian(jac(|x| {
        let e = -(-(x[0] + x[1])).exp();
        DMatrix::from_row_slice(3, 3, &[e, e, 0.0, e, e, 0.0, 0.0, 0.0, 0.0])
    }))
}

struct Spec {
    name: &'static str,
    dim: usize,
    comps: &'static [&'static str],
    class: &'static [PropertyClass],
    domain: &'static str,
    strong_modulus: f64,
    lipschitz: Option<f64>,
    provenance: &'static str,
}

use PropertyClass::{Monotone as M, Pseudo as P, Quasi as Q, Strict as S, Strong as G};

const SPECS: &[Spec] = &[
    Spec {
        name: "identity-1d",
        dim: 1,
        comps: &["x1"],
        class: &[G, S, M, P, Q],
        domain: "box:-1:1",
        strong_modulus: 1.0,
        lipschitz: Some(0.0),
        provenance: "identity; strongly monotone with modulus exactly 1",
    },
    Spec {
        name: "identity-2d",
        dim: 2,
        comps: &["x1", "x2"],
        class: &[G, S, M, P, Q],
        domain: "box:-1,-1:1,1",
        strong_modulus: 1.0,
        lipschitz: Some(0.0),
        provenance: "identity; strongly monotone with modulus exactly 1",
    },
    Spec {
        name: "zero-2d",
        dim: 2,
        comps: &["0", "0"],
        class: &[M, P, Q],
        domain: "box:-1,-1:1,1",
        strong_modulus: 1e-6,
        lipschitz: Some(0.0),
        provenance: "constant map; monotone but not strictly monotone",
    },
    Spec {
        name: "rotation-2d",
        dim: 2,
        comps: &["x2", "-x1"],
        class: &[M, P, Q],
        domain: "box:-1,-1:1,1",
        strong_modulus: 1e-6,
        lipschitz: Some(0.0),
        provenance: "skew-symmetric linear map; ⟨F(x)−F(y), x−y⟩ = 0 identically",
    },
    Spec {
        name: "cubic-1d",
        dim: 1,
        comps: &["x1^3"],
        class: &[S, M, P, Q],
        domain: "box:-1:1",
        strong_modulus: 1e-2,
        lipschitz: Some(6.1),
        provenance: "x³; strictly monotone with zero derivative at 0, hence not strongly monotone",
    },
    Spec {
        name: "square-1d",
        dim: 1,
        comps: &["x1^2"],
        class: &[Q],
        domain: "box:-2:2",
        strong_modulus: 1e-6,
        lipschitz: Some(2.0),
        provenance: "x²; quasimonotone but not pseudomonotone (y = 0, x < 0)",
    },
    Spec {
        name: "exp-neg-1d",
        dim: 1,
        comps: &["exp(-x1)"],
        class: &[P, Q],
        domain: "box:-3:3",
        strong_modulus: 1e-6,
        lipschitz: Some(20.2),
        provenance: "e^{−x}; positive and decreasing, so pseudomonotone but not monotone",
    },
    Spec {
        name: "neg-1d",
        dim: 1,
        comps: &["-x1"],
        class: &[],
        domain: "box:-1:1",
        strong_modulus: 1e-6,
        lipschitz: Some(0.0),
        provenance: "−x; anti-monotone, not even quasimonotone",
    },
    Spec {
        name: "abs-1d",
        dim: 1,
        comps: &["abs(x1)"],
        class: &[Q],
        domain: "box:-1:1",
        strong_modulus: 1e-6,
        lipschitz: None,
        provenance: "|x|; nonsmooth at 0 with Clarke Jacobian [−1, 1]; quasimonotone only",
    },
    Spec {
        name: "saddle-2d",
        dim: 2,
        comps: &["-x1", "x2"],
        class: &[],
        domain: "box:-1,-1:1,1",
        strong_modulus: 1e-6,
        lipschitz: Some(0.0),
        provenance: "diag(−1, 1); indefinite Jacobian, not quasimonotone",
    },
];

/// All built-in maps.
pub fn registry() -> Vec<RegistryEntry> {
    let mut out: Vec<RegistryEntry> = SPECS
        .iter()
        .map(|s| {
            let mut map = expr_map(s.name, s.dim, s.comps);
            map = with_known_jacobian(s.name, map);
            RegistryEntry {
                name: s.name.to_string(),
                map,
                known_class: classes(s.class),
                provenance: s.provenance.to_string(),
                domain: ConvexDomain::parse(s.domain).expect("registry domains parse"),
                strong_modulus: s.strong_modulus,
                jacobian_lipschitz: s.lipschitz,
            }
        })
        .collect();

    for (name, n, seed) in [("affine-pd-2d", 2, 11u64), ("affine-pd-3d", 3, 12u64)] {
        let a = positive_definite_matrix(n, seed);
        out.push(RegistryEntry {
            name: name.to_string(),
            map: affine_map(name, &a),
            known_class: classes(&[G, S, M, P, Q]),
            provenance: format!("x ↦ A x with seeded A (seed {seed}), sym(A) ⪰ ½I"),
            domain: ConvexDomain::cube(n, -1.0, 1.0).expect("cube"),
            strong_modulus: 0.25,
            jacobian_lipschitz: Some(0.0),
        });
    }

    out.push(RegistryEntry {
        name: COUNTEREXAMPLE.to_string(),
        map: counterexample_map(),
        known_class: classes(&[P, Q]),
        provenance: "e^{−(x1+x2)}(1,1,0) on R²×{0}; not monotone, pseudomonotone on the slice".to_string(),
        domain: ConvexDomain::coordinate_slice(3, 2, crate::domain::DEFAULT_SLICE_RADIUS).expect("slice"),
        strong_modulus: 1e-6,
        // |∂J_ij/∂x_k| ≤ e^{10.01} on the slice dilated by 1e-3; √2 from Σ over two coordinates.
        jacobian_lipschitz: Some(2f64.sqrt() * 10.01f64.exp()),
    });
    out
}

fn with_known_jacobian(name: &str, map: TestMap) -> TestMap {
    match name {
        "identity-1d" => map.with_jacobian(jac(|_| DMatrix::identity(1, 1))),
        "identity-2d" => map.with_jacobian(jac(|_| DMatrix::identity(2, 2))),
        "zero-2d" => map.with_jacobian(jac(|_| DMatrix::zeros(2, 2))),
        "rotation-2d" => map.with_jacobian(jac(|_| DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]))),
        "cubic-1d" => map.with_jacobian(jac(|x| DMatrix::from_element(1, 1, 3.0 * x[0] * x[0]))),
        "square-1d" => map.with_jacobian(jac(|x| DMatrix::from_element(1, 1, 2.0 * x[0]))),
        "exp-neg-1d" => map.with_jacobian(jac(|x| DMatrix::from_element(1, 1, -(-x[0]).exp()))),
        "neg-1d" => map.with_jacobian(jac(|_| DMatrix::from_element(1, 1, -1.0))),
        "saddle-2d" => map.with_jacobian(jac(|_| DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]))),
        _ => map,
    }
}

pub fn lookup(name: &str) -> Option<RegistryEntry> {
    registry().into_iter().find(|e| e.name == name)
}

/// JSON map file: `{name, dimension, components, selections?, domain?}`.
///
/// The selection list is `components` followed by every entry of `selections`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    pub name: String,
    pub dimension: usize,
    pub components: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selections: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
}

impl MapFile {
    pub fn build(&self) -> Result<(TestMap, Option<ConvexDomain>)> {
        let mut sels = vec![self.components.clone()];
        sels.extend(self.selections.iter().flatten().cloned());
        let map = TestMap::from_exprs(self.name.clone(), self.dimension, &sels)?;
        let domain = self.domain.as_deref().map(ConvexDomain::parse).transpose()?;
        Ok((map, domain))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let token = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Spec { token: token.clone(), reason: format!("cannot read map file: {e}") })?;
        serde_json::from_str(&text).map_err(|e| Error::Spec { token, reason: format!("invalid map file: {e}") })
    }
}

/// A map resolved from `<registry name>` or `file:<path>`.
#[derive(Debug, Clone)]
pub struct ResolvedMap {
    pub map: TestMap,
    pub domain: Option<ConvexDomain>,
    pub entry: Option<RegistryEntry>,
}

pub fn resolve_map(spec: &str) -> Result<ResolvedMap> {
    if let Some(path) = spec.strip_prefix("file:") {
        let (map, domain) = MapFile::load(Path::new(path))?.build()?;
        return Ok(ResolvedMap { map, domain, entry: None });
    }
    let entry = lookup(spec).ok_or_else(|| Error::Spec { token: spec.to_string(), reason: "unknown map name".into() })?;
    Ok(ResolvedMap { map: entry.map.clone(), domain: Some(entry.domain.clone()), entry: Some(entry) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    #[test]
    fn counterexample_components() {
        let e = lookup(COUNTEREXAMPLE).unwrap();
        assert_eq!(e.map.dim_in(), 3);
        assert_eq!(e.map.sources().unwrap()[0], strs(&["exp(-(x1+x2))", "exp(-(x1+x2))", "0"]));
    }

    #[test]
    fn identity_is_strong() {
        let e = lookup("identity-2d").unwrap();
        assert!(PropertyClass::CHAIN.iter().all(|c| e.known_class.contains(c)));
        assert_eq!(lookup("square-1d").unwrap().known_class, classes(&[Q]));
    }

    #[test]
    fn classes_respect_chain() {
        for e in registry() {
            assert!(e.class_is_closed(), "{}", e.name);
        }
    }

    #[test]
    fn sources_round_trip_through_printer() {
        for e in registry() {
            for sel in e.map.sources().unwrap() {
                for src in sel {
                    let ast = parse_expr(src, e.map.dim_in()).unwrap();
                    assert_eq!(parse_expr(&ast.to_string(), e.map.dim_in()).unwrap(), ast, "{src}");
                }
            }
        }
    }

    #[test]
    fn affine_expressions_match_matrix() {
        let a = positive_definite_matrix(3, 12);
        let m = affine_map("a", &a);
        let x = [0.3, -0.7, 0.1];
        let v = m.eval(0, &x).unwrap();
        for i in 0..3 {
            let expect: f64 = (0..3).map(|j| a[(i, j)] * x[j]).sum();
            assert!((v[i] - expect).abs() < 1e-14);
        }
        let s = (&a + a.transpose()) * 0.5;
        assert!(s.symmetric_eigenvalues().min() >= 0.5 - 1e-12);
    }

    #[test]
    fn map_file_with_extra_selections() {
        let f: MapFile = serde_json::from_str(
            r#"{"name":"two","dimension":1,"components":["x1"],"selections":[["2*x1"]],"domain":"box:0:1"}"#,
        )
        .unwrap();
        let (m, d) = f.build().unwrap();
        assert_eq!(m.selection_count(), 2);
        assert_eq!(d.unwrap(), ConvexDomain::cube(1, 0.0, 1.0).unwrap());
        assert!(resolve_map("no-such-map").is_err());
    }
}
