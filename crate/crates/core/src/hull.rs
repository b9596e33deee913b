// SPDX-License-Identifier: Apache-2.0

//! Nearest point of a finite convex hull, via Wolfe's minimum-norm-point
//! algorithm. Used for polytope membership and projection and for the
//! mean-value inclusion test.

use nalgebra::{DMatrix, DVector};

use crate::types::{dot, norm, sub};

/// Result of projecting a target onto `conv(points)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HullProjection {
    pub point: Vec<f64>,
    /// Convex weights over the input points (zero for points not used).
    pub weights: Vec<f64>,
    pub distance: f64,
}

const MAX_MAJOR: usize = 1000;

/// Projects `target` onto the convex hull of `points`.
///
/// Panics if `points` is empty or dimensions disagree.
pub fn nearest_in_hull(points: &[Vec<f64>], target: &[f64]) -> HullProjection {
    assert!(!points.is_empty(), "convex hull of no points");
    let shifted: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            assert_eq!(p.len(), target.len(), "hull point dimension mismatch");
            sub(p, target)
        })
        .collect();
    let weights = min_norm_weights(&shifted);
    let dim = target.len();
    let mut point = target.to_vec();
    let mut offset = vec![0.0; dim];
    for (w, p) in weights.iter().zip(&shifted) {
        for k in 0..dim {
            offset[k] += w * p[k];
        }
    }
    for k in 0..dim {
        point[k] += offset[k];
    }
    HullProjection { point, weights, distance: norm(&offset) }
}

/// Convex weights of the minimum-norm point of `conv(points)`.
fn min_norm_weights(points: &[Vec<f64>]) -> Vec<f64> {
    let n = points.len();
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0_f64, f64::max).max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;

    let start = (0..n)
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .unwrap();
    let mut corral = vec![start];
    let mut lambda = vec![1.0];
    let mut x = points[start].clone();

    for _ in 0..MAX_MAJOR {
        let xx = dot(&x, &x);
        let (j, xj) = (0..n)
            .map(|i| (i, dot(&x, &points[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xj >= xx - tol || corral.contains(&j) {
            break;
        }
        corral.push(j);
        lambda.push(0.0);

        while let Some(mu) = affine_min_norm(points, &corral) {
            if mu.iter().all(|&m| m > 1e-14) {
                lambda = mu;
                x = combine(points, &corral, &lambda);
                break;
            }
            let mut theta = 1.0_f64;
            for (l, m) in lambda.iter().zip(&mu) {
                if *m <= 1e-14 && l - m > 0.0 {
                    theta = theta.min(l / (l - m));
                }
            }
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l += theta * (m - *l);
            }
            let mut keep_c = Vec::with_capacity(corral.len());
            let mut keep_l = Vec::with_capacity(corral.len());
            for (&c, &l) in corral.iter().zip(&lambda) {
                if l > 1e-14 {
                    keep_c.push(c);
                    keep_l.push(l);
                }
            }
            if keep_c.is_empty() {
                break;
            }
            let total: f64 = keep_l.iter().sum();
            keep_l.iter_mut().for_each(|l| *l /= total);
            corral = keep_c;
            lambda = keep_l;
            x = combine(points, &corral, &lambda);
        }
    }

    let mut weights = vec![0.0; n];
    for (&c, &l) in corral.iter().zip(&lambda) {
        weights[c] += l;
    }
    weights
}

fn combine(points: &[Vec<f64>], corral: &[usize], lambda: &[f64]) -> Vec<f64> {
    let dim = points[0].len();
    let mut x = vec![0.0; dim];
    for (&c, &l) in corral.iter().zip(lambda) {
        for k in 0..dim {
            x[k] += l * points[c][k];
        }
    }
    x
}

/// Minimum-norm point of the affine hull of the corral, as affine weights.
fn affine_min_norm(points: &[Vec<f64>], corral: &[usize]) -> Option<Vec<f64>> {
    let m = corral.len();
    // Solve [G 1; 1ᵀ 0][μ; θ] = [0; 1] with G the Gram matrix.
    let mut a = DMatrix::<f64>::zeros(m + 1, m + 1);
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] = dot(&points[corral[i]], &points[corral[j]]);
        }
        a[(i, m)] = 1.0;
        a[(m, i)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(m + 1);
    b[m] = 1.0;
    let sol = match a.clone().full_piv_lu().solve(&b) {
        Some(s) if s.iter().all(|v| v.is_finite()) => s,
        _ => a.svd(true, true).solve(&b, 1e-14).ok()?,
    };
    let mu: Vec<f64> = sol.iter().take(m).copied().collect();
    let total: f64 = mu.iter().sum();
    if !total.is_finite() || total.abs() < 1e-12 {
        return None;
    }
    Some(mu.into_iter().map(|v| v / total).collect())
}
