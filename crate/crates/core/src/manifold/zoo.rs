//! Built-in charts used as test corpus.

use super::octonion::structure_constants;
use super::{AmbientStructure, ChartManifold, Embedding, GeometryError};
use crate::exprjet::Expr;
use serde::{Deserialize, Serialize};

pub const ZOO_NAMES: [&str; 5] = [
    "flat_cn",
    "fubini_study_cpn",
    "s6_nearly_kahler",
    "flat_twisted_j",
    "round_sphere_diag",
];

/// Zoo parameters; `n` is the complex dimension, `dim` the real one (only
/// `round_sphere_diag` reads `dim`).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZooParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

impl ZooParams {
    pub fn with_n(n: usize) -> Self {
        ZooParams {
            n: Some(n),
            dim: None,
        }
    }
}

pub fn zoo(name: &str, params: &ZooParams) -> Result<ChartManifold, GeometryError> {
    let unsupported = |reason: String| GeometryError::UnsupportedParams {
        name: name.to_string(),
        reason,
    };
    let complex_dim = |default: usize| -> Result<usize, GeometryError> {
        if params.dim.is_some() {
            return Err(unsupported("takes `n`, not `dim`".into()));
        }
        let n = params.n.unwrap_or(default);
        if n == 0 {
            return Err(unsupported("n must be positive".into()));
        }
        Ok(n)
    };
    match name {
        "flat_cn" => Ok(flat_cn(complex_dim(3)?)),
        "fubini_study_cpn" => Ok(fubini_study(complex_dim(3)?)),
        "s6_nearly_kahler" => {
            if complex_dim(3)? != 3 {
                return Err(unsupported("the nearly Kähler sphere is S⁶ (n = 3)".into()));
            }
            Ok(s6_nearly_kahler())
        }
        "flat_twisted_j" => {
            let n = complex_dim(3)?;
            if n < 2 {
                return Err(unsupported("twisting needs n ≥ 2".into()));
            }
            Ok(flat_twisted_j(n))
        }
        "round_sphere_diag" => {
            let dim = match (params.n, params.dim) {
                (Some(_), Some(_)) => return Err(unsupported("give `n` or `dim`, not both".into())),
                (Some(n), None) => 2 * n,
                (None, Some(d)) => d,
                (None, None) => 6,
            };
            if dim < 2 || dim % 2 != 0 {
                return Err(unsupported(format!("dimension {dim} must be even and ≥ 2")));
            }
            Ok(round_sphere_diag(dim))
        }
        other => Err(GeometryError::UnknownZoo(other.to_string())),
    }
}

fn kron(i: usize, k: usize) -> Expr {
    if i == k {
        Expr::one()
    } else {
        Expr::zero()
    }
}

/// `J e_a = e_{a+n}`, i.e. `J^{a+n}_a = 1`, `J^a_{a+n} = −1`.
fn standard_j(n: usize) -> Vec<Vec<Expr>> {
    let d = 2 * n;
    (0..d)
        .map(|row| {
            (0..d)
                .map(|col| {
                    if col < n && row == col + n {
                        Expr::one()
                    } else if col >= n && row + n == col {
                        -Expr::one()
                    } else {
                        Expr::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn euclidean(d: usize) -> Vec<Vec<Expr>> {
    (0..d).map(|i| (0..d).map(|k| kron(i, k)).collect()).collect()
}

fn flat_cn(n: usize) -> ChartManifold {
    ChartManifold::new("flat_cn", euclidean(2 * n), standard_j(n)).expect("square even chart")
}

fn radius_squared(d: usize) -> Expr {
    (0..d).fold(Expr::zero(), |acc, i| acc + Expr::var(i).powi(2))
}

/// Fubini–Study metric in inhomogeneous coordinates `z_a = x_a + i x_{a+n}`:
/// `h_{ab} = (δ_ab s − z̄_a z_b)/s²` with `s = 1 + |z|²`, realised as
/// `g = [[A, B], [−B, A]]` for `h = A + iB`, i.e. `g(v, w) = Re h(v, w̄)`.
fn fubini_study(n: usize) -> ChartManifold {
    let d = 2 * n;
    let s = Expr::one() + radius_squared(d);
    let s2 = s.clone().powi(2);
    let x = |a: usize| Expr::var(a);
    let y = |a: usize| Expr::var(a + n);
    // Re(z̄_a z_b) = x_a x_b + y_a y_b, Im(z̄_a z_b) = x_a y_b − y_a x_b
    let a_block = |a: usize, b: usize| {
        let base = kron(a, b) * s.clone() - (x(a) * x(b) + y(a) * y(b));
        base / s2.clone()
    };
    let b_block = |a: usize, b: usize| {
        if a == b {
            Expr::zero()
        } else {
            -(x(a) * y(b) - y(a) * x(b)) / s2.clone()
        }
    };
    let mut g = vec![vec![Expr::zero(); d]; d];
    for a in 0..n {
        for b in 0..n {
            g[a][b] = a_block(a, b);
            g[a + n][b + n] = a_block(a, b);
            g[a][b + n] = b_block(a, b);
            g[a + n][b] = -b_block(a, b);
        }
    }
    ChartManifold::new("fubini_study_cpn", g, standard_j(n)).expect("square even chart")
}

/// Unit S⁶ through inverse stereographic projection
/// `X = (2y, |y|² − 1)/(1 + |y|²)` with `J_X(v) = X × v`.
///
/// The pulled-back metric is conformally flat, `g = 4/s² δ`, so the induced
/// structure is `J^i_j = (s²/4) ⟨∂_i X, X × ∂_j X⟩`.
fn s6_nearly_kahler() -> ChartManifold {
    let d = 6;
    let s = Expr::one() + radius_squared(d);
    let mut map: Vec<Expr> = (0..d)
        .map(|a| Expr::constant(2.0) * Expr::var(a) / s.clone())
        .collect();
    map.push((radius_squared(d) - Expr::one()) / s.clone());
    let embedding = Embedding {
        map,
        rule: AmbientStructure::OctonionCross,
    };
    let metric = embedding.pullback_metric(d);
    let dx = embedding.differential(d);
    let factor = s.powi(2) / Expr::constant(4.0);
    let eps = structure_constants();
    let j: Vec<Vec<Expr>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|jj| {
                    // ⟨∂_i X, X × ∂_j X⟩ = Σ ε_{abc} X^a ∂_j X^b ∂_i X^c
                    let pairing = eps.iter().fold(Expr::zero(), |acc, &(a, b, c, sign)| {
                        let term =
                            embedding.map[a].clone() * dx[jj][b].clone() * dx[i][c].clone();
                        if sign > 0.0 {
                            acc + term
                        } else {
                            acc - term
                        }
                    });
                    factor.clone() * pairing
                })
                .collect()
        })
        .collect();
    ChartManifold::new("s6_nearly_kahler", metric, j)
        .expect("square even chart")
        .with_embedding(embedding)
}

fn mat_mul(a: &[Vec<Expr>], b: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|k| {
                    (0..d).fold(Expr::zero(), |acc, l| acc + a[i][l].clone() * b[l][k].clone())
                })
                .collect()
        })
        .collect()
}

/// Euclidean `ℝ^{2n}` with `J = A J₀ Aᵀ`, where `A` rotates the `(e₁, e₂)`
/// plane by the angle `x₃`. Flat but not Kähler.
fn flat_twisted_j(n: usize) -> ChartManifold {
    let d = 2 * n;
    let angle = Expr::var(2);
    let mut rot = euclidean(d);
    rot[0][0] = angle.clone().cos();
    rot[0][1] = -angle.clone().sin();
    rot[1][0] = angle.clone().sin();
    rot[1][1] = angle.cos();
    let rot_t: Vec<Vec<Expr>> = (0..d)
        .map(|i| (0..d).map(|k| rot[k][i].clone()).collect())
        .collect();
    let j = mat_mul(&mat_mul(&rot, &standard_j(n)), &rot_t);
    ChartManifold::new("flat_twisted_j", euclidean(d), j).expect("square even chart")
}

/// Polar chart of the unit sphere, `g = diag(1, sin²θ₁, sin²θ₁ sin²θ₂, …)`,
/// with `J` rotating the orthonormal pairs `(f_{2k−1}, f_{2k})`.
fn round_sphere_diag(d: usize) -> ChartManifold {
    let mut metric = vec![vec![Expr::zero(); d]; d];
    let mut factor = Expr::one();
    for (k, row) in metric.iter_mut().enumerate() {
        row[k] = factor.clone();
        factor = factor * Expr::var(k).sin().powi(2);
    }
    let mut j = vec![vec![Expr::zero(); d]; d];
    for k in (0..d).step_by(2) {
        // ‖∂_{k+1}‖/‖∂_k‖ = sin θ_k
        j[k + 1][k] = Expr::one() / Expr::var(k).sin();
        j[k][k + 1] = -Expr::var(k).sin();
    }
    let mut domain = vec![(0.0, std::f64::consts::PI); d];
    domain[d - 1] = (f64::NEG_INFINITY, f64::INFINITY);
    ChartManifold::new("round_sphere_diag", metric, j)
        .expect("square even chart")
        .with_domain(domain)
}
