//! Chart-level almost Hermitian geometry.
//!
//! Curvature convention: `R(x,y)z = ∇_x∇_y z − ∇_y∇_x z − ∇_[x,y] z` and
//! `R(x,y,z,u) = g(R(x,y)z, u)`. In coordinates
//!
//! ```text
//! R^m_{ijk} = ∂_i Γ^m_{jk} − ∂_j Γ^m_{ik} + Γ^m_{ip} Γ^p_{jk} − Γ^m_{jp} Γ^p_{ik}
//! R_{ijkl}  = g_{lm} R^m_{ijk}
//! ρ_{ab}    = g^{ij} R_{aijb}
//! ```
//!
//! so that `ρ(x,y) = Σ_i R(x,e_i,e_i,y)` is `(d−1)g` on the unit sphere.

mod curvature;
mod octonion;
mod zoo;

pub use curvature::{
    christoffel, curvature_package, point_curvature, second_bianchi_residual, CurvaturePackage,
    PointCurvature,
};
pub use octonion::{cross7, OCTONION_TRIPLES};
pub use zoo::{zoo, ZooParams, ZOO_NAMES};

use crate::exprjet::{eval_jet, EvalError, Expr, Jet};
use crate::tensor::{PointTensor, Variance};
use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("chart dimension {0} is odd; almost complex structures need even dimension")]
    OddDimension(usize),
    #[error("{field} must be a {dim}x{dim} matrix")]
    NotSquare { field: &'static str, dim: usize },
    #[error("metric is singular at the point (smallest |eigenvalue| {0:e})")]
    SingularMetric(f64),
    #[error("point has {got} coordinates, chart has dimension {dim}")]
    PointDimension { got: usize, dim: usize },
    #[error("point coordinate {coord} = {value} lies outside the chart domain")]
    OutsideDomain { coord: usize, value: f64 },
    #[error("{field}: {source}")]
    Eval {
        field: String,
        #[source]
        source: EvalError,
    },
    #[error("unknown zoo manifold `{0}`")]
    UnknownZoo(String),
    #[error("unsupported parameters for `{name}`: {reason}")]
    UnsupportedParams { name: String, reason: String },
}

/// Target-space rule that induces `J` on an embedded chart.
#[derive(Clone, Debug, PartialEq)]
pub enum AmbientStructure {
    /// `J_p(v) = p × v` with the octonion cross product on ℝ⁷.
    OctonionCross,
}

/// Chart map into an ambient Euclidean space.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub map: Vec<Expr>,
    pub rule: AmbientStructure,
}

impl Embedding {
    /// `∂_i X^a` for every chart direction `i` and ambient component `a`.
    pub fn differential(&self, dim: usize) -> Vec<Vec<Expr>> {
        (0..dim)
            .map(|i| self.map.iter().map(|x| x.diff(i)).collect())
            .collect()
    }

    /// `g_ij = Σ_a ∂_i X^a ∂_j X^a`.
    pub fn pullback_metric(&self, dim: usize) -> Vec<Vec<Expr>> {
        let dx = self.differential(dim);
        let mut g = vec![vec![Expr::zero(); dim]; dim];
        for i in 0..dim {
            for j in i..dim {
                let entry = dx[i]
                    .iter()
                    .zip(&dx[j])
                    .fold(Expr::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
                g[i][j] = entry.clone();
                g[j][i] = entry;
            }
        }
        g
    }
}

/// Coordinate chart with metric `g_ij` and almost complex structure `J^i_j`
/// given as expression fields.
#[derive(Clone, Debug)]
pub struct ChartManifold {
    name: String,
    dim: usize,
    metric: Vec<Vec<Expr>>,
    j: Vec<Vec<Expr>>,
    embedding: Option<Embedding>,
    domain: Vec<(f64, f64)>,
}

impl ChartManifold {
    /// Builds a chart. The upper triangle of `metric` is authoritative; the
    /// lower triangle is overwritten with its mirror.
    pub fn new(
        name: impl Into<String>,
        metric: Vec<Vec<Expr>>,
        j: Vec<Vec<Expr>>,
    ) -> Result<Self, GeometryError> {
        let dim = metric.len();
        if metric.iter().any(|row| row.len() != dim) {
            return Err(GeometryError::NotSquare { field: "metric", dim });
        }
        if j.len() != dim || j.iter().any(|row| row.len() != dim) {
            return Err(GeometryError::NotSquare { field: "J", dim });
        }
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(GeometryError::OddDimension(dim));
        }
        let mut metric = metric;
        for i in 0..dim {
            for k in 0..i {
                metric[i][k] = metric[k][i].clone();
            }
        }
        Ok(ChartManifold {
            name: name.into(),
            dim,
            metric,
            j,
            embedding: None,
            domain: vec![(f64::NEG_INFINITY, f64::INFINITY); dim],
        })
    }

    pub fn with_embedding(mut self, embedding: Embedding) -> Self {
        self.embedding = Some(embedding);
        self
    }

    /// Open box `(lo, hi)` per coordinate outside of which the chart is not
    /// defined.
    pub fn with_domain(mut self, domain: Vec<(f64, f64)>) -> Self {
        assert_eq!(domain.len(), self.dim);
        self.domain = domain;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Complex dimension `n` of the `2n`-dimensional chart.
    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn metric_exprs(&self) -> &[Vec<Expr>] {
        &self.metric
    }

    pub fn j_exprs(&self) -> &[Vec<Expr>] {
        &self.j
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim
            && p
                .iter()
                .zip(&self.domain)
                .all(|(x, (lo, hi))| *x > *lo && *x < *hi)
    }

    pub(crate) fn check_point(&self, p: &[f64]) -> Result<(), GeometryError> {
        if p.len() != self.dim {
            return Err(GeometryError::PointDimension {
                got: p.len(),
                dim: self.dim,
            });
        }
        for (coord, (x, (lo, hi))) in p.iter().zip(&self.domain).enumerate() {
            if !(*x > *lo && *x < *hi) {
                return Err(GeometryError::OutsideDomain { coord, value: *x });
            }
        }
        Ok(())
    }

    /// Jets of `g_ij`; each distinct entry is evaluated once.
    pub fn metric_jets(&self, p: &[f64], order: usize) -> Result<Vec<Vec<Jet>>, GeometryError> {
        self.check_point(p)?;
        let d = self.dim;
        let mut upper = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for k in i..d {
                let jet = eval_jet(&self.metric[i][k], p, order).map_err(|source| {
                    GeometryError::Eval {
                        field: format!("metric[{i}][{k}]"),
                        source,
                    }
                })?;
                upper.push(((i, k), jet));
            }
        }
        let zero = Jet::zero(d, order);
        let mut out = vec![vec![zero; d]; d];
        for ((i, k), jet) in upper {
            out[k][i] = jet.clone();
            out[i][k] = jet;
        }
        Ok(out)
    }

    /// Jets of `J^i_j`.
    pub fn j_jets(&self, p: &[f64], order: usize) -> Result<Vec<Vec<Jet>>, GeometryError> {
        self.check_point(p)?;
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|k| {
                        eval_jet(&self.j[i][k], p, order).map_err(|source| GeometryError::Eval {
                            field: format!("J[{i}][{k}]"),
                            source,
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Covariant metric tensor at `p`.
    pub fn metric_at(&self, p: &[f64]) -> Result<PointTensor, GeometryError> {
        Ok(jets_to_tensor(
            &self.metric_jets(p, 0)?,
            [Variance::Co, Variance::Co],
        ))
    }

    /// `J` as a (1,1) tensor at `p`.
    pub fn j_at(&self, p: &[f64]) -> Result<PointTensor, GeometryError> {
        Ok(jets_to_tensor(
            &self.j_jets(p, 0)?,
            [Variance::Contra, Variance::Co],
        ))
    }
}

fn jets_to_tensor(jets: &[Vec<Jet>], variance: [Variance; 2]) -> PointTensor {
    let rows: Vec<Vec<f64>> = jets
        .iter()
        .map(|row| row.iter().map(Jet::value).collect())
        .collect();
    PointTensor::from_matrix(variance, &rows)
}

/// Almost Hermitian structure defects at a point. Raw defects are reported;
/// `passed` compares each against `tol · (1 + scale)`.
#[derive(Clone, Debug, Serialize)]
pub struct StructureDiagnostics {
    pub symmetry_defect: f64,
    pub min_eigenvalue: f64,
    pub j_square_defect: f64,
    pub hermitian_defect: f64,
    /// max-norm of the inputs (`g` and `J`)
    pub scale: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Checks that `g` is symmetric positive definite, `J² = −I` and
/// `g(Jx,Jy) = g(x,y)` at `p`.
pub fn validate(m: &ChartManifold, p: &[f64], tol: f64) -> Result<StructureDiagnostics, GeometryError> {
    let g = m.metric_at(p)?;
    let j = m.j_at(p)?;
    let d = m.dim();
    let gm = DMatrix::from_row_slice(d, d, g.data());
    let jm = DMatrix::from_row_slice(d, d, j.data());

    let symmetry_defect = (&gm - gm.transpose()).amax();
    let eig = SymmetricEigen::new((&gm + gm.transpose()) * 0.5);
    let min_eigenvalue = eig.eigenvalues.min();
    let max_abs_eig = eig.eigenvalues.amax();
    if min_eigenvalue.abs() <= 1e-14 * max_abs_eig.max(f64::MIN_POSITIVE) {
        return Err(GeometryError::SingularMetric(min_eigenvalue.abs()));
    }
    let j_square_defect = (&jm * &jm + DMatrix::identity(d, d)).amax();
    let hermitian_defect = (jm.transpose() * &gm * &jm - &gm).amax();
    let scale = g.max_norm().max(j.max_norm());
    let bound = tol * (1.0 + scale);
    let passed = symmetry_defect <= bound
        && min_eigenvalue > 0.0
        && j_square_defect <= bound
        && hermitian_defect <= bound * (1.0 + scale);
    Ok(StructureDiagnostics {
        symmetry_defect,
        min_eigenvalue,
        j_square_defect,
        hermitian_defect,
        scale,
        tol,
        passed,
    })
}
