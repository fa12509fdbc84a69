//! J-adapted orthonormal frames `{e_α, Je_α}`, diagonalization of a hybrid
//! `Q` inside them, and the complex vectors `Z_α = e_α − iJe_α`.

use crate::tensor::{ComplexVector, PointTensor, TensorError, Variance};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("no J-adapted frame found after trying {tried} candidate vectors")]
    Breakdown { tried: usize },
    #[error("Q is not hybrid: ‖Q¹J − JQ¹‖ = {defect:e}")]
    NotHybrid { defect: f64 },
    #[error("Q is not symmetric: defect {defect:e}")]
    NotSymmetric { defect: f64 },
    #[error("eigenvalue {value} of Q¹ has odd multiplicity {multiplicity}")]
    OddEigenspace { value: f64, multiplicity: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// A `g`-orthonormal basis `e_1, …, e_n, Je_1, …, Je_n` at a point.
#[derive(Clone, Debug)]
pub struct Frame {
    pub g: PointTensor,
    pub j: PointTensor,
    pub e: Vec<Vec<f64>>,
    pub je: Vec<Vec<f64>>,
}

/// Frame diagonalizing `Q`, with `Q¹e_α = μ_α e_α` and `Q¹Je_α = μ_α Je_α`.
#[derive(Clone, Debug)]
pub struct AdaptedFrame {
    pub frame: Frame,
    pub z: Vec<ComplexVector>,
    pub zbar: Vec<ComplexVector>,
    pub mu: Vec<f64>,
}

/// Max-norm defects of the frame invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameDefects {
    /// Gram matrix of `{e_α, Je_α}` minus the identity
    pub gram: f64,
    /// `JZ_α − iZ_α` and `JZ_ᾱ + iZ_ᾱ`
    pub type_split: f64,
    /// `Q¹e_α − μ_α e_α` and `Q¹Je_α − μ_α Je_α`
    pub eigen: f64,
    /// `Q(Z_α, Z_β)`
    pub q_holomorphic: f64,
}

fn inner(g: &PointTensor, a: &[f64], b: &[f64]) -> f64 {
    let d = g.dim();
    let data = g.data();
    let mut s = 0.0;
    for i in 0..d {
        if a[i] == 0.0 {
            continue;
        }
        for k in 0..d {
            s += a[i] * data[i * d + k] * b[k];
        }
    }
    s
}

fn axpy(acc: &mut [f64], c: f64, v: &[f64]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += c * x;
    }
}

impl Frame {
    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn n(&self) -> usize {
        self.e.len()
    }

    /// `e_1, …, e_n, Je_1, …, Je_n`.
    pub fn basis(&self) -> Vec<Vec<f64>> {
        self.e.iter().chain(&self.je).cloned().collect()
    }

    pub fn gram_defect(&self) -> f64 {
        let b = self.basis();
        let mut worst: f64 = 0.0;
        for (i, x) in b.iter().enumerate() {
            for (k, y) in b.iter().enumerate() {
                let target = if i == k { 1.0 } else { 0.0 };
                worst = worst.max((inner(&self.g, x, y) - target).abs());
            }
        }
        worst
    }

    /// Removes the `g`-projection onto the current span.
    fn orthogonalize(&self, v: &[f64]) -> Vec<f64> {
        let mut out = v.to_vec();
        // twice for numerical stability
        for _ in 0..2 {
            for b in self.e.iter().chain(&self.je) {
                let c = inner(&self.g, b, &out);
                axpy(&mut out, -c, b);
            }
        }
        out
    }

    /// Adjoins `v` (normalized) and `Jv` if `v` is not in the span.
    fn try_push(&mut self, v: &[f64]) -> bool {
        let scale = inner(&self.g, v, v).sqrt();
        if scale == 0.0 {
            return false;
        }
        let w = self.orthogonalize(v);
        let norm = inner(&self.g, &w, &w).sqrt();
        if norm <= 1e-6 * scale {
            return false;
        }
        let w: Vec<f64> = w.iter().map(|x| x / norm).collect();
        self.je.push(self.j.apply_real(&w));
        self.e.push(w);
        true
    }
}

fn check_pair(g: &PointTensor, j: &PointTensor) -> Result<(), TensorError> {
    if g.variance() != [Variance::Co, Variance::Co] {
        return Err(TensorError::VarianceMismatch(0));
    }
    if j.variance() != [Variance::Contra, Variance::Co] {
        return Err(TensorError::VarianceMismatch(0));
    }
    if g.dim() != j.dim() {
        return Err(TensorError::DimensionMismatch(g.dim(), j.dim()));
    }
    Ok(())
}

/// Greedy J-orthonormalization of the coordinate basis.
pub fn adapted_frame(g: &PointTensor, j: &PointTensor) -> Result<Frame, FrameError> {
    let d = g.dim();
    let coords: Vec<Vec<f64>> = (0..d)
        .map(|k| (0..d).map(|i| if i == k { 1.0 } else { 0.0 }).collect())
        .collect();
    adapted_frame_from(g, j, &coords)
}

/// Greedy J-orthonormalization of `candidates`, in order; a candidate
/// already in the span built so far is skipped.
pub fn adapted_frame_from(
    g: &PointTensor,
    j: &PointTensor,
    candidates: &[Vec<f64>],
) -> Result<Frame, FrameError> {
    check_pair(g, j)?;
    let d = g.dim();
    let mut frame = Frame {
        g: g.clone(),
        j: j.clone(),
        e: Vec::new(),
        je: Vec::new(),
    };
    for c in candidates {
        if 2 * frame.e.len() == d {
            break;
        }
        if c.len() != d {
            return Err(TensorError::DimensionMismatch(d, c.len()).into());
        }
        frame.try_push(c);
    }
    if 2 * frame.e.len() != d {
        return Err(FrameError::Breakdown {
            tried: candidates.len(),
        });
    }
    Ok(frame)
}

/// Rotates `frame` inside the eigenspaces of `Q¹` so that `Q` becomes
/// diagonal with doubled eigenvalues. `μ` is sorted in descending order;
/// vectors of one eigenspace keep the order of the incoming frame.
///
/// Refuses unless `Q` is symmetric and `Q¹` commutes with `J` to within
/// `tol·(1 + ‖Q¹‖)`.
pub fn diagonalize_q(q1: &PointTensor, frame: &Frame, tol: f64) -> Result<AdaptedFrame, FrameError> {
    if q1.variance() != [Variance::Contra, Variance::Co] {
        return Err(TensorError::VarianceMismatch(0).into());
    }
    let d = frame.dim();
    if q1.dim() != d {
        return Err(TensorError::DimensionMismatch(d, q1.dim()).into());
    }
    let bound = tol * (1.0 + q1.max_norm());
    let q = q1.lower(0, &frame.g)?;
    let asym = q.distance(&q.permute(&[1, 0]))?;
    if asym > bound {
        return Err(FrameError::NotSymmetric { defect: asym });
    }
    let qm = DMatrix::from_row_slice(d, d, q1.data());
    let jm = DMatrix::from_row_slice(d, d, frame.j.data());
    let defect = (&qm * &jm - &jm * &qm).amax();
    if defect > bound {
        return Err(FrameError::NotHybrid { defect });
    }

    let basis = frame.basis();
    let qf = |a: &[f64], b: &[f64]| inner(&frame.g, a, &q1.apply_real(b));
    let m = DMatrix::from_fn(d, d, |k, l| 0.5 * (qf(&basis[k], &basis[l]) + qf(&basis[l], &basis[k])));
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let lambda_scale = eig.eigenvalues.amax().max(1.0);
    let gap = 1e-7 * lambda_scale;

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match clusters.last_mut() {
            Some(c) if eig.eigenvalues[*c.last().unwrap()] - eig.eigenvalues[k] <= gap => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }

    let mut out = Frame {
        g: frame.g.clone(),
        j: frame.j.clone(),
        e: Vec::new(),
        je: Vec::new(),
    };
    let mut mu = Vec::new();
    for cluster in &clusters {
        if cluster.len() % 2 != 0 {
            return Err(FrameError::OddEigenspace {
                value: eig.eigenvalues[cluster[0]],
                multiplicity: cluster.len(),
            });
        }
        // g-orthonormal basis of the eigenspace, in chart coordinates
        let space: Vec<Vec<f64>> = cluster
            .iter()
            .map(|&k| {
                let mut v = vec![0.0; d];
                for (l, b) in basis.iter().enumerate() {
                    axpy(&mut v, eig.eigenvectors[(l, k)], b);
                }
                v
            })
            .collect();
        let project = |v: &[f64]| {
            let mut p = vec![0.0; d];
            for w in &space {
                axpy(&mut p, inner(&frame.g, w, v), w);
            }
            p
        };
        let mut local = Frame {
            g: frame.g.clone(),
            j: frame.j.clone(),
            e: Vec::new(),
            je: Vec::new(),
        };
        for b in frame.e.iter().zip(&frame.je).flat_map(|(e, je)| [e, je]) {
            if 2 * local.e.len() == cluster.len() {
                break;
            }
            let p = project(b);
            if inner(&frame.g, &p, &p) < 1e-12 {
                continue;
            }
            // keep the candidate inside the already-built part of the frame
            let w = out.orthogonalize(&p);
            local.try_push(&w);
        }
        if 2 * local.e.len() != cluster.len() {
            return Err(FrameError::Breakdown { tried: 2 * frame.n() });
        }
        for (e, je) in local.e.into_iter().zip(local.je) {
            mu.push(0.5 * (qf(&e, &e) + qf(&je, &je)));
            out.e.push(e);
            out.je.push(je);
        }
    }
    Ok(complexify(out, mu))
}

/// `Z_α = e_α − iJe_α`, `Z_ᾱ = e_α + iJe_α`.
pub fn complexify(frame: Frame, mu: Vec<f64>) -> AdaptedFrame {
    let z = frame
        .e
        .iter()
        .zip(&frame.je)
        .map(|(e, je)| ComplexVector::from_parts(e, &je.iter().map(|x| -x).collect::<Vec<_>>()))
        .collect();
    let zbar = frame
        .e
        .iter()
        .zip(&frame.je)
        .map(|(e, je)| ComplexVector::from_parts(e, je))
        .collect();
    AdaptedFrame {
        frame,
        z,
        zbar,
        mu,
    }
}

impl AdaptedFrame {
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Invariant defects against `Q¹` (pass the tensor used to build the
    /// frame) and its lowered form `Q`.
    pub fn defects(&self, q1: &PointTensor) -> Result<FrameDefects, TensorError> {
        let q = q1.lower(0, &self.frame.g)?;
        let i = Complex64::new(0.0, 1.0);
        let mut type_split: f64 = 0.0;
        for (z, zb) in self.z.iter().zip(&self.zbar) {
            let jz = self.frame.j.apply(z)?;
            let jzb = self.frame.j.apply(zb)?;
            type_split = type_split
                .max(jz.sub(&z.scale(i)).max_norm())
                .max(jzb.add(&zb.scale(i)).max_norm());
        }
        let mut eigen: f64 = 0.0;
        for ((e, je), mu) in self.frame.e.iter().zip(&self.frame.je).zip(&self.mu) {
            for v in [e, je] {
                let qv = q1.apply_real(v);
                for (a, b) in qv.iter().zip(v) {
                    eigen = eigen.max((a - mu * b).abs());
                }
            }
        }
        let mut q_holomorphic: f64 = 0.0;
        for za in &self.z {
            for zb in &self.z {
                q_holomorphic = q_holomorphic.max(q.complex_eval(&[za.clone(), zb.clone()])?.norm());
            }
        }
        Ok(FrameDefects {
            gram: self.frame.gram_defect(),
            type_split,
            eigen,
            q_holomorphic,
        })
    }
}
