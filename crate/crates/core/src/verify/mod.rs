//! Pointwise checks of the identities used in the proof that a non-Kähler
//! almost Hermitian manifold with vanishing Bochner tensor (n > 2) is flat.
//!
//! * [`eq24_lhs`] evaluates the cyclic `R(·,·,(∇J)·,J·)` sum obtained from
//!   the AH₁ identity and the second Bianchi identity;
//! * [`steps`] holds the closed forms the proof derives from it;
//! * [`synthetic`] checks those closed forms on random pointwise data with
//!   `R := φ(Q)`;
//! * [`cases`] replays the polynomial case analysis in exact arithmetic;
//! * [`classify`] states the verdict for a manifold point.

pub mod cases;
pub mod classify;
pub mod steps;
pub mod synthetic;

pub use cases::{case_deduction, run_all_flag_combinations, CaseConclusion, DeductionReport, Family};
pub use classify::{classify, classify_package, neighborhood_scan, Classification, ScanReport, Verdict};
pub use steps::{family_magnitudes, manifold_proof_steps, proof_step_residual, ProofStep, StepInputs, StepResidual, Slot};
pub use synthetic::{
    calibrate_and_check_31_to_35, calibrate_and_check_37, run_synthetic_oracle, synthetic_point,
    Calibration, OracleReport, SyntheticPoint,
};

use crate::cframe::FrameError;
use crate::manifold::GeometryError;
use crate::tensor::{ComplexVector, PointTensor, TensorError};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("indices must be distinct, got {0:?}")]
    IndicesNotDistinct(Vec<usize>),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("not applicable for n = {0}; the theorem requires n > 2")]
    NotApplicable(usize),
    #[error("uninformative draw: both sides below 1e-14")]
    Uninformative,
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// `(∇_x J)u` as a vector, from `nabla_j_up[w,b,c] = ((∇_w J)e_b)^c`.
fn nabla_j_apply(nabla_j_up: &PointTensor, x: &ComplexVector, u: &ComplexVector) -> ComplexVector {
    let d = nabla_j_up.dim();
    let data = nabla_j_up.data();
    let mut out = vec![Complex64::new(0.0, 0.0); d];
    for w in 0..d {
        if x.0[w] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for b in 0..d {
            let c = x.0[w] * u.0[b];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = &data[(w * d + b) * d..(w * d + b + 1) * d];
            for (o, t) in out.iter_mut().zip(row) {
                *o += c * t;
            }
        }
    }
    ComplexVector(out)
}

/// The six-term sum
///
/// ```text
///   R(y,z,(∇_x J)u,Jv) + R(y,z,Ju,(∇_x J)v)
/// + R(z,x,(∇_y J)u,Jv) + R(z,x,Ju,(∇_y J)v)
/// + R(x,y,(∇_z J)u,Jv) + R(x,y,Ju,(∇_z J)v)
/// ```
///
/// extended complex-multilinearly. `nabla_j[w,a,b] = g((∇_w J)a, b)`.
pub fn eq24_lhs(
    r: &PointTensor,
    nabla_j: &PointTensor,
    j: &PointTensor,
    g_inv: &PointTensor,
    args: &[ComplexVector; 5],
) -> Result<Complex64, TensorError> {
    let nabla_j_up = nabla_j.raise(2, g_inv)?;
    eq24_with_raised(r, &nabla_j_up, j, args)
}

fn eq24_with_raised(
    r: &PointTensor,
    nabla_j_up: &PointTensor,
    j: &PointTensor,
    args: &[ComplexVector; 5],
) -> Result<Complex64, TensorError> {
    let [x, y, z, u, v] = args;
    let ju = j.apply(u)?;
    let jv = j.apply(v)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
        let nu = nabla_j_apply(nabla_j_up, a, u);
        let nv = nabla_j_apply(nabla_j_up, a, v);
        total += r.complex_eval(&[b.clone(), c.clone(), nu, jv.clone()])?;
        total += r.complex_eval(&[b.clone(), c.clone(), ju.clone(), nv])?;
    }
    Ok(total)
}

/// `(∇_x T)(y,z,u,v) + (∇_y T)(z,x,u,v) + (∇_z T)(x,y,u,v)` for a degree-5
/// tensor with the derivative slot first.
pub fn bianchi_cyclic(t: &PointTensor, args: &[ComplexVector; 5]) -> Result<Complex64, TensorError> {
    let [x, y, z, u, v] = args;
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
        total += t.complex_eval(&[a.clone(), b.clone(), c.clone(), u.clone(), v.clone()])?;
    }
    Ok(total)
}

/// Relative mismatch `|a − b| / max(|a|, |b|)`; `None` when both sides are
/// below `1e-14` in modulus.
pub fn relative_mismatch(a: Complex64, b: Complex64) -> Option<f64> {
    let scale = a.norm().max(b.norm());
    if scale < 1e-14 {
        None
    } else {
        Some((a - b).norm() / scale)
    }
}

/// Serializable complex number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(c: Complex64) -> Self {
        ComplexValue { re: c.re, im: c.im }
    }
}

fn check_indices(indices: &[usize], n: usize) -> Result<(), VerifyError> {
    for (k, &i) in indices.iter().enumerate() {
        if i >= n {
            return Err(VerifyError::IndexOutOfRange { index: i, n });
        }
        if indices[..k].contains(&i) {
            return Err(VerifyError::IndicesNotDistinct(indices.to_vec()));
        }
    }
    Ok(())
}
