//! Closed forms of the proof steps, as functions of `μ`, `∇J`, `∇Q` and the
//! complex frame. Each vanishes when the Bochner tensor does.

use super::{check_indices, ComplexValue, VerifyError};
use crate::bochner::BochnerPackage;
use crate::cframe::{adapted_frame, diagonalize_q, AdaptedFrame};
use crate::manifold::CurvaturePackage;
use crate::tensor::{ComplexVector, PointTensor};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProofStep {
    #[serde(rename = "3.1")]
    S31,
    #[serde(rename = "3.2")]
    S32,
    #[serde(rename = "3.3")]
    S33,
    #[serde(rename = "3.4")]
    S34,
    #[serde(rename = "3.5")]
    S35,
    #[serde(rename = "3.6")]
    S36,
    #[serde(rename = "det_34_35")]
    Det3435,
    #[serde(rename = "3.7")]
    S37,
    #[serde(rename = "final_nablaQ")]
    FinalNablaQ,
}

impl ProofStep {
    pub const ALL: [ProofStep; 9] = [
        ProofStep::S31,
        ProofStep::S32,
        ProofStep::S33,
        ProofStep::S34,
        ProofStep::S35,
        ProofStep::S36,
        ProofStep::Det3435,
        ProofStep::S37,
        ProofStep::FinalNablaQ,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ProofStep::S31 => "3.1",
            ProofStep::S32 => "3.2",
            ProofStep::S33 => "3.3",
            ProofStep::S34 => "3.4",
            ProofStep::S35 => "3.5",
            ProofStep::S36 => "3.6",
            ProofStep::Det3435 => "det_34_35",
            ProofStep::S37 => "3.7",
            ProofStep::FinalNablaQ => "final_nablaQ",
        }
    }
}

/// `Z_α` or `Z_ᾱ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Z(usize),
    Zbar(usize),
}

/// Everything a closed form reads.
pub struct StepInputs<'a> {
    /// `nabla_j[w,a,b] = g((∇_w J)a, b)`
    pub nabla_j: &'a PointTensor,
    /// `dq[w,a,b] = (∇_w Q)(a,b)`
    pub dq: &'a PointTensor,
    pub z: &'a [ComplexVector],
    pub zbar: &'a [ComplexVector],
    pub mu: &'a [f64],
}

impl StepInputs<'_> {
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn vector(&self, s: Slot) -> &ComplexVector {
        match s {
            Slot::Z(a) => &self.z[a],
            Slot::Zbar(a) => &self.zbar[a],
        }
    }

    pub fn vectors<const K: usize>(&self, slots: [Slot; K]) -> [ComplexVector; K] {
        slots.map(|s| self.vector(s).clone())
    }

    /// `g((∇_x J)u, v)`
    pub fn gn(&self, x: Slot, u: Slot, v: Slot) -> Complex64 {
        self.nabla_j
            .complex_eval(&self.vectors([x, u, v]))
            .expect("frame vectors match tensor dimension")
    }

    /// `(∇_w Q)(a, b)`
    pub fn dq(&self, w: Slot, a: Slot, b: Slot) -> Complex64 {
        self.dq
            .complex_eval(&self.vectors([w, a, b]))
            .expect("frame vectors match tensor dimension")
    }
}

use Slot::{Z, Zbar};

/// Value of the closed form of `step` at indices `(α, β, γ)`.
pub fn closed_form(step: ProofStep, s: &StepInputs, idx: [usize; 3]) -> Complex64 {
    let [al, be, ga] = idx;
    let m = |k: usize| s.mu[k];
    let c = |x: f64| Complex64::new(x, 0.0);
    let i = Complex64::i();
    match step {
        ProofStep::S31 => c(5.0 * m(al) + m(be)) * s.gn(Zbar(be), Z(be), Z(al)),
        ProofStep::S32 => {
            c(m(al) + m(ga)) * s.gn(Zbar(be), Z(be), Z(al))
                + c(m(al) + m(be)) * s.gn(Zbar(ga), Z(ga), Z(al))
        }
        ProofStep::S33 => {
            c(m(al) + m(be) + 2.0 * m(ga)) * s.gn(Zbar(be), Z(be), Z(al))
                - c(m(be) + m(ga)) * s.gn(Zbar(ga), Z(ga), Z(al))
        }
        ProofStep::S34 => {
            c(5.0 * m(be) + m(ga)) * s.gn(Z(al), Z(be), Z(ga))
                - c(m(al) + m(be)) * s.gn(Z(be), Z(al), Z(ga))
        }
        ProofStep::S35 => {
            c(5.0 * m(al) + m(ga)) * s.gn(Z(be), Z(al), Z(ga))
                - c(m(al) + m(be)) * s.gn(Z(al), Z(be), Z(ga))
        }
        // the determinant of the (3.4)/(3.5) system times its unknown; the
        // system forces this product to vanish
        ProofStep::Det3435 => {
            let det = (5.0 * m(al) + m(ga)) * (5.0 * m(be) + m(ga)) - (m(al) + m(be)).powi(2);
            c(det) * s.gn(Z(al), Z(be), Z(ga))
        }
        ProofStep::S36 => {
            let det = (5.0 * m(al) + m(be)) * (5.0 * m(ga) + m(be)) - (m(al) + m(ga)).powi(2);
            c(det) * s.gn(Z(al), Z(ga), Z(be))
        }
        ProofStep::S37 => s.dq(Z(be), Zbar(al), Z(ga)) - 2.0 * s.dq(Z(ga), Zbar(al), Z(be)),
        ProofStep::FinalNablaQ => {
            2.0 * s.dq(Zbar(al), Z(be), Z(ga)) + i * m(al) * s.gn(Zbar(al), Z(be), Z(ga))
        }
    }
}

/// `|closed form|` of `step` at distinct indices `(α, β, γ)`.
pub fn proof_step_residual(
    step: ProofStep,
    inputs: &StepInputs,
    idx: [usize; 3],
) -> Result<f64, VerifyError> {
    check_indices(&idx, inputs.n())?;
    Ok(closed_form(step, inputs, idx).norm())
}

/// Largest modulus of each `∇J` component family over distinct indices:
/// `g((∇_{Z_β}J)Z_β,Z_α)`, `g((∇_{Z_β̄}J)Z_β,Z_α)`, `g((∇_{Z_α}J)Z_β,Z_γ)`,
/// `g((∇_{Z_ᾱ}J)Z_β,Z_γ)`.
pub fn family_magnitudes(s: &StepInputs) -> [f64; 4] {
    let n = s.n();
    let mut out = [0.0f64; 4];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            out[0] = out[0].max(s.gn(Z(b), Z(b), Z(a)).norm());
            out[1] = out[1].max(s.gn(Zbar(b), Z(b), Z(a)).norm());
            for c in 0..n {
                if c == a || c == b {
                    continue;
                }
                out[2] = out[2].max(s.gn(Z(a), Z(b), Z(c)).norm());
                out[3] = out[3].max(s.gn(Zbar(a), Z(b), Z(c)).norm());
            }
        }
    }
    out
}

/// Worst residual of one step over all ordered triples of distinct indices.
#[derive(Clone, Debug, Serialize)]
pub struct StepResidual {
    pub step: ProofStep,
    pub residual: f64,
    pub worst_indices: [usize; 3],
    pub worst_value: ComplexValue,
    /// asserted only where the Bochner tensor vanishes
    pub asserted: bool,
}

/// Frame-based data at a manifold point: the adapted frame diagonalizing
/// `Q` and the residual of every step.
pub fn manifold_proof_steps(
    pkg: &CurvaturePackage,
    bp: &BochnerPackage,
    tol: f64,
    asserted: bool,
) -> Result<(AdaptedFrame, Vec<StepResidual>), VerifyError> {
    let frame = adapted_frame(&pkg.g, &pkg.j)?;
    let af = diagonalize_q(&bp.q1, &frame, tol)?;
    let inputs = StepInputs {
        nabla_j: &pkg.nabla_j,
        dq: &pkg.nabla_q,
        z: &af.z,
        zbar: &af.zbar,
        mu: &af.mu,
    };
    let n = af.n();
    let mut out = Vec::new();
    if n < 3 {
        return Ok((af, out));
    }
    for step in ProofStep::ALL {
        let mut worst = (0.0, [0, 1, 2], Complex64::new(0.0, 0.0));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let v = closed_form(step, &inputs, [a, b, c]);
                    if v.norm() > worst.0 {
                        worst = (v.norm(), [a, b, c], v);
                    }
                }
            }
        }
        out.push(StepResidual {
            step,
            residual: worst.0,
            worst_indices: worst.1,
            worst_value: worst.2.into(),
            asserted,
        });
    }
    Ok((af, out))
}
