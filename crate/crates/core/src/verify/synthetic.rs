//! Random pointwise data `(μ, ∇J, ∇Q)` on `ℝ^{2n}` with the standard
//! structure, and the calibrated comparison of the proof's closed forms
//! against brute-force evaluation with `R := φ(Q)`.
//!
//! The proof drops overall constants when it writes each step as `… = 0`.
//! Each check therefore carries complex constants, fitted on the first
//! informative draw(s) of a run and then frozen.

use super::steps::{closed_form, ProofStep, Slot, StepInputs};
use super::{bianchi_cyclic, eq24_with_raised, relative_mismatch, ComplexValue, VerifyError};
use crate::bochner::{phi, phi_derivative};
use crate::cframe::{complexify, AdaptedFrame, Frame};
use crate::sample::{identity_metric, inverse_metric, standard_j};
use crate::tensor::{PointTensor, TensorError, Variance};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

use Slot::{Z, Zbar};

/// Indices used by every synthetic check.
const AL: usize = 0;
const BE: usize = 1;
const GA: usize = 2;
const DE: usize = 3;

#[derive(Clone, Debug)]
pub struct SyntheticPoint {
    pub seed: u64,
    pub n: usize,
    pub g: PointTensor,
    pub g_inv: PointTensor,
    pub j: PointTensor,
    pub mu: Vec<f64>,
    /// diagonal hybrid `Q` with entries `μ_α` on `e_α` and `Je_α`
    pub q: PointTensor,
    /// `A(x,y,z) = g((∇_x J)y, z)`
    pub a: PointTensor,
    /// `DQ(w,x,y)`, symmetric in the last two slots
    pub dq: PointTensor,
    pub frame: AdaptedFrame,
}

/// Projects a degree-3 tensor onto `A(x,y,z) = −A(x,z,y)`,
/// `A(x,Jy,Jz) = −A(x,y,z)`. The two projections commute.
pub fn admissible_projection(a: &PointTensor, j: &PointTensor) -> Result<PointTensor, TensorError> {
    let skew = a.lin_comb(0.5, &a.permute(&[0, 2, 1]), -0.5)?;
    let twisted = skew.precompose(1, j)?.precompose(2, j)?;
    skew.lin_comb(0.5, &twisted, -0.5)
}

fn diagonal_q(mu: &[f64]) -> PointTensor {
    let n = mu.len();
    PointTensor::from_fn(2 * n, vec![Variance::Co; 2], |i| {
        if i[0] == i[1] {
            mu[i[0] % n]
        } else {
            0.0
        }
    })
}

/// Deterministic synthetic data for `seed`. `mu` defaults to uniform draws
/// in `[-1, 1)`.
pub fn synthetic_point(seed: u64, n: usize, mu: Option<&[f64]>) -> Result<SyntheticPoint, VerifyError> {
    if n < 3 {
        return Err(VerifyError::NotApplicable(n));
    }
    let d = 2 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mu: Vec<f64> = match mu {
        Some(m) => {
            if m.len() != n {
                return Err(TensorError::DimensionMismatch(n, m.len()).into());
            }
            m.to_vec()
        }
        None => (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    };
    let g = identity_metric(d);
    let j = standard_j(n);
    let raw = PointTensor::from_fn(d, vec![Variance::Co; 3], |_| rng.gen_range(-1.0..1.0));
    let a = admissible_projection(&raw, &j)?;
    let raw = PointTensor::from_fn(d, vec![Variance::Co; 3], |_| rng.gen_range(-1.0..1.0));
    let dq = raw.lin_comb(0.5, &raw.permute(&[0, 2, 1]), 0.5)?;
    let unit = |k: usize| (0..d).map(|i| if i == k { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
    let frame = complexify(
        Frame {
            g: g.clone(),
            j: j.clone(),
            e: (0..n).map(unit).collect(),
            je: (n..d).map(unit).collect(),
        },
        mu.clone(),
    );
    Ok(SyntheticPoint {
        seed,
        n,
        g_inv: inverse_metric(&g).expect("identity is invertible"),
        g,
        j,
        q: diagonal_q(&mu),
        mu,
        a,
        dq,
        frame,
    })
}

impl SyntheticPoint {
    /// Same point with `μ_k = 0` for the listed indices.
    pub fn with_vanishing_mu(&self, indices: &[usize]) -> SyntheticPoint {
        let mut sp = self.clone();
        for &k in indices {
            sp.mu[k] = 0.0;
        }
        sp.q = diagonal_q(&sp.mu);
        sp.frame.mu = sp.mu.clone();
        sp
    }

    pub fn inputs(&self) -> StepInputs<'_> {
        StepInputs {
            nabla_j: &self.a,
            dq: &self.dq,
            z: &self.frame.z,
            zbar: &self.frame.zbar,
            mu: &self.mu,
        }
    }
}

/// A closed form compared against brute-force evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SyntheticCheck {
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
    /// `X=Z_α, Y=Z_ᾱ, Z=Z_β, U=Z_α, V=Z_β`, the family with `∇_{Z_β}`
    #[serde(rename = "3.1_mirrored")]
    S31Mirrored,
    /// `X=Z_ᾱ, Y=Z_β, Z=Z_β̄, U=Z_γ, V=Z_β`
    #[serde(rename = "antiholomorphic_direction")]
    Antiholomorphic,
    /// `X=Z_α, Y=Z_δ, Z=Z_δ̄, U=Z_β, V=Z_γ`
    #[serde(rename = "delta_extension")]
    Delta,
    /// `X=Z_ᾱ, Y=Z_δ, Z=Z_δ̄, U=Z_β, V=Z_γ`
    #[serde(rename = "delta_extension_bar")]
    DeltaBar,
    #[serde(rename = "3.7")]
    S37,
    #[serde(rename = "final_nablaQ")]
    FinalNablaQ,
}

impl SyntheticCheck {
    pub fn label(self) -> &'static str {
        match self {
            SyntheticCheck::S31 => "3.1",
            SyntheticCheck::S32 => "3.2",
            SyntheticCheck::S33 => "3.3",
            SyntheticCheck::S34 => "3.4",
            SyntheticCheck::S35 => "3.5",
            SyntheticCheck::S31Mirrored => "3.1_mirrored",
            SyntheticCheck::Antiholomorphic => "antiholomorphic_direction",
            SyntheticCheck::Delta => "delta_extension",
            SyntheticCheck::DeltaBar => "delta_extension_bar",
            SyntheticCheck::S37 => "3.7",
            SyntheticCheck::FinalNablaQ => "final_nablaQ",
        }
    }

    /// Checks derived from the `R(·,·,(∇J)·,J·)` sum.
    pub fn eq24_checks(n: usize) -> Vec<SyntheticCheck> {
        let mut v = vec![
            SyntheticCheck::S31,
            SyntheticCheck::S32,
            SyntheticCheck::S33,
            SyntheticCheck::S34,
            SyntheticCheck::S35,
            SyntheticCheck::S31Mirrored,
            SyntheticCheck::Antiholomorphic,
        ];
        if n > 3 {
            v.extend([SyntheticCheck::Delta, SyntheticCheck::DeltaBar]);
        }
        v
    }

    /// Checks derived from the second Bianchi identity.
    pub fn bianchi_checks() -> Vec<SyntheticCheck> {
        vec![SyntheticCheck::S37, SyntheticCheck::FinalNablaQ]
    }

    fn arguments(self) -> [Slot; 5] {
        let (al, be, ga, de) = (AL, BE, GA, DE);
        match self {
            SyntheticCheck::S31 => [Z(al), Zbar(al), Zbar(be), Z(al), Z(be)],
            SyntheticCheck::S32 => [Z(al), Zbar(be), Zbar(ga), Z(be), Z(ga)],
            SyntheticCheck::S33 => [Zbar(be), Z(ga), Zbar(ga), Z(be), Z(al)],
            SyntheticCheck::S34 => [Z(al), Z(be), Zbar(be), Z(ga), Z(be)],
            SyntheticCheck::S35 => [Z(be), Z(al), Zbar(al), Z(ga), Z(al)],
            SyntheticCheck::S31Mirrored => [Z(al), Zbar(al), Z(be), Z(al), Z(be)],
            SyntheticCheck::Antiholomorphic => [Zbar(al), Z(be), Zbar(be), Z(ga), Z(be)],
            SyntheticCheck::Delta => [Z(al), Z(de), Zbar(de), Z(be), Z(ga)],
            SyntheticCheck::DeltaBar => [Zbar(al), Z(de), Zbar(de), Z(be), Z(ga)],
            SyntheticCheck::S37 => [Zbar(al), Z(be), Z(ga), Z(be), Zbar(be)],
            SyntheticCheck::FinalNablaQ => [Z(al), Zbar(al), Z(be), Z(ga), Zbar(al)],
        }
    }

    /// Closed-form terms; the brute-force value is a fixed complex
    /// combination of them.
    fn features(self, s: &StepInputs) -> Vec<Complex64> {
        let idx = [AL, BE, GA];
        let m = |k: usize| Complex64::new(s.mu[k], 0.0);
        match self {
            SyntheticCheck::S31 => vec![closed_form(ProofStep::S31, s, idx)],
            SyntheticCheck::S32 => vec![closed_form(ProofStep::S32, s, idx)],
            SyntheticCheck::S33 => vec![closed_form(ProofStep::S33, s, idx)],
            SyntheticCheck::S34 => vec![closed_form(ProofStep::S34, s, idx)],
            SyntheticCheck::S35 => vec![closed_form(ProofStep::S35, s, idx)],
            SyntheticCheck::S31Mirrored => {
                vec![(5.0 * m(AL) + m(BE)) * s.gn(Z(BE), Z(BE), Z(AL))]
            }
            SyntheticCheck::Antiholomorphic => {
                vec![(5.0 * m(BE) + m(GA)) * s.gn(Zbar(AL), Z(BE), Z(GA))]
            }
            SyntheticCheck::Delta => {
                vec![(m(BE) + m(GA) + 2.0 * m(DE)) * s.gn(Z(AL), Z(BE), Z(GA))]
            }
            SyntheticCheck::DeltaBar => {
                vec![(m(BE) + m(GA) + 2.0 * m(DE)) * s.gn(Zbar(AL), Z(BE), Z(GA))]
            }
            SyntheticCheck::S37 => vec![closed_form(ProofStep::S37, s, idx)],
            // the second term is what the 3.7 relation eliminates
            SyntheticCheck::FinalNablaQ => vec![
                closed_form(ProofStep::FinalNablaQ, s, idx),
                s.dq(Z(BE), Zbar(AL), Z(GA)),
            ],
        }
    }
}

/// Brute-force value and closed-form features of one check.
pub fn evaluate_sides(
    sp: &SyntheticPoint,
    check: SyntheticCheck,
) -> Result<(Complex64, Vec<Complex64>), VerifyError> {
    let inputs = sp.inputs();
    let args = inputs.vectors(check.arguments());
    let lhs = match check {
        SyntheticCheck::S37 | SyntheticCheck::FinalNablaQ => {
            let dr = phi_derivative(&sp.q, &sp.dq, &sp.g, &sp.g_inv, &sp.j, &sp.a)?;
            bianchi_cyclic(&dr, &args)?
        }
        _ => {
            let r = phi(&sp.q, &sp.g, &sp.j)?;
            let up = sp.a.raise(2, &sp.g_inv)?;
            eq24_with_raised(&r, &up, &sp.j, &args)?
        }
    };
    Ok((lhs, check.features(&inputs)))
}

#[derive(Clone, Debug, Default)]
struct CheckState {
    constants: Option<Vec<Complex64>>,
    pending: Vec<(u64, Complex64, Vec<Complex64>)>,
    calibrated_on: Vec<u64>,
    checked: usize,
    max_error: f64,
}

/// Frozen calibration constants and running statistics per check.
#[derive(Clone, Debug, Default)]
pub struct Calibration {
    states: BTreeMap<SyntheticCheck, CheckState>,
}

/// Outcome of one check on one draw.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CheckOutcome {
    /// draw consumed to fit the constants
    Calibrating,
    RelativeError(f64),
}

fn solve(rows: &[(u64, Complex64, Vec<Complex64>)]) -> Option<Vec<Complex64>> {
    let k = rows.len();
    let m = DMatrix::from_fn(k, k, |i, j| rows[i].2[j]);
    let b = DVector::from_fn(k, |i, _| rows[i].1);
    let lu = m.lu();
    let x = lu.solve(&b)?;
    x.iter().all(|c| c.is_finite()).then(|| x.iter().copied().collect())
}

impl Calibration {
    pub fn new() -> Self {
        Self::default()
    }

    /// Feeds one draw. Draws where both sides are below `1e-14` are
    /// rejected as uninformative and leave the state unchanged.
    pub fn observe(
        &mut self,
        check: SyntheticCheck,
        seed: u64,
        lhs: Complex64,
        features: Vec<Complex64>,
    ) -> Result<CheckOutcome, VerifyError> {
        let state = self.states.entry(check).or_default();
        match &state.constants {
            Some(c) => {
                let predicted: Complex64 = c.iter().zip(&features).map(|(a, b)| a * b).sum();
                let err = relative_mismatch(lhs, predicted).ok_or(VerifyError::Uninformative)?;
                state.checked += 1;
                state.max_error = state.max_error.max(err);
                Ok(CheckOutcome::RelativeError(err))
            }
            None => {
                let size = features.iter().map(|f| f.norm()).fold(lhs.norm(), f64::max);
                if size < 1e-14 {
                    return Err(VerifyError::Uninformative);
                }
                state.pending.push((seed, lhs, features.clone()));
                if state.pending.len() == features.len() {
                    match solve(&state.pending) {
                        Some(c) => {
                            state.calibrated_on = state.pending.iter().map(|p| p.0).collect();
                            state.pending.clear();
                            state.constants = Some(c);
                        }
                        None => {
                            state.pending.clear();
                            return Err(VerifyError::Uninformative);
                        }
                    }
                }
                Ok(CheckOutcome::Calibrating)
            }
        }
    }

    pub fn constants(&self, check: SyntheticCheck) -> Option<&[Complex64]> {
        self.states.get(&check)?.constants.as_deref()
    }

    pub fn summaries(&self) -> Vec<CheckSummary> {
        self.states
            .iter()
            .map(|(check, s)| CheckSummary {
                check: check.label().to_string(),
                constants: s
                    .constants
                    .iter()
                    .flatten()
                    .map(|&c| ComplexValue::from(c))
                    .collect(),
                calibrated_on_seeds: s.calibrated_on.clone(),
                checked_draws: s.checked,
                max_relative_error: s.max_error,
            })
            .collect()
    }
}

fn run_checks(
    cal: &mut Calibration,
    sp: &SyntheticPoint,
    checks: &[SyntheticCheck],
) -> Result<Vec<(SyntheticCheck, CheckOutcome)>, VerifyError> {
    // evaluate everything first so an uninformative draw leaves `cal` as is
    let sides = checks
        .iter()
        .map(|&c| evaluate_sides(sp, c).map(|s| (c, s)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut trial = cal.clone();
    let mut out = Vec::new();
    for (c, (lhs, feats)) in sides {
        out.push((c, trial.observe(c, sp.seed, lhs, feats)?));
    }
    *cal = trial;
    Ok(out)
}

/// Compares the `R(·,·,(∇J)·,J·)` sum at each substitution of the proof
/// with its closed form, `R := φ(Q)`.
pub fn calibrate_and_check_31_to_35(
    cal: &mut Calibration,
    sp: &SyntheticPoint,
) -> Result<Vec<(SyntheticCheck, CheckOutcome)>, VerifyError> {
    run_checks(cal, sp, &SyntheticCheck::eq24_checks(sp.n))
}

/// Second Bianchi identity for `∇φ(Q)` at the proof's substitutions, with
/// `μ_β = μ_γ = 0` imposed.
pub fn calibrate_and_check_37(
    cal: &mut Calibration,
    sp: &SyntheticPoint,
) -> Result<Vec<(SyntheticCheck, CheckOutcome)>, VerifyError> {
    let sp = sp.with_vanishing_mu(&[BE, GA]);
    run_checks(cal, &sp, &SyntheticCheck::bianchi_checks())
}

/// Defects of the split of the final relation into a part symmetric in
/// `(β, γ)`, `2(∇_{Z_ᾱ}Q)(Z_β,Z_γ)`, and an antisymmetric part,
/// `iμ_α g((∇_{Z_ᾱ}J)Z_β,Z_γ)`; each relative to its own size.
pub fn symmetry_split(sp: &SyntheticPoint) -> (f64, f64) {
    let s = sp.inputs();
    let i = Complex64::i();
    let sym = |b: usize, c: usize| 2.0 * s.dq(Zbar(AL), Z(b), Z(c));
    let anti = |b: usize, c: usize| i * sp.mu[AL] * s.gn(Zbar(AL), Z(b), Z(c));
    let rel = |x: Complex64, y: Complex64| (x - y).norm() / (1.0 + x.norm().max(y.norm()));
    (
        rel(sym(BE, GA), sym(GA, BE)),
        rel(anti(BE, GA), -anti(GA, BE)),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub check: String,
    pub constants: Vec<ComplexValue>,
    pub calibrated_on_seeds: Vec<u64>,
    pub checked_draws: usize,
    pub max_relative_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub seeds: usize,
    pub base_seed: u64,
    pub regenerated_draws: usize,
    pub checks: Vec<CheckSummary>,
    pub symmetric_part_defect: f64,
    pub antisymmetric_part_defect: f64,
    pub max_relative_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Runs every synthetic check over `seeds` informative draws starting at
/// `base_seed`; uninformative draws are replaced by the next seed.
pub fn run_synthetic_oracle(
    n: usize,
    seeds: usize,
    base_seed: u64,
    tolerance: f64,
) -> Result<OracleReport, VerifyError> {
    let mut cal = Calibration::new();
    let mut used = 0;
    let mut regenerated = 0;
    let mut seed = base_seed;
    let (mut sym, mut anti) = (0.0f64, 0.0f64);
    while used < seeds {
        let sp = synthetic_point(seed, n, None)?;
        seed = seed.wrapping_add(1);
        let mut trial = cal.clone();
        let ok = calibrate_and_check_31_to_35(&mut trial, &sp)
            .and_then(|_| calibrate_and_check_37(&mut trial, &sp));
        match ok {
            Ok(_) => {
                cal = trial;
                used += 1;
                let (s, a) = symmetry_split(&sp.with_vanishing_mu(&[BE, GA]));
                sym = sym.max(s);
                anti = anti.max(a);
            }
            Err(VerifyError::Uninformative) => regenerated += 1,
            Err(e) => return Err(e),
        }
        if regenerated > 10 * seeds + 10 {
            return Err(VerifyError::Uninformative);
        }
    }
    let checks = cal.summaries();
    let max_relative_error = checks.iter().map(|c| c.max_relative_error).fold(0.0, f64::max);
    let passed = max_relative_error <= tolerance
        && sym <= tolerance
        && anti <= tolerance
        && checks.iter().all(|c| !c.constants.is_empty());
    Ok(OracleReport {
        n,
        seeds,
        base_seed,
        regenerated_draws: regenerated,
        checks,
        symmetric_part_defect: sym,
        antisymmetric_part_defect: anti,
        max_relative_error,
        tolerance,
        passed,
    })
}
