//! The Bochner tensor `B = R − φ(Q)` of an almost Hermitian point and the
//! identities that follow from `B = 0`.
//!
//! `φ(Q)(x,y,z,u)` is assembled term by term:
//!
//! ```text
//!   g(x,u)Q(y,z) − g(x,z)Q(y,u) + g(y,z)Q(x,u) − g(y,u)Q(x,z)
//! + g(x,Ju)Q(y,Jz) − g(x,Jz)Q(y,Ju) − 2g(x,Jy)Q(z,Ju)
//! + g(y,Jz)Q(x,Ju) − g(y,Ju)Q(x,Jz) − 2g(z,Ju)Q(x,Jy)
//! ```

use crate::manifold::CurvaturePackage;
use crate::tensor::{PointTensor, TensorError, Variance};
use serde::Serialize;

use Variance::{Co, Contra};

/// Coefficients `(a, b)` of `Q = a·ρ − b·τ·g` in complex dimension `n`.
pub fn q_coefficients(n: usize) -> (f64, f64) {
    let n = n as f64;
    (1.0 / (2.0 * (n + 2.0)), 1.0 / (8.0 * (n + 1.0) * (n + 2.0)))
}

fn require(cond: bool, a: usize, b: usize) -> Result<(), TensorError> {
    if cond {
        Ok(())
    } else {
        Err(TensorError::DimensionMismatch(a, b))
    }
}

fn require_degree(t: &PointTensor, needed: usize) -> Result<(), TensorError> {
    if t.degree() == needed {
        Ok(())
    } else {
        Err(TensorError::IncompatibleDegree {
            needed,
            degree: t.degree(),
        })
    }
}

pub fn q_tensor(
    ricci: &PointTensor,
    scalar: f64,
    g: &PointTensor,
    n: usize,
) -> Result<PointTensor, TensorError> {
    require_degree(ricci, 2)?;
    require_degree(g, 2)?;
    require(ricci.dim() == 2 * n, ricci.dim(), 2 * n)?;
    let (a, b) = q_coefficients(n);
    ricci.lin_comb(a, g, -b * scalar)
}

/// One summand `c · F(s_a, s_b) · G(s_c, s_d)` of `φ`, where `F, G` are
/// `g, Q` or, when `twisted`, `g(·, J·), Q(·, J·)`.
#[derive(Clone, Copy, Debug)]
pub struct PhiTerm {
    pub coeff: f64,
    pub twisted: bool,
    pub left: (usize, usize),
    pub right: (usize, usize),
}

const fn term(coeff: f64, twisted: bool, left: (usize, usize), right: (usize, usize)) -> PhiTerm {
    PhiTerm {
        coeff,
        twisted,
        left,
        right,
    }
}

// slots: x = 0, y = 1, z = 2, u = 3
pub const PHI_TERMS: [PhiTerm; 10] = [
    term(1.0, false, (0, 3), (1, 2)),
    term(-1.0, false, (0, 2), (1, 3)),
    term(1.0, false, (1, 2), (0, 3)),
    term(-1.0, false, (1, 3), (0, 2)),
    term(1.0, true, (0, 3), (1, 2)),
    term(-1.0, true, (0, 2), (1, 3)),
    term(-2.0, true, (0, 1), (2, 3)),
    term(1.0, true, (1, 2), (0, 3)),
    term(-1.0, true, (1, 3), (0, 2)),
    term(-2.0, true, (2, 3), (0, 1)),
];

pub const ALL_TERMS: [bool; 10] = [true; 10];

fn check_structure(q: &PointTensor, g: &PointTensor, j: &PointTensor) -> Result<(), TensorError> {
    require_degree(q, 2)?;
    require_degree(g, 2)?;
    require_degree(j, 2)?;
    require(q.dim() == g.dim(), q.dim(), g.dim())?;
    require(j.dim() == g.dim(), j.dim(), g.dim())
}

pub fn phi(q: &PointTensor, g: &PointTensor, j: &PointTensor) -> Result<PointTensor, TensorError> {
    phi_with_terms(q, g, j, &ALL_TERMS)
}

/// `φ(Q)` restricted to the enabled summands of [`PHI_TERMS`].
pub fn phi_with_terms(
    q: &PointTensor,
    g: &PointTensor,
    j: &PointTensor,
    enabled: &[bool; 10],
) -> Result<PointTensor, TensorError> {
    check_structure(q, g, j)?;
    let gj = g.precompose(1, j)?;
    let qj = q.precompose(1, j)?;
    Ok(PointTensor::from_fn(g.dim(), vec![Co; 4], |s| {
        let mut v = 0.0;
        for (t, _) in PHI_TERMS.iter().zip(enabled).filter(|(_, on)| **on) {
            let (l, r) = if t.twisted { (&gj, &qj) } else { (g, q) };
            v += t.coeff * l.get(&[s[t.left.0], s[t.left.1]]) * r.get(&[s[t.right.0], s[t.right.1]]);
        }
        v
    }))
}

/// `(∇_w φ(Q))(x,y,z,u)` with the derivative slot first, given
/// `dq[w,a,b] = (∇_w Q)(a,b)` and `nabla_j[w,a,b] = g((∇_w J)a, b)`.
///
/// Uses `∇g = 0`, `∇_w g(a,Jb) = g(a,(∇_w J)b)` and
/// `∇_w Q(a,Jb) = (∇_w Q)(a,Jb) + Q(a,(∇_w J)b)`.
pub fn phi_derivative(
    q: &PointTensor,
    dq: &PointTensor,
    g: &PointTensor,
    g_inv: &PointTensor,
    j: &PointTensor,
    nabla_j: &PointTensor,
) -> Result<PointTensor, TensorError> {
    check_structure(q, g, j)?;
    require_degree(dq, 3)?;
    require_degree(nabla_j, 3)?;
    let d = g.dim();
    require(dq.dim() == d, dq.dim(), d)?;
    require(nabla_j.dim() == d, nabla_j.dim(), d)?;
    let gj = g.precompose(1, j)?;
    let qj = q.precompose(1, j)?;
    let d_gj = nabla_j.permute(&[0, 2, 1]);
    // (∇_w J)b = g⁻¹ N(w, b, ·)
    let nabla_j_up = nabla_j.raise(2, g_inv)?;
    let q_on_nabla_j = PointTensor::from_fn(d, vec![Co; 3], |x| {
        let (w, a, b) = (x[0], x[1], x[2]);
        (0..d).map(|c| q.get(&[a, c]) * nabla_j_up.get(&[w, b, c])).sum()
    });
    let d_qj = dq.precompose(2, j)?.add(&q_on_nabla_j)?;
    Ok(PointTensor::from_fn(d, vec![Co; 5], |s| {
        let (w, s) = (s[0], &s[1..]);
        let mut v = 0.0;
        for t in &PHI_TERMS {
            let (la, lb) = (s[t.left.0], s[t.left.1]);
            let (ra, rb) = (s[t.right.0], s[t.right.1]);
            v += t.coeff
                * if t.twisted {
                    d_gj.get(&[w, la, lb]) * qj.get(&[ra, rb])
                        + gj.get(&[la, lb]) * d_qj.get(&[w, ra, rb])
                } else {
                    g.get(&[la, lb]) * dq.get(&[w, ra, rb])
                };
        }
        v
    }))
}

pub fn bochner(r: &PointTensor, phi_q: &PointTensor) -> Result<PointTensor, TensorError> {
    require_degree(r, 4)?;
    require_degree(phi_q, 4)?;
    r.sub(phi_q)
}

/// `(x, y) ↦ Σ_i T(x, e_i, e_i, y)` over a g-orthonormal basis.
pub fn ricci_of(t: &PointTensor, g_inv: &PointTensor) -> Result<PointTensor, TensorError> {
    require_degree(t, 4)?;
    t.contract(1, 2, Some(g_inv))
}

/// Max-norm residuals of the identities that hold when `B = 0`, each over
/// all coordinate index tuples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section2Residuals {
    /// `ρ(x,y) − ρ(Jx,Jy)`
    pub hybrid_ricci: f64,
    /// `ρ(x,y) − ((2n+1)ρ(x,y) + 3ρ(Jx,Jy)) / (2(n+2))`
    pub trace_identity: f64,
    /// `R(x,y,z,u) − R(x,y,Jz,Ju)`
    pub ah1: f64,
    /// `Q(x,y) − Q(Jx,Jy)`
    pub q_hybrid: f64,
    /// `Q(x,y) − Q(y,x)`
    pub q_symmetric: f64,
}

fn j_twice(t: &PointTensor, a: usize, b: usize, j: &PointTensor) -> Result<PointTensor, TensorError> {
    t.precompose(a, j)?.precompose(b, j)
}

pub fn section2_residuals(pkg: &CurvaturePackage) -> Result<Section2Residuals, TensorError> {
    let n = pkg.n as f64;
    let j = &pkg.j;
    let ricci_jj = j_twice(&pkg.ricci, 0, 1, j)?;
    let traced = pkg
        .ricci
        .lin_comb((2.0 * n + 1.0) / (2.0 * (n + 2.0)), &ricci_jj, 3.0 / (2.0 * (n + 2.0)))?;
    Ok(Section2Residuals {
        hybrid_ricci: pkg.ricci.distance(&ricci_jj)?,
        trace_identity: pkg.ricci.distance(&traced)?,
        ah1: pkg.r.distance(&j_twice(&pkg.r, 2, 3, j)?)?,
        q_hybrid: pkg.q.distance(&j_twice(&pkg.q, 0, 1, j)?)?,
        q_symmetric: pkg.q.distance(&pkg.q.permute(&[1, 0]))?,
    })
}

/// `Q`, its (1,1) form, `φ(Q)`, `B` and the residual map at one point.
#[derive(Clone, Debug)]
pub struct BochnerPackage {
    pub q: PointTensor,
    /// `(Q¹)^i_j = g^{ik} Q_kj`
    pub q1: PointTensor,
    pub phi_q: PointTensor,
    pub b: PointTensor,
    pub residuals: Section2Residuals,
}

impl BochnerPackage {
    pub fn new(pkg: &CurvaturePackage) -> Result<Self, TensorError> {
        let q = pkg.q.clone();
        let q1 = q.raise(0, &pkg.g_inv)?;
        debug_assert_eq!(q1.variance(), [Contra, Co]);
        let phi_q = phi(&q, &pkg.g, &pkg.j)?;
        let b = bochner(&pkg.r, &phi_q)?;
        let residuals = section2_residuals(pkg)?;
        Ok(BochnerPackage {
            q,
            q1,
            phi_q,
            b,
            residuals,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{curvature_package, zoo, ZooParams};
    use crate::sample::{
        identity_metric, inverse_metric, random_hermitian_pair, random_hybrid, standard_j,
    };
    use crate::tensor::SymmetryKind;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(d: usize, k: usize) -> Vec<f64> {
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        v
    }

    #[test]
    fn q_formula_examples() {
        let g = identity_metric(6);
        let zero = PointTensor::covariant(6, 2);
        assert_eq!(q_tensor(&zero, 0.0, &g, 3).unwrap().max_norm(), 0.0);

        let q = q_tensor(&g.scale(5.0), 30.0, &g, 3).unwrap();
        assert!(q.distance(&g.scale(0.3125)).unwrap() < 1e-15);

        let g8 = identity_metric(8);
        let q = q_tensor(&g8, 8.0, &g8, 4).unwrap();
        // 8(n+1)(n+2) = 240
        let expected = 1.0 / 12.0 - 1.0 / 30.0;
        assert!(q.distance(&g8.scale(expected)).unwrap() < 1e-15);

        assert!(q_tensor(&g, 1.0, &g, 4).is_err());
    }

    #[test]
    fn phi_values_on_standard_structure() {
        let g = identity_metric(6);
        let j = standard_j(3);
        let p = phi(&g, &g, &j).unwrap();
        let (e1, e2, e4) = (unit(6, 0), unit(6, 1), unit(6, 3));
        assert_eq!(j.apply_real(&e1), e4);
        assert_eq!(p.eval(&[&e1, &e2, &e2, &e1]).unwrap(), 2.0);
        assert_eq!(p.eval(&[&e1, &e4, &e4, &e1]).unwrap(), 8.0);

        // only the two pure-g lines see (e1, e2, e2, e1)
        let mut plain = [false; 10];
        plain[..4].copy_from_slice(&[true; 4]);
        let p4 = phi_with_terms(&g, &g, &j, &plain).unwrap();
        assert_eq!(p4.eval(&[&e1, &e2, &e2, &e1]).unwrap(), 2.0);
        assert_eq!(p4.eval(&[&e1, &e4, &e4, &e1]).unwrap(), 2.0);

        let zero = PointTensor::covariant(6, 2);
        assert_eq!(phi(&zero, &g, &j).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn bochner_vanishes_on_flat_space() {
        let m = zoo("flat_cn", &ZooParams::with_n(3)).unwrap();
        let pkg = curvature_package(&m, &[0.0; 6]).unwrap();
        let bp = BochnerPackage::new(&pkg).unwrap();
        assert_eq!(bp.b.max_norm(), 0.0);
        assert_eq!(bp.phi_q.max_norm(), 0.0);
        let r = &bp.residuals;
        for v in [r.hybrid_ricci, r.trace_identity, r.ah1, r.q_hybrid, r.q_symmetric] {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn complex_projective_space_is_bochner_flat() {
        let m = zoo("fubini_study_cpn", &ZooParams::with_n(3)).unwrap();
        let pkg = curvature_package(&m, &[0.2, -0.1, 0.4, 0.3, 0.0, -0.25]).unwrap();
        let bp = BochnerPackage::new(&pkg).unwrap();
        assert!(bp.b.max_norm() <= 1e-8 * pkg.r.max_norm());
        assert!(bp.residuals.hybrid_ricci <= 1e-9);
        assert!(bp.residuals.trace_identity <= 1e-9);
        assert!(bp.residuals.ah1 <= 1e-9);
    }

    #[test]
    fn nearly_kahler_sphere_is_not_bochner_flat() {
        let m = zoo("s6_nearly_kahler", &ZooParams::default()).unwrap();
        let pkg = curvature_package(&m, &[0.3, -0.2, 0.1, 0.5, -0.4, 0.2]).unwrap();
        let bp = BochnerPackage::new(&pkg).unwrap();
        assert!(bp.b.max_norm() / pkg.r.max_norm() > 1e-3);
        // B = R − φ(Q) entrywise
        let back = bp.b.add(&bp.phi_q).unwrap();
        assert!(back.distance(&pkg.r).unwrap() <= 1e-14 * pkg.r.max_norm());
    }

    #[test]
    fn ricci_of_curvature_is_ricci() {
        let m = zoo("round_sphere_diag", &ZooParams::with_n(2)).unwrap();
        let pkg = curvature_package(&m, &[1.1, 0.7, 2.0, 0.3]).unwrap();
        let traced = ricci_of(&pkg.r, &pkg.g_inv).unwrap();
        assert!(traced.distance(&pkg.ricci).unwrap() < 1e-12);
        assert!(traced.distance(&pkg.g.scale(3.0)).unwrap() < 1e-10);
        let zero = PointTensor::covariant(4, 4);
        assert_eq!(ricci_of(&zero, &pkg.g_inv).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn phi_of_flat_package_is_bit_exact_zero() {
        let m = zoo("flat_twisted_j", &ZooParams::with_n(3)).unwrap();
        let pkg = curvature_package(&m, &[0.1, 0.2, 0.7, -0.3, 0.0, 0.5]).unwrap();
        let q = q_tensor(&pkg.ricci, pkg.scalar, &pkg.g, 3).unwrap();
        let b = bochner(&pkg.r, &phi(&q, &pkg.g, &pkg.j).unwrap()).unwrap();
        assert!(b.data().iter().all(|&x| x == 0.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn phi_of_hybrid_q_has_curvature_symmetries(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (g, j) = random_hermitian_pair(&mut rng, 3);
            let q = random_hybrid(&mut rng, &j);
            let p = phi(&q, &g, &j).unwrap();
            let scale = 1.0 + p.max_norm();
            prop_assert!(p.symmetry_defect(SymmetryKind::Antisym(0, 1)).unwrap() <= 1e-12 * scale);
            prop_assert!(p.symmetry_defect(SymmetryKind::Antisym(2, 3)).unwrap() <= 1e-12 * scale);
            prop_assert!(p.symmetry_defect(SymmetryKind::PairExchange).unwrap() <= 1e-12 * scale);
            prop_assert!(p.symmetry_defect(SymmetryKind::FirstBianchi).unwrap() <= 1e-12 * scale);
            let pjj = p.precompose(2, &j).unwrap().precompose(3, &j).unwrap();
            prop_assert!(p.distance(&pjj).unwrap() <= 1e-12 * scale);
        }

        #[test]
        fn trace_of_phi_reproduces_hybrid_ricci(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (g, j) = random_hermitian_pair(&mut rng, 3);
            let g_inv = inverse_metric(&g).unwrap();
            let ricci = random_hybrid(&mut rng, &j);
            let scalar = ricci.contract(0, 1, Some(&g_inv)).unwrap().value();
            let q = q_tensor(&ricci, scalar, &g, 3).unwrap();
            let back = ricci_of(&phi(&q, &g, &j).unwrap(), &g_inv).unwrap();
            prop_assert!(back.distance(&ricci).unwrap() <= 1e-10 * (1.0 + ricci.max_norm()));
        }
    }

    #[test]
    fn phi_derivative_matches_difference_quotient() {
        // oracle: differentiate φ along a straight path Q(t), J(t) with J(t)
        // kept almost complex by conjugation, g fixed
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 3;
        let d = 2 * n;
        let g = identity_metric(d);
        let j0 = standard_j(n);
        let q0 = random_hybrid(&mut rng, &j0);
        let dq = random_hybrid(&mut rng, &j0);
        // skew generator K with KJ = −JK, so exp(tK) J exp(−tK) stays orthogonal
        let mut k = PointTensor::zeros(d, vec![Contra, Co]);
        for a in 0..d {
            for b in (a + 1)..d {
                let v: f64 = rand::Rng::gen_range(&mut rng, -1.0..1.0);
                k.set(&[a, b], v);
                k.set(&[b, a], -v);
            }
        }
        let jm = |t: f64| {
            use nalgebra::DMatrix;
            let km = DMatrix::from_row_slice(d, d, k.data()) * t;
            let rot = km.exp();
            let jj = &rot * DMatrix::from_row_slice(d, d, j0.data()) * rot.transpose();
            PointTensor::from_fn(d, vec![Contra, Co], |i| jj[(i[0], i[1])])
        };
        let h = 1e-5;
        let at = |t: f64| phi(&q0.lin_comb(1.0, &dq, t).unwrap(), &g, &jm(t)).unwrap();
        let fd = at(h).lin_comb(1.0 / (2.0 * h), &at(-h), -1.0 / (2.0 * h)).unwrap();
        // single direction w = e_0 carrying the path derivative
        let dj = jm(h).lin_comb(1.0 / (2.0 * h), &jm(-h), -1.0 / (2.0 * h)).unwrap();
        let mut nabla_j = PointTensor::covariant(d, 3);
        let mut dq3 = PointTensor::covariant(d, 3);
        for a in 0..d {
            for b in 0..d {
                // g((∇J)a, b) = (dJ)^b_a with g = identity
                nabla_j.set(&[0, a, b], dj.get(&[b, a]));
                dq3.set(&[0, a, b], dq.get(&[a, b]));
            }
        }
        let g_inv = inverse_metric(&g).unwrap();
        let analytic = phi_derivative(&q0, &dq3, &g, &g_inv, &j0, &nabla_j).unwrap();
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    for u in 0..d {
                        let a = analytic.get(&[0, x, y, z, u]);
                        assert!((a - fd.get(&[x, y, z, u])).abs() < 1e-7, "{a}");
                    }
                }
            }
        }
    }
}
