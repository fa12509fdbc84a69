//! Verdict of a manifold point against the theorem: a point with vanishing
//! Bochner tensor that is neither Kähler nor flat would contradict it.

use super::VerifyError;
use crate::bochner::{bochner, phi, q_tensor, BochnerPackage};
use crate::manifold::{point_curvature, ChartManifold, CurvaturePackage};
use crate::tensor::PointTensor;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "consistent")]
    Consistent,
    #[serde(rename = "violation-candidate")]
    ViolationCandidate,
    #[serde(rename = "not-applicable")]
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::ViolationCandidate => "violation-candidate",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

/// Max-norms and the three booleans behind the verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub n: usize,
    pub tol: f64,
    pub norm_r: f64,
    pub norm_b: f64,
    pub norm_nabla_j: f64,
    pub norm_g: f64,
    /// `‖B‖ ≤ tol·(1 + ‖R‖)`
    pub bochner0: bool,
    /// `‖∇J‖ ≤ tol`
    pub kahler: bool,
    /// `‖R‖ ≤ tol·(1 + ‖g‖²)`
    pub flat: bool,
    pub verdict: Verdict,
    pub warning: Option<String>,
}

fn classify_parts(n: usize, g: &PointTensor, r: &PointTensor, b: &PointTensor, nabla_j: &PointTensor, tol: f64) -> Classification {
    let norm_r = r.max_norm();
    let norm_b = b.max_norm();
    let norm_nabla_j = nabla_j.max_norm();
    let norm_g = g.max_norm();
    let bochner0 = norm_b <= tol * (1.0 + norm_r);
    let kahler = norm_nabla_j <= tol;
    let flat = norm_r <= tol * (1.0 + norm_g * norm_g);
    let (verdict, warning) = if n <= 2 {
        (Verdict::NotApplicable, Some(format!("theorem requires n > 2 (n = {n})")))
    } else if bochner0 && !kahler && !flat {
        (Verdict::ViolationCandidate, None)
    } else {
        (Verdict::Consistent, None)
    };
    Classification {
        n,
        tol,
        norm_r,
        norm_b,
        norm_nabla_j,
        norm_g,
        bochner0,
        kahler,
        flat,
        verdict,
        warning,
    }
}

pub fn classify(m: &ChartManifold, p: &[f64], tol: f64) -> Result<Classification, VerifyError> {
    let pc = point_curvature(m, p)?;
    let q = q_tensor(&pc.ricci, pc.scalar, &pc.g, pc.n)?;
    let b = bochner(&pc.r, &phi(&q, &pc.g, &pc.j)?)?;
    Ok(classify_parts(pc.n, &pc.g, &pc.r, &b, &pc.nabla_j, tol))
}

/// Same verdict from an already computed package.
pub fn classify_package(pkg: &CurvaturePackage, bp: &BochnerPackage, tol: f64) -> Classification {
    classify_parts(pkg.n, &pkg.g, &pkg.r, &bp.b, &pkg.nabla_j, tol)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub center: Vec<f64>,
    pub radius: f64,
    pub grid_per_axis: usize,
    pub sampled: usize,
    /// grid points outside the chart domain, skipped
    pub clipped: usize,
    pub max_norm_r: f64,
    pub argmax: Vec<f64>,
}

/// Max-norm of `R` over the grid `p + radius·(−1 + 2k/(grid−1))` per axis.
pub fn neighborhood_scan(
    m: &ChartManifold,
    p: &[f64],
    radius: f64,
    grid_per_axis: usize,
) -> Result<ScanReport, VerifyError> {
    let d = m.dim();
    if p.len() != d {
        return Err(crate::manifold::GeometryError::PointDimension { got: p.len(), dim: d }.into());
    }
    let offsets: Vec<f64> = match grid_per_axis {
        0 | 1 => vec![0.0],
        k => (0..k)
            .map(|i| radius * (-1.0 + 2.0 * i as f64 / (k - 1) as f64))
            .collect(),
    };
    let k = offsets.len();
    let mut report = ScanReport {
        center: p.to_vec(),
        radius,
        grid_per_axis: k,
        sampled: 0,
        clipped: 0,
        max_norm_r: 0.0,
        argmax: p.to_vec(),
    };
    let mut counter = vec![0usize; d];
    loop {
        let x: Vec<f64> = p.iter().zip(&counter).map(|(c, &i)| c + offsets[i]).collect();
        if m.contains(&x) {
            let norm = point_curvature(m, &x)?.r.max_norm();
            report.sampled += 1;
            if norm > report.max_norm_r {
                report.max_norm_r = norm;
                report.argmax = x;
            }
        } else {
            report.clipped += 1;
        }
        // odometer
        let mut axis = 0;
        while axis < d {
            counter[axis] += 1;
            if counter[axis] < k {
                break;
            }
            counter[axis] = 0;
            axis += 1;
        }
        if axis == d {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{zoo, ZooParams, ZOO_NAMES};

    fn classify_zoo(name: &str, p: &[f64]) -> Classification {
        let m = zoo(name, &ZooParams::default()).unwrap();
        classify(&m, p, 1e-8).unwrap()
    }

    #[test]
    fn zoo_verdicts() {
        let c = classify_zoo("flat_cn", &[0.0; 6]);
        assert_eq!((c.bochner0, c.kahler, c.flat), (true, true, true));
        assert_eq!(c.verdict, Verdict::Consistent);

        let c = classify_zoo("s6_nearly_kahler", &[0.2, 0.1, -0.3, 0.4, 0.0, 0.1]);
        assert_eq!((c.bochner0, c.kahler, c.flat), (false, false, false));
        assert_eq!(c.verdict, Verdict::Consistent);

        let c = classify_zoo("flat_twisted_j", &[0.1, -0.2, 0.5, 0.3, 0.0, 0.2]);
        assert_eq!((c.bochner0, c.kahler, c.flat), (true, false, true));
        assert_eq!(c.verdict, Verdict::Consistent);
    }

    #[test]
    fn low_dimension_is_not_applicable() {
        let m = zoo("flat_cn", &ZooParams::with_n(2)).unwrap();
        let c = classify(&m, &[0.0; 4], 1e-8).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
        assert!(c.warning.unwrap().contains("theorem requires n > 2"));
    }

    #[test]
    fn package_and_direct_classification_agree() {
        let m = zoo("fubini_study_cpn", &ZooParams::default()).unwrap();
        let p = [0.1, 0.4, -0.2, 0.3, 0.2, -0.5];
        let pkg = crate::manifold::curvature_package(&m, &p).unwrap();
        let bp = BochnerPackage::new(&pkg).unwrap();
        let a = classify_package(&pkg, &bp, 1e-8);
        let b = classify(&m, &p, 1e-8).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert_eq!((a.bochner0, a.kahler, a.flat), (b.bochner0, b.kahler, b.flat));
        assert_eq!((a.bochner0, a.kahler, a.flat), (true, true, false));
        assert!((a.norm_r - b.norm_r).abs() < 1e-12);
    }

    #[test]
    fn verdict_is_consistent_for_every_tolerance_on_zoo_points() {
        let points: [(&str, [f64; 6]); 5] = [
            ("flat_cn", [0.3, 0.1, -0.2, 0.5, 0.0, 0.4]),
            ("fubini_study_cpn", [0.1, 0.4, -0.2, 0.3, 0.2, -0.5]),
            ("s6_nearly_kahler", [0.2, 0.1, -0.3, 0.4, 0.0, 0.1]),
            ("flat_twisted_j", [0.1, -0.2, 0.5, 0.3, 0.0, 0.2]),
            ("round_sphere_diag", [1.0, 1.2, 0.8, 1.5, 2.0, 0.3]),
        ];
        assert_eq!(points.len(), ZOO_NAMES.len());
        let m_by = |name: &str| zoo(name, &ZooParams::default()).unwrap();
        for (name, p) in points {
            let m = m_by(name);
            for e in -14..=8 {
                let c = classify(&m, &p, 10f64.powi(e)).unwrap();
                assert_eq!(c.verdict, Verdict::Consistent, "{name} at tol 1e{e}");
            }
        }
    }

    #[test]
    fn loosening_tolerance_can_create_a_candidate_on_small_scale_charts() {
        // far from the origin the stereographic S⁶ metric is tiny, so the
        // absolute flatness and Kähler thresholds lag behind the relative
        // Bochner one
        let m = zoo("s6_nearly_kahler", &ZooParams::default()).unwrap();
        let p = [3.0, 3.0, 3.0, 0.0, 0.0, 0.0];
        let verdicts: Vec<Verdict> = [1e-5, 2.3e-5, 3e-5]
            .iter()
            .map(|&t| classify(&m, &p, t).unwrap().verdict)
            .collect();
        assert_eq!(
            verdicts,
            [Verdict::Consistent, Verdict::ViolationCandidate, Verdict::Consistent]
        );
    }

    #[test]
    fn scans() {
        let m = zoo("flat_twisted_j", &ZooParams::default()).unwrap();
        let s = neighborhood_scan(&m, &[0.0; 6], 0.5, 2).unwrap();
        assert_eq!(s.sampled + s.clipped, 64);
        assert!(s.max_norm_r <= 1e-10);

        let m = zoo("flat_cn", &ZooParams::default()).unwrap();
        assert_eq!(neighborhood_scan(&m, &[0.0; 6], 0.5, 2).unwrap().max_norm_r, 0.0);

        let m = zoo("round_sphere_diag", &ZooParams::default()).unwrap();
        let s = neighborhood_scan(&m, &[0.3, 1.5, 1.5, 1.5, 1.5, 0.0], 0.5, 2).unwrap();
        assert!(s.clipped > 0);
        assert!(s.sampled > 0);
        assert!(s.max_norm_r > 0.1);
    }
}
