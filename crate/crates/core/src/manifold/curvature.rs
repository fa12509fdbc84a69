use super::{ChartManifold, GeometryError};
use crate::bochner::{q_coefficients, q_tensor};
use crate::exprjet::Jet;
use crate::tensor::{PointTensor, Variance};

use Variance::{Co, Contra};

/// Everything the identity checks need at one point. Derivative slots come
/// first: `nabla_r[a,i,j,k,l] = (∇_a R)(i,j,k,l)`, `nabla_j[x,y,z] =
/// g((∇_x J)y, z)`.
#[derive(Clone, Debug)]
pub struct CurvaturePackage {
    pub point: Vec<f64>,
    pub n: usize,
    pub g: PointTensor,
    pub g_inv: PointTensor,
    /// `Γ^k_ij` stored as `[k, i, j]`
    pub gamma: PointTensor,
    pub j: PointTensor,
    pub r: PointTensor,
    pub ricci: PointTensor,
    pub scalar: f64,
    pub nabla_j: PointTensor,
    pub nabla_r: PointTensor,
    pub nabla_ricci: PointTensor,
    pub nabla_scalar: PointTensor,
    pub q: PointTensor,
    pub nabla_q: PointTensor,
}

impl CurvaturePackage {
    pub fn dim(&self) -> usize {
        2 * self.n
    }
}

struct Connection {
    g: Vec<Vec<Jet>>,
    g_inv: Vec<Vec<Jet>>,
    // gamma[k][i][j], order 2
    gamma: Vec<Vec<Vec<Jet>>>,
}

fn invert(a: &[Vec<Jet>]) -> Result<Vec<Vec<Jet>>, GeometryError> {
    let d = a.len();
    let mut m: Vec<Vec<Jet>> = a.to_vec();
    let zero = a[0][0].zeros_like();
    let mut inv: Vec<Vec<Jet>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|k| if i == k { zero.add_scalar(1.0) } else { zero.clone() })
                .collect()
        })
        .collect();
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&x, &y| m[x][col].value().abs().total_cmp(&m[y][col].value().abs()))
            .unwrap_or(col);
        let pv = m[pivot][col].value();
        if pv.abs() < 1e-300 {
            return Err(GeometryError::SingularMetric(pv.abs()));
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let r = m[col][col].recip();
        for k in 0..d {
            m[col][k] = m[col][k].mul(&r);
            inv[col][k] = inv[col][k].mul(&r);
        }
        for row in 0..d {
            if row == col {
                continue;
            }
            let f = m[row][col].clone();
            if f.taylor_coefficients().iter().all(|&c| c == 0.0) {
                continue;
            }
            for k in 0..d {
                let t = f.mul(&m[col][k]);
                m[row][k] = m[row][k].sub(&t);
                let t = f.mul(&inv[col][k]);
                inv[row][k] = inv[row][k].sub(&t);
            }
        }
    }
    Ok(inv)
}

fn connection(m: &ChartManifold, p: &[f64], g_order: usize) -> Result<Connection, GeometryError> {
    let d = m.dim();
    let g = m.metric_jets(p, g_order)?;
    let inv_order = g_order - 1;
    let g_low: Vec<Vec<Jet>> = g
        .iter()
        .map(|row| row.iter().map(|x| x.truncate(inv_order)).collect())
        .collect();
    let g_inv = invert(&g_low)?;
    // dg[a][b][c] = ∂_a g_bc
    let dg: Vec<Vec<Vec<Jet>>> = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| (0..d).map(|c| g[b][c].d(a)).collect())
                .collect()
        })
        .collect();
    let zero = Jet::zero(d, inv_order);
    // first kind Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
    let mut first = vec![vec![vec![zero.clone(); d]; d]; d];
    for l in 0..d {
        for i in 0..d {
            for j in i..d {
                let v = dg[i][j][l].add(&dg[j][i][l]).sub(&dg[l][i][j]).scale(0.5);
                first[l][j][i] = v.clone();
                first[l][i][j] = v;
            }
        }
    }
    let mut gamma = vec![vec![vec![zero.clone(); d]; d]; d];
    for k in 0..d {
        for i in 0..d {
            for j in i..d {
                let mut acc = zero.clone();
                for l in 0..d {
                    acc.fused_mul_add(&g_inv[k][l], &first[l][i][j]);
                }
                gamma[k][j][i] = acc.clone();
                gamma[k][i][j] = acc;
            }
        }
    }
    Ok(Connection { g, g_inv, gamma })
}

/// Christoffel symbols `Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij)`,
/// stored as `[k, i, j]`.
pub fn christoffel(m: &ChartManifold, p: &[f64]) -> Result<PointTensor, GeometryError> {
    let conn = connection(m, p, 1)?;
    let d = m.dim();
    Ok(PointTensor::from_fn(d, vec![Contra, Co, Co], |i| {
        conn.gamma[i[0]][i[1]][i[2]].value()
    }))
}

/// Full curvature data at `p`: `R`, `ρ`, `τ`, `∇J`, `∇R`, `∇ρ`, `∇τ`, `Q`, `∇Q`.
pub fn curvature_package(m: &ChartManifold, p: &[f64]) -> Result<CurvaturePackage, GeometryError> {
    let d = m.dim();
    let n = m.n();
    let conn = connection(m, p, 3)?;
    let gamma1: Vec<Vec<Vec<Jet>>> = conn
        .gamma
        .iter()
        .map(|a| a.iter().map(|b| b.iter().map(|x| x.truncate(1)).collect()).collect())
        .collect();
    let zero1 = Jet::zero(d, 1);

    // R^m_{ijk} as order-1 jets, antisymmetric in (i, j)
    let mut r_up = vec![vec![vec![vec![zero1.clone(); d]; d]; d]; d];
    for mm in 0..d {
        for i in 0..d {
            for j in (i + 1)..d {
                for k in 0..d {
                    let mut acc = conn.gamma[mm][j][k].d(i).sub(&conn.gamma[mm][i][k].d(j));
                    for q in 0..d {
                        acc.fused_mul_add(&gamma1[mm][i][q], &gamma1[q][j][k]);
                        let mut neg = zero1.clone();
                        neg.fused_mul_add(&gamma1[mm][j][q], &gamma1[q][i][k]);
                        acc = acc.sub(&neg);
                    }
                    r_up[mm][j][i][k] = acc.neg();
                    r_up[mm][i][j][k] = acc;
                }
            }
        }
    }
    // R_{ijkl} = g_{lm} R^m_{ijk}
    let g1: Vec<Vec<Jet>> = conn
        .g
        .iter()
        .map(|row| row.iter().map(|x| x.truncate(1)).collect())
        .collect();
    let idx4 = |i: usize, j: usize, k: usize, l: usize| ((i * d + j) * d + k) * d + l;
    let mut r_val = vec![0.0; d.pow(4)];
    let mut r_der = vec![vec![0.0; d.pow(4)]; d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let mut acc = zero1.clone();
                    for mm in 0..d {
                        acc.fused_mul_add(&g1[l][mm], &r_up[mm][i][j][k]);
                    }
                    let o = idx4(i, j, k, l);
                    r_val[o] = acc.value();
                    for (a, der) in r_der.iter_mut().enumerate() {
                        der[o] = acc.partial(&[a]);
                    }
                }
            }
        }
    }

    let g = PointTensor::from_fn(d, vec![Co, Co], |i| conn.g[i[0]][i[1]].value());
    let g_inv = PointTensor::from_fn(d, vec![Contra, Contra], |i| conn.g_inv[i[0]][i[1]].value());
    let gamma = PointTensor::from_fn(d, vec![Contra, Co, Co], |i| {
        conn.gamma[i[0]][i[1]][i[2]].value()
    });
    let gv = |k: usize, i: usize, j: usize| gamma.data()[(k * d + i) * d + j];
    let r = PointTensor::new(d, vec![Co; 4], r_val).expect("R entry count");

    // (∇_a R)_{ijkl} = ∂_a R_{ijkl} − Γ^m_{ai} R_{mjkl} − … − Γ^m_{al} R_{ijkm}
    let rv = r.data();
    let nabla_r = PointTensor::from_fn(d, vec![Co; 5], |x| {
        let (a, i, j, k, l) = (x[0], x[1], x[2], x[3], x[4]);
        let mut v = r_der[a][idx4(i, j, k, l)];
        for mm in 0..d {
            v -= gv(mm, a, i) * rv[idx4(mm, j, k, l)]
                + gv(mm, a, j) * rv[idx4(i, mm, k, l)]
                + gv(mm, a, k) * rv[idx4(i, j, mm, l)]
                + gv(mm, a, l) * rv[idx4(i, j, k, mm)];
        }
        v
    });

    let ricci = r.contract(1, 2, Some(&g_inv)).expect("ricci contraction");
    let scalar = ricci.contract(0, 1, Some(&g_inv)).expect("scalar").value();
    let nabla_ricci = nabla_r.contract(2, 3, Some(&g_inv)).expect("∇ρ contraction");
    let nabla_scalar = nabla_ricci.contract(1, 2, Some(&g_inv)).expect("∇τ contraction");

    let q = q_tensor(&ricci, scalar, &g, n).expect("Q from matching shapes");
    let (c_ricci, c_scalar) = q_coefficients(n);
    let nabla_q = PointTensor::from_fn(d, vec![Co; 3], |x| {
        c_ricci * nabla_ricci.get(x) - c_scalar * nabla_scalar.get(&x[..1]) * g.get(&x[1..])
    });

    let (j, nabla_j) = j_and_nabla_j(m, p, &g, &gamma)?;

    Ok(CurvaturePackage {
        point: p.to_vec(),
        n,
        g,
        g_inv,
        gamma,
        j,
        r,
        ricci,
        scalar,
        nabla_j,
        nabla_r,
        nabla_ricci,
        nabla_scalar,
        q,
        nabla_q,
    })
}

/// `J` and `nabla_j[x,y,z] = g((∇_x J)y, z)` from the Christoffel symbols.
fn j_and_nabla_j(
    m: &ChartManifold,
    p: &[f64],
    g: &PointTensor,
    gamma: &PointTensor,
) -> Result<(PointTensor, PointTensor), GeometryError> {
    let d = m.dim();
    let gv = |k: usize, i: usize, j: usize| gamma.data()[(k * d + i) * d + j];
    // (∇_k J)^i_j = ∂_k J^i_j + Γ^i_{km} J^m_j − Γ^m_{kj} J^i_m
    let jj = m.j_jets(p, 1)?;
    let j = PointTensor::from_fn(d, vec![Contra, Co], |i| jj[i[0]][i[1]].value());
    let jv = |i: usize, k: usize| jj[i][k].value();
    let mut nabla_j_up = vec![0.0; d * d * d];
    for k in 0..d {
        for i in 0..d {
            for jx in 0..d {
                let mut v = jj[i][jx].partial(&[k]);
                for mm in 0..d {
                    v += gv(i, k, mm) * jv(mm, jx) - gv(mm, k, jx) * jv(i, mm);
                }
                nabla_j_up[(k * d + i) * d + jx] = v;
            }
        }
    }
    let nabla_j = PointTensor::from_fn(d, vec![Co; 3], |x| {
        let (k, jx, l) = (x[0], x[1], x[2]);
        (0..d)
            .map(|i| g.get(&[l, i]) * nabla_j_up[(k * d + i) * d + jx])
            .sum()
    });
    Ok((j, nabla_j))
}

/// Curvature without covariant derivatives of `R`: enough to classify a
/// point, and much cheaper than [`curvature_package`].
#[derive(Clone, Debug)]
pub struct PointCurvature {
    pub n: usize,
    pub g: PointTensor,
    pub g_inv: PointTensor,
    pub j: PointTensor,
    pub r: PointTensor,
    pub ricci: PointTensor,
    pub scalar: f64,
    pub nabla_j: PointTensor,
}

pub fn point_curvature(m: &ChartManifold, p: &[f64]) -> Result<PointCurvature, GeometryError> {
    let d = m.dim();
    let conn = connection(m, p, 2)?;
    let gv = |k: usize, i: usize, j: usize| conn.gamma[k][i][j].value();
    let mut r_up = vec![0.0; d.pow(4)];
    let idx4 = |i: usize, j: usize, k: usize, l: usize| ((i * d + j) * d + k) * d + l;
    for mm in 0..d {
        for i in 0..d {
            for j in (i + 1)..d {
                for k in 0..d {
                    let mut acc = conn.gamma[mm][j][k].partial(&[i]) - conn.gamma[mm][i][k].partial(&[j]);
                    for q in 0..d {
                        acc += gv(mm, i, q) * gv(q, j, k) - gv(mm, j, q) * gv(q, i, k);
                    }
                    r_up[idx4(mm, i, j, k)] = acc;
                    r_up[idx4(mm, j, i, k)] = -acc;
                }
            }
        }
    }
    let g = PointTensor::from_fn(d, vec![Co, Co], |i| conn.g[i[0]][i[1]].value());
    let g_inv = PointTensor::from_fn(d, vec![Contra, Contra], |i| conn.g_inv[i[0]][i[1]].value());
    let gamma = PointTensor::from_fn(d, vec![Contra, Co, Co], |i| gv(i[0], i[1], i[2]));
    let r = PointTensor::from_fn(d, vec![Co; 4], |x| {
        (0..d).map(|mm| g.get(&[x[3], mm]) * r_up[idx4(mm, x[0], x[1], x[2])]).sum()
    });
    let ricci = r.contract(1, 2, Some(&g_inv)).expect("ricci contraction");
    let scalar = ricci.contract(0, 1, Some(&g_inv)).expect("scalar").value();
    let (j, nabla_j) = j_and_nabla_j(m, p, &g, &gamma)?;
    Ok(PointCurvature {
        n: m.n(),
        g,
        g_inv,
        j,
        r,
        ricci,
        scalar,
        nabla_j,
    })
}

/// Max-norm of the cyclic sum `(∇_x R)(y,z,u,v) + (∇_y R)(z,x,u,v) +
/// (∇_z R)(x,y,u,v)` over coordinate indices.
pub fn second_bianchi_residual(pkg: &CurvaturePackage) -> f64 {
    let d = pkg.dim();
    let t = &pkg.nabla_r;
    let mut worst: f64 = 0.0;
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                for u in 0..d {
                    for v in 0..d {
                        let s = t.get(&[x, y, z, u, v])
                            + t.get(&[y, z, x, u, v])
                            + t.get(&[z, x, y, u, v]);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprjet::{parse_expr, Expr};
    use crate::manifold::{zoo, ZooParams};

    fn sphere2() -> ChartManifold {
        let g = vec![
            vec![Expr::one(), Expr::zero()],
            vec![Expr::zero(), parse_expr("sin(x1)^2", 2).unwrap()],
        ];
        let j = vec![
            vec![Expr::zero(), parse_expr("-sin(x1)", 2).unwrap()],
            vec![parse_expr("1/sin(x1)", 2).unwrap(), Expr::zero()],
        ];
        ChartManifold::new("s2", g, j).unwrap()
    }

    #[test]
    fn euclidean_christoffels_vanish() {
        let m = zoo("flat_cn", &ZooParams::with_n(2)).unwrap();
        assert_eq!(christoffel(&m, &[0.3, 0.1, -0.2, 0.5]).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn sphere_christoffel_against_finite_differences() {
        let m = sphere2();
        let theta = std::f64::consts::FRAC_PI_4;
        let gamma = christoffel(&m, &[theta, 0.3]).unwrap();
        // oracle: Γ^1_22 = −½ g^{11} ∂_1 g_22 with ∂_1 by central differences
        let g22 = |t: f64| t.sin().powi(2);
        let h = 1e-5;
        let oracle = -0.5 * (g22(theta + h) - g22(theta - h)) / (2.0 * h);
        assert!((gamma.get(&[0, 1, 1]) - oracle).abs() < 1e-9);
        assert!((gamma.get(&[0, 1, 1]) + 0.5).abs() < 1e-15);
        assert_eq!(gamma.get(&[1, 0, 1]), gamma.get(&[1, 1, 0]));
    }

    #[test]
    fn scaled_flat_metric_has_no_connection() {
        let c = Expr::constant(3.5);
        let z = Expr::zero();
        let g = vec![
            vec![c.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), c.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), c.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), c.clone()],
        ];
        let j = zoo("flat_cn", &ZooParams::with_n(2)).unwrap().j_exprs().to_vec();
        let m = ChartManifold::new("scaled", g, j).unwrap();
        assert_eq!(christoffel(&m, &[1.0, 2.0, 3.0, 4.0]).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn unit_two_sphere_curvature() {
        let pkg = curvature_package(&sphere2(), &[0.9, 0.4]).unwrap();
        assert!((pkg.scalar - 2.0).abs() < 1e-12);
        // ρ = g
        assert!(pkg.ricci.distance(&pkg.g).unwrap() < 1e-12);
    }

    #[test]
    fn jet_inverse_matches_numeric_inverse_derivative() {
        let m = zoo("fubini_study_cpn", &ZooParams::with_n(2)).unwrap();
        let p = [0.2, -0.1, 0.3, 0.05];
        let conn = connection(&m, &p, 3).unwrap();
        // ∂_0 (g g⁻¹) = 0
        let d = 4;
        for i in 0..d {
            for k in 0..d {
                let mut acc = Jet::zero(d, 2);
                for l in 0..d {
                    acc.fused_mul_add(&conn.g[i][l], &conn.g_inv[l][k]);
                }
                let expected = if i == k { 1.0 } else { 0.0 };
                assert!((acc.value() - expected).abs() < 1e-14);
                assert!(acc.partial(&[0]).abs() < 1e-14);
                assert!(acc.partial(&[1, 2]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn point_curvature_matches_full_package() {
        for (name, p) in [
            ("s6_nearly_kahler", vec![0.2, 0.1, -0.3, 0.4, 0.0, 0.1]),
            ("fubini_study_cpn", vec![0.1, 0.4, -0.2, 0.3, 0.2, -0.5]),
        ] {
            let m = zoo(name, &ZooParams::default()).unwrap();
            let full = curvature_package(&m, &p).unwrap();
            let cheap = point_curvature(&m, &p).unwrap();
            assert!(full.r.distance(&cheap.r).unwrap() < 1e-12, "{name}");
            assert!(full.nabla_j.distance(&cheap.nabla_j).unwrap() < 1e-12, "{name}");
            assert!((full.scalar - cheap.scalar).abs() < 1e-10, "{name}");
        }
    }
}
