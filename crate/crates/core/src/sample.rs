//! Random almost Hermitian data for property checks and synthetic runs.

use crate::tensor::{PointTensor, Variance};
use nalgebra::DMatrix;
use rand::Rng;

use Variance::{Co, Contra};

/// `J e_a = e_{a+n}` on `ℝ^{2n}`.
pub fn standard_j(n: usize) -> PointTensor {
    let d = 2 * n;
    PointTensor::from_fn(d, vec![Contra, Co], |i| {
        let (row, col) = (i[0], i[1]);
        if col < n && row == col + n {
            1.0
        } else if col >= n && row + n == col {
            -1.0
        } else {
            0.0
        }
    })
}

pub fn identity_metric(d: usize) -> PointTensor {
    PointTensor::from_fn(d, vec![Co, Co], |i| if i[0] == i[1] { 1.0 } else { 0.0 })
}

pub fn inverse_metric(g: &PointTensor) -> Option<PointTensor> {
    let d = g.dim();
    let inv = DMatrix::from_row_slice(d, d, g.data()).try_inverse()?;
    Some(PointTensor::from_fn(d, vec![Contra, Contra], |i| inv[(i[0], i[1])]))
}

/// Random compatible pair: the columns of a random well-conditioned `P` are
/// declared orthonormal and `J = P J₀ P⁻¹`, so `g = P⁻ᵀ P⁻¹`.
pub fn random_hermitian_pair<R: Rng>(rng: &mut R, n: usize) -> (PointTensor, PointTensor) {
    let d = 2 * n;
    let p = DMatrix::from_fn(d, d, |i, k| {
        rng.gen_range(-0.5..0.5) + if i == k { 1.5 } else { 0.0 }
    });
    let p_inv = p.clone().try_inverse().expect("diagonally dominant");
    let j0 = DMatrix::from_row_slice(d, d, standard_j(n).data());
    let j = &p * j0 * &p_inv;
    let g = p_inv.transpose() * &p_inv;
    (
        PointTensor::from_fn(d, vec![Co, Co], |i| g[(i[0], i[1])]),
        PointTensor::from_fn(d, vec![Contra, Co], |i| j[(i[0], i[1])]),
    )
}

/// Random symmetric `T` with `T(Jx,Jy) = T(x,y)`.
pub fn random_hybrid<R: Rng>(rng: &mut R, j: &PointTensor) -> PointTensor {
    let d = j.dim();
    let mut s = PointTensor::zeros(d, vec![Co, Co]);
    for a in 0..d {
        for b in a..d {
            let v = rng.gen_range(-1.0..1.0);
            s.set(&[a, b], v);
            s.set(&[b, a], v);
        }
    }
    let sjj = s
        .precompose(0, j)
        .and_then(|t| t.precompose(1, j))
        .expect("matching shapes");
    s.add(&sjj).expect("matching shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_pairs_are_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let (g, j) = random_hermitian_pair(&mut rng, 3);
            let jm = DMatrix::from_row_slice(6, 6, j.data());
            let gm = DMatrix::from_row_slice(6, 6, g.data());
            assert!((&jm * &jm + DMatrix::identity(6, 6)).amax() < 1e-12);
            assert!((jm.transpose() * &gm * &jm - &gm).amax() < 1e-12);
            let t = random_hybrid(&mut rng, &j);
            let tjj = t.precompose(0, &j).unwrap().precompose(1, &j).unwrap();
            assert!(t.distance(&tjj).unwrap() < 1e-12);
        }
    }
}
