//! Dense pointwise tensors: contraction, index gymnastics, symmetry
//! diagnostics and complex-multilinear evaluation.
//!
//! Entries are row-major over slots; slot indices in this API are zero-based.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("slot {slot} out of range for degree {degree}")]
    SlotOutOfRange { slot: usize, degree: usize },
    #[error("contraction slots must differ (got {0} twice)")]
    SameSlot(usize),
    #[error("contracting two {0:?} slots needs a metric")]
    MissingMetric(Variance),
    #[error("metric has wrong shape or variance for this contraction")]
    BadMetric,
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operation needs degree {needed}, tensor has degree {degree}")]
    IncompatibleDegree { needed: usize, degree: usize },
    #[error("slot {0} has the wrong variance for this operation")]
    VarianceMismatch(usize),
    #[error("entry count {got} does not match dim^degree = {expected}")]
    EntryCount { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variance {
    /// Lower index.
    Co,
    /// Upper index.
    Contra,
}

/// Dense tensor at a single point of a `dim`-dimensional chart.
#[derive(Clone, Debug, PartialEq)]
pub struct PointTensor {
    dim: usize,
    variance: Vec<Variance>,
    data: Vec<f64>,
}

impl PointTensor {
    pub fn new(dim: usize, variance: Vec<Variance>, data: Vec<f64>) -> Result<Self, TensorError> {
        let expected = dim.pow(variance.len() as u32);
        if data.len() != expected {
            return Err(TensorError::EntryCount {
                expected,
                got: data.len(),
            });
        }
        Ok(PointTensor {
            dim,
            variance,
            data,
        })
    }

    pub fn zeros(dim: usize, variance: Vec<Variance>) -> Self {
        let n = dim.pow(variance.len() as u32);
        PointTensor {
            dim,
            variance,
            data: vec![0.0; n],
        }
    }

    /// All-covariant zero tensor.
    pub fn covariant(dim: usize, degree: usize) -> Self {
        Self::zeros(dim, vec![Variance::Co; degree])
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        PointTensor {
            dim,
            variance: Vec::new(),
            data: vec![value],
        }
    }

    pub fn from_fn(dim: usize, variance: Vec<Variance>, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Self::zeros(dim, variance);
        let degree = t.degree();
        let mut idx = vec![0usize; degree];
        for slot in t.data.iter_mut() {
            *slot = f(&idx);
            increment(&mut idx, dim);
        }
        t
    }

    /// Degree-2 tensor from a row-major matrix.
    pub fn from_matrix(variance: [Variance; 2], rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, variance.to_vec(), |i| rows[i[0]][i[1]])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.degree());
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    /// Value of a degree-0 tensor.
    pub fn value(&self) -> f64 {
        self.data[0]
    }

    /// Row-major matrix view of a degree-2 tensor.
    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        assert_eq!(self.degree(), 2);
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_same_shape(&self, other: &PointTensor) -> Result<(), TensorError> {
        if self.dim != other.dim {
            return Err(TensorError::DimensionMismatch(self.dim, other.dim));
        }
        if self.degree() != other.degree() {
            return Err(TensorError::IncompatibleDegree {
                needed: self.degree(),
                degree: other.degree(),
            });
        }
        Ok(())
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &PointTensor, b: f64) -> Result<PointTensor, TensorError> {
        self.check_same_shape(other)?;
        Ok(PointTensor {
            dim: self.dim,
            variance: self.variance.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn sub(&self, other: &PointTensor) -> Result<PointTensor, TensorError> {
        self.lin_comb(1.0, other, -1.0)
    }

    pub fn add(&self, other: &PointTensor) -> Result<PointTensor, TensorError> {
        self.lin_comb(1.0, other, 1.0)
    }

    pub fn scale(&self, factor: f64) -> PointTensor {
        PointTensor {
            dim: self.dim,
            variance: self.variance.clone(),
            data: self.data.iter().map(|x| factor * x).collect(),
        }
    }

    /// Max-norm of `self - other`.
    pub fn distance(&self, other: &PointTensor) -> Result<f64, TensorError> {
        Ok(self.sub(other)?.max_norm())
    }

    /// Reorders slots: slot `k` of the result is slot `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> PointTensor {
        assert_eq!(perm.len(), self.degree());
        let variance = perm.iter().map(|&p| self.variance[p]).collect();
        let mut src = vec![0usize; perm.len()];
        PointTensor::from_fn(self.dim, variance, |idx| {
            for (k, &p) in perm.iter().enumerate() {
                src[p] = idx[k];
            }
            self.get(&src)
        })
    }

    /// Trace over two slots; `metric` supplies `g⁻¹` (two covariant slots) or
    /// `g` (two contravariant slots) and is ignored for a mixed pair.
    pub fn contract(
        &self,
        slot_a: usize,
        slot_b: usize,
        metric: Option<&PointTensor>,
    ) -> Result<PointTensor, TensorError> {
        let degree = self.degree();
        for s in [slot_a, slot_b] {
            if s >= degree {
                return Err(TensorError::SlotOutOfRange { slot: s, degree });
            }
        }
        if slot_a == slot_b {
            return Err(TensorError::SameSlot(slot_a));
        }
        let (va, vb) = (self.variance[slot_a], self.variance[slot_b]);
        let pairing: Option<&PointTensor> = if va == vb {
            let m = metric.ok_or(TensorError::MissingMetric(va))?;
            let wanted = match va {
                Variance::Co => Variance::Contra,
                Variance::Contra => Variance::Co,
            };
            if m.degree() != 2 || m.dim != self.dim || m.variance.iter().any(|&v| v != wanted) {
                return Err(TensorError::BadMetric);
            }
            Some(m)
        } else {
            None
        };

        let keep: Vec<usize> = (0..degree).filter(|&s| s != slot_a && s != slot_b).collect();
        let variance = keep.iter().map(|&s| self.variance[s]).collect();
        let dim = self.dim;
        let mut full = vec![0usize; degree];
        Ok(PointTensor::from_fn(dim, variance, |idx| {
            for (k, &s) in keep.iter().enumerate() {
                full[s] = idx[k];
            }
            let mut sum = 0.0;
            match pairing {
                Some(m) => {
                    for i in 0..dim {
                        for j in 0..dim {
                            let w = m.data[i * dim + j];
                            if w != 0.0 {
                                full[slot_a] = i;
                                full[slot_b] = j;
                                sum += w * self.get(&full);
                            }
                        }
                    }
                }
                None => {
                    for i in 0..dim {
                        full[slot_a] = i;
                        full[slot_b] = i;
                        sum += self.get(&full);
                    }
                }
            }
            sum
        }))
    }

    fn reindex_with(&self, slot: usize, matrix: &PointTensor, new_variance: Variance) -> PointTensor {
        let mut variance = self.variance.clone();
        variance[slot] = new_variance;
        let dim = self.dim;
        let mut src = vec![0usize; self.degree()];
        PointTensor::from_fn(dim, variance, |idx| {
            src.copy_from_slice(idx);
            let mut sum = 0.0;
            for k in 0..dim {
                src[slot] = k;
                sum += matrix.data[idx[slot] * dim + k] * self.get(&src);
            }
            sum
        })
    }

    /// Feeds a (1,1) tensor into one covariant slot:
    /// `T'(…, e_a, …) = T(…, M e_a, …) = Σ_c M^c_a T(…, e_c, …)`.
    pub fn precompose(&self, slot: usize, m: &PointTensor) -> Result<PointTensor, TensorError> {
        if slot >= self.degree() {
            return Err(TensorError::SlotOutOfRange {
                slot,
                degree: self.degree(),
            });
        }
        if self.variance[slot] != Variance::Co {
            return Err(TensorError::VarianceMismatch(slot));
        }
        if m.variance != [Variance::Contra, Variance::Co] || m.dim != self.dim {
            return Err(TensorError::BadMetric);
        }
        let dim = self.dim;
        let mut src = vec![0usize; self.degree()];
        Ok(PointTensor::from_fn(dim, self.variance.clone(), |idx| {
            src.copy_from_slice(idx);
            let mut sum = 0.0;
            for c in 0..dim {
                let w = m.data[c * dim + idx[slot]];
                if w != 0.0 {
                    src[slot] = c;
                    sum += w * self.get(&src);
                }
            }
            sum
        }))
    }

    /// Raises a covariant slot with `g⁻¹`.
    pub fn raise(&self, slot: usize, g_inv: &PointTensor) -> Result<PointTensor, TensorError> {
        if slot >= self.degree() {
            return Err(TensorError::SlotOutOfRange {
                slot,
                degree: self.degree(),
            });
        }
        if self.variance[slot] != Variance::Co {
            return Err(TensorError::VarianceMismatch(slot));
        }
        if g_inv.degree() != 2 || g_inv.dim != self.dim {
            return Err(TensorError::BadMetric);
        }
        Ok(self.reindex_with(slot, g_inv, Variance::Contra))
    }

    /// Lowers a contravariant slot with `g`.
    pub fn lower(&self, slot: usize, g: &PointTensor) -> Result<PointTensor, TensorError> {
        if slot >= self.degree() {
            return Err(TensorError::SlotOutOfRange {
                slot,
                degree: self.degree(),
            });
        }
        if self.variance[slot] != Variance::Contra {
            return Err(TensorError::VarianceMismatch(slot));
        }
        if g.degree() != 2 || g.dim != self.dim {
            return Err(TensorError::BadMetric);
        }
        Ok(self.reindex_with(slot, g, Variance::Co))
    }

    /// Complex-multilinear extension evaluated on the given vectors. Every
    /// slot must be covariant.
    pub fn complex_eval(&self, args: &[ComplexVector]) -> Result<Complex64, TensorError> {
        if args.len() != self.degree() {
            return Err(TensorError::ArityMismatch {
                expected: self.degree(),
                got: args.len(),
            });
        }
        for (slot, (v, a)) in self.variance.iter().zip(args).enumerate() {
            if *v != Variance::Co {
                return Err(TensorError::VarianceMismatch(slot));
            }
            if a.dim() != self.dim {
                return Err(TensorError::DimensionMismatch(self.dim, a.dim()));
            }
        }
        let dim = self.dim;
        let Some(last) = args.last() else {
            return Ok(Complex64::new(self.data[0], 0.0));
        };
        // contract the trailing slot against real data first
        let mut cur: Vec<Complex64> = self
            .data
            .chunks_exact(dim)
            .map(|row| row.iter().zip(&last.0).map(|(t, z)| z * t).sum())
            .collect();
        for arg in args[..args.len() - 1].iter().rev() {
            cur = cur
                .chunks_exact(dim)
                .map(|row| row.iter().zip(&arg.0).map(|(t, z)| t * z).sum())
                .collect();
        }
        Ok(cur[0])
    }

    /// Real multilinear evaluation.
    pub fn eval(&self, args: &[&[f64]]) -> Result<f64, TensorError> {
        let cargs: Vec<ComplexVector> = args.iter().map(|a| ComplexVector::from_real(a)).collect();
        Ok(self.complex_eval(&cargs)?.re)
    }

    /// Applies a (1,1) tensor `T^i_j` to a vector: `(Tv)^i = T^i_j v^j`.
    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector, TensorError> {
        if self.variance != [Variance::Contra, Variance::Co] {
            return Err(TensorError::VarianceMismatch(0));
        }
        if v.dim() != self.dim {
            return Err(TensorError::DimensionMismatch(self.dim, v.dim()));
        }
        let dim = self.dim;
        Ok(ComplexVector(
            (0..dim)
                .map(|i| (0..dim).map(|j| v.0[j] * self.data[i * dim + j]).sum())
                .collect(),
        ))
    }

    /// Real version of [`apply`](Self::apply).
    pub fn apply_real(&self, v: &[f64]) -> Vec<f64> {
        let dim = self.dim;
        (0..dim)
            .map(|i| (0..dim).map(|j| self.data[i * dim + j] * v[j]).sum())
            .collect()
    }

    /// Max-norm of the combination that vanishes when the symmetry holds.
    pub fn symmetry_defect(&self, kind: SymmetryKind) -> Result<f64, TensorError> {
        let degree = self.degree();
        let check_slot = |s: usize| {
            if s >= degree {
                Err(TensorError::SlotOutOfRange { slot: s, degree })
            } else {
                Ok(())
            }
        };
        let swapped = |a: usize, b: usize| {
            let mut perm: Vec<usize> = (0..degree).collect();
            perm.swap(a, b);
            self.permute(&perm)
        };
        match kind {
            SymmetryKind::Antisym(a, b) => {
                check_slot(a)?;
                check_slot(b)?;
                Ok(self.add(&swapped(a, b))?.max_norm())
            }
            SymmetryKind::Sym(a, b) => {
                check_slot(a)?;
                check_slot(b)?;
                Ok(self.sub(&swapped(a, b))?.max_norm())
            }
            SymmetryKind::PairExchange => {
                if degree != 4 {
                    return Err(TensorError::IncompatibleDegree { needed: 4, degree });
                }
                Ok(self.sub(&self.permute(&[2, 3, 0, 1]))?.max_norm())
            }
            SymmetryKind::FirstBianchi => {
                if degree != 4 {
                    return Err(TensorError::IncompatibleDegree { needed: 4, degree });
                }
                let d = self.dim;
                let mut worst: f64 = 0.0;
                for x in 0..d {
                    for y in 0..d {
                        for z in 0..d {
                            for u in 0..d {
                                let s = self.get(&[x, y, z, u])
                                    + self.get(&[y, z, x, u])
                                    + self.get(&[z, x, y, u]);
                                worst = worst.max(s.abs());
                            }
                        }
                    }
                }
                Ok(worst)
            }
        }
    }
}

/// Symmetry checked by [`PointTensor::symmetry_defect`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryKind {
    Antisym(usize, usize),
    Sym(usize, usize),
    /// `T(x,y,z,u) = T(z,u,x,y)`
    PairExchange,
    /// `T(x,y,z,u) + T(y,z,x,u) + T(z,x,y,u) = 0`
    FirstBianchi,
}

fn increment(idx: &mut [usize], dim: usize) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dim {
            return;
        }
        idx[k] = 0;
    }
}

/// Tangent vector with complex components.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(pub Vec<Complex64>);

impl ComplexVector {
    pub fn from_real(v: &[f64]) -> Self {
        ComplexVector(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `re + i·im`
    pub fn from_parts(re: &[f64], im: &[f64]) -> Self {
        ComplexVector(
            re.iter()
                .zip(im)
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn conj(&self) -> Self {
        ComplexVector(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexVector(self.0.iter().map(|z| z * c).collect())
    }

    pub fn add(&self, other: &ComplexVector) -> Self {
        ComplexVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ComplexVector) -> Self {
        ComplexVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn euclid(dim: usize) -> PointTensor {
        PointTensor::from_fn(dim, vec![Variance::Co; 2], |i| (i[0] == i[1]) as u8 as f64)
    }

    fn euclid_inv(dim: usize) -> PointTensor {
        PointTensor::from_fn(dim, vec![Variance::Contra; 2], |i| {
            (i[0] == i[1]) as u8 as f64
        })
    }

    fn standard_j(n: usize) -> PointTensor {
        // J e_a = e_{a+n}
        PointTensor::from_fn(2 * n, vec![Variance::Contra, Variance::Co], |i| {
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

    #[test]
    fn trace_of_metric_is_dimension() {
        let g = euclid(6);
        let tr = g.contract(0, 1, Some(&euclid_inv(6))).unwrap();
        assert_eq!(tr.degree(), 0);
        assert_eq!(tr.value(), 6.0);
    }

    #[test]
    fn zero_tensor_contracts_to_zero() {
        let r = PointTensor::covariant(6, 4);
        let c = r.contract(1, 2, Some(&euclid_inv(6))).unwrap();
        assert_eq!(c.max_norm(), 0.0);
    }

    #[test]
    fn contraction_errors() {
        let r = PointTensor::covariant(4, 4);
        assert_eq!(
            r.contract(1, 7, None),
            Err(TensorError::SlotOutOfRange { slot: 7, degree: 4 })
        );
        assert_eq!(r.contract(2, 2, None), Err(TensorError::SameSlot(2)));
        assert_eq!(
            r.contract(0, 1, None),
            Err(TensorError::MissingMetric(Variance::Co))
        );
        assert_eq!(r.contract(0, 1, Some(&euclid(4))), Err(TensorError::BadMetric));
    }

    #[test]
    fn mixed_slots_contract_without_metric() {
        let j = standard_j(3);
        assert_eq!(j.contract(0, 1, None).unwrap().value(), 0.0);
    }

    #[test]
    fn raise_then_lower_is_identity() {
        let g = PointTensor::from_matrix(
            [Variance::Co, Variance::Co],
            &[vec![2.0, 0.5], vec![0.5, 1.0]],
        );
        let det = 2.0 - 0.25;
        let g_inv = PointTensor::from_matrix(
            [Variance::Contra, Variance::Contra],
            &[vec![1.0 / det, -0.5 / det], vec![-0.5 / det, 2.0 / det]],
        );
        let t = PointTensor::from_fn(2, vec![Variance::Co; 3], |i| (i[0] + 2 * i[1] + 3 * i[2]) as f64);
        let back = t.raise(1, &g_inv).unwrap().lower(1, &g).unwrap();
        assert!(back.distance(&t).unwrap() < 1e-14);
        assert_eq!(t.lower(0, &g), Err(TensorError::VarianceMismatch(0)));
    }

    #[test]
    fn metric_on_complexified_frame() {
        let n = 3;
        let g = euclid(2 * n);
        let j = standard_j(n);
        let mut e = vec![0.0; 2 * n];
        e[0] = 1.0;
        let je = j.apply_real(&e);
        let z = ComplexVector::from_parts(&e, &je.iter().map(|x| -x).collect::<Vec<_>>());
        let zbar = z.conj();
        assert_eq!(g.complex_eval(&[z.clone(), zbar]).unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(g.complex_eval(&[z.clone(), z.clone()]).unwrap(), Complex64::new(0.0, 0.0));
        // J Z = i Z
        let jz = j.apply(&z).unwrap();
        assert!(jz.sub(&z.scale(Complex64::i())).max_norm() < 1e-15);
        assert!(matches!(
            g.complex_eval(&[z]),
            Err(TensorError::ArityMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn symmetry_defects() {
        let g = euclid(4);
        assert_eq!(g.symmetry_defect(SymmetryKind::Sym(0, 1)).unwrap(), 0.0);
        let mut t = PointTensor::from_fn(4, vec![Variance::Co; 2], |i| i[0] as f64 - i[1] as f64);
        assert_eq!(t.symmetry_defect(SymmetryKind::Antisym(0, 1)).unwrap(), 0.0);
        t.set(&[1, 2], t.get(&[1, 2]) + 1e-3);
        let d = t.symmetry_defect(SymmetryKind::Antisym(0, 1)).unwrap();
        assert!((d - 1e-3).abs() < 1e-15);
        assert!(matches!(
            g.symmetry_defect(SymmetryKind::PairExchange),
            Err(TensorError::IncompatibleDegree { needed: 4, degree: 2 })
        ));
    }

    fn random_tensor(dim: usize, degree: usize, seed: &[f64]) -> PointTensor {
        PointTensor::from_fn(dim, vec![Variance::Co; degree], |i| {
            let k = i.iter().fold(0, |a, &x| a * dim + x);
            seed[k % seed.len()] * ((k as f64) * 0.37).sin()
        })
    }

    proptest! {
        #[test]
        fn contraction_is_linear(
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
            s1 in prop::collection::vec(-1.0f64..1.0, 7),
            s2 in prop::collection::vec(-1.0f64..1.0, 5),
        ) {
            let t1 = random_tensor(4, 3, &s1);
            let t2 = random_tensor(4, 3, &s2);
            let m = euclid_inv(4);
            let lhs = t1.lin_comb(a, &t2, b).unwrap().contract(0, 2, Some(&m)).unwrap();
            let rhs = t1.contract(0, 2, Some(&m)).unwrap()
                .lin_comb(a, &t2.contract(0, 2, Some(&m)).unwrap(), b).unwrap();
            prop_assert!(lhs.distance(&rhs).unwrap() < 1e-12);
        }

        #[test]
        fn conjugate_arguments_conjugate_value(
            s in prop::collection::vec(-1.0f64..1.0, 9),
            v in prop::collection::vec(-1.0f64..1.0, 24),
        ) {
            let t = random_tensor(4, 3, &s);
            let args: Vec<ComplexVector> = (0..3)
                .map(|k| ComplexVector::from_parts(&v[8 * k..8 * k + 4], &v[8 * k + 4..8 * k + 8]))
                .collect();
            let conj_args: Vec<ComplexVector> = args.iter().map(|a| a.conj()).collect();
            let z = t.complex_eval(&args).unwrap();
            let w = t.complex_eval(&conj_args).unwrap();
            prop_assert!((z.conj() - w).norm() < 1e-12);
        }

        #[test]
        fn real_arguments_match_real_evaluation(
            s in prop::collection::vec(-1.0f64..1.0, 5),
            v in prop::collection::vec(-1.0f64..1.0, 12),
        ) {
            let t = random_tensor(4, 3, &s);
            let args: Vec<ComplexVector> = v.chunks(4).map(ComplexVector::from_real).collect();
            let z = t.complex_eval(&args).unwrap();
            let mut direct = 0.0;
            for i in 0..4 { for j in 0..4 { for k in 0..4 {
                direct += t.get(&[i, j, k]) * v[i] * v[4 + j] * v[8 + k];
            }}}
            prop_assert!((z.re - direct).abs() < 1e-13);
            prop_assert_eq!(z.im, 0.0);
        }
    }
}
