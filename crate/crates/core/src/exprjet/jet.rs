use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Highest derivative order the chart machinery asks for.
pub const MAX_ORDER: usize = 3;

/// Index tables for truncated Taylor polynomials in `nvars` variables up to
/// total degree `order`.
///
/// Multi-indices are laid out in graded-lexicographic order: by total degree,
/// then lexicographically descending, so `x1^2` precedes `x1*x2` precedes
/// `x2^2`. Code that iterates coefficients may rely on this ordering.
#[derive(Debug)]
pub struct JetLayout {
    nvars: usize,
    order: usize,
    indices: Vec<Vec<u8>>,
    lookup: HashMap<Vec<u8>, usize>,
    factorials: Vec<f64>,
    // (a, b, out) with indices[a] + indices[b] = indices[out]
    products: Vec<(u32, u32, u32)>,
    // per variable: (source index in this layout, target index in order-1 layout, factor)
    shifts: Vec<Vec<(u32, u32, f64)>>,
}

impl JetLayout {
    fn build(nvars: usize, order: usize) -> JetLayout {
        let mut indices = Vec::new();
        for degree in 0..=order {
            let mut current = vec![0u8; nvars];
            push_degree(&mut indices, &mut current, 0, degree);
        }
        let lookup: HashMap<Vec<u8>, usize> = indices
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let factorials = indices
            .iter()
            .map(|m| m.iter().map(|&k| factorial(k as usize)).product())
            .collect();

        let mut products = Vec::new();
        for (a, ma) in indices.iter().enumerate() {
            let da: usize = ma.iter().map(|&k| k as usize).sum();
            for (b, mb) in indices.iter().enumerate() {
                let db: usize = mb.iter().map(|&k| k as usize).sum();
                if da + db > order {
                    continue;
                }
                let sum: Vec<u8> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                products.push((a as u32, b as u32, lookup[&sum] as u32));
            }
        }

        let mut shifts = vec![Vec::new(); nvars];
        if order > 0 {
            let mut lower = Vec::new();
            for degree in 0..order {
                let mut current = vec![0u8; nvars];
                push_degree(&mut lower, &mut current, 0, degree);
            }
            for (var, table) in shifts.iter_mut().enumerate() {
                for (target, beta) in lower.iter().enumerate() {
                    let mut raised = beta.clone();
                    raised[var] += 1;
                    let source = lookup[&raised];
                    table.push((source as u32, target as u32, raised[var] as f64));
                }
            }
        }

        JetLayout {
            nvars,
            order,
            indices,
            lookup,
            factorials,
            products,
            shifts,
        }
    }

    /// Shared layout for `(nvars, order)`; built once per process.
    pub fn get(nvars: usize, order: usize) -> Arc<JetLayout> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<JetLayout>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry((nvars, order))
            .or_insert_with(|| Arc::new(JetLayout::build(nvars, order)))
            .clone()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Multi-indices in storage order.
    pub fn multi_indices(&self) -> &[Vec<u8>] {
        &self.indices
    }

    pub fn position(&self, multi_index: &[u8]) -> Option<usize> {
        self.lookup.get(multi_index).copied()
    }
}

fn push_degree(out: &mut Vec<Vec<u8>>, current: &mut Vec<u8>, var: usize, remaining: usize) {
    if var + 1 == current.len() {
        current[var] = remaining as u8;
        out.push(current.clone());
        current[var] = 0;
        return;
    }
    if current.is_empty() {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=remaining).rev() {
        current[var] = k as u8;
        push_degree(out, current, var + 1, remaining - k);
    }
    current[var] = 0;
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Truncated multivariate Taylor expansion of a scalar field at a point.
///
/// Internally the Taylor coefficients `∂^α f / α!` are stored; the accessors
/// return plain partial derivatives.
#[derive(Clone, Debug)]
pub struct Jet {
    layout: Arc<JetLayout>,
    coeffs: Vec<f64>,
}

impl PartialEq for Jet {
    fn eq(&self, other: &Jet) -> bool {
        self.layout.nvars == other.layout.nvars
            && self.layout.order == other.layout.order
            && self.coeffs == other.coeffs
    }
}

impl Jet {
    pub fn constant(nvars: usize, order: usize, value: f64) -> Jet {
        let layout = JetLayout::get(nvars, order);
        let mut coeffs = vec![0.0; layout.len()];
        coeffs[0] = value;
        Jet { layout, coeffs }
    }

    /// The coordinate function `x_{var+1}` expanded at `value`.
    pub fn variable(nvars: usize, order: usize, var: usize, value: f64) -> Jet {
        let mut jet = Jet::constant(nvars, order, value);
        if order > 0 {
            let mut m = vec![0u8; nvars];
            m[var] = 1;
            let pos = jet.layout.position(&m).expect("first-order index");
            jet.coeffs[pos] = 1.0;
        }
        jet
    }

    pub fn zero(nvars: usize, order: usize) -> Jet {
        Jet::constant(nvars, order, 0.0)
    }

    /// Zero jet sharing this jet's layout.
    pub fn zeros_like(&self) -> Jet {
        Jet {
            layout: self.layout.clone(),
            coeffs: vec![0.0; self.coeffs.len()],
        }
    }

    pub fn layout(&self) -> &JetLayout {
        &self.layout
    }

    pub fn nvars(&self) -> usize {
        self.layout.nvars
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Taylor coefficients in layout order.
    pub fn taylor_coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Partial derivative `∂^α f` for a multi-index of exponents.
    pub fn derivative(&self, multi_index: &[u8]) -> f64 {
        match self.layout.position(multi_index) {
            Some(pos) => self.coeffs[pos] * self.layout.factorials[pos],
            None => panic!(
                "multi-index {multi_index:?} outside jet of order {}",
                self.layout.order
            ),
        }
    }

    /// Partial derivative along a list of zero-based variables, e.g. `[0, 0, 1]`
    /// is `∂₁∂₁∂₂`.
    pub fn partial(&self, vars: &[usize]) -> f64 {
        let mut m = vec![0u8; self.layout.nvars];
        for &v in vars {
            m[v] += 1;
        }
        self.derivative(&m)
    }

    /// All partial derivatives in layout order.
    pub fn derivatives(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .zip(&self.layout.factorials)
            .map(|(c, f)| c * f)
            .collect()
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.layout.order {
            return self.clone();
        }
        let layout = JetLayout::get(self.layout.nvars, order);
        let coeffs = self.coeffs[..layout.len()].to_vec();
        Jet { layout, coeffs }
    }

    /// `∂f/∂x_{var+1}` as a jet of one lower order.
    pub fn d(&self, var: usize) -> Jet {
        assert!(self.layout.order > 0, "cannot differentiate an order-0 jet");
        let layout = JetLayout::get(self.layout.nvars, self.layout.order - 1);
        let mut coeffs = vec![0.0; layout.len()];
        for &(src, dst, factor) in &self.layout.shifts[var] {
            coeffs[dst as usize] = factor * self.coeffs[src as usize];
        }
        Jet { layout, coeffs }
    }

    fn aligned(&self, other: &Jet) -> (Jet, Jet) {
        assert_eq!(self.layout.nvars, other.layout.nvars, "jet variable count");
        let order = self.layout.order.min(other.layout.order);
        (self.truncate(order), other.truncate(order))
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let (mut a, b) = self.aligned(other);
        a.coeffs.iter_mut().zip(&b.coeffs).for_each(|(x, y)| *x += y);
        a
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        let (mut a, b) = self.aligned(other);
        a.coeffs.iter_mut().zip(&b.coeffs).for_each(|(x, y)| *x -= y);
        a
    }

    pub fn scale(&self, factor: f64) -> Jet {
        Jet {
            layout: self.layout.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn neg(&self) -> Jet {
        self.scale(-1.0)
    }

    pub fn add_scalar(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Accumulates `self += a * b` at `self`'s order.
    pub fn fused_mul_add(&mut self, a: &Jet, b: &Jet) {
        let order = self.layout.order;
        assert!(a.layout.order >= order && b.layout.order >= order);
        let layout = self.layout.clone();
        for &(i, j, k) in &layout.products {
            self.coeffs[k as usize] += a.coeffs[i as usize] * b.coeffs[j as usize];
        }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let (a, b) = self.aligned(other);
        let mut out = a.zeros_like();
        for &(i, j, k) in &a.layout.products {
            out.coeffs[k as usize] += a.coeffs[i as usize] * b.coeffs[j as usize];
        }
        out
    }

    /// Composition `f ∘ self` from the univariate derivatives
    /// `f(u0), f'(u0), …` at the jet's value.
    pub fn compose(&self, derivs: &[f64]) -> Jet {
        let order = self.layout.order;
        assert!(derivs.len() > order, "need {} derivatives", order + 1);
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        let mut out = self.zeros_like();
        out.coeffs[0] = derivs[0];
        let mut power = self.zeros_like();
        power.coeffs[0] = 1.0;
        let mut k_fact = 1.0;
        for (k, d) in derivs.iter().enumerate().take(order + 1).skip(1) {
            power = power.mul(&h);
            k_fact *= k as f64;
            let c = d / k_fact;
            out.coeffs
                .iter_mut()
                .zip(&power.coeffs)
                .for_each(|(o, p)| *o += c * p);
        }
        out
    }

    /// `1/self`; the caller guarantees a nonzero value.
    pub fn recip(&self) -> Jet {
        let u = self.value();
        let r = 1.0 / u;
        self.compose(&[r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn div(&self, other: &Jet) -> Jet {
        self.mul(&other.recip())
    }

    pub fn powi(&self, k: u32) -> Jet {
        let mut result = self.zeros_like();
        result.coeffs[0] = 1.0;
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose(&[s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose(&[c, -s, -c, s])
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&[e, e, e, e])
    }

    /// Square root; the caller guarantees a positive value.
    pub fn sqrt(&self) -> Jet {
        let u = self.value();
        let s = u.sqrt();
        self.compose(&[
            s,
            0.5 / s,
            -0.25 / (s * u),
            0.375 / (s * u * u),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_layout() {
        let layout = JetLayout::get(2, 2);
        let expected: Vec<Vec<u8>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![2, 0],
            vec![1, 1],
            vec![0, 2],
        ];
        assert_eq!(layout.multi_indices(), expected.as_slice());
        assert_eq!(JetLayout::get(6, 3).len(), 84);
    }

    #[test]
    fn product_matches_leibniz() {
        // f = x*y at (3, 5)
        let x = Jet::variable(2, 2, 0, 3.0);
        let y = Jet::variable(2, 2, 1, 5.0);
        let f = x.mul(&y);
        assert_eq!(f.value(), 15.0);
        assert_eq!(f.partial(&[0]), 5.0);
        assert_eq!(f.partial(&[1]), 3.0);
        assert_eq!(f.partial(&[0, 1]), 1.0);
        assert_eq!(f.partial(&[0, 0]), 0.0);
    }

    #[test]
    fn derivative_lowers_order() {
        // f = x^3 at x = 2: f' = 12, f'' = 12, f''' = 6
        let x = Jet::variable(1, 3, 0, 2.0);
        let f = x.powi(3);
        let df = f.d(0);
        assert_eq!(df.order(), 2);
        assert!((df.value() - 12.0).abs() < 1e-12);
        assert!((df.partial(&[0]) - 12.0).abs() < 1e-12);
        assert!((df.partial(&[0, 0]) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_orders_truncate() {
        let a = Jet::variable(1, 3, 0, 1.0);
        let b = Jet::variable(1, 1, 0, 1.0);
        assert_eq!(a.mul(&b).order(), 1);
    }

    #[test]
    fn sqrt_and_recip_third_derivatives() {
        let x = Jet::variable(1, 3, 0, 4.0);
        let s = x.sqrt();
        // d^3/dx^3 sqrt(x) = 3/8 x^{-5/2} = 3/256 at x = 4
        assert!((s.partial(&[0, 0, 0]) - 3.0 / 256.0).abs() < 1e-15);
        let r = x.recip();
        // d^3/dx^3 (1/x) = -6/x^4
        assert!((r.partial(&[0, 0, 0]) + 6.0 / 256.0).abs() < 1e-15);
    }
}
