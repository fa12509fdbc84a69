//! Seven-dimensional cross product from the imaginary octonions.

/// Oriented triples `(i, j, k)` (zero-based) with `e_i × e_j = e_k`; every
/// cyclic rotation holds as well, and odd permutations flip the sign.
pub const OCTONION_TRIPLES: [(usize, usize, usize); 7] = [
    (0, 1, 2),
    (0, 3, 4),
    (0, 6, 5),
    (1, 3, 5),
    (1, 4, 6),
    (2, 3, 6),
    (2, 5, 4),
];

/// Signed structure constants `(i, j, k, ε)` with `(a × b)_k = Σ ε a_i b_j`.
pub fn structure_constants() -> Vec<(usize, usize, usize, f64)> {
    let mut out = Vec::with_capacity(42);
    for &(a, b, c) in &OCTONION_TRIPLES {
        for (i, j, k) in [(a, b, c), (b, c, a), (c, a, b)] {
            out.push((i, j, k, 1.0));
            out.push((j, i, k, -1.0));
        }
    }
    out
}

pub fn cross7(a: &[f64; 7], b: &[f64; 7]) -> [f64; 7] {
    let mut out = [0.0; 7];
    for (i, j, k, s) in structure_constants() {
        out[k] += s * a[i] * b[j];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[f64; 7], b: &[f64; 7]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn cross_product_norm_identity() {
        // |a×b|² = |a|²|b|² − (a·b)² characterises a 7-d cross product
        let a = [0.3, -1.2, 0.7, 0.1, 2.0, -0.4, 0.9];
        let b = [1.1, 0.2, -0.6, 0.8, -0.3, 1.5, 0.05];
        let c = cross7(&a, &b);
        let lhs = dot(&c, &c);
        let rhs = dot(&a, &a) * dot(&b, &b) - dot(&a, &b).powi(2);
        assert!((lhs - rhs).abs() < 1e-12);
        assert!(dot(&c, &a).abs() < 1e-14);
        assert!(dot(&c, &b).abs() < 1e-14);
    }

    #[test]
    fn every_index_pair_appears_once() {
        let mut seen = [[false; 7]; 7];
        for (i, j, _, _) in structure_constants() {
            assert!(!seen[i][j]);
            seen[i][j] = true;
        }
        assert_eq!(seen.iter().flatten().filter(|&&s| s).count(), 42);
    }
}
