//! Exact replay of the case analysis on the eigenvalues `μ`.
//!
//! Each case contributes homogeneous polynomial equations in
//! `μ_α, μ_β, μ_γ` (and `μ_δ` for the extension to `n > 3`). A case forces
//! `μ = 0` exactly when its ideal has the origin as the only common zero,
//! which a reduced Gröbner basis decides: every variable must have a pure
//! power among the leading monomials. Per variable, the engine reports
//! `μ_k = 0` when a power of `μ_k` reduces to zero modulo the basis.

use super::VerifyError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;

const NVARS: usize = 4;
const VAR_NAMES: [&str; NVARS] = ["μα", "μβ", "μγ", "μδ"];

type Mono = [u32; NVARS];

fn degree(m: &Mono) -> u32 {
    m.iter().sum()
}

/// Graded reverse lexicographic order.
fn grevlex(a: &Mono, b: &Mono) -> Ordering {
    match degree(a).cmp(&degree(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    for k in (0..NVARS).rev() {
        if a[k] != b[k] {
            return b[k].cmp(&a[k]);
        }
    }
    Ordering::Equal
}

fn divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn mono_div(a: &Mono, b: &Mono) -> Mono {
    std::array::from_fn(|k| a[k] - b[k])
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    std::array::from_fn(|k| a[k] + b[k])
}

fn lcm(a: &Mono, b: &Mono) -> Mono {
    std::array::from_fn(|k| a[k].max(b[k]))
}

/// Polynomial with rational coefficients, terms sorted by descending
/// grevlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    terms: Vec<(Mono, BigRational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn var(k: usize) -> Self {
        let mut m = [0; NVARS];
        m[k] = 1;
        Poly {
            terms: vec![(m, BigRational::one())],
        }
    }

    pub fn constant(c: i64) -> Self {
        Poly::from_terms(vec![([0; NVARS], BigRational::from_integer(BigInt::from(c)))])
    }

    fn from_terms(mut terms: Vec<(Mono, BigRational)>) -> Self {
        terms.sort_by(|a, b| grevlex(&b.0, &a.0));
        let mut out: Vec<(Mono, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn leading(&self) -> Option<&(Mono, BigRational)> {
        self.terms.first()
    }

    fn scale_shift(&self, c: &BigRational, m: &Mono) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (mono_mul(tm, m), tc * c))
                .collect(),
        }
    }

    fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                Poly {
                    terms: self.terms.iter().map(|(m, t)| (*m, t * &inv)).collect(),
                }
            }
        }
    }

    pub fn scale(&self, c: i64) -> Poly {
        let c = BigRational::from_integer(BigInt::from(c));
        Poly::from_terms(self.terms.iter().map(|(m, t)| (*m, t * &c)).collect())
    }

    /// Renames variable `from` to `to`.
    pub fn rename(&self, from: usize, to: usize) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = *m;
                    m2[from] = 0;
                    m2[to] += m[from];
                    (m2, c.clone())
                })
                .collect(),
        )
    }

    /// Variables with non-zero exponent somewhere.
    pub fn variables(&self) -> Vec<usize> {
        (0..NVARS)
            .filter(|&k| self.terms.iter().any(|(m, _)| m[k] > 0))
            .collect()
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        Poly::from_terms(self.terms.iter().chain(&o.terms).cloned().collect())
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .cloned()
                .chain(o.terms.iter().map(|(m, c)| (*m, -c)))
                .collect(),
        )
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                terms.push((mono_mul(a, b), ca * cb));
            }
        }
        Poly::from_terms(terms)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let is_const = degree(m) == 0;
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
            }
            for (k, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "{}", VAR_NAMES[k])?,
                    _ => write!(f, "{}^{e}", VAR_NAMES[k])?,
                }
            }
        }
        Ok(())
    }
}

fn reduce(f: &Poly, basis: &[Poly]) -> Poly {
    let mut p = f.clone();
    let mut rem: Vec<(Mono, BigRational)> = Vec::new();
    while let Some((lm, lc)) = p.leading().cloned() {
        let divisor = basis
            .iter()
            .find(|g| g.leading().is_some_and(|(gm, _)| divides(gm, &lm)));
        match divisor {
            Some(g) => {
                let (gm, gc) = g.leading().expect("non-zero divisor");
                let factor = &lc / gc;
                p = &p - &g.scale_shift(&factor, &mono_div(&lm, gm));
            }
            None => {
                rem.push((lm, lc));
                p.terms.remove(0);
            }
        }
    }
    Poly::from_terms(rem)
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let (fm, fc) = f.leading().expect("non-zero");
    let (gm, gc) = g.leading().expect("non-zero");
    let l = lcm(fm, gm);
    &f.scale_shift(&fc.recip(), &mono_div(&l, fm)) - &g.scale_shift(&gc.recip(), &mono_div(&l, gm))
}

/// Reduced Gröbner basis (grevlex, monic) by Buchberger's algorithm.
pub fn groebner_basis(generators: &[Poly]) -> Vec<Poly> {
    let mut basis: Vec<Poly> = generators
        .iter()
        .filter(|p| !p.is_zero())
        .map(Poly::monic)
        .collect();
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    while let Some((i, j)) = pairs.pop() {
        let (im, jm) = (basis[i].terms[0].0, basis[j].terms[0].0);
        // coprime leading monomials reduce to zero
        if mono_mul(&im, &jm) == lcm(&im, &jm) {
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            basis.push(r.monic());
            let k = basis.len() - 1;
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    // minimize
    let mut minimal: Vec<Poly> = Vec::new();
    for (k, p) in basis.iter().enumerate() {
        let lm = p.terms[0].0;
        let redundant = basis.iter().enumerate().any(|(l, q)| {
            let qm = q.terms[0].0;
            l != k && divides(&qm, &lm) && (qm != lm || l < k)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    // interreduce
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != k)
            .map(|(_, p)| p.clone())
            .collect();
        reduced.push(reduce(&minimal[k], &others).monic());
    }
    reduced.sort_by(|a, b| grevlex(&a.terms[0].0, &b.terms[0].0));
    reduced
}

const MAX_POWER: u32 = 16;

/// Variables among `vars` forced to vanish: `x^e` lies in the ideal for
/// some `e ≤ MAX_POWER`, checked by exact reduction modulo `basis`.
fn forced_zero(basis: &[Poly], vars: &[usize]) -> Vec<usize> {
    vars.iter()
        .copied()
        .filter(|&k| {
            let x = Poly::var(k);
            let mut power = x.clone();
            for _ in 0..MAX_POWER {
                if reduce(&power, basis).is_zero() {
                    return true;
                }
                power = &power * &x;
            }
            false
        })
        .collect()
}

/// The four families of `∇J` components, in the order the proof treats them
/// at its end: `g((∇_{Z_β}J)Z_β,Z_α)`, `g((∇_{Z_β̄}J)Z_β,Z_α)`,
/// `g((∇_{Z_α}J)Z_β,Z_γ)`, `g((∇_{Z_ᾱ}J)Z_β,Z_γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    #[serde(rename = "g((∇_{Zβ}J)Zβ,Zα)")]
    HolomorphicRepeated,
    #[serde(rename = "g((∇_{Zβ̄}J)Zβ,Zα)")]
    AntiholomorphicRepeated,
    #[serde(rename = "g((∇_{Zα}J)Zβ,Zγ)")]
    Holomorphic,
    #[serde(rename = "g((∇_{Zᾱ}J)Zβ,Zγ)")]
    Antiholomorphic,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::HolomorphicRepeated,
        Family::AntiholomorphicRepeated,
        Family::Holomorphic,
        Family::Antiholomorphic,
    ];

    pub fn describe(self) -> &'static str {
        match self {
            Family::HolomorphicRepeated => "g((∇_{Zβ}J)Zβ,Zα)",
            Family::AntiholomorphicRepeated => "g((∇_{Zβ̄}J)Zβ,Zα)",
            Family::Holomorphic => "g((∇_{Zα}J)Zβ,Zγ)",
            Family::Antiholomorphic => "g((∇_{Zᾱ}J)Zβ,Zγ)",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseTrace {
    pub family: Family,
    pub case: String,
    /// true for the branch the proof only states as analogous
    pub mirrored: bool,
    pub equations: Vec<String>,
    pub groebner_basis: Vec<String>,
    pub forced_zero: Vec<String>,
    pub complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseConclusion {
    /// every flagged family forces all `μ` to vanish: flat at p
    #[serde(rename = "flat at p")]
    FlatAtP,
    /// no family is flagged: `∇J = 0` at p
    #[serde(rename = "Kählerian at p")]
    KahlerAtP,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeductionReport {
    pub n: usize,
    pub flags: [bool; 4],
    pub traces: Vec<CaseTrace>,
    pub conclusion: CaseConclusion,
}

fn v(k: usize) -> Poly {
    Poly::var(k)
}

fn lin(coeffs: [i64; 4]) -> Poly {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .fold(Poly::zero(), |acc, (k, &c)| &acc + &v(k).scale(c))
}

/// `(5μ_x + μ_y)(5μ_z + μ_y) − (μ_x + μ_z)²`
fn product_equation(x: usize, y: usize, z: usize) -> Poly {
    let mut a = [0; 4];
    a[x] += 5;
    a[y] += 1;
    let mut b = [0; 4];
    b[z] += 5;
    b[y] += 1;
    let mut s = [0; 4];
    s[x] += 1;
    s[z] += 1;
    let s = lin(s);
    &(&lin(a) * &lin(b)) - &(&s * &s)
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

/// Case systems for the family with `g((∇_{Z_β̄}J)Z_β,Z_α) ≠ 0` (and, by
/// the mirrored argument, `g((∇_{Z_β}J)Z_β,Z_α) ≠ 0`).
fn repeated_family_cases() -> Vec<(&'static str, Vec<Poly>)> {
    vec![
        (
            "I: the γ-component vanishes",
            vec![lin([5, 1, 0, 0]), lin([1, 0, 1, 0]), lin([1, 1, 2, 0])],
        ),
        (
            "II: the γ-component is non-zero",
            vec![
                lin([5, 1, 0, 0]),
                lin([5, 0, 1, 0]),
                // determinant of the 2x2 system
                &(&lin([1, 0, 1, 0]) * &lin([0, 1, 1, 0])) + &(&lin([1, 1, 0, 0]) * &lin([1, 1, 2, 0])),
            ],
        ),
    ]
}

fn holomorphic_family_cases() -> Vec<(&'static str, Vec<Poly>)> {
    vec![
        (
            "I: g((∇_{Zβ}J)Zα,Zγ) ≠ 0",
            vec![
                product_equation(A, C, B),
                product_equation(A, B, C),
                product_equation(B, A, C),
            ],
        ),
        (
            "II: g((∇_{Zβ}J)Zα,Zγ) = 0",
            vec![lin([0, 5, 1, 0]), lin([1, 1, 0, 0]), product_equation(A, B, C)],
        ),
    ]
}

fn antiholomorphic_family_cases() -> Vec<(&'static str, Vec<Poly>)> {
    vec![(
        "symmetric in β, γ; then the ∇Q relation",
        // 5μβ + μγ = 0, μβ + 5μγ = 0, and μα = 0 from the split of the
        // final relation into symmetric and antisymmetric parts
        vec![lin([0, 5, 1, 0]), lin([0, 1, 5, 0]), v(A)],
    )]
}

fn trace(family: Family, case: String, mirrored: bool, eqs: Vec<Poly>, vars: &[usize]) -> CaseTrace {
    let basis = groebner_basis(&eqs);
    let zero = forced_zero(&basis, vars);
    CaseTrace {
        family,
        case,
        mirrored,
        equations: eqs.iter().map(|p| format!("{p} = 0")).collect(),
        groebner_basis: basis.iter().map(ToString::to_string).collect(),
        complete: zero.len() == vars.len(),
        forced_zero: zero.iter().map(|&k| VAR_NAMES[k].to_string()).collect(),
    }
}

fn family_traces(family: Family, n: usize) -> Vec<CaseTrace> {
    let mirrored = family == Family::HolomorphicRepeated;
    let mut out = Vec::new();
    match family {
        Family::HolomorphicRepeated | Family::AntiholomorphicRepeated => {
            for (name, eqs) in repeated_family_cases() {
                if n > 3 {
                    // the same system with γ replaced by any other δ
                    let renamed = eqs.iter().map(|p| p.rename(C, D)).collect();
                    out.push(trace(family, format!("{name} (γ → δ)"), mirrored, renamed, &[A, B, D]));
                }
                out.push(trace(family, name.to_string(), mirrored, eqs, &[A, B, C]));
            }
        }
        Family::Holomorphic | Family::Antiholomorphic => {
            let cases = if family == Family::Holomorphic {
                holomorphic_family_cases()
            } else {
                antiholomorphic_family_cases()
            };
            for (name, eqs) in cases {
                out.push(trace(family, name.to_string(), false, eqs, &[A, B, C]));
            }
            if n > 3 {
                // (μβ + μγ + 2μδ)·(non-zero component) = 0 at X = Z_α or Z_ᾱ,
                // Y = Z_δ, Z = Z_δ̄, U = Z_β, V = Z_γ
                let eqs = vec![v(A), v(B), v(C), lin([0, 1, 1, 2])];
                out.push(trace(family, "extension to δ".into(), false, eqs, &[A, B, C, D]));
            }
        }
    }
    out
}

/// Replays every case of every flagged family.
pub fn case_deduction(flags: [bool; 4], n: usize) -> Result<DeductionReport, VerifyError> {
    if n <= 2 {
        return Err(VerifyError::NotApplicable(n));
    }
    let traces: Vec<CaseTrace> = Family::ALL
        .iter()
        .zip(flags)
        .filter(|(_, on)| *on)
        .flat_map(|(&f, _)| family_traces(f, n))
        .collect();
    let conclusion = if traces.is_empty() {
        CaseConclusion::KahlerAtP
    } else if traces.iter().all(|t| t.complete) {
        CaseConclusion::FlatAtP
    } else {
        CaseConclusion::Inconclusive
    };
    Ok(DeductionReport {
        n,
        flags,
        traces,
        conclusion,
    })
}

/// All sixteen flag combinations.
pub fn run_all_flag_combinations(n: usize) -> Result<Vec<DeductionReport>, VerifyError> {
    (0..16u8)
        .map(|bits| case_deduction(std::array::from_fn(|k| bits & (1 << k) != 0), n))
        .collect()
}
