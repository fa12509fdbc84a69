//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are pinned here.

use bochner_lab::bochner::{phi, q_tensor, ricci_of, BochnerPackage};
use bochner_lab::exprjet::{eval_jet, Expr};
use bochner_lab::manifold::{
    curvature_package, second_bianchi_residual, zoo, ChartManifold, ZooParams, ZOO_NAMES,
};
use bochner_lab::sample::{inverse_metric, random_hermitian_pair, random_hybrid};
use bochner_lab::verify::{
    case_deduction, classify, classify_package, neighborhood_scan, run_all_flag_combinations,
    run_synthetic_oracle, CaseConclusion, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn m(name: &str) -> ChartManifold {
    zoo(name, &ZooParams::default()).expect("zoo manifold")
}

/// Random point inside a box of half-width `r` around `center`, kept in
/// the chart domain.
fn random_point(rng: &mut ChaCha8Rng, man: &ChartManifold, center: &[f64], r: f64) -> Vec<f64> {
    loop {
        let p: Vec<f64> = center.iter().map(|c| c + rng.gen_range(-r..r)).collect();
        if man.contains(&p) {
            return p;
        }
    }
}

fn center(name: &str) -> Vec<f64> {
    match name {
        "round_sphere_diag" => vec![1.2, 1.4, 1.6, 1.3, 1.7, 0.0],
        _ => vec![0.0; 6],
    }
}

fn flat_c3() -> Outcome {
    let man = m("flat_cn");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    let mut consistent = true;
    for _ in 0..5 {
        let p = random_point(&mut rng, &man, &center("flat_cn"), 2.0);
        let t = Instant::now();
        let pkg = curvature_package(&man, &p).unwrap();
        let bp = BochnerPackage::new(&pkg).unwrap();
        let c = classify_package(&pkg, &bp, 1e-8);
        slowest = slowest.max(t.elapsed().as_secs_f64());
        let r = &bp.residuals;
        for v in [
            pkg.r.max_norm(),
            bp.b.max_norm(),
            pkg.nabla_j.max_norm(),
            r.hybrid_ricci,
            r.trace_identity,
            r.ah1,
            r.q_hybrid,
            r.q_symmetric,
        ] {
            worst = worst.max(v);
        }
        consistent &= c.verdict == Verdict::Consistent;
    }
    outcome(
        worst <= 1e-10 && consistent && slowest < 1.0,
        format!("max(|R|,|B|,|N|,residuals) = {worst:.1e} <= 1e-10, consistent = {consistent}, slowest point {slowest:.3} s < 1 s"),
    )
}

fn nearly_kahler_s6() -> Outcome {
    let man = m("s6_nearly_kahler");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut tau_err = 0.0f64;
    let mut min_n = f64::INFINITY;
    let mut min_ratio = f64::INFINITY;
    let mut slowest = 0.0f64;
    let mut consistent = true;
    for _ in 0..3 {
        let p = random_point(&mut rng, &man, &center("s6"), 0.8);
        let t = Instant::now();
        let pkg = curvature_package(&man, &p).unwrap();
        let bp = BochnerPackage::new(&pkg).unwrap();
        let c = classify_package(&pkg, &bp, 1e-8);
        slowest = slowest.max(t.elapsed().as_secs_f64());
        tau_err = tau_err.max((pkg.scalar - 30.0).abs());
        min_n = min_n.min(pkg.nabla_j.max_norm());
        min_ratio = min_ratio.min(bp.b.max_norm() / pkg.r.max_norm());
        consistent &= c.verdict == Verdict::Consistent;
    }
    outcome(
        tau_err <= 1e-6 && min_n > 0.1 && min_ratio > 1e-3 && consistent && slowest < 10.0,
        format!(
            "|tau - 30| = {tau_err:.1e} <= 1e-6, |N| >= {min_n:.3} > 0.1, |B|/|R| >= {min_ratio:.3} > 1e-3, consistent = {consistent}, slowest point {slowest:.2} s < 10 s"
        ),
    )
}

fn fubini_study() -> Outcome {
    let man = m("fubini_study_cpn");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut ratio, mut n, mut hyb, mut trace) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..5 {
        let p = random_point(&mut rng, &man, &center("fs"), 1.0);
        let pkg = curvature_package(&man, &p).unwrap();
        let bp = BochnerPackage::new(&pkg).unwrap();
        ratio = ratio.max(bp.b.max_norm() / pkg.r.max_norm());
        n = n.max(pkg.nabla_j.max_norm());
        hyb = hyb.max(bp.residuals.hybrid_ricci);
        trace = trace.max(bp.residuals.trace_identity);
    }
    outcome(
        ratio <= 1e-8 && n <= 1e-10 && hyb <= 1e-9 && trace <= 1e-9,
        format!("|B|/|R| = {ratio:.1e} <= 1e-8, |N| = {n:.1e} <= 1e-10, hybrid Ricci {hyb:.1e} and trace identity {trace:.1e} <= 1e-9"),
    )
}

fn twisted_flat() -> Outcome {
    let man = m("flat_twisted_j");
    let p = [0.1, -0.2, 0.5, 0.3, 0.0, 0.2];
    let c = classify(&man, &p, 1e-8).unwrap();
    let scan = neighborhood_scan(&man, &p, 0.5, 3).unwrap();
    let flags = (c.bochner0, c.kahler, c.flat);
    outcome(
        flags == (true, false, true) && scan.max_norm_r <= 1e-10 && c.verdict == Verdict::Consistent,
        format!(
            "(bochner0, kahler, flat) = {flags:?}, scan max |R| = {:.1e} <= 1e-10 over {} points, verdict {}",
            scan.max_norm_r,
            scan.sampled,
            c.verdict.as_str()
        ),
    )
}

fn second_bianchi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for name in ZOO_NAMES {
        let man = m(name);
        for _ in 0..10 {
            let p = random_point(&mut rng, &man, &center(name), 0.8);
            let pkg = curvature_package(&man, &p).unwrap();
            let rel = second_bianchi_residual(&pkg) / (1.0 + pkg.nabla_r.max_norm());
            if rel >= worst {
                worst = rel;
                worst_at = name.to_string();
            }
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max residual/(1+|nabla R|) = {worst:.1e} <= 1e-8 (worst on {worst_at}), 10 points x {} manifolds", ZOO_NAMES.len()),
    )
}

fn synthetic_oracle() -> Outcome {
    let t = Instant::now();
    let r3 = run_synthetic_oracle(3, 100, 0, 1e-9).unwrap();
    let r4 = run_synthetic_oracle(4, 50, 1000, 1e-9).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let constants: Vec<String> = r3
        .checks
        .iter()
        .map(|c| {
            let cs: Vec<String> = c.constants.iter().map(|z| format!("{:+.3}{:+.3}i", z.re, z.im)).collect();
            format!("{}: {}", c.check, cs.join("/"))
        })
        .collect();
    outcome(
        r3.passed && r4.passed && secs < 60.0,
        format!(
            "max relative error n=3 {:.1e}, n=4 {:.1e} <= 1e-9, {:.1} s < 60 s; constants {}",
            r3.max_relative_error,
            r4.max_relative_error,
            secs,
            constants.join(", ")
        ),
    )
}

fn case_engine() -> Outcome {
    let mut ok = true;
    let mut count = 0;
    for n in [3, 4] {
        for r in run_all_flag_combinations(n).unwrap() {
            count += 1;
            let want = if r.flags == [false; 4] {
                CaseConclusion::KahlerAtP
            } else {
                CaseConclusion::FlatAtP
            };
            ok &= r.conclusion == want;
            if n == 4 && r.flags != [false; 4] {
                ok &= r.traces.iter().any(|t| t.forced_zero.iter().any(|v| v == "μδ"));
            }
        }
    }
    ok &= case_deduction([true; 4], 2).is_err();
    outcome(ok, format!("{count} flag combinations (n = 3, 4): flat at p for every non-empty set, Kählerian at p for none, μδ = 0 at n = 4"))
}

fn normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (g, j) = random_hermitian_pair(&mut rng, 3);
        let g_inv = inverse_metric(&g).unwrap();
        let rho = random_hybrid(&mut rng, &j);
        let tau = rho.contract(0, 1, Some(&g_inv)).unwrap().value();
        let q = q_tensor(&rho, tau, &g, 3).unwrap();
        let back = ricci_of(&phi(&q, &g, &j).unwrap(), &g_inv).unwrap();
        worst = worst.max(back.distance(&rho).unwrap() / (1.0 + rho.max_norm()));
    }
    outcome(worst <= 1e-10, format!("max |ricci(phi(Q)) - rho|/(1+|rho|) = {worst:.1e} <= 1e-10 over 50 draws"))
}

fn random_polynomial(rng: &mut ChaCha8Rng, nvars: usize) -> Expr {
    let terms = rng.gen_range(1..=6);
    let mut e = Expr::constant(rng.gen_range(-1.0..1.0));
    for _ in 0..terms {
        let mut t = Expr::constant(rng.gen_range(-2.0..2.0));
        for _ in 0..rng.gen_range(1..=4) {
            t = t * Expr::var(rng.gen_range(0..nvars));
        }
        e = e + t;
    }
    e
}

fn jets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let h = 1e-4;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let nvars = rng.gen_range(1..=6);
        let f = random_polynomial(&mut rng, nvars);
        let p: Vec<f64> = (0..nvars).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let jet = eval_jet(&f, &p, 2).unwrap();
        let at = |shift: &[(usize, f64)]| {
            let mut q = p.clone();
            for &(i, s) in shift {
                q[i] += s;
            }
            f.eval(&q)
        };
        let mut check = |exact: f64, fd: f64| {
            worst = worst.max((exact - fd).abs() / fd.abs().max(1.0));
        };
        for i in 0..nvars {
            check(jet.partial(&[i]), (at(&[(i, h)]) - at(&[(i, -h)])) / (2.0 * h));
            for k in 0..nvars {
                let fd = (at(&[(i, h), (k, h)]) - at(&[(i, h), (k, -h)]) - at(&[(i, -h), (k, h)])
                    + at(&[(i, -h), (k, -h)]))
                    / (4.0 * h * h);
                check(jet.partial(&[i, k]), fd);
            }
        }
    }
    outcome(worst <= 1e-5, format!("max relative gap to central differences (h = 1e-4) = {worst:.1e} <= 1e-5, 100 polynomial fields"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("flat C3", flat_c3),
        ("nearly Kähler S6", nearly_kahler_s6),
        ("Fubini-Study CP3", fubini_study),
        ("flat_twisted_j", twisted_flat),
        ("second Bianchi", second_bianchi),
        ("synthetic proof oracle", synthetic_oracle),
        ("case-deduction engine", case_engine),
        ("normalization", normalization),
        ("jet correctness", jets),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {} ({:.2} s)", k + 1, o.detail, t.elapsed().as_secs_f64());
        if !o.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
