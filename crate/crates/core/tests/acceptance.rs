//! One pass/fail line per acceptance criterion.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use g2lab::cohomo::{
    compare_warped_routes, ric_w_vanishes, type_sweep, warped_scalar_curvature, warped_torsion, WarpSpec,
};
use g2lab::curvature::{decompose, decomposition_checks, nearly_parallel_curvature, random_algebraic_curvature};
use g2lab::exterior::dimension;
use g2lab::g2::proj;
use g2lab::homogeneous::{analyze, builtin_example, AnalysisReport};
use g2lab::identities::{identity_suite, projector_suite};
use g2lab::jet::Jet;
use g2lab::report::Check;
use g2lab::torsion::{
    conformal_ric_w, extract_torsion, fg_type, recompose, FgType, TorsionComponents, TorsionDerivatives, DEFAULT_FG_EPS,
};
use g2lab::{standard_phi, Exact, Form};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

fn random_form(rng: &mut ChaCha8Rng, k: usize) -> Form<f64> {
    Form::new(k, (0..dimension(k)).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

fn random_torsion(rng: &mut ChaCha8Rng) -> TorsionComponents<f64> {
    TorsionComponents::new(
        rng.gen_range(-1.0..1.0),
        random_form(rng, 1),
        proj(&random_form(rng, 2), 14),
        proj(&random_form(rng, 3), 27),
    )
    .unwrap()
}

/// Largest residual relative to the size of the quantities compared.
fn worst(checks: &[Check]) -> f64 {
    checks.iter().map(|c| c.residual / c.scale.max(1.0)).fold(0.0, f64::max)
}

fn identities() -> Outcome {
    let start = Instant::now();
    let float = identity_suite::<f64>();
    let exact = identity_suite::<Exact>();
    let elapsed = start.elapsed();
    let exact_zero = exact.iter().all(|c| c.residual == 0.0);
    let float_worst = worst(&float);
    Outcome::new(
        exact_zero && float_worst < 1e-12 && elapsed < Duration::from_secs(5),
        format!(
            "{} float checks, worst {float_worst:.1e}; {} exact checks all zero: {exact_zero}; {elapsed:.2?}",
            float.len(),
            exact.len()
        ),
    )
}

fn projectors() -> Outcome {
    let float = projector_suite::<f64>();
    let exact = projector_suite::<Exact>();
    let float_worst = float.iter().map(|c| c.residual).fold(0.0, f64::max);
    let exact_zero = exact.iter().all(|c| c.residual == 0.0);
    Outcome::new(
        float_worst < 1e-12 && exact_zero,
        format!("{} checks, worst float {float_worst:.1e}, exact all zero: {exact_zero}", float.len()),
    )
}

fn curvature_decomposition() -> Outcome {
    let mut rel = 0.0f64;
    let mut w77 = None;
    for seed in 0..100 {
        let r = random_algebraic_curvature(seed);
        let scale = r.norm2().max(1.0);
        for c in decomposition_checks(&r).unwrap() {
            rel = rel.max(c.residual / scale.max(c.scale));
        }
        if w77.is_none() {
            w77 = Some(decompose(&r).unwrap().w77);
        }
    }
    let tau0 = 1.7;
    let d = decompose(&nearly_parallel_curvature(&w77.unwrap(), &tau0)).unwrap();
    let s_gap = (d.scalar - 21.0 / 8.0 * tau0 * tau0).abs();
    let rest = d.ric0.max_abs().max(d.w27.max_abs()).max(d.w64.max_abs());
    Outcome::new(
        rel < 1e-10 && s_gap < 1e-10 && rest < 1e-10,
        format!("100 tensors, worst relative {rel:.1e}; nearly parallel s gap {s_gap:.1e}, other blocks {rest:.1e}"),
    )
}

fn require(report: &AnalysisReport, names: &[&str]) -> Result<(), String> {
    for name in names {
        match report.check(name) {
            Some(c) if c.passed(0.0) => {}
            Some(c) => return Err(format!("{name}: residual {:e}", c.residual)),
            None => return Err(format!("{name}: missing")),
        }
    }
    Ok(())
}

fn bryant() -> Outcome {
    let start = Instant::now();
    let example = builtin_example::<Exact>("bryant").unwrap();
    let report = analyze(example.spec, Some(&example.phi)).unwrap();
    let elapsed = start.elapsed();
    let mut names = vec![
        "closed: ‖Ric₀‖² = 4/21 s²".to_string(),
        "closed: R·φ contraction formula".to_string(),
        "closed: ‖R·φ‖² via curvature blocks".to_string(),
    ];
    for k in ["k=(1,0)", "k=(0,1)", "k=(4,-5)"] {
        names.push(format!("generalized Ricci via d, {k}"));
        names.push(format!("generalized Ricci via d^∇̄, {k}"));
    }
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let named = require(&report, &names);
    let parallel = report.nabla_bar_tau.as_ref().is_some_and(|n| n.v64 + n.v27 + n.v7 == 0.0);
    let ok = report.closed
        && report.fg_type == FgType::from_classes(&[2])
        && parallel
        && report.block_norms["W64"] == 0.0
        && report.passed(0.0)
        && named.is_ok()
        && elapsed < Duration::from_secs(10);
    Outcome::new(
        ok,
        format!(
            "exact, {} checks, closed {}, type {:?}, s = {}, ∇̄τ = 0: {parallel}, {}; {elapsed:.2?}",
            report.checks.len(),
            report.closed,
            report.fg_type.classes(),
            report.scalar_curvature,
            named.err().unwrap_or_else(|| "named identities hold".into())
        ),
    )
}

fn hyperbolic() -> Outcome {
    let example = builtin_example::<f64>("hyperbolic").unwrap();
    let report = analyze(example.spec, Some(&example.phi)).unwrap();
    let blocks = ["W77", "W64", "W27", "R0"].iter().map(|b| report.block_norms[*b]).fold(0.0, f64::max);
    let mut e7 = vec![0.0; 7];
    e7[6] = 1.0;
    let tau1_gap = report.torsion.tau1.iter().zip(&e7).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let s_gap = (report.scalar_curvature + 42.0).abs();
    let ok = blocks < 1e-10
        && s_gap < 1e-10
        && tau1_gap < 1e-10
        && report.fg_type == FgType::from_classes(&[4])
        && report.passed(1e-10);
    Outcome::new(
        ok,
        format!(
            "Weyl and Ric₀ blocks {blocks:.1e}, s = {}, type {:?}, τ₁ − e⁷ {tau1_gap:.1e}",
            report.scalar_curvature,
            report.fg_type.classes()
        ),
    )
}

fn warped() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut route = 0.0f64;
    let mut ric_w = 0.0f64;
    let mut agree = true;
    for _ in 0..50 {
        let f = Jet::new(rng.gen_range(0.3..2.0), rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let th = Jet::new(rng.gen_range(-PI..PI), rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let spec = WarpSpec::new(f, th, rng.gen_range(0.0..1.5)).unwrap();
        let r = compare_warped_routes(&spec).unwrap();
        agree &= r.agree(1e-9);
        route = route.max(r.residual);
        ric_w = ric_w.max(ric_w_vanishes(&spec).unwrap());
    }
    let mut special = 0.0f64;
    let mut s_gap = 0.0f64;
    for x in [0.3, 0.9, 1.5, 2.2, 2.9] {
        let t = Jet::variable(x);
        let np = WarpSpec::new(t.sin(), t, 1.0).unwrap();
        let g = warped_torsion(&np).unwrap().generic;
        special = special.max((g.tau0 - 4.0).abs()).max(g.tau1.max_abs()).max(g.tau2.max_abs()).max(g.tau3.max_abs());
        s_gap = s_gap.max((warped_scalar_curvature(&np).unwrap() - 42.0).abs());
        let flat = warped_torsion(&WarpSpec::new(t, Jet::constant(0.0), 1.0).unwrap()).unwrap().generic;
        special = special.max(flat.max_abs());
        let sphere = WarpSpec::new(t.sin(), Jet::constant(0.0), 1.0).unwrap();
        let g = warped_torsion(&sphere).unwrap().generic;
        let mut expected = Form::zero(1);
        expected += &Form::covector(6).scale(&-(x / 2.0).tan());
        special = special.max((&g.tau1 - &expected).max_abs());
        ric_w = ric_w.max(ric_w_vanishes(&np).unwrap()).max(ric_w_vanishes(&sphere).unwrap());
    }
    Outcome::new(
        agree && route < 1e-9 && special < 1e-9 && s_gap < 1e-9 && ric_w < 1e-9,
        format!("50 random specs, route residual {route:.1e}; special profiles {special:.1e}; scalar gap {s_gap:.1e}; Ric^W {ric_w:.1e}"),
    )
}

fn sweep() -> Outcome {
    let report = type_sweep();
    let realized: Vec<Vec<u8>> = report.realized.iter().map(|c| c.classes()).collect();
    Outcome::new(
        report.passed(),
        format!(
            "{} samples, realized {realized:?}, missing {}, excluded class produced: {}",
            report.entries.len(),
            report.missing.len(),
            report.excluded_realized
        ),
    )
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let phi = standard_phi::<f64>();
    let mut gap = 0.0f64;
    for _ in 0..100 {
        let t = random_torsion(&mut rng);
        let (dphi, dpsi) = recompose(&t).unwrap();
        gap = gap.max(extract_torsion(&phi, &dphi, &dpsi).unwrap().distance(&t));
    }
    Outcome::new(gap < 1e-10, format!("100 tuples, worst distance {gap:.1e}"))
}

fn conformal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut rel = 0.0f64;
    let mut zero_set = true;
    for i in 0..20 {
        let mut t = random_torsion(&mut rng);
        let f0: f64 = rng.gen_range(-1.0..1.0);
        let df = random_form(&mut rng, 1);
        let mut d = TorsionDerivatives {
            of_tau1: random_form(&mut rng, 3),
            of_tau2: random_form(&mut rng, 3),
            of_tau3: random_form(&mut rng, 4),
        };
        // Every fourth tuple is of type 1 + 4 with consistent derivatives,
        // where Ric^W vanishes.
        if i % 4 == 0 {
            t = TorsionComponents::new(t.tau0, t.tau1, Form::zero(2), Form::zero(3)).unwrap();
            d.of_tau2 = Form::zero(3);
            d.of_tau3 = Form::zero(4);
        }
        let (before, after) = conformal_ric_w(&t, &d, f0, &df);
        let predicted = before.scale(&(-2.0 * f0).exp());
        rel = rel.max((&after - &predicted).max_abs() / before.max_abs().max(1.0));
        let vanish = |f: &Form<f64>| f.max_abs() < 1e-10;
        zero_set &= vanish(&before) == vanish(&after);
        let moved = g2lab::torsion::conformal_transform(&t, f0, &df);
        if i % 4 == 0 {
            zero_set &= fg_type(&moved, DEFAULT_FG_EPS).classes().iter().all(|c| [1, 4].contains(c));
        }
    }
    Outcome::new(
        rel < 1e-10 && zero_set,
        format!("20 tuples, λ₃(Ric^W) weight e^(-2f) residual {rel:.1e}, zero set preserved: {zero_set}"),
    )
}

#[test]
fn acceptance_criteria() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("identity suite", identities),
        ("projector suite", projectors),
        ("curvature decomposition", curvature_decomposition),
        ("closed example end to end", bryant),
        ("hyperbolic solvable example", hyperbolic),
        ("warped products", warped),
        ("type sweep", sweep),
        ("torsion round trip", round_trip),
        ("conformal covariance", conformal),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!("criterion {} [{status}] {name}: {}", i + 1, outcome.detail);
        if !outcome.passed {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
