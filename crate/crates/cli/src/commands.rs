use std::fs;
use std::path::{Path, PathBuf};

use g2lab::cohomo::{
    compare_warped_routes, ric_w_vanishes, run_sweep, type_sweep, warped_scalar_curvature, SweepConfig, WarpSpec,
};
use g2lab::curvature::{
    decompose, decomposition_checks, nearly_parallel_curvature, random_algebraic_curvature, CurvatureTensor,
};
use g2lab::g2::lambda3;
use g2lab::homogeneous::{analyze_structure, build_structure, AnalysisReport, InvariantGeometry, SpecDocument};
use g2lab::identities::{identity_suite, projector_suite, test_tensor};
use g2lab::jet::FunctionDescriptor;
use g2lab::report::{failures, render_checks, Check};
use g2lab::torsion::{fg_type, DEFAULT_FG_EPS};
use g2lab::{Exact, Scalar};
use serde_json::json;

pub struct Output {
    pub json: bool,
    pub tol: f64,
}

impl Output {
    fn emit(&self, value: &serde_json::Value, text: &str) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
        } else {
            print!("{text}");
        }
    }
}

/// `Ok(true)` on success, `Ok(false)` on a failed check, `Err` on bad input.
pub type CommandResult = Result<bool, String>;

const FAULT_TARGET: &str = "lambda3 |l(h)|^2 = 2|h|^2";

/// The λ₃ norm identity with the sign of the constant flipped.
fn faulty_check<S: Scalar>() -> Check {
    let h = test_tensor::<S>().traceless();
    Check::values(FAULT_TARGET, &(-h.norm2().scale_i(2)), &lambda3(&h).norm2())
}

fn suite<S: Scalar>(inject_fault: bool) -> Vec<Check> {
    let mut checks = identity_suite::<S>();
    checks.extend(projector_suite::<S>());
    if inject_fault {
        for c in checks.iter_mut().filter(|c| c.name == FAULT_TARGET) {
            *c = faulty_check::<S>();
        }
    }
    checks
}

fn summarize(checks: &[Check], tol: f64) -> (String, bool) {
    let failed = failures(checks, tol);
    let mut text = render_checks(checks, tol);
    text.push_str(&format!("{} checks, {} failed\n", checks.len(), failed.len()));
    for c in &failed {
        text.push_str(&format!("failed: {}\n", c.name));
    }
    (text, failed.is_empty())
}

pub fn identities(out: &Output, exact: bool, inject_fault: bool) -> CommandResult {
    let checks = if exact { suite::<Exact>(inject_fault) } else { suite::<f64>(inject_fault) };
    let (text, ok) = summarize(&checks, out.tol);
    out.emit(&json!({ "exact": exact, "passed": ok, "checks": checks }), &text);
    if !ok && out.json {
        for c in failures(&checks, out.tol) {
            eprintln!("failed: {}", c.name);
        }
    }
    Ok(ok)
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_spec(path: &Path) -> Result<SpecDocument, String> {
    SpecDocument::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn fallback_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "spec".into())
}

fn analyze_as<S: Scalar>(doc: &SpecDocument, name: &str) -> Result<AnalysisReport, String> {
    let (spec, phi) = doc.build::<S>(name).map_err(|e| e.to_string())?;
    let structure = build_structure(spec, phi.as_ref()).map_err(|e| e.to_string())?;
    Ok(analyze_structure(&structure))
}

fn render_report(r: &AnalysisReport, tol: f64) -> (String, bool) {
    let mut text = format!("{} ({})\n", r.name, if r.exact { "exact" } else { "float" });
    text.push_str(&format!(
        "  type {}  closed {}  unimodular {}\n  scalar curvature {}\n  |Ric0|^2 {}\n",
        r.fg_type, r.closed, r.unimodular, r.scalar_curvature, r.traceless_ricci_norm2
    ));
    let blocks: Vec<String> = r.block_norms.iter().map(|(k, v)| format!("{k} {v}")).collect();
    text.push_str(&format!("  block norms: {}\n", blocks.join("  ")));
    if let Some(p) = r.extremally_pinched {
        text.push_str(&format!("  extremally pinched {p}\n"));
    }
    let (checks, ok) = summarize(&r.checks, tol);
    text.push_str(&checks);
    (text, ok)
}

pub fn analyze(out: &Output, path: &Path, exact: bool, output: Option<&Path>) -> CommandResult {
    let doc = load_spec(path)?;
    let name = fallback_name(path);
    let report = if exact { analyze_as::<Exact>(&doc, &name)? } else { analyze_as::<f64>(&doc, &name)? };
    let value = serde_json::to_value(&report).expect("reports serialize");
    if let Some(file) = output {
        let text = serde_json::to_string_pretty(&value).expect("reports serialize");
        fs::write(file, text + "\n").map_err(|e| format!("{}: {e}", file.display()))?;
    }
    let (text, ok) = render_report(&report, out.tol);
    out.emit(&value, &text);
    Ok(ok)
}

fn descriptor(text: &str) -> Result<FunctionDescriptor, String> {
    FunctionDescriptor::parse(text).ok_or_else(|| format!("unknown function {text:?}"))
}

pub fn warp(out: &Output, f: &str, theta: &str, sigma: f64, ts: &[f64]) -> CommandResult {
    let (fd, td) = (descriptor(f)?, descriptor(theta)?);
    let mut rows = Vec::new();
    let mut text = format!(
        "{:>8} {:>12} {:>12} {:>12} {:>12}  {:<10} {:>10} {:>10} {:>12}\n",
        "t", "tau0", "|tau1|", "|tau2|", "|tau3|", "type", "routes", "Ric^W", "scalar"
    );
    let mut ok = true;
    for &t in ts {
        let spec = WarpSpec::from_descriptors(&fd, &td, sigma, t).map_err(|e| format!("t = {t}: {e}"))?;
        let routes = compare_warped_routes(&spec).map_err(|e| format!("t = {t}: {e}"))?;
        let ric_w = ric_w_vanishes(&spec).map_err(|e| e.to_string())?;
        let scalar = warped_scalar_curvature(&spec).map_err(|e| e.to_string())?;
        let g = &routes.generic;
        let class = fg_type(g, DEFAULT_FG_EPS);
        let norms = [g.tau1.norm2().sqrt(), g.tau2.norm2().sqrt(), g.tau3.norm2().sqrt()];
        let agree = routes.agree(out.tol);
        ok &= agree;
        text.push_str(&format!(
            "{t:>8.4} {:>12.6} {:>12.6} {:>12.6} {:>12.6}  {:<10} {:>10.1e} {:>10.1e} {:>12.6}\n",
            g.tau0,
            norms[0],
            norms[1],
            norms[2],
            class.to_string(),
            routes.residual,
            ric_w,
            scalar
        ));
        rows.push(json!({
            "t": t,
            "tau0": g.tau0,
            "tau1": g.tau1.coeffs(),
            "tau2": g.tau2.coeffs(),
            "tau3": g.tau3.coeffs(),
            "fg_type": class,
            "route_residual": routes.residual,
            "routes_agree": agree,
            "ric_w": ric_w,
            "scalar_curvature": scalar,
        }));
    }
    out.emit(&json!({ "f": f, "theta": theta, "sigma": sigma, "samples": rows }), &text);
    Ok(ok)
}

pub fn sweep(out: &Output, config: Option<&Path>) -> CommandResult {
    let report = match config {
        None => type_sweep(),
        Some(path) => {
            let config: SweepConfig =
                serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
            run_sweep(&config).map_err(|e| e.to_string())?
        }
    };
    let mut text = String::new();
    for e in &report.entries {
        let t = e.t.map(|t| format!("{t:.3}")).unwrap_or_else(|| "-".into());
        text.push_str(&format!(
            "{:<18} {:<36} t={:<6} {:<10} routes {:.1e}\n",
            e.family,
            e.label,
            t,
            e.fg_type.to_string(),
            e.route_residual
        ));
    }
    let realized: Vec<String> = report.realized.iter().map(ToString::to_string).collect();
    text.push_str(&format!("realized: {}\n", realized.join(" ")));
    if config.is_none() {
        let missing: Vec<String> = report.missing.iter().map(ToString::to_string).collect();
        text.push_str(&format!("missing: {}\n", if missing.is_empty() { "none".into() } else { missing.join(" ") }));
    }
    text.push_str(&format!("excluded class {{1,2,3}} produced: {}\n", report.excluded_realized));
    out.emit(&serde_json::to_value(&report).expect("reports serialize"), &text);
    let routes_ok = report.entries.iter().all(|e| e.routes_agree) && !report.excluded_realized;
    Ok(if config.is_none() { report.passed() } else { routes_ok })
}

pub enum CurvatureSource {
    Random(u64),
    NearlyParallel(f64),
    Spec(PathBuf),
}

pub fn curvature(out: &Output, source: CurvatureSource) -> CommandResult {
    let (label, r): (String, CurvatureTensor<f64>) = match source {
        CurvatureSource::Random(seed) => (format!("random tensor, seed {seed}"), random_algebraic_curvature(seed)),
        CurvatureSource::NearlyParallel(tau0) => {
            let w77 = decompose(&random_algebraic_curvature(0)).map_err(|e| e.to_string())?.w77;
            (format!("nearly parallel, tau0 = {tau0}"), nearly_parallel_curvature(&w77, &tau0))
        }
        CurvatureSource::Spec(path) => {
            let (spec, _) = load_spec(&path)?.build::<f64>(&fallback_name(&path)).map_err(|e| e.to_string())?;
            let geometry = InvariantGeometry::new(spec).map_err(|e| e.to_string())?;
            (format!("Riemann tensor of {}", path.display()), geometry.curvature)
        }
    };
    let d = decompose(&r).map_err(|e| e.to_string())?;
    let checks = decomposition_checks(&r).map_err(|e| e.to_string())?;
    let blocks: Vec<(&str, f64)> = d.blocks().iter().map(|(n, b)| (*n, b.norm2())).collect();
    let mut text = format!(
        "{label}\n  scalar curvature {:.9}\n  |Ric0|^2 {:.9}\n  |Ric^W|^2 {:.9}\n",
        d.scalar,
        d.ric0.norm2(),
        d.ric_w.norm2()
    );
    for (n, v) in &blocks {
        text.push_str(&format!("  |{n}|^2 {v:.9}\n"));
    }
    let (table, ok) = summarize(&checks, out.tol);
    text.push_str(&table);
    let value = json!({
        "source": label,
        "scalar_curvature": d.scalar,
        "traceless_ricci_norm2": d.ric0.norm2(),
        "ric_w_norm2": d.ric_w.norm2(),
        "block_norms": blocks.iter().map(|(n, v)| (n.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "checks": checks,
    });
    out.emit(&value, &text);
    Ok(ok)
}
