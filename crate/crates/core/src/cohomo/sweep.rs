//! Fernández–Gray classes realized by warped and cohomogeneity-one samples.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CohomError;
use crate::jet::{FunctionDescriptor, Jet};
use crate::torsion::{fg_type, FgType, DEFAULT_FG_EPS};

use super::warp::{compare_cohom_routes, compare_warped_routes, theta_solving, CohomSpec, WarpSpec, ROUTE_TOLERANCE};

/// How the phase `θ` is chosen at the sample point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaRule {
    /// Solve `θ′ = b sin θ` so that the named component (`tau0` or `tau3`)
    /// vanishes; `log_a` fixes the integration constant.
    Kill { kill: String, log_a: f64 },
    /// A function descriptor such as `id`, `sin` or `0.5*id`.
    Function(String),
    /// A jet `(θ, θ′, θ″)` given directly.
    Jet([f64; 3]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpedSample {
    #[serde(default)]
    pub label: Option<String>,
    /// Function descriptor for the warping function.
    pub f: String,
    pub theta: ThetaRule,
    pub sigma: f64,
    pub t: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomSample {
    #[serde(default)]
    pub label: Option<String>,
    /// Values of `f₁, f₂, f₃`; derivatives follow from `(f_if_j)′ = f_k`.
    pub f: [f64; 3],
    pub theta: ThetaRule,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub warped: Vec<WarpedSample>,
    #[serde(default)]
    pub cohomogeneity_one: Vec<CohomSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub label: String,
    pub family: String,
    pub t: Option<f64>,
    pub fg_type: FgType,
    /// Distance between the closed-form and generic torsion.
    pub route_residual: f64,
    pub routes_agree: bool,
    /// `(|τ₀|, |τ₁|, |τ₂|, |τ₃|)`.
    pub norms: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    pub realized: Vec<FgType>,
    /// Required classes that no sample produced.
    pub missing: Vec<FgType>,
    /// True if some sample produced exactly `{1,2,3}`.
    pub excluded_realized: bool,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && !self.excluded_realized && self.entries.iter().all(|e| e.routes_agree)
    }
}

/// Classes every sweep of the default grid has to realize.
pub fn required_classes() -> Vec<FgType> {
    [&[][..], &[1], &[4], &[1, 4], &[3, 4], &[1, 3, 4], &[2, 4], &[2, 3, 4], &[1, 2, 3, 4], &[1, 3]]
        .iter()
        .map(|c| FgType::from_classes(c))
        .collect()
}

pub fn excluded_class() -> FgType {
    FgType::from_classes(&[1, 2, 3])
}

fn parse_function(text: &str) -> Result<FunctionDescriptor, CohomError> {
    FunctionDescriptor::parse(text).ok_or_else(|| CohomError::BadDescriptor(text.to_string()))
}

fn kill_target(kill: &str) -> Result<bool, CohomError> {
    match kill {
        "tau0" => Ok(true),
        "tau3" => Ok(false),
        other => Err(CohomError::BadDescriptor(format!("cannot kill {other:?}; use tau0 or tau3"))),
    }
}

fn warped_theta(rule: &ThetaRule, f: Jet, sigma: f64, t: f64) -> Result<Jet, CohomError> {
    match rule {
        ThetaRule::Function(text) => Ok(parse_function(text)?.jet(t)),
        ThetaRule::Jet([v, d1, d2]) => Ok(Jet::new(*v, *d1, *d2)),
        ThetaRule::Kill { kill, log_a } => {
            if sigma == 0.0 {
                return Err(CohomError::BadDescriptor("killing a component needs σ > 0".into()));
            }
            // τ₀ ∝ θ′ + 6σ sin θ/f and τ₃ ∝ θ′ − σ sin θ/f.
            let b = if kill_target(kill)? { Jet::constant(-6.0 * sigma) / f } else { Jet::constant(sigma) / f };
            Ok(theta_solving(b, *log_a))
        }
    }
}

fn cohom_theta(rule: &ThetaRule, f: &[Jet; 3]) -> Result<Jet, CohomError> {
    match rule {
        ThetaRule::Function(text) => Ok(parse_function(text)?.jet(0.0)),
        ThetaRule::Jet([v, d1, d2]) => Ok(Jet::new(*v, *d1, *d2)),
        ThetaRule::Kill { kill, log_a } => {
            if !kill_target(kill)? {
                return Err(CohomError::BadDescriptor("only tau0 can be killed on cohomogeneity-one samples".into()));
            }
            let sq = f[0] * f[0] + f[1] * f[1] + f[2] * f[2];
            let h = sq / (Jet::constant(2.0) * f[0] * f[1] * f[2]);
            Ok(theta_solving(Jet::constant(-2.0) * h, *log_a))
        }
    }
}

fn entry(label: String, family: &str, t: Option<f64>, r: super::warp::TwoRouteTorsion) -> SweepEntry {
    let g = &r.generic;
    SweepEntry {
        label,
        family: family.to_string(),
        t,
        fg_type: fg_type(g, DEFAULT_FG_EPS),
        route_residual: r.residual,
        routes_agree: r.agree(ROUTE_TOLERANCE),
        norms: [g.tau0.abs(), g.tau1.norm2().sqrt(), g.tau2.norm2().sqrt(), g.tau3.norm2().sqrt()],
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport, CohomError> {
    let warped_jobs: Vec<(&WarpedSample, f64)> =
        config.warped.iter().flat_map(|s| s.t.iter().map(move |&t| (s, t))).collect();
    let mut entries = warped_jobs
        .par_iter()
        .map(|&(s, t)| {
            let f = parse_function(&s.f)?.jet(t);
            let theta = warped_theta(&s.theta, f, s.sigma, t)?;
            let spec = WarpSpec::new(f, theta, s.sigma)?;
            let label = s.label.clone().unwrap_or_else(|| format!("f={}, σ={}", s.f, s.sigma));
            Ok(entry(label, "warped", Some(t), compare_warped_routes(&spec)?))
        })
        .collect::<Result<Vec<_>, CohomError>>()?;
    let cohom = config
        .cohomogeneity_one
        .par_iter()
        .map(|s| {
            let spec = CohomSpec::with_holonomy(s.f, Jet::constant(0.0))?;
            let theta = cohom_theta(&s.theta, &spec.f)?;
            let spec = CohomSpec::new(spec.f, theta)?;
            let label = s.label.clone().unwrap_or_else(|| format!("f={:?}", s.f));
            Ok(entry(label, "cohomogeneity-one", None, compare_cohom_routes(&spec)?))
        })
        .collect::<Result<Vec<_>, CohomError>>()?;
    entries.extend(cohom);
    let realized: BTreeSet<FgType> = entries.iter().map(|e| e.fg_type).collect();
    let missing = required_classes().into_iter().filter(|c| !realized.contains(c)).collect();
    Ok(SweepReport {
        excluded_realized: realized.contains(&excluded_class()),
        realized: realized.into_iter().collect(),
        missing,
        entries,
    })
}

fn warped(label: &str, f: &str, theta: ThetaRule, sigma: f64, t: &[f64]) -> WarpedSample {
    WarpedSample { label: Some(label.into()), f: f.into(), theta, sigma, t: t.to_vec() }
}

fn cohom(label: &str, f: [f64; 3], theta: ThetaRule) -> CohomSample {
    CohomSample { label: Some(label.into()), f, theta }
}

fn func(s: &str) -> ThetaRule {
    ThetaRule::Function(s.into())
}

fn kill(which: &str, log_a: f64) -> ThetaRule {
    ThetaRule::Kill { kill: which.into(), log_a }
}

/// The curated grid behind [`type_sweep`].
pub fn default_config() -> SweepConfig {
    let pi = std::f64::consts::PI.to_string();
    let ts = [0.7, 1.3, 2.1];
    SweepConfig {
        warped: vec![
            warped("flat ℝ⁷", "id", func("0"), 1.0, &ts),
            warped("nearly parallel S⁷", "sin", func("id"), 1.0, &ts),
            warped("S⁷ with constant phase", "sin", func("0"), 1.0, &ts),
            warped("ℝ⁷ with reversed phase", "id", func(&pi), 1.0, &ts),
            warped("S⁷, τ₃ killed", "sin", kill("tau3", 0.3), 1.0, &ts),
            warped("S⁷, τ₀ killed", "sin", kill("tau0", -0.4), 1.0, &ts),
            warped("S⁷, generic phase", "sin", func("0.5*id"), 1.0, &ts),
            warped("hyperbolic, constant phase", "exp", func("0.8"), 0.0, &ts),
            warped("hyperbolic, moving phase", "exp", func("sin"), 0.0, &ts),
            warped("H⁷ over S⁶, generic phase", "sinh", func("cos"), 1.0, &ts),
            warped("Calabi–Yau fiber, moving phase", "1.5", func("id"), 0.0, &ts),
            warped("Calabi–Yau fiber, constant phase", "1.5", func("0.4"), 0.0, &ts),
        ],
        cohomogeneity_one: vec![
            cohom("parallel", [0.6, 1.0, 1.7], func("0")),
            cohom("reversed phase", [0.6, 1.0, 1.7], func(&pi)),
            cohom("reversed phase, equal scales", [1.2, 1.2, 1.2], func(&pi)),
            cohom("equal scales, generic phase", [1.2, 1.2, 1.2], ThetaRule::Jet([0.9, 0.4, -0.2])),
            cohom("τ₀ killed", [0.6, 1.0, 1.7], kill("tau0", 0.2)),
            cohom("generic", [0.6, 1.0, 1.7], ThetaRule::Jet([0.9, 0.4, -0.2])),
            cohom("generic, two equal scales", [0.8, 0.8, 1.5], ThetaRule::Jet([2.0, -0.7, 0.3])),
        ],
    }
}

pub fn type_sweep() -> SweepReport {
    run_sweep(&default_config()).expect("default sweep grid is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_realizes_required_classes() {
        let report = type_sweep();
        for e in &report.entries {
            assert!(e.routes_agree, "{e:?}");
        }
        assert!(report.missing.is_empty(), "missing {:?}", report.missing);
        assert!(!report.excluded_realized);
    }

    #[test]
    fn config_round_trips() {
        let config = default_config();
        let text = serde_json::to_string(&config).unwrap();
        assert_eq!(serde_json::from_str::<SweepConfig>(&text).unwrap(), config);
        let custom: SweepConfig =
            serde_json::from_str(r#"{"warped":[{"f":"sin","theta":{"kill":"tau0","log_a":0},"sigma":1,"t":[1]}]}"#)
                .unwrap();
        let r = run_sweep(&custom).unwrap();
        assert_eq!(r.entries[0].fg_type, FgType::from_classes(&[3, 4]));
        assert!(serde_json::from_str::<SweepConfig>(r#"{"warp":[]}"#).is_err());
    }
}
