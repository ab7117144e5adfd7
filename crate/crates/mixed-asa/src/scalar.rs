//! Admissible weight functions on (0, infinity).
//!
//! Two classes appear in every functional of this crate. A concave-class
//! member is either a positive constant or a concave function vanishing at
//! 0 with phi(t)/t -> 0 at infinity. A convex-class member is either a
//! positive constant or a convex function blowing up at 0 and vanishing at
//! infinity. Homogeneous members are exactly the powers c*t^r, with
//! r in [0, 1) for the concave class and r <= 0 for the convex class.
//!
//! Constructors validate candidates with the probe battery in
//! [`validate_class`] and refuse failing members.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which admissibility class a weight function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarKind {
    /// Concave class: constants or concave with phi(0+) = 0, phi(t)/t -> 0.
    Conc,
    /// Convex class: constants or convex with psi(0+) = inf, psi(inf) = 0.
    Conv,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Conc => write!(f, "concave"),
            ScalarKind::Conv => write!(f, "convex"),
        }
    }
}

#[derive(Clone)]
enum Repr {
    Power { c: f64, r: f64 },
    Named(NamedFn),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// Built-in non-homogeneous members, for exercising statements whose
/// hypotheses do not require homogeneity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedFn {
    /// phi(t) = ln(1 + t), concave class.
    #[serde(rename = "log1p")]
    Log1p,
    /// phi(t) = t / (1 + t), concave class.
    #[serde(rename = "bounded-ratio")]
    BoundedRatio,
    /// psi(t) = exp(1/t) - 1, convex class.
    #[serde(rename = "exp-conv")]
    ExpConv,
}

impl NamedFn {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "log1p" => Ok(NamedFn::Log1p),
            "bounded-ratio" => Ok(NamedFn::BoundedRatio),
            "exp-conv" => Ok(NamedFn::ExpConv),
            other => Err(Error::Validation(format!("unknown named function `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NamedFn::Log1p => "log1p",
            NamedFn::BoundedRatio => "bounded-ratio",
            NamedFn::ExpConv => "exp-conv",
        }
    }

    fn kind(&self) -> ScalarKind {
        match self {
            NamedFn::Log1p | NamedFn::BoundedRatio => ScalarKind::Conc,
            NamedFn::ExpConv => ScalarKind::Conv,
        }
    }

    fn eval(&self, t: f64) -> f64 {
        match self {
            NamedFn::Log1p => t.ln_1p(),
            NamedFn::BoundedRatio => t / (1.0 + t),
            NamedFn::ExpConv => (1.0 / t).exp_m1(),
        }
    }
}

/// A validated member of one of the two weight classes.
#[derive(Clone)]
pub struct ScalarClassFn {
    kind: ScalarKind,
    repr: Repr,
    /// Homogeneity degree when the member is exactly c * t^r.
    homogeneity: Option<f64>,
    value_at_one: f64,
}

impl fmt::Debug for ScalarClassFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Power { c, r } => write!(f, "Power({c}*t^{r}, {})", self.kind),
            Repr::Named(n) => write!(f, "Named({}, {})", n.name(), self.kind),
            Repr::Custom(_) => write!(f, "Custom({})", self.kind),
        }
    }
}

impl ScalarClassFn {
    /// Concave-class power c * t^r with c > 0 and 0 <= r < 1; r = 0 gives
    /// the admissible positive-constant member.
    pub fn power_conc(c: f64, r: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Validation(format!("scale {c} must be positive")));
        }
        if !(0.0..1.0).contains(&r) {
            return Err(Error::Validation(format!(
                "concave-class degree {r} outside [0, 1)"
            )));
        }
        Self::checked(ScalarKind::Conc, Repr::Power { c, r }, Some(r))
    }

    /// Convex-class power c * t^r with c > 0 and r <= 0.
    pub fn power_conv(c: f64, r: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Validation(format!("scale {c} must be positive")));
        }
        if !(r <= 0.0 && r.is_finite()) {
            return Err(Error::Validation(format!(
                "convex-class degree {r} outside (-inf, 0]"
            )));
        }
        Self::checked(ScalarKind::Conv, Repr::Power { c, r }, Some(r))
    }

    /// One of the built-in non-homogeneous members.
    pub fn named(name: NamedFn) -> Result<Self> {
        Self::checked(name.kind(), Repr::Named(name), None)
    }

    /// Wraps an arbitrary evaluator as a candidate member, with full probe
    /// validation. Intended for experiments and tests.
    pub fn custom<F>(kind: ScalarKind, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::checked(kind, Repr::Custom(Arc::new(f)), None)
    }

    fn checked(kind: ScalarKind, repr: Repr, homogeneity: Option<f64>) -> Result<Self> {
        let candidate = ScalarClassFn {
            kind,
            value_at_one: eval_repr(&repr, 1.0),
            repr,
            homogeneity,
        };
        let report = validate_class(&candidate);
        if let Some(failed) = report.first_failure() {
            return Err(Error::Validation(format!(
                "{kind}-class probe failed: {failed}"
            )));
        }
        Ok(candidate)
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    /// Homogeneity degree, when the member is a pure power.
    pub fn homogeneity(&self) -> Option<f64> {
        self.homogeneity
    }

    pub fn value_at_one(&self) -> f64 {
        self.value_at_one
    }

    /// Evaluates the member. The boundary conventions phi(0) = 0 and
    /// psi(0) = inf are encoded explicitly; functional integrands never
    /// reach t = 0 because smooth bodies keep arguments strictly positive.
    pub fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            return match self.kind {
                ScalarKind::Conc => 0.0,
                ScalarKind::Conv => {
                    if self.homogeneity == Some(0.0) {
                        self.value_at_one
                    } else {
                        f64::INFINITY
                    }
                }
            };
        }
        eval_repr(&self.repr, t)
    }

    /// Compact descriptor used in report digests.
    pub fn descriptor(&self) -> ScalarDoc {
        match &self.repr {
            Repr::Power { c, r } => match self.kind {
                ScalarKind::Conc => ScalarDoc::PowerConc { c: *c, r: *r },
                ScalarKind::Conv => ScalarDoc::PowerConv { c: *c, r: *r },
            },
            Repr::Named(n) => ScalarDoc::Named { name: *n },
            Repr::Custom(_) => ScalarDoc::Custom,
        }
    }
}

fn eval_repr(repr: &Repr, t: f64) -> f64 {
    match repr {
        Repr::Power { c, r } => c * t.powf(*r),
        Repr::Named(n) => n.eval(t),
        Repr::Custom(f) => f(t),
    }
}

/// JSON document form of a weight function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ScalarDoc {
    PowerConc { c: f64, r: f64 },
    PowerConv { c: f64, r: f64 },
    Named { name: NamedFn },
    /// Placeholder for evaluators that have no document form.
    Custom,
}

impl ScalarDoc {
    pub fn build(&self) -> Result<ScalarClassFn> {
        match self {
            ScalarDoc::PowerConc { c, r } => ScalarClassFn::power_conc(*c, *r),
            ScalarDoc::PowerConv { c, r } => ScalarClassFn::power_conv(*c, *r),
            ScalarDoc::Named { name } => ScalarClassFn::named(*name),
            ScalarDoc::Custom => Err(Error::Validation(
                "custom evaluators cannot be rebuilt from a document".into(),
            )),
        }
    }
}

/// Outcome of a single validation probe.
#[derive(Debug, Clone, Serialize)]
pub struct Probe {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Aggregate validation outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub probes: Vec<Probe>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.probes.iter().all(|p| p.passed)
    }

    pub fn first_failure(&self) -> Option<&Probe> {
        self.probes.iter().find(|p| !p.passed)
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({})",
            self.name,
            if self.passed { "ok" } else { "FAILED" },
            self.detail
        )
    }
}

const MIDPOINT_TRIPLES: usize = 64;
const LIMIT_PROBE_SMALL: f64 = 1e-8;
const LIMIT_PROBE_LARGE: f64 = 1e8;
const LIMIT_REL: f64 = 1e-4;

/// Runs the probe battery against a candidate: positivity and midpoint
/// concavity/convexity on 64 log-spaced triples, plus the two limit
/// probes of the class definition. Homogeneous powers carry their degree,
/// so their asymptotic limits are certified from the exponent and the
/// numeric probes check the homogeneity identity instead.
pub fn validate_class(f: &ScalarClassFn) -> ValidationReport {
    let mut probes = Vec::new();
    let eval = |t: f64| eval_repr(&f.repr, t);
    let v1 = eval(1.0);

    // Positivity and midpoint shape on a log grid of triples (a, (a+b)/2, b).
    let mut positive = true;
    let mut shape_ok = true;
    let mut shape_detail = String::new();
    for i in 0..MIDPOINT_TRIPLES {
        let s = i as f64 / (MIDPOINT_TRIPLES - 1) as f64;
        let a = 10f64.powf(-6.0 + 10.0 * s);
        let b = a * 10f64.powf(1.5 + 2.0 * s / (MIDPOINT_TRIPLES as f64));
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (eval(a), eval(m), eval(b));
        if !(fa > 0.0 && fm > 0.0 && fb > 0.0) {
            positive = false;
        }
        // Convex members may overflow to +inf near 0; that is the expected
        // blow-up, not a shape violation.
        if !(fa.is_finite() && fm.is_finite() && fb.is_finite()) {
            continue;
        }
        let chord = 0.5 * (fa + fb);
        let scale = fa.abs().max(fb.abs()).max(1e-300);
        let slack = (fm - chord) / scale;
        let ok = match f.kind {
            ScalarKind::Conc => slack >= -1e-9,
            ScalarKind::Conv => slack <= 1e-9,
        };
        if ok || !shape_ok {
            continue;
        }
        shape_ok = false;
        shape_detail = format!("t-triple ({a:.3e}, {m:.3e}, {b:.3e}), relative gap {slack:.3e}");
    }
    probes.push(Probe {
        name: "positivity".into(),
        passed: positive,
        detail: "value > 0 on the probe grid".into(),
    });
    probes.push(Probe {
        name: match f.kind {
            ScalarKind::Conc => "midpoint concavity".into(),
            ScalarKind::Conv => "midpoint convexity".into(),
        },
        passed: shape_ok,
        detail: if shape_ok { "all triples".into() } else { shape_detail },
    });

    match f.homogeneity {
        Some(r) => {
            // Degree already range-checked by the constructor; verify the
            // scaling identity numerically.
            let mut homog_ok = true;
            let mut detail = String::new();
            for (lambda, t) in [(9.0, 1.0), (0.37, 2.5), (4.0, 0.2), (1.7, 11.0)] {
                let lhs = eval(lambda * t);
                let rhs = lambda.powf(r) * eval(t);
                let rel = (lhs - rhs).abs() / rhs.abs().max(1e-300);
                if rel > 1e-12 {
                    homog_ok = false;
                    detail = format!("lambda {lambda}, t {t}: relative error {rel:.3e}");
                    break;
                }
            }
            probes.push(Probe {
                name: "homogeneity".into(),
                passed: homog_ok,
                detail: if homog_ok { format!("degree {r}") } else { detail },
            });
            let limits_ok = match f.kind {
                ScalarKind::Conc => (0.0..1.0).contains(&r),
                ScalarKind::Conv => r <= 0.0,
            };
            probes.push(Probe {
                name: "limits (from degree)".into(),
                passed: limits_ok,
                detail: format!("power degree {r}"),
            });
        }
        None => {
            // Constants are admissible in both classes and are exempt from
            // the limit probes.
            let near_small = eval(LIMIT_PROBE_SMALL);
            let near_large = eval(LIMIT_PROBE_LARGE);
            let is_constant = (near_small - v1).abs() <= 1e-12 * v1.abs()
                && (near_large - v1).abs() <= 1e-12 * v1.abs();
            if is_constant {
                probes.push(Probe {
                    name: "constant member".into(),
                    passed: v1 > 0.0,
                    detail: format!("value {v1}"),
                });
            } else {
                match f.kind {
                    ScalarKind::Conc => {
                        probes.push(Probe {
                            name: "limit at 0".into(),
                            passed: near_small <= LIMIT_REL * v1,
                            detail: format!(
                                "value {near_small:.3e} at t = {LIMIT_PROBE_SMALL:.0e}"
                            ),
                        });
                        let ratio = near_large / LIMIT_PROBE_LARGE;
                        probes.push(Probe {
                            name: "limit of value/t at infinity".into(),
                            passed: ratio <= LIMIT_REL * v1,
                            detail: format!("value/t = {ratio:.3e} at t = {LIMIT_PROBE_LARGE:.0e}"),
                        });
                    }
                    ScalarKind::Conv => {
                        probes.push(Probe {
                            name: "blow-up at 0".into(),
                            passed: near_small >= v1 / LIMIT_REL,
                            detail: format!(
                                "value {near_small:.3e} at t = {LIMIT_PROBE_SMALL:.0e}"
                            ),
                        });
                        probes.push(Probe {
                            name: "limit at infinity".into(),
                            passed: near_large <= LIMIT_REL * v1,
                            detail: format!("value {near_large:.3e} at t = {LIMIT_PROBE_LARGE:.0e}"),
                        });
                    }
                }
            }
        }
    }

    ValidationReport { probes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_conc_examples() {
        let phi = ScalarClassFn::power_conc(1.0, 0.5).unwrap();
        assert!((phi.eval(4.0) - 2.0).abs() < 1e-15);
        // p-to-degree map: p = 2, n = 2 gives p/(n+p) = 0.5.
        let (p, n) = (2.0f64, 2.0f64);
        assert!((p / (n + p) - 0.5).abs() < 1e-15);
        // Homogeneity: phi(9 * 1) = 3 * phi(1).
        assert!((phi.eval(9.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn power_conv_examples() {
        let psi = ScalarClassFn::power_conv(1.0, -1.0).unwrap();
        assert!((psi.eval(2.0) - 0.5).abs() < 1e-15);
        // Star regime map: p = -4, n = 2 gives n/(n+p) = -1.
        let (p, n) = (-4.0f64, 2.0f64);
        assert!((n / (n + p) + 1.0).abs() < 1e-15);
        let constant = ScalarClassFn::power_conv(1.0, 0.0).unwrap();
        assert_eq!(constant.eval(17.0), 1.0);
    }

    #[test]
    fn degree_ranges_enforced() {
        assert!(ScalarClassFn::power_conc(1.0, 1.0).is_err());
        assert!(ScalarClassFn::power_conc(1.0, -0.1).is_err());
        assert!(ScalarClassFn::power_conv(1.0, 0.1).is_err());
        assert!(ScalarClassFn::power_conc(0.0, 0.5).is_err());
    }

    #[test]
    fn named_members() {
        let log1p = ScalarClassFn::named(NamedFn::Log1p).unwrap();
        assert!((log1p.eval(std::f64::consts::E - 1.0) - 1.0).abs() < 1e-14);
        let br = ScalarClassFn::named(NamedFn::BoundedRatio).unwrap();
        // value/t = 1/(1+t), about 1e-8 at the limit probe point.
        assert!((br.eval(1e8) / 1e8 - 1e-8).abs() < 1e-12);
        let ec = ScalarClassFn::named(NamedFn::ExpConv).unwrap();
        assert!(ec.eval(1e8) < 1e-7);
    }

    #[test]
    fn rejects_wrong_shape() {
        let err = ScalarClassFn::custom(ScalarKind::Conc, |t| t * t).unwrap_err();
        assert!(err.to_string().contains("concavity"), "{err}");
    }

    #[test]
    fn rejects_wrong_limit() {
        // exp(1/t) tends to 1, not 0, at infinity.
        let err = ScalarClassFn::custom(ScalarKind::Conv, |t| (1.0 / t).exp()).unwrap_err();
        assert!(err.to_string().contains("infinity"), "{err}");
    }

    #[test]
    fn reciprocal_product_identity() {
        for (c, r, kind) in [
            (1.0, 0.5, ScalarKind::Conc),
            (2.5, 0.3, ScalarKind::Conc),
            (1.0, -1.0, ScalarKind::Conv),
            (0.7, -2.2, ScalarKind::Conv),
        ] {
            let f = match kind {
                ScalarKind::Conc => ScalarClassFn::power_conc(c, r).unwrap(),
                ScalarKind::Conv => ScalarClassFn::power_conv(c, r).unwrap(),
            };
            let f1 = f.value_at_one();
            for i in 0..32 {
                let t = 10f64.powf(-4.0 + 8.0 * i as f64 / 31.0);
                let prod = f.eval(t) * f.eval(1.0 / t);
                assert!(
                    (prod - f1 * f1).abs() <= 1e-12 * (f1 * f1),
                    "t = {t}: {prod} vs {}",
                    f1 * f1
                );
            }
        }
    }

    #[test]
    fn boundary_conventions() {
        let phi = ScalarClassFn::power_conc(1.0, 0.5).unwrap();
        assert_eq!(phi.eval(0.0), 0.0);
        let psi = ScalarClassFn::power_conv(1.0, -1.0).unwrap();
        assert_eq!(psi.eval(0.0), f64::INFINITY);
        let c = ScalarClassFn::power_conv(3.0, 0.0).unwrap();
        assert_eq!(c.eval(0.0), 3.0);
    }

    #[test]
    fn document_roundtrip() {
        let doc: ScalarDoc =
            serde_json::from_str(r#"{"type":"power-conc","c":1.0,"r":0.5}"#).unwrap();
        let f = doc.build().unwrap();
        assert_eq!(f.kind(), ScalarKind::Conc);
        let named: ScalarDoc = serde_json::from_str(r#"{"type":"named","name":"log1p"}"#).unwrap();
        assert!(named.build().is_ok());
        let round = serde_json::to_string(&f.descriptor()).unwrap();
        assert!(round.contains("power-conc"));
    }
}
