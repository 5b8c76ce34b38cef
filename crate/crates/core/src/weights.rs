//! Radial weights `p` governing the admissible growth of entire functions.
//!
//! Only the three classical weights are supported: `ln(1 + |z|^2)`, `|z|`
//! and `|z|^alpha`. Each is radial and subharmonic by construction, so the
//! only properties left to check numerically are the logarithmic lower
//! bound and the doubling constant.

use std::fmt;
use std::str::FromStr;

use rug::Complex;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// `p(r) = r^alpha`.
    Power { alpha: f64 },
    /// `p(r) = ln(1 + r^2)`.
    LogPoly,
    /// `p(r) = r`, the weight of entire functions of exponential type.
    ExpType,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Weight {
    pub kind: WeightKind,
    /// Empirical `sup p(2r)/p(r)` on the default dyadic grid.
    pub doubling_constant: f64,
}

impl Weight {
    pub fn new(kind: WeightKind) -> Result<Self> {
        if let WeightKind::Power { alpha } = kind {
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(Error::invalid(format!(
                    "power weight needs a positive exponent, got {alpha}"
                )));
            }
        }
        let mut w = Weight {
            kind,
            doubling_constant: f64::NAN,
        };
        let grid: Vec<f64> = (0..=20).map(|k| (2.0f64).powi(k)).collect();
        w.doubling_constant = w.verify_axioms(&grid, &AxiomCaps::default())?.doubling_sup;
        Ok(w)
    }

    pub fn power(alpha: f64) -> Result<Self> {
        Self::new(WeightKind::Power { alpha })
    }

    pub fn log_poly() -> Self {
        Self::new(WeightKind::LogPoly).expect("log weight is always valid")
    }

    pub fn exp_type() -> Self {
        Self::new(WeightKind::ExpType).expect("exponential-type weight is always valid")
    }

    /// `p(r)` for a modulus `r >= 0`.
    pub fn eval_radius(&self, r: f64) -> f64 {
        let r = r.abs();
        match self.kind {
            WeightKind::Power { alpha } if alpha == 1.0 => r,
            WeightKind::Power { alpha } => r.powf(alpha),
            WeightKind::LogPoly => (r * r).ln_1p(),
            WeightKind::ExpType => r,
        }
    }

    pub fn eval(&self, z: &Complex) -> f64 {
        self.eval_radius(crate::mp::abs(z).to_f64())
    }

    pub fn eval_f64(&self, re: f64, im: f64) -> f64 {
        self.eval_radius(re.hypot(im))
    }

    /// Checks the logarithmic lower bound and the doubling property on a
    /// finite sample of radii. Suprema are empirical.
    pub fn verify_axioms(&self, r_samples: &[f64], caps: &AxiomCaps) -> Result<AxiomReport> {
        if r_samples.is_empty() {
            return Err(Error::invalid(
                "weight axiom check needs at least one radius",
            ));
        }
        if let Some(bad) = r_samples.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::invalid(format!(
                "sample radius {bad} is not positive"
            )));
        }
        let mut samples = Vec::with_capacity(r_samples.len());
        let mut zero_radii = Vec::new();
        let mut log_bound_sup = f64::NEG_INFINITY;
        let mut doubling_sup = f64::NEG_INFINITY;
        for &r in r_samples {
            let p = self.eval_radius(r);
            if p == 0.0 {
                zero_radii.push(r);
                continue;
            }
            let log_ratio = (r * r).ln_1p() / p;
            let doubling = self.eval_radius(2.0 * r) / p;
            log_bound_sup = log_bound_sup.max(log_ratio);
            doubling_sup = doubling_sup.max(doubling);
            samples.push(AxiomSample {
                r,
                log_ratio,
                doubling_ratio: doubling,
            });
        }
        let growth_exponent = match self.kind {
            WeightKind::Power { alpha } => Some(alpha),
            WeightKind::ExpType => Some(1.0),
            WeightKind::LogPoly => None,
        };
        Ok(AxiomReport {
            label: "empirical",
            log_bound_pass: log_bound_sup.is_finite() && log_bound_sup <= caps.log_bound,
            doubling_pass: doubling_sup.is_finite() && doubling_sup <= caps.doubling,
            samples,
            zero_radii,
            log_bound_sup,
            doubling_sup,
            growth_exponent,
        })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WeightKind::Power { alpha } => write!(f, "power:{alpha}"),
            WeightKind::LogPoly => write!(f, "logpoly"),
            WeightKind::ExpType => write!(f, "exptype"),
        }
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Accepts `power:<alpha>`, `logpoly` and `exptype`, optionally prefixed
    /// with `weight=`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix("weight=").unwrap_or(s);
        match s {
            "logpoly" | "log_poly" => Ok(Weight::log_poly()),
            "exptype" | "exp_type" => Ok(Weight::exp_type()),
            _ => {
                let alpha = s
                    .strip_prefix("power:")
                    .ok_or_else(|| Error::invalid(format!("unknown weight '{s}'")))?;
                let alpha: f64 = alpha
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad power exponent '{alpha}'")))?;
                Weight::power(alpha)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AxiomCaps {
    /// Cap on `sup ln(1 + r^2) / p(r)`.
    pub log_bound: f64,
    /// Cap on `sup p(2r) / p(r)`.
    pub doubling: f64,
}

impl Default for AxiomCaps {
    fn default() -> Self {
        AxiomCaps {
            log_bound: 1e3,
            doubling: 1e3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomSample {
    pub r: f64,
    pub log_ratio: f64,
    pub doubling_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub label: &'static str,
    pub samples: Vec<AxiomSample>,
    /// Radii where `p(r) = 0`; excluded from the ratios.
    pub zero_radii: Vec<f64>,
    pub log_bound_sup: f64,
    pub doubling_sup: f64,
    pub log_bound_pass: bool,
    pub doubling_pass: bool,
    /// `alpha` with `p(r) = O(r^alpha)`, known structurally for power weights.
    pub growth_exponent: Option<f64>,
}
