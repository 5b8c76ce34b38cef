//! Canonical test varieties, complete inside `D(0, 2^n_max)`.

use std::fmt;
use std::str::FromStr;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mp;
use crate::variety::MultiplicityVariety;

/// Largest supported `n_max` for generated varieties.
pub const MAX_OCTAVE: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", content = "value", rename_all = "snake_case")]
pub enum MultRule {
    /// Every point gets the same multiplicity.
    Const(u32),
    /// The `k`-th generated point gets multiplicity `k`.
    Index,
}

impl MultRule {
    fn mult(&self, k: usize) -> u32 {
        match *self {
            MultRule::Const(m) => m,
            MultRule::Index => k as u32,
        }
    }
}

impl FromStr for MultRule {
    type Err = Error;

    /// `const:<k>` or `index`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "index" => Ok(MultRule::Index),
            other => {
                let k = other
                    .strip_prefix("const:")
                    .and_then(|k| k.parse::<u32>().ok())
                    .filter(|k| *k > 0)
                    .ok_or_else(|| Error::invalid(format!("bad multiplicity rule '{other}'")))?;
                Ok(MultRule::Const(k))
            }
        }
    }
}

impl fmt::Display for MultRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultRule::Const(k) => write!(f, "const:{k}"),
            MultRule::Index => write!(f, "index"),
        }
    }
}

fn check_octave(n_max: u32) -> Result<f64> {
    if n_max > MAX_OCTAVE {
        return Err(Error::invalid(format!(
            "n_max {n_max} exceeds {MAX_OCTAVE}"
        )));
    }
    Ok((2.0f64).powi(n_max as i32))
}

/// `{pi k : |pi k| <= 2^n_max}`, including the origin, in generation order
/// `0, pi, -pi, 2 pi, -2 pi, ...`.
pub fn pi_lattice(n_max: u32, rule: MultRule, bits: u32) -> Result<MultiplicityVariety> {
    mp::check_bits(bits)?;
    let radius = Float::with_val(bits, check_octave(n_max)?);
    let pi = Float::with_val(bits, Constant::Pi);
    let mut pts = vec![(mp::zero(bits), rule.mult(1))];
    let mut k = 1u32;
    loop {
        let x = Float::with_val(bits, &pi * k);
        if x > radius {
            break;
        }
        let idx = pts.len();
        pts.push((Complex::with_val(bits, (&x, 0)), rule.mult(idx + 1)));
        pts.push((Complex::with_val(bits, (-x, 0)), rule.mult(idx + 2)));
        k += 1;
    }
    MultiplicityVariety::truncated(pts, n_max)
}

/// `{1, ..., 2^n_max}`, optionally with the origin prepended.
pub fn integers(
    n_max: u32,
    rule: MultRule,
    include_origin: bool,
    bits: u32,
) -> Result<MultiplicityVariety> {
    mp::check_bits(bits)?;
    let top = check_octave(n_max)? as u64;
    let start = if include_origin { 0 } else { 1 };
    let pts = (start..=top)
        .enumerate()
        .map(|(i, k)| (Complex::with_val(bits, (k, 0)), rule.mult(i + 1)))
        .collect();
    MultiplicityVariety::truncated(pts, n_max)
}

/// Ratio of a geometric variety: a decimal number or `sqrt:<x>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", content = "value", rename_all = "snake_case")]
pub enum Ratio {
    Value(f64),
    Sqrt(f64),
}

impl Ratio {
    /// `ratio^k`; even powers of a square root are computed without the root.
    fn power(self, k: u32, bits: u32) -> Float {
        match self {
            Ratio::Value(r) => Float::with_val(bits, r).pow(k),
            Ratio::Sqrt(x) => {
                let mut out = Float::with_val(bits, x).pow(k / 2);
                if k % 2 == 1 {
                    out *= Float::with_val(bits, x).sqrt();
                }
                out
            }
        }
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("bad ratio '{s}'"));
        let r = match s.strip_prefix("sqrt:") {
            Some(x) => Ratio::Sqrt(x.parse().map_err(|_| bad())?),
            None => Ratio::Value(s.parse().map_err(|_| bad())?),
        };
        let value = match r {
            Ratio::Value(v) => v,
            Ratio::Sqrt(x) => x.sqrt(),
        };
        if !(value.is_finite() && value > 1.0) {
            return Err(Error::invalid(format!("ratio must exceed 1, got {s}")));
        }
        Ok(r)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Value(r) => write!(f, "{r}"),
            Ratio::Sqrt(x) => write!(f, "sqrt:{x}"),
        }
    }
}

/// `{ratio^k : k >= 1, ratio^k <= 2^n_max}`.
pub fn geometric(
    n_max: u32,
    ratio: Ratio,
    rule: MultRule,
    bits: u32,
) -> Result<MultiplicityVariety> {
    mp::check_bits(bits)?;
    let radius = Float::with_val(bits, check_octave(n_max)?);
    let mut pts = Vec::new();
    for k in 1u32.. {
        let x = ratio.power(k, bits);
        if x > radius {
            break;
        }
        pts.push((Complex::with_val(bits, (&x, 0)), rule.mult(k as usize)));
    }
    MultiplicityVariety::truncated(pts, n_max)
}
