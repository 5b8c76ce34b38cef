//! Small helpers around rug's binary floating point.

use rug::float::Round;
use rug::ops::CompleteRound;
use rug::{Complex, Float};

use crate::error::{Error, Result};

pub const MIN_BITS: u32 = 64;
pub const DEFAULT_BITS: u32 = 128;

/// Precision used for magnitudes and logarithms that only feed diagnostics.
pub const LOG_BITS: u32 = 64;

pub fn check_bits(bits: u32) -> Result<()> {
    if bits < MIN_BITS {
        return Err(Error::invalid(format!(
            "precision_bits must be at least {MIN_BITS}, got {bits}"
        )));
    }
    Ok(())
}

pub fn parse_float(text: &str, bits: u32) -> Option<Float> {
    Float::parse(text.trim())
        .ok()
        .map(|p| p.complete(bits))
        .filter(|f| f.is_finite())
}

pub fn zero(bits: u32) -> Complex {
    Complex::new(bits)
}

pub fn one(bits: u32) -> Complex {
    Complex::with_val(bits, 1)
}

pub fn from_f64(re: f64, im: f64, bits: u32) -> Complex {
    Complex::with_val(bits, (re, im))
}

pub fn to_f64_pair(z: &Complex) -> (f64, f64) {
    (z.real().to_f64(), z.imag().to_f64())
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(LOG_BITS, z.abs_ref())
}

/// `log2 |x|` to about f64 accuracy without a full-precision logarithm;
/// `-inf` for zero.
pub fn log2_abs_float(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + f64::from(e)
}

/// `log2 |z|` in the same way as [`log2_abs_float`].
pub fn log2_abs(z: &Complex) -> f64 {
    log2_add(
        2.0 * log2_abs_float(z.real()),
        2.0 * log2_abs_float(z.imag()),
    ) / 2.0
}

/// `log2(2^a + 2^b)`.
pub fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// `ln |z|`, `-inf` for zero. Works far outside the f64 exponent range.
pub fn ln_abs(z: &Complex) -> f64 {
    if z.real().is_zero() && z.imag().is_zero() {
        return f64::NEG_INFINITY;
    }
    abs(z).ln().to_f64()
}

/// Relative distance `|a - b| / |b|`; absolute distance when `b` is zero.
pub fn rel_err(a: &Complex, b: &Complex) -> f64 {
    let prec = a.prec().0.max(b.prec().0);
    let diff = Complex::with_val(prec, a - b);
    let num = ln_abs(&diff);
    if num == f64::NEG_INFINITY {
        return 0.0;
    }
    let den = ln_abs(b);
    if den == f64::NEG_INFINITY {
        return num.exp();
    }
    (num - den).exp()
}

/// Decimal digits that round-trip a value of the given binary precision.
pub fn digits_for(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

pub fn fmt_float(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let text = x.to_string_radix_round(10, Some(digits_for(x.prec())), Round::Nearest);
    let (mantissa, exp) = match text.find('e') {
        Some(i) => text.split_at(i),
        None => (text.as_str(), ""),
    };
    if !mantissa.contains('.') {
        return text;
    }
    let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
    format!("{mantissa}{exp}")
}

/// Squared modulus carried with enough bits to be exact for finite inputs.
pub fn norm_exact(z: &Complex) -> Float {
    let bits = 2 * z.prec().0.max(z.prec().1) + 8;
    Float::with_val(bits, z.norm_ref())
}

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
