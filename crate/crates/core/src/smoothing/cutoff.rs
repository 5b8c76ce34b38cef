//! The cutoff `chi` and the dyadic partition of unity built from it.
//!
//! `chi(x) = h((4 - |x|)/3)` with `h(t) = phi(t)/(phi(t) + phi(1 - t))` and
//! `phi(t) = exp(-1/t)` for `t > 0`, `0` otherwise. It equals 1 on `|x| <= 1`
//! and 0 on `|x| >= 4`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiValue {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// `h`, `h'` and `h''` on `0 < t < 1`.
fn smoothstep(t: f64) -> (f64, f64, f64) {
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    let s = a + b;
    let h = a / s;
    if a == 0.0 || b == 0.0 {
        return (h, 0.0, 0.0);
    }
    let g = 1.0 - t;
    // h' = u h (1 - h) with u = 1/t^2 + 1/(1-t)^2.
    let ha = a / s;
    let hb = b / s;
    let u = 1.0 / (t * t) + 1.0 / (g * g);
    let du = -2.0 / (t * t * t) + 2.0 / (g * g * g);
    let d1 = u * ha * hb;
    let d2 = du * ha * hb + u * d1 * (hb - ha);
    (h, d1, d2)
}

/// `chi(x)` with its first two derivatives, in closed form.
pub fn chi_eval(x: f64) -> ChiValue {
    let ax = x.abs();
    if ax <= 1.0 {
        return ChiValue {
            value: 1.0,
            d1: 0.0,
            d2: 0.0,
        };
    }
    if ax >= 4.0 {
        return ChiValue {
            value: 0.0,
            d1: 0.0,
            d2: 0.0,
        };
    }
    let (h, dh, d2h) = smoothstep((4.0 - ax) / 3.0);
    ChiValue {
        value: h,
        d1: -x.signum() * dh / 3.0,
        d2: d2h / 9.0,
    }
}

fn scaled_norm(n: u32, re: f64, im: f64) -> f64 {
    (re * re + im * im) / 4f64.powi(n as i32)
}

/// `X_n(z) = chi(|z|^2 / 4^n)`.
pub fn cutoff(n: u32, re: f64, im: f64) -> f64 {
    chi_eval(scaled_norm(n, re, im)).value
}

/// `dbar X_n(z) = chi'(|z|^2/4^n) z / 4^n`, as `(re, im)`.
pub fn dbar_cutoff(n: u32, re: f64, im: f64) -> (f64, f64) {
    let scale = 4f64.powi(n as i32);
    let d1 = chi_eval((re * re + im * im) / scale).d1;
    (d1 * re / scale, d1 * im / scale)
}

/// `rho_0 = X_0`, `rho_n = X_n - X_{n-1}`; supported in
/// `2^{n-1} <= |z| <= 2^{n+1}` for `n >= 1`.
pub fn partition_rho(n: u32, re: f64, im: f64) -> f64 {
    if n == 0 {
        cutoff(0, re, im)
    } else {
        cutoff(n, re, im) - cutoff(n - 1, re, im)
    }
}

/// `dbar rho_n`, as `(re, im)`.
pub fn dbar_rho(n: u32, re: f64, im: f64) -> (f64, f64) {
    let (a, b) = dbar_cutoff(n, re, im);
    if n == 0 {
        return (a, b);
    }
    let (c, d) = dbar_cutoff(n - 1, re, im);
    (a - c, b - d)
}

/// Indices `n` with `rho_n(z) != 0` (at most two).
pub fn active_rho(re: f64, im: f64) -> Vec<u32> {
    let r = re.hypot(im);
    let top = if r <= 1.0 {
        0
    } else {
        r.log2().ceil() as u32 + 1
    };
    (top.saturating_sub(2)..=top)
        .filter(|&n| partition_rho(n, re, im) != 0.0)
        .collect()
}
