//! Oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Complex, Float};
use varkit::divdiff::{phi_table_tableau, ValueSequence};
use varkit::generate::{geometric, MultRule, Ratio};
use varkit::mp;
use varkit::smoothing::SmoothInterpolant;
use varkit::MultiplicityVariety;

pub const BITS: u32 = 256;

pub fn c(re: f64, im: f64) -> Complex {
    mp::from_f64(re, im, BITS)
}

pub fn unit_disc_value(rng: &mut ChaCha8Rng) -> Complex {
    let r: f64 = rng.gen_range(0.0..1.0);
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    c(r * t.cos(), r * t.sin())
}

pub fn random_values(v: &MultiplicityVariety, seed: u64) -> ValueSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ValueSequence::from_fn(v, |_, _| unit_disc_value(&mut rng)).unwrap()
}

/// Geometric variety of ratio sqrt 2 with double points and random values
/// of modulus at most 1.
pub fn geometric_interpolant(n_max: u32, seed: u64) -> (SmoothInterpolant, ValueSequence) {
    let v = geometric(n_max, Ratio::Sqrt(2.0), MultRule::Const(2), BITS).unwrap();
    let w = random_values(&v, seed);
    let t = phi_table_tableau(&v, &w, v.len(), BITS).unwrap();
    (SmoothInterpolant::new(v, t).unwrap(), w)
}

/// `chi` evaluated in extended precision.
pub fn chi_mp(x: &Float) -> Float {
    let bits = x.prec();
    if *x <= 1 {
        return Float::with_val(bits, 1);
    }
    if *x >= 4 {
        return Float::new(bits);
    }
    let t = Float::with_val(bits, 4 - x) / 3;
    let a = Float::with_val(bits, -1 / Float::with_val(bits, &t)).exp();
    let b = Float::with_val(bits, -1 / Float::with_val(bits, 1 - &t)).exp();
    let s = Float::with_val(bits, &a + &b);
    a / s
}

/// `F` with the partition evaluated in extended precision too, so that
/// finite differences resolve `dbar F` even where it is tiny against `F`.
pub fn f_mp(f: &SmoothInterpolant, z: &Complex) -> Complex {
    let bits = z.prec().0;
    let norm = Float::with_val(bits, z.norm_ref());
    let (re, im) = mp::to_f64_pair(z);
    let top = re.hypot(im).log2().ceil().max(0.0) as u32 + 2;
    let mut out = mp::zero(bits);
    let mut prev = Float::new(bits);
    for k in 0..=top {
        let x = Float::with_val(bits, &norm / Float::with_val(bits, 4).pow(k));
        let chi = chi_mp(&x);
        let rho = Float::with_val(bits, &chi - &prev);
        prev = chi;
        if !rho.is_zero() {
            out += f.newton(f.q(k + 2), z).unwrap() * rho;
        }
    }
    out
}

/// `(d/dx + i d/dy)/2` by a central difference of step `h`.
pub fn wirtinger_dbar(f: &SmoothInterpolant, z: &Complex, h: &Float) -> Complex {
    let bits = z.prec().0;
    let i = Complex::with_val(bits, (0, 1));
    let ih = Complex::with_val(bits, &i * h);
    let fx = f_mp(f, &Complex::with_val(bits, z + h)) - f_mp(f, &Complex::with_val(bits, z - h));
    let fy =
        f_mp(f, &Complex::with_val(bits, z + &ih)) - f_mp(f, &Complex::with_val(bits, z - &ih));
    Complex::with_val(bits, fx + fy * i) / Float::with_val(bits, h * 4)
}

/// Largest relative deviation of `eval_dbar_f` from the finite-difference
/// oracle over `count` random points of the transition annuli
/// `2^k < |z| < 2^{k+1}`, `k < 6`.
pub fn worst_dbar_deviation(f: &SmoothInterpolant, count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0f64;
    for _ in 0..count {
        let k: i32 = rng.gen_range(0..6);
        let r = 2f64.powi(k) * rng.gen_range(1.05..1.95);
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let z = c(r * t.cos(), r * t.sin());
        let got = f.eval_dbar_f(&z).unwrap();
        let want = wirtinger_dbar(f, &z, &Float::with_val(BITS, 1e-20 * r));
        let scale = mp::abs(&want).to_f64().max(1e-300);
        let err = mp::abs(&Complex::with_val(BITS, &got - &want)).to_f64() / scale;
        worst = worst.max(err);
    }
    worst
}

/// Samples on the annulus `2^{n-2} <= |z| < 2^{n-1}` of
/// `ln(|dbar F| 2^{n M_n} / prod_{k <= q_n} |z - z_k|^{m_k})`.
pub fn normalized_dbar(f: &SmoothInterpolant, n: u32) -> Vec<f64> {
    let v = f.variety();
    let q = f.q(n);
    let m_total: f64 = v.points()[..q].iter().map(|p| f64::from(p.mult)).sum();
    let mut out = Vec::new();
    let lo = 2f64.powi(n as i32 - 2);
    for i in 0..16 {
        let r = lo * (1.0 + i as f64 / 16.0);
        for s in 0..32 {
            let t = std::f64::consts::TAU * (s as f64 + 0.5) / 32.0;
            let z = c(r * t.cos(), r * t.sin());
            let d = mp::ln_abs(&f.eval_dbar_f(&z).unwrap());
            let node: f64 = v.points()[..q]
                .iter()
                .map(|p| f64::from(p.mult) * mp::ln_abs(&Complex::with_val(BITS, &z - &p.z)))
                .sum();
            out.push(d + n as f64 * m_total * 2f64.ln() - node);
        }
    }
    out
}

/// `int_0^t f(s)/s^2 ds` with `f(s) = int_0^s n(0, u) du`, by composite
/// Simpson in `ln s` between consecutive moduli (the integrand is smooth
/// there, `f` being affine).
pub fn g_by_quadrature(v: &MultiplicityVariety, t: f64) -> f64 {
    const STEPS: usize = 256;
    let mut breaks: Vec<(f64, f64)> = Vec::new();
    for p in v.points().iter().filter(|p| p.modulus() > 0.0) {
        match breaks.last_mut() {
            Some(last) if last.0 == p.modulus() => last.1 += f64::from(p.mult),
            _ => breaks.push((p.modulus(), f64::from(p.mult))),
        }
    }
    // On [a_i, a_{i+1}): f(s) = slope * s - offset.
    let (mut slope, mut offset) = (0.0, 0.0);
    let mut total = 0.0;
    for (i, &(a, m)) in breaks.iter().enumerate() {
        if a >= t {
            break;
        }
        slope += m;
        offset += m * a;
        let b = breaks.get(i + 1).map_or(t, |n| n.0.min(t));
        let (u0, u1) = (a.ln(), b.ln());
        let du = (u1 - u0) / STEPS as f64;
        let integrand = |u: f64| {
            let s = u.exp();
            (slope * s - offset) / s
        };
        let mut acc = integrand(u0) + integrand(u1);
        for k in 1..STEPS {
            acc += integrand(u0 + k as f64 * du) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        total += acc * du / 3.0;
    }
    total
}
