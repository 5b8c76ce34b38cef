use serde::Serialize;

use super::cutoff::{active_rho, partition_rho};
use super::grid::{axis, default_radius, GridSpec};
use crate::error::{Error, Result};
use crate::variety::MultiplicityVariety;

/// Largest `alpha` tried by [`fit_alpha`].
pub const ALPHA_CAP: f64 = (1u64 << 20) as f64;

/// Tolerance of the discrete Laplacian test, in units of `h^-2`.
pub const LAPLACIAN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
struct ScaledPoint {
    re: f64,
    im: f64,
    modulus: f64,
    mult: f64,
}

/// `U = V + alpha W` with `V = sum_{n >= 2} rho_{n-2} V_n`,
/// `V_n(z) = sum_{0 < |z_j| <= 2^n} m_j ln(|z - z_j|^2/|z_j|^2)` (plus
/// `m_1 ln|z|^2` when `z_1 = 0`) and the radial correction `W(z) = g(8|z|)`.
///
/// The construction wants every non-zero point outside `D(0, 2)`; the
/// variety is first scaled by the smallest power of 2 achieving that and all
/// arguments are mapped through the same scaling, so callers work in the
/// original coordinates.
#[derive(Debug, Clone)]
pub struct Potential {
    scale: f64,
    /// Radius of completeness in original coordinates.
    trusted: f64,
    points: Vec<ScaledPoint>,
    origin_mult: f64,
    alpha: f64,
}

/// `g(t) = sum_{0 < |z_j| <= t} m_j [ln(t/|z_j|) + |z_j|/t - 1]`, the exact
/// value of `int_0^t f(s)/s^2 ds` with `f(s) = int_0^s n(0, u) du` once the
/// points at the origin are left out.
pub fn correction_g(v: &MultiplicityVariety, t: f64) -> Result<f64> {
    v.check_disc(0.0, t)?;
    Ok(g_of(
        v.points()
            .iter()
            .filter(|p| p.modulus() > 0.0)
            .map(|p| (p.modulus(), f64::from(p.mult))),
        t,
    ))
}

fn g_of(points: impl Iterator<Item = (f64, f64)>, t: f64) -> f64 {
    let mut acc = 0.0;
    for (a, m) in points {
        if a > t {
            break;
        }
        acc += m * log_excess(1.0 - a / t);
    }
    acc
}

/// `-ln(1 - x) - x = sum_{k >= 2} x^k / k` for `0 <= x < 1`, without the
/// cancellation of the direct form near 0.
fn log_excess(x: f64) -> f64 {
    if x > 0.25 {
        return -(-x).ln_1p() - x;
    }
    let mut term = x;
    let mut acc = 0.0;
    for k in 2..60 {
        term *= x;
        let next = acc + term / k as f64;
        if next == acc {
            break;
        }
        acc = next;
    }
    acc
}

/// `W(z) = g(8|z|)`.
pub fn eval_correction(v: &MultiplicityVariety, re: f64, im: f64) -> Result<f64> {
    correction_g(v, 8.0 * re.hypot(im))
}

impl Potential {
    pub fn new(v: &MultiplicityVariety, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::invalid(format!(
                "alpha must be non-negative, got {alpha}"
            )));
        }
        let min_mod = v
            .points()
            .iter()
            .map(|p| p.modulus())
            .find(|&r| r > 0.0)
            .unwrap_or(f64::INFINITY);
        let mut shift = 0u32;
        while min_mod * 2f64.powi(shift as i32) <= 2.0 {
            shift += 1;
        }
        let scale = 2f64.powi(shift as i32);
        let mut origin_mult = 0.0;
        let mut points = Vec::with_capacity(v.len());
        for p in v.points() {
            if p.modulus() == 0.0 {
                origin_mult += f64::from(p.mult);
                continue;
            }
            points.push(ScaledPoint {
                re: p.re() * scale,
                im: p.im() * scale,
                modulus: p.modulus() * scale,
                mult: f64::from(p.mult),
            });
        }
        Ok(Potential {
            scale,
            trusted: v.trusted_radius(),
            points,
            origin_mult,
            alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// The power of 2 applied to the variety.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `2^{n_max - 2}`: where `V` is determined. Unbounded for a finite
    /// variety.
    pub fn v_radius(&self) -> f64 {
        self.trusted / 4.0
    }

    /// `2^{n_max - 3}`: where `W`, hence `U`, is determined.
    pub fn u_radius(&self) -> f64 {
        self.trusted / 8.0
    }

    fn guard(&self, re: f64, im: f64, radius: f64) -> Result<(f64, f64)> {
        let r = re.hypot(im);
        if r > radius {
            return Err(Error::Truncation {
                radius: r,
                trusted: radius,
            });
        }
        Ok((re * self.scale, im * self.scale))
    }

    fn v_scaled(&self, x: f64, y: f64) -> f64 {
        let active = active_rho(x, y);
        let mut total = 0.0;
        let origin = if self.origin_mult > 0.0 {
            self.origin_mult * (x * x + y * y).ln()
        } else {
            0.0
        };
        // V_n is cumulative in n; walk the points once.
        let mut partial = origin;
        let mut idx = 0;
        for k in active {
            let bound = 2f64.powi(k as i32 + 2);
            while idx < self.points.len() && self.points[idx].modulus <= bound {
                let p = &self.points[idx];
                let d2 = (x - p.re) * (x - p.re) + (y - p.im) * (y - p.im);
                partial += p.mult * (d2 / (p.modulus * p.modulus)).ln();
                idx += 1;
            }
            total += partition_rho(k, x, y) * partial;
        }
        total
    }

    fn w_scaled(&self, x: f64, y: f64) -> f64 {
        g_of(
            self.points.iter().map(|p| (p.modulus, p.mult)),
            8.0 * x.hypot(y),
        )
    }

    /// `V(z)`; `-inf` at the points.
    pub fn eval_v(&self, re: f64, im: f64) -> Result<f64> {
        let (x, y) = self.guard(re, im, self.v_radius())?;
        Ok(self.v_scaled(x, y))
    }

    /// The radial correction `W(z)`.
    pub fn eval_w(&self, re: f64, im: f64) -> Result<f64> {
        let (x, y) = self.guard(re, im, self.u_radius())?;
        Ok(self.w_scaled(x, y))
    }

    /// `U(z) = V(z) + alpha W(z)`.
    pub fn eval_u(&self, re: f64, im: f64) -> Result<f64> {
        let (x, y) = self.guard(re, im, self.u_radius())?;
        Ok(self.v_scaled(x, y) + self.alpha * self.w_scaled(x, y))
    }

    /// `U(z) - 2 m ln|z - z_j|` on circles of the given radii (decreasing)
    /// around the point `(re, im)` of multiplicity `m`.
    pub fn singularity_band(&self, re: f64, im: f64, mult: u32, radii: &[f64]) -> Result<Band> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut means = Vec::with_capacity(radii.len());
        for &r in radii {
            let mut sum = 0.0;
            for s in 0..BAND_ANGLES {
                let (sin, cos) = (std::f64::consts::TAU * s as f64 / BAND_ANGLES as f64).sin_cos();
                let u = self.eval_u(re + r * cos, im + r * sin)?;
                let d = u - 2.0 * f64::from(mult) * r.ln();
                lo = lo.min(d);
                hi = hi.max(d);
                sum += d;
            }
            means.push(sum / BAND_ANGLES as f64);
        }
        let drift = means
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max);
        Ok(Band {
            center: (re, im),
            min: lo,
            max: hi,
            width: hi - lo,
            drift,
            passed: drift.is_finite() && drift < std::f64::consts::LN_2,
            means,
        })
    }
}

const BAND_ANGLES: usize = 16;

/// A wrong multiplicity `m +- 1` moves the circle mean by `2 ln 2` per
/// halving of the radius, so the check passes when consecutive means differ
/// by less than `ln 2`.
#[derive(Debug, Clone, Serialize)]
pub struct Band {
    pub center: (f64, f64),
    pub min: f64,
    pub max: f64,
    pub width: f64,
    /// Mean over each circle, in the order of the radii.
    pub means: Vec<f64>,
    /// Largest change of the mean between consecutive radii.
    pub drift: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaFit {
    pub alpha: f64,
    /// Smallest discrete Laplacian of `V + alpha W` over the used centers.
    pub min_laplacian: f64,
    pub spacing: f64,
    pub centers: usize,
    /// Centers dropped for lying within `10 h` of a point or for a stencil
    /// leaving the domain.
    pub excluded: usize,
    /// `(alpha, min_laplacian)` for every tried `alpha`.
    pub history: Vec<(f64, f64)>,
    pub worst: (f64, f64),
}

/// Doubles `alpha` from 1 until the five-point Laplacian of `V + alpha W` is
/// at least `-1e-6 h^-2` at every usable grid center.
pub fn fit_alpha(v: &MultiplicityVariety, grid: &GridSpec) -> Result<AlphaFit> {
    let pot = Potential::new(v, 1.0)?;
    let radius = default_radius(v, pot.u_radius());
    let h = grid.spacing(radius);
    let near = |x: f64, y: f64| -> bool {
        let r = x.hypot(y);
        let k = v.points_within(r + 10.0 * h);
        v.points()[..k]
            .iter()
            .rev()
            .take_while(|p| p.modulus() >= r - 10.0 * h)
            .any(|p| (p.re() - x).hypot(p.im() - y) < 10.0 * h)
    };

    // (L_h V, L_h W, center) per usable center.
    let mut lap: Vec<(f64, f64, (f64, f64))> = Vec::new();
    let mut excluded = 0usize;
    let value = |x: f64, y: f64| -> Option<(f64, f64)> {
        if x.hypot(y) > radius {
            return None;
        }
        let (sx, sy) = (x * pot.scale, y * pot.scale);
        let vv = pot.v_scaled(sx, sy);
        vv.is_finite().then(|| (vv, pot.w_scaled(sx, sy)))
    };
    let stencil = |c: (f64, f64), e: (f64, f64), w: (f64, f64), n: (f64, f64), s: (f64, f64)| {
        (
            (e.0 + w.0 + n.0 + s.0 - 4.0 * c.0) / (h * h),
            (e.1 + w.1 + n.1 + s.1 - 4.0 * c.1) / (h * h),
        )
    };
    match grid.resolve(radius) {
        GridSpec::Cartesian { nx, ny, extent } => {
            let e = extent.unwrap_or(radius);
            let hy = if ny < 2 { h } else { 2.0 * e / (ny - 1) as f64 };
            if (hy - h).abs() > 1e-12 * h {
                return Err(Error::invalid(
                    "the Laplacian stencil needs equal x and y spacing",
                ));
            }
            let vals: Vec<Option<(f64, f64)>> = (0..ny)
                .flat_map(|j| (0..nx).map(move |i| (i, j)))
                .map(|(i, j)| value(axis(i, nx, e), axis(j, ny, e)))
                .collect();
            let at = |i: usize, j: usize| vals[j * nx + i];
            for j in 0..ny {
                for i in 0..nx {
                    let c = (axis(i, nx, e), axis(j, ny, e));
                    let inner = i > 0 && j > 0 && i + 1 < nx && j + 1 < ny;
                    if !inner || near(c.0, c.1) {
                        excluded += 1;
                        continue;
                    }
                    match (
                        at(i, j),
                        at(i + 1, j),
                        at(i - 1, j),
                        at(i, j + 1),
                        at(i, j - 1),
                    ) {
                        (Some(a), Some(b), Some(cc), Some(d), Some(f)) => {
                            let (lv, lw) = stencil(a, b, cc, d, f);
                            lap.push((lv, lw, c));
                        }
                        _ => excluded += 1,
                    }
                }
            }
        }
        polar @ GridSpec::Polar { .. } => {
            for c in polar.points(radius) {
                if near(c.0, c.1) {
                    excluded += 1;
                    continue;
                }
                let pts = [
                    c,
                    (c.0 + h, c.1),
                    (c.0 - h, c.1),
                    (c.0, c.1 + h),
                    (c.0, c.1 - h),
                ];
                let vals: Option<Vec<(f64, f64)>> = pts.iter().map(|p| value(p.0, p.1)).collect();
                match vals {
                    Some(vs) => {
                        let (lv, lw) = stencil(vs[0], vs[1], vs[2], vs[3], vs[4]);
                        lap.push((lv, lw, c));
                    }
                    None => excluded += 1,
                }
            }
        }
    }

    let floor = -LAPLACIAN_TOL / (h * h);
    let mut history = Vec::new();
    let mut alpha = 1.0;
    loop {
        let (min, worst) = lap.iter().map(|&(lv, lw, c)| (lv + alpha * lw, c)).fold(
            (f64::INFINITY, (0.0, 0.0)),
            |acc, x| if x.0 < acc.0 { x } else { acc },
        );
        let min = if lap.is_empty() { 0.0 } else { min };
        history.push((alpha, min));
        if min >= floor {
            return Ok(AlphaFit {
                alpha,
                min_laplacian: min,
                spacing: h,
                centers: lap.len(),
                excluded,
                history,
                worst,
            });
        }
        if alpha >= ALPHA_CAP {
            return Err(Error::NoAlphaFound {
                cap: ALPHA_CAP,
                min_laplacian: min,
                worst_re: worst.0,
                worst_im: worst.1,
            });
        }
        alpha *= 2.0;
    }
}
