//! Multiplicity varieties `{(z_j, m_j)}` and their counting functions.
//!
//! An infinite variety is represented by its points inside `D(0, 2^n_max)`.
//! Every query that would need points outside that disc fails with
//! [`Error::Truncation`] instead of returning a partial sum.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mp;

#[derive(Debug, Clone)]
pub struct Point {
    pub z: Complex,
    pub mult: u32,
    re: f64,
    im: f64,
    modulus: f64,
}

impl Point {
    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }
}

/// Where the point data is known to be complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// Complete inside the closed disc `D(0, 2^n_max)`.
    Octave(u32),
    /// A finite variety; there are no further points anywhere.
    Complete,
}

#[derive(Debug, Clone)]
pub struct MultiplicityVariety {
    points: Vec<Point>,
    truncation: Truncation,
    /// `before[j] = m_1 + ... + m_{j-1}` (0-based `j`), with one extra entry
    /// holding the total multiplicity.
    before: Vec<u64>,
    precision: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountingReport {
    pub center: (f64, f64),
    pub radius: f64,
    pub n_value: u64,
    #[serde(rename = "N_value")]
    pub big_n_value: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct JensenCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl MultiplicityVariety {
    /// Builds a variety, sorting by modulus, then by principal argument in
    /// `(-pi, pi]`, then by input order. Returns whether a re-sort was needed.
    pub fn new(points: Vec<(Complex, u32)>, truncation: Truncation) -> Result<(Self, bool)> {
        let precision = points
            .iter()
            .map(|(z, _)| z.prec().0.max(z.prec().1))
            .max()
            .unwrap_or(mp::DEFAULT_BITS)
            .max(mp::MIN_BITS);
        let mut keyed = Vec::with_capacity(points.len());
        for (idx, (z, m)) in points.into_iter().enumerate() {
            if m == 0 {
                return Err(Error::invalid(format!(
                    "point {} has multiplicity 0",
                    idx + 1
                )));
            }
            if !(z.real().is_finite() && z.imag().is_finite()) {
                return Err(Error::invalid(format!("point {} is not finite", idx + 1)));
            }
            let norm = mp::norm_exact(&z);
            let mut arg = Float::with_val(precision, z.arg_ref());
            if arg < 0 && arg.clone().abs() == Float::with_val(precision, rug::float::Constant::Pi)
            {
                arg = -arg;
            }
            keyed.push((norm, arg, idx, z, m));
        }
        let already_sorted = keyed
            .windows(2)
            .all(|w| cmp_key(&w[0], &w[1]) != Ordering::Greater);
        keyed.sort_by(cmp_key);
        for w in keyed.windows(2) {
            if w[0].3 == w[1].3 {
                return Err(Error::invalid(format!(
                    "points {} and {} coincide",
                    w[0].2 + 1,
                    w[1].2 + 1
                )));
            }
        }
        let points: Vec<Point> = keyed
            .into_iter()
            .map(|(_, _, _, z, mult)| {
                let (re, im) = mp::to_f64_pair(&z);
                Point {
                    modulus: mp::abs(&z).to_f64(),
                    z,
                    mult,
                    re,
                    im,
                }
            })
            .collect();
        let mut before = Vec::with_capacity(points.len() + 1);
        let mut acc = 0u64;
        for p in &points {
            before.push(acc);
            acc += u64::from(p.mult);
        }
        before.push(acc);
        Ok((
            MultiplicityVariety {
                points,
                truncation,
                before,
                precision,
            },
            !already_sorted,
        ))
    }

    pub fn finite(points: Vec<(Complex, u32)>) -> Result<Self> {
        Self::new(points, Truncation::Complete).map(|(v, _)| v)
    }

    pub fn truncated(points: Vec<(Complex, u32)>, n_max: u32) -> Result<Self> {
        Self::new(points, Truncation::Octave(n_max)).map(|(v, _)| v)
    }

    pub fn empty(n_max: u32) -> Self {
        Self::truncated(Vec::new(), n_max).expect("empty variety is valid")
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Largest octave with complete data; `None` for finite varieties.
    pub fn n_max(&self) -> Option<u32> {
        match self.truncation {
            Truncation::Octave(n) => Some(n),
            Truncation::Complete => None,
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn trusted_radius(&self) -> f64 {
        match self.truncation {
            Truncation::Octave(n) => (2.0f64).powi(n as i32),
            Truncation::Complete => f64::INFINITY,
        }
    }

    /// `m_1 + ... + m_{j-1}` for the 0-based index `j`.
    pub fn mult_before(&self, j: usize) -> u64 {
        self.before[j]
    }

    /// `M_{j,l} = m_1 + ... + m_{j-1} + l` for the 0-based index `j`.
    pub fn cumulative_index(&self, j: usize, l: u32) -> u64 {
        self.before[j] + u64::from(l)
    }

    pub fn total_multiplicity(&self) -> u64 {
        *self.before.last().unwrap()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.points.iter().map(|p| p.mult).max().unwrap_or(0)
    }

    /// Translates every point by `c`.
    pub fn translated(&self, c: &Complex) -> Result<Self> {
        let pts = self
            .points
            .iter()
            .map(|p| (Complex::with_val(self.precision, &p.z + c), p.mult))
            .collect();
        Self::new(pts, Truncation::Complete).map(|(v, _)| v)
    }

    /// Multiplies every point by `lambda`, keeping the node order.
    pub fn scaled(&self, lambda: &Complex, truncation: Truncation) -> Result<Self> {
        let pts = self
            .points
            .iter()
            .map(|p| (Complex::with_val(self.precision, &p.z * lambda), p.mult))
            .collect();
        Self::new(pts, truncation).map(|(v, _)| v)
    }

    /// Keeps the first `q` points.
    pub fn prefix(&self, q: usize) -> Self {
        let pts = self.points[..q.min(self.len())]
            .iter()
            .map(|p| (p.z.clone(), p.mult))
            .collect();
        Self::new(pts, Truncation::Complete)
            .map(|(v, _)| v)
            .expect("prefix of a valid variety")
    }

    pub(crate) fn check_disc(&self, center_modulus: f64, r: f64) -> Result<()> {
        let reach = center_modulus + r;
        let trusted = self.trusted_radius();
        if reach > trusted {
            return Err(Error::Truncation {
                radius: reach,
                trusted,
            });
        }
        Ok(())
    }

    /// Number of points with `|z_j| <= r`.
    pub fn points_within(&self, r: f64) -> usize {
        self.points.partition_point(|p| p.modulus <= r)
    }

    pub(crate) fn n_f64(&self, re: f64, im: f64, r: f64) -> u64 {
        if re == 0.0 && im == 0.0 {
            return self.before[self.points_within(r)];
        }
        let reach = re.hypot(im) + r;
        let k = self.points_within(reach * (1.0 + 4.0 * f64::EPSILON));
        self.points[..k]
            .iter()
            .filter(|p| (p.re - re).hypot(p.im - im) <= r)
            .map(|p| u64::from(p.mult))
            .sum()
    }

    pub(crate) fn big_n_f64(&self, re: f64, im: f64, r: f64) -> f64 {
        let reach = re.hypot(im) + r;
        let k = self.points_within(reach * (1.0 + 4.0 * f64::EPSILON));
        let ln_r = r.ln();
        let mut at_center = 0u64;
        let mut sum = 0.0;
        for p in &self.points[..k] {
            let d = (p.re - re).hypot(p.im - im);
            if d == 0.0 {
                at_center += u64::from(p.mult);
            } else if d <= r {
                sum += f64::from(p.mult) * (ln_r - d.ln());
            }
        }
        sum + at_center as f64 * ln_r
    }

    /// `n(z, r)`: total multiplicity in the closed disc `D(z, r)`.
    pub fn counting_n(&self, z: &Complex, r: f64) -> Result<u64> {
        if !(r >= 0.0) {
            return Err(Error::invalid(format!("radius {r} must be non-negative")));
        }
        let (re, im) = mp::to_f64_pair(z);
        self.check_disc(re.hypot(im), r)?;
        Ok(self.n_f64(re, im, r))
    }

    /// `N(z, r)` by the closed-form sum
    /// `sum_{0<|z-z_j|<=r} m_j ln(r/|z-z_j|) + n(z,0) ln r`.
    pub fn counting_big_n(&self, z: &Complex, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::invalid(format!("radius {r} must be positive")));
        }
        let (re, im) = mp::to_f64_pair(z);
        self.check_disc(re.hypot(im), r)?;
        Ok(self.big_n_f64(re, im, r))
    }

    pub fn counting_report(&self, z: &Complex, r: f64) -> Result<CountingReport> {
        Ok(CountingReport {
            center: mp::to_f64_pair(z),
            radius: r,
            n_value: self.counting_n(z, r)?,
            big_n_value: self.counting_big_n(z, r)?,
        })
    }

    /// `q_n`: number of distinct points in `D(0, 2^n)`.
    pub fn octave_count(&self, n: u32) -> Result<usize> {
        if let Truncation::Octave(n_max) = self.truncation {
            if n > n_max {
                return Err(Error::Truncation {
                    radius: (2.0f64).powi(n as i32),
                    trusted: self.trusted_radius(),
                });
            }
        }
        Ok(self.points_within((2.0f64).powi(n as i32)))
    }

    /// Jensen's formula for `f(z) = leading * prod (z - z_j)^{m_j}` on `|z| = R`.
    ///
    /// `lhs = N(0,R) + ln|c|` where `c` is the first non-zero Taylor
    /// coefficient of `f` at the origin; `rhs` is the trapezoid mean of
    /// `ln|f|` over `quad_points` equispaced nodes on the circle.
    pub fn jensen_check(
        &self,
        leading: &Complex,
        radius: f64,
        quad_points: usize,
    ) -> Result<JensenCheck> {
        if self.truncation != Truncation::Complete {
            return Err(Error::invalid(
                "Jensen check needs a finite variety (all zeros of f)",
            ));
        }
        if quad_points < 64 {
            return Err(Error::invalid(
                "Jensen check needs at least 64 quadrature points",
            ));
        }
        if !(radius > 0.0) {
            return Err(Error::invalid("Jensen radius must be positive"));
        }
        let ln_lead = mp::ln_abs(leading);
        if ln_lead == f64::NEG_INFINITY {
            return Err(Error::invalid("leading coefficient must be non-zero"));
        }
        let tol = 1e-12 * radius;
        let mut total = 0.0;
        for k in 0..quad_points {
            let theta = 2.0 * PI * k as f64 / quad_points as f64;
            let (s, c) = theta.sin_cos();
            let (x, y) = (radius * c, radius * s);
            let mut v = ln_lead;
            for p in &self.points {
                let d = (x - p.re).hypot(y - p.im);
                if d <= tol {
                    return Err(Error::SingularQuadrature { node: k, tol });
                }
                v += f64::from(p.mult) * d.ln();
            }
            total += v;
        }
        let rhs = total / quad_points as f64;
        let ln_c: f64 = ln_lead
            + self
                .points
                .iter()
                .filter(|p| p.modulus > 0.0)
                .map(|p| f64::from(p.mult) * p.modulus.ln())
                .sum::<f64>();
        let lhs = self.big_n_f64(0.0, 0.0, radius) + ln_c;
        Ok(JensenCheck { lhs, rhs })
    }
}

type SortKey = (Float, Float, usize, Complex, u32);

fn cmp_key(a: &SortKey, b: &SortKey) -> Ordering {
    a.0.partial_cmp(&b.0)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
        .then_with(|| a.2.cmp(&b.2))
}
