//! Octave norms of divided-difference tables and empirical checks of the
//! growth conditions that characterize interpolating varieties.
//!
//! Every check reduces to samples `(x, y)` with `x` a weight value and `y`
//! the logarithm (or counting value) that should stay below `B x + ln A`.
//! The constants are fitted by a minimax line and a verdict is read from
//! the trend over the last octaves.

mod fit;

pub use fit::{minimax_fit, GrowthFit, Label, LineFit, Sample, Verdict, VerdictRule};

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use rug::Complex;
use serde::Serialize;

use crate::divdiff::{DividedDifferenceTable, ValueSequence};
use crate::error::{Error, Result};
use crate::mp;
use crate::variety::MultiplicityVariety;
use crate::weights::Weight;

/// An inclusive range of octave indices `n` for discs `D(0, base^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Octaves {
    pub start: u32,
    pub end: u32,
    pub base: f64,
}

impl Octaves {
    pub fn new(start: u32, end: u32) -> Result<Self> {
        if start > end {
            return Err(Error::invalid(format!("empty octave range {start}..{end}")));
        }
        Ok(Octaves {
            start,
            end,
            base: 2.0,
        })
    }

    pub fn with_base(mut self, base: f64) -> Result<Self> {
        if !(base.is_finite() && base > 1.0) {
            return Err(Error::invalid(format!(
                "octave base must exceed 1, got {base}"
            )));
        }
        self.base = base;
        Ok(self)
    }

    pub fn radius(&self, n: u32) -> f64 {
        self.base.powi(n as i32)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> {
        self.start..=self.end
    }

    /// Smallest `n >= 0` with `r <= base^n`.
    pub fn octave_of(&self, r: f64) -> u32 {
        let mut n = 0u32;
        while self.radius(n) < r {
            n += 1;
        }
        n
    }

    fn check(&self, v: &MultiplicityVariety) -> Result<()> {
        v.check_disc(0.0, self.radius(self.end))
    }
}

impl fmt::Display for Octaves {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl FromStr for Octaves {
    type Err = Error;

    /// `a..b` (inclusive) or a single octave `a`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("bad octave range '{s}', expected a..b"));
        let (a, b) = match s.split_once("..") {
            Some((a, b)) => (a, b.trim_start_matches('=')),
            None => (s, s),
        };
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        Octaves::new(a, b)
    }
}

fn octave_label(
    oct: &Octaves,
    w: &Weight,
    v: &MultiplicityVariety,
) -> impl Fn(&Sample) -> (u32, f64) {
    let moduli: Vec<f64> = v.points().iter().map(|p| p.modulus()).collect();
    label_with_moduli(oct, w, moduli)
}

fn label_with_moduli(
    oct: &Octaves,
    w: &Weight,
    moduli: Vec<f64>,
) -> impl Fn(&Sample) -> (u32, f64) {
    let oct = *oct;
    let w = w.clone();
    move |s: &Sample| {
        let n = match s.label {
            Label::Octave(n) => n,
            Label::Index(j) => oct.octave_of(moduli[j - 1]),
            Label::Sample(i) => oct.octave_of(moduli[i]),
        };
        (n, w.eval_radius(oct.radius(n)))
    }
}

/// Fits field samples `(|z|, y)` as `(p(|z|), y)`, grouping them by the
/// octave of `|z|` (base 2) for the verdict. Non-finite `y` are dropped.
pub fn radial_fit(
    condition: &str,
    w: &Weight,
    samples: impl IntoIterator<Item = (f64, f64)>,
) -> GrowthFit {
    let mut moduli = Vec::new();
    let mut out = Vec::new();
    let mut dropped = 0;
    for (r, y) in samples {
        if !y.is_finite() {
            dropped += 1;
            continue;
        }
        out.push(Sample {
            x: w.eval_radius(r),
            y,
            label: Label::Sample(moduli.len()),
        });
        moduli.push(r);
    }
    let oct = Octaves::new(0, 0).expect("valid range");
    GrowthFit::build(
        condition,
        out,
        dropped,
        Vec::new(),
        label_with_moduli(&oct, w, moduli),
        &VerdictRule::default(),
    )
}

/// Fits samples already attached to an octave `n` as `(p(2^n), y)`.
/// Non-finite `y` are dropped.
pub fn octave_samples_fit(
    condition: &str,
    w: &Weight,
    samples: impl IntoIterator<Item = (u32, f64)>,
) -> GrowthFit {
    let oct = Octaves::new(0, 0).expect("valid range");
    let mut out = Vec::new();
    let mut dropped = 0;
    for (n, y) in samples {
        if !y.is_finite() {
            dropped += 1;
            continue;
        }
        out.push(Sample {
            x: w.eval_radius(oct.radius(n)),
            y,
            label: Label::Octave(n),
        });
    }
    GrowthFit::build(
        condition,
        out,
        dropped,
        Vec::new(),
        label_with_moduli(&oct, w, Vec::new()),
        &VerdictRule::default(),
    )
}

fn ensure_rows(t: &DividedDifferenceTable, v: &MultiplicityVariety, r: f64) -> Result<usize> {
    let k = v.points_within(r);
    if t.len() < k {
        return Err(Error::invalid(format!(
            "table has {} rows but {} points lie in D(0, {r})",
            t.len(),
            k
        )));
    }
    Ok(k)
}

/// `ln |phi_{j,l}|` for every table entry.
fn ln_entries(t: &DividedDifferenceTable) -> Vec<Vec<f64>> {
    t.rows()
        .iter()
        .map(|r| r.iter().map(mp::ln_abs).collect())
        .collect()
}

fn ln_octave_from(
    ln_phi: &[Vec<f64>],
    v: &MultiplicityVariety,
    k: usize,
    n: u32,
    base: f64,
) -> f64 {
    let scale = n as f64 * base.ln();
    let mut best = f64::NEG_INFINITY;
    for (j, row) in ln_phi[..k].iter().enumerate() {
        let before = v.mult_before(j) as f64;
        for (l, &lp) in row.iter().enumerate() {
            best = best.max(lp + (l as f64 + before) * scale);
        }
    }
    best
}

/// `ln ||W^(n)||_n`, the logarithm of
/// `max_{|z_j| <= base^n, l < m_j} |phi_{j,l}| base^{n (l + m_1 + ... + m_{j-1})}`;
/// `-inf` when the disc holds no point or every entry vanishes.
pub fn ln_octave_norm(
    t: &DividedDifferenceTable,
    v: &MultiplicityVariety,
    n: u32,
    base: f64,
) -> Result<f64> {
    let oct = Octaves::new(n, n)?.with_base(base)?;
    oct.check(v)?;
    let k = ensure_rows(t, v, oct.radius(n))?;
    let ln_phi: Vec<Vec<f64>> = ln_entries(&DividedDifferenceTable::from_rows(
        t.rows()[..k].to_vec(),
        t.precision_bits(),
    ));
    Ok(ln_octave_from(&ln_phi, v, k, n, base))
}

/// `||W^(n)||_n` with octave base 2; 0 for an empty disc.
pub fn octave_norm(t: &DividedDifferenceTable, v: &MultiplicityVariety, n: u32) -> Result<f64> {
    ln_octave_norm(t, v, n, 2.0).map(f64::exp)
}

/// `ln sup_n ||W^(n)||_n exp(-B p(base^n))` over the octave range.
pub fn ln_weighted_norm(
    t: &DividedDifferenceTable,
    v: &MultiplicityVariety,
    w: &Weight,
    b: f64,
    octaves: &Octaves,
) -> Result<f64> {
    octaves.check(v)?;
    let k = ensure_rows(t, v, octaves.radius(octaves.end))?;
    let ln_phi = ln_entries(t);
    Ok(octaves
        .iter()
        .map(|n| {
            let kn = v.points_within(octaves.radius(n)).min(k);
            ln_octave_from(&ln_phi, v, kn, n, octaves.base) - b * w.eval_radius(octaves.radius(n))
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

pub fn weighted_norm(
    t: &DividedDifferenceTable,
    v: &MultiplicityVariety,
    w: &Weight,
    b: f64,
    octaves: &Octaves,
) -> Result<f64> {
    ln_weighted_norm(t, v, w, b, octaves).map(f64::exp)
}

fn octave_fit(
    condition: &str,
    v: &MultiplicityVariety,
    w: &Weight,
    octaves: &Octaves,
    mut y: impl FnMut(u32) -> f64,
) -> GrowthFit {
    let mut samples = Vec::new();
    let mut dropped = 0;
    for n in octaves.iter() {
        let yn = y(n);
        if yn == f64::NEG_INFINITY {
            dropped += 1;
            continue;
        }
        samples.push(Sample {
            x: w.eval_radius(octaves.radius(n)),
            y: yn,
            label: Label::Octave(n),
        });
    }
    GrowthFit::build(
        condition,
        samples,
        dropped,
        Vec::new(),
        octave_label(octaves, w, v),
        &VerdictRule::default(),
    )
}

/// Samples `(p(R), N(0, R))` at `R = base^n`.
pub fn check_condition_1(
    v: &MultiplicityVariety,
    w: &Weight,
    octaves: &Octaves,
) -> Result<GrowthFit> {
    octaves.check(v)?;
    Ok(octave_fit("condition_1", v, w, octaves, |n| {
        v.big_n_f64(0.0, 0.0, octaves.radius(n))
    }))
}

/// Samples `(p(R), n(0, R))` at `R = base^n`.
pub fn lemma_number_check(
    v: &MultiplicityVariety,
    w: &Weight,
    octaves: &Octaves,
) -> Result<GrowthFit> {
    octaves.check(v)?;
    Ok(octave_fit("lemma_number", v, w, octaves, |n| {
        v.n_f64(0.0, 0.0, octaves.radius(n)) as f64
    }))
}

/// Samples `(p(z_j), N(z_j, |z_j|))` over points whose disc `D(z_j, |z_j|)`
/// lies in the trusted region. Points at the origin are skipped.
pub fn check_condition_2(v: &MultiplicityVariety, w: &Weight) -> Result<GrowthFit> {
    check_condition_2_with(v, w, &Octaves::new(0, 0)?)
}

pub fn check_condition_2_with(
    v: &MultiplicityVariety,
    w: &Weight,
    octaves: &Octaves,
) -> Result<GrowthFit> {
    let trusted = v.trusted_radius();
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for (j, p) in v.points().iter().enumerate() {
        let r = p.modulus();
        if r == 0.0 || 2.0 * r > trusted {
            skipped.push(j + 1);
            continue;
        }
        samples.push(Sample {
            x: w.eval_radius(r),
            y: v.big_n_f64(p.re(), p.im(), r),
            label: Label::Index(j + 1),
        });
    }
    if samples.is_empty() {
        return Err(Error::NoSamples(
            "no point has its disc D(z_j, |z_j|) in the trusted region".into(),
        ));
    }
    Ok(GrowthFit::build(
        "condition_2",
        samples,
        0,
        skipped,
        octave_label(octaves, w, v),
        &VerdictRule::default(),
    ))
}

/// Samples `(p(z_j), ln sum_l |w_{j,l}|)`; all-zero rows are dropped.
pub fn membership_apv(
    v: &MultiplicityVariety,
    values: &ValueSequence,
    w: &Weight,
) -> Result<GrowthFit> {
    membership_apv_with(v, values, w, &Octaves::new(0, 0)?)
}

pub fn membership_apv_with(
    v: &MultiplicityVariety,
    values: &ValueSequence,
    w: &Weight,
    octaves: &Octaves,
) -> Result<GrowthFit> {
    if values.len() != v.len() {
        return Err(Error::invalid(
            "value sequence is not aligned with the variety",
        ));
    }
    let mut samples = Vec::new();
    let mut dropped = 0;
    for (j, (p, row)) in v.points().iter().zip(values.rows()).enumerate() {
        let bits = row.iter().map(|c| c.prec().0).max().unwrap_or(mp::LOG_BITS);
        let mut sum = rug::Float::new(bits);
        for c in row {
            sum += mp::abs(c);
        }
        if sum.is_zero() {
            dropped += 1;
            continue;
        }
        samples.push(Sample {
            x: w.eval(&p.z),
            y: sum.ln().to_f64(),
            label: Label::Index(j + 1),
        });
    }
    Ok(GrowthFit::build(
        "membership_apv",
        samples,
        dropped,
        Vec::new(),
        octave_label(octaves, w, v),
        &VerdictRule::default(),
    ))
}

/// Samples `(p(base^n), ln ||W^(n)||_n)`; octaves with a vanishing norm are
/// dropped. When the table carries error bounds, `norm_lost_bits` bounds the
/// precision lost by the sampled norms themselves.
pub fn membership_tilde(
    t: &DividedDifferenceTable,
    v: &MultiplicityVariety,
    w: &Weight,
    octaves: &Octaves,
) -> Result<GrowthFit> {
    octaves.check(v)?;
    let k = ensure_rows(t, v, octaves.radius(octaves.end))?;
    let ln_phi = ln_entries(t);
    let ln_err: Option<Vec<Vec<f64>>> = (0..k)
        .map(|j| {
            (0..v.points()[j].mult)
                .map(|l| t.err_log2(j, l).map(|e| e * LN_2))
                .collect()
        })
        .collect();
    let mut lost = 0.0f64;
    let mut fit = octave_fit("membership_tilde", v, w, octaves, |n| {
        let kn = v.points_within(octaves.radius(n));
        let norm = ln_octave_from(&ln_phi, v, kn, n, octaves.base);
        if let Some(ln_err) = &ln_err {
            let err = ln_octave_from(ln_err, v, kn, n, octaves.base);
            if norm > f64::NEG_INFINITY && err > f64::NEG_INFINITY {
                lost = lost.max((err - norm) / LN_2 + f64::from(t.precision_bits()));
            }
        }
        norm
    });
    if ln_err.is_some() {
        fit.norm_lost_bits = Some(lost);
    }
    Ok(fit)
}

/// Logarithmic forms of three consequences of the counting conditions,
/// each fitted against the weight:
///
/// - `(i)`: `M_j ln(base^n/|z_j|)` for `0 < |z_j| <= base^n`, with
///   `M_j = m_1 + ... + m_j`, largest per octave;
/// - `(ii)`: `m_j ln|z_j|` against `p(z_j)`;
/// - `(iii)`: `sum_{k<j} m_k ln(base^n/|z_j - z_k|)` for `|z_j| <= base^n`,
///   largest per octave.
#[derive(Debug, Clone, Serialize)]
pub struct UsefulBounds {
    pub scale_ratio: GrowthFit,
    pub point_modulus: GrowthFit,
    pub inverse_product: GrowthFit,
}

pub fn useful_inequalities(
    v: &MultiplicityVariety,
    w: &Weight,
    octaves: &Octaves,
) -> Result<UsefulBounds> {
    octaves.check(v)?;
    let k = v.points_within(octaves.radius(octaves.end));
    let pts = &v.points()[..k];
    let ln_base = octaves.base.ln();

    // -sum_{k<j} m_k ln|z_j - z_k|, computed in extended precision.
    let mut inv_prod = Vec::with_capacity(k);
    for (j, p) in pts.iter().enumerate() {
        let mut s = 0.0;
        for q in &pts[..j] {
            let d = Complex::with_val(mp::LOG_BITS, &p.z - &q.z);
            s -= f64::from(q.mult) * mp::ln_abs(&d);
        }
        inv_prod.push(s);
    }

    let scale_ratio = octave_fit("useful_scale_ratio", v, w, octaves, |n| {
        let ln_r = n as f64 * ln_base;
        let kn = v.points_within(octaves.radius(n));
        (0..kn)
            .filter(|&j| pts[j].modulus() > 0.0)
            .map(|j| v.mult_before(j + 1) as f64 * (ln_r - pts[j].modulus().ln()))
            .fold(f64::NEG_INFINITY, f64::max)
    });
    let inverse_product = octave_fit("useful_inverse_product", v, w, octaves, |n| {
        let ln_r = n as f64 * ln_base;
        let kn = v.points_within(octaves.radius(n));
        (0..kn)
            .map(|j| inv_prod[j] + v.mult_before(j) as f64 * ln_r)
            .fold(f64::NEG_INFINITY, f64::max)
    });

    let mut samples = Vec::new();
    let mut dropped = 0;
    for (j, p) in pts.iter().enumerate() {
        if p.modulus() == 0.0 {
            dropped += 1;
            continue;
        }
        samples.push(Sample {
            x: w.eval_radius(p.modulus()),
            y: f64::from(p.mult) * p.modulus().ln(),
            label: Label::Index(j + 1),
        });
    }
    let point_modulus = GrowthFit::build(
        "useful_point_modulus",
        samples,
        dropped,
        Vec::new(),
        octave_label(octaves, w, v),
        &VerdictRule::default(),
    );
    Ok(UsefulBounds {
        scale_ratio,
        point_modulus,
        inverse_product,
    })
}
