//! Minimax affine fits `y <= B x + ln A` and the boundedness verdict.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Bounded,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Bounded => "BOUNDED",
            Verdict::Divergent => "DIVERGENT",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Octave(u32),
    /// 1-based point index.
    Index(usize),
    /// 0-based position in a list of field samples.
    Sample(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub label: Label,
}

/// The line `y = slope * x + intercept` lying above every sample and
/// minimizing the largest vertical gap to them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest vertical distance from the line down to a sample.
    pub width: f64,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Edge slopes of the upper and lower convex hulls; the optimal slope of a
/// Chebyshev line is always one of them.
fn hull_slopes(pts: &mut [(f64, f64)]) -> Vec<f64> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut slopes = Vec::new();
    for upper in [true, false] {
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for &p in pts.iter() {
            while hull.len() >= 2 {
                let c = cross(hull[hull.len() - 2], hull[hull.len() - 1], p);
                if (upper && c >= 0.0) || (!upper && c <= 0.0) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        for w in hull.windows(2) {
            if w[1].0 > w[0].0 {
                slopes.push((w[1].1 - w[0].1) / (w[1].0 - w[0].0));
            }
        }
    }
    slopes
}

fn width_at(pts: &[(f64, f64)], slope: f64) -> (f64, f64) {
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for &(x, y) in pts {
        let r = y - slope * x;
        hi = hi.max(r);
        lo = lo.min(r);
    }
    (hi, hi - lo)
}

/// Minimax affine fit over finite samples. With fewer than two distinct
/// abscissae the slope is 0.
pub fn minimax_fit(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    let mut pts: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    if pts.is_empty() {
        return LineFit {
            slope: 0.0,
            intercept: f64::NEG_INFINITY,
            width: 0.0,
        };
    }
    let mut best: (f64, (f64, f64)) = (0.0, width_at(&pts, 0.0));
    for s in hull_slopes(&mut pts) {
        let cand = width_at(&pts, s);
        let better = cand.1 < best.1 .1 || (cand.1 == best.1 .1 && s.abs() < best.0.abs());
        if better {
            best = (s, cand);
        }
    }
    LineFit {
        slope: best.0,
        intercept: best.1 .0,
        width: best.1 .1,
    }
}

/// Thresholds of the verdict rule applied to the last octaves of a series.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerdictRule {
    /// Number of trailing octaves inspected.
    pub k: usize,
    /// Allowed rise of the last margin above the earlier ones, relative to
    /// the spread of the fitted window (floored at 1).
    pub margin_tol: f64,
    /// Allowed relative slope increase when the window moves one octave.
    pub slope_tol: f64,
    /// Relative growth of `y/x` over the last octaves that counts as
    /// divergence.
    pub ratio_growth: f64,
}

impl Default for VerdictRule {
    fn default() -> Self {
        VerdictRule {
            k: 5,
            margin_tol: 0.05,
            slope_tol: 0.1,
            ratio_growth: 0.2,
        }
    }
}

impl VerdictRule {
    /// Classifies a per-octave series `(x_n, y_n)` in increasing `n`.
    ///
    /// The series is fitted on its last half; the fit is BOUNDED when the
    /// margin of the last octave does not rise above those of the preceding
    /// `k - 1` octaves and moving the window one octave earlier does not lower
    /// the slope by more than `slope_tol`.
    /// Otherwise it is DIVERGENT when `y/x` increases strictly over the last
    /// `k` octaves by more than `ratio_growth`. Series shorter than three
    /// octaves carry no trend and are BOUNDED.
    pub fn classify(&self, series: &[(f64, f64)]) -> Verdict {
        let len = series.len();
        if len < 3 {
            return Verdict::Bounded;
        }
        let win = (len / 2).max(2);
        let (xs, ys): (Vec<f64>, Vec<f64>) = series.iter().copied().unzip();
        let cur = minimax_fit(&xs[len - win..], &ys[len - win..]);
        let prev = minimax_fit(&xs[len - win - 1..len - 1], &ys[len - win - 1..len - 1]);

        let k = self.k.min(len).max(2);
        let tail = &series[len - k..];
        let spread = {
            let w = &ys[len - win..];
            let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
            (hi - lo).max(1.0)
        };
        let margins: Vec<f64> = tail
            .iter()
            .map(|&(x, y)| y - cur.slope * x - cur.intercept)
            .collect();
        let earlier = margins[..k - 1]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let flat = margins[k - 1] - earlier <= self.margin_tol * spread;
        let stable = cur.slope - prev.slope < self.slope_tol * prev.slope.abs() + 1e-9;
        if flat && stable {
            return Verdict::Bounded;
        }

        if tail.iter().all(|&(x, _)| x > 0.0) {
            let ratios: Vec<f64> = tail.iter().map(|&(x, y)| y / x).collect();
            let increasing = ratios.windows(2).all(|r| r[1] > r[0]);
            let first = ratios[0];
            let last = ratios[ratios.len() - 1];
            if increasing && last - first > self.ratio_growth * first.abs() {
                return Verdict::Divergent;
            }
        }
        Verdict::Inconclusive
    }
}

/// Fitted growth constants for one condition.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthFit {
    pub condition: String,
    pub samples: Vec<Sample>,
    #[serde(rename = "B_hat")]
    pub b_hat: f64,
    /// `exp(ln_A_hat)`; serialized as null when it overflows.
    #[serde(rename = "A_hat")]
    pub a_hat: f64,
    #[serde(rename = "ln_A_hat")]
    pub ln_a_hat: f64,
    /// `y - B_hat x - ln_A_hat` per sample; the largest is exactly 0.
    pub margins: Vec<f64>,
    pub verdict: Verdict,
    /// Samples dropped because the logged quantity was zero.
    pub dropped: usize,
    /// 1-based indices of points that could not be sampled.
    pub skipped: Vec<usize>,
    /// `(octave, x, y)` series the verdict was computed from.
    pub octave_series: Vec<(u32, f64, f64)>,
    /// `y/x` at the last octave of the series.
    pub final_ratio: Option<f64>,
    /// Largest number of bits lost by a sampled norm, when the data carry
    /// error bounds: `log2` of its error bound over its value, beyond the
    /// unit roundoff.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_lost_bits: Option<f64>,
}

impl GrowthFit {
    /// Fits all samples, groups index-labelled samples by the octave of
    /// their point (`x = p(base^n)`, `y` the largest value in the octave) and
    /// classifies the resulting series.
    pub(crate) fn build(
        condition: &str,
        samples: Vec<Sample>,
        dropped: usize,
        skipped: Vec<usize>,
        octave_of: impl Fn(&Sample) -> (u32, f64),
        rule: &VerdictRule,
    ) -> Self {
        let xs: Vec<f64> = samples.iter().map(|s| s.x).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.y).collect();
        let fit = minimax_fit(&xs, &ys);
        let margins: Vec<f64> = samples
            .iter()
            .map(|s| (s.y - fit.slope * s.x) - fit.intercept)
            .collect();

        let mut series: Vec<(u32, f64, f64)> = Vec::new();
        for s in &samples {
            let (n, x) = octave_of(s);
            match series.iter_mut().find(|e| e.0 == n) {
                Some(e) => e.2 = e.2.max(s.y),
                None => series.push((n, x, s.y)),
            }
        }
        series.sort_by_key(|e| e.0);
        let pairs: Vec<(f64, f64)> = series.iter().map(|e| (e.1, e.2)).collect();
        let verdict = rule.classify(&pairs);
        let final_ratio = series.last().filter(|e| e.1 != 0.0).map(|e| e.2 / e.1);
        GrowthFit {
            condition: condition.to_string(),
            samples,
            b_hat: fit.slope,
            a_hat: fit.intercept.exp(),
            ln_a_hat: fit.intercept,
            margins,
            verdict,
            dropped,
            skipped,
            octave_series: series,
            final_ratio,
            norm_lost_bits: None,
        }
    }
}
