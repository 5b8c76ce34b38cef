use rug::Complex;

use super::cutoff::{active_rho, dbar_cutoff, partition_rho};
use crate::divdiff::{newton_eval, DividedDifferenceTable};
use crate::error::{Error, Result};
use crate::mp;
use crate::variety::MultiplicityVariety;

/// `F = sum_{n >= 2} rho_{n-2} P_{q_n}`, where `q_n` counts the points in
/// `D(0, 2^n)`. `F` interpolates the table's data, is a polynomial wherever a
/// single `rho` is active and is holomorphic on `D(0, 1)`.
#[derive(Debug, Clone)]
pub struct SmoothInterpolant {
    variety: MultiplicityVariety,
    table: DividedDifferenceTable,
}

impl SmoothInterpolant {
    /// The table must cover every point of the trusted region (all points
    /// of a finite variety).
    pub fn new(variety: MultiplicityVariety, table: DividedDifferenceTable) -> Result<Self> {
        let needed = variety.points_within(variety.trusted_radius());
        if table.len() < needed {
            return Err(Error::invalid(format!(
                "table has {} rows but the trusted region holds {needed} points",
                table.len()
            )));
        }
        Ok(SmoothInterpolant { variety, table })
    }

    pub fn variety(&self) -> &MultiplicityVariety {
        &self.variety
    }

    pub fn table(&self) -> &DividedDifferenceTable {
        &self.table
    }

    /// `q_n`, the number of points in `D(0, 2^n)`.
    pub fn q(&self, n: u32) -> usize {
        self.variety.points_within(2f64.powi(n as i32))
    }

    /// Radius `2^{n_max - 2}` of the evaluation domain; unbounded for a
    /// finite variety.
    pub fn domain_radius(&self) -> f64 {
        self.variety.trusted_radius() / 4.0
    }

    fn check(&self, z: &Complex) -> Result<(f64, f64)> {
        let (re, im) = mp::to_f64_pair(z);
        let r = re.hypot(im);
        if r > self.domain_radius() {
            return Err(Error::Truncation {
                radius: r,
                trusted: self.domain_radius(),
            });
        }
        Ok((re, im))
    }

    /// `P_q(z)`; the empty polynomial `P_0` is 0.
    pub fn newton(&self, q: usize, z: &Complex) -> Result<Complex> {
        if q == 0 {
            return Ok(mp::zero(self.table.precision_bits()));
        }
        newton_eval(&self.variety, &self.table, q, z, 0)
    }

    fn at(&self, z: &Complex) -> Complex {
        Complex::with_val(self.table.precision_bits(), z)
    }

    pub fn eval_f(&self, z: &Complex) -> Result<Complex> {
        let (re, im) = self.check(z)?;
        let z = self.at(z);
        let mut out = mp::zero(self.table.precision_bits());
        for k in active_rho(re, im) {
            let rho = partition_rho(k, re, im);
            out += self.newton(self.q(k + 2), &z)? * rho;
        }
        Ok(out)
    }

    /// `dbar F = -sum_k dbar X_k (P_{q_{k+3}} - P_{q_{k+2}})`; the only
    /// non-zero term has `2^k < |z| < 2^{k+1}`, and the result is exactly 0
    /// on `D(0, 1)`.
    pub fn eval_dbar_f(&self, z: &Complex) -> Result<Complex> {
        let (re, im) = self.check(z)?;
        let bits = self.table.precision_bits();
        let mut out = mp::zero(bits);
        let r = re.hypot(im);
        if r <= 1.0 {
            return Ok(out);
        }
        let z = self.at(z);
        let k0 = r.log2().floor() as u32;
        for k in k0.saturating_sub(1)..=k0 {
            let (a, b) = dbar_cutoff(k, re, im);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let hi = self.q(k + 3);
            let lo = self.q(k + 2);
            if hi == lo {
                continue;
            }
            let diff = self.newton(hi, &z)? - self.newton(lo, &z)?;
            out -= diff * Complex::with_val(bits, (a, b));
        }
        Ok(out)
    }
}
