//! Divided differences `Phi(W)` of a value sequence on a multiplicity
//! variety, and the Newton polynomials `P_q` they define.
//!
//! `P_q` is never expanded into monomials. It is represented by the variety,
//! the table and `q`, and evaluated in nested (Horner) form with truncated
//! Taylor arithmetic so that derivatives are exact.

mod hermite;
#[cfg(feature = "oracle")]
pub mod oracle;
mod taylor;

pub use hermite::{
    hermite_divdiff, phi_table_tableau, restriction_table, Exp, FunctionOracle, Polynomial, Sin,
};
pub use taylor::{newton_series, NewtonSeries};

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::mp;
use crate::variety::MultiplicityVariety;

/// Interpolation targets `w_{j,l} = f^{(l)}(z_j)/l!`, one row per point.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueSequence {
    rows: Vec<Vec<Complex>>,
}

impl ValueSequence {
    pub fn new(v: &MultiplicityVariety, rows: Vec<Vec<Complex>>) -> Result<Self> {
        if rows.len() != v.len() {
            return Err(Error::invalid(format!(
                "value sequence has {} rows but the variety has {} points",
                rows.len(),
                v.len()
            )));
        }
        for (j, (row, p)) in rows.iter().zip(v.points()).enumerate() {
            if row.len() != p.mult as usize {
                return Err(Error::invalid(format!(
                    "point {} has multiplicity {} but {} values",
                    j + 1,
                    p.mult,
                    row.len()
                )));
            }
            if row
                .iter()
                .any(|w| !(w.real().is_finite() && w.imag().is_finite()))
            {
                return Err(Error::invalid(format!(
                    "non-finite value at point {}",
                    j + 1
                )));
            }
        }
        Ok(ValueSequence { rows })
    }

    pub fn from_fn(
        v: &MultiplicityVariety,
        mut f: impl FnMut(usize, u32) -> Complex,
    ) -> Result<Self> {
        let rows = v
            .points()
            .iter()
            .enumerate()
            .map(|(j, p)| (0..p.mult).map(|l| f(j, l)).collect())
            .collect();
        Self::new(v, rows)
    }

    pub fn zeros(v: &MultiplicityVariety, bits: u32) -> Self {
        Self::from_fn(v, |_, _| mp::zero(bits)).expect("shape matches by construction")
    }

    /// `W_0 = {delta_{1,j} delta_{l,m_1-1}}`.
    pub fn w0(v: &MultiplicityVariety, bits: u32) -> Self {
        let m1 = v.points().first().map(|p| p.mult).unwrap_or(1);
        Self::from_fn(v, |j, l| {
            if j == 0 && l + 1 == m1 {
                mp::one(bits)
            } else {
                mp::zero(bits)
            }
        })
        .expect("shape matches by construction")
    }

    /// `rho(f)`: the Taylor data of `f` on the variety.
    pub fn restrict(f: &dyn FunctionOracle, v: &MultiplicityVariety, bits: u32) -> Result<Self> {
        let need = v.max_multiplicity().saturating_sub(1);
        if need > f.max_order() {
            return Err(Error::Order {
                needed: need,
                max: f.max_order(),
            });
        }
        Self::from_fn(v, |j, l| f.taylor(&v.points()[j].z, l, bits))
    }

    pub fn rows(&self) -> &[Vec<Complex>] {
        &self.rows
    }

    pub fn get(&self, j: usize, l: u32) -> &Complex {
        &self.rows[j][l as usize]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Coefficients `phi_{j,l}` of the Newton basis for the first `q` points.
#[derive(Debug, Clone)]
pub struct DividedDifferenceTable {
    rows: Vec<Vec<Complex>>,
    precision_bits: u32,
    /// First-order bound on the bits lost per row, including error inherited
    /// from earlier rows and from rounding the inputs. It assumes all errors
    /// align and is typically pessimistic. Empty for tables from other
    /// sources.
    row_lost_bits: Vec<f64>,
    /// `log2` of a first-order absolute error bound per entry, when tracked.
    err_log2: Vec<Vec<f64>>,
}

impl DividedDifferenceTable {
    pub fn from_rows(rows: Vec<Vec<Complex>>, precision_bits: u32) -> Self {
        DividedDifferenceTable {
            rows,
            precision_bits,
            row_lost_bits: Vec::new(),
            err_log2: Vec::new(),
        }
    }

    pub(crate) fn with_errors(
        rows: Vec<Vec<Complex>>,
        precision_bits: u32,
        err_log2: Vec<Vec<f64>>,
    ) -> Self {
        let u = -f64::from(precision_bits);
        let row_lost_bits = rows
            .iter()
            .zip(&err_log2)
            .map(|(row, errs)| {
                row.iter()
                    .zip(errs)
                    .map(|(x, &e)| {
                        let mag = mp::log2_abs(x);
                        if mag == f64::NEG_INFINITY {
                            0.0
                        } else {
                            (e - mag - u).max(0.0)
                        }
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        DividedDifferenceTable {
            rows,
            precision_bits,
            row_lost_bits,
            err_log2,
        }
    }

    pub fn rows(&self) -> &[Vec<Complex>] {
        &self.rows
    }

    pub fn get(&self, j: usize, l: u32) -> &Complex {
        &self.rows[j][l as usize]
    }

    /// Number of points covered.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Largest bound over all rows; 0 when no bound was tracked.
    pub fn lost_bits(&self) -> f64 {
        self.row_lost_bits.iter().copied().fold(0.0, f64::max)
    }

    pub fn row_lost_bits(&self) -> &[f64] {
        &self.row_lost_bits
    }

    /// `log2` of the absolute error bound of entry `(j, l)`; `None` when no
    /// bound was tracked.
    pub fn err_log2(&self, j: usize, l: u32) -> Option<f64> {
        self.err_log2.get(j).map(|r| r[l as usize])
    }

    pub fn is_zero(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|c| c.real().is_zero() && c.imag().is_zero())
    }
}

/// Divided differences of `w` on the first `q` points, computed by the
/// recursion
///
/// `phi_{q,l} = (w_{q,l} - P_{q-1}^{(l)}(z_q)/l! - sum_{i<l} Pi_{q-1}^{(l-i)}(z_q)/(l-i)! phi_{q,i}) / Pi_{q-1}(z_q)`
///
/// with `Pi_{q-1}(z) = prod_{k<q} (z - z_k)^{m_k}`.
pub fn phi_table(
    v: &MultiplicityVariety,
    w: &ValueSequence,
    q: usize,
    precision_bits: u32,
) -> Result<DividedDifferenceTable> {
    mp::check_bits(precision_bits)?;
    if q == 0 || q > v.len() {
        return Err(Error::invalid(format!(
            "q = {q} outside 1..={} (number of points)",
            v.len()
        )));
    }
    if w.len() != v.len() {
        return Err(Error::invalid(
            "value sequence is not aligned with the variety",
        ));
    }
    let bits = precision_bits;
    let points = v.points();
    let mut rows: Vec<Vec<Complex>> = Vec::with_capacity(q);
    rows.push(
        w.rows[0]
            .iter()
            .map(|x| Complex::with_val(bits, x))
            .collect(),
    );
    // 2^{lost bits} per finished row: the factor by which its relative error
    // exceeds the unit roundoff.
    let mut weight: Vec<Float> = vec![Float::with_val(mp::LOG_BITS, 1)];
    let mut row_lost = vec![0.0f64];

    for qi in 1..q {
        let order = points[qi].mult as usize;
        let series =
            taylor::newton_series_tracked(points, &rows, qi, &points[qi].z, order, bits, &weight);
        if series.pi[0].real().is_zero() && series.pi[0].imag().is_zero() {
            return Err(Error::DuplicateNode { index: qi + 1 });
        }
        let mut row: Vec<Complex> = Vec::with_capacity(order);
        let mut row_weight = Float::with_val(mp::LOG_BITS, 1);
        for l in 0..order {
            let target = &w.rows[qi][l];
            let mut num = Complex::with_val(bits, target - &series.p[l]);
            let mut bound = Float::with_val(mp::LOG_BITS, mp::abs(target) + &series.p_abs[l]);
            for (i, phi) in row.iter().enumerate() {
                let term = Complex::with_val(bits, &series.pi[l - i] * phi);
                bound += mp::abs(&term) * &row_weight;
                num -= term;
            }
            let num_abs = mp::abs(&num);
            if !num_abs.is_zero() && !bound.is_zero() {
                let ratio = bound / num_abs;
                if ratio > row_weight {
                    row_weight = ratio;
                }
            }
            row.push(num / &series.pi[0]);
        }
        row_lost.push(row_weight.clone().log2().to_f64().max(0.0));
        weight.push(row_weight);
        rows.push(row);
    }
    let u = -f64::from(precision_bits);
    let err_log2 = rows
        .iter()
        .zip(&row_lost)
        .map(|(row, lost)| row.iter().map(|x| mp::log2_abs(x) + lost + u).collect())
        .collect();
    Ok(DividedDifferenceTable {
        rows,
        precision_bits,
        row_lost_bits: row_lost,
        err_log2,
    })
}

/// `P_q^{(l)}(z)/l!` from the Newton form.
pub fn newton_eval(
    v: &MultiplicityVariety,
    t: &DividedDifferenceTable,
    q: usize,
    z: &Complex,
    l: u32,
) -> Result<Complex> {
    if q == 0 || q > t.len() || q > v.len() {
        return Err(Error::invalid(format!(
            "q = {q} outside the table range 1..={}",
            t.len()
        )));
    }
    let s = newton_series(v, t, q, z, l as usize + 1);
    Ok(s.p
        .into_iter()
        .nth(l as usize)
        .expect("series has l+1 terms"))
}
