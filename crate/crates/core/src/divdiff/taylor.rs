use rug::{Assign, Complex, Float};

use super::DividedDifferenceTable;
use crate::mp;
use crate::variety::{MultiplicityVariety, Point};

/// Taylor coefficients at a point `z` of the Newton polynomial `P_q` and of
/// the node polynomial `Pi_q`, truncated to `order` terms.
#[derive(Debug, Clone)]
pub struct NewtonSeries {
    /// `P_q^{(l)}(z)/l!` for `l < order`.
    pub p: Vec<Complex>,
    /// `Pi_q^{(l)}(z)/l!` for `l < order`.
    pub pi: Vec<Complex>,
    /// Sum of the magnitudes of the Horner terms behind each `p[l]`, each
    /// row scaled by its error weight; empty unless tracking was requested.
    pub p_abs: Vec<Float>,
}

pub fn newton_series(
    v: &MultiplicityVariety,
    t: &DividedDifferenceTable,
    q: usize,
    z: &Complex,
    order: usize,
) -> NewtonSeries {
    series(v.points(), t.rows(), q, z, order, t.precision_bits(), None)
}

/// As [`newton_series`], also accumulating `p_abs` with the terms of row `j`
/// scaled by `row_weight[j]` (the relative error already carried by that row).
pub(super) fn newton_series_tracked(
    points: &[Point],
    rows: &[Vec<Complex>],
    q: usize,
    z: &Complex,
    order: usize,
    bits: u32,
    row_weight: &[Float],
) -> NewtonSeries {
    series(points, rows, q, z, order, bits, Some(row_weight))
}

/// Nested evaluation `P = c_1 + E_1 (c_2 + E_2 (c_3 + ...))` with
/// `E_j = (zeta - z_j)^{m_j}` and `c_j = sum_l phi_{j,l} (zeta - z_j)^l`,
/// every factor expanded around `z` as a truncated power series.
fn series(
    points: &[Point],
    rows: &[Vec<Complex>],
    q: usize,
    z: &Complex,
    order: usize,
    bits: u32,
    row_weight: Option<&[Float]>,
) -> NewtonSeries {
    let track = row_weight.is_some();
    let order = order.max(1);
    let mut acc: Vec<Complex> = vec![mp::zero(bits); order];
    let mut pi: Vec<Complex> = vec![mp::zero(bits); order];
    pi[0].assign(1);
    let mut acc_abs: Vec<Float> = if track {
        vec![Float::new(64); order]
    } else {
        Vec::new()
    };
    let mut d = mp::zero(bits);
    let mut tmp = mp::zero(bits);

    if order == 1 {
        let mut c = mp::zero(bits);
        let mut e = mp::zero(bits);
        for j in (0..q).rev() {
            let row = &rows[j];
            d.assign(z - &points[j].z);
            let m = row.len();
            c.assign(&row[m - 1]);
            for phi in row[..m - 1].iter().rev() {
                c *= &d;
                c += phi;
            }
            e.assign(&d);
            for _ in 1..m {
                e *= &d;
            }
            if let Some(wt) = row_weight {
                let e_abs = mp::abs(&e);
                acc_abs[0] *= e_abs;
                acc_abs[0] += mp::abs(&c) * &wt[j];
            }
            acc[0] *= &e;
            acc[0] += &c;
            pi[0] *= &e;
        }
        return NewtonSeries {
            p: acc,
            pi,
            p_abs: acc_abs,
        };
    }

    let mut dpow: Vec<Complex> = Vec::new();
    let mut e: Vec<Complex> = vec![mp::zero(bits); order];
    let mut cj: Vec<Complex> = vec![mp::zero(bits); order];
    let mut next: Vec<Complex> = vec![mp::zero(bits); order];
    let mut binom = Float::new(bits);
    for j in (0..q).rev() {
        let row = &rows[j];
        let m = row.len();
        d.assign(z - &points[j].z);
        dpow.resize_with(m + 1, || mp::zero(bits));
        dpow[0].assign(1);
        for k in 1..=m {
            let (lo, hi) = dpow.split_at_mut(k);
            hi[0].assign(&lo[k - 1] * &d);
        }
        // E_j coefficients: C(m, i) d^{m-i}
        for (i, ei) in e.iter_mut().enumerate() {
            if i > m {
                ei.assign(0);
                continue;
            }
            binomial_into(&mut binom, m, i);
            ei.assign(&dpow[m - i] * &binom);
        }
        // c_j coefficients: sum_{l >= i} phi_l C(l, i) d^{l-i}
        for (i, ci) in cj.iter_mut().enumerate() {
            ci.assign(0);
            for (l, phi) in row.iter().enumerate().skip(i) {
                binomial_into(&mut binom, l, i);
                tmp.assign(&dpow[l - i] * &binom);
                tmp *= phi;
                *ci += &tmp;
            }
        }
        if let Some(wt) = row_weight {
            let e_abs: Vec<Float> = e.iter().map(mp::abs).collect();
            let mut next_abs = vec![Float::new(64); order];
            for (i, na) in next_abs.iter_mut().enumerate() {
                na.assign(mp::abs(&cj[i]) * &wt[j]);
                for a in 0..=i {
                    *na += Float::with_val(64, &e_abs[a] * &acc_abs[i - a]);
                }
            }
            acc_abs = next_abs;
        }
        mul_series(&e, &acc, &mut next, &mut tmp);
        for (n, c) in next.iter_mut().zip(&cj) {
            *n += c;
        }
        std::mem::swap(&mut acc, &mut next);
        mul_series(&e, &pi, &mut next, &mut tmp);
        std::mem::swap(&mut pi, &mut next);
    }
    NewtonSeries {
        p: acc,
        pi,
        p_abs: acc_abs,
    }
}

fn mul_series(a: &[Complex], b: &[Complex], out: &mut [Complex], tmp: &mut Complex) {
    for i in 0..out.len() {
        out[i].assign(0);
        for k in 0..=i {
            tmp.assign(&a[k] * &b[i - k]);
            out[i] += &*tmp;
        }
    }
}

/// `C(n, k)` for `k <= n`, exact while it fits the precision of `out`.
fn binomial_into(out: &mut Float, n: usize, k: usize) {
    out.assign(1);
    let k = k.min(n - k);
    for i in 0..k {
        *out *= (n - i) as u32;
        *out /= (i + 1) as u32;
    }
}
