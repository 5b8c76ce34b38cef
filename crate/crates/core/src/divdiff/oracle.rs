//! Dense reference solver for the Hermite interpolation problem, used to
//! cross-check the divided-difference recursion on small inputs.

use rug::{Assign, Complex};

use super::{DividedDifferenceTable, ValueSequence};
use crate::error::{Error, Result};
use crate::mp;
use crate::variety::MultiplicityVariety;

/// Largest total multiplicity the dense solver accepts.
pub const MAX_SIZE: u64 = 64;

/// Solves the confluent Vandermonde system for the monomial coefficients of
/// the interpolant of `v` over the first `q` points, then converts them to
/// Newton form by repeated synthetic division.
///
/// Row `(j, l)` of the system is `sum_k C(k, l) z_j^{k-l} a_k = v_{j,l}`.
pub fn brute_force_hermite(
    v: &MultiplicityVariety,
    values: &ValueSequence,
    q: usize,
    precision_bits: u32,
) -> Result<DividedDifferenceTable> {
    mp::check_bits(precision_bits)?;
    if q == 0 || q > v.len() || values.len() < q {
        return Err(Error::invalid(format!(
            "q = {q} outside 1..={}",
            v.len().min(values.len())
        )));
    }
    let points = &v.points()[..q];
    let size = v.mult_before(q);
    if size > MAX_SIZE {
        return Err(Error::invalid(format!(
            "dense solver limited to {MAX_SIZE} unknowns, got {size}"
        )));
    }
    let size = size as usize;
    let bits = precision_bits;

    let mut a: Vec<Vec<Complex>> = Vec::with_capacity(size);
    let mut rhs: Vec<Complex> = Vec::with_capacity(size);
    for (j, p) in points.iter().enumerate() {
        for l in 0..p.mult {
            let mut row = vec![mp::zero(bits); size];
            for (k, entry) in row.iter_mut().enumerate().skip(l as usize) {
                let mut pow = mp::one(bits);
                for _ in 0..k - l as usize {
                    pow *= &p.z;
                }
                entry.assign(pow * mp::binomial(k as u32, l) as f64);
            }
            a.push(row);
            rhs.push(Complex::with_val(bits, values.get(j, l)));
        }
    }

    let coeffs = solve(a.clone(), rhs.clone(), bits)?;
    let residual = residual(&a, &coeffs, &rhs);
    let scale = rhs.iter().map(|r| mp::abs(r).to_f64()).fold(1.0, f64::max);
    let tol = scale * (2.0f64).powi(-(bits as i32) / 2);
    if !(residual <= tol) {
        return Err(Error::IllConditioned { residual });
    }

    // Newton coefficients: c_i = remainder after dividing by (z - x_1)...(z - x_i).
    let nodes: Vec<&Complex> = points
        .iter()
        .flat_map(|p| (0..p.mult).map(move |_| &p.z))
        .collect();
    let mut poly = coeffs;
    let mut newton = Vec::with_capacity(size);
    for x in nodes {
        let n = poly.len();
        let mut quotient = vec![mp::zero(bits); n.saturating_sub(1)];
        let mut carry = mp::zero(bits);
        for k in (0..n).rev() {
            let mut t = Complex::with_val(bits, &carry * x);
            t += &poly[k];
            if k > 0 {
                quotient[k - 1].assign(&t);
            } else {
                newton.push(t.clone());
            }
            carry = t;
        }
        poly = quotient;
    }

    let mut it = newton.into_iter();
    let rows = points
        .iter()
        .map(|p| {
            (0..p.mult)
                .map(|_| it.next().expect("one coefficient per node"))
                .collect()
        })
        .collect();
    Ok(DividedDifferenceTable::from_rows(rows, bits))
}

fn solve(mut a: Vec<Vec<Complex>>, mut b: Vec<Complex>, bits: u32) -> Result<Vec<Complex>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &k| mp::abs(&a[i][col]).total_cmp(&mp::abs(&a[k][col])))
            .expect("non-empty range");
        if a[pivot][col].is_zero() {
            return Err(Error::IllConditioned {
                residual: f64::INFINITY,
            });
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for i in col + 1..n {
            let factor = Complex::with_val(bits, &a[i][col] / &a[col][col]);
            if factor.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(i);
            for (dst, src) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *dst -= Complex::with_val(bits, &factor * src);
            }
            let sub = Complex::with_val(bits, &factor * &b[col]);
            b[i] -= sub;
        }
    }
    let mut x = vec![mp::zero(bits); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for k in i + 1..n {
            acc -= Complex::with_val(bits, &a[i][k] * &x[k]);
        }
        x[i] = acc / &a[i][i];
    }
    Ok(x)
}

fn residual(a: &[Vec<Complex>], x: &[Complex], b: &[Complex]) -> f64 {
    let bits = x.first().map_or(64, |c| c.prec().0);
    let mut worst = 0.0f64;
    for (row, rhs) in a.iter().zip(b) {
        let mut acc = Complex::with_val(bits, -rhs);
        for (aik, xk) in row.iter().zip(x) {
            acc += Complex::with_val(bits, aik * xk);
        }
        worst = worst.max(mp::abs(&acc).to_f64());
    }
    worst
}
