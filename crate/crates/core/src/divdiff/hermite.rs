use rug::ops::SubFrom;
use rug::{Assign, Complex, Float};

use super::{DividedDifferenceTable, ValueSequence};
use crate::error::{Error, Result};
use crate::mp;
use crate::variety::MultiplicityVariety;

/// Access to the scaled derivatives `f^{(k)}(z)/k!` of an analytic function.
pub trait FunctionOracle: Send + Sync {
    fn taylor(&self, z: &Complex, k: u32, bits: u32) -> Complex;

    fn max_order(&self) -> u32;
}

fn factorial(k: u32, bits: u32) -> Float {
    let mut f = Float::with_val(bits, 1);
    for i in 2..=k {
        f *= i;
    }
    f
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sin;

impl FunctionOracle for Sin {
    fn taylor(&self, z: &Complex, k: u32, bits: u32) -> Complex {
        let base = match k % 4 {
            0 => Complex::with_val(bits, z.sin_ref()),
            1 => Complex::with_val(bits, z.cos_ref()),
            2 => -Complex::with_val(bits, z.sin_ref()),
            _ => -Complex::with_val(bits, z.cos_ref()),
        };
        base / factorial(k, bits)
    }

    fn max_order(&self) -> u32 {
        u32::MAX
    }
}

/// `exp(scale * z)`.
#[derive(Debug, Clone)]
pub struct Exp {
    pub scale: Complex,
}

impl FunctionOracle for Exp {
    fn taylor(&self, z: &Complex, k: u32, bits: u32) -> Complex {
        let arg = Complex::with_val(bits, &self.scale * z);
        let mut out = arg.exp();
        let mut pow = Complex::with_val(bits, 1);
        for _ in 0..k {
            pow *= &self.scale;
        }
        out *= pow;
        out / factorial(k, bits)
    }

    fn max_order(&self) -> u32 {
        u32::MAX
    }
}

/// A polynomial given by ascending monomial coefficients.
#[derive(Debug, Clone)]
pub struct Polynomial {
    pub coeffs: Vec<Complex>,
}

impl FunctionOracle for Polynomial {
    fn taylor(&self, z: &Complex, k: u32, bits: u32) -> Complex {
        // Horner on sum_{i>=k} a_i C(i,k) z^{i-k}
        let k = k as usize;
        let mut acc = Complex::new(bits);
        if k >= self.coeffs.len() {
            return acc;
        }
        for i in (k..self.coeffs.len()).rev() {
            acc *= z;
            let mut binom = Float::with_val(bits, 1);
            for t in 0..k {
                binom *= (i - t) as u32;
                binom /= (t + 1) as u32;
            }
            acc += Complex::with_val(bits, &self.coeffs[i] * &binom);
        }
        acc
    }

    fn max_order(&self) -> u32 {
        u32::MAX
    }
}

/// Expanded node sequence with the Taylor data each repeated block needs.
struct Nodes {
    /// Node value per position in the expanded sequence.
    xs: Vec<Complex>,
    /// Block index per position; equal blocks are contiguous.
    block: Vec<usize>,
    /// `taylor[b][k] = f^{(k)}(x_b)/k!` for `k < reps_b`.
    taylor: Vec<Vec<Complex>>,
}

impl Nodes {
    fn build(f: &dyn FunctionOracle, groups: &[(Complex, u32)], bits: u32) -> Result<Self> {
        let mut xs = Vec::new();
        let mut block = Vec::new();
        let mut taylor = Vec::with_capacity(groups.len());
        for (b, (x, reps)) in groups.iter().enumerate() {
            let need = reps - 1;
            if need > f.max_order() {
                return Err(Error::Order {
                    needed: need,
                    max: f.max_order(),
                });
            }
            let x = Complex::with_val(bits, x);
            taylor.push((0..*reps).map(|k| f.taylor(&x, k, bits)).collect());
            for _ in 0..*reps {
                xs.push(x.clone());
                block.push(b);
            }
        }
        Ok(Nodes { xs, block, taylor })
    }

    fn from_values(v: &MultiplicityVariety, w: &ValueSequence, q: usize, bits: u32) -> Self {
        let mut xs = Vec::new();
        let mut block = Vec::new();
        let mut taylor = Vec::with_capacity(q);
        for (b, (p, row)) in v.points()[..q].iter().zip(w.rows()).enumerate() {
            taylor.push(row.iter().map(|c| Complex::with_val(bits, c)).collect());
            for _ in 0..p.mult {
                xs.push(Complex::with_val(bits, &p.z));
                block.push(b);
            }
        }
        Nodes { xs, block, taylor }
    }

    /// Top row `Delta^r f(x_0, ..., x_r)` of the confluent divided-difference
    /// tableau, for every `r`, with `log2` of an absolute error bound per
    /// entry.
    ///
    /// The bound is carried through the tableau to first order; inputs carry
    /// half an ulp.
    fn top_row(&self, bits: u32) -> (Vec<Complex>, Vec<f64>) {
        let k = self.xs.len();
        let u = -f64::from(bits);
        let mut col: Vec<Complex> = (0..k)
            .map(|i| self.taylor[self.block[i]][0].clone())
            .collect();
        let mut err: Vec<f64> = col.iter().map(|c| mp::log2_abs(c) + u).collect();
        let mut top = Vec::with_capacity(k);
        let mut top_err = Vec::with_capacity(k);
        let mut den = mp::zero(bits);
        if k > 0 {
            top.push(col[0].clone());
            top_err.push(err[0]);
        }
        for r in 1..k {
            for i in 0..k - r {
                if self.block[i] == self.block[i + r] {
                    col[i].assign(&self.taylor[self.block[i]][r]);
                    err[i] = mp::log2_abs(&col[i]) + u;
                } else {
                    let (lo, hi) = col.split_at_mut(i + 1);
                    let cur = &mut lo[i];
                    cur.sub_from(&hi[0]);
                    // Inherited errors plus one rounding for the difference.
                    let e = mp::log2_add(mp::log2_add(err[i], err[i + 1]), mp::log2_abs(cur) + u);
                    den.assign(&self.xs[i + r] - &self.xs[i]);
                    // Real gaps, as on lattices along the axis, halve the work.
                    if den.imag().is_zero() {
                        *cur /= den.real();
                    } else {
                        *cur /= &den;
                    }
                    err[i] = mp::log2_add(e - mp::log2_abs(&den), mp::log2_abs(cur) + u);
                }
            }
            top.push(col[0].clone());
            top_err.push(err[0]);
        }
        (top, top_err)
    }
}

/// Merges repeated node values so that equal nodes form one contiguous block.
fn merge_groups(nodes: &[(Complex, u32)]) -> Result<Vec<(Complex, u32)>> {
    let mut groups: Vec<(Complex, u32)> = Vec::with_capacity(nodes.len());
    for (x, reps) in nodes {
        if *reps == 0 {
            return Err(Error::invalid("node repetition count must be positive"));
        }
        match groups.iter_mut().find(|(g, _)| g == x) {
            Some(g) => g.1 += reps,
            None => groups.push((x.clone(), *reps)),
        }
    }
    Ok(groups)
}

/// `Delta^{k-1} f` over the node multiset, `k` the total repetition count.
///
/// Equal-node entries use `Delta f(x, ..., x) (r times) = f^{(r-1)}(x)/(r-1)!`;
/// otherwise the two neighbouring lower-order differences are combined.
pub fn hermite_divdiff(
    f: &dyn FunctionOracle,
    nodes: &[(Complex, u32)],
    precision_bits: u32,
) -> Result<Complex> {
    mp::check_bits(precision_bits)?;
    let groups = merge_groups(nodes)?;
    if groups.is_empty() {
        return Err(Error::invalid("divided difference needs at least one node"));
    }
    let nodes = Nodes::build(f, &groups, precision_bits)?;
    Ok(nodes.top_row(precision_bits).0.pop().expect("non-empty"))
}

/// Divided differences of `f` over the prefix node multisets of the first
/// `q` points: `phi_{j,l} = Delta^{M_{j,l}} f(z_1 (m_1 times), ..., z_j (l+1 times))`.
pub fn restriction_table(
    f: &dyn FunctionOracle,
    v: &MultiplicityVariety,
    q: usize,
    precision_bits: u32,
) -> Result<DividedDifferenceTable> {
    mp::check_bits(precision_bits)?;
    if q == 0 || q > v.len() {
        return Err(Error::invalid(format!("q = {q} outside 1..={}", v.len())));
    }
    let groups: Vec<(Complex, u32)> = v.points()[..q]
        .iter()
        .map(|p| (p.z.clone(), p.mult))
        .collect();
    let nodes = Nodes::build(f, &groups, precision_bits)?;
    Ok(split_rows(
        v,
        q,
        nodes.top_row(precision_bits),
        precision_bits,
    ))
}

/// The same coefficients as [`super::phi_table`], read off the top row of
/// the confluent divided-difference tableau built on the values.
///
/// No polynomial is evaluated, so there is no cancellation between large
/// Newton terms; entries that only depend on zero data stay exact.
pub fn phi_table_tableau(
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
    let nodes = Nodes::from_values(v, w, q, precision_bits);
    Ok(split_rows(
        v,
        q,
        nodes.top_row(precision_bits),
        precision_bits,
    ))
}

fn split_rows(
    v: &MultiplicityVariety,
    q: usize,
    (top, err): (Vec<Complex>, Vec<f64>),
    bits: u32,
) -> DividedDifferenceTable {
    let mut top = top.into_iter();
    let mut err = err.into_iter();
    let mut rows = Vec::with_capacity(q);
    let mut errs = Vec::with_capacity(q);
    for p in &v.points()[..q] {
        rows.push(
            (0..p.mult)
                .map(|_| top.next().expect("one entry per node"))
                .collect(),
        );
        errs.push(
            (0..p.mult)
                .map(|_| err.next().expect("one bound per node"))
                .collect(),
        );
    }
    DividedDifferenceTable::with_errors(rows, bits, errs)
}
