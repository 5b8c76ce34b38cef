//! Plain-text formats for varieties, value sequences and tables.
//!
//! Blank lines and lines starting with `#` are ignored apart from the
//! headers `# n_max N`, `# finite` (variety files) and
//! `# precision_bits B` (table files). Numbers are decimal text parsed at
//! the requested precision.

use std::fmt::Write as _;
use std::path::Path;

use rug::Complex;

use crate::divdiff::{DividedDifferenceTable, ValueSequence};
use crate::error::{Error, Result};
use crate::mp;
use crate::variety::{MultiplicityVariety, Truncation};

#[derive(Debug, Clone)]
pub struct VarietyFile {
    pub variety: MultiplicityVariety,
    /// The records were not sorted by modulus and argument.
    pub resorted: bool,
    pub warnings: Vec<String>,
}

/// Non-comment lines with their 1-based line numbers, plus the `# key value`
/// headers.
fn records(text: &str) -> (Vec<(usize, Vec<&str>)>, Vec<(usize, Vec<&str>)>) {
    let mut rows = Vec::new();
    let mut headers = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            headers.push((i + 1, rest.split_whitespace().collect()));
        } else {
            rows.push((i + 1, line.split_whitespace().collect()));
        }
    }
    (rows, headers)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<T: std::str::FromStr>(line: usize, text: &str, what: &str) -> Result<T> {
    text.parse()
        .map_err(|_| parse_err(line, format!("{what} `{text}` is not valid")))
}

fn complex(line: usize, re: &str, im: &str, bits: u32) -> Result<Complex> {
    let re =
        mp::parse_float(re, bits).ok_or_else(|| parse_err(line, format!("bad number `{re}`")))?;
    let im =
        mp::parse_float(im, bits).ok_or_else(|| parse_err(line, format!("bad number `{im}`")))?;
    Ok(Complex::with_val(bits, (re, im)))
}

fn header_value<T: std::str::FromStr>(
    headers: &[(usize, Vec<&str>)],
    key: &str,
) -> Result<Option<T>> {
    let mut found = None;
    for (line, words) in headers {
        if words.first() == Some(&key) {
            let text = words
                .get(1)
                .ok_or_else(|| parse_err(*line, format!("header `{key}` needs a value")))?;
            found = Some(field(*line, text, key)?);
        }
    }
    Ok(found)
}

/// Lines `re im mult`. Without a truncation header, `n_max` is taken as the
/// smallest octave holding every point, with a warning.
pub fn parse_variety(text: &str, bits: u32) -> Result<VarietyFile> {
    mp::check_bits(bits)?;
    let (rows, headers) = records(text);
    let mut pts = Vec::with_capacity(rows.len());
    for (line, words) in &rows {
        if words.len() != 3 {
            return Err(parse_err(*line, "expected `re im mult`"));
        }
        let z = complex(*line, words[0], words[1], bits)?;
        let m: u32 = field(*line, words[2], "multiplicity")?;
        if m == 0 {
            return Err(parse_err(*line, "multiplicity must be positive"));
        }
        pts.push((z, m));
    }
    let finite = headers.iter().any(|(_, w)| w.first() == Some(&"finite"));
    let n_max: Option<u32> = header_value(&headers, "n_max")?;
    let mut warnings = Vec::new();
    let truncation = match (finite, n_max) {
        (true, Some(_)) => {
            return Err(Error::invalid(
                "variety file has both `finite` and `n_max` headers",
            ))
        }
        (true, None) => Truncation::Complete,
        (false, Some(n)) => Truncation::Octave(n),
        (false, None) => {
            let top = pts
                .iter()
                .map(|(z, _)| mp::abs(z).to_f64())
                .fold(0.0, f64::max);
            let n = if top <= 1.0 {
                0
            } else {
                top.log2().ceil() as u32
            };
            warnings.push(format!(
                "no `# n_max` or `# finite` header; assuming the points are complete up to n_max = {n}"
            ));
            Truncation::Octave(n)
        }
    };
    if let Truncation::Octave(n) = truncation {
        let r = 2f64.powi(n as i32);
        if let Some((i, _)) = pts
            .iter()
            .enumerate()
            .find(|(_, (z, _))| mp::abs(z).to_f64() > r)
        {
            return Err(parse_err(
                rows[i].0,
                format!("point lies outside D(0, 2^{n})"),
            ));
        }
    }
    let (variety, resorted) = MultiplicityVariety::new(pts, truncation)?;
    if resorted {
        warnings.push("points were not sorted by modulus and argument; re-sorted".to_string());
    }
    Ok(VarietyFile {
        variety,
        resorted,
        warnings,
    })
}

pub fn read_variety(path: &Path, bits: u32) -> Result<VarietyFile> {
    parse_variety(&std::fs::read_to_string(path)?, bits)
}

fn push_complex(out: &mut String, z: &Complex) {
    let _ = write!(
        out,
        "{} {}",
        mp::fmt_float(z.real()),
        mp::fmt_float(z.imag())
    );
}

pub fn format_variety(v: &MultiplicityVariety) -> String {
    let mut out = String::new();
    match v.truncation() {
        Truncation::Octave(n) => {
            let _ = writeln!(out, "# n_max {n}");
        }
        Truncation::Complete => out.push_str("# finite\n"),
    }
    for p in v.points() {
        push_complex(&mut out, &p.z);
        let _ = writeln!(out, " {}", p.mult);
    }
    out
}

/// Reads `j l re im` records (`j` 1-based in the sorted order of `v`, `l`
/// from 0). Every entry must appear exactly once.
pub fn parse_values(text: &str, v: &MultiplicityVariety, bits: u32) -> Result<ValueSequence> {
    mp::check_bits(bits)?;
    let rows = parse_indexed(text, v, v.len(), bits)?;
    ValueSequence::new(v, rows)
}

fn parse_indexed(
    text: &str,
    v: &MultiplicityVariety,
    q: usize,
    bits: u32,
) -> Result<Vec<Vec<Complex>>> {
    let (records, _) = records(text);
    let mut slots: Vec<Vec<Option<Complex>>> = v.points()[..q]
        .iter()
        .map(|p| vec![None; p.mult as usize])
        .collect();
    for (line, words) in &records {
        if words.len() != 4 {
            return Err(parse_err(*line, "expected `j l re im`"));
        }
        let j: usize = field(*line, words[0], "index j")?;
        let l: usize = field(*line, words[1], "derivative order l")?;
        if j == 0 || j > q {
            return Err(parse_err(*line, format!("index j = {j} outside 1..={q}")));
        }
        let slot = slots[j - 1]
            .get_mut(l)
            .ok_or_else(|| parse_err(*line, format!("order l = {l} not below m_{j}")))?;
        if slot.is_some() {
            return Err(parse_err(*line, format!("entry ({j}, {l}) given twice")));
        }
        *slot = Some(complex(*line, words[2], words[3], bits)?);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(j, row)| {
            row.into_iter()
                .enumerate()
                .map(|(l, x)| {
                    x.ok_or_else(|| Error::invalid(format!("entry ({}, {l}) is missing", j + 1)))
                })
                .collect()
        })
        .collect()
}

pub fn read_values(path: &Path, v: &MultiplicityVariety, bits: u32) -> Result<ValueSequence> {
    parse_values(&std::fs::read_to_string(path)?, v, bits)
}

fn format_rows(out: &mut String, rows: &[Vec<Complex>]) {
    for (j, row) in rows.iter().enumerate() {
        for (l, x) in row.iter().enumerate() {
            let _ = write!(out, "{} {l} ", j + 1);
            push_complex(out, x);
            out.push('\n');
        }
    }
}

pub fn format_values(w: &ValueSequence) -> String {
    let mut out = String::new();
    format_rows(&mut out, w.rows());
    out
}

pub fn format_table(t: &DividedDifferenceTable) -> String {
    let mut out = format!("# precision_bits {}\n", t.precision_bits());
    format_rows(&mut out, t.rows());
    out
}

/// Reads a table over the first `q` points of `v`, `q` being the largest
/// index present.
pub fn parse_table(text: &str, v: &MultiplicityVariety) -> Result<DividedDifferenceTable> {
    let (records, headers) = records(text);
    let bits: u32 = header_value(&headers, "precision_bits")?
        .ok_or_else(|| Error::invalid("table file lacks the `# precision_bits` header"))?;
    mp::check_bits(bits)?;
    let mut q = 0;
    for (line, words) in &records {
        let j: usize = field(*line, words.first().copied().unwrap_or(""), "index j")?;
        q = q.max(j);
    }
    if q == 0 || q > v.len() {
        return Err(Error::invalid(format!(
            "table covers {q} points; the variety has {}",
            v.len()
        )));
    }
    let rows = parse_indexed(text, v, q, bits)?;
    Ok(DividedDifferenceTable::from_rows(rows, bits))
}

pub fn read_table(path: &Path, v: &MultiplicityVariety) -> Result<DividedDifferenceTable> {
    parse_table(&std::fs::read_to_string(path)?, v)
}
