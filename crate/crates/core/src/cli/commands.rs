use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use super::{
    AlphaChoice, CheckArgs, Cli, Command, Conditions, DivdiffArgs, FieldArgs, FieldKind,
    FitAlphaArgs, GenerateArgs, GenerateKind, Method, Settings, VarietyCheckArgs, VarietyCommand,
    EXIT_DIVERGENT, EXIT_INCONCLUSIVE, EXIT_OK,
};
use crate::divdiff::{phi_table, phi_table_tableau, DividedDifferenceTable, ValueSequence};
use crate::error::{Error, Result};
use crate::generate::{geometric, integers, pi_lattice, MultRule, Ratio};
use crate::growth::{
    check_condition_1, check_condition_2_with, lemma_number_check, membership_apv_with,
    membership_tilde, GrowthFit, Octaves, Verdict,
};
use crate::io;
use crate::mp;
use crate::smoothing::{
    default_radius, fit_alpha, AlphaFit, GridSpec, Potential, SmoothInterpolant,
};
use crate::variety::{MultiplicityVariety, Truncation};
use crate::Weight;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a BTreeMap<String, String>,
    warnings: &'a [String],
    result: T,
}

/// Writes `text` to `path`, or to standard output without one.
fn emit(path: Option<&str>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_report<T: Serialize>(
    path: Option<&str>,
    command: &str,
    settings: &Settings,
    warnings: &[String],
    result: T,
) -> Result<()> {
    let report = Report {
        tool: "varkit",
        version: VERSION,
        command,
        config: settings.resolved(),
        warnings,
        result,
    };
    let mut text = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::invalid(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    emit(path, &text)
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn finish_settings(settings: &Settings, warnings: &mut Vec<String>) {
    for key in settings.unused() {
        warnings.push(format!("config key `{key}` is not used by this command"));
    }
    warn_all(warnings);
}

/// `# key=value` comment lines recording the resolved settings.
fn config_comment(command: &str, settings: &Settings) -> String {
    let mut out = format!("# varkit {VERSION} {command}\n");
    for (k, v) in settings.resolved() {
        let _ = writeln!(out, "# config {k}={v}");
    }
    out
}

pub(super) fn dispatch(cli: Cli) -> Result<i32> {
    let mut settings = Settings::load(cli.config.as_deref())?;
    match cli.command {
        Command::Generate(a) => generate(a, &mut settings),
        Command::Variety(VarietyCommand::Check(a)) => variety_check(a, &mut settings),
        Command::Check(a) => check(a, &mut settings),
        Command::Divdiff(a) => divdiff(a, &mut settings),
        Command::Field(a) => field(a, &mut settings),
        Command::FitAlpha(a) => fit_alpha_cmd(a, &mut settings),
    }
}

fn bits(settings: &mut Settings, flag: Option<u32>) -> Result<u32> {
    let b = settings
        .get("bits", flag, Some(mp::DEFAULT_BITS))?
        .expect("defaulted");
    mp::check_bits(b)?;
    Ok(b)
}

fn load_variety(
    settings: &mut Settings,
    flag: Option<String>,
    bits: u32,
    warnings: &mut Vec<String>,
) -> Result<MultiplicityVariety> {
    let path: String = settings.require("variety", flag)?;
    let file = io::read_variety(Path::new(&path), bits)?;
    warnings.extend(file.warnings);
    Ok(file.variety)
}

fn compute_table(
    v: &MultiplicityVariety,
    w: &ValueSequence,
    q: usize,
    bits: u32,
    method: Method,
) -> Result<DividedDifferenceTable> {
    match method {
        Method::Recursion => phi_table(v, w, q, bits),
        Method::Tableau => phi_table_tableau(v, w, q, bits),
    }
}

fn precision_hint(method: Method) -> &'static str {
    match method {
        Method::Recursion => "consider --method tableau or more bits",
        Method::Tableau => "consider more bits",
    }
}

/// The table, with a warning when some entry may have lost nearly all bits.
fn build_table(
    v: &MultiplicityVariety,
    w: &ValueSequence,
    q: usize,
    bits: u32,
    method: Method,
    warnings: &mut Vec<String>,
) -> Result<DividedDifferenceTable> {
    let t = compute_table(v, w, q, bits, method)?;
    if t.lost_bits() > f64::from(bits) - 16.0 {
        warnings.push(format!(
            "the {method} may have lost up to {:.0} of {bits} bits in some entries; {}",
            t.lost_bits(),
            precision_hint(method)
        ));
    }
    Ok(t)
}

fn generate(a: GenerateArgs, s: &mut Settings) -> Result<i32> {
    let kind: GenerateKind = s.require("kind", a.kind)?;
    let n_max: u32 = s.require("n_max", a.n_max)?;
    let rule = s
        .get("mult", a.mult, Some(MultRule::Const(1)))?
        .expect("defaulted");
    let bits = bits(s, a.bits)?;
    let v = match kind {
        GenerateKind::PiLattice => pi_lattice(n_max, rule, bits)?,
        GenerateKind::Integers => {
            let origin = s
                .get("origin", a.origin.then_some(true), Some(false))?
                .expect("defaulted");
            integers(n_max, rule, origin, bits)?
        }
        GenerateKind::Geometric => {
            let ratio: Ratio = s.require("ratio", a.ratio)?;
            geometric(n_max, ratio, rule, bits)?
        }
    };
    let output = s.get::<String>("output", a.output, None)?;
    let mut warnings = Vec::new();
    finish_settings(s, &mut warnings);
    let mut text = config_comment("generate", s);
    text.push_str(&io::format_variety(&v));
    emit(output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VarietySummary {
    points: usize,
    total_multiplicity: u64,
    max_multiplicity: u32,
    truncation: Truncation,
    trusted_radius: Option<f64>,
    largest_modulus: f64,
    resorted: bool,
}

fn variety_check(a: VarietyCheckArgs, s: &mut Settings) -> Result<i32> {
    let bits = bits(s, a.bits)?;
    let path: String = s.require("variety", a.variety)?;
    let file = io::read_variety(Path::new(&path), bits)?;
    let sorted = s.get::<String>("sorted", a.sorted, None)?;
    let report = s.get::<String>("report", a.report, None)?;
    let mut warnings = file.warnings.clone();
    finish_settings(s, &mut warnings);
    let v = &file.variety;
    if let Some(out) = &sorted {
        std::fs::write(out, io::format_variety(v))?;
    }
    let trusted = v.trusted_radius();
    let summary = VarietySummary {
        points: v.len(),
        total_multiplicity: v.total_multiplicity(),
        max_multiplicity: v.max_multiplicity(),
        truncation: v.truncation(),
        trusted_radius: trusted.is_finite().then_some(trusted),
        largest_modulus: v.points().last().map_or(0.0, |p| p.modulus()),
        resorted: file.resorted,
    };
    emit_report(report.as_deref(), "variety check", s, &warnings, summary)?;
    Ok(EXIT_OK)
}

/// Octaves `min(4, n_max)..n_max` for a truncated variety; for a finite one,
/// up to four octaves past the largest point.
fn default_octaves(v: &MultiplicityVariety) -> Result<Octaves> {
    let end = match v.truncation() {
        Truncation::Octave(n) => n,
        Truncation::Complete => {
            let top = v.points().last().map_or(1.0, |p| p.modulus()).max(1.0);
            top.log2().ceil() as u32 + 4
        }
    };
    Octaves::new(end.min(4), end)
}

#[derive(Serialize)]
struct CheckResult {
    fits: Vec<GrowthFit>,
    table_lost_bits: Option<f64>,
    exit_code: i32,
}

fn check(a: CheckArgs, s: &mut Settings) -> Result<i32> {
    let bits = bits(s, a.bits)?;
    let mut warnings = Vec::new();
    let v = load_variety(s, a.variety, bits, &mut warnings)?;
    let weight: Weight = s
        .get("weight", a.weight, Some(Weight::exp_type()))?
        .expect("defaulted");
    let values_path = s.get::<String>("values", a.values, None)?;
    let default_conditions = if values_path.is_some() {
        "1,2,3"
    } else {
        "1,2"
    };
    let conditions: Conditions = s
        .get(
            "conditions",
            a.conditions,
            Some(default_conditions.parse()?),
        )?
        .expect("defaulted");
    let octaves = s
        .get("octaves", a.octaves, Some(default_octaves(&v)?))?
        .expect("defaulted");
    let base = s.get("base", a.base, Some(2.0))?.expect("defaulted");
    let octaves = octaves.with_base(base)?;
    let method = s
        .get("method", a.method, Some(Method::Recursion))?
        .expect("defaulted");
    let report = s.get::<String>("report", a.report, None)?;

    let values = match &values_path {
        Some(p) => Some(io::read_values(Path::new(p), &v, bits)?),
        None => None,
    };
    if conditions.0.contains(&3) && values.is_none() {
        return Err(Error::invalid("condition 3 needs a value file (--values)"));
    }

    let mut fits = Vec::new();
    let mut lost = None;
    for c in &conditions.0 {
        match c {
            1 => {
                fits.push(check_condition_1(&v, &weight, &octaves)?);
                fits.push(lemma_number_check(&v, &weight, &octaves)?);
            }
            2 => fits.push(check_condition_2_with(&v, &weight, &octaves)?),
            _ => {
                let w = values.as_ref().expect("checked above");
                // Small entries may lose every bit without moving an octave
                // norm, so only the norms' own loss is worth a warning.
                let t = compute_table(&v, w, v.len(), bits, method)?;
                lost = Some(t.lost_bits());
                let fit = membership_tilde(&t, &v, &weight, &octaves)?;
                if let Some(nl) = fit.norm_lost_bits.filter(|&nl| nl > f64::from(bits) - 16.0) {
                    warnings.push(format!(
                        "octave norms may have lost up to {nl:.0} of {bits} bits; the membership_tilde verdict is unreliable; {}",
                        precision_hint(method)
                    ));
                }
                fits.push(fit);
            }
        }
    }
    if let Some(w) = &values {
        fits.push(membership_apv_with(&v, w, &weight, &octaves)?);
    }
    finish_settings(s, &mut warnings);

    let code = if fits.iter().any(|f| f.verdict == Verdict::Divergent) {
        EXIT_DIVERGENT
    } else if fits.iter().any(|f| f.verdict == Verdict::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    for f in &fits {
        let ratio = f
            .final_ratio
            .map_or("n/a".to_string(), |r| format!("{r:.6}"));
        eprintln!(
            "{}: {} (B_hat {:.6}, ln_A_hat {:.6}, final ratio {ratio})",
            f.condition, f.verdict, f.b_hat, f.ln_a_hat
        );
    }
    emit_report(
        report.as_deref(),
        "check",
        s,
        &warnings,
        CheckResult {
            fits,
            table_lost_bits: lost,
            exit_code: code,
        },
    )?;
    Ok(code)
}

fn divdiff(a: DivdiffArgs, s: &mut Settings) -> Result<i32> {
    let bits = bits(s, a.bits)?;
    let mut warnings = Vec::new();
    let v = load_variety(s, a.variety, bits, &mut warnings)?;
    let values: String = s.require("values", a.values)?;
    let w = io::read_values(Path::new(&values), &v, bits)?;
    let q = s.get("q", a.q, Some(v.len()))?.expect("defaulted");
    let method = s
        .get("method", a.method, Some(Method::Recursion))?
        .expect("defaulted");
    let output = s.get::<String>("output", a.output, None)?;
    let t = build_table(&v, &w, q, bits, method, &mut warnings)?;
    finish_settings(s, &mut warnings);
    let mut text = config_comment("divdiff", s);
    if method == Method::Recursion {
        let _ = writeln!(text, "# lost_bits_bound {:.3}", t.lost_bits());
    }
    text.push_str(&io::format_table(&t));
    emit(output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct FieldSummary {
    field: String,
    rows: usize,
    columns: Vec<&'static str>,
    grid_radius: f64,
    domain_radius: Option<f64>,
    /// Largest finite `|value|`.
    max_abs: f64,
    /// Rows whose value is not finite (the points themselves for U, V).
    nonfinite: usize,
    alpha: Option<f64>,
    alpha_fit: Option<AlphaFit>,
    homothety_scale: Option<f64>,
}

fn push_real(out: &mut String, (x, y): (f64, f64), value: f64) {
    let _ = writeln!(out, "{x},{y},{value}");
}

fn field(a: FieldArgs, s: &mut Settings) -> Result<i32> {
    let kind: FieldKind = s.require("field", a.field)?;
    let bits = bits(s, a.bits)?;
    let mut warnings = Vec::new();
    let v = load_variety(s, a.variety, bits, &mut warnings)?;
    let grid: GridSpec = s
        .get("grid", a.grid, Some("polar:64:64".parse()?))?
        .expect("defaulted");
    let output = s.get::<String>("output", a.output, None)?;
    let report = s.get::<String>("report", a.report, None)?;

    let mut csv = String::new();
    let mut max_abs = 0f64;
    let mut nonfinite = 0;
    let mut track = |m: f64| {
        if m.is_finite() {
            max_abs = max_abs.max(m);
        } else {
            nonfinite += 1;
        }
    };
    let (columns, radius, domain, alpha, alpha_fit, scale) = match kind {
        FieldKind::F | FieldKind::DbarF => {
            let values: String = s.require("values", a.values)?;
            let w = io::read_values(Path::new(&values), &v, bits)?;
            let method = s
                .get("method", a.method, Some(Method::Recursion))?
                .expect("defaulted");
            let t = build_table(&v, &w, v.len(), bits, method, &mut warnings)?;
            let f = SmoothInterpolant::new(v.clone(), t)?;
            let radius = default_radius(&v, f.domain_radius());
            for (x, y) in grid.points(radius) {
                let z = mp::from_f64(x, y, bits);
                let val = if kind == FieldKind::F {
                    f.eval_f(&z)?
                } else {
                    f.eval_dbar_f(&z)?
                };
                let (re, im) = mp::to_f64_pair(&val);
                track(mp::abs(&val).to_f64());
                let _ = writeln!(csv, "{x},{y},{re},{im}");
            }
            (
                vec!["re", "im", "value_re", "value_im"],
                radius,
                f.domain_radius(),
                None,
                None,
                None,
            )
        }
        FieldKind::V | FieldKind::W | FieldKind::U => {
            let probe = Potential::new(&v, 0.0)?;
            let domain = if kind == FieldKind::V {
                probe.v_radius()
            } else {
                probe.u_radius()
            };
            let radius = default_radius(&v, domain);
            let (alpha, fit) = if kind == FieldKind::U {
                match s
                    .get("alpha", a.alpha, Some(AlphaChoice::Fit))?
                    .expect("defaulted")
                {
                    AlphaChoice::Value(x) => (Some(x), None),
                    AlphaChoice::Fit => {
                        let fit = fit_alpha(&v, &grid)?;
                        s.record("alpha_fitted", fit.alpha);
                        (Some(fit.alpha), Some(fit))
                    }
                }
            } else {
                (None, None)
            };
            let pot = probe.with_alpha(alpha.unwrap_or(0.0));
            for p in grid.points(radius) {
                let val = match kind {
                    FieldKind::V => pot.eval_v(p.0, p.1)?,
                    FieldKind::W => pot.eval_w(p.0, p.1)?,
                    _ => pot.eval_u(p.0, p.1)?,
                };
                track(val.abs());
                push_real(&mut csv, p, val);
            }
            (
                vec!["re", "im", "value"],
                radius,
                domain,
                alpha,
                fit,
                Some(pot.scale()),
            )
        }
    };
    finish_settings(s, &mut warnings);
    emit(output.as_deref(), &csv)?;
    let summary = FieldSummary {
        field: kind.to_string(),
        rows: grid.len(),
        columns,
        grid_radius: grid.reach(radius),
        domain_radius: domain.is_finite().then_some(domain),
        max_abs,
        nonfinite,
        alpha,
        alpha_fit,
        homothety_scale: scale,
    };
    // The CSV owns standard output when no file is given.
    match (report.as_deref(), output.is_some()) {
        (Some(p), _) => emit_report(Some(p), "field", s, &warnings, summary)?,
        (None, true) => emit_report(None, "field", s, &warnings, summary)?,
        (None, false) => {}
    }
    Ok(EXIT_OK)
}

fn fit_alpha_cmd(a: FitAlphaArgs, s: &mut Settings) -> Result<i32> {
    let bits = bits(s, a.bits)?;
    let mut warnings = Vec::new();
    let v = load_variety(s, a.variety, bits, &mut warnings)?;
    let grid: GridSpec = s
        .get("grid", a.grid, Some("cart:256:256".parse()?))?
        .expect("defaulted");
    let report = s.get::<String>("report", a.report, None)?;
    let fit = fit_alpha(&v, &grid)?;
    finish_settings(s, &mut warnings);
    eprintln!(
        "alpha {} (min discrete Laplacian {:e}, spacing {})",
        fit.alpha, fit.min_laplacian, fit.spacing
    );
    emit_report(report.as_deref(), "fit-alpha", s, &warnings, fit)?;
    Ok(EXIT_OK)
}
