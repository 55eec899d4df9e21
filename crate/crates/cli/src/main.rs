//! `gregory`: exact values, integral evaluations, contour replay and
//! asymptotic tables for Gregory coefficients.

mod render;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use gregory::asymptotics::comparison_table;
use gregory::complex::ComplexReal;
use gregory::contour::{arc_decay_probe, contour_integral, ArcKind, ArcProbe};
use gregory::exact::{cauchy_second, check_relation, gregory_recurrence, gregory_stirling};
use gregory::quadrature::{schroeder_continuous, schroeder_integral, QuadratureResult};
use gregory::{Error, Precision};

use render::{csv_field, fixed, fixed_rational, fraction, sci, Method, OutputRecord};

/// Extra digits carried by evaluations so the rounded output is stable.
const DISPLAY_GUARD: u32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "gregory",
    version,
    about = "Gregory coefficients (Bernoulli numbers of the second kind)"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format (each command has its own default).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Decimal digits for real-valued output.
    #[arg(long, global = true, env = "GREGORY_DIGITS", default_value_t = 30)]
    digits: u32,
    /// Write to this file instead of stdout. For two-file b-file output this
    /// is the path prefix.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Bfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Seq {
    Num,
    Den,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExactMethod {
    Recurrence,
    Stirling,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact G_1..G_N as reduced fractions.
    Exact {
        n_max: usize,
        /// Which b-file sequence to print; without it both files are written
        /// next to --out.
        #[arg(long, value_enum)]
        seq: Option<Seq>,
        #[arg(long, value_enum, default_value = "recurrence")]
        method: ExactMethod,
    },
    /// G_n from Schröder's integral, or the integral at real order.
    Quad {
        #[arg(required_unless_present = "continuous", conflicts_with = "continuous")]
        n: Option<u32>,
        /// Real order s >= 1.
        #[arg(long)]
        continuous: Option<String>,
    },
    /// Keyhole contour around the pole at z = -1.
    Contour {
        n: u32,
        /// Inner radius.
        #[arg(long = "r", default_value = "1e-6")]
        r: String,
        /// Outer radius.
        #[arg(long = "R", default_value = "1e6")]
        big_r: String,
        /// Print arc magnitudes against their decay bounds instead.
        #[arg(long)]
        probe_arcs: bool,
    },
    /// Exact |G_n| against the first-order and Davis forms.
    Asym { n_from: u64, n_to: u64, stride: u64 },
    /// Cauchy numbers of the second kind and their relation to G_n.
    Cauchy {
        n_max: usize,
        /// Only check the relation; print nothing on success.
        #[arg(long)]
        check_only: bool,
    },
}

/// A failure that should end with exit code 2 and a usage note.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if let Some(Usage(msg)) = err.downcast_ref::<Usage>() {
                eprintln!("usage: {msg}");
                return ExitCode::from(2);
            }
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let common = &cli.common;
    match cli.command {
        Command::Exact { n_max, seq, method } => cmd_exact(common, n_max, seq, method),
        Command::Quad { n, continuous } => cmd_quad(common, n, continuous.as_deref()),
        Command::Contour {
            n,
            r,
            big_r,
            probe_arcs,
        } => cmd_contour(common, n, &r, &big_r, probe_arcs),
        Command::Asym { n_from, n_to, stride } => cmd_asym(common, n_from, n_to, stride),
        Command::Cauchy { n_max, check_only } => cmd_cauchy(common, n_max, check_only),
    }
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Working precision for `digits` displayed places: at least the library
/// minimum, plus a few guard digits so the rounded output is stable.
fn working_precision(digits: u32) -> anyhow::Result<Precision> {
    if digits > Precision::MAX_DIGITS - DISPLAY_GUARD {
        return Err(usage(format!(
            "--digits must be at most {}",
            Precision::MAX_DIGITS - DISPLAY_GUARD
        )));
    }
    Precision::new(digits.max(Precision::MIN_DIGITS) + DISPLAY_GUARD).map_err(|e| usage(e.to_string()))
}

fn parse_float(what: &str, s: &str, bits: u32) -> anyhow::Result<Float> {
    let parsed = Float::parse(s).map_err(|_| usage(format!("{what}: not a number: {s}")))?;
    Ok(Float::with_val(bits, parsed))
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn reject_bfile(format: Format, command: &str) -> anyhow::Result<()> {
    if format == Format::Bfile {
        return Err(usage(format!(
            "--format bfile is only available for `exact`, not `{command}`"
        )));
    }
    Ok(())
}

fn cmd_exact(common: &Common, n_max: usize, seq: Option<Seq>, method: ExactMethod) -> anyhow::Result<()> {
    if n_max == 0 {
        return Err(usage("exact N needs N >= 1"));
    }
    let values: Vec<Rational> = match method {
        ExactMethod::Recurrence => gregory_recurrence(n_max)?.values().to_vec(),
        ExactMethod::Stirling => (1..=n_max).map(gregory_stirling).collect::<Result<_, Error>>()?,
    };
    let format = common.format.unwrap_or(Format::Csv);
    match format {
        Format::Csv => {
            let mut out = open_output(common.out.as_deref())?;
            writeln!(out, "n,exact")?;
            for (i, g) in values.iter().enumerate() {
                writeln!(out, "{},{}", i + 1, fraction(g))?;
            }
            out.flush()?;
        }
        Format::Json => {
            let method = match method {
                ExactMethod::Recurrence => None,
                ExactMethod::Stirling => Some(Method::Stirling),
            };
            let records: Vec<OutputRecord> = values
                .iter()
                .enumerate()
                .map(|(i, g)| OutputRecord {
                    method,
                    exact: Some(fraction(g)),
                    ..OutputRecord::integer(i as u64 + 1)
                })
                .collect();
            let mut out = open_output(common.out.as_deref())?;
            write_json(&mut out, &records)?;
            out.flush()?;
        }
        Format::Bfile => {
            let write_seq = |out: &mut dyn Write, seq: Seq| -> anyhow::Result<()> {
                for (i, g) in values.iter().enumerate() {
                    match seq {
                        Seq::Num => writeln!(out, "{} {}", i + 1, g.numer())?,
                        Seq::Den => writeln!(out, "{} {}", i + 1, g.denom())?,
                    }
                }
                out.flush()?;
                Ok(())
            };
            match (seq, common.out.as_deref()) {
                (Some(seq), path) => write_seq(&mut *open_output(path)?, seq)?,
                (None, Some(prefix)) => {
                    for (seq, suffix) in [(Seq::Num, "numerators"), (Seq::Den, "denominators")] {
                        let path = PathBuf::from(format!("{}-{suffix}.txt", prefix.display()));
                        write_seq(&mut *open_output(Some(&path))?, seq)?;
                    }
                }
                (None, None) => return Err(usage("b-file output needs --seq num|den or an --out prefix")),
            }
        }
    }
    Ok(())
}

fn quad_record(n_or_s: OutputRecord, method: Method, r: &QuadratureResult, places: usize) -> OutputRecord {
    OutputRecord {
        method: Some(method),
        value: Some(fixed(&r.value, places)),
        error: Some(sci(&r.error_estimate)),
        tail_bound: Some(sci(&r.tail_bound)),
        ..n_or_s
    }
}

fn cmd_quad(common: &Common, n: Option<u32>, continuous: Option<&str>) -> anyhow::Result<()> {
    let format = common.format.unwrap_or(Format::Csv);
    reject_bfile(format, "quad")?;
    let places = common.digits as usize;
    let working = working_precision(common.digits)?;
    let (record, label) = match (n, continuous) {
        (Some(n), _) => {
            let r = schroeder_integral(n, working).context("quadrature not certified")?;
            (
                quad_record(OutputRecord::integer(n as u64), Method::Schroeder, &r, places),
                n.to_string(),
            )
        }
        (None, Some(s)) => {
            let s_val = parse_float("s", s, working.bits())?;
            if s_val < 1 {
                return Err(usage("--continuous needs s >= 1"));
            }
            let r = schroeder_continuous(&s_val, working).context("quadrature not certified")?;
            (
                quad_record(OutputRecord::real(s_val.to_f64()), Method::Continuous, &r, places),
                s.to_string(),
            )
        }
        (None, None) => unreachable!("clap requires one of them"),
    };
    let mut out = open_output(common.out.as_deref())?;
    match format {
        Format::Json => write_json(&mut out, &[&record])?,
        _ => {
            writeln!(out, "n,method,value,error,tail_bound")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&label),
                if n.is_some() { "schroeder" } else { "continuous" },
                record.value.as_deref().unwrap_or(""),
                record.error.as_deref().unwrap_or(""),
                record.tail_bound.as_deref().unwrap_or(""),
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ComplexOut {
    re: String,
    im: String,
}

impl ComplexOut {
    fn new(z: &ComplexReal, places: usize) -> Self {
        ComplexOut {
            re: fixed(&z.re, places),
            im: fixed(&z.im, places),
        }
    }
}

#[derive(Serialize)]
struct ContourOut<'a> {
    n: u32,
    r: &'a str,
    #[serde(rename = "R")]
    big_r: &'a str,
    leg_top: ComplexOut,
    leg_outer_arc: ComplexOut,
    leg_bottom: ComplexOut,
    leg_inner_arc: ComplexOut,
    total: ComplexOut,
    residue_target: ComplexOut,
    deviation: String,
    quadrature_error: String,
    evaluations: usize,
}

#[derive(Serialize)]
struct ArcSampleOut {
    radius: String,
    magnitude: String,
    bound_shape: String,
    ratio: String,
}

#[derive(Serialize)]
struct ArcProbeOut {
    constant: String,
    spread: String,
    samples: Vec<ArcSampleOut>,
}

impl ArcProbeOut {
    fn new(probe: &ArcProbe) -> Self {
        ArcProbeOut {
            constant: fixed(&probe.constant, 6),
            spread: fixed(&probe.spread, 6),
            samples: probe
                .samples
                .iter()
                .map(|s| ArcSampleOut {
                    radius: sci(&s.radius),
                    magnitude: sci(&s.magnitude),
                    bound_shape: sci(&s.bound_shape),
                    ratio: fixed(&s.ratio, 6),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct ProbeOut {
    n: u32,
    outer: ArcProbeOut,
    inner: ArcProbeOut,
}

fn cmd_contour(common: &Common, n: u32, r: &str, big_r: &str, probe_arcs: bool) -> anyhow::Result<()> {
    let format = common.format.unwrap_or(Format::Json);
    reject_bfile(format, "contour")?;
    if n == 0 {
        return Err(usage("contour N needs N >= 1"));
    }
    let p = working_precision(common.digits)?;
    let places = common.digits as usize;
    let mut out = open_output(common.out.as_deref())?;

    if probe_arcs {
        let radii =
            |exps: &[i32]| -> Vec<Float> { exps.iter().map(|&e| Float::with_val(p.bits(), 10).pow(e)).collect() };
        let outer = arc_decay_probe(n, ArcKind::Outer, &radii(&[2, 3, 4, 6, 8]), p)?;
        let inner = arc_decay_probe(n, ArcKind::Inner, &radii(&[-2, -4, -6, -8]), p)?;
        match format {
            Format::Json => write_json(
                &mut out,
                &ProbeOut {
                    n,
                    outer: ArcProbeOut::new(&outer),
                    inner: ArcProbeOut::new(&inner),
                },
            )?,
            _ => {
                writeln!(out, "arc,radius,magnitude,bound_shape,ratio")?;
                for (name, probe) in [("outer", &outer), ("inner", &inner)] {
                    for s in &probe.samples {
                        writeln!(
                            out,
                            "{name},{},{},{},{}",
                            sci(&s.radius),
                            sci(&s.magnitude),
                            sci(&s.bound_shape),
                            fixed(&s.ratio, 6)
                        )?;
                    }
                }
            }
        }
        out.flush()?;
        return Ok(());
    }

    let r_val = parse_float("r", r, p.bits())?;
    let big_r_val = parse_float("R", big_r, p.bits())?;
    let report = match contour_integral(n, &r_val, &big_r_val, p) {
        Err(e @ (Error::Domain { .. } | Error::PoleTooClose { .. })) => return Err(usage(e.to_string())),
        other => other?,
    };
    let legs = [
        ("top", &report.leg_top),
        ("outer_arc", &report.leg_outer_arc),
        ("bottom", &report.leg_bottom),
        ("inner_arc", &report.leg_inner_arc),
        ("total", &report.total),
        ("residue_target", &report.residue_target),
    ];
    match format {
        Format::Json => {
            let c = |z: &ComplexReal| ComplexOut::new(z, places);
            let body = ContourOut {
                n,
                r,
                big_r,
                leg_top: c(&report.leg_top),
                leg_outer_arc: c(&report.leg_outer_arc),
                leg_bottom: c(&report.leg_bottom),
                leg_inner_arc: c(&report.leg_inner_arc),
                total: c(&report.total),
                residue_target: c(&report.residue_target),
                deviation: sci(&report.deviation),
                quadrature_error: sci(&report.quadrature_error),
                evaluations: report.evaluations,
            };
            write_json(&mut out, &body)?;
        }
        _ => {
            writeln!(out, "leg,re,im")?;
            for (name, z) in legs {
                writeln!(out, "{name},{},{}", fixed(&z.re, places), fixed(&z.im, places))?;
            }
            writeln!(out, "deviation,{},", sci(&report.deviation))?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct AsymOut {
    n: u64,
    exact_magnitude: String,
    first_order: String,
    first_order_ratio: String,
    davis_denominator: String,
    davis_ratio: String,
}

fn cmd_asym(common: &Common, n_from: u64, n_to: u64, stride: u64) -> anyhow::Result<()> {
    let format = common.format.unwrap_or(Format::Csv);
    reject_bfile(format, "asym")?;
    if n_from < 2 || n_to < n_from || stride == 0 {
        return Err(usage("asym needs 2 <= n_from <= n_to and stride >= 1"));
    }
    let p = working_precision(common.digits)?;
    let places = common.digits as usize;
    let rows = comparison_table(n_from, n_to, stride, p)?;
    let mut out = open_output(common.out.as_deref())?;
    let cells = |row: &gregory::asymptotics::AsymptoticRow| {
        [
            fixed_rational(&Rational::from(row.exact.abs_ref()), places),
            fixed(&row.first_order, places),
            fixed(&row.first_order_ratio, places),
            fixed(&row.davis_denominator, places),
            fixed(&row.davis_ratio, places),
        ]
    };
    match format {
        Format::Json => {
            let records: Vec<_> = rows
                .iter()
                .map(|row| {
                    let [exact_magnitude, first_order, first_order_ratio, davis_denominator, davis_ratio] = cells(row);
                    AsymOut {
                        n: row.n,
                        exact_magnitude,
                        first_order,
                        first_order_ratio,
                        davis_denominator,
                        davis_ratio,
                    }
                })
                .collect();
            write_json(&mut out, &records)?;
        }
        _ => {
            writeln!(
                out,
                "n,exact_magnitude,first_order,first_order_ratio,davis_denominator,davis_ratio"
            )?;
            for row in &rows {
                writeln!(out, "{},{}", row.n, cells(row).join(","))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CauchyOut {
    n: usize,
    exact: String,
    relation: &'static str,
}

fn cmd_cauchy(common: &Common, n_max: usize, check_only: bool) -> anyhow::Result<()> {
    let format = common.format.unwrap_or(Format::Csv);
    reject_bfile(format, "cauchy")?;
    if n_max == 0 {
        return Err(usage("cauchy N needs N >= 1"));
    }
    if check_only && n_max < 2 {
        return Err(usage("the relation n C2(n-1) - C2(n) = n! |G_n| needs n >= 2"));
    }
    let mut failures = Vec::new();
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let c = cauchy_second(n)?;
        let status = if n < 2 {
            "n/a"
        } else if check_relation(n)?.holds {
            "ok"
        } else {
            failures.push(n);
            "failed"
        };
        rows.push((n, c, status));
    }
    if !check_only {
        let mut out = open_output(common.out.as_deref())?;
        match format {
            Format::Json => {
                let records: Vec<_> = rows
                    .iter()
                    .map(|(n, c, status)| CauchyOut {
                        n: *n,
                        exact: fraction(c),
                        relation: status,
                    })
                    .collect();
                write_json(&mut out, &records)?;
            }
            _ => {
                writeln!(out, "n,cauchy_second,relation")?;
                for (n, c, status) in &rows {
                    writeln!(out, "{n},{},{status}", fraction(c))?;
                }
            }
        }
        out.flush()?;
    }
    if !failures.is_empty() {
        bail!("relation failed for n = {failures:?}");
    }
    Ok(())
}
