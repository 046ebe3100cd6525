//! Batch front end: descriptor files in, tables and serialized series out.

use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use kahler_gw::lattice_covers::{cover_census, f2_fiber_coefficient, regular_fiber_coefficient, TorsionCharacter};
use kahler_gw::series::SeriesDocument;
use kahler_gw::spin_parity::{count_parities, signed_double_cover_sum, Parity};
use kahler_gw::surface_model::{assemble_gw_series, assumption_notes, AssemblyOptions, Limits, MinimalModel};
use kahler_gw::verify::{run_all, VerifyConfig};
use kahler_gw::{Error, GwSeries, Rational, SurfaceDescriptor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "kgw", version, about = "Exact Gromov-Witten series of Kähler surfaces with p_g > 0")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Descriptor file (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Largest class degree per canonical component.
    #[arg(long, global = true, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_degree: u64,

    /// Largest λ-exponent (2g - 2); must be even.
    #[arg(long, global = true, default_value_t = 4, value_parser = parse_even)]
    pub max_lambda: i64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Fill L2_m (m > 2) slots from the étale census, marked conjectural.
    #[arg(long, global = true)]
    pub conjectural_etale: bool,

    /// Degree range A..B (inclusive).
    #[arg(long, global = true, value_parser = parse_range)]
    pub d_range: Option<RangeInclusive<u64>>,

    /// Genus range A..B (inclusive).
    #[arg(long, global = true, value_parser = parse_range)]
    pub h_range: Option<RangeInclusive<u64>>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Assemble the series of the surface described by --input.
    Assemble,
    /// Signed étale-cover census of an elliptic fiber.
    CensusCovers {
        /// Order of the normal bundle in Pic⁰ (1 = regular fiber).
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// Character vector "x,y" mod m.
        #[arg(long, default_value = "1,0", value_parser = parse_pair)]
        v: (u64, u64),
    },
    /// Even/odd theta-characteristic census and signed double-cover sums.
    CensusSpin,
    /// Check every closed form against its brute-force census.
    Verify,
}

fn parse_even(s: &str) -> Result<i64, String> {
    let n: i64 = s.parse().map_err(|e| format!("{e}"))?;
    if n < 0 || n % 2 != 0 {
        return Err(format!("must be even and non-negative, got {n}"));
    }
    Ok(n)
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|e| format!("{e}"))?;
    if a == 0 || a > b {
        return Err(format!("need 1 <= A <= B, got {a}..{b}"));
    }
    Ok(a..=b)
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    Ok((x.trim().parse().map_err(|e| format!("{e}"))?, y.trim().parse().map_err(|e| format!("{e}"))?))
}

/// Everything `assemble` emits; the text form is rendered from this so
/// that both formats carry the same coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssembleOutput {
    pub descriptor: SurfaceDescriptor,
    pub limits: Limits,
    pub notes: Vec<String>,
    pub series: SeriesDocument,
}

fn describe_surface(s: &SurfaceDescriptor) -> String {
    let model = match &s.minimal_model {
        MinimalModel::K3 => "K3".to_string(),
        MinimalModel::Abelian => "abelian".to_string(),
        MinimalModel::ProperlyElliptic { base_genus, chi_o, multiple_fibers } => format!(
            "properly elliptic over a genus-{base_genus} base, χ(O) = {chi_o}, multiple fibers {multiple_fibers:?}"
        ),
        MinimalModel::GeneralType { k2, chi_o } => format!("general type, K² = {k2}, χ(O) = {chi_o}"),
    };
    format!("{model}, {} blow-up(s)", s.blowup_count)
}

pub fn render_assemble_text(out: &AssembleOutput) -> Result<String, Error> {
    let series = GwSeries::from_document(out.series.clone())?;
    let basis = series.basis();
    let mut text = String::new();
    let legend: Vec<String> = basis.entries().iter().map(|c| c.to_string()).collect();
    writeln!(text, "# surface: {}", describe_surface(&out.descriptor)).unwrap();
    if basis.fiber_slot().is_some() {
        writeln!(text, "# basis: [{}]  fiber unit = [F]/{}", legend.join(", "), basis.fiber_lcm()).unwrap();
    } else {
        writeln!(text, "# basis: [{}]", legend.join(", ")).unwrap();
    }
    writeln!(text, "# window: class degree <= {}, λ-exponent <= {}", out.limits.max_degree, out.limits.max_lambda)
        .unwrap();
    for note in &out.notes {
        writeln!(text, "# note: {note}").unwrap();
    }
    let rows: Vec<(String, String)> = series.terms().map(|(m, c)| (basis.describe(m), c.to_string())).collect();
    let width = rows.iter().map(|(m, _)| m.chars().count()).max().unwrap_or(0);
    for (m, c) in &rows {
        let pad = width - m.chars().count();
        writeln!(text, "{m}{}  {c}", " ".repeat(pad)).unwrap();
    }
    let window = series.window_monomials().len();
    writeln!(
        text,
        "# {} stored term(s); the other {} in-window coefficient(s) are 0",
        rows.len(),
        window.saturating_sub(rows.len())
    )
    .unwrap();
    Ok(text)
}

fn read_descriptor(config: &RunConfig) -> Result<SurfaceDescriptor, Error> {
    let path = config.input.as_ref().ok_or_else(|| Error::Parse("--input PATH is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    SurfaceDescriptor::from_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn assemble(config: &RunConfig) -> Result<String, Error> {
    let descriptor = read_descriptor(config)?;
    let limits = Limits::new(config.max_degree, config.max_lambda)?;
    let options = AssemblyOptions { conjectural_etale: config.conjectural_etale };
    assemble_report(descriptor, limits, options, config.format)
}

/// Assembles the series of `descriptor` and renders it in `format`.
pub fn assemble_report(
    descriptor: SurfaceDescriptor,
    limits: Limits,
    options: AssemblyOptions,
    format: OutputFormat,
) -> Result<String, Error> {
    let series = assemble_gw_series(&descriptor, limits, options)?;
    let out = AssembleOutput {
        notes: assumption_notes(&descriptor, options),
        descriptor,
        limits,
        series: series.to_document(),
    };
    match format {
        OutputFormat::Text => render_assemble_text(&out),
        OutputFormat::Machine => Ok(serde_json::to_string_pretty(&out).expect("serializable") + "\n"),
    }
}

#[derive(Debug, Serialize)]
struct CoverRow {
    d: u64,
    covers: u64,
    trivial_pullbacks: u64,
    signed_sum: Rational,
    closed_form: Option<Rational>,
}

fn census_covers(config: &RunConfig, m: u64, v: (u64, u64)) -> Result<String, Error> {
    cover_table(m, v, config.d_range.clone().unwrap_or(1..=20), config.format)
}

/// Signed étale-cover census for each degree in `range`, beside its closed form where one is known.
pub fn cover_table(m: u64, v: (u64, u64), range: RangeInclusive<u64>, format: OutputFormat) -> Result<String, Error> {
    let nu = if m == 1 { TorsionCharacter::trivial() } else { TorsionCharacter::new(m, v)? };
    if *range.end() > kahler_gw::lattice_covers::MAX_CENSUS_DEGREE {
        return Err(Error::Capacity(format!("d ≤ {} required", kahler_gw::lattice_covers::MAX_CENSUS_DEGREE)));
    }
    let mut rows = Vec::new();
    for d in range {
        let c = cover_census(d, &nu)?;
        let closed_form = match m {
            1 => Some(regular_fiber_coefficient(d)?),
            2 => Some(f2_fiber_coefficient(d)?),
            _ if d == 2 => Some(Rational::ratio(3, 2)),
            _ => None,
        };
        rows.push(CoverRow {
            d,
            covers: c.covers,
            trivial_pullbacks: c.trivial_pullbacks,
            signed_sum: c.signed_sum,
            closed_form,
        });
    }
    if format == OutputFormat::Machine {
        let doc = serde_json::json!({ "m": nu.m, "v": [nu.v.0, nu.v.1], "rows": rows });
        return Ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n");
    }
    let mut text = String::new();
    writeln!(text, "# étale covers of an elliptic fiber, normal bundle of order m={} (v={:?})", nu.m, nu.v).unwrap();
    writeln!(text, "{:>6} {:>8} {:>8} {:>14} {:>14}", "d", "covers", "trivial", "signed_sum", "closed_form").unwrap();
    for r in rows {
        let closed = r.closed_form.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
        writeln!(
            text,
            "{:>6} {:>8} {:>8} {:>14} {:>14}",
            r.d,
            r.covers,
            r.trivial_pullbacks,
            r.signed_sum.to_string(),
            closed
        )
        .unwrap();
    }
    Ok(text)
}

#[derive(Debug, Serialize)]
struct SpinRow {
    h: u64,
    even_count: u64,
    odd_count: u64,
    signed_sum_even: Rational,
    signed_sum_odd: Rational,
}

fn census_spin(config: &RunConfig) -> Result<String, Error> {
    spin_table(config.h_range.clone().unwrap_or(1..=6), config.format)
}

/// Even/odd refinement counts and signed double-cover sums for each genus in `range`.
pub fn spin_table(range: RangeInclusive<u64>, format: OutputFormat) -> Result<String, Error> {
    if *range.end() > u64::from(kahler_gw::spin_parity::MAX_EXHAUSTIVE_GENUS) {
        return Err(Error::Capacity(format!(
            "h ≤ {} required for exhaustive enumeration",
            kahler_gw::spin_parity::MAX_EXHAUSTIVE_GENUS
        )));
    }
    let mut rows = Vec::new();
    for h in range {
        let h32 = u32::try_from(h).map_err(|_| Error::Capacity(format!("genus {h} is too large")))?;
        let (even_count, odd_count) = count_parities(h32)?;
        rows.push(SpinRow {
            h,
            even_count,
            odd_count,
            signed_sum_even: signed_double_cover_sum(h32, Parity::Even)?,
            signed_sum_odd: signed_double_cover_sum(h32, Parity::Odd)?,
        });
    }
    if format == OutputFormat::Machine {
        return Ok(serde_json::to_string_pretty(&rows).expect("serializable") + "\n");
    }
    let mut text = String::new();
    writeln!(text, "{:>3} {:>10} {:>10} {:>16} {:>16}", "h", "even", "odd", "signed_sum_even", "signed_sum_odd")
        .unwrap();
    for r in rows {
        writeln!(
            text,
            "{:>3} {:>10} {:>10} {:>16} {:>16}",
            r.h,
            r.even_count,
            r.odd_count,
            r.signed_sum_even.to_string(),
            r.signed_sum_odd.to_string()
        )
        .unwrap();
    }
    Ok(text)
}

fn verify(config: &RunConfig) -> Result<(String, bool), Error> {
    let mut vc = VerifyConfig::default();
    if let Some(r) = &config.d_range {
        vc.d_max = *r.end();
    }
    if let Some(r) = &config.h_range {
        vc.h_max = u32::try_from(*r.end()).map_err(|_| Error::Capacity("genus too large".into()))?;
        if vc.h_max > kahler_gw::spin_parity::MAX_EXHAUSTIVE_GENUS {
            return Err(Error::Capacity(format!(
                "h ≤ {} required for exhaustive checks",
                kahler_gw::spin_parity::MAX_EXHAUSTIVE_GENUS
            )));
        }
    }
    if vc.d_max > kahler_gw::lattice_covers::MAX_CENSUS_DEGREE {
        return Err(Error::Capacity(format!("d ≤ {} required", kahler_gw::lattice_covers::MAX_CENSUS_DEGREE)));
    }
    let reports = run_all(&vc);
    let all = reports.iter().all(|r| r.passed);
    let text = if config.format == OutputFormat::Machine {
        serde_json::to_string_pretty(&serde_json::json!({ "config": vc, "passed": all, "identities": reports }))
            .expect("serializable")
            + "\n"
    } else {
        let mut t = String::new();
        for r in &reports {
            writeln!(t, "{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail).unwrap();
        }
        writeln!(t, "{} of {} identities passed", reports.iter().filter(|r| r.passed).count(), reports.len()).unwrap();
        t
    };
    Ok((text, all))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::Validation(_) => EXIT_VALIDATION,
        Error::Capacity(_) => EXIT_CAPACITY,
        _ => EXIT_FAILURE,
    }
}

/// Multi-line diagnostic for `e`, one line per descriptor violation.
pub fn describe_error(e: &Error) -> String {
    match e {
        Error::Validation(violations) => {
            let mut text = String::from("error: descriptor is invalid\n");
            for v in violations {
                writeln!(text, "  - {v}").unwrap();
            }
            text
        }
        other => format!("error: {other}\n"),
    }
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &config.command {
        Command::Assemble => assemble(config).map(|t| (t, true)),
        Command::CensusCovers { m, v } => census_covers(config, *m, *v).map(|t| (t, true)),
        Command::CensusSpin => census_spin(config).map(|t| (t, true)),
        Command::Verify => verify(config),
    };
    match result {
        Ok((text, ok)) => {
            let _ = out.write_all(text.as_bytes());
            if ok {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => {
            let _ = err.write_all(describe_error(&e).as_bytes());
            exit_code(&e)
        }
    }
}
