//! The `qdesign` command surface.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 2 for usage errors (bad flags, unknown names,
//! malformed input) and 1 when an internal invariant fails.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::designs::{self, SeriesId, Structure};
use crate::lattices::{self, catalog, Lattice, ThetaMethod};
use crate::par::{self, Parallelism};
use crate::qseries::{eta_product, orders_to_prec24, validate_eta_quotient, EtaQuotientSpec, QExp};
use crate::rational::parse_rational;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Method {
    #[default]
    Auto,
    Enumeration,
    Cosets,
}

impl From<Method> for ThetaMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Auto => ThetaMethod::Auto,
            Method::Enumeration => ThetaMethod::Enumeration,
            Method::Cosets => ThetaMethod::Cosets,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qdesign", version, about = "Exact q-series, lattice shells and design-strength verdicts")]
pub struct CliConfig {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Worker threads (0 picks the number of cores).
    #[arg(long, env = "QDESIGN_THREADS", global = true)]
    pub threads: Option<usize>,

    /// Run single-threaded.
    #[arg(long, global = true)]
    pub sequential: bool,

    /// Read the lattice from a JSON file instead of the catalog.
    #[arg(long, global = true, value_name = "PATH")]
    pub lattice_file: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand an eta quotient and check its modularity conditions.
    Eta {
        /// Factors `delta^r`, comma separated, e.g. `3^8` or `2^15,1^-7`.
        #[arg(long, allow_hyphen_values = true)]
        spec: String,
        /// Level N; defaults to the lcm of the deltas.
        #[arg(long)]
        level: Option<u64>,
        /// Expand below q^PREC.
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(i64).range(1..))]
        prec: i64,
    },
    /// List the lattice vectors of one norm.
    Shell {
        #[arg(long)]
        lattice: Option<String>,
        /// Squared length, an integer or fraction.
        #[arg(long)]
        norm: String,
    },
    /// Theta series of a lattice.
    Theta {
        #[arg(long)]
        lattice: Option<String>,
        /// Expand below q^PREC.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(i64).range(1..))]
        prec: i64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Test whether a shell is a spherical t-design.
    Design {
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        norm: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        t: u32,
        /// Lift the degree limit for high-rank lattices.
        #[arg(long)]
        allow_costly: bool,
    },
    /// Conformal design verdict for one structure and level.
    Verdict {
        /// moonshine, freeboson, rank8, rank16, rank24 or a1plus.
        #[arg(long)]
        structure: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        /// Report every level from m to TO.
        #[arg(long)]
        to: Option<u64>,
        /// Free boson rank.
        #[arg(long)]
        d: Option<u32>,
    },
    /// Find the vanishing coefficients of a series.
    Scan {
        /// tau, eta16, eta8, e4eta8 or a1plus.
        #[arg(long)]
        series: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
    },
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `out`. Errors go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    if let Some(n) = cfg.threads {
        par::init_threads(n);
    }
    match execute(&cfg) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) | Error::NotInvertible | Error::InsufficientPrecision { .. } => 1,
        _ => 2,
    }
}

pub fn execute(cfg: &CliConfig) -> Result<String> {
    let mode = if cfg.sequential { Parallelism::Sequential } else { Parallelism::Parallel };
    let json = cfg.format == Format::Json;
    match &cfg.command {
        Command::Eta { spec, level, prec } => cmd_eta(spec, *level, *prec, json),
        Command::Shell { lattice, norm } => {
            let l = resolve(cfg, lattice.as_deref())?;
            cmd_shell(&l, norm, mode, json)
        }
        Command::Theta { lattice, prec, method } => {
            let l = resolve(cfg, lattice.as_deref())?;
            cmd_theta(&l, *prec, (*method).into(), mode, json)
        }
        Command::Design { lattice, norm, t, allow_costly } => {
            let l = resolve(cfg, lattice.as_deref())?;
            cmd_design(&l, norm, *t, *allow_costly, mode, json)
        }
        Command::Verdict { structure, m, to, d } => cmd_verdict(structure, *m, *to, *d, mode, json),
        Command::Scan { series, limit } => cmd_scan(series, *limit, json),
    }
}

fn resolve(cfg: &CliConfig, name: Option<&str>) -> Result<Lattice> {
    match (&cfg.lattice_file, name) {
        (Some(path), _) => Lattice::load(path),
        (None, Some(name)) => catalog::by_name(name),
        (None, None) => Err(Error::InvalidArgument("pass --lattice or --lattice-file".into())),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serialises")
}

/// `q^(num24/24)` exponent as `4` or `2/3`.
fn exponent(num24: i64) -> String {
    let r = BigRational::new(num24.into(), 24.into());
    if r.is_integer() { r.to_integer().to_string() } else { r.to_string() }
}

fn terms_json(s: &QExp) -> Vec<serde_json::Value> {
    s.terms().map(|(e, c)| json!([exponent(e), c.to_string()])).collect()
}

fn cmd_eta(spec: &str, level: Option<u64>, prec: i64, json: bool) -> Result<String> {
    let spec = EtaQuotientSpec::parse(spec, level)?;
    let report = validate_eta_quotient(&spec);
    let prec24 = orders_to_prec24(prec);
    let series = if prec24 > spec.offset24() { Some(eta_product(&spec, prec24)?) } else { None };
    if json {
        return Ok(pretty(&json!({
            "spec": spec.to_string(),
            "level": spec.level(),
            "prec": prec,
            "expansion": series.as_ref().map(terms_json).unwrap_or_default(),
            "report": report,
        })));
    }
    let mut s = format!("eta quotient {spec}  level {}\n", spec.level());
    match &series {
        Some(q) => s += &format!("{q}\n"),
        None => s += &format!("O(q^{prec})\n"),
    }
    s += &format!("weight        {}\n", report.weight);
    s += &format!("sum d*r = 0 (mod 24)      {}\n", report.cond24a);
    s += &format!("sum (N/d)*r = 0 (mod 24)  {}\n", report.cond24b);
    s += &format!("character s   {}\n", report.character_s);
    s += "cusp orders\n";
    for (d, o) in &report.cusp_orders {
        s += &format!("  1/{d:<6} {o}\n");
    }
    s += &format!("holomorphic at cusps  {}\ncusp form             {}", report.holomorphic_at_cusps, report.cuspidal);
    Ok(s)
}

fn cmd_shell(l: &Lattice, norm: &str, mode: Parallelism, json: bool) -> Result<String> {
    let m = parse_rational(norm)?;
    let shell = lattices::shell_with(l, &m, mode)?;
    if json {
        return Ok(serde_json::to_string(&shell.vectors)?);
    }
    let mut s = format!("{} norm {}: {} vectors", l.name(), norm, shell.len());
    for v in &shell.vectors {
        s += &format!("\n{v:?}");
    }
    Ok(s)
}

fn cmd_theta(l: &Lattice, prec: i64, method: ThetaMethod, mode: Parallelism, json: bool) -> Result<String> {
    let series = lattices::theta_with(l, orders_to_prec24(prec), method, mode)?;
    if json {
        return Ok(pretty(&json!({
            "lattice": l.name(),
            "prec": prec,
            "terms": terms_json(&series),
        })));
    }
    Ok(format!("theta {}\n{series}", l.name()))
}

fn cmd_design(l: &Lattice, norm: &str, t: u32, allow_costly: bool, mode: Parallelism, json: bool) -> Result<String> {
    let m = parse_rational(norm)?;
    let shell = lattices::shell_with(l, &m, mode)?;
    if shell.is_empty() {
        return Err(Error::InvalidArgument(format!("{} has no vectors of norm {norm}", l.name())));
    }
    let report = lattices::spherical_design_test_with(l, &shell, t, allow_costly, mode)?;
    if json {
        return Ok(pretty(&report));
    }
    let mut s = format!("{} norm {}: {} vectors, rank {}\n", report.lattice, norm, report.size, report.rank);
    for d in &report.degrees {
        s += &format!("  j={:<3} {}  ({})", d.degree, if d.passed { "pass" } else { "FAIL" }, d.method);
        if let Some(dev) = &d.first_deviation {
            s += &format!("  monomial {:?}: moment {} expected {}", dev.monomial, dev.moment, dev.expected);
        }
        s += "\n";
    }
    s += &if report.is_design {
        format!("spherical {}-design", report.t)
    } else {
        format!("spherical {}-design, not {}-design", report.strength, report.strength + 1)
    };
    Ok(s)
}

fn structure_arg(name: &str, d: Option<u32>) -> Result<Structure> {
    match (name.trim().eq_ignore_ascii_case("freeboson"), d) {
        (true, Some(0)) => Err(Error::InvalidArgument("free boson rank must be positive".into())),
        (true, Some(d)) => Ok(Structure::FreeBoson(d)),
        (true, None) => Err(Error::InvalidArgument("free boson needs --d".into())),
        (false, _) => name.parse(),
    }
}

fn cmd_verdict(name: &str, m: u64, to: Option<u64>, d: Option<u32>, mode: Parallelism, json: bool) -> Result<String> {
    let structure = structure_arg(name, d)?;
    let reports = match to {
        None => vec![designs::verdict(structure, m)?],
        Some(to) if to < m => return Err(Error::InvalidArgument(format!("--to {to} is below --m {m}"))),
        Some(to) => designs::verdicts_up_to(structure, to, mode)?.split_off((m - 1) as usize),
    };
    if json {
        return Ok(if to.is_none() { pretty(&reports[0]) } else { pretty(&reports) });
    }
    Ok(reports.iter().map(|r| format!("{} m={}: {}", r.structure, r.m, r.summary())).collect::<Vec<_>>().join("\n"))
}

fn cmd_scan(series: &str, limit: u64, json: bool) -> Result<String> {
    let id: SeriesId = series.parse()?;
    let report = designs::vanishing_scan(id, limit)?;
    if json {
        return Ok(pretty(&report));
    }
    let head = format!("{} up to {}: ", report.series, limit);
    Ok(if report.zeros.is_empty() {
        head + "no zeros"
    } else {
        let zs: Vec<String> = report.zeros.iter().map(u64::to_string).collect();
        format!("{head}{} zeros at {}", zs.len(), zs.join(", "))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["qdesign"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn eta_expansion() {
        let (code, out, _) = call(&["eta", "--spec", "3^8", "--level", "9", "--prec", "40"]);
        assert_eq!(code, 0);
        assert!(out.contains("q - 8q^4 + 20q^7"), "{out}");
        let (code, out, _) = call(&["--format", "json", "eta", "--spec", "1^1", "--level", "1", "--prec", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["report"]["cond24a"], false);
        assert_eq!(v["expansion"][0], json!(["1/24", "1"]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["eta", "--spec", "3x8"]).0, 2);
        assert_eq!(call(&["shell", "--lattice", "K12", "--norm", "2"]).0, 2);
        assert_eq!(call(&["verdict", "--structure", "rank99", "--m", "2"]).0, 2);
        assert_eq!(call(&["scan"]).0, 2);
        assert_eq!(call(&["--format", "xml", "scan", "--series", "tau", "--limit", "3"]).0, 2);
        assert_eq!(exit_code(&Error::Invariant("x".into())), 1);
    }

    #[test]
    fn small_commands() {
        let (code, out, _) = call(&["--format", "json", "shell", "--lattice", "Z2", "--norm", "3"]);
        assert_eq!((code, out.trim()), (0, "[]"));
        let (_, out, _) = call(&["--format", "json", "shell", "--lattice", "Z2", "--norm", "1"]);
        assert_eq!(out.trim(), "[[-1,0],[0,-1],[0,1],[1,0]]");
        let (_, out, _) = call(&["verdict", "--structure", "rank16", "--m", "4"]);
        assert!(out.contains("7-design (by theorem); b(4)=0"), "{out}");
        let (_, out, _) = call(&["verdict", "--structure", "rank24", "--m", "2"]);
        assert!(out.contains("not 4-design; witness sigma3(2)=9"), "{out}");
        let (_, out, _) = call(&["scan", "--series", "tau", "--limit", "200"]);
        assert!(out.contains("no zeros"));
        let (_, out, _) = call(&["design", "--lattice", "Z2", "--norm", "1", "--t", "4"]);
        assert!(out.contains("spherical 3-design, not 4-design"), "{out}");
    }
}
