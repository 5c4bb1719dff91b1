use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use eismock::chars::{character_group, kronecker_character, parse_label, DirichletCharacter};
use eismock::coeffs::{eisenstein_coefficients, mock_coefficients, EisSpec, FourierSeries};
use eismock::config::PrecisionConfig;
use eismock::lfun;
use eismock::mp::{fmt_real, Cx};
use eismock::oracles::{class_number, hecke_r, hecke_rplus, normalized_level_one, theta_power_report, RplusMethod};
use eismock::verify::{self, SuiteReport};
use eismock::Error;

#[derive(Parser)]
#[command(name = "eismock", version, about = "Eisenstein series, their mock pre-images, and numerical checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true)]
    k: Option<u32>,
    #[arg(long, global = true, default_value = "trivial:1")]
    psi: String,
    #[arg(long, global = true, default_value = "trivial:1")]
    rho: String,
    #[arg(long, global = true, default_value_t = 1)]
    t: u64,
    /// Fundamental discriminant.
    #[arg(short = 'D', global = true, allow_negative_numbers = true)]
    d: Option<i64>,
    #[arg(long = "n-max", global = true, default_value_t = 64)]
    n_max: usize,
    #[arg(long, global = true, default_value_t = 128)]
    bits: u32,
    /// Defaults to 2^(-bits/3).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample points, or group elements for the modularity suite.
    #[arg(long, global = true)]
    points: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// All characters modulo N.
    Characters {
        #[arg(long)]
        modulus: u64,
    },
    /// q-expansion of E_k^{psi,rho,t}.
    Eisenstein,
    /// Holomorphic part of the harmonic pre-image of E_k^{psi,rho,t}.
    Mock,
    /// Residual suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Lattice truncation for the lattice suite.
        #[arg(long, default_value_t = 200)]
        bound: u64,
    },
    /// R_D(n) and R_D^+(n).
    Hecke {
        /// Both routes for R^+ side by side.
        #[arg(long)]
        compare: bool,
    },
    /// r_{2k}(n) against the Eisenstein decomposition of Theta^{2k}.
    Theta {
        #[arg(long, default_value_t = 4)]
        power: u32,
        /// Modularity of the derived and printed mock forms.
        #[arg(long)]
        audit: bool,
    },
    /// Normalized E_k and its mock partner at level one.
    LevelOne,
    /// Special values of L(s, psi).
    Lfun,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Shadow,
    Laplacian,
    Modularity,
    Omega,
    Symmetry,
    Lattice,
}

enum Failure {
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("eismock: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let o = &cli.opts;
    let cfg = PrecisionConfig::new(o.bits, o.n_max, o.tol, PrecisionConfig::default().y_min, o.seed)?;
    let out = &mut io::stdout().lock();
    match &cli.command {
        Command::Characters { modulus } => characters(*modulus, &cfg, o.format, out),
        Command::Eisenstein => {
            let s = spec(o)?;
            series(&eisenstein_coefficients(&s, cfg.n_max, cfg.bits)?, o.format, out)
        }
        Command::Mock => {
            let s = spec(o)?;
            series(&mock_coefficients(&s, cfg.n_max, cfg.bits)?, o.format, out)
        }
        Command::Verify { suite, bound } => {
            let report = match suite {
                Suite::Shadow => verify::shadow_suite(&spec(o)?, &cfg, o.points.unwrap_or(5), cfg.tol)?,
                Suite::Laplacian => verify::laplacian_suite(&spec(o)?, &cfg, o.points.unwrap_or(5), cfg.tol)?,
                Suite::Modularity => verify::modularity_suite(&spec(o)?, &cfg, o.points.unwrap_or(10), cfg.tol)?,
                Suite::Omega => verify::omega_suite(cfg.bits, cfg.tol)?,
                Suite::Symmetry => {
                    verify::symmetry_suite(&parse_label(&o.psi)?, &parse_label(&o.rho)?, o.t, cfg.n_max, cfg.bits, cfg.tol)?
                }
                Suite::Lattice => {
                    let pts = verify::sample_points(o.points.unwrap_or(2), cfg.seed, cfg.bits);
                    verify::lattice_suite(&spec(o)?, &pts, *bound, &cfg, cfg.tol)?
                }
            };
            suite_report(&report, o.format, out)
        }
        Command::Hecke { compare } => {
            let d = o.d.ok_or_else(|| Failure::Usage("hecke needs -D".into()))?;
            hecke(d, *compare, &cfg, o.format, out)
        }
        Command::Theta { power, audit } => theta(*power, *audit, &cfg, o.format, out),
        Command::LevelOne => {
            let k = o.k.ok_or_else(|| Failure::Usage("level-one needs --k".into()))?;
            let (e, tilde) = normalized_level_one(k, cfg.n_max, cfg.bits)?;
            let rows: Vec<LevelOneRow> = (0..=cfg.n_max)
                .map(|n| LevelOneRow {
                    n,
                    e: fmt_real(&e.coeffs[n].re),
                    mock_re: fmt_real(&tilde.coeffs[n].re),
                    mock_im: fmt_real(&tilde.coeffs[n].im),
                })
                .collect();
            emit(&rows, &["n", "e", "mock_re", "mock_im"], o.format, out)
        }
        Command::Lfun => lfun_values(o, &cfg, out),
    }
}

fn spec(o: &Opts) -> Result<EisSpec, Failure> {
    let k = o.k.ok_or_else(|| Failure::Usage("missing --k".into()))?;
    Ok(EisSpec::new(k, parse_label(&o.psi)?, parse_label(&o.rho)?, o.t)?)
}

/// JSON: one object per line. CSV: header then rows, header alone when empty.
fn emit<T: Serialize>(rows: &[T], headers: &[&str], format: Format, out: &mut dyn Write) -> Outcome {
    match format {
        Format::Json => {
            for r in rows {
                serde_json::to_writer(&mut *out, r).map_err(|e| Failure::Usage(e.to_string()))?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut *out);
            w.write_record(headers)?;
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CoeffRow {
    n: usize,
    re: String,
    im: String,
}

fn series(f: &FourierSeries, format: Format, out: &mut dyn Write) -> Outcome {
    let rows: Vec<CoeffRow> = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| CoeffRow { n, re: fmt_real(&c.re), im: fmt_real(&c.im) })
        .collect();
    emit(&rows, &["n", "re", "im"], format, out)
}

#[derive(Serialize)]
struct LevelOneRow {
    n: usize,
    e: String,
    mock_re: String,
    mock_im: String,
}

#[derive(Serialize)]
struct CharacterRow {
    label: String,
    conductor: u64,
    parity: i64,
    order: u64,
    primitive: bool,
    gauss_re: String,
    gauss_im: String,
}

fn characters(modulus: u64, cfg: &PrecisionConfig, format: Format, out: &mut dyn Write) -> Outcome {
    if modulus == 0 {
        return Err(Failure::Usage("modulus must be positive".into()));
    }
    let rows = character_group(modulus)
        .iter()
        .map(|chi| {
            let w = if chi.is_primitive() { Some(chi.gauss_sum(cfg.bits)?) } else { None };
            Ok(CharacterRow {
                label: chi.label_json(),
                conductor: chi.conductor(),
                parity: chi.parity(),
                order: chi.order(),
                primitive: chi.is_primitive(),
                gauss_re: w.as_ref().map(|w| fmt_real(&w.re)).unwrap_or_default(),
                gauss_im: w.as_ref().map(|w| fmt_real(&w.im)).unwrap_or_default(),
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    emit(&rows, &["label", "conductor", "parity", "order", "primitive", "gauss_re", "gauss_im"], format, out)
}

#[derive(Serialize)]
struct SuiteCsvRow<'a> {
    suite: &'a str,
    label: &'a str,
    gamma: String,
    z_re: &'a str,
    z_im: &'a str,
    residual: f64,
    tol: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SuiteSummary<'a> {
    suite: &'a str,
    subject: &'a str,
    n_max: usize,
    max_residual: f64,
    tol: f64,
    pass: bool,
}

/// Rows, then a summary line (JSON) or trailing `summary` row (CSV).
fn suite_report(r: &SuiteReport, format: Format, out: &mut dyn Write) -> Outcome {
    match format {
        Format::Json => {
            emit(&r.rows, &[], format, out)?;
            let s = SuiteSummary {
                suite: &r.suite,
                subject: &r.subject,
                n_max: r.n_max,
                max_residual: r.max_residual,
                tol: r.tol,
                pass: r.pass,
            };
            emit(&[s], &[], format, out)?;
        }
        Format::Csv => {
            let blank = String::new();
            let mut rows: Vec<SuiteCsvRow> = r
                .rows
                .iter()
                .map(|row| SuiteCsvRow {
                    suite: &r.suite,
                    label: &row.label,
                    gamma: row.gamma.as_ref().map(|g| format!("[[{},{}],[{},{}]]", g.a, g.b, g.c, g.d)).unwrap_or_default(),
                    z_re: row.z.as_ref().map(|z| &z[0]).unwrap_or(&blank),
                    z_im: row.z.as_ref().map(|z| &z[1]).unwrap_or(&blank),
                    residual: row.residual,
                    tol: row.tol,
                    pass: row.pass,
                })
                .collect();
            rows.push(SuiteCsvRow {
                suite: &r.suite,
                label: "summary",
                gamma: String::new(),
                z_re: "",
                z_im: "",
                residual: r.max_residual,
                tol: r.tol,
                pass: r.pass,
            });
            emit(&rows, &["suite", "label", "gamma", "z_re", "z_im", "residual", "tol", "pass"], format, out)?;
        }
    }
    if r.pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

#[derive(Serialize)]
struct HeckeRow {
    n: u64,
    r: String,
    rplus: String,
}

#[derive(Serialize)]
struct HeckeCompareRow {
    n: u64,
    r: String,
    rplus_def: String,
    rplus_prop: String,
    equal: bool,
}

fn hecke(d: i64, compare: bool, cfg: &PrecisionConfig, format: Format, out: &mut dyn Write) -> Outcome {
    let data = class_number(d)?;
    let r_of = |n: u64| -> Result<String, Failure> {
        Ok(if n == 0 {
            let (h, u) = (data.h / gcd(data.h, data.u), data.u / gcd(data.h, data.u));
            if u == 1 { h.to_string() } else { format!("{h}/{u}") }
        } else {
            hecke_r(d, n)?.to_string()
        })
    };
    let ns = 0..=cfg.n_max as u64;
    if !compare {
        let rows = ns
            .map(|n| {
                let v = hecke_rplus(d, n, RplusMethod::Definitional, cfg.bits)?;
                Ok(HeckeRow { n, r: r_of(n)?, rplus: fmt_real(&v) })
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        return emit(&rows, &["n", "r", "rplus"], format, out);
    }
    let rows = ns
        .map(|n| {
            let a = hecke_rplus(d, n, RplusMethod::Definitional, cfg.bits)?;
            let b = hecke_rplus(d, n, RplusMethod::Proposition, cfg.bits)?;
            let scale = a.to_f64().abs().max(1.0);
            let diff = (a.clone() - &b).abs().to_f64();
            Ok(HeckeCompareRow {
                n,
                r: r_of(n)?,
                rplus_def: fmt_real(&a),
                rplus_prop: fmt_real(&b),
                equal: diff <= cfg.tol * scale,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    emit(&rows, &["n", "r", "rplus_def", "rplus_prop", "equal"], format, out)?;
    if rows.iter().all(|r| r.equal) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn theta(power: u32, audit: bool, cfg: &PrecisionConfig, format: Format, out: &mut dyn Write) -> Outcome {
    let report = theta_power_report(power, cfg.n_max, cfg, audit)?;
    emit(&report.rows, &["n", "count", "identity", "eisenstein", "exact_match", "numeric_residual"], format, out)?;
    if let Some(a) = &report.audit {
        // the audit is nested; CSV carries it as one JSON cell
        let line = serde_json::to_string(a).map_err(|e| Failure::Usage(e.to_string()))?;
        match format {
            Format::Json => writeln!(out, "{line}")?,
            Format::Csv => emit(&[("audit", line)], &["kind", "report"], format, out)?,
        }
    }
    let numeric_ok = report.max_numeric_residual < cfg.tol;
    if report.all_exact && numeric_ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

#[derive(Serialize)]
struct ValueRow {
    quantity: &'static str,
    re: String,
    im: String,
}

fn lfun_values(o: &Opts, cfg: &PrecisionConfig, out: &mut dyn Write) -> Outcome {
    let psi: DirichletCharacter = match o.d {
        Some(d) => kronecker_character(d)?,
        None => parse_label(&o.psi)?,
    };
    let p = cfg.bits;
    let mut rows = Vec::new();
    let mut push = |quantity: &'static str, v: Cx| rows.push(ValueRow { quantity, re: fmt_real(&v.re), im: fmt_real(&v.im) });
    push("L(0)", lfun::l_value(&psi, 0, p)?);
    if !psi.is_trivial() {
        push("L(1)", lfun::l_value(&psi, 1, p)?);
    }
    push("L(2)", lfun::l_value(&psi, 2, p)?);
    push("L'(0)", lfun::l_derivative_checked(&psi, 0, p)?);
    if !psi.is_trivial() {
        push("L'(1)", lfun::l_derivative_checked(&psi, 1, p)?);
    }
    let mut pass = true;
    if psi.is_real() && psi.is_primitive() && psi.parity() == -1 && psi.modulus() >= 3 {
        let a = lfun::lambda_log_derivative_one(&psi, p)?;
        let b = lfun::lambda_log_derivative_one_via_zero(&psi, p)?;
        let fe = lfun::functional_equation_residual(&psi, p)?;
        pass = (a.clone() - &b).abs().to_f64() < cfg.tol && fe.to_f64() < cfg.tol;
        push("Lambda'/Lambda(1)", Cx::from_real(a));
        push("Lambda'/Lambda(1) via L'(0)", Cx::from_real(b));
        push("functional equation residual", Cx::from_real(fe));
    }
    emit(&rows, &["quantity", "re", "im"], o.format, out)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
