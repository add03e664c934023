//! The `qorbit` command line: every pipeline behind a subcommand, with
//! deterministic JSON/CSV artifacts.
//!
//! Exit codes: 0 success, 1 a verification ran and failed, 2 usage or input
//! errors. Floating-point values are emitted as fixed 17-significant-digit
//! strings so identical configs produce byte-identical output.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::equidist::{convergence_report, EquidistConfig};
use crate::hecke::{hecke_orbit, reduce_gamma0, HPoint};
use crate::identity::{verify, SignConvention};
use crate::modforms::{cusp_table, Form};
use crate::qseries::Rat;
use crate::selftest::run_all;
use crate::thetaexp::extract_exponents;
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "qorbit",
    version,
    about = "Exact product exponents, Eisenstein corrections, and Hecke-orbit statistics on Gamma_0(N)"
)]
pub struct CliArgs {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for the per-m loops (default: all cores). Results do
    /// not depend on the degree.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Extract product exponents c(n) of a form.
    Exponents {
        /// "builtin:Delta|E4|E6" or an eta spec "N; d1:r1, d2:r2, ...".
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 256)]
        precision: usize,
        /// Level for builtin forms; eta specs carry their own.
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solve for the weight-2 Eisenstein correction from cusp constants.
    Eisenstein {
        #[arg(long)]
        level: u64,
        /// JSON file mapping divisors to constant terms, e.g. {"1": "-1/6"}.
        #[arg(long)]
        cusp_constants: PathBuf,
        #[arg(long, default_value_t = 64)]
        precision: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check the closed identity for an eta quotient over a range of m.
    VerifyIdentity {
        #[arg(long)]
        level: u64,
        /// Exponent list "d1:r1, d2:r2, ..." at the given level.
        #[arg(long)]
        eta: String,
        #[arg(long, default_value_t = 200)]
        mmax: u64,
        /// Which convolution sign decides the exit code.
        #[arg(long, value_enum, default_value = "forced")]
        sign: SignConvention,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Reduce the Hecke orbit of a point into the fundamental domain.
    HeckeOrbit {
        #[arg(long)]
        level: u64,
        /// "x,y" with rational or decimal parts; the point x + y i.
        #[arg(long)]
        point: String,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the sigma_1-normalized orbit statistic over a range of m.
    Equidist {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 500)]
        mmax: u64,
        #[command(flatten)]
        out: OutArgs,
        /// Also write (m, statistic) rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the full verification suite.
    Selftest,
}

#[derive(Args, Debug)]
pub struct OutArgs {
    /// Output path; stdout when omitted (QORBIT_OUT_DIR prefixes relative
    /// paths).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Effective configuration echoed into every artifact; round-trips through
/// serde.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
    pub jobs: Option<usize>,
}

/// Entry point used by `main`; parses argv and runs.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match CliArgs::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    if let Some(jobs) = args.jobs {
        // best effort; a second init in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match dispatch(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(args: CliArgs) -> Result<i32> {
    match args.command {
        Command::Exponents {
            form,
            precision,
            level,
            out,
        } => {
            let parsed = Form::parse(&form, level)?;
            let series = parsed.series(precision)?;
            let ev = extract_exponents(&series, parsed.weight()?)?;
            let config = RunConfig {
                subcommand: "exponents".into(),
                level: Some(parsed.level()),
                form: Some(form),
                precision: Some(precision),
                m_max: None,
                sign: None,
                jobs: args.jobs,
            };
            let doc = json!({
                "config": config,
                "form": parsed.describe(),
                "weight": ev.weight,
                "h_infinity": ev.h,
                "exponents": ev.c,
            });
            emit_json(&doc, out.out.as_deref())?;
            Ok(0)
        }
        Command::Eisenstein {
            level,
            cusp_constants,
            precision,
            out,
        } => {
            let raw = fs::read_to_string(&cusp_constants)?;
            let parsed: BTreeMap<String, Rat> = serde_json::from_str(&raw)?;
            let constants: BTreeMap<u64, Rat> = parsed
                .into_iter()
                .map(|(k, v)| {
                    k.parse::<u64>()
                        .map(|d| (d, v))
                        .map_err(|_| Error::InvalidInput(format!("bad divisor key {k:?}")))
                })
                .collect::<Result<_>>()?;
            let sol = crate::eisspace::eis_coefficients(level, &constants, precision)?;
            let config = RunConfig {
                subcommand: "eisenstein".into(),
                level: Some(level),
                form: None,
                precision: Some(precision),
                m_max: None,
                sign: None,
                jobs: args.jobs,
            };
            let doc = json!({
                "config": config,
                "coefficients": sol.coeffs,
                "det": sol.det_a,
                "sigma_constant": sol.sigma_constant,
                "series_head": sol.series.truncate(16.min(precision as i64)),
            });
            emit_json(&doc, out.out.as_deref())?;
            Ok(0)
        }
        Command::VerifyIdentity {
            level,
            eta,
            mmax,
            sign,
            out,
        } => {
            let form = Form::parse(&eta, level)?;
            let report = verify(&form, mmax)?;
            let table = cusp_table(level)?.with_form(&form)?;
            let passed = match sign {
                SignConvention::Forced => report.forced_all_match,
                SignConvention::Paper => report.paper_all_match,
            };
            let config = RunConfig {
                subcommand: "verify-identity".into(),
                level: Some(level),
                form: Some(eta),
                precision: None,
                m_max: Some(mmax),
                sign: Some(format!("{sign:?}").to_lowercase()),
                jobs: args.jobs,
            };
            let doc = json!({
                "config": config,
                "cusps": table,
                "report": report,
                "passed": passed,
            });
            emit_json(&doc, out.out.as_deref())?;
            print_identity_summary(&report);
            Ok(if passed { 0 } else { 1 })
        }
        Command::HeckeOrbit {
            level,
            point,
            m,
            out,
        } => {
            let z = parse_point(&point)?;
            let orbit = hecke_orbit(&z, m)?;
            let mut reduced = Vec::new();
            for w in &orbit {
                let (r, _) = reduce_gamma0(level, w)?;
                reduced.push(json!({
                    "x": r.x(),
                    "y": r.y(),
                    "disc": r.disc(),
                    "im": fmt_f64(r.im_f64()),
                }));
            }
            let config = RunConfig {
                subcommand: "hecke-orbit".into(),
                level: Some(level),
                form: None,
                precision: None,
                m_max: Some(m),
                sign: None,
                jobs: args.jobs,
            };
            let doc = json!({
                "config": config,
                "point": {"x": z.x(), "y": z.y(), "disc": z.disc()},
                "orbit_size": orbit.len(),
                "reduced_points": reduced,
            });
            emit_json(&doc, out.out.as_deref())?;
            Ok(0)
        }
        Command::Equidist {
            level,
            form,
            mmax,
            out,
            csv,
        } => {
            let parsed = Form::parse(&form, level)?;
            let report = convergence_report(EquidistConfig::new(level, parsed, mmax))?;
            if let Some(path) = csv {
                let mut text =
                    String::from("m,sigma1,statistic_re,statistic_im,tail_re,tail_im,tail_points\n");
                for r in &report.rows {
                    text.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        r.m,
                        r.sigma1,
                        fmt_f64(r.statistic_re),
                        fmt_f64(r.statistic_im),
                        r.tail_re,
                        r.tail_im,
                        r.tail_points
                    ));
                }
                fs::write(resolve_out(&path), text)?;
            }
            let config = RunConfig {
                subcommand: "equidist".into(),
                level: Some(level),
                form: Some(form),
                precision: None,
                m_max: Some(mmax),
                sign: None,
                jobs: args.jobs,
            };
            let doc = json!({
                "config": config,
                "report": equidist_json(&report),
            });
            emit_json(&doc, out.out.as_deref())?;
            Ok(0)
        }
        Command::Selftest => {
            let outcomes = run_all();
            let mut failed = 0;
            for o in &outcomes {
                println!("{}", o.format_line());
                if !o.passed {
                    failed += 1;
                }
            }
            println!(
                "{} of {} checks passed",
                outcomes.len() - failed,
                outcomes.len()
            );
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn print_identity_summary(report: &crate::identity::IdentityReport) {
    println!(
        "identity audit: level {}, {} ({} admissible m <= {})",
        report.level,
        report.form,
        report.rows.len(),
        report.m_max
    );
    println!(
        "  forced sign: {}   printed sign: {}",
        if report.forced_all_match { "all match" } else { "MISMATCH" },
        if report.paper_all_match { "all match" } else { "mismatch" },
    );
    let head: Vec<&crate::identity::IdentityRow> = report.rows.iter().take(6).collect();
    println!("  {:>5} {:>16} {:>16} {:>8} {:>8}", "m", "-J", "closed(forced)", "forced", "paper");
    for r in head {
        println!(
            "  {:>5} {:>16} {:>16} {:>8} {:>8}",
            r.m,
            r.lhs.to_string(),
            r.rhs_forced.to_string(),
            r.match_forced,
            r.match_paper
        );
    }
    if report.rows.len() > 6 {
        println!("  ... {} more rows in the JSON report", report.rows.len() - 6);
    }
}

/// Equidist report with the f64 summary fields stringified to 17
/// significant digits.
fn equidist_json(report: &crate::equidist::EquidistReport) -> serde_json::Value {
    json!({
        "level": report.level,
        "form": report.form,
        "m_max": report.m_max,
        "admissible_count": report.admissible_count,
        "float_bits": report.float_bits,
        "limit_re": fmt_f64(report.limit_re),
        "limit_im": fmt_f64(report.limit_im),
        "max_successive_diff_last_quartile": fmt_f64(report.max_successive_diff_last_quartile),
        "envelope_c": fmt_f64(report.envelope_c),
        "envelope_exponent": fmt_f64(report.envelope_exponent),
        "fitted_exponent": fmt_f64(report.fitted_exponent),
        "doubling_shift": fmt_f64(report.doubling_shift),
        "rows": report.rows.iter().map(|r| json!({
            "m": r.m,
            "sigma1": r.sigma1,
            "j_term": r.j_term,
            "tail_re": r.tail_re,
            "tail_im": r.tail_im,
            "statistic_re": fmt_f64(r.statistic_re),
            "statistic_im": fmt_f64(r.statistic_im),
            "tail_points": r.tail_points,
        })).collect::<Vec<_>>(),
    })
}

/// Fixed 17-significant-digit scientific format, the only float encoding in
/// any artifact.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// "x,y" with rational or decimal components.
pub fn parse_point(s: &str) -> Result<HPoint> {
    let (xs, ys) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidInput(format!("point {s:?} is not \"x,y\"")))?;
    let x: Rat = xs.trim().parse()?;
    let y: Rat = ys.trim().parse()?;
    HPoint::rational(x, y)
}

fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("QORBIT_OUT_DIR") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.to_path_buf(),
    }
}

fn emit_json(doc: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(doc)?);
    match out {
        Some(path) => {
            let path = resolve_out(path);
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_config_round_trips() {
        let cfg = RunConfig {
            subcommand: "equidist".into(),
            level: Some(2),
            form: Some("builtin:E4".into()),
            precision: None,
            m_max: Some(500),
            sign: None,
            jobs: Some(4),
        };
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn point_parsing() {
        let p = parse_point("0.5, 0.866").unwrap();
        assert_eq!(p.x(), &Rat::new(1, 2));
        assert_eq!(p.y(), &Rat::new(433, 500));
        assert!(parse_point("1;2").is_err());
        assert!(parse_point("0,-1").is_err());
    }

    #[test]
    fn float_format_is_17_digits() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-0.5), "-5.0000000000000000e-1");
    }
}
