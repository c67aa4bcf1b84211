//! The `f2rep` command line.
//!
//! Polynomials are accepted as an expression (`"x^9 + x^7 + x + 1"`), a hex
//! coefficient bitstring (`0x283`) or an index (`@643`). Data goes to the
//! output stream; progress and warnings go to the diagnostic stream.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::families::{self, FamilyOptions, FamilySpec, FamilyVerdict, Variant};
use crate::gf2poly::F2Poly;
use crate::order_beta::{self, BetaReport};
use crate::representations::{self, DigitSet};
use crate::search::{self, Preset, ScanConfig};

#[derive(Debug, Parser)]
#[command(
    name = "f2rep",
    version,
    about = "Order, cofactor statistics and robust polynomials over F2[x]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order of a polynomial with constant term 1.
    Order {
        poly: F2Poly,
        /// Give up after this many steps.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Order, beta pair, gamma and robustness.
    Beta {
        poly: F2Poly,
        /// Use this multiple of the order instead of the order itself.
        #[arg(long)]
        n: Option<u64>,
    },
    /// The cofactor (1 + x^N) / f.
    Cofactor {
        poly: F2Poly,
        /// Period to divide at; defaults to the order.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        hex: bool,
    },
    /// Verify members of the robust families.
    Family {
        #[command(subcommand)]
        action: FamilyAction,
    },
    /// Exhaustive scan over one of the standard corpora.
    Scan {
        #[arg(long)]
        preset: Preset,
        #[arg(long)]
        robust_only: bool,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
        /// Override the preset's cap on each order scan.
        #[arg(long)]
        order_bound: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Points (n, gamma(P_n)) for odd n in [5, max).
    Figure {
        #[arg(long, default_value_t = 4096)]
        max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Number of representations of n with digits from a set.
    Repr {
        #[arg(long)]
        set: DigitSet,
        #[arg(long)]
        n: u64,
    },
    /// Parity of representation counts.
    Parity {
        #[arg(long)]
        set: DigitSet,
        #[arg(long, conflicts_with = "series")]
        profile: bool,
        /// Print the first N parities as a 0/1 string.
        #[arg(long)]
        series: Option<usize>,
    },
    /// Stern's diatomic sequence.
    Stern {
        #[arg(long, conflicts_with = "row", required_unless_present = "row")]
        n: Option<u64>,
        #[arg(long)]
        row: Option<u32>,
    },
    /// Compare the beta coordinate gap with 2^(k/2).
    Gapcheck {
        #[arg(long, default_value_t = 14, conflicts_with = "poly")]
        degree_max: u32,
        #[arg(long)]
        poly: Option<F2Poly>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Debug, Subcommand)]
enum FamilyAction {
    /// Check one family member against its predicted period and beta pair.
    Verify {
        #[arg(long)]
        r: u32,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        variant: u8,
        #[arg(long)]
        reciprocal: bool,
        #[command(flatten)]
        ceiling: Ceiling,
    },
    /// Check all four members for every 1 <= r <= r_max.
    Range {
        #[arg(long)]
        r_max: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        ceiling: Ceiling,
    },
}

#[derive(Debug, Args)]
struct Ceiling {
    /// Certify exact orders above r = 10 (slow, memory hungry).
    #[arg(long)]
    allow_large_r: bool,
}

impl Ceiling {
    fn options(&self, err: &mut dyn Write) -> FamilyOptions {
        if self.allow_large_r {
            let _ = writeln!(
                err,
                "warning: exact-order checks above r = 10 may take a long time"
            );
            FamilyOptions {
                exact_order_ceiling: families::MAX_R,
            }
        } else {
            FamilyOptions::default()
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

fn bool_str(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn beta_line(rep: &BetaReport, label: &str) -> String {
    format!(
        "{label}={} exact={} beta=({},{}) gamma={} robust={}",
        rep.period,
        bool_str(rep.order_exact),
        rep.ell1,
        rep.ell0,
        rep.gamma,
        bool_str(rep.robust)
    )
}

fn verdict_line(v: &FamilyVerdict) -> Result<String> {
    let poly = families::build(v.spec)?;
    let beta = v
        .beta
        .map_or("none".to_string(), |(a, b)| format!("({a},{b})"));
    let robust = if v.robustness_asserted {
        bool_str(v.robust)
    } else {
        "not-asserted"
    };
    Ok(format!(
        "{} poly={} period={} divides={} exact={} beta={} predicted=({},{}) closed_form={} robust={} holds={}",
        v.spec,
        poly.to_hex(),
        v.prediction.period,
        bool_str(v.period_divides),
        bool_str(v.order_exact),
        beta,
        v.prediction.c,
        v.prediction.d,
        bool_str(v.closed_form_matches),
        robust,
        bool_str(v.holds())
    ))
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Order { poly, bound } => {
            writeln!(out, "{}", order_beta::order(&poly, bound)?).map_err(io_err)?;
        }
        Command::Beta { poly, n } => {
            let line = match n {
                None => beta_line(&order_beta::beta(&poly)?, "order"),
                Some(n) => beta_line(&order_beta::beta_n(&poly, n)?, "period"),
            };
            writeln!(out, "{line}").map_err(io_err)?;
        }
        Command::Cofactor { poly, n, hex } => {
            let n = match n {
                Some(n) => n,
                None => order_beta::order(&poly, None)?,
            };
            let cof = order_beta::cofactor(&poly, n)?;
            let text = if hex { cof.to_hex() } else { cof.to_string() };
            writeln!(out, "{text}").map_err(io_err)?;
        }
        Command::Family {
            action:
                FamilyAction::Verify {
                    r,
                    variant,
                    reciprocal,
                    ceiling,
                },
        } => {
            let spec = FamilySpec::new(r, Variant::try_from(variant)?, reciprocal)?;
            let v = families::verify_family(spec, ceiling.options(err))?;
            writeln!(out, "{}", verdict_line(&v)?).map_err(io_err)?;
        }
        Command::Family {
            action:
                FamilyAction::Range {
                    r_max,
                    jobs,
                    ceiling,
                },
        } => {
            for v in families::verify_range(r_max, ceiling.options(err), jobs)? {
                writeln!(out, "{}", verdict_line(&v)?).map_err(io_err)?;
            }
        }
        Command::Scan {
            preset,
            robust_only,
            csv: _,
            json,
            order_bound,
            jobs,
        } => {
            let base = preset.config();
            let config = ScanConfig {
                robust_only,
                jobs,
                order_bound: order_bound.or(base.order_bound),
                ..base
            };
            let mut scan = search::scan(config)?;
            let mut last_report = 0;
            let records = std::iter::from_fn(|| {
                let rec = scan.next();
                let (done, total) = scan.progress();
                if done >= last_report + total.div_ceil(20).max(1)
                    || (rec.is_none() && done > last_report)
                {
                    let _ = writeln!(err, "scanned {done}/{total}");
                    last_report = done;
                }
                rec
            });
            if json {
                search::write_jsonl(&mut *out, records)?;
            } else {
                search::write_csv(&mut *out, records)?;
            }
        }
        Command::Figure {
            max,
            out: path,
            jobs,
        } => {
            let rows = search::figure_data(max, jobs)?;
            match path {
                Some(p) => {
                    let f = File::create(&p).map_err(|e| {
                        Error::InvalidArgument(format!("cannot create {}: {e}", p.display()))
                    })?;
                    let mut w = BufWriter::new(f);
                    search::write_figure_csv(&mut w, &rows)?;
                    w.flush().map_err(io_err)?;
                    writeln!(err, "wrote {} rows to {}", rows.len(), p.display())
                        .map_err(io_err)?;
                }
                None => search::write_figure_csv(&mut *out, &rows)?,
            }
        }
        Command::Repr { set, n } => {
            writeln!(out, "{}", representations::count_representations(&set, n)).map_err(io_err)?;
        }
        Command::Parity {
            set,
            profile: _,
            series: Some(len),
        } => {
            let bits = representations::parity_series(&set, len)?;
            let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(out, "{s}").map_err(io_err)?;
        }
        Command::Parity { set, .. } => {
            let p = representations::parity_profile(&set)?;
            let residues: Vec<String> = p.odd_residues.iter().map(u64::to_string).collect();
            writeln!(
                out,
                "period={} exact={} odd={} even={} residues={{{}}}",
                p.period,
                bool_str(p.order_exact),
                p.odd_residues.len(),
                p.period - p.odd_residues.len() as u64,
                residues.join(",")
            )
            .map_err(io_err)?;
        }
        Command::Stern { n: Some(n), .. } => {
            writeln!(out, "{}", representations::stern(n)).map_err(io_err)?;
        }
        Command::Stern { row, .. } => {
            let k = row.expect("clap requires --n or --row");
            let vals: Vec<String> = representations::diatomic_row(k)?
                .iter()
                .map(u64::to_string)
                .collect();
            writeln!(out, "{}", vals.join(" ")).map_err(io_err)?;
        }
        Command::Gapcheck {
            poly: Some(poly), ..
        } => {
            let g = order_beta::coordinate_gap_bound_check(&poly)?;
            writeln!(
                out,
                "gap={} bound={:.6} ok={}",
                g.gap,
                g.bound,
                bool_str(g.ok)
            )
            .map_err(io_err)?;
        }
        Command::Gapcheck {
            degree_max, jobs, ..
        } => {
            for row in search::gap_census(degree_max, jobs)? {
                writeln!(
                    out,
                    "degree={} max_gap={} witness={} bound={:.6} ok={}",
                    row.degree,
                    row.max_gap,
                    F2Poly::from_index(row.witness),
                    row.bound,
                    bool_str(row.ok)
                )
                .map_err(io_err)?;
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs one subcommand.
/// Returns the process exit code: 0 on success, 1 on a failed operation,
/// 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
