//! Command-line interface: subcommands for sieving, integrals, constants,
//! model statistics, density curves, urn simulations, and table reproduction.
//!
//! Data goes to standard output; failures print `ERROR <code>: <message>` to
//! standard error and exit nonzero. Usage mistakes exit with status 2.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use prime_lab::densities::{DensityKind, GapDensity};
use prime_lab::error::{Error, Result};
use prime_lab::logint::{self, Tol};
use prime_lab::models::{self, UrnSpec};
use prime_lab::montecarlo;
use prime_lab::report::{self, Reporter, TableId};
use prime_lab::singular;
use prime_lab::{Sieve, TuplePattern};

pub const THREADS_ENV: &str = "PRIME_LAB_THREADS";

/// Validated run configuration assembled from flags and environment.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub sieve_budget: u64,
    pub quadrature_tol: Tol,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
    pub output_format: OutputFormat,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self> {
        if cli.sieve_budget < 1_000 {
            return Err(Error::Domain(format!(
                "sieve budget must be at least 1000, got {}",
                cli.sieve_budget
            )));
        }
        if !(cli.tol.is_finite() && cli.tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", cli.tol)));
        }
        let quadrature_tol = if cli.abs_tol { Tol::Abs(cli.tol) } else { Tol::Rel(cli.tol) };
        let seed = match &cli.command {
            Command::Simulate { seed, .. } => *seed,
            _ => 0,
        };
        Ok(RunConfig {
            sieve_budget: cli.sieve_budget,
            quadrature_tol,
            cache_dir: cli.cache_dir.clone(),
            seed,
            output_format: cli.format,
        })
    }

    fn sieve(&self) -> Result<Sieve> {
        let sieve = Sieve::new().with_budget(self.sieve_budget);
        match &self.cache_dir {
            Some(dir) => sieve.with_cache_dir(dir),
            None => sieve.with_default_cache(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

#[derive(Parser, Debug)]
#[command(
    name = "prime-lab",
    version,
    about = "Probabilistic models of prime and prime k-tuple distributions"
)]
struct Cli {
    /// Largest x the sieve may be asked to reach.
    #[arg(long, global = true, default_value_t = 1_000_000_000)]
    sieve_budget: u64,

    /// Quadrature tolerance (relative unless --abs-tol).
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,

    /// Treat --tol as an absolute bound.
    #[arg(long, global = true)]
    abs_tol: bool,

    /// Count-cache directory (default: $PRIME_LAB_CACHE_DIR or ./.cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Worker threads; 0 or unset picks the machine default
    /// (also readable from $PRIME_LAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Table output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact π(x), or the pattern's k-tuple count.
    Count {
        #[arg(long, value_parser = parse_x)]
        x: u64,
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Li_k(x) with a certified error bound.
    Li {
        #[arg(long, value_parser = parse_x)]
        x: u64,
        #[arg(long)]
        k: u32,
    },
    /// Singular-series constant for an admissible pattern.
    Constant {
        #[arg(long)]
        pattern: String,
    },
    /// Mean and standard deviation under one of the count models.
    Stats {
        /// 1 (with replacement), 2 (Cramér), or tuple.
        #[arg(long)]
        model: String,
        #[arg(long, value_parser = parse_x)]
        x: u64,
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Sample a density as CSV `t,pdf,cdf` over a grid.
    Density {
        #[arg(long)]
        kind: String,
        #[arg(long, value_parser = parse_x)]
        x: u64,
        /// Grid as lo:hi:steps (inclusive endpoints).
        #[arg(long)]
        grid: String,
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Urn simulation; CSV `n1,frequency,exact_pmf`.
    Simulate {
        /// with (returns each ball) or without (hypergeometric).
        #[arg(long)]
        mode: String,
        #[arg(long = "M", value_parser = parse_x)]
        m: u64,
        #[arg(long = "M1", value_parser = parse_x_or_zero)]
        m1: u64,
        #[arg(long, value_parser = parse_x)]
        n: u64,
        #[arg(long, value_parser = parse_x)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Reproduce one of the benchmark tables (1–4).
    Table {
        #[arg(long)]
        id: String,
        /// Comma-separated row limits, e.g. 1e5,1e6.
        #[arg(long)]
        xs: Option<String>,
    },
}

/// Exact integer parsing that also accepts scientific notation:
/// `1e8` → 100000000, `2.5e3` → 2500. Non-integer values are rejected.
pub fn parse_x(text: &str) -> std::result::Result<u64, String> {
    let v = parse_x_or_zero(text)?;
    if v == 0 {
        return Err("value must be at least 1".into());
    }
    Ok(v)
}

fn parse_x_or_zero(text: &str) -> std::result::Result<u64, String> {
    let t = text.trim();
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let (mantissa, exp) = t
        .split_once(['e', 'E'])
        .ok_or_else(|| format!("{t:?} is not an integer"))?;
    let exp: u32 = exp
        .parse()
        .map_err(|_| format!("bad exponent in {t:?}"))?;
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("{t:?} has no digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(format!("{t:?} is not a non-negative number"));
    }
    if (frac_part.len() as u32) > exp {
        return Err(format!("{t:?} is not an integer"));
    }
    let digits = format!("{int_part}{frac_part}");
    let zeros = exp - frac_part.len() as u32;
    let mut value: u64 = digits
        .parse()
        .map_err(|_| format!("{t:?} overflows"))?;
    for _ in 0..zeros {
        value = value
            .checked_mul(10)
            .ok_or_else(|| format!("{t:?} overflows"))?;
    }
    Ok(value)
}

fn parse_xs(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|t| parse_x(t).map_err(Error::Parse))
        .collect()
}

fn parse_grid(text: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("grid must be lo:hi:steps, got {text:?}")));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Parse(format!("bad grid lower bound {:?}", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad grid upper bound {:?}", parts[1])))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| Error::Parse(format!("bad grid step count {:?}", parts[2])))?;
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo || steps == 0 {
        return Err(Error::Parse(format!("degenerate grid {text:?}")));
    }
    Ok((lo, hi, steps))
}

fn init_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        if n > 0 {
            // A later duplicate initialization is harmless; ignore it.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn pattern_arg(text: &Option<String>) -> Result<Option<TuplePattern>> {
    text.as_deref().map(TuplePattern::from_str).transpose()
}

/// Parse argv and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    init_threads(cli.threads);
    let mut stdout = String::new();
    match execute(&cli, &mut stdout) {
        Ok(()) => {
            print!("{stdout}");
            0
        }
        Err(e) => {
            eprintln!("ERROR {}: {}", e.code(), e);
            1
        }
    }
}

fn execute(cli: &Cli, out: &mut String) -> Result<()> {
    use std::fmt::Write;
    let config = RunConfig::from_cli(cli)?;

    match &cli.command {
        Command::Count { x, pattern } => {
            let sieve = config.sieve()?;
            let rec = match pattern_arg(pattern)? {
                Some(p) => sieve.tuple_count(&p, *x)?,
                None => sieve.prime_count(*x)?,
            };
            writeln!(out, "{}", rec.count).unwrap();
        }
        Command::Li { x, k } => {
            let v = logint::li(*x as f64, *k, config.quadrature_tol)?;
            writeln!(out, "{}", v.value).unwrap();
        }
        Command::Constant { pattern } => {
            let p: TuplePattern = pattern.parse()?;
            let tol = match config.quadrature_tol {
                Tol::Rel(t) | Tol::Abs(t) => t,
            };
            let c = singular::singular_series(&p, tol)?;
            writeln!(out, "{}", c.value).unwrap();
        }
        Command::Stats { model, x, pattern } => {
            let xf = *x as f64;
            let stats = match model.as_str() {
                "1" => models::model1_stats(xf)?,
                "2" => models::model2_stats(xf)?,
                "tuple" => {
                    let p = pattern_arg(pattern)?.ok_or_else(|| {
                        Error::Parse("--model tuple requires --pattern".into())
                    })?;
                    models::tuple_stats(&p, xf)?
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unknown model {other:?}; expected 1, 2 or tuple"
                    )))
                }
            };
            writeln!(out, "x,model,mean,sigma").unwrap();
            let name = match stats.model {
                models::ModelKind::BinomialModel1 => "1",
                models::ModelKind::CramerModel2 => "2",
                models::ModelKind::TupleModel => "tuple",
            };
            writeln!(out, "{x},{name},{},{}", stats.mean, stats.sigma).unwrap();
        }
        Command::Density { kind, x, grid, pattern } => {
            let kind = DensityKind::parse(kind)?;
            let xf = *x as f64;
            let density = if kind.is_tuple() {
                let p = pattern_arg(pattern)?.ok_or_else(|| {
                    Error::Parse(format!("kind {} requires --pattern", kind.name()))
                })?;
                GapDensity::for_tuples(kind, &p, xf)?
            } else {
                GapDensity::for_primes(kind, xf)?
            };
            let (lo, hi, steps) = parse_grid(grid)?;
            writeln!(out, "t,pdf,cdf").unwrap();
            for i in 0..=steps {
                let t = lo + (hi - lo) * i as f64 / steps as f64;
                writeln!(out, "{t},{},{}", density.pdf(t), density.cdf(t)).unwrap();
            }
        }
        Command::Simulate { mode, m, m1, n, trials, .. } => {
            let urn = UrnSpec::new(*m, *m1, *n)?;
            let seed = config.seed;
            let (result, with_replacement) = match mode.as_str() {
                "with" => (montecarlo::simulate_with_replacement(&urn, *trials, seed)?, true),
                "without" => {
                    (montecarlo::simulate_without_replacement(&urn, *trials, seed)?, false)
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unknown mode {other:?}; expected with or without"
                    )))
                }
            };
            let p = *m1 as f64 / *m as f64;
            let (lo, hi) = if with_replacement { (0, *n) } else { urn.support() };
            writeln!(out, "n1,frequency,exact_pmf").unwrap();
            for n1 in lo..=hi {
                let pmf = if with_replacement {
                    models::binomial_pmf(*n, p, n1)
                } else {
                    models::hypergeometric_pmf(&urn, n1)?
                };
                let freq = result.histogram.get(&n1).copied().unwrap_or(0);
                writeln!(out, "{n1},{freq},{pmf}").unwrap();
            }
        }
        Command::Table { id, xs } => {
            let id = TableId::parse(id)?;
            let xs = match xs {
                Some(s) => parse_xs(s)?,
                None => id.default_xs().to_vec(),
            };
            let sieve = config.sieve()?;
            let rows = Reporter::new(&sieve).table(id, &xs)?;
            let text = match config.output_format {
                OutputFormat::Csv => report::to_csv(&rows)?,
                OutputFormat::Markdown => report::to_markdown(&rows)?,
            };
            out.push_str(&text);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_notation_parses_to_exact_integers() {
        assert_eq!(parse_x("10").unwrap(), 10);
        assert_eq!(parse_x("1e8").unwrap(), 100_000_000);
        assert_eq!(parse_x("1E3").unwrap(), 1_000);
        assert_eq!(parse_x("2.5e3").unwrap(), 2_500);
        assert_eq!(parse_x("1.5e1").unwrap(), 15);
        assert_eq!(parse_x("1e12").unwrap(), 1_000_000_000_000);
        assert!(parse_x("1.23e1").is_err()); // 12.3
        assert!(parse_x("0").is_err());
        assert!(parse_x("-5").is_err());
        assert!(parse_x("1e30").is_err()); // overflow
        assert!(parse_x("abc").is_err());
        assert!(parse_x("1e").is_err());
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:1:10").unwrap(), (0.0, 1.0, 10));
        assert_eq!(parse_grid("17.0:22.5:100").unwrap(), (17.0, 22.5, 100));
        assert!(parse_grid("1:0:10").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn budget_floor_is_validated() {
        let cli = Cli::parse_from(["prime-lab", "--sieve-budget", "10", "count", "--x", "5"]);
        assert!(RunConfig::from_cli(&cli).is_err());
    }

    #[test]
    fn count_command_writes_bare_value() {
        let dir = tempfile::tempdir().unwrap();
        let cli = Cli::parse_from([
            "prime-lab",
            "--cache-dir",
            dir.path().to_str().unwrap(),
            "count",
            "--x",
            "10",
        ]);
        let mut out = String::new();
        execute(&cli, &mut out).unwrap();
        assert_eq!(out, "4\n");
    }

    #[test]
    fn li_at_lower_limit_prints_zero() {
        let cli = Cli::parse_from(["prime-lab", "li", "--x", "2", "--k", "3"]);
        let mut out = String::new();
        execute(&cli, &mut out).unwrap();
        assert_eq!(out, "0\n");
    }

    #[test]
    fn density_grid_rows_are_emitted() {
        let cli = Cli::parse_from([
            "prime-lab",
            "density",
            "--kind",
            "gap-z",
            "--x",
            "1e6",
            "--grid",
            "12:14:4",
        ]);
        let mut out = String::new();
        execute(&cli, &mut out).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "t,pdf,cdf");
        assert_eq!(lines.len(), 6);
    }
}
