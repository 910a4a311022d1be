use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use intrecover::bench::{kmc, percentile_suite, precision_suite, recover2d_suite};
use intrecover::commands::{cmd_classes, cmd_invert, cmd_params, cmd_sample, cmd_witness, InvertOptions};
use intrecover::pgm::PgmFormat;
use intrecover::runner::thread_pool;
use intrecover::table::RunConfig;
use intrecover::CliError;
use intrecover_core::lattice::{Beta, BetaParams};

/// Recover integer images from minimal sets of DFT coefficients.
#[derive(Parser)]
#[command(name = "intrecover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BetaFlags {
    #[arg(long)]
    beta0: Option<f64>,
    /// Number or `auto` (default: auto).
    #[arg(long, value_parser = parse_beta)]
    beta1: Option<Beta>,
    /// Number or `auto` (default: 10^(digits-2)).
    #[arg(long, value_parser = parse_beta)]
    beta2: Option<Beta>,
    #[arg(long)]
    beta3: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Acceptance tolerance on coefficient residuals.
    #[arg(long)]
    eps: Option<f64>,
    /// Success probability used by the K estimate.
    #[arg(long)]
    p: Option<f64>,
}

fn parse_beta(s: &str) -> Result<Beta, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Beta::Auto);
    }
    s.parse::<f64>()
        .map(Beta::Fixed)
        .map_err(|_| format!("expected a number or 'auto', got {s:?}"))
}

fn beta_text(b: Option<Beta>) -> Option<String> {
    b.map(|b| match b {
        Beta::Auto => "auto".into(),
        Beta::Fixed(v) => v.to_string(),
    })
}

impl BetaFlags {
    /// `beta2` stays `Auto` here; callers resolve it through [`BetaFlags::beta2`].
    fn params(&self) -> BetaParams {
        let d = BetaParams::default();
        BetaParams {
            beta0: self.beta0.unwrap_or(d.beta0),
            beta1: self.beta1.unwrap_or(Beta::Auto),
            beta3: self.beta3.unwrap_or(d.beta3),
            delta: self.delta.unwrap_or(d.delta),
            eps: self.eps,
            p: self.p.unwrap_or(d.p),
            ..d
        }
    }

    fn record(&self, cfg: &mut RunConfig) {
        cfg.beta0 = self.beta0;
        cfg.beta1 = beta_text(self.beta1);
        cfg.beta2 = beta_text(self.beta2);
        cfg.beta3 = self.beta3;
        cfg.delta = self.delta;
        cfg.eps = self.eps;
        cfg.p = self.p;
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Percentile,
    Precision,
    Recover2d,
    Kmc,
}

#[derive(Subcommand)]
enum Command {
    /// List the coefficient classes of an N1 x N2 grid.
    Classes {
        n1: u64,
        n2: u64,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a PGM image into a minimal-spectrum JSON file.
    Sample {
        image: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 16)]
        digits: u32,
    },
    /// Reconstruct a PGM image from a spectrum file.
    Invert {
        spectrum: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Report JSON path (default: <out>.report.json).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Coefficients used per class on the first attempt.
        #[arg(long)]
        m: Option<usize>,
        /// Working digits (default: the spectrum's digits).
        #[arg(long)]
        digits: Option<u32>,
        /// Entry bound and output maxval.
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Retry failed classes with one more stored coefficient.
        #[arg(long)]
        retry: bool,
        /// Write binary (P5) instead of ASCII (P2).
        #[arg(long)]
        binary: bool,
        #[command(flatten)]
        beta: BetaFlags,
    },
    /// Write witness images for the class of (k, l).
    Witness {
        n1: u64,
        n2: u64,
        k: u64,
        l: u64,
        /// Output path prefix.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print heuristic parameters for a length-N subproblem.
    Params {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        l: u64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0.1)]
        beta0: f64,
        #[arg(long, default_value_t = 100.0)]
        beta3: f64,
        #[arg(long, default_value_t = 0.9972)]
        delta: f64,
    },
    /// Run a benchmark suite and write its table as CSV.
    Bench {
        suite: Suite,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Signal lengths, or first grid dimensions for recover2d.
        #[arg(long, value_delimiter = ',')]
        n: Vec<u64>,
        /// Second grid dimensions for recover2d, paired with --n.
        #[arg(long, value_delimiter = ',')]
        n2: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        m: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        digits: Vec<u32>,
        /// Binomial trial count per entry (default: N).
        #[arg(long)]
        l: Option<u64>,
        /// Search iterations for the percentile suite.
        #[arg(long, default_value_t = 30)]
        iterations: usize,
        /// Precision suite: solve only the top-level subproblem.
        #[arg(long)]
        top_level: bool,
        #[command(flatten)]
        beta: BetaFlags,
    },
}

fn or_default<T: Clone>(v: &[T], d: &[T]) -> Vec<T> {
    if v.is_empty() {
        d.to_vec()
    } else {
        v.to_vec()
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Classes { n1, n2, out } => {
            let cfg = RunConfig {
                command: "classes".into(),
                output: out.clone(),
                shape: Some((n1, n2)),
                ..Default::default()
            };
            cmd_classes(n1, n2, out.as_deref(), &cfg)
        }
        Command::Sample { image, out, m, digits } => {
            let s = cmd_sample(&image, m, digits, &out)?;
            Ok(format!(
                "classes: {}\ncoefficients: {} of {} ({:.1}%)\n",
                s.classes,
                s.coefficients,
                s.total,
                100.0 * s.fraction()
            ))
        }
        Command::Invert {
            spectrum,
            out,
            report,
            m,
            digits,
            l,
            threads,
            retry,
            binary,
            beta,
        } => {
            let opts = InvertOptions {
                beta: beta.params(),
                beta2: beta.beta2,
                digits,
                l,
                max_m: m,
                retry,
                threads,
                format: if binary { PgmFormat::Binary } else { PgmFormat::Ascii },
                report,
            };
            let s = cmd_invert(&spectrum, &out, &opts)?;
            Ok(format!(
                "recovered {}x{} image in {:.3} s ({} lattice solves)\nreport: {}\n",
                s.image.rows(),
                s.image.cols(),
                s.secs,
                s.lattice_solves,
                s.report_path.display()
            ))
        }
        Command::Witness { n1, n2, k, l, out } => {
            let cfg = RunConfig {
                command: format!("witness {k} {l}"),
                output: Some(out.clone()),
                shape: Some((n1, n2)),
                ..Default::default()
            };
            let paths = cmd_witness(n1, n2, k, l, &out, &cfg)?;
            Ok(paths.iter().map(|p| format!("wrote {}\n", p.display())).collect())
        }
        Command::Params {
            n,
            m,
            l,
            p,
            beta0,
            beta3,
            delta,
        } => cmd_params(n, m, l, p, beta0, beta3, delta),
        Command::Bench {
            suite,
            seed,
            trials,
            threads,
            out,
            n,
            n2,
            m,
            digits,
            l,
            iterations,
            top_level,
            beta,
        } => {
            let pool = thread_pool(threads)?;
            let base = beta.params();
            let p = base.p;
            let mut cfg = RunConfig {
                output: out.clone(),
                seed: Some(seed),
                l,
                threads: Some(threads),
                ..Default::default()
            };
            beta.record(&mut cfg);
            let (table, summary) = match suite {
                Suite::Kmc => {
                    let n = or_default(&n, &[30])[0];
                    let ms = or_default(&m, &[1, 2, 3]);
                    let trials = trials.unwrap_or(10_000);
                    let (t, s) = kmc(&pool, n, &ms, l.unwrap_or(n), p, trials, seed)?;
                    cfg.command = format!("bench kmc n={n}");
                    cfg.m = ms;
                    cfg.trials = Some(trials);
                    let lines: String = s
                        .iter()
                        .map(|r| format!("M={}: mean {:.4}, bound {:.4}\n", r.m, r.mean, r.bound))
                        .collect();
                    (t, lines)
                }
                Suite::Percentile => {
                    let n = or_default(&n, &[19])[0];
                    let mm = or_default(&m, &[1])[0];
                    let trials = trials.unwrap_or(100);
                    let dg = or_default(&digits, &[16])[0];
                    let params = BetaParams { digits: dg, ..base };
                    let (t, s) = percentile_suite(&pool, n, mm, l.unwrap_or(n), p, trials, seed, &params, iterations)?;
                    cfg.command = format!("bench percentile n={n} iterations={iterations}");
                    cfg.m = vec![mm];
                    cfg.digits = vec![dg];
                    cfg.trials = Some(trials);
                    let line = format!(
                        "beta2 percentiles: 50th {:.3e}, 90th {:.3e}, 100th {:.3e}; theory {:.3e}; unresolved {}\n",
                        s.p50, s.p90, s.p100, s.theory, s.unresolved
                    );
                    (t, line)
                }
                Suite::Precision => {
                    let ns = or_default(&n, &[30, 31]);
                    let ms = or_default(&m, &[1, 2]);
                    let dgs = or_default(&digits, &[16]);
                    let trials = trials.unwrap_or(50);
                    let t = precision_suite(&pool, &ns, &ms, &dgs, l, p, trials, seed, &base, beta.beta2, top_level)?;
                    cfg.command = format!("bench precision n={ns:?} top_level={top_level}");
                    cfg.m = ms;
                    cfg.digits = dgs;
                    cfg.trials = Some(trials);
                    (t, String::new())
                }
                Suite::Recover2d => {
                    let n1 = or_default(&n, &[12, 23]);
                    let n2 = or_default(&n2, &[18, 23]);
                    if n1.len() != n2.len() {
                        return Err(CliError::Usage("--n and --n2 must have equal lengths".into()));
                    }
                    let shapes: Vec<(u64, u64)> = n1.into_iter().zip(n2).collect();
                    let ms = or_default(&m, &[1]);
                    let dg = or_default(&digits, &[16])[0];
                    let trials = trials.unwrap_or(20);
                    let t = recover2d_suite(&pool, &shapes, &ms, dg, trials, seed, &base, beta.beta2)?;
                    cfg.command = format!("bench recover2d shapes={shapes:?}");
                    cfg.m = ms;
                    cfg.digits = vec![dg];
                    cfg.trials = Some(trials);
                    (t, String::new())
                }
            };
            if let Some(path) = &out {
                table.write_csv(path, &cfg)?;
            }
            if table.rows.len() <= 50 {
                Ok(table.to_text() + &summary)
            } else {
                Ok(summary)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
