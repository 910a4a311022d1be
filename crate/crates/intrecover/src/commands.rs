//! Implementations of the subcommands, callable without spawning the binary.

use std::path::{Path, PathBuf};
use std::time::Instant;

use intrecover_core::inversion::{InversionParams, SubproblemStatus};
use intrecover_core::lattice::{
    beta1_min, estimate_beta2, estimate_k, gamma_max, recommended_digits, Beta, BetaParams,
};
use intrecover_core::numtheory::totient;
use intrecover_core::sampling::{amb2d_witness, binary_pair_witness, enumerate_classes, sample_minimal, searchspace_dims};
use intrecover_core::{with_real, Grid, IntImage, PrecisionContext};

use crate::bench::resolve_beta2;
use crate::pgm::{Pgm, PgmFormat};
use crate::report::ReportFile;
use crate::runner::{invert_parallel, thread_pool};
use crate::spectrum::SpectrumFile;
use crate::table::{RunConfig, Table};
use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Class listing of an `n1 × n2` grid.
pub fn classes_table(n1: u64, n2: u64) -> Result<Table, CliError> {
    if n1 == 0 || n2 == 0 {
        return Err(usage("grid dimensions must be positive"));
    }
    let mut t = Table::new(&["rep_k", "rep_l", "D", "orbit_size"]);
    for c in enumerate_classes(n1, n2) {
        t.push(vec![
            c.rep.0.to_string(),
            c.rep.1.to_string(),
            c.big_d.to_string(),
            c.orbit.len().to_string(),
        ]);
    }
    Ok(t)
}

/// Prints the class table with totals and search-space dimensions; optionally writes CSV.
pub fn cmd_classes(n1: u64, n2: u64, csv: Option<&Path>, config: &RunConfig) -> Result<String, CliError> {
    let t = classes_table(n1, n2)?;
    if let Some(path) = csv {
        t.write_csv(path, config)?;
    }
    let dims = |n: u64| match searchspace_dims(n) {
        Ok((a, b)) => format!("N={n}: divisor-coefficient nullity {a}, decimation+unit nullity {b}"),
        Err(_) => format!("N={n}: below 3, no search space"),
    };
    let mut out = format!("{}classes: {}\nfrequencies: {}\n{}\n", t.to_text(), t.rows.len(), n1 * n2, dims(n1));
    if n2 != n1 {
        out += &dims(n2);
        out.push('\n');
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSummary {
    pub classes: usize,
    pub coefficients: usize,
    pub total: u64,
}

impl SampleSummary {
    pub fn fraction(&self) -> f64 {
        self.coefficients as f64 / self.total as f64
    }
}

/// Samples a PGM image into a spectrum file.
pub fn cmd_sample(input: &Path, m: usize, digits: u32, out: &Path) -> Result<SampleSummary, CliError> {
    if m == 0 {
        return Err(usage("--m must be at least 1"));
    }
    let ctx = PrecisionContext::new(digits).map_err(CliError::from_core)?;
    let pgm = Pgm::read(input)?;
    let file = with_real!(ctx.tier(), R => {
        let spec = sample_minimal::<R>(&pgm.image, m, &ctx).map_err(CliError::from_core)?;
        SpectrumFile::from_spectrum(&spec, Some(pgm.maxval as u64))
    });
    file.write(out)?;
    Ok(SampleSummary {
        classes: file.classes.len(),
        coefficients: file.coefficient_count(),
        total: file.n1 * file.n2,
    })
}

/// Options of [`cmd_invert`].
#[derive(Clone, Debug)]
pub struct InvertOptions {
    /// Weights; `beta2` here is replaced by the field below.
    pub beta: BetaParams,
    /// `None` uses `10^{digits−2}`.
    pub beta2: Option<Beta>,
    /// Working digits; `None` uses the spectrum's declared digits.
    pub digits: Option<u32>,
    /// Entry bound and output maxval; `None` uses the spectrum hint, else 1.
    pub l: Option<u64>,
    pub max_m: Option<usize>,
    pub retry: bool,
    pub threads: usize,
    pub format: PgmFormat,
    /// Report path; `None` writes `<out>.report.json`.
    pub report: Option<PathBuf>,
}

impl Default for InvertOptions {
    fn default() -> Self {
        InvertOptions {
            beta: BetaParams::default(),
            beta2: None,
            digits: None,
            l: None,
            max_m: None,
            retry: false,
            threads: 0,
            format: PgmFormat::Ascii,
            report: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvertSummary {
    pub image: IntImage,
    pub report_path: PathBuf,
    pub secs: f64,
    pub lattice_solves: usize,
}

pub fn default_report_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".report.json");
    PathBuf::from(s)
}

/// Reconstructs an image from a spectrum file; writes the image and a report.
/// On failure the report is still written and names the failing class.
pub fn cmd_invert(input: &Path, out: &Path, opts: &InvertOptions) -> Result<InvertSummary, CliError> {
    let file = SpectrumFile::read(input)?;
    let digits = opts.digits.unwrap_or(file.digits);
    let ctx = PrecisionContext::new(digits).map_err(CliError::from_core)?;
    let l = opts.l.or(file.maxval).unwrap_or(1);
    if l == 0 || l > 65535 {
        return Err(usage(format!("--l must lie in [1, 65535], got {l}")));
    }
    let params = InversionParams {
        beta: BetaParams {
            digits,
            beta2: resolve_beta2(opts.beta2, digits),
            ..opts.beta
        },
        entry_bound: Some(l),
        max_m: opts.max_m,
        retry: opts.retry,
    };
    params.beta.validate().map_err(CliError::from_core)?;
    let pool = thread_pool(opts.threads)?;
    let report_path = opts.report.clone().unwrap_or_else(|| default_report_path(out));
    let t0 = Instant::now();
    let outcome = with_real!(ctx.tier(), R => {
        let spec = file.to_spectrum::<R>()?;
        invert_parallel(&spec, &params, &pool)
    });
    let secs = t0.elapsed().as_secs_f64();
    match outcome {
        Ok(inv) => {
            ReportFile::new(&inv.report, None, secs).write(&report_path)?;
            let maxval = inv.image.data().iter().copied().max().unwrap_or(0).max(l as i64);
            let pgm = u16::try_from(maxval)
                .map_err(|_| CliError::Reconstruction(format!("pixel value {maxval} exceeds 65535")))
                .and_then(|mv| Pgm::with_maxval(inv.image.clone(), mv, opts.format))
                .map_err(|e| CliError::Reconstruction(format!("result is not a valid image: {e}")))?;
            pgm.write(out)?;
            Ok(InvertSummary {
                lattice_solves: inv.report.count(SubproblemStatus::LatticeSolved),
                image: inv.image,
                report_path,
                secs,
            })
        }
        Err(fail) => {
            ReportFile::new(&fail.report, Some(fail.error.to_string()), secs).write(&report_path)?;
            Err(CliError::Reconstruction(fail.error.to_string()))
        }
    }
}

/// Writes `<prefix>_amb2d.csv` and the pair `<prefix>_pair_a.pgm`, `<prefix>_pair_b.pgm`.
pub fn cmd_witness(
    n1: u64,
    n2: u64,
    k: u64,
    l: u64,
    prefix: &Path,
    config: &RunConfig,
) -> Result<Vec<PathBuf>, CliError> {
    if n1 == 0 || n2 == 0 || k >= n1 || l >= n2 {
        return Err(usage(format!("frequency ({k},{l}) outside a {n1}x{n2} grid")));
    }
    let amb = amb2d_witness(n1, n2, k, l).map_err(CliError::from_core)?;
    let (a, b) = binary_pair_witness(n1, n2, k, l).map_err(CliError::from_core)?;
    let path = |suffix: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    };
    let csv = path("_amb2d.csv");
    let cols: Vec<String> = (0..n2).map(|c| format!("c{c}")).collect();
    let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut t = Table::new(&cols);
    for r in 0..amb.rows() {
        t.push(amb.row(r).iter().map(i64::to_string).collect());
    }
    t.write_csv(&csv, config)?;
    let (pa, pb) = (path("_pair_a.pgm"), path("_pair_b.pgm"));
    Pgm::with_maxval(a, 1, PgmFormat::Ascii)?.write(&pa)?;
    Pgm::with_maxval(b, 1, PgmFormat::Ascii)?.write(&pb)?;
    Ok(vec![csv, pa, pb])
}

/// Heuristic parameters for a length-`n` subproblem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamsRow {
    pub n: u64,
    pub phi: u64,
    pub k: f64,
    pub gamma_max: u64,
    pub beta1_min: f64,
    pub beta2: f64,
    pub digits: u32,
}

pub fn params_row(n: u64, m: u64, l: u64, p: f64, beta0: f64, beta3: f64, delta: f64) -> Result<ParamsRow, CliError> {
    if n == 0 || m == 0 || l == 0 {
        return Err(usage("--n, --m and --l must be positive"));
    }
    if !(p > 0.0 && p < 1.0) || !(beta0 > 0.0) || !(beta3 >= 1.0) || !(delta > 0.25 && delta <= 1.0) {
        return Err(usage("need 0 < p < 1, beta0 > 0, beta3 >= 1 and 0.25 < delta <= 1"));
    }
    let phi = totient(n);
    let k = estimate_k(phi, m, l, p, 1.0);
    let beta2 = estimate_beta2(phi, m, k, beta0);
    Ok(ParamsRow {
        n,
        phi,
        k,
        gamma_max: gamma_max(k, beta0),
        beta1_min: beta1_min(k, beta0, n, delta),
        beta2,
        digits: recommended_digits(beta2, beta3),
    })
}

pub fn cmd_params(n: u64, m: u64, l: u64, p: f64, beta0: f64, beta3: f64, delta: f64) -> Result<String, CliError> {
    let r = params_row(n, m, l, p, beta0, beta3, delta)?;
    Ok(format!(
        "N = {}\nphi(N) = {}\nM = {m}\nL = {l}\np = {p}\nK = {:.4}\ngamma_max = {}\nbeta1_min = {:.4e}\nbeta2 = {:.3e}\nrecommended digits = {}\n",
        r.n, r.phi, r.k, r.gamma_max, r.beta1_min, r.beta2, r.digits
    ))
}

/// Signed-integer matrix read back from a witness CSV.
pub fn read_signed_csv(path: &Path) -> Result<IntImage, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let mut data = Vec::new();
    let mut rows = 0;
    let mut cols = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::InvalidImage(e.to_string()))?;
        cols = rec.len();
        for cell in rec.iter() {
            data.push(cell.trim().parse::<i64>().map_err(|e| CliError::InvalidImage(e.to_string()))?);
        }
        rows += 1;
    }
    Grid::from_vec(rows, cols, data).map_err(|e| CliError::InvalidImage(e.to_string()))
}
