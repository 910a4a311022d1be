//! Benchmark suites: guess-error Monte Carlo, empirical `β₂` percentiles,
//! 1D recovery across precisions, and 2D recovery of random binary matrices.

use std::time::Instant;

use intrecover_core::inversion::{invert_1d, invert_2d, InversionParams};
use intrecover_core::lattice::{
    build_guess, estimate_beta2, estimate_k, solve_subproblem, Beta, BetaParams, SubproblemData,
};
use intrecover_core::numtheory::totient;
use intrecover_core::sampling::{count_classes, sample_minimal, sample_minimal_1d};
use intrecover_core::{with_real, PrecisionContext};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::random::{binary_image, binomial_signal, trial_rng};
use crate::table::Table;
use crate::CliError;

fn core_err(e: intrecover_core::Error) -> CliError {
    CliError::from_core(e)
}

/// Nearest-rank percentile of sorted values.
pub fn percentile(sorted: &[f64], pct: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = ((pct / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Mean guess error for one `M` next to its predicted bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KmcSummary {
    pub m: usize,
    pub mean: f64,
    pub bound: f64,
}

/// `‖x − x̄‖₂` of the zero-filled guess over Binomial(`l`, `p`) signals of length `n`.
pub fn kmc(
    pool: &ThreadPool,
    n: u64,
    ms: &[usize],
    l: u64,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<(Table, Vec<KmcSummary>), CliError> {
    let mut table = Table::new(&["trial", "m", "k_norm"]);
    let mut summary = Vec::new();
    for &m in ms {
        let norms: Vec<f64> = pool.install(|| {
            (0..trials)
                .into_par_iter()
                .map(|t| {
                    let x = binomial_signal(&mut trial_rng(seed, t as u64), n as usize, l, p);
                    let sub = SubproblemData::<f64>::from_signal(&x, m, 16, Some(l)).map_err(core_err)?;
                    let guess = build_guess(&sub.known_spectrum().map_err(core_err)?).map_err(core_err)?;
                    Ok(x.iter().zip(&guess).map(|(&a, &g)| (a as f64 - g).powi(2)).sum::<f64>().sqrt())
                })
                .collect::<Result<_, CliError>>()
        })?;
        for (t, k) in norms.iter().enumerate() {
            table.push(vec![t.to_string(), m.to_string(), format!("{k:.6}")]);
        }
        summary.push(KmcSummary {
            m,
            mean: norms.iter().sum::<f64>() / norms.len().max(1) as f64,
            bound: estimate_k(totient(n), m as u64, l, p, 1.0),
        });
    }
    Ok((table, summary))
}

/// Empirical distribution of the smallest successful `β₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PercentileSummary {
    pub p50: f64,
    pub p90: f64,
    pub p100: f64,
    pub theory: f64,
    /// Trials with no success inside the search range.
    pub unresolved: usize,
}

fn recovers(sub: &SubproblemData<f64>, truth: &[i64], params: &BetaParams, beta2: f64) -> bool {
    let p = BetaParams {
        beta2: Beta::Fixed(beta2),
        ..*params
    };
    matches!(solve_subproblem(sub, &p), Ok(s) if s.signal == truth)
}

/// Smallest `β₂` recovering `truth`: a decade-step search from 1 followed by
/// geometric bisection, `iterations` solver calls in total.
pub fn min_beta2(sub: &SubproblemData<f64>, truth: &[i64], params: &BetaParams, iterations: usize) -> Option<f64> {
    let mut used = 1;
    if recovers(sub, truth, params, 1.0) {
        return Some(1.0);
    }
    let (mut lo, mut hi) = (1.0f64, 10.0f64);
    loop {
        if used >= iterations {
            return None;
        }
        used += 1;
        if recovers(sub, truth, params, hi) {
            break;
        }
        lo = hi;
        hi *= 10.0;
    }
    while used < iterations {
        let mid = (lo * hi).sqrt();
        used += 1;
        if recovers(sub, truth, params, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Per-trial smallest `β₂` for the length-`n` top-level subproblem with `m` coefficients.
#[allow(clippy::too_many_arguments)]
pub fn percentile_suite(
    pool: &ThreadPool,
    n: u64,
    m: usize,
    l: u64,
    p: f64,
    trials: usize,
    seed: u64,
    params: &BetaParams,
    iterations: usize,
) -> Result<(Table, PercentileSummary), CliError> {
    let found: Vec<Option<f64>> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let x = binomial_signal(&mut trial_rng(seed, t as u64), n as usize, l, p);
                let sub = SubproblemData::<f64>::from_signal(&x, m, params.digits, Some(l)).map_err(core_err)?;
                Ok(min_beta2(&sub, &x, params, iterations))
            })
            .collect::<Result<_, CliError>>()
    })?;
    let mut table = Table::new(&["trial", "n", "m", "min_beta2"]);
    for (t, b) in found.iter().enumerate() {
        let cell = b.map_or_else(|| "none".to_string(), |v| format!("{v:.4e}"));
        table.push(vec![t.to_string(), n.to_string(), m.to_string(), cell]);
    }
    let mut vals: Vec<f64> = found.iter().flatten().copied().collect();
    vals.sort_by(f64::total_cmp);
    let phi = totient(n);
    let k = estimate_k(phi, m as u64, l, p, 1.0);
    Ok((
        table,
        PercentileSummary {
            p50: percentile(&vals, 50.0),
            p90: percentile(&vals, 90.0),
            p100: percentile(&vals, 100.0),
            theory: estimate_beta2(phi, m as u64, k, params.beta0),
            unresolved: found.iter().filter(|b| b.is_none()).count(),
        },
    ))
}

/// `β₂` used at `digits` when none is given: `10^{digits−2}`.
pub fn default_beta2(digits: u32) -> f64 {
    10f64.powi(digits as i32 - 2)
}

/// `None` selects [`default_beta2`].
pub fn resolve_beta2(beta2: Option<Beta>, digits: u32) -> Beta {
    beta2.unwrap_or(Beta::Fixed(default_beta2(digits)))
}

pub fn beta_label(b: Beta) -> String {
    match b {
        Beta::Auto => "auto".into(),
        Beta::Fixed(v) => format!("{v:.3e}"),
    }
}

struct TrialOutcome {
    recovered: bool,
    secs: f64,
}

fn summarize(outcomes: &[TrialOutcome]) -> (usize, f64, f64) {
    let ok = outcomes.iter().filter(|o| o.recovered).count();
    let mean = outcomes.iter().map(|o| o.secs).sum::<f64>() / outcomes.len().max(1) as f64;
    let max = outcomes.iter().map(|o| o.secs).fold(0.0, f64::max);
    (ok, mean, max)
}

/// 1D recovery rate over Binomial(`l`, `p`) signals for each `(n, m, digits)`;
/// `l = None` uses `l = n`. `base.beta2` is replaced by `beta2` resolved at each precision.
/// `top_level` solves only the length-`n` subproblem, with decimations taken from the signal.
#[allow(clippy::too_many_arguments)]
pub fn precision_suite(
    pool: &ThreadPool,
    ns: &[u64],
    ms: &[usize],
    digits: &[u32],
    l: Option<u64>,
    p: f64,
    trials: usize,
    seed: u64,
    base: &BetaParams,
    beta2: Option<Beta>,
    top_level: bool,
) -> Result<Table, CliError> {
    let mode = if top_level { "top_level" } else { "full" };
    let mut table = Table::new(&[
        "n", "m", "digits", "beta2", "mode", "trials", "recovered", "rate_pct", "mean_secs", "max_secs",
    ]);
    for &n in ns {
        let l = l.unwrap_or(n);
        for &m in ms {
            for &dg in digits {
                let ctx = PrecisionContext::new(dg).map_err(core_err)?;
                let b2 = resolve_beta2(beta2, dg);
                let params = InversionParams {
                    beta: BetaParams {
                        beta2: b2,
                        digits: dg,
                        ..*base
                    },
                    entry_bound: Some(l),
                    ..Default::default()
                };
                let outcomes: Vec<TrialOutcome> = pool.install(|| {
                    (0..trials)
                        .into_par_iter()
                        .map(|t| {
                            let x = binomial_signal(&mut trial_rng(seed, t as u64), n as usize, l, p);
                            with_real!(ctx.tier(), R => {
                                if top_level {
                                    let sub = SubproblemData::<R>::from_signal(&x, m, dg, Some(l)).map_err(core_err)?;
                                    let t0 = Instant::now();
                                    let res = solve_subproblem(&sub, &params.beta);
                                    return Ok(TrialOutcome {
                                        recovered: matches!(res, Ok(sol) if sol.signal == x),
                                        secs: t0.elapsed().as_secs_f64(),
                                    });
                                }
                                let spec = sample_minimal_1d::<R>(&x, m, &ctx).map_err(core_err)?;
                                let t0 = Instant::now();
                                let res = invert_1d(&spec, &params);
                                Ok(TrialOutcome {
                                    recovered: matches!(res, Ok(inv) if inv.signal() == x.as_slice()),
                                    secs: t0.elapsed().as_secs_f64(),
                                })
                            })
                        })
                        .collect::<Result<_, CliError>>()
                })?;
                let (ok, mean, max) = summarize(&outcomes);
                table.push(vec![
                    n.to_string(),
                    m.to_string(),
                    dg.to_string(),
                    beta_label(b2),
                    mode.to_string(),
                    trials.to_string(),
                    ok.to_string(),
                    format!("{:.1}", 100.0 * ok as f64 / trials.max(1) as f64),
                    format!("{mean:.4}"),
                    format!("{max:.4}"),
                ]);
            }
        }
    }
    Ok(table)
}

/// 2D recovery of uniform binary matrices for each shape and `m`; `beta2` as in [`precision_suite`].
#[allow(clippy::too_many_arguments)]
pub fn recover2d_suite(
    pool: &ThreadPool,
    shapes: &[(u64, u64)],
    ms: &[usize],
    digits: u32,
    trials: usize,
    seed: u64,
    base: &BetaParams,
    beta2: Option<Beta>,
) -> Result<Table, CliError> {
    let mut table = Table::new(&[
        "n1",
        "n2",
        "m",
        "digits",
        "coefficients",
        "fraction_pct",
        "trials",
        "recovered",
        "rate_pct",
        "mean_secs",
        "max_secs",
    ]);
    let ctx = PrecisionContext::new(digits).map_err(core_err)?;
    let params = InversionParams {
        beta: BetaParams {
            beta2: resolve_beta2(beta2, digits),
            digits,
            ..*base
        },
        entry_bound: Some(1),
        ..Default::default()
    };
    for &(n1, n2) in shapes {
        for &m in ms {
            let mut coefficients = count_classes(n1, n2) as usize;
            let outcomes: Vec<(TrialOutcome, usize)> = pool.install(|| {
                (0..trials)
                    .into_par_iter()
                    .map(|t| {
                        let x = binary_image(&mut trial_rng(seed, t as u64), n1 as usize, n2 as usize);
                        with_real!(ctx.tier(), R => {
                            let spec = sample_minimal::<R>(&x, m, &ctx).map_err(core_err)?;
                            let t0 = Instant::now();
                            let res = invert_2d(&spec, &params);
                            Ok((
                                TrialOutcome {
                                    recovered: matches!(res, Ok(inv) if inv.image == x),
                                    secs: t0.elapsed().as_secs_f64(),
                                },
                                spec.coefficient_count(),
                            ))
                        })
                    })
                    .collect::<Result<_, CliError>>()
            })?;
            if let Some(&(_, c)) = outcomes.first() {
                coefficients = c;
            }
            let outcomes: Vec<TrialOutcome> = outcomes.into_iter().map(|(o, _)| o).collect();
            let (ok, mean, max) = summarize(&outcomes);
            table.push(vec![
                n1.to_string(),
                n2.to_string(),
                m.to_string(),
                digits.to_string(),
                coefficients.to_string(),
                format!("{:.1}", 100.0 * coefficients as f64 / (n1 * n2) as f64),
                trials.to_string(),
                ok.to_string(),
                format!("{:.1}", 100.0 * ok as f64 / trials.max(1) as f64),
                format!("{mean:.4}"),
                format!("{max:.4}"),
            ]);
        }
    }
    Ok(table)
}
