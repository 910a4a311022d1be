//! Batch runners for the inversion driver that record wall time per subproblem.

use std::time::Instant;

use intrecover_core::inversion::{invert_with, Inversion, InversionFailure, InversionParams, TaskResult};
use intrecover_core::lattice::{solve_subproblem, BetaParams, SubproblemData};
use intrecover_core::real::Real;
use intrecover_core::sampling::MinimalSpectrum;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::CliError;

fn timed<R: Real>(task: &SubproblemData<R>, params: &BetaParams) -> TaskResult {
    let t0 = Instant::now();
    let res = solve_subproblem(task, params);
    (res, Some(t0.elapsed().as_secs_f64()))
}

/// Solves a batch in order on the calling thread.
pub fn run_timed<R: Real>(tasks: &[SubproblemData<R>], params: &BetaParams) -> Vec<TaskResult> {
    tasks.iter().map(|t| timed(t, params)).collect()
}

/// Solves a batch across the threads of `pool`; results keep task order.
pub fn run_parallel<R: Real>(pool: &ThreadPool, tasks: &[SubproblemData<R>], params: &BetaParams) -> Vec<TaskResult> {
    pool.install(|| tasks.par_iter().map(|t| timed(t, params)).collect())
}

/// `threads = 0` uses one thread per core.
pub fn thread_pool(threads: usize) -> Result<ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} threads: {e}")))
}

/// Inverts with independent subproblems of each batch solved in parallel.
pub fn invert_parallel<R: Real>(
    spec: &MinimalSpectrum<R>,
    params: &InversionParams,
    pool: &ThreadPool,
) -> Result<Inversion, InversionFailure> {
    invert_with(spec, params, |tasks, beta| run_parallel(pool, tasks, beta))
}

/// Inverts on the calling thread with per-subproblem timings.
pub fn invert_timed<R: Real>(spec: &MinimalSpectrum<R>, params: &InversionParams) -> Result<Inversion, InversionFailure> {
    invert_with(spec, params, run_timed::<R>)
}
