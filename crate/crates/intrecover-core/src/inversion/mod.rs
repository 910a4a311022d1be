//! Memoized inversion over the divisor lattice.
//!
//! Classes are solved in batches ordered by `(D₁, D₂)`; every class needs only the
//! subsignals of classes in earlier batches. One-dimensional inversion is the `1 × N` case.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{solve_subproblem, BetaParams, LllStats, ResolvedBetas, Solution, SolvePath, SubproblemData};
use crate::numtheory::{divisors, mod_inverse, prime_factors, totient};
use crate::real::{Complex, Real};
use crate::sampling::{subsignal_geometry, ClassMap, MinimalSpectrum};
use crate::transform::{idft_2d, Grid, IntImage, RootTable};
use crate::Error;

/// Memo slot: a canonical class representative and its subsignal length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubproblemKey {
    pub rep: (u64, u64),
    pub big_d: u64,
}

impl fmt::Display for SubproblemKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) D={}", self.rep.0, self.rep.1, self.big_d)
    }
}

/// Batches of mutually independent keys in dependency order.
pub fn schedule(n1: u64, n2: u64) -> Result<Vec<Vec<SubproblemKey>>, Error> {
    let map = ClassMap::new(n1, n2)?;
    let mut batches = Vec::new();
    for a in divisors(n1) {
        for b in divisors(n2) {
            let mut batch = Vec::new();
            for c in map.classes() {
                let g = subsignal_geometry(n1, n2, c.rep.0, c.rep.1)?;
                if g.big_d1 == a && g.big_d2 == b {
                    batch.push(SubproblemKey {
                        rep: c.rep,
                        big_d: c.big_d,
                    });
                }
            }
            if !batch.is_empty() {
                batches.push(batch);
            }
        }
    }
    Ok(batches)
}

/// Source of `x^{(pk,pl)}` for one prime `p | D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dependency {
    pub prime: u64,
    /// Class index in [`ClassMap`] order.
    pub class: usize,
    /// `(pk, pl) = λ·rep` of that class.
    pub lambda: u64,
}

/// Classes whose subsignals are decimations of the subsignal of `(k, l)`.
pub fn dependencies(map: &ClassMap, k: u64, l: u64) -> Result<Vec<Dependency>, Error> {
    let (n1, n2) = map.shape();
    let g = subsignal_geometry(n1, n2, k, l)?;
    Ok(prime_factors(g.big_d)
        .into_iter()
        .map(|p| {
            let (class, lambda) = map.locate(p * k % n1, p * l % n2);
            Dependency { prime: p, class, lambda }
        })
        .collect())
}

/// Reorders the subsignal of `rep` into the subsignal of `λ·rep`: `y_j = x_{λ⁻¹j mod D}`.
pub fn permute_subsignal(x: &[i64], lambda: u64) -> Result<Vec<i64>, Error> {
    let d = x.len() as u64;
    let inv = mod_inverse(lambda, d).ok_or_else(|| Error::Domain(format!("{lambda} is not a unit modulo {d}")))?;
    Ok((0..d).map(|j| x[((inv as u128 * j as u128) % d as u128) as usize]).collect())
}

/// Outcome class of one subproblem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubproblemStatus {
    /// The supplied data fix every frequency of the subsignal.
    Trivial,
    /// The rounded guess matched the data.
    GuessPath,
    LatticeSolved,
    Failed,
}

/// Per-key entry of an [`InversionReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct SubproblemRecord {
    pub key: SubproblemKey,
    pub status: SubproblemStatus,
    /// Wall time; absent when the runner does not measure time.
    pub wall_secs: Option<f64>,
    /// Coefficients used in the final attempt.
    pub m: usize,
    pub attempts: u32,
    pub betas: Option<ResolvedBetas>,
    pub lll: Option<LllStats>,
    pub error: Option<Error>,
}

/// Structured account of an inversion.
#[derive(Clone, Debug, PartialEq)]
pub struct InversionReport {
    pub shape: (u64, u64),
    pub digits: u32,
    pub params: InversionParams,
    /// Records in schedule order.
    pub records: Vec<SubproblemRecord>,
    /// First failing key in schedule order.
    pub failed_key: Option<SubproblemKey>,
    /// Number of subproblem solver calls.
    pub solves: usize,
}

impl InversionReport {
    pub fn count(&self, status: SubproblemStatus) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }
}

/// Successful inversion.
#[derive(Clone, Debug, PartialEq)]
pub struct Inversion {
    pub image: IntImage,
    pub report: InversionReport,
    /// Solved subsignal of every class, in [`ClassMap`] order.
    pub subsignals: Vec<(SubproblemKey, Vec<i64>)>,
}

impl Inversion {
    /// The recovered signal of a `1 × N` inversion.
    pub fn signal(&self) -> &[i64] {
        self.image.data()
    }
}

/// Failed inversion with the partial report.
#[derive(Clone, Debug, PartialEq)]
pub struct InversionFailure {
    pub error: Error,
    pub report: InversionReport,
}

impl fmt::Display for InversionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

impl core::error::Error for InversionFailure {}

/// Driver options.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InversionParams {
    pub beta: BetaParams,
    /// Bound `L` on image entries, used by the `K` estimate; `None` means 1.
    pub entry_bound: Option<u64>,
    /// Cap on coefficients used per class on the first attempt.
    pub max_m: Option<usize>,
    /// Retry failed keys with one more coefficient when the spectrum has one.
    pub retry: bool,
}

impl Default for InversionParams {
    fn default() -> Self {
        InversionParams {
            beta: BetaParams::default(),
            entry_bound: None,
            max_m: None,
            retry: false,
        }
    }
}

/// Result of one subproblem run by a batch runner, with optional wall time.
pub type TaskResult = (Result<Solution, Error>, Option<f64>);

/// Solves each subproblem in order on the calling thread.
pub fn run_sequential<R: Real>(tasks: &[SubproblemData<R>], params: &BetaParams) -> Vec<TaskResult> {
    tasks.iter().map(|t| (solve_subproblem(t, params), None)).collect()
}

struct Driver<'a, R> {
    spec: &'a MinimalSpectrum<R>,
    params: InversionParams,
    map: ClassMap,
    // class index in `map` → index in `spec.classes`
    spec_index: Vec<usize>,
    memo: Vec<Option<Vec<i64>>>,
    report: InversionReport,
}

impl<R: Real> Driver<'_, R> {
    fn task(&self, key: SubproblemKey, m: usize) -> Result<SubproblemData<R>, Error> {
        let (n1, n2) = self.map.shape();
        let g = subsignal_geometry(n1, n2, key.rep.0, key.rep.1)?;
        let mut decimations = Vec::new();
        for dep in dependencies(&self.map, key.rep.0, key.rep.1)? {
            let src = self.memo[dep.class].as_ref().ok_or_else(|| {
                Error::Inconsistent(format!("decimation of {key} by {} not yet available", dep.prime))
            })?;
            decimations.push((dep.prime, permute_subsignal(src, dep.lambda)?));
        }
        let entries = &self.spec.classes[self.spec_index[self.map.index_of(key.rep).unwrap_or(0)]].entries;
        Ok(SubproblemData {
            big_d: key.big_d,
            decimations,
            coefficients: entries[..m.min(entries.len())].to_vec(),
            entry_bound: self.params.entry_bound,
            scale: g.coset_size,
        })
    }

    fn available(&self, key: SubproblemKey) -> usize {
        let idx = self.map.index_of(key.rep).unwrap_or(0);
        self.spec.classes[self.spec_index[idx]].entries.len()
    }

    fn first_m(&self, key: SubproblemKey) -> usize {
        let avail = self.available(key);
        self.params.max_m.map_or(avail, |m| m.clamp(1, avail))
    }

    fn status(key: SubproblemKey, m: usize, sol: &Solution) -> SubproblemStatus {
        match sol.path {
            SolvePath::Guess if totient(key.big_d) <= 2 * m as u64 => SubproblemStatus::Trivial,
            SolvePath::Guess => SubproblemStatus::GuessPath,
            SolvePath::Lattice => SubproblemStatus::LatticeSolved,
        }
    }

    fn record(key: SubproblemKey, m: usize, attempts: u32, outcome: &TaskResult) -> SubproblemRecord {
        let (res, secs) = outcome;
        match res {
            Ok(sol) => SubproblemRecord {
                key,
                status: Self::status(key, m, sol),
                wall_secs: *secs,
                m,
                attempts,
                betas: sol.betas,
                lll: sol.lll,
                error: None,
            },
            Err(e) => SubproblemRecord {
                key,
                status: SubproblemStatus::Failed,
                wall_secs: *secs,
                m,
                attempts,
                betas: None,
                lll: None,
                error: Some(e.clone()),
            },
        }
    }

    fn fail(mut self, key: Option<SubproblemKey>, error: Error) -> InversionFailure {
        self.report.failed_key = key;
        let error = match key {
            Some(k) => Error::Subproblem {
                k: k.rep.0,
                l: k.rep.1,
                d: k.big_d,
                cause: Box::new(error),
            },
            None => error,
        };
        InversionFailure {
            error,
            report: self.report,
        }
    }
}

/// Inverts `spec`, handing each batch of subproblems to `run_batch`.
pub fn invert_with<R, F>(
    spec: &MinimalSpectrum<R>,
    params: &InversionParams,
    mut run_batch: F,
) -> Result<Inversion, InversionFailure>
where
    R: Real,
    F: FnMut(&[SubproblemData<R>], &BetaParams) -> Vec<TaskResult>,
{
    let mut report = InversionReport {
        shape: (spec.n1, spec.n2),
        digits: spec.digits,
        params: *params,
        records: Vec::new(),
        failed_key: None,
        solves: 0,
    };
    let early = |error: Error, report: InversionReport| InversionFailure { error, report };
    if let Err(e) = spec.validate().and_then(|_| params.beta.validate()) {
        return Err(early(e, report));
    }
    if params.max_m == Some(0) {
        return Err(early(Error::Domain("max_m must be at least 1".into()), report));
    }
    let map = match ClassMap::new(spec.n1, spec.n2) {
        Ok(m) => m,
        Err(e) => return Err(early(e, report)),
    };
    let mut spec_index = vec![0usize; map.classes().len()];
    for (i, c) in spec.classes.iter().enumerate() {
        if let Some(idx) = map.index_of(c.rep) {
            spec_index[idx] = i;
        }
    }
    let batches = match schedule(spec.n1, spec.n2) {
        Ok(b) => b,
        Err(e) => return Err(early(e, report)),
    };
    report.records.reserve(map.classes().len());
    let mut drv = Driver {
        spec,
        params: *params,
        memo: vec![None; map.classes().len()],
        map,
        spec_index,
        report,
    };

    for batch in batches {
        let mut ms = Vec::with_capacity(batch.len());
        let mut tasks = Vec::with_capacity(batch.len());
        for &key in &batch {
            let m = drv.first_m(key);
            match drv.task(key, m) {
                Ok(t) => tasks.push(t),
                Err(e) => return Err(drv.fail(Some(key), e)),
            }
            ms.push(m);
        }
        let outcomes = run_batch(&tasks, &params.beta);
        drv.report.solves += tasks.len();
        let mut staged = Vec::with_capacity(batch.len());
        for ((&key, mut m), mut outcome) in batch.iter().zip(ms).zip(outcomes) {
            let mut attempts = 1;
            while outcome.0.is_err() && params.retry {
                if m >= drv.available(key) {
                    let e = outcome.0.unwrap_err();
                    outcome.0 = Err(Error::DataIncomplete(format!("{e}; no further coefficients to retry with")));
                    break;
                }
                m += 1;
                attempts += 1;
                let task = match drv.task(key, m) {
                    Ok(t) => t,
                    Err(e) => return Err(drv.fail(Some(key), e)),
                };
                outcome = run_batch(core::slice::from_ref(&task), &params.beta)
                    .pop()
                    .unwrap_or((Err(Error::Domain("runner returned no result".into())), None));
                drv.report.solves += 1;
            }
            drv.report.records.push(Driver::<R>::record(key, m, attempts, &outcome));
            match outcome.0 {
                Ok(sol) => staged.push((key, sol.signal)),
                Err(e) => return Err(drv.fail(Some(key), e)),
            }
        }
        for (key, signal) in staged {
            if let Some(idx) = drv.map.index_of(key.rep) {
                drv.memo[idx] = Some(signal);
            }
        }
    }

    match assemble_image::<R>(&drv.map, &drv.memo, spec.digits) {
        Ok(image) => {
            let subsignals = drv
                .map
                .classes()
                .iter()
                .zip(core::mem::take(&mut drv.memo))
                .map(|(c, s)| {
                    let key = SubproblemKey { rep: c.rep, big_d: c.big_d };
                    (key, s.unwrap_or_default())
                })
                .collect();
            Ok(Inversion {
                image,
                report: drv.report,
                subsignals,
            })
        }
        Err(e) => Err(drv.fail(None, e)),
    }
}

/// Fills the full spectrum from solved subsignals and inverts it.
fn assemble_image<R: Real>(map: &ClassMap, memo: &[Option<Vec<i64>>], digits: u32) -> Result<IntImage, Error> {
    let (n1, n2) = map.shape();
    let mut spectrum = Grid::filled(n1 as usize, n2 as usize, Complex::<R>::zero());
    let mut tables: Vec<Option<RootTable<R>>> = Vec::new();
    for (c, sub) in map.classes().iter().zip(memo) {
        let sub = sub
            .as_ref()
            .ok_or_else(|| Error::DataIncomplete(format!("class ({},{}) unsolved", c.rep.0, c.rep.1)))?;
        let d = c.big_d as usize;
        if tables.len() <= d {
            tables.resize_with(d + 1, || None);
        }
        let table = tables[d].get_or_insert_with(|| RootTable::new(d));
        for &(k, l) in &c.orbit {
            let (_, lam) = map.locate(k, l);
            spectrum[(k as usize, l as usize)] = table.coefficient_int(sub, lam);
        }
    }
    let spatial = idft_2d(&spectrum);
    let limit = libm::pow(10.0, -(digits as f64 - 6.0));
    let mut out = Vec::with_capacity(spatial.data().len());
    for v in spatial.data() {
        let r = v.re.round();
        let residue = (v.re - r).abs().to_f64().max(v.im.abs().to_f64());
        if residue >= limit {
            return Err(Error::Inconsistent(format!(
                "reconstruction residue {residue:.3e} exceeds {limit:.1e}"
            )));
        }
        let i = r
            .to_i128()
            .and_then(|i| i64::try_from(i).ok())
            .ok_or_else(|| Error::Overflow("image entry out of range".into()))?;
        out.push(i);
    }
    Grid::from_vec(n1 as usize, n2 as usize, out)
}

/// Memoized 2D inversion on the calling thread.
pub fn invert_2d<R: Real>(spec: &MinimalSpectrum<R>, params: &InversionParams) -> Result<Inversion, InversionFailure> {
    invert_with(spec, params, run_sequential::<R>)
}

/// Memoized 1D inversion of a `1 × N` spectrum.
pub fn invert_1d<R: Real>(spec: &MinimalSpectrum<R>, params: &InversionParams) -> Result<Inversion, InversionFailure> {
    if spec.n1 != 1 {
        let report = InversionReport {
            shape: (spec.n1, spec.n2),
            digits: spec.digits,
            params: *params,
            records: Vec::new(),
            failed_key: None,
            solves: 0,
        };
        return Err(InversionFailure {
            error: Error::Domain(format!("1D inversion needs a 1xN spectrum, got {}x{}", spec.n1, spec.n2)),
            report,
        });
    }
    invert_2d(spec, params)
}

#[cfg(test)]
mod tests;
