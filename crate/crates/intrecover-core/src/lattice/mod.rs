//! Subproblem solving by lattice reduction.
//!
//! A length-`D` subproblem knows the decimated signals `x^{(D/p)}` for every prime
//! `p | D` and `M` coefficients `x̃_λ` with `gcd(λ, D) = 1`. The integer solution is
//! sought as a short vector of a `(D+1)`-dimensional lattice anchored at the guess `x̄`.

mod heuristics;
pub mod lll;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

pub use heuristics::{
    beta1_min, estimate_beta2, estimate_k, gamma_max, lll_factor, recommended_digits, rho, rho_total,
};
pub use lll::{check_reduced, lll_reduce, lll_reduce_with, LllStats, ReductionCheck};

use crate::numtheory::{gcd, prime_factors, totient};
use crate::real::{round_to_digits, Complex, Real};
use crate::sampling::leading_units;
use crate::transform::{decimate_freq, PrecisionContext, RootTable, Tier};
use crate::with_real;
use crate::Error;

/// A penalty weight given explicitly or derived from the heuristics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Beta {
    Auto,
    Fixed(f64),
}

/// Lattice and solver parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaParams {
    pub beta0: f64,
    pub beta1: Beta,
    pub beta2: Beta,
    pub beta3: f64,
    pub delta: f64,
    /// Acceptance tolerance on coefficient residuals; `None` means `10⁻⁴` times the largest sampled `|x̃|`.
    pub eps: Option<f64>,
    /// Working precision of the reduction.
    pub digits: u32,
    /// Success probability used by the `K` estimate.
    pub p: f64,
}

impl Default for BetaParams {
    fn default() -> Self {
        BetaParams {
            beta0: 0.1,
            beta1: Beta::Auto,
            beta2: Beta::Auto,
            beta3: 100.0,
            delta: 0.9972,
            eps: None,
            digits: PrecisionContext::DEFAULT_DIGITS,
            p: 0.5,
        }
    }
}

impl BetaParams {
    pub fn validate(&self) -> Result<(), Error> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let fixed_ok = |b: Beta| match b {
            Beta::Auto => true,
            Beta::Fixed(v) => positive(v),
        };
        if !positive(self.beta0) || !fixed_ok(self.beta1) || !fixed_ok(self.beta2) {
            return Err(Error::Domain("penalty weights must be positive".into()));
        }
        if !(self.beta3.is_finite() && self.beta3 >= 1.0) {
            return Err(Error::Domain(format!("beta3 must be at least 1, got {}", self.beta3)));
        }
        if !(self.delta > 0.25 && self.delta <= 1.0) {
            return Err(Error::Domain(format!("delta must lie in (0.25, 1], got {}", self.delta)));
        }
        if let Some(e) = self.eps {
            if !(e.is_finite() && e >= 0.0) {
                return Err(Error::Domain(format!("eps must be nonnegative, got {e}")));
            }
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::Domain(format!("p must lie in (0, 1), got {}", self.p)));
        }
        if (self.beta3 * self.beta0).trunc() < 1.0 {
            return Err(Error::Domain("beta3·beta0 must be at least 1".into()));
        }
        PrecisionContext::new(self.digits).map(|_| ())
    }
}

/// Everything known about one length-`D` subsignal.
#[derive(Clone, Debug, PartialEq)]
pub struct SubproblemData<R> {
    pub big_d: u64,
    /// `(p, x^{(D/p)})` for each prime `p | D`, ascending.
    pub decimations: Vec<(u64, Vec<i64>)>,
    /// `(λ, x̃_λ)` with `gcd(λ, D) = 1`.
    pub coefficients: Vec<(u64, Complex<R>)>,
    /// Bound on the underlying image entries, used by the `K` estimate.
    pub entry_bound: Option<u64>,
    /// Image entries summed into each subsignal entry.
    pub scale: u64,
}

impl<R: Real> SubproblemData<R> {
    /// Data a length-`D` signal exposes: all decimations and its first `m` unit coefficients
    /// rounded to `digits` significant digits.
    pub fn from_signal(x: &[i64], m: usize, digits: u32, entry_bound: Option<u64>) -> Result<Self, Error> {
        let d = x.len() as u64;
        if d == 0 {
            return Err(Error::Domain("empty signal".into()));
        }
        let decimations = prime_factors(d)
            .into_iter()
            .map(|p| decimate_freq(x, p as usize).map(|v| (p, v)))
            .collect::<Result<Vec<_>, _>>()?;
        let table = RootTable::<R>::new(d as usize);
        let count = m.min((totient(d) as usize).div_ceil(2)).max(1);
        let coefficients = leading_units(d, count)
            .into_iter()
            .map(|lam| {
                let v = table.coefficient_int(x, lam);
                let dg = digits as usize;
                (lam, Complex::new(round_to_digits(v.re, dg), round_to_digits(v.im, dg)))
            })
            .collect();
        Ok(SubproblemData {
            big_d: d,
            decimations,
            coefficients,
            entry_bound,
            scale: 1,
        })
    }

    pub fn m(&self) -> usize {
        self.coefficients.len()
    }

    /// Checks shapes, multipliers and mutual consistency of the decimations.
    pub fn validate(&self) -> Result<(), Error> {
        let d = self.big_d;
        if d == 0 {
            return Err(Error::Domain("subproblem length must be positive".into()));
        }
        let primes = prime_factors(d);
        let got: Vec<u64> = self.decimations.iter().map(|(p, _)| *p).collect();
        if got != primes {
            return Err(Error::DataIncomplete(format!(
                "length {d} needs decimations for primes {primes:?}, got {got:?}"
            )));
        }
        for (p, v) in &self.decimations {
            if v.len() as u64 != d / p {
                return Err(Error::Inconsistent(format!(
                    "decimation by {p} has length {}, expected {}",
                    v.len(),
                    d / p
                )));
            }
        }
        for (i, (p, vp)) in self.decimations.iter().enumerate() {
            for (q, vq) in &self.decimations[i + 1..] {
                if decimate_freq(vp, *q as usize)? != decimate_freq(vq, *p as usize)? {
                    return Err(Error::Inconsistent(format!(
                        "decimations by {p} and {q} disagree on length {}",
                        d / p / q
                    )));
                }
            }
        }
        if self.coefficients.is_empty() {
            return Err(Error::DataIncomplete(format!("no coefficient for length {d}")));
        }
        for (lam, v) in &self.coefficients {
            if gcd(*lam, d) != 1 {
                return Err(Error::Inconsistent(format!("multiplier {lam} is not a unit modulo {d}")));
            }
            if !v.is_finite() {
                return Err(Error::Inconsistent("non-finite coefficient".into()));
            }
        }
        Ok(())
    }

    /// Known spectrum of the subsignal, `None` at unknown frequencies.
    pub fn known_spectrum(&self) -> Result<Vec<Option<Complex<R>>>, Error> {
        self.validate()?;
        let d = self.big_d as usize;
        let mut known = vec![None; d];
        for (p, v) in &self.decimations {
            let len = v.len();
            let table = RootTable::<R>::new(len);
            for (j, slot) in known.iter_mut().step_by(*p as usize).enumerate() {
                *slot = Some(table.coefficient_int(v, j as u64));
            }
        }
        for &(lam, v) in &self.coefficients {
            let i = (lam % self.big_d) as usize;
            known[i] = Some(v);
            known[(d - i) % d] = Some(if i == 0 { v } else { v.conj() });
        }
        Ok(known)
    }

    /// `√((φ(D)−2M)·scale·L·p(1−p))`.
    pub fn k_estimate(&self, p: f64) -> f64 {
        estimate_k(
            totient(self.big_d),
            self.m() as u64,
            self.entry_bound.unwrap_or(1),
            p,
            self.scale as f64,
        )
    }
}

/// Zero-filled inverse DFT of `known`; every frequency sharing a factor with `D` is required.
pub fn build_guess<R: Real>(known: &[Option<Complex<R>>]) -> Result<Vec<R>, Error> {
    let d = known.len();
    if d == 0 {
        return Err(Error::Domain("empty spectrum".into()));
    }
    let mut spec = Vec::with_capacity(d);
    for (k, v) in known.iter().enumerate() {
        match v {
            Some(c) => spec.push(*c),
            None if gcd(k as u64, d as u64) != 1 => {
                return Err(Error::DataIncomplete(format!("frequency {k} of length {d} is required")))
            }
            None => spec.push(Complex::zero()),
        }
    }
    Ok(RootTable::new(d).idft(&spec).into_iter().map(|c| c.re).collect())
}

/// Penalty weights after resolving automatic choices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolvedBetas {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    /// `K` estimate behind the automatic choices.
    pub k: f64,
}

// Largest magnitude we let a scaled basis entry take before reduction.
const ENTRY_HEADROOM: f64 = 1e30;

fn resolve_betas<R: Real>(sub: &SubproblemData<R>, params: &BetaParams, max_abs: f64) -> ResolvedBetas {
    let d = sub.big_d;
    let phi = totient(d);
    let m = sub.m() as u64;
    let k = sub.k_estimate(params.p);
    let beta1 = match params.beta1 {
        Beta::Fixed(v) => v,
        Beta::Auto => beta1_min(k, params.beta0, d, params.delta),
    };
    let beta2 = match params.beta2 {
        Beta::Fixed(v) => v,
        Beta::Auto => {
            let cap_digits = libm::pow(10.0, params.digits as f64 - 2.0) / params.beta3;
            let cap_room = ENTRY_HEADROOM / (params.beta3 * (max_abs + d as f64));
            estimate_beta2(phi, m, k, params.beta0).min(cap_digits).min(cap_room)
        }
    };
    ResolvedBetas {
        beta0: params.beta0,
        beta1,
        beta2,
        beta3: params.beta3,
        k,
    }
}

/// Scaled integer basis with its block layout.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeInstance {
    /// `D + 1` rows; row `j < D` carries `e_j`, the last row carries the guess.
    pub basis: Vec<Vec<i128>>,
    pub big_d: usize,
    pub offset_b0: usize,
    pub offset_b1: usize,
    pub offset_b2: usize,
    pub ambient: usize,
    pub betas: ResolvedBetas,
}

impl LatticeInstance {
    /// Scaled `B₀` entry `⌊β₃β₀⌋` of the last row, before reduction.
    pub fn b0_entry(&self) -> i128 {
        self.basis[self.big_d][self.offset_b0]
    }
}

fn scaled<R: Real>(v: R) -> Result<i128, Error> {
    v.trunc()
        .to_i128()
        .filter(|x| x.unsigned_abs() < (1u128 << 120))
        .ok_or_else(|| Error::Overflow(format!("scaled basis entry {:e} exceeds 2^120", v.to_f64())))
}

fn max_known_abs<R: Real>(known: &[Option<Complex<R>>]) -> f64 {
    known
        .iter()
        .flatten()
        .map(|c| c.abs().to_f64())
        .fold(0.0, f64::max)
}

/// `1e-4` times the largest sampled coefficient magnitude (at least 1).
///
/// Decimation-derived terms are excluded: the zero frequency of a scaled subsignal
/// would otherwise loosen the tolerance enough to admit wrong vectors.
fn default_eps<R: Real>(sub: &SubproblemData<R>) -> f64 {
    let m = sub.coefficients.iter().map(|(_, c)| c.abs().to_f64()).fold(0.0, f64::max);
    1e-4 * m.max(1.0)
}

fn assemble<R: Real>(sub: &SubproblemData<R>, guess: &[R], betas: ResolvedBetas) -> Result<LatticeInstance, Error> {
    let d = sub.big_d as usize;
    let b1_len: usize = sub.decimations.iter().map(|(_, v)| v.len()).sum();
    let offset_b0 = d;
    let offset_b1 = d + 1;
    let offset_b2 = offset_b1 + b1_len;
    let ambient = offset_b2 + 2 * sub.m();
    let b3 = R::from_f64(betas.beta3);
    let b1 = b3 * R::from_f64(betas.beta1);
    let b2 = b3 * R::from_f64(betas.beta2);
    let a_unit = scaled(b3)?;
    let b1_unit = scaled(b1)?;
    let table = RootTable::<R>::new(d);
    let mut basis = vec![vec![0i128; ambient]; d + 1];
    for (j, row) in basis.iter_mut().take(d).enumerate() {
        row[j] = a_unit;
        let mut off = offset_b1;
        for (_, v) in &sub.decimations {
            row[off + j % v.len()] = b1_unit;
            off += v.len();
        }
        for (i, (lam, _)) in sub.coefficients.iter().enumerate() {
            let w = table.pow(j as u64 * lam);
            row[offset_b2 + 2 * i] = scaled(b2 * w.re)?;
            row[offset_b2 + 2 * i + 1] = scaled(b2 * w.im)?;
        }
    }
    let last = &mut basis[d];
    for (j, &g) in guess.iter().enumerate() {
        last[j] = scaled(-(b3 * g))?;
    }
    last[offset_b0] = scaled(b3 * R::from_f64(betas.beta0))?;
    let mut off = offset_b1;
    for (_, v) in &sub.decimations {
        for (i, &x) in v.iter().enumerate() {
            last[off + i] = b1_unit
                .checked_mul(-(x as i128))
                .ok_or_else(|| Error::Overflow("decimation row overflow".into()))?;
        }
        off += v.len();
    }
    for (i, (_, c)) in sub.coefficients.iter().enumerate() {
        last[offset_b2 + 2 * i] = scaled(-(b2 * c.re))?;
        last[offset_b2 + 2 * i + 1] = scaled(-(b2 * c.im))?;
    }
    Ok(LatticeInstance {
        basis,
        big_d: d,
        offset_b0,
        offset_b1,
        offset_b2,
        ambient,
        betas,
    })
}

/// Builds `⌊β₃·B⌋` for `sub`, resolving automatic penalty weights.
pub fn build_lattice_basis<R: Real>(sub: &SubproblemData<R>, params: &BetaParams) -> Result<LatticeInstance, Error> {
    params.validate()?;
    let known = sub.known_spectrum()?;
    let guess = build_guess(&known)?;
    let betas = resolve_betas(sub, params, max_known_abs(&known));
    assemble(sub, &guess, betas)
}

/// How a subproblem was solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolvePath {
    /// The rounded guess already matched the data.
    Guess,
    /// A reduced basis vector produced the solution.
    Lattice,
}

/// Result of [`solve_subproblem`].
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub signal: Vec<i64>,
    pub path: SolvePath,
    /// Resolved weights; `None` on the guess path.
    pub betas: Option<ResolvedBetas>,
    pub lll: Option<LllStats>,
    /// Position of the accepted vector in norm order.
    pub candidate_rank: Option<usize>,
}

struct Checker<'a, R> {
    sub: &'a SubproblemData<R>,
    table: RootTable<R>,
    eps: f64,
}

impl<R: Real> Checker<'_, R> {
    fn new(sub: &SubproblemData<R>, eps: f64) -> Checker<'_, R> {
        Checker {
            sub,
            table: RootTable::new(sub.big_d as usize),
            eps,
        }
    }

    /// Decimations match exactly and sampled coefficients within `eps`.
    fn admissible(&self, y: &[i64]) -> bool {
        for (p, v) in &self.sub.decimations {
            match decimate_freq(y, *p as usize) {
                Ok(dy) if &dy == v => {}
                _ => return false,
            }
        }
        self.sub.coefficients.iter().all(|&(lam, c)| {
            let diff = self.table.coefficient_int(y, lam) - c;
            diff.abs().to_f64() <= self.eps
        })
    }
}

fn round_signal<R: Real>(v: impl Iterator<Item = R>) -> Option<Vec<i64>> {
    v.map(|x| x.round().to_i128().and_then(|i| i64::try_from(i).ok()))
        .collect()
}

fn tiers_from(start: Tier) -> impl Iterator<Item = Tier> {
    [Tier::F64, Tier::Double2, Tier::Double3, Tier::Double4]
        .into_iter()
        .skip_while(move |t| *t != start)
}

/// Reduces with increasing precision until the reduction completes.
fn reduce_escalating(basis: &mut Vec<Vec<i128>>, delta: f64, start: Tier) -> Result<LllStats, Error> {
    let original = basis.clone();
    let mut last = Error::Precision {
        required_digits: PrecisionContext::MAX_DIGITS,
    };
    for tier in tiers_from(start) {
        basis.clone_from(&original);
        match with_real!(tier, T => lll_reduce_with::<T>(basis, delta)) {
            Ok(stats) => return Ok(stats),
            Err(e @ Error::Precision { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Recovers the integer subsignal from `sub`: rounded guess first, then lattice reduction.
pub fn solve_subproblem<R: Real>(sub: &SubproblemData<R>, params: &BetaParams) -> Result<Solution, Error> {
    params.validate()?;
    let known = sub.known_spectrum()?;
    let guess = build_guess(&known)?;
    let max_abs = max_known_abs(&known);
    let eps = params.eps.unwrap_or_else(|| default_eps(sub));
    let checker = Checker::new(sub, eps);

    if let Some(y) = round_signal(guess.iter().copied()) {
        if checker.admissible(&y) {
            return Ok(Solution {
                signal: y,
                path: SolvePath::Guess,
                betas: None,
                lll: None,
                candidate_rank: None,
            });
        }
    }

    let betas = resolve_betas(sub, params, max_abs);
    let mut inst = assemble(sub, &guess, betas)?;
    let b0 = inst.b0_entry();
    let tier = PrecisionContext::new(params.digits)?.tier();
    let stats = reduce_escalating(&mut inst.basis, params.delta, tier)?;

    let d = inst.big_d;
    let b3 = R::from_f64(betas.beta3);
    let norm = |v: &[i128]| v.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>();
    let mut order: Vec<(f64, usize)> = inst.basis.iter().enumerate().map(|(i, v)| (norm(v), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));

    for (rank, &(_, idx)) in order.iter().enumerate() {
        let v = &inst.basis[idx];
        if v[inst.offset_b0].unsigned_abs() != b0.unsigned_abs() {
            continue;
        }
        let mut best: Option<(R, Vec<i64>)> = None;
        for sign in [R::one(), -R::one()] {
            let Some(y) = round_signal((0..d).map(|j| sign * R::from_i128(v[j]) / b3 + guess[j])) else {
                continue;
            };
            if !checker.admissible(&y) {
                continue;
            }
            let dist = y
                .iter()
                .zip(&guess)
                .map(|(&a, &g)| {
                    let t = R::from_i64(a) - g;
                    t * t
                })
                .fold(R::zero(), |acc, t| acc + t);
            if best.as_ref().map_or(true, |(bd, _)| dist < *bd) {
                best = Some((dist, y));
            }
        }
        if let Some((_, y)) = best {
            return Ok(Solution {
                signal: y,
                path: SolvePath::Lattice,
                betas: Some(betas),
                lll: Some(stats),
                candidate_rank: Some(rank),
            });
        }
    }
    Err(Error::NoCandidate {
        d: sub.big_d,
        shortest_norm: libm::sqrt(order[0].0) / betas.beta3,
        predicted_norm: libm::sqrt(betas.k * betas.k + betas.beta0 * betas.beta0),
    })
}

/// Search-space ceiling for [`brute_force_oracle`].
pub const ORACLE_BUDGET: f64 = 1e7;

/// Every vector in `[0, L]^D` consistent with `sub` within `eps`, in lexicographic order.
pub fn brute_force_oracle<R: Real>(sub: &SubproblemData<R>, bound: u64, eps: f64) -> Result<Vec<Vec<i64>>, Error> {
    sub.validate()?;
    let d = sub.big_d as usize;
    let needed = libm::pow(bound as f64 + 1.0, d as f64);
    if needed > ORACLE_BUDGET {
        return Err(Error::Budget {
            needed,
            limit: ORACLE_BUDGET,
        });
    }
    let checker = Checker::new(sub, eps);
    let mut y = vec![0i64; d];
    let mut out = Vec::new();
    loop {
        if checker.admissible(&y) {
            out.push(y.clone());
        }
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if (y[i] as u64) < bound {
                y[i] += 1;
                break;
            }
            y[i] = 0;
        }
    }
}
