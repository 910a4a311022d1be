//! Coefficient classes, subsignals, minimal spectra and ambiguity witnesses.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::numtheory::{divisors, gcd, lcm, prime_factors, tau, totient};
use crate::real::{round_to_digits, Complex, Real};
use crate::transform::{Grid, IntImage, PrecisionContext, RootTable};
use crate::Error;

/// Index arithmetic relating a frequency `(k, l)` to its subsignal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsignalGeometry {
    pub n1: u64,
    pub n2: u64,
    pub k: u64,
    pub l: u64,
    /// `lcm(N₁, N₂)`
    pub n: u64,
    pub n1p: u64,
    pub n2p: u64,
    pub d1: u64,
    pub d2: u64,
    pub big_d1: u64,
    pub big_d2: u64,
    /// Subsignal length.
    pub big_d: u64,
    /// `N / D`
    pub d: u64,
    /// Image entries summed into each subsignal entry.
    pub coset_size: u64,
}

pub fn subsignal_geometry(n1: u64, n2: u64, k: u64, l: u64) -> Result<SubsignalGeometry, Error> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Domain(format!("empty grid {n1}x{n2}")));
    }
    if k >= n1 || l >= n2 {
        return Err(Error::Domain(format!(
            "frequency ({k},{l}) outside {n1}x{n2}"
        )));
    }
    let g = gcd(n1, n2);
    let n = lcm(n1, n2);
    let d1 = gcd(k, n1);
    let d2 = gcd(l, n2);
    let big_d1 = n1 / d1;
    let big_d2 = n2 / d2;
    let big_d = lcm(big_d1, big_d2);
    Ok(SubsignalGeometry {
        n1,
        n2,
        k,
        l,
        n,
        n1p: n1 / g,
        n2p: n2 / g,
        d1,
        d2,
        big_d1,
        big_d2,
        big_d,
        d: n / big_d,
        coset_size: n1 * n2 / big_d,
    })
}

impl SubsignalGeometry {
    /// Subsignal index receiving image entry `(m, n)`.
    pub fn slot(&self, m: u64, n: u64) -> usize {
        let big = self.n as u128;
        let idx = (m as u128 * self.k as u128 * self.n2p as u128
            + n as u128 * self.l as u128 * self.n1p as u128)
            % big;
        (idx / self.d as u128) as usize
    }
}

/// Frequencies `(λk mod N₁, λl mod N₂)` for `λ ∈ [1, D]` coprime to `D`, in `λ` order.
pub fn orbit(n1: u64, n2: u64, k: u64, l: u64) -> Result<Vec<(u64, u64)>, Error> {
    let g = subsignal_geometry(n1, n2, k, l)?;
    Ok(orbit_with_lambda(&g).into_iter().map(|(_, f)| f).collect())
}

fn orbit_with_lambda(g: &SubsignalGeometry) -> Vec<(u64, (u64, u64))> {
    (1..=g.big_d)
        .filter(|&lam| gcd(lam, g.big_d) == 1)
        .map(|lam| {
            (
                lam,
                (
                    ((lam as u128 * g.k as u128) % g.n1 as u128) as u64,
                    ((lam as u128 * g.l as u128) % g.n2 as u128) as u64,
                ),
            )
        })
        .collect()
}

/// One equivalence class of frequencies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientClass {
    /// Lexicographically smallest member.
    pub rep: (u64, u64),
    pub big_d: u64,
    pub orbit: Vec<(u64, u64)>,
}

/// Partition of a frequency grid into classes with per-frequency lookup.
#[derive(Clone, Debug)]
pub struct ClassMap {
    n1: u64,
    n2: u64,
    classes: Vec<CoefficientClass>,
    // (class index, λ) with frequency = λ·rep
    slots: Vec<(u32, u64)>,
}

impl ClassMap {
    pub fn new(n1: u64, n2: u64) -> Result<Self, Error> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::Domain(format!("empty grid {n1}x{n2}")));
        }
        let total = (n1 * n2) as usize;
        let mut slots = vec![(u32::MAX, 0u64); total];
        let mut classes = Vec::new();
        for k in 0..n1 {
            for l in 0..n2 {
                if slots[(k * n2 + l) as usize].0 != u32::MAX {
                    continue;
                }
                let g = subsignal_geometry(n1, n2, k, l)?;
                let idx = classes.len() as u32;
                let orb = orbit_with_lambda(&g);
                for &(lam, (a, b)) in &orb {
                    slots[(a * n2 + b) as usize] = (idx, lam);
                }
                classes.push(CoefficientClass {
                    rep: (k, l),
                    big_d: g.big_d,
                    orbit: orb.into_iter().map(|(_, f)| f).collect(),
                });
            }
        }
        Ok(ClassMap {
            n1,
            n2,
            classes,
            slots,
        })
    }

    pub fn shape(&self) -> (u64, u64) {
        (self.n1, self.n2)
    }

    pub fn classes(&self) -> &[CoefficientClass] {
        &self.classes
    }

    pub fn into_classes(self) -> Vec<CoefficientClass> {
        self.classes
    }

    /// Class index and multiplier `λ` with `(k, l) = λ·rep` (indices taken modulo the grid).
    pub fn locate(&self, k: u64, l: u64) -> (usize, u64) {
        let (c, lam) = self.slots[((k % self.n1) * self.n2 + l % self.n2) as usize];
        (c as usize, lam)
    }

    /// Index of the class whose representative is `rep`.
    pub fn index_of(&self, rep: (u64, u64)) -> Option<usize> {
        let (c, _) = self.locate(rep.0, rep.1);
        (self.classes[c].rep == rep).then_some(c)
    }
}

/// Classes in lexicographic order of representatives.
pub fn enumerate_classes(n1: u64, n2: u64) -> Vec<CoefficientClass> {
    ClassMap::new(n1, n2)
        .map(ClassMap::into_classes)
        .unwrap_or_default()
}

/// `Σ_{a|N₁, b|N₂} φ(gcd(a,b))`.
pub fn count_classes(n1: u64, n2: u64) -> u64 {
    let db = divisors(n2);
    divisors(n1)
        .iter()
        .map(|&a| db.iter().map(|&b| totient(gcd(a, b))).sum::<u64>())
        .sum()
}

/// Length-`D` signal whose DFT at `λ` is `X̃_{λk,λl}`.
pub fn extract_subsignal(x: &IntImage, k: u64, l: u64) -> Result<Vec<i64>, Error> {
    let g = subsignal_geometry(x.rows() as u64, x.cols() as u64, k, l)?;
    let mut out = vec![0i64; g.big_d as usize];
    for m in 0..g.n1 {
        for n in 0..g.n2 {
            out[g.slot(m, n)] += x[(m as usize, n as usize)];
        }
    }
    Ok(out)
}

/// Stored coefficients of one class.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledClass<R> {
    pub rep: (u64, u64),
    pub big_d: u64,
    /// `(λ, X̃_{λk,λl})` with `gcd(λ, D) = 1`; conjugates implied.
    pub entries: Vec<(u64, Complex<R>)>,
}

/// One or more coefficients per class, at a declared decimal precision.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalSpectrum<R> {
    pub n1: u64,
    pub n2: u64,
    pub digits: u32,
    pub classes: Vec<SampledClass<R>>,
}

impl<R: Real> MinimalSpectrum<R> {
    pub fn coefficient_count(&self) -> usize {
        self.classes.iter().map(|c| c.entries.len()).sum()
    }

    /// Checks shape, class coverage and multiplier validity.
    pub fn validate(&self) -> Result<(), Error> {
        let map = ClassMap::new(self.n1, self.n2)?;
        if self.classes.len() != map.classes().len() {
            return Err(Error::DataIncomplete(format!(
                "{} classes supplied, grid has {}",
                self.classes.len(),
                map.classes().len()
            )));
        }
        let mut seen = vec![false; map.classes().len()];
        for c in &self.classes {
            let idx = map.index_of(c.rep).ok_or_else(|| {
                Error::Inconsistent(format!("({},{}) is not a canonical representative", c.rep.0, c.rep.1))
            })?;
            if seen[idx] {
                return Err(Error::Inconsistent(format!("class ({},{}) repeated", c.rep.0, c.rep.1)));
            }
            seen[idx] = true;
            let d = map.classes()[idx].big_d;
            if c.big_d != d {
                return Err(Error::Inconsistent(format!(
                    "class ({},{}) declares D={} but has D={d}",
                    c.rep.0, c.rep.1, c.big_d
                )));
            }
            if c.entries.is_empty() {
                return Err(Error::DataIncomplete(format!("class ({},{}) has no entries", c.rep.0, c.rep.1)));
            }
            for &(lam, v) in &c.entries {
                if lam == 0 || gcd(lam, d) != 1 {
                    return Err(Error::Inconsistent(format!(
                        "multiplier {lam} not a unit modulo {d} in class ({},{})",
                        c.rep.0, c.rep.1
                    )));
                }
                if !v.is_finite() {
                    return Err(Error::Inconsistent(format!("non-finite value in class ({},{})", c.rep.0, c.rep.1)));
                }
            }
        }
        Ok(())
    }
}

/// First `count` multipliers in `[1, D]` coprime to `D`.
pub fn leading_units(big_d: u64, count: usize) -> Vec<u64> {
    (1..=big_d)
        .filter(|&lam| gcd(lam, big_d) == 1)
        .take(count)
        .collect()
}

/// Samples `min(M, ⌈φ(D)/2⌉)` coefficients per class.
pub fn sample_minimal<R: Real>(x: &IntImage, m: usize, ctx: &PrecisionContext) -> Result<MinimalSpectrum<R>, Error> {
    sample_with_threshold(x, m, 0, ctx)
}

/// Minimal spectrum of a 1D signal, stored as a `1 × N` grid.
pub fn sample_minimal_1d<R: Real>(x: &[i64], m: usize, ctx: &PrecisionContext) -> Result<MinimalSpectrum<R>, Error> {
    sample_minimal(&Grid::from_vec(1, x.len(), x.to_vec())?, m, ctx)
}

/// Like [`sample_minimal`] but classes with `D < min_d` keep a single coefficient.
pub fn sample_with_threshold<R: Real>(
    x: &IntImage,
    m: usize,
    min_d: u64,
    ctx: &PrecisionContext,
) -> Result<MinimalSpectrum<R>, Error> {
    if m == 0 {
        return Err(Error::Domain("at least one coefficient per class is required".into()));
    }
    let (n1, n2) = (x.rows() as u64, x.cols() as u64);
    let map = ClassMap::new(n1, n2)?;
    let digits = ctx.digits() as usize;
    let mut tables: Vec<Option<RootTable<R>>> = Vec::new();
    let mut classes = Vec::with_capacity(map.classes().len());
    for c in map.classes() {
        let d = c.big_d;
        let sub = extract_subsignal(x, c.rep.0, c.rep.1)?;
        let phi = totient(d) as usize;
        let want = if d >= min_d { m } else { 1 };
        let count = want.min(phi.div_ceil(2)).max(1);
        if tables.len() <= d as usize {
            tables.resize_with(d as usize + 1, || None);
        }
        let table = tables[d as usize].get_or_insert_with(|| RootTable::new(d as usize));
        let entries = leading_units(d, count)
            .into_iter()
            .map(|lam| {
                let v = table.coefficient_int(&sub, lam);
                (
                    lam,
                    Complex::new(round_to_digits(v.re, digits), round_to_digits(v.im, digits)),
                )
            })
            .collect();
        classes.push(SampledClass {
            rep: c.rep,
            big_d: d,
            entries,
        });
    }
    Ok(MinimalSpectrum {
        n1,
        n2,
        digits: ctx.digits(),
        classes,
    })
}

/// Signal with `x̃_k ≠ 0` exactly when `gcd(k, N) = 1`.
pub fn amb1d_witness(n: u64) -> Result<Vec<i64>, Error> {
    if n == 0 {
        return Err(Error::Domain("length must be positive".into()));
    }
    let primes = prime_factors(n);
    let mut x = vec![0i64; n as usize];
    for mask in 0u32..(1 << primes.len()) {
        let mut idx = 0u64;
        for (t, &p) in primes.iter().enumerate() {
            if mask >> t & 1 == 1 {
                idx = (idx + n / p) % n;
            }
        }
        x[idx as usize] += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
    }
    Ok(x)
}

/// Image whose spectrum is nonzero exactly on the class of `(k, l)`.
pub fn amb2d_witness(n1: u64, n2: u64, k: u64, l: u64) -> Result<IntImage, Error> {
    let g = subsignal_geometry(n1, n2, k, l)?;
    let w = amb1d_witness(g.big_d)?;
    Ok(Grid::from_fn(n1 as usize, n2 as usize, |m, n| {
        w[g.slot(m as u64, n as u64)]
    }))
}

/// Two binary images whose spectra agree off the class of `(k, l)`.
pub fn binary_pair_witness(n1: u64, n2: u64, k: u64, l: u64) -> Result<(IntImage, IntImage), Error> {
    if k == 0 && l == 0 {
        return Err(Error::Domain("the (0,0) class is fixed by the image sum".into()));
    }
    let x = amb2d_witness(n1, n2, k, l)?;
    Ok((
        x.map(|&v| i64::from(v == 1)),
        x.map(|&v| i64::from(v == -1)),
    ))
}

/// Nullities of the divisor-coefficient system and of the decimation-plus-unit system.
pub fn searchspace_dims(n: u64) -> Result<(u64, u64), Error> {
    if n < 3 {
        return Err(Error::Domain(format!("length {n} below 3")));
    }
    let t = tau(n);
    let baseline = if n % 2 == 1 { n + 1 - 2 * t } else { n + 2 - 2 * t };
    Ok((baseline, totient(n) - 2))
}
