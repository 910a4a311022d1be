//! Divisors, totients and related integer helpers.

use alloc::vec::Vec;

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization {
    pub pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    /// Number of distinct primes.
    pub fn omega(&self) -> usize {
        self.pairs.len()
    }

    pub fn product(&self) -> u64 {
        self.pairs.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Factorizes `n ≥ 1` by trial division over a 2·3 wheel.
pub fn factorize(mut n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut pairs = Vec::new();
    for p in [2u64, 3] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    }
    let mut p = 5u64;
    let mut step = 2;
    while p <= n / p {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
        p += step;
        step = 6 - step;
    }
    if n > 1 {
        pairs.push((n, 1));
    }
    Factorization { pairs }
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(n: u64) -> Vec<u64> {
    factorize(n).primes().collect()
}

/// All positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let f = factorize(n);
    let mut out = alloc::vec![1u64];
    for &(p, e) in &f.pairs {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Number of divisors τ(n).
pub fn tau(n: u64) -> u64 {
    factorize(n).pairs.iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Euler's totient φ(n).
pub fn totient(n: u64) -> u64 {
    let mut r = n;
    for p in factorize(n).primes() {
        r = r / p * (p - 1);
    }
    r
}

/// Residues in `[1, n]` coprime to `n`, ascending (`[1]` for `n = 1`).
pub fn units(n: u64) -> Vec<u64> {
    (1..=n).filter(|&k| gcd(k, n) == 1).collect()
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Natural log of the volume of the unit ball in `n` dimensions.
pub fn ln_unit_ball_volume(n: f64) -> f64 {
    0.5 * n * libm::log(core::f64::consts::PI) - libm::lgamma(0.5 * n + 1.0)
}

/// Volume of the unit ball in `n` dimensions, `π^{n/2}/Γ(n/2+1)`.
pub fn unit_ball_volume(n: u32) -> f64 {
    libm::exp(ln_unit_ball_volume(n as f64))
}
