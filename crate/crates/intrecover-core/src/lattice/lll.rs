//! LLL reduction over `i128` bases.
//!
//! The Gram matrix is kept exactly in 256-bit integers; Gram–Schmidt data live in the
//! working float type and are rebuilt from the exact Gram rows during size reduction.
//! All rows are rebuilt every [`REFRESH_SWAPS`] swaps.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use ethnum::I256;

use crate::real::{Double4, Real};
use crate::transform::PrecisionContext;
use crate::with_real;
use crate::Error;

/// Swaps between full Gram–Schmidt rebuilds.
pub const REFRESH_SWAPS: u64 = 64;

/// Counters from one reduction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LllStats {
    pub swaps: u64,
    pub size_reductions: u64,
    pub refreshes: u64,
}

/// Reduces `basis` in place with parameter `delta` at `digits` of working precision.
pub fn lll_reduce(basis: &mut [Vec<i128>], delta: f64, digits: u32) -> Result<LllStats, Error> {
    let ctx = PrecisionContext::new(digits)?;
    with_real!(ctx.tier(), R => lll_reduce_with::<R>(basis, delta))
}

fn decimal_digits<R: Real>() -> u32 {
    (R::BITS as f64 * core::f64::consts::LOG10_2) as u32
}

fn precision_error<R: Real>() -> Error {
    Error::Precision {
        required_digits: (2 * decimal_digits::<R>()).min(PrecisionContext::MAX_DIGITS),
    }
}

fn mul(a: i128, b: i128) -> I256 {
    I256::from(a).wrapping_mul(I256::from(b))
}

fn dot(a: &[i128], b: &[i128]) -> I256 {
    a.iter()
        .zip(b)
        .fold(I256::ZERO, |acc, (&x, &y)| acc.wrapping_add(mul(x, y)))
}

/// Exact Gram matrix of the rows of `basis`.
pub fn gram(basis: &[Vec<i128>]) -> Vec<Vec<I256>> {
    let d = basis.len();
    let mut g = vec![vec![I256::ZERO; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let v = dot(&basis[i], &basis[j]);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    g
}

struct State<'a, R> {
    b: &'a mut [Vec<i128>],
    g: Vec<Vec<I256>>,
    // r[i][j] = ⟨b_i, b*_j⟩ for j < i, r[i][i] = ‖b*_i‖²
    r: Vec<Vec<R>>,
    mu: Vec<Vec<R>>,
    stats: LllStats,
}

impl<R: Real> State<'_, R> {
    fn gso_row(&mut self, k: usize) -> Result<(), Error> {
        for j in 0..k {
            let mut acc = R::from_i256(self.g[k][j]);
            for i in 0..j {
                acc -= self.mu[j][i] * self.r[k][i];
            }
            self.r[k][j] = acc;
            self.mu[k][j] = acc / self.r[j][j];
        }
        let mut acc = R::from_i256(self.g[k][k]);
        for j in 0..k {
            acc -= self.mu[k][j] * self.r[k][j];
        }
        if !acc.is_finite() {
            return Err(precision_error::<R>());
        }
        self.r[k][k] = acc;
        Ok(())
    }

    fn check_nonzero(&self, k: usize) -> Result<(), Error> {
        if self.g[k][k] == I256::ZERO {
            Err(Error::Domain(format!("basis vector {k} is zero")))
        } else {
            Ok(())
        }
    }

    // b_k ← b_k − x·b_j with the exact Gram update
    fn subtract(&mut self, k: usize, j: usize, x: i128) -> Result<(), Error> {
        let overflow = || Error::Overflow(format!("basis entry overflow reducing row {k} by row {j}"));
        let (lo, hi) = self.b.split_at_mut(k);
        for (t, s) in hi[0].iter_mut().zip(&lo[j]) {
            *t = x.checked_mul(*s).and_then(|p| t.checked_sub(p)).ok_or_else(overflow)?;
        }
        let xi = I256::from(x);
        let gkk = self.g[k][k]
            .wrapping_sub(I256::from(2).wrapping_mul(xi).wrapping_mul(self.g[k][j]))
            .wrapping_add(xi.wrapping_mul(xi).wrapping_mul(self.g[j][j]));
        for i in 0..self.g.len() {
            if i != k {
                let v = self.g[k][i].wrapping_sub(xi.wrapping_mul(self.g[j][i]));
                self.g[k][i] = v;
                self.g[i][k] = v;
            }
        }
        self.g[k][k] = gkk;
        Ok(())
    }

    fn size_reduce(&mut self, k: usize) -> Result<(), Error> {
        let strict = R::from_f64(0.5 + libm::pow(2.0, -(R::BITS as f64) / 2.0));
        let relaxed = R::from_f64(0.51);
        for iter in 0..200 {
            self.gso_row(k)?;
            let eta = if iter < 8 { strict } else { relaxed };
            if (0..k).all(|j| self.mu[k][j].abs() <= eta) {
                return self.check_nonzero(k);
            }
            for j in (0..k).rev() {
                let x = self.mu[k][j].round();
                if x == R::zero() {
                    continue;
                }
                let xi = x.to_i128().ok_or_else(precision_error::<R>)?;
                self.subtract(k, j, xi)?;
                self.stats.size_reductions += 1;
                for i in 0..j {
                    let t = self.mu[j][i];
                    self.mu[k][i] -= x * t;
                }
                self.mu[k][j] -= x;
            }
        }
        Err(precision_error::<R>())
    }

    fn swap(&mut self, k: usize) {
        self.b.swap(k - 1, k);
        self.g.swap(k - 1, k);
        for row in self.g.iter_mut() {
            row.swap(k - 1, k);
        }
        self.stats.swaps += 1;
    }
}

/// Reduces `basis` in place using `R` for Gram–Schmidt arithmetic.
pub fn lll_reduce_with<R: Real>(basis: &mut [Vec<i128>], delta: f64) -> Result<LllStats, Error> {
    if !(delta > 0.25 && delta <= 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0.25, 1], got {delta}")));
    }
    let d = basis.len();
    if d == 0 {
        return Ok(LllStats::default());
    }
    let n = basis[0].len();
    if basis.iter().any(|v| v.len() != n) {
        return Err(Error::Domain("basis vectors differ in length".into()));
    }
    let max_swaps = 1_000_000u64.max(2000 * (d * d) as u64);
    let mut st = State {
        g: gram(basis),
        b: basis,
        r: vec![vec![R::zero(); d]; d],
        mu: vec![vec![R::zero(); d]; d],
        stats: LllStats::default(),
    };
    let delta_r = R::from_f64(delta);
    st.gso_row(0)?;
    st.check_nonzero(0)?;
    let mut k = 1;
    while k < d {
        st.size_reduce(k)?;
        let m = st.mu[k][k - 1];
        let prev = st.r[k - 1][k - 1];
        if delta_r * prev > st.r[k][k] + m * m * prev {
            st.swap(k);
            if st.stats.swaps > max_swaps {
                return Err(precision_error::<R>());
            }
            k = (k - 1).max(1);
            if st.stats.swaps % REFRESH_SWAPS == 0 {
                st.stats.refreshes += 1;
                for i in 0..k {
                    st.gso_row(i)?;
                }
            } else if k == 1 {
                st.gso_row(0)?;
            }
            st.check_nonzero(0)?;
        } else {
            k += 1;
        }
    }
    Ok(st.stats)
}

/// Worst violations of the reduction conditions, measured at high precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReductionCheck {
    /// Largest `|μ_ij|`, `j < i`.
    pub max_mu: f64,
    /// Smallest `(‖b*_k‖² + μ²‖b*_{k−1}‖²) / (δ‖b*_{k−1}‖²)`; at least one when Lovász holds.
    pub lovasz_ratio: f64,
}

impl ReductionCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_mu <= 0.5 + tol && self.lovasz_ratio >= 1.0 - tol
    }
}

/// Measures size reduction and the Lovász condition of `basis`.
pub fn check_reduced(basis: &[Vec<i128>], delta: f64) -> ReductionCheck {
    type R = Double4;
    let g = gram(basis);
    let d = basis.len();
    let mut r = vec![vec![R::zero(); d]; d];
    let mut mu = vec![vec![R::zero(); d]; d];
    let mut out = ReductionCheck {
        max_mu: 0.0,
        lovasz_ratio: f64::INFINITY,
    };
    for k in 0..d {
        for j in 0..k {
            let mut acc = R::from_i256(g[k][j]);
            for i in 0..j {
                acc -= mu[j][i] * r[k][i];
            }
            r[k][j] = acc;
            mu[k][j] = acc / r[j][j];
            out.max_mu = out.max_mu.max(mu[k][j].abs().to_f64());
        }
        let mut acc = R::from_i256(g[k][k]);
        for j in 0..k {
            acc -= mu[k][j] * r[k][j];
        }
        r[k][k] = acc;
        if k > 0 {
            let m = mu[k][k - 1];
            let prev = r[k - 1][k - 1];
            let ratio = (r[k][k] + m * m * prev) / (R::from_f64(delta) * prev);
            out.lovasz_ratio = out.lovasz_ratio.min(ratio.to_f64());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn norm2(v: &[i128]) -> f64 {
        v.iter().map(|&x| (x as f64) * (x as f64)).sum()
    }

    #[test]
    fn identity_unchanged() {
        let mut b: Vec<Vec<i128>> = (0..5)
            .map(|i| (0..5).map(|j| (i == j) as i128).collect())
            .collect();
        let orig = b.clone();
        let stats = lll_reduce(&mut b, 0.9972, 16).unwrap();
        assert_eq!(b, orig);
        assert_eq!(stats.swaps, 0);
    }

    #[test]
    fn two_dimensional_example() {
        let mut b = vec![vec![1i128, 0], vec![10, 1]];
        lll_reduce(&mut b, 0.9972, 16).unwrap();
        let bound = 4.0 / (4.0 * 0.9972 - 1.0);
        assert!(norm2(&b[0]) <= bound);
        assert!(check_reduced(&b, 0.9972).holds(1e-9));
    }

    #[test]
    fn random_bases_all_tiers() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for digits in [16, 30, 40, 50] {
            for _ in 0..4 {
                let d = 20;
                let mut b: Vec<Vec<i128>> = (0..d)
                    .map(|_| (0..d).map(|_| rng.gen_range(-1000..=1000)).collect())
                    .collect();
                lll_reduce(&mut b, 0.9972, digits).unwrap();
                let c = check_reduced(&b, 0.9972);
                assert!(c.holds(1e-9), "{c:?}");
            }
        }
    }

    #[test]
    fn knapsack_style_basis() {
        // rows e_i | w_i·s with a hidden subset sum of zero
        let w = [104729i128, 130363, 224737, 350377, 479909, 611953, 746773, 882377];
        let s = 1_000_000_000i128;
        let n = w.len();
        let mut b: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                let mut v = vec![0i128; n + 1];
                v[i] = 1;
                v[n] = w[i] * s;
                v
            })
            .collect();
        lll_reduce(&mut b, 0.99, 16).unwrap();
        assert!(check_reduced(&b, 0.99).holds(1e-9));
        assert!(b.iter().all(|v| v[n] % s == 0));
        assert!(b.iter().any(|v| v[n] == 0));
    }

    #[test]
    fn rejects_dependent_and_bad_delta() {
        let mut b = vec![vec![1i128, 2], vec![2, 4]];
        assert!(lll_reduce(&mut b, 0.99, 16).is_err());
        let mut b = vec![vec![1i128, 0]];
        assert!(lll_reduce(&mut b, 0.2, 16).is_err());
        assert!(lll_reduce(&mut b, 1.0, 6).is_err());
    }
}
