//! Seeded workloads. Trial `i` draws from ChaCha stream `i` of the run seed, so
//! any trial can be regenerated on its own and trials can run in any order.

use intrecover_core::{Grid, IntImage};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `n` independent Binomial(`l`, `p`) entries.
pub fn binomial_signal(rng: &mut impl Rng, n: usize, l: u64, p: f64) -> Vec<i64> {
    let dist = Binomial::new(l, p).expect("p must lie in [0, 1]");
    (0..n).map(|_| dist.sample(rng) as i64).collect()
}

pub fn binomial_image(rng: &mut impl Rng, n1: usize, n2: usize, l: u64, p: f64) -> IntImage {
    Grid::from_vec(n1, n2, binomial_signal(rng, n1 * n2, l, p)).expect("length matches shape")
}

/// Uniform 0/1 matrix.
pub fn binary_image(rng: &mut impl Rng, n1: usize, n2: usize) -> IntImage {
    binomial_image(rng, n1, n2, 1, 0.5)
}

/// Binary `n × n` image laid out like a QR symbol: three 7×7 finder patterns
/// with separators, alternating timing rows, and seeded data modules elsewhere.
pub fn qr_like_image(n: usize, seed: u64) -> IntImage {
    assert!(n >= 21, "QR-like layout needs at least 21 modules");
    let mut rng = trial_rng(seed, 0);
    let finder = |r: usize, c: usize| -> Option<i64> {
        for (r0, c0) in [(0, 0), (0, n - 7), (n - 7, 0)] {
            let (dr, dc) = (r as i64 - r0 as i64, c as i64 - c0 as i64);
            if (-1..=7).contains(&dr) && (-1..=7).contains(&dc) {
                if !(0..7).contains(&dr) || !(0..7).contains(&dc) {
                    return Some(0);
                }
                let ring = dr.min(dc).min(6 - dr).min(6 - dc);
                return Some(i64::from(ring != 1));
            }
        }
        None
    };
    let mut img = Grid::filled(n, n, 0i64);
    for r in 0..n {
        for c in 0..n {
            img[(r, c)] = if let Some(v) = finder(r, c) {
                v
            } else if r == 6 || c == 6 {
                i64::from((r + c) % 2 == 0)
            } else {
                i64::from(rng.gen_bool(0.5))
            };
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = binomial_signal(&mut trial_rng(7, 3), 40, 10, 0.5);
        let b = binomial_signal(&mut trial_rng(7, 3), 40, 10, 0.5);
        let c = binomial_signal(&mut trial_rng(7, 4), 40, 10, 0.5);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|&v| (0..=10).contains(&v)));
    }

    #[test]
    fn qr_layout() {
        let img = qr_like_image(45, 1);
        assert!(img.data().iter().all(|&v| v == 0 || v == 1));
        for c in 0..7 {
            assert_eq!(img[(0, c)], 1);
            assert_eq!(img[(1, c)], i64::from(c == 0 || c == 6));
            assert_eq!(img[(7, c)], 0);
        }
        assert_eq!(img[(3, 3)], 1);
        assert_eq!(img[(3, 44 - 3)], 1);
        assert_eq!(img[(6, 8)], 1);
        assert_eq!(img[(6, 9)], 0);
        assert_eq!(img, qr_like_image(45, 1));
    }
}
