use intrecover_core::numtheory::gcd;
use intrecover_core::sampling::amb1d_witness;
use intrecover_core::transform::{decimate_freq, dft_1d_int, dft_2d_int, stack_freq, stack_time, PrecisionContext};
use intrecover_core::{Double2, Grid, Real};
use proptest::prelude::*;

fn signal(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..=50, 1..=max_len)
}

proptest! {
    #[test]
    fn parseval_1d(x in signal(64)) {
        let n = x.len() as f64;
        let spec = dft_1d_int::<f64>(&x);
        let lhs: f64 = spec.iter().map(|c| c.norm_sqr()).sum();
        let rhs = n * x.iter().map(|&v| (v * v) as f64).sum::<f64>();
        let tol = PrecisionContext::default().tolerance();
        prop_assert!((lhs - rhs).abs() <= tol * rhs.max(1.0));
    }

    #[test]
    fn parseval_2d(rows in 1usize..8, cols in 1usize..8, seed in any::<u64>()) {
        let x = Grid::from_fn(rows, cols, |m, n| ((seed >> ((m * cols + n) % 60)) & 7) as i64 - 3);
        let spec = dft_2d_int::<Double2>(&x);
        let lhs = spec.data().iter().fold(Double2::zero(), |acc, c| acc + c.norm_sqr());
        let rhs = (rows * cols) as f64 * x.data().iter().map(|&v| (v * v) as f64).sum::<f64>();
        let tol = PrecisionContext::new(30).unwrap().tolerance();
        prop_assert!((lhs - Double2::from_f64(rhs)).abs().to_f64() <= tol * rhs.max(1.0));
    }

    #[test]
    fn conjugate_symmetry(x in signal(48)) {
        let n = x.len();
        let spec = dft_1d_int::<f64>(&x);
        for k in 0..n {
            let a = spec[k];
            let b = spec[(n - k) % n].conj();
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn decimation_keeps_every_dth_coefficient(x in signal(36), d in 1usize..=6) {
        prop_assume!(x.len() % d == 0);
        let dec = decimate_freq(&x, d).unwrap();
        let full = dft_1d_int::<f64>(&x);
        let small = dft_1d_int::<f64>(&dec);
        let tol = PrecisionContext::default().tolerance() * 100.0;
        for (j, c) in small.iter().enumerate() {
            prop_assert!((*c - full[j * d]).abs() <= tol);
        }
    }

    #[test]
    fn stacking_spectra(x in signal(12), d in 1usize..=4) {
        let n = x.len();
        let spec = dft_1d_int::<f64>(&x);
        let t = dft_1d_int::<f64>(&stack_time(&x, d));
        for (k, c) in t.iter().enumerate() {
            let want = if k % d == 0 { spec[k / d].scale(d as f64) } else { intrecover_core::Complex::zero() };
            prop_assert!((*c - want).abs() < 1e-8);
        }
        let f = dft_1d_int::<f64>(&stack_freq(&x, d));
        for (k, c) in f.iter().enumerate() {
            prop_assert!((*c - spec[k % n].scale(d as f64)).abs() < 1e-8);
        }
    }
}

// Vanishing of one coefficient forces vanishing across its gcd class.
#[test]
fn vanishing_spreads_over_gcd_class() {
    let mut rng = 0x2545F4914F6CDD1Du64;
    let mut next = || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        rng
    };
    for n in 6..=36u64 {
        let mut signals: Vec<Vec<i64>> = (0..200)
            .map(|_| (0..n).map(|_| (next() % 7) as i64 - 3).collect())
            .collect();
        // structured signals with genuine zeros
        signals.push(amb1d_witness(n).unwrap());
        for d in intrecover_core::numtheory::divisors(n).into_iter().filter(|&d| d > 1 && d < n) {
            let base: Vec<i64> = (0..n / d).map(|_| (next() % 5) as i64 - 2).collect();
            signals.push(stack_time(&base, d as usize));
            signals.push(stack_freq(&base, d as usize));
        }
        for x in signals {
            let norm = x.iter().map(|&v| (v * v) as f64).sum::<f64>().sqrt();
            let spec = dft_1d_int::<f64>(&x);
            for k in 0..n {
                if spec[k as usize].abs() < 1e-8 * norm * n as f64 {
                    for k2 in 0..n {
                        if gcd(k2, n) == gcd(k, n) {
                            assert!(spec[k2 as usize].abs() < 1e-6 * norm * n as f64, "n={n} k={k} k'={k2}");
                        }
                    }
                }
            }
        }
    }
}
