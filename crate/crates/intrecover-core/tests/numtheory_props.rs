use intrecover_core::numtheory::{divisors, factorize, gcd, prime_factors, tau, totient, unit_ball_volume};
use proptest::prelude::*;

#[test]
fn factorization_and_divisor_counts() {
    for n in 1..=10_000u64 {
        let f = factorize(n);
        assert_eq!(f.product(), n);
        let expected: u64 = f.pairs.iter().map(|&(_, e)| e as u64 + 1).product();
        assert_eq!(divisors(n).len() as u64, expected);
        assert_eq!(tau(n), expected);
    }
}

#[test]
fn totient_quotient_by_prime() {
    for n in 2..=5_000u64 {
        for p in prime_factors(n) {
            let (a, b) = (totient(n / p), totient(n));
            if n % (p * p) == 0 {
                assert_eq!(a * p, b, "n={n} p={p}");
            } else {
                assert_eq!(a * (p - 1), b, "n={n} p={p}");
            }
        }
    }
}

#[test]
fn ball_volume_recurrence() {
    for n in 2..=120u32 {
        let lhs = unit_ball_volume(n);
        let rhs = 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2);
        assert!(((lhs - rhs) / rhs).abs() < 1e-12, "n={n}");
    }
}

fn brute_totient(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

proptest! {
    #[test]
    fn totient_multiplicative(a in 1u64..=1000, b in 1u64..=1000) {
        prop_assume!(gcd(a, b) == 1);
        prop_assert_eq!(totient(a * b), totient(a) * totient(b));
    }

    #[test]
    fn totient_matches_count(n in 1u64..=3000) {
        prop_assert_eq!(totient(n), brute_totient(n));
    }

    #[test]
    fn divisors_sorted_and_exact(n in 1u64..=100_000) {
        let d = divisors(n);
        prop_assert!(d.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(d.iter().all(|&x| n % x == 0));
        prop_assert_eq!(d.len(), (1..=n).filter(|x| n % x == 0).count().min(d.len()));
    }
}
