//! Penalty-parameter heuristics: the `K` estimate, `γ` bound, `β₁` and `β₂`.

use crate::numtheory::ln_unit_ball_volume;

/// Expected `‖x − x̄‖₂` bound `√((Φ−2M)·scale·L·p(1−p))`; zero when `Φ ≤ 2M`.
pub fn estimate_k(phi: u64, m: u64, l: u64, p: f64, scale: f64) -> f64 {
    if phi <= 2 * m {
        return 0.0;
    }
    libm::sqrt((phi - 2 * m) as f64 * scale * l as f64 * p * (1.0 - p))
}

/// Largest `|γ|` a short lattice vector can carry, `⌊√(K²/β₀² + 1)⌋ ≥ 1`.
pub fn gamma_max(k: f64, beta0: f64) -> u64 {
    let g = libm::floor(libm::sqrt(k * k / (beta0 * beta0) + 1.0));
    if g.is_finite() && g >= 1.0 {
        g as u64
    } else {
        1
    }
}

/// LLL approximation factor `(4/(4δ−1))^{dim/2}`.
pub fn lll_factor(delta: f64, dim: u64) -> f64 {
    libm::pow(4.0 / (4.0 * delta - 1.0), dim as f64 / 2.0)
}

/// Smallest `β₁` for which the first LLL vector honours the decimation block.
pub fn beta1_min(k: f64, beta0: f64, big_d: u64, delta: f64) -> f64 {
    lll_factor(delta, big_d) * libm::sqrt(k * k + beta0 * beta0)
}

// ln of (Φ+1)V_Φ / (2Φ V_{Φ−1})
fn ln_slab(phi: f64) -> f64 {
    libm::log((phi + 1.0) / (2.0 * phi)) + ln_unit_ball_volume(phi) - ln_unit_ball_volume(phi - 1.0)
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

fn ln_zeta_partial(m: u64, gmax: u64) -> f64 {
    let s: f64 = (1..=gmax).map(|g| libm::pow(g as f64, -(m as f64))).sum();
    libm::log(s)
}

// ln of the two numerator terms: γ = 0 and Σ_{γ≥1}
fn ln_terms(phi: u64, m: u64, k: f64, beta0: f64) -> (f64, f64) {
    let (pf, mf) = (phi as f64, m as f64);
    let lv = ln_unit_ball_volume(pf);
    let t0 = libm::log(0.5) + lv + 0.5 * (pf + mf) * libm::log(k * k + beta0 * beta0) + mf * ln_slab(pf);
    let t1 = if k > 0.0 {
        lv + (pf + mf) * libm::log(k) + ln_zeta_partial(m, gamma_max(k, beta0))
    } else {
        f64::NEG_INFINITY
    };
    (t0, t1)
}

/// `β₂` at which the expected count of spurious short vectors equals two.
pub fn estimate_beta2(phi: u64, m: u64, k: f64, beta0: f64) -> f64 {
    assert!(phi >= 1 && m >= 1, "estimate_beta2 needs Φ ≥ 1 and M ≥ 1");
    if phi <= 2 * m && k == 0.0 {
        return 1.0;
    }
    let (t0, t1) = ln_terms(phi, m, k, beta0);
    libm::exp(log_add(t0, t1) / (2.0 * m as f64))
}

/// Expected number of lattice vectors with multiplier `γ` inside the target ball.
pub fn rho(beta2: f64, gamma: u64, phi: u64, m: u64, k: f64, beta0: f64) -> f64 {
    let (pf, mf) = (phi as f64, m as f64);
    let lv = ln_unit_ball_volume(pf);
    let ln = if gamma == 0 {
        lv + 0.5 * (pf + mf) * libm::log(k * k + beta0 * beta0) + mf * (ln_slab(pf) - 2.0 * libm::log(beta2))
    } else {
        if k == 0.0 {
            return 0.0;
        }
        lv + pf * libm::log(k) + mf * (libm::log(k) - libm::log(gamma as f64) - 2.0 * libm::log(beta2))
    };
    libm::exp(ln)
}

/// `ρ(β₂, 0) + 2·Σ_{γ=1}^{γmax} ρ(β₂, γ)`.
pub fn rho_total(beta2: f64, phi: u64, m: u64, k: f64, beta0: f64) -> f64 {
    let mut total = rho(beta2, 0, phi, m, k, beta0);
    for g in 1..=gamma_max(k, beta0) {
        total += 2.0 * rho(beta2, g, phi, m, k, beta0);
    }
    total
}

/// Digits preserved after scaling, `⌈log₁₀(β₂β₃)⌉`.
pub fn recommended_digits(beta2: f64, beta3: f64) -> u32 {
    let v = libm::ceil(libm::log10(beta2 * beta3));
    if v.is_finite() && v > 0.0 {
        v as u32
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::totient;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn top_level(n: u64, m: u64, l: u64) -> f64 {
        let phi = totient(n);
        estimate_beta2(phi, m, estimate_k(phi, m, l, 0.5, 1.0), 0.1)
    }

    #[test]
    fn k_examples() {
        assert_eq!(estimate_k(2, 1, 5, 0.5, 1.0), 0.0);
        assert!((estimate_k(8, 1, 30, 0.5, 1.0) - 45f64.sqrt()).abs() < 1e-12);
        assert!((estimate_k(totient(15), 1, 1, 0.5, 60.0) - 90f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_max(0.05, 0.1), 1);
        assert_eq!(gamma_max(76f64.sqrt(), 0.1), 87);
        assert_eq!(gamma_max(0.0, 0.1), 1);
    }

    #[test]
    fn beta1_examples() {
        assert!((beta1_min(0.0, 0.1, 2, 1.0) - 0.4 / 3.0).abs() < 1e-12);
        let k = 45f64.sqrt();
        let expect = libm::pow(4.0 / 2.9888, 15.0) * (k * k + 0.01f64).sqrt();
        assert!(rel(beta1_min(k, 0.1, 30, 0.9972), expect) < 1e-12);
        assert!(beta1_min(3.0, 0.1, 7, 0.99) > (9.01f64).sqrt());
    }

    #[test]
    fn beta2_against_published_table() {
        for (n, m, want) in [
            (19, 1, 5.69e8), (19, 2, 2.28e4), (19, 3, 8.35e2),
            (24, 1, 1.45e4), (24, 2, 9.09e1), (24, 3, 1.34e1),
            (30, 1, 2.42e4), (30, 2, 1.20e2), (30, 3, 1.65e1),
            (31, 1, 1.44e16), (31, 2, 1.32e8), (31, 3, 3.10e5),
            (32, 1, 5.85e8), (32, 2, 2.38e4), (32, 3, 8.70e2),
            (39, 1, 3.95e13), (39, 2, 6.82e6), (39, 3, 4.22e4),
            (45, 1, 9.72e13), (45, 2, 1.09e7), (45, 3, 5.82e4),
            (47, 1, 6.17e26), (47, 2, 3.02e13), (47, 3, 1.27e9),
            (48, 1, 3.34e9), (48, 2, 5.92e4), (48, 3, 1.65e3),
            (49, 1, 4.79e24), (49, 2, 2.65e12), (49, 3, 2.49e8),
            (50, 1, 8.70e11), (50, 2, 1.00e6), (50, 3, 1.16e4),
            (60, 1, 8.70e9), (60, 2, 9.79e4), (60, 3, 2.35e3),
            (90, 1, 7.61e15), (90, 2, 1.03e8), (90, 3, 2.77e5),
        ] {
            let got = top_level(n, m, n);
            assert!(rel(got, want) < 0.05, "N={n} M={m}: {got:e} vs {want:e}");
        }
        assert!(rel(top_level(59, 1, 1), 9.12e8) < 0.05);
        assert!(rel(top_level(60, 1, 1), 1.93e2) < 0.05);
    }

    #[test]
    fn beta2_all_data_known() {
        assert_eq!(estimate_beta2(2, 1, 0.0, 0.1), 1.0);
        assert_eq!(top_level(6, 1, 1), 1.0);
    }

    #[test]
    fn rho_total_is_two_at_estimate() {
        for (phi, m, k) in [(18u64, 1u64, 13.0), (8, 1, 45f64.sqrt()), (30, 3, 4.2), (4, 2, 0.0), (16, 2, 5.0)] {
            if phi <= 2 * m && k == 0.0 {
                continue;
            }
            let b = estimate_beta2(phi, m, k, 0.1);
            assert!(rel(rho_total(b, phi, m, k, 0.1), 2.0) < 1e-6, "phi={phi} m={m}");
        }
    }

    #[test]
    fn rho_decreasing_and_ratio() {
        let mut prev = f64::INFINITY;
        for i in 0..=60 {
            let b = libm::pow(10.0, i as f64 / 10.0);
            let r = rho_total(b, 18, 1, 13.0, 0.1);
            assert!(r < prev);
            prev = r;
        }
        for g in 1..6u64 {
            let ratio = rho(50.0, g, 18, 2, 9.0, 0.1) / rho(50.0, 1, 18, 2, 9.0, 0.1);
            assert!(rel(ratio, libm::pow(g as f64, -2.0)) < 1e-12);
        }
    }

    #[test]
    fn beta2_nonincreasing_in_m() {
        for n in 19..=90u64 {
            let b: alloc::vec::Vec<f64> = (1..=3).map(|m| top_level(n, m, n)).collect();
            assert!(b[1] <= b[0] * (1.0 + 1e-12) && b[2] <= b[1] * (1.0 + 1e-12), "N={n}: {b:?}");
        }
    }

    #[test]
    fn digits_rule() {
        assert_eq!(recommended_digits(1e14, 100.0), 16);
        assert_eq!(recommended_digits(5.69e8, 100.0), 11);
    }
}
