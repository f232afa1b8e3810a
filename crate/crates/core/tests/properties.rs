//! Analytic invariants of the closed forms, checked against independent
//! oracles: composite-Simpson quadrature, finite differences, series sums,
//! and exhaustive enumeration.

use blackbody_digits::distributions::*;

/// Composite Simpson quadrature with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

fn frac_vec(bits: &[u8]) -> DigitVector {
    DigitVector::new(
        DigitKind::Fractional,
        bits.iter().map(|&b| Bit::from_bool(b == 1)).collect(),
    )
    .unwrap()
}

/// Fractional digit vector from the low bits of `pattern` (depth n).
fn frac_vec_from_pattern(pattern: u64, n: usize) -> DigitVector {
    let bits = (0..n)
        .map(|i| Bit::from_bool((pattern >> (n - 1 - i)) & 1 == 1))
        .collect();
    DigitVector::new(DigitKind::Fractional, bits).unwrap()
}

#[test]
fn eta_pdf_normalizes() {
    for &beta in &[0.01, 0.1, 0.37, 1.0, 5.0, 20.0] {
        // Truncate where the tail drops below 1e-26 of the mass.
        let y_max = 60.0 / beta;
        let integral = simpson(|y| eta_pdf(y, beta).unwrap(), 0.0, y_max, 200_000);
        assert!((integral - 1.0).abs() < 1e-9, "beta = {beta}: {integral}");
    }
}

#[test]
fn zeta_pdf_normalizes() {
    for &beta in &[0.01, 0.1, 1.0, 5.0, 7.3, 20.0] {
        let integral = simpson(|z| zeta_pdf(z, beta).unwrap(), 0.0, 1.0, 20_000);
        assert!((integral - 1.0).abs() < 1e-9, "beta = {beta}: {integral}");
    }
}

#[test]
fn f_a_normalizes_both_signs() {
    for &a in &[-20.0, -5.0, -1.0, -0.1, -0.01, 0.01, 0.1, 1.0, 4.0, 5.0, 20.0] {
        let integral = simpson(|x| f_a(x, a).unwrap(), 0.0, 1.0, 20_000);
        assert!((integral - 1.0).abs() < 1e-9, "a = {a}: {integral}");
    }
}

#[test]
fn eta_cdf_derivative_matches_pdf() {
    let beta = 2.0;
    let h = 1e-6;
    for &y in &[0.1, 1.0, 5.0] {
        let deriv = (eta_cdf(y + h, beta).unwrap() - eta_cdf(y - h, beta).unwrap()) / (2.0 * h);
        let pdf = eta_pdf(y, beta).unwrap();
        assert!((deriv - pdf).abs() < 1e-6, "y = {y}: {deriv} vs {pdf}");
    }
}

#[test]
fn zeta_cdf_derivative_matches_pdf() {
    let h = 1e-6;
    for &beta in &[0.5, 2.0, 7.0] {
        for &z in &[0.1, 0.5, 0.9] {
            let deriv =
                (zeta_cdf(z + h, beta).unwrap() - zeta_cdf(z - h, beta).unwrap()) / (2.0 * h);
            let pdf = zeta_pdf(z, beta).unwrap();
            assert!((deriv - pdf).abs() < 1e-6, "beta = {beta}, z = {z}");
        }
    }
}

#[test]
fn zeta_mean_matches_quadrature() {
    let by_quadrature = simpson(|z| z * zeta_pdf(z, 1.0).unwrap(), 0.0, 1.0, 20_000);
    let closed = zeta_mean(1.0).unwrap();
    assert!((by_quadrature - closed).abs() < 1e-12, "{by_quadrature} vs {closed}");
}

#[test]
fn planck_factor_identity() {
    // zeta_mean + mean_occupation = 1/beta across the full working range.
    let (lo, hi) = (1e-4f64, 50.0f64);
    for i in 0..1000 {
        let t = i as f64 / 999.0;
        let beta = (lo.ln() + t * (hi.ln() - lo.ln())).exp();
        let lhs = zeta_mean(beta).unwrap() + mean_occupation(beta).unwrap();
        let rhs = 1.0 / beta;
        assert!(
            (lhs - rhs).abs() <= 1e-14 * rhs,
            "beta = {beta}: {lhs} vs {rhs}"
        );
    }
    assert_eq!(zeta_mean(0.0).unwrap(), 0.5);
}

#[test]
fn digit_joint_integral_matches_quadrature() {
    // P(eps_1 = 0) under f_{-1} is the integral over [0, 1/2).
    let v = frac_vec(&[0]);
    let closed = digit_joint_integral(&v, -1.0);
    let by_quadrature = simpson(|x| f_a(x, -1.0).unwrap(), 0.0, 0.5, 20_000);
    assert!((closed - by_quadrature).abs() < 1e-12);
}

#[test]
fn digit_joint_matches_quadrature_deeper() {
    // delta = (1,0,1): interval [0.625, 0.75).
    let v = frac_vec(&[1, 0, 1]);
    for &a in &[-3.0, 0.7] {
        let closed = digit_joint_closed(&v, a);
        let by_quadrature = simpson(|x| f_a(x, a).unwrap(), 0.625, 0.75, 20_000);
        assert!(
            (closed - by_quadrature).abs() < 1e-12,
            "a = {a}: {closed} vs {by_quadrature}"
        );
    }
}

#[test]
fn joint_probabilities_sum_to_one() {
    for &a in &[-5.0, -1.0, 0.0, 2.0] {
        for n in 1..=8 {
            let total: f64 = (0u64..1 << n)
                .map(|pattern| digit_joint_closed(&frac_vec_from_pattern(pattern, n), a))
                .sum();
            assert!((total - 1.0).abs() < 1e-13, "a = {a}, n = {n}: {total}");
        }
    }
}

#[test]
fn random_joint_routes_and_marginal_product_agree() {
    // Fixed linear-congruential scan over (pattern, depth, a): the three
    // expressions for the dyadic-interval mass must coincide.
    let mut state = 0x243F6A8885A308D3u64;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        state
    };
    for _ in 0..1000 {
        let n = 1 + (next() % 20) as usize;
        let pattern = next() & ((1u64 << n) - 1);
        // a in [-10, 10], zero excluded.
        let mut a = (next() >> 11) as f64 / (1u64 << 53) as f64 * 20.0 - 10.0;
        if a == 0.0 {
            a = 0.5;
        }
        let v = frac_vec_from_pattern(pattern, n);
        let closed = digit_joint_closed(&v, a);
        let integral = digit_joint_integral(&v, a);
        let product: f64 = v
            .bits()
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let (p0, p1) = digit_prob(i as u32 + 1, a).unwrap();
                if b.is_one() {
                    p1
                } else {
                    p0
                }
            })
            .product();
        assert!(
            (closed - integral).abs() <= 1e-14 * closed.abs(),
            "closed vs integral at n = {n}, a = {a}"
        );
        assert!(
            (closed - product).abs() <= 1e-12 * closed.abs().max(1e-300),
            "closed vs product at n = {n}, a = {a}: {closed} vs {product}"
        );
    }
}

#[test]
fn telescoping_product_identity() {
    // prod_{k=1..n} (1 + e^(a/2^k)) = (e^a - 1)/(e^(a/2^n) - 1).
    for j in 0..100 {
        let a = -10.0 + 20.0 * j as f64 / 99.0;
        if a == 0.0 {
            continue;
        }
        for n in 1..=30 {
            let mut product = 1.0;
            for k in 1..=n {
                product *= 1.0 + (a / 2f64.powi(k)).exp();
            }
            let closed = a.exp_m1() / (a / 2f64.powi(n)).exp_m1();
            assert!(
                (product - closed).abs() <= 1e-12 * closed,
                "a = {a}, n = {n}: {product} vs {closed}"
            );
        }
    }
}

#[test]
fn binary_photon_product_reconstructs_pmf() {
    for &beta in &[0.3, 1.0, 3.0] {
        let n_bar = mean_occupation(beta).unwrap();
        for n in 0u64..=100 {
            let levels = 64 - (n + 1).leading_zeros() + 40;
            let mut product = 1.0;
            for s in 0..=levels {
                let (p0, p1) = binary_photon_prob(s, beta).unwrap();
                product *= if n >> s & 1 == 1 { p1 } else { p0 };
            }
            let pmf = planck_bose_pmf(n, n_bar).unwrap();
            assert!(
                (product - pmf).abs() <= 1e-10 * pmf,
                "beta = {beta}, n = {n}: {product} vs {pmf}"
            );
        }
    }
}

#[test]
fn digit_marginal_means_telescope_to_zeta_mean() {
    for &beta in &[0.2, 1.0, 1.7, 5.0, 20.0] {
        let total: f64 = (1..=60)
            .map(|k| 2f64.powi(-k) * digit_prob(k as u32, -beta).unwrap().1)
            .sum();
        let mean = zeta_mean(beta).unwrap();
        assert!((total - mean).abs() < 1e-12, "beta = {beta}: {total} vs {mean}");
    }
}

#[test]
fn rademacher_agrees_with_sine_sign() {
    // r_k(x) = sign(sin(2^k pi x)) away from the sine's zeros. Keep a margin
    // so the floating sine's own error cannot flip the sign.
    let mut state = 0x9E3779B97F4A7C15u64;
    let mut next_x = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut checked = 0u64;
    for _ in 0..10_000 {
        let x = next_x();
        for k in 1..=20 {
            let s = (2f64.powi(k) * std::f64::consts::PI * x).sin();
            if s.abs() < 1e-9 {
                continue;
            }
            checked += 1;
            let r = rademacher(x, k as u32).unwrap();
            assert_eq!(r, if s > 0.0 { 1 } else { -1 }, "x = {x}, k = {k}");
        }
    }
    assert!(checked > 190_000);
}

#[test]
fn entropy_closed_form_matches_direct_sum() {
    for &n_bar in &[0.1, 1.0, 10.0] {
        let mut direct = 0.0;
        let mut cumulative = 0.0;
        let mut n = 0u64;
        while cumulative < 1.0 - 1e-15 {
            let p = planck_bose_pmf(n, n_bar).unwrap();
            if p > 0.0 {
                direct -= p * p.ln();
            }
            cumulative += p;
            n += 1;
            assert!(n < 10_000_000, "series did not converge");
        }
        let closed = xi_entropy(n_bar).unwrap();
        assert!(
            (closed - direct).abs() < 1e-10,
            "n_bar = {n_bar}: {closed} vs {direct}"
        );
    }
}

#[test]
fn zero_point_case_is_exact() {
    for k in 1..=64 {
        assert_eq!(digit_prob(k, 0.0).unwrap(), (0.5, 0.5));
    }
    for &x in &[0.0, 0.25, 0.77, 1.0] {
        assert_eq!(f_a(x, 0.0).unwrap(), 1.0);
    }
    assert_eq!(zeta_mean(0.0).unwrap(), 0.5);
}

mod random_properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn fraction_digits_round_trip(x in 0.0f64..1.0, depth in 1usize..=53) {
            let v = DigitVector::from_fraction(x, depth).unwrap();
            let back = v.fractional_value();
            // Truncation error is below one trailing weight.
            prop_assert!(back <= x && x - back < 2f64.powi(-(depth as i32)));
            // Each stored digit matches the positional extractor.
            for (i, b) in v.bits().iter().enumerate() {
                prop_assert_eq!(*b, digit_of(x, i as u32 + 1).unwrap());
            }
        }

        #[test]
        fn full_depth_extraction_is_lossless(x in 0.0f64..1.0) {
            // 53 digits suffice for any f64 in [0.5, 1); deeper values need
            // more, so extract relative to the leading bit.
            let v = DigitVector::from_fraction(x, 60).unwrap();
            let back = v.fractional_value();
            prop_assert!((x - back).abs() <= 2f64.powi(-60));
        }

        #[test]
        fn integer_digits_round_trip(m in 0u64..1_000_000) {
            let v = DigitVector::from_integer(m, 64).unwrap();
            prop_assert_eq!(v.integer_value(), m);
        }

        #[test]
        fn joint_routes_agree_everywhere(pattern in 0u64..1024, n in 1usize..=10, a in -10.0f64..10.0) {
            prop_assume!(a != 0.0);
            let v = frac_vec_from_pattern(pattern & ((1 << n) - 1), n);
            let c = digit_joint_closed(&v, a);
            let i = digit_joint_integral(&v, a);
            prop_assert!((c - i).abs() <= 1e-14 * c.abs());
        }

        #[test]
        fn zeta_cdf_is_monotone(beta in 1e-3f64..30.0, z1 in 0.0f64..1.0, z2 in 0.0f64..1.0) {
            let (lo, hi) = if z1 <= z2 { (z1, z2) } else { (z2, z1) };
            let c_lo = zeta_cdf(lo, beta).unwrap();
            let c_hi = zeta_cdf(hi, beta).unwrap();
            prop_assert!(c_lo <= c_hi);
            prop_assert!((0.0..=1.0).contains(&c_lo));
        }

        #[test]
        fn pmf_tail_sums_to_one(beta in 0.05f64..5.0) {
            let n_bar = mean_occupation(beta).unwrap();
            // Truncate once the geometric tail is negligible.
            let cutoff = (200.0 / beta).ceil() as u64;
            let total: f64 = (0..=cutoff).map(|n| planck_bose_pmf(n, n_bar).unwrap()).sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
        }

        #[test]
        fn zeta_pdf_equals_f_minus_beta(beta in 1e-3f64..30.0, z in 0.0f64..1.0) {
            prop_assert_eq!(zeta_pdf(z, beta).unwrap(), f_a(z, -beta).unwrap());
        }
    }
}
