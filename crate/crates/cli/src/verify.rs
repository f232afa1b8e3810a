//! The verification suite behind `bbdigits verify`.
//!
//! Two layers: machine-precision identity checks that need no randomness,
//! and seeded Monte Carlo checks that compare every sampler against its
//! closed-form law. Each check becomes one `TestReport`; `passed` is always
//! `statistic < threshold`, so a report is self-contained evidence.

use std::collections::BTreeMap;

use blackbody_digits::distributions::*;
use blackbody_digits::samplers::*;
use blackbody_digits::stats::*;

fn meta(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

/// Identity checks at machine precision. No sampling, sub-second runtime.
pub fn exact_reports() -> Vec<TestReport> {
    vec![
        joint_closed_vs_integral(),
        telescoping_product(),
        mean_energy_split(),
        binary_photon_pmf(),
        spectral_density_identity(),
        classical_limit_ratio(),
        occupation_entropy(),
        digit_round_trip(),
    ]
}

/// All fractional digit vectors of the given depth, every joint-probability
/// route compared: closed form vs the density integral.
fn joint_closed_vs_integral() -> TestReport {
    let scales = [-10.0, -1.0, -0.01, 0.01, 1.0, 10.0];
    let mut max_rel = 0.0f64;
    let mut cases = 0usize;
    for depth in 1..=10usize {
        for pattern in 0..1u32 << depth {
            let bits: Vec<Bit> = (0..depth)
                .map(|i| Bit::from_bool(pattern >> (depth - 1 - i) & 1 == 1))
                .collect();
            let delta = DigitVector::new(DigitKind::Fractional, bits).unwrap();
            for &a in &scales {
                let closed = digit_joint_closed(&delta, a);
                let integral = digit_joint_integral(&delta, a);
                max_rel = max_rel.max(rel_err(integral, closed));
                cases += 1;
            }
        }
    }
    TestReport::from_statistic(
        "joint-closed-vs-integral",
        max_rel,
        1e-14,
        cases,
        meta(&[("depths", "1..=10".into()), ("statistic_kind", "max relative error".into())]),
    )
}

fn telescoping_product() -> TestReport {
    let mut max_rel = 0.0f64;
    let mut cases = 0usize;
    for j in 0..100 {
        let a = -10.0 + 20.0 * j as f64 / 99.0;
        let mut product = 1.0;
        for n in 1..=30i32 {
            product *= 1.0 + (a / 2f64.powi(n)).exp();
            let closed = a.exp_m1() / (a / 2f64.powi(n)).exp_m1();
            max_rel = max_rel.max(rel_err(product, closed));
            cases += 1;
        }
    }
    TestReport::from_statistic(
        "telescoping-product",
        max_rel,
        1e-12,
        cases,
        meta(&[("statistic_kind", "max relative error".into())]),
    )
}

/// zeta_mean + mean_occupation must reproduce the full exponential mean 1/beta,
/// and the beta -> 0 limit of the fractional mean is exactly one half.
fn mean_energy_split() -> TestReport {
    let mut max_rel = 0.0f64;
    for beta in log_spaced(1e-4, 50.0, 1000) {
        let total = zeta_mean(beta).unwrap() + mean_occupation(beta).unwrap();
        max_rel = max_rel.max(rel_err(total, 1.0 / beta));
    }
    let half_exact = zeta_mean(0.0).unwrap() == 0.5;
    let statistic = if half_exact { max_rel } else { f64::INFINITY };
    TestReport::from_statistic(
        "mean-energy-split",
        statistic,
        1e-13,
        1001,
        meta(&[
            ("zeta_mean_at_zero", if half_exact { "exactly 0.5" } else { "inexact" }.into()),
            ("statistic_kind", "max relative error".into()),
        ]),
    )
}

/// Product of per-level occupation marginals vs the occupation pmf.
fn binary_photon_pmf() -> TestReport {
    let mut max_rel = 0.0f64;
    let mut cases = 0usize;
    for &beta in &[0.3, 1.0, 3.0] {
        let n_bar = mean_occupation(beta).unwrap();
        for n in 0..=100u64 {
            let levels = 64 - (n + 1).leading_zeros() + 40;
            let mut product = 1.0;
            for s in 0..levels {
                let (p0, p1) = binary_photon_prob(s, beta).unwrap();
                product *= if n >> s & 1 == 1 { p1 } else { p0 };
            }
            max_rel = max_rel.max(rel_err(product, planck_bose_pmf(n, n_bar).unwrap()));
            cases += 1;
        }
    }
    TestReport::from_statistic(
        "binary-photon-pmf",
        max_rel,
        1e-10,
        cases,
        meta(&[("beta_set", "0.3, 1, 3".into()), ("statistic_kind", "max relative error".into())]),
    )
}

fn spectral_density_identity() -> TestReport {
    let consts = PhysicalConstants::default();
    let mut max_rel = 0.0f64;
    for nu in log_spaced(1e11, 5e12, 10) {
        for temperature in log_spaced(100.0, 3000.0, 10) {
            let u = spectral_density(nu, temperature, &consts).unwrap();
            let mean_energy = oscillator_mean_energy(nu, temperature, &consts).unwrap();
            let modes = 8.0 * std::f64::consts::PI * nu * nu / consts.c.powi(3);
            let rhs = modes * (mean_energy - 0.5 * consts.h * nu);
            max_rel = max_rel.max(rel_err(u, rhs));
        }
    }
    TestReport::from_statistic(
        "spectral-density-identity",
        max_rel,
        1e-14,
        100,
        meta(&[("statistic_kind", "max relative error".into())]),
    )
}

/// At beta = 0.01 the density sits within half a percent of equipartition,
/// approached from below.
fn classical_limit_ratio() -> TestReport {
    let consts = PhysicalConstants::default();
    let temperature = 300.0;
    let nu = 0.01 * consts.k * temperature / consts.h;
    let u = spectral_density(nu, temperature, &consts).unwrap();
    let classical =
        8.0 * std::f64::consts::PI * nu * nu / consts.c.powi(3) * consts.k * temperature;
    let ratio = u / classical;
    let statistic = if ratio <= 1.0 { 1.0 - ratio } else { f64::INFINITY };
    TestReport::from_statistic(
        "classical-limit-ratio",
        statistic,
        0.005,
        1,
        meta(&[("ratio", format!("{ratio:.6}")), ("beta", "0.01".into())]),
    )
}

fn occupation_entropy() -> TestReport {
    let mut max_err = 0.0f64;
    for &n_bar in &[0.1, 1.0, 10.0] {
        let closed = xi_entropy(n_bar).unwrap();
        let mut direct = 0.0;
        let mut cumulative = 0.0;
        let mut n = 0u64;
        while cumulative < 1.0 - 1e-16 && n <= 100_000 {
            let p = planck_bose_pmf(n, n_bar).unwrap();
            if p > 0.0 {
                direct -= p * p.ln();
            }
            cumulative += p;
            n += 1;
        }
        max_err = max_err.max((closed - direct).abs());
    }
    TestReport::from_statistic(
        "occupation-entropy",
        max_err,
        1e-10,
        3,
        meta(&[("statistic_kind", "max absolute error".into())]),
    )
}

/// Exhaustive depth-10 round trip: digits -> value -> digits, plus digit_of
/// agreement at every position.
fn digit_round_trip() -> TestReport {
    let mut mismatches = 0u32;
    for pattern in 0..1u32 << 10 {
        let bits: Vec<Bit> = (0..10)
            .map(|i| Bit::from_bool(pattern >> (9 - i) & 1 == 1))
            .collect();
        let delta = DigitVector::new(DigitKind::Fractional, bits).unwrap();
        let z = reconstruct_zeta(&delta);
        for (i, &b) in delta.bits().iter().enumerate() {
            if digit_of(z, i as u32 + 1).unwrap() != b {
                mismatches += 1;
            }
        }
        if DigitVector::from_fraction(z, 10).unwrap().bits() != delta.bits() {
            mismatches += 1;
        }
    }
    TestReport::from_statistic(
        "digit-round-trip",
        f64::from(mismatches),
        1.0,
        1024,
        meta(&[("statistic_kind", "mismatch count".into())]),
    )
}

/// Seeded Monte Carlo checks: sampler laws, route agreement, digit
/// independence, and the zero-point bit stream. One sequential RNG stream,
/// so the full set is reproducible from (seed, betas, n, alpha).
pub fn monte_carlo_reports(seed: u64, betas: &[f64], n: usize, alpha: f64) -> Vec<TestReport> {
    let mut rng = RngStream::new(seed);
    let mut reports = Vec::new();

    for &beta in betas {
        let tags = [("beta", format!("{beta}")), ("seed", seed.to_string())];

        // Fractional energies drawn from the truncated exponential.
        let zetas: Vec<f64> = (0..n)
            .map(|_| sample_zeta_truncexp(&mut rng, beta).unwrap())
            .collect();
        let moments = moment_report(&zetas).unwrap();
        let expected = zeta_mean(beta).unwrap();
        reports.push(TestReport::from_statistic(
            "zeta-mean",
            ((moments.mean - expected) / moments.std_error).abs(),
            3.0,
            n,
            meta(&[
                ("beta", format!("{beta}")),
                ("seed", seed.to_string()),
                ("expected", format!("{expected:.16e}")),
                ("observed", format!("{:.16e}", moments.mean)),
                ("statistic_kind", "deviation in standard errors".into()),
            ]),
        ));
        reports.push(
            ks_test(&zetas, |z| zeta_cdf(z, beta).unwrap(), alpha)
                .unwrap()
                .with_context("zeta-ks", &tags),
        );

        // Occupation numbers from the geometric construction.
        let xis: Vec<u64> = (0..n)
            .map(|_| sample_xi_geometric(&mut rng, beta).unwrap())
            .collect();
        let as_f64: Vec<f64> = xis.iter().map(|&x| x as f64).collect();
        let moments = moment_report(&as_f64).unwrap();
        let n_bar = mean_occupation(beta).unwrap();
        reports.push(TestReport::from_statistic(
            "occupation-mean",
            ((moments.mean - n_bar) / moments.std_error).abs(),
            3.0,
            n,
            meta(&[
                ("beta", format!("{beta}")),
                ("seed", seed.to_string()),
                ("expected", format!("{n_bar:.16e}")),
                ("observed", format!("{:.16e}", moments.mean)),
                ("statistic_kind", "deviation in standard errors".into()),
            ]),
        ));
        let probs = tail_merged_probs(|k| planck_bose_pmf(k, n_bar).unwrap(), n as u64, 5.0);
        if probs.len() >= 2 {
            let counts = tail_binned_counts(&xis, probs.len());
            reports.push(
                chi_square_gof(&counts, &probs, alpha)
                    .unwrap()
                    .with_context("occupation-chi-square", &tags),
            );
        } else {
            // Nearly all mass in one bin; the test has no resolution here.
            reports.push(TestReport::from_statistic(
                "occupation-chi-square",
                0.0,
                1.0,
                n,
                meta(&[
                    ("beta", format!("{beta}")),
                    ("seed", seed.to_string()),
                    ("skipped", "occupation distribution degenerate at this beta".into()),
                ]),
            ));
        }

        // Fractional energies by the amplitude route and the digit route
        // must agree in distribution.
        let amplitude: Vec<f64> = (0..n)
            .map(|_| sample_eta_via_amplitudes(&mut rng, beta).unwrap().zeta())
            .collect();
        let digit_sampler = DigitZetaSampler::new(beta, 53).unwrap();
        let digit: Vec<f64> = (0..n)
            .map(|_| digit_sampler.sample_value(&mut rng))
            .collect();
        reports.push(
            ks_two_sample(&amplitude, &digit, alpha)
                .unwrap()
                .with_context("route-two-sample", &tags),
        );

        // Pairwise independence of extracted digits.
        let rows: Vec<DigitVector> = zetas
            .iter()
            .map(|&z| DigitVector::from_fraction(z, 10).unwrap())
            .collect();
        for report in digit_independence_test(&rows, alpha).unwrap() {
            let name = report.test_name.clone();
            reports.push(report.with_context(name, &tags));
        }
    }

    // Zero-point stream checks, independent of the beta grid.
    let bit_count = 1_000_000;
    let bit_tags = [("seed", seed.to_string())];
    let bits = zero_point_bits(&mut rng, bit_count).unwrap();
    reports.push(
        monobit_test(&bits, alpha)
            .unwrap()
            .with_context("zero-point-monobit", &bit_tags),
    );
    reports.push(
        runs_test(&bits, alpha)
            .unwrap()
            .with_context("zero-point-runs", &bit_tags),
    );
    let uniforms: Vec<f64> = (0..bit_count).map(|_| zero_point_uniform(&mut rng)).collect();
    let moments = moment_report(&uniforms).unwrap();
    reports.push(TestReport::from_statistic(
        "zero-point-uniform-mean",
        ((moments.mean - 0.5) / moments.std_error).abs(),
        3.0,
        bit_count,
        meta(&[
            ("seed", seed.to_string()),
            ("observed", format!("{:.16e}", moments.mean)),
            ("statistic_kind", "deviation in standard errors".into()),
        ]),
    ));

    reports
}
