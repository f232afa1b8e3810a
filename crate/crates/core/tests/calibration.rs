//! Level calibration of the test harness itself.
//!
//! Each statistical test is run on 100 independent null-hypothesis data sets.
//! At alpha = 0.01 the expected false-rejection count is 1, so requiring at
//! least 98 passes leaves headroom of about 2.6 sigma; at alpha = 0.05 we
//! require at least 90. A miscalibrated threshold (wrong constant, bad
//! quantile) fails these decisively, not marginally.

use blackbody_digits::distributions::*;
use blackbody_digits::samplers::*;
use blackbody_digits::stats::*;

fn pass_count(mut trial: impl FnMut(u64) -> bool) -> usize {
    (0..100).filter(|&seed| trial(seed)).count()
}

#[test]
fn ks_test_level_alpha_01() {
    let passes = pass_count(|seed| {
        let mut rng = RngStream::with_stream(3000 + seed, 0);
        let samples: Vec<f64> = (0..2000).map(|_| rng.next_uniform()).collect();
        ks_test(&samples, |x| x.clamp(0.0, 1.0), 0.01).unwrap().passed
    });
    assert!(passes >= 98, "passes = {passes}/100");
}

#[test]
fn ks_test_level_alpha_05() {
    let passes = pass_count(|seed| {
        let mut rng = RngStream::with_stream(3100 + seed, 0);
        let samples: Vec<f64> = (0..2000).map(|_| rng.next_uniform()).collect();
        ks_test(&samples, |x| x.clamp(0.0, 1.0), 0.05).unwrap().passed
    });
    assert!(passes >= 90, "passes = {passes}/100");
}

#[test]
fn ks_test_level_on_exponential_null() {
    // Same calibration against a non-uniform null to exercise the cdf path.
    let passes = pass_count(|seed| {
        let mut rng = RngStream::with_stream(5200 + seed, 0);
        let samples: Vec<f64> = (0..2000)
            .map(|_| sample_eta_direct(&mut rng, 1.5).unwrap().eta())
            .collect();
        ks_test(&samples, |y| eta_cdf(y, 1.5).unwrap(), 0.01).unwrap().passed
    });
    assert!(passes >= 98, "passes = {passes}/100");
}

#[test]
fn ks_two_sample_level() {
    let passes = pass_count(|seed| {
        let mut a_rng = RngStream::with_stream(5300 + seed, 0);
        let mut b_rng = RngStream::with_stream(5300 + seed, 1);
        let a: Vec<f64> = (0..2000).map(|_| a_rng.next_uniform()).collect();
        let b: Vec<f64> = (0..2000).map(|_| b_rng.next_uniform()).collect();
        ks_two_sample(&a, &b, 0.01).unwrap().passed
    });
    assert!(passes >= 98, "passes = {passes}/100");
}

#[test]
fn chi_square_gof_level() {
    let beta = 1.0;
    let n_bar = mean_occupation(beta).unwrap();
    let n = 50_000u64;
    let probs = tail_merged_probs(|k| planck_bose_pmf(k, n_bar).unwrap(), n, 5.0);
    let passes = pass_count(|seed| {
        let mut rng = RngStream::with_stream(3400 + seed, 0);
        let draws: Vec<u64> = (0..n)
            .map(|_| sample_xi_geometric(&mut rng, beta).unwrap())
            .collect();
        let counts = tail_binned_counts(&draws, probs.len());
        chi_square_gof(&counts, &probs, 0.01).unwrap().passed
    });
    assert!(passes >= 98, "passes = {passes}/100");
}

#[test]
fn monobit_level() {
    let passes = pass_count(|seed| {
        let mut rng = RngStream::with_stream(3500 + seed, 0);
        let bits = zero_point_bits(&mut rng, 100_000).unwrap();
        monobit_test(&bits, 0.01).unwrap().passed
    });
    assert!(passes >= 98, "passes = {passes}/100");
}

#[test]
fn runs_level() {
    let passes = pass_count(|seed| {
        let mut rng = RngStream::with_stream(3600 + seed, 0);
        let bits = zero_point_bits(&mut rng, 100_000).unwrap();
        runs_test(&bits, 0.01).unwrap().passed
    });
    assert!(passes >= 98, "passes = {passes}/100");
}

#[test]
fn digit_independence_family_level() {
    // Fair independent bits: the family-level Bonferroni bound must hold.
    let passes = pass_count(|seed| {
        let mut rng = RngStream::with_stream(3700 + seed, 0);
        let sampler = DigitZetaSampler::new(0.0, 10).unwrap();
        let rows: Vec<DigitVector> = (0..10_000).map(|_| sampler.sample(&mut rng).1).collect();
        let reports = digit_independence_test(&rows, 0.01).unwrap();
        reports.last().unwrap().passed
    });
    assert!(passes >= 98, "passes = {passes}/100");
}

#[test]
fn digit_independence_family_level_skewed_marginals() {
    // Independence holds for any product measure, not just the fair one.
    let passes = pass_count(|seed| {
        let mut rng = RngStream::with_stream(3800 + seed, 0);
        let sampler = DigitZetaSampler::new(3.0, 10).unwrap();
        let rows: Vec<DigitVector> = (0..10_000).map(|_| sampler.sample(&mut rng).1).collect();
        let reports = digit_independence_test(&rows, 0.01).unwrap();
        reports.last().unwrap().passed
    });
    assert!(passes >= 98, "passes = {passes}/100");
}

#[test]
fn ks_test_rejects_wrong_distribution() {
    // Power check: uniform data against a strongly skewed cdf must fail at
    // every seed once N = 10^4.
    let rejections = pass_count(|seed| {
        let mut rng = RngStream::with_stream(3900 + seed, 0);
        let samples: Vec<f64> = (0..10_000).map(|_| rng.next_uniform()).collect();
        !ks_test(&samples, |z| zeta_cdf(z.clamp(0.0, 1.0), 5.0).unwrap(), 0.01)
            .unwrap()
            .passed
    });
    assert_eq!(rejections, 100, "rejections = {rejections}/100");
}

#[test]
fn chi_square_rejects_wrong_pmf() {
    // Occupation numbers drawn at beta = 1 tested against beta = 1.2.
    let n = 50_000u64;
    let wrong_bar = mean_occupation(1.2).unwrap();
    let probs = tail_merged_probs(|k| planck_bose_pmf(k, wrong_bar).unwrap(), n, 5.0);
    let rejections = pass_count(|seed| {
        let mut rng = RngStream::with_stream(4000 + seed, 0);
        let draws: Vec<u64> = (0..n)
            .map(|_| sample_xi_geometric(&mut rng, 1.0).unwrap())
            .collect();
        let counts = tail_binned_counts(&draws, probs.len());
        !chi_square_gof(&counts, &probs, 0.01).unwrap().passed
    });
    assert_eq!(rejections, 100, "rejections = {rejections}/100");
}

#[test]
fn independence_test_rejects_copied_digits() {
    // Rows whose second digit always equals the first: every seed must reject.
    let rejections = pass_count(|seed| {
        let mut rng = RngStream::with_stream(4100 + seed, 0);
        let rows: Vec<DigitVector> = (0..10_000)
            .map(|_| {
                let b = Bit::from_bool(rng.next_u64() & 1 == 1);
                let c = Bit::from_bool(rng.next_u64() & 1 == 1);
                DigitVector::new(DigitKind::Fractional, vec![b, b, c]).unwrap()
            })
            .collect();
        let reports = digit_independence_test(&rows, 0.01).unwrap();
        !reports.last().unwrap().passed
    });
    assert_eq!(rejections, 100, "rejections = {rejections}/100");
}

#[test]
fn monobit_rejects_biased_bits() {
    let rejections = pass_count(|seed| {
        let mut rng = RngStream::with_stream(4200 + seed, 0);
        // 52% ones: far outside the monobit band at N = 10^5.
        let bits: Vec<Bit> = (0..100_000)
            .map(|_| Bit::from_bool(rng.next_uniform() < 0.52))
            .collect();
        !monobit_test(&bits, 0.01).unwrap().passed
    });
    assert_eq!(rejections, 100, "rejections = {rejections}/100");
}
