//! Seeded Monte Carlo realizations of the mode energy and its binary parts.
//!
//! Three independent routes produce the same laws:
//!
//! * amplitude: two Gaussian quadratures, `eta = (X^2 + Y^2)/(2 beta)`;
//! * direct: inverse-transform of the exponential / truncated exponential;
//! * digits: independent Bernoulli draws for every binary digit or binary
//!   photon, reassembled into a value.
//!
//! All randomness flows through [`RngStream`], a counter-tracked ChaCha12
//! stream, so every sample is reproducible from `(seed, stream, algorithm)`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::fmt;
use std::str::FromStr;

use crate::distributions::{
    binary_photon_prob, digit_prob, Bit, DigitKind, DigitVector, DomainError,
};

fn invalid(msg: impl Into<String>) -> DomainError {
    DomainError::InvalidParameter(msg.into())
}

/// Identifier of the generator and Gaussian method, for report metadata.
pub const ALGORITHM_ID: &str = "chacha12/polar-gaussian";

/// Largest f64 strictly below 1.
const MAX_BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// A deterministic random stream with an explicit draw counter.
///
/// Identical `(seed, stream)` pairs yield bit-identical sequences; distinct
/// stream indices of the same seed are independent by construction of the
/// underlying block cipher. One stream must not be shared across concurrent
/// activities; split instead.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha12Rng,
    seed: u64,
    stream: u64,
    position: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// An independent stream of the same seed.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { rng, seed, stream, position: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of 64-bit words drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn algorithm_id(&self) -> &'static str {
        ALGORITHM_ID
    }

    pub fn next_u64(&mut self) -> u64 {
        self.position += 1;
        self.rng.next_u64()
    }

    /// Uniform on [0,1): the top 53 bits of one word, scaled by 2^-53.
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (f64::EPSILON / 2.0)
    }

    /// Uniform on (0,1], safe as a logarithm argument.
    pub fn next_open_unit(&mut self) -> f64 {
        1.0 - self.next_uniform()
    }

    /// Two independent standard Gaussians by the polar (Marsaglia) method.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        loop {
            let u = 2.0 * self.next_uniform() - 1.0;
            let v = 2.0 * self.next_uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                return (u * f, v * f);
            }
        }
    }
}

/// Which construction produced an [`EnergySample`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Amplitude,
    Direct,
    Digits,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Route::Amplitude => "amplitude",
            Route::Direct => "direct",
            Route::Digits => "digits",
        };
        write!(f, "{name}")
    }
}

impl FromStr for Route {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, DomainError> {
        match s {
            "amplitude" => Ok(Route::Amplitude),
            "direct" => Ok(Route::Direct),
            "digits" => Ok(Route::Digits),
            other => Err(invalid(format!(
                "unknown route '{other}' (valid: amplitude, direct, digits)"
            ))),
        }
    }
}

/// One realization of the mode energy, split into integer and fractional parts.
///
/// The split is exact by construction: `xi = floor(eta)`, `zeta = eta - xi`,
/// and `eta == xi + zeta` holds bit for bit (floor subtraction is exact in
/// IEEE arithmetic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    eta: f64,
    xi: u64,
    zeta: f64,
    theta: Option<f64>,
    route: Route,
}

impl EnergySample {
    /// Split a non-negative energy into its parts. No phase recorded.
    pub fn from_eta(eta: f64, route: Route) -> Result<Self, DomainError> {
        if !eta.is_finite() || eta < 0.0 {
            return Err(invalid(format!("eta must be finite and non-negative, got {eta}")));
        }
        let floor = eta.floor();
        Ok(EnergySample {
            eta,
            xi: floor as u64,
            zeta: eta - floor,
            theta: None,
            route,
        })
    }

    /// As [`from_eta`](Self::from_eta), with the amplitude phase attached.
    pub fn from_eta_with_phase(eta: f64, theta: f64, route: Route) -> Result<Self, DomainError> {
        if !(0.0..std::f64::consts::TAU).contains(&theta) {
            return Err(invalid(format!("theta must lie in [0, 2 pi), got {theta}")));
        }
        let mut s = Self::from_eta(eta, route)?;
        s.theta = Some(theta);
        Ok(s)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn xi(&self) -> u64 {
        self.xi
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn theta(&self) -> Option<f64> {
        self.theta
    }

    pub fn route(&self) -> Route {
        self.route
    }
}

fn check_beta_positive(beta: f64) -> Result<(), DomainError> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(invalid(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}

fn check_beta_nonnegative(beta: f64) -> Result<(), DomainError> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(invalid(format!("beta must be non-negative, got {beta}")));
    }
    Ok(())
}

/// Draw the mode energy from two Gaussian amplitude quadratures:
/// `eta = (X^2 + Y^2)/(2 beta)`, phase `theta = atan2(Y, X)` in [0, 2 pi).
pub fn sample_eta_via_amplitudes(rng: &mut RngStream, beta: f64) -> Result<EnergySample, DomainError> {
    check_beta_positive(beta)?;
    let (x, y) = rng.next_gaussian_pair();
    let eta = (x * x + y * y) / (2.0 * beta);
    let theta = y.atan2(x).rem_euclid(std::f64::consts::TAU);
    EnergySample::from_eta_with_phase(eta, theta, Route::Amplitude)
}

/// Draw the mode energy by inverse transform: `eta = -ln(U)/beta`, U in (0,1].
pub fn sample_eta_direct(rng: &mut RngStream, beta: f64) -> Result<EnergySample, DomainError> {
    check_beta_positive(beta)?;
    let eta = -rng.next_open_unit().ln() / beta;
    EnergySample::from_eta(eta, Route::Direct)
}

/// Draw the photon number directly: the floor of an exponential variate is
/// exactly Planck-Bose distributed.
pub fn sample_xi_geometric(rng: &mut RngStream, beta: f64) -> Result<u64, DomainError> {
    check_beta_positive(beta)?;
    Ok((-rng.next_open_unit().ln() / beta).floor() as u64)
}

/// Draw the fractional part by inverting its distribution function:
/// `z = -ln(1 - U (1 - e^-beta)) / beta`, uniform for `beta = 0`.
pub fn sample_zeta_truncexp(rng: &mut RngStream, beta: f64) -> Result<f64, DomainError> {
    check_beta_nonnegative(beta)?;
    let u = rng.next_uniform();
    if beta == 0.0 {
        return Ok(u);
    }
    let w = -(-beta).exp_m1();
    let z = -(-u * w).ln_1p() / beta;
    // U < 1 puts z strictly below 1 in exact arithmetic; guard the last ulp.
    Ok(z.min(MAX_BELOW_ONE))
}

/// Digit-route sampler for the fractional part with precomputed per-position
/// probabilities. Construction costs `depth` exponentials; each draw is then
/// `depth` uniform comparisons.
#[derive(Debug, Clone)]
pub struct DigitZetaSampler {
    probs: Vec<f64>,
}

impl DigitZetaSampler {
    pub fn new(beta: f64, depth: usize) -> Result<Self, DomainError> {
        check_beta_nonnegative(beta)?;
        if !(1..=64).contains(&depth) {
            return Err(invalid(format!("depth must lie in [1,64], got {depth}")));
        }
        let probs = (1..=depth as u32)
            .map(|k| digit_prob(k, -beta).map(|(_, p1)| p1))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DigitZetaSampler { probs })
    }

    pub fn depth(&self) -> usize {
        self.probs.len()
    }

    /// One draw, value only; exact dyadic sum of the drawn digits.
    pub fn sample_value(&self, rng: &mut RngStream) -> f64 {
        let mut v = 0.0;
        let mut w = 0.5;
        for &p in &self.probs {
            if rng.next_uniform() < p {
                v += w;
            }
            w *= 0.5;
        }
        v
    }

    /// One draw with the digit vector attached.
    pub fn sample(&self, rng: &mut RngStream) -> (f64, DigitVector) {
        let mut v = 0.0;
        let mut w = 0.5;
        let mut bits = Vec::with_capacity(self.probs.len());
        for &p in &self.probs {
            let one = rng.next_uniform() < p;
            if one {
                v += w;
            }
            bits.push(Bit::from_bool(one));
            w *= 0.5;
        }
        let vector = DigitVector::new(DigitKind::Fractional, bits)
            .expect("depth validated at construction");
        (v, vector)
    }
}

/// Draw the fractional part digit by digit: each `eps_k` is an independent
/// Bernoulli with `P(eps_k = 1) = digit_prob(k, -beta)`. The assembled value
/// converges in distribution to the truncated exponential as depth grows.
pub fn sample_zeta_via_digits(
    rng: &mut RngStream,
    beta: f64,
    depth: usize,
) -> Result<(f64, DigitVector), DomainError> {
    Ok(DigitZetaSampler::new(beta, depth)?.sample(rng))
}

/// Binary-photon sampler for the photon number with precomputed per-level
/// probabilities (levels `s = 0..=max_level`).
#[derive(Debug, Clone)]
pub struct BinaryPhotonSampler {
    probs: Vec<f64>,
}

impl BinaryPhotonSampler {
    pub fn new(beta: f64, max_level: u32) -> Result<Self, DomainError> {
        check_beta_positive(beta)?;
        if max_level > 62 {
            return Err(invalid(format!("max_level must be at most 62, got {max_level}")));
        }
        let probs = (0..=max_level)
            .map(|s| binary_photon_prob(s, beta).map(|(_, p1)| p1))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BinaryPhotonSampler { probs })
    }

    pub fn max_level(&self) -> u32 {
        self.probs.len() as u32 - 1
    }

    /// One draw, photon number only. Consumes one uniform per level.
    pub fn sample_value(&self, rng: &mut RngStream) -> u64 {
        let mut n = 0u64;
        for (s, &p) in self.probs.iter().enumerate() {
            if rng.next_uniform() < p {
                n += 1u64 << s;
            }
        }
        n
    }

    /// One draw with the level occupations attached (integer digit vector).
    pub fn sample(&self, rng: &mut RngStream) -> (u64, DigitVector) {
        let mut n = 0u64;
        let mut bits = Vec::with_capacity(self.probs.len());
        for (s, &p) in self.probs.iter().enumerate() {
            let occupied = rng.next_uniform() < p;
            if occupied {
                n += 1u64 << s;
            }
            bits.push(Bit::from_bool(occupied));
        }
        let vector = DigitVector::new(DigitKind::Integer, bits)
            .expect("level count validated at construction");
        (n, vector)
    }
}

/// Draw the photon number as a sum of independent binary photons with weights
/// `2^s`, `s = 0..=max_level`. Truncation error is bounded by the summed
/// occupation probabilities of the dropped levels, which decay doubly
/// exponentially.
pub fn sample_xi_via_binary_photons(
    rng: &mut RngStream,
    beta: f64,
    max_level: u32,
) -> Result<(u64, DigitVector), DomainError> {
    Ok(BinaryPhotonSampler::new(beta, max_level)?.sample(rng))
}

/// Assemble a full energy sample from the digit route: binary photons for the
/// integer part, dyadic digits for the fraction.
pub fn sample_eta_via_digits(
    rng: &mut RngStream,
    beta: f64,
    depth: usize,
    max_level: u32,
) -> Result<EnergySample, DomainError> {
    let photons = BinaryPhotonSampler::new(beta, max_level)?;
    let digits = DigitZetaSampler::new(beta, depth)?;
    let xi = photons.sample_value(rng);
    let zeta = digits.sample_value(rng);
    EnergySample::from_eta(xi as f64 + zeta, Route::Digits)
}

/// Exact dyadic sum of fractional digits, `sum bit_k 2^-k`.
pub fn reconstruct_zeta(bits: &DigitVector) -> f64 {
    bits.fractional_value()
}

/// Exact dyadic sum of integer digits, `sum bit_s 2^s`.
pub fn reconstruct_xi(bits: &DigitVector) -> u64 {
    bits.integer_value()
}

/// Reassembled energy `xi + zeta` from the two digit vectors.
pub fn reconstruct_eta(int_bits: &DigitVector, frac_bits: &DigitVector) -> f64 {
    reconstruct_xi(int_bits) as f64 + reconstruct_zeta(frac_bits)
}

/// A stream of independent fair bits: the `a = 0` (zero-point) digit law.
///
/// Bits are unpacked from 64-bit words, least significant first.
pub fn zero_point_bits(rng: &mut RngStream, count: usize) -> Result<Vec<Bit>, DomainError> {
    if count == 0 {
        return Err(invalid("bit count must be at least 1"));
    }
    let mut bits = Vec::with_capacity(count);
    let mut remaining = count;
    while remaining > 0 {
        let word = rng.next_u64();
        let take = remaining.min(64);
        for i in 0..take {
            bits.push(Bit::from_bool((word >> i) & 1 == 1));
        }
        remaining -= take;
    }
    Ok(bits)
}

/// A uniform variate on [0,1) assembled from 53 fair bits, the zero-point
/// fraction `zeta_0`. Its expectation is exactly 1/2: the zero-point energy
/// in units of `h nu`.
pub fn zero_point_uniform(rng: &mut RngStream) -> f64 {
    rng.next_uniform()
}
