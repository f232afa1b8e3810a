//! Closed-form distributions of a thermal mode's energy and its binary digits.
//!
//! Everything here is a pure function of dimensionless arguments; the only
//! dimensional quantities appear in [`beta_of`], [`spectral_density`], and
//! [`oscillator_mean_energy`], which attach physical units through
//! [`PhysicalConstants`].
//!
//! Notation used throughout:
//!
//! * `beta = h nu / (k T)`, the single parameter governing every law here;
//! * `eta`, the mode energy in units of `h nu`, exponential with mean `1/beta`;
//! * `xi = floor(eta)`, Planck-Bose distributed with mean occupation
//!   `n_bar = 1/(e^beta - 1)`;
//! * `zeta = eta - xi`, truncated-exponential on `[0,1)`;
//! * `eps_k`, the k-th binary digit of a variable on `[0,1)` under the density
//!   `f_a`; for the thermal fraction `a = -beta`, for the zero-point case `a = 0`.

use std::fmt;

/// Error for arguments outside an operation's mathematical domain.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainError {
    InvalidParameter(String),
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for DomainError {}

fn invalid(msg: impl Into<String>) -> DomainError {
    DomainError::InvalidParameter(msg.into())
}

/// Fundamental constants in CGS units.
///
/// Defaults are the CODATA values. The fields are overridable so historical or
/// rounded constants can be reproduced exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Planck constant, erg s.
    pub h: f64,
    /// Boltzmann constant, erg/K.
    pub k: f64,
    /// Speed of light, cm/s.
    pub c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            h: 6.62607015e-27,
            k: 1.380649e-16,
            c: 2.99792458e10,
        }
    }
}

impl PhysicalConstants {
    fn validate(&self) -> Result<(), DomainError> {
        for (name, v) in [("h", self.h), ("k", self.k), ("c", self.c)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(invalid(format!("constant {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// A single cavity mode: frequency, temperature, and the derived `beta`.
///
/// `beta` is always recomputed from `(nu, temperature)` at construction, so the
/// three fields can never disagree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    nu: f64,
    temperature: f64,
    beta: f64,
}

impl ModeParams {
    pub fn new(nu: f64, temperature: f64, consts: &PhysicalConstants) -> Result<Self, DomainError> {
        let beta = beta_of(nu, temperature, consts)?;
        Ok(ModeParams { nu, temperature, beta })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// One binary digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn from_bool(b: bool) -> Bit {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.as_u8() as f64
    }

    pub fn is_one(self) -> bool {
        self == Bit::One
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Whether a digit vector carries fractional digits (positions k = 1..n,
/// weights 2^-k) or integer digits (positions s = 0..n-1, weights 2^s).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DigitKind {
    Fractional,
    Integer,
}

/// An ordered run of binary digits with a fixed weight convention.
///
/// Fractional vectors reconstruct to a value in `[0,1)`; integer vectors to a
/// non-negative integer (depth is capped at 64 so the value fits a `u64`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    kind: DigitKind,
    bits: Vec<Bit>,
}

impl DigitVector {
    pub fn new(kind: DigitKind, bits: Vec<Bit>) -> Result<Self, DomainError> {
        if bits.is_empty() {
            return Err(invalid("digit vector needs depth >= 1"));
        }
        if kind == DigitKind::Integer && bits.len() > 64 {
            return Err(invalid(format!(
                "integer digit vector depth {} exceeds 64",
                bits.len()
            )));
        }
        Ok(DigitVector { kind, bits })
    }

    /// First `depth` binary digits of `x` in `[0,1)`, terminating convention.
    pub fn from_fraction(x: f64, depth: usize) -> Result<Self, DomainError> {
        if !(0.0..1.0).contains(&x) {
            return Err(invalid(format!("fraction must lie in [0,1), got {x}")));
        }
        if depth == 0 {
            return Err(invalid("digit vector needs depth >= 1"));
        }
        let mut bits = Vec::with_capacity(depth);
        let mut y = x;
        for _ in 0..depth {
            // y in [0,1); doubling and subtracting 1 are exact, so the bits are
            // the true binary digits of x.
            y *= 2.0;
            if y >= 1.0 {
                bits.push(Bit::One);
                y -= 1.0;
            } else {
                bits.push(Bit::Zero);
            }
        }
        Ok(DigitVector { kind: DigitKind::Fractional, bits })
    }

    /// Low `depth` binary digits of `m`, least significant first.
    pub fn from_integer(m: u64, depth: usize) -> Result<Self, DomainError> {
        if depth == 0 || depth > 64 {
            return Err(invalid(format!("integer digit depth must be in [1,64], got {depth}")));
        }
        if depth < 64 && m >> depth != 0 {
            return Err(invalid(format!("{m} does not fit in {depth} bits")));
        }
        let bits = (0..depth)
            .map(|s| Bit::from_bool((m >> s) & 1 == 1))
            .collect();
        Ok(DigitVector { kind: DigitKind::Integer, bits })
    }

    pub fn kind(&self) -> DigitKind {
        self.kind
    }

    pub fn depth(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[Bit] {
        &self.bits
    }

    /// Sum of `bit_k 2^-k`; exact for depth <= 53.
    pub fn fractional_value(&self) -> f64 {
        let mut v = 0.0;
        for &b in self.bits.iter().rev() {
            v = (v + b.as_f64()) * 0.5;
        }
        v
    }

    /// Sum of `bit_s 2^s`. Panics if depth exceeds 64 (only constructible by
    /// misusing a fractional vector).
    pub fn integer_value(&self) -> u64 {
        assert!(self.bits.len() <= 64, "integer reconstruction needs depth <= 64");
        self.bits
            .iter()
            .enumerate()
            .map(|(s, b)| (b.as_u8() as u64) << s)
            .sum()
    }

    /// The digits as a compact string, e.g. "0110".
    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|b| char::from(b'0' + b.as_u8())).collect()
    }
}

/// Dimensionless `beta = h nu / (k T)`.
pub fn beta_of(nu: f64, temperature: f64, consts: &PhysicalConstants) -> Result<f64, DomainError> {
    consts.validate()?;
    if !nu.is_finite() || nu <= 0.0 {
        return Err(invalid(format!("frequency must be positive, got {nu}")));
    }
    if !temperature.is_finite() || temperature <= 0.0 {
        return Err(invalid(format!("temperature must be positive, got {temperature}")));
    }
    Ok(consts.h * nu / (consts.k * temperature))
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

/// Density of the scaled mode energy: `beta e^(-beta y)` for y >= 0, else 0.
pub fn eta_pdf(y: f64, beta: f64) -> Result<f64, DomainError> {
    check_beta_positive(beta)?;
    if y < 0.0 {
        return Ok(0.0);
    }
    Ok(beta * (-beta * y).exp())
}

/// Distribution function of the scaled mode energy: `1 - e^(-beta y)`.
pub fn eta_cdf(y: f64, beta: f64) -> Result<f64, DomainError> {
    check_beta_positive(beta)?;
    if y <= 0.0 {
        return Ok(0.0);
    }
    Ok(-(-beta * y).exp_m1())
}

/// Density of the fractional part on [0,1]: `beta e^(-beta z) / (1 - e^(-beta))`.
///
/// Identical (bit for bit) to `f_a(z, -beta)`.
pub fn zeta_pdf(z: f64, beta: f64) -> Result<f64, DomainError> {
    check_beta_positive(beta)?;
    f_a(z, -beta)
}

/// Distribution function of the fractional part: `(1 - e^(-beta z)) / (1 - e^(-beta))`.
pub fn zeta_cdf(z: f64, beta: f64) -> Result<f64, DomainError> {
    check_beta_positive(beta)?;
    if !(0.0..=1.0).contains(&z) {
        return Err(invalid(format!("z must lie in [0,1], got {z}")));
    }
    Ok((-beta * z).exp_m1() / (-beta).exp_m1())
}

/// Mean of the fractional part: `1/beta - 1/(e^beta - 1)`, and exactly 1/2 at
/// `beta = 0` (the zero-point limit).
///
/// Below `beta = 1e-6` the difference is evaluated by series to avoid
/// catastrophic cancellation: `1/2 - beta/12 + beta^3/720 - ...`.
pub fn zeta_mean(beta: f64) -> Result<f64, DomainError> {
    check_beta_nonnegative(beta)?;
    if beta == 0.0 {
        return Ok(0.5);
    }
    if beta < 1e-6 {
        return Ok(0.5 - beta / 12.0 + beta * beta * beta / 720.0);
    }
    Ok(1.0 / beta - 1.0 / beta.exp_m1())
}

/// Mean photon occupation: `n_bar = 1/(e^beta - 1)`, the Planck factor.
pub fn mean_occupation(beta: f64) -> Result<f64, DomainError> {
    check_beta_positive(beta)?;
    Ok(1.0 / beta.exp_m1())
}

/// Planck-Bose pmf: `P(xi = n) = n_bar^n / (1 + n_bar)^(1+n)`.
///
/// Equivalently geometric with success probability `1/(1 + n_bar)`. Evaluated
/// in log form for large `n` so the result underflows to 0 instead of
/// overflowing intermediates.
pub fn planck_bose_pmf(n: u64, n_bar: f64) -> Result<f64, DomainError> {
    if !n_bar.is_finite() || n_bar <= 0.0 {
        return Err(invalid(format!("n_bar must be positive, got {n_bar}")));
    }
    let r = n_bar / (1.0 + n_bar);
    let q = 1.0 / (1.0 + n_bar);
    if n <= 4096 {
        Ok(q * r.powi(n as i32))
    } else {
        Ok((n as f64 * r.ln() + q.ln()).exp())
    }
}

/// Entropy of the Planck-Bose law in units of k:
/// `(1 + n_bar) ln(1 + n_bar) - n_bar ln(n_bar)`.
pub fn xi_entropy(n_bar: f64) -> Result<f64, DomainError> {
    if !n_bar.is_finite() || n_bar <= 0.0 {
        return Err(invalid(format!("n_bar must be positive, got {n_bar}")));
    }
    Ok((1.0 + n_bar) * n_bar.ln_1p() - n_bar * n_bar.ln())
}

/// Spectral energy density of black-body radiation, erg s/cm^3:
/// `u_nu = (8 pi nu^2 / c^3) h nu / (e^(h nu/kT) - 1)`.
pub fn spectral_density(
    nu: f64,
    temperature: f64,
    consts: &PhysicalConstants,
) -> Result<f64, DomainError> {
    let beta = beta_of(nu, temperature, consts)?;
    let n_bar = 1.0 / beta.exp_m1();
    Ok(mode_density(nu, consts) * consts.h * nu * n_bar)
}

/// Mean oscillator energy including the zero-point term, erg:
/// `U = h nu (n_bar + 1/2)`. Finite (`h nu / 2`) even as `T -> 0`.
pub fn oscillator_mean_energy(
    nu: f64,
    temperature: f64,
    consts: &PhysicalConstants,
) -> Result<f64, DomainError> {
    let beta = beta_of(nu, temperature, consts)?;
    let n_bar = 1.0 / beta.exp_m1();
    Ok(consts.h * nu * (n_bar + 0.5))
}

/// Classical (Rayleigh-Jeans) spectral density `8 pi nu^2 k T / c^3`, the
/// `beta -> 0` limit of [`spectral_density`].
pub fn rayleigh_jeans_density(
    nu: f64,
    temperature: f64,
    consts: &PhysicalConstants,
) -> Result<f64, DomainError> {
    // Validates inputs the same way as the quantum law.
    beta_of(nu, temperature, consts)?;
    Ok(mode_density(nu, consts) * consts.k * temperature)
}

/// Mode counting factor `8 pi nu^2 / c^3`.
fn mode_density(nu: f64, consts: &PhysicalConstants) -> f64 {
    8.0 * std::f64::consts::PI * nu * nu / (consts.c * consts.c * consts.c)
}

/// Occupation probabilities `(P(mu_s = 0), P(mu_s = 1))` of the binary photon
/// at level `s`, where `P(mu_s = 1) = b^(2^s) / (1 + b^(2^s))` with `b = e^-beta`.
///
/// These are Fermi-Dirac factors: each level holds at most one binary photon.
/// When `2^s beta` exceeds the exponent range the true probability underflows;
/// it saturates silently to exactly (1, 0).
pub fn binary_photon_prob(s: u32, beta: f64) -> Result<(f64, f64), DomainError> {
    check_beta_positive(beta)?;
    let w = if s > 1023 { f64::INFINITY } else { beta * pow2(s as i32) };
    let t = (-w).exp();
    let p1 = t / (1.0 + t);
    Ok((1.0 - p1, p1))
}

/// Probabilities `(P(eps_k = 0), P(eps_k = 1))` of the k-th binary digit under
/// the density `f_a`: `P(eps_k = 1) = e^(a/2^k) / (1 + e^(a/2^k))`.
///
/// `a = 0` gives exactly (1/2, 1/2): zero-point digits are fair coin flips.
pub fn digit_prob(k: u32, a: f64) -> Result<(f64, f64), DomainError> {
    if k == 0 {
        return Err(invalid("digit positions start at k = 1"));
    }
    if !a.is_finite() {
        return Err(invalid(format!("a must be finite, got {a}")));
    }
    // Past position 1074 the scaled argument underflows for every finite a.
    let t = if k > 1074 { 0.0 } else { a * pow2(-(k as i32)) };
    // Evaluate the logistic on the side that cannot overflow.
    let p1 = if t <= 0.0 {
        let e = t.exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + (-t).exp())
    };
    Ok((1.0 - p1, p1))
}

/// Joint probability of the first n digits equaling `delta`, closed form:
/// `e^(a s) (e^(a/2^n) - 1) / (e^a - 1)` with `s = sum delta_k 2^-k`.
///
/// For `a = 0` this is exactly `2^-n`. The bits are read with fractional
/// weights regardless of the vector's kind tag.
pub fn digit_joint_closed(delta: &DigitVector, a: f64) -> f64 {
    let h = interval_width(delta.depth());
    if a == 0.0 {
        return h;
    }
    let s = delta.fractional_value();
    (a * s).exp() * (a * h).exp_m1() / a.exp_m1()
}

/// The same joint probability as the integral of `f_a` over the dyadic
/// interval `[s, s + 2^-n)`, evaluated analytically:
/// `2 sinh(a/2^(n+1)) e^(a (s + 2^-(n+1))) / (e^a - 1)`.
///
/// Equality with [`digit_joint_closed`] (to machine precision, with a
/// genuinely different expression tree) is the independence theorem for the
/// digits: the measure of every dyadic interval factorizes over positions.
pub fn digit_joint_integral(delta: &DigitVector, a: f64) -> f64 {
    let h = interval_width(delta.depth());
    if a == 0.0 {
        return h;
    }
    let s = delta.fractional_value();
    2.0 * (a * h / 2.0).sinh() * (a * (s + h / 2.0)).exp() / a.exp_m1()
}

/// Exponential-family density on the unit interval:
/// `f_a(x) = 1` for `a = 0`, otherwise `a e^(a x) / (e^a - 1)`.
///
/// The thermal fraction has density `f_(-beta)`; the zero-point variable has
/// density `f_0` (uniform).
pub fn f_a(x: f64, a: f64) -> Result<f64, DomainError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("x must lie in [0,1], got {x}")));
    }
    if !a.is_finite() {
        return Err(invalid(format!("a must be finite, got {a}")));
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    Ok(a * (a * x).exp() / a.exp_m1())
}

/// The k-th binary digit of `x` in `[0,1)` under the terminating-expansion
/// convention (dyadic rationals carry trailing zeros).
///
/// `eps_k` is piecewise constant, alternating 0 and 1 on consecutive intervals
/// `[q/2^k, (q+1)/2^k)`; the half-open intervals force the terminating choice.
pub fn digit_of(x: f64, k: u32) -> Result<Bit, DomainError> {
    if !(0.0..1.0).contains(&x) {
        return Err(invalid(format!("x must lie in [0,1), got {x}")));
    }
    if k == 0 {
        return Err(invalid("digit positions start at k = 1"));
    }
    // Every f64 in [0,1) is a dyadic rational with lowest set bit no deeper
    // than 2^-1074, so digits past position 1074 are all zero.
    if k > 1074 {
        return Ok(Bit::Zero);
    }
    // Scaling by a power of two is exact; split the shift to stay in range.
    let scaled = if k <= 1023 {
        x * pow2(k as i32)
    } else {
        let partial = x * pow2(1023);
        (partial - partial.floor()) * pow2(k as i32 - 1023)
    };
    let q = scaled.floor();
    Ok(Bit::from_bool(q % 2.0 == 1.0))
}

/// Rademacher function `r_k(x) = 1 - 2 eps_k(x)`, taking values +1 and -1.
///
/// Equals `sign(sin(2^k pi x))` wherever the sine is nonzero.
pub fn rademacher(x: f64, k: u32) -> Result<i32, DomainError> {
    Ok(1 - 2 * digit_of(x, k)?.as_u8() as i32)
}

/// Width 2^-n of a depth-n dyadic interval (0 once it underflows).
fn interval_width(depth: usize) -> f64 {
    if depth > 1074 {
        0.0
    } else {
        pow2(-(depth as i32))
    }
}

/// Exact power of two as f64, valid for -1074 <= e <= 1023.
fn pow2(e: i32) -> f64 {
    debug_assert!((-1074..=1023).contains(&e));
    if e >= -1022 {
        f64::from_bits(((1023 + e) as u64) << 52)
    } else {
        // Subnormal range.
        f64::from_bits(1u64 << (e + 1074))
    }
}
