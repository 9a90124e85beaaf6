//! Nakagami-m fading: the law of the fading power gain `γ = |h|²`.
//!
//! With unit mean power, `γ` is Gamma distributed with shape `m` and scale
//! `1/m`. Rayleigh fading is `m = 1`.

mod gamma;

pub use gamma::{gamma, gamma_p, gamma_pq, gamma_q, gamma_upper_incomplete, ln_gamma};

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};

/// Nakagami shape parameter `m > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NakagamiParam(f64);

impl NakagamiParam {
    pub fn new(m: f64) -> Result<Self> {
        if m.is_finite() && m > 0.0 {
            Ok(Self(m))
        } else {
            Err(Error::domain(format!("Nakagami m must be positive and finite, got {m}")))
        }
    }

    /// Rayleigh fading.
    pub fn rayleigh() -> Self {
        Self(1.0)
    }

    pub fn m(self) -> f64 {
        self.0
    }
}

/// A realization of the fading power gain.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FadingGain(f64);

impl FadingGain {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma >= 0.0 {
            Ok(Self(gamma))
        } else {
            Err(Error::domain(format!("fading gain must be nonnegative, got {gamma}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Density of `γ`: `m^m ξ^{m-1} e^{-mξ} / Γ(m)`.
///
/// For `m < 1` the density diverges at the origin and `+∞` is returned at
/// `ξ = 0`; it is integrable, but callers should work with [`gain_cdf`]
/// differences rather than point values there.
pub fn gain_pdf(xi: f64, p: NakagamiParam) -> f64 {
    let m = p.m();
    if xi < 0.0 {
        return 0.0;
    }
    if xi == 0.0 {
        return match m.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Less) => f64::INFINITY,
            Some(std::cmp::Ordering::Equal) => 1.0,
            _ => 0.0,
        };
    }
    (m * m.ln() + (m - 1.0) * xi.ln() - m * xi - ln_gamma(m)).exp()
}

/// Distribution function of `γ`: `1 - Γ(m, mξ)/Γ(m)`, zero for `ξ <= 0`.
pub fn gain_cdf(xi: f64, p: NakagamiParam) -> f64 {
    if xi <= 0.0 {
        return 0.0;
    }
    gamma_p(p.m(), p.m() * xi)
}

/// Survival function `Pr(γ > ξ) = Γ(m, mξ)/Γ(m)`, one for `ξ <= 0`.
pub fn gain_ccdf(xi: f64, p: NakagamiParam) -> f64 {
    if xi <= 0.0 {
        return 1.0;
    }
    gamma_q(p.m(), p.m() * xi)
}

/// Nakagami shape matching Rician fading with factor `K`: `(K+1)²/(2K+1)`.
pub fn rician_k_to_m(k: f64) -> Result<NakagamiParam> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("Rician K must be nonnegative and finite, got {k}")));
    }
    NakagamiParam::new((k + 1.0) * (k + 1.0) / (2.0 * k + 1.0))
}

/// Draws fading power gains from Gamma(shape = m, scale = 1/m).
///
/// Marsaglia–Tsang squeeze sampling, with the `U^{1/m}` boost for `m < 1`.
#[derive(Debug, Clone, Copy)]
pub struct GainSampler {
    dist: Gamma<f64>,
}

impl GainSampler {
    pub fn new(p: NakagamiParam) -> Self {
        let dist = Gamma::new(p.m(), 1.0 / p.m()).expect("validated shape and scale");
        Self { dist }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.dist.sample(rng)
    }
}

/// One draw of `γ`. Prefer [`GainSampler`] in loops.
pub fn sample_gain<R: Rng + ?Sized>(p: NakagamiParam, rng: &mut R) -> FadingGain {
    FadingGain(GainSampler::new(p).sample(rng))
}
