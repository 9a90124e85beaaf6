//! Analytical lower bound on the information outage probability.
//!
//! Capping each block's mutual information at `min{M, log2(1 + γρ)}` splits
//! the blocks into saturated ones (`γ > (2^M - 1)/ρ`, a binomial count with
//! success rate `p`) and the rest, whose mutual informations are i.i.d.
//! copies of a conditioned variable `A` on `[0, M]`. The bound is
//!
//! ```text
//! P_low = Σ_{t=0}^{⌈BR/M⌉-1} F_{Y_t}(BR - tM) · C(B,t) p^t (1-p)^{B-t}
//! ```
//!
//! where `Y_t` is the sum of `B - t` copies of `A`, obtained by FFT
//! self-convolution of a tabulated pmf of `A`.

mod pmf;

pub use pmf::{cdf_y_at, convolve_power, TabulatedPmf};
pub(crate) use pmf::SelfConvolver;

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::fading::{gamma_p, gamma_pq, ln_gamma, NakagamiParam};
use crate::mutual_info::Snr;

/// Grid cells over `[0, M]` unless configured otherwise.
pub const DEFAULT_CELLS: usize = 4096;

/// Tolerance used to decide that a rate expression sits on an integer.
pub(crate) const INTEGER_SNAP: f64 = 1e-12;

pub(crate) fn snap_to_integer(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= INTEGER_SNAP * r.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// A block-fading channel instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    blocks: u32,
    bits: u32,
    fading: NakagamiParam,
    rate: f64,
}

impl ChannelSpec {
    /// `blocks >= 1`, `1 <= bits <= 16`, `0 < rate <= bits`.
    pub fn new(blocks: u32, bits: u32, fading: NakagamiParam, rate: f64) -> Result<Self> {
        if blocks == 0 {
            return Err(Error::domain("number of blocks must be at least 1"));
        }
        if bits == 0 || bits > 16 {
            return Err(Error::domain(format!("bits per symbol must be in 1..=16, got {bits}")));
        }
        if !(rate > 0.0 && rate <= bits as f64) {
            return Err(Error::domain(format!("rate must lie in (0, {bits}], got {rate}")));
        }
        Ok(Self { blocks, bits, fading, rate })
    }

    pub fn blocks(&self) -> u32 {
        self.blocks
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn fading(&self) -> NakagamiParam {
        self.fading
    }

    pub fn m(&self) -> f64 {
        self.fading.m()
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn with_rate(&self, rate: f64) -> Result<Self> {
        Self::new(self.blocks, self.bits, self.fading, rate)
    }

    /// `2^M - 1`, the SNR at which the capped mutual information saturates.
    pub(crate) fn saturation_snr(&self) -> f64 {
        (self.bits as f64 * LN_2).exp_m1()
    }

    /// `⌈BR/M⌉`, the number of nonzero terms in the bound.
    pub fn term_count(&self) -> usize {
        let x = snap_to_integer(self.blocks as f64 * self.rate / self.bits as f64);
        x.ceil() as usize
    }
}

/// Probability that a block saturates, `p = Γ(m, m(2^M-1)/ρ)/Γ(m)`.
pub fn success_rate(snr: Snr, spec: &ChannelSpec) -> f64 {
    success_and_failure(snr, spec).0
}

/// `(p, 1 - p)`, each computed without cancellation.
pub fn success_and_failure(snr: Snr, spec: &ChannelSpec) -> (f64, f64) {
    if snr.rho() <= 0.0 {
        return (0.0, 1.0);
    }
    let m = spec.m();
    let (lower, upper) = gamma_pq(m, m * spec.saturation_snr() / snr.rho());
    (upper, lower)
}

/// Distribution function of `A = log2(1 + γρ)` given `γ <= (2^M-1)/ρ`.
pub fn conditional_cdf_a(xi: f64, snr: Snr, spec: &ChannelSpec) -> f64 {
    let bits = spec.bits as f64;
    if xi <= 0.0 {
        return 0.0;
    }
    if xi >= bits {
        return 1.0;
    }
    let m = spec.m();
    let rho = snr.rho();
    let num_snr = (xi * LN_2).exp_m1();
    let den = gamma_p(m, m * spec.saturation_snr() / rho);
    if den < 1e-290 {
        // Both tails are deep in their power-law regime; use the limit law.
        return (num_snr / spec.saturation_snr()).powf(m).clamp(0.0, 1.0);
    }
    (gamma_p(m, m * num_snr / rho) / den).clamp(0.0, 1.0)
}

/// Tabulates the law of `A` on `n_cells` cells over `[0, M]`.
pub fn build_pmf_a(snr: Snr, spec: &ChannelSpec, n_cells: usize) -> Result<TabulatedPmf> {
    if !(snr.rho() > 0.0) {
        return Err(Error::domain("SNR must be positive"));
    }
    TabulatedPmf::from_cdf(spec.bits as f64, n_cells, |xi| conditional_cdf_a(xi, snr, spec))
}

/// `ln C(n, k)` through log-gamma, rounded to the exact integer while the
/// coefficient fits in the mantissa.
pub(crate) fn ln_binomial(n: u32, k: u32) -> f64 {
    let ln_choose = ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0);
    let choose = ln_choose.exp();
    if choose < 1e15 {
        choose.round().ln()
    } else {
        ln_choose
    }
}

/// Law of the number of saturated blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialMixture {
    success_rate: f64,
    blocks: u32,
    weights: Vec<f64>,
}

impl BinomialMixture {
    pub fn new(success_rate: f64, blocks: u32) -> Result<Self> {
        Self::from_rates(success_rate, 1.0 - success_rate, blocks)
    }

    /// Takes `1 - p` separately so it keeps relative precision when `p ≈ 1`.
    pub fn from_rates(p: f64, q: f64, blocks: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
            return Err(Error::domain(format!("rates must lie in [0, 1], got p = {p}, q = {q}")));
        }
        let weights = (0..=blocks)
            .map(|t| {
                let s = blocks - t;
                let ln_choose = ln_binomial(blocks, t);
                let ln_p = if t == 0 { 0.0 } else { t as f64 * p.ln() };
                let ln_q = if s == 0 { 0.0 } else { s as f64 * q.ln() };
                (ln_choose + ln_p + ln_q).exp()
            })
            .collect();
        Ok(Self { success_rate: p, blocks, weights })
    }

    pub fn success_rate(&self) -> f64 {
        self.success_rate
    }

    pub fn blocks(&self) -> u32 {
        self.blocks
    }

    /// `weights()[t] = C(B,t) p^t (1-p)^{B-t}`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// One summand of the bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundTerm {
    /// Number of saturated blocks.
    pub t: usize,
    /// `F_{Y_t}(BR - tM)`.
    pub cdf: f64,
    /// `C(B,t) p^t (1-p)^{B-t}`.
    pub weight: f64,
    pub product: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub value: f64,
    pub terms: Vec<BoundTerm>,
}

/// Evaluates the outage lower bound at one SNR.
pub fn outage_lower_bound(snr: Snr, spec: &ChannelSpec, n_cells: usize) -> Result<BoundResult> {
    let pmf = build_pmf_a(snr, spec, n_cells)?;
    let (p, q) = success_and_failure(snr, spec);
    let mixture = BinomialMixture::from_rates(p, q, spec.blocks)?;
    let b = spec.blocks as usize;
    let mut convolver = SelfConvolver::new(&pmf, b);
    let target = spec.blocks as f64 * spec.rate;
    let terms: Vec<BoundTerm> = (0..spec.term_count())
        .map(|t| {
            let y = convolver.power(b - t);
            let cdf = y.cdf(target - t as f64 * spec.bits as f64);
            let weight = mixture.weights[t];
            BoundTerm { t, cdf, weight, product: cdf * weight }
        })
        .collect();
    let value = terms.iter().map(|t| t.product).sum::<f64>();
    if !value.is_finite() {
        return Err(Error::Numerical(format!("bound is not finite at rho = {}", snr.rho())));
    }
    Ok(BoundResult { value: value.clamp(0.0, 1.0), terms })
}
