//! High-SNR behaviour: Singleton bound, optimal and random-coding SNR
//! exponents, and the coding-gain constant of the outage lower bound.
//!
//! As `ρ → ∞` the conditioned variable `A` converges to a law that does not
//! depend on SNR, with distribution function `((2^ξ - 1)/(2^M - 1))^m` on
//! `[0, M]`, and the bound behaves as `K · ρ^{-m d_B(R)}`.

use std::f64::consts::LN_2;

use crate::bound::{convolve_power, ln_binomial, snap_to_integer, ChannelSpec, TabulatedPmf, DEFAULT_CELLS};
use crate::error::{Error, Result};
use crate::fading::{ln_gamma, NakagamiParam};
use crate::mutual_info::Snr;

fn check_rate(bits: u32, rate: f64) -> Result<()> {
    if bits == 0 || !(rate > 0.0 && rate <= bits as f64) {
        return Err(Error::domain(format!("rate must lie in (0, {bits}], got {rate}")));
    }
    Ok(())
}

/// `B R / M`, snapped onto an integer when it is within round-off of one.
fn normalized_load(blocks: u32, bits: u32, rate: f64) -> f64 {
    snap_to_integer(blocks as f64 * rate / bits as f64)
}

/// Singleton bound `d_B(R) = 1 + ⌊B(1 - R/M)⌋`.
pub fn singleton_bound(blocks: u32, bits: u32, rate: f64) -> Result<u32> {
    check_rate(bits, rate)?;
    if blocks == 0 {
        return Err(Error::domain("number of blocks must be at least 1"));
    }
    // 1 + ⌊B - x⌋ = B + 1 - ⌈x⌉
    Ok(blocks + 1 - normalized_load(blocks, bits, rate).ceil() as u32)
}

/// True where `B(1 - R/M)` is an integer and `d_B` jumps.
pub fn on_discontinuity(blocks: u32, bits: u32, rate: f64) -> bool {
    let x = normalized_load(blocks, bits, rate);
    x == x.round()
}

/// `m · d_B(R)`, with a flag for the rates where optimality is not claimed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalExponent {
    pub value: f64,
    pub on_discontinuity: bool,
}

pub fn optimal_exponent(spec: &ChannelSpec) -> OptimalExponent {
    let d = singleton_bound(spec.blocks(), spec.bits(), spec.rate()).expect("spec holds a valid rate");
    OptimalExponent {
        value: spec.m() * d as f64,
        on_discontinuity: on_discontinuity(spec.blocks(), spec.bits(), spec.rate()),
    }
}

/// High-SNR limit of the distribution function of `A`.
pub fn asymptotic_cdf_a(xi: f64, bits: u32, m: NakagamiParam) -> f64 {
    let top = bits as f64;
    if xi <= 0.0 {
        return 0.0;
    }
    if xi >= top {
        return 1.0;
    }
    ((xi * LN_2).exp_m1() / (top * LN_2).exp_m1()).powf(m.m()).clamp(0.0, 1.0)
}

/// Tabulates the limit law of `A` on `n_cells` cells over `[0, M]`.
pub fn build_asymptotic_pmf_a(bits: u32, m: NakagamiParam, n_cells: usize) -> Result<TabulatedPmf> {
    TabulatedPmf::from_cdf(bits as f64, n_cells, |xi| asymptotic_cdf_a(xi, bits, m))
}

/// Coding-gain constant `K` of `P_low ≈ K ρ^{-m d_B(R)}`:
///
/// ```text
/// K = F_{Ȳ}(BR - (B - d)M) · C(B, B - d) · (m(2^M - 1))^{m d} / (m Γ(m))^d
/// ```
///
/// with `d = d_B(R)` and `Ȳ` the sum of `d` copies of the limit law of `A`.
pub fn coding_gain(spec: &ChannelSpec, n_cells: usize) -> Result<f64> {
    let d = singleton_bound(spec.blocks(), spec.bits(), spec.rate())?;
    let saturated = spec.blocks() - d;
    let pmf = build_asymptotic_pmf_a(spec.bits(), spec.fading(), n_cells)?;
    let y = convolve_power(&pmf, d as usize)?;
    let x = spec.blocks() as f64 * spec.rate() - saturated as f64 * spec.bits() as f64;
    let cdf = y.cdf(x);
    let m = spec.m();
    let d_f = d as f64;
    let ln_tail = m * d_f * (m * (spec.bits() as f64 * LN_2).exp_m1()).ln() - d_f * (m.ln() + ln_gamma(m));
    let k = cdf * (ln_binomial(spec.blocks(), saturated) + ln_tail).exp();
    if !k.is_finite() {
        return Err(Error::Numerical("coding gain is not finite".into()));
    }
    Ok(k)
}

/// The high-SNR power law `K ρ^{-m d_B(R)}` with a precomputed `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptote {
    pub coding_gain: f64,
    pub exponent: f64,
}

impl Asymptote {
    pub fn new(spec: &ChannelSpec, n_cells: usize) -> Result<Self> {
        Ok(Self {
            coding_gain: coding_gain(spec, n_cells)?,
            exponent: optimal_exponent(spec).value,
        })
    }

    pub fn eval(&self, snr: Snr) -> f64 {
        self.coding_gain * snr.rho().powf(-self.exponent)
    }
}

/// `K ρ^{-m d_B(R)}` at one SNR, with the default grid.
pub fn asymptote(snr: Snr, spec: &ChannelSpec) -> Result<f64> {
    if !(snr.rho() > 0.0) {
        return Err(Error::domain("SNR must be positive"));
    }
    Ok(Asymptote::new(spec, DEFAULT_CELLS)?.eval(snr))
}

/// Growth rate `λ = lim L(ρ) / ln ρ` of the block length of random codes.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BlockLengthScale(f64);

impl BlockLengthScale {
    /// `λ >= 0`; `+∞` stands for block lengths growing faster than `ln ρ`.
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda >= 0.0 {
            Ok(Self(lambda))
        } else {
            Err(Error::domain(format!("block-length scale must be nonnegative, got {lambda}")))
        }
    }

    /// The `λ` with `λ M ln 2 = factor · m`.
    pub fn from_scaled(factor: f64, bits: u32, m: NakagamiParam) -> Result<Self> {
        Self::new(factor * m.m() / (bits as f64 * LN_2))
    }

    pub fn lambda(self) -> f64 {
        self.0
    }
}

/// Achievable SNR exponent of random codes whose block length grows as
/// `λ ln ρ`:
///
/// ```text
/// λBM ln2 (1 - R/M)                                        if λ < m/(M ln2)
/// m(d_B - 1) + min{m, λM ln2 (B(1 - R/M) - d_B + 1)}        otherwise
/// ```
pub fn random_coding_exponent(spec: &ChannelSpec, scale: BlockLengthScale) -> f64 {
    let m = spec.m();
    let bits = spec.bits() as f64;
    let b = spec.blocks() as f64;
    let d = singleton_bound(spec.blocks(), spec.bits(), spec.rate()).expect("spec holds a valid rate") as f64;
    let slack = b - normalized_load(spec.blocks(), spec.bits(), spec.rate());
    let growth = scale.lambda() * bits * LN_2;
    if growth < m {
        growth * slack
    } else {
        let frac = slack - d + 1.0;
        let tail = if frac <= 0.0 { 0.0 } else { growth * frac };
        m * (d - 1.0) + m.min(tail)
    }
}

/// Diversity figures of one rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityReport {
    pub rate: f64,
    pub d_singleton: u32,
    pub d_optimal: f64,
    pub d_random: f64,
    pub coding_gain: f64,
    pub on_discontinuity: bool,
}

pub fn diversity_report(spec: &ChannelSpec, scale: BlockLengthScale, n_cells: usize) -> Result<DiversityReport> {
    let opt = optimal_exponent(spec);
    Ok(DiversityReport {
        rate: spec.rate(),
        d_singleton: singleton_bound(spec.blocks(), spec.bits(), spec.rate())?,
        d_optimal: opt.value,
        d_random: random_coding_exponent(spec, scale),
        coding_gain: coding_gain(spec, n_cells)?,
        on_discontinuity: opt.on_discontinuity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{conditional_cdf_a, outage_lower_bound};

    fn nak(m: f64) -> NakagamiParam {
        NakagamiParam::new(m).unwrap()
    }

    fn spec(b: u32, bits: u32, m: f64, r: f64) -> ChannelSpec {
        ChannelSpec::new(b, bits, nak(m), r).unwrap()
    }

    #[test]
    fn singleton_values() {
        assert_eq!(singleton_bound(4, 4, 1.0).unwrap(), 4);
        assert_eq!(singleton_bound(4, 4, 2.0).unwrap(), 3);
        assert_eq!(singleton_bound(4, 4, 3.0).unwrap(), 2);
        assert_eq!(singleton_bound(4, 4, 4.0).unwrap(), 1);
        assert!(singleton_bound(4, 4, 0.0).is_err());
        assert!(singleton_bound(4, 4, 4.5).is_err());
    }

    #[test]
    fn singleton_jumps_at_expected_rates() {
        let (b, bits) = (5u32, 3u32);
        let mut last = u32::MAX;
        let mut jumps = Vec::new();
        for i in 1..=3000 {
            let r = bits as f64 * i as f64 / 3000.0;
            let d = singleton_bound(b, bits, r).unwrap();
            assert!(d <= last);
            if last != u32::MAX && d != last {
                jumps.push(r);
            }
            last = d;
        }
        // d_B drops just after R = M(1 - k/B).
        let expected: Vec<f64> = (1..b).rev().map(|k| bits as f64 * (1.0 - k as f64 / b as f64)).collect();
        assert_eq!(jumps.len(), expected.len());
        for (got, want) in jumps.iter().zip(&expected) {
            assert!((got - want).abs() <= bits as f64 / 3000.0 + 1e-12);
        }
        assert_eq!(singleton_bound(b, bits, 1.2 - 1e-9).unwrap(), 4);
        assert_eq!(singleton_bound(b, bits, 1.2 + 1e-9).unwrap(), 3);
    }

    #[test]
    fn optimal_exponent_values() {
        assert_eq!(optimal_exponent(&spec(4, 4, 2.0, 1.0)).value, 8.0);
        assert_eq!(optimal_exponent(&spec(4, 4, 0.5, 3.0)).value, 1.0);
        assert!(optimal_exponent(&spec(4, 4, 0.5, 3.0)).on_discontinuity);
        assert!(!optimal_exponent(&spec(4, 4, 0.5, 2.5)).on_discontinuity);
        for r in [0.3, 1.7, 2.9] {
            let s = spec(4, 4, 1.0, r);
            assert_eq!(optimal_exponent(&s).value, singleton_bound(4, 4, r).unwrap() as f64);
        }
    }

    #[test]
    fn asymptotic_cdf_values() {
        assert_eq!(asymptotic_cdf_a(4.0, 4, nak(0.7)), 1.0);
        assert_eq!(asymptotic_cdf_a(0.0, 4, nak(0.7)), 0.0);
        assert!((asymptotic_cdf_a(2.0, 4, nak(1.0)) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_pmf_cumulates_to_limit_law() {
        let pmf = build_asymptotic_pmf_a(4, nak(0.5), 2048).unwrap();
        let mut cum = 0.0;
        for (k, m) in pmf.masses().iter().enumerate() {
            cum += m;
            let xi = (k + 1) as f64 * 4.0 / 2048.0;
            let want = ((2f64.powf(xi) - 1.0) / 15.0).powf(0.5);
            assert!((cum - want).abs() < 1e-12);
        }
    }

    #[test]
    fn conditional_law_converges_to_limit() {
        for m in [0.5, 1.0, 2.0] {
            let s = spec(4, 4, m, 1.0);
            let rho = Snr::new(1e8).unwrap();
            let worst = (0..=400)
                .map(|i| i as f64 * 0.01)
                .map(|xi| (conditional_cdf_a(xi, rho, &s) - asymptotic_cdf_a(xi, 4, nak(m))).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-4, "m = {m}: {worst}");
        }
    }

    #[test]
    fn single_block_rayleigh_gain() {
        for r in [0.5, 1.0, 2.0, 3.0] {
            let k = coding_gain(&spec(1, 4, 1.0, r), DEFAULT_CELLS).unwrap();
            assert!((k - (2f64.powf(r) - 1.0)).abs() < 1e-6, "R = {r}: {k}");
        }
        let a = asymptote(Snr::new(1e3).unwrap(), &spec(1, 4, 1.0, 2.0)).unwrap();
        assert!((a - 3e-3).abs() < 1e-9);
    }

    #[test]
    fn asymptote_is_a_power_law() {
        let s = spec(4, 4, 2.0, 1.0);
        let a = Asymptote::new(&s, 1024).unwrap();
        let ratio = a.eval(Snr::new(1e4).unwrap()) / a.eval(Snr::new(1e5).unwrap());
        assert!((ratio / 1e8 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coding_gain_against_direct_convolution() {
        // Same constant from a direct O(N²) four-fold convolution.
        let s = spec(4, 4, 2.0, 1.0);
        let n = 512;
        let pmf = build_asymptotic_pmf_a(4, nak(2.0), n).unwrap();
        let mut acc = pmf.masses().to_vec();
        for _ in 1..4 {
            let mut next = vec![0.0; acc.len() + n - 1];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in pmf.masses().iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            acc = next;
        }
        // Four midpoints sum to 1.5 cells above the output cell's left edge.
        let step = 4.0 / n as f64;
        let pos = (4.0 - 1.5 * step) / step;
        let k = pos.floor() as usize;
        let cdf = acc[..k].iter().sum::<f64>() + (pos - k as f64) * acc[k];
        let want = cdf * (2.0f64 * 15.0).powi(8) / 2.0f64.powi(4);
        let got = coding_gain(&s, n).unwrap();
        assert!(((got - want) / want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn bound_approaches_asymptote() {
        let s = spec(4, 4, 2.0, 2.0);
        let a = Asymptote::new(&s, DEFAULT_CELLS).unwrap();
        let gap = |db: f64| {
            let snr = Snr::from_db(db).unwrap();
            (outage_lower_bound(snr, &s, DEFAULT_CELLS).unwrap().value / a.eval(snr) - 1.0).abs()
        };
        assert!(gap(40.0) < gap(20.0));
        assert!(gap(50.0) < 0.05);
    }

    #[test]
    fn random_coding_values() {
        let s = spec(4, 4, 2.0, 1.0);
        let scale = BlockLengthScale::from_scaled(0.5, 4, nak(2.0)).unwrap();
        assert!((random_coding_exponent(&s, scale) - 3.0).abs() < 1e-12);
        let full = spec(4, 4, 2.0, 4.0);
        for f in [0.5, 1.0, 2.0, 100.0] {
            let scale = BlockLengthScale::from_scaled(f, 4, nak(2.0)).unwrap();
            assert!(random_coding_exponent(&full, scale).abs() < 1e-12);
        }
        let s = spec(4, 4, 2.0, 1.3);
        let inf = BlockLengthScale::new(f64::INFINITY).unwrap();
        assert_eq!(random_coding_exponent(&s, inf), optimal_exponent(&s).value);
        assert!(BlockLengthScale::new(-1.0).is_err());
    }

    #[test]
    fn random_coding_bounded_and_continuous() {
        for m in [0.5, 2.0] {
            let lambdas: Vec<f64> = [0.5, 1.0, 2.0]
                .iter()
                .map(|f| f * m / (4.0 * LN_2))
                .chain([1e3])
                .collect();
            for i in 0..200 {
                let r = 4.0 * (i as f64 + 0.5) / 200.0;
                let s = spec(4, 4, m, r);
                for &l in &lambdas {
                    let d = random_coding_exponent(&s, BlockLengthScale::new(l).unwrap());
                    assert!(d <= optimal_exponent(&s).value + 1e-12);
                }
                let at = m / (4.0 * LN_2);
                let below = random_coding_exponent(&s, BlockLengthScale::new(at * (1.0 - 1e-12)).unwrap());
                let above = random_coding_exponent(&s, BlockLengthScale::new(at).unwrap());
                assert!((below - above).abs() < 1e-9, "m = {m}, R = {r}");
            }
        }
    }
}
