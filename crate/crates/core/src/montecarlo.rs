//! Seeded Monte Carlo estimators of the outage probability and of the
//! capped-information lower bound, used as oracles for [`crate::bound`].
//!
//! Samples are split into fixed batches of [`BATCH_SIZE`]; batch `i` draws
//! from stream `(seed, i)`. Batches are tallied as exact integer counts, so
//! an estimate depends only on `(seed, n, parameters)` and never on the
//! number of worker threads. Both estimators consume the stream identically,
//! so under a shared seed they see the same fading realizations.

use rayon::prelude::*;

use crate::bound::ChannelSpec;
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::fading::GainSampler;
use crate::mutual_info::{MiTable, QuadratureRule, Snr};
use crate::stream::{stream, RandomStream};

/// Samples drawn from one random stream.
pub const BATCH_SIZE: u64 = 4096;

/// A binomial-proportion estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    /// `sqrt(p_hat (1 - p_hat) / n)`.
    pub std_err: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub events: u64,
}

impl McEstimate {
    pub fn from_count(events: u64, n_samples: u64, seed: u64) -> Self {
        let p_hat = events as f64 / n_samples as f64;
        let std_err = (p_hat * (1.0 - p_hat) / n_samples as f64).sqrt();
        Self { p_hat, std_err, n_samples, seed, events }
    }

    /// Standard error of the difference of two independent estimates.
    pub fn pooled_std_err(&self, other: &McEstimate) -> f64 {
        self.std_err.hypot(other.std_err)
    }
}

fn count_events<F>(n: u64, seed: u64, event: F) -> u64
where
    F: Fn(&mut RandomStream) -> bool + Sync,
{
    let batches = n.div_ceil(BATCH_SIZE);
    (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, b);
            let len = BATCH_SIZE.min(n - b * BATCH_SIZE);
            (0..len).filter(|_| event(&mut rng)).count() as u64
        })
        .sum()
}

fn check_samples(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("number of samples must be positive"));
    }
    Ok(())
}

/// Outage probability `Pr((1/B) Σ_b I(γ_b ρ) < R)` with discrete inputs.
///
/// Builds the mutual-information table for `c` first; use
/// [`mc_outage_with_table`] to reuse one across SNR points.
pub fn mc_outage(
    snr: Snr,
    spec: &ChannelSpec,
    c: &Constellation,
    q: &QuadratureRule,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    if c.bits() != spec.bits() {
        return Err(Error::domain(format!(
            "constellation {} carries {} bits, channel expects {}",
            c,
            c.bits(),
            spec.bits()
        )));
    }
    mc_outage_with_table(snr, spec, &MiTable::new(c, q), n, seed)
}

pub fn mc_outage_with_table(
    snr: Snr,
    spec: &ChannelSpec,
    table: &MiTable,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_samples(n)?;
    if table.bits() != spec.bits() {
        return Err(Error::domain("mutual information table does not match the channel's bits"));
    }
    let sampler = GainSampler::new(spec.fading());
    let blocks = spec.blocks();
    let (rho, rate) = (snr.rho(), spec.rate());
    let events = count_events(n, seed, |rng| {
        let total: f64 = (0..blocks).map(|_| table.eval(sampler.sample(rng) * rho)).sum();
        total / (blocks as f64) < rate
    });
    Ok(McEstimate::from_count(events, n, seed))
}

/// `Pr((1/B) Σ_b min{M, log2(1 + γ_b ρ)} < R)`, the quantity the analytical
/// bound evaluates.
pub fn mc_lower_bound(snr: Snr, spec: &ChannelSpec, n: u64, seed: u64) -> Result<McEstimate> {
    check_samples(n)?;
    let sampler = GainSampler::new(spec.fading());
    let blocks = spec.blocks();
    let bits = spec.bits() as f64;
    let (rho, rate) = (snr.rho(), spec.rate());
    let events = count_events(n, seed, |rng| {
        let total: f64 = (0..blocks)
            .map(|_| (sampler.sample(rng) * rho).ln_1p().min(bits * std::f64::consts::LN_2))
            .sum::<f64>()
            / std::f64::consts::LN_2;
        total / (blocks as f64) < rate
    });
    Ok(McEstimate::from_count(events, n, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::make_qam;
    use crate::fading::NakagamiParam;

    fn spec(m: f64, r: f64) -> ChannelSpec {
        ChannelSpec::new(4, 4, NakagamiParam::new(m).unwrap(), r).unwrap()
    }

    #[test]
    fn std_err_formula() {
        let e = McEstimate::from_count(250, 1000, 1);
        assert_eq!(e.p_hat, 0.25);
        assert!((e.std_err - (0.25f64 * 0.75 / 1000.0).sqrt()).abs() < 1e-12);
        assert!(mc_lower_bound(Snr::new(1.0).unwrap(), &spec(1.0, 1.0), 0, 0).is_err());
    }

    #[test]
    fn lower_bound_extremes() {
        let s = spec(2.0, 1.0);
        let e = mc_lower_bound(Snr::new(1e12).unwrap(), &s, 10_000, 3).unwrap();
        assert_eq!(e.p_hat, 0.0);
        let e = mc_lower_bound(Snr::new(1e-9).unwrap(), &s, 10_000, 3).unwrap();
        assert_eq!(e.p_hat, 1.0);
    }

    #[test]
    fn outage_at_vanishing_snr() {
        let c = make_qam(4).unwrap();
        let q = QuadratureRule::gauss_hermite(16).unwrap();
        let e = mc_outage(Snr::new(1e-9).unwrap(), &spec(2.0, 1.0), &c, &q, 10_000, 9).unwrap();
        assert_eq!(e.p_hat, 1.0);
    }

    #[test]
    fn rejects_mismatched_constellation() {
        let c = make_qam(2).unwrap();
        let q = QuadratureRule::gauss_hermite(8).unwrap();
        assert!(mc_outage(Snr::new(10.0).unwrap(), &spec(1.0, 1.0), &c, &q, 10, 0).is_err());
    }

    #[test]
    fn reproducible_across_thread_counts() {
        let s = spec(0.5, 2.0);
        let snr = Snr::from_db(10.0).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_lower_bound(snr, &s, 50_000, 77).unwrap())
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(a, b);
        assert_eq!(a.p_hat.to_bits(), b.p_hat.to_bits());
        assert_ne!(a, mc_lower_bound(snr, &s, 50_000, 78).unwrap());
    }
}
