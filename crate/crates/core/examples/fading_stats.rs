//! Nakagami-m power gain: sampled moments and empirical versus exact CDF.
//!
//! cargo run --release --example fading_stats

use nakfade::fading::{gain_cdf, rician_k_to_m, GainSampler, NakagamiParam};
use nakfade::stream::stream;

fn main() -> nakfade::error::Result<()> {
    let n = 200_000;
    for m in [0.5, 1.0, 2.0, rician_k_to_m(3.0)?.m()] {
        let p = NakagamiParam::new(m)?;
        let sampler = GainSampler::new(p);
        let mut rng = stream(1, 0);
        let mut xs: Vec<f64> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        xs.sort_by(f64::total_cmp);
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = gain_cdf(x, p);
                (f - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - f).abs())
            })
            .fold(0.0, f64::max);
        println!("m={m:<6.4} mean {mean:.4} var {var:.4} (1/m = {:.4})  KS {ks:.2e}", 1.0 / m);
    }
    Ok(())
}
