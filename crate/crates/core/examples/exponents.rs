//! Rate-diversity trade-off: Singleton, optimal and random-coding exponents.
//!
//! cargo run --release --example exponents

use nakfade::asymptotics::{diversity_report, BlockLengthScale};
use nakfade::bound::ChannelSpec;
use nakfade::fading::NakagamiParam;

fn main() -> nakfade::error::Result<()> {
    let m = NakagamiParam::new(2.0)?;
    let low = BlockLengthScale::from_scaled(0.5, 4, m)?;
    let high = BlockLengthScale::from_scaled(2.0, 4, m)?;
    println!("rate  d_B  m*d_B  d_r(v=0.5)  d_r(v=2)");
    for k in 1..=16 {
        let spec = ChannelSpec::new(4, 4, m, k as f64 * 0.25)?;
        let lo = diversity_report(&spec, low, 512)?;
        let hi = diversity_report(&spec, high, 512)?;
        println!(
            "{:<5} {:<4} {:<6} {:<11.4} {:.4}{}",
            spec.rate(),
            lo.d_singleton,
            lo.d_optimal,
            lo.d_random,
            hi.d_random,
            if lo.on_discontinuity { "  (jump)" } else { "" }
        );
    }
    Ok(())
}
