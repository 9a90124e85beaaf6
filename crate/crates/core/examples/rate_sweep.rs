//! Outage lower bound against code rate at a fixed SNR, with the per-term
//! breakdown of the binomial mixture.
//!
//! cargo run --release --example rate_sweep -- 15

use nakfade::bound::{outage_lower_bound, ChannelSpec, DEFAULT_CELLS};
use nakfade::fading::NakagamiParam;
use nakfade::mutual_info::Snr;

fn main() -> nakfade::error::Result<()> {
    let db: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10.0);
    let snr = Snr::from_db(db)?;
    let base = ChannelSpec::new(4, 4, NakagamiParam::new(2.0)?, 1.0)?;
    println!("SNR {db} dB, B=4, M=4, m=2");
    for k in 1..16 {
        let spec = base.with_rate(k as f64 * 0.25)?;
        let res = outage_lower_bound(snr, &spec, DEFAULT_CELLS)?;
        let terms: Vec<String> = res.terms.iter().map(|t| format!("t{}={:.2e}", t.t, t.product)).collect();
        println!("R={:<5} P>={:.4e}  [{}]", spec.rate(), res.value, terms.join(" "));
    }
    Ok(())
}
