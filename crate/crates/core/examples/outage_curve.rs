//! Lower bound on outage probability versus SNR for B=4, M=4 and several m.
//!
//! cargo run --release --example outage_curve

use nakfade::bound::{outage_lower_bound, ChannelSpec, DEFAULT_CELLS};
use nakfade::fading::NakagamiParam;
use nakfade::mutual_info::Snr;

fn main() -> nakfade::error::Result<()> {
    let ms = [0.5, 1.0, 2.0];
    print!("snr_db");
    for m in ms {
        print!(",m={m}");
    }
    println!();
    for db in (0..=40).step_by(5) {
        let snr = Snr::from_db(db as f64)?;
        print!("{db}");
        for m in ms {
            let spec = ChannelSpec::new(4, 4, NakagamiParam::new(m)?, 1.0)?;
            print!(",{:.4e}", outage_lower_bound(snr, &spec, DEFAULT_CELLS)?.value);
        }
        println!();
    }
    Ok(())
}
