//! Bound versus its high-SNR asymptote `K rho^{-m d_B}`.
//!
//! cargo run --release --example asymptote

use nakfade::asymptotics::{optimal_exponent, Asymptote};
use nakfade::bound::{outage_lower_bound, ChannelSpec, DEFAULT_CELLS};
use nakfade::fading::NakagamiParam;
use nakfade::mutual_info::Snr;

fn main() -> nakfade::error::Result<()> {
    for rate in [1.0, 2.0, 3.0] {
        let spec = ChannelSpec::new(4, 4, NakagamiParam::new(2.0)?, rate)?;
        let asym = Asymptote::new(&spec, DEFAULT_CELLS)?;
        println!(
            "R={rate}: coding gain K={:.6e}, exponent {}",
            asym.coding_gain,
            optimal_exponent(&spec).value
        );
        for db in [10.0, 20.0, 30.0, 40.0] {
            let snr = Snr::from_db(db)?;
            let p = outage_lower_bound(snr, &spec, DEFAULT_CELLS)?.value;
            let a = asym.eval(snr);
            println!("  {db:>4} dB  bound {p:.4e}  asymptote {a:.4e}  ratio {:.4}", p / a);
        }
    }
    Ok(())
}
