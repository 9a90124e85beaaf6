//! Monte Carlo estimates next to the analytical bound.
//!
//! cargo run --release --example monte_carlo

use nakfade::bound::{outage_lower_bound, ChannelSpec, DEFAULT_CELLS};
use nakfade::constellation::Constellation;
use nakfade::fading::NakagamiParam;
use nakfade::montecarlo::{mc_lower_bound, mc_outage_with_table};
use nakfade::mutual_info::{MiTable, QuadratureRule, Snr};

fn main() -> nakfade::error::Result<()> {
    let spec = ChannelSpec::new(4, 4, NakagamiParam::new(0.5)?, 2.0)?;
    let table = MiTable::new(&Constellation::from_name("qam16")?, &QuadratureRule::default());
    let n = 200_000;
    println!("snr_db  bound       mc_bound (±se)          mc_outage 16-QAM (±se)");
    for db in [5.0, 10.0, 15.0, 20.0] {
        let snr = Snr::from_db(db)?;
        let bound = outage_lower_bound(snr, &spec, DEFAULT_CELLS)?.value;
        let lb = mc_lower_bound(snr, &spec, n, 42)?;
        let out = mc_outage_with_table(snr, &spec, &table, n, 42)?;
        println!(
            "{db:<7} {bound:.4e}  {:.4e} ({:.1e})  {:.4e} ({:.1e})",
            lb.p_hat, lb.std_err, out.p_hat, out.std_err
        );
    }
    Ok(())
}
