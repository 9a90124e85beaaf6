//! Coded-modulation mutual information of the built-in constellations.
//!
//! cargo run --release --example mutual_information

use nakfade::constellation::Constellation;
use nakfade::mutual_info::{mi_discrete, mi_gaussian, QuadratureRule, Snr};

fn main() -> nakfade::error::Result<()> {
    let q = QuadratureRule::default();
    let names = ["psk2", "psk4", "psk8", "qam16", "qam64"];
    let cs: Vec<Constellation> = names.iter().map(|n| Constellation::from_name(n)).collect::<Result<_, _>>()?;
    print!("snr_db  gauss  ");
    for c in &cs {
        print!("{:<7}", c.name());
    }
    println!();
    for db in (-10..=30).step_by(5) {
        let snr = Snr::from_db(db as f64)?;
        print!("{db:<7} {:<6.3} ", mi_gaussian(snr));
        for c in &cs {
            print!("{:<7.4}", mi_discrete(snr, c, &q));
        }
        println!();
    }
    Ok(())
}
