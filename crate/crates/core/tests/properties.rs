use nakfade::bound::{convolve_power, outage_lower_bound, ChannelSpec, TabulatedPmf};
use nakfade::fading::{gain_cdf, gamma_p, gamma_q, ln_gamma, NakagamiParam};
use nakfade::mutual_info::Snr;
use proptest::prelude::*;

fn spec(blocks: u32, m: f64, rate: f64) -> ChannelSpec {
    ChannelSpec::new(blocks, 4, NakagamiParam::new(m).unwrap(), rate).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ln_gamma_recurrence(x in 0.05f64..80.0) {
        let lhs = ln_gamma(x + 1.0);
        let rhs = ln_gamma(x) + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn incomplete_gamma_complements(a in 0.1f64..30.0, x in 0.0f64..60.0) {
        let (p, q) = (gamma_p(a, x), gamma_q(a, x));
        prop_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
        prop_assert!((p + q - 1.0).abs() < 1e-13);
    }

    #[test]
    fn gain_cdf_monotone(m in 0.3f64..8.0, a in 0.0f64..10.0, d in 0.0f64..5.0) {
        let p = NakagamiParam::new(m).unwrap();
        prop_assert!(gain_cdf(a, p) <= gain_cdf(a + d, p) + 1e-15);
    }

    #[test]
    fn bound_is_a_probability(blocks in 1u32..6, m in 0.5f64..4.0, rate in 0.1f64..4.0, db in -10.0f64..45.0) {
        let r = outage_lower_bound(Snr::from_db(db).unwrap(), &spec(blocks, m, rate), 512).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.value));
        let weights: f64 = r.terms.iter().map(|t| t.weight).sum();
        prop_assert!(weights <= 1.0 + 1e-12);
    }

    #[test]
    fn bound_monotone_in_snr_and_rate(m in 0.5f64..4.0, rate in 0.2f64..3.5, db in -5.0f64..35.0) {
        let s = spec(4, m, rate);
        let here = outage_lower_bound(Snr::from_db(db).unwrap(), &s, 1024).unwrap().value;
        let louder = outage_lower_bound(Snr::from_db(db + 3.0).unwrap(), &s, 1024).unwrap().value;
        let faster = outage_lower_bound(Snr::from_db(db).unwrap(), &s.with_rate(rate + 0.5).unwrap(), 1024).unwrap().value;
        prop_assert!(louder <= here * (1.0 + 1e-9) + 1e-300);
        prop_assert!(faster >= here * (1.0 - 1e-9));
    }

    #[test]
    fn convolution_keeps_unit_mass(raw in prop::collection::vec(0.0f64..1.0, 2..200), n in 1usize..6) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-3);
        let masses: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let pmf = TabulatedPmf::new(0.01, 0.0, masses).unwrap();
        let y = convolve_power(&pmf, n).unwrap();
        prop_assert!((y.total_mass() - 1.0).abs() < 1e-12);
        prop_assert!(y.masses().iter().all(|&v| v >= 0.0));
    }
}
