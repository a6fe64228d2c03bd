//! Link-budget values against hand evaluation of the UMa formulas.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vehicular_coverage::channel::{
    breakpoint_distance_m, link_budget, link_budget_with_state, los_probability,
    noise_power_dbm, pathloss_uma_median, ChannelParams, LinkGeometry, LosModel,
};

/// Independent evaluation of the below-breakpoint LoS and the NLoS laws.
fn hand_los(d3d: f64, f_ghz: f64) -> f64 {
    28.0 + 22.0 * d3d.log10() + 20.0 * f_ghz.log10()
}

fn hand_nlos(d3d: f64, f_ghz: f64, h_ut: f64) -> f64 {
    let nlos = 13.54 + 39.08 * d3d.log10() + 20.0 * f_ghz.log10() - 0.6 * (h_ut - 1.5);
    nlos.max(hand_los(d3d, f_ghz))
}

fn geometry_with_d3d(d3d: f64, h_bs: f64, h_ut: f64) -> LinkGeometry {
    let dh = h_bs - h_ut;
    LinkGeometry::new((d3d * d3d - dh * dh).sqrt(), h_bs, h_ut).unwrap()
}

#[test]
fn hand_oracle_values() {
    assert!((hand_los(300.0, 3.5) - 93.378).abs() < 1e-3);
    assert!((hand_nlos(300.0, 3.5, 1.5) - 121.227).abs() < 1e-3);
}

#[test]
fn pathloss_matches_hand_values_at_300m() {
    let p = ChannelParams::default();
    let g = geometry_with_d3d(300.0, 25.0, 1.5);
    assert!(g.d2d_m() < breakpoint_distance_m(&p, &g));
    let los = pathloss_uma_median(&p, &g, true).unwrap();
    let nlos = pathloss_uma_median(&p, &g, false).unwrap();
    assert!((los - hand_los(300.0, 3.5)).abs() < 0.01, "{los}");
    assert!((nlos - hand_nlos(300.0, 3.5, 1.5)).abs() < 0.01, "{nlos}");
}

#[test]
fn forced_state_snr_matches_hand_chain() {
    let p = ChannelParams::default();
    let noise = -174.0 + 10.0 * 20e6f64.log10() + 9.0;
    assert!((noise_power_dbm(&p) - noise).abs() < 1e-9);
    assert!((noise - -91.9897).abs() < 1e-4);

    let g = geometry_with_d3d(300.0, 25.0, 1.5);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let los = link_budget_with_state(&p, &g, true, &mut rng).unwrap();
    let nlos = link_budget_with_state(&p, &g, false, &mut rng).unwrap();
    let want_los = 23.0 + 10.0 + 2.0 - hand_los(300.0, 3.5) - noise;
    let want_nlos = 23.0 + 10.0 + 2.0 - hand_nlos(300.0, 3.5, 1.5) - noise;
    assert!((los.snr_db - want_los).abs() < 0.01, "{}", los.snr_db);
    assert!((nlos.snr_db - want_nlos).abs() < 0.01, "{}", nlos.snr_db);
    assert!((want_los - 33.612).abs() < 1e-3);
    assert!((want_nlos - 5.763).abs() < 1e-3);
}

#[test]
fn nlos_never_below_los() {
    let p = ChannelParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..1000 {
        let d = 10f64.powf(rng.random_range(0.0..4.0));
        let h_bs = rng.random_range(10.0..100.0);
        let h_ut = rng.random_range(1.0..2.5);
        let g = LinkGeometry::new(d, h_bs, h_ut).unwrap();
        let los = pathloss_uma_median(&p, &g, true).unwrap();
        let nlos = pathloss_uma_median(&p, &g, false).unwrap();
        assert!(nlos >= los, "d={d} h={h_bs}");
    }
}

#[test]
fn continuous_at_breakpoint() {
    let p = ChannelParams::default();
    for h_bs in [15.0, 25.0, 40.0, 100.0] {
        for h_ut in [1.5, 2.0] {
            let probe = LinkGeometry::new(10.0, h_bs, h_ut).unwrap();
            let d_bp = breakpoint_distance_m(&p, &probe);
            let below = LinkGeometry::new(d_bp, h_bs, h_ut).unwrap();
            let above = LinkGeometry::new(d_bp * (1.0 + 1e-12), h_bs, h_ut).unwrap();
            let a = pathloss_uma_median(&p, &below, true).unwrap();
            let b = pathloss_uma_median(&p, &above, true).unwrap();
            assert!((a - b).abs() < 1e-6, "h_bs={h_bs} h_ut={h_ut}: {a} vs {b}");
        }
    }
}

#[test]
fn los_draws_follow_los_probability() {
    let p = ChannelParams {
        los_model: LosModel::UmaAerialHeightDependent,
        ..Default::default()
    };
    let g = LinkGeometry::new(600.0, 50.0, 1.5).unwrap();
    let prob = los_probability(p.los_model, &g).unwrap();
    let n = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let hits = (0..n)
        .filter(|_| link_budget(&p, &g, &mut rng).unwrap().los)
        .count();
    let frac = hits as f64 / n as f64;
    let se = (prob * (1.0 - prob) / n as f64).sqrt();
    assert!((frac - prob).abs() < 3.0 * se, "{frac} vs {prob}");
}

proptest! {
    #[test]
    fn snr_identity_holds(
        d in 1.0f64..5000.0,
        h_bs in 10.0f64..120.0,
        power in 0.0f64..46.0,
        nf in 0.0f64..12.0,
        los in any::<bool>(),
        shadowing in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let p = ChannelParams {
            tx_power_dbm: power,
            noise_figure_db: nf,
            shadowing_enabled: shadowing,
            ..Default::default()
        };
        let g = LinkGeometry::new(d, h_bs, 1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = link_budget_with_state(&p, &g, los, &mut rng).unwrap();
        let residual = b.snr_db + b.pathloss_db + noise_power_dbm(&p)
            - p.tx_gain_dbi - p.rx_gain_dbi - p.tx_power_dbm;
        prop_assert!(residual.abs() < 1e-9);
        prop_assert_eq!(b.snr_db, p.eirp_plus_rx_gain_dbm() - b.pathloss_db - noise_power_dbm(&p));
    }
}
