use proptest::prelude::*;
use redcap_core::linkbudget::{
    bottleneck, fr2_trp_sensitivity, mil, recovery_for_profiles, Channel, ChannelLinkParams, SnrTable,
};
use redcap_core::model::{builtin_profile, CapabilityProfile, DeploymentKind, DeploymentScenario, Direction, ProfileKind};

fn fr1(kind: ProfileKind, rx: u32) -> CapabilityProfile {
    let mut p = builtin_profile(kind);
    p.rx_branches = rx;
    CapabilityProfile::new(p).unwrap()
}

fn umi_flags(rx: u32) -> Vec<Channel> {
    let d = DeploymentScenario::preset(DeploymentKind::UrbanMicroFR1);
    let r = recovery_for_profiles::<f64>(
        &d,
        &fr1(ProfileKind::RedCapBaselineFr1, rx),
        &builtin_profile(ProfileKind::ReferenceNrFr1),
        &SnrTable::builtin(),
        0.0,
    )
    .unwrap();
    r.flagged()
}

#[test]
fn urban_micro_single_rx_flags_msg2_only() {
    let flags = umi_flags(1);
    assert!(flags.contains(&Channel::Msg2Pdsch));
    assert!(flags.iter().all(|c| c.direction() == Direction::DL), "{flags:?}");
    assert!(umi_flags(2).is_empty());
}

#[test]
fn fr2_trp_sweep() {
    let d = DeploymentScenario::preset(DeploymentKind::IndoorFR2);
    let hi = fr2_trp_sensitivity::<f64>(&d, 23.0).unwrap().flagged();
    assert_eq!(hi, vec![Channel::Msg2Pdsch, Channel::Msg4Pdsch, Channel::Pdsch]);
    assert!(fr2_trp_sensitivity::<f64>(&d, 12.0).unwrap().flagged().is_empty());
}

#[test]
fn efficiency_toggle_shifts_every_mil_by_three_db() {
    let snr = SnrTable::builtin();
    for kind in [
        DeploymentKind::RuralFR1,
        DeploymentKind::UrbanMacroFR1,
        DeploymentKind::UrbanMicroFR1,
        DeploymentKind::IndoorFR2,
    ] {
        let d = DeploymentScenario::preset(kind);
        let (rc, rf) = if kind == DeploymentKind::IndoorFR2 {
            (ProfileKind::RedCapBaselineFr2, ProfileKind::ReferenceNrFr2)
        } else {
            (ProfileKind::RedCapBaselineFr1, ProfileKind::ReferenceNrFr1)
        };
        let (rc, rf) = (builtin_profile(rc), builtin_profile(rf));
        let off = recovery_for_profiles::<f64>(&d, &rc, &rf, &snr, 0.0).unwrap();
        let on = recovery_for_profiles::<f64>(&d, &rc, &rf, &snr, 3.0).unwrap();
        for (a, b) in off.entries.iter().zip(&on.entries) {
            assert_eq!(a.channel, b.channel);
            assert!((b.mil_db - a.mil_db + 3.0).abs() < 1e-12, "{kind} {}", a.channel);
        }
        assert_eq!(off.reference_bottleneck_mil_db, on.reference_bottleneck_mil_db);
    }
}

#[test]
fn single_precision_report_matches() {
    let d = DeploymentScenario::preset(DeploymentKind::IndoorFR2);
    let a = fr2_trp_sensitivity::<f32>(&d, 23.0).unwrap();
    let b = fr2_trp_sensitivity::<f64>(&d, 23.0).unwrap();
    assert_eq!(a.flagged(), b.flagged());
    for (x, y) in a.entries.iter().zip(&b.entries) {
        assert!((f64::from(x.mil_db) - y.mil_db).abs() < 1e-3);
    }
}

fn params(tx: f64, snr: f64, nf: f64, bw: f64, ch: Channel) -> ChannelLinkParams<f64> {
    ChannelLinkParams {
        channel: ch,
        direction: ch.direction(),
        tx_power_dbm: tx,
        tx_bf_gain_db: 0.0,
        rx_bf_gain_db: 0.0,
        required_snr_db: snr,
        noise_figure_db: nf,
        occupied_bandwidth_hz: bw,
        antenna_efficiency_penalty_db: 0.0,
    }
}

// Linear-domain recomputation: kTB at 290 K with Boltzmann's constant.
fn mil_linear(tx_dbm: f64, snr_db: f64, nf_db: f64, bw_hz: f64) -> f64 {
    let k = 1.380649e-23;
    let noise_mw = k * 290.0 * bw_hz * 1e3;
    let lin = |db: f64| 10f64.powf(db / 10.0);
    let sensitivity_mw = noise_mw * lin(nf_db) * lin(snr_db);
    10.0 * (lin(tx_dbm) / sensitivity_mw).log10()
}

fn arb_channel() -> impl Strategy<Value = Channel> {
    prop::sample::select(Channel::ALL.to_vec())
}

proptest! {
    #[test]
    fn mil_matches_linear_oracle(tx in -10.0f64..60.0, snr in -10.0f64..20.0, nf in 0.0f64..15.0, bw in 1e4f64..4e8) {
        let m = mil(&params(tx, snr, nf, bw, Channel::Pusch)).unwrap();
        // -174 dBm/Hz is kT rounded, so allow the rounding gap.
        prop_assert!((m - mil_linear(tx, snr, nf, bw)).abs() < 0.03);
    }

    #[test]
    fn one_db_sensitivities(tx in -10.0f64..60.0, snr in -10.0f64..20.0, nf in 0.0f64..15.0, bw in 1e4f64..4e8) {
        let base = mil(&params(tx, snr, nf, bw, Channel::Pucch)).unwrap();
        let eps = 1e-9;
        prop_assert!((mil(&params(tx + 1.0, snr, nf, bw, Channel::Pucch)).unwrap() - base - 1.0).abs() < eps);
        prop_assert!((mil(&params(tx, snr + 1.0, nf, bw, Channel::Pucch)).unwrap() - base + 1.0).abs() < eps);
        prop_assert!((mil(&params(tx, snr, nf + 1.0, bw, Channel::Pucch)).unwrap() - base + 1.0).abs() < eps);
        let doubled = mil(&params(tx, snr, nf, 2.0 * bw, Channel::Pucch)).unwrap();
        prop_assert!((base - doubled - 10.0 * 2f64.log10()).abs() < eps);
    }

    #[test]
    fn bottleneck_is_minimum_and_order_free(
        mils in prop::collection::vec((arb_channel(), -20i32..20), 1..12),
        rotate in 0usize..12,
    ) {
        let set: Vec<_> = mils.iter().map(|&(c, m)| (params(0.0, 0.0, 0.0, 1e6, c), f64::from(m))).collect();
        let (ch, m) = bottleneck(&set).unwrap();
        prop_assert!(set.iter().all(|(_, x)| m <= *x));
        let best = set.iter().filter(|(_, x)| *x == m).map(|(p, _)| p.channel).min().unwrap();
        prop_assert_eq!(ch, best);
        let mut rotated = set.clone();
        rotated.rotate_left(rotate % set.len());
        prop_assert_eq!(bottleneck(&rotated).unwrap(), (ch, m));
    }

    #[test]
    fn penalty_shift_is_exact(penalty in 0.0f64..10.0) {
        let d = DeploymentScenario::preset(DeploymentKind::UrbanMacroFR1);
        let rc = builtin_profile(ProfileKind::RedCapBaselineFr1);
        let rf = builtin_profile(ProfileKind::ReferenceNrFr1);
        let snr = SnrTable::builtin();
        let a = recovery_for_profiles::<f64>(&d, &rc, &rf, &snr, 0.0).unwrap();
        let b = recovery_for_profiles::<f64>(&d, &rc, &rf, &snr, penalty).unwrap();
        for (x, y) in a.entries.iter().zip(&b.entries) {
            prop_assert!((x.mil_db - y.mil_db - penalty).abs() < 1e-9);
            prop_assert!(y.recovery_db >= x.recovery_db);
        }
    }
}
