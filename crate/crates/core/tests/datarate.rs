use proptest::prelude::*;
use redcap_core::datarate::{hd_fdd_rates, peak_rate, RateParams};
use redcap_core::model::{builtin_profile, CarrierConfig, Direction, DuplexMode, FrequencyRange, ProfileKind};

fn rate(kind: ProfileKind, carrier: &CarrierConfig, dir: Direction) -> f64 {
    let p = builtin_profile(kind);
    peak_rate(&p, carrier, dir, &RateParams::<f64>::max_for(&p, dir)).unwrap()
}

fn within(actual: f64, target: f64, tol: f64) -> bool {
    (actual / target - 1.0).abs() <= tol
}

#[test]
fn redcap_baseline_rates_regression() {
    let fdd = CarrierConfig::new(FrequencyRange::FR1, 15, 20.0, DuplexMode::FdFdd, 1.0).unwrap();
    let tdd = CarrierConfig::new(FrequencyRange::FR1, 30, 20.0, DuplexMode::Tdd, 0.75).unwrap();
    let fr2 = CarrierConfig::new(FrequencyRange::FR2, 120, 100.0, DuplexMode::Tdd, 0.75).unwrap();
    let cases = [
        (ProfileKind::RedCapBaselineFr1, &fdd, Direction::DL, 85.0),
        (ProfileKind::RedCapBaselineFr1, &fdd, Direction::UL, 90.0),
        (ProfileKind::RedCapBaselineFr1, &tdd, Direction::DL, 60.0),
        (ProfileKind::RedCapBaselineFr1, &tdd, Direction::UL, 20.0),
        (ProfileKind::RedCapBaselineFr2, &fr2, Direction::DL, 300.0),
        (ProfileKind::RedCapBaselineFr2, &fr2, Direction::UL, 100.0),
    ];
    for (kind, carrier, dir, target) in cases {
        let r = rate(kind, carrier, dir);
        assert!(within(r, target, 0.15), "{kind:?} {dir} {r} vs {target}");
    }
}

// Independent recomputation from resource-element counts, no library helpers.
#[test]
fn tdd_dl_matches_hand_count() {
    let tdd = CarrierConfig::new(FrequencyRange::FR1, 30, 20.0, DuplexMode::Tdd, 0.75).unwrap();
    let res_per_s = 51.0 * 12.0 * 28_000.0;
    let expected = 6.0 * (948.0 / 1024.0) * res_per_s * (1.0 - 0.14) * 0.75 / 1e6;
    let r = rate(ProfileKind::RedCapBaselineFr1, &tdd, Direction::DL);
    assert!((r - expected).abs() < 1e-9, "{r} vs {expected}");
}

#[test]
fn redcap_below_reference() {
    let tdd = CarrierConfig::new(FrequencyRange::FR1, 30, 20.0, DuplexMode::Tdd, 0.75).unwrap();
    let rc = |dir| rate(ProfileKind::RedCapBaselineFr1, &tdd, dir);
    let reference = |dir| rate(ProfileKind::ReferenceNrFr1, &tdd, dir);
    assert!(rc(Direction::DL) < reference(Direction::DL));
    assert!(rc(Direction::UL) <= reference(Direction::UL));
}

#[test]
fn single_precision_agrees() {
    let fr2 = CarrierConfig::new(FrequencyRange::FR2, 120, 100.0, DuplexMode::Tdd, 0.75).unwrap();
    let p = builtin_profile(ProfileKind::RedCapBaselineFr2);
    let r32 = peak_rate(&p, &fr2, Direction::DL, &RateParams::<f32>::max_for(&p, Direction::DL)).unwrap();
    let r64 = peak_rate(&p, &fr2, Direction::DL, &RateParams::<f64>::max_for(&p, Direction::DL)).unwrap();
    assert!(((r32 as f64) / r64 - 1.0).abs() < 1e-5);
}

proptest! {
    #[test]
    fn rate_scales_linearly(scale in 0.05f64..=1.0, overhead in 0.0f64..0.9, qm in prop::sample::select(vec![2u32, 4, 6])) {
        let p = builtin_profile(ProfileKind::RedCapBaselineFr1);
        let c = CarrierConfig::new(FrequencyRange::FR1, 15, 20.0, DuplexMode::FdFdd, 1.0).unwrap();
        let full = RateParams::<f64>::new(1, qm, 0.9, overhead, 1.0).unwrap();
        let scaled = RateParams::<f64>::new(1, qm, 0.9, overhead, scale).unwrap();
        let a = peak_rate(&p, &c, Direction::DL, &full).unwrap();
        let b = peak_rate(&p, &c, Direction::DL, &scaled).unwrap();
        prop_assert!((b - a * scale).abs() <= 1e-9 * a);
    }

    #[test]
    fn tdd_split_sums_to_fdd(dl in 0.0f64..=1.0) {
        let p = builtin_profile(ProfileKind::RedCapBaselineFr1);
        let params = RateParams::<f64>::new(1, 6, 0.9, 0.1, 1.0).unwrap();
        let tdd = CarrierConfig::new(FrequencyRange::FR1, 30, 20.0, DuplexMode::Tdd, dl).unwrap();
        let fdd = CarrierConfig::new(FrequencyRange::FR1, 30, 20.0, DuplexMode::FdFdd, 1.0).unwrap();
        let sum = peak_rate(&p, &tdd, Direction::DL, &params).unwrap() + peak_rate(&p, &tdd, Direction::UL, &params).unwrap();
        let full = peak_rate(&p, &fdd, Direction::DL, &params).unwrap();
        prop_assert!((sum - full).abs() <= 1e-9 * full);
    }

    #[test]
    fn hd_fdd_never_exceeds_inputs(dl in 0.1f64..500.0, ul in 0.1f64..500.0, share in 0.01f64..0.99) {
        let (d, u) = hd_fdd_rates(dl, ul, share).unwrap();
        prop_assert!(d <= dl && u <= ul);
        prop_assert!((d / dl + u / ul - 1.0).abs() < 1e-12);
    }
}
