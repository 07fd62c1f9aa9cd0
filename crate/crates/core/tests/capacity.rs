use redcap_core::capacity::{
    offered_load, run_capacity_sim, spectral_efficiency, CapacityScenario, LoadAxis, Scheduler, ThroughputReport,
    TrafficModel,
};
use redcap_core::model::{builtin_profile, ProfileKind};

const SCHEDULERS: [Scheduler; 2] = [Scheduler::RoundRobin, Scheduler::ProportionalFair];

fn light(scheduler: Scheduler, fraction: f64) -> CapacityScenario {
    // Points at 3 and 6 eMBB-equivalent users per cell, both unsaturated.
    CapacityScenario {
        users_per_cell: 6,
        load_points: 2,
        drops: 4,
        redcap_fraction: fraction,
        scheduler,
        ..CapacityScenario::default()
    }
}

#[test]
fn per_user_offered_loads_are_exact() {
    let embb = builtin_profile(ProfileKind::ReferenceNrFr1);
    let rc = builtin_profile(ProfileKind::RedCapBaselineFr1);
    assert_eq!(TrafficModel::embb().offered_bps(), 2e7);
    assert_eq!(TrafficModel::redcap().offered_bps(), 4e5);
    let mix = [(embb.clone(), TrafficModel::embb()), (embb, TrafficModel::embb()), (rc, TrafficModel::redcap())];
    assert_eq!(offered_load(&mix), 4.04e7);
}

#[test]
fn reports_are_reproducible_and_well_formed() {
    for s in SCHEDULERS {
        let scn = light(s, 0.6);
        let a = run_capacity_sim(&scn).unwrap();
        assert_eq!(a, run_capacity_sim(&scn).unwrap());
        for r in &a {
            assert!(r.p5_mbps <= r.p50_mbps && r.p50_mbps <= r.p95_mbps);
            assert!((0.0..=1.0).contains(&r.resource_utilization));
        }
    }
}

#[test]
fn redcap_share_costs_resources_at_fixed_offered_load() {
    for s in SCHEDULERS {
        let runs: Vec<Vec<ThroughputReport>> = [0.0, 0.2, 0.4, 0.6, 0.8, 0.9]
            .iter()
            .map(|&f| run_capacity_sim(&light(s, f)).unwrap())
            .collect();
        for k in 0..2 {
            for w in runs.windows(2) {
                let (a, b) = (&w[0][k], &w[1][k]);
                assert!(
                    b.spectral_efficiency_bps_hz <= a.spectral_efficiency_bps_hz,
                    "{s:?} point {k}: {} -> {}",
                    a.spectral_efficiency_bps_hz,
                    b.spectral_efficiency_bps_hz
                );
            }
        }
    }
}

#[test]
fn utilization_grows_with_users() {
    for s in SCHEDULERS {
        let scn = CapacityScenario {
            users_per_cell: 16,
            load_points: 4,
            drops: 3,
            load_axis: LoadAxis::UserCount,
            scheduler: s,
            ..CapacityScenario::default()
        };
        let r = run_capacity_sim(&scn).unwrap();
        for w in r.windows(2) {
            assert!(w[1].resource_utilization >= w[0].resource_utilization, "{s:?}");
            assert!(w[1].p5_mbps <= w[0].p5_mbps && w[1].p50_mbps <= w[0].p50_mbps, "{s:?}");
        }
    }
}

#[test]
fn spectral_efficiency_map_shape() {
    // Single layer below the modulation cap is plain attenuated Shannon.
    let se = spectral_efficiency(10.0, 0.6, 1, 6);
    assert!((se - 0.6 * 11f64.log2()).abs() < 1e-12);
    assert_eq!(spectral_efficiency(1e9, 0.6, 1, 6), 6.0);
    assert_eq!(spectral_efficiency(1e12, 0.6, 4, 8), 32.0);
    let mut last = 0.0;
    for db in -10..40 {
        let v = spectral_efficiency(10f64.powf(f64::from(db) / 10.0), 0.6, 2, 6);
        assert!(v >= last);
        last = v;
    }
}
