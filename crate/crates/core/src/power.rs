//! Idle/inactive-state power model with (e)DRX, battery lifetime, and RRM
//! measurement relaxation.
//!
//! Power values are relative units. The shipped [`PowerModel::default`] reads
//! one unit as roughly 1 mW; battery capacity is then in mW·s.
//!
//! Per DRX cycle the device wakes for `t_paging_monitor_s` at
//! `p_paging_monitor` and pays two transition energies (wake-up and
//! ramp-down). The rest of the cycle it sleeps at the state's floor: deep
//! sleep in RRC idle, light sleep in RRC inactive. Each data event adds
//! `t_data_session_s` at `p_data_session` and its own pair of transitions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Longest DRX cycle without eDRX, in seconds.
pub const MAX_DRX_CYCLE_S: f64 = 2.56;
/// Longest eDRX cycle in RRC inactive.
pub const MAX_EDRX_INACTIVE_S: f64 = 10.24;
/// Longest eDRX cycle in RRC idle.
pub const MAX_EDRX_IDLE_S: f64 = 10485.76;

/// Minimum number of DRX cycles [`simulate_energy`] needs to cover.
pub const MIN_SIM_CYCLES: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct PowerModel<T> {
    pub p_deep_sleep: T,
    pub p_light_sleep: T,
    /// PDCCH monitoring and synchronization around a paging occasion.
    pub p_paging_monitor: T,
    /// Average power during a data exchange.
    pub p_data_session: T,
    /// Time awake per paging occasion, ramp-up included.
    pub t_paging_monitor_s: T,
    pub t_data_session_s: T,
    /// Energy per sleep/wake transition (unit·s).
    pub e_transition: T,
    /// Energy of one neighbor-cell RRM measurement (unit·s).
    #[serde(default = "default_measurement_energy")]
    pub e_neighbor_measurement: T,
    pub battery_capacity_unit_s: T,
}

impl<T: Real> Default for PowerModel<T> {
    fn default() -> Self {
        PowerModel {
            p_deep_sleep: T::lit(0.005),
            p_light_sleep: T::lit(0.01),
            p_paging_monitor: T::lit(100.0),
            p_data_session: T::lit(300.0),
            // 10 ms ramp-up + 2 ms PDCCH monitoring
            t_paging_monitor_s: T::lit(0.012),
            t_data_session_s: T::lit(0.15),
            e_transition: T::lit(0.45),
            e_neighbor_measurement: default_measurement_energy(),
            // 5 Wh at 1 unit = 1 mW
            battery_capacity_unit_s: T::lit(1.8e7),
        }
    }
}

fn default_measurement_energy<T: Real>() -> T {
    T::lit(1.0)
}

impl<T: Real> PowerModel<T> {
    pub fn validate(&self) -> Result<()> {
        let powers = [
            self.p_deep_sleep,
            self.p_light_sleep,
            self.p_paging_monitor,
            self.p_data_session,
            self.battery_capacity_unit_s,
        ];
        if powers.iter().any(|p| !(*p > T::zero()) || !p.is_finite()) {
            return invalid("power model", "powers and battery capacity must be positive and finite");
        }
        let durations = [
            self.t_paging_monitor_s,
            self.t_data_session_s,
            self.e_transition,
            self.e_neighbor_measurement,
        ];
        if durations.iter().any(|d| !(*d >= T::zero()) || !d.is_finite()) {
            return invalid("power model", "durations and energies must be non-negative and finite");
        }
        if !(self.p_deep_sleep < self.p_light_sleep
            && self.p_light_sleep < self.p_paging_monitor
            && self.p_paging_monitor <= self.p_data_session)
        {
            return invalid(
                "power model",
                "expected p_deep_sleep < p_light_sleep < p_paging_monitor <= p_data_session",
            );
        }
        Ok(())
    }

    pub fn sleep_power(&self, state: RrcState) -> T {
        match state {
            RrcState::Idle => self.p_deep_sleep,
            RrcState::Inactive => self.p_light_sleep,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RrcState {
    Idle,
    Inactive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDrx<T>", into = "RawDrx<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct DrxConfig<T> {
    rrc_state: RrcState,
    cycle_s: T,
    edrx_enabled: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDrx<T> {
    pub rrc_state: RrcState,
    pub cycle_s: T,
    pub edrx_enabled: bool,
}

impl<T: Real> TryFrom<RawDrx<T>> for DrxConfig<T> {
    type Error = Error;

    fn try_from(r: RawDrx<T>) -> Result<Self> {
        DrxConfig::new(r.rrc_state, r.cycle_s, r.edrx_enabled)
    }
}

impl<T: Real> From<DrxConfig<T>> for RawDrx<T> {
    fn from(d: DrxConfig<T>) -> Self {
        RawDrx {
            rrc_state: d.rrc_state,
            cycle_s: d.cycle_s,
            edrx_enabled: d.edrx_enabled,
        }
    }
}

impl<T: Real> DrxConfig<T> {
    pub fn new(rrc_state: RrcState, cycle_s: T, edrx_enabled: bool) -> Result<Self> {
        if !(cycle_s > T::zero()) || !cycle_s.is_finite() {
            return invalid("DRX config", format!("cycle {cycle_s} s must be positive"));
        }
        let cap = match (edrx_enabled, rrc_state) {
            (false, _) => MAX_DRX_CYCLE_S,
            (true, RrcState::Idle) => MAX_EDRX_IDLE_S,
            (true, RrcState::Inactive) => MAX_EDRX_INACTIVE_S,
        };
        if cycle_s > T::lit(cap) {
            let mode = if edrx_enabled { "eDRX" } else { "DRX" };
            return invalid(
                "DRX config",
                format!("{mode} cycle {cycle_s} s exceeds the {cap} s limit in RRC {rrc_state:?}"),
            );
        }
        Ok(DrxConfig {
            rrc_state,
            cycle_s,
            edrx_enabled,
        })
    }

    /// Plain DRX when `cycle_s` fits the legacy limit, eDRX otherwise.
    pub fn auto(rrc_state: RrcState, cycle_s: T) -> Result<Self> {
        Self::new(rrc_state, cycle_s, cycle_s > T::lit(MAX_DRX_CYCLE_S))
    }

    pub fn rrc_state(&self) -> RrcState {
        self.rrc_state
    }

    pub fn cycle_s(&self) -> T {
        self.cycle_s
    }

    pub fn edrx_enabled(&self) -> bool {
        self.edrx_enabled
    }

    /// Expected DL paging delay, half a cycle.
    pub fn expected_paging_delay_s(&self) -> T {
        self.cycle_s / T::lit(2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArrivalProcess {
    Periodic,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficPattern<T> {
    /// Mean inter-arrival time of data events; infinite means no traffic.
    pub iat_s: T,
    pub arrival_process: ArrivalProcess,
}

impl<T: Real> TrafficPattern<T> {
    pub fn new(iat_s: T, arrival_process: ArrivalProcess) -> Result<Self> {
        if !(iat_s > T::zero()) {
            return invalid("traffic pattern", format!("iat_s {iat_s} must be positive"));
        }
        Ok(TrafficPattern { iat_s, arrival_process })
    }

    pub fn none() -> Self {
        TrafficPattern {
            iat_s: T::infinity(),
            arrival_process: ArrivalProcess::Periodic,
        }
    }
}

/// Average power split by contributor. Components sum to `total()`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBreakdown<T> {
    pub sleep: T,
    pub paging: T,
    pub data: T,
    pub rrm: T,
}

impl<T: Real> PowerBreakdown<T> {
    pub fn total(&self) -> T {
        self.sleep + self.paging + self.data + self.rrm
    }
}

/// Closed-form average power with an optional neighbor-measurement duty
/// cycle (fraction of paging occasions carrying a measurement).
pub fn power_breakdown<T: Real>(
    model: &PowerModel<T>,
    drx: &DrxConfig<T>,
    traffic: &TrafficPattern<T>,
    rrm_duty: T,
) -> Result<PowerBreakdown<T>> {
    model.validate()?;
    let cycle = drx.cycle_s;
    if model.t_paging_monitor_s >= cycle {
        return Err(Error::CycleShorterThanWake {
            cycle_s: cycle.as_f64(),
            wake_s: model.t_paging_monitor_s.as_f64(),
        });
    }
    if !(rrm_duty >= T::zero() && rrm_duty <= T::one()) {
        return invalid("RRM duty cycle", format!("{rrm_duty} outside [0, 1]"));
    }
    let two = T::lit(2.0);
    let floor = model.sleep_power(drx.rrc_state);
    let paging_excess = model.t_paging_monitor_s * (model.p_paging_monitor - floor) + two * model.e_transition;
    let data_excess = model.t_data_session_s * (model.p_data_session - floor) + two * model.e_transition;
    let data = if traffic.iat_s.is_infinite() {
        T::zero()
    } else {
        data_excess / traffic.iat_s
    };
    Ok(PowerBreakdown {
        sleep: floor,
        paging: paging_excess / cycle,
        data,
        rrm: rrm_duty * model.e_neighbor_measurement / cycle,
    })
}

/// Time-weighted average power in relative units.
pub fn avg_power<T: Real>(model: &PowerModel<T>, drx: &DrxConfig<T>, traffic: &TrafficPattern<T>) -> Result<T> {
    Ok(power_breakdown(model, drx, traffic, T::zero())?.total())
}

fn lifetime_hours<T: Real>(model: &PowerModel<T>, avg: T) -> T {
    model.battery_capacity_unit_s / avg / T::lit(3600.0)
}

/// Battery lifetime in hours.
pub fn battery_lifetime<T: Real>(model: &PowerModel<T>, drx: &DrxConfig<T>, traffic: &TrafficPattern<T>) -> Result<T> {
    Ok(lifetime_hours(model, avg_power(model, drx, traffic)?))
}

/// Battery lifetime in hours when a fraction `rrm_duty` of paging occasions
/// also carries a neighbor-cell measurement.
pub fn battery_lifetime_with_rrm<T: Real>(
    model: &PowerModel<T>,
    drx: &DrxConfig<T>,
    traffic: &TrafficPattern<T>,
    rrm_duty: T,
) -> Result<T> {
    Ok(lifetime_hours(model, power_breakdown(model, drx, traffic, rrm_duty)?.total()))
}

/// Event-driven energy accumulation over `horizon_s`, in unit·s.
///
/// Walks paging occasions and data arrivals in time order. A paging occasion
/// falling inside a data session costs nothing extra; overlapping awake
/// windows share one pair of transitions.
pub fn simulate_energy<T: Real>(
    model: &PowerModel<T>,
    drx: &DrxConfig<T>,
    traffic: &TrafficPattern<T>,
    horizon_s: T,
    seed: u64,
) -> Result<T> {
    model.validate()?;
    let cycle = drx.cycle_s.as_f64();
    let horizon = horizon_s.as_f64();
    let wake = model.t_paging_monitor_s.as_f64();
    if wake >= cycle {
        return Err(Error::CycleShorterThanWake { cycle_s: cycle, wake_s: wake });
    }
    if !(horizon >= cycle * f64::from(MIN_SIM_CYCLES)) {
        return Err(Error::HorizonTooShort {
            horizon_s: horizon,
            min_cycles: MIN_SIM_CYCLES,
        });
    }

    let floor = model.sleep_power(drx.rrc_state).as_f64();
    let p_page = model.p_paging_monitor.as_f64();
    let p_data = model.p_data_session.as_f64();
    let t_data = model.t_data_session_s.as_f64();
    let e_tr = model.e_transition.as_f64();

    let mut arrivals = DataArrivals::new(traffic, seed);
    let mut next_arrival = arrivals.next();
    // Paging occasion position inside the cycle. An irrational fraction keeps
    // the occasion grid from locking onto commensurate periodic traffic.
    let mut next_page = cycle * (3.0 - 5.0_f64.sqrt()) / 2.0;

    let mut extra = 0.0_f64;
    let mut awake_until = f64::NEG_INFINITY;
    let mut awake_power = floor;

    loop {
        let take_page = match next_arrival {
            Some(a) => next_page <= a,
            None => true,
        };
        let (start, len, power) = if take_page {
            let s = next_page;
            next_page += cycle;
            (s, wake, p_page)
        } else {
            let s = next_arrival.expect("checked above");
            next_arrival = arrivals.next();
            (s, t_data, p_data)
        };
        if start >= horizon {
            break;
        }
        let end = (start + len).min(horizon);
        if start >= awake_until {
            extra += (end - start) * (power - floor) + 2.0 * e_tr;
            awake_until = end;
            awake_power = power;
        } else {
            let overlap_end = end.min(awake_until);
            if power > awake_power {
                extra += (overlap_end - start) * (power - awake_power);
            }
            if end > awake_until {
                extra += (end - awake_until) * (power - floor);
                awake_until = end;
                awake_power = power;
            }
        }
    }

    Ok(T::lit(floor * horizon + extra))
}

struct DataArrivals {
    process: ArrivalProcess,
    iat: f64,
    t: f64,
    rng: ChaCha8Rng,
}

impl DataArrivals {
    fn new<T: Real>(traffic: &TrafficPattern<T>, seed: u64) -> Self {
        DataArrivals {
            process: traffic.arrival_process,
            iat: traffic.iat_s.as_f64(),
            t: 0.0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn next(&mut self) -> Option<f64> {
        if !self.iat.is_finite() {
            return None;
        }
        let gap = match self.process {
            ArrivalProcess::Periodic => self.iat,
            ArrivalProcess::Poisson => Exp::new(1.0 / self.iat).expect("positive rate").sample(&mut self.rng),
        };
        self.t += gap;
        Some(self.t)
    }
}

// ---------------------------------------------------------------------------
// RRM measurement relaxation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Release {
    R15,
    R16,
    R17,
}

/// Serving-cell thresholds and relaxed measurement rates.
///
/// * `s_search_*`: above both, neighbor measurements may be skipped (rate `r1`).
/// * `low_mobility_*`: minimum serving quality for the low-mobility
///   criterion; a stationary device above it relaxes to `r2`.
/// * `not_at_edge_*`: not-at-cell-edge criterion, must be at or above the
///   low-mobility thresholds. Together with low mobility this gives `r3`,
///   and a Release 17 stationary device gets `r4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RrmThresholds<T> {
    pub s_search_rsrp_dbm: T,
    pub s_search_rsrq_db: T,
    pub low_mobility_rsrp_dbm: T,
    pub low_mobility_rsrq_db: T,
    pub not_at_edge_rsrp_dbm: T,
    pub not_at_edge_rsrq_db: T,
    /// Relaxed duty cycles `[r1, r2, r3, r4]`.
    pub relaxed_rates: [T; 4],
}

impl<T: Real> Default for RrmThresholds<T> {
    fn default() -> Self {
        RrmThresholds {
            s_search_rsrp_dbm: T::lit(-90.0),
            s_search_rsrq_db: T::lit(-12.0),
            low_mobility_rsrp_dbm: T::lit(-110.0),
            low_mobility_rsrq_db: T::lit(-18.0),
            not_at_edge_rsrp_dbm: T::lit(-95.0),
            not_at_edge_rsrq_db: T::lit(-14.0),
            relaxed_rates: [T::lit(0.25), T::lit(0.125), T::lit(0.0625), T::lit(0.03125)],
        }
    }
}

impl<T: Real> RrmThresholds<T> {
    pub fn validate(&self) -> Result<()> {
        if self.low_mobility_rsrp_dbm > self.not_at_edge_rsrp_dbm || self.low_mobility_rsrq_db > self.not_at_edge_rsrq_db {
            return invalid("RRM thresholds", "low-mobility thresholds must not exceed not-at-cell-edge thresholds");
        }
        let r = self.relaxed_rates;
        let in_range = r.iter().all(|x| *x > T::zero() && *x <= T::one());
        if !in_range || !(r[1] < r[0] && r[2] < r[1] && r[3] <= r[2]) {
            return invalid("RRM thresholds", "relaxed rates must satisfy 1 >= r1 > r2 > r3 >= r4 > 0");
        }
        Ok(())
    }
}

/// Fraction of paging occasions on which neighbor cells are measured.
pub fn rrm_duty_cycle<T: Real>(
    stationary: bool,
    serving_rsrp_dbm: T,
    serving_rsrq_db: T,
    thresholds: &RrmThresholds<T>,
    release: Release,
) -> T {
    let t = thresholds;
    let [r1, r2, r3, r4] = t.relaxed_rates;
    let above = |rsrp: T, rsrq: T| serving_rsrp_dbm > rsrp && serving_rsrq_db > rsrq;

    let mut duty = T::one();
    if above(t.s_search_rsrp_dbm, t.s_search_rsrq_db) {
        duty = duty.min(r1);
    }
    if release == Release::R15 {
        return duty;
    }
    let low_mobility = stationary && above(t.low_mobility_rsrp_dbm, t.low_mobility_rsrq_db);
    let not_at_edge = above(t.not_at_edge_rsrp_dbm, t.not_at_edge_rsrq_db);
    if low_mobility {
        duty = duty.min(r2);
        if not_at_edge {
            duty = duty.min(r3);
            if release == Release::R17 {
                duty = duty.min(r4);
            }
        }
    }
    duty
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn idle(cycle: f64) -> DrxConfig<f64> {
        DrxConfig::auto(RrcState::Idle, cycle).unwrap()
    }

    fn periodic(iat: f64) -> TrafficPattern<f64> {
        TrafficPattern::new(iat, ArrivalProcess::Periodic).unwrap()
    }

    #[test]
    fn cycle_caps_are_exact() {
        assert!(DrxConfig::new(RrcState::Idle, 2.56, false).is_ok());
        assert!(DrxConfig::new(RrcState::Idle, 2.560001, false).is_err());
        assert!(DrxConfig::new(RrcState::Inactive, 10.24, true).is_ok());
        assert!(DrxConfig::new(RrcState::Inactive, 10.240001, true).is_err());
        assert!(DrxConfig::new(RrcState::Idle, 10485.76, true).is_ok());
        assert!(DrxConfig::new(RrcState::Idle, 10485.77, true).is_err());
        assert!(DrxConfig::new(RrcState::Idle, 0.0, false).is_err());
    }

    #[test]
    fn all_sleep_limit() {
        let m = PowerModel {
            t_paging_monitor_s: 0.0,
            e_transition: 0.0,
            ..PowerModel::default()
        };
        let p = avg_power(&m, &idle(2.56), &TrafficPattern::none()).unwrap();
        assert_eq!(p, m.p_deep_sleep);
    }

    #[test]
    fn paging_component_scales_with_cycle() {
        let m = PowerModel::default();
        let a = power_breakdown(&m, &idle(2.56), &TrafficPattern::none(), 0.0).unwrap();
        let b = power_breakdown(&m, &idle(256.0), &TrafficPattern::none(), 0.0).unwrap();
        assert_relative_eq!(a.paging / b.paging, 100.0, max_relative = 1e-12);
    }

    #[test]
    fn wake_longer_than_cycle_rejected() {
        let m = PowerModel {
            t_paging_monitor_s: 3.0,
            ..PowerModel::default()
        };
        let err = avg_power(&m, &idle(2.56), &TrafficPattern::none()).unwrap_err();
        assert!(matches!(err, Error::CycleShorterThanWake { .. }));
        assert!(simulate_energy(&m, &idle(2.56), &TrafficPattern::none(), 1e4, 0).is_err());
    }

    #[test]
    fn lifetime_is_capacity_over_power() {
        let m = PowerModel {
            p_deep_sleep: 1.0,
            p_light_sleep: 2.0,
            t_paging_monitor_s: 0.0,
            e_transition: 0.0,
            battery_capacity_unit_s: 3.6e6,
            ..PowerModel::default()
        };
        let h = battery_lifetime(&m, &idle(2.56), &TrafficPattern::none()).unwrap();
        assert_relative_eq!(h, 1000.0, max_relative = 1e-12);
    }

    #[test]
    fn doubling_capacity_doubles_lifetime() {
        let m = PowerModel::default();
        let m2 = PowerModel {
            battery_capacity_unit_s: 2.0 * m.battery_capacity_unit_s,
            ..m
        };
        for (cycle, iat) in [(2.56, 600.0), (163.84, 3600.0), (10485.76, 86400.0)] {
            let a = battery_lifetime(&m, &idle(cycle), &periodic(iat)).unwrap();
            let b = battery_lifetime(&m2, &idle(cycle), &periodic(iat)).unwrap();
            assert_relative_eq!(b, 2.0 * a, max_relative = 1e-12);
        }
    }

    #[test]
    fn inactive_sleeps_lighter() {
        let m = PowerModel::default();
        let i = DrxConfig::new(RrcState::Inactive, 2.56, false).unwrap();
        let a = avg_power(&m, &idle(2.56), &periodic(3600.0)).unwrap();
        let b = avg_power(&m, &i, &periodic(3600.0)).unwrap();
        assert!(b > a);
    }

    #[test]
    fn simulation_requires_enough_cycles() {
        let m = PowerModel::default();
        let err = simulate_energy(&m, &idle(2.56), &periodic(3600.0), 255.0, 1).unwrap_err();
        assert!(matches!(err, Error::HorizonTooShort { .. }));
        assert!(simulate_energy(&m, &idle(2.56), &periodic(3600.0), 256.0, 1).is_ok());
    }

    #[test]
    fn zero_wake_simulation_is_pure_sleep() {
        let m = PowerModel {
            t_paging_monitor_s: 0.0,
            e_transition: 0.0,
            ..PowerModel::default()
        };
        let e = simulate_energy(&m, &idle(2.56), &TrafficPattern::none(), 1000.0, 7).unwrap();
        assert_eq!(e, m.p_deep_sleep * 1000.0);
    }

    #[test]
    fn simulation_is_deterministic_per_seed() {
        let m = PowerModel::default();
        let t = TrafficPattern::new(600.0, ArrivalProcess::Poisson).unwrap();
        let a = simulate_energy(&m, &idle(2.56), &t, 1e6, 42).unwrap();
        let b = simulate_energy(&m, &idle(2.56), &t, 1e6, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn measurement_free_below_thresholds() {
        let th = RrmThresholds::default();
        for rel in [Release::R15, Release::R16, Release::R17] {
            for stationary in [false, true] {
                assert_eq!(rrm_duty_cycle(stationary, -125.0, -20.0, &th, rel), 1.0);
            }
        }
    }

    #[test]
    fn releases_relax_progressively() {
        let th = RrmThresholds::default();
        let d = |rel| rrm_duty_cycle(true, -80.0, -8.0, &th, rel);
        assert_eq!(d(Release::R15), 0.25);
        assert_eq!(d(Release::R16), 0.0625);
        assert_eq!(d(Release::R17), 0.03125);
        // low mobility but at the cell edge
        assert_eq!(rrm_duty_cycle(true, -100.0, -16.0, &th, Release::R17), 0.125);
        // moving device gets nothing beyond the R15 rule
        assert_eq!(rrm_duty_cycle(false, -80.0, -8.0, &th, Release::R17), 0.25);
    }

    #[test]
    fn threshold_ordering_checked() {
        let mut th = RrmThresholds::<f64>::default();
        assert!(th.validate().is_ok());
        th.low_mobility_rsrp_dbm = -80.0;
        assert!(th.validate().is_err());
        let mut th = RrmThresholds::<f64>::default();
        th.relaxed_rates = [0.5, 0.6, 0.1, 0.05];
        assert!(th.validate().is_err());
    }

    #[test]
    fn default_model_is_valid() {
        assert!(PowerModel::<f64>::default().validate().is_ok());
        assert!(PowerModel::<f32>::default().validate().is_ok());
    }
}
