//! Random-access procedure with RedCap identification, SIB1 barring and
//! PRB accounting for the pre-identification phase.
//!
//! Until the network knows whether a device is RedCap it must schedule it as
//! if it were one ("narrow" mode, costlier in PRBs). Afterwards the device
//! is scheduled in its true mode. Contention and retransmissions are not
//! modeled; every exchange succeeds.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{builtin_profile, CapabilityProfile, ProfileKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdMethod {
    /// RedCap-specific PRACH resources; everyone is identified by Msg1.
    Msg1SeparatePrach,
    /// RedCap LCID on CCCH in Msg3. Msg A of the two-step procedure is
    /// accounted the same way.
    #[serde(alias = "MsgA")]
    Msg3Lcid,
    /// No early indication; capability known only after Msg4.
    PostMsg4Capability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentifiedAt {
    Msg1,
    Msg3,
    PostMsg4,
    Never,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrbCost {
    pub narrow: u32,
    pub wide: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageCosts {
    #[serde(rename = "Msg2")]
    pub msg2: PrbCost,
    #[serde(rename = "Msg3")]
    pub msg3: PrbCost,
    #[serde(rename = "Msg4")]
    pub msg4: PrbCost,
}

impl Default for MessageCosts {
    fn default() -> Self {
        MessageCosts {
            msg2: PrbCost { narrow: 12, wide: 6 },
            msg3: PrbCost { narrow: 8, wide: 4 },
            msg4: PrbCost { narrow: 24, wide: 12 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccessConfig {
    pub id_method: IdMethod,
    #[serde(default)]
    pub redcap_barred: bool,
    #[serde(default = "default_prach_period")]
    pub prach_periodicity_ms: f64,
    #[serde(default)]
    pub msg_prb_costs: MessageCosts,
    /// A cell without RedCap support treats every device as non-RedCap from
    /// the start and keeps RedCap devices out.
    #[serde(default = "yes")]
    pub cell_supports_redcap: bool,
}

fn default_prach_period() -> f64 {
    10.0
}

fn yes() -> bool {
    true
}

impl AccessConfig {
    pub fn new(id_method: IdMethod) -> Self {
        AccessConfig {
            id_method,
            redcap_barred: false,
            prach_periodicity_ms: default_prach_period(),
            msg_prb_costs: MessageCosts::default(),
            cell_supports_redcap: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.prach_periodicity_ms > 0.0 && self.prach_periodicity_ms.is_finite()) {
            return invalid("access config", "prach_periodicity_ms must be positive");
        }
        let c = &self.msg_prb_costs;
        for (name, cost) in [("Msg2", c.msg2), ("Msg3", c.msg3), ("Msg4", c.msg4)] {
            if cost.narrow == 0 || cost.wide == 0 {
                return invalid("access config", format!("{name} PRB costs must be positive"));
            }
            if cost.wide > cost.narrow {
                return invalid(
                    "access config",
                    format!("{name} wide-mode cost {} exceeds narrow-mode cost {}", cost.wide, cost.narrow),
                );
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessOutcome {
    pub device_id: usize,
    pub is_redcap: bool,
    pub identified_at: IdentifiedAt,
    pub barred: bool,
    pub total_prbs_scheduled: u32,
    /// `None` for barred devices.
    pub time_to_connected_ms: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AccessStats {
    pub devices: usize,
    pub redcap_devices: usize,
    pub barred: usize,
    pub total_prbs: u64,
    pub redcap_prbs: u64,
    pub non_redcap_prbs: u64,
    pub identified_msg1: usize,
    pub identified_msg3: usize,
    pub identified_post_msg4: usize,
    pub mean_time_to_connected_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessResult {
    pub outcomes: Vec<AccessOutcome>,
    pub stats: AccessStats,
}

fn is_barred(cfg: &AccessConfig, device: &CapabilityProfile) -> bool {
    device.is_redcap && (cfg.redcap_barred || !cfg.cell_supports_redcap)
}

/// Message after which the network knows whether `device` is RedCap.
pub fn identification_point(cfg: &AccessConfig, device: &CapabilityProfile) -> IdentifiedAt {
    if is_barred(cfg, device) {
        return IdentifiedAt::Never;
    }
    if !cfg.cell_supports_redcap {
        return IdentifiedAt::Msg1;
    }
    match cfg.id_method {
        IdMethod::Msg1SeparatePrach => IdentifiedAt::Msg1,
        IdMethod::Msg3Lcid => IdentifiedAt::Msg3,
        IdMethod::PostMsg4Capability => IdentifiedAt::PostMsg4,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Step {
    Msg1,
    Msg2,
    Msg3,
    Msg4,
    Connected,
}

// Processing delays in µs after each message.
const DELAY_US: [u64; 4] = [4_000, 3_000, 4_000, 3_000];
// Devices wake up uniformly within this window.
const ARRIVAL_WINDOW_US: u64 = 1_000_000;

/// PRB cost of one message for a device, given what the network knows.
fn message_cost(cfg: &AccessConfig, device: &CapabilityProfile, id: IdentifiedAt, step: Step) -> u32 {
    let c = &cfg.msg_prb_costs;
    let cost = match step {
        Step::Msg2 => c.msg2,
        Step::Msg3 => c.msg3,
        Step::Msg4 => c.msg4,
        Step::Msg1 | Step::Connected => return 0,
    };
    // Msg2 and Msg3 are scheduled before Msg3 is decoded, so a Msg3
    // indication only helps Msg4.
    let known = match id {
        IdentifiedAt::Msg1 => true,
        IdentifiedAt::Msg3 => step == Step::Msg4,
        IdentifiedAt::PostMsg4 | IdentifiedAt::Never => false,
    };
    if known && !device.is_redcap {
        cost.wide
    } else {
        cost.narrow
    }
}

pub fn simulate_access(devices: &[CapabilityProfile], cfg: &AccessConfig, seed: u64) -> Result<AccessResult> {
    cfg.validate()?;
    if devices.is_empty() {
        return invalid("access simulation", "no devices");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let period_us = (cfg.prach_periodicity_ms * 1000.0).round().max(1.0) as u64;
    // One draw per device whatever its barring state, so barring never
    // shifts other devices' arrivals.
    let arrivals: Vec<u64> = devices.iter().map(|_| rng.random_range(0..ARRIVAL_WINDOW_US)).collect();

    let mut outcomes: Vec<AccessOutcome> = devices
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let id = identification_point(cfg, d);
            AccessOutcome {
                device_id: i,
                is_redcap: d.is_redcap,
                identified_at: id,
                barred: id == IdentifiedAt::Never,
                total_prbs_scheduled: 0,
                time_to_connected_ms: None,
            }
        })
        .collect();

    let mut queue: BinaryHeap<Reverse<(u64, usize, Step)>> = BinaryHeap::new();
    for (i, &t) in arrivals.iter().enumerate() {
        if outcomes[i].barred {
            continue;
        }
        let occasion = t.div_ceil(period_us) * period_us;
        queue.push(Reverse((occasion, i, Step::Msg1)));
    }

    while let Some(Reverse((t, i, step))) = queue.pop() {
        let o = &mut outcomes[i];
        o.total_prbs_scheduled += message_cost(cfg, &devices[i], o.identified_at, step);
        let next = match step {
            Step::Msg1 => Step::Msg2,
            Step::Msg2 => Step::Msg3,
            Step::Msg3 => Step::Msg4,
            Step::Msg4 => Step::Connected,
            Step::Connected => {
                o.time_to_connected_ms = Some((t - arrivals[i]) as f64 / 1000.0);
                continue;
            }
        };
        queue.push(Reverse((t + DELAY_US[step as usize], i, next)));
    }

    let stats = aggregate(&outcomes);
    Ok(AccessResult { outcomes, stats })
}

fn aggregate(outcomes: &[AccessOutcome]) -> AccessStats {
    let mut s = AccessStats {
        devices: outcomes.len(),
        ..AccessStats::default()
    };
    let mut connected = 0usize;
    let mut time_sum = 0.0;
    for o in outcomes {
        let prbs = u64::from(o.total_prbs_scheduled);
        s.total_prbs += prbs;
        if o.is_redcap {
            s.redcap_devices += 1;
            s.redcap_prbs += prbs;
        } else {
            s.non_redcap_prbs += prbs;
        }
        match o.identified_at {
            IdentifiedAt::Msg1 => s.identified_msg1 += 1,
            IdentifiedAt::Msg3 => s.identified_msg3 += 1,
            IdentifiedAt::PostMsg4 => s.identified_post_msg4 += 1,
            IdentifiedAt::Never => s.barred += 1,
        }
        if let Some(t) = o.time_to_connected_ms {
            connected += 1;
            time_sum += t;
        }
    }
    if connected > 0 {
        s.mean_time_to_connected_ms = time_sum / connected as f64;
    }
    s
}

/// `n` FR1 devices, each RedCap with probability `redcap_fraction`.
pub fn mixed_population(n: usize, redcap_fraction: f64, seed: u64) -> Result<Vec<CapabilityProfile>> {
    if !(0.0..=1.0).contains(&redcap_fraction) {
        return invalid("population", format!("redcap fraction {redcap_fraction} outside [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let redcap = builtin_profile(ProfileKind::RedCapBaselineFr1);
    let regular = builtin_profile(ProfileKind::ReferenceNrFr1);
    Ok((0..n)
        .map(|_| {
            if rng.random::<f64>() < redcap_fraction {
                redcap.clone()
            } else {
                regular.clone()
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn redcap() -> CapabilityProfile {
        builtin_profile(ProfileKind::RedCapBaselineFr1)
    }

    fn regular() -> CapabilityProfile {
        builtin_profile(ProfileKind::ReferenceNrFr1)
    }

    #[test]
    fn identification_points() {
        assert_eq!(identification_point(&AccessConfig::new(IdMethod::Msg3Lcid), &redcap()), IdentifiedAt::Msg3);
        assert_eq!(
            identification_point(&AccessConfig::new(IdMethod::Msg1SeparatePrach), &regular()),
            IdentifiedAt::Msg1
        );
        for m in [IdMethod::Msg1SeparatePrach, IdMethod::Msg3Lcid, IdMethod::PostMsg4Capability] {
            let cfg = AccessConfig {
                redcap_barred: true,
                ..AccessConfig::new(m)
            };
            assert_eq!(identification_point(&cfg, &redcap()), IdentifiedAt::Never);
            assert_ne!(identification_point(&cfg, &regular()), IdentifiedAt::Never);
        }
    }

    #[test]
    fn barred_population_schedules_nothing() {
        let cfg = AccessConfig {
            redcap_barred: true,
            ..AccessConfig::new(IdMethod::Msg3Lcid)
        };
        let devs = vec![redcap(); 20];
        let r = simulate_access(&devs, &cfg, 3).unwrap();
        assert!(r.outcomes.iter().all(|o| o.barred && o.total_prbs_scheduled == 0 && o.identified_at == IdentifiedAt::Never));
        assert_eq!(r.stats.total_prbs, 0);
        assert_eq!(r.stats.barred, 20);
    }

    #[test]
    fn per_device_costs_by_method() {
        let devs = vec![regular(), redcap()];
        let cost = |m| {
            let r = simulate_access(&devs, &AccessConfig::new(m), 1).unwrap();
            (r.outcomes[0].total_prbs_scheduled, r.outcomes[1].total_prbs_scheduled)
        };
        assert_eq!(cost(IdMethod::Msg1SeparatePrach), (22, 44));
        assert_eq!(cost(IdMethod::Msg3Lcid), (32, 44));
        assert_eq!(cost(IdMethod::PostMsg4Capability), (44, 44));
    }

    #[test]
    fn cell_without_redcap_support() {
        let cfg = AccessConfig {
            cell_supports_redcap: false,
            ..AccessConfig::new(IdMethod::PostMsg4Capability)
        };
        let r = simulate_access(&vec![regular(); 5], &cfg, 9).unwrap();
        assert!(r.outcomes.iter().all(|o| o.identified_at == IdentifiedAt::Msg1 && o.total_prbs_scheduled == 22));
    }

    #[test]
    fn timing_is_bounded_by_prach_period() {
        let cfg = AccessConfig::new(IdMethod::Msg3Lcid);
        let r = simulate_access(&vec![regular(); 50], &cfg, 11).unwrap();
        for o in &r.outcomes {
            let t = o.time_to_connected_ms.unwrap();
            assert!((14.0..=14.0 + cfg.prach_periodicity_ms).contains(&t), "{t}");
        }
    }

    #[test]
    fn cost_ordering_enforced() {
        let mut cfg = AccessConfig::new(IdMethod::Msg3Lcid);
        cfg.msg_prb_costs.msg3 = PrbCost { narrow: 2, wide: 4 };
        assert!(cfg.validate().is_err());
        cfg.msg_prb_costs.msg3 = PrbCost { narrow: 0, wide: 0 };
        assert!(cfg.validate().is_err());
        let mut cfg = AccessConfig::new(IdMethod::Msg3Lcid);
        cfg.prach_periodicity_ms = 0.0;
        assert!(cfg.validate().is_err());
        assert!(simulate_access(&[], &AccessConfig::new(IdMethod::Msg3Lcid), 0).is_err());
    }

    #[test]
    fn msg_a_alias_parses() {
        let m: IdMethod = serde_json::from_str("\"MsgA\"").unwrap();
        assert_eq!(m, IdMethod::Msg3Lcid);
    }
}
