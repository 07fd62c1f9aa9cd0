//! Multi-cell downlink capacity of mixed eMBB / RedCap populations.
//!
//! Each drop places users in a hexagonal layout, associates them with the
//! strongest cell and fixes their SINR under full-buffer interference. Each
//! cell is then simulated on its own as a fluid resource-sharing system:
//! between events (file arrivals and completions) the scheduler's PRB shares
//! are constant, so time jumps straight to the next event.
//!
//! * Round robin gives every backlogged user an equal PRB share.
//! * Proportional fair gives the same shares (channels are static) and adds
//!   the multi-user diversity gain of picking users on their fading peaks,
//!   approximated by scaling SINR by the harmonic number of the backlog.
//!
//! A RedCap user cannot take more PRBs than its bandwidth allows; whatever
//! it cannot use is shared among the others.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{builtin_profile, prbs_within_bandwidth, transmission_bandwidth_prbs, CapabilityProfile, FrequencyRange, ProfileKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTraffic", into = "RawTraffic")]
pub struct TrafficModel {
    pub payload_bytes: u64,
    pub period_s: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTraffic {
    pub payload_bytes: u64,
    pub period_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offered_bps: Option<f64>,
}

impl TryFrom<RawTraffic> for TrafficModel {
    type Error = crate::error::Error;

    fn try_from(r: RawTraffic) -> Result<Self> {
        let t = TrafficModel::new(r.payload_bytes, r.period_s)?;
        if let Some(o) = r.offered_bps {
            if (o - t.offered_bps()).abs() > 1e-9 * t.offered_bps() {
                return invalid(
                    "traffic model",
                    format!("offered_bps {o} does not match payload and period ({})", t.offered_bps()),
                );
            }
        }
        Ok(t)
    }
}

impl From<TrafficModel> for RawTraffic {
    fn from(t: TrafficModel) -> Self {
        RawTraffic {
            payload_bytes: t.payload_bytes,
            period_s: t.period_s,
            offered_bps: None,
        }
    }
}

impl TrafficModel {
    pub fn new(payload_bytes: u64, period_s: f64) -> Result<Self> {
        if payload_bytes == 0 || !(period_s > 0.0 && period_s.is_finite()) {
            return invalid("traffic model", "payload and period must be positive");
        }
        Ok(TrafficModel { payload_bytes, period_s })
    }

    /// 0.5 MB every 200 ms.
    pub fn embb() -> Self {
        TrafficModel {
            payload_bytes: 500_000,
            period_s: 0.2,
        }
    }

    /// 0.1 MB every 2 s.
    pub fn redcap() -> Self {
        TrafficModel {
            payload_bytes: 100_000,
            period_s: 2.0,
        }
    }

    pub fn offered_bps(&self) -> f64 {
        self.payload_bytes as f64 * 8.0 / self.period_s
    }

    fn bits(&self) -> f64 {
        self.payload_bytes as f64 * 8.0
    }
}

/// Total offered load of `users`, in bit/s.
pub fn offered_load(users: &[(CapabilityProfile, TrafficModel)]) -> f64 {
    users.iter().map(|(_, t)| t.offered_bps()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheduler {
    RoundRobin,
    ProportionalFair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum InterferenceModel {
    /// Every neighbor transmits all the time.
    FullBuffer,
    /// Neighbors interfere in proportion to their PRB utilization.
    #[default]
    LoadCoupled,
}

/// How the load sweep grows the population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum LoadAxis {
    /// Load point `k` of `K` offers `k/K · users_per_cell` eMBB-user
    /// equivalents of traffic; the user count follows from the mix.
    #[default]
    OfferedLoad,
    /// Load point `k` of `K` has `k/K · users_per_cell` users per cell.
    UserCount,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacityScenario {
    pub n_cells: u32,
    pub users_per_cell: u32,
    pub redcap_fraction: f64,
    pub carrier_freq_ghz: f64,
    pub bandwidth_mhz: f64,
    pub scs_khz: u32,
    pub scheduler: Scheduler,
    pub interference: InterferenceModel,
    /// Load-coupling passes after the initial full-buffer pass.
    pub coupling_iterations: u32,
    pub redcap_rx_penalty_db: f64,
    /// Attenuation of the Shannon bound in the SINR to SE map.
    pub se_attenuation: f64,
    /// Layers and modulation order of these profiles bound the SE.
    pub embb_profile: CapabilityProfile,
    pub redcap_profile: CapabilityProfile,
    pub embb_traffic: TrafficModel,
    pub redcap_traffic: TrafficModel,
    pub seed: u64,
    pub drops: u32,
    pub load_points: u32,
    pub load_axis: LoadAxis,
    pub isd_m: f64,
    pub min_distance_m: f64,
    pub shadowing_std_db: f64,
    pub dl_psd_dbm_per_mhz: f64,
    pub ue_noise_figure_db: f64,
    pub bs_height_m: f64,
    pub ue_height_m: f64,
    pub duration_s: f64,
    pub warmup_s: f64,
}

impl Default for CapacityScenario {
    fn default() -> Self {
        CapacityScenario {
            n_cells: 7,
            users_per_cell: 30,
            redcap_fraction: 0.0,
            carrier_freq_ghz: 2.6,
            bandwidth_mhz: 100.0,
            scs_khz: 30,
            scheduler: Scheduler::RoundRobin,
            interference: InterferenceModel::LoadCoupled,
            coupling_iterations: 2,
            redcap_rx_penalty_db: 3.0,
            se_attenuation: 0.6,
            embb_profile: builtin_profile(ProfileKind::ReferenceNrFr1),
            redcap_profile: builtin_profile(ProfileKind::RedCapBaselineFr1),
            embb_traffic: TrafficModel::embb(),
            redcap_traffic: TrafficModel::redcap(),
            seed: 1,
            drops: 10,
            load_points: 10,
            load_axis: LoadAxis::OfferedLoad,
            isd_m: 500.0,
            min_distance_m: 35.0,
            shadowing_std_db: 8.0,
            dl_psd_dbm_per_mhz: 33.0,
            ue_noise_figure_db: 7.0,
            bs_height_m: 25.0,
            ue_height_m: 1.5,
            duration_s: 10.0,
            warmup_s: 1.0,
        }
    }
}

impl CapacityScenario {
    pub fn validate(&self) -> Result<()> {
        if self.n_cells == 0 || self.users_per_cell == 0 || self.drops == 0 || self.load_points == 0 {
            return invalid("capacity scenario", "n_cells, users_per_cell, drops and load_points must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.redcap_fraction) {
            return invalid("capacity scenario", format!("redcap_fraction {} outside [0, 1]", self.redcap_fraction));
        }
        if !(self.bandwidth_mhz > 0.0) {
            return invalid("capacity scenario", "bandwidth must be positive");
        }
        if !(self.se_attenuation > 0.0 && self.se_attenuation <= 1.0) {
            return invalid("capacity scenario", "se_attenuation must be in (0, 1]");
        }
        if !(self.duration_s > self.warmup_s && self.warmup_s >= 0.0) {
            return invalid("capacity scenario", "duration_s must exceed warmup_s >= 0");
        }
        let positive = [self.isd_m, self.carrier_freq_ghz, self.bs_height_m, self.ue_height_m];
        if positive.iter().any(|v| !(*v > 0.0)) || !(self.min_distance_m >= 0.0) || !(self.shadowing_std_db >= 0.0) {
            return invalid("capacity scenario", "geometry parameters must be positive");
        }
        if self.min_distance_m >= self.isd_m / 2.0 {
            return invalid("capacity scenario", "min_distance_m must be below half the inter-site distance");
        }
        if self.embb_profile.frequency_range != FrequencyRange::FR1 || self.redcap_profile.frequency_range != FrequencyRange::FR1 {
            return invalid("capacity scenario", "only FR1 profiles are simulated");
        }
        if !self.redcap_profile.is_redcap {
            return invalid("capacity scenario", "redcap_profile is not a RedCap profile");
        }
        self.n_prb()?;
        self.redcap_prbs()?;
        Ok(())
    }

    pub fn n_prb(&self) -> Result<u32> {
        transmission_bandwidth_prbs(FrequencyRange::FR1, self.scs_khz, self.bandwidth_mhz)
    }

    /// PRBs a RedCap device can receive at once.
    pub fn redcap_prbs(&self) -> Result<u32> {
        let n = prbs_within_bandwidth(FrequencyRange::FR1, self.scs_khz, self.redcap_profile.max_bandwidth_mhz)?;
        Ok(n.min(self.n_prb()?))
    }

    /// (eMBB, RedCap) users per cell at load point `k` (1-based).
    pub fn users_at(&self, k: u32) -> (u32, u32) {
        let frac = f64::from(k) / f64::from(self.load_points);
        let f = self.redcap_fraction;
        match self.load_axis {
            LoadAxis::UserCount => {
                let n = (frac * f64::from(self.users_per_cell)).round().max(1.0) as u32;
                let embb = (f64::from(n) * (1.0 - f)).round() as u32;
                (embb, n - embb)
            }
            LoadAxis::OfferedLoad => {
                let target = frac * f64::from(self.users_per_cell) * self.embb_traffic.offered_bps();
                let mean = (1.0 - f) * self.embb_traffic.offered_bps() + f * self.redcap_traffic.offered_bps();
                let n = (target / mean).round().max(1.0) as u32;
                let embb = if f < 1.0 {
                    ((f64::from(n) * (1.0 - f)).round() as u32).max(1).min(n)
                } else {
                    0
                };
                (embb, n - embb)
            }
        }
    }
}

/// DL eMBB user throughput at one load point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThroughputReport {
    pub load_point: u32,
    pub embb_users_per_cell: u32,
    pub redcap_users_per_cell: u32,
    pub offered_load_bps_per_cell: f64,
    pub served_load_bps_per_cell: f64,
    pub p5_mbps: f64,
    pub p50_mbps: f64,
    pub p95_mbps: f64,
    pub resource_utilization: f64,
    /// Delivered bits per used PRB-second per Hz.
    pub spectral_efficiency_bps_hz: f64,
    /// eMBB file-throughput samples behind the percentiles; zero means the
    /// percentiles are placeholders.
    pub embb_samples: usize,
}

/// Nearest-rank percentile of sorted `v`; 0 for an empty slice.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (p / 100.0 * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

pub fn run_capacity_sim(scn: &CapacityScenario) -> Result<Vec<ThroughputReport>> {
    scn.validate()?;
    (1..=scn.load_points).map(|k| run_load_point(scn, k)).collect()
}

/// Results of one drop at one load point.
#[derive(Debug, Default)]
struct DropResult {
    samples_bps: Vec<f64>,
    served_bits: f64,
    used_prb_share_s: f64,
    used_hz_s: f64,
}

fn run_load_point(scn: &CapacityScenario, k: u32) -> Result<ThroughputReport> {
    let (n_embb, n_rc) = scn.users_at(k);
    let geo = Geometry::new(scn)?;
    let drops: Vec<DropResult> = (0..scn.drops)
        .into_par_iter()
        .map(|d| run_drop(scn, &geo, d, n_embb, n_rc))
        .collect();

    let mut samples: Vec<f64> = drops.iter().flat_map(|d| d.samples_bps.iter().copied()).collect();
    samples.sort_by(f64::total_cmp);
    let window = scn.duration_s - scn.warmup_s;
    let cell_windows = f64::from(scn.drops) * f64::from(scn.n_cells) * window;
    let served: f64 = drops.iter().map(|d| d.served_bits).sum();
    let used: f64 = drops.iter().map(|d| d.used_prb_share_s).sum();
    let used_hz: f64 = drops.iter().map(|d| d.used_hz_s).sum();
    let offered = f64::from(n_embb) * scn.embb_traffic.offered_bps() + f64::from(n_rc) * scn.redcap_traffic.offered_bps();
    Ok(ThroughputReport {
        load_point: k,
        embb_users_per_cell: n_embb,
        redcap_users_per_cell: n_rc,
        offered_load_bps_per_cell: offered,
        served_load_bps_per_cell: served / cell_windows,
        p5_mbps: percentile(&samples, 5.0) / 1e6,
        p50_mbps: percentile(&samples, 50.0) / 1e6,
        p95_mbps: percentile(&samples, 95.0) / 1e6,
        resource_utilization: (used / cell_windows).min(1.0),
        spectral_efficiency_bps_hz: if used_hz > 0.0 { served / used_hz } else { 0.0 },
        embb_samples: samples.len(),
    })
}

// ---------------------------------------------------------------------------
// Geometry and radio
// ---------------------------------------------------------------------------

struct Geometry {
    sites: Vec<(f64, f64)>,
    n_prb: u32,
    redcap_prbs: u32,
    prb_hz: f64,
    /// Transmit power per PRB in dBm.
    prb_power_dbm: f64,
    noise_dbm: f64,
}

impl Geometry {
    fn new(scn: &CapacityScenario) -> Result<Self> {
        let prb_hz = 12.0 * f64::from(scn.scs_khz) * 1e3;
        Ok(Geometry {
            sites: hex_sites(scn.n_cells as usize, scn.isd_m),
            n_prb: scn.n_prb()?,
            redcap_prbs: scn.redcap_prbs()?,
            prb_hz,
            prb_power_dbm: scn.dl_psd_dbm_per_mhz + 10.0 * (prb_hz / 1e6).log10(),
            noise_dbm: -174.0 + 10.0 * prb_hz.log10() + scn.ue_noise_figure_db,
        })
    }
}

/// Site positions in rings around the origin, center first.
fn hex_sites(n: usize, isd: f64) -> Vec<(f64, f64)> {
    const DIRS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];
    let mut axial = vec![(0, 0)];
    let mut ring = 1;
    while axial.len() < n {
        let (mut q, mut r) = (-ring, ring);
        for (dq, dr) in DIRS {
            for _ in 0..ring {
                axial.push((q, r));
                q += dq;
                r += dr;
            }
        }
        ring += 1;
    }
    axial.truncate(n);
    axial
        .into_iter()
        .map(|(q, r)| (isd * (f64::from(q) + f64::from(r) / 2.0), isd * f64::from(r) * 3f64.sqrt() / 2.0))
        .collect()
}

fn path_loss_db(scn: &CapacityScenario, d2: f64) -> f64 {
    let dz = scn.bs_height_m - scn.ue_height_m;
    let d3 = (d2 * d2 + dz * dz).sqrt();
    13.54 + 39.08 * d3.log10() + 20.0 * scn.carrier_freq_ghz.log10()
}

/// Per-user random stream keyed by its identity, so the same user shows up
/// with the same position, shadowing and arrivals at every load point and
/// every RedCap fraction.
fn user_rng(seed: u64, drop: u32, cell: u32, kind: u8, index: u32) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..12].copy_from_slice(&drop.to_le_bytes());
    key[12..16].copy_from_slice(&cell.to_le_bytes());
    key[16] = kind;
    key[20..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

#[derive(Debug, Clone)]
struct User {
    redcap: bool,
    serving: usize,
    /// Received power per PRB from every site, in mW.
    rx_mw: Vec<f64>,
    /// Linear SINR factor for receiver penalties (1 for none).
    penalty: f64,
    layers: u32,
    modulation_order: u32,
    arrivals: Vec<f64>,
    bits: f64,
}

impl User {
    /// SINR with each interfering cell weighted by its activity.
    fn sinr(&self, cell_activity: &[f64], noise_mw: f64) -> f64 {
        let interference: f64 = self
            .rx_mw
            .iter()
            .zip(cell_activity)
            .enumerate()
            .filter(|(c, _)| *c != self.serving)
            .map(|(_, (p, a))| p * a)
            .sum();
        self.penalty * self.rx_mw[self.serving] / (interference + noise_mw)
    }
}

/// Attenuated Shannon map with rank adaptation: the best of 1..=`layers`
/// streams sharing the SINR, each capped at `modulation_order` b/s/Hz.
pub fn spectral_efficiency(sinr: f64, attenuation: f64, layers: u32, modulation_order: u32) -> f64 {
    (1..=layers.max(1))
        .map(|l| {
            let l = f64::from(l);
            (attenuation * l * (1.0 + sinr / l).log2()).min(f64::from(modulation_order) * l)
        })
        .fold(0.0, f64::max)
}

fn make_user(scn: &CapacityScenario, geo: &Geometry, drop: u32, home: u32, redcap: bool, index: u32) -> User {
    let mut rng = user_rng(scn.seed, drop, home, redcap as u8, index);
    let (cx, cy) = geo.sites[home as usize];
    let apothem = scn.isd_m / 2.0;
    let circum = scn.isd_m / 3f64.sqrt();
    let (x, y) = loop {
        let x = rng.random_range(-apothem..apothem);
        let y = rng.random_range(-circum..circum);
        if x.abs() / 3f64.sqrt() + y.abs() <= circum && (x * x + y * y).sqrt() >= scn.min_distance_m {
            break (cx + x, cy + y);
        }
    };
    let shadow = Normal::new(0.0, scn.shadowing_std_db).expect("finite std");
    let rx_mw: Vec<f64> = geo
        .sites
        .iter()
        .map(|&(sx, sy)| {
            let d = ((x - sx).powi(2) + (y - sy).powi(2)).sqrt();
            let dbm = geo.prb_power_dbm - path_loss_db(scn, d) - shadow.sample(&mut rng);
            10f64.powf(dbm / 10.0)
        })
        .collect();
    let serving = rx_mw
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("at least one site");
    let (traffic, profile, penalty_db) = if redcap {
        (scn.redcap_traffic, &scn.redcap_profile, scn.redcap_rx_penalty_db)
    } else {
        (scn.embb_traffic, &scn.embb_profile, 0.0)
    };
    let exp = Exp::new(1.0 / traffic.period_s).expect("positive rate");
    let mut arrivals = Vec::new();
    let mut t = exp.sample(&mut rng);
    while t < scn.duration_s {
        arrivals.push(t);
        t += exp.sample(&mut rng);
    }
    User {
        redcap,
        serving,
        rx_mw,
        penalty: 10f64.powf(-penalty_db / 10.0),
        layers: profile.dl_mimo_layers,
        modulation_order: profile.max_dl_modulation_order,
        arrivals,
        bits: traffic.bits(),
    }
}

fn run_drop(scn: &CapacityScenario, geo: &Geometry, drop: u32, n_embb: u32, n_rc: u32) -> DropResult {
    let mut users = Vec::new();
    for home in 0..scn.n_cells {
        users.extend((0..n_embb).map(|i| make_user(scn, geo, drop, home, false, i)));
        users.extend((0..n_rc).map(|i| make_user(scn, geo, drop, home, true, i)));
    }
    let n = scn.n_cells as usize;
    let members: Vec<Vec<&User>> = (0..n).map(|c| users.iter().filter(|u| u.serving == c).collect()).collect();

    // Start from full-buffer interference; each coupling pass re-weights
    // neighbors by the activity measured in the previous pass.
    let passes = match scn.interference {
        InterferenceModel::FullBuffer => 1,
        InterferenceModel::LoadCoupled => scn.coupling_iterations + 1,
    };
    let window = scn.duration_s - scn.warmup_s;
    let mut activity = vec![1.0; n];
    let mut cells = Vec::new();
    for _ in 0..passes {
        cells = members.iter().map(|m| simulate_cell(scn, geo, m, &activity)).collect::<Vec<CellResult>>();
        activity = cells.iter().map(|c| (c.used_share_s / window).min(1.0)).collect();
    }

    let mut out = DropResult::default();
    for c in cells {
        out.samples_bps.extend(c.samples_bps);
        out.served_bits += c.served_bits;
        out.used_prb_share_s += c.used_share_s;
        out.used_hz_s += c.used_share_s * f64::from(geo.n_prb) * geo.prb_hz;
    }
    out
}

// ---------------------------------------------------------------------------
// Per-cell fluid simulation
// ---------------------------------------------------------------------------

#[derive(Debug, Default)]
struct CellResult {
    samples_bps: Vec<f64>,
    served_bits: f64,
    used_share_s: f64,
}

struct Backlog {
    /// Arrival times of queued files, head first.
    queue: std::collections::VecDeque<f64>,
    remaining: f64,
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Equal shares of the carrier with per-user caps, leftovers redistributed.
fn water_fill(caps: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..caps.len()).collect();
    order.sort_by(|&a, &b| caps[a].total_cmp(&caps[b]));
    let mut shares = vec![0.0; caps.len()];
    let mut left = 1.0;
    for (done, &i) in order.iter().enumerate() {
        let s = caps[i].min(left / (caps.len() - done) as f64);
        shares[i] = s;
        left -= s;
    }
    shares
}

fn simulate_cell(scn: &CapacityScenario, geo: &Geometry, users: &[&User], activity: &[f64]) -> CellResult {
    let end = scn.duration_s;
    let warm = scn.warmup_s;
    let carrier_hz = f64::from(geo.n_prb) * geo.prb_hz;
    let redcap_cap = f64::from(geo.redcap_prbs) / f64::from(geo.n_prb);
    let noise_mw = 10f64.powf(geo.noise_dbm / 10.0);
    let sinr: Vec<f64> = users.iter().map(|u| u.sinr(activity, noise_mw)).collect();
    let se_of = |i: usize, gain: f64| {
        let u = users[i];
        spectral_efficiency(sinr[i] * gain, scn.se_attenuation, u.layers, u.modulation_order)
    };
    let se_plain: Vec<f64> = (0..users.len()).map(|i| se_of(i, 1.0)).collect();

    let mut events: Vec<(f64, usize)> = users
        .iter()
        .enumerate()
        .flat_map(|(i, u)| u.arrivals.iter().map(move |&t| (t, i)))
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut next_event = 0;

    let mut backlog: Vec<Backlog> = users
        .iter()
        .map(|_| Backlog {
            queue: Default::default(),
            remaining: 0.0,
        })
        .collect();
    let mut active: Vec<usize> = Vec::new();
    let mut out = CellResult::default();
    let mut t = 0.0;

    loop {
        let caps: Vec<f64> = active.iter().map(|&i| if users[i].redcap { redcap_cap } else { 1.0 }).collect();
        let shares = water_fill(&caps);
        let rates: Vec<f64> = match scn.scheduler {
            Scheduler::RoundRobin => active.iter().zip(&shares).map(|(&i, s)| s * carrier_hz * se_plain[i]).collect(),
            Scheduler::ProportionalFair => {
                let gain = harmonic(active.len());
                active.iter().zip(&shares).map(|(&i, s)| s * carrier_hz * se_of(i, gain)).collect()
            }
        };

        let mut dt = f64::INFINITY;
        let mut finisher = None;
        for (j, &i) in active.iter().enumerate() {
            let d = backlog[i].remaining.max(0.0) / rates[j];
            if d < dt {
                dt = d;
                finisher = Some(j);
            }
        }
        let t_arrival = events.get(next_event).map_or(f64::INFINITY, |e| e.0);
        let t_next = (t + dt).min(t_arrival).min(end);

        let step = t_next - t;
        let in_window = (t_next - t.max(warm)).max(0.0);
        out.used_share_s += shares.iter().sum::<f64>() * in_window;
        for (j, &i) in active.iter().enumerate() {
            backlog[i].remaining -= rates[j] * step;
            out.served_bits += rates[j] * in_window;
        }
        t = t_next;

        if t >= end {
            break;
        }
        if t_arrival <= t {
            let (_, i) = events[next_event];
            next_event += 1;
            let b = &mut backlog[i];
            if b.queue.is_empty() {
                b.remaining = users[i].bits;
                active.push(i);
            }
            b.queue.push_back(t_arrival);
        } else if let Some(j) = finisher {
            let i = active[j];
            let b = &mut backlog[i];
            let arrived = b.queue.pop_front().expect("active user has a file");
            if !users[i].redcap && arrived >= warm {
                out.samples_bps.push(users[i].bits / (t - arrived));
            }
            if b.queue.is_empty() {
                b.remaining = 0.0;
                active.remove(j);
            } else {
                b.remaining = users[i].bits;
            }
        }
    }

    // Files still in the system: delivered bits over elapsed time.
    for &i in &active {
        if users[i].redcap {
            continue;
        }
        let b = &backlog[i];
        for (n, &arrived) in b.queue.iter().enumerate() {
            if arrived < warm {
                continue;
            }
            let delivered = if n == 0 { users[i].bits - b.remaining.max(0.0) } else { 0.0 };
            out.samples_bps.push(delivered / (end - arrived));
        }
    }
    out
}
