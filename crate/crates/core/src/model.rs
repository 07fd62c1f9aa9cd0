//! Shared domain types: device capabilities, carriers, deployments and
//! use-case requirements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FrequencyRange {
    FR1,
    FR2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DuplexMode {
    #[serde(rename = "TDD")]
    Tdd,
    #[serde(rename = "FD-FDD")]
    FdFdd,
    #[serde(rename = "HD-FDD")]
    HdFdd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    DL,
    UL,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::DL => f.write_str("DL"),
            Direction::UL => f.write_str("UL"),
        }
    }
}

/// Radio capabilities of a device.
///
/// Construction goes through [`CapabilityProfile::new`] (and serde uses the
/// same path), so a value of this type always satisfies the RedCap limits:
/// at most 20 MHz in FR1 and 100 MHz in FR2, at most two Rx branches and
/// two MIMO layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCapabilityProfile", into = "RawCapabilityProfile")]
pub struct CapabilityProfile {
    pub max_bandwidth_mhz: f64,
    pub rx_branches: u32,
    pub dl_mimo_layers: u32,
    pub ul_mimo_layers: u32,
    /// Bits per symbol: 6 for 64QAM, 8 for 256QAM.
    pub max_dl_modulation_order: u32,
    pub max_ul_modulation_order: u32,
    pub duplex_mode: DuplexMode,
    pub frequency_range: FrequencyRange,
    pub max_drbs: u32,
    pub sn_length_bits: u32,
    pub supports_anr: bool,
    pub is_redcap: bool,
    /// Dual-polarized elements per antenna panel (FR2 only).
    pub antenna_elements_per_panel: Option<u32>,
    /// Modem cost reduction relative to the reference device, in percent.
    /// Display-only metadata; nothing is computed from it.
    pub cost_reduction_pct: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCapabilityProfile {
    pub max_bandwidth_mhz: f64,
    pub rx_branches: u32,
    pub dl_mimo_layers: u32,
    #[serde(default = "one")]
    pub ul_mimo_layers: u32,
    pub max_dl_modulation_order: u32,
    pub max_ul_modulation_order: u32,
    pub duplex_mode: DuplexMode,
    pub frequency_range: FrequencyRange,
    pub max_drbs: u32,
    pub sn_length_bits: u32,
    pub supports_anr: bool,
    pub is_redcap: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antenna_elements_per_panel: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_reduction_pct: Option<f64>,
}

fn one() -> u32 {
    1
}

impl TryFrom<RawCapabilityProfile> for CapabilityProfile {
    type Error = Error;

    fn try_from(r: RawCapabilityProfile) -> Result<Self> {
        CapabilityProfile::new(CapabilityProfile {
            max_bandwidth_mhz: r.max_bandwidth_mhz,
            rx_branches: r.rx_branches,
            dl_mimo_layers: r.dl_mimo_layers,
            ul_mimo_layers: r.ul_mimo_layers,
            max_dl_modulation_order: r.max_dl_modulation_order,
            max_ul_modulation_order: r.max_ul_modulation_order,
            duplex_mode: r.duplex_mode,
            frequency_range: r.frequency_range,
            max_drbs: r.max_drbs,
            sn_length_bits: r.sn_length_bits,
            supports_anr: r.supports_anr,
            is_redcap: r.is_redcap,
            antenna_elements_per_panel: r.antenna_elements_per_panel,
            cost_reduction_pct: r.cost_reduction_pct,
        })
    }
}

impl From<CapabilityProfile> for RawCapabilityProfile {
    fn from(p: CapabilityProfile) -> Self {
        RawCapabilityProfile {
            max_bandwidth_mhz: p.max_bandwidth_mhz,
            rx_branches: p.rx_branches,
            dl_mimo_layers: p.dl_mimo_layers,
            ul_mimo_layers: p.ul_mimo_layers,
            max_dl_modulation_order: p.max_dl_modulation_order,
            max_ul_modulation_order: p.max_ul_modulation_order,
            duplex_mode: p.duplex_mode,
            frequency_range: p.frequency_range,
            max_drbs: p.max_drbs,
            sn_length_bits: p.sn_length_bits,
            supports_anr: p.supports_anr,
            is_redcap: p.is_redcap,
            antenna_elements_per_panel: p.antenna_elements_per_panel,
            cost_reduction_pct: p.cost_reduction_pct,
        }
    }
}

/// Maximum RedCap bandwidth per frequency range, in MHz.
pub fn redcap_max_bandwidth_mhz(fr: FrequencyRange) -> f64 {
    match fr {
        FrequencyRange::FR1 => 20.0,
        FrequencyRange::FR2 => 100.0,
    }
}

pub const REDCAP_MAX_RX_BRANCHES: u32 = 2;
pub const REDCAP_MAX_MIMO_LAYERS: u32 = 2;

impl CapabilityProfile {
    /// Validates `p` and returns it unchanged.
    pub fn new(p: CapabilityProfile) -> Result<Self> {
        if !(p.max_bandwidth_mhz > 0.0) || !p.max_bandwidth_mhz.is_finite() {
            return invalid("capability profile", "max_bandwidth_mhz must be positive");
        }
        if p.rx_branches == 0 || p.dl_mimo_layers == 0 || p.ul_mimo_layers == 0 {
            return invalid(
                "capability profile",
                "rx_branches and MIMO layer counts must be at least 1",
            );
        }
        for (dir, q) in [("DL", p.max_dl_modulation_order), ("UL", p.max_ul_modulation_order)] {
            if !matches!(q, 2 | 4 | 6 | 8) {
                return invalid(
                    "capability profile",
                    format!("{dir} modulation order {q} is not one of 2, 4, 6, 8"),
                );
            }
        }
        if p.is_redcap {
            let cap = redcap_max_bandwidth_mhz(p.frequency_range);
            if p.max_bandwidth_mhz > cap {
                return invalid(
                    "capability profile",
                    format!(
                        "RedCap {:?} maximum device bandwidth is {cap} MHz, got {} MHz",
                        p.frequency_range, p.max_bandwidth_mhz
                    ),
                );
            }
            if p.rx_branches > REDCAP_MAX_RX_BRANCHES {
                return invalid(
                    "capability profile",
                    format!(
                        "RedCap devices support at most {REDCAP_MAX_RX_BRANCHES} receiver branches, got {}",
                        p.rx_branches
                    ),
                );
            }
            if p.dl_mimo_layers > REDCAP_MAX_MIMO_LAYERS || p.ul_mimo_layers > REDCAP_MAX_MIMO_LAYERS {
                return invalid(
                    "capability profile",
                    format!(
                        "RedCap devices support at most {REDCAP_MAX_MIMO_LAYERS} MIMO layers, got DL {} / UL {}",
                        p.dl_mimo_layers, p.ul_mimo_layers
                    ),
                );
            }
        }
        if p.dl_mimo_layers > p.rx_branches {
            return invalid(
                "capability profile",
                format!(
                    "dl_mimo_layers ({}) exceeds rx_branches ({})",
                    p.dl_mimo_layers, p.rx_branches
                ),
            );
        }
        if !matches!(p.max_drbs, 8 | 16) {
            return invalid("capability profile", format!("max_drbs must be 8 or 16, got {}", p.max_drbs));
        }
        if !matches!(p.sn_length_bits, 12 | 18) {
            return invalid(
                "capability profile",
                format!("sn_length_bits must be 12 or 18, got {}", p.sn_length_bits),
            );
        }
        if p.frequency_range == FrequencyRange::FR2 && p.duplex_mode != DuplexMode::Tdd {
            return invalid("capability profile", "FR2 devices operate in TDD only");
        }
        if let Some(0) = p.antenna_elements_per_panel {
            return invalid("capability profile", "antenna_elements_per_panel must be positive");
        }
        Ok(p)
    }

    pub fn max_layers(&self, dir: Direction) -> u32 {
        match dir {
            Direction::DL => self.dl_mimo_layers,
            Direction::UL => self.ul_mimo_layers,
        }
    }

    pub fn max_modulation_order(&self, dir: Direction) -> u32 {
        match dir {
            Direction::DL => self.max_dl_modulation_order,
            Direction::UL => self.max_ul_modulation_order,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProfileKind {
    ReferenceNrFr1,
    ReferenceNrFr2,
    RedCapBaselineFr1,
    RedCapBaselineFr2,
}

impl ProfileKind {
    pub const ALL: [ProfileKind; 4] = [
        ProfileKind::ReferenceNrFr1,
        ProfileKind::ReferenceNrFr2,
        ProfileKind::RedCapBaselineFr1,
        ProfileKind::RedCapBaselineFr2,
    ];
}

/// Preset capability profiles for the reference Release 15 device and the
/// simplest RedCap device in each frequency range.
pub fn builtin_profile(kind: ProfileKind) -> CapabilityProfile {
    let p = match kind {
        ProfileKind::ReferenceNrFr1 => CapabilityProfile {
            max_bandwidth_mhz: 100.0,
            rx_branches: 4,
            dl_mimo_layers: 4,
            ul_mimo_layers: 1,
            max_dl_modulation_order: 8,
            max_ul_modulation_order: 6,
            duplex_mode: DuplexMode::FdFdd,
            frequency_range: FrequencyRange::FR1,
            max_drbs: 16,
            sn_length_bits: 18,
            supports_anr: true,
            is_redcap: false,
            antenna_elements_per_panel: None,
            cost_reduction_pct: Some(0.0),
        },
        ProfileKind::ReferenceNrFr2 => CapabilityProfile {
            max_bandwidth_mhz: 200.0,
            rx_branches: 2,
            dl_mimo_layers: 2,
            ul_mimo_layers: 1,
            max_dl_modulation_order: 6,
            max_ul_modulation_order: 6,
            duplex_mode: DuplexMode::Tdd,
            frequency_range: FrequencyRange::FR2,
            max_drbs: 16,
            sn_length_bits: 18,
            supports_anr: true,
            is_redcap: false,
            antenna_elements_per_panel: Some(4),
            cost_reduction_pct: Some(0.0),
        },
        ProfileKind::RedCapBaselineFr1 => CapabilityProfile {
            max_bandwidth_mhz: 20.0,
            rx_branches: 1,
            dl_mimo_layers: 1,
            ul_mimo_layers: 1,
            max_dl_modulation_order: 6,
            max_ul_modulation_order: 6,
            duplex_mode: DuplexMode::HdFdd,
            frequency_range: FrequencyRange::FR1,
            max_drbs: 8,
            sn_length_bits: 12,
            supports_anr: false,
            is_redcap: true,
            antenna_elements_per_panel: None,
            cost_reduction_pct: Some(65.0),
        },
        ProfileKind::RedCapBaselineFr2 => CapabilityProfile {
            max_bandwidth_mhz: 100.0,
            // FR2 RedCap keeps the reference device's two receiver branches.
            rx_branches: 2,
            dl_mimo_layers: 1,
            ul_mimo_layers: 1,
            max_dl_modulation_order: 6,
            max_ul_modulation_order: 6,
            duplex_mode: DuplexMode::Tdd,
            frequency_range: FrequencyRange::FR2,
            max_drbs: 8,
            sn_length_bits: 12,
            supports_anr: false,
            is_redcap: true,
            antenna_elements_per_panel: Some(2),
            cost_reduction_pct: Some(50.0),
        },
    };
    CapabilityProfile::new(p).expect("builtin profiles are valid")
}

// ---------------------------------------------------------------------------
// Carrier numerology
// ---------------------------------------------------------------------------

// Maximum transmission bandwidth configuration N_RB per (SCS, channel bandwidth).
const FR1_15KHZ: &[(u32, u32)] = &[(5, 25), (10, 52), (15, 79), (20, 106), (25, 133), (30, 160), (40, 216), (50, 270)];
const FR1_30KHZ: &[(u32, u32)] = &[
    (5, 11),
    (10, 24),
    (15, 38),
    (20, 51),
    (25, 65),
    (30, 78),
    (40, 106),
    (50, 133),
    (60, 162),
    (70, 189),
    (80, 217),
    (90, 245),
    (100, 273),
];
const FR1_60KHZ: &[(u32, u32)] = &[
    (10, 11),
    (15, 18),
    (20, 24),
    (25, 31),
    (30, 38),
    (40, 51),
    (50, 65),
    (60, 79),
    (70, 93),
    (80, 107),
    (90, 121),
    (100, 135),
];
const FR2_60KHZ: &[(u32, u32)] = &[(50, 66), (100, 132), (200, 264)];
const FR2_120KHZ: &[(u32, u32)] = &[(50, 32), (100, 66), (200, 132), (400, 264)];

/// Number of PRBs for a channel bandwidth at the given subcarrier spacing.
pub fn transmission_bandwidth_prbs(fr: FrequencyRange, scs_khz: u32, bandwidth_mhz: f64) -> Result<u32> {
    let table = match (fr, scs_khz) {
        (FrequencyRange::FR1, 15) => FR1_15KHZ,
        (FrequencyRange::FR1, 30) => FR1_30KHZ,
        (FrequencyRange::FR1, 60) => FR1_60KHZ,
        (FrequencyRange::FR2, 60) => FR2_60KHZ,
        (FrequencyRange::FR2, 120) => FR2_120KHZ,
        _ => &[],
    };
    table
        .iter()
        .find(|(bw, _)| (*bw as f64 - bandwidth_mhz).abs() < 1e-9)
        .map(|&(_, n)| n)
        .ok_or(Error::UnsupportedBandwidth {
            bandwidth_mhz,
            scs_khz,
            range: fr,
        })
}

/// Largest tabulated PRB count whose channel bandwidth does not exceed
/// `bandwidth_mhz`.
pub fn prbs_within_bandwidth(fr: FrequencyRange, scs_khz: u32, bandwidth_mhz: f64) -> Result<u32> {
    let table = match (fr, scs_khz) {
        (FrequencyRange::FR1, 15) => FR1_15KHZ,
        (FrequencyRange::FR1, 30) => FR1_30KHZ,
        (FrequencyRange::FR1, 60) => FR1_60KHZ,
        (FrequencyRange::FR2, 60) => FR2_60KHZ,
        (FrequencyRange::FR2, 120) => FR2_120KHZ,
        _ => &[],
    };
    table
        .iter()
        .filter(|(bw, _)| *bw as f64 <= bandwidth_mhz + 1e-9)
        .map(|&(_, n)| n)
        .max()
        .ok_or(Error::UnsupportedBandwidth {
            bandwidth_mhz,
            scs_khz,
            range: fr,
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCarrierConfig", into = "RawCarrierConfig")]
pub struct CarrierConfig {
    pub frequency_range: FrequencyRange,
    pub scs_khz: u32,
    pub bandwidth_mhz: f64,
    pub duplex_mode: DuplexMode,
    /// Fraction of time-domain resources used for DL (TDD only).
    pub tdd_dl_fraction: f64,
    pub n_prb: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCarrierConfig {
    pub frequency_range: FrequencyRange,
    pub scs_khz: u32,
    pub bandwidth_mhz: f64,
    pub duplex_mode: DuplexMode,
    #[serde(default = "full_share")]
    pub tdd_dl_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_prb: Option<u32>,
}

fn full_share() -> f64 {
    1.0
}

impl TryFrom<RawCarrierConfig> for CarrierConfig {
    type Error = Error;

    fn try_from(r: RawCarrierConfig) -> Result<Self> {
        let c = CarrierConfig::new(r.frequency_range, r.scs_khz, r.bandwidth_mhz, r.duplex_mode, r.tdd_dl_fraction)?;
        if let Some(n) = r.n_prb {
            if n != c.n_prb {
                return invalid(
                    "carrier",
                    format!(
                        "n_prb {n} inconsistent with {} MHz at {} kHz (expected {})",
                        c.bandwidth_mhz, c.scs_khz, c.n_prb
                    ),
                );
            }
        }
        Ok(c)
    }
}

impl From<CarrierConfig> for RawCarrierConfig {
    fn from(c: CarrierConfig) -> Self {
        RawCarrierConfig {
            frequency_range: c.frequency_range,
            scs_khz: c.scs_khz,
            bandwidth_mhz: c.bandwidth_mhz,
            duplex_mode: c.duplex_mode,
            tdd_dl_fraction: c.tdd_dl_fraction,
            n_prb: Some(c.n_prb),
        }
    }
}

impl CarrierConfig {
    pub fn new(
        frequency_range: FrequencyRange,
        scs_khz: u32,
        bandwidth_mhz: f64,
        duplex_mode: DuplexMode,
        tdd_dl_fraction: f64,
    ) -> Result<Self> {
        if !matches!(scs_khz, 15 | 30 | 60 | 120) {
            return invalid("carrier", format!("unsupported subcarrier spacing {scs_khz} kHz"));
        }
        if frequency_range == FrequencyRange::FR2 {
            if !matches!(scs_khz, 60 | 120) {
                return invalid("carrier", "FR2 carriers use 60 or 120 kHz subcarrier spacing");
            }
            if duplex_mode != DuplexMode::Tdd {
                return invalid("carrier", "FR2 carriers are TDD");
            }
        }
        if !(0.0..=1.0).contains(&tdd_dl_fraction) {
            return invalid("carrier", format!("tdd_dl_fraction {tdd_dl_fraction} outside [0, 1]"));
        }
        let n_prb = transmission_bandwidth_prbs(frequency_range, scs_khz, bandwidth_mhz)?;
        Ok(CarrierConfig {
            frequency_range,
            scs_khz,
            bandwidth_mhz,
            duplex_mode,
            tdd_dl_fraction,
            n_prb,
        })
    }

    /// OFDM symbols per second (14 symbols per slot).
    pub fn symbols_per_second(&self) -> f64 {
        14.0 * 1000.0 * (self.scs_khz as f64 / 15.0)
    }

    /// Share of time available to `dir`.
    pub fn duplex_share(&self, dir: Direction) -> f64 {
        match (self.duplex_mode, dir) {
            (DuplexMode::Tdd, Direction::DL) => self.tdd_dl_fraction,
            (DuplexMode::Tdd, Direction::UL) => 1.0 - self.tdd_dl_fraction,
            _ => 1.0,
        }
    }
}

// ---------------------------------------------------------------------------
// Deployment scenarios
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeploymentKind {
    RuralFR1,
    UrbanMacroFR1,
    UrbanMicroFR1,
    IndoorFR2,
    Custom,
}

impl fmt::Display for DeploymentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDeployment")]
pub struct DeploymentScenario {
    pub name: DeploymentKind,
    pub carrier_freq_ghz: f64,
    pub dl_psd_dbm_per_mhz: f64,
    /// UE total radiated power.
    pub ue_trp_dbm: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDeployment {
    name: DeploymentKind,
    carrier_freq_ghz: Option<f64>,
    dl_psd_dbm_per_mhz: Option<f64>,
    ue_trp_dbm: Option<f64>,
}

impl TryFrom<RawDeployment> for DeploymentScenario {
    type Error = Error;

    fn try_from(r: RawDeployment) -> Result<Self> {
        let mut d = match r.name {
            DeploymentKind::Custom => {
                let (Some(f), Some(psd), Some(trp)) = (r.carrier_freq_ghz, r.dl_psd_dbm_per_mhz, r.ue_trp_dbm) else {
                    return invalid(
                        "deployment",
                        "Custom deployments need carrier_freq_ghz, dl_psd_dbm_per_mhz and ue_trp_dbm",
                    );
                };
                DeploymentScenario {
                    name: DeploymentKind::Custom,
                    carrier_freq_ghz: f,
                    dl_psd_dbm_per_mhz: psd,
                    ue_trp_dbm: trp,
                }
            }
            kind => DeploymentScenario::preset(kind),
        };
        if let Some(psd) = r.dl_psd_dbm_per_mhz {
            if r.name != DeploymentKind::Custom && psd != d.dl_psd_dbm_per_mhz {
                return invalid(
                    "deployment",
                    format!(
                        "{} uses a DL PSD of {} dBm/MHz, got {psd}",
                        r.name, d.dl_psd_dbm_per_mhz
                    ),
                );
            }
        }
        if let Some(f) = r.carrier_freq_ghz {
            d.carrier_freq_ghz = f;
        }
        if let Some(t) = r.ue_trp_dbm {
            d.ue_trp_dbm = t;
        }
        if !(d.carrier_freq_ghz > 0.0) {
            return invalid("deployment", "carrier_freq_ghz must be positive");
        }
        Ok(d)
    }
}

impl DeploymentScenario {
    pub fn preset(kind: DeploymentKind) -> Self {
        let (f, psd, trp) = match kind {
            DeploymentKind::RuralFR1 => (0.7, 33.0, 23.0),
            DeploymentKind::UrbanMacroFR1 => (2.6, 33.0, 23.0),
            DeploymentKind::UrbanMicroFR1 => (2.6, 24.0, 23.0),
            DeploymentKind::IndoorFR2 => (28.0, 4.0, 23.0),
            DeploymentKind::Custom => (2.6, 33.0, 23.0),
        };
        DeploymentScenario {
            name: kind,
            carrier_freq_ghz: f,
            dl_psd_dbm_per_mhz: psd,
            ue_trp_dbm: trp,
        }
    }

    pub fn frequency_range(&self) -> FrequencyRange {
        if self.carrier_freq_ghz >= 24.25 {
            FrequencyRange::FR2
        } else {
            FrequencyRange::FR1
        }
    }
}

// ---------------------------------------------------------------------------
// Use-case requirements
// ---------------------------------------------------------------------------

/// Closed interval with an optional upper end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct Interval {
    pub min: f64,
    pub max: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInterval {
    pub min: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

impl TryFrom<RawInterval> for Interval {
    type Error = Error;

    fn try_from(r: RawInterval) -> Result<Self> {
        Interval::new(r.min, r.max)
    }
}

impl From<Interval> for RawInterval {
    fn from(i: Interval) -> Self {
        RawInterval { min: i.min, max: i.max }
    }
}

impl Interval {
    pub fn new(min: f64, max: Option<f64>) -> Result<Self> {
        if !min.is_finite() || min < 0.0 {
            return invalid("interval", format!("lower bound {min} must be finite and non-negative"));
        }
        if let Some(max) = max {
            if !(max >= min) {
                return invalid("interval", format!("lower bound {min} exceeds upper bound {max}"));
            }
        }
        Ok(Interval { min, max })
    }

    pub fn point(v: f64) -> Self {
        Interval { min: v, max: Some(v) }
    }

    pub fn range(min: f64, max: f64) -> Self {
        Interval::new(min, Some(max)).expect("valid interval")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UseCaseName {
    Wearables,
    IndustrialSensor,
    VideoSurveillance,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRequirement", into = "RawRequirement")]
pub struct UseCaseRequirement {
    pub name: UseCaseName,
    pub label: String,
    pub dl_rate_mbps: Option<Interval>,
    pub ul_rate_mbps: Option<Interval>,
    pub latency_ms: Option<f64>,
    pub reliability: Option<f64>,
    pub battery_lifetime_h: Option<Interval>,
    pub stationary: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRequirement {
    pub name: UseCaseName,
    #[serde(default)]
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dl_rate_mbps: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ul_rate_mbps: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reliability: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub battery_lifetime_h: Option<Interval>,
    #[serde(default)]
    pub stationary: bool,
}

impl TryFrom<RawRequirement> for UseCaseRequirement {
    type Error = Error;

    fn try_from(r: RawRequirement) -> Result<Self> {
        if let Some(rel) = r.reliability {
            if !(rel > 0.0 && rel < 1.0) {
                return invalid("requirement", format!("reliability {rel} outside (0, 1)"));
            }
        }
        if let Some(l) = r.latency_ms {
            if !(l > 0.0) {
                return invalid("requirement", format!("latency {l} ms must be positive"));
            }
        }
        let label = if r.label.is_empty() {
            format!("{:?}", r.name)
        } else {
            r.label
        };
        Ok(UseCaseRequirement {
            name: r.name,
            label,
            dl_rate_mbps: r.dl_rate_mbps,
            ul_rate_mbps: r.ul_rate_mbps,
            latency_ms: r.latency_ms,
            reliability: r.reliability,
            battery_lifetime_h: r.battery_lifetime_h,
            stationary: r.stationary,
        })
    }
}

impl From<UseCaseRequirement> for RawRequirement {
    fn from(r: UseCaseRequirement) -> Self {
        RawRequirement {
            name: r.name,
            label: r.label,
            dl_rate_mbps: r.dl_rate_mbps,
            ul_rate_mbps: r.ul_rate_mbps,
            latency_ms: r.latency_ms,
            reliability: r.reliability,
            battery_lifetime_h: r.battery_lifetime_h,
            stationary: r.stationary,
        }
    }
}

const HOURS_PER_DAY: f64 = 24.0;
const HOURS_PER_YEAR: f64 = 365.0 * HOURS_PER_DAY;

impl UseCaseRequirement {
    /// Requirement with every dimension absent.
    pub fn custom(label: impl Into<String>) -> Self {
        UseCaseRequirement {
            name: UseCaseName::Custom,
            label: label.into(),
            dl_rate_mbps: None,
            ul_rate_mbps: None,
            latency_ms: None,
            reliability: None,
            battery_lifetime_h: None,
            stationary: false,
        }
    }

    pub fn wearables() -> Self {
        UseCaseRequirement {
            name: UseCaseName::Wearables,
            label: "wearables".into(),
            dl_rate_mbps: Some(Interval::range(5.0, 50.0)),
            ul_rate_mbps: Some(Interval::range(2.0, 5.0)),
            latency_ms: None,
            reliability: None,
            // Three days to two weeks.
            battery_lifetime_h: Some(Interval::range(3.0 * HOURS_PER_DAY, 14.0 * HOURS_PER_DAY)),
            stationary: false,
        }
    }

    pub fn industrial_sensor() -> Self {
        UseCaseRequirement {
            name: UseCaseName::IndustrialSensor,
            label: "industrial_sensor".into(),
            dl_rate_mbps: Some(Interval::point(2.0)),
            ul_rate_mbps: Some(Interval::point(2.0)),
            latency_ms: Some(100.0),
            reliability: Some(0.9999),
            battery_lifetime_h: Some(Interval::new(2.0 * HOURS_PER_YEAR, None).expect("valid")),
            stationary: true,
        }
    }

    pub fn video_surveillance_economic() -> Self {
        UseCaseRequirement {
            name: UseCaseName::VideoSurveillance,
            label: "video_surveillance_economic".into(),
            dl_rate_mbps: Some(Interval::range(2.0, 4.0)),
            ul_rate_mbps: Some(Interval::range(2.0, 4.0)),
            latency_ms: Some(500.0),
            reliability: Some(0.99),
            battery_lifetime_h: None,
            stationary: true,
        }
    }

    pub fn video_surveillance_high_end() -> Self {
        UseCaseRequirement {
            label: "video_surveillance_high_end".into(),
            dl_rate_mbps: Some(Interval::range(7.5, 25.0)),
            ul_rate_mbps: Some(Interval::range(7.5, 25.0)),
            ..Self::video_surveillance_economic()
        }
    }

    pub fn presets() -> Vec<Self> {
        vec![
            Self::wearables(),
            Self::industrial_sensor(),
            Self::video_surveillance_economic(),
            Self::video_surveillance_high_end(),
        ]
    }
}

/// Values achieved by a configuration, to be checked against a requirement.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Achieved {
    pub dl_mbps: Option<f64>,
    pub ul_mbps: Option<f64>,
    pub lifetime_h: Option<f64>,
    pub latency_ms: Option<f64>,
    pub reliability: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dimension {
    DlRate,
    UlRate,
    BatteryLifetime,
    Latency,
    Reliability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    Unevaluated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionCheck {
    pub dimension: Dimension,
    pub verdict: Verdict,
    /// Threshold the achieved value is compared against.
    pub required: f64,
    pub achieved: Option<f64>,
    /// Positive when the requirement is met, in the requirement's units.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequirementReport {
    pub label: String,
    pub checks: Vec<DimensionCheck>,
    pub evaluated: usize,
    pub passed: bool,
}

impl RequirementReport {
    pub fn check(&self, dim: Dimension) -> Option<&DimensionCheck> {
        self.checks.iter().find(|c| c.dimension == dim)
    }
}

/// Checks achieved values against a use-case requirement.
///
/// Rates and lifetime pass when the achieved value reaches the lower end of
/// the required interval; latency passes when it does not exceed the
/// requirement. A dimension the requirement specifies but for which no
/// achieved value is given is reported as [`Verdict::Unevaluated`].
pub fn check_requirements(req: &UseCaseRequirement, achieved: &Achieved) -> Result<RequirementReport> {
    let fields = [
        ("achieved DL rate", achieved.dl_mbps),
        ("achieved UL rate", achieved.ul_mbps),
        ("achieved lifetime", achieved.lifetime_h),
        ("achieved latency", achieved.latency_ms),
        ("achieved reliability", achieved.reliability),
    ];
    for (what, v) in fields {
        if let Some(v) = v {
            if !(v >= 0.0) {
                return invalid("achieved value", format!("{what} must be non-negative, got {v}"));
            }
        }
    }

    let mut checks = Vec::new();
    let mut at_least = |dim, required: Option<f64>, got: Option<f64>| {
        if let Some(required) = required {
            checks.push(match got {
                Some(a) => DimensionCheck {
                    dimension: dim,
                    verdict: if a >= required { Verdict::Pass } else { Verdict::Fail },
                    required,
                    achieved: Some(a),
                    margin: Some(a - required),
                },
                None => DimensionCheck {
                    dimension: dim,
                    verdict: Verdict::Unevaluated,
                    required,
                    achieved: None,
                    margin: None,
                },
            });
        }
    };
    at_least(Dimension::DlRate, req.dl_rate_mbps.map(|i| i.min), achieved.dl_mbps);
    at_least(Dimension::UlRate, req.ul_rate_mbps.map(|i| i.min), achieved.ul_mbps);
    at_least(Dimension::BatteryLifetime, req.battery_lifetime_h.map(|i| i.min), achieved.lifetime_h);
    at_least(Dimension::Reliability, req.reliability, achieved.reliability);

    if let Some(required) = req.latency_ms {
        checks.push(match achieved.latency_ms {
            Some(a) => DimensionCheck {
                dimension: Dimension::Latency,
                verdict: if a <= required { Verdict::Pass } else { Verdict::Fail },
                required,
                achieved: Some(a),
                margin: Some(required - a),
            },
            None => DimensionCheck {
                dimension: Dimension::Latency,
                verdict: Verdict::Unevaluated,
                required,
                achieved: None,
                margin: None,
            },
        });
    }

    let evaluated = checks.iter().filter(|c| c.verdict != Verdict::Unevaluated).count();
    let passed = checks.iter().all(|c| c.verdict != Verdict::Fail);
    Ok(RequirementReport {
        label: req.label.clone(),
        checks,
        evaluated,
        passed,
    })
}
