//! Per-channel maximum isotropic loss (MIL), bottleneck selection and
//! coverage-recovery reporting.
//!
//! MIL is the link budget itself, path loss excluded:
//!
//! ```text
//! MIL = P_tx + G_tx + G_rx − penalty − (−174 + 10·log10(B) + NF + SNR_req)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{CapabilityProfile, DeploymentScenario, Direction, FrequencyRange};
use crate::scalar::{db, Real};

/// Physical channels in the coverage analysis. The declaration order is
/// the tie-break order of [`bottleneck`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    #[serde(rename = "Msg1_PRACH")]
    Msg1Prach,
    #[serde(rename = "Msg2_PDSCH")]
    Msg2Pdsch,
    /// Also stands in for Msg A of the two-step procedure.
    #[serde(rename = "Msg3_PUSCH")]
    Msg3Pusch,
    #[serde(rename = "Msg4_PDSCH")]
    Msg4Pdsch,
    #[serde(rename = "PUCCH")]
    Pucch,
    #[serde(rename = "PDCCH_CSS")]
    PdcchCss,
    #[serde(rename = "PDSCH")]
    Pdsch,
    #[serde(rename = "PUSCH")]
    Pusch,
}

impl Channel {
    pub const ALL: [Channel; 8] = [
        Channel::Msg1Prach,
        Channel::Msg2Pdsch,
        Channel::Msg3Pusch,
        Channel::Msg4Pdsch,
        Channel::Pucch,
        Channel::PdcchCss,
        Channel::Pdsch,
        Channel::Pusch,
    ];

    pub fn direction(self) -> Direction {
        match self {
            Channel::Msg1Prach | Channel::Msg3Pusch | Channel::Pucch | Channel::Pusch => Direction::UL,
            _ => Direction::DL,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Channel::Msg1Prach => "Msg1_PRACH",
            Channel::Msg2Pdsch => "Msg2_PDSCH",
            Channel::Msg3Pusch => "Msg3_PUSCH",
            Channel::Msg4Pdsch => "Msg4_PDSCH",
            Channel::Pucch => "PUCCH",
            Channel::PdcchCss => "PDCCH_CSS",
            Channel::Pdsch => "PDSCH",
            Channel::Pusch => "PUSCH",
        }
    }

    pub fn parse(s: &str) -> Option<Channel> {
        match s {
            "MsgA" | "Msg_A" => Some(Channel::Msg3Pusch),
            _ => Channel::ALL.into_iter().find(|c| c.name() == s),
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelLinkParams<T> {
    pub channel: Channel,
    pub direction: Direction,
    /// From PSD × bandwidth in DL, the device TRP in UL.
    pub tx_power_dbm: T,
    pub tx_bf_gain_db: T,
    pub rx_bf_gain_db: T,
    pub required_snr_db: T,
    pub noise_figure_db: T,
    pub occupied_bandwidth_hz: T,
    #[serde(default)]
    pub antenna_efficiency_penalty_db: T,
}

impl<T: Real> ChannelLinkParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.occupied_bandwidth_hz > T::zero()) || !self.occupied_bandwidth_hz.is_finite() {
            return invalid("channel parameters", format!("{}: occupied bandwidth must be positive", self.channel));
        }
        let all = [
            self.tx_power_dbm,
            self.tx_bf_gain_db,
            self.rx_bf_gain_db,
            self.required_snr_db,
            self.noise_figure_db,
            self.antenna_efficiency_penalty_db,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return invalid("channel parameters", format!("{}: non-finite value", self.channel));
        }
        Ok(())
    }
}

/// Thermal noise floor over `bandwidth_hz` at 290 K, in dBm.
pub fn thermal_noise_dbm<T: Real>(bandwidth_hz: T) -> T {
    T::lit(-174.0) + db(bandwidth_hz)
}

pub fn mil<T: Real>(p: &ChannelLinkParams<T>) -> Result<T> {
    p.validate()?;
    let eirp = p.tx_power_dbm + p.tx_bf_gain_db + p.rx_bf_gain_db;
    let sensitivity = thermal_noise_dbm(p.occupied_bandwidth_hz) + p.noise_figure_db + p.required_snr_db;
    // penalty last, so toggling it moves the result by the penalty alone
    Ok(eirp - sensitivity - p.antenna_efficiency_penalty_db)
}

/// Base-station transmit power over `bandwidth_mhz` at a flat PSD.
pub fn dl_tx_power_from_psd<T: Real>(psd_dbm_per_mhz: T, bandwidth_mhz: T) -> T {
    psd_dbm_per_mhz + db(bandwidth_mhz)
}

/// Lowest-MIL entry; ties go to the channel declared first in [`Channel`].
pub fn bottleneck<T: Real>(channels: &[(ChannelLinkParams<T>, T)]) -> Result<(Channel, T)> {
    channels
        .iter()
        .map(|(p, m)| (p.channel, *m))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(&b.0)))
        .ok_or(Error::EmptyChannelSet)
}

// ---------------------------------------------------------------------------
// Required-SNR table
// ---------------------------------------------------------------------------

const DEFAULT_SNR_TABLE: &str = include_str!("../data/snr_table.csv");

#[derive(Debug, Clone, Deserialize)]
struct SnrRow {
    scenario: String,
    channel: String,
    rx_branches: String,
    required_snr_db: f64,
}

/// Required SNR keyed by (scenario, channel, rx branches).
///
/// `scenario` is a frequency range (`FR1`, `FR2`) or a deployment name; a
/// deployment row overrides its frequency-range row. `rx_branches = None`
/// stands for the `any` wildcard.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrTable {
    rows: BTreeMap<(String, Channel, Option<u32>), f64>,
}

impl SnrTable {
    pub fn builtin() -> Self {
        Self::from_csv(DEFAULT_SNR_TABLE).expect("bundled SNR table parses")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::SnrTable(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_csv(&text)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows = BTreeMap::new();
        for (i, rec) in rdr.deserialize::<SnrRow>().enumerate() {
            let row = rec.map_err(|e| Error::SnrTable(e.to_string()))?;
            let channel = Channel::parse(&row.channel)
                .ok_or_else(|| Error::SnrTable(format!("row {}: unknown channel {:?}", i + 1, row.channel)))?;
            let rx = match row.rx_branches.as_str() {
                "any" => None,
                s => Some(
                    s.parse::<u32>()
                        .map_err(|_| Error::SnrTable(format!("row {}: bad rx_branches {s:?}", i + 1)))?,
                ),
            };
            if !row.required_snr_db.is_finite() {
                return Err(Error::SnrTable(format!("row {}: non-finite SNR", i + 1)));
            }
            if rows.insert((row.scenario.clone(), channel, rx), row.required_snr_db).is_some() {
                return Err(Error::SnrTable(format!(
                    "row {}: duplicate entry for {} / {} / {}",
                    i + 1,
                    row.scenario,
                    row.channel,
                    row.rx_branches
                )));
            }
        }
        Ok(SnrTable { rows })
    }

    pub fn lookup(&self, deployment: &DeploymentScenario, channel: Channel, rx_branches: u32) -> Result<f64> {
        let fr = match deployment.frequency_range() {
            FrequencyRange::FR1 => "FR1",
            FrequencyRange::FR2 => "FR2",
        };
        let name = deployment.name.to_string();
        for scenario in [name.as_str(), fr] {
            for rx in [Some(rx_branches), None] {
                if let Some(v) = self.rows.get(&(scenario.to_string(), channel, rx)) {
                    return Ok(*v);
                }
            }
        }
        Err(Error::MissingSnr {
            scenario: name,
            channel: channel.name().to_string(),
            rx_branches,
        })
    }
}

// ---------------------------------------------------------------------------
// Channel sets per deployment
// ---------------------------------------------------------------------------

/// Radio assumptions that are not part of the device profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkAssumptions<T> {
    pub dl_bandwidth_mhz: T,
    pub gnb_tx_bf_gain_db: T,
    pub gnb_rx_bf_gain_db: T,
    pub gnb_noise_figure_db: T,
    pub ue_noise_figure_db: T,
    /// Occupied UL bandwidth, in order PRACH, Msg3, PUCCH, PUSCH.
    pub ul_bandwidth_hz: [T; 4],
}

impl<T: Real> LinkAssumptions<T> {
    pub fn for_range(fr: FrequencyRange) -> Self {
        match fr {
            FrequencyRange::FR1 => LinkAssumptions {
                dl_bandwidth_mhz: T::lit(20.0),
                gnb_tx_bf_gain_db: T::zero(),
                gnb_rx_bf_gain_db: T::zero(),
                gnb_noise_figure_db: T::lit(5.0),
                ue_noise_figure_db: T::lit(7.0),
                ul_bandwidth_hz: [T::lit(1.08e6), T::lit(720e3), T::lit(360e3), T::lit(3.6e6)],
            },
            FrequencyRange::FR2 => LinkAssumptions {
                dl_bandwidth_mhz: T::lit(100.0),
                gnb_tx_bf_gain_db: T::lit(15.0),
                gnb_rx_bf_gain_db: T::lit(10.0),
                gnb_noise_figure_db: T::lit(7.0),
                ue_noise_figure_db: T::lit(10.0),
                ul_bandwidth_hz: [T::lit(16.68e6), T::lit(5.76e6), T::lit(1.44e6), T::lit(17.28e6)],
            },
        }
    }

    fn ul_bandwidth(&self, ch: Channel) -> T {
        match ch {
            Channel::Msg1Prach => self.ul_bandwidth_hz[0],
            Channel::Msg3Pusch => self.ul_bandwidth_hz[1],
            Channel::Pucch => self.ul_bandwidth_hz[2],
            _ => self.ul_bandwidth_hz[3],
        }
    }
}

/// Device receive beamforming gain from the panel size (FR2).
/// Two dual-polarized elements give 5 dB, four give 8 dB.
pub fn ue_panel_gain_db<T: Real>(profile: &CapabilityProfile) -> T {
    match (profile.frequency_range, profile.antenna_elements_per_panel) {
        (FrequencyRange::FR2, Some(n)) if n > 0 => T::lit(2.0 + 3.0 * f64::from(n).log2()),
        _ => T::zero(),
    }
}

/// Every channel of one device evaluated in one deployment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelSet<T> {
    pub scenario: DeploymentScenario,
    pub entries: Vec<(ChannelLinkParams<T>, T)>,
}

impl<T: Real> ChannelSet<T> {
    pub fn from_params(scenario: DeploymentScenario, params: Vec<ChannelLinkParams<T>>) -> Result<Self> {
        let entries = params
            .into_iter()
            .map(|p| mil(&p).map(|m| (p, m)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChannelSet { scenario, entries })
    }

    pub fn mil_of(&self, ch: Channel) -> Option<T> {
        self.entries.iter().find(|(p, _)| p.channel == ch).map(|(_, m)| *m)
    }
}

/// Builds the full channel set for `profile` in `deployment`.
/// `penalty_db` is applied to every channel (the antenna-efficiency toggle).
pub fn channel_set<T: Real>(
    deployment: &DeploymentScenario,
    profile: &CapabilityProfile,
    snr: &SnrTable,
    assumptions: &LinkAssumptions<T>,
    penalty_db: T,
) -> Result<ChannelSet<T>> {
    if profile.frequency_range != deployment.frequency_range() {
        return invalid(
            "link budget",
            format!(
                "{:?} profile in {} ({:?}) deployment",
                profile.frequency_range,
                deployment.name,
                deployment.frequency_range()
            ),
        );
    }
    let a = assumptions;
    let ue_gain = ue_panel_gain_db::<T>(profile);
    let mut params = Vec::with_capacity(Channel::ALL.len());
    for ch in Channel::ALL {
        let required_snr_db = T::lit(snr.lookup(deployment, ch, profile.rx_branches)?);
        let p = match ch.direction() {
            Direction::DL => ChannelLinkParams {
                channel: ch,
                direction: Direction::DL,
                tx_power_dbm: dl_tx_power_from_psd(T::lit(deployment.dl_psd_dbm_per_mhz), a.dl_bandwidth_mhz),
                tx_bf_gain_db: a.gnb_tx_bf_gain_db,
                rx_bf_gain_db: ue_gain,
                required_snr_db,
                noise_figure_db: a.ue_noise_figure_db,
                occupied_bandwidth_hz: a.dl_bandwidth_mhz * T::lit(1e6),
                antenna_efficiency_penalty_db: penalty_db,
            },
            // TRP is radiated power, so the device array gain is already in it.
            Direction::UL => ChannelLinkParams {
                channel: ch,
                direction: Direction::UL,
                tx_power_dbm: T::lit(deployment.ue_trp_dbm),
                tx_bf_gain_db: T::zero(),
                rx_bf_gain_db: a.gnb_rx_bf_gain_db,
                required_snr_db,
                noise_figure_db: a.gnb_noise_figure_db,
                occupied_bandwidth_hz: a.ul_bandwidth(ch),
                antenna_efficiency_penalty_db: penalty_db,
            },
        };
        params.push(p);
    }
    ChannelSet::from_params(deployment.clone(), params)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryEntry<T> {
    pub channel: Channel,
    pub mil_db: T,
    pub recovery_db: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryReport<T> {
    pub reference_bottleneck: Channel,
    pub reference_bottleneck_mil_db: T,
    /// Bottleneck of the RedCap set itself.
    pub redcap_bottleneck: Channel,
    pub entries: Vec<RecoveryEntry<T>>,
}

impl<T: Real> RecoveryReport<T> {
    /// Channels that need coverage recovery.
    pub fn flagged(&self) -> Vec<Channel> {
        self.entries
            .iter()
            .filter(|e| e.recovery_db > T::zero())
            .map(|e| e.channel)
            .collect()
    }
}

pub fn coverage_recovery<T: Real>(redcap: &ChannelSet<T>, reference: &ChannelSet<T>) -> Result<RecoveryReport<T>> {
    if redcap.scenario != reference.scenario {
        return Err(Error::ScenarioMismatch {
            redcap: format!("{:?}", redcap.scenario),
            reference: format!("{:?}", reference.scenario),
        });
    }
    let (ref_ch, ref_mil) = bottleneck(&reference.entries)?;
    let (own_ch, _) = bottleneck(&redcap.entries)?;
    let entries = redcap
        .entries
        .iter()
        .map(|(p, m)| RecoveryEntry {
            channel: p.channel,
            mil_db: *m,
            recovery_db: (ref_mil - *m).max(T::zero()),
        })
        .collect();
    Ok(RecoveryReport {
        reference_bottleneck: ref_ch,
        reference_bottleneck_mil_db: ref_mil,
        redcap_bottleneck: own_ch,
        entries,
    })
}

/// Coverage recovery of `redcap` against `reference` in one deployment,
/// using the default assumptions for its frequency range.
pub fn recovery_for_profiles<T: Real>(
    deployment: &DeploymentScenario,
    redcap: &CapabilityProfile,
    reference: &CapabilityProfile,
    snr: &SnrTable,
    efficiency_penalty_db: T,
) -> Result<RecoveryReport<T>> {
    let a = LinkAssumptions::for_range(deployment.frequency_range());
    let rc = channel_set(deployment, redcap, snr, &a, efficiency_penalty_db)?;
    let rf = channel_set(deployment, reference, snr, &a, T::zero())?;
    coverage_recovery(&rc, &rf)
}

/// FR2 baseline RedCap against the FR2 reference device with UE TRP set to
/// `trp_dbm` for both.
pub fn fr2_trp_sensitivity<T: Real>(scenario: &DeploymentScenario, trp_dbm: T) -> Result<RecoveryReport<T>> {
    use crate::model::{builtin_profile, ProfileKind};
    if scenario.frequency_range() != FrequencyRange::FR2 {
        return invalid(
            "TRP sensitivity",
            format!("{} is not an FR2 deployment", scenario.name),
        );
    }
    let s = DeploymentScenario {
        ue_trp_dbm: trp_dbm.as_f64(),
        ..scenario.clone()
    };
    recovery_for_profiles(
        &s,
        &builtin_profile(ProfileKind::RedCapBaselineFr2),
        &builtin_profile(ProfileKind::ReferenceNrFr2),
        &SnrTable::builtin(),
        T::zero(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin_profile, DeploymentKind, ProfileKind};
    use approx::assert_relative_eq;

    fn params(ch: Channel, tx: f64, snr: f64, nf: f64, bw: f64) -> ChannelLinkParams<f64> {
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

    #[test]
    fn hand_evaluated_mil() {
        let p = params(Channel::Pdsch, 46.0, 0.0, 7.0, 1e6);
        assert_relative_eq!(mil(&p).unwrap(), 153.0, epsilon = 1e-9);
    }

    #[test]
    fn bandwidth_doubling_at_fixed_psd() {
        let a = params(Channel::Pdsch, dl_tx_power_from_psd(33.0, 10.0), 0.0, 7.0, 10e6);
        let b = params(Channel::Pdsch, dl_tx_power_from_psd(33.0, 20.0), 0.0, 7.0, 20e6);
        assert_relative_eq!(mil(&a).unwrap(), mil(&b).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn psd_conversion() {
        assert_relative_eq!(dl_tx_power_from_psd(33.0, 1.0), 33.0);
        assert_relative_eq!(dl_tx_power_from_psd(33.0, 100.0), 53.0, epsilon = 1e-12);
        assert_relative_eq!(dl_tx_power_from_psd(24.0, 20.0), 37.0103, epsilon = 1e-4);
    }

    #[test]
    fn zero_bandwidth_rejected() {
        assert!(mil(&params(Channel::Pusch, 23.0, 0.0, 5.0, 0.0)).is_err());
        assert!(mil(&params(Channel::Pusch, 23.0, f64::NAN, 5.0, 1e6)).is_err());
    }

    #[test]
    fn bottleneck_selection() {
        let one = vec![(params(Channel::Pdsch, 0.0, 0.0, 0.0, 1.0), 140.0)];
        assert_eq!(bottleneck(&one).unwrap(), (Channel::Pdsch, 140.0));

        let set = vec![
            (params(Channel::Msg2Pdsch, 0.0, 0.0, 0.0, 1.0), 140.0),
            (params(Channel::Msg3Pusch, 0.0, 0.0, 0.0, 1.0), 145.0),
            (params(Channel::Pucch, 0.0, 0.0, 0.0, 1.0), 138.0),
        ];
        assert_eq!(bottleneck(&set).unwrap(), (Channel::Pucch, 138.0));
        assert!(matches!(bottleneck::<f64>(&[]), Err(Error::EmptyChannelSet)));
    }

    #[test]
    fn ties_follow_enum_order() {
        let set = vec![
            (params(Channel::Pusch, 0.0, 0.0, 0.0, 1.0), 130.0),
            (params(Channel::Msg2Pdsch, 0.0, 0.0, 0.0, 1.0), 130.0),
            (params(Channel::Pucch, 0.0, 0.0, 0.0, 1.0), 130.0),
        ];
        assert_eq!(bottleneck(&set).unwrap().0, Channel::Msg2Pdsch);
    }

    #[test]
    fn snr_table_lookup_and_errors() {
        let t = SnrTable::builtin();
        let umi = DeploymentScenario::preset(DeploymentKind::UrbanMicroFR1);
        assert_eq!(t.lookup(&umi, Channel::Msg2Pdsch, 4).unwrap(), -1.0);
        assert_eq!(t.lookup(&umi, Channel::Msg2Pdsch, 1).unwrap(), 5.0);
        assert_eq!(t.lookup(&umi, Channel::Pusch, 1).unwrap(), -1.0);
        assert!(matches!(t.lookup(&umi, Channel::Msg2Pdsch, 3), Err(Error::MissingSnr { .. })));

        let err = SnrTable::from_csv("scenario,channel,rx_branches,required_snr_db\nFR1,Foo,any,0\n").unwrap_err();
        assert!(matches!(err, Error::SnrTable(_)));
        let dup = "scenario,channel,rx_branches,required_snr_db\nFR1,PUSCH,any,0\nFR1,PUSCH,any,1\n";
        assert!(SnrTable::from_csv(dup).is_err());
    }

    #[test]
    fn deployment_rows_override_range_rows() {
        let csv = "scenario,channel,rx_branches,required_snr_db\nFR1,PUSCH,any,-1\nUrbanMicroFR1,PUSCH,any,4\n";
        let t = SnrTable::from_csv(csv).unwrap();
        let umi = DeploymentScenario::preset(DeploymentKind::UrbanMicroFR1);
        let uma = DeploymentScenario::preset(DeploymentKind::UrbanMacroFR1);
        assert_eq!(t.lookup(&umi, Channel::Pusch, 1).unwrap(), 4.0);
        assert_eq!(t.lookup(&uma, Channel::Pusch, 1).unwrap(), -1.0);
    }

    #[test]
    fn identical_sets_need_no_recovery() {
        let umi = DeploymentScenario::preset(DeploymentKind::UrbanMicroFR1);
        let p = builtin_profile(ProfileKind::ReferenceNrFr1);
        let r = recovery_for_profiles::<f64>(&umi, &p, &p, &SnrTable::builtin(), 0.0).unwrap();
        assert!(r.flagged().is_empty());
        assert!(r.entries.iter().all(|e| e.recovery_db == 0.0));
    }

    #[test]
    fn urban_micro_one_rx_needs_msg2_recovery() {
        let umi = DeploymentScenario::preset(DeploymentKind::UrbanMicroFR1);
        let reference = builtin_profile(ProfileKind::ReferenceNrFr1);
        let redcap = builtin_profile(ProfileKind::RedCapBaselineFr1);
        let r = recovery_for_profiles::<f64>(&umi, &redcap, &reference, &SnrTable::builtin(), 0.0).unwrap();
        assert_eq!(r.flagged(), vec![Channel::Msg2Pdsch]);
        assert_eq!(r.reference_bottleneck, Channel::Pusch);

        let two_rx = CapabilityProfile::new(CapabilityProfile { rx_branches: 2, ..redcap }).unwrap();
        let r2 = recovery_for_profiles::<f64>(&umi, &two_rx, &reference, &SnrTable::builtin(), 0.0).unwrap();
        assert!(r2.flagged().is_empty());
    }

    #[test]
    fn scenario_mismatch_rejected() {
        let snr = SnrTable::builtin();
        let p = builtin_profile(ProfileKind::RedCapBaselineFr1);
        let a = LinkAssumptions::for_range(FrequencyRange::FR1);
        let umi = channel_set::<f64>(&DeploymentScenario::preset(DeploymentKind::UrbanMicroFR1), &p, &snr, &a, 0.0).unwrap();
        let uma = channel_set::<f64>(&DeploymentScenario::preset(DeploymentKind::UrbanMacroFR1), &p, &snr, &a, 0.0).unwrap();
        assert!(matches!(coverage_recovery(&umi, &uma), Err(Error::ScenarioMismatch { .. })));
    }

    #[test]
    fn fr2_trp_flags() {
        let indoor = DeploymentScenario::preset(DeploymentKind::IndoorFR2);
        let r23 = fr2_trp_sensitivity(&indoor, 23.0).unwrap();
        assert_eq!(r23.flagged(), vec![Channel::Msg2Pdsch, Channel::Msg4Pdsch, Channel::Pdsch]);
        let r12 = fr2_trp_sensitivity(&indoor, 12.0).unwrap();
        assert!(r12.flagged().is_empty());
        let umi = DeploymentScenario::preset(DeploymentKind::UrbanMicroFR1);
        assert!(fr2_trp_sensitivity(&umi, 23.0).is_err());
    }

    #[test]
    fn panel_gain_delta_is_three_db() {
        let r: f64 = ue_panel_gain_db(&builtin_profile(ProfileKind::RedCapBaselineFr2));
        let f: f64 = ue_panel_gain_db(&builtin_profile(ProfileKind::ReferenceNrFr2));
        assert_relative_eq!(f - r, 3.0, epsilon = 1e-12);
        assert_eq!(ue_panel_gain_db::<f64>(&builtin_profile(ProfileKind::RedCapBaselineFr1)), 0.0);
    }
}
