use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("capability exceeded: {limit}")]
    CapabilityExceeded { limit: String },

    #[error("no transmission bandwidth configuration for {bandwidth_mhz} MHz at {scs_khz} kHz ({range:?})")]
    UnsupportedBandwidth {
        bandwidth_mhz: f64,
        scs_khz: u32,
        range: crate::model::FrequencyRange,
    },

    #[error("wake time {wake_s} s does not fit in DRX cycle {cycle_s} s")]
    CycleShorterThanWake { cycle_s: f64, wake_s: f64 },

    #[error("horizon {horizon_s} s covers fewer than {min_cycles} DRX cycles")]
    HorizonTooShort { horizon_s: f64, min_cycles: u32 },

    #[error("empty channel set")]
    EmptyChannelSet,

    #[error("deployment scenario mismatch: {redcap} vs {reference}")]
    ScenarioMismatch { redcap: String, reference: String },

    #[error("no required SNR entry for {scenario} / {channel} / {rx_branches} Rx")]
    MissingSnr {
        scenario: String,
        channel: String,
        rx_branches: u32,
    },

    #[error("SNR table: {0}")]
    SnrTable(String),

    #[error("malformed PRB range {first}..={last} for a {n_prb}-PRB carrier")]
    MalformedRange { first: u32, last: u32, n_prb: u32 },

    #[error("no feasible BWP layout; binding constraints: {binding:?}")]
    Infeasible { binding: Vec<crate::bwp::RuleId> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(what: &'static str, reason: impl Into<String>) -> Result<T> {
    Err(Error::Invalid {
        what,
        reason: reason.into(),
    })
}
