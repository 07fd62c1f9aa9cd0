//! Approximate peak physical-layer data rates.
//!
//! The rate is the usual NR approximation
//!
//! ```text
//! layers · Qm · R_max · f · (n_prb · 12) · symbols/s · (1 − overhead) · duplex share
//! ```
//!
//! with 14 OFDM symbols per slot. Default overheads (14 % DL / 8 % UL in FR1,
//! 18 % / 10 % in FR2) are calibration constants, not standardized values.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{CapabilityProfile, CarrierConfig, Direction, FrequencyRange};
use crate::scalar::Real;

pub const DEFAULT_CODE_RATE_MAX: f64 = 948.0 / 1024.0;

pub fn default_overhead(fr: FrequencyRange, dir: Direction) -> f64 {
    match (fr, dir) {
        (FrequencyRange::FR1, Direction::DL) => 0.14,
        (FrequencyRange::FR1, Direction::UL) => 0.08,
        (FrequencyRange::FR2, Direction::DL) => 0.18,
        (FrequencyRange::FR2, Direction::UL) => 0.10,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateParams<T> {
    pub layers: u32,
    pub modulation_order: u32,
    pub code_rate_max: T,
    pub overhead_fraction: T,
    pub scaling_factor: T,
}

impl<T: Real> RateParams<T> {
    pub fn new(layers: u32, modulation_order: u32, code_rate_max: T, overhead_fraction: T, scaling_factor: T) -> Result<Self> {
        let p = RateParams {
            layers,
            modulation_order,
            code_rate_max,
            overhead_fraction,
            scaling_factor,
        };
        p.validate()?;
        Ok(p)
    }

    /// Shipped defaults for a frequency range and direction.
    pub fn defaults(fr: FrequencyRange, dir: Direction, layers: u32, modulation_order: u32) -> Result<Self> {
        Self::new(
            layers,
            modulation_order,
            T::lit(DEFAULT_CODE_RATE_MAX),
            T::lit(default_overhead(fr, dir)),
            T::one(),
        )
    }

    /// Defaults using the largest layer count and modulation order the
    /// profile supports in `dir`.
    pub fn max_for(profile: &CapabilityProfile, dir: Direction) -> Self {
        Self::defaults(
            profile.frequency_range,
            dir,
            profile.max_layers(dir),
            profile.max_modulation_order(dir),
        )
        .expect("profile limits are valid rate parameters")
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 {
            return invalid("rate parameters", "layers must be at least 1");
        }
        if !matches!(self.modulation_order, 2 | 4 | 6 | 8) {
            return invalid(
                "rate parameters",
                format!("modulation order {} is not one of 2, 4, 6, 8", self.modulation_order),
            );
        }
        if !(self.code_rate_max > T::zero() && self.code_rate_max <= T::one()) {
            return invalid("rate parameters", format!("code rate {} outside (0, 1]", self.code_rate_max));
        }
        if !(self.overhead_fraction >= T::zero() && self.overhead_fraction < T::one()) {
            return invalid(
                "rate parameters",
                format!("overhead fraction {} outside [0, 1)", self.overhead_fraction),
            );
        }
        if !(self.scaling_factor > T::zero() && self.scaling_factor <= T::one()) {
            return invalid(
                "rate parameters",
                format!("scaling factor {} outside (0, 1]", self.scaling_factor),
            );
        }
        Ok(())
    }
}

/// Peak rate in Mbps for `profile` on `carrier` in direction `dir`.
pub fn peak_rate<T: Real>(
    profile: &CapabilityProfile,
    carrier: &CarrierConfig,
    dir: Direction,
    params: &RateParams<T>,
) -> Result<T> {
    params.validate()?;
    if profile.frequency_range != carrier.frequency_range {
        return Err(Error::CapabilityExceeded {
            limit: format!(
                "device supports {:?}, carrier is {:?}",
                profile.frequency_range, carrier.frequency_range
            ),
        });
    }
    if carrier.bandwidth_mhz > profile.max_bandwidth_mhz {
        return Err(Error::CapabilityExceeded {
            limit: format!(
                "max_bandwidth_mhz {} < carrier bandwidth {}",
                profile.max_bandwidth_mhz, carrier.bandwidth_mhz
            ),
        });
    }
    let max_q = profile.max_modulation_order(dir);
    if params.modulation_order > max_q {
        return Err(Error::CapabilityExceeded {
            limit: format!("{dir} modulation order {} > {max_q}", params.modulation_order),
        });
    }
    let max_layers = profile.max_layers(dir);
    if params.layers > max_layers {
        return Err(Error::CapabilityExceeded {
            limit: format!("{dir} layers {} > {max_layers}", params.layers),
        });
    }

    let subcarriers = T::lit(f64::from(carrier.n_prb) * 12.0);
    let bits = T::lit(f64::from(params.layers)) * T::lit(f64::from(params.modulation_order));
    let rate = bits
        * params.code_rate_max
        * params.scaling_factor
        * subcarriers
        * T::lit(carrier.symbols_per_second())
        * (T::one() - params.overhead_fraction)
        * T::lit(carrier.duplex_share(dir));
    Ok(rate * T::lit(1e-6))
}

/// Splits full-duplex rates for a half-duplex FDD device that spends
/// `dl_time_share` of the time receiving.
pub fn hd_fdd_rates<T: Real>(dl_rate: T, ul_rate: T, dl_time_share: T) -> Result<(T, T)> {
    if !(dl_rate > T::zero() && ul_rate > T::zero()) {
        return invalid("HD-FDD rates", "rates must be positive");
    }
    if !(dl_time_share > T::zero() && dl_time_share < T::one()) {
        return invalid("HD-FDD rates", format!("DL time share {dl_time_share} outside (0, 1)"));
    }
    Ok((dl_rate * dl_time_share, ul_rate * (T::one() - dl_time_share)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin_profile, DuplexMode, ProfileKind};
    use approx::assert_relative_eq;

    fn redcap_fr1() -> CapabilityProfile {
        builtin_profile(ProfileKind::RedCapBaselineFr1)
    }

    #[test]
    fn unit_parameters_give_exact_rate() {
        let carrier = CarrierConfig {
            frequency_range: FrequencyRange::FR1,
            scs_khz: 15,
            bandwidth_mhz: 5.0,
            duplex_mode: DuplexMode::FdFdd,
            tdd_dl_fraction: 1.0,
            n_prb: 1,
        };
        let params = RateParams::<f64>::new(1, 2, 1.0, 0.0, 1.0).unwrap();
        let r = peak_rate(&redcap_fr1(), &carrier, Direction::DL, &params).unwrap();
        assert_relative_eq!(r, 1.0 * 2.0 * 1.0 * 12.0 * 14000.0 * 1e-6, epsilon = 1e-12);
        assert_relative_eq!(r, 0.336, epsilon = 1e-12);
    }

    #[test]
    fn full_overhead_rejected() {
        assert!(RateParams::<f64>::new(1, 6, 0.9, 1.0, 1.0).is_err());
        assert!(RateParams::<f64>::new(0, 6, 0.9, 0.1, 1.0).is_err());
        assert!(RateParams::<f64>::new(1, 5, 0.9, 0.1, 1.0).is_err());
        assert!(RateParams::<f64>::new(1, 6, 0.0, 0.1, 1.0).is_err());
        assert!(RateParams::<f64>::new(1, 6, 0.9, 0.1, 1.5).is_err());
    }

    #[test]
    fn capability_limits_enforced() {
        let p = redcap_fr1();
        let wide = CarrierConfig::new(FrequencyRange::FR1, 30, 40.0, DuplexMode::Tdd, 0.75).unwrap();
        let params = RateParams::<f64>::max_for(&p, Direction::DL);
        let err = peak_rate(&p, &wide, Direction::DL, &params).unwrap_err();
        assert!(matches!(err, Error::CapabilityExceeded { .. }));
        assert!(err.to_string().contains("max_bandwidth_mhz"));

        let c = CarrierConfig::new(FrequencyRange::FR1, 15, 20.0, DuplexMode::FdFdd, 1.0).unwrap();
        let qam256 = RateParams::<f64>::defaults(FrequencyRange::FR1, Direction::DL, 1, 8).unwrap();
        assert!(peak_rate(&p, &c, Direction::DL, &qam256).unwrap_err().to_string().contains("modulation"));
        let two_layers = RateParams::<f64>::defaults(FrequencyRange::FR1, Direction::DL, 2, 6).unwrap();
        assert!(peak_rate(&p, &c, Direction::DL, &two_layers).unwrap_err().to_string().contains("layers"));
    }

    #[test]
    fn works_in_single_precision() {
        let c = CarrierConfig::new(FrequencyRange::FR1, 15, 20.0, DuplexMode::FdFdd, 1.0).unwrap();
        let p = redcap_fr1();
        let r32 = peak_rate(&p, &c, Direction::DL, &RateParams::<f32>::max_for(&p, Direction::DL)).unwrap();
        let r64 = peak_rate(&p, &c, Direction::DL, &RateParams::<f64>::max_for(&p, Direction::DL)).unwrap();
        assert_relative_eq!(r32 as f64, r64, max_relative = 1e-5);
    }

    #[test]
    fn hd_fdd_split() {
        assert_eq!(hd_fdd_rates(85.0, 90.0, 0.5).unwrap(), (42.5, 45.0));
        assert!(hd_fdd_rates(85.0, 90.0, 1.0).is_err());
        assert!(hd_fdd_rates(85.0, 90.0, 0.0).is_err());
        assert!(hd_fdd_rates(-1.0, 90.0, 0.5).is_err());
        let (dl, ul) = hd_fdd_rates(60.0, 20.0, 0.75).unwrap();
        assert_relative_eq!(dl, 45.0);
        assert_relative_eq!(ul, 5.0);
    }
}
