//! Dimensioning models for reduced-capability (RedCap) NR devices: peak
//! rates, idle-mode battery life, link budgets, initial BWP planning, random
//! access identification and mixed-population cell capacity.
//!
//! The closed-form models ([`datarate`], [`power`], [`linkbudget`]) are
//! generic over the [`Real`] scalar; the aliases below fix it to `f64`.

pub mod access;
pub mod bwp;
pub mod capacity;
pub mod datarate;
pub mod error;
pub mod linkbudget;
pub mod model;
pub mod power;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type RateParams = datarate::RateParams<f64>;
pub type PowerModel = power::PowerModel<f64>;
pub type DrxConfig = power::DrxConfig<f64>;
pub type TrafficPattern = power::TrafficPattern<f64>;
pub type PowerBreakdown = power::PowerBreakdown<f64>;
pub type RrmThresholds = power::RrmThresholds<f64>;
pub type ChannelLinkParams = linkbudget::ChannelLinkParams<f64>;
pub type ChannelSet = linkbudget::ChannelSet<f64>;
pub type LinkAssumptions = linkbudget::LinkAssumptions<f64>;
pub type RecoveryReport = linkbudget::RecoveryReport<f64>;
