//! Scenario file: one JSON document driving every subcommand.
//!
//! `profiles`, `carriers` and `deployment` are required. Every other section
//! falls back to defaults, and [`Parsed::defaulted`] lists the ones that did.

use std::collections::HashSet;
use std::path::PathBuf;

use redcap_core::access::AccessConfig;
use redcap_core::access::IdMethod;
use redcap_core::bwp::{CarrierLayout, PlannerOptions, Release17Features};
use redcap_core::capacity::CapacityScenario;
use redcap_core::model::{
    builtin_profile, CapabilityProfile, CarrierConfig, DeploymentScenario, FrequencyRange, ProfileKind,
    UseCaseRequirement,
};
use redcap_core::power::{ArrivalProcess, DrxConfig, PowerModel, Release, RrcState, RrmThresholds};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REQUIRED_SECTIONS: [&str; 3] = ["profiles", "carriers", "deployment"];
pub const OPTIONAL_SECTIONS: [&str; 7] = ["power", "linkbudget", "bwp", "access", "capacity", "requirements", "output"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    Syntax,
    UnknownKey,
    Invariant,
    MissingSection,
    Reference,
    Io,
    Analysis,
    Usage,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioError {
    pub class: ErrorClass,
    pub message: String,
    pub path: Option<String>,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl ScenarioError {
    pub fn new(class: ErrorClass, message: impl Into<String>) -> Self {
        ScenarioError {
            class,
            message: message.into(),
            path: None,
            line: None,
            column: None,
        }
    }

    pub(crate) fn at(class: ErrorClass, path: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError {
            path: Some(path.into()),
            ..Self::new(class, message)
        }
    }
}

// ---------------------------------------------------------------------------
// Sections
// ---------------------------------------------------------------------------

/// A named device profile, either a preset or a full capability set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfileEntry", into = "RawProfileEntry")]
pub struct ProfileEntry {
    pub name: String,
    pub preset: Option<ProfileKind>,
    pub profile: CapabilityProfile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawProfileEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<ProfileKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capability: Option<CapabilityProfile>,
}

impl TryFrom<RawProfileEntry> for ProfileEntry {
    type Error = String;

    fn try_from(r: RawProfileEntry) -> Result<Self, String> {
        let profile = match (r.preset, r.capability) {
            (Some(kind), None) => builtin_profile(kind),
            (None, Some(p)) => p,
            _ => return Err(format!("profile `{}` needs exactly one of preset or capability", r.name)),
        };
        Ok(ProfileEntry {
            name: r.name,
            preset: r.preset,
            profile,
        })
    }
}

impl From<ProfileEntry> for RawProfileEntry {
    fn from(e: ProfileEntry) -> Self {
        match e.preset {
            Some(kind) => RawProfileEntry {
                name: e.name,
                preset: Some(kind),
                capability: None,
            },
            None => RawProfileEntry {
                name: e.name,
                preset: None,
                capability: Some(e.profile),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierEntry {
    pub name: String,
    pub config: CarrierConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RrmSection {
    #[serde(default)]
    pub stationary: bool,
    pub serving_rsrp_dbm: f64,
    pub serving_rsrq_db: f64,
    pub release: Release,
    #[serde(default)]
    pub thresholds: RrmThresholds<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerSection {
    pub model: PowerModel<f64>,
    pub rrc_state: RrcState,
    /// Legacy DRX cycle the lifetime ratios are taken against.
    pub baseline_cycle_s: f64,
    pub cycles_s: Vec<f64>,
    pub iats_s: Vec<f64>,
    pub arrival_process: ArrivalProcess,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rrm: Option<RrmSection>,
}

impl Default for PowerSection {
    fn default() -> Self {
        PowerSection {
            model: PowerModel::default(),
            rrc_state: RrcState::Idle,
            baseline_cycle_s: 2.56,
            cycles_s: vec![2.56, 10.24, 61.44, 120.0, 327.68, 600.0, 10485.76],
            iats_s: vec![600.0, 3600.0, 86400.0],
            arrival_process: ArrivalProcess::Periodic,
            rrm: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkbudgetSection {
    /// Defaults to the first RedCap profile in the deployment's range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub redcap_profile: Option<String>,
    /// Defaults to the first non-RedCap profile in the deployment's range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_profile: Option<String>,
    pub efficiency_penalty_db: f64,
    /// CSV file with columns scenario, channel, rx_branches, required_snr_db.
    /// Relative paths resolve against the scenario file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BwpSection {
    /// Explicit layout; otherwise SSB and CORESET#0 sit mid-carrier.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout: Option<CarrierLayout>,
    /// Carrier for the mid-carrier layout; defaults to the widest carrier
    /// in the RedCap profile's range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    pub features: Release17Features,
    pub options: PlannerOptions,
    pub grid_columns: u32,
}

impl Default for BwpSection {
    fn default() -> Self {
        BwpSection {
            layout: None,
            carrier: None,
            profile: None,
            features: Release17Features::all(),
            options: PlannerOptions::default(),
            grid_columns: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AccessSection {
    pub config: AccessConfig,
    pub devices: usize,
    pub redcap_fraction: f64,
    pub seed: u64,
}

impl Default for AccessSection {
    fn default() -> Self {
        AccessSection {
            config: AccessConfig::new(IdMethod::Msg3Lcid),
            devices: 1000,
            redcap_fraction: 0.3,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacitySection {
    pub redcap_fractions: Vec<f64>,
    /// Named profiles replace the inline ones in `scenario`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embb_profile: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub redcap_profile: Option<String>,
    pub scenario: CapacityScenario,
}

impl Default for CapacitySection {
    fn default() -> Self {
        CapacitySection {
            redcap_fractions: vec![0.0, 0.2, 0.4, 0.6, 0.8, 0.9],
            embb_profile: None,
            redcap_profile: None,
            scenario: CapacityScenario::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    #[serde(rename = "CSV", alias = "csv")]
    Csv,
    #[serde(rename = "JSON", alias = "json")]
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: OutputFormat,
    /// Directory for report files; stdout when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub profiles: Vec<ProfileEntry>,
    pub carriers: Vec<CarrierEntry>,
    pub deployment: DeploymentScenario,
    #[serde(default)]
    pub power: PowerSection,
    #[serde(default)]
    pub linkbudget: LinkbudgetSection,
    #[serde(default)]
    pub bwp: BwpSection,
    #[serde(default)]
    pub access: AccessSection,
    #[serde(default)]
    pub capacity: CapacitySection,
    #[serde(default = "UseCaseRequirement::presets")]
    pub requirements: Vec<UseCaseRequirement>,
    #[serde(default)]
    pub output: OutputSection,
    /// Seed for every stochastic subcommand, below command-line flags.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ScenarioFile {
    pub fn profile(&self, name: &str) -> Option<&CapabilityProfile> {
        self.profiles.iter().find(|p| p.name == name).map(|p| &p.profile)
    }

    pub fn carrier(&self, name: &str) -> Option<&CarrierConfig> {
        self.carriers.iter().find(|c| c.name == name).map(|c| &c.config)
    }

    /// First profile in range `fr` with the given RedCap flag.
    pub fn first_profile(&self, fr: FrequencyRange, redcap: bool) -> Option<&ProfileEntry> {
        self.profiles
            .iter()
            .find(|p| p.profile.frequency_range == fr && p.profile.is_redcap == redcap)
    }

    /// Canonical text: pretty JSON with every default written out.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub scenario: ScenarioFile,
    /// Optional sections absent from the text, filled with defaults.
    pub defaulted: Vec<&'static str>,
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

fn strip_location(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn parse_scenario(text: &str) -> Result<Parsed, Vec<ScenarioError>> {
    let text = if text.trim().is_empty() { "{}" } else { text };

    let value: Value = serde_json::from_str(text).map_err(|e| {
        vec![ScenarioError {
            line: Some(e.line()),
            column: Some(e.column()),
            ..ScenarioError::new(ErrorClass::Syntax, strip_location(&e.to_string()))
        }]
    })?;
    let Value::Object(top) = &value else {
        return Err(vec![ScenarioError::new(ErrorClass::Syntax, "scenario must be a JSON object")]);
    };

    let missing: Vec<ScenarioError> = REQUIRED_SECTIONS
        .iter()
        .filter(|s| !top.contains_key(**s))
        .map(|s| ScenarioError::at(ErrorClass::MissingSection, *s, format!("missing required section: {s}")))
        .collect();
    if !missing.is_empty() {
        return Err(missing);
    }

    let de = &mut serde_json::Deserializer::from_str(text);
    let mut scenario: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.inner();
        let message = strip_location(&inner.to_string());
        let class = if message.starts_with("unknown field") {
            ErrorClass::UnknownKey
        } else {
            ErrorClass::Invariant
        };
        vec![ScenarioError {
            class,
            message,
            path: Some(path),
            line: Some(inner.line()),
            column: Some(inner.column()),
        }]
    })?;

    let mut errors = Vec::new();
    resolve_capacity_profiles(&mut scenario, &mut errors);
    check(&scenario, &mut errors);
    if !errors.is_empty() {
        return Err(errors);
    }

    let defaulted = OPTIONAL_SECTIONS.iter().copied().filter(|s| !top.contains_key(*s)).collect();
    Ok(Parsed { scenario, defaulted })
}

pub(crate) fn unknown(kind: &str, path: &str, name: &str) -> ScenarioError {
    ScenarioError::at(ErrorClass::Reference, path, format!("{path} names unknown {kind} `{name}`"))
}

fn resolve_capacity_profiles(s: &mut ScenarioFile, errors: &mut Vec<ScenarioError>) {
    let names = [
        ("capacity.embb_profile", s.capacity.embb_profile.clone()),
        ("capacity.redcap_profile", s.capacity.redcap_profile.clone()),
    ];
    for (i, (path, name)) in names.into_iter().enumerate() {
        let Some(name) = name else { continue };
        match s.profile(&name).cloned() {
            Some(p) if i == 0 => s.capacity.scenario.embb_profile = p,
            Some(p) => s.capacity.scenario.redcap_profile = p,
            None => errors.push(unknown("profile", path, &name)),
        }
    }
}

pub(crate) fn invariant(path: impl Into<String>, message: impl ToString) -> ScenarioError {
    ScenarioError::at(ErrorClass::Invariant, path, message.to_string())
}

fn check(s: &ScenarioFile, errors: &mut Vec<ScenarioError>) {
    if s.profiles.is_empty() {
        errors.push(invariant("profiles", "at least one profile is required"));
    }
    if s.carriers.is_empty() {
        errors.push(invariant("carriers", "at least one carrier is required"));
    }
    let mut seen = HashSet::new();
    for (i, p) in s.profiles.iter().enumerate() {
        if !seen.insert(p.name.as_str()) {
            errors.push(invariant(format!("profiles[{i}].name"), format!("duplicate profile name `{}`", p.name)));
        }
    }
    let mut seen = HashSet::new();
    for (i, c) in s.carriers.iter().enumerate() {
        if !seen.insert(c.name.as_str()) {
            errors.push(invariant(format!("carriers[{i}].name"), format!("duplicate carrier name `{}`", c.name)));
        }
    }

    check_power(&s.power, errors);
    check_linkbudget(s, errors);
    check_bwp(s, errors);

    let a = &s.access;
    if let Err(e) = a.config.validate() {
        errors.push(invariant("access.config", e));
    }
    if a.devices == 0 {
        errors.push(invariant("access.devices", "at least one device is required"));
    }
    if !(0.0..=1.0).contains(&a.redcap_fraction) {
        errors.push(invariant("access.redcap_fraction", format!("{} outside [0, 1]", a.redcap_fraction)));
    }

    let c = &s.capacity;
    if c.redcap_fractions.is_empty() {
        errors.push(invariant("capacity.redcap_fractions", "at least one fraction is required"));
    }
    for (i, f) in c.redcap_fractions.iter().enumerate() {
        if !(0.0..=1.0).contains(f) {
            errors.push(invariant(format!("capacity.redcap_fractions[{i}]"), format!("{f} outside [0, 1]")));
        }
    }
    if let Err(e) = c.scenario.validate() {
        errors.push(invariant("capacity.scenario", e));
    }
}

pub(crate) fn check_power(p: &PowerSection, errors: &mut Vec<ScenarioError>) {
    if let Err(e) = p.model.validate() {
        errors.push(invariant("power.model", e));
    }
    if let Err(e) = DrxConfig::auto(p.rrc_state, p.baseline_cycle_s) {
        errors.push(invariant("power.baseline_cycle_s", e));
    }
    if p.cycles_s.is_empty() {
        errors.push(invariant("power.cycles_s", "at least one cycle is required"));
    }
    for (i, c) in p.cycles_s.iter().enumerate() {
        if let Err(e) = DrxConfig::auto(p.rrc_state, *c) {
            errors.push(invariant(format!("power.cycles_s[{i}]"), e));
        }
    }
    if p.iats_s.is_empty() {
        errors.push(invariant("power.iats_s", "at least one inter-arrival time is required"));
    }
    for (i, t) in p.iats_s.iter().enumerate() {
        if !(*t > 0.0) {
            errors.push(invariant(format!("power.iats_s[{i}]"), format!("inter-arrival time {t} s must be positive")));
        }
    }
    if let Some(rrm) = &p.rrm {
        if let Err(e) = rrm.thresholds.validate() {
            errors.push(invariant("power.rrm.thresholds", e));
        }
    }
}

pub(crate) fn check_profile_ref(
    s: &ScenarioFile,
    path: &str,
    name: &Option<String>,
    redcap: bool,
    fr: Option<FrequencyRange>,
    errors: &mut Vec<ScenarioError>,
) {
    let Some(name) = name else { return };
    let Some(p) = s.profile(name) else {
        errors.push(unknown("profile", path, name));
        return;
    };
    if p.is_redcap != redcap {
        let want = if redcap { "a RedCap" } else { "a non-RedCap" };
        errors.push(invariant(path, format!("profile `{name}` is not {want} profile")));
    }
    if let Some(fr) = fr {
        if p.frequency_range != fr {
            errors.push(invariant(
                path,
                format!("profile `{name}` is {:?} but the deployment is {fr:?}", p.frequency_range),
            ));
        }
    }
}

fn check_linkbudget(s: &ScenarioFile, errors: &mut Vec<ScenarioError>) {
    let lb = &s.linkbudget;
    let fr = Some(s.deployment.frequency_range());
    check_profile_ref(s, "linkbudget.redcap_profile", &lb.redcap_profile, true, fr, errors);
    check_profile_ref(s, "linkbudget.reference_profile", &lb.reference_profile, false, fr, errors);
    if !(lb.efficiency_penalty_db >= 0.0 && lb.efficiency_penalty_db.is_finite()) {
        errors.push(invariant("linkbudget.efficiency_penalty_db", "penalty must be non-negative"));
    }
}

fn check_bwp(s: &ScenarioFile, errors: &mut Vec<ScenarioError>) {
    let b = &s.bwp;
    check_profile_ref(s, "bwp.profile", &b.profile, true, None, errors);
    if let Some(name) = &b.carrier {
        if s.carrier(name).is_none() {
            errors.push(unknown("carrier", "bwp.carrier", name));
        }
    }
    if let Some(layout) = &b.layout {
        if let Err(e) = layout.validate() {
            errors.push(invariant("bwp.layout", e));
        }
    }
    if b.grid_columns == 0 {
        errors.push(invariant("bwp.grid_columns", "must be positive"));
    }
}
