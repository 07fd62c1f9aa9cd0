//! Subcommand bodies. Each one turns the scenario plus flag overrides into
//! named artifacts; writing them out is left to the caller.

use std::path::PathBuf;

use redcap_core::access::{mixed_population, simulate_access, AccessResult, IdMethod};
use redcap_core::bwp::{plan_redcap_bwp, render_grid, validate_layout, BwpPlan, CarrierLayout, Release17Features};
use redcap_core::capacity::{run_capacity_sim, Scheduler, ThroughputReport};
use redcap_core::datarate::{peak_rate, RateParams};
use redcap_core::linkbudget::{channel_set, coverage_recovery, LinkAssumptions, SnrTable};
use redcap_core::model::{
    builtin_profile, check_requirements, Achieved, CapabilityProfile, Direction, ProfileKind, RequirementReport,
    UseCaseRequirement,
};
use redcap_core::power::{
    battery_lifetime_with_rrm, rrm_duty_cycle, DrxConfig, RrcState, TrafficPattern,
};
use redcap_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::format::{sig6, to_json, Cell, Table};
use crate::scenario::{
    check_power, check_profile_ref, invariant, unknown, ErrorClass, OutputFormat, PowerSection, ScenarioError,
    ScenarioFile,
};
use crate::CliError;

/// One report file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub contents: String,
    /// Printed when no output directory is configured.
    pub stdout: bool,
}

impl Artifact {
    fn new(file: impl Into<String>, contents: String, stdout: bool) -> Self {
        Artifact {
            file: file.into(),
            contents,
            stdout,
        }
    }
}

pub struct Ctx<'a> {
    pub scenario: &'a ScenarioFile,
    pub defaulted: &'a [&'static str],
    pub format: OutputFormat,
    /// Flag, then file, then environment; `None` leaves section defaults.
    pub seed: Option<u64>,
    /// Directory relative paths in the scenario resolve against.
    pub base_dir: PathBuf,
}

type CmdResult<T> = Result<T, CliError>;

fn scenario_err(e: ScenarioError) -> CliError {
    CliError::Scenario(vec![e])
}

fn analysis(context: impl std::fmt::Display, e: impl std::fmt::Display) -> CliError {
    CliError::Analysis(format!("{context}: {e}"))
}

fn tabular(stem: &str, table: &Table, format: OutputFormat, stdout: bool) -> Artifact {
    match format {
        OutputFormat::Csv => Artifact::new(format!("{stem}.csv"), table.to_csv(), stdout),
        OutputFormat::Json => Artifact::new(format!("{stem}.json"), to_json(&table.to_json_value()), stdout),
    }
}

// ---------------------------------------------------------------------------
// datarate
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, clap::Args)]
pub struct DatarateArgs {
    /// Restrict to these profiles (repeatable).
    #[arg(long)]
    pub profile: Vec<String>,
    /// Restrict to these carriers (repeatable).
    #[arg(long)]
    pub carrier: Vec<String>,
}

fn check_names(ctx: &Ctx, args: &DatarateArgs) -> CmdResult<()> {
    let mut errors = Vec::new();
    for p in &args.profile {
        if ctx.scenario.profile(p).is_none() {
            errors.push(unknown("profile", "--profile", p));
        }
    }
    for c in &args.carrier {
        if ctx.scenario.carrier(c).is_none() {
            errors.push(unknown("carrier", "--carrier", c));
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(CliError::Scenario(errors))
    }
}

/// Peak rate of one profile on one carrier. The inner error carries the
/// reason when the carrier is beyond the device's capability.
fn rate(profile: &CapabilityProfile, name: &str, carrier_name: &str, ctx: &Ctx, dir: Direction) -> CmdResult<Result<f64, String>> {
    let carrier = ctx.scenario.carrier(carrier_name).expect("checked carrier");
    match peak_rate(profile, carrier, dir, &RateParams::<f64>::max_for(profile, dir)) {
        Ok(r) => Ok(Ok(r)),
        Err(e @ Error::CapabilityExceeded { .. }) => Ok(Err(e.to_string())),
        Err(e) => Err(analysis(format!("profile {name} on carrier {carrier_name}"), e)),
    }
}

pub fn datarate_table(ctx: &Ctx, args: &DatarateArgs) -> CmdResult<Table> {
    check_names(ctx, args)?;
    let s = ctx.scenario;
    let mut t = Table::new(&["profile", "carrier", "direction", "rate_mbps", "status"]);
    for p in s.profiles.iter().filter(|p| args.profile.is_empty() || args.profile.contains(&p.name)) {
        for c in s.carriers.iter().filter(|c| args.carrier.is_empty() || args.carrier.contains(&c.name)) {
            if c.config.frequency_range != p.profile.frequency_range {
                continue;
            }
            for dir in [Direction::DL, Direction::UL] {
                let (value, status) = match rate(&p.profile, &p.name, &c.name, ctx, dir)? {
                    Ok(r) => (Cell::Num(r), "ok".to_string()),
                    Err(msg) => (Cell::Empty, msg),
                };
                t.push(vec![p.name.as_str().into(), c.name.as_str().into(), dir.to_string().into(), value, status.into()]);
            }
        }
    }
    Ok(t)
}

pub fn datarate(ctx: &Ctx, args: &DatarateArgs) -> CmdResult<Vec<Artifact>> {
    Ok(vec![tabular("datarate", &datarate_table(ctx, args)?, ctx.format, true)])
}

// ---------------------------------------------------------------------------
// battery
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StateArg {
    Idle,
    Inactive,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct BatteryArgs {
    /// DRX/eDRX cycles in seconds, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub cycles: Option<Vec<f64>>,
    /// Mean data inter-arrival times in seconds, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub iats: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub state: Option<StateArg>,
}

fn power_section(ctx: &Ctx, args: &BatteryArgs) -> CmdResult<PowerSection> {
    let mut p = ctx.scenario.power.clone();
    if let Some(c) = &args.cycles {
        p.cycles_s = c.clone();
    }
    if let Some(i) = &args.iats {
        p.iats_s = i.clone();
    }
    if let Some(s) = args.state {
        p.rrc_state = match s {
            StateArg::Idle => RrcState::Idle,
            StateArg::Inactive => RrcState::Inactive,
        };
    }
    let mut errors = Vec::new();
    check_power(&p, &mut errors);
    if errors.is_empty() {
        Ok(p)
    } else {
        Err(CliError::Scenario(errors))
    }
}

pub fn battery_table(ctx: &Ctx, args: &BatteryArgs) -> CmdResult<Table> {
    let p = power_section(ctx, args)?;
    let duty = p.rrm.as_ref().map_or(0.0, |r| {
        rrm_duty_cycle(r.stationary, r.serving_rsrp_dbm, r.serving_rsrq_db, &r.thresholds, r.release)
    });
    let lifetime = |cycle: f64, iat: f64| -> CmdResult<f64> {
        let ctx = || format!("cycle {} s, IAT {} s", sig6(cycle), sig6(iat));
        let drx = DrxConfig::auto(p.rrc_state, cycle).map_err(|e| analysis(ctx(), e))?;
        let traffic = TrafficPattern::new(iat, p.arrival_process).map_err(|e| analysis(ctx(), e))?;
        battery_lifetime_with_rrm(&p.model, &drx, &traffic, duty).map_err(|e| analysis(ctx(), e))
    };
    let mut t = Table::new(&[
        "cycle_s",
        "iat_s",
        "edrx",
        "lifetime_h",
        "lifetime_ratio_vs_baseline",
        "paging_delay_s",
    ]);
    for &cycle in &p.cycles_s {
        let drx = DrxConfig::auto(p.rrc_state, cycle).expect("checked cycle");
        for &iat in &p.iats_s {
            let life = lifetime(cycle, iat)?;
            let base = lifetime(p.baseline_cycle_s, iat)?;
            t.push(vec![
                cycle.into(),
                iat.into(),
                drx.edrx_enabled().into(),
                life.into(),
                (life / base).into(),
                drx.expected_paging_delay_s().into(),
            ]);
        }
    }
    Ok(t)
}

pub fn battery(ctx: &Ctx, args: &BatteryArgs) -> CmdResult<Vec<Artifact>> {
    Ok(vec![tabular("battery", &battery_table(ctx, args)?, ctx.format, true)])
}

// ---------------------------------------------------------------------------
// linkbudget
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, clap::Args)]
pub struct LinkbudgetArgs {
    /// RedCap profile to evaluate.
    #[arg(long)]
    pub profile: Option<String>,
    /// Reference (non-RedCap) profile.
    #[arg(long)]
    pub reference: Option<String>,
    /// Device total radiated power in dBm, for both devices.
    #[arg(long, allow_negative_numbers = true)]
    pub trp: Option<f64>,
    /// Antenna-efficiency penalty on the RedCap device, in dB.
    #[arg(long)]
    pub penalty_db: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct LinkbudgetSummary {
    pub redcap_profile: String,
    pub reference_profile: String,
    pub ue_trp_dbm: f64,
    pub efficiency_penalty_db: f64,
    pub reference_bottleneck: String,
    pub reference_bottleneck_mil_db: f64,
    pub redcap_bottleneck: String,
    pub flagged: Vec<String>,
    pub channels: Value,
}

fn pick_profile(ctx: &Ctx, path: &str, flag: &Option<String>, file: &Option<String>, redcap: bool) -> CmdResult<String> {
    let s = ctx.scenario;
    let fr = s.deployment.frequency_range();
    let chosen = flag.clone().or_else(|| file.clone());
    match chosen {
        Some(name) => {
            let mut errors = Vec::new();
            check_profile_ref(s, path, &Some(name.clone()), redcap, Some(fr), &mut errors);
            if errors.is_empty() {
                Ok(name)
            } else {
                Err(CliError::Scenario(errors))
            }
        }
        None => s.first_profile(fr, redcap).map(|p| p.name.clone()).ok_or_else(|| {
            let kind = if redcap { "RedCap" } else { "reference" };
            scenario_err(ScenarioError::at(
                ErrorClass::Reference,
                path,
                format!("no {kind} profile for the {fr:?} deployment"),
            ))
        }),
    }
}

pub fn linkbudget_run(ctx: &Ctx, args: &LinkbudgetArgs) -> CmdResult<(Table, LinkbudgetSummary)> {
    let s = ctx.scenario;
    let lb = &s.linkbudget;
    let rc_name = pick_profile(ctx, "linkbudget.redcap_profile", &args.profile, &lb.redcap_profile, true)?;
    let rf_name = pick_profile(ctx, "linkbudget.reference_profile", &args.reference, &lb.reference_profile, false)?;
    let penalty = args.penalty_db.unwrap_or(lb.efficiency_penalty_db);
    if !(penalty >= 0.0 && penalty.is_finite()) {
        return Err(scenario_err(invariant("--penalty-db", "penalty must be non-negative")));
    }
    let mut dep = s.deployment.clone();
    if let Some(trp) = args.trp {
        if !trp.is_finite() {
            return Err(scenario_err(invariant("--trp", "TRP must be finite")));
        }
        dep.ue_trp_dbm = trp;
    }
    let snr = match &lb.snr_table {
        Some(p) => {
            let path = ctx.base_dir.join(p);
            SnrTable::from_path(&path).map_err(|e| CliError::Io(e.to_string()))?
        }
        None => SnrTable::builtin(),
    };
    let a = LinkAssumptions::for_range(dep.frequency_range());
    let rc = channel_set(&dep, s.profile(&rc_name).expect("checked"), &snr, &a, penalty)
        .map_err(|e| analysis(format!("profile {rc_name}"), e))?;
    let rf = channel_set(&dep, s.profile(&rf_name).expect("checked"), &snr, &a, 0.0)
        .map_err(|e| analysis(format!("profile {rf_name}"), e))?;
    let rep = coverage_recovery(&rc, &rf).map_err(|e| analysis("coverage recovery", e))?;

    let mut t = Table::new(&[
        "channel",
        "direction",
        "mil_db",
        "reference_mil_db",
        "recovery_db",
        "bottleneck",
        "reference_bottleneck",
        "needs_recovery",
    ]);
    for e in &rep.entries {
        t.push(vec![
            e.channel.name().into(),
            e.channel.direction().to_string().into(),
            e.mil_db.into(),
            rf.mil_of(e.channel).into(),
            e.recovery_db.into(),
            (e.channel == rep.redcap_bottleneck).into(),
            (e.channel == rep.reference_bottleneck).into(),
            (e.recovery_db > 0.0).into(),
        ]);
    }
    let summary = LinkbudgetSummary {
        redcap_profile: rc_name,
        reference_profile: rf_name,
        ue_trp_dbm: dep.ue_trp_dbm,
        efficiency_penalty_db: penalty,
        reference_bottleneck: rep.reference_bottleneck.name().to_string(),
        reference_bottleneck_mil_db: rep.reference_bottleneck_mil_db,
        redcap_bottleneck: rep.redcap_bottleneck.name().to_string(),
        flagged: rep.flagged().iter().map(|c| c.name().to_string()).collect(),
        channels: t.to_json_value(),
    };
    Ok((t, summary))
}

pub fn linkbudget(ctx: &Ctx, args: &LinkbudgetArgs) -> CmdResult<Vec<Artifact>> {
    let (t, summary) = linkbudget_run(ctx, args)?;
    Ok(match ctx.format {
        OutputFormat::Csv => vec![tabular("linkbudget", &t, ctx.format, true)],
        OutputFormat::Json => vec![Artifact::new("linkbudget.json", to_json(&summary), true)],
    })
}

// ---------------------------------------------------------------------------
// bwp
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, clap::Args)]
pub struct BwpArgs {
    /// Release 17 features: `all`, `none`, or a comma-separated subset of
    /// separate_initial_bwp, hopping_disable_allowed, dl_bwp_without_ssb_allowed.
    #[arg(long)]
    pub features: Option<String>,
    /// Carrier for the mid-carrier layout.
    #[arg(long)]
    pub carrier: Option<String>,
    /// Width of the ASCII grid in columns.
    #[arg(long)]
    pub cols: Option<u32>,
}

fn parse_features(text: &str) -> Result<Release17Features, ScenarioError> {
    match text.trim() {
        "all" => return Ok(Release17Features::all()),
        "none" | "" => return Ok(Release17Features::default()),
        _ => {}
    }
    let mut f = Release17Features::default();
    for item in text.split(',').map(str::trim) {
        match item {
            "separate_initial_bwp" => f.separate_initial_bwp = true,
            "hopping_disable_allowed" => f.hopping_disable_allowed = true,
            "dl_bwp_without_ssb_allowed" => f.dl_bwp_without_ssb_allowed = true,
            other => {
                return Err(ScenarioError::at(
                    ErrorClass::UnknownKey,
                    "--features",
                    format!("unknown feature `{other}`"),
                ))
            }
        }
    }
    Ok(f)
}

#[derive(Debug, Serialize)]
pub struct BwpDocument {
    pub profile: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier: Option<String>,
    pub features: Release17Features,
    pub layout: CarrierLayout,
    pub plan: BwpPlan,
    pub grid: String,
}

pub fn bwp_run(ctx: &Ctx, args: &BwpArgs) -> CmdResult<BwpDocument> {
    let s = ctx.scenario;
    let b = &s.bwp;
    let features = match &args.features {
        Some(t) => parse_features(t).map_err(scenario_err)?,
        None => b.features,
    };
    let profile_name = match &b.profile {
        Some(n) => n.clone(),
        None => {
            let fr = b.layout.as_ref().map_or(s.deployment.frequency_range(), |l| l.frequency_range);
            s.first_profile(fr, true)
                .or_else(|| s.profiles.iter().find(|p| p.profile.is_redcap))
                .map(|p| p.name.clone())
                .ok_or_else(|| scenario_err(ScenarioError::at(ErrorClass::Reference, "bwp.profile", "no RedCap profile defined")))?
        }
    };
    let profile = s.profile(&profile_name).expect("checked profile");
    let fr = profile.frequency_range;

    let (layout, carrier) = match (&b.layout, args.carrier.as_ref().or(b.carrier.as_ref())) {
        (Some(l), None) => (l.clone(), None),
        (_, named) => {
            let entry = match named {
                Some(n) => s
                    .carriers
                    .iter()
                    .find(|c| &c.name == n)
                    .ok_or_else(|| scenario_err(unknown("carrier", "--carrier", n)))?,
                None => s
                    .carriers
                    .iter()
                    .filter(|c| c.config.frequency_range == fr)
                    .fold(None, |best: Option<&crate::scenario::CarrierEntry>, c| match best {
                        Some(b) if b.config.n_prb >= c.config.n_prb => Some(b),
                        _ => Some(c),
                    })
                    .ok_or_else(|| {
                        scenario_err(ScenarioError::at(
                            ErrorClass::Reference,
                            "bwp.carrier",
                            format!("no {fr:?} carrier for profile `{profile_name}`"),
                        ))
                    })?,
            };
            let c = &entry.config;
            let l = CarrierLayout::mid_carrier(c.frequency_range, c.scs_khz, c.n_prb, c.duplex_mode)
                .map_err(|e| analysis(format!("carrier {}", entry.name), e))?;
            (l, Some(entry.name.clone()))
        }
    };

    let plan = plan_redcap_bwp(&layout, profile, features, &b.options).map_err(|e| analysis("BWP planner", e))?;
    let bwps = [plan.regular_ul.clone(), plan.regular_dl.clone(), plan.redcap_ul.clone(), plan.redcap_dl.clone()];
    let violations = validate_layout(&layout, &bwps, profile).map_err(|e| analysis("BWP validation", e))?;
    if !violations.is_empty() {
        return Err(CliError::Analysis(format!("BWP planner: plan breaks {violations:?}")));
    }
    let grid = render_grid(&layout, &plan, args.cols.unwrap_or(b.grid_columns));
    Ok(BwpDocument {
        profile: profile_name,
        carrier,
        features,
        layout,
        plan,
        grid,
    })
}

pub fn bwp(ctx: &Ctx, args: &BwpArgs) -> CmdResult<Vec<Artifact>> {
    let doc = bwp_run(ctx, args)?;
    let grid = doc.grid.clone();
    Ok(vec![
        Artifact::new("bwp.json", to_json(&doc), true),
        Artifact::new("bwp_grid.txt", grid, true),
    ])
}

// ---------------------------------------------------------------------------
// access-sim
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum IdMethodArg {
    Msg1,
    Msg3,
    #[value(name = "msga")]
    MsgA,
    PostMsg4,
}

impl From<IdMethodArg> for IdMethod {
    fn from(a: IdMethodArg) -> Self {
        match a {
            IdMethodArg::Msg1 => IdMethod::Msg1SeparatePrach,
            IdMethodArg::Msg3 | IdMethodArg::MsgA => IdMethod::Msg3Lcid,
            IdMethodArg::PostMsg4 => IdMethod::PostMsg4Capability,
        }
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct AccessArgs {
    #[arg(long, value_enum)]
    pub id_method: Option<IdMethodArg>,
    /// Bar RedCap devices from the cell.
    #[arg(long)]
    pub barred: bool,
    #[arg(long)]
    pub devices: Option<usize>,
    #[arg(long)]
    pub redcap_fraction: Option<f64>,
}

pub fn access_run(ctx: &Ctx, args: &AccessArgs) -> CmdResult<(AccessResult, Table)> {
    let a = &ctx.scenario.access;
    let mut cfg = a.config.clone();
    if let Some(m) = args.id_method {
        cfg.id_method = m.into();
    }
    cfg.redcap_barred |= args.barred;
    let n = args.devices.unwrap_or(a.devices);
    let fraction = args.redcap_fraction.unwrap_or(a.redcap_fraction);
    if n == 0 {
        return Err(scenario_err(invariant("--devices", "at least one device is required")));
    }
    if !(0.0..=1.0).contains(&fraction) {
        return Err(scenario_err(invariant("--redcap-fraction", format!("{fraction} outside [0, 1]"))));
    }
    let seed = ctx.seed.unwrap_or(a.seed);
    let devices = mixed_population(n, fraction, seed).map_err(|e| analysis("population", e))?;
    let r = simulate_access(&devices, &cfg, seed).map_err(|e| analysis("access simulation", e))?;

    let st = &r.stats;
    let mut t = Table::new(&[
        "id_method",
        "barred",
        "seed",
        "devices",
        "redcap_devices",
        "barred_devices",
        "total_prbs",
        "redcap_prbs",
        "non_redcap_prbs",
        "identified_msg1",
        "identified_msg3",
        "identified_post_msg4",
        "mean_time_to_connected_ms",
    ]);
    t.push(vec![
        format!("{:?}", cfg.id_method).into(),
        cfg.redcap_barred.into(),
        seed.into(),
        st.devices.into(),
        st.redcap_devices.into(),
        st.barred.into(),
        st.total_prbs.into(),
        st.redcap_prbs.into(),
        st.non_redcap_prbs.into(),
        st.identified_msg1.into(),
        st.identified_msg3.into(),
        st.identified_post_msg4.into(),
        st.mean_time_to_connected_ms.into(),
    ]);
    Ok((r, t))
}

pub fn access_sim(ctx: &Ctx, args: &AccessArgs) -> CmdResult<Vec<Artifact>> {
    let (r, t) = access_run(ctx, args)?;
    let json_out = ctx.format == OutputFormat::Json;
    Ok(vec![
        Artifact::new("access_outcomes.json", to_json(&r), json_out),
        tabular("access_summary", &t, ctx.format, !json_out),
    ])
}

// ---------------------------------------------------------------------------
// capacity-sim
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SchedulerArg {
    Rr,
    Pf,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct CapacityArgs {
    #[arg(long, value_enum)]
    pub scheduler: Option<SchedulerArg>,
    /// RedCap fractions to sweep, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub fractions: Option<Vec<f64>>,
    #[arg(long)]
    pub drops: Option<u32>,
    #[arg(long)]
    pub load_points: Option<u32>,
    #[arg(long)]
    pub users_per_cell: Option<u32>,
}

pub fn capacity_run(ctx: &Ctx, args: &CapacityArgs) -> CmdResult<Vec<(f64, Vec<ThroughputReport>)>> {
    let c = &ctx.scenario.capacity;
    let mut base = c.scenario.clone();
    if let Some(s) = args.scheduler {
        base.scheduler = match s {
            SchedulerArg::Rr => Scheduler::RoundRobin,
            SchedulerArg::Pf => Scheduler::ProportionalFair,
        };
    }
    if let Some(d) = args.drops {
        base.drops = d;
    }
    if let Some(k) = args.load_points {
        base.load_points = k;
    }
    if let Some(u) = args.users_per_cell {
        base.users_per_cell = u;
    }
    if let Some(seed) = ctx.seed {
        base.seed = seed;
    }
    let fractions = args.fractions.clone().unwrap_or_else(|| c.redcap_fractions.clone());
    if fractions.is_empty() {
        return Err(scenario_err(invariant("--fractions", "at least one fraction is required")));
    }
    let mut out = Vec::with_capacity(fractions.len());
    for f in fractions {
        let scn = redcap_core::capacity::CapacityScenario {
            redcap_fraction: f,
            ..base.clone()
        };
        scn.validate().map_err(|e| scenario_err(invariant("capacity.scenario", e)))?;
        let r = run_capacity_sim(&scn).map_err(|e| analysis(format!("capacity at fraction {}", sig6(f)), e))?;
        out.push((f, r));
    }
    Ok(out)
}

const CAPACITY_COLUMNS: [&str; 11] = [
    "load_point",
    "load_bps",
    "p5",
    "p50",
    "p95",
    "utilization",
    "served_bps",
    "spectral_efficiency_bps_hz",
    "embb_users",
    "redcap_users",
    "embb_samples",
];

fn capacity_cells(r: &ThroughputReport) -> Vec<Cell> {
    vec![
        r.load_point.into(),
        r.offered_load_bps_per_cell.into(),
        r.p5_mbps.into(),
        r.p50_mbps.into(),
        r.p95_mbps.into(),
        r.resource_utilization.into(),
        r.served_load_bps_per_cell.into(),
        r.spectral_efficiency_bps_hz.into(),
        r.embb_users_per_cell.into(),
        r.redcap_users_per_cell.into(),
        r.embb_samples.into(),
    ]
}

pub fn capacity_tables(runs: &[(f64, Vec<ThroughputReport>)]) -> (Table, Vec<(f64, Table)>) {
    let mut headers = vec!["redcap_fraction"];
    headers.extend(CAPACITY_COLUMNS);
    let mut all = Table::new(&headers);
    let mut per = Vec::new();
    for (f, reports) in runs {
        let mut t = Table::new(&CAPACITY_COLUMNS);
        for r in reports {
            let cells = capacity_cells(r);
            let mut row = vec![Cell::Num(*f)];
            row.extend(cells.iter().cloned());
            all.push(row);
            t.push(cells);
        }
        per.push((*f, t));
    }
    (all, per)
}

pub fn capacity_sim(ctx: &Ctx, args: &CapacityArgs) -> CmdResult<Vec<Artifact>> {
    let runs = capacity_run(ctx, args)?;
    let (all, per) = capacity_tables(&runs);
    let mut out = vec![tabular("capacity", &all, ctx.format, true)];
    for (f, t) in per {
        out.push(tabular(&format!("capacity_f{}", sig6(f)), &t, ctx.format, false));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, clap::Args)]
pub struct ReportArgs {
    /// Include the capacity sweep (slow).
    #[arg(long)]
    pub with_capacity: bool,
}

#[derive(Debug, Serialize)]
pub struct RequirementEntry {
    pub profile: String,
    pub carrier: String,
    pub dl_mbps: f64,
    pub ul_mbps: f64,
    pub verdicts: Vec<RequirementReport>,
}

/// Requirement verdicts for every RedCap profile on every carrier it can use.
/// Only the rate dimensions receive achieved values.
pub fn requirement_entries(ctx: &Ctx) -> CmdResult<Vec<RequirementEntry>> {
    let s = ctx.scenario;
    let mut out = Vec::new();
    for p in s.profiles.iter().filter(|p| p.profile.is_redcap) {
        for c in s.carriers.iter().filter(|c| c.config.frequency_range == p.profile.frequency_range) {
            let dl = rate(&p.profile, &p.name, &c.name, ctx, Direction::DL)?;
            let ul = rate(&p.profile, &p.name, &c.name, ctx, Direction::UL)?;
            let (Ok(dl), Ok(ul)) = (dl, ul) else { continue };
            let achieved = Achieved {
                dl_mbps: Some(dl),
                ul_mbps: Some(ul),
                ..Achieved::default()
            };
            let verdicts = s
                .requirements
                .iter()
                .map(|r: &UseCaseRequirement| check_requirements(r, &achieved))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| analysis("requirements", e))?;
            out.push(RequirementEntry {
                profile: p.name.clone(),
                carrier: c.name.clone(),
                dl_mbps: dl,
                ul_mbps: ul,
                verdicts,
            });
        }
    }
    Ok(out)
}

fn section<T: Serialize>(r: CmdResult<T>) -> CmdResult<Value> {
    match r {
        Ok(v) => Ok(serde_json::to_value(v).expect("report sections serialize")),
        Err(CliError::Analysis(msg)) => Ok(json!({ "error": msg })),
        Err(e) => Err(e),
    }
}

pub fn report(ctx: &Ctx, args: &ReportArgs) -> CmdResult<Vec<Artifact>> {
    let s = ctx.scenario;
    let datarate = datarate_table(ctx, &DatarateArgs::default())?.to_json_value();
    let battery = battery_table(ctx, &BatteryArgs::default())?.to_json_value();
    let linkbudget = section(linkbudget_run(ctx, &LinkbudgetArgs::default()).map(|(_, s)| s))?;
    let bwp = section(bwp_run(ctx, &BwpArgs::default()))?;
    let access = section(access_run(ctx, &AccessArgs::default()).map(|(r, _)| r.stats))?;
    let requirements = requirement_entries(ctx)?;
    let mut doc = json!({
        "deployment": s.deployment,
        "defaulted_sections": ctx.defaulted,
        "datarate": datarate,
        "lifetime": battery,
        "linkbudget": linkbudget,
        "bwp": bwp,
        "access": access,
        "requirements": requirements,
    });
    if args.with_capacity {
        let runs = capacity_run(ctx, &CapacityArgs::default())?;
        doc["capacity"] = capacity_tables(&runs).0.to_json_value();
    }
    Ok(vec![Artifact::new("report.json", to_json(&doc), true)])
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

/// Built-in profiles, requirements and deployments as JSON.
pub fn presets() -> String {
    use redcap_core::model::{DeploymentKind, DeploymentScenario};
    let profiles: serde_json::Map<String, Value> = ProfileKind::ALL
        .iter()
        .map(|k| (format!("{k:?}"), serde_json::to_value(builtin_profile(*k)).expect("profile serializes")))
        .collect();
    let deployments: Vec<DeploymentScenario> = [
        DeploymentKind::RuralFR1,
        DeploymentKind::UrbanMacroFR1,
        DeploymentKind::UrbanMicroFR1,
        DeploymentKind::IndoorFR2,
    ]
    .into_iter()
    .map(DeploymentScenario::preset)
    .collect();
    let doc = json!({
        "profiles": profiles,
        "requirements": UseCaseRequirement::presets(),
        "deployments": deployments,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("presets serialize");
    s.push('\n');
    s
}
