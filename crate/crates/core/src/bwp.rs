//! Carrier PRB grid, initial-BWP layout rules, PUSCH fragmentation and a
//! RedCap BWP placement search.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{prbs_within_bandwidth, CapabilityProfile, Direction, DuplexMode, FrequencyRange};

/// Inclusive PRB interval `first..=last`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrbRange {
    pub first: u32,
    pub last: u32,
}

impl PrbRange {
    pub fn new(first: u32, last: u32) -> Result<Self> {
        if first > last {
            return Err(Error::MalformedRange { first, last, n_prb: 0 });
        }
        Ok(PrbRange { first, last })
    }

    /// `width` PRBs starting at `first`. `width` must be non-zero.
    pub fn starting_at(first: u32, width: u32) -> Self {
        debug_assert!(width > 0);
        PrbRange {
            first,
            last: first + width - 1,
        }
    }

    pub fn width(&self) -> u32 {
        self.last - self.first + 1
    }

    pub fn contains(&self, other: &PrbRange) -> bool {
        self.first <= other.first && other.last <= self.last
    }

    /// Twice the center PRB index, so centers compare exactly.
    pub fn center_x2(&self) -> u32 {
        self.first + self.last
    }

    fn check_within(&self, n_prb: u32) -> Result<()> {
        if self.first > self.last || self.last >= n_prb {
            return Err(Error::MalformedRange {
                first: self.first,
                last: self.last,
                n_prb,
            });
        }
        Ok(())
    }
}

impl fmt::Display for PrbRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.first, self.last)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierLayout {
    pub frequency_range: FrequencyRange,
    pub scs_khz: u32,
    pub n_prb: u32,
    pub ssb_prb_range: PrbRange,
    pub coreset0_prb_range: PrbRange,
    pub duplex_mode: DuplexMode,
}

impl CarrierLayout {
    pub fn validate(&self) -> Result<()> {
        if self.n_prb == 0 {
            return invalid("carrier layout", "n_prb must be positive");
        }
        self.ssb_prb_range.check_within(self.n_prb)?;
        self.coreset0_prb_range.check_within(self.n_prb)
    }

    /// SSB (20 PRB) and CORESET#0 (24 PRB) around the middle of the carrier.
    pub fn mid_carrier(fr: FrequencyRange, scs_khz: u32, n_prb: u32, duplex_mode: DuplexMode) -> Result<Self> {
        if n_prb < 24 {
            return invalid("carrier layout", format!("{n_prb} PRBs cannot hold CORESET#0"));
        }
        let mid = n_prb / 2;
        let l = CarrierLayout {
            frequency_range: fr,
            scs_khz,
            n_prb,
            ssb_prb_range: PrbRange::starting_at(mid - 10, 20),
            coreset0_prb_range: PrbRange::starting_at(mid - 12, 24),
            duplex_mode,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn full(&self) -> PrbRange {
        PrbRange::starting_at(0, self.n_prb)
    }

    /// Smallest range holding both SSB and CORESET#0.
    pub fn anchor(&self) -> PrbRange {
        PrbRange {
            first: self.ssb_prb_range.first.min(self.coreset0_prb_range.first),
            last: self.ssb_prb_range.last.max(self.coreset0_prb_range.last),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BwpOwner {
    RegularNr,
    RedCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PucchHopping {
    EnabledEdgeHopping,
    Disabled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Release17Features {
    pub separate_initial_bwp: bool,
    pub hopping_disable_allowed: bool,
    pub dl_bwp_without_ssb_allowed: bool,
}

impl Release17Features {
    pub fn all() -> Self {
        Release17Features {
            separate_initial_bwp: true,
            hopping_disable_allowed: true,
            dl_bwp_without_ssb_allowed: true,
        }
    }

    /// Separate RedCap initial BWPs, with the legacy hopping and SSB rules.
    pub fn separate_only() -> Self {
        Release17Features {
            separate_initial_bwp: true,
            ..Self::default()
        }
    }

    /// Every subset of the three flags.
    pub fn subsets() -> [Self; 8] {
        std::array::from_fn(|i| Release17Features {
            separate_initial_bwp: i & 1 != 0,
            hopping_disable_allowed: i & 2 != 0,
            dl_bwp_without_ssb_allowed: i & 4 != 0,
        })
    }

    /// True when every flag set in `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        (!self.separate_initial_bwp || other.separate_initial_bwp)
            && (!self.hopping_disable_allowed || other.hopping_disable_allowed)
            && (!self.dl_bwp_without_ssb_allowed || other.dl_bwp_without_ssb_allowed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BwpConfig {
    pub owner: BwpOwner,
    pub direction: Direction,
    pub prb_range: PrbRange,
    pub pucch_hopping: PucchHopping,
    /// Meaningful for DL only.
    pub contains_ssb_coreset0: bool,
    pub release17_features: Release17Features,
}

/// Layout rule identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    /// (a) BWP wider than the device supports.
    ExceedsCapability,
    /// (b) TDD UL and DL initial BWPs with different centers.
    TddCenterMismatch,
    /// (c) DL initial BWP without SSB and CORESET#0.
    DlMissingSsb,
    /// (d) PUCCH hopping disabled on an initial UL BWP.
    HoppingDisabled,
    /// (e) RedCap BWP differing from the common initial BWP.
    SeparateBwpNotAllowed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub rule: RuleId,
    pub owner: BwpOwner,
    pub prb_ranges: Vec<PrbRange>,
    pub detail: String,
}

/// Checks the initial-BWP rules for every BWP in `bwps`. `profile` gives the
/// RedCap bandwidth limit.
pub fn validate_layout(carrier: &CarrierLayout, bwps: &[BwpConfig], profile: &CapabilityProfile) -> Result<Vec<Violation>> {
    carrier.validate()?;
    if bwps.is_empty() {
        return invalid("BWP layout", "no BWPs given");
    }
    for b in bwps {
        b.prb_range.check_within(carrier.n_prb)?;
    }
    let max_prbs = prbs_within_bandwidth(carrier.frequency_range, carrier.scs_khz, profile.max_bandwidth_mhz)?;
    let anchor = carrier.anchor();
    let mut out = Vec::new();

    for b in bwps {
        let redcap = b.owner == BwpOwner::RedCap;
        let f = b.release17_features;
        if redcap && b.prb_range.width() > max_prbs {
            out.push(Violation {
                rule: RuleId::ExceedsCapability,
                owner: b.owner,
                prb_ranges: vec![b.prb_range],
                detail: format!(
                    "{} BWP spans {} PRBs, device supports {max_prbs} ({} MHz at {} kHz)",
                    b.direction,
                    b.prb_range.width(),
                    profile.max_bandwidth_mhz,
                    carrier.scs_khz
                ),
            });
        }
        if b.direction == Direction::DL {
            let has_ssb = b.contains_ssb_coreset0 && b.prb_range.contains(&anchor);
            if !has_ssb && !(redcap && f.dl_bwp_without_ssb_allowed) {
                out.push(Violation {
                    rule: RuleId::DlMissingSsb,
                    owner: b.owner,
                    prb_ranges: vec![b.prb_range, anchor],
                    detail: "DL initial BWP does not contain SSB and CORESET#0".into(),
                });
            }
        }
        if b.direction == Direction::UL
            && b.pucch_hopping == PucchHopping::Disabled
            && !(redcap && f.hopping_disable_allowed)
        {
            out.push(Violation {
                rule: RuleId::HoppingDisabled,
                owner: b.owner,
                prb_ranges: vec![b.prb_range],
                detail: "PUCCH frequency hopping disabled on an initial UL BWP".into(),
            });
        }
        if redcap && !f.separate_initial_bwp {
            let shared = bwps
                .iter()
                .any(|o| o.owner == BwpOwner::RegularNr && o.direction == b.direction && o.prb_range == b.prb_range);
            if !shared {
                out.push(Violation {
                    rule: RuleId::SeparateBwpNotAllowed,
                    owner: b.owner,
                    prb_ranges: vec![b.prb_range],
                    detail: format!("separate RedCap {} initial BWP not configurable", b.direction),
                });
            }
        }
    }

    if carrier.duplex_mode == DuplexMode::Tdd {
        for owner in [BwpOwner::RegularNr, BwpOwner::RedCap] {
            let ul = bwps.iter().filter(|b| b.owner == owner && b.direction == Direction::UL);
            for u in ul {
                for d in bwps.iter().filter(|b| b.owner == owner && b.direction == Direction::DL) {
                    if u.prb_range.center_x2() != d.prb_range.center_x2() {
                        out.push(Violation {
                            rule: RuleId::TddCenterMismatch,
                            owner,
                            prb_ranges: vec![u.prb_range, d.prb_range],
                            detail: "UL and DL initial BWP centers differ in TDD".into(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Fragmentation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FragReport {
    pub largest_contiguous_prbs: u32,
    pub free_prbs_total: u32,
    /// `1 − largest / free`, zero when nothing is free.
    pub fragmentation_ratio: f64,
}

/// Contiguous PUSCH space left between PUCCH blocks. Overlapping blocks are
/// merged first.
pub fn pusch_fragmentation(carrier: &CarrierLayout, pucch_blocks: &[PrbRange]) -> Result<FragReport> {
    let n = carrier.n_prb;
    if n == 0 {
        return invalid("carrier layout", "n_prb must be positive");
    }
    for b in pucch_blocks {
        b.check_within(n)?;
    }
    let mut blocks = pucch_blocks.to_vec();
    blocks.sort_unstable();
    let mut merged: Vec<PrbRange> = Vec::with_capacity(blocks.len());
    for b in blocks {
        match merged.last_mut() {
            Some(m) if b.first <= m.last + 1 => m.last = m.last.max(b.last),
            _ => merged.push(b),
        }
    }

    let mut free = 0;
    let mut largest = 0;
    let mut cursor = 0u32;
    for m in &merged {
        let gap = m.first - cursor;
        free += gap;
        largest = largest.max(gap);
        cursor = m.last + 1;
    }
    let tail = n - cursor;
    free += tail;
    largest = largest.max(tail);

    let ratio = if free == 0 {
        0.0
    } else {
        1.0 - f64::from(largest) / f64::from(free)
    };
    Ok(FragReport {
        largest_contiguous_prbs: largest,
        free_prbs_total: free,
        fragmentation_ratio: ratio,
    })
}

// ---------------------------------------------------------------------------
// Planner
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerOptions {
    /// PUCCH size at each edge (per hop), in PRBs.
    pub pucch_prbs_per_edge: u32,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        PlannerOptions { pucch_prbs_per_edge: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BwpPlan {
    pub regular_ul: BwpConfig,
    pub regular_dl: BwpConfig,
    pub redcap_ul: BwpConfig,
    pub redcap_dl: BwpConfig,
    /// RedCap devices reuse the regular initial BWPs.
    pub shared: bool,
    pub pucch_blocks: Vec<PrbRange>,
    pub frag: FragReport,
}

fn edge_blocks(range: PrbRange, k: u32) -> Vec<PrbRange> {
    let k = k.min(range.width());
    vec![
        PrbRange::starting_at(range.first, k),
        PrbRange::starting_at(range.last + 1 - k, k),
    ]
}

/// PUCCH blocks of a RedCap UL BWP: both BWP edges with hopping, otherwise
/// the BWP edge closest to the carrier edge.
fn redcap_pucch(carrier: &CarrierLayout, ul: PrbRange, hopping: PucchHopping, k: u32) -> Vec<PrbRange> {
    let mut both = edge_blocks(ul, k);
    match hopping {
        PucchHopping::EnabledEdgeHopping => both,
        PucchHopping::Disabled => {
            let low_gap = ul.first;
            let high_gap = carrier.n_prb - 1 - ul.last;
            if low_gap <= high_gap {
                both.truncate(1);
                both
            } else {
                vec![both[1]]
            }
        }
    }
}

fn candidate_starts(carrier: &CarrierLayout, width: u32) -> Vec<u32> {
    let n = carrier.n_prb;
    let max_start = n - width;
    let centered_on = |c2: u32| -> u32 {
        let s = (i64::from(c2) + 1 - i64::from(width)) / 2;
        s.clamp(0, i64::from(max_start)) as u32
    };
    let mut v = vec![
        0,
        max_start,
        centered_on(carrier.anchor().center_x2()),
        centered_on(carrier.full().center_x2()),
    ];
    v.sort_unstable();
    v.dedup();
    v
}

/// Searches edge, SSB-centered and carrier-centered RedCap BWP placements
/// (plus sharing the regular initial BWPs) for the layout with the lowest
/// PUSCH fragmentation that breaks no rule under `features`.
///
/// Ties prefer the lower UL start, then the lower DL start, then disabled
/// hopping.
pub fn plan_redcap_bwp(
    carrier: &CarrierLayout,
    profile: &CapabilityProfile,
    features: Release17Features,
    options: &PlannerOptions,
) -> Result<BwpPlan> {
    carrier.validate()?;
    if !profile.is_redcap {
        return invalid("BWP planner", "profile is not a RedCap profile");
    }
    if options.pucch_prbs_per_edge == 0 {
        return invalid("BWP planner", "pucch_prbs_per_edge must be positive");
    }
    let k = options.pucch_prbs_per_edge;
    let width = prbs_within_bandwidth(carrier.frequency_range, carrier.scs_khz, profile.max_bandwidth_mhz)?.min(carrier.n_prb);
    let full = carrier.full();
    let anchor = carrier.anchor();

    let regular_ul = BwpConfig {
        owner: BwpOwner::RegularNr,
        direction: Direction::UL,
        prb_range: full,
        pucch_hopping: PucchHopping::EnabledEdgeHopping,
        contains_ssb_coreset0: false,
        release17_features: Release17Features::default(),
    };
    let regular_dl = BwpConfig {
        direction: Direction::DL,
        contains_ssb_coreset0: true,
        ..regular_ul.clone()
    };
    let regular_pucch = edge_blocks(full, k);

    let mut candidates: Vec<(PrbRange, PrbRange, PucchHopping, bool)> = vec![(full, full, PucchHopping::EnabledEdgeHopping, true)];
    let starts = candidate_starts(carrier, width);
    for &u in &starts {
        for &d in &starts {
            for h in [PucchHopping::EnabledEdgeHopping, PucchHopping::Disabled] {
                candidates.push((PrbRange::starting_at(u, width), PrbRange::starting_at(d, width), h, false));
            }
        }
    }

    let mut best: Option<(BwpPlan, (f64, u32, u32, bool))> = None;
    let mut binding: Vec<RuleId> = Vec::new();
    for (ul, dl, hopping, shared) in candidates {
        let redcap_ul = BwpConfig {
            owner: BwpOwner::RedCap,
            direction: Direction::UL,
            prb_range: ul,
            pucch_hopping: hopping,
            contains_ssb_coreset0: false,
            release17_features: features,
        };
        let redcap_dl = BwpConfig {
            direction: Direction::DL,
            prb_range: dl,
            contains_ssb_coreset0: dl.contains(&anchor),
            ..redcap_ul.clone()
        };
        let layout = [regular_ul.clone(), regular_dl.clone(), redcap_ul.clone(), redcap_dl.clone()];
        let violations = validate_layout(carrier, &layout, profile)?;
        if !violations.is_empty() {
            binding.extend(violations.iter().map(|v| v.rule));
            continue;
        }
        let mut pucch = regular_pucch.clone();
        if !shared {
            pucch.extend(redcap_pucch(carrier, ul, hopping, k));
        }
        let frag = pusch_fragmentation(carrier, &pucch)?;
        let key = (
            frag.fragmentation_ratio,
            ul.first,
            dl.first,
            hopping == PucchHopping::EnabledEdgeHopping,
        );
        let better = match &best {
            None => true,
            Some((_, bk)) => {
                key.0
                    .total_cmp(&bk.0)
                    .then(key.1.cmp(&bk.1))
                    .then(key.2.cmp(&bk.2))
                    .then(key.3.cmp(&bk.3))
                    .is_lt()
            }
        };
        if better {
            pucch.sort_unstable();
            pucch.dedup();
            best = Some((
                BwpPlan {
                    regular_ul: regular_ul.clone(),
                    regular_dl: regular_dl.clone(),
                    redcap_ul,
                    redcap_dl,
                    shared,
                    pucch_blocks: pucch,
                    frag,
                },
                key,
            ));
        }
    }
    match best {
        Some((plan, _)) => Ok(plan),
        None => {
            binding.sort_unstable();
            binding.dedup();
            Err(Error::Infeasible { binding })
        }
    }
}

/// Text rendering of a plan, one row per resource, `cols` characters wide.
pub fn render_grid(carrier: &CarrierLayout, plan: &BwpPlan, cols: u32) -> String {
    let cols = cols.clamp(1, carrier.n_prb);
    let per = carrier.n_prb.div_ceil(cols);
    let row = |label: &str, ranges: &[PrbRange], mark: char| -> String {
        let cells: String = (0..cols)
            .map(|c| {
                let lo = c * per;
                let hi = ((c + 1) * per).min(carrier.n_prb);
                if ranges.iter().any(|r| r.first < hi && r.last >= lo) {
                    mark
                } else {
                    '.'
                }
            })
            .collect();
        format!("{label:<10}|{cells}|\n")
    };
    let mut s = format!("PRB 0..{} ({per} PRB per column)\n", carrier.n_prb - 1);
    s += &row("SSB", &[carrier.ssb_prb_range], 'S');
    s += &row("CORESET0", &[carrier.coreset0_prb_range], 'C');
    s += &row("NR UL/DL", &[plan.regular_ul.prb_range], '=');
    s += &row("RedCap DL", &[plan.redcap_dl.prb_range], 'D');
    s += &row("RedCap UL", &[plan.redcap_ul.prb_range], 'U');
    s += &row("PUCCH", &plan.pucch_blocks, 'P');
    s
}
