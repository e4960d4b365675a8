//! Instance documents, report rendering and the built-in fixture.
//!
//! Documents are JSON with a strict schema. The canonical form has sorted
//! keys, two-space indentation, and rankings written on one line; parsing a
//! canonical document and serializing it again reproduces the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::election::DeviationTable;
use crate::equilibrium::{Deviation, EquilibriumRecord};
use crate::model::{
    single_peak_violation, validate_instance, Actor, Instance, Outcome, Party, Policy, Profile,
    RawAttraction, RawInstance, RawParty, RawVoter, ValidationError,
};
use crate::preferences::{
    check_cross_side_agreement, from_common_shape, from_symmetric_utility, CrossSideViolation,
    ShapeError,
};
use crate::search::{has_fixed_participation, CampaignReport, Violation};

/// The counterexample game: 7 policies, ideals x3 and x5, four voters.
pub const PAPER_EXAMPLE: &str = include_str!("../fixtures/paper_example.json");

pub const BUILTINS: [&str; 1] = ["paper-example"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub parties: PartiesDocument,
    pub policies: i64,
    pub voters: Vec<VoterDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartiesDocument {
    #[serde(rename = "A")]
    pub a: PartyDocument,
    #[serde(rename = "B")]
    pub b: PartyDocument,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartyDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construct: Option<Construct>,
    pub ideal: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoterDocument {
    pub attraction: [i64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construct: Option<Construct>,
    pub ideal: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<Vec<i64>>>,
}

/// A ranking given by a utility constructor instead of explicit tiers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum Construct {
    Symmetric,
    /// Keys are signed displacements from the ideal, e.g. `"-1"`.
    CommonShape {
        shape: BTreeMap<String, f64>,
    },
}

/// A syntax or schema error, with the 1-based position serde reports.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let full = e.to_string();
        // serde_json appends " at line L column C"; the position is kept separately
        let message = match full.rfind(" at line ") {
            Some(i) => full[..i].to_string(),
            None => full,
        };
        ParseError {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DocumentError {
    #[error("{actor}: give exactly one of `ranking` or `construct`")]
    RankingSpec { actor: Actor },
    #[error("{actor}: shape key `{key}` is not a signed integer")]
    ShapeKey { actor: Actor, key: String },
    #[error("{actor}: {source}")]
    Shape { actor: Actor, source: ShapeError },
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum InstanceError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid document: {0}")]
    Document(#[from] DocumentError),
    #[error("invalid instance [{code}]: {0}", code = .0.code())]
    Invalid(#[from] ValidationError),
}

/// Structural parse only; semantic checks happen in [`InstanceDocument::to_raw`]
/// and [`validate_instance`].
pub fn parse_instance(text: &str) -> Result<InstanceDocument, ParseError> {
    Ok(serde_json::from_str(text)?)
}

/// Parse, expand constructors and validate.
pub fn load_instance(text: &str) -> Result<Instance, InstanceError> {
    let raw = parse_instance(text)?.to_raw()?;
    Ok(validate_instance(&raw)?)
}

fn tiers_of(order: &crate::model::WeakOrder) -> Vec<Vec<i64>> {
    order
        .tiers()
        .iter()
        .map(|t| t.iter().map(|p| p.index() as i64).collect())
        .collect()
}

fn expand(
    actor: Actor,
    policies: i64,
    ideal: i64,
    ranking: &Option<Vec<Vec<i64>>>,
    construct: &Option<Construct>,
) -> Result<Vec<Vec<i64>>, DocumentError> {
    let construct = match (ranking, construct) {
        (Some(r), None) => return Ok(r.clone()),
        (None, Some(c)) => c,
        _ => return Err(DocumentError::RankingSpec { actor }),
    };
    // An out-of-range size or ideal is reported by validation, which checks
    // both before looking at the ranking.
    if policies < 2 || ideal < 1 || ideal > policies {
        return Ok(Vec::new());
    }
    let (m, peak) = (policies as usize, Policy::new(ideal as usize));
    let order = match construct {
        Construct::Symmetric => from_symmetric_utility(m, peak),
        Construct::CommonShape { shape } => {
            let parsed = shape
                .iter()
                .map(|(k, v)| {
                    k.trim()
                        .parse::<i64>()
                        .map(|k| (k, *v))
                        .map_err(|_| DocumentError::ShapeKey {
                            actor,
                            key: k.clone(),
                        })
                })
                .collect::<Result<BTreeMap<i64, f64>, _>>()?;
            from_common_shape(m, peak, &parsed)
                .map_err(|source| DocumentError::Shape { actor, source })?
        }
    };
    Ok(tiers_of(&order))
}

impl InstanceDocument {
    /// Expands constructors into explicit rankings.
    pub fn to_raw(&self) -> Result<RawInstance, DocumentError> {
        let party = |p: Party, d: &PartyDocument| -> Result<RawParty, DocumentError> {
            Ok(RawParty {
                ideal: d.ideal,
                ranking: expand(
                    Actor::Party(p),
                    self.policies,
                    d.ideal,
                    &d.ranking,
                    &d.construct,
                )?,
            })
        };
        let voters = self
            .voters
            .iter()
            .enumerate()
            .map(|(i, v)| {
                Ok(RawVoter {
                    ideal: v.ideal,
                    ranking: expand(
                        Actor::Voter(i + 1),
                        self.policies,
                        v.ideal,
                        &v.ranking,
                        &v.construct,
                    )?,
                    attraction: RawAttraction::Bounds(v.attraction[0], v.attraction[1]),
                })
            })
            .collect::<Result<_, DocumentError>>()?;
        Ok(RawInstance {
            policies: self.policies,
            party_a: party(Party::A, &self.parties.a)?,
            party_b: party(Party::B, &self.parties.b)?,
            voters,
        })
    }

    /// Explicit-ranking document for a validated instance.
    pub fn from_instance(inst: &Instance) -> Self {
        let party = |p: Party| {
            let spec = inst.party(p);
            PartyDocument {
                construct: None,
                ideal: spec.ideal().index() as i64,
                ranking: Some(tiers_of(spec.order())),
            }
        };
        InstanceDocument {
            parties: PartiesDocument {
                a: party(Party::A),
                b: party(Party::B),
            },
            policies: inst.size() as i64,
            voters: inst
                .voters()
                .iter()
                .map(|v| VoterDocument {
                    attraction: [
                        v.attraction().lo.index() as i64,
                        v.attraction().hi.index() as i64,
                    ],
                    construct: None,
                    ideal: v.ideal().index() as i64,
                    ranking: Some(tiers_of(v.order())),
                })
                .collect(),
        }
    }

    pub fn to_canonical(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("documents serialize"))
    }
}

pub fn serialize_instance(inst: &Instance) -> String {
    InstanceDocument::from_instance(inst).to_canonical()
}

/// The built-in counterexample as raw data, written out independently of
/// the JSON fixture.
pub fn paper_example_raw() -> RawInstance {
    let strict = |r: &[i64]| r.iter().map(|&j| vec![j]).collect::<Vec<_>>();
    RawInstance {
        policies: 7,
        party_a: RawParty {
            ideal: 3,
            ranking: strict(&[3, 4, 5, 6, 2, 1, 7]),
        },
        party_b: RawParty {
            ideal: 5,
            ranking: strict(&[5, 4, 3, 2, 6, 1, 7]),
        },
        voters: vec![
            RawVoter {
                ideal: 1,
                ranking: strict(&[1, 2, 3, 4, 5, 6, 7]),
                attraction: RawAttraction::Bounds(1, 2),
            },
            RawVoter {
                ideal: 2,
                ranking: strict(&[2, 1, 3, 4, 5, 6, 7]),
                attraction: RawAttraction::Bounds(1, 3),
            },
            RawVoter {
                ideal: 6,
                ranking: strict(&[6, 5, 7, 4, 3, 2, 1]),
                attraction: RawAttraction::Bounds(5, 7),
            },
            RawVoter {
                ideal: 7,
                ranking: strict(&[7, 6, 5, 4, 3, 2, 1]),
                attraction: RawAttraction::Bounds(6, 7),
            },
        ],
    }
}

pub fn paper_example() -> Instance {
    validate_instance(&paper_example_raw()).expect("the built-in example is valid")
}

pub fn builtin(name: &str) -> Option<Instance> {
    match name {
        "paper-example" => {
            Some(load_instance(PAPER_EXAMPLE).expect("the shipped fixture is valid"))
        }
        _ => None,
    }
}

/// Pretty JSON with sorted keys where arrays of scalars (or of arrays of
/// scalars) stay on one line.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| {
            !matches!(i, Value::Array(_) | Value::Object(_))
                || matches!(i, Value::Array(inner) if inner.iter().all(is_scalar))
        }),
        _ => false,
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            // serde_json's default map is a BTreeMap, so keys come out sorted
            for (i, (k, v)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, v, indent + 1);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if !items.is_empty() && !is_flat(value) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, v, indent + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, v, indent);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

/// Something renderable in both output formats.
pub trait Report {
    fn human(&self) -> String;
    fn machine(&self) -> Value;
}

pub fn serialize_report(report: &impl Report, format: Format) -> String {
    match format {
        Format::Human => report.human(),
        Format::Machine => canonical_json(&report.machine()),
    }
}

fn outcome_row(row: &[Outcome]) -> String {
    row.iter().map(|o| o.symbol()).collect()
}

fn profile_json(p: Profile) -> Value {
    serde_json::json!([p.s.index(), p.t.index()])
}

/// Rows `g(·,t)` and `g(s,·)` laid out under policy headers.
pub fn render_deviation_table(table: &DeviationTable) -> String {
    let Profile { s, t } = table.profile;
    let m = table.against_t.len();
    let labels = [format!("g(.,{t})"), format!("g({s},.)")];
    let label_width = labels.iter().map(|l| l.len()).max().unwrap_or(0);
    let col_width = format!("x{m}").len();
    let mut out = String::new();
    let _ = write!(out, "{:label_width$} |", "");
    for j in 1..=m {
        let _ = write!(out, " {:>col_width$}", format!("x{j}"));
    }
    out.push('\n');
    let _ = writeln!(
        out,
        "{}-+{}",
        "-".repeat(label_width),
        "-".repeat((col_width + 1) * m)
    );
    for (label, row) in labels.iter().zip([&table.against_t, &table.against_s]) {
        let _ = write!(out, "{label:label_width$} |");
        for o in row.iter() {
            let _ = write!(out, " {:>col_width$}", o.symbol());
        }
        out.push('\n');
    }
    out
}

impl Report for DeviationTable {
    fn human(&self) -> String {
        render_deviation_table(self)
    }

    fn machine(&self) -> Value {
        serde_json::json!({
            "against_s": outcome_row(&self.against_s),
            "against_t": outcome_row(&self.against_t),
            "profile": profile_json(self.profile),
        })
    }
}

fn flags(rec: &EquilibriumRecord) -> String {
    let mut f = Vec::new();
    if rec.tied {
        f.push("TIED");
    }
    if rec.reversed_order {
        f.push("REVERSED");
    }
    if rec.mutual_leapfrog {
        f.push("MUTUAL-LEAPFROG");
    }
    if f.is_empty() {
        "-".to_string()
    } else {
        f.join(" ")
    }
}

fn record_json(rec: &EquilibriumRecord) -> Value {
    serde_json::json!({
        "mutual_leapfrog": rec.mutual_leapfrog,
        "outcome": rec.outcome.symbol().to_string(),
        "profile": profile_json(rec.profile),
        "reversed_order": rec.reversed_order,
        "tied": rec.tied,
    })
}

/// A classified profile, optionally with its Nash verdict.
pub struct ClassificationReport {
    pub record: EquilibriumRecord,
    pub deviation: Option<Deviation>,
    pub table: DeviationTable,
}

impl Report for ClassificationReport {
    fn human(&self) -> String {
        let mut out = format!(
            "{}  outcome {}  {}\n",
            self.record.profile,
            self.record.outcome,
            flags(&self.record)
        );
        match self.deviation {
            None => out.push_str("Nash equilibrium: yes\n"),
            Some(d) => {
                let _ = writeln!(
                    out,
                    "Nash equilibrium: no (party {} gains by moving to {})",
                    d.party, d.to
                );
            }
        }
        out.push('\n');
        out.push_str(&render_deviation_table(&self.table));
        out
    }

    fn machine(&self) -> Value {
        let mut v = record_json(&self.record);
        v["nash"] = Value::Bool(self.deviation.is_none());
        v["deviation"] = match self.deviation {
            None => Value::Null,
            Some(d) => serde_json::json!({ "party": d.party.to_string(), "to": d.to.index() }),
        };
        v["table"] = self.table.machine();
        v
    }
}

/// Every equilibrium of an instance with its deviation table.
pub struct EquilibriaReport {
    pub size: usize,
    pub ideals: (Policy, Policy),
    pub equilibria: Vec<(EquilibriumRecord, DeviationTable)>,
}

impl Report for EquilibriaReport {
    fn human(&self) -> String {
        let mut out = format!(
            "{} policies, party A ideal {}, party B ideal {}\n",
            self.size, self.ideals.0, self.ideals.1
        );
        if self.equilibria.is_empty() {
            out.push_str("no equilibria\n");
            return out;
        }
        let n = self.equilibria.len();
        let _ = writeln!(
            out,
            "{n} pure-strategy equilibri{}\n",
            if n == 1 { "um" } else { "a" }
        );
        for (rec, _) in &self.equilibria {
            let _ = writeln!(
                out,
                "{}  outcome {}  {}",
                rec.profile,
                rec.outcome,
                flags(rec)
            );
        }
        for (rec, table) in &self.equilibria {
            let _ = writeln!(out, "\ndeviations from {}:", rec.profile);
            out.push_str(&render_deviation_table(table));
        }
        out
    }

    fn machine(&self) -> Value {
        let eq: Vec<Value> = self
            .equilibria
            .iter()
            .map(|(rec, table)| {
                let mut v = record_json(rec);
                v["table"] = table.machine();
                v
            })
            .collect();
        serde_json::json!({
            "equilibria": eq,
            "ideals": [self.ideals.0.index(), self.ideals.1.index()],
            "policies": self.size,
        })
    }
}

/// Single-peakedness per actor, cross-side agreement and fixed participation.
pub struct AxiomReport {
    pub single_peaked: Vec<(Actor, Option<(Policy, Policy)>)>,
    pub cross_side: Result<(), CrossSideViolation>,
    pub fixed_participation: bool,
}

impl AxiomReport {
    pub fn new(inst: &Instance) -> Self {
        let mut single_peaked = Vec::new();
        for party in [Party::A, Party::B] {
            let spec = inst.party(party);
            single_peaked.push((
                Actor::Party(party),
                single_peak_violation(spec.order(), spec.ideal(), false),
            ));
        }
        for (i, v) in inst.voters().iter().enumerate() {
            single_peaked.push((
                Actor::Voter(i + 1),
                single_peak_violation(v.order(), v.ideal(), true),
            ));
        }
        AxiomReport {
            single_peaked,
            cross_side: check_cross_side_agreement(inst),
            fixed_participation: has_fixed_participation(inst),
        }
    }
}

impl Report for AxiomReport {
    fn human(&self) -> String {
        let mut out = String::from("single-peakedness:\n");
        for (actor, w) in &self.single_peaked {
            match w {
                None => {
                    let _ = writeln!(out, "  {actor}: pass");
                }
                Some((a, b)) => {
                    let _ = writeln!(out, "  {actor}: FAIL ({a},{b})");
                }
            }
        }
        match &self.cross_side {
            Ok(()) => out.push_str("cross-side agreement: pass\n"),
            Err(w) => {
                let _ = writeln!(out, "cross-side agreement: FAIL {w}");
            }
        }
        let _ = writeln!(out, "fixed participation: {}", self.fixed_participation);
        out
    }

    fn machine(&self) -> Value {
        let actors: Vec<Value> = self
            .single_peaked
            .iter()
            .map(|(actor, w)| {
                serde_json::json!({
                    "actor": actor.to_string(),
                    "pass": w.is_none(),
                    "witness": w.map(|(a, b)| [a.index(), b.index()]),
                })
            })
            .collect();
        let cross = match &self.cross_side {
            Ok(()) => serde_json::json!({ "pass": true, "witness": null }),
            Err(w) => serde_json::json!({
                "pass": false,
                "witness": {
                    "a": w.right_steps,
                    "b": w.left_steps,
                    "clause": w.clause.to_string(),
                },
            }),
        };
        serde_json::json!({
            "cross_side_agreement": cross,
            "fixed_participation": self.fixed_participation,
            "single_peaked": actors,
        })
    }
}

fn violation_json(v: &Violation) -> Value {
    serde_json::json!({
        "detail": v.detail,
        "instance": serde_json::to_value(InstanceDocument::from_instance(&v.instance)).expect("documents serialize"),
        "profile": v.profile.map(profile_json),
        "trial": v.trial,
    })
}

/// Violations listed in full by the human renderer.
const HUMAN_VIOLATION_LIMIT: usize = 10;

impl Report for CampaignReport {
    fn human(&self) -> String {
        let cfg = &self.config;
        let mut out = String::new();
        let _ = writeln!(out, "campaign {}", self.conjecture);
        let _ = writeln!(
            out,
            "  seed {}, m in {}..{}, n in {}..{}, party mode {}, attraction {}{}",
            cfg.seed,
            cfg.m_range.start(),
            cfg.m_range.end(),
            cfg.n_range.start(),
            cfg.n_range.end(),
            cfg.party_mode.name(),
            cfg.attraction_mode.name(),
            if cfg.inject_paper_example {
                ", built-in example injected as trial 0"
            } else {
                ""
            },
        );
        let _ = writeln!(out, "  trials:                {}", self.trials);
        let _ = writeln!(
            out,
            "  satisfying hypothesis: {}{}",
            self.qualifying,
            if self.precondition_enforced {
                ""
            } else {
                " (not enforced)"
            }
        );
        let _ = writeln!(out, "  equilibria examined:   {}", self.equilibria);
        let _ = writeln!(out, "  reversed-order:        {}", self.reversed_equilibria);
        let _ = writeln!(out, "  mutual-leapfrog:       {}", self.leapfrog_equilibria);
        let _ = writeln!(out, "  violations:            {}", self.violations.len());
        let _ = writeln!(
            out,
            "  wall clock:            {:.3}s",
            self.elapsed.as_secs_f64()
        );
        if self.qualifying == 0 && self.precondition_enforced {
            out.push_str(
                "warning: no instance satisfied the hypothesis; the campaign is vacuous\n",
            );
        }
        for v in self.violations.iter().take(HUMAN_VIOLATION_LIMIT) {
            let _ = writeln!(out, "\ntrial {}: {}", v.trial, v.detail);
            out.push_str(&serialize_instance(&v.instance));
        }
        if self.violations.len() > HUMAN_VIOLATION_LIMIT {
            let _ = writeln!(
                out,
                "\n... {} more (use --format machine for all)",
                self.violations.len() - HUMAN_VIOLATION_LIMIT
            );
        }
        out
    }

    fn machine(&self) -> Value {
        let cfg = &self.config;
        serde_json::json!({
            "config": {
                "attraction_mode": cfg.attraction_mode.name(),
                "inject_paper_example": cfg.inject_paper_example,
                "m_range": [cfg.m_range.start(), cfg.m_range.end()],
                "n_range": [cfg.n_range.start(), cfg.n_range.end()],
                "party_mode": cfg.party_mode.name(),
                "seed": cfg.seed,
            },
            "conjecture": self.conjecture.name(),
            "equilibria": self.equilibria,
            "leapfrog_equilibria": self.leapfrog_equilibria,
            "precondition_enforced": self.precondition_enforced,
            "qualifying": self.qualifying,
            "reversed_equilibria": self.reversed_equilibria,
            "trials": self.trials,
            "violations": self.violations.iter().map(violation_json).collect::<Vec<_>>(),
        })
    }
}

/// A violation as read back from a machine-format campaign report.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDocument {
    pub detail: String,
    pub instance: InstanceDocument,
    pub profile: Option<[usize; 2]>,
    pub trial: u64,
}

#[derive(Deserialize)]
struct CampaignWitnesses {
    violations: Vec<WitnessDocument>,
}

/// Extracts the witnesses of a machine-format campaign report.
pub fn parse_campaign_witnesses(text: &str) -> Result<Vec<WitnessDocument>, ParseError> {
    let c: CampaignWitnesses = serde_json::from_str(text)?;
    Ok(c.violations)
}

impl WitnessDocument {
    /// Re-validates the embedded instance into a replayable violation.
    pub fn to_violation(&self) -> Result<Violation, InstanceError> {
        let instance = validate_instance(&self.instance.to_raw()?)?;
        Ok(Violation {
            trial: self.trial,
            instance,
            profile: self.profile.map(|[s, t]| Profile::at(s, t)),
            detail: self.detail.clone(),
        })
    }
}
