//! Browser bindings. Every export takes and returns JSON text; failures come
//! back as `{"error": "..."}` so the page never sees a thrown exception.

use leapfrog_core::election::OutcomeGrid;
use leapfrog_core::equilibrium::{enumerate_with_grid, profitable_deviation};
use leapfrog_core::io::{self, AxiomReport, Report};
use leapfrog_core::search::{
    self, AttractionMode, CampaignOptions, Conjecture, GenConfig, PartyMode,
};
use leapfrog_core::{Instance, Party, Profile};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Upper bound on trials per browser campaign; the page runs on one thread.
pub const MAX_TRIALS: u64 = 200_000;

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => error(e),
    }
}

fn load(doc: &str) -> Result<Instance, String> {
    io::load_instance(doc).map_err(|e| e.to_string())
}

/// The built-in counterexample as a canonical instance document.
#[wasm_bindgen]
pub fn paper_example() -> String {
    io::PAPER_EXAMPLE.to_string()
}

/// Outcome grid (`grid[s-1][t-1]`), equilibria and axiom report.
#[wasm_bindgen]
pub fn analyze(doc: &str) -> String {
    respond(load(doc).map(|inst| {
        let grid = OutcomeGrid::new(&inst);
        let rows: Vec<String> = grid
            .rows()
            .map(|row| row.iter().map(|o| o.symbol()).collect())
            .collect();
        let equilibria: Vec<Value> = enumerate_with_grid(&inst, &grid)
            .iter()
            .map(|r| {
                json!({
                    "profile": [r.profile.s.index(), r.profile.t.index()],
                    "outcome": r.outcome.symbol().to_string(),
                    "tied": r.tied,
                    "reversed_order": r.reversed_order,
                    "mutual_leapfrog": r.mutual_leapfrog,
                })
            })
            .collect();
        json!({
            "policies": inst.size(),
            "ideals": [inst.ideal(Party::A).index(), inst.ideal(Party::B).index()],
            "grid": rows,
            "equilibria": equilibria,
            "axioms": AxiomReport::new(&inst).machine(),
        })
    }))
}

/// Both deviation rows at `(s, t)`, plus the Nash verdict.
#[wasm_bindgen]
pub fn deviation_table(doc: &str, s: usize, t: usize) -> String {
    respond(load(doc).and_then(|inst| {
        let m = inst.size();
        if !(1..=m).contains(&s) || !(1..=m).contains(&t) {
            return Err(format!("profile ({s},{t}) is outside 1..{m}"));
        }
        let p = Profile::at(s, t);
        let table = leapfrog_core::election::deviation_table(&inst, p);
        let mut v = table.machine();
        v["text"] = Value::String(io::render_deviation_table(&table));
        v["deviation"] = match profitable_deviation(&inst, p) {
            None => Value::Null,
            Some(d) => json!({ "party": d.party.to_string(), "to": d.to.index() }),
        };
        Ok(v)
    }))
}

/// Runs a seeded campaign on one thread and returns its machine-format report.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn falsify(
    conjecture: &str,
    seed: u32,
    trials: u32,
    m_lo: usize,
    m_hi: usize,
    n_lo: usize,
    n_hi: usize,
    party_mode: &str,
    attraction_mode: &str,
) -> String {
    let trials = u64::from(trials);
    let run = || -> Result<Value, String> {
        if trials > MAX_TRIALS {
            return Err(format!("at most {MAX_TRIALS} trials in the browser"));
        }
        let conjecture: Conjecture = conjecture.parse().map_err(|e| format!("{e}"))?;
        let cfg = GenConfig {
            m_range: m_lo..=m_hi,
            n_range: n_lo..=n_hi,
            party_mode: party_mode
                .parse::<PartyMode>()
                .map_err(|e| format!("{e}"))?,
            attraction_mode: attraction_mode
                .parse::<AttractionMode>()
                .map_err(|e| format!("{e}"))?,
            seed: u64::from(seed),
            inject_paper_example: false,
        };
        let report = search::falsify_with(conjecture, &cfg, trials, &CampaignOptions::default())
            .map_err(|e| e.to_string())?;
        Ok(report.machine())
    };
    respond(run())
}
