//! JSON and CSV report shapes. Field names here are the public format.

use prodset_core::auxgraph::{AuxGraph, GraphMode};
use prodset_core::extremal::{ExtremalResult, LucasCountReport};
use prodset_core::polyseq::{Witness, WindowStats};
use prodset_core::productset::Element;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub universe_max: u64,
    pub set_size: usize,
    pub max_count: usize,
    pub witness: Vec<u64>,
}

impl From<&ExtremalResult> for ExtremalReport {
    fn from(r: &ExtremalResult) -> Self {
        ExtremalReport {
            universe_max: r.universe_max,
            set_size: r.set_size,
            max_count: r.max_count,
            witness: r.witness.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MemberRow {
    pub value: String,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LucasBoundReport {
    pub sequence: String,
    pub set: String,
    pub set_size: usize,
    pub count: usize,
    pub bound: usize,
    pub ok: bool,
    pub high_index_count: usize,
    pub high_index_bound: usize,
    pub high_index_ok: bool,
    pub members: Vec<MemberRow>,
}

impl LucasBoundReport {
    pub fn new(sequence: String, set: String, r: &LucasCountReport) -> Self {
        LucasBoundReport {
            sequence,
            set,
            set_size: r.set_size,
            count: r.count,
            bound: r.bound,
            ok: r.ok,
            high_index_count: r.high_index_count,
            high_index_bound: r.high_index_bound,
            high_index_ok: r.high_index_ok,
            members: r
                .members
                .iter()
                .map(|(v, i)| MemberRow {
                    value: v.to_string(),
                    index: *i,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    /// Base-set elements along the cycle.
    pub vertices: Vec<String>,
    /// Represented values on the cycle's edges.
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub sequence: String,
    pub mode: &'static str,
    pub vertices: usize,
    pub edges: usize,
    pub self_loops: usize,
    pub self_loop_values: Vec<String>,
    pub components: usize,
    pub acyclic: bool,
    pub forest_bound_holds: bool,
    pub tree_bound_holds: bool,
    pub cycle: Option<CycleReport>,
}

pub fn mode_name(mode: GraphMode) -> &'static str {
    match mode {
        GraphMode::OneClass => "one",
        GraphMode::TwoClass => "two",
    }
}

impl GraphReport {
    pub fn new<T: Element>(sequence: String, g: &AuxGraph<T>) -> Self {
        let r = g.edge_bound_report();
        let cycle = g.find_cycle().map(|c| CycleReport {
            vertices: c.vertices.iter().map(|&v| g.vertex_element(v).to_string()).collect(),
            values: c.edges.iter().map(|&e| g.edges()[e].value.to_string()).collect(),
        });
        GraphReport {
            sequence,
            mode: mode_name(g.mode()),
            vertices: r.vertices,
            edges: r.edges,
            self_loops: r.self_loops,
            self_loop_values: g.self_loop_values().iter().map(|v| v.to_string()).collect(),
            components: r.components,
            acyclic: r.acyclic,
            forest_bound_holds: r.forest_bound_holds,
            tree_bound_holds: r.tree_bound_holds,
            cycle,
        }
    }
}

/// `b1,b2,value` with a header row.
pub fn edges_csv<T: Element>(g: &AuxGraph<T>) -> String {
    let mut out = String::from("b1,b2,value\n");
    for e in g.edges() {
        out.push_str(&format!(
            "{},{},{}\n",
            g.vertex_element(e.left),
            g.vertex_element(e.right),
            e.value
        ));
    }
    out
}

/// `i,value,largest_prime_factor,qualifies` with a header row; the largest
/// prime factor of 1 is left empty.
pub fn window_csv(s: &WindowStats) -> String {
    let mut out = String::from("i,value,largest_prime_factor,qualifies\n");
    for t in &s.records {
        let lpf = t
            .largest_prime_factor
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_default();
        out.push_str(&format!("{},{},{},{}\n", t.i, t.value, lpf, t.qualifies));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidueReport {
    pub a: String,
    #[serde(rename = "M")]
    pub modulus: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowSummary {
    pub poly: String,
    pub r: u64,
    #[serde(rename = "R")]
    pub window: u64,
    pub filter: &'static str,
    pub residue: Option<ResidueReport>,
    pub content: String,
    pub terms: usize,
    pub above_count: usize,
    pub mid_count: usize,
    pub qualifying_count: usize,
    pub log_smooth: f64,
    pub above_ratio: f64,
    pub linear_far_target: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessTermRow {
    pub i: u64,
    pub value: String,
    pub primes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub case: u8,
    #[serde(rename = "R")]
    pub window: u64,
    pub r: u64,
    pub gamma: String,
    pub degree: usize,
    pub k: usize,
    #[serde(rename = "B_lower_bound")]
    pub b_lower_bound: usize,
    pub max_prime_degree: usize,
    pub fresh_primes_verified: bool,
    #[serde(rename = "A")]
    pub primes: Vec<String>,
    #[serde(rename = "C")]
    pub terms: Vec<WitnessTermRow>,
    /// Window positions `i` of the cover, in cover order.
    #[serde(rename = "C_prime")]
    pub cover: Vec<u64>,
}

impl From<&Witness> for WitnessReport {
    fn from(w: &Witness) -> Self {
        WitnessReport {
            case: w.case.number(),
            window: w.window,
            r: w.r,
            gamma: w.gamma.to_string(),
            degree: w.degree,
            k: w.k,
            b_lower_bound: w.b_lower_bound,
            max_prime_degree: w.max_prime_degree,
            fresh_primes_verified: w.has_fresh_primes(),
            primes: w.primes.iter().map(ToString::to_string).collect(),
            terms: w
                .terms
                .iter()
                .map(|t| WitnessTermRow {
                    i: t.i,
                    value: t.value.to_string(),
                    primes: t.qualifying_primes.iter().map(ToString::to_string).collect(),
                })
                .collect(),
            cover: w.cover_terms().map(|t| t.i).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub a_count: usize,
    pub b_count: usize,
    pub degree_bound: usize,
    pub k: usize,
    pub sequence: Vec<String>,
    pub verified: bool,
    /// `k · n >= |B|`.
    pub bound_holds: bool,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
