//! JSON reports emitted with `--json`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeqReport {
    /// Rank of the first term (0-based).
    pub from: String,
    pub count: usize,
    pub terms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelEntry {
    pub id: usize,
    pub representative: String,
    pub continuations: String,
    pub terms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub classes: usize,
    pub bound: usize,
    pub pair_states: usize,
    pub entries: Vec<KernelEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapsReport {
    pub factor: String,
    pub horizon: usize,
    /// 1-based positions of the occurrences.
    pub positions: Vec<usize>,
    pub gaps: Vec<usize>,
    pub max_gap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityVerdicts {
    pub upper_bound: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub prefix: usize,
    pub n: Vec<usize>,
    pub p: Vec<u64>,
    /// `p(n)/n²` for each `n`.
    pub ratios: Vec<f64>,
    pub exactness_horizon: usize,
    pub constant: f64,
    pub doubling_violations: Vec<usize>,
    pub verdicts: ComplexityVerdicts,
    pub reference_classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessVerdicts {
    pub language: String,
    pub embedding: String,
    pub runs: String,
    pub exponent: String,
    pub overall: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub prefix: usize,
    pub n: Vec<usize>,
    pub p_w: Vec<u64>,
    pub p_v: Vec<u64>,
    pub run_bound: usize,
    pub exponent: f64,
    pub exponent_range: (usize, usize),
    pub exponent_threshold: f64,
    pub verdicts: WitnessVerdicts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub prefix: usize,
    pub n: Vec<usize>,
    pub p: Vec<u64>,
    pub ratios: Vec<f64>,
    pub growth: f64,
    pub threshold: f64,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinomialReport {
    pub count: usize,
    pub bits: String,
    pub members: Vec<usize>,
    pub growth: Option<GrowthReport>,
}
