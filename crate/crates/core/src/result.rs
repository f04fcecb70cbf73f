use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::{Chain, Weight};

/// Outcome class of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Optimal,
    Infeasible,
    /// A bounding chain may exist but none with at most `k` simplices.
    NotFoundWithinBound,
    ResourceLimit,
}

impl Status {
    /// Process exit code used by the command line front end.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Optimal => 0,
            Status::Infeasible => 2,
            Status::NotFoundWithinBound => 3,
            Status::ResourceLimit => 4,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Optimal => "Optimal",
            Status::Infeasible => "Infeasible",
            Status::NotFoundWithinBound => "NotFoundWithinBound",
            Status::ResourceLimit => "ResourceLimit",
        };
        f.write_str(s)
    }
}

/// Solver counters. Fields a solver does not track stay `None` and are left
/// out of serialized output.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveStats {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states_expanded: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states_generated: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frontier_peak: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coface_degree: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_entries: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub join_pairs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sources: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_us: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    /// Meaningful only when `status` is `Optimal`.
    pub weight: Weight,
    /// Present exactly when `status` is `Optimal`.
    pub witness: Option<Chain>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn optimal(weight: Weight, witness: Chain, stats: SolveStats) -> Self {
        SolveResult {
            status: Status::Optimal,
            weight,
            witness: Some(witness),
            stats,
        }
    }

    pub fn without_solution(status: Status, stats: SolveStats) -> Self {
        SolveResult {
            status,
            weight: 0,
            witness: None,
            stats,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}
