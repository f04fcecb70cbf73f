//! JSON result documents.

use serde::{Deserialize, Serialize};

use crate::chain::{Chain, Weight};
use crate::error::{Error, Result};
use crate::result::{SolveResult, SolveStats};
use crate::solve::Instance;

/// A witness in the vocabulary of its instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Solution {
    /// Vertex lists of the chosen top simplices.
    Simplices(Vec<Vec<u32>>),
    /// Chosen matrix columns.
    Columns(Vec<usize>),
}

/// The serialized form of a solve. Field order is the output order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub status: String,
    pub weight: Option<Weight>,
    pub scale: Weight,
    pub solution: Option<Solution>,
    pub stats: SolveStats,
}

impl ResultDocument {
    pub fn new(result: &SolveResult, instance: &Instance, scale: Weight) -> Self {
        let solution = result.witness.as_ref().map(|w| match instance {
            Instance::Complex { slice, .. } => Solution::Simplices(
                w.iter()
                    .map(|j| slice.top()[j].vertices().to_vec())
                    .collect(),
            ),
            Instance::Matrix { .. } => Solution::Columns(w.members().to_vec()),
        });
        ResultDocument {
            status: result.status.to_string(),
            weight: result.is_optimal().then_some(result.weight),
            scale,
            solution,
            stats: result.stats.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("bad result document: {e}")))
    }

    /// The witness as a column chain of `instance`.
    pub fn witness(&self, instance: &Instance) -> Result<Option<Chain>> {
        let Some(sol) = &self.solution else {
            return Ok(None);
        };
        let chain = match (sol, instance) {
            (Solution::Simplices(list), Instance::Complex { slice, .. }) => {
                let simplices = list
                    .iter()
                    .map(|vs| crate::chain::Simplex::new(vs.clone()))
                    .collect::<Result<Vec<_>>>()?;
                slice.top_chain(&simplices)?
            }
            (Solution::Columns(cols), Instance::Matrix { matrix, .. }) => {
                if cols.iter().any(|&c| c >= matrix.cols()) {
                    return Err(Error::input("solution refers to an unknown column"));
                }
                matrix.column_chain(cols.iter().copied())
            }
            // an empty list deserializes as either variant
            (Solution::Simplices(l), Instance::Matrix { matrix, .. }) if l.is_empty() => {
                matrix.column_chain([])
            }
            (Solution::Columns(l), Instance::Complex { slice, .. }) if l.is_empty() => {
                Chain::empty(slice.dim())
            }
            _ => return Err(Error::input("solution does not match the instance kind")),
        };
        Ok(Some(chain))
    }
}
