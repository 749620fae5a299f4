//! Function-definition files and experiment configs.
//!
//! A function is given either by a named family with integer parameters,
//!   {"family": "maj", "params": [3]}
//! or by an explicit table with exact rational coordinates,
//!   {"points": [["0","0"],["1","0"]], "values": [1,-1]}.
//! Rationals are written as "num" or "num/den" strings everywhere.

use serde::{Deserialize, Serialize};

use signdeg::boolfun::{family_from_name, make_named, BooleanFunction, DomainCap};
use signdeg::rat::parse_rat;
use signdeg::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FunctionSpec {
    Named {
        family: String,
        params: Vec<usize>,
    },
    Table {
        points: Vec<Vec<String>>,
        values: Vec<i8>,
    },
}

impl FunctionSpec {
    pub fn materialize(&self, cap: DomainCap) -> Result<BooleanFunction> {
        match self {
            FunctionSpec::Named { family, params } => {
                let fam = family_from_name(family, params)?;
                make_named(&fam, cap)
            }
            FunctionSpec::Table { points, values } => {
                let pts = points
                    .iter()
                    .map(|p| p.iter().map(|s| parse_rat(s)).collect())
                    .collect::<Result<Vec<_>>>()?;
                BooleanFunction::new("table", pts, values.clone())
            }
        }
    }
}

pub fn load_function(path: &std::path::Path, cap: DomainCap) -> Result<BooleanFunction> {
    let text = std::fs::read_to_string(path)?;
    let spec: FunctionSpec =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path:?}: {e}")))?;
    spec.materialize(cap)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Text,
}

/// A reproducible experiment bundle: one command, its function inputs, the
/// parameter grid, precision, and output destination. Serializes round-trip.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub command: String,
    #[serde(default)]
    pub functions: Vec<FunctionSpec>,
    #[serde(default)]
    pub degrees: Vec<i64>,
    #[serde(default)]
    pub sizes: Vec<u64>,
    /// exact rational string, e.g. "1/64"
    #[serde(default)]
    pub precision: Option<String>,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
