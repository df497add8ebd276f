//! The plan file format: one JSON object with a fixed field order.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "machine_size": 2,
//!   "target": "(a1 a2)",
//!   "convention": "...",
//!   "outsiders": ["x1","x2"],
//!   "moves": [
//!     ["a1","x1"],
//!     ["a2","x2"]
//!   ],
//!   "metadata": {"solver":"keeler2","step_count":2,"lower_bound":null}
//! }
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::machine::MachineMove;
use crate::oracle::RuleSet;
use crate::perm::{Element, ParseError, Permutation};

pub const SCHEMA_VERSION: u32 = 1;

pub const CONVENTION: &str = "moves are chronological; a move sends the mind in each seat to the next seat and the last seat's mind to the first; the plan undoes target";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub solver: String,
    pub step_count: usize,
    pub lower_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDocument {
    pub schema_version: u32,
    pub machine_size: usize,
    pub target: String,
    #[serde(default = "default_convention")]
    pub convention: String,
    pub outsiders: Vec<Element>,
    pub moves: Vec<Vec<Element>>,
    pub metadata: Metadata,
}

fn default_convention() -> String {
    CONVENTION.to_string()
}

fn j<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data always serializes")
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed plan document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    UnsupportedSchema(u32),
    #[error("move {move_index} has {found} seats, expected {expected}")]
    WrongSeatCount { move_index: usize, expected: usize, found: usize },
    #[error("metadata claims {claimed} steps but the plan has {actual}")]
    StepCountMismatch { claimed: usize, actual: usize },
    #[error("bad target: {0}")]
    Target(#[from] ParseError),
}

impl PlanDocument {
    pub fn new(
        machine_size: usize,
        target: &Permutation,
        outsiders: Vec<Element>,
        moves: &[MachineMove],
        solver: &str,
        lower_bound: Option<usize>,
    ) -> Self {
        PlanDocument {
            schema_version: SCHEMA_VERSION,
            machine_size,
            target: target.to_string(),
            convention: CONVENTION.to_string(),
            outsiders,
            moves: moves.iter().map(|m| m.seats().to_vec()).collect(),
            metadata: Metadata {
                solver: solver.to_string(),
                step_count: moves.len(),
                lower_bound,
            },
        }
    }

    /// Parses and checks a document. The target is re-rendered in
    /// canonical form, so serializing the result is a normalization pass.
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let mut doc: PlanDocument = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::UnsupportedSchema(doc.schema_version));
        }
        for (i, seats) in doc.moves.iter().enumerate() {
            if seats.len() != doc.machine_size {
                return Err(DocumentError::WrongSeatCount {
                    move_index: i,
                    expected: doc.machine_size,
                    found: seats.len(),
                });
            }
        }
        if doc.metadata.step_count != doc.moves.len() {
            return Err(DocumentError::StepCountMismatch {
                claimed: doc.metadata.step_count,
                actual: doc.moves.len(),
            });
        }
        doc.target = doc.target_permutation()?.to_string();
        Ok(doc)
    }

    /// Pretty JSON with one move per line.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        out += &format!("  \"schema_version\": {},\n", self.schema_version);
        out += &format!("  \"machine_size\": {},\n", self.machine_size);
        out += &format!("  \"target\": {},\n", j(&self.target));
        out += &format!("  \"convention\": {},\n", j(&self.convention));
        out += &format!("  \"outsiders\": {},\n", j(&self.outsiders));
        if self.moves.is_empty() {
            out += "  \"moves\": [],\n";
        } else {
            let rows: Vec<String> = self.moves.iter().map(|m| format!("    {}", j(m))).collect();
            out += &format!("  \"moves\": [\n{}\n  ],\n", rows.join(",\n"));
        }
        out += &format!("  \"metadata\": {}\n}}\n", j(&self.metadata));
        out
    }

    pub fn target_permutation(&self) -> Result<Permutation, ParseError> {
        self.target.parse()
    }

    pub fn machine_moves(&self) -> Vec<MachineMove> {
        self.moves.iter().map(|s| MachineMove::new(s.clone())).collect()
    }

    /// Full rules for this machine size with the declared outsiders.
    pub fn rules(&self) -> RuleSet {
        RuleSet::new(self.machine_size, self.outsiders.clone())
    }
}
