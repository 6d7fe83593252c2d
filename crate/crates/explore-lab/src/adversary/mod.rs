//! Adaptive gadget worlds. The graph is committed lazily: every vertex the
//! agent has seen is fixed, everything else is decided as late as possible.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::graph::WeightedGraph;

mod log;
mod top;
mod tour;
mod wiring;
mod world;

pub use log::{LogEntry, ResolutionLog};
pub use world::{AdversaryWorld, BlockKind, BlockSummary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Simple,
    Rec,
    Chain,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::Simple, Topology::Rec, Topology::Chain];

    pub fn name(self) -> &'static str {
        match self {
            Topology::Simple => "simple",
            Topology::Rec => "rec",
            Topology::Chain => "chain",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Topology {
    type Err = AdversaryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "simple" => Ok(Topology::Simple),
            "rec" => Ok(Topology::Rec),
            "chain" => Ok(Topology::Chain),
            _ => Err(AdversaryError::InvalidParams(format!("unknown topology `{s}`"))),
        }
    }
}

/// Construction parameters. `levels` is the top level `N`; it is always 0
/// for `Simple`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub topology: Topology,
    pub x: u64,
    pub y: u64,
    #[serde(rename = "N")]
    pub levels: u32,
}

impl Params {
    pub fn simple(x: u64) -> Self {
        Params {
            topology: Topology::Simple,
            x,
            y: 0,
            levels: 0,
        }
    }

    pub fn rec(x: u64, y: u64, levels: u32) -> Self {
        Params {
            topology: Topology::Rec,
            x,
            y,
            levels,
        }
    }

    /// Chain with the default `y = x/2`.
    pub fn chain(x: u64, levels: u32) -> Self {
        Params {
            topology: Topology::Chain,
            x,
            y: x / 2,
            levels,
        }
    }

    /// The default `y` of a topology: 0, 0 and `x/2`.
    pub fn default_y(topology: Topology, x: u64) -> u64 {
        match topology {
            Topology::Chain => x / 2,
            _ => 0,
        }
    }

    pub fn validate(&self) -> Result<(), AdversaryError> {
        let bad = |m: String| Err(AdversaryError::InvalidParams(m));
        if self.x < 2 {
            return bad(format!("x must be at least 2, got {}", self.x));
        }
        if self.x > 1 << 20 {
            return bad(format!("x = {} is too large to materialize", self.x));
        }
        if self.y > self.x / 2 {
            return bad(format!("y must be at most floor(x/2) = {}, got {}", self.x / 2, self.y));
        }
        match self.topology {
            Topology::Simple if self.levels != 0 || self.y != 0 => bad("simple takes neither levels nor y".into()),
            Topology::Chain if !self.x.is_multiple_of(2) => bad(format!("chain needs even x, got {}", self.x)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(x={}, y={}, N={})", self.topology, self.x, self.y, self.levels)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("role already resolved: {0}")]
    RoleAlreadyResolved(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("world inconsistency: {0}")]
    Inconsistent(String),
}

/// Which side of a block becomes the head once its quota is reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// The side the agent is on is the head side.
    CurrentIsHead,
    /// The side the agent is on becomes the tail side.
    CurrentIsTail,
}

/// The head/tail rule. `between` counts the units strictly between the
/// current one and the start (level 0), or the units from the current one
/// up to but excluding the start (higher levels). At the top level the
/// current side is always the head.
pub fn classify_head_tail(between: u64, y: u64, top_level: bool) -> Orientation {
    if top_level || between >= y {
        Orientation::CurrentIsHead
    } else {
        Orientation::CurrentIsTail
    }
}

/// The role of a weight-`e_i` edge at a head vertex, in the order the agent
/// takes them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PortRole {
    Return,
    Skip,
    Backbone,
}

/// Assigns roles to the three heavy edges of a head vertex in order of use.
#[derive(Clone, Debug, Default)]
pub struct HeadPorts {
    taken: Vec<u32>,
}

impl HeadPorts {
    pub const ORDER: [PortRole; 3] = [PortRole::Return, PortRole::Skip, PortRole::Backbone];

    /// Resolves the edge identified by `edge` (any stable key, e.g. the far
    /// endpoint id). Taking an edge twice is an error.
    pub fn resolve(&mut self, edge: u32) -> Result<PortRole, AdversaryError> {
        if self.taken.contains(&edge) {
            return Err(AdversaryError::RoleAlreadyResolved(format!("edge {edge}")));
        }
        let role = *Self::ORDER
            .get(self.taken.len())
            .ok_or_else(|| AdversaryError::RoleAlreadyResolved("all three roles are taken".into()))?;
        self.taken.push(edge);
        Ok(role)
    }
}

/// Every weight-0 edge becomes weight 1.
pub fn weight_lift(g: &WeightedGraph) -> WeightedGraph {
    g.map_weights(|w| if w == 0 { 1 } else { w })
}
