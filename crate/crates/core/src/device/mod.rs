// SPDX-License-Identifier: Apache-2.0

//! QCCD hardware descriptions.
//!
//! A [`Topology`] lists traps, the shuttle paths between them and the
//! junctions those paths cross. [`graph::DeviceGraph`] lowers it to the static
//! slot graph used by the scheduler.

pub mod graph;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TrapId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SlotId(pub usize);

impl TrapId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl SlotId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for TrapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.0)
    }
}

impl fmt::Display for SlotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Trap {
    pub id: usize,
    pub capacity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShuttlePath {
    pub trap_a: usize,
    pub trap_b: usize,
    pub segments: usize,
    #[serde(default)]
    pub junctions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Junction {
    pub id: usize,
    /// Number of channels meeting at the junction.
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Topology {
    #[serde(default)]
    pub name: String,
    pub traps: Vec<Trap>,
    #[serde(default)]
    pub paths: Vec<ShuttlePath>,
    #[serde(default)]
    pub junctions: Vec<Junction>,
}

/// The three device families: linear chains, grids and star (fully connected)
/// layouts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TopologyFamily {
    Linear(usize),
    Grid { rows: usize, cols: usize },
    Star(usize),
}

impl fmt::Display for TopologyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyFamily::Linear(n) => write!(f, "L{n}"),
            TopologyFamily::Grid { rows, cols } => write!(f, "G{rows}x{cols}"),
            TopologyFamily::Star(n) => write!(f, "S{n}"),
        }
    }
}

impl FromStr for TopologyFamily {
    type Err = Error;

    /// Accepts `L4`, `G2x3`, `S4` (an optional `-` after the letter is allowed).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidTopology(format!("cannot parse topology family `{s}`"));
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rest = chars.as_str().trim_start_matches('-');
        match letter {
            'L' => Ok(TopologyFamily::Linear(rest.parse().map_err(|_| bad())?)),
            'S' => Ok(TopologyFamily::Star(rest.parse().map_err(|_| bad())?)),
            'G' => {
                let (r, c) = rest.split_once(['x', 'X']).ok_or_else(bad)?;
                Ok(TopologyFamily::Grid {
                    rows: r.parse().map_err(|_| bad())?,
                    cols: c.parse().map_err(|_| bad())?,
                })
            }
            _ => Err(bad()),
        }
    }
}

/// Builds one of the standard device families with a uniform trap capacity.
///
/// * `L(n)`: a chain; each hop is one segment through a 2-way junction.
/// * `G(r, c)`: traps on grid vertices. Every trap owns a junction whose
///   degree is its number of grid neighbours; a path crosses the junction of
///   the endpoint with the larger degree (lower trap id on ties) and spans two
///   segments.
/// * `S(n)`: every pair of traps meets at one central `n`-way junction, two
///   segments per path.
pub fn build_topology(family: TopologyFamily, capacity: usize) -> Result<Topology> {
    if capacity < 2 {
        return Err(Error::InvalidTopology(format!("trap capacity must be >= 2, got {capacity}")));
    }
    let traps = |n: usize| (0..n).map(|id| Trap { id, capacity }).collect::<Vec<_>>();
    let topo = match family {
        TopologyFamily::Linear(n) => {
            if n < 2 {
                return Err(Error::InvalidTopology("L-series needs at least 2 traps".into()));
            }
            let junctions = (0..n - 1).map(|id| Junction { id, degree: 2 }).collect();
            let paths = (0..n - 1)
                .map(|i| ShuttlePath { trap_a: i, trap_b: i + 1, segments: 1, junctions: vec![i] })
                .collect();
            Topology { name: family.to_string(), traps: traps(n), paths, junctions }
        }
        TopologyFamily::Grid { rows, cols } => {
            if rows == 0 || cols == 0 || rows * cols < 2 {
                return Err(Error::InvalidTopology("G-series needs rows*cols >= 2".into()));
            }
            let id = |r: usize, c: usize| r * cols + c;
            let mut links = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        links.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        links.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            let n = rows * cols;
            let mut degree = vec![0usize; n];
            for &(a, b) in &links {
                degree[a] += 1;
                degree[b] += 1;
            }
            let junctions = (0..n).map(|t| Junction { id: t, degree: degree[t].max(2) }).collect();
            let paths = links
                .into_iter()
                .map(|(a, b)| {
                    let hub = if degree[b] > degree[a] { b } else { a };
                    ShuttlePath { trap_a: a, trap_b: b, segments: 2, junctions: vec![hub] }
                })
                .collect();
            Topology { name: family.to_string(), traps: traps(n), paths, junctions }
        }
        TopologyFamily::Star(n) => {
            if n < 2 {
                return Err(Error::InvalidTopology("S-series needs at least 2 traps".into()));
            }
            let mut paths = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    paths.push(ShuttlePath { trap_a: a, trap_b: b, segments: 2, junctions: vec![0] });
                }
            }
            Topology {
                name: family.to_string(),
                traps: traps(n),
                paths,
                junctions: vec![Junction { id: 0, degree: n }],
            }
        }
    };
    topo.validate()?;
    Ok(topo)
}

/// JSON form of a family-based topology, e.g.
/// `{"family":"G","rows":2,"cols":3,"capacity":17}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyConfig {
    family: String,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    rows: Option<usize>,
    #[serde(default)]
    cols: Option<usize>,
    capacity: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum TopologyConfig {
    Family(FamilyConfig),
    Explicit(Topology),
}

impl Topology {
    /// Parses either the family form or the explicit trap/path/junction form.
    pub fn from_json(text: &str) -> Result<Topology> {
        let cfg: TopologyConfig = serde_json::from_str(text).map_err(|e| {
            Error::InvalidTopology(format!(
                "expected {{\"family\",...,\"capacity\"}} or {{\"traps\",\"paths\",\"junctions\"}}: {e}"
            ))
        })?;
        match cfg {
            TopologyConfig::Explicit(t) => {
                t.validate()?;
                Ok(t)
            }
            TopologyConfig::Family(f) => {
                let need = |v: Option<usize>, what: &str| {
                    v.ok_or_else(|| Error::InvalidTopology(format!("family `{}` needs `{what}`", f.family)))
                };
                let family = match f.family.to_ascii_uppercase().as_str() {
                    "L" => TopologyFamily::Linear(need(f.n, "n")?),
                    "S" => TopologyFamily::Star(need(f.n, "n")?),
                    "G" => TopologyFamily::Grid { rows: need(f.rows, "rows")?, cols: need(f.cols, "cols")? },
                    other => return Err(Error::InvalidTopology(format!("unknown family `{other}`"))),
                };
                build_topology(family, f.capacity)
            }
        }
    }

    pub fn total_capacity(&self) -> usize {
        self.traps.iter().map(|t| t.capacity).sum()
    }

    pub fn max_capacity(&self) -> usize {
        self.traps.iter().map(|t| t.capacity).max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidTopology(m));
        if self.traps.is_empty() {
            return bad("no traps".into());
        }
        for (i, t) in self.traps.iter().enumerate() {
            if t.id != i {
                return bad(format!("trap ids must be 0..n in order; position {i} has id {}", t.id));
            }
            if t.capacity < 2 {
                return bad(format!("trap {i} has capacity {} (< 2)", t.capacity));
            }
        }
        for (i, j) in self.junctions.iter().enumerate() {
            if j.id != i {
                return bad(format!("junction ids must be 0..n in order; position {i} has id {}", j.id));
            }
            if j.degree == 0 {
                return bad(format!("junction {i} has degree 0"));
            }
        }
        let n = self.traps.len();
        for (i, p) in self.paths.iter().enumerate() {
            if p.trap_a >= n || p.trap_b >= n {
                return bad(format!("path {i} references a missing trap"));
            }
            if p.trap_a == p.trap_b {
                return bad(format!("path {i} joins trap {} to itself", p.trap_a));
            }
            if p.segments == 0 {
                return bad(format!("path {i} has zero segments"));
            }
            if let Some(j) = p.junctions.iter().find(|&&j| j >= self.junctions.len()) {
                return bad(format!("path {i} crosses missing junction {j}"));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for p in &self.paths {
            adj[p.trap_a].push(p.trap_b);
            adj[p.trap_b].push(p.trap_a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(t) = queue.pop_front() {
            for &u in &adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        if let Some(t) = seen.iter().position(|s| !s) {
            return bad(format!("trap {t} is unreachable"));
        }
        Ok(())
    }
}
