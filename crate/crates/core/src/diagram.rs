//! Link diagrams built from planar diagram (PD) codes.
//!
//! A PD code lists one 4-tuple of edge labels per crossing, counterclockwise,
//! starting at the incoming under-edge. Slots 0 and 2 therefore hold the
//! under-strand's edges and slots 1 and 3 the over-strand's.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::DiagramError;
use crate::unionfind::UnionFind;

pub type EdgeLabel = u32;
pub type CrossingId = usize;
pub type StrandId = usize;

/// One edge-end position: a crossing and a slot index in `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub crossing: CrossingId,
    pub index: usize,
}

impl Slot {
    pub fn new(crossing: CrossingId, index: usize) -> Self {
        Slot { crossing, index }
    }

    pub fn is_under(self) -> bool {
        self.index.is_multiple_of(2)
    }

    /// The slot the strand continues through on the far side of the crossing.
    pub fn opposite(self) -> Slot {
        Slot::new(self.crossing, (self.index + 2) % 4)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub id: CrossingId,
    pub pd: [EdgeLabel; 4],
}

impl Crossing {
    pub fn under_pair(&self) -> (EdgeLabel, EdgeLabel) {
        (self.pd[0], self.pd[2])
    }

    pub fn over_pair(&self) -> (EdgeLabel, EdgeLabel) {
        (self.pd[1], self.pd[3])
    }
}

/// A maximal over-arc: the edges between two consecutive under-passes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub id: StrandId,
    pub edges: Vec<EdgeLabel>,
    /// Under-slots where the strand starts and stops (possibly on one crossing).
    pub endpoints: [Slot; 2],
}

/// The strands meeting at one crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingStrands {
    pub under: [StrandId; 2],
    pub over: StrandId,
}

/// One entry of [`Diagram::adjacency_of`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Adjacency {
    pub other: StrandId,
    pub crossing: CrossingId,
    pub over: StrandId,
}

/// A validated, connected link diagram. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    strands: Vec<Strand>,
    edge_ends: Vec<[Slot; 2]>,
    edge_strand: Vec<StrandId>,
    edge_component: Vec<usize>,
    component_count: usize,
    crossing_strands: Vec<CrossingStrands>,
    adjacency: BTreeSet<(StrandId, StrandId)>,
}

/// Parse PD text into a validated diagram.
///
/// Accepts `X(a,b,c,d)` tuples separated by whitespace or commas, the
/// `PD[X[a,b,c,d], ...]` bracket form, and the nested-list form
/// `[[a,b,c,d], ...]`.
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    Diagram::from_tuples(&parse_tuples(text)?)
}

/// Tokenize PD text into raw crossing tuples without any label validation.
pub fn parse_tuples(text: &str) -> Result<Vec<[EdgeLabel; 4]>, DiagramError> {
    let mut body = text.trim();
    if let Some(rest) = body.strip_prefix("PD") {
        body = rest.trim_start();
    }
    if body.starts_with('[') && body.ends_with(']') {
        let inner = body[1..body.len() - 1].trim_start();
        if inner.is_empty() || inner.starts_with(['X', '[', '(', '{']) {
            body = inner.trim_end();
        }
    }

    let bytes = body.as_bytes();
    let mut pos = 0;
    let mut tuples = Vec::new();
    let malformed = |msg: String| DiagramError::MalformedPd(msg);

    loop {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b',') {
            pos += 1;
        }
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] == b'X' {
            pos += 1;
        }
        let close = match bytes.get(pos) {
            Some(b'(') => b')',
            Some(b'[') => b']',
            Some(b'{') => b'}',
            _ => {
                return Err(malformed(format!(
                    "expected a crossing tuple at byte {pos} of {:?}",
                    body
                )))
            }
        };
        pos += 1;
        let end = body[pos..]
            .find(close as char)
            .map(|off| pos + off)
            .ok_or_else(|| malformed(format!("unterminated crossing tuple at byte {pos}")))?;
        let labels = body[pos..end]
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                match tok.parse::<EdgeLabel>() {
                    Ok(0) | Err(_) => Err(malformed(format!("bad edge label {tok:?}"))),
                    Ok(v) => Ok(v),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let tuple: [EdgeLabel; 4] = labels.as_slice().try_into().map_err(|_| {
            malformed(format!(
                "crossing {} has {} labels, expected 4",
                tuples.len(),
                labels.len()
            ))
        })?;
        tuples.push(tuple);
        pos = end + 1;
    }
    Ok(tuples)
}

/// Check label conservation and return the two slots each edge occupies.
fn edge_ends(crossings: &[Crossing]) -> Result<Vec<[Slot; 2]>, DiagramError> {
    let n_edges = 2 * crossings.len();
    let mut seen: Vec<Vec<Slot>> = vec![Vec::with_capacity(2); n_edges];
    for c in crossings {
        for (index, &label) in c.pd.iter().enumerate() {
            if label == 0 || label as usize > n_edges {
                return Err(DiagramError::MalformedPd(format!(
                    "edge label {label} outside 1..={n_edges}"
                )));
            }
            seen[label as usize - 1].push(Slot::new(c.id, index));
        }
    }
    seen.into_iter()
        .enumerate()
        .map(|(i, slots)| {
            <[Slot; 2]>::try_from(slots.as_slice()).map_err(|_| {
                DiagramError::MalformedPd(format!(
                    "edge label {} occurs {} times, expected 2",
                    i + 1,
                    slots.len()
                ))
            })
        })
        .collect()
}

fn other_end(ends: &[Slot; 2], from: Slot) -> Slot {
    if ends[0] == from {
        ends[1]
    } else {
        ends[0]
    }
}

/// Decompose the diagram into over-arcs.
///
/// Strands are discovered from the outgoing under-slot (slot 2) of each
/// crossing in order, so for a consistently oriented PD code strand `i`
/// starts at crossing `i`.
pub fn build_strands(crossings: &[Crossing]) -> Result<Vec<Strand>, DiagramError> {
    let ends = edge_ends(crossings)?;
    walk_strands(crossings, &ends)
}

fn walk_strands(crossings: &[Crossing], ends: &[[Slot; 2]]) -> Result<Vec<Strand>, DiagramError> {
    let n = crossings.len();
    let mut used_under = vec![[false; 4]; n];
    let mut covered = vec![false; ends.len()];
    let mut strands = Vec::with_capacity(n);

    let starts = (0..n)
        .map(|c| Slot::new(c, 2))
        .chain((0..n).map(|c| Slot::new(c, 0)));
    for start in starts {
        if used_under[start.crossing][start.index] {
            continue;
        }
        let mut edges = Vec::new();
        let mut at = start;
        let stop = loop {
            let label = crossings[at.crossing].pd[at.index];
            edges.push(label);
            covered[label as usize - 1] = true;
            let arrive = other_end(&ends[label as usize - 1], at);
            if arrive.is_under() {
                break arrive;
            }
            at = arrive.opposite();
        };
        used_under[start.crossing][start.index] = true;
        used_under[stop.crossing][stop.index] = true;
        strands.push(Strand {
            id: strands.len(),
            edges,
            endpoints: [start, stop],
        });
    }

    if covered.iter().any(|c| !c) {
        return Err(DiagramError::ClosedOverComponent);
    }
    Ok(strands)
}

impl Diagram {
    /// Build and validate a diagram from raw crossing tuples.
    pub fn from_tuples(tuples: &[[EdgeLabel; 4]]) -> Result<Self, DiagramError> {
        if tuples.is_empty() {
            return Err(DiagramError::Empty);
        }
        let crossings: Vec<Crossing> = tuples
            .iter()
            .enumerate()
            .map(|(id, &pd)| Crossing { id, pd })
            .collect();
        let n = crossings.len();
        let ends = edge_ends(&crossings)?;

        let mut pieces = UnionFind::new(n);
        for e in &ends {
            pieces.union(e[0].crossing, e[1].crossing);
        }
        let piece_count = pieces.count();
        if piece_count > 1 {
            return Err(DiagramError::DisconnectedProjection {
                pieces: piece_count,
            });
        }

        let strands = walk_strands(&crossings, &ends)?;
        let mut edge_strand = vec![usize::MAX; ends.len()];
        for s in &strands {
            for &e in &s.edges {
                edge_strand[e as usize - 1] = s.id;
            }
        }

        // Link components: edges continue straight through every crossing.
        let mut comps = UnionFind::new(ends.len());
        for c in &crossings {
            comps.union(c.pd[0] as usize - 1, c.pd[2] as usize - 1);
            comps.union(c.pd[1] as usize - 1, c.pd[3] as usize - 1);
        }
        let mut comp_index = vec![usize::MAX; ends.len()];
        let mut component_count = 0;
        let mut edge_component = vec![0; ends.len()];
        for (e, slot) in edge_component.iter_mut().enumerate() {
            let root = comps.find(e);
            if comp_index[root] == usize::MAX {
                comp_index[root] = component_count;
                component_count += 1;
            }
            *slot = comp_index[root];
        }

        let crossing_strands: Vec<CrossingStrands> = crossings
            .iter()
            .map(|c| CrossingStrands {
                under: [
                    edge_strand[c.pd[0] as usize - 1],
                    edge_strand[c.pd[2] as usize - 1],
                ],
                over: edge_strand[c.pd[1] as usize - 1],
            })
            .collect();
        let adjacency = crossing_strands
            .iter()
            .flat_map(|cs| [(cs.under[0], cs.under[1]), (cs.under[1], cs.under[0])])
            .collect();

        Ok(Diagram {
            crossings,
            strands,
            edge_ends: ends,
            edge_strand,
            edge_component,
            component_count,
            crossing_strands,
            adjacency,
        })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_ends.len()
    }

    pub fn strand_count(&self) -> usize {
        self.strands.len()
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn strands(&self) -> &[Strand] {
        &self.strands
    }

    pub fn strand(&self, id: StrandId) -> &Strand {
        &self.strands[id]
    }

    /// Labels `1..=2n`.
    pub fn edge_labels(&self) -> impl Iterator<Item = EdgeLabel> {
        1..=self.edge_ends.len() as EdgeLabel
    }

    pub fn edge_ends(&self, label: EdgeLabel) -> [Slot; 2] {
        self.edge_ends[label as usize - 1]
    }

    pub fn label_at(&self, slot: Slot) -> EdgeLabel {
        self.crossings[slot.crossing].pd[slot.index]
    }

    pub fn strand_of_edge(&self, label: EdgeLabel) -> StrandId {
        self.edge_strand[label as usize - 1]
    }

    pub fn component_of_edge(&self, label: EdgeLabel) -> usize {
        self.edge_component[label as usize - 1]
    }

    pub fn crossing_strands(&self, c: CrossingId) -> CrossingStrands {
        self.crossing_strands[c]
    }

    /// Number of crossings the strand passes over.
    pub fn over_degree(&self, s: StrandId) -> usize {
        self.strands[s].edges.len() - 1
    }

    /// Unordered adjacency as a symmetric set of ordered pairs.
    pub fn adjacency(&self) -> &BTreeSet<(StrandId, StrandId)> {
        &self.adjacency
    }

    pub fn are_adjacent(&self, a: StrandId, b: StrandId) -> bool {
        self.adjacency.contains(&(a, b))
    }

    /// For every crossing where `s` passes under, the other understrand and the overstrand.
    pub fn adjacency_of(&self, s: StrandId) -> Vec<Adjacency> {
        self.crossing_strands
            .iter()
            .enumerate()
            .filter_map(|(crossing, cs)| {
                let other = if cs.under[0] == s {
                    cs.under[1]
                } else if cs.under[1] == s {
                    cs.under[0]
                } else {
                    return None;
                };
                Some(Adjacency {
                    other,
                    crossing,
                    over: cs.over,
                })
            })
            .collect()
    }

    /// Canonical `X(a,b,c,d)` rendering, single-space separated.
    pub fn to_pd_string(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.crossings.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let [a, b, cc, d] = c.pd;
            let _ = write!(out, "X({a},{b},{cc},{d})");
        }
        out
    }

    /// SHA-256 of the canonical PD rendering, lowercase hex.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.to_pd_string().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}
