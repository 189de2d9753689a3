//! Coloring certificates: a seed set plus an ordered move list proving
//! ω(D) ≤ k or ρ(D) ≤ k, in a line-oriented text format, and a verifier
//! that replays them directly against the move definitions.
//!
//! ```text
//! psk-cert/1
//! diagram: <sha256 of the canonical PD>
//! mode: plain-sphere
//! tau: 4
//! seeds: 2,3,9
//! moves: 11
//! W 4 7
//! L 8 17 3,5,9,12
//! ```
//!
//! A loop line gives the target strand, the projection edge of the target the
//! loop crosses, and the faces the loop visits from one side of that edge
//! round to the other. Between consecutive faces the loop crosses some dual
//! edge of an already colored strand.

use std::fmt::Write as _;

use thiserror::Error;

use crate::coloring::{Mode, Move};
use crate::diagram::{Diagram, StrandId};
use crate::dual::DualGraph;

pub const HEADER: &str = "psk-cert/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub diagram_hash: String,
    pub mode: Mode,
    pub seeds: Vec<StrandId>,
    pub moves: Vec<Move>,
    /// Total number of loop/diagram intersection points over all loop moves.
    pub tau: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("expected header {HEADER:?}, found {found:?}")]
    VersionMismatch { found: String },
    #[error("certificate schema error at line {line}: {message}")]
    Schema { line: usize, message: String },
}

/// Why a certificate was rejected. `step` counts moves from zero.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Reject {
    #[error("certificate is for diagram {found}, not {expected}")]
    HashMismatch { expected: String, found: String },
    #[error("unknown strand {strand}")]
    UnknownStrand { strand: StrandId },
    #[error("seed {strand} listed twice")]
    DuplicateSeed { strand: StrandId },
    #[error("move {step}: strand {strand} is already colored")]
    TargetAlreadyColored { step: usize, strand: StrandId },
    #[error("move {step}: Wirtinger conditions fail at the stated crossing")]
    WirtingerConditionFailed { step: usize },
    #[error("move {step}: loop moves are not allowed in a Wirtinger certificate")]
    LoopMoveNotAllowed { step: usize },
    #[error("move {step}: cycle uses an edge or face absent from the dual graph")]
    CycleEdgeMissing { step: usize },
    #[error("move {step}: cycle meets the target {count} times through its stated edge")]
    CycleTargetCount { step: usize, count: usize },
    #[error("move {step}: face path does not close up through the stated edge")]
    CycleNotClosed { step: usize },
    #[error("move {step}: cycle repeats a face")]
    CycleNotSimple { step: usize },
    #[error("move {step}: cycle crosses an uncolored strand")]
    CycleEdgeUncolored { step: usize },
    #[error("tau is {stated} but the loops meet the diagram {actual} times")]
    TauMismatch { stated: usize, actual: usize },
    #[error("{missing} strands remain uncolored")]
    IncompleteColoring { missing: usize },
}

impl Reject {
    /// Stable reason name.
    pub fn code(&self) -> &'static str {
        match self {
            Reject::HashMismatch { .. } => "HashMismatch",
            Reject::UnknownStrand { .. } => "UnknownStrand",
            Reject::DuplicateSeed { .. } => "DuplicateSeed",
            Reject::TargetAlreadyColored { .. } => "TargetAlreadyColored",
            Reject::WirtingerConditionFailed { .. } => "WirtingerConditionFailed",
            Reject::LoopMoveNotAllowed { .. } => "LoopMoveNotAllowed",
            Reject::CycleEdgeMissing { .. } => "CycleEdgeMissing",
            Reject::CycleTargetCount { .. } => "CycleTargetCount",
            Reject::CycleNotClosed { .. } => "CycleNotClosed",
            Reject::CycleNotSimple { .. } => "CycleNotSimple",
            Reject::CycleEdgeUncolored { .. } => "CycleEdgeUncolored",
            Reject::TauMismatch { .. } => "TauMismatch",
            Reject::IncompleteColoring { .. } => "IncompleteColoring",
        }
    }
}

impl Certificate {
    pub fn new(d: &Diagram, mode: Mode, seeds: Vec<StrandId>, moves: Vec<Move>) -> Self {
        let tau = moves.iter().map(Move::intersections).sum();
        Certificate {
            diagram_hash: d.content_hash(),
            mode,
            seeds,
            moves,
            tau,
        }
    }

    /// The proven upper bound.
    pub fn bound(&self) -> usize {
        self.seeds.len()
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let join = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let _ = writeln!(out, "{HEADER}");
        let _ = writeln!(out, "diagram: {}", self.diagram_hash);
        let _ = writeln!(out, "mode: {}", self.mode);
        let _ = writeln!(out, "tau: {}", self.tau);
        let _ = writeln!(out, "seeds: {}", join(&self.seeds));
        let _ = writeln!(out, "moves: {}", self.moves.len());
        for m in &self.moves {
            match m {
                Move::Wirtinger { target, crossing } => {
                    let _ = writeln!(out, "W {target} {crossing}");
                }
                Move::Loop {
                    target,
                    edge,
                    faces,
                } => {
                    let _ = writeln!(out, "L {target} {edge} {}", join(faces));
                }
            }
        }
        out
    }

    pub fn deserialize(text: &str) -> Result<Self, FormatError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        let header = lines.next().map(|(_, l)| l).unwrap_or("");
        if header != HEADER {
            return Err(FormatError::VersionMismatch {
                found: header.to_string(),
            });
        }
        let schema = |line: usize, message: String| FormatError::Schema { line, message };

        let mut field = |key: &str| -> Result<(usize, String), FormatError> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| schema(0, format!("missing `{key}:` line")))?;
            let value = line
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix(':'))
                .ok_or_else(|| schema(no, format!("expected `{key}:`, found {line:?}")))?;
            Ok((no, value.trim().to_string()))
        };

        let (_, diagram_hash) = field("diagram")?;
        let (no, mode) = field("mode")?;
        let mode = mode.parse::<Mode>().map_err(|m| schema(no, m))?;
        let (no, tau) = field("tau")?;
        let tau = parse_num(&tau).map_err(|m| schema(no, m))?;
        let (no, seeds) = field("seeds")?;
        let seeds = parse_list(&seeds).map_err(|m| schema(no, m))?;
        let (no, count) = field("moves")?;
        let count = parse_num(&count).map_err(|m| schema(no, m))?;

        let mut moves = Vec::with_capacity(count);
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            moves.push(parse_move(line).map_err(|m| schema(no, m))?);
        }
        if moves.len() != count {
            return Err(schema(
                0,
                format!("expected {count} moves, found {}", moves.len()),
            ));
        }
        Ok(Certificate {
            diagram_hash,
            mode,
            seeds,
            moves,
            tau,
        })
    }
}

fn parse_num(s: &str) -> Result<usize, String> {
    s.parse()
        .map_err(|_| format!("expected a non-negative integer, found {s:?}"))
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| parse_num(t.trim())).collect()
}

fn parse_move(line: &str) -> Result<Move, String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    match fields.as_slice() {
        ["W", target, crossing] => Ok(Move::Wirtinger {
            target: parse_num(target)?,
            crossing: parse_num(crossing)?,
        }),
        ["L", target, edge, faces] => Ok(Move::Loop {
            target: parse_num(target)?,
            edge: parse_num(edge)?
                .try_into()
                .map_err(|_| format!("edge label {edge} too large"))?,
            faces: parse_list(faces)?,
        }),
        _ => Err(format!("unrecognized move line {line:?}")),
    }
}

/// Replay a certificate against the diagram and its dual graph.
///
/// Keeps its own colored flags and checks each loop by scanning the dual
/// edge list; nothing is shared with the search engine's connectivity
/// structure. Returns the proven bound on success.
pub fn verify(d: &Diagram, g: &DualGraph, c: &Certificate) -> Result<usize, Reject> {
    let expected = d.content_hash();
    if c.diagram_hash != expected {
        return Err(Reject::HashMismatch {
            expected,
            found: c.diagram_hash.clone(),
        });
    }

    let n = d.strand_count();
    let mut colored = vec![false; n];
    for &s in &c.seeds {
        if s >= n {
            return Err(Reject::UnknownStrand { strand: s });
        }
        if colored[s] {
            return Err(Reject::DuplicateSeed { strand: s });
        }
        colored[s] = true;
    }

    for (step, mv) in c.moves.iter().enumerate() {
        let target = mv.target();
        if target >= n {
            return Err(Reject::UnknownStrand { strand: target });
        }
        if colored[target] {
            return Err(Reject::TargetAlreadyColored {
                step,
                strand: target,
            });
        }
        match mv {
            Move::Wirtinger { crossing, .. } => {
                check_wirtinger(d, &colored, target, *crossing)
                    .ok_or(Reject::WirtingerConditionFailed { step })?;
            }
            Move::Loop { edge, faces, .. } => {
                if c.mode == Mode::Wirtinger {
                    return Err(Reject::LoopMoveNotAllowed { step });
                }
                check_loop(d, g, &colored, target, *edge, faces, step)?;
            }
        }
        colored[target] = true;
    }

    let actual: usize = c.moves.iter().map(Move::intersections).sum();
    if actual != c.tau {
        return Err(Reject::TauMismatch {
            stated: c.tau,
            actual,
        });
    }
    let missing = colored.iter().filter(|&&x| !x).count();
    if missing > 0 {
        return Err(Reject::IncompleteColoring { missing });
    }
    Ok(c.seeds.len())
}

fn check_wirtinger(d: &Diagram, colored: &[bool], target: StrandId, crossing: usize) -> Option<()> {
    let c = d.crossings().get(crossing)?;
    let (u0, u1) = c.under_pair();
    let (o0, _) = c.over_pair();
    let (a, b) = (d.strand_of_edge(u0), d.strand_of_edge(u1));
    let over = d.strand_of_edge(o0);
    let other = if a == target {
        b
    } else if b == target {
        a
    } else {
        return None;
    };
    (colored[other] && colored[over]).then_some(())
}

fn check_loop(
    d: &Diagram,
    g: &DualGraph,
    colored: &[bool],
    target: StrandId,
    edge: u32,
    faces: &[usize],
    step: usize,
) -> Result<(), Reject> {
    if edge == 0 || edge as usize > d.edge_count() || faces.iter().any(|&f| f >= g.face_count()) {
        return Err(Reject::CycleEdgeMissing { step });
    }
    if d.strand_of_edge(edge) != target {
        return Err(Reject::CycleTargetCount { step, count: 0 });
    }
    let ends = g.edge(edge).faces;
    let closed = faces.len() >= 2
        && ((faces[0] == ends[0] && faces[faces.len() - 1] == ends[1])
            || (faces[0] == ends[1] && faces[faces.len() - 1] == ends[0]));
    if !closed {
        return Err(Reject::CycleNotClosed { step });
    }
    let mut seen = vec![false; g.face_count()];
    for &f in faces {
        if std::mem::replace(&mut seen[f], true) {
            return Err(Reject::CycleNotSimple { step });
        }
    }
    for pair in faces.windows(2) {
        let mut any = false;
        let mut usable = false;
        for e in g.edges().iter().filter(|e| e.joins(pair[0], pair[1])) {
            any = true;
            usable |= colored[e.strand];
        }
        if !any {
            return Err(Reject::CycleEdgeMissing { step });
        }
        if !usable {
            return Err(Reject::CycleEdgeUncolored { step });
        }
    }
    Ok(())
}
