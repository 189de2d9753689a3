//! Coloring moves, saturation and the exact seed search for the Wirtinger
//! number ω(D) and the plain sphere number ρ(D).
//!
//! A loop move on an uncolored strand `s` exists exactly when some dual edge
//! of `s` joins two faces that are already connected through dual edges of
//! colored strands: the connecting simple path closed by that edge is a
//! simple dual cycle that meets `s` once and otherwise only colored strands.
//! Connectivity is tracked with a union-find that only ever gains edges, and
//! a witness path is extracted by breadth-first search only when moves are
//! being recorded.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use itertools::Itertools;

use crate::certificate::Certificate;
use crate::diagram::{CrossingId, Diagram, EdgeLabel, StrandId};
use crate::dual::{DualGraph, FaceId};
use crate::error::{ColoringError, SearchError};
use crate::strandset::StrandSet;
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Wirtinger moves only.
    Wirtinger,
    /// Loop moves along simple dual cycles; Wirtinger moves are a special case
    /// and are recorded as such when available.
    PlainSphere,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Wirtinger => "wirtinger",
            Mode::PlainSphere => "plain-sphere",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wirtinger" => Ok(Mode::Wirtinger),
            "plain-sphere" => Ok(Mode::PlainSphere),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move {
    /// Color `target` at `crossing`, where it is an understrand and both the
    /// other understrand and the overstrand are colored.
    Wirtinger {
        target: StrandId,
        crossing: CrossingId,
    },
    /// Color `target` using the dual cycle formed by `edge` (a projection edge
    /// of `target`) and the face path `faces`, which runs from one face of
    /// `edge` to the other through dual edges of colored strands.
    Loop {
        target: StrandId,
        edge: EdgeLabel,
        faces: Vec<FaceId>,
    },
}

impl Move {
    pub fn target(&self) -> StrandId {
        match *self {
            Move::Wirtinger { target, .. } | Move::Loop { target, .. } => target,
        }
    }

    pub fn is_loop(&self) -> bool {
        matches!(self, Move::Loop { .. })
    }

    /// Number of points where the loop meets the diagram; zero for Wirtinger moves.
    pub fn intersections(&self) -> usize {
        match self {
            Move::Wirtinger { .. } => 0,
            Move::Loop { faces, .. } => faces.len(),
        }
    }
}

/// A growing set of colored strands together with face connectivity through
/// their dual edges.
#[derive(Debug, Clone)]
pub struct ColoringState<'a> {
    diagram: &'a Diagram,
    dual: &'a DualGraph,
    colored: StrandSet,
    connectivity: UnionFind,
    moves: Vec<Move>,
}

impl<'a> ColoringState<'a> {
    pub fn new(diagram: &'a Diagram, dual: &'a DualGraph) -> Self {
        ColoringState {
            diagram,
            dual,
            colored: StrandSet::new(diagram.strand_count()),
            connectivity: UnionFind::new(dual.face_count()),
            moves: Vec::new(),
        }
    }

    pub fn with_colored(
        diagram: &'a Diagram,
        dual: &'a DualGraph,
        ids: impl IntoIterator<Item = StrandId>,
    ) -> Self {
        let mut state = ColoringState::new(diagram, dual);
        for s in ids {
            state.color(s);
        }
        state
    }

    pub fn colored(&self) -> &StrandSet {
        &self.colored
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn is_colored(&self, s: StrandId) -> bool {
        self.colored.contains(s)
    }

    pub fn is_complete(&self) -> bool {
        self.colored.is_full()
    }

    /// Color a strand without recording a move (seeding).
    pub fn color(&mut self, s: StrandId) -> bool {
        if !self.colored.insert(s) {
            return false;
        }
        for &e in &self.diagram.strand(s).edges {
            let [a, b] = self.dual.edge(e).faces;
            self.connectivity.union(a, b);
        }
        true
    }

    /// Record and apply a move. The move is trusted.
    pub fn apply(&mut self, mv: Move) {
        self.color(mv.target());
        self.moves.push(mv);
    }

    fn check_uncolored(&self, s: StrandId) -> Result<(), ColoringError> {
        if self.is_colored(s) {
            Err(ColoringError::AlreadyColored(s))
        } else {
            Ok(())
        }
    }

    pub fn wirtinger_colorable_now(&self, s: StrandId) -> Result<Option<Move>, ColoringError> {
        self.check_uncolored(s)?;
        Ok(self
            .diagram
            .adjacency_of(s)
            .into_iter()
            .find(|a| self.is_colored(a.other) && self.is_colored(a.over))
            .map(|a| Move::Wirtinger {
                target: s,
                crossing: a.crossing,
            }))
    }

    /// First edge of `s` whose two faces are joined through colored strands.
    fn loop_edge(&mut self, s: StrandId) -> Option<EdgeLabel> {
        let dual = self.dual;
        let conn = &mut self.connectivity;
        self.diagram.strand(s).edges.iter().copied().find(|&e| {
            let [a, b] = dual.edge(e).faces;
            conn.connected(a, b)
        })
    }

    pub fn loop_colorable_now(&mut self, s: StrandId) -> Result<Option<Move>, ColoringError> {
        self.check_uncolored(s)?;
        Ok(self.loop_edge(s).map(|e| self.loop_witness(s, e)))
    }

    fn loop_witness(&self, s: StrandId, edge: EdgeLabel) -> Move {
        let [a, b] = self.dual.edge(edge).faces;
        let colored = &self.colored;
        let (faces, path) = self
            .dual
            .find_path(a, b, |de| colored.contains(de.strand))
            .expect("union-find and colored subgraph disagree");
        assert!(
            self.cycle_parity_even(edge, &path),
            "loop for strand {s} crosses a link component an odd number of times"
        );
        Move::Loop {
            target: s,
            edge,
            faces,
        }
    }

    fn cycle_parity_even(&self, edge: EdgeLabel, path: &[EdgeLabel]) -> bool {
        let mut counts = vec![0usize; self.diagram.component_count()];
        for &e in path.iter().chain(std::iter::once(&edge)) {
            counts[self.diagram.component_of_edge(e)] += 1;
        }
        counts.iter().all(|c| c % 2 == 0)
    }

    /// Every move currently available, at most one Wirtinger and one loop move per strand.
    pub fn available_moves(&mut self, mode: Mode) -> Vec<Move> {
        let mut out = Vec::new();
        for s in 0..self.diagram.strand_count() {
            if self.is_colored(s) {
                continue;
            }
            if let Ok(Some(m)) = self.wirtinger_colorable_now(s) {
                out.push(m);
            }
            if mode == Mode::PlainSphere {
                if let Ok(Some(m)) = self.loop_colorable_now(s) {
                    out.push(m);
                }
            }
        }
        out
    }
}

/// Result of running moves to a fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Saturation {
    pub colored: StrandSet,
    pub moves: Vec<Move>,
}

impl Saturation {
    pub fn is_complete(&self) -> bool {
        self.colored.is_full()
    }
}

/// Apply moves of `mode` until none remain, recording each one.
///
/// Wirtinger moves are exhausted before any loop move is tried, so loop moves
/// appear only where no Wirtinger move was available.
pub fn saturate(d: &Diagram, g: &DualGraph, seeds: &[StrandId], mode: Mode) -> Saturation {
    let mut state = ColoringState::with_colored(d, g, seeds.iter().copied());
    loop {
        let mut progressed = true;
        while progressed {
            progressed = false;
            for s in 0..d.strand_count() {
                if state.is_colored(s) {
                    continue;
                }
                if let Ok(Some(m)) = state.wirtinger_colorable_now(s) {
                    state.apply(m);
                    progressed = true;
                }
            }
        }
        if mode == Mode::Wirtinger {
            break;
        }
        let next = (0..d.strand_count()).find_map(|s| {
            if state.is_colored(s) {
                None
            } else {
                state.loop_edge(s).map(|e| (s, e))
            }
        });
        match next {
            Some((s, e)) => {
                let m = state.loop_witness(s, e);
                state.apply(m);
            }
            None => break,
        }
    }
    Saturation {
        colored: state.colored,
        moves: state.moves,
    }
}

/// Like [`saturate`], but `pick` chooses which of the available moves to apply next.
pub fn saturate_with(
    d: &Diagram,
    g: &DualGraph,
    seeds: &[StrandId],
    mode: Mode,
    mut pick: impl FnMut(&[Move]) -> usize,
) -> Saturation {
    let mut state = ColoringState::with_colored(d, g, seeds.iter().copied());
    loop {
        let moves = state.available_moves(mode);
        if moves.is_empty() {
            break;
        }
        let i = pick(&moves);
        state.apply(moves[i].clone());
    }
    Saturation {
        colored: state.colored,
        moves: state.moves,
    }
}

/// The fixpoint set only, without move records. This is the search hot path.
pub fn closure(d: &Diagram, g: &DualGraph, seeds: &[StrandId], mode: Mode) -> StrandSet {
    match mode {
        Mode::Wirtinger => {
            let mut colored = StrandSet::from_ids(d.strand_count(), seeds.iter().copied());
            let mut progressed = true;
            while progressed {
                progressed = false;
                for c in 0..d.crossing_count() {
                    let cs = d.crossing_strands(c);
                    if !colored.contains(cs.over) {
                        continue;
                    }
                    let [u, v] = cs.under;
                    match (colored.contains(u), colored.contains(v)) {
                        (true, false) => progressed |= colored.insert(v),
                        (false, true) => progressed |= colored.insert(u),
                        _ => {}
                    }
                }
            }
            colored
        }
        Mode::PlainSphere => {
            // Wirtinger moves are subsumed by the connectivity test.
            let mut state = ColoringState::with_colored(d, g, seeds.iter().copied());
            let mut progressed = true;
            while progressed {
                progressed = false;
                for s in 0..d.strand_count() {
                    if !state.is_colored(s) && state.loop_edge(s).is_some() {
                        state.color(s);
                        progressed = true;
                    }
                }
            }
            state.colored
        }
    }
}

/// Optional wall-clock budget for a seed search.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchLimits {
    pub deadline: Option<Instant>,
}

impl SearchLimits {
    pub fn unbounded() -> Self {
        SearchLimits::default()
    }

    pub fn timeout(budget: Duration) -> Self {
        SearchLimits {
            deadline: Some(Instant::now() + budget),
        }
    }

    fn check(&self) -> Result<(), SearchError> {
        match self.deadline {
            Some(t) if Instant::now() >= t => Err(SearchError::Timeout),
            _ => Ok(()),
        }
    }
}

/// Strands by descending over-degree, ties by id. Only affects how quickly a
/// successful seed set is found, never the answer.
pub fn seed_order(d: &Diagram) -> Vec<StrandId> {
    let mut order: Vec<StrandId> = (0..d.strand_count()).collect();
    order.sort_by_key(|&s| (std::cmp::Reverse(d.over_degree(s)), s));
    order
}

/// First size-`k` seed set (in search order) whose closure is every strand.
pub fn find_seeds(
    d: &Diagram,
    g: &DualGraph,
    k: usize,
    mode: Mode,
    limits: &SearchLimits,
) -> Result<Option<Vec<StrandId>>, SearchError> {
    for seeds in seed_order(d).into_iter().combinations(k) {
        limits.check()?;
        if closure(d, g, &seeds, mode).is_full() {
            return Ok(Some(seeds));
        }
    }
    Ok(None)
}

/// An exact diagram invariant with the seeds realizing it and a certificate
/// for the upper bound.
#[derive(Debug, Clone)]
pub struct InvariantResult {
    pub value: usize,
    pub seeds: Vec<StrandId>,
    pub certificate: Certificate,
}

fn certify(d: &Diagram, g: &DualGraph, seeds: Vec<StrandId>, mode: Mode) -> InvariantResult {
    let sat = saturate(d, g, &seeds, mode);
    assert!(
        sat.is_complete(),
        "closure and recorded saturation disagree"
    );
    InvariantResult {
        value: seeds.len(),
        certificate: Certificate::new(d, mode, seeds.clone(), sat.moves),
        seeds,
    }
}

pub fn omega_within(
    d: &Diagram,
    g: &DualGraph,
    limits: &SearchLimits,
) -> Result<InvariantResult, SearchError> {
    for k in 1..=d.strand_count() {
        if let Some(seeds) = find_seeds(d, g, k, Mode::Wirtinger, limits)? {
            return Ok(certify(d, g, seeds, Mode::Wirtinger));
        }
    }
    unreachable!("all strands as seeds always color the diagram")
}

/// The Wirtinger number ω(D).
pub fn omega(d: &Diagram, g: &DualGraph) -> InvariantResult {
    omega_within(d, g, &SearchLimits::unbounded()).expect("unbounded search")
}

/// ω(D) and ρ(D) together; ρ is searched only below ω.
#[derive(Debug, Clone)]
pub struct Invariants {
    pub omega: InvariantResult,
    pub rho: InvariantResult,
}

impl Invariants {
    pub fn has_gap(&self) -> bool {
        self.rho.value < self.omega.value
    }
}

pub fn invariants_within(
    d: &Diagram,
    g: &DualGraph,
    limits: &SearchLimits,
) -> Result<Invariants, SearchError> {
    let omega = omega_within(d, g, limits)?;
    let mut rho = None;
    for k in 1..omega.value {
        if let Some(seeds) = find_seeds(d, g, k, Mode::PlainSphere, limits)? {
            rho = Some(certify(d, g, seeds, Mode::PlainSphere));
            break;
        }
    }
    let rho = rho.unwrap_or_else(|| certify(d, g, omega.seeds.clone(), Mode::PlainSphere));
    assert!(
        rho.value <= omega.value && omega.value <= d.strand_count(),
        "rho {} / omega {} / strands {} out of order",
        rho.value,
        omega.value,
        d.strand_count()
    );
    Ok(Invariants { omega, rho })
}

pub fn invariants(d: &Diagram, g: &DualGraph) -> Invariants {
    invariants_within(d, g, &SearchLimits::unbounded()).expect("unbounded search")
}

pub fn rho_within(
    d: &Diagram,
    g: &DualGraph,
    limits: &SearchLimits,
) -> Result<InvariantResult, SearchError> {
    invariants_within(d, g, limits).map(|inv| inv.rho)
}

/// The plain sphere number ρ(D).
pub fn rho(d: &Diagram, g: &DualGraph) -> InvariantResult {
    invariants(d, g).rho
}
