//! Faces of the 4-valent projection and its dual multigraph.
//!
//! Faces are the orbits of "cross the edge, then turn to the next slot
//! clockwise" acting on edge-end slots. The rotation system comes straight
//! from the counterclockwise slot order of the PD tuples, and Euler's formula
//! is checked rather than assumed.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::diagram::{Diagram, EdgeLabel, Slot, StrandId};
use crate::error::DiagramError;
use crate::unionfind::UnionFind;

pub type FaceId = usize;

/// One traversal step of a face boundary: leaving `edge` from end `end`
/// (index into [`Diagram::edge_ends`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundarySlot {
    pub edge: EdgeLabel,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    pub boundary: Vec<BoundarySlot>,
}

/// The dual of projection edge `label`, joining the two faces it separates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualEdge {
    pub label: EdgeLabel,
    pub faces: [FaceId; 2],
    pub strand: StrandId,
}

impl DualEdge {
    pub fn joins(&self, a: FaceId, b: FaceId) -> bool {
        (self.faces[0] == a && self.faces[1] == b) || (self.faces[0] == b && self.faces[1] == a)
    }

    /// The endpoint opposite `f`. `f` must be one of the endpoints.
    pub fn other(&self, f: FaceId) -> FaceId {
        if self.faces[0] == f {
            self.faces[1]
        } else {
            self.faces[0]
        }
    }
}

#[derive(Debug, Clone)]
pub struct DualGraph {
    faces: Vec<Face>,
    edges: Vec<DualEdge>,
    incident: Vec<Vec<EdgeLabel>>,
}

fn end_index(d: &Diagram, label: EdgeLabel, slot: Slot) -> usize {
    if d.edge_ends(label)[0] == slot {
        0
    } else {
        1
    }
}

/// Trace every face of the projection. Fails unless F = n + 2.
pub fn trace_faces(d: &Diagram) -> Result<Vec<Face>, DiagramError> {
    let n = d.crossing_count();
    let mut seen = vec![[false; 4]; n];
    let mut faces = Vec::new();
    for c in 0..n {
        for i in 0..4 {
            if seen[c][i] {
                continue;
            }
            let mut boundary = Vec::new();
            let mut at = Slot::new(c, i);
            while !seen[at.crossing][at.index] {
                seen[at.crossing][at.index] = true;
                let label = d.label_at(at);
                let end = end_index(d, label, at);
                boundary.push(BoundarySlot { edge: label, end });
                let arrive = d.edge_ends(label)[1 - end];
                at = Slot::new(arrive.crossing, (arrive.index + 3) % 4);
            }
            faces.push(Face {
                id: faces.len(),
                boundary,
            });
        }
    }
    if faces.len() != n + 2 {
        return Err(DiagramError::EulerViolation {
            faces: faces.len(),
            expected: n + 2,
        });
    }
    Ok(faces)
}

/// Build the dual multigraph: one dual edge per projection edge, parallel
/// edges kept distinct.
pub fn build_dual(d: &Diagram, faces: Vec<Face>) -> Result<DualGraph, DiagramError> {
    let mut side_face = vec![[usize::MAX; 2]; d.edge_count()];
    for f in &faces {
        for b in &f.boundary {
            side_face[b.edge as usize - 1][b.end] = f.id;
        }
    }
    let mut edges = Vec::with_capacity(d.edge_count());
    let mut incident = vec![Vec::new(); faces.len()];
    for label in d.edge_labels() {
        let [a, b] = side_face[label as usize - 1];
        if a == b {
            return Err(DiagramError::BridgeDetected(label));
        }
        incident[a].push(label);
        incident[b].push(label);
        edges.push(DualEdge {
            label,
            faces: [a, b],
            strand: d.strand_of_edge(label),
        });
    }
    Ok(DualGraph {
        faces,
        edges,
        incident,
    })
}

impl DualGraph {
    pub fn new(d: &Diagram) -> Result<Self, DiagramError> {
        build_dual(d, trace_faces(d)?)
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn edges(&self) -> &[DualEdge] {
        &self.edges
    }

    pub fn edge(&self, label: EdgeLabel) -> &DualEdge {
        &self.edges[label as usize - 1]
    }

    /// Labels of dual edges incident to a face (a parallel edge appears once per end).
    pub fn incident(&self, f: FaceId) -> &[EdgeLabel] {
        &self.incident[f]
    }

    pub fn degree(&self, f: FaceId) -> usize {
        self.incident[f].len()
    }

    pub fn edges_between(&self, a: FaceId, b: FaceId) -> impl Iterator<Item = &DualEdge> + '_ {
        self.incident[a]
            .iter()
            .map(|&l| self.edge(l))
            .filter(move |e| e.joins(a, b))
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.faces.len());
        for e in &self.edges {
            uf.union(e.faces[0], e.faces[1]);
        }
        uf.count() <= 1
    }

    /// Shortest path between two faces using only dual edges accepted by
    /// `allowed`. Returns the face sequence and the edges walked.
    pub fn find_path(
        &self,
        from: FaceId,
        to: FaceId,
        mut allowed: impl FnMut(&DualEdge) -> bool,
    ) -> Option<(Vec<FaceId>, Vec<EdgeLabel>)> {
        let mut prev: Vec<Option<(FaceId, EdgeLabel)>> = vec![None; self.faces.len()];
        let mut visited = vec![false; self.faces.len()];
        let mut queue = VecDeque::from([from]);
        visited[from] = true;
        while let Some(f) = queue.pop_front() {
            if f == to {
                let mut faces = vec![to];
                let mut labels = Vec::new();
                let mut at = to;
                while let Some((p, l)) = prev[at] {
                    faces.push(p);
                    labels.push(l);
                    at = p;
                }
                faces.reverse();
                labels.reverse();
                return Some((faces, labels));
            }
            for &l in &self.incident[f] {
                let e = self.edge(l);
                let g = e.other(f);
                if !visited[g] && allowed(e) {
                    visited[g] = true;
                    prev[g] = Some((f, l));
                    queue.push_back(g);
                }
            }
        }
        None
    }

    /// Diagnostic edge list: `face face edge_label strand` per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let _ = writeln!(
                out,
                "{} {} {} {}",
                e.faces[0], e.faces[1], e.label, e.strand
            );
        }
        out
    }
}
