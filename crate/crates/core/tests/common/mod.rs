//! Shared fixtures and a brute-force oracle for ω(D) and ρ(D).
//!
//! The oracle works from the raw PD tuples only. It derives strands by
//! joining over-pass edges, traces faces with the opposite turning rule from
//! the library, enumerates every simple cycle of the dual multigraph as an
//! edge subset, and tries every seed subset. It is exponential and meant for
//! diagrams with at most about seven crossings.

#![allow(dead_code)]

pub mod mutate;

use std::collections::HashMap;
use std::path::PathBuf;

use psk_core::census::{ingest, TableRow};
use psk_core::{parse_pd, Diagram, DualGraph};

pub fn data_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(file)
}

pub fn table(file: &str) -> Vec<TableRow> {
    let ing = ingest(&data_path(file)).expect("fixture table readable");
    assert!(ing.skipped.is_empty(), "{file}: {:?}", ing.skipped);
    ing.rows
}

pub struct Fixture {
    pub name: String,
    pub diagram: Diagram,
    pub dual: DualGraph,
    pub beta_ref: Option<u32>,
}

pub fn fixtures(file: &str) -> Vec<Fixture> {
    table(file)
        .into_iter()
        .map(|r| {
            let diagram = parse_pd(&r.pd).unwrap_or_else(|e| panic!("{}: {e}", r.name));
            let dual = DualGraph::new(&diagram).unwrap_or_else(|e| panic!("{}: {e}", r.name));
            Fixture {
                name: r.name,
                diagram,
                dual,
                beta_ref: r.beta_ref,
            }
        })
        .collect()
}

/// Every bundled fixture diagram.
pub fn all_fixtures() -> Vec<Fixture> {
    let mut all = fixtures("small_diagrams.csv");
    all.extend(fixtures("knots_through_10.csv"));
    all.extend(fixtures("slice_14n.csv"));
    all
}

pub fn fourteen_n_1527() -> (Diagram, DualGraph) {
    let text = std::fs::read_to_string(data_path("14n1527.pd")).unwrap();
    let d = parse_pd(&text).unwrap();
    let g = DualGraph::new(&d).unwrap();
    (d, g)
}

/// Independent reference values (name -> (omega, rho)).
pub fn reference_values() -> HashMap<String, (usize, usize)> {
    let mut rdr = csv::Reader::from_path(data_path("reference_values.csv")).unwrap();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (
                r[0].to_string(),
                (r[2].parse().unwrap(), r[3].parse().unwrap()),
            )
        })
        .collect()
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn join(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

pub struct Oracle {
    pub n_strands: usize,
    /// Strand owning edge label `l` at index `l - 1`.
    pub strand_of_edge: Vec<usize>,
    /// (under strand, under strand, over strand) per crossing.
    pub crossings: Vec<(usize, usize, usize)>,
    /// Owning strand of each dual edge in each simple cycle.
    pub cycles: Vec<Vec<usize>>,
    pub face_count: usize,
}

impl Oracle {
    pub fn new(tuples: &[[u32; 4]]) -> Self {
        let n_edges = 2 * tuples.len();
        // Strands: edges glued wherever they pass over a crossing.
        let mut dsu = Dsu::new(n_edges);
        for t in tuples {
            dsu.join(t[1] as usize - 1, t[3] as usize - 1);
        }
        let mut ids = HashMap::new();
        let strand: Vec<usize> = (0..n_edges)
            .map(|e| {
                let r = dsu.find(e);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect();
        let crossings: Vec<(usize, usize, usize)> = tuples
            .iter()
            .map(|t| {
                (
                    strand[t[0] as usize - 1],
                    strand[t[2] as usize - 1],
                    strand[t[1] as usize - 1],
                )
            })
            .collect();

        // Faces: cross the edge, then turn to the next slot counterclockwise.
        let mut ends: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
        for (c, t) in tuples.iter().enumerate() {
            for (i, &l) in t.iter().enumerate() {
                ends.entry(l).or_default().push((c, i));
            }
        }
        let mut face_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut face_count = 0;
        for c in 0..tuples.len() {
            for i in 0..4 {
                if face_of.contains_key(&(c, i)) {
                    continue;
                }
                let mut at = (c, i);
                while !face_of.contains_key(&at) {
                    face_of.insert(at, face_count);
                    let l = tuples[at.0][at.1];
                    let e = &ends[&l];
                    let there = if e[0] == at { e[1] } else { e[0] };
                    at = (there.0, (there.1 + 1) % 4);
                }
                face_count += 1;
            }
        }
        let dual: Vec<(usize, usize, usize)> = (1..=n_edges as u32)
            .map(|l| {
                let e = &ends[&l];
                (face_of[&e[0]], face_of[&e[1]], strand[l as usize - 1])
            })
            .collect();

        // Simple cycles: edge subsets where every touched face has degree 2
        // and the touched faces are connected.
        let mut cycles = Vec::new();
        for mask in 1u64..(1u64 << n_edges) {
            let mut deg = vec![0u8; face_count];
            let mut ok = true;
            for (i, &(a, b, _)) in dual.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if a == b {
                        ok = false;
                        break;
                    }
                    deg[a] += 1;
                    deg[b] += 1;
                }
            }
            if !ok || deg.iter().any(|&x| x != 0 && x != 2) {
                continue;
            }
            let mut comp = Dsu::new(face_count);
            for (i, &(a, b, _)) in dual.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    comp.join(a, b);
                }
            }
            let touched: Vec<usize> = (0..face_count).filter(|&f| deg[f] == 2).collect();
            let root = comp.find(touched[0]);
            if touched.iter().all(|&f| comp.find(f) == root) {
                cycles.push(
                    (0..n_edges)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| dual[i].2)
                        .collect(),
                );
            }
        }

        Oracle {
            n_strands: ids.len(),
            strand_of_edge: strand,
            crossings,
            cycles,
            face_count,
        }
    }

    pub fn from_diagram(d: &Diagram) -> Self {
        let tuples: Vec<[u32; 4]> = d.crossings().iter().map(|c| c.pd).collect();
        Oracle::new(&tuples)
    }

    fn wirtinger_closure(&self, mut colored: Vec<bool>) -> Vec<bool> {
        loop {
            let mut changed = false;
            for &(u, v, o) in &self.crossings {
                if colored[o] && colored[u] != colored[v] {
                    colored[u] = true;
                    colored[v] = true;
                    changed = true;
                }
            }
            if !changed {
                return colored;
            }
        }
    }

    fn cycle_closure(&self, mut colored: Vec<bool>) -> Vec<bool> {
        loop {
            let mut changed = false;
            for cyc in &self.cycles {
                let mut uncolored = cyc.iter().filter(|&&s| !colored[s]);
                if let (Some(&s), None) = (uncolored.next(), uncolored.next()) {
                    colored[s] = true;
                    changed = true;
                }
            }
            if !changed {
                return colored;
            }
        }
    }

    pub fn closure(&self, seeds: &[usize], plain_sphere: bool) -> Vec<bool> {
        let mut colored = vec![false; self.n_strands];
        for &s in seeds {
            colored[s] = true;
        }
        if plain_sphere {
            self.cycle_closure(colored)
        } else {
            self.wirtinger_closure(colored)
        }
    }

    fn min_seeds(&self, plain_sphere: bool) -> usize {
        let n = self.n_strands;
        let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
        masks.sort_by_key(|m| m.count_ones());
        for m in masks {
            let seeds: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            if self.closure(&seeds, plain_sphere).iter().all(|&c| c) {
                return seeds.len();
            }
        }
        unreachable!()
    }

    pub fn omega(&self) -> usize {
        self.min_seeds(false)
    }

    pub fn rho(&self) -> usize {
        self.min_seeds(true)
    }
}
