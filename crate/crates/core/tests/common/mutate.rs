//! Single mutations of valid certificates, each paired with the rejection
//! reasons it may legitimately produce.

use psk_core::{verify, Certificate, Diagram, DualGraph, FormatError, Mode, Move};
use rand::rngs::StdRng;
use rand::Rng;

pub const KINDS: usize = 20;

pub struct Mutant {
    pub kind: &'static str,
    pub text: String,
    pub expected: &'static [&'static str],
}

/// Outcome of parsing then replaying a certificate: `Ok(bound)` or a reason.
pub fn check(d: &Diagram, g: &DualGraph, text: &str) -> Result<usize, &'static str> {
    let cert = Certificate::deserialize(text).map_err(|e| match e {
        FormatError::VersionMismatch { .. } => "VersionMismatch",
        FormatError::Schema { .. } => "Schema",
    })?;
    verify(d, g, &cert).map_err(|r| r.code())
}

fn rebuild(d: &Diagram, c: &Certificate, seeds: Vec<usize>, moves: Vec<Move>) -> Certificate {
    Certificate::new(d, c.mode, seeds, moves)
}

fn pick<T>(rng: &mut StdRng, v: &[T]) -> Option<usize> {
    (!v.is_empty()).then(|| rng.gen_range(0..v.len()))
}

fn loop_indices(c: &Certificate) -> Vec<usize> {
    (0..c.moves.len())
        .filter(|&i| c.moves[i].is_loop())
        .collect()
}

fn wirtinger_indices(c: &Certificate) -> Vec<usize> {
    (0..c.moves.len())
        .filter(|&i| !c.moves[i].is_loop())
        .collect()
}

/// Apply mutation `kind` to a valid certificate. `None` when the mutation
/// does not apply to this certificate.
pub fn mutate(
    d: &Diagram,
    g: &DualGraph,
    c: &Certificate,
    kind: usize,
    rng: &mut StdRng,
) -> Option<Mutant> {
    let n = d.strand_count();
    let text = c.serialize();
    let lines: Vec<&str> = text.lines().collect();
    let seeds_only = |s: usize| c.seeds.contains(&s);

    let (name, cert, expected): (&'static str, Certificate, &'static [&'static str]) = match kind {
        0 => {
            let mut m = c.clone();
            let i = rng.gen_range(0..m.diagram_hash.len());
            let old = m.diagram_hash.as_bytes()[i];
            let new = if old == b'0' { '1' } else { '0' };
            m.diagram_hash.replace_range(i..i + 1, &new.to_string());
            ("hash", m, &["HashMismatch"])
        }
        1 => {
            let t = text.replacen("psk-cert/1", "psk-cert/2", 1);
            return Some(Mutant {
                kind: "header",
                text: t,
                expected: &["VersionMismatch"],
            });
        }
        2 => {
            if c.moves.is_empty() {
                return None;
            }
            let t = lines[..lines.len() - 1].join("\n");
            return Some(Mutant {
                kind: "truncate",
                text: t,
                expected: &["Schema"],
            });
        }
        3 => {
            let mut moves = c.moves.clone();
            moves.pop()?;
            (
                "drop-last-move",
                rebuild(d, c, c.seeds.clone(), moves),
                &["IncompleteColoring"],
            )
        }
        4 => {
            let i = pick(rng, &c.seeds)?;
            let mut seeds = c.seeds.clone();
            seeds.remove(i);
            (
                "drop-seed",
                rebuild(d, c, seeds, c.moves.clone()),
                &[
                    "WirtingerConditionFailed",
                    "CycleEdgeUncolored",
                    "IncompleteColoring",
                ],
            )
        }
        5 => {
            let i = pick(rng, &c.seeds)?;
            let mut seeds = c.seeds.clone();
            seeds.push(c.seeds[i]);
            (
                "duplicate-seed",
                rebuild(d, c, seeds, c.moves.clone()),
                &["DuplicateSeed"],
            )
        }
        6 => {
            let mut seeds = c.seeds.clone();
            seeds.push(n + rng.gen_range(0..5));
            (
                "seed-out-of-range",
                rebuild(d, c, seeds, c.moves.clone()),
                &["UnknownStrand"],
            )
        }
        7 => {
            let i = pick(rng, &c.moves)?;
            let s = c.seeds[rng.gen_range(0..c.seeds.len())];
            let mut moves = c.moves.clone();
            set_target(&mut moves[i], s);
            (
                "target-is-seed",
                rebuild(d, c, c.seeds.clone(), moves),
                &["TargetAlreadyColored"],
            )
        }
        8 => {
            let i = pick(rng, &c.moves)?;
            let mut moves = c.moves.clone();
            set_target(&mut moves[i], n + rng.gen_range(0..5));
            (
                "target-out-of-range",
                rebuild(d, c, c.seeds.clone(), moves),
                &["UnknownStrand"],
            )
        }
        9 => {
            if c.moves.len() < 2 {
                return None;
            }
            let i = rng.gen_range(1..c.moves.len());
            let j = rng.gen_range(0..i);
            let mut moves = c.moves.clone();
            let earlier = moves[j].target();
            set_target(&mut moves[i], earlier);
            (
                "target-repeated",
                rebuild(d, c, c.seeds.clone(), moves),
                &["TargetAlreadyColored"],
            )
        }
        10 => {
            let ws = wirtinger_indices(c);
            let i = ws[pick(rng, &ws)?];
            let target = c.moves[i].target();
            let wrong: Vec<usize> = (0..d.crossing_count())
                .filter(|&x| !d.crossing_strands(x).under.contains(&target))
                .collect();
            let x = wrong.get(pick(rng, &wrong)?).copied()?;
            let mut moves = c.moves.clone();
            moves[i] = Move::Wirtinger {
                target,
                crossing: x,
            };
            (
                "wrong-crossing",
                rebuild(d, c, c.seeds.clone(), moves),
                &["WirtingerConditionFailed"],
            )
        }
        11 => {
            // A Wirtinger move whose support is not all seeds, hoisted first.
            let i = wirtinger_indices(c).into_iter().find(|&i| {
                let Move::Wirtinger { target, crossing } = c.moves[i] else {
                    unreachable!()
                };
                let cs = d.crossing_strands(crossing);
                let other = if cs.under[0] == target {
                    cs.under[1]
                } else {
                    cs.under[0]
                };
                i > 0 && !(seeds_only(other) && seeds_only(cs.over))
            })?;
            let mut moves = c.moves.clone();
            let mv = moves.remove(i);
            moves.insert(0, mv);
            (
                "hoist-wirtinger",
                rebuild(d, c, c.seeds.clone(), moves),
                &["WirtingerConditionFailed"],
            )
        }
        12 => {
            // A loop with some step lacking a seed-owned dual edge, hoisted first.
            let i = loop_indices(c).into_iter().find(|&i| {
                let Move::Loop { faces, .. } = &c.moves[i] else {
                    unreachable!()
                };
                i > 0
                    && faces.windows(2).any(|w| {
                        !g.edges()
                            .iter()
                            .any(|e| e.joins(w[0], w[1]) && seeds_only(e.strand))
                    })
            })?;
            let mut moves = c.moves.clone();
            let mv = moves.remove(i);
            moves.insert(0, mv);
            (
                "hoist-loop",
                rebuild(d, c, c.seeds.clone(), moves),
                &["CycleEdgeUncolored"],
            )
        }
        13 => {
            let ls = loop_indices(c);
            let i = ls[pick(rng, &ls)?];
            let mut moves = c.moves.clone();
            let Move::Loop { faces, .. } = &mut moves[i] else {
                unreachable!()
            };
            let k = rng.gen_range(0..faces.len());
            faces[k] = g.face_count() + rng.gen_range(0..5);
            (
                "face-out-of-range",
                rebuild(d, c, c.seeds.clone(), moves),
                &["CycleEdgeMissing"],
            )
        }
        14 => {
            let ls = loop_indices(c);
            let i = ls[pick(rng, &ls)?];
            let mut moves = c.moves.clone();
            let Move::Loop { faces, .. } = &mut moves[i] else {
                unreachable!()
            };
            let k = rng.gen_range(0..faces.len());
            let f = faces[k];
            let at = rng.gen_range(1..faces.len());
            faces.insert(at, f);
            (
                "repeat-face",
                rebuild(d, c, c.seeds.clone(), moves),
                &["CycleNotSimple"],
            )
        }
        15 => {
            let ls = loop_indices(c);
            let i = ls[pick(rng, &ls)?];
            let mut moves = c.moves.clone();
            let Move::Loop { faces, .. } = &mut moves[i] else {
                unreachable!()
            };
            faces.pop();
            (
                "open-path",
                rebuild(d, c, c.seeds.clone(), moves),
                &["CycleNotClosed"],
            )
        }
        16 => {
            let ls = loop_indices(c);
            let i = ls[pick(rng, &ls)?];
            let mut moves = c.moves.clone();
            let Move::Loop { target, edge, .. } = &mut moves[i] else {
                unreachable!()
            };
            let others: Vec<u32> = d
                .edge_labels()
                .filter(|&l| d.strand_of_edge(l) != *target)
                .collect();
            *edge = others[rng.gen_range(0..others.len())];
            (
                "foreign-edge",
                rebuild(d, c, c.seeds.clone(), moves),
                &["CycleTargetCount"],
            )
        }
        17 => {
            let ls = loop_indices(c);
            let i = ls[pick(rng, &ls)?];
            let mut moves = c.moves.clone();
            let Move::Loop { edge, .. } = &mut moves[i] else {
                unreachable!()
            };
            *edge = d.edge_count() as u32 + 1 + rng.gen_range(0..5);
            (
                "edge-out-of-range",
                rebuild(d, c, c.seeds.clone(), moves),
                &["CycleEdgeMissing"],
            )
        }
        18 => {
            let mut m = c.clone();
            m.tau += rng.gen_range(1..4);
            ("tau", m, &["TauMismatch"])
        }
        19 => {
            if c.mode != Mode::PlainSphere || loop_indices(c).is_empty() {
                return None;
            }
            let mut m = c.clone();
            m.mode = Mode::Wirtinger;
            ("mode", m, &["LoopMoveNotAllowed"])
        }
        _ => unreachable!("mutation kind {kind}"),
    };
    Some(Mutant {
        kind: name,
        text: cert.serialize(),
        expected,
    })
}

fn set_target(mv: &mut Move, s: usize) {
    match mv {
        Move::Wirtinger { target, .. } | Move::Loop { target, .. } => *target = s,
    }
}

pub struct FuzzReport {
    pub valid_accepted: usize,
    pub valid_total: usize,
    pub mutants: usize,
    pub correct: usize,
    pub failures: Vec<String>,
}

/// Mutate every certificate with every applicable kind, `rounds` times.
pub fn fuzz(
    certs: &[(&Diagram, &DualGraph, &Certificate)],
    rounds: usize,
    seed: u64,
) -> FuzzReport {
    use rand::SeedableRng;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = FuzzReport {
        valid_accepted: 0,
        valid_total: 0,
        mutants: 0,
        correct: 0,
        failures: Vec::new(),
    };
    for &(d, g, c) in certs {
        report.valid_total += 1;
        if check(d, g, &c.serialize()) == Ok(c.seeds.len()) {
            report.valid_accepted += 1;
        } else {
            report
                .failures
                .push(format!("valid certificate rejected: {c:?}"));
        }
        for _ in 0..rounds {
            for kind in 0..KINDS {
                let Some(m) = mutate(d, g, c, kind, &mut rng) else {
                    continue;
                };
                report.mutants += 1;
                match check(d, g, &m.text) {
                    Err(code) if m.expected.contains(&code) => report.correct += 1,
                    got => report.failures.push(format!(
                        "{}: got {got:?}, expected one of {:?}\n{}",
                        m.kind, m.expected, m.text
                    )),
                }
            }
        }
    }
    report
}
