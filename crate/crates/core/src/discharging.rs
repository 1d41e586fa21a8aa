//! Threads, structural properties and charge redistribution for planar
//! graphs of girth at least 12.
//!
//! A *t-thread* is a path `u x1 ... xt v` whose interior vertices have
//! degree 2 and whose ends have degree at least 3; each `xi` is a
//! thread-2-vertex of both ends. Charges are kept as integer numbers of
//! fifths: a vertex starts with `5 d(v) - 12` fifths, and every 3-vertex,
//! 4-vertex and 5⁺-vertex sends 1, 2 and 1 fifths respectively to each of
//! its thread-2-vertices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Sub, SubAssign};

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::class::{ClassCertificate, GraphClass};
use crate::graph::{Graph, VertexId};
use crate::patterns::{find, find_any, pattern, verify_match, ConfigId, ConfigMatch};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DischargeError {
    #[error("the graph is a cycle, so it has no threads")]
    Cycle,
    #[error("a planar girth-12 certificate is required")]
    CertificateMissing,
}

/// An exact multiple of 1/5.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fifths(pub i64);

impl fmt::Display for Fifths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/5", self.0)
    }
}

impl Serialize for Fifths {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fifths {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.strip_suffix("/5")
            .and_then(|p| p.parse().ok())
            .map(Fifths)
            .ok_or_else(|| serde::de::Error::custom(format!("expected `p/5`, got `{s}`")))
    }
}

impl Add for Fifths {
    type Output = Fifths;
    fn add(self, o: Fifths) -> Fifths {
        Fifths(self.0 + o.0)
    }
}

impl Sub for Fifths {
    type Output = Fifths;
    fn sub(self, o: Fifths) -> Fifths {
        Fifths(self.0 - o.0)
    }
}

impl AddAssign for Fifths {
    fn add_assign(&mut self, o: Fifths) {
        self.0 += o.0;
    }
}

impl SubAssign for Fifths {
    fn sub_assign(&mut self, o: Fifths) {
        self.0 -= o.0;
    }
}

impl std::iter::Sum for Fifths {
    fn sum<I: Iterator<Item = Fifths>>(iter: I) -> Fifths {
        Fifths(iter.map(|f| f.0).sum())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thread {
    /// End vertices; `interior` runs from `ends.0` to `ends.1`.
    pub ends: (VertexId, VertexId),
    pub interior: Vec<VertexId>,
}

impl Thread {
    pub fn len(&self) -> usize {
        self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }
}

/// One end of a thread seen from its end vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Incidence {
    thread: usize,
    /// Interior vertices, nearest first.
    path: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreadDecomposition {
    pub threads: Vec<Thread>,
    /// Number of thread-2-vertices of every 3⁺-vertex, counted once per
    /// thread end.
    pub thread_vertices: BTreeMap<VertexId, usize>,
}

impl ThreadDecomposition {
    fn incidences(&self) -> BTreeMap<VertexId, Vec<Incidence>> {
        let mut out: BTreeMap<VertexId, Vec<Incidence>> = BTreeMap::new();
        for (i, t) in self.threads.iter().enumerate() {
            out.entry(t.ends.0).or_default().push(Incidence {
                thread: i,
                path: t.interior.clone(),
            });
            out.entry(t.ends.1).or_default().push(Incidence {
                thread: i,
                path: t.interior.iter().rev().copied().collect(),
            });
        }
        out
    }
}

/// Every t-thread with `t >= 1`, found by walking from each 3⁺-vertex
/// along its 2-vertex neighbors. Chains of 2-vertices that end in a
/// 1-vertex are not threads.
pub fn threads(g: &Graph) -> Result<ThreadDecomposition, DischargeError> {
    if g.is_cycle() {
        return Err(DischargeError::Cycle);
    }
    let mut threads: Vec<Thread> = Vec::new();
    let mut owner: BTreeMap<VertexId, usize> = BTreeMap::new();
    for s in g.vertices().filter(|&v| g.deg(v) >= 3) {
        for &first in g.neighbors(s) {
            if g.deg(first) != 2 || owner.contains_key(&first) {
                continue;
            }
            let mut interior = vec![first];
            let (mut prev, mut cur) = (s, first);
            let end = loop {
                let next = *g.neighbors(cur).iter().find(|&&z| z != prev).unwrap();
                if g.deg(next) != 2 {
                    break next;
                }
                interior.push(next);
                (prev, cur) = (cur, next);
            };
            if g.deg(end) >= 3 {
                for &x in &interior {
                    owner.insert(x, threads.len());
                }
                threads.push(Thread {
                    ends: (s, end),
                    interior,
                });
            }
        }
    }
    let mut thread_vertices: BTreeMap<VertexId, usize> =
        g.vertices().filter(|&v| g.deg(v) >= 3).map(|v| (v, 0)).collect();
    for t in &threads {
        *thread_vertices.get_mut(&t.ends.0).unwrap() += t.len();
        *thread_vertices.get_mut(&t.ends.1).unwrap() += t.len();
    }
    Ok(ThreadDecomposition {
        threads,
        thread_vertices,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub name: String,
    pub holds: bool,
    /// Vertex at which the property fails.
    pub at: Option<VertexId>,
    /// Configuration whose presence the failure exhibits.
    pub witness: Option<ConfigMatch>,
}

fn make_match(id: ConfigId, roles: &[(char, VertexId)]) -> ConfigMatch {
    let p = pattern(id).unwrap();
    let vertices = p
        .role_names()
        .iter()
        .map(|c| roles.iter().find(|r| r.0 == *c).expect("every role is given").1)
        .collect();
    ConfigMatch { id, vertices }
}

/// Checks the five structural properties that hold when none of T1, T5,
/// T8, T11, T12, T36 is present:
///
/// - P1: minimum degree at least 2 (else T1);
/// - P2: no thread has 4 or more 2-vertices (else T8);
/// - P3: no 3-vertex ends a thread with 2 or more 2-vertices (else T5);
/// - P4: a 4-vertex ending a 3-thread ends no other 2⁺-thread (else T11),
///   and a 4-vertex ending a 2⁺-thread ends at most one other thread
///   (else T12);
/// - P5: no 5-vertex ends two 3⁺-threads (else T36).
pub fn check_properties(g: &Graph) -> Result<Vec<PropertyVerdict>, DischargeError> {
    let dec = threads(g)?;
    let inc = dec.incidences();
    let verdict = |name: &str, hit: Option<(VertexId, ConfigMatch)>| {
        let witness = hit.as_ref().map(|h| h.1.clone()).filter(|m| verify_match(g, m));
        PropertyVerdict {
            name: name.to_string(),
            holds: hit.is_none(),
            at: hit.map(|h| h.0),
            witness,
        }
    };
    let p1 = find(g, ConfigId::t(1)).map(|m| (m.role('u').unwrap(), m));
    let p2 = dec.threads.iter().find(|t| t.len() >= 4).map(|t| {
        let i = &t.interior;
        let y = if t.len() >= 5 { i[4] } else { t.ends.1 };
        let m = make_match(
            ConfigId::t(8),
            &[
                ('x', t.ends.0),
                ('u', i[0]),
                ('v', i[1]),
                ('w', i[2]),
                ('p', i[3]),
                ('y', y),
            ],
        );
        (i[0], m)
    });
    let mut p3 = None;
    let mut p4 = None;
    let mut p5 = None;
    for (&w, list) in &inc {
        match g.deg(w) {
            3 if p3.is_none() => {
                if let Some(a) = list.iter().find(|a| a.path.len() >= 2) {
                    p3 = Some((
                        w,
                        make_match(ConfigId::t(5), &[('u', a.path[1]), ('v', a.path[0]), ('w', w)]),
                    ));
                }
            }
            4 if p4.is_none() => {
                for a in list.iter().filter(|a| a.path.len() >= 3) {
                    if let Some(b) = list.iter().filter(|b| b.thread != a.thread).find(|b| b.path.len() >= 2) {
                        let (ap, bp) = (&a.path, &b.path);
                        let m = make_match(
                            ConfigId::t(11),
                            &[
                                ('w', w),
                                ('v', ap[0]),
                                ('u', ap[1]),
                                ('x', ap[2]),
                                ('p', bp[0]),
                                ('q', bp[1]),
                            ],
                        );
                        p4 = Some((w, m));
                        break;
                    }
                }
                if p4.is_none() {
                    for a in list.iter().filter(|a| a.path.len() >= 2) {
                        let rest: Vec<&Incidence> = list.iter().filter(|b| b.thread != a.thread).collect();
                        if rest.len() >= 2 {
                            let m = make_match(
                                ConfigId::t(12),
                                &[
                                    ('w', w),
                                    ('v', a.path[0]),
                                    ('u', a.path[1]),
                                    ('p', rest[0].path[0]),
                                    ('a', rest[1].path[0]),
                                ],
                            );
                            p4 = Some((w, m));
                            break;
                        }
                    }
                }
            }
            5 if p5.is_none() => {
                let long: Vec<&Incidence> = list.iter().filter(|a| a.path.len() >= 3).collect();
                if let Some(b) = long.iter().skip(1).find(|b| b.thread != long[0].thread) {
                    let (ap, bp) = (&long[0].path, &b.path);
                    let m = make_match(
                        ConfigId::t(36),
                        &[
                            ('w', w),
                            ('v', ap[0]),
                            ('u', ap[1]),
                            ('h', ap[2]),
                            ('p', bp[0]),
                            ('q', bp[1]),
                            ('l', bp[2]),
                        ],
                    );
                    p5 = Some((w, m));
                }
            }
            _ => {}
        }
    }
    Ok(vec![
        verdict("P1", p1),
        verdict("P2", p2),
        verdict("P3", p3),
        verdict("P4", p4),
        verdict("P5", p5),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Initial,
    Final,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeLedger {
    pub phase: Phase,
    pub charges: BTreeMap<VertexId, Fifths>,
}

impl ChargeLedger {
    pub fn total(&self) -> Fifths {
        self.charges.values().copied().sum()
    }
}

/// `5 d(v) - 12` fifths for every vertex.
pub fn initial_charges(g: &Graph) -> ChargeLedger {
    ChargeLedger {
        phase: Phase::Initial,
        charges: g.vertices().map(|v| (v, Fifths(5 * g.deg(v) as i64 - 12))).collect(),
    }
}

/// Fifths a vertex of degree `d` sends to each of its thread-2-vertices.
pub fn rate(d: usize) -> Fifths {
    match d {
        0..=2 => Fifths(0),
        4 => Fifths(2),
        _ => Fifths(1),
    }
}

/// Applies the three sending rules once per thread end. Panics if the
/// total charge changes, which would mean a bookkeeping bug.
pub fn run_discharging(g: &Graph) -> Result<(ChargeLedger, ChargeLedger), DischargeError> {
    let dec = threads(g)?;
    let initial = initial_charges(g);
    let mut charges = initial.charges.clone();
    for t in &dec.threads {
        for end in [t.ends.0, t.ends.1] {
            let r = rate(g.deg(end));
            for &x in &t.interior {
                *charges.get_mut(&end).unwrap() -= r;
                *charges.get_mut(&x).unwrap() += r;
            }
        }
    }
    let fin = ChargeLedger {
        phase: Phase::Final,
        charges,
    };
    assert_eq!(initial.total(), fin.total(), "discharging must conserve charge");
    Ok((initial, fin))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DischargeOutcome {
    /// Cycles have no threads; a long cycle contains T8.
    Cycle { config: Option<ConfigMatch> },
    Discharged {
        total_final: Fifths,
        conserved: bool,
        properties: Vec<PropertyVerdict>,
        all_properties_hold: bool,
        /// Vertices whose final charge is negative.
        negative: Vec<VertexId>,
        config: Option<ConfigMatch>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContradictionReport {
    pub vertices: usize,
    pub edges: usize,
    pub total_initial: Fifths,
    /// Total initial charge is at most -24/5.
    pub initial_bound_holds: bool,
    /// `|E| <= 6/5 (|V| - 2)`.
    pub edge_bound_holds: bool,
    pub outcome: DischargeOutcome,
}

/// The six configurations one of which every planar girth-12 graph has.
pub fn girth12_ids() -> Vec<ConfigId> {
    [1, 5, 8, 11, 12, 36].into_iter().map(ConfigId::t).collect()
}

/// Runs the full argument on a certified planar girth-12 graph: the total
/// initial charge is negative, charge is conserved, so some property fails
/// and one of the six configurations is present.
pub fn verify_contradiction(g: &Graph, cert: Option<&ClassCertificate>) -> Result<ContradictionReport, DischargeError> {
    match cert {
        Some(c) if c.class() == GraphClass::PlanarGirth12 && c.verify(g).is_ok() => {}
        _ => return Err(DischargeError::CertificateMissing),
    }
    let total_initial = initial_charges(g).total();
    let (n, m) = (g.order(), g.size());
    let config = find_any(g, &girth12_ids());
    let outcome = match run_discharging(g) {
        Err(DischargeError::Cycle) => DischargeOutcome::Cycle { config },
        Err(e) => return Err(e),
        Ok((initial, fin)) => {
            let properties = check_properties(g)?;
            DischargeOutcome::Discharged {
                total_final: fin.total(),
                conserved: initial.total() == fin.total(),
                all_properties_hold: properties.iter().all(|p| p.holds),
                properties,
                negative: fin.charges.iter().filter(|(_, c)| c.0 < 0).map(|(&v, _)| v).collect(),
                config,
            }
        }
    };
    Ok(ContradictionReport {
        vertices: n,
        edges: m,
        total_initial,
        initial_bound_holds: total_initial <= Fifths(-24),
        edge_bound_holds: 5 * m + 12 <= 6 * n,
        outcome,
    })
}
