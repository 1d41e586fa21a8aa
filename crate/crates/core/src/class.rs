//! Graph classes and the certificates that attest membership.
//!
//! Certificates can only be produced by the recognizer
//! ([`ClassCertificate::k4_minor_free`]), by the generators, or by
//! [`ClassCertificate::from_json`], which re-verifies the witness against
//! the graph before accepting it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Girth, Graph, ReductionStep, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphClass {
    K4MinorFree,
    Outer1Planar,
    PlanarGirth12,
    Unrestricted,
}

impl GraphClass {
    pub fn name(self) -> &'static str {
        match self {
            GraphClass::K4MinorFree => "k4mf",
            GraphClass::Outer1Planar => "o1p",
            GraphClass::PlanarGirth12 => "girth12",
            GraphClass::Unrestricted => "any",
        }
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "k4mf" => Ok(GraphClass::K4MinorFree),
            "o1p" => Ok(GraphClass::Outer1Planar),
            "girth12" => Ok(GraphClass::PlanarGirth12),
            "any" => Ok(GraphClass::Unrestricted),
            _ => Err(format!("unknown class `{s}` (expected k4mf, o1p, girth12 or any)")),
        }
    }
}

/// Outer drawing: vertices on a circle in `order`, edges as chords.
/// `crossings` lists every crossing pair of edges, each edge `(a, b)` with
/// `a < b`, pairs sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OuterEmbedding {
    pub order: Vec<VertexId>,
    pub crossings: Vec<[(VertexId, VertexId); 2]>,
}

impl OuterEmbedding {
    /// Drawing of `g` on the circle in `order`, with crossings computed.
    /// `None` if `order` is not a permutation of the vertices.
    pub fn from_order(g: &Graph, order: Vec<VertexId>) -> Option<Self> {
        let crossings = crossing_pairs(g, &order)?;
        Some(OuterEmbedding { order, crossings })
    }

    /// At most one crossing per edge.
    pub fn is_outer_1_planar(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.crossings.iter().flatten().all(|e| seen.insert(*e))
    }

    pub fn is_outerplanar(&self) -> bool {
        self.crossings.is_empty()
    }
}

/// Every pair of edges that cross when the vertices sit on a circle in
/// `order`. Two chords cross exactly when their endpoints are distinct and
/// interleave around the circle.
pub fn crossing_pairs(g: &Graph, order: &[VertexId]) -> Option<Vec<[(VertexId, VertexId); 2]>> {
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    if pos.len() != order.len() || order.len() != g.order() || g.vertices().any(|v| !pos.contains_key(&v)) {
        return None;
    }
    let edges = g.edges();
    let mut out = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        let (pa, pb) = (pos[&a].min(pos[&b]), pos[&a].max(pos[&b]));
        let inside = |v: VertexId| pos[&v] > pa && pos[&v] < pb;
        for &(c, d) in &edges[i + 1..] {
            if [a, b].contains(&c) || [a, b].contains(&d) {
                continue;
            }
            if inside(c) != inside(d) {
                out.push([(a, b), (c, d)]);
            }
        }
    }
    Some(out)
}

/// Cyclic order of neighbors around every vertex of a drawing.
pub type Rotation = BTreeMap<VertexId, Vec<VertexId>>;

/// Rotation of the straight-line drawing with vertices on a circle in
/// `order`: neighbors of `v` sorted by clockwise distance from `v`.
pub fn circle_rotation(g: &Graph, order: &[VertexId]) -> Rotation {
    let n = order.len();
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    g.vertices()
        .map(|v| {
            let mut ns: Vec<VertexId> = g.neighbors(v).iter().copied().collect();
            ns.sort_by_key(|w| (pos[w] + n - pos[&v]) % n);
            (v, ns)
        })
        .collect()
}

/// True when `rot` is a rotation system of the connected graph `g` whose
/// face count satisfies Euler's formula `V - E + F = 2`, that is, a planar
/// embedding.
pub fn is_planar_rotation(g: &Graph, rot: &Rotation) -> bool {
    if !g.is_connected() || g.size() == 0 || rot.len() != g.order() {
        return g.order() == 1 && g.size() == 0;
    }
    for v in g.vertices() {
        let Some(r) = rot.get(&v) else { return false };
        let as_set: BTreeSet<VertexId> = r.iter().copied().collect();
        if r.len() != as_set.len() || as_set != *g.neighbors(v) {
            return false;
        }
    }
    let succ = |v: VertexId, u: VertexId| {
        let r = &rot[&v];
        let i = r.iter().position(|&x| x == u).unwrap();
        r[(i + 1) % r.len()]
    };
    let mut seen: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    let mut faces = 0;
    for (u, v) in g.edges() {
        for start in [(u, v), (v, u)] {
            if seen.contains(&start) {
                continue;
            }
            faces += 1;
            let mut dart = start;
            while seen.insert(dart) {
                let (a, b) = dart;
                dart = (b, succ(b, a));
            }
        }
    }
    g.order() + faces == g.size() + 2
}

/// A planar base graph whose every edge was subdivided `subdivisions`
/// times. Base vertices keep their ids; the new vertices of the `i`-th base
/// edge (in sorted order) are numbered consecutively from
/// `base_order + i * subdivisions`, running from the smaller endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionWitness {
    pub base_order: usize,
    pub base_edges: Vec<(VertexId, VertexId)>,
    #[serde(with = "rotation_pairs")]
    pub base_rotation: Rotation,
    pub base_girth: usize,
    pub subdivisions: usize,
}

/// Rotations as `[vertex, [neighbors...]]` pairs; maps keyed by integers do
/// not survive serde's buffering inside tagged enums.
mod rotation_pairs {
    use super::Rotation;
    use crate::graph::VertexId;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rot: &Rotation, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(&VertexId, &Vec<VertexId>)> = rot.iter().collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rotation, D::Error> {
        let pairs: Vec<(VertexId, Vec<VertexId>)> = Vec::deserialize(d)?;
        Ok(pairs.into_iter().collect())
    }
}

impl SubdivisionWitness {
    pub fn base(&self) -> Option<Graph> {
        Graph::from_edges(self.base_order, &self.base_edges).ok()
    }

    pub fn build(&self) -> Option<Graph> {
        Some(crate::generators::named::subdivide_edges(
            &self.base()?,
            self.subdivisions,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Series-parallel reduction that deletes every vertex.
    Reduction {
        steps: Vec<ReductionStep>,
    },
    /// Outer drawing with at most one crossing per edge.
    Embedding(OuterEmbedding),
    /// Subdivision of a planar base.
    Subdivision(SubdivisionWitness),
    None,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("certificate does not verify against the graph: {0}")]
    Invalid(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

/// Proof that a graph belongs to a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCertificate {
    class: GraphClass,
    max_degree: usize,
    witness: Witness,
}

impl ClassCertificate {
    pub fn class(&self) -> GraphClass {
        self.class
    }

    /// Maximum degree of the certified graph.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn unrestricted(g: &Graph) -> Self {
        ClassCertificate {
            class: GraphClass::Unrestricted,
            max_degree: g.max_degree(),
            witness: Witness::None,
        }
    }

    /// Runs the K4-minor recognizer; `Some` with the reduction trace when
    /// the graph has no K4 minor.
    pub fn k4_minor_free(g: &Graph) -> Option<Self> {
        let (ok, steps) = g.k4_minor_reduction();
        ok.then(|| ClassCertificate {
            class: GraphClass::K4MinorFree,
            max_degree: g.max_degree(),
            witness: Witness::Reduction { steps },
        })
    }

    /// Certifies outer-1-planarity from a drawing, after checking it.
    pub fn outer_1_planar(g: &Graph, embedding: OuterEmbedding) -> Option<Self> {
        let cert = ClassCertificate {
            class: GraphClass::Outer1Planar,
            max_degree: g.max_degree(),
            witness: Witness::Embedding(embedding),
        };
        cert.verify(g).ok().map(|_| cert)
    }

    pub(crate) fn planar_girth12(g: &Graph, witness: SubdivisionWitness) -> Option<Self> {
        let cert = ClassCertificate {
            class: GraphClass::PlanarGirth12,
            max_degree: g.max_degree(),
            witness: Witness::Subdivision(witness),
        };
        cert.verify(g).ok().map(|_| cert)
    }

    /// Re-checks the witness against `g`.
    pub fn verify(&self, g: &Graph) -> Result<(), CertificateError> {
        let bad = |m: &str| Err(CertificateError::Invalid(m.to_string()));
        if self.max_degree != g.max_degree() {
            return bad("maximum degree differs");
        }
        match (&self.class, &self.witness) {
            (GraphClass::Unrestricted, Witness::None) => Ok(()),
            (GraphClass::K4MinorFree, Witness::Reduction { steps }) => {
                let (ok, expected) = g.k4_minor_reduction();
                if ok && *steps == expected {
                    Ok(())
                } else {
                    bad("reduction trace does not replay")
                }
            }
            (GraphClass::Outer1Planar, Witness::Embedding(e)) => match crossing_pairs(g, &e.order) {
                Some(pairs) if pairs == e.crossings && e.is_outer_1_planar() => Ok(()),
                Some(_) => bad("crossings do not match the drawing or some edge crosses twice"),
                None => bad("vertex order is not a permutation of the vertices"),
            },
            (GraphClass::PlanarGirth12, Witness::Subdivision(w)) => {
                let Some(base) = w.base() else {
                    return bad("base edge list is invalid");
                };
                if !is_planar_rotation(&base, &w.base_rotation) {
                    return bad("base rotation is not a planar embedding");
                }
                if base.girth() != Girth::Finite(w.base_girth) {
                    return bad("base girth differs");
                }
                if (w.subdivisions + 1) * w.base_girth < 12 {
                    return bad("too few subdivisions for girth 12");
                }
                if w.build().as_ref() != Some(g) {
                    return bad("graph is not the stated subdivision");
                }
                if !g.girth().at_least(12) {
                    return bad("girth below 12");
                }
                Ok(())
            }
            _ => bad("witness kind does not fit the class"),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Parses a certificate and accepts it only if it verifies against `g`.
    pub fn from_json(g: &Graph, text: &str) -> Result<Self, CertificateError> {
        let cert: ClassCertificate =
            serde_json::from_str(text).map_err(|e| CertificateError::Malformed(e.to_string()))?;
        cert.verify(g)?;
        Ok(cert)
    }
}
