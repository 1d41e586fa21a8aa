//! List assignments, colorings and the PCF verifier.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};

pub type Color = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("neighbor {neighbor} of vertex {v} is uncolored")]
    UncoloredNeighbor { v: VertexId, neighbor: VertexId },
    #[error("vertex {0} is uncolored; the verifier needs a total coloring")]
    Partial(VertexId),
    #[error("vertex {0} has no list")]
    MissingList(VertexId),
    #[error("color {alpha} is not unique in the neighborhood of {u}")]
    NotUnique { u: VertexId, alpha: Color },
    #[error("{w} is not a neighbor of {u}")]
    NotNeighbor { u: VertexId, w: VertexId },
    #[error("neighbors of {u} other than {w} are not monochromatic, so the replacement color is undefined")]
    TauUndefined { u: VertexId, w: VertexId },
    #[error("universe of {have} colors is smaller than the largest list size {need}")]
    UniverseTooSmall { need: usize, have: usize },
}

/// Per-vertex color menus.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ListAssignment {
    pub lists: BTreeMap<VertexId, BTreeSet<Color>>,
}

impl ListAssignment {
    /// Every vertex of `g` gets the same list.
    pub fn uniform(g: &Graph, colors: impl IntoIterator<Item = Color>) -> Self {
        let list: BTreeSet<Color> = colors.into_iter().collect();
        ListAssignment {
            lists: g.vertices().map(|v| (v, list.clone())).collect(),
        }
    }

    pub fn get(&self, v: VertexId) -> Option<&BTreeSet<Color>> {
        self.lists.get(&v)
    }

    /// Errors with the first vertex of `g` lacking a list.
    pub fn check_covers(&self, g: &Graph) -> Result<(), ColoringError> {
        match g.vertices().find(|v| !self.lists.contains_key(v)) {
            Some(v) => Err(ColoringError::MissingList(v)),
            None => Ok(()),
        }
    }

    /// True when every list has exactly `d(v) + k` colors.
    pub fn is_degree_plus(&self, g: &Graph, k: usize) -> bool {
        g.vertices()
            .all(|v| self.lists.get(&v).is_some_and(|l| l.len() == g.deg(v) + k))
    }

    /// True when every list has exactly `size` colors.
    pub fn is_uniform_size(&self, g: &Graph, size: usize) -> bool {
        g.vertices()
            .all(|v| self.lists.get(&v).is_some_and(|l| l.len() == size))
    }

    /// Lists of the vertices of `g` only.
    pub fn restricted_to(&self, g: &Graph) -> ListAssignment {
        ListAssignment {
            lists: g
                .vertices()
                .filter_map(|v| self.lists.get(&v).map(|l| (v, l.clone())))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("list assignment serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// A possibly partial vertex coloring.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: BTreeMap<VertexId, Color>,
}

impl Coloring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: VertexId) -> Option<Color> {
        self.colors.get(&v).copied()
    }

    pub fn set(&mut self, v: VertexId, c: Color) {
        self.colors.insert(v, c);
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn is_total(&self, g: &Graph) -> bool {
        g.vertices().all(|v| self.colors.contains_key(&v))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coloring serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

impl FromIterator<(VertexId, Color)> for Coloring {
    fn from_iter<I: IntoIterator<Item = (VertexId, Color)>>(iter: I) -> Self {
        Coloring {
            colors: iter.into_iter().collect(),
        }
    }
}

/// Multiplicity of each color in `N(v)`.
fn neighbor_counts(g: &Graph, phi: &Coloring, v: VertexId) -> Result<BTreeMap<Color, usize>, ColoringError> {
    let ns = g.try_neighbors(v).map_err(|_| ColoringError::UnknownVertex(v))?;
    let mut counts = BTreeMap::new();
    for &w in ns {
        let c = phi.get(w).ok_or(ColoringError::UncoloredNeighbor { v, neighbor: w })?;
        *counts.entry(c).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Colors appearing exactly once on the neighbors of `v`.
pub fn unique_colors(g: &Graph, phi: &Coloring, v: VertexId) -> Result<BTreeSet<Color>, ColoringError> {
    Ok(neighbor_counts(g, phi, v)?
        .into_iter()
        .filter(|&(_, n)| n == 1)
        .map(|(c, _)| c)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Improper { u: VertexId, v: VertexId, color: Color },
    NoUniqueColor { v: VertexId },
    NotInList { v: VertexId, color: Color },
}

/// Verdict of [`is_pcf`] with the unique-color set of every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcfReport {
    pub pcf: bool,
    pub unique: BTreeMap<VertexId, BTreeSet<Color>>,
    pub violations: Vec<Violation>,
}

/// Checks that `phi` is proper, that every non-isolated vertex has a
/// unique color in its neighborhood, and (if given) that colors come from
/// the lists.
pub fn is_pcf(g: &Graph, phi: &Coloring, lists: Option<&ListAssignment>) -> Result<PcfReport, ColoringError> {
    if let Some(&v) = phi.colors.keys().find(|&&v| !g.contains(v)) {
        return Err(ColoringError::UnknownVertex(v));
    }
    if let Some(v) = g.vertices().find(|&v| phi.get(v).is_none()) {
        return Err(ColoringError::Partial(v));
    }
    let mut violations = Vec::new();
    for (u, v) in g.edges() {
        let c = phi.get(u).unwrap();
        if c == phi.get(v).unwrap() {
            violations.push(Violation::Improper { u, v, color: c });
        }
    }
    let mut unique = BTreeMap::new();
    for v in g.vertices() {
        let u = unique_colors(g, phi, v)?;
        if g.deg(v) > 0 && u.is_empty() {
            violations.push(Violation::NoUniqueColor { v });
        }
        unique.insert(v, u);
    }
    if let Some(lists) = lists {
        for v in g.vertices() {
            let c = phi.get(v).unwrap();
            let list = lists.get(v).ok_or(ColoringError::MissingList(v))?;
            if !list.contains(&c) {
                violations.push(Violation::NotInList { v, color: c });
            }
        }
    }
    Ok(PcfReport {
        pcf: violations.is_empty(),
        unique,
        violations,
    })
}

/// The color `u` keeps as a unique color when its neighbor `w` is recolored,
/// given that `alpha` is currently unique at `u`.
///
/// - one unique color, carried by `w`: the common color of the other
///   neighbors;
/// - one unique color, not carried by `w`: `alpha`;
/// - two unique colors, `w` carries `alpha`: the other one;
/// - otherwise `None`.
///
/// The first case needs the other neighbors to share one color; when they
/// do not, [`ColoringError::TauUndefined`] is returned.
pub fn tau(g: &Graph, phi: &Coloring, u: VertexId, w: VertexId, alpha: Color) -> Result<Option<Color>, ColoringError> {
    let counts = neighbor_counts(g, phi, u)?;
    if !g.has_edge(u, w) {
        return Err(ColoringError::NotNeighbor { u, w });
    }
    let unique: Vec<Color> = counts.iter().filter(|&(_, &n)| n == 1).map(|(&c, _)| c).collect();
    if !unique.contains(&alpha) {
        return Err(ColoringError::NotUnique { u, alpha });
    }
    let cw = phi.get(w).unwrap();
    match (unique.len(), cw == alpha) {
        (1, true) => {
            let rest: BTreeSet<Color> = g
                .neighbors(u)
                .iter()
                .filter(|&&z| z != w)
                .map(|&z| phi.get(z).unwrap())
                .collect();
            match rest.len() {
                1 => Ok(rest.into_iter().next()),
                _ => Err(ColoringError::TauUndefined { u, w }),
            }
        }
        (1, false) => Ok(Some(alpha)),
        (2, true) => Ok(unique.into_iter().find(|&c| c != alpha)),
        _ => Ok(None),
    }
}

/// Random `(degree + k)` assignment: each vertex gets a uniformly random
/// `d(v) + k`-subset of `1..=universe`, reproducible from `seed`.
pub fn degree_plus_k(g: &Graph, k: usize, universe: usize, seed: u64) -> Result<ListAssignment, ColoringError> {
    let need = g.max_degree() + k;
    if g.order() > 0 && universe < need {
        return Err(ColoringError::UniverseTooSmall { need, have: universe });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lists = g
        .vertices()
        .map(|v| {
            let picks = sample(&mut rng, universe, g.deg(v) + k);
            (v, picks.into_iter().map(|i| i as Color + 1).collect())
        })
        .collect();
    Ok(ListAssignment { lists })
}

/// Random lists of a fixed `size` drawn from `1..=universe`.
pub fn random_uniform_size(
    g: &Graph,
    size: usize,
    universe: usize,
    seed: u64,
) -> Result<ListAssignment, ColoringError> {
    if universe < size {
        return Err(ColoringError::UniverseTooSmall {
            need: size,
            have: universe,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lists = g
        .vertices()
        .map(|v| {
            (
                v,
                sample(&mut rng, universe, size)
                    .into_iter()
                    .map(|i| i as Color + 1)
                    .collect(),
            )
        })
        .collect();
    Ok(ListAssignment { lists })
}
