//! Catalog of reducible configurations and a backtracking matcher.
//!
//! Each configuration is a small pattern: named roles with a degree
//! predicate (measured in the host graph), pattern edges between roles and
//! optional guards. Roles with an exact or upper-bounded degree are
//! *solid* and must map to a vertex used by no other role. The remaining
//! roles are *hollow*: two hollow roles may share a vertex, unless that
//! would turn a pattern edge into a loop or two pattern edges into the same
//! host edge.
//!
//! A match assigns one vertex per role. [`find`] returns the match whose
//! vertex tuple, read in role declaration order, is lexicographically
//! smallest.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    T,
    H,
    F,
    X,
}

/// Configuration id such as `T8`, `H1`, `F3` or `X2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct ConfigId {
    pub family: Family,
    pub index: u8,
}

impl ConfigId {
    pub const fn t(index: u8) -> Self {
        ConfigId {
            family: Family::T,
            index,
        }
    }

    pub const fn x(index: u8) -> Self {
        ConfigId {
            family: Family::X,
            index,
        }
    }
}

impl fmt::Display for ConfigId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.family {
            Family::T => 'T',
            Family::H => 'H',
            Family::F => 'F',
            Family::X => 'X',
        };
        write!(f, "{c}{}", self.index)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown configuration id `{0}`")]
pub struct UnknownConfig(pub String);

impl FromStr for ConfigId {
    type Err = UnknownConfig;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || UnknownConfig(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('T') => Family::T,
            Some('H') => Family::H,
            Some('F') => Family::F,
            Some('X') => Family::X,
            _ => return Err(err()),
        };
        let index: u8 = chars.as_str().parse().map_err(|_| err())?;
        let id = ConfigId { family, index };
        if pattern(id).is_none() {
            return Err(err());
        }
        Ok(id)
    }
}

impl From<ConfigId> for String {
    fn from(id: ConfigId) -> String {
        id.to_string()
    }
}

impl TryFrom<String> for ConfigId {
    type Error = UnknownConfig;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreePred {
    Any,
    Exact(usize),
    NotEq(usize),
    AtMost(usize),
}

impl DegreePred {
    pub fn holds(self, d: usize) -> bool {
        match self {
            DegreePred::Any => true,
            DegreePred::Exact(k) => d == k,
            DegreePred::NotEq(k) => d != k,
            DegreePred::AtMost(k) => d <= k,
        }
    }

    pub fn is_solid(self) -> bool {
        matches!(self, DegreePred::Exact(_) | DegreePred::AtMost(_))
    }
}

impl fmt::Display for DegreePred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreePred::Any => f.write_str("any"),
            DegreePred::Exact(k) => write!(f, "{k}"),
            DegreePred::NotEq(k) => write!(f, "!{k}"),
            DegreePred::AtMost(k) => write!(f, "<={k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Guard {
    /// If roles `a` and `b` share a vertex, its degree is not `degree`.
    CoincideDegreeNot { a: usize, b: usize, degree: usize },
    /// `N(a) ∩ N(b)` is exactly the set of vertices of `roles`.
    CommonNeighbors { a: usize, b: usize, roles: Vec<usize> },
}

impl Guard {
    fn roles(&self) -> Vec<usize> {
        match self {
            Guard::CoincideDegreeNot { a, b, .. } => vec![*a, *b],
            Guard::CommonNeighbors { a, b, roles } => {
                let mut r = roles.clone();
                r.extend([*a, *b]);
                r
            }
        }
    }

    fn holds(&self, g: &Graph, at: &[VertexId]) -> bool {
        match self {
            Guard::CoincideDegreeNot { a, b, degree } => at[*a] != at[*b] || g.deg(at[*a]) != *degree,
            Guard::CommonNeighbors { a, b, roles } => {
                let common: BTreeSet<VertexId> =
                    g.neighbors(at[*a]).intersection(g.neighbors(at[*b])).copied().collect();
                let want: BTreeSet<VertexId> = roles.iter().map(|&r| at[r]).collect();
                common == want
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConfigPattern {
    pub id: ConfigId,
    pub roles: Vec<(char, DegreePred)>,
    /// Pattern edges as pairs of role indices.
    pub edges: Vec<(usize, usize)>,
    pub guards: Vec<Guard>,
    /// For each role, the pattern edges to earlier roles.
    back_edges: Vec<Vec<usize>>,
    /// For each role, the guards whose last role it is.
    guards_at: Vec<Vec<usize>>,
}

impl ConfigPattern {
    pub fn role_index(&self, name: char) -> Option<usize> {
        self.roles.iter().position(|r| r.0 == name)
    }

    pub fn role_names(&self) -> Vec<char> {
        self.roles.iter().map(|r| r.0).collect()
    }

    fn is_solid(&self, i: usize) -> bool {
        self.roles[i].1.is_solid()
    }
}

struct RawPattern {
    id: &'static str,
    roles: &'static str,
    edges: &'static str,
    coincide: Option<(char, char, usize)>,
    common: Option<(char, char, &'static str)>,
}

const fn raw(id: &'static str, roles: &'static str, edges: &'static str) -> RawPattern {
    RawPattern {
        id,
        roles,
        edges,
        coincide: None,
        common: None,
    }
}

const fn raw_common(
    id: &'static str,
    roles: &'static str,
    edges: &'static str,
    common: (char, char, &'static str),
) -> RawPattern {
    RawPattern {
        id,
        roles,
        edges,
        coincide: None,
        common: Some(common),
    }
}

// Roles are listed so that every role after the first has a pattern edge
// to an earlier one; the matcher assigns them in this order.
const CATALOG: &[RawPattern] = &[
    raw("T1", "u:1 v:any", "uv"),
    raw("T2", "u:2 v:3 w:any", "uv vw wu"),
    raw("T3", "u:2 x:any v:2 y:any", "xu uy yv vx"),
    raw("T4", "u:4 v:2 w:any x:2 y:any", "uv vw wu ux xy yu"),
    raw("T5", "u:2 v:2 w:3", "uv vw"),
    raw("T6", "u:2 v:2 x:!3", "uv vx xu"),
    raw("T7", "u:2 v:2 w:2 x:!3", "uv vw wx xu"),
    RawPattern {
        id: "T8",
        roles: "u:2 v:2 w:2 p:2 x:any y:any",
        edges: "xu uv vw wp py",
        coincide: Some(('x', 'y', 2)),
        common: None,
    },
    raw("T9", "w:4 v:2 u:2 p:2 y:any", "yp pw wy wv vu"),
    raw("T10", "w:4 v:2 u:2 x:any p:2 q:2", "uv vw wx xu wp pq"),
    raw("T11", "w:4 v:2 u:2 x:2 p:2 q:2", "xu uv vw wp pq"),
    raw("T12", "w:4 v:2 u:2 p:2 a:2", "uv vw wp wa"),
    raw("T13", "x:4 w:4 u:2 v:2 y:any", "xu uw wx wv vy yx"),
    raw("T14", "u:3 v:3 x:any y:any", "xu uv vy uy xv"),
    raw("T15", "u:3 v:3 w:2 x:any y:any", "xw wu uv vy uy xv"),
    raw("T16", "u:3 t:2 v:3 x:any y:any", "xu ut tv vy uy xv"),
    raw("T17", "u:3 v:3 w:2 z:2 x:any y:any", "xw wu uv vz zy uy xv"),
    raw("T18", "u:3 w:2 t:2 v:3 x:any y:any", "xw wu ut tv vy uy xv"),
    raw("T19", "u:3 w:2 t:2 v:3 z:2 x:any y:any", "xw wu ut tv vz zy uy xv"),
    raw("T20", "x:4 w:4 u:2 v:2 p:2 y:any", "xu uv vw wx wp py yx"),
    raw("T21", "x:4 y:4 u:2 v:2 w:2 p:2 q:any", "xu uv vw wy yx yp pq qx"),
    raw_common(
        "T22",
        "u:2 x:4 y:4 h:any p:any",
        "ux uy xy hx hy px py",
        ('x', 'y', "uhp"),
    ),
    raw("T23", "x:4 y:4 u:2 h:any p:any", "xu uy yx yp ph hy xh"),
    raw("T24", "x:4 y:4 u:2 h:3 z:2 p:any", "xu uy yx yp pz zh hy xh"),
    raw_common(
        "T25",
        "x:4 y:4 u:2 v:2 h:any p:any",
        "xu uv vy yx hx hy px py",
        ('x', 'y', "hp"),
    ),
    raw("T26", "x:4 y:4 u:2 v:2 h:any p:any", "xu uv vy yx yp ph hy xh"),
    raw("T27", "x:4 y:4 u:2 v:2 h:3 z:2 p:any", "xu uv vy yx yp pz zh hy xh"),
    raw_common(
        "T28",
        "x:4 y:4 u:2 w:2 v:2 h:any p:any",
        "xu uw wv vy yx hx hy px py",
        ('x', 'y', "hp"),
    ),
    raw("T29", "x:4 y:4 u:2 w:2 v:2 q:any p:any", "xu uw wv vy yx yp pq qy xq"),
    raw(
        "T30",
        "x:4 y:4 u:2 w:2 v:2 q:3 z:2 p:any",
        "xu uw wv vy yx yp pz zq qy xq",
    ),
    raw_common(
        "T31",
        "x:4 u:2 v:2 y:4 t:2 h:any p:any",
        "xu uv vy yt tx hx hy px py",
        ('x', 'y', "hpt"),
    ),
    raw("T32", "x:4 u:2 v:2 y:4 t:2 h:any p:any", "xu uv vy yt tx yp ph hy xh"),
    raw(
        "T33",
        "x:4 u:2 v:2 y:4 t:2 h:3 z:2 p:any",
        "xu uv vy yt tx yp pz zh hy xh",
    ),
    raw("T34", "x:4 u:2 v:2 w:2 y:4 t:2", "xu uv vw wy yt tx"),
    raw("T35", "x:4 u:2 v:2 w:4 p:2 q:2", "xu uv vw wp pq qx"),
    raw("T36", "w:5 v:2 u:2 h:2 p:2 q:2 l:2", "hu uv vw wp pq ql"),
    raw("H1", "u:2 v:2 w:2", "uv vw"),
    raw("H2", "w:4 v:2 u:2 p:2", "uv vw wp"),
    raw("H3", "w:4 v:2 u:2 p:2 q:2", "uv vw wp pq"),
    raw("H4", "x:4 y:4 u:2", "xu uy yx"),
    raw("H5", "x:4 u:2 w:2 v:2 y:4", "xu uw wv vy yx"),
    raw("F1", "x:4 y:4 u:2 h:any", "xu uy yx xh hy"),
    raw("F2", "x:4 y:4 u:2 v:2 h:any", "xu uv vy yx xh hy"),
    raw("F3", "x:4 u:2 v:2 y:4 t:2 h:any", "xu uv vy yt tx yh hx"),
    raw("X1", "u:2 v:any w:any", "uv vw wu"),
    raw("X2", "u:2 v:<=3", "uv"),
];

fn parse_pred(s: &str) -> DegreePred {
    if s == "any" {
        DegreePred::Any
    } else if let Some(k) = s.strip_prefix("<=") {
        DegreePred::AtMost(k.parse().unwrap())
    } else if let Some(k) = s.strip_prefix('!') {
        DegreePred::NotEq(k.parse().unwrap())
    } else {
        DegreePred::Exact(s.parse().unwrap())
    }
}

fn compile(raw: &RawPattern) -> ConfigPattern {
    let (family, index) = raw.id.split_at(1);
    let family = match family {
        "T" => Family::T,
        "H" => Family::H,
        "F" => Family::F,
        _ => Family::X,
    };
    let id = ConfigId {
        family,
        index: index.parse().unwrap(),
    };
    let roles: Vec<(char, DegreePred)> = raw
        .roles
        .split_whitespace()
        .map(|r| {
            let (name, pred) = r.split_once(':').unwrap();
            (name.chars().next().unwrap(), parse_pred(pred))
        })
        .collect();
    let idx = |c: char| roles.iter().position(|r| r.0 == c).unwrap();
    let edges: Vec<(usize, usize)> = raw
        .edges
        .split_whitespace()
        .map(|e| {
            let mut cs = e.chars();
            (idx(cs.next().unwrap()), idx(cs.next().unwrap()))
        })
        .collect();
    let mut guards = Vec::new();
    if let Some((a, b, degree)) = raw.coincide {
        guards.push(Guard::CoincideDegreeNot {
            a: idx(a),
            b: idx(b),
            degree,
        });
    }
    if let Some((a, b, rs)) = raw.common {
        guards.push(Guard::CommonNeighbors {
            a: idx(a),
            b: idx(b),
            roles: rs.chars().map(idx).collect(),
        });
    }
    let back_edges = (0..roles.len())
        .map(|i| {
            (0..edges.len())
                .filter(|&e| {
                    let (a, b) = edges[e];
                    (a == i && b < i) || (b == i && a < i)
                })
                .collect()
        })
        .collect();
    let guards_at = (0..roles.len())
        .map(|i| {
            (0..guards.len())
                .filter(|&k| guards[k].roles().into_iter().max() == Some(i))
                .collect()
        })
        .collect();
    ConfigPattern {
        id,
        roles,
        edges,
        guards,
        back_edges,
        guards_at,
    }
}

fn catalog() -> &'static [ConfigPattern] {
    static CELL: OnceLock<Vec<ConfigPattern>> = OnceLock::new();
    CELL.get_or_init(|| CATALOG.iter().map(compile).collect())
}

/// Every pattern in the catalog.
pub fn all_patterns() -> &'static [ConfigPattern] {
    catalog()
}

pub fn pattern(id: ConfigId) -> Option<&'static ConfigPattern> {
    catalog().iter().find(|p| p.id == id)
}

/// `T_a` through `T_b`, inclusive.
pub fn t_range(a: u8, b: u8) -> Vec<ConfigId> {
    (a..=b).map(ConfigId::t).collect()
}

/// An assignment of host vertices to the roles of a pattern, in role
/// declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatchJson", try_from = "MatchJson")]
pub struct ConfigMatch {
    pub id: ConfigId,
    pub vertices: Vec<VertexId>,
}

impl ConfigMatch {
    pub fn pattern(&self) -> &'static ConfigPattern {
        pattern(self.id).expect("ids are validated on construction")
    }

    pub fn role(&self, name: char) -> Option<VertexId> {
        self.pattern().role_index(name).map(|i| self.vertices[i])
    }

    /// Vertices of the named roles, deduplicated, sorted.
    pub fn vertex_set(&self, names: &str) -> BTreeSet<VertexId> {
        names.chars().filter_map(|c| self.role(c)).collect()
    }

    pub fn roles(&self) -> BTreeMap<char, VertexId> {
        self.pattern()
            .role_names()
            .into_iter()
            .zip(self.vertices.iter().copied())
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct MatchJson {
    id: ConfigId,
    roles: BTreeMap<String, VertexId>,
}

impl From<ConfigMatch> for MatchJson {
    fn from(m: ConfigMatch) -> Self {
        MatchJson {
            id: m.id,
            roles: m.roles().into_iter().map(|(c, v)| (c.to_string(), v)).collect(),
        }
    }
}

impl TryFrom<MatchJson> for ConfigMatch {
    type Error = String;

    fn try_from(j: MatchJson) -> Result<Self, Self::Error> {
        let p = pattern(j.id).ok_or_else(|| format!("unknown id {}", j.id))?;
        if j.roles.len() != p.roles.len() {
            return Err(format!("{} has {} roles", j.id, p.roles.len()));
        }
        let vertices = p
            .role_names()
            .into_iter()
            .map(|c| j.roles.get(&c.to_string()).copied().ok_or(format!("missing role {c}")))
            .collect::<Result<_, _>>()?;
        Ok(ConfigMatch { id: j.id, vertices })
    }
}

fn edge_key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

struct Matcher<'a> {
    g: &'a Graph,
    p: &'a ConfigPattern,
    at: Vec<VertexId>,
    used_edges: Vec<(VertexId, VertexId)>,
}

impl Matcher<'_> {
    fn candidates(&self, i: usize) -> Vec<VertexId> {
        match self.p.back_edges[i].first() {
            Some(&e) => {
                let (a, b) = self.p.edges[e];
                let j = if a == i { b } else { a };
                self.g.neighbors(self.at[j]).iter().copied().collect()
            }
            None => self.g.vertices().collect(),
        }
    }

    fn fits(&mut self, i: usize, v: VertexId) -> bool {
        if !self.p.roles[i].1.holds(self.g.deg(v)) {
            return false;
        }
        let solid = self.p.is_solid(i);
        for j in 0..i {
            if self.at[j] == v && (solid || self.p.is_solid(j)) {
                return false;
            }
        }
        let mark = self.used_edges.len();
        for &e in &self.p.back_edges[i] {
            let (a, b) = self.p.edges[e];
            let j = if a == i { b } else { a };
            let w = self.at[j];
            let key = edge_key(v, w);
            if w == v || !self.g.has_edge(v, w) || self.used_edges.contains(&key) {
                self.used_edges.truncate(mark);
                return false;
            }
            self.used_edges.push(key);
        }
        self.at.push(v);
        let ok = self.p.guards_at[i]
            .iter()
            .all(|&k| self.p.guards[k].holds(self.g, &self.at));
        self.at.pop();
        if !ok {
            self.used_edges.truncate(mark);
        }
        ok
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[VertexId]) -> bool) -> bool {
        let i = self.at.len();
        if i == self.p.roles.len() {
            return visit(&self.at);
        }
        for v in self.candidates(i) {
            let mark = self.used_edges.len();
            if !self.fits(i, v) {
                continue;
            }
            self.at.push(v);
            let stop = self.run(visit);
            self.at.pop();
            self.used_edges.truncate(mark);
            if stop {
                return true;
            }
        }
        false
    }
}

fn for_each_match(g: &Graph, p: &ConfigPattern, visit: &mut dyn FnMut(&[VertexId]) -> bool) {
    let mut m = Matcher {
        g,
        p,
        at: Vec::with_capacity(p.roles.len()),
        used_edges: Vec::new(),
    };
    m.run(visit);
}

/// First match of `id` in lexicographic order of the role tuple.
pub fn find(g: &Graph, id: ConfigId) -> Option<ConfigMatch> {
    find_all(g, id, 1).pop()
}

/// Up to `limit` matches of `id`, in lexicographic order.
pub fn find_all(g: &Graph, id: ConfigId, limit: usize) -> Vec<ConfigMatch> {
    let p = pattern(id).expect("ConfigId values always name a catalog entry");
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    for_each_match(g, p, &mut |at| {
        out.push(ConfigMatch {
            id,
            vertices: at.to_vec(),
        });
        out.len() >= limit
    });
    out
}

/// First id in `ids` that has a match, with its first match.
pub fn find_any(g: &Graph, ids: &[ConfigId]) -> Option<ConfigMatch> {
    ids.iter().find_map(|&id| find(g, id))
}

/// Checks every pattern constraint of `m` against `g`.
pub fn verify_match(g: &Graph, m: &ConfigMatch) -> bool {
    let Some(p) = pattern(m.id) else { return false };
    m.vertices.len() == p.roles.len() && prefix_ok(g, p, &m.vertices)
}

/// All constraints among the first `at.len()` roles hold.
fn prefix_ok(g: &Graph, p: &ConfigPattern, at: &[VertexId]) -> bool {
    let k = at.len();
    if at.iter().any(|&v| !g.contains(v)) {
        return false;
    }
    for i in 0..k {
        if !p.roles[i].1.holds(g.deg(at[i])) {
            return false;
        }
        for j in 0..i {
            if at[i] == at[j] && (p.is_solid(i) || p.is_solid(j)) {
                return false;
            }
        }
    }
    let mut seen = BTreeSet::new();
    for &(a, b) in &p.edges {
        if a >= k || b >= k {
            continue;
        }
        if at[a] == at[b] || !g.has_edge(at[a], at[b]) || !seen.insert(edge_key(at[a], at[b])) {
            return false;
        }
    }
    p.guards
        .iter()
        .filter(|gd| gd.roles().into_iter().all(|r| r < k))
        .all(|gd| gd.holds(g, at))
}

/// Reference search: tries every vertex for every role in declaration
/// order, pruning only when a fully assigned constraint fails. Slow but
/// obviously exhaustive; used to cross-check [`find`].
pub fn brute_force_find(g: &Graph, id: ConfigId) -> Option<ConfigMatch> {
    fn rec(g: &Graph, p: &ConfigPattern, vs: &[VertexId], at: &mut Vec<VertexId>) -> bool {
        if at.len() == p.roles.len() {
            return true;
        }
        for &v in vs {
            at.push(v);
            if prefix_ok(g, p, at) && rec(g, p, vs, at) {
                return true;
            }
            at.pop();
        }
        false
    }
    let p = pattern(id)?;
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut at = Vec::new();
    rec(g, p, &vs, &mut at).then_some(ConfigMatch { id, vertices: at })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::named;

    fn id(s: &str) -> ConfigId {
        s.parse().unwrap()
    }

    #[test]
    fn catalog_is_well_formed() {
        assert_eq!(all_patterns().len(), 36 + 5 + 3 + 2);
        for p in all_patterns() {
            let mut seen = BTreeSet::new();
            for &(a, b) in &p.edges {
                assert_ne!(a, b, "{} has a loop", p.id);
                assert!(seen.insert((a.min(b), a.max(b))), "{} repeats an edge", p.id);
            }
            for i in 1..p.roles.len() {
                assert!(
                    !p.back_edges[i].is_empty(),
                    "{} role {} has no earlier neighbor",
                    p.id,
                    p.roles[i].0
                );
            }
            let names: BTreeSet<char> = p.role_names().into_iter().collect();
            assert_eq!(names.len(), p.roles.len(), "{} repeats a role", p.id);
        }
    }

    #[test]
    fn ids_parse_and_print() {
        for p in all_patterns() {
            assert_eq!(p.id.to_string().parse::<ConfigId>(), Ok(p.id));
        }
        assert_eq!(id("t8"), ConfigId::t(8));
        assert!("T37".parse::<ConfigId>().is_err());
        assert!("Y1".parse::<ConfigId>().is_err());
        assert!("T".parse::<ConfigId>().is_err());
    }

    #[test]
    fn c6_contains_t8_and_nothing_earlier() {
        let c6 = named::cycle(6).unwrap();
        for i in 1..8 {
            assert_eq!(find(&c6, ConfigId::t(i)), None, "T{i}");
        }
        let m = find(&c6, id("T8")).unwrap();
        assert!(verify_match(&c6, &m));
        assert_eq!(m.vertices, vec![0, 1, 2, 3, 5, 4]);
        assert_eq!(find_any(&c6, &t_range(1, 12)).unwrap().id, id("T8"));
    }

    #[test]
    fn t8_guard_on_c5() {
        // on C5 the trail closes up with x = y, a 2-vertex
        assert_eq!(find(&named::cycle(5).unwrap(), id("T8")), None);
        // a pendant makes x = y a 3-vertex
        let mut g = named::cycle(5).unwrap();
        g.add_vertex(5).unwrap();
        g.add_edge(0, 5).unwrap();
        let m = find(&g, id("T8")).unwrap();
        assert_eq!(m.role('x'), m.role('y'));
        assert_eq!(m.role('x'), Some(0));
    }

    #[test]
    fn simple_examples() {
        assert_eq!(find(&named::complete(4).unwrap(), id("T1")), None);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let m = find(&star, id("T1")).unwrap();
        assert_eq!(m.role('u'), Some(1));
        assert_eq!(
            find_any(&named::path(2).unwrap(), &[id("T5"), id("T1")]).unwrap().id,
            id("T1")
        );
    }

    #[test]
    fn verify_rejects_wrong_degree() {
        // triangle 0 1 2 with 1 of degree 3 via pendant 3
        let mut g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (1, 3)]).unwrap();
        let m = find(&g, id("T2")).unwrap();
        assert!(verify_match(&g, &m));
        g.add_edge(m.role('v').unwrap(), 4).unwrap();
        assert!(!verify_match(&g, &m));
    }

    #[test]
    fn hollow_roles_may_be_permuted() {
        // T3 on C4: x and y are interchangeable, as are u and v
        let c4 = named::cycle(4).unwrap();
        let all = find_all(&c4, id("T3"), 100);
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|m| verify_match(&c4, m)));
        let m = &all[0];
        let swapped = ConfigMatch {
            id: m.id,
            vertices: vec![m.vertices[2], m.vertices[3], m.vertices[0], m.vertices[1]],
        };
        assert!(verify_match(&c4, &swapped));
    }

    #[test]
    fn hollow_coincidence_that_merges_edges_is_rejected() {
        // x = y in T3 would map xu and uy onto the same host edge
        let c4 = named::cycle(4).unwrap();
        let m = ConfigMatch {
            id: id("T3"),
            vertices: vec![0, 1, 2, 1],
        };
        assert!(!verify_match(&c4, &m));
    }

    #[test]
    fn common_neighbor_guard() {
        // x=0, y=1 adjacent, common neighbors u=2, h=3, p=4; u has degree 2
        let mut g = Graph::from_edges(7, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)]).unwrap();
        g.add_edge(3, 5).unwrap();
        g.add_edge(4, 6).unwrap();
        let m = find(&g, id("T22")).unwrap();
        assert_eq!(m.role('x'), Some(0));
        assert!(find(&g, id("F1")).is_some());
    }

    #[test]
    fn match_json_round_trip() {
        let c6 = named::cycle(6).unwrap();
        let m = find(&c6, id("T8")).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"id":"T8","roles":{"p":3,"u":0,"v":1,"w":2,"x":5,"y":4}}"#);
        assert_eq!(serde_json::from_str::<ConfigMatch>(&json).unwrap(), m);
        assert!(serde_json::from_str::<ConfigMatch>(r#"{"id":"T8","roles":{"u":0}}"#).is_err());
    }

    #[test]
    fn agrees_with_brute_force_on_small_named_graphs() {
        let graphs = [
            named::cycle(5).unwrap(),
            named::cycle(6).unwrap(),
            named::complete(4).unwrap(),
            named::subdivided_complete(4).unwrap(),
            named::path(5).unwrap(),
        ];
        for g in &graphs {
            for p in all_patterns() {
                assert_eq!(find(g, p.id), brute_force_find(g, p.id), "{} on {g:?}", p.id);
            }
        }
    }
}
