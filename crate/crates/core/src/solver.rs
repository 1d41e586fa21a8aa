//! Exact PCF list coloring by backtracking.
//!
//! The search colors one vertex at a time, always picking the uncolored
//! vertex with the fewest admissible colors (ties broken by smallest id) and
//! trying colors in ascending order. A color is admissible for `v` when no
//! colored neighbor carries it and, for every neighbor `z` whose only
//! uncolored neighbor is `v`, it leaves `z` with a unique color. The unique
//! color condition is also checked the moment a neighborhood becomes
//! complete, so a complete assignment is always PCF.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{is_pcf, Color, Coloring, ColoringError, ListAssignment};
use crate::graph::{Graph, VertexId};

/// Node limit used when none is given.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `PCF_BUDGET` if set to a valid integer, else [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u64 {
    std::env::var("PCF_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("node budget of {0} exhausted")]
    BudgetExhausted(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SolveStatus {
    Sat { coloring: Coloring },
    Unsat,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutcome {
    #[serde(flatten)]
    pub status: SolveStatus,
    pub nodes: u64,
}

impl SolveOutcome {
    pub fn coloring(&self) -> Option<&Coloring> {
        match &self.status {
            SolveStatus::Sat { coloring } => Some(coloring),
            _ => None,
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self.status, SolveStatus::Sat { .. })
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self.status, SolveStatus::Unsat)
    }
}

/// Searches for a PCF coloring of `g` with every color taken from `lists`.
pub fn solve(g: &Graph, lists: &ListAssignment, budget: u64) -> Result<SolveOutcome, SolverError> {
    let free: BTreeSet<VertexId> = g.vertices().collect();
    extend(g, lists, &Coloring::new(), &free, budget)
}

/// Colors the vertices in `free` from their lists, keeping every other
/// vertex at its color in `fixed`, so that the result is PCF on all of `g`.
///
/// Only vertices in `free` or adjacent to it are checked; the caller is
/// responsible for the rest already being fine.
pub fn extend(
    g: &Graph,
    lists: &ListAssignment,
    fixed: &Coloring,
    free: &BTreeSet<VertexId>,
    budget: u64,
) -> Result<SolveOutcome, SolverError> {
    for &v in free {
        if !g.contains(v) {
            return Err(ColoringError::UnknownVertex(v).into());
        }
        if lists.get(v).is_none() {
            return Err(ColoringError::MissingList(v).into());
        }
    }
    if let Some(v) = g.vertices().find(|v| !free.contains(v) && fixed.get(*v).is_none()) {
        return Err(ColoringError::Partial(v).into());
    }
    let mut search = Search::new(g, lists, fixed, free, budget);
    let status = if !search.initial_ok() {
        SolveStatus::Unsat
    } else if search.dfs() {
        let mut coloring = fixed.clone();
        coloring.colors.retain(|v, _| g.contains(*v));
        for &i in &search.free {
            coloring.set(search.ids[i], search.color[i].unwrap());
        }
        SolveStatus::Sat { coloring }
    } else if search.exhausted {
        SolveStatus::BudgetExhausted
    } else {
        SolveStatus::Unsat
    };
    Ok(SolveOutcome {
        status,
        nodes: search.nodes,
    })
}

struct Search {
    ids: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
    color: Vec<Option<Color>>,
    lists: Vec<Vec<Color>>,
    free: Vec<usize>,
    check: Vec<bool>,
    uncolored_nbrs: Vec<usize>,
    /// Set when all free lists are equal and nothing is precolored, so
    /// colors are interchangeable and only one unused color needs trying.
    symmetric: Option<Vec<Color>>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search {
    fn new(g: &Graph, lists: &ListAssignment, fixed: &Coloring, free: &BTreeSet<VertexId>, budget: u64) -> Self {
        let dense = g.dense();
        let n = dense.len();
        let mut color = vec![None; n];
        let mut lst = vec![Vec::new(); n];
        let mut is_free = vec![false; n];
        for i in 0..n {
            let v = dense.ids[i];
            if free.contains(&v) {
                is_free[i] = true;
                lst[i] = lists.get(v).unwrap().iter().copied().collect();
            } else {
                color[i] = fixed.get(v);
            }
        }
        let mut check = vec![false; n];
        for i in 0..n {
            if is_free[i] {
                check[i] = true;
                for &j in &dense.adj[i] {
                    check[j] = true;
                }
            }
        }
        let uncolored_nbrs = (0..n)
            .map(|i| dense.adj[i].iter().filter(|&&j| color[j].is_none()).count())
            .collect();
        let free_idx: Vec<usize> = (0..n).filter(|&i| is_free[i]).collect();
        let symmetric = match free_idx.first() {
            Some(&f) if free_idx.len() == n && free_idx.iter().all(|&i| lst[i] == lst[f]) => Some(lst[f].clone()),
            _ => None,
        };
        Search {
            ids: dense.ids,
            adj: dense.adj,
            color,
            lists: lst,
            free: free_idx,
            check,
            uncolored_nbrs,
            symmetric,
            nodes: 0,
            budget,
            exhausted: false,
        }
    }

    fn has_unique(&self, z: usize) -> bool {
        let mut counts: Vec<(Color, u32)> = Vec::with_capacity(self.adj[z].len());
        for &j in &self.adj[z] {
            let c = self.color[j].unwrap();
            match counts.iter_mut().find(|(d, _)| *d == c) {
                Some(e) => e.1 += 1,
                None => counts.push((c, 1)),
            }
        }
        counts.iter().any(|&(_, k)| k == 1)
    }

    fn initial_ok(&self) -> bool {
        for z in 0..self.ids.len() {
            if !self.check[z] {
                continue;
            }
            if let Some(c) = self.color[z] {
                if self.adj[z].iter().any(|&j| self.color[j] == Some(c)) {
                    return false;
                }
            }
            if !self.adj[z].is_empty() && self.uncolored_nbrs[z] == 0 && !self.has_unique(z) {
                return false;
            }
        }
        true
    }

    fn domain(&self, v: usize) -> Vec<Color> {
        // neighbors z for which v is the last uncolored neighbor, with the
        // color multiplicities they currently see
        let mut last: Vec<Vec<(Color, u32)>> = Vec::new();
        for &z in &self.adj[v] {
            if self.check[z] && self.uncolored_nbrs[z] == 1 {
                let mut counts: Vec<(Color, u32)> = Vec::new();
                for &j in &self.adj[z] {
                    if let Some(c) = self.color[j] {
                        match counts.iter_mut().find(|(d, _)| *d == c) {
                            Some(e) => e.1 += 1,
                            None => counts.push((c, 1)),
                        }
                    }
                }
                last.push(counts);
            }
        }
        let allowed_unused = self
            .symmetric
            .as_ref()
            .map(|list| list.iter().copied().find(|c| !self.color.contains(&Some(*c))));
        let mut out = Vec::new();
        'colors: for &c in &self.lists[v] {
            if let Some(first_unused) = allowed_unused {
                if !self.color.contains(&Some(c)) && Some(c) != first_unused {
                    continue;
                }
            }
            if self.adj[v].iter().any(|&j| self.color[j] == Some(c)) {
                continue;
            }
            for counts in &last {
                let kc = counts.iter().find(|(d, _)| *d == c).map_or(0, |e| e.1);
                let ok = kc == 0 || counts.iter().any(|&(d, k)| k == 1 && d != c);
                if !ok {
                    continue 'colors;
                }
            }
            out.push(c);
        }
        out
    }

    fn assign(&mut self, v: usize, c: Color) {
        self.color[v] = Some(c);
        for k in 0..self.adj[v].len() {
            let z = self.adj[v][k];
            self.uncolored_nbrs[z] -= 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        self.color[v] = None;
        for k in 0..self.adj[v].len() {
            let z = self.adj[v][k];
            self.uncolored_nbrs[z] += 1;
        }
    }

    fn completed_ok(&self, v: usize) -> bool {
        self.adj[v]
            .iter()
            .all(|&z| !self.check[z] || self.uncolored_nbrs[z] != 0 || self.has_unique(z))
    }

    fn dfs(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return false;
        }
        let mut best: Option<(usize, Vec<Color>)> = None;
        for &v in &self.free {
            if self.color[v].is_some() {
                continue;
            }
            let d = self.domain(v);
            if d.is_empty() {
                return false;
            }
            if best.as_ref().is_none_or(|(_, b)| d.len() < b.len()) {
                best = Some((v, d));
            }
        }
        let Some((v, dom)) = best else { return true };
        for c in dom {
            self.assign(v, c);
            if self.completed_ok(v) && self.dfs() {
                return true;
            }
            self.unassign(v);
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

/// Smallest `k` for which `g` has a PCF coloring from `{1, ..., k}`,
/// with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiOutcome {
    pub chi: usize,
    pub coloring: Coloring,
    pub nodes: u64,
}

pub fn chi_pcf(g: &Graph, budget: u64) -> Result<ChiOutcome, SolverError> {
    let mut nodes = 0;
    if g.size() == 0 {
        let coloring = g.vertices().map(|v| (v, 1)).collect();
        return Ok(ChiOutcome {
            chi: 1,
            coloring,
            nodes,
        });
    }
    // n colors always suffice: give every vertex its own color
    for k in 1..=g.order() {
        let lists = ListAssignment::uniform(g, 1..=k as Color);
        let out = solve(g, &lists, budget - nodes)?;
        nodes += out.nodes;
        match out.status {
            SolveStatus::Sat { coloring } => {
                return Ok(ChiOutcome {
                    chi: k,
                    coloring,
                    nodes,
                })
            }
            SolveStatus::Unsat => {}
            SolveStatus::BudgetExhausted => return Err(SolverError::BudgetExhausted(budget)),
        }
    }
    unreachable!("a coloring with all colors distinct is PCF")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum RefuteOutcome {
    /// A `(degree + k)` assignment with no PCF coloring.
    Found {
        lists: ListAssignment,
        assignments_checked: u64,
        nodes: u64,
    },
    /// Every canonical assignment over the color universe is colorable.
    NotFound {
        universe: usize,
        assignments_checked: u64,
        nodes: u64,
    },
}

/// Searches for a `(degree + k)` list assignment without a PCF coloring.
///
/// Lists are enumerated in vertex-id order and only in canonical form:
/// colors enter in first-use order, so each assignment is visited once up
/// to renaming of colors. The universe defaults to `sum of d(v) + k`, which
/// is large enough for every pattern of shared colors; a smaller universe
/// makes the search exhaustive only relative to that cap.
pub fn refute_choosability(
    g: &Graph,
    k: usize,
    universe: Option<usize>,
    budget: u64,
) -> Result<RefuteOutcome, SolverError> {
    let sizes: Vec<(VertexId, usize)> = g.vertices().map(|v| (v, g.deg(v) + k)).collect();
    let total: usize = sizes.iter().map(|s| s.1).sum();
    let universe = universe.unwrap_or(total);
    let need = sizes.iter().map(|s| s.1).max().unwrap_or(0);
    if universe < need {
        return Err(ColoringError::UniverseTooSmall { need, have: universe }.into());
    }
    let mut state = Refuter {
        g,
        sizes,
        universe,
        budget,
        nodes: 0,
        checked: 0,
        lists: BTreeMap::new(),
    };
    Ok(match state.rec(0, 0)? {
        Some(lists) => RefuteOutcome::Found {
            lists,
            assignments_checked: state.checked,
            nodes: state.nodes,
        },
        None => RefuteOutcome::NotFound {
            universe,
            assignments_checked: state.checked,
            nodes: state.nodes,
        },
    })
}

struct Refuter<'a> {
    g: &'a Graph,
    sizes: Vec<(VertexId, usize)>,
    universe: usize,
    budget: u64,
    nodes: u64,
    checked: u64,
    lists: BTreeMap<VertexId, BTreeSet<Color>>,
}

impl Refuter<'_> {
    fn rec(&mut self, i: usize, used: usize) -> Result<Option<ListAssignment>, SolverError> {
        if i == self.sizes.len() {
            let lists = ListAssignment {
                lists: self.lists.clone(),
            };
            let out = solve(self.g, &lists, self.budget.saturating_sub(self.nodes))?;
            self.nodes += out.nodes;
            self.checked += 1;
            return match out.status {
                SolveStatus::Unsat => Ok(Some(lists)),
                SolveStatus::Sat { .. } => Ok(None),
                SolveStatus::BudgetExhausted => Err(SolverError::BudgetExhausted(self.budget)),
            };
        }
        let (v, size) = self.sizes[i];
        for fresh in 0..=size.min(self.universe - used) {
            let old = size - fresh;
            if old > used {
                continue;
            }
            for comb in combinations(used, old) {
                let mut list: BTreeSet<Color> = comb.into_iter().map(|c| c as Color + 1).collect();
                list.extend((used + 1..=used + fresh).map(|c| c as Color));
                self.lists.insert(v, list);
                if let Some(found) = self.rec(i + 1, used + fresh)? {
                    return Ok(Some(found));
                }
            }
        }
        self.lists.remove(&v);
        Ok(None)
    }
}

/// All `r`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] != i + n - r) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Asserts that a SAT witness verifies against `g` and `lists`.
pub fn witness_verifies(g: &Graph, lists: &ListAssignment, out: &SolveOutcome) -> bool {
    match out.coloring() {
        Some(phi) => is_pcf(g, phi, Some(lists)).is_ok_and(|r| r.pcf),
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::named;

    fn uniform(g: &Graph, k: Color) -> ListAssignment {
        ListAssignment::uniform(g, 1..=k)
    }

    #[test]
    fn cycles_with_small_uniform_lists() {
        let c5 = named::cycle(5).unwrap();
        assert!(solve(&c5, &uniform(&c5, 4), DEFAULT_BUDGET).unwrap().is_unsat());
        let out = solve(&c5, &uniform(&c5, 5), DEFAULT_BUDGET).unwrap();
        assert!(out.is_sat());
        assert!(witness_verifies(&c5, &uniform(&c5, 5), &out));
        let c7 = named::cycle(7).unwrap();
        assert!(solve(&c7, &uniform(&c7, 3), DEFAULT_BUDGET).unwrap().is_unsat());
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_pcf(&named::cycle(5).unwrap(), DEFAULT_BUDGET).unwrap().chi, 5);
        assert_eq!(chi_pcf(&named::cycle(6).unwrap(), DEFAULT_BUDGET).unwrap().chi, 3);
        assert_eq!(
            chi_pcf(&named::subdivided_complete(4).unwrap(), DEFAULT_BUDGET)
                .unwrap()
                .chi,
            4
        );
        assert_eq!(chi_pcf(&Graph::with_vertices(3), DEFAULT_BUDGET).unwrap().chi, 1);
        assert_eq!(chi_pcf(&named::path(2).unwrap(), DEFAULT_BUDGET).unwrap().chi, 2);
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let c7 = named::cycle(7).unwrap();
        let out = solve(&c7, &uniform(&c7, 3), 5).unwrap();
        assert_eq!(out.status, SolveStatus::BudgetExhausted);
        assert!(matches!(chi_pcf(&c7, 5), Err(SolverError::BudgetExhausted(5))));
    }

    #[test]
    fn refute_examples() {
        let c5 = named::cycle(5).unwrap();
        match refute_choosability(&c5, 2, Some(4), DEFAULT_BUDGET).unwrap() {
            RefuteOutcome::Found { lists, .. } => assert_eq!(lists, uniform(&c5, 4)),
            other => panic!("{other:?}"),
        }
        let k2 = named::path(2).unwrap();
        for universe in [2, 3, 4] {
            assert!(matches!(
                refute_choosability(&k2, 1, Some(universe), DEFAULT_BUDGET).unwrap(),
                RefuteOutcome::NotFound { .. }
            ));
        }
        let c3 = named::cycle(3).unwrap();
        let out = refute_choosability(&c3, 1, Some(6), DEFAULT_BUDGET).unwrap();
        assert!(matches!(out, RefuteOutcome::NotFound { universe: 6, .. }));
    }

    #[test]
    fn refute_rejects_small_universe() {
        let c5 = named::cycle(5).unwrap();
        assert!(matches!(
            refute_choosability(&c5, 2, Some(3), DEFAULT_BUDGET),
            Err(SolverError::Coloring(ColoringError::UniverseTooSmall {
                need: 4,
                have: 3
            }))
        ));
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn extend_keeps_fixed_colors() {
        let p4 = named::path(4).unwrap();
        let lists = uniform(&p4, 3);
        let fixed: Coloring = [(0, 1), (1, 2)].into_iter().collect();
        let free = BTreeSet::from([2, 3]);
        let out = extend(&p4, &lists, &fixed, &free, DEFAULT_BUDGET).unwrap();
        let phi = out.coloring().unwrap();
        assert_eq!(phi.get(0), Some(1));
        assert_eq!(phi.get(1), Some(2));
        assert!(is_pcf(&p4, phi, Some(&lists)).unwrap().pcf);
        let missing = extend(&p4, &lists, &fixed, &BTreeSet::from([3]), DEFAULT_BUDGET);
        assert_eq!(missing.unwrap_err(), SolverError::Coloring(ColoringError::Partial(2)));
    }

    #[test]
    fn outcome_json_has_no_timing() {
        let k2 = named::path(2).unwrap();
        let out = solve(&k2, &uniform(&k2, 2), DEFAULT_BUDGET).unwrap();
        let json = serde_json::to_string(&out).unwrap();
        assert_eq!(
            json,
            r#"{"status":"sat","coloring":{"colors":{"0":1,"1":2}},"nodes":3}"#
        );
    }
}
