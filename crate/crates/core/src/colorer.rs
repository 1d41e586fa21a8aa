//! Constructive PCF list coloring by reduction.
//!
//! To color `G`: find a configuration from the class's id list, delete the
//! rule's deletion set `D`, color each component of `G - D` recursively,
//! then extend. Extension first colors `D` with everything else fixed; if
//! that fails it also lets subsets `S` of the configuration's other
//! vertices change color, smallest subsets first. Graphs with at most
//! [`ColorOptions::base_threshold`] vertices are colored by the exact
//! solver.
//!
//! If a configuration leads nowhere (the remainder is uncolorable, or no
//! extension exists) the next match is tried, up to
//! [`ColorOptions::max_alternatives`] matches per graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::class::{CertificateError, ClassCertificate, GraphClass};
use crate::coloring::{is_pcf, Color, Coloring, ListAssignment};
use crate::graph::{Graph, VertexId};
use crate::patterns::{find_all, t_range, ConfigId, ConfigMatch};
use crate::solver::{self, SolveStatus, DEFAULT_BUDGET};

/// Which list sizes the colorer is asked to handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `|L(v)| = d(v) + k`.
    DegreePlus(usize),
    /// `|L(v)| = k` for every vertex.
    Uniform(usize),
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::DegreePlus(k) => write!(f, "degree+{k}"),
            Regime::Uniform(k) => write!(f, "uniform-{k}"),
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = String;

    /// Parses `degree+<k>` or `uniform-<k>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected degree+<k> or uniform-<k>, got `{s}`");
        if let Some(k) = s.strip_prefix("degree+") {
            k.parse().map(Regime::DegreePlus).map_err(|_| bad())
        } else if let Some(k) = s.strip_prefix("uniform-") {
            k.parse().map(Regime::Uniform).map_err(|_| bad())
        } else {
            Err(bad())
        }
    }
}

/// Deletion set of each reduction rule, as role names.
pub fn deletion_roles(id: ConfigId) -> Option<&'static str> {
    use crate::patterns::Family;
    let t = match id.family {
        Family::T => id.index,
        Family::X => {
            return match id.index {
                1 => Some("u"),
                2 => Some("uv"),
                _ => None,
            }
        }
        _ => return None,
    };
    Some(match t {
        1 | 2 | 6 | 13 | 22..=24 => "u",
        3 | 14 => "v",
        4 => "vx",
        5 | 20 | 25..=27 | 31..=33 => "uv",
        7 | 21 | 34 => "uvw",
        8 => "uvwp",
        9 => "uvp",
        10 | 11 | 35 => "uvpq",
        12 => "auvp",
        15 | 17 => "uw",
        16 => "ut",
        18 | 19 => "wut",
        28..=30 => "uwv",
        36 => "huvpql",
        _ => return None,
    })
}

/// Configuration ids tried, in order, for a class and regime.
pub fn class_ids(cert: &ClassCertificate, regime: Regime) -> Result<Vec<ConfigId>, ColorError> {
    let o1p_small = || {
        let mut ids = vec![ConfigId::t(1), ConfigId::t(3), ConfigId::t(14)];
        ids.extend([ConfigId::x(1), ConfigId::x(2)]);
        ids
    };
    let girth = || crate::discharging::girth12_ids();
    let delta = cert.max_degree();
    match (cert.class(), regime) {
        (GraphClass::K4MinorFree, Regime::DegreePlus(2)) if delta <= 4 => Ok(t_range(1, 12)),
        (GraphClass::Outer1Planar, Regime::DegreePlus(2)) if delta <= 4 => Ok(t_range(1, 35)),
        (GraphClass::Outer1Planar, Regime::DegreePlus(3)) => Ok(o1p_small()),
        (GraphClass::Outer1Planar, Regime::Uniform(6)) => Ok(o1p_small()),
        (GraphClass::PlanarGirth12, Regime::DegreePlus(2)) => Ok(girth()),
        (GraphClass::PlanarGirth12, Regime::Uniform(6)) => Ok(girth()),
        (GraphClass::Unrestricted, _) => {
            let mut ids = t_range(1, 36);
            ids.extend([ConfigId::x(1), ConfigId::x(2)]);
            Ok(ids)
        }
        (class, regime) => Err(ColorError::UnsupportedClass {
            class,
            regime,
            max_degree: delta,
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TraceStep {
    /// A small graph colored directly by the exact solver.
    Base { colors: BTreeMap<VertexId, Color> },
    /// A configuration was reduced; `assigned` colors the deleted vertices
    /// and `recolored` gives new colors to other vertices of the match.
    Reduce {
        config: ConfigMatch,
        deleted: Vec<VertexId>,
        recolor_allowed: Vec<VertexId>,
        assigned: BTreeMap<VertexId, Color>,
        recolored: BTreeMap<VertexId, Color>,
    },
}

/// Steps in the order they take effect: every step only refers to vertices
/// colored by earlier steps or colored by itself.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    /// Rebuilds the final coloring by applying the steps in order.
    pub fn replay(&self) -> Coloring {
        let mut phi = Coloring::new();
        for step in &self.steps {
            match step {
                TraceStep::Base { colors } => phi.colors.extend(colors),
                TraceStep::Reduce {
                    assigned, recolored, ..
                } => {
                    phi.colors.extend(assigned);
                    phi.colors.extend(recolored);
                }
            }
        }
        phi
    }

    /// Every recoloring stays inside its step's allowed set, touches only
    /// vertices colored before, and every step colors exactly its deleted
    /// vertices.
    pub fn is_local(&self) -> bool {
        let mut colored: BTreeSet<VertexId> = BTreeSet::new();
        for step in &self.steps {
            match step {
                TraceStep::Base { colors } => {
                    if colors.keys().any(|v| !colored.insert(*v)) {
                        return false;
                    }
                }
                TraceStep::Reduce {
                    deleted,
                    recolor_allowed,
                    assigned,
                    recolored,
                    ..
                } => {
                    let keys: Vec<VertexId> = assigned.keys().copied().collect();
                    if keys != *deleted {
                        return false;
                    }
                    for v in recolored.keys() {
                        if !recolor_allowed.contains(v) || deleted.contains(v) || !colored.contains(v) {
                            return false;
                        }
                    }
                    if deleted.iter().any(|v| !colored.insert(*v)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColorError {
    #[error("list assignment does not fit the {0} regime")]
    InvalidLists(Regime),
    #[error("no strategy for class {class} with {regime} lists and maximum degree {max_degree}")]
    UnsupportedClass {
        class: GraphClass,
        regime: Regime,
        max_degree: usize,
    },
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error("the graph must be connected")]
    Disconnected,
    #[error("C5 is excluded for degree+2 lists")]
    ExcludedC5,
    #[error("no extension of the coloring around {config:?}")]
    ExtensionFailed { config: ConfigMatch, residual: Coloring },
    #[error("no configuration found in a graph on {order} vertices")]
    NoConfigFound { order: usize },
    #[error("exact solver found no coloring of a base graph on {vertices:?}")]
    BaseUnsat { vertices: Vec<VertexId> },
    #[error("solver budget exhausted")]
    BudgetExhausted,
    #[error("result failed verification: {0}")]
    Internal(String),
}

impl ColorError {
    /// Errors that indicate a broken guarantee rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            ColorError::ExtensionFailed { .. }
                | ColorError::NoConfigFound { .. }
                | ColorError::BaseUnsat { .. }
                | ColorError::Internal(_)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColorOptions {
    pub base_threshold: usize,
    pub max_alternatives: usize,
    pub budget: u64,
    /// Cap on recursive calls, which bounds retries across all levels.
    pub max_calls: usize,
}

impl Default for ColorOptions {
    fn default() -> Self {
        ColorOptions {
            base_threshold: 12,
            max_alternatives: 8,
            budget: DEFAULT_BUDGET,
            max_calls: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorResult {
    pub coloring: Coloring,
    pub trace: ReductionTrace,
    /// Matches given up on before a later one succeeded.
    pub abandoned: usize,
}

/// Colors a connected certified graph from a list assignment of the given
/// regime.
pub fn color(
    g: &Graph,
    lists: &ListAssignment,
    cert: &ClassCertificate,
    regime: Regime,
    opts: &ColorOptions,
) -> Result<ColorResult, ColorError> {
    cert.verify(g)?;
    let ids = class_ids(cert, regime)?;
    let fits = match regime {
        Regime::DegreePlus(k) => lists.is_degree_plus(g, k),
        Regime::Uniform(k) => lists.is_uniform_size(g, k),
    };
    if !fits {
        return Err(ColorError::InvalidLists(regime));
    }
    if !g.is_connected() {
        return Err(ColorError::Disconnected);
    }
    if regime == Regime::DegreePlus(2) && g.is_cycle() && g.order() == 5 {
        return Err(ColorError::ExcludedC5);
    }
    let mut ctx = Ctx {
        lists,
        ids,
        opts,
        calls: 0,
        abandoned: 0,
        trace: Vec::new(),
    };
    let coloring = ctx.rec(g)?;
    let report = is_pcf(g, &coloring, Some(lists)).map_err(|e| ColorError::Internal(e.to_string()))?;
    if !report.pcf {
        return Err(ColorError::Internal(format!("{:?}", report.violations)));
    }
    Ok(ColorResult {
        coloring,
        trace: ReductionTrace { steps: ctx.trace },
        abandoned: ctx.abandoned,
    })
}

struct Ctx<'a> {
    lists: &'a ListAssignment,
    ids: Vec<ConfigId>,
    opts: &'a ColorOptions,
    calls: usize,
    abandoned: usize,
    trace: Vec<TraceStep>,
}

impl Ctx<'_> {
    fn base(&mut self, g: &Graph) -> Result<Coloring, ColorError> {
        let out = solver::solve(g, self.lists, self.opts.budget).map_err(|e| ColorError::Internal(e.to_string()))?;
        match out.status {
            SolveStatus::Sat { coloring } => {
                self.trace.push(TraceStep::Base {
                    colors: coloring.colors.clone(),
                });
                Ok(coloring)
            }
            SolveStatus::Unsat => Err(ColorError::BaseUnsat {
                vertices: g.vertices().collect(),
            }),
            SolveStatus::BudgetExhausted => Err(ColorError::BudgetExhausted),
        }
    }

    fn candidates(&self, g: &Graph) -> Vec<ConfigMatch> {
        let mut out = Vec::new();
        for &id in &self.ids {
            let left = self.opts.max_alternatives - out.len();
            if left == 0 {
                break;
            }
            out.extend(find_all(g, id, left));
        }
        out
    }

    fn rec(&mut self, g: &Graph) -> Result<Coloring, ColorError> {
        self.calls += 1;
        if g.order() <= self.opts.base_threshold {
            return self.base(g);
        }
        let candidates = self.candidates(g);
        let mut last = ColorError::NoConfigFound { order: g.order() };
        for m in candidates {
            if self.calls > self.opts.max_calls {
                break;
            }
            let mark = self.trace.len();
            match self.reduce(g, &m) {
                Ok(phi) => return Ok(phi),
                Err(ColorError::BudgetExhausted) => return Err(ColorError::BudgetExhausted),
                Err(e) => {
                    self.trace.truncate(mark);
                    self.abandoned += 1;
                    last = e;
                }
            }
        }
        Err(last)
    }

    fn reduce(&mut self, g: &Graph, m: &ConfigMatch) -> Result<Coloring, ColorError> {
        let deleted = m.vertex_set(deletion_roles(m.id).expect("class ids all have rules"));
        let allowed: BTreeSet<VertexId> = m.vertices.iter().copied().collect();
        let rest = g.delete_vertices(&deleted.iter().copied().collect::<Vec<_>>()).unwrap();
        let mut phi = Coloring::new();
        for comp in rest.components() {
            let sub = rest.induced(&comp.into_iter().collect());
            phi.colors.extend(self.rec(&sub)?.colors);
        }
        let others: Vec<VertexId> = allowed.difference(&deleted).copied().collect();
        for size in 0..=others.len() {
            for subset in subsets(&others, size) {
                let mut free = deleted.clone();
                free.extend(&subset);
                let mut fixed = phi.clone();
                for v in &subset {
                    fixed.colors.remove(v);
                }
                let out = solver::extend(g, self.lists, &fixed, &free, self.opts.budget)
                    .map_err(|e| ColorError::Internal(e.to_string()))?;
                match out.status {
                    SolveStatus::Sat { coloring } => {
                        self.trace.push(TraceStep::Reduce {
                            config: m.clone(),
                            deleted: deleted.iter().copied().collect(),
                            recolor_allowed: others.clone(),
                            assigned: deleted.iter().map(|&v| (v, coloring.get(v).unwrap())).collect(),
                            recolored: subset.iter().map(|&v| (v, coloring.get(v).unwrap())).collect(),
                        });
                        return Ok(coloring);
                    }
                    SolveStatus::Unsat => {}
                    SolveStatus::BudgetExhausted => return Err(ColorError::BudgetExhausted),
                }
            }
        }
        Err(ColorError::ExtensionFailed {
            config: m.clone(),
            residual: phi,
        })
    }
}

/// `size`-subsets of `items`, in lexicographic order of positions.
fn subsets(items: &[VertexId], size: usize) -> Vec<Vec<VertexId>> {
    fn rec(items: &[VertexId], size: usize, start: usize, cur: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, size, 0, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::OuterEmbedding;
    use crate::coloring::degree_plus_k;
    use crate::generators::{gen_girth12, gen_k4mf, gen_o1p, named};
    use crate::patterns::{all_patterns, pattern};

    fn o1p_cert(g: &Graph) -> ClassCertificate {
        let order: Vec<VertexId> = g.vertices().collect();
        ClassCertificate::outer_1_planar(g, OuterEmbedding::from_order(g, order).unwrap()).unwrap()
    }

    #[test]
    fn every_t_and_x_pattern_has_a_rule_over_its_roles() {
        for p in all_patterns() {
            let Some(del) = deletion_roles(p.id) else {
                assert!(matches!(
                    p.id.family,
                    crate::patterns::Family::H | crate::patterns::Family::F
                ));
                continue;
            };
            for c in del.chars() {
                assert!(p.role_index(c).is_some(), "{} has no role {c}", p.id);
            }
        }
        assert_eq!(deletion_roles(ConfigId::t(8)), Some("uvwp"));
        assert_eq!(pattern(ConfigId::t(36)).unwrap().roles.len(), 6 + 1);
    }

    #[test]
    fn c6_reduces_through_t8() {
        let c6 = named::cycle(6).unwrap();
        let cert = o1p_cert(&c6);
        let lists = ListAssignment::uniform(&c6, 1..=4);
        let opts = ColorOptions {
            base_threshold: 2,
            ..Default::default()
        };
        let r = color(&c6, &lists, &cert, Regime::DegreePlus(2), &opts).unwrap();
        assert!(is_pcf(&c6, &r.coloring, Some(&lists)).unwrap().pcf);
        match &r.trace.steps[..] {
            [TraceStep::Base { colors }, TraceStep::Reduce { config, .. }] => {
                assert_eq!(colors.len(), 2);
                assert_eq!(config.id, ConfigId::t(8));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(r.trace.replay(), r.coloring);
        assert!(r.trace.is_local());
        let exact = solver::solve(&c6, &lists, DEFAULT_BUDGET).unwrap();
        assert!(exact.is_sat());
    }

    #[test]
    fn c5_with_degree_plus_3() {
        let c5 = named::cycle(5).unwrap();
        let lists = ListAssignment::uniform(&c5, 1..=5);
        let r = color(
            &c5,
            &lists,
            &o1p_cert(&c5),
            Regime::DegreePlus(3),
            &ColorOptions::default(),
        )
        .unwrap();
        assert!(is_pcf(&c5, &r.coloring, Some(&lists)).unwrap().pcf);
        let small = ListAssignment::uniform(&c5, 1..=4);
        assert_eq!(
            color(
                &c5,
                &small,
                &o1p_cert(&c5),
                Regime::DegreePlus(2),
                &ColorOptions::default()
            ),
            Err(ColorError::ExcludedC5)
        );
    }

    #[test]
    fn single_edge() {
        let k2 = named::path(2).unwrap();
        let lists = degree_plus_k(&k2, 2, 5, 1).unwrap();
        let r = color(
            &k2,
            &lists,
            &o1p_cert(&k2),
            Regime::DegreePlus(2),
            &ColorOptions::default(),
        )
        .unwrap();
        assert_ne!(r.coloring.get(0), r.coloring.get(1));
    }

    #[test]
    fn rejects_mismatched_input() {
        let p3 = named::path(3).unwrap();
        let cert = o1p_cert(&p3);
        let lists = ListAssignment::uniform(&p3, 1..=3);
        assert_eq!(
            color(&p3, &lists, &cert, Regime::DegreePlus(2), &ColorOptions::default()),
            Err(ColorError::InvalidLists(Regime::DegreePlus(2)))
        );
        let k4 = named::complete(4).unwrap();
        assert!(matches!(
            color(&k4, &lists, &cert, Regime::DegreePlus(2), &ColorOptions::default()),
            Err(ColorError::Certificate(_))
        ));
        let k4mf = ClassCertificate::k4_minor_free(&p3).unwrap();
        assert!(matches!(
            color(&p3, &lists, &k4mf, Regime::DegreePlus(3), &ColorOptions::default()),
            Err(ColorError::UnsupportedClass { .. })
        ));
    }

    #[test]
    fn larger_instances_reduce_and_replay() {
        for seed in 0..20 {
            let c = gen_k4mf(24, seed).unwrap();
            if c.graph.is_cycle() && c.graph.order() == 5 {
                continue;
            }
            let lists = degree_plus_k(&c.graph, 2, c.graph.max_degree() + 4, seed).unwrap();
            let r = color(
                &c.graph,
                &lists,
                &c.cert,
                Regime::DegreePlus(2),
                &ColorOptions::default(),
            )
            .unwrap();
            assert_eq!(r.trace.replay(), r.coloring);
            assert!(r.trace.is_local());

            let c = gen_o1p(22, seed, None).unwrap();
            let lists = degree_plus_k(&c.graph, 3, c.graph.max_degree() + 5, seed).unwrap();
            let r = color(
                &c.graph,
                &lists,
                &c.cert,
                Regime::DegreePlus(3),
                &ColorOptions::default(),
            )
            .unwrap();
            assert_eq!(r.trace.replay(), r.coloring);

            let c = gen_girth12(4, seed).unwrap();
            let lists = degree_plus_k(&c.graph, 2, c.graph.max_degree() + 4, seed).unwrap();
            let r = color(
                &c.graph,
                &lists,
                &c.cert,
                Regime::DegreePlus(2),
                &ColorOptions::default(),
            )
            .unwrap();
            assert!(r.trace.is_local());
        }
    }

    #[test]
    fn regime_round_trips_through_text() {
        for r in [Regime::DegreePlus(2), Regime::DegreePlus(3), Regime::Uniform(6)] {
            assert_eq!(r.to_string().parse::<Regime>(), Ok(r));
        }
        assert!("degree2".parse::<Regime>().is_err());
    }

    #[test]
    fn subsets_in_order() {
        assert_eq!(subsets(&[5, 6, 7], 2), vec![vec![5, 6], vec![5, 7], vec![6, 7]]);
        assert_eq!(subsets(&[5], 0), vec![Vec::<VertexId>::new()]);
    }
}
