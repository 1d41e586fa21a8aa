//! Certified random instances and named graphs.
//!
//! Every generator re-checks its output with the class recognizer or the
//! certificate verifier before returning it, so a construction bug surfaces
//! as a panic rather than as a silently wrong certificate.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::class::{
    circle_rotation, crossing_pairs, is_planar_rotation, ClassCertificate, OuterEmbedding, Rotation, SubdivisionWitness,
};
use crate::graph::{Girth, Graph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("operation does not apply: {0}")]
    NotApplicable(String),
}

/// A generated graph with its class certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certified {
    pub graph: Graph,
    pub cert: ClassCertificate,
}

pub mod named {
    //! Named instances: cycles, paths, complete graphs and subdivisions.

    use super::GenError;
    use crate::graph::{Graph, VertexId};

    pub fn cycle(len: usize) -> Result<Graph, GenError> {
        if len < 3 {
            return Err(GenError::InvalidParams(format!("cycle length {len} < 3")));
        }
        let edges: Vec<_> = (0..len as VertexId).map(|i| (i, (i + 1) % len as VertexId)).collect();
        Ok(Graph::from_edges(len, &edges).unwrap())
    }

    /// Path on `len` vertices.
    pub fn path(len: usize) -> Result<Graph, GenError> {
        if len == 0 {
            return Err(GenError::InvalidParams("path needs at least one vertex".into()));
        }
        let edges: Vec<_> = (1..len as VertexId).map(|i| (i - 1, i)).collect();
        Ok(Graph::from_edges(len, &edges).unwrap())
    }

    pub fn complete(n: usize) -> Result<Graph, GenError> {
        if n == 0 {
            return Err(GenError::InvalidParams("complete graph needs a vertex".into()));
        }
        let mut g = Graph::with_vertices(n);
        for u in 0..n as VertexId {
            for v in u + 1..n as VertexId {
                g.add_edge(u, v).unwrap();
            }
        }
        Ok(g)
    }

    /// `g` with every edge replaced by a path through `s` new vertices.
    /// Old ids are kept; the new vertices of the `i`-th edge in sorted order
    /// get ids `next + i*s ..`, walking from the smaller endpoint.
    pub fn subdivide_edges(g: &Graph, s: usize) -> Graph {
        let mut h = Graph::new();
        for v in g.vertices() {
            h.add_vertex(v).unwrap();
        }
        let mut next = g.next_id();
        for (a, b) in g.edges() {
            let mut prev = a;
            for _ in 0..s {
                h.add_vertex(next).unwrap();
                h.add_edge(prev, next).unwrap();
                prev = next;
                next += 1;
            }
            h.add_edge(prev, b).unwrap();
        }
        h
    }

    /// 1-subdivision of `K_n`: originals are `0..n`.
    pub fn subdivided_complete(n: usize) -> Result<Graph, GenError> {
        if n < 2 {
            return Err(GenError::InvalidParams(format!("subdivided K_{n} needs n >= 2")));
        }
        Ok(subdivide_edges(&complete(n)?, 1))
    }

    /// A center vertex `0` with one arm per entry of `arms`. Arm `i` is a
    /// thread of `arms[i]` 2-vertices ending at a 3-vertex joined to two
    /// vertices of its own K4.
    pub fn thread_star(arms: &[usize]) -> Graph {
        let mut g = Graph::with_vertices(1);
        for &len in arms {
            let mut prev = 0;
            for _ in 0..len {
                let v = g.next_id();
                g.add_vertex(v).unwrap();
                g.add_edge(prev, v).unwrap();
                prev = v;
            }
            let e = g.next_id();
            let [a, b, c, d] = [e + 1, e + 2, e + 3, e + 4];
            for v in [e, a, b, c, d] {
                g.add_vertex(v).unwrap();
            }
            for (x, y) in [
                (prev, e),
                (e, a),
                (e, b),
                (a, b),
                (a, c),
                (a, d),
                (b, c),
                (b, d),
                (c, d),
            ] {
                g.add_edge(x, y).unwrap();
            }
        }
        g
    }

    /// Parses `C<l>`, `P<l>`, `K<n>` or `SK<n>` (also `subdivided_K<n>`).
    pub fn by_name(name: &str) -> Result<Graph, GenError> {
        let bad = || GenError::InvalidParams(format!("unknown graph name `{name}`"));
        let (kind, num) = if let Some(n) = name.strip_prefix("subdivided_K").or(name.strip_prefix("SK")) {
            ("SK", n)
        } else {
            let i = name.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
            name.split_at(i)
        };
        let n: usize = num.parse().map_err(|_| bad())?;
        match kind {
            "C" => cycle(n),
            "P" => path(n),
            "K" => complete(n),
            "SK" => subdivided_complete(n),
            _ => Err(bad()),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected K4-minor-free graph on `n` vertices with maximum
/// degree at most 4.
///
/// Grows from one vertex by three operations that never create a K4 minor:
/// attaching a pendant vertex, subdividing an edge, and adding a vertex
/// adjacent to both ends of an edge. Operations that would push a degree
/// past 4 are retried a bounded number of times; subdividing is always
/// available and never raises a degree.
pub fn gen_k4mf(n: usize, seed: u64) -> Result<Certified, GenError> {
    if n == 0 {
        return Err(GenError::InvalidParams("n must be at least 1".into()));
    }
    let mut r = rng(seed);
    let mut g = Graph::with_vertices(1);
    for next in 1..n as VertexId {
        g.add_vertex(next).unwrap();
        let mut done = false;
        for _ in 0..8 {
            let edges = g.edges();
            let op = if edges.is_empty() { 0 } else { r.random_range(0..3) };
            match op {
                0 => {
                    let v = r.random_range(0..next);
                    if g.deg(v) < 4 {
                        g.add_edge(v, next).unwrap();
                        done = true;
                    }
                }
                1 => {
                    let &(a, b) = edges.choose(&mut r).unwrap();
                    g.remove_edge(a, b);
                    g.add_edge(a, next).unwrap();
                    g.add_edge(next, b).unwrap();
                    done = true;
                }
                _ => {
                    let &(a, b) = edges.choose(&mut r).unwrap();
                    if g.deg(a) < 4 && g.deg(b) < 4 {
                        g.add_edge(a, next).unwrap();
                        g.add_edge(b, next).unwrap();
                        done = true;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !done {
            let &(a, b) = g.edges().choose(&mut r).unwrap();
            g.remove_edge(a, b);
            g.add_edge(a, next).unwrap();
            g.add_edge(next, b).unwrap();
        }
    }
    let cert = ClassCertificate::k4_minor_free(&g).expect("growth operations keep the graph K4-minor-free");
    assert!(g.max_degree() <= 4 && g.is_connected());
    Ok(Certified { graph: g, cert })
}

/// Random connected outer-1-planar graph on `n` vertices, optionally with
/// maximum degree at most `max_degree`.
///
/// The vertices are placed on a circle in random order and joined into a
/// cycle. Random chords are then added whenever they respect the degree cap
/// and either cross nothing or cross exactly one chord that is not yet
/// crossed. Finally a random share of non-bridge edges is deleted.
pub fn gen_o1p(n: usize, seed: u64, max_degree: Option<usize>) -> Result<Certified, GenError> {
    if n == 0 {
        return Err(GenError::InvalidParams("n must be at least 1".into()));
    }
    if max_degree.is_some_and(|d| d < 2) && n > 2 {
        return Err(GenError::InvalidParams(
            "a connected graph on 3+ vertices needs degree cap >= 2".into(),
        ));
    }
    let mut r = rng(seed);
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.shuffle(&mut r);
    let mut g = Graph::with_vertices(n);
    if n == 2 {
        g.add_edge(0, 1).unwrap();
    }
    if n >= 3 {
        for i in 0..n {
            g.add_edge(order[i], order[(i + 1) % n]).unwrap();
        }
        let cap = max_degree.unwrap_or(usize::MAX);
        let attempts = r.random_range(0..=2 * n);
        for _ in 0..attempts {
            let i = r.random_range(0..n);
            let j = r.random_range(0..n);
            let (a, b) = (order[i], order[j]);
            if a == b || g.has_edge(a, b) || g.deg(a) >= cap || g.deg(b) >= cap {
                continue;
            }
            g.add_edge(a, b).unwrap();
            let pairs = crossing_pairs(&g, &order).unwrap();
            if !(OuterEmbedding {
                order: order.clone(),
                crossings: pairs,
            })
            .is_outer_1_planar()
            {
                g.remove_edge(a, b);
            }
        }
        let p_delete: f64 = r.random_range(0.0..0.6);
        let mut edges = g.edges();
        edges.shuffle(&mut r);
        for (a, b) in edges {
            if r.random_bool(p_delete) {
                g.remove_edge(a, b);
                if !g.is_connected() {
                    g.add_edge(a, b).unwrap();
                }
            }
        }
    }
    let embedding = OuterEmbedding::from_order(&g, order).unwrap();
    let cert =
        ClassCertificate::outer_1_planar(&g, embedding).expect("construction keeps at most one crossing per edge");
    assert!(g.is_connected() && max_degree.is_none_or(|d| g.max_degree() <= d));
    Ok(Certified { graph: g, cert })
}

/// Random connected outerplanar base on `n_base` vertices with at least one
/// cycle, subdivided so that the girth reaches 12.
///
/// The base is a cycle on a random subset of the vertices with a few
/// non-crossing chords; the remaining vertices hang off it as trees. With
/// base girth `g0`, every edge is subdivided `ceil(12 / g0) - 1` times.
pub fn gen_girth12(n_base: usize, seed: u64) -> Result<Certified, GenError> {
    if n_base < 3 {
        return Err(GenError::InvalidParams("base needs at least 3 vertices".into()));
    }
    let mut r = rng(seed);
    let c = r.random_range(3..=n_base);
    let mut ids: Vec<VertexId> = (0..n_base as VertexId).collect();
    ids.shuffle(&mut r);
    let mut order: Vec<VertexId> = ids[..c].to_vec();
    let mut base = Graph::with_vertices(n_base);
    for i in 0..c {
        base.add_edge(order[i], order[(i + 1) % c]).unwrap();
    }
    let chords = r.random_range(0..=c / 2);
    for _ in 0..chords {
        let (a, b) = (order[r.random_range(0..c)], order[r.random_range(0..c)]);
        if a == b || base.has_edge(a, b) {
            continue;
        }
        base.add_edge(a, b).unwrap();
        let sub = base.induced(&order.iter().copied().collect());
        if !crossing_pairs(&sub, &order).unwrap().is_empty() {
            base.remove_edge(a, b);
        }
    }
    for &v in &ids[c..] {
        // a leaf right after its parent on the circle crosses nothing
        let i = r.random_range(0..order.len());
        base.add_edge(order[i], v).unwrap();
        order.insert(i + 1, v);
    }
    let rotation = circle_rotation(&base, &order);
    girth12_from_base(&base, rotation)
}

/// Subdivides a connected planar `base` (with a cycle) just enough to reach
/// girth 12. `rotation` must be a planar embedding of `base`.
pub fn girth12_from_base(base: &Graph, rotation: Rotation) -> Result<Certified, GenError> {
    if !base.has_contiguous_ids() || !is_planar_rotation(base, &rotation) {
        return Err(GenError::InvalidParams(
            "base must have ids 0..n and a planar rotation".into(),
        ));
    }
    let Girth::Finite(g0) = base.girth() else {
        return Err(GenError::InvalidParams("base must contain a cycle".into()));
    };
    let subdivisions = 12usize.div_ceil(g0) - 1;
    let witness = SubdivisionWitness {
        base_order: base.order(),
        base_edges: base.edges(),
        base_rotation: rotation,
        base_girth: g0,
        subdivisions,
    };
    let graph = named::subdivide_edges(base, subdivisions);
    let cert = ClassCertificate::planar_girth12(&graph, witness).expect("subdivision of a planar base verifies");
    Ok(Certified { graph, cert })
}

/// `K4` with every edge subdivided three times: girth exactly 12.
pub fn subdivided_k4_girth12() -> Certified {
    let k4 = named::complete(4).unwrap();
    let rotation: Rotation = [
        (0, vec![1, 3, 2]),
        (1, vec![2, 3, 0]),
        (2, vec![0, 3, 1]),
        (3, vec![0, 1, 2]),
    ]
    .into_iter()
    .collect();
    girth12_from_base(&k4, rotation).expect("K4 rotation is planar")
}

/// Operation I on the 5-cycle `x u w y v` whose vertices `u`, `w`, `v`
/// have degree 2: delete `v` and join `x` and `y` unless already adjacent.
/// `cycle` is `[x, u, w, y, v]`.
pub fn operation_i(g: &Graph, cycle: [VertexId; 5]) -> Result<Graph, GenError> {
    let [x, u, w, y, v] = cycle;
    let distinct: BTreeSet<_> = cycle.iter().collect();
    let ring = [(x, u), (u, w), (w, y), (y, v), (v, x)];
    if distinct.len() != 5
        || cycle.iter().any(|&a| !g.contains(a))
        || ring.iter().any(|&(a, b)| !g.has_edge(a, b))
        || [u, w, v].iter().any(|&a| g.deg(a) != 2)
    {
        return Err(GenError::NotApplicable(format!(
            "{cycle:?} is not a 5-cycle with 2-vertices u, w, v"
        )));
    }
    let mut h = g.delete_vertices(&[v]).unwrap();
    if !h.has_edge(x, y) {
        h.add_edge(x, y).unwrap();
    }
    Ok(h)
}

/// Operation II on the path `x u v y` with `d(u) = d(v) = 2` and `x != y`:
/// replace it by `x w y` with a single 2-vertex. `v` is deleted and `u`
/// plays the role of `w`. `path` is `[x, u, v, y]`.
pub fn operation_ii(g: &Graph, path: [VertexId; 4]) -> Result<Graph, GenError> {
    let [x, u, v, y] = path;
    let distinct: BTreeSet<_> = path.iter().collect();
    if distinct.len() != 4
        || path.iter().any(|&a| !g.contains(a))
        || !(g.has_edge(x, u) && g.has_edge(u, v) && g.has_edge(v, y))
        || g.deg(u) != 2
        || g.deg(v) != 2
    {
        return Err(GenError::NotApplicable(format!(
            "{path:?} is not a path x u v y with 2-vertices u, v and x != y"
        )));
    }
    let mut h = g.delete_vertices(&[v]).unwrap();
    h.add_edge(u, y).unwrap();
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::GraphClass;

    #[test]
    fn named_graphs() {
        let c5 = named::by_name("C5").unwrap();
        assert!(c5.is_cycle() && c5.order() == 5);
        let sk4 = named::by_name("subdivided_K4").unwrap();
        assert_eq!((sk4.order(), sk4.max_degree()), (10, 3));
        assert_eq!(named::by_name("SK5").unwrap().order(), 15);
        assert_eq!(named::by_name("C7").unwrap().size(), 7);
        assert_eq!(named::by_name("P2").unwrap().size(), 1);
        assert!(named::by_name("C2").is_err());
        assert!(named::by_name("Q3").is_err());
        assert!(named::by_name("C").is_err());
    }

    #[test]
    fn k4mf_small_cases() {
        let one = gen_k4mf(1, 3).unwrap();
        assert_eq!(one.graph.order(), 1);
        for seed in 0..50 {
            let c = gen_k4mf(5, seed).unwrap();
            assert!(c.graph.is_k4_minor_free() && c.graph.max_degree() <= 4);
            assert_eq!(c.cert.class(), GraphClass::K4MinorFree);
            assert!(c.cert.verify(&c.graph).is_ok());
        }
        assert_eq!(gen_k4mf(12, 9).unwrap(), gen_k4mf(12, 9).unwrap());
    }

    #[test]
    fn o1p_outputs_verify() {
        for seed in 0..100 {
            for cap in [None, Some(4)] {
                let c = gen_o1p(3 + (seed as usize % 20), seed, cap).unwrap();
                assert!(c.cert.verify(&c.graph).is_ok());
                assert!(c.graph.degeneracy().value <= 3);
                if let Some(d) = cap {
                    assert!(c.graph.max_degree() <= d);
                }
            }
        }
        assert_eq!(gen_o1p(1, 0, None).unwrap().graph.order(), 1);
        assert_eq!(gen_o1p(2, 0, None).unwrap().graph.size(), 1);
    }

    #[test]
    fn girth12_outputs_verify() {
        for seed in 0..100 {
            let c = gen_girth12(3 + seed as usize % 6, seed).unwrap();
            assert!(c.graph.girth().at_least(12));
            assert!(5 * c.graph.size() <= 6 * c.graph.order() - 12);
            assert!(c.cert.verify(&c.graph).is_ok());
        }
        let sk4 = subdivided_k4_girth12();
        assert_eq!(sk4.graph.girth(), Girth::Finite(12));
        assert_eq!(sk4.graph.order(), 4 + 6 * 3);
    }

    #[test]
    fn c12_base_is_left_alone() {
        let c12 = named::cycle(12).unwrap();
        let rot = circle_rotation(&c12, &(0..12).collect::<Vec<_>>());
        let c = girth12_from_base(&c12, rot).unwrap();
        assert_eq!(c.graph, c12);
    }

    #[test]
    fn operation_ii_shrinks_cycles() {
        let c6 = named::cycle(6).unwrap();
        let c5 = operation_ii(&c6, [0, 1, 2, 3]).unwrap();
        assert!(c5.is_cycle() && c5.order() == 5);
        let c10 = named::cycle(10).unwrap();
        let c9 = operation_ii(&c10, [4, 5, 6, 7]).unwrap();
        assert!(c9.is_cycle() && c9.order() == 9);
        assert!(operation_ii(&named::cycle(3).unwrap(), [0, 1, 2, 0]).is_err());
    }

    #[test]
    fn operation_i_adds_the_chord_once() {
        // 5-cycle x u w y v with x, y joined also through a pendant-free path
        let (x, u, w, y, v) = (0, 1, 2, 3, 4);
        let mut g = Graph::from_edges(6, &[(x, u), (u, w), (w, y), (y, v), (v, x), (x, 5), (5, y)]).unwrap();
        let h = operation_i(&g, [x, u, w, y, v]).unwrap();
        assert!(h.has_edge(x, y) && !h.contains(v));
        g.add_edge(x, y).unwrap();
        let h2 = operation_i(&g, [x, u, w, y, v]).unwrap();
        assert_eq!(h2.size(), g.size() - 2);
        assert!(operation_i(&g, [x, u, 5, y, v]).is_err());
    }
}
