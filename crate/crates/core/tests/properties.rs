//! Property-based invariants over generated instances.

use proptest::prelude::*;

use pcf_core::colorer::{color, ColorOptions, Regime, TraceStep};
use pcf_core::coloring::{degree_plus_k, is_pcf, random_uniform_size, unique_colors};
use pcf_core::discharging::{girth12_ids, initial_charges, run_discharging, Fifths};
use pcf_core::generators::{gen_girth12, gen_k4mf, gen_o1p, named};
use pcf_core::io::{parse_edge_list, write_edge_list};
use pcf_core::patterns::{find_any, t_range, verify_match};
use pcf_core::{ClassCertificate, Coloring, Graph, GraphClass, ListAssignment};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trips(g in arb_graph(12)) {
        let text = write_edge_list(&g).unwrap();
        prop_assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn json_round_trips(g in arb_graph(10), seed in any::<u64>()) {
        let lists = degree_plus_k(&g, 2, g.max_degree() + 4, seed).unwrap();
        prop_assert_eq!(ListAssignment::from_json(&lists.to_json()).unwrap(), lists.clone());
        let phi: Coloring = g.vertices().map(|v| (v, *lists.get(v).unwrap().iter().next().unwrap())).collect();
        prop_assert_eq!(Coloring::from_json(&phi.to_json()).unwrap(), phi);
    }

    #[test]
    fn degree_plus_lists_have_the_right_sizes(g in arb_graph(10), k in 1usize..4, seed in any::<u64>()) {
        let lists = degree_plus_k(&g, k, g.max_degree() + k + 3, seed).unwrap();
        prop_assert!(lists.is_degree_plus(&g, k));
        prop_assert_eq!(degree_plus_k(&g, k, g.max_degree() + k + 3, seed).unwrap(), lists);
    }

    #[test]
    fn charge_is_conserved_and_totals_5e_minus_12v(g in arb_graph(10)) {
        let init = initial_charges(&g);
        prop_assert_eq!(init.total(), Fifths(10 * g.size() as i64 - 12 * g.order() as i64));
        if let Ok((i, f)) = run_discharging(&g) {
            prop_assert_eq!(i.total(), f.total());
        }
    }

    #[test]
    fn unique_colors_are_seen_once(g in arb_graph(9), seed in any::<u64>()) {
        let lists = random_uniform_size(&g, 3, 3, seed).unwrap();
        let phi: Coloring = g.vertices().map(|v| (v, *lists.get(v).unwrap().iter().nth((seed as usize + v as usize) % 3).unwrap())).collect();
        for v in g.vertices() {
            for c in unique_colors(&g, &phi, v).unwrap() {
                prop_assert_eq!(g.neighbors(v).iter().filter(|&&w| phi.get(w) == Some(c)).count(), 1);
            }
        }
    }

    #[test]
    fn k4mf_instances_are_certified_and_colorable(n in 1usize..40, seed in any::<u64>()) {
        let c = gen_k4mf(n, seed).unwrap();
        let g = &c.graph;
        prop_assert!(g.is_connected() && g.max_degree() <= 4 && g.is_k4_minor_free());
        prop_assert!(g.degeneracy().value <= 2);
        prop_assert!(c.cert.verify(g).is_ok());
        prop_assume!(!(g.is_cycle() && g.order() == 5));
        if g.order() > 1 {
            prop_assert!(find_any(g, &t_range(1, 12)).is_some());
        }
        let lists = degree_plus_k(g, 2, g.max_degree() + 4, seed).unwrap();
        let r = color(g, &lists, &c.cert, Regime::DegreePlus(2), &ColorOptions::default()).unwrap();
        prop_assert!(is_pcf(g, &r.coloring, Some(&lists)).unwrap().pcf);
        prop_assert_eq!(r.trace.replay(), r.coloring);
        prop_assert!(r.trace.is_local());
        for step in &r.trace.steps {
            if let TraceStep::Reduce { config, .. } = step {
                prop_assert!(t_range(1, 12).contains(&config.id));
            }
        }
    }

    #[test]
    fn o1p_instances_are_certified_and_colorable(n in 1usize..40, seed in any::<u64>(), capped in any::<bool>()) {
        let c = gen_o1p(n, seed, capped.then_some(4)).unwrap();
        let g = &c.graph;
        prop_assert!(g.is_connected() && g.degeneracy().value <= 3);
        prop_assert_eq!(c.cert.class(), GraphClass::Outer1Planar);
        prop_assert!(c.cert.verify(g).is_ok());
        let lists = degree_plus_k(g, 3, g.max_degree() + 5, seed).unwrap();
        let r = color(g, &lists, &c.cert, Regime::DegreePlus(3), &ColorOptions::default()).unwrap();
        prop_assert!(is_pcf(g, &r.coloring, Some(&lists)).unwrap().pcf);
        prop_assert!(r.trace.is_local());
        let six = random_uniform_size(g, 6, 9, seed).unwrap();
        let r = color(g, &six, &c.cert, Regime::Uniform(6), &ColorOptions::default()).unwrap();
        prop_assert!(is_pcf(g, &r.coloring, Some(&six)).unwrap().pcf);
    }

    #[test]
    fn girth12_instances_are_certified_and_colorable(n_base in 3usize..9, seed in any::<u64>()) {
        let c = gen_girth12(n_base, seed).unwrap();
        let g = &c.graph;
        prop_assert!(g.girth().at_least(12));
        prop_assert!(c.cert.verify(g).is_ok());
        let lists = degree_plus_k(g, 2, g.max_degree() + 4, seed).unwrap();
        let r = color(g, &lists, &c.cert, Regime::DegreePlus(2), &ColorOptions::default()).unwrap();
        prop_assert!(is_pcf(g, &r.coloring, Some(&lists)).unwrap().pcf);
        prop_assert!(r.trace.is_local());
        for step in &r.trace.steps {
            if let TraceStep::Reduce { config, .. } = step {
                prop_assert!(girth12_ids().contains(&config.id));
            }
        }
    }

    #[test]
    fn certificates_reject_other_graphs(n in 5usize..20, seed in any::<u64>()) {
        let c = gen_o1p(n, seed, None).unwrap();
        let mut other = c.graph.clone();
        let extra = other.next_id();
        other.add_vertex(extra).unwrap();
        other.add_edge(0, extra).unwrap();
        prop_assert!(c.cert.verify(&other).is_err());
        prop_assert!(ClassCertificate::from_json(&other, &c.cert.to_json()).is_err());
    }
}

#[test]
fn cycles_have_the_stated_small_patterns() {
    let c6 = named::cycle(6).unwrap();
    let m = find_any(&c6, &t_range(1, 12)).unwrap();
    assert!(verify_match(&c6, &m));
}
