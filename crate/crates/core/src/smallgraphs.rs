//! Exhaustive corpus of small connected graphs up to isomorphism.
//!
//! Graphs on `n` vertices are produced from those on `n - 1` by adding a
//! vertex with every nonempty neighborhood. Every connected graph has a
//! vertex whose removal keeps it connected, so nothing is missed.
//! Duplicates are removed with a canonical code: the minimum adjacency
//! bitstring over vertex orders that sort vertices by degree.

use std::collections::BTreeSet;

use crate::graph::Graph;

/// Largest order supported; codes are upper-triangle bitstrings in a `u64`.
pub const MAX_ORDER: usize = 11;

/// Bit index of pair `i < j` in the upper triangle, row by row.
fn bit(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn code_of(n: usize, adj: &[u16], perm: &[usize]) -> u64 {
    let mut code = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if adj[perm[i]] & (1 << perm[j]) != 0 {
                code |= 1 << bit(n, i, j);
            }
        }
    }
    code
}

/// Canonical code of the graph with bitset adjacency `adj`.
fn canonical(n: usize, adj: &[u16]) -> u64 {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (adj[v].count_ones(), v));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match classes.last_mut() {
            Some(c) if adj[c[0]].count_ones() == adj[v].count_ones() => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut perm = Vec::with_capacity(n);
    permute_classes(&classes, 0, &mut perm, &mut |p| best = best.min(code_of(n, adj, p)));
    best
}

fn permute_classes(classes: &[Vec<usize>], ci: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if ci == classes.len() {
        f(perm);
        return;
    }
    let mut class = classes[ci].clone();
    heap_permutations(&mut class, classes[ci].len(), &mut |p| {
        let mark = perm.len();
        perm.extend_from_slice(p);
        permute_classes(classes, ci + 1, perm, f);
        perm.truncate(mark);
    });
}

fn heap_permutations(items: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        f(items);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(items, k - 1, f);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    heap_permutations(items, k - 1, f);
}

fn decode(n: usize, code: u64) -> Vec<u16> {
    let mut adj = vec![0u16; n];
    for i in 0..n {
        for j in i + 1..n {
            if code & (1 << bit(n, i, j)) != 0 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

fn to_graph(n: usize, adj: &[u16]) -> Graph {
    let mut edges = Vec::new();
    for (i, row) in adj.iter().enumerate() {
        for j in i + 1..n {
            if row & (1 << j) != 0 {
                edges.push((i as u32, j as u32));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("decoded edges are simple")
}

/// Canonical codes of connected graphs on exactly `n` vertices, sorted.
fn connected_codes(n: usize) -> Vec<u64> {
    assert!((1..=MAX_ORDER).contains(&n), "order {n} out of range");
    if n == 1 {
        return vec![0];
    }
    let mut out = BTreeSet::new();
    for code in connected_codes(n - 1) {
        let small = decode(n - 1, code);
        for nbrs in 1u16..(1 << (n - 1)) {
            let mut adj = small.clone();
            adj.push(nbrs);
            for (i, a) in adj.iter_mut().enumerate().take(n - 1) {
                if nbrs & (1 << i) != 0 {
                    *a |= 1 << (n - 1);
                }
            }
            out.insert(canonical(n, &adj));
        }
    }
    out.into_iter().collect()
}

/// All connected graphs on `1..=max_order` vertices, one per isomorphism
/// class, ordered by order then canonical code.
pub fn connected_graphs(max_order: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        for code in connected_codes(n) {
            out.push(to_graph(n, &decode(n, code)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=7).map(|n| connected_codes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112, 853]);
        assert_eq!(connected_graphs(7).len(), 996);
    }

    #[test]
    fn every_graph_is_connected_and_canonical_codes_are_invariant() {
        for g in connected_graphs(5) {
            assert!(g.is_connected());
        }
        // the path 0-1-2 and 1-0-2 give the same code
        let a = [0b010u16, 0b101, 0b010];
        let b = [0b110u16, 0b001, 0b001];
        assert_eq!(canonical(3, &a), canonical(3, &b));
    }
}
