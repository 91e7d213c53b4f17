//! Arborescence enumeration and weighted arborescence sums.
//!
//! An arborescence rooted at v is a spanning tree in which every vertex
//! other than v has exactly one outgoing edge and following those edges
//! always reaches v. The sum over all arborescences of the product of
//! edge weights is computed two independent ways: literal enumeration
//! (slow, obviously correct) and the Laplacian-minor determinant. The
//! pair acts as a cross-check throughout the test suite.

use crate::graph::{VertexId, WeightedDigraph};
use crate::ring::Poly;
use std::collections::BTreeMap;
use thiserror::Error;

/// Enumeration refuses instances with more candidate choice vectors than
/// this; the check runs before any allocation.
pub const CHOICE_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArborError {
    #[error("enumeration would scan {product} choice vectors (budget {budget})")]
    ChoiceBudgetExceeded { product: u128, budget: u128 },
}

/// One arborescence: the chosen out-edge (by edge id) for every
/// non-root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arborescence {
    pub root: VertexId,
    pub chosen: BTreeMap<VertexId, usize>,
}

impl Arborescence {
    /// Product of the weights of the chosen edges (1 for a single
    /// vertex graph, where nothing is chosen).
    pub fn weight(&self, g: &WeightedDigraph) -> Poly {
        self.chosen
            .values()
            .fold(Poly::one(), |acc, &e| acc.mul(&g.edges()[e].weight))
    }
}

/// All arborescences rooted at `root`, by scanning every way of picking
/// one out-edge per non-root vertex and keeping the picks that reach the
/// root without cycling. Loops are skipped during generation since a
/// vertex sitting on its own loop can never reach the root.
pub fn enumerate_arborescences(
    g: &WeightedDigraph,
    root: VertexId,
) -> Result<Vec<Arborescence>, ArborError> {
    enumerate_impl(g, root, true)
}

fn enumerate_impl(
    g: &WeightedDigraph,
    root: VertexId,
    skip_loops: bool,
) -> Result<Vec<Arborescence>, ArborError> {
    assert!(root.0 < g.vertex_count(), "root must be a graph vertex");
    let non_roots: Vec<VertexId> = g.vertex_ids().filter(|&v| v != root).collect();
    let choices: Vec<Vec<usize>> = non_roots
        .iter()
        .map(|&v| {
            g.out_edges(v)
                .filter(|e| !skip_loops || e.src != e.tgt)
                .map(|e| e.id)
                .collect()
        })
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let mut product: u128 = 1;
    for c in &choices {
        product = product.saturating_mul(c.len() as u128);
        if product > CHOICE_BUDGET {
            return Err(ArborError::ChoiceBudgetExceeded {
                product,
                budget: CHOICE_BUDGET,
            });
        }
    }

    let n = g.vertex_count();
    let mut found = Vec::new();
    let mut digits = vec![0usize; non_roots.len()];
    let mut next = vec![usize::MAX; n];
    loop {
        for (idx, (&v, &d)) in non_roots.iter().zip(&digits).enumerate() {
            next[v.0] = g.edges()[choices[idx][d]].tgt.0;
        }
        if reaches_root_everywhere(&next, root, &non_roots) {
            let chosen = non_roots
                .iter()
                .zip(&digits)
                .enumerate()
                .map(|(idx, (&v, &d))| (v, choices[idx][d]))
                .collect();
            found.push(Arborescence { root, chosen });
        }
        // Mixed-radix increment over the choice vector.
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(found);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < choices[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// True when following `next` from every non-root vertex reaches `root`
/// within |V| steps (no cycles among the chosen edges).
fn reaches_root_everywhere(next: &[usize], root: VertexId, non_roots: &[VertexId]) -> bool {
    let n = next.len();
    for &v in non_roots {
        let mut at = v.0;
        let mut steps = 0;
        while at != root.0 {
            at = next[at];
            steps += 1;
            if steps >= n {
                return false;
            }
        }
    }
    true
}

/// Arborescence sum by literal enumeration; zero when none exist.
pub fn arborescence_sum_bruteforce(
    g: &WeightedDigraph,
    root: VertexId,
) -> Result<Poly, ArborError> {
    Ok(enumerate_arborescences(g, root)?
        .iter()
        .fold(Poly::zero(), |acc, t| acc.add(&t.weight(g))))
}

/// Arborescence sum as the determinant of the Laplacian with the root's
/// row and column removed.
pub fn arborescence_sum_matrixtree(g: &WeightedDigraph, root: VertexId) -> Poly {
    assert!(root.0 < g.vertex_count(), "root must be a graph vertex");
    g.laplacian()
        .delete_row_col(root.0, root.0)
        .determinant()
        .expect("minor of a square matrix is square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::ring::{Poly, VarId};
    use num::One;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn complete3() -> WeightedDigraph {
        parse_graph(include_str!("../../../fixtures/complete3.graph"))
            .unwrap()
            .into_base()
    }

    fn graph(text: &str) -> WeightedDigraph {
        parse_graph(text).unwrap().into_base()
    }

    #[test]
    fn complete3_has_three_arborescences_at_root_1() {
        let g = complete3();
        let found = enumerate_arborescences(&g, VertexId(0)).unwrap();
        assert_eq!(found.len(), 3);
        let mut weights: Vec<String> = found.iter().map(|t| t.weight(&g).to_string()).collect();
        weights.sort();
        assert_eq!(weights, ["x21*x31", "x21*x32", "x23*x31"]);
    }

    #[test]
    fn complete3_sums_agree_with_known_value() {
        let g = complete3();
        let expected = p("x21*x31 + x23*x31 + x21*x32");
        assert_eq!(arborescence_sum_bruteforce(&g, VertexId(0)).unwrap(), expected);
        assert_eq!(arborescence_sum_matrixtree(&g, VertexId(0)), expected);
    }

    #[test]
    fn single_vertex_has_the_empty_arborescence() {
        let g = graph("vertex v\nedge v v weight a\nedge v v weight b\n");
        let found = enumerate_arborescences(&g, VertexId(0)).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].chosen.is_empty());
        assert_eq!(arborescence_sum_bruteforce(&g, VertexId(0)).unwrap(), Poly::one());
        assert_eq!(arborescence_sum_matrixtree(&g, VertexId(0)), Poly::one());
    }

    #[test]
    fn single_edge_graph_both_roots() {
        // u -> v: rooted at u, the non-root v has no out-edge, so there
        // is no arborescence; rooted at v, u's single choice works.
        let g = graph("vertex u\nvertex v\nedge u v weight w\n");
        let u = g.vertex_by_name("u").unwrap();
        let v = g.vertex_by_name("v").unwrap();
        assert_eq!(enumerate_arborescences(&g, u).unwrap().len(), 0);
        assert_eq!(enumerate_arborescences(&g, v).unwrap().len(), 1);
        assert!(arborescence_sum_bruteforce(&g, u).unwrap().is_zero());
        assert_eq!(arborescence_sum_bruteforce(&g, v).unwrap(), p("w"));
        assert!(arborescence_sum_matrixtree(&g, u).is_zero());
        assert_eq!(arborescence_sum_matrixtree(&g, v), p("w"));
    }

    #[test]
    fn disconnected_graph_has_no_arborescences() {
        let g = graph("vertex u\nvertex v\n");
        for root in g.vertex_ids() {
            assert!(arborescence_sum_bruteforce(&g, root).unwrap().is_zero());
            assert!(arborescence_sum_matrixtree(&g, root).is_zero());
        }
    }

    #[test]
    fn budget_guard_trips() {
        // 8 non-root vertices, 12 parallel out-edges each: 12^8 > 10^6.
        let mut text = String::new();
        for i in 0..9 {
            text.push_str(&format!("vertex v{i}\n"));
        }
        for i in 1..9 {
            for j in 0..12 {
                text.push_str(&format!("edge v{i} v0 weight w{i}_{j}\n"));
            }
        }
        let g = graph(&text);
        assert!(matches!(
            enumerate_arborescences(&g, VertexId(0)),
            Err(ArborError::ChoiceBudgetExceeded { .. })
        ));
    }

    /// Random multigraph with ≤4 vertices, ≤6 edges, distinct
    /// indeterminate weights w0, w1, ...
    fn random_graph() -> impl Strategy<Value = WeightedDigraph> {
        (1usize..=4).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..=6).prop_map(move |pairs| {
                let mut g = WeightedDigraph::new();
                for i in 0..n {
                    g.add_vertex(&format!("v{i}")).unwrap();
                }
                for (idx, (s, t)) in pairs.into_iter().enumerate() {
                    g.add_edge(VertexId(s), VertexId(t), p(&format!("w{idx}")))
                        .unwrap();
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn matrixtree_matches_bruteforce(g in random_graph()) {
            for root in g.vertex_ids() {
                prop_assert_eq!(
                    arborescence_sum_matrixtree(&g, root),
                    arborescence_sum_bruteforce(&g, root).unwrap()
                );
            }
        }

        #[test]
        fn distinct_weights_give_unit_coefficients(g in random_graph()) {
            for root in g.vertex_ids() {
                let trees = enumerate_arborescences(&g, root).unwrap();
                let sum = arborescence_sum_bruteforce(&g, root).unwrap();
                prop_assert_eq!(sum.term_count(), trees.len());
                for (_, c) in sum.terms() {
                    prop_assert!(c.is_one());
                }
            }
        }

        #[test]
        fn loops_never_change_the_sum(g in random_graph(), at in 0usize..4) {
            let v = VertexId(at % g.vertex_count());
            let mut with_loop = g.clone();
            with_loop.add_edge(v, v, p("extraloop")).unwrap();
            for root in g.vertex_ids() {
                prop_assert_eq!(
                    arborescence_sum_matrixtree(&with_loop, root),
                    arborescence_sum_matrixtree(&g, root)
                );
                prop_assert_eq!(
                    arborescence_sum_bruteforce(&with_loop, root).unwrap(),
                    arborescence_sum_bruteforce(&g, root).unwrap()
                );
            }
        }

        #[test]
        fn loop_skipping_is_an_equivalence(g in random_graph()) {
            for root in g.vertex_ids() {
                let skipped = enumerate_impl(&g, root, true).unwrap();
                let scanned = enumerate_impl(&g, root, false).unwrap();
                prop_assert_eq!(skipped, scanned);
            }
        }

        #[test]
        fn sum_is_linear_in_each_edge_weight(g in random_graph(), pick in 0usize..6) {
            prop_assume!(g.edge_count() > 0);
            let edge = pick % g.edge_count();
            let original_weight = g.edges()[edge].weight.clone();
            let mut fresh = WeightedDigraph::new();
            for name in g.vertex_names() {
                fresh.add_vertex(name).unwrap();
            }
            for e in g.edges() {
                let w = if e.id == edge { p("s") } else { e.weight.clone() };
                fresh.add_edge(e.src, e.tgt, w).unwrap();
            }
            let s = VarId::new("s").unwrap();
            for root in g.vertex_ids() {
                let sum_s = arborescence_sum_matrixtree(&fresh, root);
                // Degree in s is at most 1, and substituting the original
                // weight back recovers the original sum.
                prop_assert!(sum_s.terms().all(|(m, _)| m.exponent(&s) <= 1));
                let restored = sum_s
                    .coefficient_of(&s, 0)
                    .add(&sum_s.coefficient_of(&s, 1).mul(&original_weight));
                prop_assert_eq!(restored, arborescence_sum_matrixtree(&g, root));
            }
        }
    }
}
