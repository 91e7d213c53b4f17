//! Cross-module consistency properties. The brute-force enumeration
//! route, the determinant route, and the closed formula are written
//! against different parts of the codebase; wherever their domains
//! overlap they must describe the same numbers, on random inputs, not
//! just on the worked examples.

use arbolift::arborescence::arborescence_sum_matrixtree;
use arbolift::cover::{derive_cover, ratio_direct, ratio_via_det, validate_cover, CoverError};
use arbolift::expectation::{expected_ratio_exact, expected_ratio_formula, DEFAULT_BUDGET};
use arbolift::graph::{Permutation, VertexId, VoltageGraph, WeightedDigraph};
use arbolift::ring::{rat, Poly, VarId};
use proptest::prelude::*;

/// A digraph on `1..=max_v` vertices with `1..=max_e` edges. Weights
/// come from `weight_for`, keyed by edge index.
fn graph_strategy(
    max_v: usize,
    max_e: usize,
    weight_for: fn(usize, i64) -> Poly,
) -> impl Strategy<Value = WeightedDigraph> {
    (1..=max_v).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n, 1..=9i64), 1..=max_e).prop_map(move |triples| {
            let mut g = WeightedDigraph::new();
            for i in 0..n {
                g.add_vertex(&format!("v{i}")).unwrap();
            }
            for (idx, (s, t, w)) in triples.into_iter().enumerate() {
                g.add_edge(VertexId(s), VertexId(t), weight_for(idx, w))
                    .unwrap();
            }
            g
        })
    })
}

fn integer_weight(_idx: usize, w: i64) -> Poly {
    Poly::constant(rat(w))
}

fn variable_weight(idx: usize, _w: i64) -> Poly {
    Poly::var(VarId::new(&format!("w{idx}")).unwrap())
}

/// A voltage graph over `graph_strategy` with uniformly chosen
/// per-edge permutations.
fn voltage_graph_strategy(
    max_v: usize,
    max_e: usize,
    k: usize,
    weight_for: fn(usize, i64) -> Poly,
) -> impl Strategy<Value = VoltageGraph> {
    graph_strategy(max_v, max_e, weight_for).prop_flat_map(move |g| {
        let perms = Permutation::all(k);
        proptest::collection::vec(0..perms.len(), g.edge_count()).prop_map(move |picks| {
            let voltages = picks.iter().map(|&i| perms[i].clone()).collect();
            VoltageGraph::new(g.clone(), k, voltages).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The two ratio routes agree at every root and every lift of it,
    /// wherever the direct route is defined. Where it is not, the base
    /// really has no arborescence at that root.
    #[test]
    fn ratio_is_root_and_lift_independent(
        vg in (2usize..=3).prop_flat_map(|k| voltage_graph_strategy(3, 5, k, integer_weight)),
    ) {
        let via_det = ratio_via_det(&vg);
        for root in vg.base().vertex_ids() {
            for lift in 1..=vg.k() {
                match ratio_direct(&vg, root, lift) {
                    Ok(direct) => prop_assert_eq!(&direct, &via_det),
                    Err(CoverError::BaseHasNoArborescence { .. }) => {
                        prop_assert!(arborescence_sum_matrixtree(vg.base(), root).is_zero());
                    }
                    Err(other) => prop_assert!(false, "unexpected error: {}", other),
                }
            }
        }
    }

    /// The cover's arborescence sum at any lift equals the ratio times
    /// the base sum at the underlying root, here with both sums taken
    /// through the matrix-tree route on the derived cover itself.
    #[test]
    fn cover_sums_factor_through_the_ratio(
        vg in (2usize..=3).prop_flat_map(|k| voltage_graph_strategy(3, 5, k, integer_weight)),
    ) {
        let ratio = ratio_via_det(&vg);
        let dc = derive_cover(&vg);
        for root in vg.base().vertex_ids() {
            let base_sum = arborescence_sum_matrixtree(vg.base(), root);
            for lift in 1..=vg.k() {
                let lifted = dc.lift_of(root, lift);
                let cover_sum = arborescence_sum_matrixtree(&dc.cover, lifted);
                prop_assert_eq!(&cover_sum, &ratio.mul(&base_sum));
            }
        }
    }

    /// Derived covers validate cleanly: all four covering conditions.
    #[test]
    fn derived_covers_validate(
        vg in (2usize..=4).prop_flat_map(|k| voltage_graph_strategy(4, 6, k, variable_weight)),
    ) {
        let dc = derive_cover(&vg);
        let violations = validate_cover(&dc);
        prop_assert!(violations.is_empty(), "{violations:?}");
    }

    /// The voltage Laplacian determinant is k times the ratio, so with
    /// variable weights it must have integer coefficients.
    #[test]
    fn scaled_ratio_has_integer_coefficients(
        vg in (2usize..=3).prop_flat_map(|k| voltage_graph_strategy(3, 4, k, variable_weight)),
    ) {
        let det = ratio_via_det(&vg).scale(&rat(vg.k() as i64));
        prop_assert!(det.has_integer_coefficients(), "{det}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The closed formula equals the exhaustive average over all
    /// voltage assignments, symbolically, on random two-fold covers.
    #[test]
    fn formula_matches_exhaustive_average_at_fold_two(
        g in graph_strategy(2, 3, variable_weight),
    ) {
        let exact = expected_ratio_exact(&g, 2, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(exact, expected_ratio_formula(&g, 2));
    }

    /// Same statement at fold three, with fewer edges to keep the
    /// enumeration small.
    #[test]
    fn formula_matches_exhaustive_average_at_fold_three(
        g in graph_strategy(2, 2, variable_weight),
    ) {
        let exact = expected_ratio_exact(&g, 3, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(exact, expected_ratio_formula(&g, 3));
    }
}
