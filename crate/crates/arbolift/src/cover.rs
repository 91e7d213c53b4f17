//! Derived covering graphs of voltage graphs, covering-map validation,
//! the voltage Laplacian, and the arborescence ratio of a cover.
//!
//! A voltage graph with fold k determines a k-fold cover: vertex v lifts
//! to (v, x) for x in {1..k}, written `v^x`, and an edge v -> w with
//! permutation s lifts to the k edges (v, x) -> (w, s(x)), each keeping
//! the base weight. The arborescence ratio of the cover relative to its
//! base can be computed two ways: as 1/k times the determinant of the
//! voltage Laplacian, or directly as a quotient of arborescence sums.
//! Sheet 1 is the distinguished one in the Laplacian's definition: the
//! basis ranges over lifts v^t with t >= 2 only.

use crate::arborescence::{arborescence_sum_bruteforce, ArborError};
use crate::graph::{VertexId, VoltageGraph, WeightedDigraph};
use crate::matrix::RingMatrix;
use crate::ring::{frac, Poly, RingError};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("base graph has no arborescence rooted at `{root}`")]
    BaseHasNoArborescence { root: String },
    #[error("cover sum is not exactly divisible by the base sum; this indicates a bug")]
    NotDivisible,
    #[error(transparent)]
    Arbor(#[from] ArborError),
}

/// A derived cover together with its projection onto the base graph.
///
/// Fields are public so tests can tamper with a cover and watch
/// [`validate_cover`] catch the damage. Cover vertex `v.0 * k + (x-1)`
/// is the lift `(v, x)`; cover edge `e * k + (x-1)` is the lift of base
/// edge `e` starting on sheet `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedCover {
    pub base: WeightedDigraph,
    pub cover: WeightedDigraph,
    pub k: usize,
    /// Projection on vertices: cover vertex index -> base vertex.
    pub vertex_base: Vec<VertexId>,
    /// Projection on edges: cover edge index -> base edge id.
    pub edge_base: Vec<usize>,
}

impl DerivedCover {
    /// The lift `(v, x)` with `x` in 1..=k.
    pub fn lift_of(&self, v: VertexId, x: usize) -> VertexId {
        assert!(x >= 1 && x <= self.k, "sheet out of range");
        assert!(v.0 < self.base.vertex_count(), "base vertex out of range");
        VertexId(v.0 * self.k + (x - 1))
    }
}

/// Builds the k-fold derived cover of a voltage graph. Lifts are named
/// `<base>^<sheet>`.
pub fn derive_cover(vg: &VoltageGraph) -> DerivedCover {
    let base = vg.base();
    let k = vg.k();
    let mut cover = WeightedDigraph::new();
    let mut vertex_base = Vec::with_capacity(base.vertex_count() * k);
    for v in base.vertex_ids() {
        for x in 1..=k {
            cover
                .add_vertex(&format!("{}^{}", base.vertex_name(v), x))
                .expect("lift names are distinct");
            vertex_base.push(v);
        }
    }
    let mut edge_base = Vec::with_capacity(base.edge_count() * k);
    for e in base.edges() {
        let sigma = vg.voltage(e.id);
        for x in 1..=k {
            let src = VertexId(e.src.0 * k + (x - 1));
            let tgt = VertexId(e.tgt.0 * k + (sigma.apply(x) - 1));
            cover
                .add_edge(src, tgt, e.weight.clone())
                .expect("weights are nonzero");
            edge_base.push(e.id);
        }
    }
    DerivedCover {
        base: base.clone(),
        cover,
        k,
        vertex_base,
        edge_base,
    }
}

/// A failed covering-map condition, with the vertex or edge that
/// witnesses the failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverViolation {
    /// Which covering condition failed (1 projection of endpoints,
    /// 2 fiber size, 3 weight preservation, 4 local degree bijection).
    pub condition: u8,
    pub witness: String,
    pub detail: String,
}

impl fmt::Display for CoverViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "condition {} at {}: {}",
            self.condition, self.witness, self.detail
        )
    }
}

/// Checks the four conditions that make the projection a covering map:
/// (1) the projection sends each cover edge to a base edge joining the
/// projected endpoints, (2) every base vertex and edge has exactly k
/// preimages, (3) lifted edges keep their base weight, (4) at every
/// cover vertex the projection restricts to a bijection on out-edges
/// and on in-edges. Returns every violation found; an intact derived
/// cover returns none.
pub fn validate_cover(dc: &DerivedCover) -> Vec<CoverViolation> {
    let mut out = Vec::new();
    let edge_desc = |g: &WeightedDigraph, e: usize| {
        let edge = &g.edges()[e];
        format!(
            "edge {} ({} -> {})",
            e,
            g.vertex_name(edge.src),
            g.vertex_name(edge.tgt)
        )
    };

    // Condition 1: the projection is a graph map.
    for (ce, &be) in dc.edge_base.iter().enumerate() {
        let witness = edge_desc(&dc.cover, ce);
        if be >= dc.base.edge_count() {
            out.push(CoverViolation {
                condition: 1,
                witness,
                detail: format!("projects to nonexistent base edge {be}"),
            });
            continue;
        }
        let cover_edge = &dc.cover.edges()[ce];
        let base_edge = &dc.base.edges()[be];
        let src_ok = dc.vertex_base.get(cover_edge.src.0) == Some(&base_edge.src);
        let tgt_ok = dc.vertex_base.get(cover_edge.tgt.0) == Some(&base_edge.tgt);
        if !src_ok || !tgt_ok {
            out.push(CoverViolation {
                condition: 1,
                witness,
                detail: format!("endpoints do not project onto {}", edge_desc(&dc.base, be)),
            });
        }
    }

    // Condition 2: every fiber has exactly k elements.
    for v in dc.base.vertex_ids() {
        let count = dc.vertex_base.iter().filter(|&&b| b == v).count();
        if count != dc.k {
            out.push(CoverViolation {
                condition: 2,
                witness: format!("vertex {}", dc.base.vertex_name(v)),
                detail: format!("fiber has {count} vertices, expected {}", dc.k),
            });
        }
    }
    for be in 0..dc.base.edge_count() {
        let count = dc.edge_base.iter().filter(|&&b| b == be).count();
        if count != dc.k {
            out.push(CoverViolation {
                condition: 2,
                witness: edge_desc(&dc.base, be),
                detail: format!("fiber has {count} edges, expected {}", dc.k),
            });
        }
    }

    // Condition 3: weights are preserved.
    for (ce, &be) in dc.edge_base.iter().enumerate() {
        if be >= dc.base.edge_count() {
            continue;
        }
        let cw = &dc.cover.edges()[ce].weight;
        let bw = &dc.base.edges()[be].weight;
        if cw != bw {
            out.push(CoverViolation {
                condition: 3,
                witness: edge_desc(&dc.cover, ce),
                detail: format!("weight {cw} differs from base weight {bw}"),
            });
        }
    }

    // Condition 4: out- and in-edges biject with the base vertex's.
    for cv in dc.cover.vertex_ids() {
        let Some(&bv) = dc.vertex_base.get(cv.0) else {
            out.push(CoverViolation {
                condition: 1,
                witness: format!("vertex {}", dc.cover.vertex_name(cv)),
                detail: "projects to no base vertex".to_string(),
            });
            continue;
        };
        for (direction, cover_set, base_set) in [
            (
                "out",
                dc.cover.out_edges(cv).map(|e| e.id).collect::<Vec<_>>(),
                dc.base.out_edges(bv).map(|e| e.id).collect::<Vec<_>>(),
            ),
            (
                "in",
                dc.cover.in_edges(cv).map(|e| e.id).collect::<Vec<_>>(),
                dc.base.in_edges(bv).map(|e| e.id).collect::<Vec<_>>(),
            ),
        ] {
            let mut projected: Vec<usize> = cover_set
                .iter()
                .filter_map(|&ce| dc.edge_base.get(ce).copied())
                .collect();
            projected.sort_unstable();
            let mut expected = base_set;
            expected.sort_unstable();
            if projected != expected {
                out.push(CoverViolation {
                    condition: 4,
                    witness: format!("vertex {}", dc.cover.vertex_name(cv)),
                    detail: format!(
                        "{direction}-edges project to {projected:?}, expected {expected:?}"
                    ),
                });
            }
        }
    }
    out
}

/// The voltage Laplacian: a square matrix of dimension n(k-1) whose
/// rows and columns are indexed by the lifts v^t with t in {2..k}, in
/// vertex-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageLaplacian {
    pub matrix: RingMatrix,
    pub basis: Vec<String>,
}

/// Builds the voltage Laplacian D - A directly from base data: D is
/// diagonal with the base out-weight sum at every lift, and for each
/// base edge e = (v_i -> v_j) with permutation s and each t in {2..k},
/// A gains wt(e) at column v_j^s(t) when s(t) >= 2, or loses wt(e)
/// across the whole row block (v_i^t, v_j^*) when s(t) = 1.
pub fn voltage_laplacian(vg: &VoltageGraph) -> VoltageLaplacian {
    let base = vg.base();
    let k = vg.k();
    let weights: Vec<Poly> = base.edges().iter().map(|e| e.weight.clone()).collect();
    let basis: Vec<String> = base
        .vertex_ids()
        .flat_map(|v| (2..=k).map(move |t| (v, t)))
        .map(|(v, t)| format!("{}^{}", base.vertex_name(v), t))
        .collect();
    let matrix = voltage_laplacian_matrix(base, k, vg.voltages(), &weights)
        .with_labels(basis.clone(), basis.clone());
    VoltageLaplacian { matrix, basis }
}

/// The unlabeled voltage Laplacian, with edge weights supplied by the
/// caller (`weights[i]` replaces base edge i's weight). Lets the
/// expectation code evaluate weights once and rebuild the matrix for
/// many voltage assignments cheaply.
pub(crate) fn voltage_laplacian_matrix(
    base: &WeightedDigraph,
    k: usize,
    voltages: &[crate::graph::Permutation],
    weights: &[Poly],
) -> RingMatrix {
    let n = base.vertex_count();
    let dim = n * (k - 1);
    let idx = |v: usize, t: usize| v * (k - 1) + (t - 2);
    let mut m = RingMatrix::zero(dim, dim);
    for e in base.edges() {
        let w = &weights[e.id];
        let sigma = &voltages[e.id];
        for t in 2..=k {
            let row = idx(e.src.0, t);
            // Degree part: out-weight of the base vertex.
            m.add_to(row, row, w);
            // Adjacency part, subtracted.
            let image = sigma.apply(t);
            if image == 1 {
                for r in 2..=k {
                    m.add_to(row, idx(e.tgt.0, r), w);
                }
            } else {
                m.add_to(row, idx(e.tgt.0, image), &w.neg());
            }
        }
    }
    m
}

/// The arborescence ratio of the cover, computed as (1/k) times the
/// determinant of the voltage Laplacian. Total in the voltage graph;
/// defined even when the base has no arborescences.
pub fn ratio_via_det(vg: &VoltageGraph) -> Poly {
    let det = voltage_laplacian(vg)
        .matrix
        .determinant()
        .expect("voltage Laplacian is square");
    det.scale(&frac(1, vg.k() as i64))
}

/// The arborescence ratio computed from first principles: the cover's
/// arborescence sum at the lift `(v, lift)`, divided exactly by the
/// base's arborescence sum at `v`. Both sums come from brute-force
/// enumeration, so this is as independent from the determinant route as
/// it gets. The quotient does not depend on the choice of v or lift.
pub fn ratio_direct(vg: &VoltageGraph, v: VertexId, lift: usize) -> Result<Poly, CoverError> {
    let base_sum = arborescence_sum_bruteforce(vg.base(), v)?;
    if base_sum.is_zero() {
        return Err(CoverError::BaseHasNoArborescence {
            root: vg.base().vertex_name(v).to_string(),
        });
    }
    let dc = derive_cover(vg);
    let cover_sum = arborescence_sum_bruteforce(&dc.cover, dc.lift_of(v, lift))?;
    cover_sum.div_exact(&base_sum).map_err(|e| match e {
        RingError::NotDivisible => CoverError::NotDivisible,
        other => unreachable!("division by a nonzero polynomial: {other}"),
    })
}
