//! ERR:IC existence criteria and the exhaustive small-graph enumeration.
//!
//! A graph admits an ERR:IC iff it is twin-free, has minimum degree at least
//! 2, has no adjacent degree-2 vertices, and every triangle is pairwise
//! 3-differentiated (|N[a] xor N[b]| >= 3 for all three pairs; triangles are
//! unordered, so the condition is enforced symmetrically). When all four hold,
//! S = V(G) is itself a valid code.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{CanonicalForm, Graph, TwinKind, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExistenceProperty {
    /// i: twin-free
    Twins,
    /// ii: minimum degree >= 2
    MinDegree,
    /// iii: no adjacent degree-2 vertices
    AdjacentDegreeTwo,
    /// iv: every triangle pairwise 3-differentiated
    TriangleCondition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct ExistenceWitnesses {
    pub twins: Vec<(Vertex, Vertex, TwinKind)>,
    pub low_degree_vertices: Vec<Vertex>,
    pub adjacent_degree_two_pairs: Vec<(Vertex, Vertex)>,
    pub bad_triangles: Vec<[Vertex; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistenceReport {
    pub exists: bool,
    pub failed_properties: Vec<ExistenceProperty>,
    pub witnesses: ExistenceWitnesses,
}

impl ExistenceReport {
    fn from_witnesses(witnesses: ExistenceWitnesses) -> ExistenceReport {
        let mut failed = Vec::new();
        if !witnesses.twins.is_empty() {
            failed.push(ExistenceProperty::Twins);
        }
        if !witnesses.low_degree_vertices.is_empty() {
            failed.push(ExistenceProperty::MinDegree);
        }
        if !witnesses.adjacent_degree_two_pairs.is_empty() {
            failed.push(ExistenceProperty::AdjacentDegreeTwo);
        }
        if !witnesses.bad_triangles.is_empty() {
            failed.push(ExistenceProperty::TriangleCondition);
        }
        ExistenceReport { exists: failed.is_empty(), failed_properties: failed, witnesses }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExistenceError {
    #[error("enumeration cap exceeded: n_max = {n_max}, cap = {cap}")]
    EnumerationCapExceeded { n_max: usize, cap: usize },
}

fn low_degree_vertices(g: &Graph) -> Vec<Vertex> {
    (0..g.n()).filter(|&v| g.degree(v) < 2).collect()
}

fn adjacent_degree_two_pairs(g: &Graph) -> Vec<(Vertex, Vertex)> {
    g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| g.degree(u) == 2 && g.degree(v) == 2)
        .collect()
}

/// Triangles violating property iv, checked for all three vertex pairs.
fn bad_triangles(g: &Graph) -> Vec<[Vertex; 3]> {
    let full_symdiff = |a: Vertex, b: Vertex| {
        let na = g.closed_neighborhood(a);
        let nb = g.closed_neighborhood(b);
        na.iter().filter(|&v| !nb.contains(v)).count()
            + nb.iter().filter(|&v| !na.contains(v)).count()
    };
    g.find_triangles()
        .into_iter()
        .filter(|&[a, b, c]| {
            full_symdiff(a, b) < 3 || full_symdiff(a, c) < 3 || full_symdiff(b, c) < 3
        })
        .collect()
}

/// Full four-property existence check with witnesses.
pub fn check_existence(g: &Graph) -> ExistenceReport {
    ExistenceReport::from_witnesses(ExistenceWitnesses {
        twins: g.find_twins(),
        low_degree_vertices: low_degree_vertices(g),
        adjacent_degree_two_pairs: adjacent_degree_two_pairs(g),
        bad_triangles: bad_triangles(g),
    })
}

/// Dispatches to the reduced criterion for triangle-free, cubic, or k-regular
/// inputs; the verdict always equals `check_existence`.
pub fn check_existence_special(g: &Graph) -> ExistenceReport {
    match g.regularity() {
        Some(k) if k < 3 => {
            // 0/1-regular graphs fail min-degree; 2-regular graphs are
            // disjoint cycles and fail the adjacent-degree-2 property.
            let mut w = ExistenceWitnesses::default();
            if k < 2 {
                w.low_degree_vertices = low_degree_vertices(g);
            } else {
                w.adjacent_degree_two_pairs = adjacent_degree_two_pairs(g);
            }
            // Twins can co-occur (e.g. C_4); report them for parity with the
            // full check.
            w.twins = g.find_twins();
            w.bad_triangles = bad_triangles(g);
            ExistenceReport::from_witnesses(w)
        }
        Some(3) => {
            // Cubic: existence iff twin-free and triangle-free. A cubic
            // triangle always violates property iv.
            ExistenceReport::from_witnesses(ExistenceWitnesses {
                twins: g.find_twins(),
                low_degree_vertices: Vec::new(),
                adjacent_degree_two_pairs: Vec::new(),
                bad_triangles: bad_triangles(g),
            })
        }
        Some(_) => {
            // k-regular, k >= 4: twin-free plus the triangle condition.
            ExistenceReport::from_witnesses(ExistenceWitnesses {
                twins: g.find_twins(),
                low_degree_vertices: Vec::new(),
                adjacent_degree_two_pairs: Vec::new(),
                bad_triangles: bad_triangles(g),
            })
        }
        None if g.is_triangle_free() => {
            // Triangle-free: three conditions suffice.
            ExistenceReport::from_witnesses(ExistenceWitnesses {
                twins: g.find_twins(),
                low_degree_vertices: low_degree_vertices(g),
                adjacent_degree_two_pairs: adjacent_degree_two_pairs(g),
                bad_triangles: Vec::new(),
            })
        }
        None => check_existence(g),
    }
}

/// Canonical forms of every isomorphism class on at most `n_max` vertices
/// admitting an ERR:IC, by filtered exhaustive enumeration of labeled graphs.
pub fn enumerate_admitting_graphs(n_max: usize) -> Result<Vec<CanonicalForm>, ExistenceError> {
    const CAP: usize = 7;
    if n_max > CAP {
        return Err(ExistenceError::EnumerationCapExceeded { n_max, cap: CAP });
    }
    let mut forms = std::collections::BTreeSet::new();
    for n in 1..=n_max {
        forms.extend(enumerate_exact_order(n));
    }
    Ok(forms.into_iter().collect())
}

/// Labeled enumeration at exactly `n` vertices: cheap necessary-condition
/// filters on the raw edge mask, then the full check, then canonical dedup.
fn enumerate_exact_order(n: usize) -> Vec<CanonicalForm> {
    let pairs: Vec<(Vertex, Vertex)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let nbits = pairs.len();
    // Per-vertex incidence masks over pair indices.
    let mut vmask = vec![0u32; n];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        vmask[u] |= 1 << i;
        vmask[v] |= 1 << i;
    }

    const CHUNK: u32 = 1 << 16;
    let total: u32 = 1u32 << nbits;
    let chunks: Vec<u32> = (0..total.div_ceil(CHUNK)).collect();
    let mut survivors: Vec<Vec<CanonicalForm>> = chunks
        .par_iter()
        .map(|&chunk| {
            let mut local = std::collections::BTreeSet::new();
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(total);
            'mask: for mask in start..end {
                // Degree filter: every vertex needs degree >= 2.
                let mut deg = [0u8; 8];
                for v in 0..n {
                    let d = (mask & vmask[v]).count_ones() as u8;
                    if d < 2 {
                        continue 'mask;
                    }
                    deg[v] = d;
                }
                // No adjacent degree-2 vertices.
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 && deg[u] == 2 && deg[v] == 2 {
                        continue 'mask;
                    }
                }
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::from_edges(n, &edges).expect("enumerated edges are valid");
                if check_existence(&g).exists {
                    local.insert(g.canonical_form().expect("n <= 7 is under the cap"));
                }
            }
            local.into_iter().collect()
        })
        .collect();
    let mut set = std::collections::BTreeSet::new();
    for chunk in survivors.drain(..) {
        set.extend(chunk);
    }
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{verify_code, CodeKind};
    use crate::families::{make_small_graph, SmallGraph};
    use crate::graph::{cycle, path, petersen, random_regular, Graph, VertexSet};

    #[test]
    fn g1_admits() {
        let g1 = make_small_graph(SmallGraph::G1);
        let report = check_existence(&g1.graph);
        assert!(report.exists, "{report:?}");
    }

    #[test]
    fn c7_fails_adjacent_degree_two() {
        let report = check_existence(&cycle(7));
        assert!(!report.exists);
        assert_eq!(report.failed_properties, vec![ExistenceProperty::AdjacentDegreeTwo]);
        assert_eq!(report.witnesses.adjacent_degree_two_pairs.len(), 7);
    }

    #[test]
    fn trees_fail_min_degree() {
        for tree in [path(5), Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()] {
            let report = check_existence(&tree);
            assert!(!report.exists);
            assert!(report.failed_properties.contains(&ExistenceProperty::MinDegree));
        }
    }

    #[test]
    fn petersen_admits() {
        let g = petersen();
        assert!(check_existence(&g).exists);
        assert!(verify_code(&g, &VertexSet::full(10), CodeKind::ErrIc).valid);
    }

    #[test]
    fn triangle_condition_checked_symmetrically() {
        // K_4 plus a pendant structure keeps a triangle whose violation shows
        // up regardless of vertex order within the triple.
        let g = crate::graph::complete(4);
        let report = check_existence(&g);
        assert!(report.failed_properties.contains(&ExistenceProperty::TriangleCondition));
        for &[a, b, c] in &report.witnesses.bad_triangles {
            assert!(a < b && b < c);
        }
    }

    #[test]
    fn special_agrees_with_full_check() {
        for seed in 0..200u64 {
            let n = 6 + (seed as usize % 5);
            for k in [2, 3, 4] {
                if k < n && n * k % 2 == 0 {
                    if let Ok(g) = random_regular(n, k, seed) {
                        assert_eq!(
                            check_existence_special(&g).exists,
                            check_existence(&g).exists,
                            "disagreement on n={n} k={k} seed={seed}"
                        );
                    }
                }
            }
        }
        // Triangle-free non-regular inputs.
        for seed in 0..100u64 {
            if let Ok(g) = random_regular(8, 3, seed) {
                // Delete one edge to break regularity, keeping triangle-freeness.
                if g.is_triangle_free() {
                    let mut edges = g.edges().to_vec();
                    edges.pop();
                    let h = Graph::from_edges(8, &edges).unwrap();
                    assert_eq!(check_existence_special(&h).exists, check_existence(&h).exists);
                }
            }
        }
    }

    #[test]
    fn two_regular_never_admits() {
        for n in 3..9 {
            let report = check_existence_special(&cycle(n));
            assert!(!report.exists);
        }
    }

    #[test]
    fn cubic_with_triangle_never_admits() {
        // K_4 is cubic and full of triangles.
        let report = check_existence_special(&crate::graph::complete(4));
        assert!(!report.exists);
    }

    #[test]
    fn existence_iff_full_vertex_code_small() {
        // Theorem-level equivalence on every graph with n <= 5 and random
        // graphs with n in 6..=8.
        for n in 1..=5usize {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::from_edges(n, &edges).unwrap();
                let exists = check_existence(&g).exists;
                let full_valid = verify_code(&g, &VertexSet::full(n), CodeKind::ErrIc).valid;
                assert_eq!(exists, full_valid, "n={n} mask={mask}");
            }
        }
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(6..=8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.45) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            assert_eq!(
                check_existence(&g).exists,
                verify_code(&g, &VertexSet::full(n), CodeKind::ErrIc).valid
            );
        }
    }

    #[test]
    fn enumeration_empty_below_seven() {
        assert!(enumerate_admitting_graphs(3).unwrap().is_empty());
        assert!(enumerate_admitting_graphs(6).unwrap().is_empty());
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            enumerate_admitting_graphs(8),
            Err(ExistenceError::EnumerationCapExceeded { n_max: 8, cap: 7 })
        ));
    }
}
