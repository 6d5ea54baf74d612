//! Simple undirected graphs on dense vertex ids `0..n`, plus the structural
//! queries the rest of the crate is built on: neighborhoods, BFS distances,
//! twins, triangles, exact canonical forms for small graphs, and a seeded
//! random regular generator.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed line {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("edge count mismatch: header says {expected}, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("graph too large for exact canonicalization (n = {n}, cap = {cap})")]
    TooLargeForCanonical { n: usize, cap: usize },
    #[error("no {k}-regular graph on {n} vertices exists")]
    InfeasibleRegular { n: usize, k: usize },
    #[error("regular generation failed after {tries} attempts")]
    GenerationFailed { tries: usize },
}

/// Sorted set of vertex ids. The universal "subset of V(G)" currency.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet {
    members: Vec<Vertex>,
}

impl VertexSet {
    pub fn new(mut members: Vec<Vertex>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    pub fn empty() -> Self {
        VertexSet { members: Vec::new() }
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        VertexSet { members: (0..n).collect() }
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: Vertex) {
        if let Err(pos) = self.members.binary_search(&v) {
            self.members.insert(pos, v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }

    /// Members of `0..n` not in this set.
    pub fn complement(&self, n: usize) -> VertexSet {
        VertexSet { members: (0..n).filter(|&v| !self.contains(v)).collect() }
    }

    pub fn to_bitset(&self, n: usize) -> FixedBitSet {
        let mut bs = FixedBitSet::with_capacity(n);
        for &v in &self.members {
            bs.insert(v);
        }
        bs
    }

    pub fn from_bitset(bs: &FixedBitSet) -> VertexSet {
        VertexSet { members: bs.ones().collect() }
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<T: IntoIterator<Item = Vertex>>(iter: T) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Simple undirected graph. No self-loops, no parallel edges, vertices `0..n`.
/// Immutable after construction; adjacency lists are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        let mut norm = Vec::with_capacity(edges.len());
        for (idx, &(u, v)) in edges.iter().enumerate() {
            let line = idx + 2; // matches the text format's line numbering
            if u >= n {
                return Err(GraphError::VertexOutOfRange { line, vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { line, vertex: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, vertex: u });
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge { line, u: e.0, v: e.1 });
            }
            norm.push(e);
            adj[u].push(v);
            adj[v].push(u);
        }
        norm.sort_unstable();
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges: norm, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// `Some(k)` iff every vertex has degree exactly `k`.
    pub fn regularity(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let k = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == k).then_some(k)
    }

    pub fn is_cubic(&self) -> bool {
        self.regularity() == Some(3)
    }

    /// N[v] = N(v) ∪ {v}.
    pub fn closed_neighborhood(&self, v: Vertex) -> VertexSet {
        let mut m = self.adj[v].clone();
        m.push(v);
        VertexSet::new(m)
    }

    /// Closed-neighborhood bitmasks for all vertices; the workhorse table
    /// behind the verifiers and the solver.
    pub fn closed_neighborhood_masks(&self) -> Vec<FixedBitSet> {
        (0..self.n)
            .map(|v| {
                let mut bs = FixedBitSet::with_capacity(self.n);
                bs.insert(v);
                for &w in &self.adj[v] {
                    bs.insert(w);
                }
                bs
            })
            .collect()
    }

    /// BFS distances from `src`; `None` for unreachable vertices.
    pub fn distances_from(&self, src: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path distance; `None` means the vertices lie in different
    /// components (a distinguished "infinite", never a large integer).
    pub fn distance(&self, u: Vertex, v: Vertex) -> Option<usize> {
        if u == v {
            return Some(0);
        }
        self.distances_from(u)[v]
    }

    /// B_r(v) = { u : d(u,v) <= r }.
    pub fn ball(&self, v: Vertex, r: usize) -> VertexSet {
        self.distances_from(v)
            .iter()
            .enumerate()
            .filter_map(|(u, d)| match d {
                Some(d) if *d <= r => Some(u),
                _ => None,
            })
            .collect()
    }

    /// Largest finite pairwise distance; `None` if the graph is disconnected
    /// or empty.
    pub fn diameter(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let mut best = 0;
        for v in 0..self.n {
            for d in self.distances_from(v) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// All twin pairs: N(u) = N(v) (open) or N[u] = N[v] (closed).
    pub fn find_twins(&self) -> Vec<(Vertex, Vertex, TwinKind)> {
        let masks = self.closed_neighborhood_masks();
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if masks[u] == masks[v] {
                    out.push((u, v, TwinKind::Closed));
                } else if self.adj[u] == self.adj[v] {
                    out.push((u, v, TwinKind::Open));
                }
            }
        }
        out
    }

    pub fn is_twin_free(&self) -> bool {
        self.find_twins().is_empty()
    }

    /// All 3-cliques, each listed once as an increasing triple.
    pub fn find_triangles(&self) -> Vec<[Vertex; 3]> {
        let mut out = Vec::new();
        for &(u, v) in &self.edges {
            // u < v by construction; look for w > v adjacent to both.
            for &w in &self.adj[v] {
                if w > v && self.has_edge(u, w) {
                    out.push([u, v, w]);
                }
            }
        }
        out
    }

    pub fn is_triangle_free(&self) -> bool {
        self.find_triangles().is_empty()
    }

    /// Exact canonical form by permutation minimization, pre-partitioned by
    /// the (degree, sorted neighbor degrees) refinement. Capped at n = 10.
    pub fn canonical_form(&self) -> Result<CanonicalForm, GraphError> {
        const CAP: usize = 10;
        if self.n > CAP {
            return Err(GraphError::TooLargeForCanonical { n: self.n, cap: CAP });
        }
        // Invariant-stable vertex classes: any isomorphism preserves them.
        let key = |v: Vertex| {
            let mut nd: Vec<usize> = self.adj[v].iter().map(|&w| self.degree(w)).collect();
            nd.sort_unstable();
            (self.degree(v), nd)
        };
        let mut order: Vec<Vertex> = (0..self.n).collect();
        order.sort_by(|&a, &b| key(a).cmp(&key(b)));
        let mut classes: Vec<Vec<Vertex>> = Vec::new();
        for &v in &order {
            match classes.last() {
                Some(c) if key(c[0]) == key(v) => classes.last_mut().unwrap().push(v),
                _ => classes.push(vec![v]),
            }
        }
        let mut best: Option<Vec<u8>> = None;
        let mut perm = vec![0usize; self.n]; // perm[new_label] = old vertex
        permute_classes(&classes, 0, &mut perm, &mut |perm| {
            let enc = encode_upper_triangle(self, perm);
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        });
        Ok(CanonicalForm { n: self.n, bytes: best.unwrap_or_default() })
    }

    pub fn to_edge_list_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TwinKind {
    Open,
    Closed,
}

/// Canonical adjacency-matrix encoding: equal iff isomorphic (within the cap).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    n: usize,
    bytes: Vec<u8>,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Lowercase hex of the n-byte prefix followed by the packed
    /// upper-triangle bits.
    pub fn hex(&self) -> String {
        let mut s = format!("{:02x}", self.n);
        for b in &self.bytes {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.hex())
    }
}

fn permute_classes(
    classes: &[Vec<Vertex>],
    idx: usize,
    perm: &mut Vec<Vertex>,
    visit: &mut impl FnMut(&[Vertex]),
) {
    if idx == classes.len() {
        visit(perm);
        return;
    }
    let offset: usize = classes[..idx].iter().map(|c| c.len()).sum();
    let mut members = classes[idx].clone();
    heap_permutations(&mut members, &mut |p| {
        perm[offset..offset + p.len()].copy_from_slice(p);
        permute_classes(classes, idx + 1, perm, visit);
    });
}

fn heap_permutations(items: &mut [Vertex], visit: &mut impl FnMut(&[Vertex])) {
    let n = items.len();
    if n <= 1 {
        visit(items);
        return;
    }
    let mut c = vec![0usize; n];
    visit(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Packs the relabeled upper-triangle adjacency bits row-major into bytes.
fn encode_upper_triangle(g: &Graph, perm: &[Vertex]) -> Vec<u8> {
    let n = g.n();
    let nbits = n * (n - 1) / 2;
    let mut bytes = vec![0u8; nbits.div_ceil(8)];
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(perm[i], perm[j]) {
                bytes[bit / 8] |= 1 << (7 - bit % 8);
            }
            bit += 1;
        }
    }
    bytes
}

/// Parses the repo-wide edge-list interchange format: a "n m" header line,
/// then m lines "u v". Every error names its line number.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| GraphError::MalformedLine { line: 1, text: String::new() })?;
    let mut it = header.split_whitespace();
    let parse_num = |tok: Option<&str>, line: usize, text: &str| -> Result<usize, GraphError> {
        tok.and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::MalformedLine { line, text: text.to_string() })
    };
    let n = parse_num(it.next(), hline, header)?;
    let m = parse_num(it.next(), hline, header)?;
    if it.next().is_some() {
        return Err(GraphError::MalformedLine { line: hline, text: header.to_string() });
    }

    let mut adj = vec![Vec::new(); n];
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines {
        let mut it = line.split_whitespace();
        let u = parse_num(it.next(), lineno, line)?;
        let v = parse_num(it.next(), lineno, line)?;
        if it.next().is_some() {
            return Err(GraphError::MalformedLine { line: lineno, text: line.to_string() });
        }
        if u >= n {
            return Err(GraphError::VertexOutOfRange { line: lineno, vertex: u, n });
        }
        if v >= n {
            return Err(GraphError::VertexOutOfRange { line: lineno, vertex: v, n });
        }
        if u == v {
            return Err(GraphError::SelfLoop { line: lineno, vertex: u });
        }
        let e = (u.min(v), u.max(v));
        if !seen.insert(e) {
            return Err(GraphError::DuplicateEdge { line: lineno, u: e.0, v: e.1 });
        }
        edges.push(e);
        adj[u].push(v);
        adj[v].push(u);
    }
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch { expected: m, found: edges.len() });
    }
    edges.sort_unstable();
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(Graph { n, edges, adj })
}

/// Simple k-regular graph via the configuration/pairing model with restart on
/// loops or parallel edges. Deterministic per seed.
pub fn random_regular(n: usize, k: usize, seed: u64) -> Result<Graph, GraphError> {
    if k >= n || (n * k) % 2 != 0 {
        return Err(GraphError::InfeasibleRegular { n, k });
    }
    if k == 0 {
        return Graph::from_edges(n, &[]);
    }
    const TRIES: usize = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat(v).take(k)).collect();
    'attempt: for _ in 0..TRIES {
        points.shuffle(&mut rng);
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(n * k / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                continue 'attempt;
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                continue 'attempt;
            }
            edges.push(e);
        }
        return Graph::from_edges(n, &edges);
    }
    Err(GraphError::GenerationFailed { tries: TRIES })
}

/// Cycle C_n.
pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("cycle edges are valid")
}

/// Complete graph K_n.
pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).expect("complete-graph edges are valid")
}

/// Path P_n on vertices 0..n.
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("path edges are valid")
}

/// The Petersen graph: outer C_5, inner pentagram, spokes.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    Graph::from_edges(10, &edges).expect("petersen edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_edge() {
        let g = parse_graph("2 1\n0 1\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn parse_rejects_out_of_range() {
        let err = parse_graph("3 1\n0 3\n").unwrap_err();
        assert_eq!(err, GraphError::VertexOutOfRange { line: 2, vertex: 3, n: 3 });
    }

    #[test]
    fn parse_rejects_self_loop_and_duplicate() {
        assert!(matches!(
            parse_graph("3 1\n1 1\n").unwrap_err(),
            GraphError::SelfLoop { line: 2, vertex: 1 }
        ));
        assert!(matches!(
            parse_graph("3 2\n0 1\n1 0\n").unwrap_err(),
            GraphError::DuplicateEdge { line: 3, u: 0, v: 1 }
        ));
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        assert!(matches!(parse_graph("2 1\n0\n"), Err(GraphError::MalformedLine { line: 2, .. })));
        assert!(matches!(parse_graph("x y\n"), Err(GraphError::MalformedLine { line: 1, .. })));
        assert!(matches!(
            parse_graph("2 2\n0 1\n"),
            Err(GraphError::EdgeCountMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn edge_list_round_trips() {
        let g = petersen();
        let g2 = parse_graph(&g.to_edge_list_text()).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn closed_neighborhood_path_center() {
        let g = path(3);
        assert_eq!(g.closed_neighborhood(1), VertexSet::new(vec![0, 1, 2]));
    }

    #[test]
    fn closed_neighborhood_isolated() {
        let g = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(g.closed_neighborhood(0), VertexSet::new(vec![0]));
    }

    #[test]
    fn closed_neighborhood_size_cubic() {
        let g = petersen();
        for v in 0..g.n() {
            assert_eq!(g.closed_neighborhood(v).len(), 4);
        }
    }

    #[test]
    fn closed_neighborhood_size_matches_degree() {
        for seed in 0..5 {
            let g = random_regular(10, 3, seed).unwrap();
            for v in 0..g.n() {
                assert_eq!(g.closed_neighborhood(v).len(), g.degree(v) + 1);
            }
        }
    }

    #[test]
    fn distance_to_self_is_zero() {
        let g = cycle(7);
        for v in 0..7 {
            assert_eq!(g.distance(v, v), Some(0));
        }
    }

    #[test]
    fn distance_on_c7() {
        let g = cycle(7);
        assert_eq!(g.distance(0, 3), Some(3));
        assert_eq!(g.distance(0, 4), Some(3));
    }

    #[test]
    fn distance_across_components_is_infinite() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.distance(0, 2), None);
    }

    #[test]
    fn ball_r0_and_r1() {
        let g = petersen();
        for v in 0..g.n() {
            assert_eq!(g.ball(v, 0), VertexSet::new(vec![v]));
            assert_eq!(g.ball(v, 1), g.closed_neighborhood(v));
        }
    }

    #[test]
    fn balls_nest_and_cover_component() {
        let g = cycle(9);
        for v in 0..9 {
            for r in 0..4 {
                assert!(g.ball(v, r).is_subset_of(&g.ball(v, r + 1)));
            }
            assert_eq!(g.ball(v, 8).len(), 9);
        }
    }

    #[test]
    fn twins_in_k4_all_closed() {
        let twins = complete(4).find_twins();
        assert_eq!(twins.len(), 6);
        assert!(twins.iter().all(|&(_, _, k)| k == TwinKind::Closed));
    }

    #[test]
    fn twins_in_c4_two_open_pairs() {
        let twins = cycle(4).find_twins();
        assert_eq!(twins.len(), 2);
        assert!(twins.iter().all(|&(_, _, k)| k == TwinKind::Open));
        assert!(twins.contains(&(0, 2, TwinKind::Open)));
        assert!(twins.contains(&(1, 3, TwinKind::Open)));
    }

    #[test]
    fn petersen_is_twin_free() {
        // Oracle: the O(n^3) definition check, done pairwise.
        let g = petersen();
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                let same_open = g.neighbors(u) == g.neighbors(v);
                let same_closed = g.closed_neighborhood(u) == g.closed_neighborhood(v);
                assert!(!same_open && !same_closed);
            }
        }
        assert!(g.find_twins().is_empty());
    }

    #[test]
    fn twins_and_triangles_match_bruteforce_small() {
        // Exhaustive cross-check on all graphs with n <= 4 plus random n <= 8.
        for n in 1..=4usize {
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
                check_against_bruteforce(&g);
            }
        }
        for seed in 0..20 {
            if let Ok(g) = random_regular(8, 3, seed) {
                check_against_bruteforce(&g);
            }
        }
    }

    fn check_against_bruteforce(g: &Graph) {
        let mut twins = Vec::new();
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if g.closed_neighborhood(u) == g.closed_neighborhood(v) {
                    twins.push((u, v, TwinKind::Closed));
                } else if g.neighbors(u) == g.neighbors(v) {
                    twins.push((u, v, TwinKind::Open));
                }
            }
        }
        assert_eq!(g.find_twins(), twins);

        let mut tris = Vec::new();
        for a in 0..g.n() {
            for b in a + 1..g.n() {
                for c in b + 1..g.n() {
                    if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                        tris.push([a, b, c]);
                    }
                }
            }
        }
        let mut found = g.find_triangles();
        found.sort_unstable();
        assert_eq!(found, tris);
    }

    #[test]
    fn triangles_c4_empty_k4_four() {
        assert!(cycle(4).find_triangles().is_empty());
        assert_eq!(complete(4).find_triangles().len(), 4);
    }

    #[test]
    fn canonical_form_invariant_under_relabeling() {
        use rand::Rng;
        let g = cycle(5);
        let base = g.canonical_form().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mut perm: Vec<usize> = (0..5).collect();
            perm.shuffle(&mut rng);
            let edges: Vec<_> = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
            let h = Graph::from_edges(5, &edges).unwrap();
            assert_eq!(h.canonical_form().unwrap(), base);
            let _ = rng.gen::<u8>();
        }
    }

    #[test]
    fn canonical_form_reflexive_and_distinguishes() {
        let g = petersen();
        assert_eq!(g.canonical_form().unwrap(), g.canonical_form().unwrap());
        let c5 = cycle(5);
        let p5 = path(5);
        assert_ne!(c5.canonical_form().unwrap(), p5.canonical_form().unwrap());
    }

    #[test]
    fn canonical_form_respects_cap() {
        let g = cycle(11);
        assert!(matches!(
            g.canonical_form(),
            Err(GraphError::TooLargeForCanonical { n: 11, cap: 10 })
        ));
    }

    #[test]
    fn random_regular_n4_k3_is_k4() {
        let g = random_regular(4, 3, 1).unwrap();
        assert_eq!(g.edges(), complete(4).edges());
    }

    #[test]
    fn random_regular_degrees_and_determinism() {
        let a = random_regular(10, 3, 42).unwrap();
        let b = random_regular(10, 3, 42).unwrap();
        assert_eq!(a.edges(), b.edges());
        for v in 0..10 {
            assert_eq!(a.degree(v), 3);
        }
        let c = random_regular(10, 3, 43).unwrap();
        assert!(a.edges() != c.edges() || a == c); // different seed, likely different graph
    }

    #[test]
    fn random_regular_rejects_odd_product() {
        assert!(matches!(
            random_regular(5, 3, 0),
            Err(GraphError::InfeasibleRegular { n: 5, k: 3 })
        ));
    }

    #[test]
    fn distance_is_metric_on_random_graphs() {
        for seed in 0..10 {
            let g = random_regular(12, 3, seed).unwrap();
            for u in 0..g.n() {
                for v in 0..g.n() {
                    assert_eq!(g.distance(u, v), g.distance(v, u));
                    for w in 0..g.n() {
                        if let (Some(duv), Some(duw), Some(dwv)) =
                            (g.distance(u, v), g.distance(u, w), g.distance(w, v))
                        {
                            assert!(duv <= duw + dwv);
                        }
                    }
                }
            }
        }
    }
}
