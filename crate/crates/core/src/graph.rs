//! Labeled simple graphs on up to 64 vertices, stored as adjacency bitsets,
//! together with the graph6 codec and the elementary operations the rest of
//! the toolkit is built on: complement, join, joined duplication, components,
//! bipartition, special-family recognizers, and the unique-P2 test.

use thiserror::Error;

/// Maximum supported vertex count; adjacency rows fit in one machine word.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph6 parse error at byte {offset}: {kind}")]
    Graph6 { offset: usize, kind: Graph6ErrorKind },
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph on {0} vertices exceeds the supported maximum of 64")]
    TooLarge(usize),
    #[error("operation requires a connected graph")]
    Disconnected,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Graph6ErrorKind {
    MalformedHeader,
    TruncatedBitField,
    OutOfRangeCharacter(u8),
    TrailingData,
    UnsupportedOrder(usize),
}

impl std::fmt::Display for Graph6ErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Graph6ErrorKind::MalformedHeader => write!(f, "malformed header"),
            Graph6ErrorKind::TruncatedBitField => write!(f, "truncated bit field"),
            Graph6ErrorKind::OutOfRangeCharacter(b) => write!(f, "character {b:#04x} outside graph6 range"),
            Graph6ErrorKind::TrailingData => write!(f, "trailing data after bit field"),
            Graph6ErrorKind::UnsupportedOrder(n) => write!(f, "order {n} exceeds supported maximum of 64"),
        }
    }
}

/// Optional per-line header emitted by some tools; tolerated and stripped.
const GRAPH6_HEADER: &str = ">>graph6<<";

/// Simple graph with canonical labels `0..n-1`.
///
/// `adj[v]` is the neighbor bitset of vertex `v`. The adjacency is kept
/// symmetric and irreflexive by construction; all values are immutable
/// after construction from the perspective of callers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

#[inline]
fn bit(v: usize) -> u64 {
    1u64 << v
}

fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "graph order {n} exceeds 64");
        Graph { n, adj: vec![0; n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        let all = mask_below(n);
        for v in 0..n {
            g.adj[v] = all & !bit(v);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Star `K_{1,k}` with the center labeled 0.
    pub fn star(k: usize) -> Self {
        Graph::complete_bipartite(1, k)
    }

    /// Double star `S_{a,b}`: centers 0 and 1 adjacent, `a` leaves on 0,
    /// `b` leaves on 1.
    pub fn double_star(a: usize, b: usize) -> Self {
        let mut edges = vec![(0, 1)];
        for i in 0..a {
            edges.push((0, 2 + i));
        }
        for j in 0..b {
            edges.push((1, 2 + a + j));
        }
        Graph::from_edges(2 + a + b, &edges)
    }

    /// `W(k, 0, 1⃗)`: the star `K_{1,k}` with every edge subdivided.
    /// Labeling: center 0, middle vertices `1..=k`, leaves `k+1..=2k`.
    pub fn w_subdivided_star(k: usize) -> Self {
        let mut edges = Vec::new();
        for i in 1..=k {
            edges.push((0, i));
            edges.push((i, k + i));
        }
        Graph::from_edges(2 * k + 1, &edges)
    }

    /// `W(k, 1, 1⃗)`: the star `K_{1,k+1}` with all but one edge subdivided.
    /// Labeling: center 0, direct leaf 1, middles `2..=k+1`, far leaves `k+2..=2k+1`.
    pub fn w_one_unsubdivided(k: usize) -> Self {
        let mut edges = vec![(0, 1)];
        for i in 0..k {
            edges.push((0, 2 + i));
            edges.push((2 + i, 2 + k + i));
        }
        Graph::from_edges(2 * k + 2, &edges)
    }

    /// Cartesian product `K_s □ K_2`: cliques `0..s` and `s..2s` plus the
    /// perfect matching `i ~ i+s`.
    pub fn box_product_k2(s: usize) -> Self {
        let mut g = Graph::empty(2 * s);
        for u in 0..s {
            for v in u + 1..s {
                g.add_edge(u, v);
                g.add_edge(s + u, s + v);
            }
            g.add_edge(u, s + u);
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && (self.adj[u] >> v) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v, "bad edge ({u},{v})");
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    #[inline]
    pub fn neighbors_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    /// Closed neighborhood `N[v]` as a bitset.
    #[inline]
    pub fn closed_neighbors_mask(&self, v: usize) -> u64 {
        self.adj[v] | bit(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        bits_to_vec(self.adj[v])
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn complement(&self) -> Graph {
        let all = mask_below(self.n);
        let adj = (0..self.n).map(|v| all & !self.adj[v] & !bit(v)).collect();
        Graph { n: self.n, adj }
    }

    /// Join `G ∨ H`: disjoint union plus all cross edges. `self` keeps labels
    /// `0..n`, `other` is shifted to `n..n+m`.
    pub fn join(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        assert!(n <= MAX_VERTICES);
        let mut g = Graph::empty(n);
        let lo = mask_below(self.n);
        let hi = mask_below(n) & !lo;
        for v in 0..self.n {
            g.adj[v] = self.adj[v] | hi;
        }
        for v in 0..other.n {
            g.adj[self.n + v] = (other.adj[v] << self.n) | lo;
        }
        g
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        assert!(n <= MAX_VERTICES);
        let mut g = Graph::empty(n);
        for v in 0..self.n {
            g.adj[v] = self.adj[v];
        }
        for v in 0..other.n {
            g.adj[self.n + v] = other.adj[v] << self.n;
        }
        g
    }

    /// Joined duplication: a new vertex (label `n`) adjacent to exactly `N[v]`.
    pub fn jdup(&self, v: usize) -> Result<Graph, GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        if self.n + 1 > MAX_VERTICES {
            return Err(GraphError::TooLarge(self.n + 1));
        }
        let mut g = Graph::empty(self.n + 1);
        g.adj[..self.n].copy_from_slice(&self.adj);
        let closed = self.closed_neighbors_mask(v);
        g.adj[self.n] = closed;
        for w in bits(closed) {
            g.adj[w] |= bit(self.n);
        }
        Ok(g)
    }

    /// Remove vertex `v`, shifting labels above `v` down by one.
    pub fn remove_vertex(&self, v: usize) -> Graph {
        assert!(v < self.n);
        let mut g = Graph::empty(self.n - 1);
        for old in 0..self.n {
            if old == v {
                continue;
            }
            let new = if old < v { old } else { old - 1 };
            let row = self.adj[old];
            let low = row & mask_below(v);
            let high = (row >> (v + 1)) << v;
            g.adj[new] = low | high;
        }
        g
    }

    /// Inverse of a `remove_vertex` step on a duplicate pair: re-insert a
    /// vertex at index `pos` joined-duplicating `twin` (a label of `self`).
    pub fn insert_jdup_at(&self, pos: usize, twin: usize) -> Result<Graph, GraphError> {
        if twin >= self.n || pos > self.n {
            return Err(GraphError::VertexOutOfRange { vertex: twin.max(pos), n: self.n });
        }
        let lifted = self.jdup(twin)?;
        // Move the appended vertex (label n) into position `pos`.
        let n = lifted.n;
        let mut perm = vec![0usize; n];
        for old in 0..n - 1 {
            perm[old] = if old < pos { old } else { old + 1 };
        }
        perm[n - 1] = pos;
        Ok(lifted.permuted(&perm))
    }

    /// Relabel: vertex `i` of `self` becomes `perm[i]` of the result.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for w in bits(self.adj[u]) {
                if u < w {
                    g.add_edge(perm[u], perm[w]);
                }
            }
        }
        g
    }

    /// Induced subgraph on the set bits of `mask`, relabeled in increasing
    /// order of the original labels. Returns the subgraph and the list of
    /// original labels.
    pub fn induced(&self, mask: u64) -> (Graph, Vec<usize>) {
        let verts = bits_to_vec(mask & mask_below(self.n));
        let mut g = Graph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        (g, verts)
    }

    /// Is `self` a spanning subgraph of `host` (same vertex set)?
    pub fn is_spanning_subgraph_of(&self, host: &Graph) -> bool {
        self.n == host.n && (0..self.n).all(|v| self.adj[v] & !host.adj[v] == 0)
    }

    /// Connected components, sorted by decreasing size then by smallest label.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = 0u64;
        let mut comps = Vec::new();
        for root in 0..self.n {
            if seen & bit(root) != 0 {
                continue;
            }
            let mut comp = bit(root);
            let mut frontier = bit(root);
            while frontier != 0 {
                let mut next = 0u64;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                frontier = next & !comp;
                comp |= frontier;
            }
            seen |= comp;
            comps.push(bits_to_vec(comp));
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Vertices adjacent to everything else (complement-isolated).
    pub fn universal_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) == self.n - 1).collect()
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.adj[v] == 0).collect()
    }

    /// Stable 64-bit hash of (n, adjacency); used by reduction traces.
    pub fn adjacency_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut mix = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        mix(self.n as u64);
        for &row in &self.adj {
            mix(row);
        }
        h
    }

    // ---------------------------------------------------------------- graph6

    /// Parse one graph6 word (an optional ">>graph6<<" prefix is stripped).
    pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
        let mut line = text.trim_end_matches(['\n', '\r']);
        let mut base = 0usize;
        if let Some(rest) = line.strip_prefix(GRAPH6_HEADER) {
            line = rest;
            base = GRAPH6_HEADER.len();
        }
        let bytes = line.as_bytes();
        let err = |offset: usize, kind: Graph6ErrorKind| GraphError::Graph6 { offset: base + offset, kind };
        if bytes.is_empty() {
            return Err(err(0, Graph6ErrorKind::MalformedHeader));
        }
        for (i, &b) in bytes.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(err(i, Graph6ErrorKind::OutOfRangeCharacter(b)));
            }
        }
        let (n, data_start) = if bytes[0] == 126 {
            // long form: '~' followed by three 6-bit digits
            if bytes.len() < 4 {
                return Err(err(bytes.len(), Graph6ErrorKind::MalformedHeader));
            }
            if bytes[1] == 126 {
                // '~~' 36-bit form is beyond the supported range
                return Err(err(1, Graph6ErrorKind::MalformedHeader));
            }
            let n = (((bytes[1] - 63) as usize) << 12)
                | (((bytes[2] - 63) as usize) << 6)
                | ((bytes[3] - 63) as usize);
            (n, 4)
        } else {
            ((bytes[0] - 63) as usize, 1)
        };
        if n > MAX_VERTICES {
            return Err(err(0, Graph6ErrorKind::UnsupportedOrder(n)));
        }
        let nbits = n * (n.saturating_sub(1)) / 2;
        let nbytes = nbits.div_ceil(6);
        if bytes.len() < data_start + nbytes {
            return Err(err(bytes.len(), Graph6ErrorKind::TruncatedBitField));
        }
        if bytes.len() > data_start + nbytes {
            return Err(err(data_start + nbytes, Graph6ErrorKind::TrailingData));
        }
        let mut g = Graph::empty(n);
        let mut k = 0usize; // bit cursor
        for col in 1..n {
            for row in 0..col {
                let byte = bytes[data_start + k / 6] - 63;
                let bit_set = (byte >> (5 - k % 6)) & 1 == 1;
                if bit_set {
                    g.add_edge(row, col);
                }
                k += 1;
            }
        }
        Ok(g)
    }

    /// Canonical graph6 encoding; inverse of [`Graph::parse_graph6`].
    pub fn write_graph6(&self) -> String {
        let n = self.n;
        let mut out = Vec::new();
        if n <= 62 {
            out.push(63 + n as u8);
        } else {
            out.push(126);
            out.push(63 + ((n >> 12) & 63) as u8);
            out.push(63 + ((n >> 6) & 63) as u8);
            out.push(63 + (n & 63) as u8);
        }
        let nbits = n * n.saturating_sub(1) / 2;
        let mut acc = 0u8;
        let mut used = 0usize;
        let mut k = 0usize;
        for col in 1..n {
            for row in 0..col {
                acc <<= 1;
                if self.has_edge(row, col) {
                    acc |= 1;
                }
                used += 1;
                k += 1;
                if used == 6 {
                    out.push(63 + acc);
                    acc = 0;
                    used = 0;
                }
            }
        }
        if used > 0 {
            acc <<= 6 - used;
            out.push(63 + acc);
        }
        debug_assert_eq!(k, nbits);
        String::from_utf8(out).expect("graph6 bytes are ASCII")
    }
}

/// Iterate over the set bits of a mask.
pub fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

pub fn bits_to_vec(mask: u64) -> Vec<usize> {
    bits(mask).collect()
}

pub fn vec_to_mask(vs: &[usize]) -> u64 {
    vs.iter().fold(0u64, |m, &v| m | bit(v))
}

// ------------------------------------------------------------- bipartition

/// A 2-coloring of a bipartite graph. Every edge crosses the split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteSplit {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl PartiteSplit {
    pub fn left_mask(&self) -> u64 {
        vec_to_mask(&self.left)
    }
    pub fn right_mask(&self) -> u64 {
        vec_to_mask(&self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartition {
    Split(PartiteSplit),
    /// Witnessing odd cycle (vertex list, closed walk of odd length).
    OddCycle(Vec<usize>),
}

impl Bipartition {
    pub fn split(self) -> Option<PartiteSplit> {
        match self {
            Bipartition::Split(s) => Some(s),
            Bipartition::OddCycle(_) => None,
        }
    }
}

impl Graph {
    /// 2-color the graph if possible. Components are colored by BFS with the
    /// smallest vertex on the left; isolated vertices are then assigned
    /// greedily to equalize side sizes, ties toward the left side.
    pub fn bipartition(&self) -> Bipartition {
        let mut color = vec![u8::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut isolated = Vec::new();
        for root in 0..self.n {
            if color[root] != u8::MAX {
                continue;
            }
            if self.adj[root] == 0 {
                isolated.push(root);
                color[root] = 2; // deferred
                continue;
            }
            color[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for v in bits(self.adj[u]) {
                    if color[v] == u8::MAX || color[v] == 2 {
                        color[v] = 1 - color[u];
                        parent[v] = u;
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return Bipartition::OddCycle(self.odd_cycle_from(u, v, &parent));
                    }
                }
            }
        }
        for v in 0..self.n {
            match color[v] {
                0 => left.push(v),
                1 => right.push(v),
                _ => {}
            }
        }
        for &v in &isolated {
            if left.len() <= right.len() {
                left.push(v);
            } else {
                right.push(v);
            }
        }
        left.sort_unstable();
        right.sort_unstable();
        Bipartition::Split(PartiteSplit { left, right })
    }

    fn odd_cycle_from(&self, u: usize, v: usize, parent: &[usize]) -> Vec<usize> {
        // Walk both BFS ancestries to the root, then splice at the meeting point.
        let path_to_root = |mut x: usize| {
            let mut p = vec![x];
            while parent[x] != usize::MAX {
                x = parent[x];
                p.push(x);
            }
            p
        };
        let pu = path_to_root(u);
        let pv = path_to_root(v);
        // Find the lowest common ancestor by trimming the common suffix.
        let mut iu = pu.len();
        let mut iv = pv.len();
        while iu > 0 && iv > 0 && pu[iu - 1] == pv[iv - 1] {
            iu -= 1;
            iv -= 1;
        }
        let mut cycle: Vec<usize> = pu[..=iu].to_vec();
        let mut tail: Vec<usize> = pv[..iv].to_vec();
        tail.reverse();
        cycle.extend(tail);
        debug_assert!(cycle.len() % 2 == 1, "cycle witness must be odd");
        cycle
    }
}

// ------------------------------------------------------------- isomorphism

/// Backtracking isomorphism test with degree-sequence pruning. Intended for
/// the desk-scale graphs this toolkit works with (n ≤ 12 or so).
pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n != b.n || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    find_isomorphism(a, b).is_some()
}

/// A bijection `π` with `π(a) = b`, if one exists.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    if a.n != b.n {
        return None;
    }
    fn backtrack(a: &Graph, b: &Graph, map: &mut Vec<usize>, used: &mut u64, v: usize) -> bool {
        if v == a.n() {
            return true;
        }
        for w in 0..b.n() {
            if *used & bit(w) != 0 || a.degree(v) != b.degree(w) {
                continue;
            }
            let ok = (0..v).all(|u| a.has_edge(u, v) == b.has_edge(map[u], w));
            if ok {
                map.push(w);
                *used |= bit(w);
                if backtrack(a, b, map, used, v + 1) {
                    return true;
                }
                map.pop();
                *used &= !bit(w);
            }
        }
        false
    }
    let mut map = Vec::with_capacity(a.n);
    let mut used = 0u64;
    backtrack(a, b, &mut map, &mut used, 0).then_some(map)
}

/// A permutation `π` with `π(small) ⊆ host` (spanning subgraph embedding,
/// same vertex count). Used to place a fixed construction inside a target
/// pattern before lifting.
pub fn find_spanning_embedding(small: &Graph, host: &Graph) -> Option<Vec<usize>> {
    if small.n != host.n {
        return None;
    }
    fn backtrack(s: &Graph, h: &Graph, map: &mut Vec<usize>, used: &mut u64, v: usize) -> bool {
        if v == s.n() {
            return true;
        }
        for w in 0..h.n() {
            if *used & bit(w) != 0 || s.degree(v) > h.degree(w) {
                continue;
            }
            let ok = (0..v).all(|u| !s.has_edge(u, v) || h.has_edge(map[u], w));
            if ok {
                map.push(w);
                *used |= bit(w);
                if backtrack(s, h, map, used, v + 1) {
                    return true;
                }
                map.pop();
                *used &= !bit(w);
            }
        }
        false
    }
    let mut map = Vec::with_capacity(small.n);
    let mut used = 0u64;
    backtrack(small, host, &mut map, &mut used, 0).then_some(map)
}

// --------------------------------------------------------------- families

/// Named graph families the pipeline's decision tree cares about.
///
/// `WStar(k)` is `W(k,0,1⃗)`, `WStarPlus(k)` is `W(k,1,1⃗)` (both k ≥ 2);
/// `SabUnionK1(a,b)` is `S_{a,b} ∪ K₁`; `WPlusUnionK1(k)` is
/// `W(k,1,1⃗) ∪ K₁` (k ≥ 2); `BoxProduct(s)` is `K_s □ K₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SpecialFamily {
    Complete,
    Empty,
    C4,
    Path(usize),
    DoubleStar(usize, usize),
    WStar(usize),
    WStarPlus(usize),
    SabUnionK1(usize, usize),
    WPlusUnionK1(usize),
    BoxProduct(usize),
    None,
}

impl Graph {
    fn is_tree(&self) -> bool {
        self.n >= 1 && self.is_connected() && self.edge_count() == self.n - 1
    }

    fn as_double_star(&self) -> Option<(usize, usize)> {
        if !self.is_tree() || self.n < 2 {
            return None;
        }
        if self.n == 2 {
            return Some((0, 0));
        }
        for (u, v) in self.edges() {
            let ok = (0..self.n)
                .filter(|&w| w != u && w != v)
                .all(|w| self.degree(w) == 1 && (self.has_edge(w, u) || self.has_edge(w, v)));
            if ok {
                let a = self.degree(u) - 1;
                let b = self.degree(v) - 1;
                return Some((a.max(b), a.min(b)));
            }
        }
        None
    }

    fn as_w_star(&self) -> Option<usize> {
        // W(k,0,1⃗), k ≥ 2: center of degree k, each branch subdivided once.
        if !self.is_tree() || self.n < 5 || self.n % 2 == 0 {
            return None;
        }
        let k = (self.n - 1) / 2;
        'outer: for c in 0..self.n {
            if self.degree(c) != k {
                continue;
            }
            for m in self.neighbors(c) {
                if self.degree(m) != 2 {
                    continue 'outer;
                }
                let leaf = bits(self.adj[m] & !bit(c)).next().expect("degree-2 middle");
                if self.degree(leaf) != 1 {
                    continue 'outer;
                }
            }
            return Some(k);
        }
        None
    }

    fn as_w_star_plus(&self) -> Option<usize> {
        // W(k,1,1⃗), k ≥ 2: center of degree k+1 with one direct leaf and k
        // subdivided branches.
        if !self.is_tree() || self.n < 6 || self.n % 2 == 1 {
            return None;
        }
        let k = (self.n - 2) / 2;
        'outer: for c in 0..self.n {
            if self.degree(c) != k + 1 {
                continue;
            }
            let mut direct_leaves = 0usize;
            for m in self.neighbors(c) {
                match self.degree(m) {
                    1 => direct_leaves += 1,
                    2 => {
                        let leaf = bits(self.adj[m] & !bit(c)).next().expect("degree-2 middle");
                        if self.degree(leaf) != 1 {
                            continue 'outer;
                        }
                    }
                    _ => continue 'outer,
                }
            }
            if direct_leaves == 1 {
                return Some(k);
            }
        }
        None
    }

    fn as_box_product(&self) -> Option<usize> {
        if self.n < 4 || self.n % 2 != 0 {
            return None;
        }
        let s = self.n / 2;
        if self.edge_count() != s * (s - 1) + s || (0..self.n).any(|v| self.degree(v) != s) {
            return None;
        }
        // Guess vertex 0's matched partner; the rest of its side is N(0)
        // minus the partner.
        for m in self.neighbors(0) {
            let side_a = (self.adj[0] | bit(0)) & !bit(m);
            let side_b = mask_below(self.n) & !side_a;
            let a_clique = bits(side_a).all(|u| (self.adj[u] | bit(u)) & side_a == side_a);
            let b_clique = bits(side_b).all(|u| (self.adj[u] | bit(u)) & side_b == side_b);
            if !a_clique || !b_clique {
                continue;
            }
            let matching_ok = bits(side_a).all(|u| (self.adj[u] & side_b).count_ones() == 1);
            if matching_ok {
                return Some(s);
            }
        }
        None
    }

    /// The most specific family label under the fixed specificity order
    /// C4 > WPlusUnionK1 > SabUnionK1 > WStarPlus > WStar > DoubleStar >
    /// Path > BoxProduct > Complete > Empty > None.
    pub fn recognize(&self) -> SpecialFamily {
        if self.n == 0 {
            return SpecialFamily::None;
        }
        let e = self.edge_count();
        if self.n == 4 && e == 4 && (0..4).all(|v| self.degree(v) == 2) {
            return SpecialFamily::C4;
        }
        // Union-with-K1 families need exactly two components, one a singleton.
        let comps = self.components();
        if comps.len() == 2 && comps[1].len() == 1 {
            let (main, _) = self.induced(vec_to_mask(&comps[0]));
            if let Some(k) = main.as_w_star_plus() {
                return SpecialFamily::WPlusUnionK1(k);
            }
            if let Some((a, b)) = main.as_double_star() {
                return SpecialFamily::SabUnionK1(a, b);
            }
        }
        if let Some(k) = self.as_w_star_plus() {
            return SpecialFamily::WStarPlus(k);
        }
        if let Some(k) = self.as_w_star() {
            return SpecialFamily::WStar(k);
        }
        if let Some((a, b)) = self.as_double_star() {
            return SpecialFamily::DoubleStar(a, b);
        }
        if self.n >= 2 && self.is_tree() && (0..self.n).all(|v| self.degree(v) <= 2) {
            return SpecialFamily::Path(self.n);
        }
        if let Some(s) = self.as_box_product() {
            return SpecialFamily::BoxProduct(s);
        }
        if e == self.n * (self.n - 1) / 2 {
            return SpecialFamily::Complete;
        }
        if e == 0 {
            return SpecialFamily::Empty;
        }
        SpecialFamily::None
    }

    /// All paths `x-u-y` of length 2 where `x,y` are non-adjacent and `u` is
    /// their unique common neighbor. An empty result is the necessary
    /// condition for a two-eigenvalue realization.
    pub fn unique_p2_violations(&self) -> Result<Vec<(usize, usize, usize)>, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in x + 1..self.n {
                if self.has_edge(x, y) {
                    continue;
                }
                let common = self.adj[x] & self.adj[y];
                if common.count_ones() == 1 {
                    let u = common.trailing_zeros() as usize;
                    out.push((x, u, y));
                }
            }
        }
        Ok(out)
    }
}
