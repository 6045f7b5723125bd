//! Dense undirected simple graphs with one machine-word bitset per adjacency row.
//!
//! Graphs are immutable: every operation that changes structure returns a new value.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported vertex count (one `u128` word per row).
pub const MAX_VERTICES: usize = 128;

/// A set of vertex ids below [`MAX_VERTICES`], stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u128::MAX)
        } else {
            VertexSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u128 << v)
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && (self.0 >> v) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u128 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u128 << v);
    }

    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Ascending iteration over members.
    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;
    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in it {
            s.insert(v);
        }
        s
    }
}

pub struct VertexIter(u128);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for VertexIter {}

/// Dense undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u128>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Graph {
            n,
            adj: vec![0; n],
            m: 0,
        })
    }

    /// Builds a graph from an edge list; duplicate pairs (in either orientation) collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        check_order(n)?;
        let mut adj = vec![0u128; n];
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::InvalidEdge(u, v));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Self::from_rows_unchecked(n, adj))
    }

    /// Builds a graph from adjacency rows, checking symmetry and looplessness.
    pub fn from_rows(rows: Vec<u128>) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        let mask = VertexSet::full(n).0;
        for (i, &row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                let j = (row & !mask).trailing_zeros() as usize;
                return Err(Error::InvalidEdge(i, j));
            }
            if (row >> i) & 1 == 1 {
                return Err(Error::InvalidEdge(i, i));
            }
            for j in VertexSet(row).iter() {
                if (rows[j] >> i) & 1 == 0 {
                    return Err(Error::InvalidEdge(i, j));
                }
            }
        }
        Ok(Self::from_rows_unchecked(n, rows))
    }

    pub(crate) fn from_rows_unchecked(n: usize, adj: Vec<u128>) -> Self {
        let twice: usize = adj.iter().map(|r| r.count_ones() as usize).sum();
        Graph {
            n,
            adj,
            m: twice / 2,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn rows(&self) -> &[u128] {
        &self.adj
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && (self.adj[u] >> v) & 1 == 1
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Degree sequence sorted descending.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Edges `(i, j)` with `i < j`, ordered by `i` then `j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            VertexSet(self.adj[i] & !((2u128 << i).wrapping_sub(1)))
                .iter()
                .map(move |j| (i, j))
        })
    }

    /// Number of edges with both ends in `s`.
    pub fn edges_within(&self, s: VertexSet) -> usize {
        s.iter()
            .map(|v| (self.adj[v] & s.0).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Number of edges between the disjoint sets `a` and `b`.
    pub fn edges_between(&self, a: VertexSet, b: VertexSet) -> usize {
        a.iter()
            .map(|v| (self.adj[v] & b.0).count_ones() as usize)
            .sum()
    }

    /// `G ∨ H`: disjoint copies plus every edge between them. `G` keeps labels `0..|G|`.
    pub fn join(&self, other: &Graph) -> Result<Graph> {
        self.combine(other, true)
    }

    /// Vertex-disjoint union. `G` keeps labels `0..|G|`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        self.combine(other, false)
    }

    fn combine(&self, other: &Graph, cross: bool) -> Result<Graph> {
        let n = self.n + other.n;
        check_order(n)?;
        let left = VertexSet::full(self.n).0;
        let right = VertexSet::full(n).0 & !left;
        let mut adj = Vec::with_capacity(n);
        for &row in &self.adj {
            adj.push(if cross { row | right } else { row });
        }
        for &row in &other.adj {
            let shifted = row << self.n;
            adj.push(if cross { shifted | left } else { shifted });
        }
        Ok(Graph::from_rows_unchecked(n, adj))
    }

    /// `k` disjoint copies of `self`.
    pub fn copies(&self, k: usize) -> Result<Graph> {
        let mut g = Graph::empty(0)?;
        for _ in 0..k {
            g = g.disjoint_union(self)?;
        }
        Ok(g)
    }

    /// Subgraph induced by `s`, relabeled `0..|s|` in ascending original-id order.
    pub fn induced_subgraph(&self, s: VertexSet) -> Graph {
        let s = s.intersection(self.vertices());
        let members = s.to_vec();
        let adj = members
            .iter()
            .map(|&v| compress(self.adj[v] & s.0, &members))
            .collect();
        Graph::from_rows_unchecked(members.len(), adj)
    }

    /// Removes vertex `v`; later vertices shift down by one.
    pub fn without_vertex(&self, v: usize) -> Graph {
        let mut s = self.vertices();
        s.remove(v);
        self.induced_subgraph(s)
    }

    /// Returns a copy with edge `uv` added. Panics on out-of-range or loop.
    pub fn with_edge(&self, u: usize, v: usize) -> Graph {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u}, {v})");
        let mut adj = self.adj.clone();
        let added = (adj[u] >> v) & 1 == 0;
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
        Graph {
            n: self.n,
            adj,
            m: self.m + added as usize,
        }
    }

    /// Returns a copy with edge `uv` removed.
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut adj = self.adj.clone();
        let present = self.has_edge(u, v);
        adj[u] &= !(1 << v);
        adj[v] &= !(1 << u);
        Graph {
            n: self.n,
            adj,
            m: self.m - present as usize,
        }
    }

    /// Returns a copy with one extra isolated vertex (id `n`).
    pub fn with_vertex(&self) -> Result<Graph> {
        check_order(self.n + 1)?;
        let mut adj = self.adj.clone();
        adj.push(0);
        Ok(Graph {
            n: self.n + 1,
            adj,
            m: self.m,
        })
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut adj = vec![0u128; self.n];
        for v in 0..self.n {
            let mut row = 0u128;
            for u in VertexSet(self.adj[v]).iter() {
                row |= 1 << perm[u];
            }
            adj[perm[v]] = row;
        }
        Graph {
            n: self.n,
            adj,
            m: self.m,
        }
    }

    /// Vertices reachable from `start` (including `start`) inside `within`.
    pub fn reach(&self, start: usize, within: VertexSet) -> VertexSet {
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = 0u128;
            for v in frontier.iter() {
                next |= self.adj[v];
            }
            frontier = VertexSet(next & within.0 & !seen.0);
            seen = seen.union(frontier);
        }
        seen
    }

    /// Connected components ordered by their smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        components_within(self, self.vertices())
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.reach(0, self.vertices()).len() == self.n
    }

    pub fn isolated_vertices(&self) -> VertexSet {
        VertexSet::from_iter((0..self.n).filter(|&v| self.adj[v] == 0))
    }

    /// Decomposition of the graph around `center`: neighbourhood, the rest, and the structure of
    /// the neighbourhood-induced subgraph.
    pub fn neighborhood_partition(&self, center: usize) -> NeighborhoodPartition {
        assert!(center < self.n, "vertex {center} out of range");
        let u = self.neighbors(center);
        let w = self
            .vertices()
            .difference(u)
            .difference(VertexSet::singleton(center));
        let u0 = VertexSet::from_iter(u.iter().filter(|&v| self.adj[v] & u.0 == 0));
        let components = components_within(self, u);
        NeighborhoodPartition {
            center,
            u,
            w,
            u0,
            components,
        }
    }
}

fn components_within(g: &Graph, within: VertexSet) -> Vec<VertexSet> {
    let mut rest = within;
    let mut out = Vec::new();
    while let Some(v) = rest.first() {
        let c = g.reach(v, within);
        rest = rest.difference(c);
        out.push(c);
    }
    out
}

/// Maps the bits of `row` (restricted to `members`) onto positions `0..members.len()`.
fn compress(row: u128, members: &[usize]) -> u128 {
    let mut out = 0u128;
    for (i, &v) in members.iter().enumerate() {
        out |= ((row >> v) & 1) << i;
    }
    out
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        Err(Error::VertexLimitExceeded {
            requested: n,
            limit: MAX_VERTICES,
        })
    } else {
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges=[", self.n, self.m)?;
        for (k, (i, j)) in self.edges().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}-{j}")?;
        }
        write!(f, "])")
    }
}

/// `U = N(center)`, `W = V ∖ N[center]`, the isolated vertices `U0` of `G[U]` and the
/// components of `G[U]` (ordered by smallest vertex). All sets use the host's vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodPartition {
    pub center: usize,
    pub u: VertexSet,
    pub w: VertexSet,
    pub u0: VertexSet,
    pub components: Vec<VertexSet>,
}

impl NeighborhoodPartition {
    /// Components of `G[U]` with at least one edge.
    pub fn nontrivial_components(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.components.iter().copied().filter(|c| c.len() > 1)
    }
}
