//! Isomorph-free generation by canonical edge augmentation.
//!
//! The search tree is rooted at K2. A child adds one edge, either between two non-adjacent
//! vertices or from an existing vertex to a new one. Every connected graph with at least two
//! edges has a canonical removable edge (a pendant edge, whose leaf goes with it, or an edge on
//! a cycle); the child is kept only when removing that edge gives back the parent's class.
//! Children of one parent are deduplicated by canonical form.

use std::collections::HashSet;

use rayon::prelude::*;

use super::canon::{canonical_form, canonical_form_with_labeling, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

/// Largest edge count the built-in generator accepts.
pub const MAX_EDGES: usize = 14;

/// Frontier size at which parallel generation stops splitting and hands subtrees to workers.
const PARALLEL_FRONTIER: usize = 256;

/// What to enumerate: graphs with exactly `m` edges and no isolated vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumSpec {
    pub m: usize,
    pub require_connected: bool,
    /// Vertex cap. Defaults to `m + 1` (connected) or `2m` (all graphs), which never bind.
    pub max_vertices: Option<usize>,
}

impl EnumSpec {
    pub fn connected(m: usize) -> Self {
        EnumSpec {
            m,
            require_connected: true,
            max_vertices: None,
        }
    }

    pub fn all(m: usize) -> Self {
        EnumSpec {
            m,
            require_connected: false,
            max_vertices: None,
        }
    }

    pub fn with_max_vertices(mut self, n: usize) -> Self {
        self.max_vertices = Some(n);
        self
    }

    pub fn vertex_cap(&self) -> usize {
        let default = if self.require_connected {
            self.m + 1
        } else {
            2 * self.m
        };
        self.max_vertices.unwrap_or(default).min(MAX_VERTICES)
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidParameter("enumeration needs m >= 1".into()));
        }
        if self.m > MAX_EDGES {
            return Err(Error::SizeLimitExceeded(format!(
                "enumeration is limited to m <= {MAX_EDGES}, got {}; feed graph6 streams instead",
                self.m
            )));
        }
        if let Some(n) = self.max_vertices {
            if n > MAX_VERTICES {
                return Err(Error::VertexLimitExceeded {
                    requested: n,
                    limit: MAX_VERTICES,
                });
            }
        }
        Ok(())
    }
}

/// Visits one representative per isomorphism class in a deterministic order and returns the
/// number of classes.
pub fn enumerate<F: FnMut(&Graph)>(spec: &EnumSpec, mut visit: F) -> Result<usize> {
    spec.validate()?;
    if !spec.require_connected {
        let graphs = all_graphs(spec, false)?;
        graphs.iter().for_each(&mut visit);
        return Ok(graphs.len());
    }
    let cap = spec.vertex_cap();
    if cap < 2 {
        return Ok(0);
    }
    let mut count = 0;
    let root = Node::root();
    walk(&root, spec.m, cap, &mut |g| {
        count += 1;
        visit(g);
    });
    Ok(count)
}

/// Parallel enumeration. `visit` may run concurrently on several threads; the set of visited
/// classes equals that of [`enumerate`].
pub fn enumerate_parallel<F: Fn(&Graph) + Sync>(spec: &EnumSpec, visit: F) -> Result<usize> {
    spec.validate()?;
    if !spec.require_connected {
        let graphs = all_graphs(spec, true)?;
        graphs.par_iter().for_each(&visit);
        return Ok(graphs.len());
    }
    let cap = spec.vertex_cap();
    if cap < 2 {
        return Ok(0);
    }
    let frontier = frontier(spec.m, cap);
    Ok(frontier
        .par_iter()
        .map(|node| {
            let mut count = 0;
            walk(node, spec.m, cap, &mut |g| {
                count += 1;
                visit(g);
            });
            count
        })
        .sum())
}

/// All representatives, generated in parallel but returned in the order [`enumerate`] visits
/// them.
pub fn collect(spec: &EnumSpec) -> Result<Vec<Graph>> {
    spec.validate()?;
    if !spec.require_connected {
        return all_graphs(spec, true);
    }
    let cap = spec.vertex_cap();
    if cap < 2 {
        return Ok(Vec::new());
    }
    let chunks: Vec<Vec<Graph>> = frontier(spec.m, cap)
        .par_iter()
        .map(|node| {
            let mut out = Vec::new();
            walk(node, spec.m, cap, &mut |g| out.push(g.clone()));
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Counts classes without materializing graphs.
pub fn count(spec: &EnumSpec) -> Result<usize> {
    enumerate_parallel(spec, |_| {})
}

struct Node {
    graph: Graph,
    form: CanonicalForm,
}

impl Node {
    fn root() -> Self {
        let graph = Graph::from_edges(2, &[(0, 1)]).expect("K2");
        let form = canonical_form(&graph);
        Node { graph, form }
    }
}

/// Nodes at the shallowest depth with at least `PARALLEL_FRONTIER` members (or depth `m`),
/// listed in depth-first order so that concatenated subtree outputs match sequential order.
fn frontier(m: usize, cap: usize) -> Vec<Node> {
    let mut level = vec![Node::root()];
    while level.len() < PARALLEL_FRONTIER && level[0].graph.m() < m {
        let next: Vec<Vec<Node>> = level.par_iter().map(|p| children(p, cap)).collect();
        level = next.into_iter().flatten().collect();
        if level.is_empty() {
            break;
        }
    }
    level
}

fn walk(node: &Node, m: usize, cap: usize, emit: &mut dyn FnMut(&Graph)) {
    if node.graph.m() == m {
        emit(&node.graph);
        return;
    }
    for child in children(node, cap) {
        walk(&child, m, cap, emit);
    }
}

/// Accepted children of `parent`, in generation order.
fn children(parent: &Node, cap: usize) -> Vec<Node> {
    let g = &parent.graph;
    let n = g.n();
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    let mut out = Vec::new();
    let mut consider = |child: Graph, added: (usize, usize)| {
        if let Some(form) = accept(&child, added, &parent.form) {
            if seen.insert(form.clone()) {
                out.push(Node { graph: child, form });
            }
        }
    };
    for j in 1..n {
        for i in 0..j {
            if !g.has_edge(i, j) {
                consider(g.with_edge(i, j), (i, j));
            }
        }
    }
    if n < cap {
        let grown = g.with_vertex().expect("below vertex cap");
        for i in 0..n {
            consider(grown.with_edge(i, n), (i, n));
        }
    }
    out
}

/// Ordering key for removable edges; larger is preferred. Depends only on the isomorphism
/// class of the (graph, edge) pair.
type EdgeKey = (usize, usize, usize, usize);

fn edge_key(g: &Graph, u: usize, v: usize) -> EdgeKey {
    let (du, dv) = (g.degree(u), g.degree(v));
    let common = g.neighbors(u).intersection(g.neighbors(v)).len();
    let reach: usize = g
        .neighbors(u)
        .union(g.neighbors(v))
        .iter()
        .map(|w| g.degree(w))
        .sum();
    (du.min(dv), du.max(dv), common, reach)
}

/// An edge is removable if deleting it (and a resulting isolated leaf) leaves a connected
/// graph with the remaining vertices.
fn removable(g: &Graph, u: usize, v: usize) -> bool {
    if g.degree(u) == 1 || g.degree(v) == 1 {
        return true;
    }
    let h = g.without_edge(u, v);
    h.reach(u, h.vertices()).contains(v)
}

/// `g` minus a removable edge, dropping a leaf endpoint.
fn remove_edge(g: &Graph, u: usize, v: usize) -> Graph {
    let h = g.without_edge(u, v);
    if g.degree(v) == 1 {
        h.without_vertex(v)
    } else if g.degree(u) == 1 {
        h.without_vertex(u)
    } else {
        h
    }
}

/// Returns the child's canonical form if `child` was produced from its canonical parent.
fn accept(
    child: &Graph,
    added: (usize, usize),
    parent_form: &CanonicalForm,
) -> Option<CanonicalForm> {
    let added_key = edge_key(child, added.0, added.1);
    let best_key = added_key;
    let mut ties = 0usize;
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for (u, v) in child.edges() {
        let key = edge_key(child, u, v);
        if key < best_key {
            continue;
        }
        if !removable(child, u, v) {
            continue;
        }
        if key > best_key {
            // The added edge is not of maximal key.
            return None;
        }
        ties += 1;
        candidates.push((u, v));
    }
    let (form, lab) = canonical_form_with_labeling(child);
    if ties <= 1 {
        return Some(form);
    }
    let pos = lab.position();
    let canon_edge = candidates
        .into_iter()
        .min_by_key(|&(u, v)| {
            let (a, b) = (pos[u], pos[v]);
            (a.min(b), a.max(b))
        })
        .expect("at least one candidate");
    if canon_edge == added {
        return Some(form);
    }
    let reduced = remove_edge(child, canon_edge.0, canon_edge.1);
    (canonical_form(&reduced) == *parent_form).then_some(form)
}

/// Graphs without isolated vertices as multisets of connected components.
fn all_graphs(spec: &EnumSpec, parallel: bool) -> Result<Vec<Graph>> {
    let cap = spec.vertex_cap();
    let mut connected: Vec<Vec<Graph>> = vec![Vec::new()];
    for k in 1..=spec.m {
        let s = EnumSpec::connected(k).with_max_vertices(cap.min(k + 1));
        let mut list = if parallel {
            collect(&s)?
        } else {
            sequential(&s)?
        };
        // Components are combined in a fixed order, so sort each list canonically.
        list.sort_by_cached_key(canonical_form);
        connected.push(list);
    }
    let mut out = Vec::new();
    let mut parts = Vec::new();
    partitions(spec.m, spec.m, &mut parts, &mut |parts| {
        let mut picks = Vec::new();
        choose(
            &connected,
            parts,
            0,
            0,
            &mut picks,
            &mut |comps: &[&Graph]| {
                let n: usize = comps.iter().map(|g| g.n()).sum();
                if n > cap {
                    return;
                }
                let mut g = Graph::empty(0).expect("empty graph");
                for c in comps {
                    g = g.disjoint_union(c).expect("within vertex cap");
                }
                out.push(g);
            },
        );
    });
    Ok(out)
}

fn sequential(spec: &EnumSpec) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    enumerate(spec, |g| out.push(g.clone()))?;
    Ok(out)
}

/// Partitions of `rest` into parts of size at most `max`, largest parts first.
fn partitions(rest: usize, max: usize, parts: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if rest == 0 {
        f(parts);
        return;
    }
    for p in (1..=max.min(rest)).rev() {
        parts.push(p);
        partitions(rest - p, p, parts, f);
        parts.pop();
    }
}

/// Picks one connected graph per part; equal parts pick non-decreasing indices so that each
/// multiset appears once.
fn choose<'a>(
    lists: &'a [Vec<Graph>],
    parts: &[usize],
    at: usize,
    min_index: usize,
    picks: &mut Vec<&'a Graph>,
    f: &mut dyn FnMut(&[&Graph]),
) {
    if at == parts.len() {
        f(picks);
        return;
    }
    let list = &lists[parts[at]];
    for (idx, item) in list.iter().enumerate().skip(min_index) {
        picks.push(item);
        let next_min = if at + 1 < parts.len() && parts[at + 1] == parts[at] {
            idx
        } else {
            0
        };
        choose(lists, parts, at + 1, next_min, picks, f);
        picks.pop();
    }
}
