//! Canonical labeling by partition refinement and a pruned search tree.
//!
//! Each tree node is an ordered partition of the vertices, refined to equitability. Children
//! individualize one vertex of the first non-singleton cell. Leaves are discrete partitions,
//! i.e. labelings, and the labeling whose permuted adjacency rows are lexicographically
//! smallest is canonical. Automorphisms found along the way (equal leaves) prune the tree.

use std::fmt;

use crate::graph::{Graph, VertexSet};

/// Labeling-invariant encoding: vertex count followed by the upper-triangle bits of the
/// canonically relabeled graph, packed most significant bit first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        self.0[0] as usize
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// Result of canonical labeling.
#[derive(Debug, Clone)]
pub struct Labeling {
    /// `order[i]` is the vertex placed at canonical position `i`.
    pub order: Vec<usize>,
    /// Automorphisms discovered during the search (as vertex maps). They need not generate the
    /// full group.
    pub automorphisms: Vec<Vec<usize>>,
}

impl Labeling {
    /// `position()[v]` is the canonical position of vertex `v`.
    pub fn position(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

pub fn canonical_labeling(g: &Graph) -> Labeling {
    let mut search = Search {
        g,
        first: None,
        best: None,
        automorphisms: Vec::new(),
    };
    let mut cells = vec![g.vertices().0];
    if g.n() == 0 {
        return Labeling {
            order: vec![],
            automorphisms: vec![],
        };
    }
    refine(g, &mut cells);
    search.descend(cells, &mut Vec::new());
    let best = search.best.expect("search reaches at least one leaf");
    Labeling {
        order: best.order,
        automorphisms: search.automorphisms,
    }
}

/// `g` relabeled canonically.
pub fn canonical_graph(g: &Graph) -> Graph {
    let pos = canonical_labeling(g).position();
    g.permute(&pos)
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    encode(&canonical_graph(g))
}

/// Canonical form together with the labeling that produced it.
pub fn canonical_form_with_labeling(g: &Graph) -> (CanonicalForm, Labeling) {
    let lab = canonical_labeling(g);
    let form = encode(&g.permute(&lab.position()));
    (form, lab)
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.m() != b.m() || a.degree_sequence() != b.degree_sequence() {
        return false;
    }
    canonical_form(a) == canonical_form(b)
}

fn encode(g: &Graph) -> CanonicalForm {
    let n = g.n();
    let bits = n * n.saturating_sub(1) / 2;
    let mut bytes = Vec::with_capacity(1 + bits.div_ceil(8));
    bytes.push(u8::try_from(n).expect("vertex count fits in a byte"));
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 8 {
                bytes.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bytes.push(acc << (8 - filled));
    }
    CanonicalForm(bytes)
}

/// Refines an ordered partition until every cell has a uniform number of neighbours in every
/// cell. Cells split in place, sub-cells ordered by increasing neighbour count.
fn refine(g: &Graph, cells: &mut Vec<u128>) {
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            let splitter = cells[s];
            if let Some(next) = split_by(g, cells, splitter) {
                *cells = next;
                changed = true;
            }
            s += 1;
        }
        if !changed {
            return;
        }
    }
}

fn split_by(g: &Graph, cells: &[u128], splitter: u128) -> Option<Vec<u128>> {
    let mut out: Option<Vec<u128>> = None;
    for (idx, &cell) in cells.iter().enumerate() {
        if cell.count_ones() == 1 {
            if let Some(o) = out.as_mut() {
                o.push(cell);
            }
            continue;
        }
        let mut groups: Vec<(u32, u128)> = Vec::new();
        for v in VertexSet(cell).iter() {
            let k = (g.rows()[v] & splitter).count_ones();
            match groups.iter_mut().find(|(c, _)| *c == k) {
                Some((_, set)) => *set |= 1 << v,
                None => groups.push((k, 1 << v)),
            }
        }
        if groups.len() == 1 {
            if let Some(o) = out.as_mut() {
                o.push(cell);
            }
            continue;
        }
        groups.sort_unstable_by_key(|&(k, _)| k);
        let o = out.get_or_insert_with(|| cells[..idx].to_vec());
        o.extend(groups.into_iter().map(|(_, set)| set));
    }
    out
}

struct Leaf {
    path: Vec<usize>,
    order: Vec<usize>,
    cert: Vec<u128>,
}

struct Search<'a> {
    g: &'a Graph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Explores the subtree below `cells`. Returns `Some(d)` when an automorphism proves that
    /// everything below depth `d` of the current path is already covered.
    fn descend(&mut self, cells: Vec<u128>, path: &mut Vec<usize>) -> Option<usize> {
        let depth = path.len();
        let Some(ti) = cells.iter().position(|c| c.count_ones() > 1) else {
            return self.leaf(&cells, path);
        };
        let target = cells[ti];
        let rows = self.g.rows();
        let mut explored: Vec<usize> = Vec::new();
        let mut orbits = Orbits::new(self.g.n());
        let mut autos_seen = 0;
        for w in VertexSet(target).iter() {
            let twin = explored
                .iter()
                .any(|&x| rows[w] & !(1u128 << x) == rows[x] & !(1u128 << w));
            if twin {
                continue;
            }
            if autos_seen < self.automorphisms.len() {
                for gamma in &self.automorphisms[autos_seen..] {
                    if path.iter().all(|&p| gamma[p] == p) {
                        orbits.absorb(gamma);
                    }
                }
                autos_seen = self.automorphisms.len();
            }
            if explored.iter().any(|&x| orbits.same(x, w)) {
                continue;
            }
            explored.push(w);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..ti]);
            child.push(1u128 << w);
            child.push(target & !(1u128 << w));
            child.extend_from_slice(&cells[ti + 1..]);
            refine(self.g, &mut child);
            path.push(w);
            let jump = self.descend(child, path);
            path.pop();
            if let Some(d) = jump {
                if d < depth {
                    return Some(d);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &[u128], path: &[usize]) -> Option<usize> {
        let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let cert = certificate(self.g, &order);
        let Some(first) = &self.first else {
            let leaf = Leaf {
                path: path.to_vec(),
                order,
                cert,
            };
            self.best = Some(Leaf {
                path: leaf.path.clone(),
                order: leaf.order.clone(),
                cert: leaf.cert.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if cert == first.cert {
            let gamma = map_between(&first.order, &order);
            let d = common_prefix(&first.path, path);
            self.automorphisms.push(gamma);
            return Some(d);
        }
        let best = self.best.as_ref().expect("best set with first");
        match cert.cmp(&best.cert) {
            std::cmp::Ordering::Less => {
                self.best = Some(Leaf {
                    path: path.to_vec(),
                    order,
                    cert,
                });
                None
            }
            std::cmp::Ordering::Equal => {
                let gamma = map_between(&best.order, &order);
                let d = common_prefix(&best.path, path);
                self.automorphisms.push(gamma);
                Some(d)
            }
            std::cmp::Ordering::Greater => None,
        }
    }
}

fn certificate(g: &Graph, order: &[usize]) -> Vec<u128> {
    let mut pos = vec![0usize; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order
        .iter()
        .map(|&v| {
            VertexSet(g.rows()[v])
                .iter()
                .fold(0u128, |row, u| row | 1 << pos[u])
        })
        .collect()
}

/// The automorphism sending `from[i]` to `to[i]`.
fn map_between(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut gamma = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gamma[a] = b;
    }
    gamma
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    fn new(n: usize) -> Self {
        Orbits {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn absorb(&mut self, gamma: &[usize]) {
        for (v, &w) in gamma.iter().enumerate() {
            let (a, b) = (self.find(v), self.find(w));
            if a != b {
                self.parent[a.max(b)] = a.min(b);
            }
        }
    }

    fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}
