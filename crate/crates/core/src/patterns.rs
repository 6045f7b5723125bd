//! Forbidden-subgraph detection. Containment is subgraph (not induced) containment.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::{self, FamilySpec};
use crate::graph::{Graph, VertexSet};

/// A forbidden graph, either a named family member or an explicit graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Family(FamilySpec),
    Explicit(Graph),
}

impl Pattern {
    pub fn graph(&self) -> Result<Graph> {
        let g = match self {
            Pattern::Family(spec) => families::make(spec)?,
            Pattern::Explicit(g) => g.clone(),
        };
        if g.m() == 0 {
            return Err(Error::InvalidPattern("pattern has no edges".into()));
        }
        if !g.isolated_vertices().is_empty() {
            return Err(Error::InvalidPattern(
                "pattern has isolated vertices".into(),
            ));
        }
        Ok(g)
    }
}

impl From<FamilySpec> for Pattern {
    fn from(spec: FamilySpec) -> Self {
        Pattern::Family(spec)
    }
}

impl FromStr for Pattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(Pattern::Family(s.parse()?))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Family(spec) => write!(f, "{spec}"),
            Pattern::Explicit(g) => write!(f, "{g:?}"),
        }
    }
}

/// Injective map from pattern vertices to host vertices: `mapping[p]` is the image of `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub mapping: Vec<usize>,
}

impl Witness {
    /// True iff the mapping is injective and every pattern edge lands on a host edge.
    pub fn verify(&self, pattern: &Graph, host: &Graph) -> bool {
        if self.mapping.len() != pattern.n() {
            return false;
        }
        let mut seen = VertexSet::EMPTY;
        for &v in &self.mapping {
            if v >= host.n() || seen.contains(v) {
                return false;
            }
            seen.insert(v);
        }
        pattern
            .edges()
            .all(|(a, b)| host.has_edge(self.mapping[a], self.mapping[b]))
    }
}

/// Looks for a copy of `pattern` in `host`.
///
/// Fans, friendship graphs and books go through the neighbourhood detectors; everything else
/// through exhaustive backtracking. Returned witnesses are always verified.
pub fn contains(host: &Graph, pattern: &Pattern) -> Result<Option<Witness>> {
    let pg = pattern.graph()?;
    let specialized = match pattern {
        Pattern::Family(FamilySpec::Fan(k)) => Some(has_fan(host, *k)),
        Pattern::Family(FamilySpec::Friendship(k)) => Some(has_friendship(host, *k)),
        Pattern::Family(FamilySpec::Book(k)) => Some(has_book(host, *k)),
        _ => None,
    };
    let found = match specialized {
        Some(w) => {
            if cfg!(debug_assertions) && host.n() <= 16 {
                debug_assert_eq!(
                    w.is_some(),
                    find_embedding(host, &pg).is_some(),
                    "specialized detector disagrees with backtracking for {pattern} in {host:?}"
                );
            }
            w
        }
        None => find_embedding(host, &pg),
    };
    if let Some(w) = &found {
        assert!(w.verify(&pg, host), "unsound witness for {pattern}");
    }
    Ok(found)
}

/// `!contains(host, pattern)`.
pub fn is_free(host: &Graph, pattern: &Pattern) -> Result<bool> {
    Ok(contains(host, pattern)?.is_none())
}

/// Generic subgraph search by backtracking.
///
/// Pattern vertices are placed in an order that starts at a maximum-degree vertex and always
/// extends with the vertex having the most already-placed neighbours. Candidates for each
/// vertex are the common host neighbourhood of its placed neighbours, filtered by degree.
pub fn find_embedding(host: &Graph, pattern: &Graph) -> Option<Witness> {
    let k = pattern.n();
    if k > host.n() || pattern.m() > host.m() {
        return None;
    }
    if k == 0 {
        return Some(Witness { mapping: vec![] });
    }
    let order = placement_order(pattern);
    let host_deg = host.degrees();
    let mut by_degree: Vec<VertexSet> = vec![VertexSet::EMPTY; host.max_degree() + 2];
    // by_degree[d] = host vertices with degree >= d
    for (d, set) in by_degree.iter_mut().enumerate() {
        *set = VertexSet::from_iter((0..host.n()).filter(|&v| host_deg[v] >= d));
    }
    let pat_deg = pattern.degrees();
    if pat_deg
        .iter()
        .any(|&d| d >= by_degree.len() || by_degree[d].is_empty())
    {
        return None;
    }
    let mut mapping = vec![usize::MAX; k];
    let mut used = VertexSet::EMPTY;
    let ctx = Search {
        host,
        pattern,
        order: &order,
        by_degree: &by_degree,
        pat_deg: &pat_deg,
    };
    if ctx.extend(0, &mut mapping, &mut used) {
        Some(Witness { mapping })
    } else {
        None
    }
}

fn placement_order(p: &Graph) -> Vec<usize> {
    let n = p.n();
    let mut order = Vec::with_capacity(n);
    let mut placed = VertexSet::EMPTY;
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed.contains(v))
            .max_by_key(|&v| {
                let back = p.neighbors(v).intersection(placed).len();
                // ties: higher degree, then lower id
                (back, p.degree(v), std::cmp::Reverse(v))
            })
            .expect("unplaced vertex");
        placed.insert(next);
        order.push(next);
    }
    order
}

struct Search<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    order: &'a [usize],
    by_degree: &'a [VertexSet],
    pat_deg: &'a [usize],
}

impl Search<'_> {
    fn extend(&self, depth: usize, mapping: &mut [usize], used: &mut VertexSet) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let p = self.order[depth];
        let mut cand = self.by_degree[self.pat_deg[p]].difference(*used);
        for q in self.pattern.neighbors(p).iter() {
            if mapping[q] != usize::MAX {
                cand = cand.intersection(self.host.neighbors(mapping[q]));
            }
        }
        for v in cand.iter() {
            mapping[p] = v;
            used.insert(v);
            if self.extend(depth + 1, mapping, used) {
                return true;
            }
            used.remove(v);
        }
        mapping[p] = usize::MAX;
        false
    }
}

/// `V_k = K1 ∨ P_{k-1}` is present iff some vertex has a path on `k - 1` vertices inside its
/// neighbourhood. The witness uses the labeling of [`FamilySpec::Fan`]: apex 0, path `1..k`.
pub fn has_fan(host: &Graph, k: usize) -> Option<Witness> {
    assert!(k >= 3, "fan V_k needs k >= 3");
    let need = k - 1;
    for v in 0..host.n() {
        if host.degree(v) < need {
            continue;
        }
        let nb = host.neighbors(v);
        if let Some(path) = find_path(host, nb, need) {
            let mut mapping = Vec::with_capacity(k);
            mapping.push(v);
            mapping.extend(path);
            return Some(Witness { mapping });
        }
    }
    None
}

/// A simple path on exactly `len` vertices inside `within`, if any.
fn find_path(g: &Graph, within: VertexSet, len: usize) -> Option<Vec<usize>> {
    fn dfs(
        g: &Graph,
        within: VertexSet,
        path: &mut Vec<usize>,
        used: VertexSet,
        len: usize,
    ) -> bool {
        if path.len() == len {
            return true;
        }
        let last = *path.last().expect("non-empty path");
        let next = g.neighbors(last).intersection(within).difference(used);
        for u in next.iter() {
            path.push(u);
            let mut used2 = used;
            used2.insert(u);
            if dfs(g, within, path, used2, len) {
                return true;
            }
            path.pop();
        }
        false
    }
    if len == 0 {
        return Some(vec![]);
    }
    for s in within.iter() {
        let mut path = vec![s];
        if dfs(g, within, &mut path, VertexSet::singleton(s), len) {
            return Some(path);
        }
    }
    None
}

/// `F_k = K1 ∨ kK2` is present iff some vertex's neighbourhood contains a matching of size `k`.
/// The witness uses the labeling of [`FamilySpec::Friendship`]: centre 0, triangles
/// `(1,2), (3,4), ..`.
pub fn has_friendship(host: &Graph, k: usize) -> Option<Witness> {
    assert!(k >= 1, "friendship F_k needs k >= 1");
    for v in 0..host.n() {
        if host.degree(v) < 2 * k {
            continue;
        }
        let nb = host.neighbors(v);
        let h = host.induced_subgraph(nb);
        let matching = maximum_matching(&h);
        if matching.len() >= k {
            let members = nb.to_vec();
            let mut mapping = vec![v];
            for &(a, b) in matching.iter().take(k) {
                mapping.push(members[a]);
                mapping.push(members[b]);
            }
            return Some(Witness { mapping });
        }
    }
    None
}

/// `B_k = K2 ∨ kK1` is present iff some edge has at least `k` common neighbours.
/// The witness uses the labeling of [`FamilySpec::Book`]: spine 0, 1; pages `2..k+2`.
pub fn has_book(host: &Graph, k: usize) -> Option<Witness> {
    assert!(k >= 1, "book B_k needs k >= 1");
    for (u, v) in host.edges() {
        let common = host.neighbors(u).intersection(host.neighbors(v));
        if common.len() >= k {
            let mut mapping = vec![u, v];
            mapping.extend(common.iter().take(k));
            return Some(Witness { mapping });
        }
    }
    None
}

/// Size of a maximum matching.
pub fn max_matching_size(g: &Graph) -> usize {
    maximum_matching(g).len()
}

/// A maximum matching, found by branch and bound.
///
/// Degree-one vertices are matched greedily (always safe). Otherwise the highest-degree vertex
/// is branched on: matched with each neighbour (one representative per class of twin
/// neighbours), or left unmatched.
pub fn maximum_matching(g: &Graph) -> Vec<(usize, usize)> {
    let mut best = Vec::new();
    let mut current = Vec::new();
    let alive = VertexSet::from_iter((0..g.n()).filter(|&v| g.degree(v) > 0));
    matching_bb(g, alive, &mut current, &mut best);
    best.sort_unstable();
    best
}

fn matching_bb(
    g: &Graph,
    mut alive: VertexSet,
    current: &mut Vec<(usize, usize)>,
    best: &mut Vec<(usize, usize)>,
) {
    let base = current.len();
    // Forced moves: a vertex of degree one is matched to its only neighbour.
    loop {
        let mut forced = None;
        for v in alive.iter() {
            let nb = g.neighbors(v).intersection(alive);
            match nb.len() {
                0 => {
                    alive.remove(v);
                }
                1 => {
                    forced = Some((v, nb.first().expect("one neighbour")));
                    break;
                }
                _ => {}
            }
        }
        match forced {
            Some((v, u)) => {
                current.push((v.min(u), v.max(u)));
                alive.remove(v);
                alive.remove(u);
            }
            None => break,
        }
    }
    if current.len() + upper_bound(g, alive) <= best.len() {
        current.truncate(base);
        return;
    }
    let pivot = alive.iter().max_by_key(|&v| {
        (
            g.neighbors(v).intersection(alive).len(),
            std::cmp::Reverse(v),
        )
    });
    let Some(v) = pivot else {
        if current.len() > best.len() {
            *best = current.clone();
        }
        current.truncate(base);
        return;
    };
    let nb = g.neighbors(v).intersection(alive);
    let mut tried: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = nb.to_vec();
    order.sort_by_key(|&u| (g.neighbors(u).intersection(alive).len(), u));
    for u in order {
        let rest = alive.difference(VertexSet::from_iter([u, v]));
        // u and w are interchangeable once v is gone if they see the same rest.
        let twin = tried.iter().any(|&w| {
            g.neighbors(u)
                .intersection(rest)
                .difference(VertexSet::singleton(w))
                == g.neighbors(w)
                    .intersection(rest)
                    .difference(VertexSet::singleton(u))
        });
        if twin {
            continue;
        }
        tried.push(u);
        current.push((v.min(u), v.max(u)));
        matching_bb(g, rest, current, best);
        current.pop();
    }
    let mut without = alive;
    without.remove(v);
    matching_bb(g, without, current, best);
    current.truncate(base);
}

/// `ν ≤ min(⌊k/2⌋, 2|M|)` for `k` non-isolated vertices and any maximal matching `M`.
fn upper_bound(g: &Graph, alive: VertexSet) -> usize {
    let mut free = alive;
    let mut greedy = 0;
    for v in alive.iter() {
        if !free.contains(v) {
            continue;
        }
        if let Some(u) = g.neighbors(v).intersection(free).first() {
            free.remove(u);
            free.remove(v);
            greedy += 1;
        }
    }
    (alive.len() / 2).min(2 * greedy)
}

/// Maximum number of vertices on a simple path. Exponential; capped at 32 vertices.
pub fn longest_path_vertices(g: &Graph) -> Result<usize> {
    if g.n() > 32 {
        return Err(Error::SizeLimitExceeded(format!(
            "longest path search is limited to 32 vertices, got {}",
            g.n()
        )));
    }
    fn dfs(g: &Graph, last: usize, used: VertexSet, best: &mut usize, cap: usize) {
        *best = (*best).max(used.len());
        if *best == cap {
            return;
        }
        let reach = g.reach(last, g.vertices().difference(used)).len() - 1;
        // Cannot beat the best even using every reachable vertex.
        if used.len() + reach <= *best {
            return;
        }
        for u in g.neighbors(last).difference(used).iter() {
            let mut next = used;
            next.insert(u);
            dfs(g, u, next, best, cap);
        }
    }
    let mut best = 0;
    for comp in g.components() {
        let cap = comp.len();
        for s in comp.iter() {
            if best >= cap {
                break;
            }
            let mut local = 0;
            dfs(g, s, VertexSet::singleton(s), &mut local, cap);
            best = best.max(local);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mk(s: &str) -> Graph {
        s.parse::<FamilySpec>().unwrap().build().unwrap()
    }

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn containment_examples() {
        assert!(contains(&mk("K5"), &pat("V5")).unwrap().is_some());
        assert!(contains(&mk("ext{k=2,m=9}"), &pat("V5")).unwrap().is_none());
        assert!(contains(&mk("C5+"), &pat("C5")).unwrap().is_some());
        assert!(contains(&mk("ext{k=3,m=33}"), &pat("F3"))
            .unwrap()
            .is_none());
        assert!(contains(&mk("V5"), &pat("F2")).unwrap().is_some());
        assert!(contains(&mk("V5"), &pat("C5+")).unwrap().is_some());
    }

    #[test]
    fn rejects_bad_patterns() {
        let e = Pattern::Explicit(Graph::empty(3).unwrap());
        assert!(matches!(
            contains(&mk("K3"), &e),
            Err(Error::InvalidPattern(_))
        ));
        let iso = Pattern::Explicit(mk("K2").disjoint_union(&mk("K1")).unwrap());
        assert!(matches!(
            contains(&mk("K3"), &iso),
            Err(Error::InvalidPattern(_))
        ));
    }

    #[test]
    fn fan_examples() {
        assert!(has_fan(&mk("W6"), 5).is_some());
        for b in 1..=30 {
            assert!(has_fan(&mk(&format!("ext{{k=2,b={b}}}")), 5).is_none());
        }
        assert!(has_fan(&mk("F2"), 5).is_none());
        let w = has_fan(&mk("K5"), 5).unwrap();
        assert!(w.verify(&mk("V5"), &mk("K5")));
    }

    #[test]
    fn fan_on_large_neighbourhoods() {
        let g = mk("ext{k=3,b=61}");
        assert!(has_fan(&g, 6).is_some());
        assert!(has_fan(&g, 7).is_none());
    }

    #[test]
    fn friendship_examples() {
        let w = has_friendship(&mk("K7"), 3).unwrap();
        assert!(w.verify(&mk("F3"), &mk("K7")));
        for b in 0..=40 {
            assert!(has_friendship(&mk(&format!("ext{{k=3,b={b}}}")), 3).is_none());
        }
        let w = has_friendship(&mk("F2"), 2).unwrap();
        assert_eq!(w.mapping[0], 0);
    }

    #[test]
    fn book_examples() {
        assert!(has_book(&mk("K4"), 2).is_some());
        assert!(has_book(&mk("K4"), 3).is_none());
        let w = has_book(&mk("ext{k=2,b=5}"), 5).unwrap();
        assert!(w.verify(&mk("B5"), &mk("ext{k=2,b=5}")));
    }

    #[test]
    fn matching_examples() {
        assert_eq!(max_matching_size(&mk("P4")), 2);
        for n in 4..=40 {
            assert_eq!(
                max_matching_size(&mk(&format!("ext{{k=2,b={}}}", n - 2))),
                2
            );
        }
        assert_eq!(max_matching_size(&mk("K2").copies(3).unwrap()), 3);
        assert_eq!(max_matching_size(&mk("K7")), 3);
        assert_eq!(max_matching_size(&mk("C7")), 3);
        assert_eq!(max_matching_size(&Graph::empty(4).unwrap()), 0);
        assert_eq!(max_matching_size(&mk("ext{k=2,b=61}")), 2);
    }

    #[test]
    fn longest_path_examples() {
        assert_eq!(longest_path_vertices(&mk("C5")).unwrap(), 5);
        assert_eq!(longest_path_vertices(&mk("K1,4")).unwrap(), 3);
        assert_eq!(longest_path_vertices(&mk("K3").copies(2).unwrap()), Ok(3));
        assert_eq!(longest_path_vertices(&Graph::empty(2).unwrap()), Ok(1));
        assert!(longest_path_vertices(&mk("P33")).is_err());
        assert_eq!(longest_path_vertices(&mk("P32")), Ok(32));
    }

    fn brute_matching(g: &Graph) -> usize {
        let edges: Vec<_> = g.edges().collect();
        let mut best = 0;
        for mask in 0u32..(1 << edges.len()) {
            let mut used = VertexSet::EMPTY;
            let mut ok = true;
            for (i, &(a, b)) in edges.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if used.contains(a) || used.contains(b) {
                        ok = false;
                        break;
                    }
                    used.insert(a);
                    used.insert(b);
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_edges(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
            (2..=max_n).prop_flat_map(move |n| {
                proptest::collection::vec((0..n, 0..n), 0..=max_m).prop_map(move |pairs| {
                    let e: Vec<_> = pairs.into_iter().filter(|(a, b)| a != b).collect();
                    Graph::from_edges(n, &e).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn matching_matches_brute_force(g in arb_edges(10, 10)) {
                prop_assume!(g.m() <= 10);
                let m = maximum_matching(&g);
                prop_assert_eq!(m.len(), brute_matching(&g));
                let mut seen = VertexSet::EMPTY;
                for (a, b) in m {
                    prop_assert!(g.has_edge(a, b));
                    prop_assert!(!seen.contains(a) && !seen.contains(b));
                    seen.insert(a);
                    seen.insert(b);
                }
            }

            #[test]
            fn containment_is_monotone(g in arb_edges(8, 14), i in 0usize..8, j in 0usize..8) {
                prop_assume!(i != j && i < g.n() && j < g.n());
                let h = g.with_edge(i, j);
                for p in ["C4", "K4", "V5", "F2", "B2", "P5"] {
                    let p = pat(p);
                    if contains(&g, &p).unwrap().is_some() {
                        prop_assert!(contains(&h, &p).unwrap().is_some());
                    }
                }
            }

            #[test]
            fn detectors_agree_with_backtracking(g in arb_edges(9, 20)) {
                for k in [3usize, 4, 5, 6] {
                    let spec = FamilySpec::Fan(k);
                    let p = spec.build().unwrap();
                    prop_assert_eq!(has_fan(&g, k).is_some(), find_embedding(&g, &p).is_some());
                }
                for k in [1usize, 2, 3] {
                    let p = FamilySpec::Friendship(k).build().unwrap();
                    prop_assert_eq!(has_friendship(&g, k).is_some(), find_embedding(&g, &p).is_some());
                    let p = FamilySpec::Book(k).build().unwrap();
                    prop_assert_eq!(has_book(&g, k).is_some(), find_embedding(&g, &p).is_some());
                }
            }
        }
    }
}
