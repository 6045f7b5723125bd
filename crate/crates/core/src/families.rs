//! Named graph families and their text syntax.
//!
//! | text            | graph                                   |
//! |-----------------|-----------------------------------------|
//! | `K5`            | complete graph                          |
//! | `E5`            | edgeless graph                          |
//! | `P4`, `C6`      | path, cycle                             |
//! | `C5+`           | cycle plus the chord `{0, 2}`           |
//! | `K1,4`          | star (also any `Ks,t`)                  |
//! | `K{2,3}`        | complete bipartite / multipartite       |
//! | `V5`            | fan `K1 ∨ P4`                           |
//! | `F3`            | friendship `K1 ∨ 3K2`                   |
//! | `B4`            | book `K2 ∨ 4K1`                         |
//! | `W7`            | wheel `K1 ∨ C6`                         |
//! | `R{2,3}`        | `K1 ∨ (2K3 ∪ 3K1)`                      |
//! | `ext{k=3,m=33}` | `K3 ∨ 10K1` (also `ext{k=3,b=10}`)      |
//! | `fixture:G1`    | fixture graphs `G1`, `G2`, `D1`..`D12`; `fixture:D3{l=5}` sets the arm length |

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fixture {
    G1,
    G2,
    /// `D1`..`D12`.
    D(u8),
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixture::G1 => write!(f, "G1"),
            Fixture::G2 => write!(f, "G2"),
            Fixture::D(i) => write!(f, "D{i}"),
        }
    }
}

impl FromStr for Fixture {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G1" => Ok(Fixture::G1),
            "G2" => Ok(Fixture::G2),
            _ => {
                let i = s
                    .strip_prefix('D')
                    .and_then(|t| t.parse::<u8>().ok())
                    .filter(|i| (1..=12).contains(i))
                    .ok_or_else(|| Error::parse(s, "unknown fixture"))?;
                Ok(Fixture::D(i))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Complete(usize),
    Empty(usize),
    Path(usize),
    Cycle(usize),
    Star(usize),
    CompleteBipartite(usize, usize),
    CompleteMultipartite(Vec<usize>),
    /// `C_k^+`
    ChordedCycle(usize),
    /// `V_k = K1 ∨ P_{k-1}`
    Fan(usize),
    /// `F_k = K1 ∨ kK2`
    Friendship(usize),
    /// `B_k = K2 ∨ kK1`
    Book(usize),
    /// `W_k = K1 ∨ C_{k-1}`
    Wheel(usize),
    /// `R_{s,t} = K1 ∨ (sK3 ∪ tK1)`
    Rst(usize, usize),
    /// `K_k ∨ bK1`
    KkJoinIndep(usize, usize),
    /// `K_k ∨ bK1` with `b` derived from the edge count.
    Extremal {
        k: usize,
        m: usize,
    },
    Fixture {
        name: Fixture,
        arm: Option<usize>,
    },
}

impl FamilySpec {
    pub fn build(&self) -> Result<Graph> {
        make(self)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(invalid(msg()))
    }
}

pub fn complete(n: usize) -> Result<Graph> {
    let mut e = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 0..n {
        for i in 0..j {
            e.push((i, j));
        }
    }
    Graph::from_edges(n, &e)
}

pub fn path(n: usize) -> Result<Graph> {
    let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &e)
}

pub fn cycle(n: usize) -> Result<Graph> {
    require(n >= 3, || format!("cycle needs n >= 3, got {n}"))?;
    let mut e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    e.push((n - 1, 0));
    Graph::from_edges(n, &e)
}

pub fn complete_multipartite(parts: &[usize]) -> Result<Graph> {
    let mut g = Graph::empty(0)?;
    for &p in parts {
        g = g.join(&Graph::empty(p)?)?;
    }
    Ok(g)
}

/// `K_k ∨ bK1` with the clique on `0..k`.
pub fn clique_join_independent(k: usize, b: usize) -> Result<Graph> {
    complete(k)?.join(&Graph::empty(b)?)
}

/// The conjectured extremal graph `K_k ∨ ((m - C(k,2)) / k) K1` for `F_k`-free graphs with `m`
/// edges. Fails with [`Error::Divisibility`] when the construction is not integral.
pub fn extremal_construction(k: usize, m: usize) -> Result<Graph> {
    require(k >= 1, || "extremal construction needs k >= 1".into())?;
    let clique = k * (k - 1) / 2;
    if m < clique + k || !(m - clique).is_multiple_of(k) {
        return Err(Error::Divisibility { k, m });
    }
    clique_join_independent(k, (m - clique) / k)
}

/// Builds the graph described by `spec`.
pub fn make(spec: &FamilySpec) -> Result<Graph> {
    use FamilySpec::*;
    match *spec {
        Complete(n) => {
            require(n >= 1, || "K_n needs n >= 1".into())?;
            complete(n)
        }
        Empty(n) => Graph::empty(n),
        Path(n) => {
            require(n >= 1, || "P_n needs n >= 1".into())?;
            path(n)
        }
        Cycle(n) => cycle(n),
        Star(s) => {
            require(s >= 1, || "star needs s >= 1".into())?;
            Graph::empty(1)?.join(&Graph::empty(s)?)
        }
        CompleteBipartite(s, t) => {
            require(s >= 1 && t >= 1, || "K_{s,t} needs s, t >= 1".into())?;
            complete_multipartite(&[s, t])
        }
        CompleteMultipartite(ref parts) => {
            require(parts.len() >= 2 && parts.iter().all(|&p| p >= 1), || {
                "multipartite graph needs at least two non-empty parts".into()
            })?;
            complete_multipartite(parts)
        }
        ChordedCycle(k) => {
            require(k >= 4, || format!("C_k^+ needs k >= 4, got {k}"))?;
            Ok(cycle(k)?.with_edge(0, 2))
        }
        Fan(k) => {
            require(k >= 3, || format!("fan V_k needs k >= 3, got {k}"))?;
            complete(1)?.join(&path(k - 1)?)
        }
        Friendship(k) => {
            require(k >= 1, || "friendship F_k needs k >= 1".into())?;
            complete(1)?.join(&complete(2)?.copies(k)?)
        }
        Book(k) => {
            require(k >= 1, || "book B_k needs k >= 1".into())?;
            clique_join_independent(2, k)
        }
        Wheel(k) => {
            require(k >= 4, || format!("wheel W_k needs k >= 4, got {k}"))?;
            complete(1)?.join(&cycle(k - 1)?)
        }
        Rst(s, t) => {
            require(s + t >= 1, || "R_{s,t} needs s + t >= 1".into())?;
            let body = complete(3)?.copies(s)?.disjoint_union(&Graph::empty(t)?)?;
            complete(1)?.join(&body)
        }
        KkJoinIndep(k, b) => {
            require(k >= 1, || "K_k v bK1 needs k >= 1".into())?;
            clique_join_independent(k, b)
        }
        Extremal { k, m } => extremal_construction(k, m),
        Fixture { name, arm } => fixture(name, arm),
    }
}

/// Drawn fixtures. Arms drawn with an ellipsis default to one more vertex than drawn; `arm`
/// overrides the size of every pendant arm.
pub fn fixture(name: Fixture, arm: Option<usize>) -> Result<Graph> {
    if let Some(l) = arm {
        require(l >= 1, || "fixture arm length must be >= 1".into())?;
    }
    let l = arm.unwrap_or(3);
    // Common-neighbour rows of D1, D2 and D12: three drawn vertices plus an ellipsis.
    const ROW: usize = 4;
    let mut b = Builder::default();
    match name {
        Fixture::G1 | Fixture::G2 => {
            // K4 on {0,1,2,3}; vertex 3 carries extra neighbours 4, 5 (and 7 in G2);
            // vertex 6 sees 2, 4 and 5.
            let k4 = b.vertices(4);
            b.clique(&k4);
            let (a, c) = (b.vertex(), b.vertex());
            b.edge(3, a);
            b.edge(3, c);
            let w = b.vertex();
            b.edge(w, 2);
            b.edge(w, a);
            b.edge(w, c);
            if name == Fixture::G2 {
                let d = b.vertex();
                b.edge(3, d);
            }
        }
        Fixture::D(i) => match i {
            // Two hubs x, y; a row of common neighbours; pendant arms on the hubs.
            1 | 2 | 6 | 7 | 12 => {
                let (x, y) = (b.vertex(), b.vertex());
                if matches!(i, 1 | 6) {
                    b.edge(x, y);
                }
                let row = if matches!(i, 6 | 7) { 2 } else { ROW };
                for _ in 0..row {
                    let v = b.vertex();
                    b.edge(x, v);
                    b.edge(y, v);
                }
                b.arm(x, l);
                if i != 12 {
                    b.arm(y, l);
                }
            }
            // K4 with pendant vertices on u1.
            3 => {
                let k4 = b.vertices(4);
                b.clique(&k4);
                b.arm(0, l);
            }
            // Triangle {x, y, z}, a fourth vertex q, pendant arm on x.
            4 | 5 => {
                let k = b.vertices(4);
                let (x, y, z, q) = (k[0], k[1], k[2], k[3]);
                if i == 4 {
                    // K4 minus xq
                    b.edges(&[(x, y), (x, z), (y, z), (z, q), (y, q)]);
                } else {
                    // K4 minus yz
                    b.edges(&[(x, y), (x, z), (x, q), (z, q), (y, q)]);
                }
                b.arm(x, l);
            }
            // Triangle {p, q, r} with pendant arms on p and q (D10: without the edge pq).
            8 | 10 => {
                let k = b.vertices(3);
                let (p, q, r) = (k[0], k[1], k[2]);
                if i == 8 {
                    b.edge(p, q);
                }
                b.edge(r, p);
                b.edge(r, q);
                b.arm(p, l);
                b.arm(q, l);
            }
            // Triangle {p, q, r}, a vertex s on p, pendant arm on s.
            9 => {
                let k = b.vertices(4);
                let (p, q, r, s) = (k[0], k[1], k[2], k[3]);
                b.edges(&[(p, q), (r, p), (r, q), (s, p)]);
                b.arm(s, l);
            }
            // Double star.
            11 => {
                let (x, y) = (b.vertex(), b.vertex());
                b.edge(x, y);
                b.arm(x, l);
                b.arm(y, l);
            }
            _ => return Err(invalid(format!("unknown fixture D{i}"))),
        },
    }
    b.finish()
}

#[derive(Default)]
struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }
    fn vertices(&mut self, k: usize) -> Vec<usize> {
        (0..k).map(|_| self.vertex()).collect()
    }
    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }
    fn edges(&mut self, e: &[(usize, usize)]) {
        self.edges.extend_from_slice(e);
    }
    fn clique(&mut self, vs: &[usize]) {
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                self.edge(u, v);
            }
        }
    }
    fn arm(&mut self, hub: usize, len: usize) {
        for _ in 0..len {
            let v = self.vertex();
            self.edge(hub, v);
        }
    }
    fn finish(self) -> Result<Graph> {
        Graph::from_edges(self.n, &self.edges)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        match self {
            Complete(n) => write!(f, "K{n}"),
            Empty(n) => write!(f, "E{n}"),
            Path(n) => write!(f, "P{n}"),
            Cycle(n) => write!(f, "C{n}"),
            Star(s) => write!(f, "K1,{s}"),
            CompleteBipartite(s, t) => write!(f, "K{{{s},{t}}}"),
            CompleteMultipartite(p) => {
                let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                write!(f, "K{{{}}}", parts.join(","))
            }
            ChordedCycle(k) => write!(f, "C{k}+"),
            Fan(k) => write!(f, "V{k}"),
            Friendship(k) => write!(f, "F{k}"),
            Book(k) => write!(f, "B{k}"),
            Wheel(k) => write!(f, "W{k}"),
            Rst(s, t) => write!(f, "R{{{s},{t}}}"),
            KkJoinIndep(k, b) => write!(f, "ext{{k={k},b={b}}}"),
            Extremal { k, m } => write!(f, "ext{{k={k},m={m}}}"),
            Fixture { name, arm: None } => write!(f, "fixture:{name}"),
            Fixture { name, arm: Some(l) } => write!(f, "fixture:{name}{{l={l}}}"),
        }
    }
}

fn parse_num(input: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::parse(input, format!("`{s}` is not a non-negative integer")))
}

fn parse_list(input: &str, s: &str) -> Result<Vec<usize>> {
    s.split(',').map(|p| parse_num(input, p)).collect()
}

/// Parses `key=value` pairs from `{k=3,m=33}`-style bodies.
fn parse_kv(input: &str, body: &str) -> Result<Vec<(String, usize)>> {
    body.split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::parse(input, format!("expected key=value, got `{kv}`")))?;
            Ok((k.trim().to_string(), parse_num(input, v)?))
        })
        .collect()
}

fn braced<'a>(input: &str, s: &'a str) -> Result<&'a str> {
    s.strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::parse(input, "expected `{...}`"))
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        if let Some(rest) = s.strip_prefix("fixture:") {
            let (name, arm) = match rest.find('{') {
                Some(i) => {
                    let kv = parse_kv(input, braced(input, &rest[i..])?)?;
                    let mut arm = None;
                    for (k, v) in kv {
                        match k.as_str() {
                            "l" => arm = Some(v),
                            _ => return Err(Error::parse(input, format!("unknown key `{k}`"))),
                        }
                    }
                    (&rest[..i], arm)
                }
                None => (rest, None),
            };
            return Ok(FamilySpec::Fixture {
                name: name
                    .parse()
                    .map_err(|_| Error::parse(input, "unknown fixture"))?,
                arm,
            });
        }
        if let Some(rest) = s.strip_prefix("ext") {
            let kv = parse_kv(input, braced(input, rest)?)?;
            let (mut k, mut m, mut b) = (None, None, None);
            for (key, v) in kv {
                match key.as_str() {
                    "k" => k = Some(v),
                    "m" => m = Some(v),
                    "b" => b = Some(v),
                    _ => return Err(Error::parse(input, format!("unknown key `{key}`"))),
                }
            }
            let k = k.ok_or_else(|| Error::parse(input, "missing k"))?;
            return match (m, b) {
                (Some(m), None) => Ok(FamilySpec::Extremal { k, m }),
                (None, Some(b)) => Ok(FamilySpec::KkJoinIndep(k, b)),
                _ => Err(Error::parse(input, "give exactly one of m, b")),
            };
        }
        let mut chars = s.chars();
        let head = chars
            .next()
            .ok_or_else(|| Error::parse(input, "empty family spec"))?;
        let body = chars.as_str();
        if body.is_empty() {
            return Err(Error::parse(input, "missing parameter"));
        }
        let spec = match head {
            'K' if body.starts_with('{') => {
                let parts = parse_list(input, braced(input, body)?)?;
                match parts.as_slice() {
                    [s, t] => FamilySpec::CompleteBipartite(*s, *t),
                    [_, _, _, ..] => FamilySpec::CompleteMultipartite(parts),
                    _ => return Err(Error::parse(input, "need at least two parts")),
                }
            }
            'K' if body.contains(',') => {
                let parts = parse_list(input, body)?;
                match parts.as_slice() {
                    [1, t] => FamilySpec::Star(*t),
                    [s, t] => FamilySpec::CompleteBipartite(*s, *t),
                    _ => FamilySpec::CompleteMultipartite(parts),
                }
            }
            'K' => FamilySpec::Complete(parse_num(input, body)?),
            'E' => FamilySpec::Empty(parse_num(input, body)?),
            'P' => FamilySpec::Path(parse_num(input, body)?),
            'C' => match body.strip_suffix('+') {
                Some(k) => FamilySpec::ChordedCycle(parse_num(input, k)?),
                None => FamilySpec::Cycle(parse_num(input, body)?),
            },
            'V' => FamilySpec::Fan(parse_num(input, body)?),
            'F' => FamilySpec::Friendship(parse_num(input, body)?),
            'B' => FamilySpec::Book(parse_num(input, body)?),
            'W' => FamilySpec::Wheel(parse_num(input, body)?),
            'R' => {
                let parts = parse_list(input, braced(input, body)?)?;
                match parts.as_slice() {
                    [s, t] => FamilySpec::Rst(*s, *t),
                    _ => return Err(Error::parse(input, "R{s,t} takes two parameters")),
                }
            }
            _ => return Err(Error::parse(input, "unknown family")),
        };
        Ok(spec)
    }
}
