//! Exhaustive scans of pattern-free graphs against spectral bounds, plus the auxiliary checks
//! used in the extremal arguments: the eigen identity at the extremal vertex, the η
//! functionals of neighbourhood components, edge rotations and the matching-number edge bound.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::enumeration::{
    self, canonical_form, canonical_graph, write_graph6, CanonicalForm, EnumSpec,
};
use crate::error::{Error, Result};
use crate::families;
use crate::graph::{Graph, VertexSet};
use crate::patterns::{self, Pattern};
use crate::spectral::{self, bn_check, bound_value, spectral_radius, BoundKind};

/// Graphs within this distance of the maximum are collected as argmax candidates.
pub const NEAR_MAX: f64 = 1e-8;
/// Slack before `λ > bound` counts as a violation.
pub const BOUND_SLACK: f64 = 1e-9;

/// Connected graphs per edge count with their spectral radii, computed once and shared by
/// every scan run against the catalog.
#[derive(Default)]
pub struct Catalog {
    cache: Mutex<HashMap<usize, Arc<Vec<Entry>>>>,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub graph: Graph,
    pub lambda: f64,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn connected(&self, m: usize) -> Result<Arc<Vec<Entry>>> {
        if let Some(hit) = self.cache.lock().expect("catalog lock").get(&m) {
            return Ok(hit.clone());
        }
        let graphs = enumeration::collect(&EnumSpec::connected(m))?;
        let entries: Result<Vec<Entry>> = graphs
            .into_par_iter()
            .map(|graph| {
                let lambda = spectral_radius(&graph)?.lambda;
                Ok(Entry { graph, lambda })
            })
            .collect();
        let entries = Arc::new(entries?);
        self.cache
            .lock()
            .expect("catalog lock")
            .insert(m, entries.clone());
        Ok(entries)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Assert,
    ReportOnly,
}

/// Graphs expected to attain the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prediction {
    /// `K_k ∨ ((m − C(k,2))/k) K1`, when integral.
    Join { k: usize },
    /// Every `K_{s,t}` with `st = m`.
    CompleteBipartite,
    /// `K_{t,…,t}` with `r` parts, when `m = C(r,2) t²`.
    RegularCompleteMultipartite { r: usize },
}

impl Prediction {
    /// The predicted graphs with exactly `m` edges (possibly none).
    pub fn graphs(&self, m: usize) -> Result<Vec<Graph>> {
        match *self {
            Prediction::Join { k } => {
                let clique = k * k.saturating_sub(1) / 2;
                if k == 0 || m < clique || !(m - clique).is_multiple_of(k) {
                    return Ok(vec![]);
                }
                let b = (m - clique) / k;
                if k + b > crate::graph::MAX_VERTICES {
                    return Ok(vec![]);
                }
                Ok(vec![families::clique_join_independent(k, b)?])
            }
            Prediction::CompleteBipartite => (1..=m)
                .filter(|s| m.is_multiple_of(*s) && *s <= m / s)
                .filter(|s| s + m / s <= crate::graph::MAX_VERTICES)
                .map(|s| families::complete_multipartite(&[s, m / s]))
                .collect(),
            Prediction::RegularCompleteMultipartite { r } => {
                let pairs = r * r.saturating_sub(1) / 2;
                if pairs == 0 || !m.is_multiple_of(pairs) {
                    return Ok(vec![]);
                }
                let t2 = m / pairs;
                let t = (t2 as f64).sqrt().round() as usize;
                if t * t != t2 || r * t > crate::graph::MAX_VERTICES {
                    return Ok(vec![]);
                }
                Ok(vec![families::complete_multipartite(&vec![t; r])?])
            }
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Join { k } => write!(f, "k={k}"),
            Prediction::CompleteBipartite => write!(f, "bipartite"),
            Prediction::RegularCompleteMultipartite { r } => write!(f, "multipartite:{r}"),
        }
    }
}

impl FromStr for Prediction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let int = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| Error::parse(s, "expected an integer parameter"))
        };
        match s.split_once(['=', ':']) {
            Some(("k", k)) => {
                let k = int(k)?;
                if k == 0 {
                    return Err(Error::parse(s, "k must be >= 1"));
                }
                Ok(Prediction::Join { k })
            }
            Some(("multipartite", r)) => {
                let r = int(r)?;
                if r < 2 {
                    return Err(Error::parse(s, "r must be >= 2"));
                }
                Ok(Prediction::RegularCompleteMultipartite { r })
            }
            None if s == "bipartite" => Ok(Prediction::CompleteBipartite),
            _ => Err(Error::parse(
                s,
                "expected k=<int>, bipartite or multipartite:<r>",
            )),
        }
    }
}

impl Serialize for Prediction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone)]
pub struct ScanSpec {
    pub forbid: Pattern,
    pub bound: BoundKind,
    pub m_range: RangeInclusive<usize>,
    pub prediction: Option<Prediction>,
    pub mode: Mode,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub forbid: String,
    pub bound: String,
    pub m_from: usize,
    pub m_to: usize,
    pub prediction: Option<Prediction>,
    pub mode: Mode,
    pub records: Vec<MRecord>,
}

/// Scan results for one edge count.
#[derive(Debug, Clone, Serialize)]
pub struct MRecord {
    pub m: usize,
    /// Connected graphs with `m` edges.
    pub graphs_scanned: usize,
    /// Those among them free of the pattern.
    pub free_count: usize,
    pub max_lambda: Option<f64>,
    /// `None` where the bound formula is undefined.
    pub bound: Option<f64>,
    /// `bound − max_lambda`.
    pub margin: Option<f64>,
    /// Canonical graph6 of every free graph within [`NEAR_MAX`] of the maximum, sorted by
    /// canonical form.
    pub argmax: Vec<String>,
    /// The bound is attained (within [`NEAR_MAX`]) by a graph isomorphic to a predicted one.
    pub equality_achieved: bool,
    /// Whether the classes attaining the bound are exactly the predicted ones. `None` without
    /// a prediction.
    pub extremal_matches_prediction: Option<bool>,
    /// The maximum is attained by a single isomorphism class.
    pub uniqueness: bool,
    pub predicted: Vec<PredictionCheck>,
    /// Failures recorded instead of raised (report-only mode).
    pub violations: Vec<String>,
}

/// A predicted extremal graph checked directly, without enumeration.
#[derive(Debug, Clone, Serialize)]
pub struct PredictionCheck {
    pub m: usize,
    pub graph6: String,
    pub free: bool,
    pub lambda: f64,
    pub bound: Option<f64>,
    /// `|λ − bound|`.
    pub gap: Option<f64>,
}

/// Checks the predicted graphs at `m`: pattern-freeness and distance to the bound.
pub fn check_prediction(
    forbid: &Pattern,
    bound: BoundKind,
    prediction: Prediction,
    m: usize,
) -> Result<Vec<PredictionCheck>> {
    let b = bound_value(bound, m).ok();
    prediction
        .graphs(m)?
        .into_iter()
        .map(|g| {
            let lambda = spectral_radius(&g)?.lambda;
            Ok(PredictionCheck {
                m,
                graph6: graph6_or_size(&canonical_graph(&g)),
                free: patterns::is_free(&g, forbid)?,
                lambda,
                bound: b,
                gap: b.map(|b| (lambda - b).abs()),
            })
        })
        .collect()
}

fn graph6_or_size(g: &Graph) -> String {
    write_graph6(g).unwrap_or_else(|_| format!("<n={}, m={}>", g.n(), g.m()))
}

/// Scans every connected graph with `m` edges, for each `m` in the range.
///
/// In assert mode the first failure is returned as [`Error::BoundViolation`]: a free graph
/// above the bound, or (with a prediction) a class attaining the bound that was not
/// predicted. Report-only mode records the same findings in [`MRecord::violations`].
pub fn scan(spec: &ScanSpec, catalog: &Catalog) -> Result<ScanReport> {
    spec.forbid.graph()?;
    let mut records = Vec::new();
    for m in spec.m_range.clone() {
        records.push(scan_m(spec, catalog, m)?);
    }
    Ok(ScanReport {
        forbid: spec.forbid.to_string(),
        bound: spec.bound.to_string(),
        m_from: *spec.m_range.start(),
        m_to: *spec.m_range.end(),
        prediction: spec.prediction,
        mode: spec.mode,
        records,
    })
}

fn scan_m(spec: &ScanSpec, catalog: &Catalog, m: usize) -> Result<MRecord> {
    let entries = catalog.connected(m)?;
    let flags: Result<Vec<bool>> = entries
        .par_iter()
        .map(|e| patterns::is_free(&e.graph, &spec.forbid))
        .collect();
    let free: Vec<&Entry> = entries
        .iter()
        .zip(flags?)
        .filter_map(|(e, f)| f.then_some(e))
        .collect();
    let bound = bound_value(spec.bound, m).ok();
    let max_lambda = free.iter().map(|e| e.lambda).reduce(f64::max);
    let margin = bound.zip(max_lambda).map(|(b, l)| b - l);

    let mut argmax: Vec<(CanonicalForm, Graph)> = match max_lambda {
        Some(max) => free
            .iter()
            .filter(|e| e.lambda >= max - NEAR_MAX)
            .map(|e| (canonical_form(&e.graph), canonical_graph(&e.graph)))
            .collect(),
        None => vec![],
    };
    argmax.sort_by(|a, b| a.0.cmp(&b.0));

    let predicted_forms: BTreeSet<CanonicalForm> = match spec.prediction {
        Some(p) => p.graphs(m)?.iter().map(canonical_form).collect(),
        None => BTreeSet::new(),
    };
    let at_bound: BTreeSet<CanonicalForm> = match margin {
        Some(margin) if margin <= NEAR_MAX => argmax.iter().map(|(f, _)| f.clone()).collect(),
        _ => BTreeSet::new(),
    };
    let equality_achieved = at_bound.intersection(&predicted_forms).next().is_some();
    let extremal_matches_prediction = spec.prediction.map(|_| at_bound == predicted_forms);
    let predicted = match spec.prediction {
        Some(p) => check_prediction(&spec.forbid, spec.bound, p, m)?,
        None => vec![],
    };

    let mut violations = Vec::new();
    if let Some(b) = bound {
        let worst = free
            .iter()
            .filter(|e| e.lambda > b + BOUND_SLACK)
            .max_by(|x, y| x.lambda.total_cmp(&y.lambda));
        if let Some(w) = worst {
            let count = free.iter().filter(|e| e.lambda > b + BOUND_SLACK).count();
            violations.push(Violation {
                counterexample: graph6_or_size(&canonical_graph(&w.graph)),
                detail: format!(
                    "{count} free graph(s) exceed the bound; worst lambda {:.12} > {:.12}",
                    w.lambda, b
                ),
            });
        }
    }
    if spec.prediction.is_some() {
        for (form, g) in &argmax {
            if at_bound.contains(form) && !predicted_forms.contains(form) {
                violations.push(Violation {
                    counterexample: graph6_or_size(g),
                    detail: "bound attained by a class outside the prediction".into(),
                });
            }
        }
    }
    if spec.mode == Mode::Assert {
        if let Some(v) = violations.first() {
            return Err(Error::BoundViolation {
                m,
                counterexample: v.counterexample.clone(),
                detail: v.detail.clone(),
            });
        }
    }

    Ok(MRecord {
        m,
        graphs_scanned: entries.len(),
        free_count: free.len(),
        max_lambda,
        bound,
        margin,
        uniqueness: argmax.len() == 1,
        argmax: argmax.iter().map(|(_, g)| graph6_or_size(g)).collect(),
        equality_achieved,
        extremal_matches_prediction,
        predicted,
        violations: violations
            .into_iter()
            .map(|v| format!("{} ({})", v.detail, v.counterexample))
            .collect(),
    })
}

struct Violation {
    counterexample: String,
    detail: String,
}

impl ScanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per edge count; list fields are joined with spaces.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
        w.write_record([
            "forbid",
            "bound_kind",
            "m",
            "graphs_scanned",
            "free_count",
            "max_lambda",
            "bound",
            "margin",
            "equality_achieved",
            "extremal_matches_prediction",
            "uniqueness",
            "argmax",
            "violations",
        ])
        .map_err(csv_err)?;
        // `+ 0.0` turns -0.0 into 0.0
        let opt = |x: Option<f64>| x.map(|v| format!("{:.12}", v + 0.0)).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                self.forbid.clone(),
                self.bound.clone(),
                r.m.to_string(),
                r.graphs_scanned.to_string(),
                r.free_count.to_string(),
                opt(r.max_lambda),
                opt(r.bound),
                opt(r.margin),
                r.equality_achieved.to_string(),
                r.extremal_matches_prediction
                    .map(|b| b.to_string())
                    .unwrap_or_default(),
                r.uniqueness.to_string(),
                r.argmax.join(" "),
                r.violations.join("; "),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| csv_err(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

/// The identity `λ² x_u = |U| x_u + Σ_{U} d_U(u) x_u + Σ_{W} d_U(w) x_w` at the extremal
/// vertex `u`, where `U = N(u)` and `W` is everything outside `N[u]`.
#[derive(Debug, Clone, Serialize)]
pub struct EigenAudit {
    pub center: usize,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn audit_eigen_identity(g: &Graph) -> Result<EigenAudit> {
    require_connected(g)?;
    let sr = spectral_radius(g)?;
    let x = &sr.perron;
    let center = sr.extremal_vertex();
    let part = g.neighborhood_partition(center);
    let d_u = |v: usize| g.neighbors(v).intersection(part.u).len() as f64;
    let lhs = sr.lambda * sr.lambda * x[center];
    let rhs = part.u.len() as f64 * x[center]
        + part.u.iter().map(|u| d_u(u) * x[u]).sum::<f64>()
        + part.w.iter().map(|w| d_u(w) * x[w]).sum::<f64>();
    Ok(EigenAudit {
        center,
        lambda: sr.lambda,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

fn require_connected(g: &Graph) -> Result<()> {
    if g.n() == 0 || !g.is_connected() {
        return Err(Error::InvalidParameter("graph must be connected".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Triangle,
    /// `K_{1,s}` for some `s ≥ 1`, including `K2`.
    Star,
    Other,
}

pub fn component_kind(h: &Graph) -> ComponentKind {
    let n = h.n();
    if n == 3 && h.m() == 3 {
        ComponentKind::Triangle
    } else if n >= 2 && h.m() == n - 1 && h.max_degree() == n - 1 {
        ComponentKind::Star
    } else {
        ComponentKind::Other
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaComponent {
    pub vertices: Vec<usize>,
    pub edges: usize,
    pub kind: ComponentKind,
    pub eta1: f64,
    pub eta2: f64,
}

/// η functionals of the non-trivial components of `G[N(center)]`.
#[derive(Debug, Clone, Serialize)]
pub struct EtaReport {
    pub center: usize,
    pub components: Vec<EtaComponent>,
}

/// `η₁(H) = Σ (d_H(u) − 1) w_u − e(H)` and `η₂(H) = Σ (d_H(u) − 2) w_u − e(H)`, with `w`
/// indexed by the vertices of `h`.
pub fn eta_functionals(h: &Graph, weights: &[f64]) -> Result<(f64, f64)> {
    validate_weights(weights, h.n())?;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for (v, &w) in weights.iter().enumerate() {
        let d = h.degree(v) as f64;
        s1 += (d - 1.0) * w;
        s2 += (d - 2.0) * w;
    }
    let e = h.m() as f64;
    Ok((s1 - e, s2 - e))
}

fn validate_weights(w: &[f64], n: usize) -> Result<()> {
    if w.len() != n {
        return Err(Error::InvalidWeights(format!(
            "expected {n} weights, got {}",
            w.len()
        )));
    }
    if let Some((i, x)) = w.iter().enumerate().find(|(_, &x)| !(x > 0.0 && x <= 1.0)) {
        return Err(Error::InvalidWeights(format!(
            "weight {x} at vertex {i} outside (0, 1]"
        )));
    }
    Ok(())
}

/// η report at the extremal vertex. Without weights, `G` must be connected and the Perron
/// ratios `x_u / x_{u*}` are used.
pub fn compute_eta(g: &Graph, weights: Option<&[f64]>) -> Result<EtaReport> {
    match weights {
        Some(w) => {
            validate_weights(w, g.n())?;
            // The extremal vertex is the first one of maximal weight.
            let max = w.iter().copied().fold(f64::MIN, f64::max);
            let center = w.iter().position(|&x| x == max).unwrap_or(0);
            compute_eta_at(g, center, Some(w))
        }
        None => {
            require_connected(g)?;
            let sr = spectral_radius(g)?;
            compute_eta_at(g, sr.extremal_vertex(), None)
        }
    }
}

/// η report at a chosen centre. Without weights the Perron ratios relative to `center` are
/// used; they must then lie in (0, 1].
pub fn compute_eta_at(g: &Graph, center: usize, weights: Option<&[f64]>) -> Result<EtaReport> {
    if center >= g.n() {
        return Err(Error::InvalidParameter(format!("no vertex {center}")));
    }
    let owned;
    let w: &[f64] = match weights {
        Some(w) => w,
        None => {
            require_connected(g)?;
            let sr = spectral_radius(g)?;
            let xc = sr.perron[center];
            owned = sr.perron.iter().map(|x| x / xc).collect::<Vec<_>>();
            &owned
        }
    };
    validate_weights(w, g.n())?;
    let part = g.neighborhood_partition(center);
    let mut components = Vec::new();
    for comp in part.nontrivial_components() {
        let h = g.induced_subgraph(comp);
        let local: Vec<f64> = comp.iter().map(|v| w[v]).collect();
        let (eta1, eta2) = eta_functionals(&h, &local)?;
        components.push(EtaComponent {
            vertices: comp.to_vec(),
            edges: h.m(),
            kind: component_kind(&h),
            eta1,
            eta2,
        });
    }
    Ok(EtaReport { center, components })
}

/// `G − {vj v : v ∈ S} + {vi v : v ∈ S}`.
pub fn rotate_edges(g: &Graph, vi: usize, vj: usize, s: VertexSet) -> Result<Graph> {
    let n = g.n();
    if vi >= n || vj >= n {
        return Err(Error::InvalidRotation(format!(
            "vertex out of range (n = {n})"
        )));
    }
    if vi == vj {
        return Err(Error::InvalidRotation("vi and vj coincide".into()));
    }
    if s.is_empty() {
        return Err(Error::InvalidRotation("S is empty".into()));
    }
    if s.contains(vi) {
        return Err(Error::InvalidRotation("vi belongs to S".into()));
    }
    let allowed = g.neighbors(vj).difference(g.neighbors(vi));
    if !s.is_subset(allowed) {
        return Err(Error::InvalidRotation(
            "S is not contained in N(vj) \\ N(vi)".into(),
        ));
    }
    let mut out = g.clone();
    for v in s.iter() {
        out = out.without_edge(vj, v).with_edge(vi, v);
    }
    Ok(out)
}

/// `max{C(2k+1, 2), C(k, 2) + (n − k)k}`: the most edges an `n`-vertex graph with matching
/// number at most `k` can have.
pub fn erdos_gallai_bound(n: u64, k: u64) -> u64 {
    let (n, k) = (n as i128, k as i128);
    let a = (2 * k + 1) * (2 * k) / 2;
    let b = k * (k - 1) / 2 + (n - k) * k;
    a.max(b).max(0) as u64
}

/// Outcome of a lemma-style sweep.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub cases: usize,
    /// Cases outside the vertex cap.
    pub skipped: usize,
    /// Smallest `rhs − lhs` over asserted cases.
    pub min_gap: Option<f64>,
    pub min_gap_at: Option<String>,
    /// Cases that reach or exceed the right-hand side within the tolerance window.
    pub equality: Vec<String>,
    /// Unasserted cases where the inequality fails.
    pub reported: Vec<String>,
}

impl LemmaReport {
    fn new(lemma: impl Into<String>) -> Self {
        LemmaReport {
            lemma: lemma.into(),
            cases: 0,
            skipped: 0,
            min_gap: None,
            min_gap_at: None,
            equality: vec![],
            reported: vec![],
        }
    }

    fn record_gap(&mut self, gap: f64, at: impl FnOnce() -> String) {
        if self.min_gap.is_none_or(|g| gap < g) {
            self.min_gap = Some(gap);
            self.min_gap_at = Some(at());
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Which `(s, t)` pairs the `R_{s,t}` sweep covers.
#[derive(Debug, Clone, Copy)]
pub struct RstDomain {
    pub s_min: usize,
    pub t_min: usize,
    /// Smallest edge count checked.
    pub m_min: usize,
}

impl Default for RstDomain {
    fn default() -> Self {
        RstDomain {
            s_min: 1,
            t_min: 1,
            m_min: 1,
        }
    }
}

/// `λ(R_{s,t}) < (1 + √(4m − 3))/2 − 1e−10` for `m = 6s + t ≤ m_max`. Pairs with `t = 0` are
/// evaluated but only reported, since `R_{1,0} = K4` already exceeds the bound. So does
/// `R_{1,1}` (m = 7), which fails the assertion unless `m_min ≥ 8`.
pub fn check_rst_lemma(m_max: usize, domain: RstDomain) -> Result<LemmaReport> {
    if m_max > 300 {
        return Err(Error::SizeLimitExceeded(format!("m_max {m_max} > 300")));
    }
    let mut report = LemmaReport::new("rst");
    let s_min = domain.s_min.max(1);
    for s in s_min..=m_max / 6 {
        for t in domain.t_min..=(m_max - 6 * s) {
            let m = 6 * s + t;
            if m < domain.m_min {
                continue;
            }
            if 1 + 3 * s + t > crate::graph::MAX_VERTICES {
                report.skipped += 1;
                continue;
            }
            let g = families::make(&families::FamilySpec::Rst(s, t))?;
            let lambda = spectral_radius(&g)?.lambda;
            let bound = bound_value(BoundKind::Zls, m)?;
            let gap = bound - lambda;
            let label = || format!("R{{{s},{t}}} (m = {m})");
            if t == 0 {
                if gap <= 1e-10 {
                    report.reported.push(format!(
                        "{}: lambda {lambda:.10} >= bound {bound:.10}",
                        label()
                    ));
                }
                continue;
            }
            report.cases += 1;
            report.record_gap(gap, label);
            if gap <= 1e-10 {
                return Err(Error::BoundViolation {
                    m,
                    counterexample: graph6_or_size(&g),
                    detail: format!("lambda(R{{{s},{t}}}) = {lambda:.12} not below {bound:.12}"),
                });
            }
        }
    }
    Ok(report)
}

/// `λ₁² + λ₂² ≤ 2m(1 − 1/r)` over connected `K_{r+1}`-free graphs of order at least `r + 1`
/// with at most `m_max` edges.
pub fn check_bn(m_max: usize, r: usize, mode: Mode, catalog: &Catalog) -> Result<LemmaReport> {
    if m_max > 10 {
        return Err(Error::SizeLimitExceeded(format!("m_max {m_max} > 10")));
    }
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be >= 2, got {r}")));
    }
    let clique: Pattern = Pattern::Family(families::FamilySpec::Complete(r + 1));
    let mut report = LemmaReport::new(format!("bn:{r}"));
    for m in 1..=m_max {
        let entries = catalog.connected(m)?;
        let checks: Result<Vec<Option<(usize, spectral::BnCheck)>>> = entries
            .par_iter()
            .enumerate()
            .map(|(i, e)| {
                if e.graph.n() < r + 1 || !patterns::is_free(&e.graph, &clique)? {
                    return Ok(None);
                }
                Ok(Some((i, bn_check(&e.graph, r)?)))
            })
            .collect();
        for (i, c) in checks?.into_iter().flatten() {
            report.cases += 1;
            let g = &entries[i].graph;
            let gap = c.rhs - c.lhs;
            let name = || graph6_or_size(&canonical_graph(g));
            report.record_gap(gap, name);
            if gap.abs() <= NEAR_MAX {
                report.equality.push(name());
            }
            if !c.holds {
                let detail = format!("lambda1^2 + lambda2^2 = {:.12} > {:.12}", c.lhs, c.rhs);
                match mode {
                    Mode::Assert => {
                        return Err(Error::BoundViolation {
                            m,
                            counterexample: name(),
                            detail,
                        })
                    }
                    Mode::ReportOnly => report.reported.push(format!("{} ({detail})", name())),
                }
            }
        }
    }
    Ok(report)
}

/// Every connected graph with `m ≤ m_max` edges has at most `erdos_gallai_bound(n, ν)` edges,
/// with equality only for `K_{2ν+1}` and `K_ν ∨ (n − ν)K1`.
pub fn check_eg(m_max: usize, catalog: &Catalog) -> Result<LemmaReport> {
    let mut report = LemmaReport::new("eg");
    for m in 1..=m_max {
        for e in catalog.connected(m)?.iter() {
            let g = &e.graph;
            let n = g.n();
            let k = patterns::max_matching_size(g);
            let bound = erdos_gallai_bound(n as u64, k as u64) as usize;
            report.cases += 1;
            report.record_gap((bound as f64) - (m as f64), || graph6_or_size(g));
            let name = || graph6_or_size(&canonical_graph(g));
            if m > bound {
                return Err(Error::BoundViolation {
                    m,
                    counterexample: name(),
                    detail: format!("{m} edges exceed {bound} (n = {n}, matching number {k})"),
                });
            }
            if m == bound {
                let extremal = (n == 2 * k + 1
                    && enumeration::are_isomorphic(g, &families::complete(n)?))
                    || (k <= n
                        && enumeration::are_isomorphic(
                            g,
                            &families::clique_join_independent(k, n - k)?,
                        ));
                if !extremal {
                    return Err(Error::BoundViolation {
                        m,
                        counterexample: name(),
                        detail: "equality attained outside the extremal families".into(),
                    });
                }
                report.equality.push(name());
            }
        }
    }
    Ok(report)
}

/// Random connected graph on `n` vertices: a random recursive tree plus each remaining pair
/// with probability `p`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n).expect("within vertex cap");
    for v in 1..n {
        let u = rng.random_range(0..v);
        g = g.with_edge(u, v);
    }
    for j in 1..n {
        for i in 0..j {
            if !g.has_edge(i, j) && rng.random_bool(p) {
                g = g.with_edge(i, j);
            }
        }
    }
    g
}

/// Random valid rotations `(G, vi, vj, S)` with `x_i ≥ x_j` on connected graphs of order at
/// most 12; each must strictly increase `λ` by more than `1e-12`.
pub fn check_rotation(trials: usize, seed: u64) -> Result<LemmaReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LemmaReport::new("rotation");
    while report.cases < trials {
        let n = rng.random_range(3..=12);
        let p = rng.random_range(0.05..0.6);
        let g = random_connected_graph(&mut rng, n, p);
        let sr = spectral_radius(&g)?;
        let vi = rng.random_range(0..n);
        let vj = rng.random_range(0..n);
        if vi == vj || sr.perron[vi] < sr.perron[vj] {
            continue;
        }
        let allowed: Vec<usize> = g
            .neighbors(vj)
            .difference(g.neighbors(vi))
            .iter()
            .filter(|&v| v != vi)
            .collect();
        if allowed.is_empty() {
            continue;
        }
        let s = VertexSet::from_iter(allowed.iter().copied().filter(|_| rng.random_bool(0.5)));
        let s = if s.is_empty() {
            VertexSet::singleton(allowed[rng.random_range(0..allowed.len())])
        } else {
            s
        };
        let h = rotate_edges(&g, vi, vj, s)?;
        let after = spectral_radius(&h)?.lambda;
        let gain = after - sr.lambda;
        report.cases += 1;
        report.record_gap(gain, || {
            format!(
                "{} rotate {vj}->{vi} S={:?}",
                graph6_or_size(&g),
                s.to_vec()
            )
        });
        if gain <= 1e-12 {
            return Err(Error::BoundViolation {
                m: g.m(),
                counterexample: graph6_or_size(&g),
                detail: format!(
                    "rotating S = {:?} from {vj} to {vi} changed lambda by {gain:e}",
                    s.to_vec()
                ),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;

    fn mk(s: &str) -> Graph {
        s.parse::<FamilySpec>().unwrap().build().unwrap()
    }

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn scan_v5_odd_and_even() {
        let cat = Catalog::new();
        let spec = ScanSpec {
            forbid: pat("V5"),
            bound: BoundKind::Zls,
            m_range: 8..=9,
            prediction: Some(Prediction::Join { k: 2 }),
            mode: Mode::Assert,
        };
        let r = scan(&spec, &cat).unwrap();
        let m8 = &r.records[0];
        assert!(!m8.equality_achieved);
        assert!(m8.margin.unwrap() > 1e-6);
        let m9 = &r.records[1];
        assert!(m9.equality_achieved && m9.uniqueness);
        assert_eq!(m9.extremal_matches_prediction, Some(true));
        let expected = write_graph6(&canonical_graph(&mk("ext{k=2,m=9}"))).unwrap();
        assert_eq!(m9.argmax, vec![expected]);
        assert!((m9.max_lambda.unwrap() - (1.0 + 33f64.sqrt()) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn scan_triangle_free_nosal() {
        let cat = Catalog::new();
        let spec = ScanSpec {
            forbid: pat("K3"),
            bound: BoundKind::Nosal,
            m_range: 6..=6,
            prediction: Some(Prediction::CompleteBipartite),
            mode: Mode::Assert,
        };
        let r = scan(&spec, &cat).unwrap();
        let rec = &r.records[0];
        assert_eq!(rec.argmax.len(), 2);
        assert_eq!(rec.extremal_matches_prediction, Some(true));
        assert!(!rec.uniqueness);
    }

    #[test]
    fn assert_mode_raises() {
        let cat = Catalog::new();
        let spec = ScanSpec {
            forbid: pat("V5"),
            bound: BoundKind::Nosal,
            m_range: 3..=3,
            prediction: None,
            mode: Mode::Assert,
        };
        let e = scan(&spec, &cat).unwrap_err();
        assert!(e.is_violation());
        let report_only = ScanSpec {
            mode: Mode::ReportOnly,
            ..spec
        };
        let r = scan(&report_only, &cat).unwrap();
        assert_eq!(r.records[0].violations.len(), 1);
    }

    #[test]
    fn undefined_bound_is_none() {
        let cat = Catalog::new();
        let spec = ScanSpec {
            forbid: pat("F3"),
            bound: BoundKind::F3,
            m_range: 1..=2,
            prediction: Some(Prediction::Join { k: 3 }),
            mode: Mode::ReportOnly,
        };
        let r = scan(&spec, &cat).unwrap();
        assert_eq!(r.records[0].bound, None);
        assert_eq!(r.records[0].margin, None);
        assert!(r.records[1].bound.is_some());
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["records"][0]["bound"], serde_json::Value::Null);
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn predictions() {
        assert_eq!(Prediction::Join { k: 2 }.graphs(8).unwrap().len(), 0);
        assert_eq!(Prediction::Join { k: 2 }.graphs(9).unwrap()[0].n(), 6);
        assert_eq!(Prediction::Join { k: 3 }.graphs(3).unwrap()[0], mk("K3"));
        assert_eq!(Prediction::CompleteBipartite.graphs(12).unwrap().len(), 3);
        let r3 = Prediction::RegularCompleteMultipartite { r: 3 };
        assert_eq!(r3.graphs(12).unwrap()[0], mk("K{2,2,2}"));
        assert!(r3.graphs(6).unwrap().is_empty());
        for s in ["k=3", "bipartite", "multipartite:3"] {
            assert_eq!(s.parse::<Prediction>().unwrap().to_string(), s);
        }
        assert!("k=0".parse::<Prediction>().is_err());
    }

    #[test]
    fn eigen_identity_examples() {
        for s in ["ext{k=2,b=4}", "C5", "fixture:G1", "W7", "P2"] {
            let a = audit_eigen_identity(&mk(s)).unwrap();
            assert!(a.residual <= 1e-10, "{s}: {}", a.residual);
        }
        assert!(audit_eigen_identity(&mk("K2").copies(2).unwrap()).is_err());
    }

    #[test]
    fn eta_examples() {
        // Hub joined to a triangle, a star and an edge.
        let body = mk("K3")
            .disjoint_union(&mk("K1,3"))
            .unwrap()
            .disjoint_union(&mk("K2"))
            .unwrap();
        let g = mk("K1").join(&body).unwrap();
        let r = compute_eta(&g, None).unwrap();
        assert_eq!(r.center, 0);
        assert_eq!(r.components.len(), 3);
        let tri = r
            .components
            .iter()
            .find(|c| c.kind == ComponentKind::Triangle)
            .unwrap();
        assert_eq!(tri.eta2, -3.0);
        for c in r
            .components
            .iter()
            .filter(|c| c.kind == ComponentKind::Star)
        {
            assert!(c.eta1 <= -1.0 + 1e-12);
            if c.vertices.len() >= 3 {
                assert!(c.eta2 < -2.0);
            }
        }
        // For K2 the value is -1 - w_a - w_b, which is not below -2 for small weights.
        let (_, eta2) = eta_functionals(&mk("K2"), &[0.25, 0.5]).unwrap();
        assert_eq!(eta2, -1.75);
        let w = vec![1.0; g.n()];
        let unit = compute_eta(&g, Some(&w)).unwrap();
        for c in &unit.components {
            let e = c.edges as f64;
            let v = c.vertices.len() as f64;
            assert_eq!(c.eta1, e - v);
            assert_eq!(c.eta2, e - 2.0 * v);
        }
        let mut bad = w.clone();
        bad[2] = 0.0;
        assert!(matches!(
            compute_eta(&g, Some(&bad)),
            Err(Error::InvalidWeights(_))
        ));
        bad[2] = 1.5;
        assert!(matches!(
            compute_eta(&g, Some(&bad)),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            compute_eta(&g, Some(&w[1..])),
            Err(Error::InvalidWeights(_))
        ));
    }

    #[test]
    fn component_kinds() {
        assert_eq!(component_kind(&mk("K3")), ComponentKind::Triangle);
        assert_eq!(component_kind(&mk("K2")), ComponentKind::Star);
        assert_eq!(component_kind(&mk("K1,5")), ComponentKind::Star);
        assert_eq!(component_kind(&mk("P4")), ComponentKind::Other);
        assert_eq!(component_kind(&mk("C4")), ComponentKind::Other);
    }

    #[test]
    fn rotation_examples() {
        let p4 = mk("P4");
        let before = spectral_radius(&p4).unwrap();
        // Moving d's edge from c to a gives P4 back; the hypothesis x_a >= x_c fails here.
        let g = rotate_edges(&p4, 0, 2, VertexSet::singleton(3)).unwrap();
        assert_eq!(g.m(), 3);
        assert!(before.perron[0] < before.perron[2]);
        assert!(crate::enumeration::are_isomorphic(&g, &p4));
        // With the hypothesis satisfied: move a's edge from b to c (x_c = x_b on P4).
        let h = rotate_edges(&p4, 2, 1, VertexSet::singleton(0)).unwrap();
        assert!(spectral_radius(&h).unwrap().lambda > before.lambda + 1e-12);

        assert!(matches!(
            rotate_edges(&p4, 0, 2, VertexSet::EMPTY),
            Err(Error::InvalidRotation(_))
        ));
        assert!(rotate_edges(&p4, 1, 1, VertexSet::singleton(0)).is_err());
        assert!(rotate_edges(&p4, 0, 2, VertexSet::singleton(1)).is_err());
        let star = mk("K1,4");
        let leaves = VertexSet::from_iter([2, 3, 4]);
        let s = spectral_radius(&star).unwrap();
        assert!(s.perron[0] > s.perron[1]);
        let moved = rotate_edges(&star, 1, 0, leaves).unwrap();
        assert!(crate::enumeration::are_isomorphic(&moved, &star));
        // Hypothesis holds the other way round: leaf 1 has nothing to give, so rotate within
        // the path 1-0-2 after dropping two leaves.
        let p3 = mk("P3");
        let s3 = spectral_radius(&p3).unwrap();
        let k3ish = rotate_edges(&p3, 1, 2, VertexSet::EMPTY);
        assert!(k3ish.is_err());
        assert!(s3.perron[1] >= s3.perron[0]);
    }

    #[test]
    fn rotation_property_small() {
        let r = check_rotation(100, 7).unwrap();
        assert_eq!(r.cases, 100);
        assert!(r.min_gap.unwrap() > 1e-12);
    }

    #[test]
    fn eg_examples() {
        assert_eq!(erdos_gallai_bound(5, 1), 4);
        assert_eq!(erdos_gallai_bound(3, 1), 3);
        for n in 1..10 {
            assert_eq!(erdos_gallai_bound(n, 0), 0);
        }
        let cat = Catalog::new();
        let r = check_eg(7, &cat).unwrap();
        assert!(!r.equality.is_empty());
    }

    #[test]
    fn rst_examples() {
        for (s, t) in [(1, 4), (2, 1)] {
            let g = mk(&format!("R{{{s},{t}}}"));
            let m = 6 * s + t;
            assert_eq!(g.m(), m);
            let l = spectral_radius(&g).unwrap().lambda;
            assert!(l < bound_value(BoundKind::Zls, m).unwrap());
        }
        let e = check_rst_lemma(60, RstDomain::default()).unwrap_err();
        assert!(matches!(e, Error::BoundViolation { m: 7, .. }), "{e}");
        let domain = RstDomain {
            s_min: 1,
            t_min: 0,
            m_min: 8,
        };
        let r = check_rst_lemma(60, domain).unwrap();
        assert!(r.reported.is_empty());
        assert!(r.min_gap.unwrap() > 1e-10);
        assert!(check_rst_lemma(301, RstDomain::default()).is_err());
    }

    #[test]
    fn bn_small() {
        let cat = Catalog::new();
        let r = check_bn(6, 2, Mode::Assert, &cat).unwrap();
        assert!(r.cases > 0);
        assert!(!r.equality.is_empty());
        let r3 = check_bn(6, 3, Mode::ReportOnly, &cat).unwrap();
        assert!(r3.cases > 0);
    }

    #[test]
    fn unit_weight_oracle_on_random_hosts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.random_range(2..=14);
            let g = random_connected_graph(&mut rng, n, 0.3);
            let center = rng.random_range(0..n);
            let w = vec![1.0; n];
            let r = compute_eta_at(&g, center, Some(&w)).unwrap();
            for c in r.components {
                let (e, v) = (c.edges as f64, c.vertices.len() as f64);
                assert_eq!(c.eta2, e - 2.0 * v);
                assert_eq!(c.eta1, e - v);
            }
        }
    }

    #[test]
    fn connected_graphs_suffice_for_the_maximum() {
        use crate::enumeration::{collect, EnumSpec};
        for m in 1..=9 {
            let max = |gs: Vec<Graph>| {
                gs.iter()
                    .map(|g| spectral_radius(g).unwrap().lambda)
                    .fold(0.0, f64::max)
            };
            let all = max(collect(&EnumSpec::all(m)).unwrap());
            let connected = max(collect(&EnumSpec::connected(m)).unwrap());
            assert!((all - connected).abs() < 1e-12, "m = {m}");
        }
    }
}
