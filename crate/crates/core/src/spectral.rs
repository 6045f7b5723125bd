//! Adjacency eigenvalues: spectral radius with Perron vector, the full spectrum, and the
//! closed-form edge-count bounds that spectral radii are compared against.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Iteration cap for the power method.
pub const MAX_POWER_ITERATIONS: usize = 1_000_000;
/// Cap on Jacobi sweeps.
pub const MAX_JACOBI_SWEEPS: usize = 100;
/// Relative residual target: `‖Ax − λx‖∞ ≤ RESIDUAL_TOL · max(1, λ)`.
pub const RESIDUAL_TOL: f64 = 1e-12;
/// Jacobi stops once every off-diagonal entry is below this.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub lambda: f64,
    /// Nonnegative, max entry exactly 1; zero outside the component that attains `lambda`.
    pub perron: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl SpectralResult {
    /// Smallest vertex id carrying the maximal Perron coordinate (coordinates within
    /// `1e-9` of the maximum count as tied).
    pub fn extremal_vertex(&self) -> usize {
        let max = self.perron.iter().copied().fold(f64::MIN, f64::max);
        self.perron
            .iter()
            .position(|&x| x >= max - 1e-9 * max)
            .unwrap_or(0)
    }
}

/// Largest adjacency eigenvalue and its Perron vector.
///
/// Disconnected graphs are solved per component; the first component (by smallest vertex)
/// with the largest eigenvalue supplies the vector.
pub fn spectral_radius(g: &Graph) -> Result<SpectralResult> {
    if g.n() == 0 {
        return Err(Error::InvalidParameter(
            "spectral radius of the null graph".into(),
        ));
    }
    let comps = g.components();
    if comps.len() == 1 {
        return power_iteration(g);
    }
    let mut best: Option<(VertexSet, SpectralResult)> = None;
    let mut iterations = 0;
    for c in comps {
        let r = power_iteration(&g.induced_subgraph(c))?;
        iterations += r.iterations;
        if best
            .as_ref()
            .is_none_or(|(_, b)| r.lambda > b.lambda + 1e-12)
        {
            best = Some((c, r));
        }
    }
    let (support, r) = best.expect("at least one component");
    let mut perron = vec![0.0; g.n()];
    for (x, v) in r.perron.iter().zip(support.iter()) {
        perron[v] = *x;
    }
    Ok(SpectralResult {
        lambda: r.lambda,
        perron,
        residual: r.residual,
        iterations,
    })
}

/// Power iteration on `A + I` from the all-ones vector. Assumes `g` is connected.
fn power_iteration(g: &Graph) -> Result<SpectralResult> {
    let n = g.n();
    if g.m() == 0 {
        // K1
        return Ok(SpectralResult {
            lambda: 0.0,
            perron: vec![1.0; n],
            residual: 0.0,
            iterations: 0,
        });
    }
    let mut x = vec![1.0; n];
    let mut ax = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_POWER_ITERATIONS {
        multiply(g, &x, &mut ax);
        let lambda = dot(&x, &ax) / dot(&x, &x);
        residual = x
            .iter()
            .zip(&ax)
            .map(|(xi, ai)| (ai - lambda * xi).abs())
            .fold(0.0, f64::max);
        if residual <= RESIDUAL_TOL * lambda.max(1.0) {
            return Ok(SpectralResult {
                lambda,
                perron: x,
                residual,
                iterations: it,
            });
        }
        // x <- (A + I) x, rescaled to max entry 1
        let mut max = 0.0f64;
        for (xi, ai) in x.iter_mut().zip(&ax) {
            *xi += ai;
            max = max.max(*xi);
        }
        for xi in x.iter_mut() {
            *xi /= max;
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: MAX_POWER_ITERATIONS,
        residual,
    })
}

fn multiply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for (v, o) in out.iter_mut().enumerate() {
        *o = g.neighbors(v).iter().map(|u| x[u]).sum();
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All adjacency eigenvalues, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Second largest eigenvalue (not second largest in modulus).
    pub fn lambda2(&self) -> Option<f64> {
        self.eigenvalues.get(1).copied()
    }
}

/// Full spectrum by cyclic Jacobi rotations on the dense adjacency matrix.
pub fn full_spectrum(g: &Graph) -> Result<Spectrum> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParameter("spectrum of the null graph".into()));
    }
    let mut a = vec![vec![0.0f64; n]; n];
    for (i, j) in g.edges() {
        a[i][j] = 1.0;
        a[j][i] = 1.0;
    }
    let mut off = max_off_diagonal(&a);
    let mut sweeps = 0;
    while off >= OFF_DIAGONAL_TOL {
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::ConvergenceFailure {
                iterations: sweeps,
                residual: off,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
        off = max_off_diagonal(&a);
    }
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(Spectrum { eigenvalues })
}

fn max_off_diagonal(a: &[Vec<f64>]) -> f64 {
    let mut m = 0.0f64;
    for (i, row) in a.iter().enumerate() {
        for &v in &row[i + 1..] {
            m = m.max(v.abs());
        }
    }
    m
}

/// Annihilates `a[p][q]` with a plane rotation.
#[allow(clippy::needless_range_loop)]
fn rotate(a: &mut [Vec<f64>], p: usize, q: usize) {
    let apq = a[p][q];
    if apq == 0.0 {
        return;
    }
    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.len();
    for k in 0..n {
        let akp = a[k][p];
        let akq = a[k][q];
        a[k][p] = c * akp - s * akq;
        a[k][q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[p][k];
        let aqk = a[q][k];
        a[p][k] = c * apk - s * aqk;
        a[q][k] = s * apk + c * aqk;
    }
    a[p][q] = 0.0;
    a[q][p] = 0.0;
}

/// Closed-form upper bounds on `λ` in terms of the edge count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundKind {
    /// `√m` (triangle-free)
    Nosal,
    /// `√(2m(1 − 1/r))` (`K_{r+1}`-free)
    Nikiforov(usize),
    /// `(1 + √(4m − 3)) / 2`
    Zls,
    /// `1 + √(m − 2)`
    F3,
    /// `(k − 1 + √(4m − k² + 1)) / 2`
    Fk(usize),
    /// `√(4m/3)`
    WheelEven,
}

pub fn bound_value(kind: BoundKind, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParameter("bounds need m >= 1".into()));
    }
    let mf = m as f64;
    match kind {
        BoundKind::Nosal => Ok(mf.sqrt()),
        BoundKind::Nikiforov(r) => {
            if r < 2 {
                return Err(Error::InvalidParameter(format!(
                    "Nikiforov bound needs r >= 2, got {r}"
                )));
            }
            Ok((2.0 * mf * (1.0 - 1.0 / r as f64)).sqrt())
        }
        BoundKind::Zls => Ok((1.0 + (4.0 * mf - 3.0).sqrt()) / 2.0),
        BoundKind::F3 => {
            if m < 2 {
                return Err(Error::InvalidParameter("F3 bound needs m >= 2".into()));
            }
            Ok(1.0 + (mf - 2.0).sqrt())
        }
        BoundKind::Fk(k) => {
            if k < 2 {
                return Err(Error::InvalidParameter(format!(
                    "Fk bound needs k >= 2, got {k}"
                )));
            }
            let disc = 4 * m + 1;
            if disc < k * k {
                return Err(Error::InvalidParameter(format!(
                    "Fk bound undefined for k = {k}, m = {m}"
                )));
            }
            Ok((k as f64 - 1.0 + ((disc - k * k) as f64).sqrt()) / 2.0)
        }
        BoundKind::WheelEven => Ok((4.0 * mf / 3.0).sqrt()),
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Nosal => write!(f, "nosal"),
            BoundKind::Nikiforov(r) => write!(f, "nikiforov:{r}"),
            BoundKind::Zls => write!(f, "zls"),
            BoundKind::F3 => write!(f, "f3"),
            BoundKind::Fk(k) => write!(f, "fk:{k}"),
            BoundKind::WheelEven => write!(f, "wheel-even"),
        }
    }
}

impl FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let param = |p: &str| {
            p.parse::<usize>()
                .map_err(|_| Error::parse(s, "bound parameter must be an integer"))
        };
        let kind = match s.split_once(':') {
            None => match s {
                "nosal" => BoundKind::Nosal,
                "zls" => BoundKind::Zls,
                "f3" => BoundKind::F3,
                "wheel-even" => BoundKind::WheelEven,
                _ => return Err(Error::parse(s, "unknown bound")),
            },
            Some(("nikiforov", r)) => BoundKind::Nikiforov(param(r)?),
            Some(("fk", k)) => BoundKind::Fk(param(k)?),
            Some(_) => return Err(Error::parse(s, "unknown bound")),
        };
        match kind {
            BoundKind::Nikiforov(r) if r < 2 => Err(Error::parse(s, "r must be >= 2")),
            BoundKind::Fk(k) if k < 2 => Err(Error::parse(s, "k must be >= 2")),
            _ => Ok(kind),
        }
    }
}

/// `λ₁² + λ₂²` against `2m(1 − 1/r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BnCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn bn_check(g: &Graph, r: usize) -> Result<BnCheck> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be >= 2, got {r}")));
    }
    if g.n() < r + 1 {
        return Err(Error::InvalidParameter(format!(
            "order {} below r + 1 = {}",
            g.n(),
            r + 1
        )));
    }
    let s = full_spectrum(g)?;
    let l1 = s.lambda1();
    let l2 = s.lambda2().unwrap_or(0.0);
    let lhs = l1 * l1 + l2 * l2;
    let rhs = 2.0 * g.m() as f64 * (1.0 - 1.0 / r as f64);
    Ok(BnCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{self, FamilySpec};

    fn mk(s: &str) -> Graph {
        s.parse::<FamilySpec>().unwrap().build().unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn book_apex_graph_radius() {
        // λ² − λ − 8 = 0 from the equitable partition {K2, 4K1}.
        let r = spectral_radius(&mk("ext{k=2,m=9}")).unwrap();
        assert!(close(r.lambda, (1.0 + 33f64.sqrt()) / 2.0, 1e-10));
        assert!(r.residual <= RESIDUAL_TOL * r.lambda);
        assert_eq!(r.perron.iter().copied().fold(0.0, f64::max), 1.0);
        assert!(r.perron.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn star_radius() {
        let r = spectral_radius(&mk("K1,4")).unwrap();
        assert!(close(r.lambda, 2.0, 1e-10));
        assert_eq!(r.extremal_vertex(), 0);
    }

    #[test]
    fn k3_join_ten_radius() {
        let r = spectral_radius(&mk("ext{k=3,m=33}")).unwrap();
        assert!(close(r.lambda, 1.0 + 31f64.sqrt(), 1e-10));
        assert!(close(r.lambda, 6.567764362830022, 1e-10));
    }

    #[test]
    fn drawn_fixtures() {
        let g1 = spectral_radius(&mk("fixture:G1")).unwrap().lambda;
        let g2 = spectral_radius(&mk("fixture:G2")).unwrap().lambda;
        assert!(close(g1, 3.408, 5e-3), "{g1}");
        assert!(close(g2, 3.487, 5e-3), "{g2}");
    }

    #[test]
    fn edgeless_and_disconnected() {
        let r = spectral_radius(&Graph::empty(3).unwrap()).unwrap();
        assert_eq!(r.lambda, 0.0);
        let g = mk("K3").disjoint_union(&mk("K1,4")).unwrap();
        let r = spectral_radius(&g).unwrap();
        assert!(close(r.lambda, 2.0, 1e-10));
        // Triangle comes first and ties with the star; its vector wins.
        assert!(r.perron[..3].iter().all(|&x| x > 0.0));
        assert!(r.perron[3..].iter().all(|&x| x == 0.0));
        assert!(spectral_radius(&Graph::empty(0).unwrap()).is_err());
    }

    #[test]
    fn spectra_examples() {
        let s = full_spectrum(&mk("C4")).unwrap();
        for (a, b) in s.eigenvalues.iter().zip([2.0, 0.0, 0.0, -2.0]) {
            assert!(close(*a, b, 1e-10));
        }
        let s = full_spectrum(&mk("K3")).unwrap();
        for (a, b) in s.eigenvalues.iter().zip([2.0, -1.0, -1.0]) {
            assert!(close(*a, b, 1e-10));
        }
        // Characteristic polynomial of K2,3 is x^3 (x^2 − 6).
        let s = full_spectrum(&mk("K{2,3}")).unwrap();
        let r6 = 6f64.sqrt();
        for (a, b) in s.eigenvalues.iter().zip([r6, 0.0, 0.0, 0.0, -r6]) {
            assert!(close(*a, b, 1e-10));
        }
    }

    #[test]
    fn bounds() {
        assert!(close(
            bound_value(BoundKind::Zls, 9).unwrap(),
            3.3722813232690143,
            1e-12
        ));
        for m in 3..200 {
            let a = bound_value(BoundKind::Fk(3), m).unwrap();
            let b = bound_value(BoundKind::F3, m).unwrap();
            assert!(close(a, b, 1e-12));
            let n = bound_value(BoundKind::Nikiforov(2), m).unwrap();
            assert!(close(n, bound_value(BoundKind::Nosal, m).unwrap(), 1e-12));
            let z = bound_value(BoundKind::Zls, m).unwrap();
            assert!(close(z, bound_value(BoundKind::Fk(2), m).unwrap(), 1e-12));
        }
        assert!(bound_value(BoundKind::F3, 1).is_err());
        assert!(bound_value(BoundKind::Fk(5), 5).is_err());
        assert!(bound_value(BoundKind::Fk(5), 6).is_ok());
        assert!(bound_value(BoundKind::Nosal, 0).is_err());
    }

    #[test]
    fn bound_syntax() {
        for s in ["nosal", "nikiforov:3", "zls", "f3", "fk:4", "wheel-even"] {
            assert_eq!(s.parse::<BoundKind>().unwrap().to_string(), s);
        }
        assert!("fk:1".parse::<BoundKind>().is_err());
        assert!("nikiforov".parse::<BoundKind>().is_err());
    }

    #[test]
    fn bn_examples() {
        let c = bn_check(&mk("C4"), 2).unwrap();
        assert!(close(c.lhs, 4.0, 1e-10) && close(c.rhs, 4.0, 0.0) && c.holds);
        let c = bn_check(&mk("K1,4"), 2).unwrap();
        assert!(close(c.lhs, 4.0, 1e-10) && c.holds);
        let c = bn_check(&mk("P3"), 2).unwrap();
        assert!(close(c.lhs, 2.0, 1e-10) && close(c.rhs, 2.0, 0.0) && c.holds);
        assert!(bn_check(&mk("K2"), 2).is_err());
    }

    #[test]
    fn join_family_closed_form() {
        for k in 1..=6 {
            for b in 1..=40 {
                let g = families::clique_join_independent(k, b).unwrap();
                let lam = spectral_radius(&g).unwrap().lambda;
                let (kf, bf) = (k as f64, b as f64);
                let root = ((kf - 1.0) + ((kf - 1.0).powi(2) + 4.0 * kf * bf).sqrt()) / 2.0;
                assert!(close(lam, root, 1e-9), "k={k} b={b}");
                if k >= 2 {
                    let bound = bound_value(BoundKind::Fk(k), g.m()).unwrap();
                    assert!(close(lam, bound, 1e-9));
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
            (min_n..=max_n).prop_flat_map(|n| {
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                    let mut e = vec![];
                    let mut k = 0;
                    for j in 0..n {
                        for i in 0..j {
                            if bits[k] {
                                e.push((i, j));
                            }
                            k += 1;
                        }
                    }
                    Graph::from_edges(n, &e).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn residual_and_rayleigh(g in arb_graph(1, 14)) {
                let r = spectral_radius(&g).unwrap();
                prop_assert!(r.residual <= RESIDUAL_TOL * r.lambda.max(1.0));
                let lower = 2.0 * g.m() as f64 / g.n() as f64;
                prop_assert!(r.lambda >= lower - 1e-10);
                prop_assert!(r.lambda <= (g.n() - 1) as f64 + 1e-10);
                prop_assert!(r.perron.iter().all(|&x| (0.0..=1.0).contains(&x)));
            }

            #[test]
            fn spectrum_traces(g in arb_graph(1, 12)) {
                let s = full_spectrum(&g).unwrap();
                let n = g.n() as f64;
                let sum: f64 = s.eigenvalues.iter().sum();
                let sq: f64 = s.eigenvalues.iter().map(|x| x * x).sum();
                prop_assert!(sum.abs() <= 1e-9 * n);
                let m2 = 2.0 * g.m() as f64;
                prop_assert!((sq - m2).abs() <= 1e-8 * m2.max(1.0));
                let r = spectral_radius(&g).unwrap();
                prop_assert!((s.lambda1() - r.lambda).abs() <= 1e-9);
                prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            }

            #[test]
            fn component_maximum(g in arb_graph(1, 8), h in arb_graph(1, 8)) {
                let u = g.disjoint_union(&h).unwrap();
                let a = spectral_radius(&g).unwrap().lambda;
                let b = spectral_radius(&h).unwrap().lambda;
                let c = spectral_radius(&u).unwrap().lambda;
                prop_assert!((c - a.max(b)).abs() <= 1e-10);
            }

            #[test]
            fn adding_an_edge_increases_radius(g in arb_graph(2, 12), pick in any::<usize>()) {
                prop_assume!(g.is_connected());
                let missing: Vec<_> = (0..g.n())
                    .flat_map(|j| (0..j).map(move |i| (i, j)))
                    .filter(|&(i, j)| !g.has_edge(i, j))
                    .collect();
                prop_assume!(!missing.is_empty());
                let (i, j) = missing[pick % missing.len()];
                let before = spectral_radius(&g).unwrap().lambda;
                let after = spectral_radius(&g.with_edge(i, j)).unwrap().lambda;
                prop_assert!(after > before + 1e-12);
            }
        }
    }
}
