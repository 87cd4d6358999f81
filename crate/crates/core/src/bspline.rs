//! B-spline knot sequences, basis evaluation and per-interval Gauss–Legendre
//! quadrature on a radial box [0, r_max].

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 15;

/// Ratio between successive interval widths in the geometric part of an
/// exp-linear grid.
pub const DEFAULT_GROWTH: f64 = 1.1;
pub const DEFAULT_R_FIRST: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KnotKind {
    /// Geometric widths starting at `r_first`, switching to uniform widths
    /// once the geometric width reaches the uniform tail width.
    ExpLinear { r_first: f64, growth: f64 },
    Linear,
}

impl KnotKind {
    pub fn exp_linear(r_first: f64) -> Self {
        KnotKind::ExpLinear { r_first, growth: DEFAULT_GROWTH }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KnotKind::ExpLinear { .. } => "exp-linear",
            KnotKind::Linear => "linear",
        }
    }
}

impl Default for KnotKind {
    fn default() -> Self {
        KnotKind::exp_linear(DEFAULT_R_FIRST)
    }
}

impl fmt::Display for KnotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Knot family without its parameters, as selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum KnotFamily {
    #[default]
    ExpLinear,
    Linear,
}

impl KnotFamily {
    pub fn with_r_first(self, r_first: f64) -> KnotKind {
        match self {
            KnotFamily::ExpLinear => KnotKind::exp_linear(r_first),
            KnotFamily::Linear => KnotKind::Linear,
        }
    }
}

impl FromStr for KnotFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exp-linear" | "explinear" | "exp" => Ok(KnotFamily::ExpLinear),
            "linear" => Ok(KnotFamily::Linear),
            other => Err(Error::Config(format!("unknown knot kind `{other}` (exp-linear|linear)"))),
        }
    }
}

impl fmt::Display for KnotFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KnotFamily::ExpLinear => "exp-linear",
            KnotFamily::Linear => "linear",
        })
    }
}

/// A clamped B-spline basis on [0, r_max]. The first and last splines are
/// dropped from the active set so that every retained function vanishes at
/// both ends of the box.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotBasis {
    order: usize,
    n_splines: usize,
    r_max: f64,
    kind: KnotKind,
    breakpoints: Vec<f64>,
    knots: Vec<f64>,
}

/// Values and first derivatives of the `order` splines that are non-zero at a point.
#[derive(Debug, Clone, Copy)]
pub struct LocalBasis {
    /// Index of the first non-zero spline.
    pub first: usize,
    pub len: usize,
    pub values: [f64; MAX_ORDER],
    pub derivs: [f64; MAX_ORDER],
}

pub fn make_knots(r_max: f64, n_splines: usize, order: usize, kind: KnotKind) -> Result<KnotBasis> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::InvalidInput(format!(
            "spline order {order} outside {MIN_ORDER}..={MAX_ORDER}"
        )));
    }
    if n_splines <= 2 * order {
        return Err(Error::InvalidInput(format!(
            "need more than {} splines for order {order}, got {n_splines}",
            2 * order
        )));
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidInput(format!("box radius must be positive, got {r_max}")));
    }
    let intervals = n_splines - order + 1;
    let breakpoints = match kind {
        KnotKind::Linear => (0..=intervals)
            .map(|j| if j == intervals { r_max } else { r_max * j as f64 / intervals as f64 })
            .collect(),
        KnotKind::ExpLinear { r_first, growth } => exp_linear_breakpoints(r_max, intervals, r_first, growth)?,
    };
    KnotBasis::from_breakpoints(breakpoints, order, kind)
}

fn exp_linear_breakpoints(r_max: f64, intervals: usize, r_first: f64, growth: f64) -> Result<Vec<f64>> {
    if !(r_first > 0.0 && r_first < r_max) {
        return Err(Error::InvalidInput(format!(
            "first breakpoint {r_first} must lie strictly inside (0, {r_max})"
        )));
    }
    if !(growth > 1.0 && growth.is_finite()) {
        return Err(Error::InvalidInput(format!("geometric growth must exceed 1, got {growth}")));
    }
    let mut points = vec![0.0, r_first];
    let mut width = r_first;
    loop {
        let used = points.len() - 1;
        if used >= intervals {
            return Err(Error::InvalidInput(format!(
                "exp-linear grid with r_first = {r_first} and {intervals} intervals never reaches its linear tail"
            )));
        }
        let last = *points.last().unwrap();
        let tail = (r_max - last) / (intervals - used) as f64;
        let next = width * growth;
        if next >= tail {
            for j in 1..(intervals - used) {
                points.push(last + tail * j as f64);
            }
            points.push(r_max);
            break;
        }
        width = next;
        points.push(last + width);
    }
    Ok(points)
}

impl KnotBasis {
    /// Builds a clamped basis over explicit breakpoints (first must be 0).
    pub fn from_breakpoints(breakpoints: Vec<f64>, order: usize, kind: KnotKind) -> Result<Self> {
        if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
            return Err(Error::InvalidInput(format!("spline order {order} outside {MIN_ORDER}..={MAX_ORDER}")));
        }
        if breakpoints.len() < 2 || breakpoints[0] != 0.0 {
            return Err(Error::InvalidInput("breakpoints must start at 0".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) || breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("breakpoints must be finite and strictly increasing".into()));
        }
        let r_max = *breakpoints.last().unwrap();
        let mut knots = Vec::with_capacity(breakpoints.len() + 2 * (order - 1));
        knots.extend(std::iter::repeat(0.0).take(order - 1));
        knots.extend_from_slice(&breakpoints);
        knots.extend(std::iter::repeat(r_max).take(order - 1));
        let n_splines = knots.len() - order;
        if n_splines < 3 {
            return Err(Error::InvalidInput("basis needs at least three splines".into()));
        }
        Ok(KnotBasis { order, n_splines, r_max, kind, breakpoints, knots })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_splines(&self) -> usize {
        self.n_splines
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn kind(&self) -> KnotKind {
        self.kind
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn n_intervals(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Spline indices kept after dropping the two boundary functions.
    pub fn active_range(&self) -> Range<usize> {
        1..self.n_splines - 1
    }

    pub fn active_len(&self) -> usize {
        self.n_splines - 2
    }

    /// Breakpoint interval holding `r`; the right end belongs to the last interval.
    pub fn interval_of(&self, r: f64) -> Result<usize> {
        if !(r >= 0.0 && r <= self.r_max) {
            return Err(Error::InvalidInput(format!("radius {r} outside [0, {}]", self.r_max)));
        }
        let idx = self.breakpoints.partition_point(|&b| b <= r);
        Ok(idx.saturating_sub(1).min(self.n_intervals() - 1))
    }

    /// All non-zero splines (and first derivatives) at `r`, which must lie in `interval`.
    pub fn local_basis_in(&self, interval: usize, r: f64) -> LocalBasis {
        let k = self.order;
        let t = &self.knots;
        let span = interval + k - 1;
        let mut out = LocalBasis { first: interval, len: k, values: [0.0; MAX_ORDER], derivs: [0.0; MAX_ORDER] };

        // Cox–de Boor triangle, stopping one order short to form derivatives.
        let mut n = [0.0; MAX_ORDER];
        let mut left = [0.0; MAX_ORDER];
        let mut right = [0.0; MAX_ORDER];
        n[0] = 1.0;
        for j in 1..k {
            if j == k - 1 {
                // n[0..k-1] now holds the order-(k-1) splines span-k+2..=span.
                let mut prev = [0.0; MAX_ORDER];
                prev[..k - 1].copy_from_slice(&n[..k - 1]);
                for i in 0..k {
                    let idx = span + 1 - k + i;
                    let a = if i >= 1 {
                        let d = t[idx + k - 1] - t[idx];
                        if d > 0.0 { prev[i - 1] / d } else { 0.0 }
                    } else {
                        0.0
                    };
                    let b = if i < k - 1 {
                        let d = t[idx + k] - t[idx + 1];
                        if d > 0.0 { prev[i] / d } else { 0.0 }
                    } else {
                        0.0
                    };
                    out.derivs[i] = (k - 1) as f64 * (a - b);
                }
            }
            left[j] = r - t[span + 1 - j];
            right[j] = t[span + j] - r;
            let mut saved = 0.0;
            for i in 0..j {
                let temp = n[i] / (right[i + 1] + left[j - i]);
                n[i] = saved + right[i + 1] * temp;
                saved = left[j - i] * temp;
            }
            n[j] = saved;
        }
        out.values[..k].copy_from_slice(&n[..k]);
        out
    }

    pub fn local_basis(&self, r: f64) -> Result<LocalBasis> {
        let interval = self.interval_of(r)?;
        Ok(self.local_basis_in(interval, r))
    }

    /// B_index(r) for `derivative_order` 0, or B'_index(r) for 1.
    pub fn eval(&self, index: usize, r: f64, derivative_order: u8) -> Result<f64> {
        if index >= self.n_splines {
            return Err(Error::InvalidInput(format!(
                "spline index {index} out of range (basis has {})",
                self.n_splines
            )));
        }
        if derivative_order > 1 {
            return Err(Error::InvalidInput("only values and first derivatives are supported".into()));
        }
        let local = self.local_basis(r)?;
        if index < local.first || index >= local.first + local.len {
            return Ok(0.0);
        }
        let i = index - local.first;
        Ok(if derivative_order == 0 { local.values[i] } else { local.derivs[i] })
    }
}

/// Free-function form of [`KnotBasis::eval`].
pub fn eval_bspline(basis: &KnotBasis, index: usize, r: f64, derivative_order: u8) -> Result<f64> {
    basis.eval(index, r, derivative_order)
}

/// Gauss–Legendre nodes and weights on [-1, 1], ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadNode {
    pub r: f64,
    pub weight: f64,
}

/// Gauss–Legendre nodes mapped onto every breakpoint interval of a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes_per_interval: usize,
    nodes: Vec<QuadNode>,
    breakpoints: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes_per_interval(&self) -> usize {
        self.nodes_per_interval
    }

    pub fn n_intervals(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn interval_nodes(&self, interval: usize) -> &[QuadNode] {
        let q = self.nodes_per_interval;
        &self.nodes[interval * q..(interval + 1) * q]
    }

    pub fn nodes(&self) -> &[QuadNode] {
        &self.nodes
    }

    /// ∫ f dr over the whole box.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().map(|n| n.weight * f(n.r)).sum()
    }

    pub fn integrate_interval(&self, interval: usize, f: impl Fn(f64) -> f64) -> f64 {
        self.interval_nodes(interval).iter().map(|n| n.weight * f(n.r)).sum()
    }
}

pub fn make_quadrature(basis: &KnotBasis, nodes_per_interval: usize) -> Result<QuadratureRule> {
    if nodes_per_interval == 0 {
        return Err(Error::InvalidInput("quadrature needs at least one node per interval".into()));
    }
    let reference = gauss_legendre(nodes_per_interval);
    let bp = basis.breakpoints();
    let mut nodes = Vec::with_capacity(nodes_per_interval * (bp.len() - 1));
    for w in bp.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for &(x, wt) in &reference {
            nodes.push(QuadNode { r: mid + half * x, weight: half * wt });
        }
    }
    Ok(QuadratureRule { nodes_per_interval, nodes, breakpoints: bp.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn paper_grid_counts() {
        let b = make_knots(200.0, 600, 10, KnotKind::exp_linear(1e-4)).unwrap();
        // splines = breakpoints + order - 2
        assert_eq!(b.breakpoints().len(), 592);
        assert_eq!(b.breakpoints()[0], 0.0);
        assert_eq!(b.breakpoints()[1], 1e-4);
        assert_eq!(*b.breakpoints().last().unwrap(), 200.0);
        assert_eq!(b.n_splines(), 600);
        assert_eq!(b.knots().len() - b.order(), 600);
        assert_eq!(b.active_len(), 598);
        assert_eq!(b.active_range(), 1..599);
        let widths: Vec<f64> = b.breakpoints().windows(2).map(|w| w[1] - w[0]).collect();
        assert!(widths.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9)));
    }

    #[test]
    fn linear_grid() {
        let b = make_knots(10.0, 23, 3, KnotKind::Linear).unwrap();
        assert_eq!(b.breakpoints().len(), 22);
        for w in b.breakpoints().windows(2) {
            assert_relative_eq!(w[1] - w[0], 10.0 / 21.0, epsilon = 1e-13);
        }
        let knots = b.knots();
        assert!(knots.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(knots.iter().filter(|&&t| t == 0.0).count(), 3);
        assert_eq!(knots.iter().filter(|&&t| t == 10.0).count(), 3);
    }

    #[test]
    fn deterministic_and_validated() {
        let a = make_knots(50.0, 80, 8, KnotKind::ExpLinear { r_first: 1e-3, growth: 1.3 }).unwrap();
        let b = make_knots(50.0, 80, 8, KnotKind::ExpLinear { r_first: 1e-3, growth: 1.3 }).unwrap();
        assert_eq!(a, b);
        assert!(make_knots(50.0, 16, 8, KnotKind::Linear).is_err());
        assert!(make_knots(50.0, 80, 1, KnotKind::Linear).is_err());
        assert!(make_knots(50.0, 80, 16, KnotKind::Linear).is_err());
        assert!(make_knots(50.0, 80, 8, KnotKind::exp_linear(0.0)).is_err());
        assert!(make_knots(50.0, 80, 8, KnotKind::exp_linear(60.0)).is_err());
        assert!(make_knots(-1.0, 80, 8, KnotKind::Linear).is_err());
        // Too few intervals to reach the tail from a tiny first width.
        assert!(make_knots(200.0, 30, 10, KnotKind::exp_linear(1e-12)).is_err());
        assert!(KnotBasis::from_breakpoints(vec![0.0, 1.0, 1.0, 2.0], 3, KnotKind::Linear).is_err());
    }

    #[test]
    fn hat_functions() {
        let b = make_knots(4.0, 5, 2, KnotKind::Linear).unwrap();
        for (i, &x) in b.breakpoints().iter().enumerate() {
            assert_relative_eq!(b.eval(i, x, 0).unwrap(), 1.0, epsilon = 1e-15);
            for j in 0..b.n_splines() {
                if j != i {
                    assert_eq!(b.eval(j, x, 0).unwrap(), 0.0);
                }
            }
        }
        assert_relative_eq!(b.eval(1, 0.5, 1).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(b.eval(1, 1.5, 1).unwrap(), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn eval_errors_and_support() {
        let b = make_knots(10.0, 30, 5, KnotKind::Linear).unwrap();
        assert!(b.eval(30, 1.0, 0).is_err());
        assert!(b.eval(0, 10.5, 0).is_err());
        assert!(b.eval(0, -0.1, 0).is_err());
        assert!(b.eval(0, 1.0, 2).is_err());
        // Spline 10 lives on [t_10, t_15] in knot indices.
        let t = b.knots();
        assert_eq!(b.eval(10, t[10] - 1e-3, 0).unwrap(), 0.0);
        assert_eq!(b.eval(10, t[15] + 1e-3, 0).unwrap(), 0.0);
        assert!(b.eval(10, 0.5 * (t[10] + t[15]), 0).unwrap() > 0.0);
        // Clamped ends: first spline is 1 at the origin, last at r_max.
        assert_relative_eq!(b.eval(0, 0.0, 0).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(b.eval(29, 10.0, 0).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn polynomial_reproduction() {
        // Greville abscissae reproduce r exactly: sum_i g_i B_i(r) = r.
        let b = make_knots(7.0, 40, 6, KnotKind::ExpLinear { r_first: 1e-2, growth: 1.3 }).unwrap();
        let k = b.order();
        let t = b.knots();
        let greville: Vec<f64> = (0..b.n_splines())
            .map(|i| t[i + 1..i + k].iter().sum::<f64>() / (k - 1) as f64)
            .collect();
        for &r in &[0.003, 0.5, 2.2, 6.99] {
            let local = b.local_basis(r).unwrap();
            let s: f64 = (0..local.len).map(|j| greville[local.first + j] * local.values[j]).sum();
            let ds: f64 = (0..local.len).map(|j| greville[local.first + j] * local.derivs[j]).sum();
            assert_relative_eq!(s, r, epsilon = 1e-13);
            assert_relative_eq!(ds, 1.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn gauss_legendre_small() {
        let g = gauss_legendre(2);
        assert_relative_eq!(g[1].0, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(g[0].1, 1.0, epsilon = 1e-15);
        let g = gauss_legendre(3);
        assert_eq!(g[1].0, 0.0);
        assert_relative_eq!(g[1].1, 8.0 / 9.0, epsilon = 1e-15);
        for n in 1..=40 {
            let g = gauss_legendre(n);
            let s: f64 = g.iter().map(|p| p.1).sum();
            assert_relative_eq!(s, 2.0, epsilon = 1e-13);
            assert!(g.windows(2).all(|w| w[1].0 > w[0].0));
            assert!(g.iter().all(|p| p.0.abs() < 1.0 && p.1 > 0.0));
        }
    }

    #[test]
    fn quadrature_identities() {
        let b = make_knots(200.0, 600, 10, KnotKind::exp_linear(1e-4)).unwrap();
        let q = make_quadrature(&b, 20).unwrap();
        assert_relative_eq!(q.integrate(|_| 1.0), 200.0, max_relative = 1e-12);
        for j in 0..q.n_intervals() {
            let (a, c) = (q.breakpoints()[j], q.breakpoints()[j + 1]);
            let nodes = q.interval_nodes(j);
            assert!(nodes.iter().all(|n| n.r > a && n.r < c && n.weight > 0.0));
            let s: f64 = nodes.iter().map(|n| n.weight).sum();
            assert_relative_eq!(s, c - a, max_relative = 1e-13);
        }
        assert!(make_quadrature(&b, 0).is_err());
    }

    #[test]
    fn gauss_exactness_on_one_interval() {
        let b = KnotBasis::from_breakpoints(vec![0.0, 1.0, 3.0], 2, KnotKind::Linear).unwrap();
        for n in 1..=12 {
            let q = make_quadrature(&b, n).unwrap();
            let deg = (2 * n - 1) as i32;
            let exact = (3f64.powi(deg + 1) - 1.0) / (deg + 1) as f64;
            let got = q.integrate_interval(1, |r| r.powi(deg));
            assert_relative_eq!(got, exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn exponential_integral() {
        // ∫_0^20 e^{-2r} dr on the exp-linear grid restricted to [0, 20].
        let full = make_knots(200.0, 600, 10, KnotKind::exp_linear(1e-4)).unwrap();
        let mut bp: Vec<f64> = full.breakpoints().iter().copied().filter(|&x| x < 20.0).collect();
        bp.push(20.0);
        let b = KnotBasis::from_breakpoints(bp, 10, full.kind()).unwrap();
        let q = make_quadrature(&b, 20).unwrap();
        let got = q.integrate(|r| (-2.0 * r).exp());
        assert!((got - 0.5 * (1.0 - (-40f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn knot_family_parsing() {
        assert_eq!("exp-linear".parse::<KnotFamily>().unwrap(), KnotFamily::ExpLinear);
        assert_eq!("LINEAR".parse::<KnotFamily>().unwrap(), KnotFamily::Linear);
        assert!("cubic".parse::<KnotFamily>().is_err());
    }
}
