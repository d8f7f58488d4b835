//! Gauss–Legendre rules, on a single interval and piecewise over breakpoints.

use crate::error::{Error, Result};

/// Nodes and weights of a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Points used on each breakpoint interval (equal to `nodes.len()` for
    /// a single-interval rule).
    pub points_per_interval: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Composite rule: `points` Gauss nodes on every non-empty interval of
    /// `breakpoints`.
    pub fn composite(breakpoints: &[f64], points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::EmptyQuadrature);
        }
        let (x, w) = legendre_nodes(points);
        let mut nodes = Vec::with_capacity(points * breakpoints.len());
        let mut weights = Vec::with_capacity(points * breakpoints.len());
        for pair in breakpoints.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b <= a {
                continue;
            }
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + half * xi);
                weights.push(half * wi);
            }
        }
        Ok(Self {
            nodes,
            weights,
            points_per_interval: points,
        })
    }
}

/// Gauss–Legendre rule with `points` nodes on `[a, b]`.
///
/// Exact for polynomials of degree `2 * points - 1`.
pub fn gauss_legendre(points: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if points == 0 {
        return Err(Error::EmptyQuadrature);
    }
    if !(a < b) {
        return Err(Error::Knots(format!(
            "quadrature interval [{a}, {b}] is empty"
        )));
    }
    QuadratureRule::composite(&[a, b], points)
}

/// Nodes (ascending) and weights on [-1, 1].
pub(crate) fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess, refined by Newton on P_n.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Legendre polynomial P_n(x) by the three-term recurrence.
pub fn legendre_p(n: usize, x: f64) -> f64 {
    legendre_with_derivative(n, x).0
}
