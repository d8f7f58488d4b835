//! One-electron hydrogenic orbitals on the B-spline basis and the analytic
//! hydrogen reference.

use std::sync::Arc;

use faer::Mat;

use crate::bspline::{BSplineBasis, SplineTable};
use crate::error::{Error, Result};
use crate::linalg::generalized_symmetric_eigen;

/// `U_nl(r) = r R_nl(r)` expanded on the retained splines.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialOrbital {
    /// Effective principal number: `l + 1 + position in the l-block`.
    pub n: usize,
    pub l: usize,
    pub energy: f64,
    pub coefficients: Vec<f64>,
}

/// Radial matrices of one partial wave.
#[derive(Debug, Clone)]
pub struct RadialMatrices {
    pub hamiltonian: Mat<f64>,
    pub overlap: Mat<f64>,
}

/// Hamiltonian and overlap in the retained spline basis for angular
/// momentum `l` and nuclear charge `z`.
///
/// The kinetic term uses the symmetric first-derivative form
/// `1/2 int B_i' B_j'`.
pub fn assemble_radial_matrices(table: &SplineTable, z: f64, l: usize) -> RadialMatrices {
    let n = full_to_reduced_len(table);
    let mut h = Mat::<f64>::zeros(n, n);
    let mut s = Mat::<f64>::zeros(n, n);
    let cent = (l * (l + 1)) as f64 / 2.0;
    for (q, row) in table.rows.iter().enumerate() {
        let r = table.nodes[q];
        let w = table.weights[q];
        let v = cent / (r * r) - z / r;
        for (a, (&ba, &da)) in row.value.iter().zip(&row.first_derivative).enumerate() {
            let Some(i) = table.reduced(row.first + a) else { continue };
            for (b, (&bb, &db)) in row.value.iter().zip(&row.first_derivative).enumerate().skip(a) {
                let Some(j) = table.reduced(row.first + b) else { continue };
                s[(i, j)] += w * ba * bb;
                h[(i, j)] += w * (0.5 * da * db + v * ba * bb);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            s[(j, i)] = s[(i, j)];
            h[(j, i)] = h[(i, j)];
        }
    }
    RadialMatrices {
        hamiltonian: h,
        overlap: s,
    }
}

/// Kinetic matrix in the second-derivative form `-1/2 int B_i B_j''`.
pub fn kinetic_second_derivative_form(table: &SplineTable) -> Mat<f64> {
    let n = full_to_reduced_len(table);
    let mut t = Mat::<f64>::zeros(n, n);
    for (q, row) in table.rows.iter().enumerate() {
        let w = table.weights[q];
        for (a, &ba) in row.value.iter().enumerate() {
            let Some(i) = table.reduced(row.first + a) else { continue };
            for (b, &d2) in row.second_derivative.iter().enumerate() {
                let Some(j) = table.reduced(row.first + b) else { continue };
                t[(i, j)] -= 0.5 * w * ba * d2;
            }
        }
    }
    t
}

fn full_to_reduced_len(table: &SplineTable) -> usize {
    // the largest reduced index present plus one
    let mut n = 0;
    for row in &table.rows {
        for r in 0..row.value.len() {
            if let Some(i) = table.reduced(row.first + r) {
                n = n.max(i + 1);
            }
        }
    }
    n
}

/// All eigenpairs of one partial wave, ascending, with `U > 0` near the
/// origin.
pub fn solve_partial_wave(table: &SplineTable, z: f64, l: usize) -> Result<Vec<RadialOrbital>> {
    let m = assemble_radial_matrices(table, z, l);
    let eig = generalized_symmetric_eigen(&m.hamiltonian, &m.overlap)?;
    let mut out = Vec::with_capacity(eig.len());
    for (j, &e) in eig.values.iter().enumerate() {
        let mut c = eig.vector(j);
        let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if let Some(lead) = c.iter().find(|v| v.abs() > 1e-8 * scale) {
            if *lead < 0.0 {
                c.iter_mut().for_each(|v| *v = -*v);
            }
        }
        out.push(RadialOrbital {
            n: l + 1 + j,
            l,
            energy: e,
            coefficients: c,
        });
    }
    Ok(out)
}

/// Hydrogenic orbitals of every `l <= l_max` on one basis.
#[derive(Debug, Clone)]
pub struct OrbitalSet {
    z: f64,
    basis: Arc<BSplineBasis>,
    table: Arc<SplineTable>,
    points: usize,
    by_l: Vec<Vec<RadialOrbital>>,
}

impl OrbitalSet {
    /// Diagonalize every partial wave `0..=l_max` using `points` Gauss
    /// nodes per breakpoint interval.
    pub fn compute(basis: BSplineBasis, z: f64, l_max: usize, points: usize) -> Result<Self> {
        if !(z > 0.0) {
            return Err(Error::Config(format!("nuclear charge must be positive, got {z}")));
        }
        let rule = basis.quadrature(points)?;
        let table = basis.tabulate(&rule)?;
        let by_l = (0..=l_max)
            .map(|l| solve_partial_wave(&table, z, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            z,
            basis: Arc::new(basis),
            table: Arc::new(table),
            points,
            by_l,
        })
    }

    pub fn charge(&self) -> f64 {
        self.z
    }

    pub fn basis(&self) -> &BSplineBasis {
        &self.basis
    }

    /// Spline table on the Gauss rule used for every radial integral.
    pub fn table(&self) -> &SplineTable {
        &self.table
    }

    /// Gauss points per breakpoint interval.
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn l_max(&self) -> usize {
        self.by_l.len() - 1
    }

    pub fn partial_wave(&self, l: usize) -> &[RadialOrbital] {
        self.by_l.get(l).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn get(&self, n: usize, l: usize) -> Option<&RadialOrbital> {
        if n <= l {
            return None;
        }
        self.by_l.get(l)?.get(n - l - 1)
    }

    /// `U(r)` of an orbital at arbitrary radius.
    pub fn value(&self, orbital: &RadialOrbital, r: f64) -> Result<f64> {
        self.basis.combine(&orbital.coefficients, r)
    }

    pub fn iter(&self) -> impl Iterator<Item = &RadialOrbital> {
        self.by_l.iter().flatten()
    }
}

/// `-Z^2 / (2 n^2)`.
pub fn analytic_hydrogen_energy(n: usize, z: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::QuantumNumbers("principal number must be at least 1".into()));
    }
    Ok(-z * z / (2.0 * (n * n) as f64))
}

/// Generalized Laguerre polynomial `L_k^alpha(x)`.
pub fn laguerre(k: usize, alpha: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if k == 0 {
        return p0;
    }
    let mut p1 = 1.0 + alpha - x;
    for j in 1..k {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0 + alpha - x) * p1 - (jf + alpha) * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Normalized hydrogenic `R_nl(r)`, with `int R^2 r^2 dr = 1`.
pub fn analytic_hydrogen_radial(n: usize, l: usize, z: f64, r: f64) -> Result<f64> {
    if n == 0 || l >= n {
        return Err(Error::QuantumNumbers(format!("need 0 <= l < n, got n={n}, l={l}")));
    }
    let nf = n as f64;
    let rho = 2.0 * z * r / nf;
    let ln_norm = 0.5
        * (3.0 * (2.0 * z / nf).ln() + ln_factorial(n - l - 1) - (2.0 * nf).ln() - ln_factorial(n + l));
    let poly = laguerre(n - l - 1, (2 * l + 1) as f64, rho);
    Ok(ln_norm.exp() * (-rho / 2.0).exp() * rho.powi(l as i32) * poly)
}
