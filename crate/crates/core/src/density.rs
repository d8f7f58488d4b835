//! Two-electron density operator elements and the pair and one-particle
//! radial densities of CI states.

use std::f64::consts::PI;

use faer::Mat;
use rayon::prelude::*;

use crate::angular::{sixj, threej};
use crate::bspline::{gauss_legendre, legendre_p, BSplineBasis, KnotSequence};
use crate::ci::{multipole_coefficients, product_expansion, AngularTable, CIState, Configuration, ConfigurationBasis, Symmetry};
use crate::error::{Error, Result};
use crate::orbitals::{OrbitalSet, RadialOrbital};

/// CI coefficients regrouped by ordered channel `(la, lb)`:
/// `Psi(r1, r2) = sum_ch sum_ij A_ch[i][j] U_i^la(r1) U_j^lb(r2)`, with the
/// row and column indices running over the orbitals of each partial wave.
#[derive(Debug, Clone)]
pub struct ProductAmplitudes {
    symmetry: Symmetry,
    channels: Vec<ChannelAmplitudes>,
}

#[derive(Debug, Clone)]
pub struct ChannelAmplitudes {
    pub la: usize,
    pub lb: usize,
    pub matrix: Mat<f64>,
}

impl ProductAmplitudes {
    pub fn new(basis: &ConfigurationBasis, state: &CIState, orbitals: &OrbitalSet) -> Result<Self> {
        Self::from_coefficients(basis, &state.coefficients, orbitals)
    }

    pub fn from_coefficients(basis: &ConfigurationBasis, coefficients: &[f64], orbitals: &OrbitalSet) -> Result<Self> {
        if coefficients.len() != basis.len() {
            return Err(Error::Config(format!(
                "{} coefficients for a basis of {} configurations",
                coefficients.len(),
                basis.len()
            )));
        }
        let sym = basis.symmetry();
        let mut channels: Vec<ChannelAmplitudes> = Vec::new();
        for (cfg, &c) in basis.configs().iter().zip(coefficients) {
            for (w, a, b) in product_expansion(cfg, &sym) {
                let (ia, ib) = (orbital_slot(orbitals, a.n, a.l)?, orbital_slot(orbitals, b.n, b.l)?);
                let pos = match channels.iter().position(|ch| ch.la == a.l && ch.lb == b.l) {
                    Some(p) => p,
                    None => {
                        let (na, nb) = (orbitals.partial_wave(a.l).len(), orbitals.partial_wave(b.l).len());
                        channels.push(ChannelAmplitudes {
                            la: a.l,
                            lb: b.l,
                            matrix: Mat::zeros(na, nb),
                        });
                        channels.len() - 1
                    }
                };
                channels[pos].matrix[(ia, ib)] += w * c;
            }
        }
        channels.sort_by_key(|ch| (ch.la, ch.lb));
        Ok(Self { symmetry: sym, channels })
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn channels(&self) -> &[ChannelAmplitudes] {
        &self.channels
    }

    /// Squared norm `sum_ch |A_ch|_F^2`, equal to the CI norm.
    pub fn norm_squared(&self) -> f64 {
        let mut s = 0.0;
        for ch in &self.channels {
            for j in 0..ch.matrix.ncols() {
                for i in 0..ch.matrix.nrows() {
                    s += ch.matrix[(i, j)].powi(2);
                }
            }
        }
        s
    }

    /// One-electron blocks `M_l = sum_lb A_(l,lb) A_(l,lb)^T`, indexed by
    /// `l` (empty matrices for absent waves).
    pub fn one_electron_blocks(&self) -> Vec<Mat<f64>> {
        let l_top = self.channels.iter().map(|ch| ch.la).max().unwrap_or(0);
        let mut blocks: Vec<Mat<f64>> = (0..=l_top).map(|_| Mat::zeros(0, 0)).collect();
        for ch in &self.channels {
            let prod = &ch.matrix * ch.matrix.transpose();
            let m = &mut blocks[ch.la];
            if m.nrows() == 0 {
                *m = prod;
            } else {
                *m += prod;
            }
        }
        for m in &mut blocks {
            let n = m.nrows();
            for i in 0..n {
                for j in i + 1..n {
                    let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
        }
        blocks
    }

    fn channel_value(&self, orbitals: &OrbitalSet, ch: &ChannelAmplitudes, r1: f64, r2: f64) -> Result<f64> {
        let u1 = wave_values_at(orbitals, ch.la, r1)?;
        let u2 = wave_values_at(orbitals, ch.lb, r2)?;
        let mut s = 0.0;
        for (i, x) in u1.iter().enumerate() {
            for (j, y) in u2.iter().enumerate() {
                s += x * ch.matrix[(i, j)] * y;
            }
        }
        Ok(s)
    }
}

fn orbital_slot(orbitals: &OrbitalSet, n: usize, l: usize) -> Result<usize> {
    if n <= l || n - l > orbitals.partial_wave(l).len() {
        return Err(Error::QuantumNumbers(format!("orbital n={n}, l={l} not in the set")));
    }
    Ok(n - l - 1)
}

fn wave_values_at(orbitals: &OrbitalSet, l: usize, r: f64) -> Result<Vec<f64>> {
    let loc = orbitals.basis().eval(r)?;
    let first = loc.first();
    let basis = orbitals.basis();
    Ok(orbitals
        .partial_wave(l)
        .iter()
        .map(|o| {
            loc.values
                .iter()
                .enumerate()
                .filter_map(|(q, v)| basis.reduced(first + q).map(|i| o.coefficients[i] * v))
                .sum()
        })
        .collect())
}

/// `U_i^l(r_p)` for every radius (rows) and orbital of the wave (columns).
fn wave_matrix(orbitals: &OrbitalSet, l: usize, radii: &[f64]) -> Result<Mat<f64>> {
    let rows = radii
        .par_iter()
        .map(|&r| wave_values_at(orbitals, l, r))
        .collect::<Result<Vec<_>>>()?;
    let n = orbitals.partial_wave(l).len();
    Ok(Mat::from_fn(radii.len(), n, |p, i| rows[p][i]))
}

/// Radial mesh, optionally carrying quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    pub weights: Option<Vec<f64>>,
}

impl RadialGrid {
    /// The Gauss rule the orbitals were computed with.
    pub fn quadrature(orbitals: &OrbitalSet) -> Self {
        let t = orbitals.table();
        Self {
            nodes: t.nodes.clone(),
            weights: Some(t.weights.clone()),
        }
    }

    /// `points` radii from `r_min` to `r_max` in geometric progression.
    pub fn exponential(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min) || points < 2 {
            return Err(Error::Config(format!(
                "bad plot grid: r_min={r_min}, r_max={r_max}, points={points}"
            )));
        }
        let ratio = (r_max / r_min).ln() / (points - 1) as f64;
        let mut nodes: Vec<f64> = (0..points).map(|i| r_min * (ratio * i as f64).exp()).collect();
        nodes[points - 1] = r_max;
        Ok(Self { nodes, weights: None })
    }

    /// Default plotting mesh: 400 points from `1e-3` to the box edge.
    pub fn plot_default(orbitals: &OrbitalSet) -> Result<Self> {
        Self::exponential(1e-3, orbitals.basis().box_radius(), 400)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `rho(r1, r2)` after integration over the inter-electronic angle, on the
/// tensor product of two radial meshes (row-major, `r1` rows).
#[derive(Debug, Clone, PartialEq)]
pub struct PairDensityGrid {
    pub r1: RadialGrid,
    pub r2: RadialGrid,
    pub values: Vec<f64>,
}

impl PairDensityGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.r2.len() + j]
    }

    /// `int int rho dr1 dr2` when both meshes carry weights.
    pub fn normalization(&self) -> Option<f64> {
        let (w1, w2) = (self.r1.weights.as_ref()?, self.r2.weights.as_ref()?);
        let mut s = 0.0;
        for (i, a) in w1.iter().enumerate() {
            let row = &self.values[i * w2.len()..(i + 1) * w2.len()];
            s += a * row.iter().zip(w2).map(|(v, b)| v * b).sum::<f64>();
        }
        Some(s)
    }

    /// `int rho(r1, r2) dr2` for each `r1`, when `r2` carries weights.
    pub fn marginal(&self) -> Option<Vec<f64>> {
        let w2 = self.r2.weights.as_ref()?;
        Some(
            self.values
                .chunks(w2.len())
                .map(|row| row.iter().zip(w2).map(|(v, b)| v * b).sum())
                .collect(),
        )
    }

    /// Largest `|rho(r1,r2) - rho(r2,r1)|` on a square mesh.
    pub fn asymmetry(&self) -> Option<f64> {
        if self.r1.nodes != self.r2.nodes {
            return None;
        }
        let n = self.r1.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        Some(worst)
    }
}

/// Angle-integrated pair density. Only the monopole of the density operator
/// survives the `cos(theta)` integration, which leaves
/// `rho(r1, r2) = sum_ch Psi_ch(r1, r2)^2`.
pub fn pair_density(amplitudes: &ProductAmplitudes, orbitals: &OrbitalSet, r1: &RadialGrid, r2: &RadialGrid) -> Result<PairDensityGrid> {
    let (n1, n2) = (r1.len(), r2.len());
    let mut values = vec![0.0; n1 * n2];
    for ch in amplitudes.channels() {
        let v1 = wave_matrix(orbitals, ch.la, &r1.nodes)?;
        let v2 = wave_matrix(orbitals, ch.lb, &r2.nodes)?;
        // T = A V2^T, then Psi row i = V1[i, :] T
        let t = &ch.matrix * v2.transpose();
        values.par_chunks_mut(n2).enumerate().for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut psi = 0.0;
                for a in 0..t.nrows() {
                    psi += v1[(i, a)] * t[(a, j)];
                }
                *slot += psi * psi;
            }
        });
    }
    Ok(PairDensityGrid {
        r1: r1.clone(),
        r2: r2.clone(),
        values,
    })
}

/// Pair density on the orbitals' own Gauss rule in both radii.
pub fn pair_density_on_quadrature(amplitudes: &ProductAmplitudes, orbitals: &OrbitalSet) -> Result<PairDensityGrid> {
    let g = RadialGrid::quadrature(orbitals);
    pair_density(amplitudes, orbitals, &g, &g)
}

/// Angle-resolved density `rho(r1, r2, theta)` from the full multipole sum
/// of the density operator.
pub fn pair_density_resolved(amplitudes: &ProductAmplitudes, orbitals: &OrbitalSet, r1: f64, r2: f64, cos_theta: f64) -> Result<f64> {
    let chans = amplitudes.channels();
    let mut fwd = Vec::with_capacity(chans.len());
    let mut rev = Vec::with_capacity(chans.len());
    for ch in chans {
        fwd.push(amplitudes.channel_value(orbitals, ch, r1, r2)?);
        rev.push(amplitudes.channel_value(orbitals, ch, r2, r1)?);
    }
    let l_top = chans.iter().map(|ch| ch.la.max(ch.lb)).max().unwrap_or(0);
    let big_l = amplitudes.symmetry().l;
    let table = AngularTable::new(big_l, l_top);
    let mut total = 0.0;
    for (x, bra) in chans.iter().enumerate() {
        for (y, ket) in chans.iter().enumerate() {
            let radial = fwd[x] * fwd[y] + rev[x] * rev[y];
            if radial == 0.0 {
                continue;
            }
            for &(k, f) in table.get(bra.la, bra.lb, ket.la, ket.lb) {
                total += 0.25 * (2 * k + 1) as f64 * f * legendre_p(k, cos_theta) * radial;
            }
        }
    }
    Ok(total)
}

/// `int rho(r1, r2, theta) d(cos theta)` by Gauss–Legendre quadrature of
/// the resolved density.
pub fn pair_density_by_angular_quadrature(
    amplitudes: &ProductAmplitudes,
    orbitals: &OrbitalSet,
    r1: f64,
    r2: f64,
    points: usize,
) -> Result<f64> {
    let rule = gauss_legendre(points, -1.0, 1.0)?;
    let mut s = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        s += w * pair_density_resolved(amplitudes, orbitals, r1, r2, x)?;
    }
    Ok(s)
}

/// Element of the density operator between two antisymmetrized
/// configurations of one block at `(r1, r2, theta)`.
pub fn g_matrix_element(
    orbitals: &OrbitalSet,
    sym: &Symmetry,
    ci: &Configuration,
    cj: &Configuration,
    r1: f64,
    r2: f64,
    cos_theta: f64,
) -> Result<f64> {
    if !ci.allowed_in(sym) || !cj.allowed_in(sym) {
        return Err(Error::SymmetryMismatch(format!("{ci} / {cj}"), sym.to_string()));
    }
    let u = |lab: crate::ci::OrbitalLabel, r: f64| -> Result<f64> {
        let o = orbitals
            .get(lab.n, lab.l)
            .ok_or_else(|| Error::QuantumNumbers(format!("orbital {lab} not in the set")))?;
        orbitals.value(o, r)
    };
    // R(ab, cd) with both radial orderings
    let radial = |a, b, c, d| -> Result<f64> {
        Ok(u(a, r1)? * u(b, r2)? * u(c, r1)? * u(d, r2)? + u(a, r2)? * u(b, r1)? * u(c, r2)? * u(d, r1)?)
    };
    let big_l = sym.l;
    let s = sym.spin;
    let sign = |e: i64| if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let dim = |l: usize| (2 * l + 1) as f64;
    let tj = |x: usize, y: usize, k: usize| threej(x as u32, y as u32, k as u32, 0, 0, 0);
    let six = |a: usize, k: usize, c: usize, d: usize, b: usize| sixj(a as u32, k as u32, c as u32, d as u32, big_l as u32, b as u32);
    let pk = |k: usize| legendre_p(k, cos_theta);
    let li = |x: usize| x as i64;
    let k_range = |la: usize, lb: usize, lc: usize, ld: usize| {
        la.abs_diff(lc).max(lb.abs_diff(ld))..=(la + lc).min(lb + ld)
    };

    let (a, b, c, d) = (ci.a, ci.b, cj.a, cj.b);
    let (la, lb, lc, ld) = (a.l, b.l, c.l, d.l);
    let mut total = 0.0;
    match (ci.equivalent(), cj.equivalent()) {
        (true, true) => {
            let r = radial(a, a, c, c)?;
            for k in k_range(la, la, lc, lc) {
                total += 0.25
                    * sign(li(big_l) - li(k))
                    * dim(k)
                    * r
                    * dim(la)
                    * dim(lc)
                    * tj(la, lc, k).powi(2)
                    * six(la, k, lc, lc, la)
                    * pk(k);
            }
        }
        (true, false) => {
            let (r_cd, r_dc) = (radial(a, a, c, d)?, radial(a, a, d, c)?);
            let pre = dim(la) * (dim(lc) * dim(ld)).sqrt() / 32f64.sqrt();
            for k in k_range(la, la, lc, ld) {
                total += pre
                    * dim(k)
                    * (r_cd * sign(li(big_l) - li(k)) + sign(li(lc + ld + s) - li(k)) * r_dc)
                    * tj(la, lc, k)
                    * tj(la, ld, k)
                    * six(la, k, lc, ld, la)
                    * pk(k);
            }
        }
        (false, true) => {
            let (r_ab, r_ba) = (radial(a, b, c, c)?, radial(b, a, c, c)?);
            let pre = dim(lc) * (dim(la) * dim(lb)).sqrt() / 32f64.sqrt();
            for k in k_range(la, lb, lc, lc) {
                total += pre
                    * dim(k)
                    * (r_ab * sign(li(big_l) - li(k)) + sign(li(la + lb + s) - li(k)) * r_ba)
                    * tj(la, lc, k)
                    * tj(lb, lc, k)
                    * six(la, k, lc, lc, lb)
                    * pk(k);
            }
        }
        (false, false) => {
            let pre = (dim(la) * dim(lb) * dim(lc) * dim(ld)).sqrt() / 8.0;
            let direct = radial(a, b, c, d)? * sign(li(big_l))
                + sign(li(la + lb + lc + ld + big_l)) * radial(b, a, d, c)?;
            let exchange = radial(a, b, d, c)? * sign(li(lc + ld + s)) + sign(li(la + lb + s)) * radial(b, a, c, d)?;
            for k in k_range(la, lb, lc, ld) {
                total += pre * dim(k) * sign(li(k)) * direct * tj(la, lc, k) * tj(lb, ld, k) * six(la, k, lc, ld, lb) * pk(k);
            }
            for k in k_range(la, lb, ld, lc) {
                total += pre * dim(k) * sign(li(k)) * exchange * tj(la, ld, k) * tj(lb, lc, k) * six(la, k, ld, lc, lb) * pk(k);
            }
        }
    }
    Ok(total)
}

/// Non-antisymmetrized element of the density operator between ordered
/// products `a(1) b(2)` and `c(1) d(2)`, written through the Coulomb
/// multipole coefficients.
pub fn g_nonantisym(la: usize, lb: usize, lc: usize, ld: usize, big_l: usize, radial: f64, cos_theta: f64) -> f64 {
    multipole_coefficients(la, lb, lc, ld, big_l)
        .iter()
        .map(|&(k, f)| 0.25 * (2 * k + 1) as f64 * f * legendre_p(k, cos_theta) * radial)
        .sum()
}

/// Spherically averaged one-particle density stored as a quadratic form in
/// the splines: `D(r) = 4 pi r^2 rho(r) = b(r)^T K b(r)` over the full
/// spline set.
#[derive(Debug, Clone)]
pub struct RadialDensity {
    basis: BSplineBasis,
    kernel: Mat<f64>,
    points: usize,
}

impl RadialDensity {
    /// From reduced-index kernel `K` over the retained splines.
    pub fn from_reduced_kernel(basis: BSplineBasis, reduced: &Mat<f64>, points: usize) -> Result<Self> {
        let n = basis.len();
        if reduced.nrows() != n || reduced.ncols() != n {
            return Err(Error::Config(format!(
                "kernel is {}x{}, basis has {n} splines",
                reduced.nrows(),
                reduced.ncols()
            )));
        }
        let full = basis.full_len();
        let kernel = Mat::from_fn(full, full, |p, q| match (basis.reduced(p), basis.reduced(q)) {
            (Some(i), Some(j)) => 0.5 * (reduced[(i, j)] + reduced[(j, i)]),
            _ => 0.0,
        });
        Ok(Self { basis, kernel, points })
    }

    /// Density of one orbital, `D = U^2`.
    pub fn from_orbital(orbitals: &OrbitalSet, orbital: &RadialOrbital) -> Result<Self> {
        let c = &orbital.coefficients;
        let k = Mat::from_fn(c.len(), c.len(), |i, j| c[i] * c[j]);
        Self::from_reduced_kernel(orbitals.basis().clone(), &k, orbitals.points())
    }

    /// `D(r) = sum_l sum_ac M_l[a,c] U_a(r) U_c(r)` from the one-electron
    /// blocks of a state.
    pub fn from_blocks(orbitals: &OrbitalSet, blocks: &[Mat<f64>]) -> Result<Self> {
        let n = orbitals.basis().len();
        let mut k = Mat::<f64>::zeros(n, n);
        for (l, m) in blocks.iter().enumerate() {
            if m.nrows() == 0 {
                continue;
            }
            let wave = orbitals.partial_wave(l);
            let c = Mat::from_fn(m.nrows(), n, |a, i| wave[a].coefficients[i]);
            k += c.transpose() * m * &c;
        }
        let points = orbitals.points();
        Self::from_reduced_kernel(orbitals.basis().clone(), &k, points)
    }

    /// Constant density filling the whole box: `D = 3 r^2 / R^3`, built from
    /// the Greville abscissae which reproduce `r` exactly.
    pub fn uniform_ball(basis: BSplineBasis, points: usize) -> Result<Self> {
        let k = basis.order();
        let t = basis.knots().knots();
        let full = basis.full_len();
        let xi: Vec<f64> = (0..full).map(|i| t[i + 1..i + k].iter().sum::<f64>() / (k - 1) as f64).collect();
        let r3 = basis.box_radius().powi(3);
        let kernel = Mat::from_fn(full, full, |p, q| 3.0 * xi[p] * xi[q] / r3);
        Ok(Self { basis, kernel, points })
    }

    /// `rho_lambda(r) = lambda^3 rho(lambda r)`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::Config(format!("scale factor must be positive, got {lambda}")));
        }
        let knots = self.basis.knots().scaled(1.0 / lambda)?;
        Ok(Self {
            basis: BSplineBasis::new(knots)?,
            kernel: Mat::from_fn(self.kernel.nrows(), self.kernel.ncols(), |i, j| lambda * self.kernel[(i, j)]),
            points: self.points,
        })
    }

    pub fn basis(&self) -> &BSplineBasis {
        &self.basis
    }

    /// Gauss points per breakpoint interval used by [`Self::quadrature`].
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    fn form(&self, first: usize, u: &[f64], v: &[f64]) -> f64 {
        let mut s = 0.0;
        for (p, x) in u.iter().enumerate() {
            for (q, y) in v.iter().enumerate() {
                s += x * self.kernel[(first + p, first + q)] * y;
            }
        }
        s
    }

    /// `D(r) = 4 pi r^2 rho(r)`.
    pub fn radial(&self, r: f64) -> Result<f64> {
        let loc = self.basis.eval(r)?;
        Ok(self.form(loc.first(), &loc.values, &loc.values))
    }

    /// `(D, D', D'')` at `r`.
    pub fn radial_derivatives(&self, r: f64) -> Result<(f64, f64, f64)> {
        let loc = self.basis.eval_derivatives(r, 2)?;
        let f = loc.first();
        let [b, b1, b2] = [&loc.derivs[0], &loc.derivs[1], &loc.derivs[2]];
        Ok((
            self.form(f, b, b),
            2.0 * self.form(f, b1, b),
            2.0 * (self.form(f, b2, b) + self.form(f, b1, b1)),
        ))
    }

    /// `rho(r)`; at the nucleus the limit `D''(0) / (8 pi)`.
    pub fn value(&self, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Ok(self.radial_derivatives(0.0)?.2 / (8.0 * PI));
        }
        Ok(self.radial(r)? / (4.0 * PI * r * r))
    }

    /// `rho'(r)` for `r > 0`.
    pub fn derivative(&self, r: f64) -> Result<f64> {
        let (d, d1, _) = self.radial_derivatives(r)?;
        Ok((d1 - 2.0 * d / r) / (4.0 * PI * r * r))
    }

    /// Unit-normalized density at the nucleus.
    pub fn at_nucleus(&self) -> Result<f64> {
        self.value(0.0)
    }

    /// `rho(r)` on a list of radii.
    pub fn tabulate(&self, radii: &[f64]) -> Result<Vec<f64>> {
        radii.iter().map(|&r| self.value(r)).collect()
    }

    /// Nodes, weights, `D` and `D'` on the composite Gauss rule.
    pub fn quadrature(&self) -> Result<DensitySamples> {
        self.quadrature_with(self.points)
    }

    /// As [`Self::quadrature`] with `points` nodes per breakpoint interval.
    pub fn quadrature_with(&self, points: usize) -> Result<DensitySamples> {
        let rule = self.basis.quadrature(points)?;
        let mut d = Vec::with_capacity(rule.len());
        let mut d1 = Vec::with_capacity(rule.len());
        for &r in &rule.nodes {
            let (a, b, _) = self.radial_derivatives(r)?;
            d.push(a);
            d1.push(b);
        }
        Ok(DensitySamples {
            nodes: rule.nodes,
            weights: rule.weights,
            radial: d,
            radial_derivative: d1,
        })
    }

    /// `4 pi int rho r^2 dr`.
    pub fn normalization(&self) -> Result<f64> {
        let s = self.quadrature()?;
        Ok(s.weights.iter().zip(&s.radial).map(|(w, d)| w * d).sum())
    }
}

/// Quadrature samples of a radial density.
#[derive(Debug, Clone)]
pub struct DensitySamples {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub radial: Vec<f64>,
    pub radial_derivative: Vec<f64>,
}

/// One-particle density of a CI state, normalized to one electron.
pub fn one_particle_density(amplitudes: &ProductAmplitudes, orbitals: &OrbitalSet) -> Result<RadialDensity> {
    let mut blocks = amplitudes.one_electron_blocks();
    let norm = amplitudes.norm_squared();
    if !(norm > 0.0) {
        return Err(Error::NotNormalized(norm));
    }
    for m in &mut blocks {
        *m = &*m * faer::Scale(1.0 / norm);
    }
    RadialDensity::from_blocks(orbitals, &blocks)
}

/// Character of the pair density on the line `r1 = r2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalCharacter {
    Node,
    Antinode,
    Neither,
}

impl DiagonalCharacter {
    /// Matching `A` quantum number: `+1` antinode, `-1` node.
    pub fn a_value(self) -> i32 {
        match self {
            Self::Node => -1,
            Self::Antinode => 1,
            Self::Neither => 0,
        }
    }
}

impl std::fmt::Display for DiagonalCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Node => "node",
            Self::Antinode => "antinode",
            Self::Neither => "neither",
        })
    }
}

/// Fraction of the off-diagonal peak below which the diagonal is a node.
pub const NODE_RATIO: f64 = 1e-3;
/// Fraction of the off-diagonal peak above which the diagonal is an
/// antinode.
pub const ANTINODE_RATIO: f64 = 0.5;
/// Relative radial distance `|r1 - r2| / max(r1, r2)` defining the band
/// next to the diagonal.
pub const NEAR_DIAGONAL_BAND: f64 = 0.1;

/// Compare the largest value on `r1 = r2` with the largest value in a
/// narrow band beside it. Meshes that are not square, or densities without
/// any variation, are reported as `Neither`.
pub fn diagonal_symmetry_diagnostic(density: &PairDensityGrid) -> DiagonalCharacter {
    if density.r1.nodes != density.r2.nodes || density.r1.is_empty() {
        return DiagonalCharacter::Neither;
    }
    let (lo, hi) = density
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !(hi > 0.0) || hi - lo <= 1e-12 * hi.abs() {
        return DiagonalCharacter::Neither;
    }
    let r = &density.r1.nodes;
    let n = r.len();
    let mut diag = 0.0f64;
    let mut band = 0.0f64;
    for i in 0..n {
        diag = diag.max(density.get(i, i));
        for j in 0..n {
            if i != j && (r[i] - r[j]).abs() <= NEAR_DIAGONAL_BAND * r[i].max(r[j]) {
                band = band.max(density.get(i, j));
            }
        }
    }
    if !(band > 0.0) {
        return DiagonalCharacter::Neither;
    }
    if diag < NODE_RATIO * band {
        DiagonalCharacter::Node
    } else if diag > ANTINODE_RATIO * band {
        DiagonalCharacter::Antinode
    } else {
        DiagonalCharacter::Neither
    }
}

/// Knot sequence helper for tests and callers that need a plain ball.
pub fn ball_basis(radius: f64, segments: usize, order: usize) -> Result<BSplineBasis> {
    BSplineBasis::new(KnotSequence::linear(0.0, radius, segments, order)?)
}
