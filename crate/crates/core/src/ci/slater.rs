//! Slater radial integrals through the Poisson equation for `Y^k`.
//!
//! For orbitals `b, d` the screening function
//! `Y^k_bd(r) = r int r_<^k / r_>^(k+1) U_b U_d dr'` solves
//! `Y'' - k(k+1) Y / r^2 = -(2k+1) U_b U_d / r` with `Y(0) = 0` and
//! `Y(L) = Q^k_bd / L^k`. The part vanishing at both ends is expanded on
//! splines of order `POISSON_EXTRA_ORDER` above the orbital order over the
//! orbital breakpoints with every interval split in `POISSON_REFINE` pieces; on the orbital basis itself
//! the Galerkin error in `Y^k` is around `1e-6`. The homogeneous solution
//! `r^(k+1)` carries the boundary value. Everything that depends on a
//! single orbital pair is computed once, so `R^k` reduces to a dot product.

use faer::Mat;
use rayon::prelude::*;

use super::config::OrbitalLabel;
use crate::bspline::{BSplineBasis, KnotSequence};
use crate::error::{Error, Result};
use crate::linalg::cholesky;
use crate::orbitals::{assemble_radial_matrices, OrbitalSet};

/// Sub-intervals per orbital breakpoint interval in the Poisson basis.
pub const POISSON_REFINE: usize = 6;

/// Order of the Poisson splines above the orbital order.
pub const POISSON_EXTRA_ORDER: usize = 2;

/// Dense numbering of the orbitals `n l` of an [`OrbitalSet`].
#[derive(Debug, Clone)]
pub struct OrbitalIndex {
    offsets: Vec<usize>,
    counts: Vec<usize>,
}

impl OrbitalIndex {
    pub fn new(orbitals: &OrbitalSet) -> Self {
        let mut offsets = Vec::new();
        let mut counts = Vec::new();
        let mut acc = 0;
        for l in 0..=orbitals.l_max() {
            offsets.push(acc);
            let c = orbitals.partial_wave(l).len();
            counts.push(c);
            acc += c;
        }
        Self { offsets, counts }
    }

    pub fn len(&self) -> usize {
        self.offsets.last().map(|o| o + self.counts.last().unwrap()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, label: OrbitalLabel) -> Option<usize> {
        let count = *self.counts.get(label.l)?;
        if label.n <= label.l || label.n - label.l > count {
            return None;
        }
        Some(self.offsets[label.l] + label.n - label.l - 1)
    }

    pub fn label(&self, index: usize) -> OrbitalLabel {
        let l = self.offsets.iter().rposition(|&o| o <= index).unwrap();
        OrbitalLabel::new(index - self.offsets[l] + l + 1, l)
    }
}

#[derive(Debug, Clone)]
struct PairData {
    k_min: usize,
    /// `int B_i U_p U_q / r` over the retained splines.
    source: Vec<f64>,
    /// `T_k^{-1} source` for `k = k_min, k_min + 2, ...`.
    potential: Vec<Vec<f64>>,
    /// `int r^k U_p U_q` for the same `k`.
    moments: Vec<f64>,
}

impl PairData {
    fn slot(&self, k: usize) -> Option<usize> {
        if k < self.k_min || !(k - self.k_min).is_multiple_of(2) {
            return None;
        }
        let s = (k - self.k_min) / 2;
        (s < self.moments.len()).then_some(s)
    }
}

/// Pair-level Poisson solutions from which every `R^k` and `Y^k` follows.
///
/// `R^k(ab,cd) = R^k(cd,ab) = R^k(ba,dc)` hold by construction because the
/// cache is keyed by unordered orbital pairs `(a,c)` and `(b,d)`.
#[derive(Debug, Clone)]
pub struct SlaterCache {
    index: OrbitalIndex,
    box_radius: f64,
    poisson: BSplineBasis,
    pairs: Vec<PairData>,
    /// `U_p` at the quadrature nodes.
    node_values: Vec<Vec<f64>>,
}

fn pair_slot(p: usize, q: usize) -> usize {
    let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
    hi * (hi + 1) / 2 + lo
}

fn solve_cholesky(l: &Mat<f64>, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut y = rhs.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for p in 0..i {
            s -= l[(i, p)] * y[p];
        }
        y[i] = s / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for p in i + 1..n {
            s -= l[(p, i)] * y[p];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

impl SlaterCache {
    /// Precompute pair sources, Poisson solutions and moments for every
    /// orbital pair of the set.
    pub fn new(orbitals: &OrbitalSet) -> Result<Self> {
        let index = OrbitalIndex::new(orbitals);
        let table = orbitals.table();
        let box_radius = orbitals.basis().box_radius();
        let all: Vec<_> = orbitals.iter().collect();
        let node_values: Vec<Vec<f64>> = all.par_iter().map(|o| table.combine(&o.coefficients)).collect();
        let knots = orbitals.basis().knots();
        let mut fine = vec![knots.start()];
        for w in knots.breakpoints().windows(2) {
            for j in 1..=POISSON_REFINE {
                fine.push(w[0] + (w[1] - w[0]) * j as f64 / POISSON_REFINE as f64);
            }
        }
        *fine.last_mut().unwrap() = knots.end();
        let poisson = BSplineBasis::new(KnotSequence::from_breakpoints(fine, knots.order() + POISSON_EXTRA_ORDER, knots.kind())?)?;
        let per_interval = table.nodes.len() / knots.intervals();
        let fine_rule = poisson.quadrature(per_interval)?;
        let fine_table = poisson.tabulate(&fine_rule)?;
        let orbital_on_fine = orbitals.basis().tabulate(&fine_rule)?;
        let fine_values: Vec<Vec<f64>> = all.par_iter().map(|o| orbital_on_fine.combine(&o.coefficients)).collect();
        let l_max = orbitals.l_max();
        let k_top = 2 * l_max;
        // T_k = int B_i' B_j' + k(k+1) B_i B_j / r^2, twice the Z = 0 radial
        // Hamiltonian of angular momentum k.
        let factors = (0..=k_top)
            .map(|k| {
                let mut t = assemble_radial_matrices(&fine_table, 0.0, k).hamiltonian;
                for v in t.col_iter_mut() {
                    for x in v.iter_mut() {
                        *x *= 2.0;
                    }
                }
                cholesky(&t)
            })
            .collect::<Result<Vec<_>>>()?;
        let m = poisson.len();
        let n = index.len();
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|q| (0..=q).map(move |p| (p, q))).collect();
        let pairs: Vec<PairData> = slots
            .par_iter()
            .map(|&(p, q)| {
                let (lp, lq) = (index.label(p).l, index.label(q).l);
                let k_min = lp.abs_diff(lq);
                let k_max = lp + lq;
                let prod: Vec<f64> = fine_values[p].iter().zip(&fine_values[q]).map(|(a, b)| a * b).collect();
                let over_r: Vec<f64> = prod.iter().zip(&fine_table.nodes).map(|(v, r)| v / r).collect();
                let mut source = vec![0.0; m];
                fine_table.project(&over_r, &mut source);
                let mut potential = Vec::new();
                let mut moments = Vec::new();
                let mut k = k_min;
                while k <= k_max {
                    potential.push(solve_cholesky(&factors[k], &source));
                    let mom: f64 = prod
                        .iter()
                        .zip(&fine_table.nodes)
                        .zip(&fine_table.weights)
                        .map(|((v, r), w)| w * v * r.powi(k as i32))
                        .sum();
                    moments.push(mom);
                    k += 2;
                }
                PairData {
                    k_min,
                    source,
                    potential,
                    moments,
                }
            })
            .collect();
        Ok(Self {
            index,
            box_radius,
            poisson,
            pairs,
            node_values,
        })
    }

    pub fn index(&self) -> &OrbitalIndex {
        &self.index
    }

    /// Values of orbital `p` at the quadrature nodes of the set.
    pub fn node_values(&self, p: usize) -> &[f64] {
        &self.node_values[p]
    }

    fn pair(&self, p: usize, q: usize) -> &PairData {
        &self.pairs[pair_slot(p, q)]
    }

    /// `R^k(ab, cd) = int int U_a(1) U_b(2) r_<^k / r_>^(k+1) U_c(1) U_d(2)`
    /// by dense orbital indices; exactly zero when `k` violates the parity
    /// or triangle rule of either pair.
    pub fn rk_indexed(&self, k: usize, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let ac = self.pair(a, c);
        let bd = self.pair(b, d);
        let (Some(s1), Some(s2)) = (ac.slot(k), bd.slot(k)) else {
            return 0.0;
        };
        let dot: f64 = ac.source.iter().zip(&bd.potential[s2]).map(|(x, y)| x * y).sum();
        let boundary = ac.moments[s1] * bd.moments[s2] / self.box_radius.powi(2 * k as i32 + 1);
        (2 * k + 1) as f64 * dot + boundary
    }

    /// `R^k(ab, cd)` by orbital labels.
    pub fn rk(
        &self,
        k: usize,
        a: OrbitalLabel,
        b: OrbitalLabel,
        c: OrbitalLabel,
        d: OrbitalLabel,
    ) -> Result<f64> {
        let id = |x: OrbitalLabel| {
            self.index
                .index(x)
                .ok_or_else(|| Error::QuantumNumbers(format!("orbital {x} not in the set")))
        };
        Ok(self.rk_indexed(k, id(a)?, id(b)?, id(c)?, id(d)?))
    }

    /// `Y^k_bd(r)`.
    pub fn yk(&self, k: usize, b: OrbitalLabel, d: OrbitalLabel, r: f64) -> Result<f64> {
        let id = |x: OrbitalLabel| {
            self.index
                .index(x)
                .ok_or_else(|| Error::QuantumNumbers(format!("orbital {x} not in the set")))
        };
        let pair = self.pair(id(b)?, id(d)?);
        let Some(s) = pair.slot(k) else {
            return Ok(0.0);
        };
        let inner = self.poisson.combine(&pair.potential[s], r)?;
        Ok((2 * k + 1) as f64 * inner
            + r.powi(k as i32 + 1) * pair.moments[s] / self.box_radius.powi(2 * k as i32 + 1))
    }
}
