//! Spherical harmonics, coupled two-electron angular functions and a
//! product quadrature on the sphere, for brute-force angular integrals.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use twoelec::bspline::gauss_legendre;

use super::angular_oracle::CouplingTable;

fn factorial(n: i64) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

/// Associated Legendre `P_l^m(x)` with the Condon–Shortley phase, `m >= 0`.
pub fn assoc_legendre(l: i64, m: i64, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for i in 0..m {
        pmm *= -((2 * i + 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut p = 0.0;
    for ll in m + 2..=l {
        p = (x * (2 * ll - 1) as f64 * pm1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pm1;
        pm1 = p;
    }
    p
}

pub fn ylm(l: i64, m: i64, cos_theta: f64, phi: f64) -> Complex64 {
    let am = m.abs();
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - am) / factorial(l + am)).sqrt();
    let y = norm * assoc_legendre(l, am, cos_theta) * Complex64::from_polar(1.0, am as f64 * phi);
    if m < 0 {
        let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
        sign * y.conj()
    } else {
        y
    }
}

/// `Y^{LM}_{l1 l2}(O1, O2) = sum <l1 m1 l2 m2|L M> Y_l1m1(O1) Y_l2m2(O2)`.
#[derive(Clone)]
pub struct Coupled {
    pub l1: i64,
    pub l2: i64,
    terms: Vec<(i64, i64, f64)>,
}

impl Coupled {
    pub fn new(tables: &mut HashMap<(i32, i32), CouplingTable>, l1: i64, l2: i64, big_l: i64, big_m: i64) -> Self {
        let t = tables
            .entry((2 * l1 as i32, 2 * l2 as i32))
            .or_insert_with(|| CouplingTable::new(2 * l1 as i32, 2 * l2 as i32));
        let mut terms = Vec::new();
        for m1 in -l1..=l1 {
            let m2 = big_m - m1;
            if m2.abs() > l2 {
                continue;
            }
            let c = t.cg(2 * m1 as i32, 2 * m2 as i32, 2 * big_l as i32, 2 * big_m as i32);
            if c != 0.0 {
                terms.push((m1, m2, c));
            }
        }
        Self { l1, l2, terms }
    }

    pub fn eval(&self, a: (f64, f64), b: (f64, f64)) -> Complex64 {
        self.terms
            .iter()
            .map(|&(m1, m2, c)| c * ylm(self.l1, m1, a.0, a.1) * ylm(self.l2, m2, b.0, b.1))
            .sum()
    }
}

/// Gauss–Legendre in `cos(theta)` times equispaced `phi`.
pub struct SphereRule {
    pub points: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let gl = gauss_legendre(n_theta, -1.0, 1.0).unwrap();
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
            for j in 0..n_phi {
                points.push((x, 2.0 * PI * j as f64 / n_phi as f64));
                weights.push(w * 2.0 * PI / n_phi as f64);
            }
        }
        Self { points, weights }
    }
}

/// Cosine of the angle between two directions given as `(cos theta, phi)`.
pub fn cos_between(a: (f64, f64), b: (f64, f64)) -> f64 {
    let sa = (1.0 - a.0 * a.0).max(0.0).sqrt();
    let sb = (1.0 - b.0 * b.0).max(0.0).sqrt();
    a.0 * b.0 + sa * sb * (a.1 - b.1).cos()
}

/// One ordered-product term of an antisymmetrized configuration:
/// `coef U_r1(r1) U_r2(r2) Y^{LM}_{la lb}` evaluated at `(O1, O2)`, or at
/// `(O2, O1)` when `swapped`.
#[derive(Clone, Copy, Debug)]
pub struct Term {
    pub coef: f64,
    pub r1: twoelec::ci::OrbitalLabel,
    pub r2: twoelec::ci::OrbitalLabel,
    pub la: i64,
    pub lb: i64,
    pub swapped: bool,
}

/// `N [f(1,2) + (-1)^S f(2,1)]` with `f(1,2) = U_a(r1) U_b(r2) Y_{la lb}(O1, O2)`.
pub fn config_terms(cfg: &twoelec::ci::Configuration, spin: usize) -> Vec<Term> {
    let n = if cfg.equivalent() { 0.5 } else { std::f64::consts::FRAC_1_SQRT_2 };
    let s = if spin.is_multiple_of(2) { 1.0 } else { -1.0 };
    let (la, lb) = (cfg.a.l as i64, cfg.b.l as i64);
    vec![
        Term { coef: n, r1: cfg.a, r2: cfg.b, la, lb, swapped: false },
        Term { coef: s * n, r1: cfg.b, r2: cfg.a, la, lb, swapped: true },
    ]
}

impl Term {
    pub fn angular(&self, coupled: &Coupled, o1: (f64, f64), o2: (f64, f64)) -> Complex64 {
        if self.swapped {
            coupled.eval(o2, o1)
        } else {
            coupled.eval(o1, o2)
        }
    }
}
