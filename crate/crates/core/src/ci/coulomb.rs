//! Coulomb repulsion between LS-coupled two-electron configurations.

use super::config::{Configuration, OrbitalLabel, Symmetry};
use super::slater::SlaterCache;
use crate::angular::{sixj, threej};
use crate::error::{Error, Result};

/// Multipole coefficients of the coupled element
/// `<la lb; L | 1/r12 | lc ld; L> = sum_k f_k R^k(ab, cd)` with
/// `f_k = (-1)^(L-k) sqrt(prod (2l+1)) (la lc k;000)(lb ld k;000) {la k lc; ld L lb}`.
pub fn multipole_coefficients(la: usize, lb: usize, lc: usize, ld: usize, big_l: usize) -> Vec<(usize, f64)> {
    let k_min = la.abs_diff(lc).max(lb.abs_diff(ld));
    let k_max = (la + lc).min(lb + ld);
    let mut out = Vec::new();
    if k_min > k_max {
        return out;
    }
    let norm = (((2 * la + 1) * (2 * lb + 1) * (2 * lc + 1) * (2 * ld + 1)) as f64).sqrt();
    let u = |x: usize| x as u32;
    for k in k_min..=k_max {
        if !(la + lc + k).is_multiple_of(2) || !(lb + ld + k).is_multiple_of(2) {
            continue;
        }
        let w = threej(u(la), u(lc), u(k), 0, 0, 0)
            * threej(u(lb), u(ld), u(k), 0, 0, 0)
            * sixj(u(la), u(k), u(lc), u(ld), u(big_l), u(lb));
        if w == 0.0 {
            continue;
        }
        let sign = if (big_l + k).is_multiple_of(2) { 1.0 } else { -1.0 };
        out.push((k, sign * norm * w));
    }
    out
}

/// Precomputed multipole coefficients for every channel quartet up to
/// `l_max` at one total `L`.
#[derive(Debug, Clone)]
pub struct AngularTable {
    big_l: usize,
    l_max: usize,
    entries: Vec<Vec<(usize, f64)>>,
}

impl AngularTable {
    pub fn new(big_l: usize, l_max: usize) -> Self {
        let d = l_max + 1;
        let mut entries = Vec::with_capacity(d.pow(4));
        for la in 0..d {
            for lb in 0..d {
                for lc in 0..d {
                    for ld in 0..d {
                        entries.push(multipole_coefficients(la, lb, lc, ld, big_l));
                    }
                }
            }
        }
        Self { big_l, l_max, entries }
    }

    pub fn total_l(&self) -> usize {
        self.big_l
    }

    pub fn get(&self, la: usize, lb: usize, lc: usize, ld: usize) -> &[(usize, f64)] {
        let d = self.l_max + 1;
        &self.entries[((la * d + lb) * d + lc) * d + ld]
    }
}

/// Non-antisymmetrized coupled element `<a(1) b(2); L | 1/r12 | c(1) d(2); L>`
/// for dense orbital indices.
pub fn coulomb_nonantisym(
    cache: &SlaterCache,
    angular: &AngularTable,
    a: OrbitalLabel,
    b: OrbitalLabel,
    c: OrbitalLabel,
    d: OrbitalLabel,
) -> Result<f64> {
    let idx = cache.index();
    let id = |x: OrbitalLabel| {
        idx.index(x)
            .ok_or_else(|| Error::QuantumNumbers(format!("orbital {x} not in the set")))
    };
    let (ia, ib, ic, id_) = (id(a)?, id(b)?, id(c)?, id(d)?);
    Ok(angular
        .get(a.l, b.l, c.l, d.l)
        .iter()
        .map(|&(k, f)| f * cache.rk_indexed(k, ia, ib, ic, id_))
        .sum())
}

/// Ordered-product expansion of an antisymmetrized configuration:
/// `{aa} = (a a)` and `{ab} = [(a b) + (-1)^(la+lb+L+S) (b a)] / sqrt 2`.
pub fn product_expansion(cfg: &Configuration, sym: &Symmetry) -> Vec<(f64, OrbitalLabel, OrbitalLabel)> {
    if cfg.equivalent() {
        vec![(1.0, cfg.a, cfg.a)]
    } else {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = if (cfg.a.l + cfg.b.l + sym.l + sym.spin).is_multiple_of(2) { 1.0 } else { -1.0 };
        vec![(h, cfg.a, cfg.b), (p * h, cfg.b, cfg.a)]
    }
}

/// Coulomb element between antisymmetrized configurations of one block.
///
/// Equivalent pairs enter with weight 1 and non-equivalent pairs as the
/// normalized symmetric or antisymmetric combination of both orderings,
/// giving the overall factors 1, 1/sqrt 2 and 1/2 of the four cases.
pub fn coulomb_element(
    cache: &SlaterCache,
    angular: &AngularTable,
    sym: &Symmetry,
    ci: &Configuration,
    cj: &Configuration,
) -> Result<f64> {
    if !ci.allowed_in(sym) || !cj.allowed_in(sym) {
        return Err(Error::SymmetryMismatch(
            format!("{ci} / {cj}"),
            sym.to_string(),
        ));
    }
    if angular.total_l() != sym.l {
        return Err(Error::SymmetryMismatch(
            format!("angular table for L = {}", angular.total_l()),
            sym.to_string(),
        ));
    }
    Ok(element_unchecked(cache, angular, sym, ci, cj))
}

pub(crate) fn element_unchecked(
    cache: &SlaterCache,
    angular: &AngularTable,
    sym: &Symmetry,
    ci: &Configuration,
    cj: &Configuration,
) -> f64 {
    let idx = cache.index();
    let bra = product_expansion(ci, sym);
    let ket = product_expansion(cj, sym);
    let mut total = 0.0;
    for &(x, a, b) in &bra {
        let (ia, ib) = (idx.index(a).unwrap(), idx.index(b).unwrap());
        for &(y, c, d) in &ket {
            let (ic, id) = (idx.index(c).unwrap(), idx.index(d).unwrap());
            let v: f64 = angular
                .get(a.l, b.l, c.l, d.l)
                .iter()
                .map(|&(k, f)| f * cache.rk_indexed(k, ia, ib, ic, id))
                .sum();
            total += x * y * v;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_wave_coefficient_is_one() {
        let c = multipole_coefficients(0, 0, 0, 0, 0);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].0, 0);
        assert!((c[0].1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sp_exchange_keeps_only_dipole() {
        // <s p; 1 | 1/r12 | p s; 1>
        let c = multipole_coefficients(0, 1, 1, 0, 1);
        assert_eq!(c.iter().map(|x| x.0).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn multipoles_stop_at_selection_limit() {
        for la in 0..=2 {
            for lb in 0..=2 {
                for lc in 0..=2 {
                    for ld in 0..=2 {
                        for big_l in 0..=4 {
                            for (k, _) in multipole_coefficients(la, lb, lc, ld, big_l) {
                                assert!(k <= 4);
                            }
                        }
                    }
                }
            }
        }
    }
}
