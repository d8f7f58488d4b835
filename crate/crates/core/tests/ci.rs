mod common;

use std::collections::HashMap;
use std::sync::OnceLock;

use common::harmonics::{config_terms, cos_between, Coupled, SphereRule};
use num_complex::Complex64;
use twoelec::bspline::{legendre_p, BSplineBasis, KnotSequence};
use twoelec::ci::*;
use twoelec::orbitals::OrbitalSet;

const K_TOP: usize = 4;

fn orbitals() -> &'static (OrbitalSet, SlaterCache) {
    static SET: OnceLock<(OrbitalSet, SlaterCache)> = OnceLock::new();
    SET.get_or_init(|| {
        let ks = KnotSequence::exponential(0.05, 40.0, 22, 7).unwrap();
        let set = OrbitalSet::compute(BSplineBasis::new(ks).unwrap(), 2.0, 2, 10).unwrap();
        let cache = SlaterCache::new(&set).unwrap();
        (set, cache)
    })
}

/// `P_k(cos theta_12)` and every coupled function needed, on a product
/// rule over both spheres.
struct AngularGrid {
    rule: SphereRule,
    pk: Vec<Vec<f64>>,
}

impl AngularGrid {
    fn new() -> Self {
        let rule = SphereRule::new(10, 20);
        let n = rule.points.len();
        let mut pk = vec![vec![0.0; n * n]; 2 * K_TOP + 1];
        for i in 0..n {
            for j in 0..n {
                let c = cos_between(rule.points[i], rule.points[j]);
                for (k, v) in pk.iter_mut().enumerate() {
                    v[i * n + j] = legendre_p(k, c);
                }
            }
        }
        Self { rule, pk }
    }

    /// `int int conj(f) g P_k(cos theta_12) dO1 dO2` for functions given
    /// on the product grid.
    fn integrate(&self, f: &[Complex64], g: &[Complex64], k: usize) -> Complex64 {
        let n = self.rule.points.len();
        let w = &self.rule.weights;
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let p = i * n + j;
                s += w[i] * w[j] * f[p].conj() * g[p] * self.pk[k][p];
            }
        }
        s
    }

    fn tabulate(&self, f: impl Fn((f64, f64), (f64, f64)) -> Complex64) -> Vec<Complex64> {
        let pts = &self.rule.points;
        let mut out = Vec::with_capacity(pts.len() * pts.len());
        for &a in pts {
            for &b in pts {
                out.push(f(a, b));
            }
        }
        out
    }
}

fn grid() -> &'static AngularGrid {
    static G: OnceLock<AngularGrid> = OnceLock::new();
    G.get_or_init(AngularGrid::new)
}

#[test]
fn multipole_coefficients_match_uncoupled_angular_integration() {
    let g = grid();
    let mut tables = HashMap::new();
    let mut checked = 0;
    for la in 0..=2i64 {
        for lb in 0..=2i64 {
            for lc in 0..=2i64 {
                for ld in 0..=2i64 {
                    if (la + lb + lc + ld) % 2 != 0 {
                        continue;
                    }
                    let lo = (la - lb).abs().max((lc - ld).abs());
                    let hi = (la + lb).min(lc + ld);
                    for big_l in lo..=hi {
                        let bra = Coupled::new(&mut tables, la, lb, big_l, 0);
                        let ket = Coupled::new(&mut tables, lc, ld, big_l, 0);
                        let f = g.tabulate(|a, b| bra.eval(a, b));
                        let h = g.tabulate(|a, b| ket.eval(a, b));
                        let lib = multipole_coefficients(la as usize, lb as usize, lc as usize, ld as usize, big_l as usize);
                        for k in 0..=K_TOP {
                            let want = g.integrate(&f, &h, k);
                            assert!(want.im.abs() < 1e-12);
                            let got = lib.iter().find(|x| x.0 == k).map_or(0.0, |x| x.1);
                            assert!(
                                (got - want.re).abs() < 1e-10,
                                "({la}{lb}|{lc}{ld}) L={big_l} k={k}: {got} vs {}",
                                want.re
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert_eq!(checked, 275);
}

/// Brute-force `<Phi_i | 1/r12 | Phi_j>` from explicit coordinate-swapped
/// terms, numerical angular integrals and the radial `R^k`.
fn brute_coulomb(sym: &Symmetry, ci: &Configuration, cj: &Configuration, tables: &mut HashMap<(i32, i32), common::angular_oracle::CouplingTable>) -> f64 {
    let g = grid();
    let (_, cache) = orbitals();
    let big_l = sym.l as i64;
    let mut total = 0.0;
    for ti in config_terms(ci, sym.spin) {
        let yi = Coupled::new(tables, ti.la, ti.lb, big_l, 0);
        let f = g.tabulate(|a, b| ti.angular(&yi, a, b));
        for tj in config_terms(cj, sym.spin) {
            let yj = Coupled::new(tables, tj.la, tj.lb, big_l, 0);
            let h = g.tabulate(|a, b| tj.angular(&yj, a, b));
            for k in 0..=K_TOP {
                let ang = g.integrate(&f, &h, k).re;
                if ang.abs() < 1e-14 {
                    continue;
                }
                total += ti.coef * tj.coef * ang * cache.rk(k, ti.r1, ti.r2, tj.r1, tj.r2).unwrap();
            }
        }
    }
    total
}

#[test]
fn coulomb_element_matches_brute_force_in_all_four_cases() {
    let (set, cache) = orbitals();
    let mut tables = HashMap::new();
    let mut cases = [0usize; 4];
    for name in ["1Se", "3Se", "1Po", "3Po", "1De", "3De"] {
        let sym: Symmetry = name.parse().unwrap();
        let basis = ConfigurationBasis::build(sym, &sym.channels(2), &[3, 3, 3], set, false).unwrap();
        let angular = AngularTable::new(sym.l, 2);
        let cfgs = basis.configs();
        for ci in cfgs {
            for cj in cfgs {
                let got = coulomb_element(cache, &angular, &sym, ci, cj).unwrap();
                let want = brute_coulomb(&sym, ci, cj, &mut tables);
                assert!(
                    (got - want).abs() < 1e-10 * want.abs().max(1.0),
                    "{sym} <{ci}|1/r12|{cj}>: {got} vs {want}"
                );
                cases[2 * (!ci.equivalent()) as usize + (!cj.equivalent()) as usize] += 1;
            }
        }
    }
    assert!(cases.iter().all(|&c| c > 0), "{cases:?}");
}

#[test]
fn hamiltonian_is_symmetric_and_eigenvectors_orthonormal() {
    let (set, cache) = orbitals();
    for name in ["1Se", "3Po", "1De"] {
        let sym: Symmetry = name.parse().unwrap();
        let basis = ConfigurationBasis::build(sym, &sym.channels(2), &[8, 8, 8], set, false).unwrap();
        let h = assemble_hamiltonian(&basis, set, cache).unwrap();
        for i in 0..h.nrows() {
            for j in 0..i {
                assert!((h[(i, j)] - h[(j, i)]).abs() < 1e-13 * h[(i, j)].abs().max(1.0));
            }
        }
        let sp = assemble_and_diagonalize(basis, set, cache).unwrap();
        for (a, sa) in sp.states.iter().enumerate().step_by(7) {
            for sb in &sp.states[a..] {
                let dot: f64 = sa.coefficients.iter().zip(&sb.coefficients).map(|(x, y)| x * y).sum();
                let want = if std::ptr::eq(sa, sb) { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10);
            }
        }
        assert!(sp.energies().windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn q_projection_removes_lowest_s_orbital() {
    let (set, cache) = orbitals();
    let sym: Symmetry = "1Se".parse().unwrap();
    let basis = ConfigurationBasis::build(sym, &sym.channels(2), &[8, 8, 8], set, false).unwrap();
    let q = basis.q_project().unwrap();
    assert!(q.q_projected());
    assert!(q.len() < basis.len());
    assert!(q.configs().iter().all(|c| !c.contains(OrbitalLabel::new(1, 0))));
    assert_eq!(q.q_project().unwrap().len(), q.len());
    let f = feshbach_spectrum(basis, set, cache).unwrap();
    assert_eq!(f.threshold, -0.5);
    let n = f.resonances().len();
    assert!(n > 0 && f.resonances().iter().all(|s| s.energy < -0.5));
    assert!((n..f.spectrum.states.len()).all(|i| f.is_pseudostate(i)));
}

#[test]
fn configuration_errors() {
    let (set, _) = orbitals();
    let sym: Symmetry = "1Po".parse().unwrap();
    assert!(matches!(
        ConfigurationBasis::build(sym, &[(0, 0)], &[3, 3, 3], set, false),
        Err(twoelec::Error::SymmetryMismatch(..))
    ));
    assert!(matches!(
        ConfigurationBasis::build(sym, &[(0, 1)], &[1, 1], set, false),
        Err(twoelec::Error::EmptyBasis(_))
    ));
    assert!("2Se".parse::<Symmetry>().is_err());
}

#[test]
fn he_ground_state_small_basis_is_variational() {
    let (set, cache) = orbitals();
    let sym: Symmetry = "1Se".parse().unwrap();
    let mut last = 0.0;
    for l_max in 0..=2 {
        let basis = ConfigurationBasis::build(sym, &sym.channels(l_max), &[40, 40, 40], set, false).unwrap();
        let e = assemble_and_diagonalize(basis, set, cache).unwrap().states[0].energy;
        assert!(e < last);
        assert!(e > -2.9037244, "below the exact nonrelativistic energy: {e}");
        last = e;
    }
    assert!(last < -2.90, "{last}");
}
