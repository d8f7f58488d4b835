//! Hamiltonian assembly, diagonalization and Feshbach Q-projection.

use std::sync::Arc;

use faer::Mat;
use rayon::prelude::*;

use super::config::{ConfigurationBasis, Symmetry};
use super::coulomb::{element_unchecked, AngularTable};
use super::slater::SlaterCache;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::orbitals::OrbitalSet;

/// Eigenstate of the CI Hamiltonian in one configuration basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CIState {
    pub energy: f64,
    /// Unit-norm coefficients, largest-magnitude entry positive.
    pub coefficients: Vec<f64>,
}

/// Full spectrum of one symmetry block.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub basis: Arc<ConfigurationBasis>,
    pub states: Vec<CIState>,
}

impl Spectrum {
    pub fn symmetry(&self) -> Symmetry {
        self.basis.symmetry()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }
}

/// Dense CI Hamiltonian `(e_a + e_b) delta_ij + <i|1/r12|j>`.
pub fn assemble_hamiltonian(basis: &ConfigurationBasis, orbitals: &OrbitalSet, cache: &SlaterCache) -> Result<Mat<f64>> {
    let sym = basis.symmetry();
    let l_max = basis.l_max();
    if l_max > orbitals.l_max() {
        return Err(Error::Config(format!(
            "basis uses l = {l_max} but orbitals stop at l = {}",
            orbitals.l_max()
        )));
    }
    let angular = AngularTable::new(sym.l, l_max);
    let configs = basis.configs();
    let energy = |x: super::config::OrbitalLabel| {
        orbitals
            .get(x.n, x.l)
            .map(|o| o.energy)
            .ok_or_else(|| Error::QuantumNumbers(format!("orbital {x} not in the set")))
    };
    let diag = configs
        .iter()
        .map(|c| Ok(energy(c.a)? + energy(c.b)?))
        .collect::<Result<Vec<f64>>>()?;
    let n = configs.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..=i)
                .map(|j| element_unchecked(cache, &angular, &sym, &configs[i], &configs[j]))
                .collect()
        })
        .collect();
    let mut h = Mat::<f64>::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
        h[(i, i)] += diag[i];
    }
    Ok(h)
}

/// Diagonalize the block and return every state, ascending in energy.
pub fn assemble_and_diagonalize(
    basis: ConfigurationBasis,
    orbitals: &OrbitalSet,
    cache: &SlaterCache,
) -> Result<Spectrum> {
    let h = assemble_hamiltonian(&basis, orbitals, cache)?;
    let eig = symmetric_eigen(&h)?;
    let states = eig
        .values
        .iter()
        .enumerate()
        .map(|(j, &energy)| {
            let mut c = eig.vector(j);
            fix_sign(&mut c);
            CIState { energy, coefficients: c }
        })
        .collect();
    Ok(Spectrum {
        basis: Arc::new(basis),
        states,
    })
}

/// Flip so the largest-magnitude coefficient is positive (first one wins
/// ties).
pub fn fix_sign(c: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &v in c.iter() {
        if v.abs() > best.abs() + 1e-12 {
            best = v;
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        c.iter_mut().for_each(|v| *v = -*v);
    }
}

/// Q-projected spectrum: states below `threshold` are resonances, the
/// rest pseudostates of the discretized continuum.
#[derive(Debug, Clone)]
pub struct FeshbachSpectrum {
    pub spectrum: Spectrum,
    pub threshold: f64,
}

impl FeshbachSpectrum {
    pub fn resonances(&self) -> &[CIState] {
        let n = self.spectrum.states.iter().take_while(|s| s.energy < self.threshold).count();
        &self.spectrum.states[..n]
    }

    pub fn is_pseudostate(&self, index: usize) -> bool {
        self.spectrum.states[index].energy >= self.threshold
    }
}

/// Second ionization threshold He+(N=2) of a helium-like ion, `-Z^2/8`.
pub fn second_threshold(z: f64) -> f64 {
    -z * z / 8.0
}

/// Diagonalize `QHQ` on a basis with the lowest s orbital removed.
pub fn feshbach_spectrum(basis: ConfigurationBasis, orbitals: &OrbitalSet, cache: &SlaterCache) -> Result<FeshbachSpectrum> {
    let basis = basis.q_project()?;
    let spectrum = assemble_and_diagonalize(basis, orbitals, cache)?;
    Ok(FeshbachSpectrum {
        spectrum,
        threshold: second_threshold(orbitals.charge()),
    })
}
