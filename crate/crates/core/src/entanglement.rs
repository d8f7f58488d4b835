//! One-electron reduced density matrix of a CI state and the entanglement
//! measures built on it.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::density::ProductAmplitudes;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;

/// Eigenvalues below this are left out of the von Neumann sum.
pub const EIGENVALUE_FLOOR: f64 = 1e-14;
/// Most negative eigenvalue accepted as round-off.
pub const NEGATIVE_TOLERANCE: f64 = 1e-10;

/// Spatial one-electron RDM `rho_{n l; n' l}`, block diagonal in `l`.
#[derive(Debug, Clone)]
pub struct ReducedDensityMatrix {
    /// Index `l`; a block may be empty when no orbital of that wave occurs.
    pub blocks: Vec<Mat<f64>>,
    spin: usize,
}

impl ReducedDensityMatrix {
    /// Contract the ordered-product amplitudes over the second electron and
    /// scale to unit trace.
    pub fn from_amplitudes(amplitudes: &ProductAmplitudes) -> Result<Self> {
        let mut blocks = amplitudes.one_electron_blocks();
        let tr: f64 = blocks.iter().map(trace).sum();
        if !(tr > 0.0) {
            return Err(Error::NotNormalized(tr));
        }
        for m in &mut blocks {
            *m = &*m * faer::Scale(1.0 / tr);
        }
        Ok(Self {
            blocks,
            spin: amplitudes.symmetry().spin,
        })
    }

    /// Directly from blocks; `spin` is 0 for singlets and 1 for triplets.
    pub fn from_blocks(blocks: Vec<Mat<f64>>, spin: usize) -> Self {
        Self { blocks, spin }
    }

    pub fn spin(&self) -> usize {
        self.spin
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(trace).sum()
    }

    /// `Tr rho^2`, block by block.
    pub fn purity(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| {
                let mut s = 0.0;
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        s += m[(i, j)] * m[(j, i)];
                    }
                }
                s
            })
            .sum()
    }

    /// All eigenvalues, descending. Fails when one is more negative than
    /// [`NEGATIVE_TOLERANCE`].
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut all = Vec::new();
        for m in &self.blocks {
            if m.nrows() == 0 {
                continue;
            }
            let sym = Mat::from_fn(m.nrows(), m.ncols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
            all.extend(symmetric_eigen(&sym)?.values);
        }
        if let Some(&worst) = all.iter().min_by(|a, b| a.total_cmp(b)) {
            if worst < -NEGATIVE_TOLERANCE {
                return Err(Error::NegativeEigenvalue(worst));
            }
        }
        all.sort_by(|a, b| b.total_cmp(a));
        Ok(all)
    }
}

fn trace(m: &Mat<f64>) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

/// `1 - Tr rho^2`.
pub fn linear_entropy(rdm: &ReducedDensityMatrix) -> f64 {
    1.0 - rdm.purity()
}

/// `-sum lambda log2 lambda` over eigenvalues above [`EIGENVALUE_FLOOR`].
pub fn von_neumann_entropy(rdm: &ReducedDensityMatrix) -> Result<f64> {
    Ok(rdm
        .eigenvalues()?
        .into_iter()
        .filter(|&x| x > EIGENVALUE_FLOOR)
        .map(|x| -x * x.log2())
        .sum())
}

/// Slater rank and whether the count came out empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlaterRank {
    pub rank: usize,
    pub degenerate: bool,
}

/// Number of Slater determinants in the canonical two-fermion form.
///
/// With the spin part factored out, a triplet's spatial RDM has its
/// eigenvalues in equal pairs and each pair is one determinant; a
/// singlet's spatial eigenvalue `lambda` corresponds to the pair
/// `(lambda/2, lambda/2)` of spin orbitals and counts once. So `{1s^2}`
/// has rank 1.
pub fn slater_rank(rdm: &ReducedDensityMatrix, threshold: f64) -> Result<SlaterRank> {
    let above = rdm.eigenvalues()?.into_iter().filter(|&x| x > threshold).count();
    let rank = if rdm.spin == 0 { above } else { above.div_ceil(2) };
    Ok(SlaterRank {
        rank,
        degenerate: rank == 0,
    })
}

/// Entanglement summary of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub linear_entropy: f64,
    pub von_neumann_entropy: f64,
    pub slater_rank: usize,
}

/// Default eigenvalue threshold for the Slater rank.
pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-6;

pub fn entanglement_report(amplitudes: &ProductAmplitudes) -> Result<EntanglementReport> {
    let rdm = ReducedDensityMatrix::from_amplitudes(amplitudes)?;
    Ok(EntanglementReport {
        linear_entropy: linear_entropy(&rdm),
        von_neumann_entropy: von_neumann_entropy(&rdm)?,
        slater_rank: slater_rank(&rdm, DEFAULT_RANK_THRESHOLD)?.rank,
    })
}
