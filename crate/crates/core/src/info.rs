//! Shannon entropy and Fisher information of spherically averaged
//! one-particle densities.

use serde::{Deserialize, Serialize};

use crate::density::{DensitySamples, RadialDensity};
use crate::error::{Error, Result};

/// Largest accepted deviation of `4 pi int rho r^2 dr` from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-4;
/// Quadrature nodes with `rho` (Fisher) or `4 pi r^2 rho` (Shannon) below
/// this are skipped.
pub const DENSITY_FLOOR: f64 = 1e-14;
/// Minimum Gauss points per breakpoint interval for both measures. The
/// integrands are not polynomial in `r` and sharpen wherever `rho` nearly
/// vanishes; the orbital-table default of 10 leaves errors near 1e-4 in
/// the Fisher information of Rydberg-like densities.
pub const MEASURE_POINTS: usize = 40;

fn samples(density: &RadialDensity) -> Result<DensitySamples> {
    density.quadrature_with(density.points().max(MEASURE_POINTS))
}

fn check_normalized(samples: &DensitySamples) -> Result<()> {
    let n: f64 = samples.weights.iter().zip(&samples.radial).map(|(w, d)| w * d).sum();
    if (n - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

/// `S = -4 pi int rho ln(rho) r^2 dr`, in nats.
pub fn shannon_entropy(density: &RadialDensity) -> Result<f64> {
    let s = samples(density)?;
    check_normalized(&s)?;
    let mut total = 0.0;
    for ((&r, &w), &d) in s.nodes.iter().zip(&s.weights).zip(&s.radial) {
        if d <= DENSITY_FLOOR {
            continue;
        }
        let rho = d / (4.0 * std::f64::consts::PI * r * r);
        total -= w * d * rho.ln();
    }
    Ok(total)
}

/// Fisher information with the probability mass of the skipped nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherInformation {
    pub value: f64,
    pub dropped_mass: f64,
}

/// `I = 4 pi int rho'^2 / rho r^2 dr`, evaluated as
/// `int (D' - 2D/r)^2 / D dr` with `D = 4 pi r^2 rho` from analytic spline
/// derivatives.
pub fn fisher_information(density: &RadialDensity) -> Result<FisherInformation> {
    let s = samples(density)?;
    check_normalized(&s)?;
    let four_pi = 4.0 * std::f64::consts::PI;
    let mut value = 0.0;
    let mut dropped_mass = 0.0;
    for (((&r, &w), &d), &d1) in s.nodes.iter().zip(&s.weights).zip(&s.radial).zip(&s.radial_derivative) {
        let rho = d / (four_pi * r * r);
        if !(rho > DENSITY_FLOOR) {
            dropped_mass += w * d.max(0.0);
            continue;
        }
        let g = d1 - 2.0 * d / r;
        value += w * g * g / d;
    }
    Ok(FisherInformation { value, dropped_mass })
}

/// Resonance classification carried through to the output tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesLabel {
    pub k: i32,
    pub t: u32,
    pub a: i32,
    pub n2: u32,
}

/// Both measures for one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub block: String,
    pub state: usize,
    pub energy: f64,
    pub shannon: f64,
    pub fisher: f64,
    pub fisher_dropped_mass: f64,
    pub label: Option<SeriesLabel>,
}

/// Evaluate both measures for every `(energy, density)` of one block.
pub fn tabulate_series(
    block: &str,
    energies: &[f64],
    densities: &[RadialDensity],
    labels: &[Option<SeriesLabel>],
) -> Result<Vec<MeasureRecord>> {
    if energies.len() != densities.len() {
        return Err(Error::Config(format!(
            "{} energies for {} densities",
            energies.len(),
            densities.len()
        )));
    }
    energies
        .iter()
        .zip(densities)
        .enumerate()
        .map(|(i, (&energy, d))| {
            let fisher = fisher_information(d)?;
            Ok(MeasureRecord {
                block: block.to_string(),
                state: i,
                energy,
                shannon: shannon_entropy(d)?,
                fisher: fisher.value,
                fisher_dropped_mass: fisher.dropped_mass,
                label: labels.get(i).copied().flatten(),
            })
        })
        .collect()
}
