//! Transmission through a pair of attractive delta wells at `x = +-a`,
//! a one-dimensional picture of resonant scattering.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scattering {
    /// Transmission amplitude.
    pub t: Complex64,
    /// `|t|^2`.
    pub transmission: f64,
    /// `|r|^2`, from the reflection amplitude of the same solution.
    pub reflection: f64,
}

/// Scattering at wavenumber `k` off two wells of strength `1/a0` each,
/// separated by `2a`.
///
/// The transmission amplitude is the closed form
/// `a0^2 k^2 / (a0^2 k^2 - 2i a0 k + e^(4iak) - 1)`; the reflection comes
/// from matching plane waves across both wells, so `R + T = 1` is a check
/// rather than a definition.
pub fn double_delta_transmission(k: f64, a: f64, a0: f64) -> Result<Scattering> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Wavenumber(k));
    }
    if a0 == 0.0 || !a0.is_finite() || !a.is_finite() {
        return Err(Error::Config(format!("double delta needs finite a and nonzero a0, got a = {a}, a0 = {a0}")));
    }
    let i = Complex64::i();
    let ak = Complex64::new(a0 * k, 0.0);
    let t = ak * ak / (ak * ak - 2.0 * i * ak + (4.0 * i * a * k).exp() - 1.0);
    let (_, r) = transfer_amplitudes(k, a, -2.0 / a0);
    Ok(Scattering {
        t,
        transmission: t.norm_sqr(),
        reflection: r.norm_sqr(),
    })
}

/// `(t, r)` for `-psi'' + g [delta(x-a) + delta(x+a)] psi = k^2 psi`, with an
/// outgoing wave only on the right.
pub fn transfer_amplitudes(k: f64, a: f64, g: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let (mut amp, mut back) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    for x0 in [a, -a] {
        let e = (i * k * x0).exp();
        let psi = amp * e + back / e;
        let kick = g * psi / (2.0 * i * k);
        amp -= kick / e;
        back += kick * e;
    }
    (1.0 / amp, back / amp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(double_delta_transmission(0.0, 1.0, 1.0), Err(Error::Wavenumber(_))));
        assert!(matches!(double_delta_transmission(-1.0, 1.0, 1.0), Err(Error::Wavenumber(_))));
        assert!(matches!(double_delta_transmission(1.0, 1.0, 0.0), Err(Error::Config(_))));
    }

    #[test]
    fn closed_form_matches_matching() {
        for &k in &[0.01, 0.3, 1.0, 2.7, 40.0] {
            let s = double_delta_transmission(k, 1.3, 0.7).unwrap();
            let (t, _) = transfer_amplitudes(k, 1.3, -2.0 / 0.7);
            assert!((s.t - t).norm() < 1e-12 * t.norm().max(1.0), "k = {k}");
        }
    }
}
