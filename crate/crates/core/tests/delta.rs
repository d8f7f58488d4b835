use num_complex::Complex64;
use proptest::prelude::*;
use twoelec::delta::double_delta_transmission;

/// `(t, r)` from the 4x4 matching system for
/// `psi = e^(ikx) + r e^(-ikx)` (x < -a), `B e^(ikx) + C e^(-ikx)` (|x| < a),
/// `t e^(ikx)` (x > a), with `psi'` jumping by `-(2/a0) psi` at each well.
fn matching_oracle(k: f64, a: f64, a0: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let g = -2.0 / a0;
    let e = |x: f64| (i * k * x).exp();
    let zero = Complex64::new(0.0, 0.0);
    // unknowns: r, B, C, t
    let mut m = [[zero; 5]; 4];
    // continuity at -a: e(-a) + r e(a) = B e(-a) + C e(a)
    m[0] = [e(a), -e(-a), -e(a), zero, -e(-a)];
    // jump at -a: ik(B e(-a) - C e(a)) - ik(e(-a) - r e(a)) = g psi(-a)
    m[1] = [
        i * k * e(a) - g * e(a),
        i * k * e(-a),
        -i * k * e(a),
        zero,
        i * k * e(-a) + g * e(-a),
    ];
    // continuity at a: B e(a) + C e(-a) = t e(a)
    m[2] = [zero, e(a), e(-a), -e(a), zero];
    // jump at a: ik t e(a) - ik(B e(a) - C e(-a)) = g t e(a)
    m[3] = [zero, -i * k * e(a), i * k * e(-a), i * k * e(a) - g * e(a), zero];
    let x = solve4(m);
    (x[3], x[0])
}

/// Gaussian elimination with partial pivoting on an augmented 4x5 system.
fn solve4(mut m: [[Complex64; 5]; 4]) -> [Complex64; 4] {
    for col in 0..4 {
        let piv = (col..4).max_by(|&p, &q| m[p][col].norm().total_cmp(&m[q][col].norm())).unwrap();
        m.swap(col, piv);
        for row in col + 1..4 {
            let f = m[row][col] / m[col][col];
            for c in col..5 {
                let v = m[col][c];
                m[row][c] -= f * v;
            }
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 4];
    for row in (0..4).rev() {
        let mut s = m[row][4];
        for c in row + 1..4 {
            s -= m[row][c] * x[c];
        }
        x[row] = s / m[row][row];
    }
    x
}

#[test]
fn closed_form_matches_linear_solve() {
    for &(a, a0) in &[(1.0, 1.0), (0.5, 2.0), (2.0, 0.3)] {
        for j in 0..200 {
            let k = 1e-3 * (1e6f64).powf(j as f64 / 199.0);
            let s = double_delta_transmission(k, a, a0).unwrap();
            let (t, r) = matching_oracle(k, a, a0);
            assert!((s.t - t).norm() < 1e-10 * t.norm().max(1e-3), "k={k}: {} vs {t}", s.t);
            assert!((s.reflection - r.norm_sqr()).abs() < 1e-10);
        }
    }
}

#[test]
fn unitarity_over_six_decades() {
    for j in 0..1000 {
        let k = 1e-3 * (1e6f64).powf(j as f64 / 999.0);
        let s = double_delta_transmission(k, 1.0, 1.0).unwrap();
        assert!((s.transmission + s.reflection - 1.0).abs() < 1e-12, "k={k}");
    }
}

#[test]
fn transmission_resonances() {
    let ks: Vec<f64> = (1..=2000).map(|j| 10.0 * j as f64 / 2000.0).collect();
    let t: Vec<f64> = ks.iter().map(|&k| double_delta_transmission(k, 1.0, 1.0).unwrap().transmission).collect();
    let maxima = t.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count();
    assert!(maxima >= 3, "{maxima} maxima");
    assert!(double_delta_transmission(1e4, 1.0, 1.0).unwrap().transmission > 1.0 - 1e-6);
    assert!(double_delta_transmission(1e-3, 1.0, 1.0).unwrap().transmission < 1e-3);
}

#[test]
fn invalid_arguments() {
    assert!(double_delta_transmission(0.0, 1.0, 1.0).is_err());
    assert!(double_delta_transmission(f64::NAN, 1.0, 1.0).is_err());
    assert!(double_delta_transmission(1.0, 1.0, 0.0).is_err());
}

proptest! {
    #[test]
    fn unitarity_for_random_wells(k in 1e-3f64..1e3, a in 0.05f64..5.0, a0 in 0.05f64..5.0) {
        let s = double_delta_transmission(k, a, a0).unwrap();
        prop_assert!((s.transmission + s.reflection - 1.0).abs() < 1e-12);
        prop_assert!((s.transmission - s.t.norm_sqr()).abs() < 1e-15);
    }
}
