//! Wigner 3j and 6j symbols, Clebsch–Gordan coefficients and reduced
//! matrix elements of the renormalized spherical harmonic C^k.
//!
//! Angular momenta are stored doubled so half-integers stay exact. The
//! Racah sums run over log-factorials with a compensated accumulator.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Angular momentum `j`, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AngularMomentum(u32);

impl AngularMomentum {
    pub const ZERO: Self = Self(0);

    pub fn integer(j: u32) -> Self {
        Self(2 * j)
    }

    pub fn from_doubled(twice: u32) -> Self {
        Self(twice)
    }

    pub fn doubled(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Checked projection `m` of this momentum, `m` given doubled.
    pub fn projection(self, twice_m: i32) -> Result<Projection> {
        let j = self.0 as i32;
        if twice_m.abs() > j || (j - twice_m) % 2 != 0 {
            return Err(Error::QuantumNumbers(format!(
                "projection {}/2 not allowed for j = {}/2",
                twice_m, j
            )));
        }
        Ok(Projection(twice_m))
    }

    /// All projections `-j, -j+1, ..., j`.
    pub fn projections(self) -> impl Iterator<Item = Projection> {
        let j = self.0 as i32;
        (0..=self.0).map(move |s| Projection(-j + 2 * s as i32))
    }
}

/// Magnetic projection `m`, stored as `2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Projection(i32);

impl Projection {
    pub fn integer(m: i32) -> Self {
        Self(2 * m)
    }

    pub fn from_doubled(twice: i32) -> Self {
        Self(twice)
    }

    pub fn doubled(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl std::ops::Neg for Projection {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

const TABLE_LEN: usize = 512;

fn ln_factorials() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::with_capacity(TABLE_LEN);
        // Exact-as-possible products up to 170!, log-sums beyond.
        let mut prod = 1.0f64;
        out.push(0.0);
        for n in 1..TABLE_LEN {
            if n <= 170 {
                prod *= n as f64;
                out.push(prod.ln());
            } else {
                let prev = out[n - 1];
                out.push(prev + (n as f64).ln());
            }
        }
        out
    })
}

/// `ln(n!)` for a doubled argument that must be even and non-negative.
#[inline]
fn lnf(twice: i32) -> f64 {
    debug_assert!(twice >= 0 && twice % 2 == 0);
    ln_factorials()[(twice / 2) as usize]
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Triangle rule on doubled values, including the integrality of `a+b+c`.
fn triangle(a: i32, b: i32, c: i32) -> bool {
    c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0
}

/// `ln Δ(abc) = ln[(a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!]`, doubled arguments.
fn ln_delta(a: i32, b: i32, c: i32) -> f64 {
    lnf(a + b - c) + lnf(a - b + c) + lnf(-a + b + c) - lnf(a + b + c + 2)
}

#[inline]
fn phase(twice_exponent: i32) -> f64 {
    // (-1)^(x) with x = twice_exponent / 2 an integer
    if (twice_exponent / 2).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)`.
pub fn wigner_3j(
    j1: AngularMomentum,
    j2: AngularMomentum,
    j3: AngularMomentum,
    m1: Projection,
    m2: Projection,
    m3: Projection,
) -> f64 {
    let (a, b, c) = (j1.0 as i32, j2.0 as i32, j3.0 as i32);
    let (x, y, z) = (m1.0, m2.0, m3.0);
    if x + y + z != 0 || !triangle(a, b, c) {
        return 0.0;
    }
    if x.abs() > a || y.abs() > b || z.abs() > c {
        return 0.0;
    }
    if (a - x) % 2 != 0 || (b - y) % 2 != 0 || (c - z) % 2 != 0 {
        return 0.0;
    }
    let pre = 0.5
        * (ln_delta(a, b, c)
            + lnf(a + x)
            + lnf(a - x)
            + lnf(b + y)
            + lnf(b - y)
            + lnf(c + z)
            + lnf(c - z));
    // Summation index t (doubled) keeps every factorial argument >= 0.
    let t_min = 0.max(b - c - x).max(a - c + y);
    let t_max = (a + b - c).min(a - x).min(b + y);
    let mut acc = Compensated::default();
    let mut t = t_min;
    while t <= t_max {
        let den = lnf(t)
            + lnf(c - b + t + x)
            + lnf(c - a + t - y)
            + lnf(a + b - c - t)
            + lnf(a - t - x)
            + lnf(b - t + y);
        acc.add(phase(t) * (pre - den).exp());
        t += 2;
    }
    phase(a - b - z) * acc.value()
}

/// 3j symbol with integer arguments.
pub fn threej(l1: u32, l2: u32, l3: u32, m1: i32, m2: i32, m3: i32) -> f64 {
    wigner_3j(
        AngularMomentum::integer(l1),
        AngularMomentum::integer(l2),
        AngularMomentum::integer(l3),
        Projection::integer(m1),
        Projection::integer(m2),
        Projection::integer(m3),
    )
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}`.
pub fn wigner_6j(
    j1: AngularMomentum,
    j2: AngularMomentum,
    j3: AngularMomentum,
    j4: AngularMomentum,
    j5: AngularMomentum,
    j6: AngularMomentum,
) -> f64 {
    let (a, b, c) = (j1.0 as i32, j2.0 as i32, j3.0 as i32);
    let (d, e, f) = (j4.0 as i32, j5.0 as i32, j6.0 as i32);
    let triads = [(a, b, c), (a, e, f), (d, b, f), (d, e, c)];
    if triads.iter().any(|&(p, q, r)| !triangle(p, q, r)) {
        return 0.0;
    }
    let pre = 0.5 * triads.iter().map(|&(p, q, r)| ln_delta(p, q, r)).sum::<f64>();
    let sums = triads.map(|(p, q, r)| p + q + r);
    let t_min = *sums.iter().max().unwrap();
    let t_max = (a + b + d + e).min(b + c + e + f).min(c + a + f + d);
    let mut acc = Compensated::default();
    let mut t = t_min;
    while t <= t_max {
        let den = sums.iter().map(|&s| lnf(t - s)).sum::<f64>()
            + lnf(a + b + d + e - t)
            + lnf(b + c + e + f - t)
            + lnf(c + a + f + d - t);
        acc.add(phase(t) * (pre + lnf(t + 2) - den).exp());
        t += 2;
    }
    acc.value()
}

/// 6j symbol with integer arguments.
pub fn sixj(l1: u32, l2: u32, l3: u32, l4: u32, l5: u32, l6: u32) -> f64 {
    let i = AngularMomentum::integer;
    wigner_6j(i(l1), i(l2), i(l3), i(l4), i(l5), i(l6))
}

/// Clebsch–Gordan coefficient `<j1 m1, j2 m2 | J M>`.
pub fn clebsch_gordan(
    j1: AngularMomentum,
    m1: Projection,
    j2: AngularMomentum,
    m2: Projection,
    j: AngularMomentum,
    m: Projection,
) -> f64 {
    if m1.0 + m2.0 != m.0 {
        return 0.0;
    }
    let w = wigner_3j(j1, j2, j, m1, m2, -m);
    if w == 0.0 {
        return 0.0;
    }
    let e = j1.0 as i32 - j2.0 as i32 + m.0;
    phase(e) * ((j.0 + 1) as f64).sqrt() * w
}

/// `<l || C^k || l'> = (-1)^l sqrt((2l+1)(2l'+1)) (l k l'; 0 0 0)`.
pub fn reduced_c_tensor(l: u32, k: u32, l_prime: u32) -> f64 {
    let w = threej(l, k, l_prime, 0, 0, 0);
    if w == 0.0 {
        return 0.0;
    }
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * (((2 * l + 1) * (2 * l_prime + 1)) as f64).sqrt() * w
}
