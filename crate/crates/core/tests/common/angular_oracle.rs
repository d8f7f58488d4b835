//! Reference angular-momentum coupling built from ladder operators.
//!
//! Coupled states |J M> are constructed explicitly in the product basis
//! |j1 m1>|j2 m2>: the top state of each J is fixed by orthogonality to all
//! higher J with the Condon–Shortley phase, then J- is applied repeatedly.
//! No Racah formula is involved.

use std::collections::HashMap;

/// All quantities are doubled integers.
pub struct CouplingTable {
    j1: i32,
    j2: i32,
    /// (J, M) -> vector over (m1) with m2 = M - m1.
    states: HashMap<(i32, i32), Vec<f64>>,
}

fn lowering(j: i32, m: i32) -> f64 {
    // J- |j m> = sqrt((j+m)(j-m+1)) |j m-1>, doubled inputs
    let jf = j as f64 / 2.0;
    let mf = m as f64 / 2.0;
    ((jf + mf) * (jf - mf + 1.0)).sqrt()
}

impl CouplingTable {
    pub fn new(j1: i32, j2: i32) -> Self {
        let dim = (j1 + 1) as usize;
        let idx = |m1: i32| ((m1 + j1) / 2) as usize;
        let mut states: HashMap<(i32, i32), Vec<f64>> = HashMap::new();
        let mut big_j = j1 + j2;
        while big_j >= (j1 - j2).abs() {
            // top state M = J
            let m = big_j;
            let mut v = vec![0.0; dim];
            // start from a generic vector supported on allowed m1
            for m1 in (-j1..=j1).step_by(2) {
                let m2 = m - m1;
                if m2.abs() <= j2 {
                    v[idx(m1)] = 1.0 + 0.137 * (m1 + j1) as f64;
                }
            }
            // orthogonalize against higher J with the same M (two passes)
            for _ in 0..2 {
                let mut higher = big_j + 2;
                while higher <= j1 + j2 {
                    let u = &states[&(higher, m)];
                    let d: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= d * ui;
                    }
                    higher += 2;
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            // Condon–Shortley: <j1 j1, j2 (J-j1) | J J> > 0
            let m1_top = j1;
            let lead = if (m - m1_top).abs() <= j2 {
                v[idx(m1_top)]
            } else {
                // stretched case where m1 = j1 is not reachable cannot
                // happen for J >= |j1-j2|, keep for safety
                v.iter().rev().copied().find(|x| x.abs() > 1e-12).unwrap()
            };
            if lead < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            states.insert((big_j, m), v.clone());
            // ladder down
            let mut cur = v;
            let mut mm = m;
            while mm > -big_j {
                let mut next = vec![0.0; dim];
                for m1 in (-j1..=j1).step_by(2) {
                    let c = cur[idx(m1)];
                    if c == 0.0 {
                        continue;
                    }
                    let m2 = mm - m1;
                    if m1 - 2 >= -j1 {
                        next[idx(m1 - 2)] += c * lowering(j1, m1);
                    }
                    if m2 - 2 >= -j2 {
                        // m2 lowered, m1 unchanged
                        next[idx(m1)] += c * lowering(j2, m2);
                    }
                }
                let f = lowering(big_j, mm);
                next.iter_mut().for_each(|x| *x /= f);
                mm -= 2;
                states.insert((big_j, mm), next.clone());
                cur = next;
            }
            big_j -= 2;
        }
        Self { j1, j2, states }
    }

    /// <j1 m1, j2 m2 | J M>, doubled arguments.
    pub fn cg(&self, m1: i32, m2: i32, big_j: i32, big_m: i32) -> f64 {
        if m1 + m2 != big_m || m1.abs() > self.j1 || m2.abs() > self.j2 {
            return 0.0;
        }
        match self.states.get(&(big_j, big_m)) {
            Some(v) => v[((m1 + self.j1) / 2) as usize],
            None => 0.0,
        }
    }
}

/// 3j symbol from ladder-operator CG coefficients (doubled arguments).
pub fn threej_ladder(tables: &mut HashMap<(i32, i32), CouplingTable>, j: [i32; 3], m: [i32; 3]) -> f64 {
    if m.iter().sum::<i32>() != 0 {
        return 0.0;
    }
    let t = tables
        .entry((j[0], j[1]))
        .or_insert_with(|| CouplingTable::new(j[0], j[1]));
    let cg = t.cg(m[0], m[1], j[2], -m[2]);
    let e = (j[0] - j[1] - m[2]) / 2;
    let sign = if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * cg / ((j[2] + 1) as f64).sqrt()
}

/// 6j from the contraction of four 3j symbols over every projection,
/// evaluated with the supplied 3j routine.
pub fn sixj_contraction(j: [i32; 6], threej: &mut dyn FnMut([i32; 3], [i32; 3]) -> f64) -> f64 {
    let [a, b, c, d, e, f] = j;
    let range = |x: i32| (-x..=x).step_by(2);
    let mut sum = 0.0;
    for m1 in range(a) {
        for m2 in range(b) {
            let m3 = -m1 - m2;
            if m3.abs() > c {
                continue;
            }
            for m5 in range(e) {
                // (j1 j5 j6; m1 -m5 m6): m6 = m5 - m1
                let m6 = m5 - m1;
                if m6.abs() > f {
                    continue;
                }
                // (j4 j2 j6; m4 m2 -m6): m4 = m6 - m2
                let m4 = m6 - m2;
                if m4.abs() > d {
                    continue;
                }
                // (j4 j5 j3; -m4 m5 m3): needs -m4 + m5 + m3 = 0
                if -m4 + m5 + m3 != 0 {
                    continue;
                }
                let s = (a - m1) + (b - m2) + (c - m3) + (d - m4) + (e - m5) + (f - m6);
                let sign = if (s / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                sum += sign
                    * threej([a, b, c], [-m1, -m2, -m3])
                    * threej([a, e, f], [m1, -m5, m6])
                    * threej([d, b, f], [m4, m2, -m6])
                    * threej([d, e, c], [-m4, m5, m3]);
            }
        }
    }
    sum
}
