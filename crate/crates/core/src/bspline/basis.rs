use super::knots::KnotSequence;
use super::quadrature::QuadratureRule;
use crate::error::{Error, Result};

/// B-splines on a knot sequence, with the first and last spline dropped so
/// every retained function vanishes at both ends of the box.
///
/// Indices passed to and returned from the evaluation routines are *full*
/// indices `0..full_len()`; the retained set is `1..full_len()-1`, exposed
/// in reduced numbering `0..len()` through [`BSplineBasis::reduced`].
#[derive(Debug, Clone, PartialEq)]
pub struct BSplineBasis {
    knots: KnotSequence,
}

/// The `k` splines that may be non-zero at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSplines {
    /// Full index of the last non-zero spline; the values belong to
    /// `left + 1 - k ..= left`.
    pub left: usize,
    pub values: Vec<f64>,
}

impl LocalSplines {
    pub fn first(&self) -> usize {
        self.left + 1 - self.values.len()
    }
}

/// Values and derivatives of the local splines: `derivs[d][r]` is the
/// `d`-th derivative of spline `first + r`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDerivatives {
    pub left: usize,
    pub derivs: Vec<Vec<f64>>,
}

impl LocalDerivatives {
    pub fn first(&self) -> usize {
        self.left + 1 - self.derivs[0].len()
    }
}

impl BSplineBasis {
    pub fn new(knots: KnotSequence) -> Result<Self> {
        if knots.spline_count() < 3 {
            return Err(Error::Knots(format!(
                "{} splines leave nothing after removing the boundary splines",
                knots.spline_count()
            )));
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &KnotSequence {
        &self.knots
    }

    pub fn order(&self) -> usize {
        self.knots.order()
    }

    /// Number of retained splines.
    pub fn len(&self) -> usize {
        self.full_len() - 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn full_len(&self) -> usize {
        self.knots.spline_count()
    }

    pub fn box_radius(&self) -> f64 {
        self.knots.end()
    }

    /// Reduced index of a full index, `None` for the two dropped splines.
    pub fn reduced(&self, full: usize) -> Option<usize> {
        if full == 0 || full + 1 >= self.full_len() {
            None
        } else {
            Some(full - 1)
        }
    }

    /// Support `[t_i, t_{i+k}]` of full spline `i`.
    pub fn support(&self, full: usize) -> (f64, f64) {
        let t = self.knots.knots();
        (t[full], t[full + self.order()])
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (a, b) = (self.knots.start(), self.knots.end());
        if !(x >= a && x <= b) {
            return Err(Error::OutOfBox { x, box_radius: b });
        }
        Ok(())
    }

    /// Knot interval `t[left] <= x < t[left+1]`; the right end of the box
    /// belongs to the last non-empty interval.
    fn interval(&self, x: f64) -> usize {
        let t = self.knots.knots();
        let k = self.order();
        let n = self.full_len();
        if x >= t[n] {
            return n - 1;
        }
        // t[k-1..=n] is strictly increasing: binary search there.
        let slice = &t[k - 1..=n];
        let pos = slice.partition_point(|&v| v <= x);
        (pos - 1 + k - 1).min(n - 1)
    }

    /// Splines of every order `1..=k` at `x` (Cox–de Boor, built up from the
    /// order-1 indicator). `out[m-1]` holds the `m` values of order `m`.
    fn all_orders(&self, x: f64, left: usize) -> Vec<Vec<f64>> {
        let t = self.knots.knots();
        let k = self.order();
        let mut out = Vec::with_capacity(k);
        let mut vals = vec![1.0];
        let mut dl = vec![0.0; k];
        let mut dr = vec![0.0; k];
        out.push(vals.clone());
        for j in 1..k {
            dl[j] = x - t[left + 1 - j];
            dr[j] = t[left + j] - x;
            let mut next = vec![0.0; j + 1];
            let mut saved = 0.0;
            for r in 0..j {
                let denom = dr[r + 1] + dl[j - r];
                let temp = if denom != 0.0 { vals[r] / denom } else { 0.0 };
                next[r] = saved + dr[r + 1] * temp;
                saved = dl[j - r] * temp;
            }
            next[j] = saved;
            vals = next;
            out.push(vals.clone());
        }
        out
    }

    /// The `k` splines that can be non-zero at `x`.
    pub fn eval(&self, x: f64) -> Result<LocalSplines> {
        self.check_domain(x)?;
        let left = self.interval(x);
        let mut orders = self.all_orders(x, left);
        Ok(LocalSplines {
            left,
            values: orders.pop().unwrap(),
        })
    }

    /// Value of full spline `i` at `x`; exactly zero off its support.
    pub fn value(&self, i: usize, x: f64) -> Result<f64> {
        let loc = self.eval(x)?;
        let first = loc.first();
        Ok(if i >= first && i <= loc.left {
            loc.values[i - first]
        } else {
            0.0
        })
    }

    /// Derivatives of orders `0..=max_order` of the local splines.
    pub fn eval_derivatives(&self, x: f64, max_order: usize) -> Result<LocalDerivatives> {
        let k = self.order();
        if max_order >= k {
            return Err(Error::DerivativeOrder {
                order: max_order,
                spline_order: k,
            });
        }
        self.check_domain(x)?;
        let left = self.interval(x);
        let orders = self.all_orders(x, left);
        let t = self.knots.knots();
        let mut derivs = vec![vec![0.0; k]; max_order + 1];
        derivs[0].copy_from_slice(&orders[k - 1]);
        for r in 0..k {
            // Coefficients of d^d/dx^d B_{left+1-k+r} over splines of order
            // k-d; differentiate one order at a time.
            let mut coef = vec![0.0; k];
            coef[r] = 1.0;
            let mut m = k;
            for d in 1..=max_order {
                // coef indexed by global j = left+1-m .. left (length m);
                // new coefficients live on left+2-m .. left (length m-1).
                let lo_old = left + 1 - m;
                let mut next = vec![0.0; m - 1];
                for (s, slot) in next.iter_mut().enumerate() {
                    let j = lo_old + 1 + s;
                    let denom = t[j + m - 1] - t[j];
                    if denom > 0.0 {
                        let cj = coef[j - lo_old];
                        let cjm = coef[j - 1 - lo_old];
                        *slot = (m as f64 - 1.0) * (cj - cjm) / denom;
                    }
                }
                m -= 1;
                coef = next;
                let vals = &orders[m - 1];
                derivs[d][r] = coef.iter().zip(vals).map(|(c, v)| c * v).sum();
            }
        }
        Ok(LocalDerivatives { left, derivs })
    }

    /// Value of `sum_i c_i B_i(x)` over the retained splines.
    pub fn combine(&self, coefficients: &[f64], x: f64) -> Result<f64> {
        let loc = self.eval(x)?;
        Ok(self.dot_local(coefficients, loc.first(), &loc.values))
    }

    /// `d`-th derivative of `sum_i c_i B_i` over the retained splines.
    pub fn combine_derivative(&self, coefficients: &[f64], x: f64, order: usize) -> Result<f64> {
        let loc = self.eval_derivatives(x, order)?;
        Ok(self.dot_local(coefficients, loc.first(), &loc.derivs[order]))
    }

    fn dot_local(&self, coefficients: &[f64], first: usize, vals: &[f64]) -> f64 {
        vals.iter()
            .enumerate()
            .filter_map(|(r, v)| self.reduced(first + r).map(|i| coefficients[i] * v))
            .sum()
    }

    /// Composite Gauss rule with `points` nodes on every breakpoint interval.
    pub fn quadrature(&self, points: usize) -> Result<QuadratureRule> {
        QuadratureRule::composite(self.knots.breakpoints(), points)
    }

    /// Splines and first two derivatives tabulated on a quadrature rule.
    pub fn tabulate(&self, rule: &QuadratureRule) -> Result<SplineTable> {
        let k = self.order();
        let max_d = 2.min(k - 1);
        let mut rows = Vec::with_capacity(rule.len());
        for &x in &rule.nodes {
            let d = self.eval_derivatives(x, max_d)?;
            let mut derivs = d.derivs;
            while derivs.len() < 3 {
                derivs.push(vec![0.0; k]);
            }
            rows.push(TableRow {
                first: d.left + 1 - k,
                value: std::mem::take(&mut derivs[0]),
                first_derivative: std::mem::take(&mut derivs[1]),
                second_derivative: std::mem::take(&mut derivs[2]),
            });
        }
        Ok(SplineTable {
            nodes: rule.nodes.clone(),
            weights: rule.weights.clone(),
            rows,
            full_len: self.full_len(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct TableRow {
    /// Full index of the first local spline.
    pub first: usize,
    pub value: Vec<f64>,
    pub first_derivative: Vec<f64>,
    pub second_derivative: Vec<f64>,
}

/// Local spline values at every node of a quadrature rule.
#[derive(Debug, Clone)]
pub struct SplineTable {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub rows: Vec<TableRow>,
    full_len: usize,
}

impl SplineTable {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Reduced index for a full index, as in [`BSplineBasis::reduced`].
    #[inline]
    pub fn reduced(&self, full: usize) -> Option<usize> {
        if full == 0 || full + 1 >= self.full_len {
            None
        } else {
            Some(full - 1)
        }
    }

    /// `sum_i c_i B_i` at every node (retained coefficients).
    pub fn combine(&self, coefficients: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| self.local_dot(coefficients, row.first, &row.value))
            .collect()
    }

    pub fn combine_derivative(&self, coefficients: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| self.local_dot(coefficients, row.first, &row.first_derivative))
            .collect()
    }

    #[inline]
    fn local_dot(&self, coefficients: &[f64], first: usize, vals: &[f64]) -> f64 {
        let mut s = 0.0;
        for (r, v) in vals.iter().enumerate() {
            if let Some(i) = self.reduced(first + r) {
                s += coefficients[i] * v;
            }
        }
        s
    }

    /// Projection `b_i = sum_q w_q B_i(x_q) f(x_q)` onto the retained splines.
    pub fn project(&self, samples: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for ((row, &w), &f) in self.rows.iter().zip(&self.weights).zip(samples) {
            let wf = w * f;
            if wf == 0.0 {
                continue;
            }
            for (r, v) in row.value.iter().enumerate() {
                if let Some(i) = self.reduced(row.first + r) {
                    out[i] += wf * v;
                }
            }
        }
    }
}
