use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnotKind {
    Linear,
    Exponential,
    ExponentialLinear,
}

/// Breakpoints plus the knot vector of order-`k` B-splines on them.
///
/// End breakpoints carry multiplicity `k`, interior ones multiplicity 1, so
/// `m` intervals give `m + k - 1` splines.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotSequence {
    breakpoints: Vec<f64>,
    order: usize,
    knots: Vec<f64>,
    kind: KnotKind,
}

impl KnotSequence {
    pub fn from_breakpoints(breakpoints: Vec<f64>, order: usize, kind: KnotKind) -> Result<Self> {
        if order < 1 {
            return Err(Error::Knots("spline order must be at least 1".into()));
        }
        if breakpoints.len() < 2 {
            return Err(Error::Knots("need at least two breakpoints".into()));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::Knots(format!(
                "breakpoints not strictly increasing near {} / {}",
                w[0], w[1]
            )));
        }
        if breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(Error::Knots("non-finite breakpoint".into()));
        }
        let first = breakpoints[0];
        let last = *breakpoints.last().unwrap();
        let mut knots = Vec::with_capacity(breakpoints.len() + 2 * order);
        knots.extend(std::iter::repeat_n(first, order));
        knots.extend_from_slice(&breakpoints[1..breakpoints.len() - 1]);
        knots.extend(std::iter::repeat_n(last, order));
        Ok(Self {
            breakpoints,
            order,
            knots,
            kind,
        })
    }

    /// Equally spaced breakpoints `r_min + j (r_max - r_min) / segments`.
    pub fn linear(r_min: f64, r_max: f64, segments: usize, order: usize) -> Result<Self> {
        if segments == 0 {
            return Err(Error::Knots("segment count must be positive".into()));
        }
        if !(r_min < r_max) {
            return Err(Error::Knots(format!("r_min = {r_min} must be below r_max = {r_max}")));
        }
        let h = (r_max - r_min) / segments as f64;
        let mut bp: Vec<f64> = (0..=segments).map(|j| r_min + h * j as f64).collect();
        bp[segments] = r_max;
        Self::from_breakpoints(bp, order, KnotKind::Linear)
    }

    /// `0` followed by `delta * exp(alpha * j)`, `j = 0..segments-1`, with
    /// `alpha` chosen so the last breakpoint is `box_radius`.
    ///
    /// `segments` counts every interval, including `[0, delta]`.
    pub fn exponential(delta: f64, box_radius: f64, segments: usize, order: usize) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::Knots(format!("delta must be positive, got {delta}")));
        }
        if !(delta < box_radius) {
            return Err(Error::Knots(format!(
                "delta = {delta} must be below the box radius {box_radius}"
            )));
        }
        if segments < 2 {
            return Err(Error::Knots(
                "an exponential sequence needs at least two segments".into(),
            ));
        }
        let bp = exponential_points(delta, box_radius, segments - 1);
        let mut all = Vec::with_capacity(segments + 1);
        all.push(0.0);
        all.extend(bp);
        Self::from_breakpoints(all, order, KnotKind::Exponential)
    }

    /// Exponential breakpoints from `delta` up to `junction`, then equal
    /// steps up to `box_radius`.
    ///
    /// The linear step is the width of the last exponential interval,
    /// rounded so an integer number of steps reaches the box edge.
    pub fn exponential_linear(
        delta: f64,
        junction: f64,
        box_radius: f64,
        exponential_segments: usize,
        order: usize,
    ) -> Result<Self> {
        if !(delta > 0.0 && delta < junction && junction < box_radius) {
            return Err(Error::Knots(format!(
                "need 0 < delta ({delta}) < junction ({junction}) < box radius ({box_radius})"
            )));
        }
        if exponential_segments < 1 {
            return Err(Error::Knots("need at least one exponential segment".into()));
        }
        let exp = exponential_points(delta, junction, exponential_segments);
        let last_step = exp[exp.len() - 1] - exp[exp.len() - 2];
        let steps = ((box_radius - junction) / last_step).round().max(1.0) as usize;
        let h = (box_radius - junction) / steps as f64;
        let mut all = Vec::with_capacity(exp.len() + steps + 1);
        all.push(0.0);
        all.extend(exp);
        for j in 1..=steps {
            all.push(junction + h * j as f64);
        }
        *all.last_mut().unwrap() = box_radius;
        Self::from_breakpoints(all, order, KnotKind::ExponentialLinear)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> KnotKind {
        self.kind
    }

    pub fn intervals(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Number of B-splines before boundary removal.
    pub fn spline_count(&self) -> usize {
        self.intervals() + self.order - 1
    }

    pub fn start(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// Same sequence with every breakpoint multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_breakpoints(
            self.breakpoints.iter().map(|x| x * factor).collect(),
            self.order,
            self.kind,
        )
    }
}

/// `intervals + 1` points `delta * exp(alpha j)` ending exactly at `end`.
fn exponential_points(delta: f64, end: f64, intervals: usize) -> Vec<f64> {
    if intervals == 0 {
        return vec![delta];
    }
    let alpha = (end / delta).ln() / intervals as f64;
    let mut pts: Vec<f64> = (0..=intervals)
        .map(|j| delta * (alpha * j as f64).exp())
        .collect();
    pts[intervals] = end;
    pts
}
