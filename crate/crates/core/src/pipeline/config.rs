use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bspline::{BSplineBasis, KnotKind, KnotSequence};
use crate::ci::Symmetry;
use crate::error::{Error, Result};

/// One run of the pipeline, read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Nuclear charge `Z`.
    #[serde(default = "default_charge")]
    pub charge: f64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Label table; the bundled helium table is used when absent and `Z = 2`.
    #[serde(default)]
    pub labels: Option<PathBuf>,
    #[serde(default)]
    pub basis: BasisConfig,
    #[serde(default)]
    pub ci: CiConfig,
    #[serde(default)]
    pub density: DensityConfig,
    #[serde(default)]
    pub delta_demo: DeltaDemoConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    #[serde(default = "default_kind")]
    pub kind: KnotKind,
    #[serde(default = "default_order")]
    pub order: usize,
    /// Splines left after the two boundary ones are removed.
    #[serde(default = "default_splines")]
    pub splines: usize,
    /// First nonzero breakpoint (exponential kinds).
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_box")]
    pub box_radius: f64,
    /// Start of the linear part (exponential-linear only).
    #[serde(default)]
    pub junction: Option<f64>,
    /// Gauss points per breakpoint interval.
    #[serde(default = "default_quadrature")]
    pub quadrature_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CiConfig {
    #[serde(default = "default_blocks")]
    pub blocks: Vec<Symmetry>,
    #[serde(default = "default_l_max")]
    pub l_max: usize,
    /// Largest `n` per `l`; every orbital of each wave when absent.
    #[serde(default)]
    pub n_max: Option<Vec<usize>>,
    /// Remove the lowest s orbital and keep the states below the second
    /// threshold (resonances) instead of the bound states.
    #[serde(default)]
    pub q_projected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    /// Side of the square mesh the pair density is written on.
    #[serde(default = "default_pair_points")]
    pub pair_points: usize,
    #[serde(default = "default_pair_r_min")]
    pub pair_r_min: f64,
    #[serde(default = "default_pair_r_max")]
    pub pair_r_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaDemoConfig {
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default = "one")]
    pub a0: f64,
    #[serde(default = "default_k_min")]
    pub k_min: f64,
    #[serde(default = "default_k_max")]
    pub k_max: f64,
    #[serde(default = "default_k_points")]
    pub points: usize,
}

fn default_charge() -> f64 {
    2.0
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}
fn default_kind() -> KnotKind {
    KnotKind::Exponential
}
fn default_order() -> usize {
    7
}
fn default_splines() -> usize {
    25
}
fn default_delta() -> f64 {
    0.1
}
fn default_box() -> f64 {
    150.0
}
fn default_quadrature() -> usize {
    10
}
fn default_blocks() -> Vec<Symmetry> {
    vec!["1Se".parse().expect("valid built-in symmetry")]
}
fn default_l_max() -> usize {
    4
}
fn default_pair_points() -> usize {
    100
}
fn default_pair_r_min() -> f64 {
    0.01
}
fn default_pair_r_max() -> f64 {
    30.0
}
fn one() -> f64 {
    1.0
}
fn default_k_min() -> f64 {
    1e-3
}
fn default_k_max() -> f64 {
    10.0
}
fn default_k_points() -> usize {
    2000
}

impl Default for BasisConfig {
    fn default() -> Self {
        Self {
            kind: default_kind(),
            order: default_order(),
            splines: default_splines(),
            delta: default_delta(),
            box_radius: default_box(),
            junction: None,
            quadrature_points: default_quadrature(),
        }
    }
}

impl Default for CiConfig {
    fn default() -> Self {
        Self {
            blocks: default_blocks(),
            l_max: default_l_max(),
            n_max: None,
            q_projected: false,
        }
    }
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self {
            pair_points: default_pair_points(),
            pair_r_min: default_pair_r_min(),
            pair_r_max: default_pair_r_max(),
        }
    }
}

impl Default for DeltaDemoConfig {
    fn default() -> Self {
        Self {
            a: 1.0,
            a0: 1.0,
            k_min: default_k_min(),
            k_max: default_k_max(),
            points: default_k_points(),
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            charge: default_charge(),
            output: default_output(),
            labels: None,
            basis: BasisConfig::default(),
            ci: CiConfig::default(),
            density: DensityConfig::default(),
            delta_demo: DeltaDemoConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_string(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.charge > 0.0 && self.charge.is_finite()) {
            return bad(format!("charge must be positive, got {}", self.charge));
        }
        let b = &self.basis;
        if b.order < 3 {
            return bad(format!("basis.order must be at least 3, got {}", b.order));
        }
        if b.splines + 3 <= b.order {
            return bad(format!(
                "basis.splines = {} is too few for order {}: need at least {}",
                b.splines,
                b.order,
                b.order - 2
            ));
        }
        if b.quadrature_points == 0 {
            return bad("basis.quadrature_points must be positive".into());
        }
        if !(b.box_radius > 0.0 && b.box_radius.is_finite()) {
            return bad(format!("basis.box_radius must be positive, got {}", b.box_radius));
        }
        if b.kind != KnotKind::Linear && !(b.delta > 0.0 && b.delta < b.box_radius) {
            return bad(format!(
                "basis.delta must lie in (0, box_radius = {}), got {}",
                b.box_radius, b.delta
            ));
        }
        match (b.kind, b.junction) {
            (KnotKind::ExponentialLinear, None) => return bad("basis.junction is required for exponential-linear knots".into()),
            (KnotKind::ExponentialLinear, Some(j)) if !(j > b.delta && j < b.box_radius) => {
                return bad(format!("basis.junction must lie in (delta, box_radius), got {j}"))
            }
            (KnotKind::Linear | KnotKind::Exponential, Some(_)) => {
                return bad("basis.junction only applies to exponential-linear knots".into())
            }
            _ => {}
        }

        let ci = &self.ci;
        let mut seen = BTreeSet::new();
        for sym in &ci.blocks {
            if !seen.insert(sym.to_string()) {
                return bad(format!("block {sym} listed twice"));
            }
            if sym.l > ci.l_max {
                return bad(format!("ci.l_max = {} is below L = {} of block {sym}", ci.l_max, sym.l));
            }
            if sym.channels(ci.l_max).is_empty() {
                return bad(format!("block {sym} has no channel with l <= {}", ci.l_max));
            }
        }
        if let Some(n_max) = &ci.n_max {
            if n_max.len() != ci.l_max + 1 {
                return bad(format!(
                    "ci.n_max has {} entries but l_max = {} needs {}",
                    n_max.len(),
                    ci.l_max,
                    ci.l_max + 1
                ));
            }
            for (l, &n) in n_max.iter().enumerate() {
                if n <= l {
                    return bad(format!("ci.n_max[{l}] = {n} leaves no orbital (need n > l)"));
                }
            }
        }

        let d = &self.density;
        if d.pair_points < 2 || !(d.pair_r_min > 0.0 && d.pair_r_max > d.pair_r_min) {
            return bad(format!(
                "density mesh needs pair_points >= 2 and 0 < pair_r_min < pair_r_max, got {} points on [{}, {}]",
                d.pair_points, d.pair_r_min, d.pair_r_max
            ));
        }
        if d.pair_r_max > b.box_radius {
            return bad(format!(
                "density.pair_r_max = {} lies outside the box ({})",
                d.pair_r_max, b.box_radius
            ));
        }

        let dd = &self.delta_demo;
        if dd.a0 == 0.0 || !dd.a0.is_finite() || !dd.a.is_finite() {
            return bad(format!("delta_demo needs finite a and nonzero a0, got a = {}, a0 = {}", dd.a, dd.a0));
        }
        if !(dd.k_min > 0.0 && dd.k_max > dd.k_min) || dd.points < 2 {
            return bad(format!(
                "delta_demo needs 0 < k_min < k_max and points >= 2, got [{}, {}] with {}",
                dd.k_min, dd.k_max, dd.points
            ));
        }
        Ok(())
    }

    /// Largest `n` per `l` used to build the configuration bases.
    pub fn n_max(&self) -> Vec<usize> {
        match &self.ci.n_max {
            Some(v) => v.clone(),
            None => (0..=self.ci.l_max).map(|l| l + self.basis.splines).collect(),
        }
    }

    pub fn build_basis(&self) -> Result<BSplineBasis> {
        let b = &self.basis;
        // retained = intervals + order - 1 - 2
        let intervals = b.splines + 3 - b.order;
        let knots = match b.kind {
            KnotKind::Linear => KnotSequence::linear(0.0, b.box_radius, intervals, b.order)?,
            KnotKind::Exponential => KnotSequence::exponential(b.delta, b.box_radius, intervals, b.order)?,
            KnotKind::ExponentialLinear => {
                let junction = b.junction.ok_or_else(|| Error::Config("basis.junction missing".into()))?;
                let mut found = None;
                for m in 1..intervals {
                    let ks = KnotSequence::exponential_linear(b.delta, junction, b.box_radius, m, b.order)?;
                    if ks.intervals() == intervals {
                        found = Some(ks);
                        break;
                    }
                    if ks.intervals() > intervals {
                        break;
                    }
                }
                found.ok_or_else(|| {
                    Error::Config(format!(
                        "no exponential-linear sequence with junction {junction} gives {} splines",
                        b.splines
                    ))
                })?
            }
        };
        BSplineBasis::new(knots)
    }
}
