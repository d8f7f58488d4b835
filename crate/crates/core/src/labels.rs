//! `(K, T)^A` classification of doubly excited states and its attachment to
//! computed resonance spectra.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ci::Symmetry;
use crate::density::DiagonalCharacter;
use crate::error::{Error, Result};

/// `n1 (K, T)^A n2` label of one resonance in a block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KTLabel {
    pub block: Symmetry,
    pub k: i32,
    pub t: u32,
    pub a: i32,
    pub n1: u32,
    pub n2: u32,
    /// Tabulated position used for matching, hartree.
    pub energy: f64,
}

impl KTLabel {
    pub fn validate(&self) -> Result<()> {
        let n1 = self.n1 as i64;
        if self.n1 == 0 || self.n2 < self.n1 {
            return Err(Error::QuantumNumbers(format!("{self}: need 1 <= n1 <= n2")));
        }
        if self.t as usize > self.block.l || self.t as i64 > n1 - 1 {
            return Err(Error::QuantumNumbers(format!("{self}: T must not exceed min(L, n1 - 1)")));
        }
        if (self.k as i64).abs() > n1 - 1 - self.t as i64 {
            return Err(Error::QuantumNumbers(format!("{self}: |K| must not exceed n1 - 1 - T")));
        }
        if !(-1..=1).contains(&self.a) {
            return Err(Error::QuantumNumbers(format!("{self}: A must be -1, 0 or +1")));
        }
        Ok(())
    }

    /// Series key `(K, T, A)`.
    pub fn series(&self) -> (i32, u32, i32) {
        (self.k, self.t, self.a)
    }
}

impl fmt::Display for KTLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.a {
            1 => "+",
            -1 => "-",
            _ => "0",
        };
        write!(f, "{}({},{}){}_{} {}", self.n1, self.k, self.t, a, self.n2, self.block)
    }
}

/// Labels of every block, read from a comma-separated table with columns
/// `block,K,T,A,n1,n2,energy`. Blank lines and `#` comments are skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabelTable {
    pub labels: Vec<KTLabel>,
}

impl LabelTable {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut labels = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with("block") {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: format!("{origin}:{}", no + 1),
                message,
            };
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 7 {
                return Err(err(format!("expected 7 columns, found {}", cols.len())));
            }
            let block: Symmetry = cols[0].parse().map_err(|e: Error| err(e.to_string()))?;
            let int = |s: &str| s.parse::<i32>().map_err(|e| err(format!("{s:?}: {e}")));
            let uint = |s: &str| s.parse::<u32>().map_err(|e| err(format!("{s:?}: {e}")));
            let label = KTLabel {
                block,
                k: int(cols[1])?,
                t: uint(cols[2])?,
                a: int(cols[3])?,
                n1: uint(cols[4])?,
                n2: uint(cols[5])?,
                energy: cols[6].parse().map_err(|e| err(format!("{:?}: {e}", cols[6])))?,
            };
            label.validate().map_err(|e| err(e.to_string()))?;
            labels.push(label);
        }
        Ok(Self { labels })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Labels of one block sorted by energy.
    pub fn block(&self, sym: Symmetry) -> Vec<KTLabel> {
        let mut v: Vec<KTLabel> = self.labels.iter().filter(|l| l.block == sym).copied().collect();
        v.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        v
    }
}

/// Within this distance (hartree) two labels of different series are
/// considered interleaved.
pub const AMBIGUITY_WINDOW: f64 = 1e-3;
/// Matches farther than this from the tabulated position are flagged.
pub const MATCH_TOLERANCE: f64 = 1e-3;

/// One state of a labeled spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledState {
    pub index: usize,
    pub energy: f64,
    pub label: Option<KTLabel>,
    /// Label sits within [`AMBIGUITY_WINDOW`] of another series.
    pub ambiguous: bool,
    /// Distance to the tabulated position exceeds [`MATCH_TOLERANCE`].
    pub off_position: bool,
    /// Agreement of the diagonal diagnostic with `A`, when both exist and
    /// `A != 0`.
    pub a_consistent: Option<bool>,
}

/// Assign the block's labels to resonance energies (ascending).
///
/// The match preserves energy order and minimizes the total distance
/// between computed and tabulated positions, so states missing from the
/// table stay unlabeled.
pub fn attach_labels(
    sym: Symmetry,
    energies: &[f64],
    table: &LabelTable,
    diagnostics: Option<&[DiagonalCharacter]>,
) -> Result<Vec<LabeledState>> {
    let labels = table.block(sym);
    if labels.len() > energies.len() {
        return Err(Error::TooManyLabels {
            block: sym.to_string(),
            labels: labels.len(),
            states: energies.len(),
        });
    }
    let assignment = monotone_match(&labels.iter().map(|l| l.energy).collect::<Vec<_>>(), energies);
    let mut out: Vec<LabeledState> = energies
        .iter()
        .enumerate()
        .map(|(index, &energy)| LabeledState {
            index,
            energy,
            label: None,
            ambiguous: false,
            off_position: false,
            a_consistent: None,
        })
        .collect();
    for (li, &si) in assignment.iter().enumerate() {
        let label = labels[li];
        let ambiguous = labels
            .iter()
            .any(|o| o.series() != label.series() && (o.energy - label.energy).abs() < AMBIGUITY_WINDOW);
        let st = &mut out[si];
        st.off_position = (st.energy - label.energy).abs() > MATCH_TOLERANCE;
        st.ambiguous = ambiguous;
        st.label = Some(label);
        if let Some(d) = diagnostics.and_then(|d| d.get(si)) {
            if label.a != 0 {
                st.a_consistent = Some(d.a_value() == label.a);
            }
        }
    }
    Ok(out)
}

/// Order-preserving assignment of every target to a distinct state that
/// minimizes the summed absolute distance. Returns the state index of each
/// target. Requires `targets.len() <= states.len()`.
fn monotone_match(targets: &[f64], states: &[f64]) -> Vec<usize> {
    let (m, n) = (targets.len(), states.len());
    if m == 0 {
        return Vec::new();
    }
    // cost[i][j]: best total for the first i targets using the first j states
    let inf = f64::INFINITY;
    let mut cost = vec![vec![inf; n + 1]; m + 1];
    let mut took = vec![vec![false; n + 1]; m + 1];
    cost[0].iter_mut().for_each(|c| *c = 0.0);
    for i in 1..=m {
        for j in i..=n {
            let skip = cost[i][j - 1];
            let take = cost[i - 1][j - 1] + (targets[i - 1] - states[j - 1]).abs();
            if take <= skip {
                cost[i][j] = take;
                took[i][j] = true;
            } else {
                cost[i][j] = skip;
            }
        }
    }
    let mut out = vec![0; m];
    let (mut i, mut j) = (m, n);
    while i > 0 {
        if took[i][j] {
            out[i - 1] = j - 1;
            i -= 1;
        }
        j -= 1;
    }
    out
}

/// Label table shipped with the crate.
pub const BUNDLED_LABELS: &str = include_str!("../data/resonance_labels.csv");

pub fn bundled() -> LabelTable {
    LabelTable::parse(BUNDLED_LABELS, "resonance_labels.csv").expect("bundled label table parses")
}
