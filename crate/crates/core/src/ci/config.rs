use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbitals::OrbitalSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(l_sum: usize) -> Self {
        if l_sum.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

const L_LETTERS: &[u8] = b"SPDFGHIKLMNOQRTUV";

/// Two-electron LS symmetry block `^{2S+1}L^{parity}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symmetry {
    pub l: usize,
    /// Total spin, 0 (singlet) or 1 (triplet).
    pub spin: usize,
    pub parity: Parity,
}

impl Symmetry {
    pub fn new(l: usize, spin: usize, parity: Parity) -> Result<Self> {
        if spin > 1 {
            return Err(Error::QuantumNumbers(format!(
                "two electrons couple to S = 0 or 1, got {spin}"
            )));
        }
        Ok(Self { l, spin, parity })
    }

    pub fn multiplicity(&self) -> usize {
        2 * self.spin + 1
    }

    /// Whether the ordered channel `(la, lb)` can couple to this block.
    pub fn admits(&self, la: usize, lb: usize) -> bool {
        la.abs_diff(lb) <= self.l && self.l <= la + lb && Parity::of(la + lb) == self.parity
    }

    /// Every channel `la <= lb <= l_max` compatible with the block.
    pub fn channels(&self, l_max: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for la in 0..=l_max {
            for lb in la..=l_max {
                if self.admits(la, lb) {
                    out.push((la, lb));
                }
            }
        }
        out
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = L_LETTERS.get(self.l).map(|&c| c as char).unwrap_or('?');
        let p = match self.parity {
            Parity::Even => 'e',
            Parity::Odd => 'o',
        };
        write!(f, "{}{}{}", self.multiplicity(), letter, p)
    }
}

impl FromStr for Symmetry {
    type Err = Error;

    /// Parses labels such as `1Se`, `3Po`, `1De`.
    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.trim().as_bytes();
        let bad = || Error::QuantumNumbers(format!("cannot parse symmetry label {s:?}"));
        if bytes.len() != 3 {
            return Err(bad());
        }
        let spin = match bytes[0] {
            b'1' => 0,
            b'3' => 1,
            _ => return Err(bad()),
        };
        let l = L_LETTERS
            .iter()
            .position(|&c| c == bytes[1].to_ascii_uppercase())
            .ok_or_else(bad)?;
        let parity = match bytes[2] {
            b'e' | b'E' => Parity::Even,
            b'o' | b'O' => Parity::Odd,
            _ => return Err(bad()),
        };
        Symmetry::new(l, spin, parity)
    }
}

impl Serialize for Symmetry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Symmetry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Orbital label `n l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitalLabel {
    pub n: usize,
    pub l: usize,
}

impl OrbitalLabel {
    pub fn new(n: usize, l: usize) -> Self {
        Self { n, l }
    }
}

impl fmt::Display for OrbitalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = L_LETTERS.get(self.l).map(|&c| (c as char).to_ascii_lowercase()).unwrap_or('?');
        write!(f, "{}{}", self.n, letter)
    }
}

/// Antisymmetrized LS-coupled pair `{a, b}`, canonically `(l_a, n_a) <= (l_b, n_b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub a: OrbitalLabel,
    pub b: OrbitalLabel,
}

impl Configuration {
    pub fn new(a: OrbitalLabel, b: OrbitalLabel) -> Self {
        if (b.l, b.n) < (a.l, a.n) {
            Self { a: b, b: a }
        } else {
            Self { a, b }
        }
    }

    pub fn equivalent(&self) -> bool {
        self.a == self.b
    }

    pub fn contains(&self, orbital: OrbitalLabel) -> bool {
        self.a == orbital || self.b == orbital
    }

    /// Whether the configuration exists in the block: triangle, parity
    /// and, for equivalent electrons, `L + S` even.
    pub fn allowed_in(&self, sym: &Symmetry) -> bool {
        sym.admits(self.a.l, self.b.l) && (!self.equivalent() || (sym.l + sym.spin).is_multiple_of(2))
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.equivalent() {
            write!(f, "{}^2", self.a)
        } else {
            write!(f, "{}{}", self.a, self.b)
        }
    }
}

/// Ordered configuration list of one symmetry block.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationBasis {
    symmetry: Symmetry,
    channels: Vec<(usize, usize)>,
    n_max: Vec<usize>,
    q_projected: bool,
    configs: Vec<Configuration>,
}

impl ConfigurationBasis {
    /// Enumerate every configuration of the given channels with
    /// `n <= n_max[l]` (limited further by the orbitals available). With
    /// `q_projected`, configurations holding the lowest s orbital are
    /// removed.
    pub fn build(
        symmetry: Symmetry,
        channels: &[(usize, usize)],
        n_max: &[usize],
        orbitals: &OrbitalSet,
        q_projected: bool,
    ) -> Result<Self> {
        let mut chans: Vec<(usize, usize)> = Vec::with_capacity(channels.len());
        for &(x, y) in channels {
            let (la, lb) = (x.min(y), x.max(y));
            if !symmetry.admits(la, lb) {
                return Err(Error::SymmetryMismatch(
                    format!("channel ({la},{lb})"),
                    symmetry.to_string(),
                ));
            }
            if lb > orbitals.l_max() {
                return Err(Error::Config(format!(
                    "channel ({la},{lb}) needs l = {lb} orbitals but only l <= {} were computed",
                    orbitals.l_max()
                )));
            }
            if lb >= n_max.len() {
                return Err(Error::Config(format!("no n_max given for l = {lb}")));
            }
            if !chans.contains(&(la, lb)) {
                chans.push((la, lb));
            }
        }
        let top = |l: usize| n_max[l].min(l + orbitals.partial_wave(l).len());
        let lowest_s = OrbitalLabel::new(1, 0);
        let mut configs = Vec::new();
        for &(la, lb) in &chans {
            for na in la + 1..=top(la) {
                let nb_start = if la == lb { na } else { lb + 1 };
                for nb in nb_start..=top(lb) {
                    let c = Configuration::new(OrbitalLabel::new(na, la), OrbitalLabel::new(nb, lb));
                    if !c.allowed_in(&symmetry) {
                        continue;
                    }
                    if q_projected && c.contains(lowest_s) {
                        continue;
                    }
                    configs.push(c);
                }
            }
        }
        if configs.is_empty() {
            return Err(Error::EmptyBasis(symmetry.to_string()));
        }
        Ok(Self {
            symmetry,
            channels: chans,
            n_max: n_max.to_vec(),
            q_projected,
            configs,
        })
    }

    /// The same basis with every configuration holding the lowest s
    /// orbital removed; a no-op on an already projected basis.
    pub fn q_project(&self) -> Result<Self> {
        let lowest_s = OrbitalLabel::new(1, 0);
        let configs: Vec<_> = self.configs.iter().copied().filter(|c| !c.contains(lowest_s)).collect();
        if configs.is_empty() {
            return Err(Error::EmptyBasis(self.symmetry.to_string()));
        }
        Ok(Self {
            configs,
            q_projected: true,
            ..self.clone()
        })
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn channels(&self) -> &[(usize, usize)] {
        &self.channels
    }

    pub fn n_max(&self) -> &[usize] {
        &self.n_max
    }

    pub fn q_projected(&self) -> bool {
        self.q_projected
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    /// Highest angular momentum of any orbital in the basis.
    pub fn l_max(&self) -> usize {
        self.channels.iter().map(|&(_, lb)| lb).max().unwrap_or(0)
    }

    /// Number of configurations per channel, in channel order.
    pub fn channel_counts(&self) -> Vec<((usize, usize), usize)> {
        self.channels
            .iter()
            .map(|&ch| (ch, self.configs.iter().filter(|c| (c.a.l, c.b.l) == ch).count()))
            .collect()
    }
}
