use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::groups::{DotPairing, FiniteAbelian, PGroupType, ENUMERATION_LIMIT};
use crate::linalg::Symmetry;

/// The constraint pair `(U, B)` on `G²` attached to each random model.
///
/// With `x = (g, h)`, `y = (g', h')` and `·` the standard pairing:
/// - `U1B1` (non-symmetric): `U = g·h`, `B(x, y) = g·h'`
/// - `U2B2` (symmetric): `U = g·h`, `B(x, y) = g·h' + g'·h`
/// - `U3B3` (alternating): `U = 0`, `B(x, y) = g·h' − g'·h`
/// - `U4B4` (graph): `U = 0`, `B(x, y) = −(g − g')·(h − h')`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    #[serde(rename = "u1b1")]
    U1B1,
    #[serde(rename = "u2b2")]
    U2B2,
    #[serde(rename = "u3b3")]
    U3B3,
    #[serde(rename = "u4b4")]
    U4B4,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [Flavor::U1B1, Flavor::U2B2, Flavor::U3B3, Flavor::U4B4];

    pub fn of_symmetry(s: Symmetry) -> Flavor {
        match s {
            Symmetry::General => Flavor::U1B1,
            Symmetry::Symmetric => Flavor::U2B2,
            Symmetry::Alternating => Flavor::U3B3,
        }
    }
}

/// `(U, B)` on an explicit `G`, with elements of `G²` indexed by
/// `g·|G| + h`, which is also the index in `explicit_square`.
#[derive(Clone, Debug)]
pub struct PairingSpec {
    flavor: Flavor,
    group: PGroupType,
    level: u32,
    ambient: FiniteAbelian,
    modulus: u64,
    dot: Vec<u64>,
}

impl PairingSpec {
    /// Pairing values live in `Z/p^level`; `level` must be at least the
    /// exponent of `G` and at least 1.
    pub fn new(flavor: Flavor, group: &PGroupType, level: u32) -> Result<Self, OracleError> {
        let level = level.max(1);
        if level < group.log_exponent() {
            return Err(OracleError::LevelTooLow {
                level,
                required: group.log_exponent(),
            });
        }
        let ambient = group.explicit(ENUMERATION_LIMIT)?;
        let pairing = DotPairing::new(group, level)?;
        let order = ambient.order();
        let coords: Vec<Vec<u64>> = (0..order).map(|i| ambient.decode(i)).collect();
        let mut dot = vec![0u64; order * order];
        for a in 0..order {
            for b in 0..order {
                dot[a * order + b] = pairing.eval(&coords[a], &coords[b]);
            }
        }
        Ok(PairingSpec {
            flavor,
            group: group.clone(),
            level,
            ambient,
            modulus: pairing.modulus(),
            dot,
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn group(&self) -> &PGroupType {
        &self.group
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Explicit `G`.
    pub fn ambient(&self) -> &FiniteAbelian {
        &self.ambient
    }

    /// `p^level`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `|G|²`, the number of elements of `G²`.
    pub fn square_order(&self) -> usize {
        self.ambient.order() * self.ambient.order()
    }

    /// `g · h` on element indices of `G`.
    pub fn dot(&self, g: usize, h: usize) -> u64 {
        self.dot[g * self.ambient.order() + h]
    }

    fn split(&self, x: usize) -> (usize, usize) {
        (x / self.ambient.order(), x % self.ambient.order())
    }

    pub fn u(&self, x: usize) -> u64 {
        match self.flavor {
            Flavor::U1B1 | Flavor::U2B2 => {
                let (g, h) = self.split(x);
                self.dot(g, h)
            }
            Flavor::U3B3 | Flavor::U4B4 => 0,
        }
    }

    pub fn b(&self, x: usize, y: usize) -> u64 {
        let m = self.modulus;
        let (g, h) = self.split(x);
        let (g2, h2) = self.split(y);
        match self.flavor {
            Flavor::U1B1 => self.dot(g, h2),
            Flavor::U2B2 => (self.dot(g, h2) + self.dot(g2, h)) % m,
            Flavor::U3B3 => (self.dot(g, h2) + m - self.dot(g2, h)) % m,
            Flavor::U4B4 => {
                let v = self.dot(self.ambient.sub(g, g2), self.ambient.sub(h, h2));
                (m - v) % m
            }
        }
    }
}
