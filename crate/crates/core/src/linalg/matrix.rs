use serde::{Deserialize, Serialize};

use super::LinalgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    #[serde(alias = "non-symmetric")]
    General,
    Symmetric,
    Alternating,
}

/// A square matrix over `Z/m`, row-major, tagged with its symmetry class.
///
/// Serializes as `{"n":2,"modulus":9,"symmetry":"symmetric","entries":[2,1,1,2]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct ModMatrix {
    n: usize,
    modulus: u64,
    symmetry: Symmetry,
    entries: Vec<u64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    n: usize,
    modulus: u64,
    #[serde(default = "general")]
    symmetry: Symmetry,
    entries: Vec<u64>,
}

fn general() -> Symmetry {
    Symmetry::General
}

impl TryFrom<RawMatrix> for ModMatrix {
    type Error = LinalgError;

    fn try_from(raw: RawMatrix) -> Result<Self, Self::Error> {
        ModMatrix::new(raw.n, raw.modulus, raw.entries, raw.symmetry)
    }
}

impl ModMatrix {
    pub fn new(n: usize, modulus: u64, entries: Vec<u64>, symmetry: Symmetry) -> Result<Self, LinalgError> {
        if modulus < 2 {
            return Err(LinalgError::InvalidModulus(modulus));
        }
        if entries.len() != n * n {
            return Err(LinalgError::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        if let Some(&bad) = entries.iter().find(|&&x| x >= modulus) {
            return Err(LinalgError::EntryOutOfRange { entry: bad, modulus });
        }
        let m = ModMatrix {
            n,
            modulus,
            symmetry,
            entries,
        };
        m.check_symmetry()?;
        Ok(m)
    }

    /// Builds from signed integers, reducing each entry mod `modulus`.
    pub fn from_signed(n: usize, modulus: u64, entries: &[i64], symmetry: Symmetry) -> Result<Self, LinalgError> {
        let m = modulus as i128;
        let reduced = entries
            .iter()
            .map(|&x| (i128::from(x).rem_euclid(m)) as u64)
            .collect();
        ModMatrix::new(n, modulus, reduced, symmetry)
    }

    pub(crate) fn from_parts_unchecked(n: usize, modulus: u64, entries: Vec<u64>, symmetry: Symmetry) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        ModMatrix {
            n,
            modulus,
            symmetry,
            entries,
        }
    }

    pub fn zero(n: usize, modulus: u64, symmetry: Symmetry) -> Self {
        ModMatrix::from_parts_unchecked(n, modulus, vec![0; n * n], symmetry)
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = ModMatrix::zero(n, modulus, Symmetry::Symmetric);
        for i in 0..n {
            m.entries[i * n + i] = 1 % modulus;
        }
        m
    }

    pub fn diagonal(values: &[u64], modulus: u64) -> Result<Self, LinalgError> {
        let n = values.len();
        let mut entries = vec![0; n * n];
        for (i, &v) in values.iter().enumerate() {
            entries[i * n + i] = v;
        }
        ModMatrix::new(n, modulus, entries, Symmetry::Symmetric)
    }

    fn check_symmetry(&self) -> Result<(), LinalgError> {
        let n = self.n;
        let m = self.modulus;
        for i in 0..n {
            for j in i..n {
                let a = self.entries[i * n + j];
                let b = self.entries[j * n + i];
                let ok = match self.symmetry {
                    Symmetry::General => true,
                    Symmetry::Symmetric => a == b,
                    Symmetry::Alternating => (a + b) % m == 0 && (i != j || a == 0),
                };
                if !ok {
                    return Err(LinalgError::SymmetryViolation {
                        symmetry: self.symmetry,
                        row: i,
                        col: j,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Reduction to `Z/modulus'` for a divisor `modulus'` of the modulus.
    pub fn reduce(&self, modulus: u64) -> Result<ModMatrix, LinalgError> {
        if modulus < 2 || self.modulus % modulus != 0 {
            return Err(LinalgError::ModulusMismatch {
                matrix: self.modulus,
                requested: modulus,
            });
        }
        Ok(ModMatrix::from_parts_unchecked(
            self.n,
            modulus,
            self.entries.iter().map(|&x| x % modulus).collect(),
            self.symmetry,
        ))
    }

    /// `U · A · V` over `Z/m`, for square `U`, `V` of the same size.
    pub fn multiply_both(&self, left: &ModMatrix, right: &ModMatrix) -> Result<ModMatrix, LinalgError> {
        let t = left.multiply(self)?;
        let mut out = t.multiply(right)?;
        out.symmetry = Symmetry::General;
        Ok(out)
    }

    pub fn multiply(&self, other: &ModMatrix) -> Result<ModMatrix, LinalgError> {
        if self.n != other.n || self.modulus != other.modulus {
            return Err(LinalgError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let m = u128::from(self.modulus);
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    acc += u128::from(self.get(i, k)) * u128::from(other.get(k, j));
                }
                entries[i * n + j] = (acc % m) as u64;
            }
        }
        Ok(ModMatrix::from_parts_unchecked(n, self.modulus, entries, Symmetry::General))
    }
}

/// A square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<i64>) -> Result<Self, LinalgError> {
        if entries.len() != n * n {
            return Err(LinalgError::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let n = values.len();
        let mut entries = vec![0; n * n];
        for (i, &v) in values.iter().enumerate() {
            entries[i * n + i] = v;
        }
        IntMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::diagonal(&vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn reduce(&self, modulus: u64) -> Result<ModMatrix, LinalgError> {
        ModMatrix::from_signed(self.n, modulus, &self.entries, Symmetry::General)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_symmetry_tags() {
        assert!(ModMatrix::new(2, 4, vec![0, 1, 1, 0], Symmetry::Symmetric).is_ok());
        assert!(ModMatrix::new(2, 4, vec![0, 1, 2, 0], Symmetry::Symmetric).is_err());
        assert!(ModMatrix::new(2, 4, vec![0, 1, 3, 0], Symmetry::Alternating).is_ok());
        assert!(ModMatrix::new(2, 4, vec![2, 1, 3, 0], Symmetry::Alternating).is_err());
        assert!(ModMatrix::new(2, 4, vec![0, 1, 4, 0], Symmetry::General).is_err());
        assert!(ModMatrix::new(2, 4, vec![0, 1, 3], Symmetry::General).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = ModMatrix::new(2, 9, vec![2, 1, 1, 2], Symmetry::Symmetric).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"n":2,"modulus":9,"symmetry":"symmetric","entries":[2,1,1,2]}"#);
        assert_eq!(serde_json::from_str::<ModMatrix>(&s).unwrap(), m);
        assert!(serde_json::from_str::<ModMatrix>(r#"{"n":2,"modulus":9,"symmetry":"symmetric","entries":[2,1,3,2]}"#).is_err());
    }

    #[test]
    fn signed_reduction() {
        let l = IntMatrix::new(2, vec![2, -1, -1, 2]).unwrap();
        let r = l.reduce(9).unwrap();
        assert_eq!(r.entries(), &[2, 8, 8, 2]);
    }
}
