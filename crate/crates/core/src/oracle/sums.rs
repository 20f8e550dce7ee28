use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::OracleError;
use crate::groups::SubgroupRecord;

/// `L(x) = a + Σ c_i x_i mod m` on the ambient group of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub modulus: u64,
    pub constant: u64,
    pub coefficients: Vec<u64>,
}

impl AffineMap {
    fn eval(&self, x: &[u64]) -> u64 {
        let m = self.modulus;
        self.coefficients
            .iter()
            .zip(x)
            .fold(self.constant % m, |acc, (&c, &v)| (acc + (c % m) * (v % m)) % m)
    }
}

/// `Σ_{h∈H} sin²(π L(h)/m)`, which is `|H|/2` whenever `L` is not
/// constant on `H`.
pub fn sin_sum_check(h: &SubgroupRecord, l: &AffineMap) -> Result<f64, OracleError> {
    let moduli = h.ambient().moduli();
    if l.modulus < 1 {
        return Err(OracleError::InvalidMap("modulus must be positive"));
    }
    if l.coefficients.len() != moduli.len() {
        return Err(OracleError::InvalidMap("one coefficient per cyclic factor"));
    }
    // c_i x_i mod m must not depend on the representative of x_i mod q_i.
    if l
        .coefficients
        .iter()
        .zip(moduli)
        .any(|(&c, &q)| (u128::from(c) * u128::from(q)) % u128::from(l.modulus) != 0)
    {
        return Err(OracleError::InvalidMap("not well defined on the ambient group"));
    }
    let values: Vec<u64> = h.tuples().iter().map(|x| l.eval(x)).collect();
    if values.iter().all(|&v| v == values[0]) {
        return Err(OracleError::ConstantMap);
    }
    let m = l.modulus as f64;
    Ok(values
        .iter()
        .map(|&v| (std::f64::consts::PI * v as f64 / m).sin().powi(2))
        .sum())
}

/// `1/(k+1)!`, the limiting lower bound for `P(≥ k zero columns)` in the
/// critical spike model.
pub fn zero_column_bound(k: u32) -> Result<BigRational, OracleError> {
    if k == 0 {
        return Err(OracleError::InvalidCount);
    }
    let fact = (1..=u64::from(k) + 1).fold(BigInt::one(), |acc, i| acc * i);
    Ok(BigRational::new(BigInt::one(), fact))
}
