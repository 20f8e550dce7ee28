use serde::{Serialize, Serializer};
use twofloat::TwoFloat;

use super::UniversalError;

/// Global truncation tolerance for infinite products.
pub const PRODUCT_TOLERANCE: f64 = 1e-12;

/// Relative rounding allowance per double-double multiplication.
const ROUNDING_PER_TERM: f64 = 1e-30;

/// `∏_{i=start}^{end} (1 − p^{−(step·i + offset)})`, with `end = ∞` when
/// absent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductSpec {
    pub p: u64,
    pub step: u32,
    pub offset: i64,
    pub start: u32,
    pub end: Option<u32>,
}

impl ProductSpec {
    /// `∏_{i≥start} (1 − p^{−(step·i + offset)})`.
    pub fn infinite(p: u64, step: u32, offset: i64, start: u32) -> Self {
        ProductSpec {
            p,
            step,
            offset,
            start,
            end: None,
        }
    }

    pub fn finite(p: u64, step: u32, offset: i64, start: u32, end: u32) -> Self {
        ProductSpec {
            p,
            step,
            offset,
            start,
            end: Some(end),
        }
    }

    fn exponent(&self, i: u32) -> i64 {
        i64::from(self.step) * i64::from(i) + self.offset
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitFormulaResult {
    pub value: TwoFloat,
    pub truncation_index: u32,
    pub tail_bound: f64,
}

impl LimitFormulaResult {
    pub fn exact(value: TwoFloat) -> Self {
        LimitFormulaResult {
            value,
            truncation_index: 0,
            tail_bound: 0.0,
        }
    }

    pub fn zero() -> Self {
        LimitFormulaResult::exact(TwoFloat::from(0.0))
    }

    pub fn value_f64(&self) -> f64 {
        f64::from(self.value)
    }

    /// Scales by a nonnegative exact constant.
    pub fn scale(self, c: TwoFloat) -> Self {
        LimitFormulaResult {
            value: self.value * c,
            truncation_index: self.truncation_index,
            tail_bound: self.tail_bound * f64::from(c).abs() * (1.0 + 1e-15),
        }
    }

    /// Product of two nonnegative approximations.
    pub fn times(self, other: Self) -> Self {
        let (a, b) = (self.value_f64().abs(), other.value_f64().abs());
        LimitFormulaResult {
            value: self.value * other.value,
            truncation_index: self.truncation_index.max(other.truncation_index),
            tail_bound: a * other.tail_bound + b * self.tail_bound + self.tail_bound * other.tail_bound,
        }
    }

    /// Quotient by an approximation whose value exceeds its tail bound.
    pub fn divide(self, other: Self) -> Self {
        let (a, b) = (self.value_f64().abs(), other.value_f64().abs());
        let low = b - other.tail_bound;
        LimitFormulaResult {
            value: div(self.value, other.value),
            truncation_index: self.truncation_index.max(other.truncation_index),
            tail_bound: (self.tail_bound + a * other.tail_bound / b) / low,
        }
    }
}

impl Serialize for LimitFormulaResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View {
            value: f64,
            truncation_index: u32,
            tail_bound: f64,
        }
        View {
            value: self.value_f64(),
            truncation_index: self.truncation_index,
            tail_bound: self.tail_bound,
        }
        .serialize(s)
    }
}

/// `a / b` to double-double accuracy by three rounds of long division;
/// the crate's own quotient of two double-doubles is only double-accurate.
pub(crate) fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::from(q1) + q2 + q3
}

/// `p^{−e}` for `e ≥ 0`, dividing by exact powers of `p` below `2^53`.
pub(crate) fn inv_power(p: u64, e: u64) -> TwoFloat {
    let chunk = (52.0 / (p as f64).log2()).floor().max(1.0) as u64;
    let mut out = TwoFloat::from(1.0);
    let mut e = e;
    while e > 0 {
        let k = e.min(chunk);
        out /= p.pow(k as u32) as f64;
        e -= k;
    }
    out
}

/// Multiplies terms until the remaining tail changes the product by less
/// than `tol`. Uses `1 − ∏_{j>N}(1 − x_j) ≤ Σ_{j>N} x_j ≤ x_{N+1}/(1 − p^{−step})`.
pub fn truncated_product(spec: ProductSpec, tol: f64) -> Result<LimitFormulaResult, UniversalError> {
    if spec.p < 2 || spec.exponent(spec.start) < 1 || (spec.end.is_none() && spec.step == 0) || !(tol > 0.0) {
        return Err(UniversalError::NonconvergentSpec);
    }
    let one = TwoFloat::from(1.0);
    let mut value = one;
    let mut i = spec.start;
    if let Some(end) = spec.end {
        let mut terms = 0u32;
        while i <= end {
            value *= one - inv_power(spec.p, spec.exponent(i) as u64);
            i += 1;
            terms += 1;
        }
        return Ok(LimitFormulaResult {
            value,
            truncation_index: end,
            tail_bound: f64::from(terms) * ROUNDING_PER_TERM,
        });
    }
    let ratio = 1.0 - (spec.p as f64).powi(-(spec.step as i32));
    let mut terms = 0u32;
    loop {
        value *= one - inv_power(spec.p, spec.exponent(i) as u64);
        terms += 1;
        let next = f64::from(inv_power(spec.p, spec.exponent(i + 1) as u64));
        let tail = f64::from(value) * next / ratio + f64::from(terms) * ROUNDING_PER_TERM;
        if tail < tol {
            return Ok(LimitFormulaResult {
                value,
                truncation_index: i,
                tail_bound: tail,
            });
        }
        i += 1;
    }
}

/// An infinite product accurate enough that a few of them can be combined
/// while staying within the global tolerance.
pub(crate) fn infinite(p: u64, step: u32, offset: i64, start: u32) -> Result<LimitFormulaResult, UniversalError> {
    truncated_product(ProductSpec::infinite(p, step, offset, start), PRODUCT_TOLERANCE / 64.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_products() {
        for (spec, exact) in [
            (ProductSpec::infinite(2, 1, 0, 1), 0.288_788_095_086_602_42),
            (ProductSpec::infinite(2, 2, -1, 1), 0.419_422_441_795_107_6),
            (ProductSpec::infinite(3, 1, 0, 1), 0.560_126_077_927_948_9),
        ] {
            let r = truncated_product(spec, 1e-12).unwrap();
            assert!(r.tail_bound < 1e-12);
            assert!((r.value_f64() - exact).abs() <= r.tail_bound + 1e-16);
        }
    }

    #[test]
    fn single_term() {
        let r = truncated_product(ProductSpec::finite(3, 1, 0, 2, 2), 1e-12).unwrap();
        assert!((r.value - div(TwoFloat::from(8.0), TwoFloat::from(9.0))).abs() < 1e-30);
        assert!((r.value * 9.0 - 8.0).abs() < 1e-30);
        let r = truncated_product(ProductSpec::finite(5, 1, 0, 1, 1), 1e-12).unwrap();
        assert!((r.value - TwoFloat::from(0.8)).abs() < 1e-16);
    }

    #[test]
    fn long_division() {
        let third = div(TwoFloat::from(1.0), TwoFloat::from(3.0));
        assert!((third * 3.0 - 1.0).abs() < 1e-31);
        let x = div(TwoFloat::from(2.0), third);
        assert!((x - 6.0).abs() < 1e-30);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(truncated_product(ProductSpec::infinite(2, 0, 1, 1), 1e-12).is_err());
        assert!(truncated_product(ProductSpec::infinite(2, 2, -1, 0), 1e-12).is_err());
        assert!(truncated_product(ProductSpec::infinite(1, 1, 0, 1), 1e-12).is_err());
    }

    #[test]
    fn tail_bound_is_honest() {
        for p in [2u64, 3, 5] {
            let loose = truncated_product(ProductSpec::infinite(p, 1, 0, 1), 1e-6).unwrap();
            let tight = truncated_product(ProductSpec::infinite(p, 1, 0, 1), 1e-14).unwrap();
            assert!((loose.value_f64() - tight.value_f64()).abs() <= loose.tail_bound);
        }
    }
}
