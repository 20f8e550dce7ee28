use serde::Serialize;

/// A point estimate with its normal-approximation interval at `z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub z: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wilson_low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wilson_high: Option<f64>,
}

impl Estimate {
    /// Frequency `successes / trials` with SE `sqrt(p̂(1 − p̂)/trials)`.
    pub fn proportion(successes: u64, trials: u64, z: f64) -> Self {
        let t = trials as f64;
        let p = successes as f64 / t;
        let se = (p * (1.0 - p) / t).sqrt();
        let z2 = z * z;
        let center = (p + z2 / (2.0 * t)) / (1.0 + z2 / t);
        let half = z / (1.0 + z2 / t) * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt();
        Estimate {
            estimate: p,
            standard_error: se,
            z,
            ci_low: p - z * se,
            ci_high: p + z * se,
            wilson_low: Some((center - half).max(0.0)),
            wilson_high: Some((center + half).min(1.0)),
        }
    }

    /// Sample mean from the exact sums `Σx` and `Σx²`.
    pub fn mean(sum: f64, sum_sq: f64, trials: u64, z: f64) -> Self {
        let t = trials as f64;
        let mean = sum / t;
        let var = if trials > 1 { ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0) } else { 0.0 };
        let se = (var / t).sqrt();
        Estimate {
            estimate: mean,
            standard_error: se,
            z,
            ci_low: mean - z * se,
            ci_high: mean + z * se,
            wilson_low: None,
            wilson_high: None,
        }
    }

    pub fn half_width(&self) -> f64 {
        self.z * self.standard_error
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proportion_interval() {
        let e = Estimate::proportion(30, 100, 3.0);
        assert!((e.standard_error - (0.21f64 / 100.0).sqrt()).abs() < 1e-15);
        assert!((e.ci_high - e.ci_low - 6.0 * e.standard_error).abs() < 1e-15);
        assert!(e.wilson_low.unwrap() < 0.3 && e.wilson_high.unwrap() > 0.3);
        let one = Estimate::proportion(1, 1, 3.0);
        assert_eq!(one.estimate, 1.0);
        assert_eq!(one.standard_error, 0.0);
    }

    #[test]
    fn mean_of_constant() {
        let e = Estimate::mean(20.0, 40.0, 10, 3.0);
        assert_eq!(e.estimate, 2.0);
        assert_eq!(e.standard_error, 0.0);
    }
}
