use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::groups::{is_prime, prime_divisors, GroupError, PGroupType, Partition};
use crate::linalg::Symmetry;
use crate::models::{alpha_schedule, EntryDistribution};
use crate::universal::LimitKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    CokDist,
    RankDist,
    Moment,
    Sandpile,
    Sharpness,
    Verify,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::CokDist => "cok-dist",
            ExperimentKind::RankDist => "rank-dist",
            ExperimentKind::Moment => "moment",
            ExperimentKind::Sandpile => "sandpile",
            ExperimentKind::Sharpness => "sharpness",
            ExperimentKind::Verify => "verify",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    #[serde(alias = "non-symmetric")]
    General,
    Symmetric,
    Alternating,
    Graph,
}

impl ModelKind {
    pub fn symmetry(self) -> Option<Symmetry> {
        match self {
            ModelKind::General => Some(Symmetry::General),
            ModelKind::Symmetric => Some(Symmetry::Symmetric),
            ModelKind::Alternating => Some(Symmetry::Alternating),
            ModelKind::Graph => None,
        }
    }

    /// The limiting law for size `n`; alternating sizes split by parity.
    pub fn limit_kind(self, n: usize) -> LimitKind {
        match self {
            ModelKind::General => LimitKind::NonSymmetric,
            ModelKind::Symmetric => LimitKind::Symmetric,
            ModelKind::Alternating if n % 2 == 0 => LimitKind::AlternatingEven,
            ModelKind::Alternating => LimitKind::AlternatingOdd,
            ModelKind::Graph => LimitKind::Graph,
        }
    }
}

/// Entry law. The spike families take their `α` from the schedule (or
/// the explicit `alpha`); `spike-uniform` is rescaled so that its
/// balancedness equals that `α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DistributionSpec {
    Spike01,
    SpikeUniform,
    Uniform,
    Explicit { law: EntryDistribution },
}

impl Default for DistributionSpec {
    fn default() -> Self {
        DistributionSpec::Spike01
    }
}

impl DistributionSpec {
    pub fn build(&self, alpha: Option<f64>, modulus: u64) -> Result<EntryDistribution, ExperimentError> {
        let need_alpha = || alpha.ok_or_else(|| ExperimentError::Config("spike laws need c or alpha".into()));
        let law = match self {
            DistributionSpec::Spike01 => EntryDistribution::spike01(need_alpha()?, modulus)?,
            DistributionSpec::SpikeUniform => {
                // P(x ≡ a mod q) is largest at a = 0: 1 − α' + α'(m/q − 1)/(m − 1).
                let q = *prime_divisors(modulus).first().ok_or(ExperimentError::Config("modulus must be at least 2".into()))?;
                let m = modulus as f64;
                let scaled = need_alpha()? * (m - 1.0) / (m - m / q as f64);
                EntryDistribution::spike_uniform(scaled.min(0.5), modulus)?
            }
            DistributionSpec::Uniform => EntryDistribution::uniform(modulus)?,
            DistributionSpec::Explicit { law } => {
                if law.modulus() % modulus != 0 {
                    return Err(ExperimentError::Config(format!(
                        "explicit law modulus {} is not divisible by {modulus}",
                        law.modulus()
                    )));
                }
                law.clone()
            }
        };
        Ok(law)
    }
}

fn default_z() -> f64 {
    3.0
}

fn default_drift() -> f64 {
    0.02
}

fn default_workers() -> usize {
    1
}

/// One JSON document describing a campaign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Names the random streams; defaults to the kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default = "default_model")]
    pub model: ModelKind,
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default = "default_p")]
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    /// `α = c ln n / n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// `β = (ln n + c0)/n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    #[serde(default)]
    pub distribution: DistributionSpec,
    /// Parts of the target `H` (or `G` for moments).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default)]
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    /// Not echoed in reports, which must not depend on it.
    #[serde(default = "default_workers", skip_serializing)]
    pub workers: usize,
    #[serde(default = "default_z")]
    pub z: f64,
    #[serde(default = "default_drift")]
    pub drift: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<super::VerifyOptions>,
}

fn default_model() -> ModelKind {
    ModelKind::General
}

fn default_p() -> u64 {
    2
}

impl ExperimentConfig {
    /// A config with defaults for everything but the kind.
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            name: None,
            model: if kind == ExperimentKind::Sandpile { ModelKind::Graph } else { ModelKind::General },
            n: Vec::new(),
            p: 2,
            d: None,
            c: None,
            alpha: None,
            beta: None,
            c0: None,
            distribution: DistributionSpec::Spike01,
            target: None,
            k: None,
            trials: 0,
            master_seed: 0,
            workers: 1,
            z: default_z(),
            drift: default_drift(),
            verify: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn stream_name(&self) -> &str {
        self.name.as_deref().unwrap_or(self.kind.name())
    }

    /// Target group; trivial by default, `Z/p` by default for moments.
    pub fn target_group(&self) -> Result<PGroupType, ExperimentError> {
        let parts = match (&self.target, self.kind) {
            (Some(parts), _) => parts.clone(),
            (None, ExperimentKind::Moment) => vec![1],
            (None, _) => Vec::new(),
        };
        let lambda = Partition::from_unsorted(parts.clone());
        if lambda.parts().iter().any(|&x| x == 0) {
            return Err(GroupError::InvalidPartition(parts).into());
        }
        Ok(PGroupType::new(self.p, lambda)?)
    }

    /// `α` at size `n`: explicit, or from the schedule.
    pub fn alpha_at(&self, n: usize) -> Result<Option<f64>, ExperimentError> {
        match (self.alpha, self.c) {
            (Some(a), _) => Ok(Some(a)),
            (None, Some(c)) => Ok(Some(alpha_schedule(c, n)?)),
            (None, None) => Ok(None),
        }
    }

    /// Level used to classify cokernels, given the target's exponent.
    pub fn level(&self) -> Result<u32, ExperimentError> {
        let e = self.target_group()?.log_exponent();
        let required = match self.kind {
            ExperimentKind::RankDist | ExperimentKind::Sharpness => 1,
            ExperimentKind::Moment => e.max(1),
            _ if self.model == ModelKind::Alternating && self.n.iter().any(|n| n % 2 == 1) => e + 2,
            _ => e + 1,
        };
        match self.d {
            Some(d) if d < required => Err(ExperimentError::Config(format!("level d = {d} is below the required {required}"))),
            Some(d) => Ok(d),
            None => Ok(required),
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::Config(msg));
        if self.kind == ExperimentKind::Verify {
            return Ok(());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        if self.n.is_empty() {
            return bad("n must list at least one size".into());
        }
        let min_n = if self.model == ModelKind::Graph { 2 } else { 1 };
        if let Some(&n) = self.n.iter().find(|&&n| n < min_n) {
            return bad(format!("n = {n} is too small"));
        }
        if !is_prime(self.p) {
            return Err(GroupError::NotPrime(self.p).into());
        }
        if self.d == Some(0) {
            return bad("d must be at least 1".into());
        }
        if !(self.z > 0.0) || !(self.drift >= 0.0) {
            return bad("z must be positive and drift nonnegative".into());
        }
        let graph_kind = matches!(self.kind, ExperimentKind::Sandpile);
        if graph_kind && self.model != ModelKind::Graph {
            return bad("sandpile runs need the graph model".into());
        }
        if self.kind == ExperimentKind::Sharpness && self.model == ModelKind::Graph {
            return bad("sharpness runs use matrix models".into());
        }
        if self.model == ModelKind::Graph {
            if self.beta.is_none() && self.c0.is_none() {
                return bad("graph models need beta or c0".into());
            }
        } else if self.kind != ExperimentKind::Sharpness
            && matches!(self.distribution, DistributionSpec::Spike01 | DistributionSpec::SpikeUniform)
            && self.alpha.is_none()
            && self.c.is_none()
        {
            return bad("spike laws need c or alpha".into());
        }
        if self.kind == ExperimentKind::Sharpness && self.k == Some(0) {
            return bad("k must be at least 1".into());
        }
        self.level()?;
        Ok(())
    }
}
