use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::config::{ExperimentConfig, ExperimentKind, ModelKind};
use super::report::{ClassCount, EstimateReport, ReportRow, SizeSummary};
use super::runner::tally;
use super::stats::Estimate;
use super::ExperimentError;
use crate::groups::{PGroupType, ENUMERATION_LIMIT};
use crate::linalg::{cokernel_class, multi_prime_cokernel, CokernelClass};
use crate::models::{sample_graph, sample_matrix, sample_zero_columns, trial_rng, GraphModel, MatrixModel};
use crate::oracle::{hom_count_from_class, sur_count, zero_column_bound};
use crate::universal::{cokernel_limit_prob, moment_limit, rank_limit_prob, sandpile_limit_prob, LimitKind};

fn expect_kind(config: &ExperimentConfig, kind: ExperimentKind) -> Result<(), ExperimentError> {
    if config.kind != kind {
        return Err(ExperimentError::Config(format!("expected a {} config, got {}", kind.name(), config.kind.name())));
    }
    config.validate()
}

fn modulus(config: &ExperimentConfig, d: u32) -> Result<u64, ExperimentError> {
    Ok(crate::linalg::checked_level(config.p, d)?)
}

fn matrix_model(config: &ExperimentConfig, n: usize, m: u64) -> Result<(MatrixModel, Option<f64>), ExperimentError> {
    let symmetry = config
        .model
        .symmetry()
        .ok_or_else(|| ExperimentError::Config(format!("{} runs need a matrix model", config.kind.name())))?;
    let alpha = config.alpha_at(n)?;
    let law = config.distribution.build(alpha, m)?;
    Ok((MatrixModel::new(symmetry, n, law)?, alpha))
}

fn graph_model(config: &ExperimentConfig, n: usize) -> Result<GraphModel, ExperimentError> {
    Ok(match (config.beta, config.c0) {
        (Some(beta), _) => GraphModel::new(n, beta)?,
        (None, Some(c0)) => GraphModel::connectivity_window(n, c0)?,
        (None, None) => return Err(ExperimentError::Config("graph models need beta or c0".into())),
    })
}

fn class_counts(counts: &BTreeMap<CokernelClass, u64>) -> Vec<ClassCount> {
    counts
        .iter()
        .map(|(c, &count)| ClassCount {
            class: Some(c.clone()),
            count,
        })
        .collect()
}

fn report(config: &ExperimentConfig, level: u32) -> EstimateReport {
    EstimateReport {
        kind: config.kind,
        config: config.clone(),
        level,
        rows: Vec::new(),
        sizes: Vec::new(),
        notes: BTreeMap::new(),
    }
}

fn parts_label(h: &PGroupType) -> String {
    let parts: Vec<String> = h.lambda().parts().iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Frequency of `cok ≅ H` (`Z_p × H` for odd alternating sizes).
pub fn run_cok_dist(config: &ExperimentConfig) -> Result<EstimateReport, ExperimentError> {
    expect_kind(config, ExperimentKind::CokDist)?;
    let h = config.target_group()?;
    let d = config.level()?;
    let m = modulus(config, d)?;
    let mut out = report(config, d);
    for &n in &config.n {
        let (model, alpha) = matrix_model(config, n, m)?;
        let counts = tally(config.trials, config.workers, |t| {
            let a = sample_matrix(&model, &mut trial_rng(config.master_seed, config.stream_name(), n, t));
            Ok(cokernel_class(&a, config.p, d)?)
        })?;
        let kind = config.model.limit_kind(n);
        let mut hits = 0u64;
        for (c, &count) in &counts {
            let hit = if kind == LimitKind::AlternatingOdd { c.is_free_plus(&h)? } else { c.is_isomorphic_to(&h)? };
            if hit {
                hits += count;
            }
        }
        let limit = cokernel_limit_prob(kind, &h)?.value_f64();
        let statistic = if kind == LimitKind::AlternatingOdd {
            format!("P(cok=Z_p+{})", parts_label(&h))
        } else {
            format!("P(cok={})", parts_label(&h))
        };
        let est = Estimate::proportion(hits, config.trials, config.z);
        out.rows.push(ReportRow::new(n, statistic, config.trials, est, Some(limit), config.drift).with_alpha(alpha));
        out.sizes.push(SizeSummary {
            n,
            classes: class_counts(&counts),
            ..Default::default()
        });
    }
    Ok(out)
}

/// Corank frequencies mod `p` against the limiting rank law.
pub fn run_rank_dist(config: &ExperimentConfig) -> Result<EstimateReport, ExperimentError> {
    expect_kind(config, ExperimentKind::RankDist)?;
    let m = modulus(config, 1)?;
    let kmax = config.k.unwrap_or(4);
    let mut out = report(config, 1);
    for &n in &config.n {
        let (model, alpha) = matrix_model(config, n, m)?;
        let counts = tally(config.trials, config.workers, |t| {
            let a = sample_matrix(&model, &mut trial_rng(config.master_seed, config.stream_name(), n, t));
            Ok(cokernel_class(&a, config.p, 1)?.p_rank())
        })?;
        let kind = config.model.limit_kind(n);
        for k in 0..=kmax {
            let corank = match kind {
                LimitKind::AlternatingEven => 2 * k as usize,
                LimitKind::AlternatingOdd => 2 * k as usize + 1,
                _ => k as usize,
            };
            let hits = counts.get(&corank).copied().unwrap_or(0);
            let est = Estimate::proportion(hits, config.trials, config.z);
            let limit = rank_limit_prob(kind, config.p, k)?.value_f64();
            out.rows.push(
                ReportRow::new(n, format!("P(corank={corank})"), config.trials, est, Some(limit), config.drift).with_alpha(alpha),
            );
        }
        if config.model == ModelKind::Alternating {
            let odd_rank: u64 = counts.iter().filter(|(c, _)| (n - **c) % 2 == 1).map(|(_, v)| v).sum();
            let est = Estimate::proportion(odd_rank, config.trials, config.z);
            out.rows.push(ReportRow::new(n, "P(rank odd)", config.trials, est, Some(0.0), 0.0).with_alpha(alpha));
        }
        out.sizes.push(SizeSummary {
            n,
            histogram: counts,
            ..Default::default()
        });
    }
    Ok(out)
}

/// `lim E #Hom(X, G) = Σ_{K≤G} lim E #Sur(X, K)`.
fn hom_moment_limit(kind: LimitKind, g: &PGroupType) -> Result<BigUint, ExperimentError> {
    let ambient = g.explicit(ENUMERATION_LIMIT)?;
    let mut total = BigUint::zero();
    for k in ambient.subgroups() {
        total += moment_limit(kind, &k.p_type(g.p())?);
    }
    Ok(total)
}

fn mean_of(counts: &BTreeMap<CokernelClass, u64>, values: &BTreeMap<CokernelClass, BigUint>, trials: u64, z: f64) -> Estimate {
    let mut sum = BigUint::zero();
    let mut sum_sq = BigUint::zero();
    for (c, &count) in counts {
        let x = &values[c];
        sum += x * count;
        sum_sq += x * x * count;
    }
    Estimate::mean(sum.to_f64().unwrap_or(f64::INFINITY), sum_sq.to_f64().unwrap_or(f64::INFINITY), trials, z)
}

/// Empirical Sur- and Hom-moments against their limits.
pub fn run_moment(config: &ExperimentConfig) -> Result<EstimateReport, ExperimentError> {
    expect_kind(config, ExperimentKind::Moment)?;
    let g = config.target_group()?;
    let d = config.level()?;
    let m = modulus(config, d)?;
    let mut out = report(config, d);
    for &n in &config.n {
        let stream = config.stream_name();
        let (counts, alpha, beta) = if config.model == ModelKind::Graph {
            let model = graph_model(config, n)?;
            let counts = tally(config.trials, config.workers, |t| {
                let graph = sample_graph(&model, &mut trial_rng(config.master_seed, stream, n, t));
                Ok(cokernel_class(&graph.reduced_laplacian_mod(m), config.p, d)?)
            })?;
            (counts, None, Some(model.beta()))
        } else {
            let (model, alpha) = matrix_model(config, n, m)?;
            let counts = tally(config.trials, config.workers, |t| {
                let a = sample_matrix(&model, &mut trial_rng(config.master_seed, stream, n, t));
                Ok(cokernel_class(&a, config.p, d)?)
            })?;
            (counts, alpha, None)
        };
        let mut surs = BTreeMap::new();
        let mut homs = BTreeMap::new();
        for c in counts.keys() {
            surs.insert(c.clone(), sur_count(c, &g)?);
            homs.insert(c.clone(), hom_count_from_class(c, &g)?);
        }
        let kind = config.model.limit_kind(n);
        let label = parts_label(&g);
        let sur_limit = moment_limit(kind, &g).to_f64();
        let hom_limit = hom_moment_limit(kind, &g)?.to_f64();
        let sur = mean_of(&counts, &surs, config.trials, config.z);
        let hom = mean_of(&counts, &homs, config.trials, config.z);
        out.rows.push(
            ReportRow::new(n, format!("E#Sur(cok,{label})"), config.trials, sur, sur_limit, config.drift)
                .with_alpha(alpha)
                .with_beta(beta),
        );
        out.rows.push(
            ReportRow::new(n, format!("E#Hom(cok,{label})"), config.trials, hom, hom_limit, config.drift)
                .with_alpha(alpha)
                .with_beta(beta),
        );
        out.sizes.push(SizeSummary {
            n,
            classes: class_counts(&counts),
            ..Default::default()
        });
    }
    Ok(out)
}

/// Frequency of `S_p ≅ H` over Erdős–Rényi graphs; disconnected graphs
/// have an infinite sandpile group and count as misses.
pub fn run_sandpile(config: &ExperimentConfig) -> Result<EstimateReport, ExperimentError> {
    expect_kind(config, ExperimentKind::Sandpile)?;
    let h = config.target_group()?;
    let d = config.level()?;
    let levels: BTreeMap<u64, u32> = [(config.p, d)].into();
    let mut out = report(config, d);
    for &n in &config.n {
        let model = graph_model(config, n)?;
        let counts: BTreeMap<Option<CokernelClass>, u64> = tally(config.trials, config.workers, |t| {
            let graph = sample_graph(&model, &mut trial_rng(config.master_seed, config.stream_name(), n, t));
            if !graph.is_connected() {
                return Ok(None);
            }
            if config.p == 2 && d == 1 {
                let r = n - 1;
                let corank = r - graph.reduced_laplacian_bits().rank();
                return Ok(Some(CokernelClass::from_exponents(2, 1, &vec![1; corank])));
            }
            let mut classes = multi_prime_cokernel(&graph.reduced_laplacian(), &levels)?;
            Ok(classes.remove(&config.p))
        })?;
        let mut hits = 0;
        for (c, &count) in &counts {
            if let Some(c) = c {
                if c.is_isomorphic_to(&h)? {
                    hits += count;
                }
            }
        }
        let disconnected = counts.get(&None).copied().unwrap_or(0);
        let beta = Some(model.beta());
        let limit = sandpile_limit_prob(&h)?.value_f64();
        let est = Estimate::proportion(hits, config.trials, config.z);
        out.rows.push(
            ReportRow::new(n, format!("P(S_p={})", parts_label(&h)), config.trials, est, Some(limit), config.drift).with_beta(beta),
        );
        let est = Estimate::proportion(disconnected, config.trials, config.z);
        let limit = config.c0.filter(|_| config.beta.is_none()).map(|c0| 1.0 - (-(-c0).exp()).exp());
        out.rows.push(ReportRow::new(n, "P(disconnected)", config.trials, est, limit, config.drift).with_beta(beta));
        out.sizes.push(SizeSummary {
            n,
            classes: counts.into_iter().map(|(class, count)| ClassCount { class, count }).collect(),
            ..Default::default()
        });
    }
    Ok(out)
}

/// Zero columns of the spike model at `α = c ln n / n` (default `c = 1`).
pub fn run_sharpness(config: &ExperimentConfig) -> Result<EstimateReport, ExperimentError> {
    expect_kind(config, ExperimentKind::Sharpness)?;
    let k = config.k.unwrap_or(3);
    let m = modulus(config, 1)?;
    let mut cfg = config.clone();
    if cfg.alpha.is_none() && cfg.c.is_none() {
        cfg.c = Some(1.0);
    }
    let mut out = report(config, 1);
    let bound = zero_column_bound(k)?.to_f64().unwrap_or(0.0);
    let below: f64 = (0..k).map(|j| rank_limit_prob(LimitKind::NonSymmetric, config.p, j).map(|r| r.value_f64())).sum::<Result<f64, _>>()?;
    out.notes.insert("zero_column_bound".into(), bound);
    out.notes.insert("universal_corank_tail".into(), 1.0 - below);
    for &n in &config.n {
        let (model, alpha) = matrix_model(&cfg, n, m)?;
        let counts = tally(config.trials, config.workers, |t| {
            Ok(sample_zero_columns(&model, &mut trial_rng(config.master_seed, config.stream_name(), n, t)))
        })?;
        let at_least: u64 = counts.range(k as usize..).map(|(_, v)| v).sum();
        let est = Estimate::proportion(at_least, config.trials, config.z);
        out.rows.push(
            ReportRow::new(n, format!("P(zero_columns>={k})"), config.trials, est, Some(bound), config.drift)
                .at_least()
                .with_alpha(alpha),
        );
        let sum: u64 = counts.iter().map(|(&z, &c)| z as u64 * c).sum();
        let sum_sq: u128 = counts.iter().map(|(&z, &c)| (z as u128).pow(2) * u128::from(c)).sum();
        let est = Estimate::mean(sum as f64, sum_sq as f64, config.trials, config.z);
        out.rows.push(ReportRow::new(n, "E(zero_columns)", config.trials, est, Some(1.0), config.drift).with_alpha(alpha));
        out.sizes.push(SizeSummary {
            n,
            histogram: counts,
            ..Default::default()
        });
    }
    Ok(out)
}

/// Classes observed in a report, for completeness checks.
pub fn observed_total(summary: &SizeSummary) -> u64 {
    summary.classes.iter().map(|c| c.count).sum::<u64>() + summary.histogram.values().sum::<u64>()
}
