use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cokernel_core::experiments::{run, ExperimentConfig, ExperimentKind, RunOutput};
use cokernel_core::universal::{cokernel_limit_prob, moment_limit, rank_limit_prob, sandpile_limit_prob, LimitKind};
use cokernel_core::PGroupType;
use serde_json::json;

#[derive(Parser)]
#[command(name = "cokernel-lab", version, about = "Cokernel statistics of random matrices and graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frequency of cok(A) ≅ H against its limit.
    CokDist(RunArgs),
    /// Corank frequencies mod p.
    RankDist(RunArgs),
    /// Sur- and Hom-moments of the cokernel.
    Moment(RunArgs),
    /// Sylow p-parts of sandpile groups of random graphs.
    Sandpile(RunArgs),
    /// Zero columns of the critical spike model.
    Sharpness(RunArgs),
    /// Oracle cross-check battery; exits nonzero on any failure.
    Verify(VerifyArgs),
    /// Limit formulas.
    Formulas {
        #[command(subcommand)]
        command: FormulaCommand,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `workers`.
    #[arg(long)]
    workers: Option<usize>,
    /// Directory for report.json and rows.csv.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Optional; the default battery needs none.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum FormulaCommand {
    /// Prints a limit value and its tail bound as JSON.
    Eval {
        /// non-symmetric, symmetric, alternating-even, alternating-odd or graph.
        #[arg(long)]
        kind: String,
        /// Target group as JSON, e.g. '{"p":2,"lambda":[1]}'.
        #[arg(long = "H", alias = "h")]
        h: Option<String>,
        /// Limit of P(corank = 2k or 2k+1 for alternating, k otherwise) instead.
        #[arg(long, conflicts_with = "moment")]
        rank: Option<u32>,
        /// Prime for --rank.
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Limit of E #Sur(cok, H) instead.
        #[arg(long)]
        moment: bool,
    },
}

fn load(path: &Path, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cfg = ExperimentConfig::from_json(&text)?;
    if cfg.kind != kind {
        bail!("{} holds a {} config, not {}", path.display(), cfg.kind.name(), kind.name());
    }
    Ok(cfg)
}

fn execute(mut cfg: ExperimentConfig, seed: Option<u64>, workers: Option<usize>, out: &Path) -> Result<ExitCode> {
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    let start = Instant::now();
    let output = run(&cfg)?;
    let elapsed = start.elapsed();
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    fs::write(out.join("report.json"), output.to_json()?)?;
    fs::write(out.join("rows.csv"), output.to_csv()?)?;
    match &output {
        RunOutput::Estimate(report) => {
            for row in &report.rows {
                let gate = match row.gate {
                    Some(true) => "ok",
                    Some(false) => "FAIL",
                    None => "-",
                };
                let limit = row.limit.map_or("-".to_string(), |l| format!("{l:.6}"));
                println!(
                    "n={:<6} {:<24} est={:.6} se={:.6} limit={} gate={}",
                    row.n, row.statistic, row.estimate.estimate, row.estimate.standard_error, limit, gate
                );
            }
        }
        RunOutput::Verify(report) => {
            for c in report.checks.iter().filter(|c| !c.pass) {
                println!("FAIL {} [{}]: computed {} expected {}", c.check, c.case, c.computed, c.expected);
            }
            println!("{} of {} checks passed", report.total - report.failed, report.total);
        }
    }
    eprintln!("wall time {:.3}s, wrote {}", elapsed.as_secs_f64(), out.display());
    let verify_failed = matches!(&output, RunOutput::Verify(_)) && !output.passed();
    Ok(if verify_failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn eval(kind: &str, h: Option<&str>, rank: Option<u32>, p: u64, moment: bool) -> Result<serde_json::Value> {
    let kind: LimitKind = kind.parse()?;
    if let Some(k) = rank {
        let r = rank_limit_prob(kind, p, k)?;
        return Ok(json!({"kind": kind.name(), "p": p, "k": k, "value": r.value_f64(), "tail_bound": r.tail_bound, "truncation_index": r.truncation_index}));
    }
    let h: PGroupType = serde_json::from_str(h.unwrap_or(r#"{"p":2,"lambda":[]}"#)).context("parsing --H")?;
    if moment {
        let m = moment_limit(kind, &h);
        return Ok(json!({"kind": kind.name(), "H": h, "moment": m.to_string(), "tail_bound": 0.0}));
    }
    let r = if kind == LimitKind::Graph { sandpile_limit_prob(&h)? } else { cokernel_limit_prob(kind, &h)? };
    Ok(json!({"kind": kind.name(), "H": h, "value": r.value_f64(), "tail_bound": r.tail_bound, "truncation_index": r.truncation_index}))
}

fn main() -> ExitCode {
    match try_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn try_main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::CokDist(a) => (ExperimentKind::CokDist, a),
        Command::RankDist(a) => (ExperimentKind::RankDist, a),
        Command::Moment(a) => (ExperimentKind::Moment, a),
        Command::Sandpile(a) => (ExperimentKind::Sandpile, a),
        Command::Sharpness(a) => (ExperimentKind::Sharpness, a),
        Command::Verify(a) => {
            let cfg = match &a.config {
                Some(path) => load(path, ExperimentKind::Verify)?,
                None => ExperimentConfig::new(ExperimentKind::Verify),
            };
            return execute(cfg, a.seed, a.workers, &a.out);
        }
        Command::Formulas {
            command: FormulaCommand::Eval { kind, h, rank, p, moment },
        } => {
            println!("{}", serde_json::to_string_pretty(&eval(&kind, h.as_deref(), rank, p, moment)?)?);
            return Ok(ExitCode::SUCCESS);
        }
    };
    let cfg = load(&args.config, kind)?;
    execute(cfg, args.seed, args.workers, &args.out)
}
