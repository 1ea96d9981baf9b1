use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use stablemanip::experiments::{run_grid, ExperimentOptions};
use stablemanip::{decide, decide_exhaustive, Decision, Evaluator, ExhaustiveBudget, ExperimentConfig, Rule};

use stablemanip_cli::format::{self, InstanceFile};
use stablemanip_cli::results;

#[derive(Parser)]
#[command(name = "stablemanip", version, about = "Stable manipulation under Kendall-Tau perturbation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance file. Exit status 0 = YES, 1 = NO, 2 = error.
    Decide {
        file: PathBuf,
        /// Use exhaustive search instead of the polynomial decider.
        #[arg(long)]
        oracle: bool,
    },
    /// Estimate how often random profiles are stably manipulable.
    Experiment {
        /// Comma-separated rules, e.g. `plurality,borda,k-approval:2`.
        #[arg(long, value_delimiter = ',', required = true)]
        rules: Vec<Rule>,
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Number of manipulators.
        #[arg(long, default_value_t = 1)]
        l: usize,
        /// Only try alternatives that do not already win the sampled profile.
        #[arg(long)]
        non_winners_only: bool,
    },
    /// Print the co-winners of a profile file, sorted by label.
    Winners {
        file: PathBuf,
        /// Defaults to the file's `rule=` header.
        #[arg(long)]
        rule: Option<Rule>,
    },
}

fn read_instance(path: &PathBuf) -> anyhow::Result<InstanceFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    format::parse(&text).with_context(|| path.display().to_string())
}

fn cmd_decide(path: &PathBuf, oracle: bool) -> anyhow::Result<ExitCode> {
    let file = read_instance(path)?;
    let inst = file.to_instance(None)?;
    let decision = if oracle {
        decide_exhaustive(&inst, ExhaustiveBudget::default())?
    } else {
        decide(&inst)?
    };
    println!("{decision}");
    match &decision {
        Decision::Yes { witness } => {
            for w in witness {
                println!("manipulator: {}", file.format_ranking(w));
            }
            Ok(ExitCode::SUCCESS)
        }
        Decision::No { refutation } => {
            if let Some(r) = refutation {
                for w in &r.manipulators {
                    println!("manipulator: {}", file.format_ranking(w));
                }
                for q in &r.adversary {
                    println!("perturbed:   {}", file.format_ranking(q));
                }
            }
            Ok(ExitCode::from(1))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_experiment(
    rules: &[Rule],
    ms: &[usize],
    ns: &[usize],
    deltas: &[usize],
    trials: usize,
    seed: u64,
    out: &PathBuf,
    jobs: usize,
    l: usize,
    non_winners_only: bool,
) -> anyhow::Result<ExitCode> {
    let file = File::create(out).with_context(|| format!("cannot write {}", out.display()))?;
    let mut cfgs = Vec::new();
    for rule in rules {
        for &m in ms {
            for &n in ns {
                for &delta in deltas {
                    cfgs.push(ExperimentConfig {
                        rule: rule.clone(),
                        m,
                        n,
                        delta,
                        manipulators: l,
                        trials,
                        seed,
                    });
                }
            }
        }
    }
    let opts = ExperimentOptions {
        non_winners_only,
        ..ExperimentOptions::default()
    };
    let rows = run_grid(&cfgs, &opts, jobs)?;
    let failed = rows.iter().filter(|r| r.is_err()).count();
    let results: Vec<_> = cfgs.into_iter().zip(rows).collect();
    let comments = vec![format!(
        "manipulators={l} candidates={}",
        if non_winners_only { "non-winners" } else { "all" }
    )];
    results::write_csv(BufWriter::new(file), &comments, &results)?;
    for (cfg, r) in &results {
        if let Err(e) = r {
            eprintln!("error: rule={} m={} n={} delta={}: {e}", cfg.rule, cfg.m, cfg.n, cfg.delta);
        }
    }
    Ok(if failed > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn cmd_winners(path: &PathBuf, rule: Option<&Rule>) -> anyhow::Result<ExitCode> {
    let file = read_instance(path)?;
    let rule = rule
        .or(file.rule.as_ref())
        .ok_or_else(|| anyhow::anyhow!("no rule given (header `rule=` or --rule)"))?;
    let ev = Evaluator::new(rule, file.profile.m())?;
    println!("{}", file.format_set(&ev.winners(file.profile.rankings())));
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Decide { file, oracle } => cmd_decide(file, *oracle),
        Command::Experiment {
            rules,
            m,
            n,
            deltas,
            trials,
            seed,
            out,
            jobs,
            l,
            non_winners_only,
        } => cmd_experiment(rules, m, n, deltas, *trials, *seed, out, *jobs, *l, *non_winners_only),
        Command::Winners { file, rule } => cmd_winners(file, rule.as_ref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
