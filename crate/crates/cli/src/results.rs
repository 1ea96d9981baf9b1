//! Experiment CSV output.

use std::io::Write;

use stablemanip::experiments::RNG_DESCRIPTION;
use stablemanip::{ExperimentConfig, ExperimentRow, Result as CoreResult};

pub const HEADER: [&str; 8] = ["rule", "m", "n", "delta", "trials", "seed", "yes_count", "fraction"];

/// Writes `#` comments, the header and one record per successful row, sorted
/// by `(rule, m, n, delta)`. Failed configs become `# error:` lines.
pub fn write_csv<W: Write>(
    out: W,
    comments: &[String],
    results: &[(ExperimentConfig, CoreResult<ExperimentRow>)],
) -> anyhow::Result<()> {
    let mut out = out;
    writeln!(out, "# stablemanip {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# rng: {RNG_DESCRIPTION}")?;
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let mut rows: Vec<&ExperimentRow> = results.iter().filter_map(|(_, r)| r.as_ref().ok()).collect();
    rows.sort_by_cached_key(|r| (r.rule.to_string(), r.m, r.n, r.delta));

    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.rule.to_string(),
            r.m.to_string(),
            r.n.to_string(),
            r.delta.to_string(),
            r.trials.to_string(),
            r.seed.to_string(),
            r.yes_count.to_string(),
            format!("{:.4}", r.fraction),
        ])?;
    }
    w.flush()?;
    drop(w);
    for (cfg, r) in results {
        if let Err(e) = r {
            writeln!(
                out,
                "# error: rule={} m={} n={} delta={}: {e}",
                cfg.rule, cfg.m, cfg.n, cfg.delta
            )?;
        }
    }
    out.flush()?;
    Ok(())
}
