use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use super::{load_campaign, CampaignSummary, Method, CONFIG_FILE};
use crate::error::{Error, Result};
use crate::stats::{bonferroni, fisher_exact_2x2};
use crate::voxel::BlockSet;

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignReport {
    pub dir: PathBuf,
    pub summary: CampaignSummary,
}

/// Success-count comparison of two campaigns on the same block set.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub block_set: BlockSet,
    pub a: Method,
    pub b: Method,
    /// `[[successes_a, failures_a], [successes_b, failures_b]]`.
    pub table: [u64; 4],
    pub p: f64,
    pub p_adjusted: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub campaigns: Vec<CampaignReport>,
    pub comparisons: Vec<Comparison>,
}

fn campaign_dirs(dir: &Path) -> Result<Vec<PathBuf>> {
    if dir.join(CONFIG_FILE).is_file() {
        return Ok(vec![dir.to_path_buf()]);
    }
    let mut dirs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(Error::io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join(CONFIG_FILE).is_file())
        .collect();
    dirs.sort();
    if dirs.is_empty() {
        return Err(Error::Config(format!("no campaign found under {}", dir.display())));
    }
    Ok(dirs)
}

/// Aggregates every campaign under `dir` (the directory itself or its direct
/// children) from raw run logs and compares success rates pairwise within each
/// block set, Bonferroni-adjusted by the number of pairs in that block set.
pub fn report(dir: &Path) -> Result<Report> {
    let campaigns = campaign_dirs(dir)?
        .into_iter()
        .map(|d| Ok(CampaignReport { summary: load_campaign(&d)?, dir: d }))
        .collect::<Result<Vec<_>>>()?;

    let mut comparisons = Vec::new();
    for set in [BlockSet::Original, BlockSet::Observer] {
        let group: Vec<&CampaignSummary> = campaigns
            .iter()
            .map(|c| &c.summary)
            .filter(|s| s.block_set == set)
            .collect();
        let pairs = group.len() * group.len().saturating_sub(1) / 2;
        for (i, x) in group.iter().enumerate() {
            for y in &group[i + 1..] {
                let sx = x.successes() as u64;
                let sy = y.successes() as u64;
                let table = [sx, x.runs.len() as u64 - sx, sy, y.runs.len() as u64 - sy];
                let p = fisher_exact_2x2(table[0], table[1], table[2], table[3])?;
                comparisons.push(Comparison {
                    block_set: set,
                    a: x.method,
                    b: y.method,
                    table,
                    p,
                    p_adjusted: bonferroni(p, pairs),
                });
            }
        }
    }
    Ok(Report {
        campaigns,
        comparisons,
    })
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<8} {:<9} {:>5} {:>16} {:>10} {:>9} {:>9} {:>14}",
            "method", "blocks", "runs", "successes", "dirs", "avg dirs", "max dirs", "median first"
        )?;
        for c in &self.campaigns {
            let s = &c.summary;
            writeln!(
                f,
                "{:<8} {:<9} {:>5} {:>16} {:>10} {:>9.2} {:>9} {:>14}",
                s.method.label(),
                s.block_set.name(),
                s.runs.len(),
                format!("{} ({:.2}%)", s.successes(), s.success_pct()),
                s.total_directions(),
                s.avg_directions(),
                s.max_directions(),
                s.median_first_success().map_or("never".into(), |m| m.to_string()),
            )?;
        }
        if !self.comparisons.is_empty() {
            writeln!(f, "\npairwise Fisher exact tests (Bonferroni within block set)")?;
            for c in &self.comparisons {
                writeln!(
                    f,
                    "{:<9} {:>5} vs {:<5} {:>2}/{:<2} vs {:>2}/{:<2}  p = {:.3e}  adjusted = {:.3e}",
                    c.block_set.name(),
                    c.a.label(),
                    c.b.label(),
                    c.table[0],
                    c.table[0] + c.table[1],
                    c.table[2],
                    c.table[2] + c.table[3],
                    c.p,
                    c.p_adjusted
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_campaign, ExperimentConfig};
    use crate::search::SearchBudget;

    #[test]
    fn report_over_two_campaigns() {
        let dir = tempfile::tempdir().unwrap();
        for m in [Method::PureFitness, Method::BlockCount] {
            run_campaign(&ExperimentConfig {
                method: m,
                runs: 2,
                threads: 1,
                out: dir.path().join(m.flag()),
                evals: Some(40),
                budget: SearchBudget {
                    init_samples: 20,
                    mu: 10,
                    lambda: 10,
                    ..SearchBudget::default()
                },
                ..ExperimentConfig::default()
            })
            .unwrap();
        }
        let r = report(dir.path()).unwrap();
        assert_eq!(r.campaigns.len(), 2);
        assert_eq!(r.comparisons.len(), 1);
        assert!(r.to_string().contains("pairwise Fisher"));
        let single = report(&dir.path().join("pf")).unwrap();
        assert_eq!(single.campaigns.len(), 1);
        assert!(single.comparisons.is_empty());
        assert!(report(&dir.path().join("missing")).is_err());
    }
}
