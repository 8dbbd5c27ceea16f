use std::path::{Path, PathBuf};

use super::snapshot::{write_file, Entry, Snapshot, MANIFEST};
use crate::error::{Error, Result};
use crate::fitness::{evaluate_shape, EvaluationResult, FitnessConfig};
use crate::genome::{decode, DecodeConfig, Genome};
use crate::sim::TickConfig;
use crate::voxel::{write_shape, BlockSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    Best,
    /// Bin index for archives, rank for populations.
    Slot(usize),
}

/// Finds the snapshot directory for `dir`: the directory itself, or the
/// `archive/` or `population/` directory of a run.
pub fn resolve_snapshot(dir: &Path) -> Result<PathBuf> {
    [dir.to_path_buf(), dir.join("archive"), dir.join("population")]
        .into_iter()
        .find(|d| d.join(MANIFEST).is_file())
        .ok_or_else(|| Error::Selector(format!("no snapshot under {}", dir.display())))
}

/// Writes the decoded shape of the selected occupant to `out`, preceded by
/// `#` comment lines describing it. Returns the exported entry.
pub fn export_shape(dir: &Path, selector: Selector, out: &Path) -> Result<Entry> {
    let snap = Snapshot::read(&resolve_snapshot(dir)?)?;
    let entry = match selector {
        Selector::Best => snap.best(),
        Selector::Slot(i) => snap.get(i),
    }
    .ok_or_else(|| Error::Selector(format!("{selector:?} is empty")))?
    .clone();

    let m = &snap.manifest;
    let shape = decode(&entry.genome, &m.decode_config())?;
    let r = &entry.result;
    let mut text = format!(
        "# method {} block_set {} seed {} slot {}\n# fitness {} flew {} direction {}\n",
        m.method.label(),
        m.block_set.name(),
        m.seed,
        entry.slot,
        r.fitness,
        r.flew,
        r.direction.map_or("NONE", |d| d.name()),
    );
    if let Some(d) = &entry.descriptor {
        text.push_str(&format!("# descriptor {d}\n"));
    }
    text.push_str(&write_shape(&shape));
    write_file(out, &text)?;
    Ok(entry)
}

/// Re-evaluates a stored genome. Configuration comes from a snapshot manifest
/// beside the file when there is one, else defaults; the arguments override
/// either.
pub fn replay_genome(
    path: &Path,
    block_set: Option<BlockSet>,
    observer_bug: Option<bool>,
) -> Result<EvaluationResult> {
    let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
    let genome = Genome::from_line(&text)?;
    let beside = path.parent().map(|p| p.join(MANIFEST)).filter(|p| p.is_file());
    let (mut set, mut tick, fitness) = match beside {
        Some(dir) => {
            let m = Snapshot::read(dir.parent().unwrap())?.manifest;
            (m.block_set, m.tick, m.fitness)
        }
        None => (BlockSet::Observer, TickConfig::default(), FitnessConfig::default()),
    };
    if let Some(s) = block_set {
        set = s;
    }
    if let Some(b) = observer_bug {
        tick.emulate_observer_bug = b;
    }
    let shape = decode(&genome, &DecodeConfig::with_block_set(set))?;
    Ok(evaluate_shape(&shape, &tick, &fitness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_dir, run_once, ExperimentConfig, Method};
    use crate::search::SearchBudget;
    use crate::harness::Manifest;
    use crate::voxel::parse_shape;

    #[test]
    fn empty_occupant_exports_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let genome = Genome::new(vec![0.0; 81]).unwrap();
        let result = replay_genome_in_memory(&genome);
        let snap = Snapshot {
            manifest: Manifest {
                method: Method::PureFitness,
                block_set: BlockSet::Original,
                seed: 0,
                evaluations: 1,
                layout: None,
                tick: TickConfig::default(),
                fitness: FitnessConfig::default(),
            },
            entries: vec![Entry {
                slot: 0,
                descriptor: None,
                discovered_at: 1,
                genome,
                result,
            }],
        };
        snap.write(dir.path()).unwrap();
        let out = dir.path().join("empty.shape");
        export_shape(dir.path(), Selector::Slot(0), &out).unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(text.lines().all(|l| l.starts_with('#')));
        assert!(parse_shape(&text).unwrap().is_empty());
    }

    fn replay_genome_in_memory(g: &Genome) -> EvaluationResult {
        let shape = decode(g, &DecodeConfig::default()).unwrap();
        evaluate_shape(&shape, &TickConfig::default(), &FitnessConfig::default())
    }

    #[test]
    fn export_round_trip_and_replay() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            method: Method::BlockCount,
            threads: 1,
            out: dir.path().to_path_buf(),
            evals: Some(50),
            budget: SearchBudget {
                init_samples: 50,
                ..SearchBudget::default()
            },
            ..ExperimentConfig::default()
        };
        let run = run_dir(dir.path(), 0);
        run_once(&cfg, 9, &run).unwrap();
        let snap = Snapshot::read(&resolve_snapshot(&run).unwrap()).unwrap();

        let out = dir.path().join("best.shape");
        let e = export_shape(&run, Selector::Best, &out).unwrap();
        assert_eq!(e.result.fitness, snap.best().unwrap().result.fitness);
        let text = std::fs::read_to_string(&out).unwrap();
        let shape = parse_shape(&text).unwrap();
        assert_eq!(shape, decode(&e.genome, &snap.manifest.decode_config()).unwrap());

        let replayed = replay_genome(&run.join("archive").join(format!("{:04}.genome", e.slot)), None, None)
            .unwrap();
        assert_eq!(replayed.fitness, e.result.fitness);

        let empty_bin = (0..28).find(|i| snap.get(*i).is_none()).unwrap();
        assert!(matches!(
            export_shape(&run, Selector::Slot(empty_bin), &out),
            Err(Error::Selector(_))
        ));
    }
}
