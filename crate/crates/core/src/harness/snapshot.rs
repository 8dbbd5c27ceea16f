//! On-disk archive and population snapshots: a manifest, one genome file per
//! slot, and an `elites.csv` index.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Method;
use crate::behavior::{ArchiveLayout, BehaviorDescriptor};
use crate::error::{Error, Result};
use crate::fitness::{EvaluationResult, FitnessConfig};
use crate::genome::{DecodeConfig, Genome};
use crate::search::{Archive, Population};
use crate::sim::TickConfig;
use crate::voxel::BlockSet;

pub const MANIFEST: &str = "manifest.toml";
pub const INDEX: &str = "elites.csv";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub method: Method,
    pub block_set: BlockSet,
    pub seed: u64,
    pub evaluations: u64,
    /// Absent for a population snapshot.
    pub layout: Option<ArchiveLayout>,
    pub tick: TickConfig,
    pub fitness: FitnessConfig,
}

impl Manifest {
    pub fn decode_config(&self) -> DecodeConfig {
        DecodeConfig::with_block_set(self.block_set)
    }
}

/// One stored individual. `slot` is the bin index for archives and the rank
/// for populations.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub slot: usize,
    pub descriptor: Option<BehaviorDescriptor>,
    pub discovered_at: u64,
    pub genome: Genome,
    pub result: EvaluationResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub manifest: Manifest,
    pub entries: Vec<Entry>,
}

impl Snapshot {
    pub fn from_archive(manifest: Manifest, archive: &Archive) -> Self {
        let entries = archive
            .elites()
            .map(|(slot, e)| Entry {
                slot,
                descriptor: Some(e.descriptor.clone()),
                discovered_at: e.discovered_at,
                genome: e.genome.clone(),
                result: e.result.clone(),
            })
            .collect();
        Snapshot { manifest, entries }
    }

    pub fn from_population(manifest: Manifest, pop: &Population) -> Self {
        let entries = pop
            .members
            .iter()
            .enumerate()
            .map(|(slot, m)| Entry {
                slot,
                descriptor: None,
                discovered_at: m.evaluation,
                genome: m.genome.clone(),
                result: m.result.clone(),
            })
            .collect();
        Snapshot { manifest, entries }
    }

    pub fn get(&self, slot: usize) -> Option<&Entry> {
        self.entries.iter().find(|e| e.slot == slot)
    }

    /// Highest fitness; ties go to the lowest slot.
    pub fn best(&self) -> Option<&Entry> {
        self.entries.iter().fold(None, |best, e| match best {
            Some(b) if b.result.fitness >= e.result.fitness => Some(b),
            _ => Some(e),
        })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(Error::io(dir))?;
        let manifest = toml::to_string(&self.manifest).expect("manifest always serializes");
        write_file(&dir.join(MANIFEST), &manifest)?;
        let mut index = format!("slot,descriptor,discovered_at,{}\n", EvaluationResult::CSV_HEADER);
        for e in &self.entries {
            let descriptor = e.descriptor.as_ref().map(|d| d.to_string()).unwrap_or_default();
            writeln!(index, "{},{},{},{}", e.slot, descriptor, e.discovered_at, e.result.csv_row())
                .unwrap();
            let body = format!(
                "# slot {} fitness {} flew {}\n{}\n",
                e.slot,
                e.result.fitness,
                e.result.flew,
                e.genome.to_line()
            );
            write_file(&dir.join(format!("{:04}.genome", e.slot)), &body)?;
        }
        write_file(&dir.join(INDEX), &index)
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let manifest_path = dir.join(MANIFEST);
        let text = fs::read_to_string(&manifest_path).map_err(Error::io(&manifest_path))?;
        let manifest: Manifest = toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        let index_path = dir.join(INDEX);
        let index = fs::read_to_string(&index_path).map_err(Error::io(&index_path))?;
        let mut entries = Vec::new();
        for (i, line) in index.lines().enumerate().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 {
                return Err(Error::parse(i + 1, "expected 8 fields"));
            }
            let slot: usize = f[0].parse().map_err(|_| Error::parse(i + 1, "bad slot"))?;
            let descriptor = if f[1].is_empty() {
                None
            } else {
                let values = f[1]
                    .split(' ')
                    .map(|v| v.parse().map_err(|_| Error::parse(i + 1, "bad descriptor")))
                    .collect::<Result<Vec<usize>>>()?;
                Some(BehaviorDescriptor(values))
            };
            let discovered_at = f[2].parse().map_err(|_| Error::parse(i + 1, "bad discovered_at"))?;
            let result = EvaluationResult::from_csv_fields(&f[3..])
                .map_err(|_| Error::parse(i + 1, "bad evaluation fields"))?;
            let genome_path = dir.join(format!("{slot:04}.genome"));
            let genome_text = fs::read_to_string(&genome_path).map_err(Error::io(&genome_path))?;
            entries.push(Entry {
                slot,
                descriptor,
                discovered_at,
                genome: Genome::from_line(&genome_text)?,
                result,
            });
        }
        Ok(Snapshot { manifest, entries })
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(Error::io(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::Characterization;
    use crate::search::{map_elites_run, EvalSetup, SearchBudget};

    #[test]
    fn archive_snapshot_round_trip() {
        let layout = ArchiveLayout::new(Characterization::BlockCountNegativeSpace);
        let budget = SearchBudget {
            init_samples: 30,
            total_offspring: 0,
            ..SearchBudget::default()
        };
        let (archive, _) = map_elites_run(&budget, &layout, &EvalSetup::default(), 4, 1).unwrap();
        let manifest = Manifest {
            method: Method::BlockCountNegativeSpace,
            block_set: BlockSet::Original,
            seed: 4,
            evaluations: archive.evaluations(),
            layout: Some(layout),
            tick: TickConfig::default(),
            fitness: FitnessConfig::default(),
        };
        let snap = Snapshot::from_archive(manifest, &archive);
        let dir = tempfile::tempdir().unwrap();
        snap.write(dir.path()).unwrap();
        let back = Snapshot::read(dir.path()).unwrap();
        assert_eq!(back.manifest, snap.manifest);
        assert_eq!(back.entries.len(), archive.occupied());
        for (a, b) in back.entries.iter().zip(&snap.entries) {
            assert_eq!(a.genome, b.genome);
            assert_eq!(a.descriptor, b.descriptor);
            assert_eq!(a.result.fitness, b.result.fitness);
        }
    }

    #[test]
    fn missing_directory_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(Snapshot::read(&dir.path().join("nope")), Err(Error::Io { .. })));
    }
}
