use std::collections::BTreeMap;

use crate::behavior::{bin_index, ArchiveLayout, BehaviorDescriptor};
use crate::error::Result;
use crate::fitness::EvaluationResult;
use crate::genome::Genome;

#[derive(Clone, Debug, PartialEq)]
pub struct Elite {
    pub genome: Genome,
    pub result: EvaluationResult,
    pub descriptor: BehaviorDescriptor,
    /// Evaluation number (1-based) at which this elite was accepted.
    pub discovered_at: u64,
}

/// One accepted insertion, kept so per-bin fitness histories can be audited.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Insertion {
    pub evaluation: u64,
    pub bin: usize,
    pub fitness: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Archive {
    layout: ArchiveLayout,
    bins: BTreeMap<usize, Elite>,
    evaluations: u64,
    history: Vec<Insertion>,
}

impl Archive {
    pub fn new(layout: ArchiveLayout) -> Self {
        Archive {
            layout,
            bins: BTreeMap::new(),
            evaluations: 0,
            history: Vec::new(),
        }
    }

    pub fn layout(&self) -> &ArchiveLayout {
        &self.layout
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn occupied(&self) -> usize {
        self.bins.len()
    }

    pub fn get(&self, bin: usize) -> Option<&Elite> {
        self.bins.get(&bin)
    }

    /// Occupied bins in ascending index order.
    pub fn elites(&self) -> impl Iterator<Item = (usize, &Elite)> {
        self.bins.iter().map(|(i, e)| (*i, e))
    }

    pub fn occupied_bins(&self) -> Vec<usize> {
        self.bins.keys().copied().collect()
    }

    pub fn history(&self) -> &[Insertion] {
        &self.history
    }

    /// Highest-fitness elite; ties go to the lowest bin index.
    pub fn best(&self) -> Option<(usize, &Elite)> {
        self.elites().fold(None, |best, (i, e)| match best {
            Some((_, b)) if b.result.fitness >= e.result.fitness => best,
            _ => Some((i, e)),
        })
    }

    /// Counts one evaluation and keeps the candidate if its bin is empty or it
    /// is strictly fitter than the incumbent.
    pub fn insert(
        &mut self,
        genome: Genome,
        descriptor: BehaviorDescriptor,
        result: EvaluationResult,
    ) -> Result<bool> {
        let bin = bin_index(&descriptor, &self.layout)?;
        self.evaluations += 1;
        if let Some(inc) = self.bins.get(&bin) {
            if result.fitness <= inc.result.fitness {
                return Ok(false);
            }
        }
        self.history.push(Insertion {
            evaluation: self.evaluations,
            bin,
            fitness: result.fitness,
        });
        self.bins.insert(
            bin,
            Elite {
                genome,
                result,
                descriptor,
                discovered_at: self.evaluations,
            },
        );
        Ok(true)
    }

    /// Rebuilds an archive from stored elites, e.g. a snapshot on disk.
    pub fn from_elites(
        layout: ArchiveLayout,
        elites: impl IntoIterator<Item = Elite>,
        evaluations: u64,
    ) -> Result<Self> {
        let mut archive = Archive::new(layout);
        for e in elites {
            let bin = bin_index(&e.descriptor, &archive.layout)?;
            archive.bins.insert(bin, e);
        }
        archive.evaluations = evaluations;
        Ok(archive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::Characterization;

    fn result(fitness: f64) -> EvaluationResult {
        EvaluationResult {
            fitness,
            flew: false,
            direction: None,
            com_trajectory: vec![],
            leftover_count: 0,
            ticks_used: 20,
        }
    }

    fn genome(v: f64) -> Genome {
        Genome::new(vec![v; 3]).unwrap()
    }

    #[test]
    fn insertion_rule() {
        let mut a = Archive::new(ArchiveLayout::new(Characterization::BlockCount));
        let d = BehaviorDescriptor(vec![4]);
        assert!(a.insert(genome(0.1), d.clone(), result(2.0)).unwrap());
        assert!(!a.insert(genome(0.2), d.clone(), result(2.0)).unwrap());
        assert_eq!(a.get(4).unwrap().genome, genome(0.1));
        assert!(!a.insert(genome(0.3), d.clone(), result(1.0)).unwrap());
        assert!(a.insert(genome(0.4), d.clone(), result(3.0)).unwrap());
        let e = a.get(4).unwrap();
        assert_eq!(e.genome, genome(0.4));
        assert_eq!(e.discovered_at, 4);
        assert_eq!(a.evaluations(), 4);
        assert_eq!(a.occupied(), 1);
        assert_eq!(a.history().len(), 2);
    }

    #[test]
    fn out_of_layout_descriptor_is_rejected_without_counting() {
        let mut a = Archive::new(ArchiveLayout::new(Characterization::BlockCount));
        assert!(a.insert(genome(0.1), BehaviorDescriptor(vec![28]), result(1.0)).is_err());
        assert_eq!(a.evaluations(), 0);
    }

    #[test]
    fn best_prefers_lowest_bin_on_ties() {
        let mut a = Archive::new(ArchiveLayout::new(Characterization::BlockCount));
        a.insert(genome(0.1), BehaviorDescriptor(vec![9]), result(5.0)).unwrap();
        a.insert(genome(0.1), BehaviorDescriptor(vec![3]), result(5.0)).unwrap();
        a.insert(genome(0.1), BehaviorDescriptor(vec![1]), result(4.0)).unwrap();
        assert_eq!(a.best().unwrap().0, 3);
    }
}
