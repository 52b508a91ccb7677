//! Best-known objective values for the benchmark instances, bundled as a
//! data file. Each entry records which result table it was transcribed
//! from and whether the value was first reported there.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Deserialize;

const REGISTRY_CSV: &str = include_str!("../../data/best_known.csv");

#[derive(Debug, Clone, Deserialize)]
pub struct BestKnownEntry {
    pub dataset: String,
    pub k: usize,
    pub best_known: f64,
    /// Number of the published result table the value was transcribed from.
    pub source_table: u32,
    /// Value improved on the previously published best.
    pub new_best: bool,
}

/// Lookup table from `(dataset name, k)` to the best published objective.
#[derive(Debug)]
pub struct BestKnownRegistry {
    entries: Vec<BestKnownEntry>,
    index: HashMap<(String, usize), usize>,
}

impl BestKnownRegistry {
    fn parse(csv_text: &str) -> BestKnownRegistry {
        let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
        let entries: Vec<BestKnownEntry> = reader
            .deserialize()
            .collect::<std::result::Result<_, _>>()
            .expect("bundled registry parses");
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.dataset.clone(), e.k), i))
            .collect();
        BestKnownRegistry { entries, index }
    }

    /// The registry bundled with the crate.
    pub fn bundled() -> &'static BestKnownRegistry {
        static REGISTRY: OnceLock<BestKnownRegistry> = OnceLock::new();
        REGISTRY.get_or_init(|| BestKnownRegistry::parse(REGISTRY_CSV))
    }

    pub fn lookup(&self, dataset: &str, k: usize) -> Option<f64> {
        self.entry(dataset, k).map(|e| e.best_known)
    }

    pub fn entry(&self, dataset: &str, k: usize) -> Option<&BestKnownEntry> {
        self.index
            .get(&(dataset.to_string(), k))
            .map(|&i| &self.entries[i])
    }

    pub fn entries(&self) -> &[BestKnownEntry] {
        &self.entries
    }
}

/// Best-known objective for `(dataset, k)`, if the bundled registry has
/// one.
pub fn best_known(dataset: &str, k: usize) -> Option<f64> {
    BestKnownRegistry::bundled().lookup(dataset, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_registry_has_all_72_instances() {
        assert_eq!(BestKnownRegistry::bundled().entries().len(), 72);
    }

    #[test]
    fn known_lookups() {
        assert_eq!(best_known("ruspini75", 2), Some(8.93378e4));
        assert_eq!(best_known("fisher", 10), Some(2.58340e1));
        assert_eq!(best_known("unknown", 3), None);
        assert_eq!(best_known("ruspini75", 11), None);
    }

    #[test]
    fn values_are_positive_and_decrease_with_k() {
        let registry = BestKnownRegistry::bundled();
        for entry in registry.entries() {
            assert!(entry.best_known > 0.0);
            if let Some(previous) = registry.lookup(&entry.dataset, entry.k - 1) {
                assert!(
                    entry.best_known < previous,
                    "{} k={} not below k={}",
                    entry.dataset,
                    entry.k,
                    entry.k - 1
                );
            }
        }
    }

    #[test]
    fn new_best_tags() {
        let registry = BestKnownRegistry::bundled();
        assert!(registry.entry("tsplib1060", 25).unwrap().new_best);
        assert!(registry.entry("letter", 15).unwrap().new_best);
        assert!(!registry.entry("kegg", 25).unwrap().new_best);
        let new_count = registry.entries().iter().filter(|e| e.new_best).count();
        assert_eq!(new_count, 5);
    }
}
