use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, RwLock};

use super::{build_table, BuildLimits, LaverTable, TableError};

/// Lazily built tables shared between queries.
///
/// Reads are concurrent; construction is serialized and charged against a
/// single memory budget covering every cached level.
#[derive(Debug)]
pub struct TableCache {
    limits: BuildLimits,
    tables: RwLock<BTreeMap<u32, Arc<LaverTable>>>,
    building: Mutex<u64>,
}

impl Default for TableCache {
    fn default() -> Self {
        TableCache::new(BuildLimits::default())
    }
}

impl TableCache {
    pub fn new(limits: BuildLimits) -> Self {
        TableCache {
            limits,
            tables: RwLock::new(BTreeMap::new()),
            building: Mutex::new(0),
        }
    }

    pub fn limits(&self) -> BuildLimits {
        self.limits
    }

    pub fn get(&self, level: u32) -> Result<Arc<LaverTable>, TableError> {
        if let Some(t) = self.tables.read().unwrap().get(&level) {
            return Ok(Arc::clone(t));
        }
        let mut used = self.building.lock().unwrap();
        if let Some(t) = self.tables.read().unwrap().get(&level) {
            return Ok(Arc::clone(t));
        }
        let limits = BuildLimits {
            memory_cap: self.limits.memory_cap.saturating_sub(*used),
            max_level: self.limits.max_level,
        };
        let table = Arc::new(build_table(level, limits)?);
        *used += table.memory_bytes();
        self.tables.write().unwrap().insert(level, Arc::clone(&table));
        Ok(table)
    }

    /// Tables for levels `0..=cap`.
    pub fn upto(&self, cap: u32) -> Result<Vec<Arc<LaverTable>>, TableError> {
        (0..=cap).map(|n| self.get(n)).collect()
    }

    pub fn memory_used(&self) -> u64 {
        *self.building.lock().unwrap()
    }
}
