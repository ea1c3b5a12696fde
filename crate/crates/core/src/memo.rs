//! Write-once memo tables shared across threads.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::RwLock;

#[derive(Debug)]
pub struct Memo<K, V> {
    map: RwLock<HashMap<K, V>>,
}

impl<K, V> Default for Memo<K, V> {
    fn default() -> Self {
        Memo { map: RwLock::new(HashMap::new()) }
    }
}

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    pub fn get(&self, k: &K) -> Option<V> {
        self.map.read().unwrap().get(k).cloned()
    }

    /// Returns the cached value or computes it outside the lock. Two racing
    /// threads may both compute; the first insert wins, and both values are
    /// equal because `f` is pure.
    pub fn get_or_insert_with(&self, k: &K, f: impl FnOnce() -> V) -> V {
        if let Some(v) = self.get(k) {
            return v;
        }
        let v = f();
        self.map.write().unwrap().entry(k.clone()).or_insert(v).clone()
    }

    /// Replaces the cached value; used when a longer truncation supersedes it.
    pub fn put(&self, k: K, v: V) {
        self.map.write().unwrap().insert(k, v);
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
