use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::scalar::Scalar;

/// Sigmoid WDTW weights `1 / (1 + exp(-g (delta - len/2)))` for `delta = 0..len`.
pub fn weight_vector<T: Scalar>(g: T, len: usize) -> Vec<T> {
    let half = T::from_usize(len).unwrap() / (T::one() + T::one());
    (0..len)
        .map(|delta| {
            let delta = T::from_usize(delta).unwrap();
            T::one() / (T::one() + (-g * (delta - half)).exp())
        })
        .collect()
}

/// `(g bits, length)`.
type Key = (u64, usize);

/// Weight vectors keyed by the exact bits of `g` and the length.
///
/// A vector is built at most once per key; lookups take a shared lock.
pub struct WeightCache<T> {
    entries: RwLock<HashMap<Key, Arc<[T]>>>,
}

impl<T: Scalar> WeightCache<T> {
    pub fn new() -> Self {
        WeightCache {
            entries: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, g: T, len: usize) -> Arc<[T]> {
        let key = (g.as_f64().to_bits(), len);
        if let Some(w) = self.entries.read().unwrap().get(&key) {
            return Arc::clone(w);
        }
        let mut entries = self.entries.write().unwrap();
        Arc::clone(
            entries
                .entry(key)
                .or_insert_with(|| weight_vector(g, len).into()),
        )
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T: Scalar> Default for WeightCache<T> {
    fn default() -> Self {
        Self::new()
    }
}
