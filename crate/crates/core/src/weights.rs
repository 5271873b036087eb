//! Inverse-frequency class weights: each class gets `max(counts) / count`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassWeights<K: Ord> {
    pub weights: BTreeMap<K, f64>,
}

impl<K: Ord> ClassWeights<K> {
    pub fn get(&self, class: &K) -> Option<f64> {
        self.weights.get(class).copied()
    }
}

pub fn class_weights<K: Ord + Clone>(counts: &BTreeMap<K, u64>) -> Result<ClassWeights<K>> {
    if counts.is_empty() {
        return Err(Error::InvalidArgument("no class counts given".into()));
    }
    if counts.values().any(|&c| c == 0) {
        return Err(Error::InvalidArgument(
            "every class needs at least one sample".into(),
        ));
    }
    let max = *counts.values().max().unwrap() as f64;
    Ok(ClassWeights {
        weights: counts
            .iter()
            .map(|(k, &c)| (k.clone(), max / c as f64))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_counts_give_unit_weights() {
        let counts = BTreeMap::from([("a", 5), ("b", 5), ("c", 5)]);
        let w = class_weights(&counts).unwrap();
        assert!(w.weights.values().all(|&v| v == 1.0));
    }

    #[test]
    fn ratio_to_largest() {
        let w = class_weights(&BTreeMap::from([("A", 10), ("B", 1)])).unwrap();
        assert_eq!(w.get(&"A"), Some(1.0));
        assert_eq!(w.get(&"B"), Some(10.0));
    }

    #[test]
    fn zero_count_is_an_error() {
        assert!(class_weights(&BTreeMap::from([("A", 10), ("B", 0)])).is_err());
        assert!(class_weights::<&str>(&BTreeMap::new()).is_err());
    }
}
