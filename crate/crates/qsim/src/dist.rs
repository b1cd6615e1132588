use std::collections::BTreeMap;

use crate::bits::BitString;

/// Exact probabilities of measurement outcomes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OutcomeDistribution {
    probs: BTreeMap<BitString, f64>,
}

impl OutcomeDistribution {
    pub fn from_map(probs: BTreeMap<BitString, f64>) -> Self {
        OutcomeDistribution { probs }
    }

    /// Empirical distribution of a sample list.
    pub fn empirical<'a, I: IntoIterator<Item = &'a BitString>>(samples: I) -> Self {
        let mut counts: BTreeMap<BitString, f64> = BTreeMap::new();
        let mut n = 0usize;
        for s in samples {
            *counts.entry(s.clone()).or_default() += 1.0;
            n += 1;
        }
        for v in counts.values_mut() {
            *v /= n as f64;
        }
        OutcomeDistribution { probs: counts }
    }

    pub fn prob(&self, outcome: &BitString) -> f64 {
        self.probs.get(outcome).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitString, f64)> {
        self.probs.iter().map(|(k, v)| (k, *v))
    }

    /// Total variation distance.
    pub fn tv_distance(&self, other: &OutcomeDistribution) -> f64 {
        let mut keys: Vec<&BitString> = self.probs.keys().collect();
        keys.extend(other.probs.keys());
        keys.sort();
        keys.dedup();
        keys.iter()
            .map(|k| (self.prob(k) - other.prob(k)).abs())
            .sum::<f64>()
            / 2.0
    }

    /// Largest pointwise probability difference.
    pub fn max_abs_diff(&self, other: &OutcomeDistribution) -> f64 {
        self.probs
            .keys()
            .chain(other.probs.keys())
            .map(|k| (self.prob(k) - other.prob(k)).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn tv_of_disjoint_is_one() {
        let a = OutcomeDistribution::empirical([&bits("0")]);
        let b = OutcomeDistribution::empirical([&bits("1")]);
        assert!((a.tv_distance(&b) - 1.0).abs() < 1e-12);
        assert_eq!(a.tv_distance(&a), 0.0);
    }
}
