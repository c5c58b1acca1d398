//! Instance and solution model, margin evaluation and structural classification.
//!
//! Features are dense 1-based ids `1..=n_features`. Colors are carried by the
//! blue set; every feature not in it is red. Exemplars are addressed by their
//! 0-based position in the exemplar list.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TapError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    n_features: usize,
    // Indexed by feature id; slot 0 is unused.
    is_blue: Vec<bool>,
    exemplars: Vec<Vec<usize>>,
}

/// A broken instance invariant, as reported by [`Instance::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoBlueFeature,
    EmptyExemplar { index: usize },
    UncoveredFeature { feature: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoBlueFeature => write!(f, "target is empty: no blue feature"),
            Violation::EmptyExemplar { index } => write!(f, "exemplar {} is empty", index + 1),
            Violation::UncoveredFeature { feature } => {
                write!(f, "feature {feature} appears in no exemplar")
            }
        }
    }
}

/// Covered features of a selection, split by color. Both lists are ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coverage {
    pub blue: Vec<usize>,
    pub red: Vec<usize>,
}

impl Coverage {
    pub fn margin(&self) -> i64 {
        self.blue.len() as i64 - self.red.len() as i64
    }
}

impl Instance {
    /// Builds an instance from its feature count, blue ids and exemplar lists.
    ///
    /// Exemplar feature lists are sorted and deduplicated. Ids outside
    /// `1..=n_features` are rejected; the remaining invariants are checked by
    /// [`Instance::validate`] so that intermediate states can still be built.
    pub fn new(
        n_features: usize,
        blue: impl IntoIterator<Item = usize>,
        exemplars: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let mut is_blue = vec![false; n_features + 1];
        for feature in blue {
            check_feature(feature, n_features)?;
            is_blue[feature] = true;
        }
        let mut normalized = exemplars;
        for exemplar in &mut normalized {
            for &feature in exemplar.iter() {
                check_feature(feature, n_features)?;
            }
            exemplar.sort_unstable();
            exemplar.dedup();
        }
        Ok(Instance {
            n_features,
            is_blue,
            exemplars: normalized,
        })
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_exemplars(&self) -> usize {
        self.exemplars.len()
    }

    pub fn n_blue(&self) -> usize {
        self.is_blue.iter().filter(|&&b| b).count()
    }

    pub fn n_red(&self) -> usize {
        self.n_features - self.n_blue()
    }

    /// Panics if `feature` is not a valid id.
    pub fn is_blue(&self, feature: usize) -> bool {
        assert!(feature >= 1 && feature <= self.n_features, "feature {feature} out of range");
        self.is_blue[feature]
    }

    pub fn blue(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n_features).filter(move |&f| self.is_blue[f])
    }

    pub fn red(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n_features).filter(move |&f| !self.is_blue[f])
    }

    pub fn exemplars(&self) -> &[Vec<usize>] {
        &self.exemplars
    }

    pub fn exemplar(&self, index: usize) -> &[usize] {
        &self.exemplars[index]
    }

    pub fn blue_weight(&self, index: usize) -> usize {
        self.exemplars[index].iter().filter(|&&f| self.is_blue[f]).count()
    }

    pub fn red_weight(&self, index: usize) -> usize {
        self.exemplars[index].len() - self.blue_weight(index)
    }

    /// The red feature of an exemplar holding exactly one red feature.
    pub fn sole_red(&self, index: usize) -> Option<usize> {
        let mut reds = self.exemplars[index].iter().filter(|&&f| !self.is_blue[f]);
        match (reds.next(), reds.next()) {
            (Some(&r), None) => Some(r),
            _ => None,
        }
    }

    /// Occurrence count per feature, indexed by feature id (slot 0 is always 0).
    pub fn occurrences(&self) -> Vec<usize> {
        let mut count = vec![0; self.n_features + 1];
        for exemplar in &self.exemplars {
            for &f in exemplar {
                count[f] += 1;
            }
        }
        count
    }

    /// For every feature id, the exemplars containing it, in ascending order.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.n_features + 1];
        for (j, exemplar) in self.exemplars.iter().enumerate() {
            for &f in exemplar {
                lists[f].push(j);
            }
        }
        lists
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        if !self.is_blue.iter().any(|&b| b) {
            violations.push(Violation::NoBlueFeature);
        }
        for (index, exemplar) in self.exemplars.iter().enumerate() {
            if exemplar.is_empty() {
                violations.push(Violation::EmptyExemplar { index });
            }
        }
        let occurrences = self.occurrences();
        violations.extend(
            (1..=self.n_features)
                .filter(|&feature| occurrences[feature] == 0)
                .map(|feature| Violation::UncoveredFeature { feature }),
        );
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn covered(&self, selected: &[usize]) -> Result<Coverage> {
        let mut seen = vec![false; self.n_features + 1];
        for &j in selected {
            let exemplar = self.exemplars.get(j).ok_or(TapError::ExemplarOutOfRange {
                index: j,
                n_exemplars: self.exemplars.len(),
            })?;
            for &f in exemplar {
                seen[f] = true;
            }
        }
        let mut coverage = Coverage::default();
        for f in (1..=self.n_features).filter(|&f| seen[f]) {
            if self.is_blue[f] {
                coverage.blue.push(f);
            } else {
                coverage.red.push(f);
            }
        }
        Ok(coverage)
    }

    /// Covered blue count minus covered red count of the union of `selected`.
    pub fn margin(&self, selected: &[usize]) -> Result<i64> {
        let mut seen = vec![false; self.n_features + 1];
        let mut margin = 0i64;
        for &j in selected {
            let exemplar = self.exemplars.get(j).ok_or(TapError::ExemplarOutOfRange {
                index: j,
                n_exemplars: self.exemplars.len(),
            })?;
            for &f in exemplar {
                if !seen[f] {
                    seen[f] = true;
                    margin += if self.is_blue[f] { 1 } else { -1 };
                }
            }
        }
        Ok(margin)
    }

    pub fn is_one_red(&self) -> bool {
        (0..self.exemplars.len()).all(|j| self.red_weight(j) == 1)
    }

    pub fn is_separable(&self) -> bool {
        (0..self.exemplars.len()).all(|j| self.blue_weight(j) == 0 || self.red_weight(j) == 0)
    }

    pub fn classify(&self) -> InstanceStats {
        let per_exemplar_blue_weight: Vec<usize> =
            (0..self.exemplars.len()).map(|j| self.blue_weight(j)).collect();
        let per_exemplar_red_weight: Vec<usize> = self
            .exemplars
            .iter()
            .zip(&per_exemplar_blue_weight)
            .map(|(e, &b)| e.len() - b)
            .collect();
        let per_feature_occurrence = self.occurrences()[1..].to_vec();
        InstanceStats {
            n_features: self.n_features,
            n_exemplars: self.exemplars.len(),
            n_blue: self.n_blue(),
            n_red: self.n_red(),
            max_weight: self.exemplars.iter().map(Vec::len).max().unwrap_or(0),
            max_occurrence: per_feature_occurrence.iter().copied().max().unwrap_or(0),
            is_one_red: per_exemplar_red_weight.iter().all(|&r| r == 1),
            is_separable: per_exemplar_blue_weight
                .iter()
                .zip(&per_exemplar_red_weight)
                .all(|(&b, &r)| b == 0 || r == 0),
            per_exemplar_blue_weight,
            per_exemplar_red_weight,
            per_feature_occurrence,
        }
    }
}

fn check_feature(feature: usize, n_features: usize) -> Result<()> {
    if feature == 0 || feature > n_features {
        return Err(TapError::FeatureOutOfRange {
            feature,
            n_features,
        });
    }
    Ok(())
}

/// Structural classification of an instance.
///
/// `per_feature_occurrence[i]` is the occurrence count of feature `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceStats {
    pub n_features: usize,
    pub n_exemplars: usize,
    pub n_blue: usize,
    pub n_red: usize,
    pub max_weight: usize,
    pub max_occurrence: usize,
    pub is_one_red: bool,
    pub is_separable: bool,
    pub per_exemplar_blue_weight: Vec<usize>,
    pub per_exemplar_red_weight: Vec<usize>,
    pub per_feature_occurrence: Vec<usize>,
}

/// A selection of exemplars with its margin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Ascending, deduplicated 0-based exemplar indices.
    pub selected: Vec<usize>,
    pub margin: i64,
    /// Set only by solvers that guarantee optimality on the instance.
    pub optimal: bool,
}

impl Solution {
    pub fn evaluate(instance: &Instance, selected: Vec<usize>, optimal: bool) -> Result<Self> {
        let mut selected = selected;
        selected.sort_unstable();
        selected.dedup();
        let margin = instance.margin(&selected)?;
        Ok(Solution {
            selected,
            margin,
            optimal,
        })
    }

    pub fn empty() -> Self {
        Solution {
            selected: Vec::new(),
            margin: 0,
            optimal: false,
        }
    }

    /// True when the stored margin equals the recomputed one.
    pub fn is_consistent(&self, instance: &Instance) -> bool {
        instance.margin(&self.selected).ok() == Some(self.margin)
    }
}
