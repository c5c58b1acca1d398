//! Instance generators built from classic source problems, with provenance
//! metadata for mapping solutions back, plus a seeded random generator.
//!
//! Source-problem ids (elements, sets, variables, clauses, tuples, nodes) are
//! 1-based. Metadata tables are keyed by 1-based feature id and 1-based
//! exemplar id, matching the text formats.

mod cnf;
mod kdm;
mod random;
mod set_cover;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TapError};
use crate::model::Instance;

pub use cnf::{from_cnf, to_assignment, AssignmentRecovery, CnfParams, CnfSource};
pub use kdm::{canonicalize_kdm, from_kdm, to_matching, KdmSource};
pub use random::{random_instance, RandomParams};
pub use set_cover::{from_graph, from_set_cover, to_set_cover_solution, SetCoverSource};

/// Largest source-object count accepted from metadata.
pub const MAX_SOURCE_OBJECTS: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionKind {
    SetCover,
    Cnf,
    Kdm,
    VertexCover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum FeatureOrigin {
    /// Universe element of a set system (blue).
    Element { element: usize },
    /// Set of a set system (red).
    Set { set: usize },
    /// Graph edge (blue).
    Edge { edge: usize },
    /// Graph node (red).
    Node { node: usize },
    /// CNF clause (blue).
    Clause { clause: usize },
    /// Red feature private to the exemplar of one literal.
    Penalty { variable: usize, value: bool, index: usize },
    /// Blue feature shared by both exemplars of a variable.
    Reward { variable: usize, index: usize },
    /// Matching element, numbered across all dimensions (blue).
    TupleElement { element: usize },
    /// Red feature shared by the exemplars of one tuple.
    TupleRed { tuple: usize, index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum ExemplarOrigin {
    /// `{set, element}` pair of a set system.
    Membership { set: usize, element: usize },
    /// `{node, edge}` pair of a graph.
    Incidence { node: usize, edge: usize },
    /// Exemplar standing for `variable = value`.
    Literal { variable: usize, value: bool },
    /// Exemplar of one tuple holding its component in `dimension` (1-based).
    TupleSlot { tuple: usize, dimension: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub penalty: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reward: Option<usize>,
    /// Number of source objects (sets, variables, tuples or nodes).
    pub source_objects: usize,
    /// Number of source items covered (elements, clauses, matching elements or edges).
    pub source_items: usize,
    /// Largest occurrence count in the generated instance.
    pub max_occurrence: usize,
    pub max_weight: usize,
}

/// Provenance of every feature and exemplar of a generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMeta {
    pub kind: ReductionKind,
    pub n_features: usize,
    pub n_exemplars: usize,
    pub params: ReductionParams,
    pub features: BTreeMap<usize, FeatureOrigin>,
    pub exemplars: BTreeMap<usize, ExemplarOrigin>,
}

impl ReductionMeta {
    fn new(kind: ReductionKind, features: Vec<FeatureOrigin>, exemplars: Vec<ExemplarOrigin>) -> Self {
        ReductionMeta {
            kind,
            n_features: features.len(),
            n_exemplars: exemplars.len(),
            params: ReductionParams::default(),
            features: features.into_iter().enumerate().map(|(i, o)| (i + 1, o)).collect(),
            exemplars: exemplars.into_iter().enumerate().map(|(j, o)| (j + 1, o)).collect(),
        }
    }

    fn record_shape(&mut self, instance: &Instance) {
        let stats = instance.classify();
        self.params.max_occurrence = stats.max_occurrence;
        self.params.max_weight = stats.max_weight;
    }

    pub fn feature(&self, id: usize) -> Option<&FeatureOrigin> {
        self.features.get(&id)
    }

    /// Origin of the exemplar at 0-based `index`.
    pub fn exemplar(&self, index: usize) -> Option<&ExemplarOrigin> {
        self.exemplars.get(&(index + 1))
    }

    /// Rejects metadata that does not describe `instance` or is of another
    /// kind than `expected`.
    pub fn check(&self, instance: &Instance, expected: &[ReductionKind]) -> Result<()> {
        if !expected.contains(&self.kind) {
            return Err(TapError::MetaMismatch(format!(
                "expected {expected:?} metadata, found {:?}",
                self.kind
            )));
        }
        if self.n_features != instance.n_features()
            || self.n_exemplars != instance.n_exemplars()
            || self.features.len() != self.n_features
            || self.exemplars.len() != self.n_exemplars
            || self.features.keys().copied().ne(1..=self.n_features)
            || self.exemplars.keys().copied().ne(1..=self.n_exemplars)
        {
            return Err(TapError::MetaMismatch(format!(
                "metadata describes {} features and {} exemplars, instance has {} and {}",
                self.n_features,
                self.n_exemplars,
                instance.n_features(),
                instance.n_exemplars()
            )));
        }
        // Back-mapping allocates per source object, so bound it by what the
        // instance could possibly encode.
        let objects_limit = match self.kind {
            ReductionKind::Kdm => self.n_exemplars,
            _ => MAX_SOURCE_OBJECTS,
        };
        if self.params.source_objects > objects_limit {
            return Err(TapError::MetaMismatch(format!(
                "{} source objects is implausible for this instance",
                self.params.source_objects
            )));
        }
        for (&f, origin) in &self.features {
            let blue = matches!(
                origin,
                FeatureOrigin::Element { .. }
                    | FeatureOrigin::Edge { .. }
                    | FeatureOrigin::Clause { .. }
                    | FeatureOrigin::Reward { .. }
                    | FeatureOrigin::TupleElement { .. }
            );
            if blue != instance.is_blue(f) {
                return Err(TapError::MetaMismatch(format!("feature {f} has the wrong color")));
            }
        }
        for (j, exemplar) in instance.exemplars().iter().enumerate() {
            let origin = self.exemplars[&(j + 1)];
            let consistent = exemplar.iter().all(|f| {
                match (origin, self.features[f]) {
                    (ExemplarOrigin::Membership { set, .. }, FeatureOrigin::Set { set: s }) => s == set,
                    (ExemplarOrigin::Membership { element, .. }, FeatureOrigin::Element { element: e }) => {
                        e == element
                    }
                    (ExemplarOrigin::Incidence { node, .. }, FeatureOrigin::Node { node: v }) => v == node,
                    (ExemplarOrigin::Incidence { edge, .. }, FeatureOrigin::Edge { edge: e }) => e == edge,
                    (ExemplarOrigin::Literal { .. }, FeatureOrigin::Clause { .. }) => true,
                    (
                        ExemplarOrigin::Literal { variable, value },
                        FeatureOrigin::Penalty { variable: v, value: b, .. },
                    ) => v == variable && b == value,
                    (ExemplarOrigin::Literal { variable, .. }, FeatureOrigin::Reward { variable: v, .. }) => {
                        v == variable
                    }
                    (ExemplarOrigin::TupleSlot { .. }, FeatureOrigin::TupleElement { .. }) => true,
                    (ExemplarOrigin::TupleSlot { tuple, .. }, FeatureOrigin::TupleRed { tuple: t, .. }) => {
                        t == tuple
                    }
                    _ => false,
                }
            });
            if !consistent {
                return Err(TapError::MetaMismatch(format!(
                    "exemplar {} does not match its recorded origin",
                    j + 1
                )));
            }
        }
        Ok(())
    }
}
