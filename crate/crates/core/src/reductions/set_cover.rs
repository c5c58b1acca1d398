use crate::error::{Result, TapError};
use crate::greedy::augment_full_blue;
use crate::model::{Instance, Solution};

use super::{ExemplarOrigin, FeatureOrigin, ReductionKind, ReductionMeta};

/// A set system over elements `1..=universe_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverSource {
    pub universe_size: usize,
    /// Ascending, deduplicated element ids of each set.
    pub sets: Vec<Vec<usize>>,
}

impl SetCoverSource {
    pub fn new(universe_size: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut sets = sets;
        let mut seen = vec![false; universe_size + 1];
        for (i, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(TapError::InvalidSource(format!("set {} is empty", i + 1)));
            }
            for &e in set.iter() {
                if e == 0 || e > universe_size {
                    return Err(TapError::InvalidSource(format!(
                        "set {} names element {e} outside 1..={universe_size}",
                        i + 1
                    )));
                }
                seen[e] = true;
            }
        }
        if let Some(e) = (1..=universe_size).find(|&e| !seen[e]) {
            return Err(TapError::InvalidSource(format!("element {e} is in no set")));
        }
        if universe_size == 0 {
            return Err(TapError::InvalidSource("universe is empty".into()));
        }
        Ok(SetCoverSource {
            universe_size,
            sets,
        })
    }
}

/// One blue feature per element (ids `1..=|U|`), one red feature per set (ids
/// following), and one `{set, element}` exemplar per membership. The optimal
/// margin is `|U|` minus the minimum cover size.
pub fn from_set_cover(source: &SetCoverSource) -> Result<(Instance, ReductionMeta)> {
    let source = SetCoverSource::new(source.universe_size, source.sets.clone())?;
    let u = source.universe_size;
    let mut features: Vec<FeatureOrigin> = (1..=u).map(|element| FeatureOrigin::Element { element }).collect();
    features.extend((1..=source.sets.len()).map(|set| FeatureOrigin::Set { set }));
    let mut exemplars = Vec::new();
    let mut origins = Vec::new();
    for (i, set) in source.sets.iter().enumerate() {
        for &e in set {
            exemplars.push(vec![u + i + 1, e]);
            origins.push(ExemplarOrigin::Membership { set: i + 1, element: e });
        }
    }
    let instance = Instance::new(features.len(), 1..=u, exemplars)?;
    let mut meta = ReductionMeta::new(ReductionKind::SetCover, features, origins);
    meta.params.source_objects = source.sets.len();
    meta.params.source_items = u;
    meta.record_shape(&instance);
    Ok((instance, meta))
}

/// Vertex cover as a set system: edges are blue, nodes are red, and each edge
/// appears with both endpoints. Nodes without edges get no feature.
pub fn from_graph(n_nodes: usize, edges: &[(usize, usize)]) -> Result<(Instance, ReductionMeta)> {
    if edges.is_empty() {
        return Err(TapError::InvalidSource("graph has no edges".into()));
    }
    let mut degree = vec![0usize; n_nodes + 1];
    for (e, &(u, v)) in edges.iter().enumerate() {
        for w in [u, v] {
            if w == 0 || w > n_nodes {
                return Err(TapError::InvalidSource(format!(
                    "edge {} names node {w} outside 1..={n_nodes}",
                    e + 1
                )));
            }
        }
        degree[u] += 1;
        if v != u {
            degree[v] += 1;
        }
    }
    let m = edges.len();
    let mut features: Vec<FeatureOrigin> = (1..=m).map(|edge| FeatureOrigin::Edge { edge }).collect();
    let mut node_feature = vec![0usize; n_nodes + 1];
    for node in (1..=n_nodes).filter(|&v| degree[v] > 0) {
        features.push(FeatureOrigin::Node { node });
        node_feature[node] = features.len();
    }
    let mut exemplars = Vec::new();
    let mut origins = Vec::new();
    for (node, &feature) in node_feature.iter().enumerate().skip(1) {
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u == node || v == node {
                exemplars.push(vec![feature, e + 1]);
                origins.push(ExemplarOrigin::Incidence { node, edge: e + 1 });
            }
        }
    }
    let instance = Instance::new(features.len(), 1..=m, exemplars)?;
    let mut meta = ReductionMeta::new(ReductionKind::VertexCover, features, origins);
    meta.params.source_objects = n_nodes;
    meta.params.source_items = m;
    meta.record_shape(&instance);
    Ok((instance, meta))
}

/// Completes `solution` to cover every element and reads off the sets (or
/// nodes) whose red feature is covered. The family has size
/// `|U| - margin(completed)`.
pub fn to_set_cover_solution(meta: &ReductionMeta, instance: &Instance, solution: &Solution) -> Result<Vec<usize>> {
    meta.check(instance, &[ReductionKind::SetCover, ReductionKind::VertexCover])?;
    let completed = augment_full_blue(instance, solution)?;
    let coverage = instance.covered(&completed.selected)?;
    let mut ids: Vec<usize> = coverage
        .red
        .iter()
        .map(|&f| match meta.features[&f] {
            FeatureOrigin::Set { set } => Ok(set),
            FeatureOrigin::Node { node } => Ok(node),
            other => Err(TapError::MetaMismatch(format!("red feature {f} recorded as {other:?}"))),
        })
        .collect::<Result<_>>()?;
    ids.sort_unstable();
    Ok(ids)
}
