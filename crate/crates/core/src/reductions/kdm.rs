use crate::error::{Result, TapError};
use crate::model::{Instance, Solution};

use super::{ExemplarOrigin, FeatureOrigin, ReductionKind, ReductionMeta};

/// A k-dimensional matching source.
///
/// Elements are numbered consecutively across dimensions: dimension 1 owns
/// `1..=dim_sizes[0]`, dimension 2 the next `dim_sizes[1]` ids, and so on.
/// Component `i` of every tuple must come from dimension `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KdmSource {
    pub dim_sizes: Vec<usize>,
    pub tuples: Vec<Vec<usize>>,
}

impl KdmSource {
    pub fn new(dim_sizes: Vec<usize>, tuples: Vec<Vec<usize>>) -> Result<Self> {
        if dim_sizes.is_empty() {
            return Err(TapError::InvalidSource("matching needs at least one dimension".into()));
        }
        let source = KdmSource { dim_sizes, tuples };
        for (t, tuple) in source.tuples.iter().enumerate() {
            if tuple.len() != source.k() {
                return Err(TapError::InvalidSource(format!(
                    "tuple {} has {} components, expected {}",
                    t + 1,
                    tuple.len(),
                    source.k()
                )));
            }
            for (dim, &e) in tuple.iter().enumerate() {
                let range = source.dimension_range(dim);
                if !range.contains(&e) {
                    return Err(TapError::InvalidSource(format!(
                        "tuple {} component {} is {e}, outside {}..={}",
                        t + 1,
                        dim + 1,
                        range.start(),
                        range.end()
                    )));
                }
            }
        }
        Ok(source)
    }

    pub fn k(&self) -> usize {
        self.dim_sizes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.dim_sizes.iter().sum()
    }

    /// Element ids owned by 0-based dimension `dim`.
    pub fn dimension_range(&self, dim: usize) -> std::ops::RangeInclusive<usize> {
        let start: usize = self.dim_sizes[..dim].iter().sum::<usize>() + 1;
        start..=start + self.dim_sizes[dim] - 1
    }

    /// Largest number of tuples sharing one element.
    pub fn max_element_occurrence(&self) -> usize {
        let mut count = vec![0usize; self.n_elements() + 1];
        for &e in self.tuples.iter().flatten() {
            count[e] += 1;
        }
        count.into_iter().max().unwrap_or(0)
    }

    /// True when the 1-based tuple ids are pairwise element-disjoint.
    pub fn is_matching(&self, tuple_ids: &[usize]) -> bool {
        let mut used = vec![false; self.n_elements() + 1];
        for &t in tuple_ids {
            for &e in &self.tuples[t - 1] {
                if std::mem::replace(&mut used[e], true) {
                    return false;
                }
            }
        }
        true
    }
}

/// One blue feature per element used by some tuple, `k - 1` red features per
/// tuple, and per tuple `k` exemplars each holding one component's blue
/// feature plus all of the tuple's reds. The optimal margin is the maximum
/// matching size.
///
/// Blue features take ids `1..` in element order; red features follow, tuple
/// by tuple. Exemplars are listed tuple by tuple, dimension by dimension.
pub fn from_kdm(source: &KdmSource) -> Result<(Instance, ReductionMeta)> {
    let source = KdmSource::new(source.dim_sizes.clone(), source.tuples.clone())?;
    if source.tuples.is_empty() {
        return Err(TapError::InvalidSource("no tuples".into()));
    }
    let k = source.k();
    let mut used = vec![false; source.n_elements() + 1];
    for &e in source.tuples.iter().flatten() {
        used[e] = true;
    }
    let mut features = Vec::new();
    let mut blue_of = vec![0usize; source.n_elements() + 1];
    for element in (1..=source.n_elements()).filter(|&e| used[e]) {
        features.push(FeatureOrigin::TupleElement { element });
        blue_of[element] = features.len();
    }
    let n_blue = features.len();
    let mut exemplars = Vec::new();
    let mut origins = Vec::new();
    for (t, tuple) in source.tuples.iter().enumerate() {
        let mut reds = Vec::with_capacity(k - 1);
        for index in 1..k {
            features.push(FeatureOrigin::TupleRed { tuple: t + 1, index });
            reds.push(features.len());
        }
        for (dim, &e) in tuple.iter().enumerate() {
            let mut exemplar = vec![blue_of[e]];
            exemplar.extend(&reds);
            exemplars.push(exemplar);
            origins.push(ExemplarOrigin::TupleSlot {
                tuple: t + 1,
                dimension: dim + 1,
            });
        }
    }
    let instance = Instance::new(features.len(), 1..=n_blue, exemplars)?;
    let mut meta = ReductionMeta::new(ReductionKind::Kdm, features, origins);
    meta.params.source_objects = source.tuples.len();
    meta.params.source_items = n_blue;
    meta.record_shape(&instance);
    Ok((instance, meta))
}

/// Exemplar indices of each tuple, indexed by 0-based tuple id.
fn tuple_groups(meta: &ReductionMeta) -> Result<Vec<Vec<usize>>> {
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); meta.params.source_objects];
    for (&id, origin) in &meta.exemplars {
        match *origin {
            ExemplarOrigin::TupleSlot { tuple, .. } if (1..=groups.len()).contains(&tuple) => {
                groups[tuple - 1].push(id - 1)
            }
            other => {
                return Err(TapError::MetaMismatch(format!("exemplar {id} recorded as {other:?}")));
            }
        }
    }
    Ok(groups)
}

/// Turns any selection into whole, pairwise element-disjoint tuple groups
/// without lowering the margin.
///
/// Partially selected groups are completed (their reds are already paid for).
/// Then, while two selected groups share an element, the conflicting group
/// with the lowest tuple id is dropped: that frees its `k - 1` reds and loses
/// at most `k - 1` blue features.
pub fn canonicalize_kdm(meta: &ReductionMeta, instance: &Instance, solution: &Solution) -> Result<Solution> {
    meta.check(instance, &[ReductionKind::Kdm])?;
    let groups = tuple_groups(meta)?;
    let mut owner = vec![usize::MAX; instance.n_exemplars()];
    for (t, group) in groups.iter().enumerate() {
        for &j in group {
            owner[j] = t;
        }
    }
    let mut chosen = vec![false; groups.len()];
    for &j in &solution.selected {
        let &t = owner.get(j).ok_or(TapError::ExemplarOutOfRange {
            index: j,
            n_exemplars: instance.n_exemplars(),
        })?;
        chosen[t] = true;
    }
    let blue_of_group: Vec<Vec<usize>> = groups
        .iter()
        .map(|group| {
            group
                .iter()
                .flat_map(|&j| instance.exemplar(j).iter().copied())
                .filter(|&f| instance.is_blue(f))
                .collect()
        })
        .collect();

    let mut drops = 0;
    loop {
        let mut holders = vec![0usize; instance.n_features() + 1];
        for t in (0..groups.len()).filter(|&t| chosen[t]) {
            for &b in &blue_of_group[t] {
                holders[b] += 1;
            }
        }
        let conflicted = (0..groups.len())
            .find(|&t| chosen[t] && blue_of_group[t].iter().any(|&b| holders[b] > 1));
        match conflicted {
            Some(t) => {
                chosen[t] = false;
                drops += 1;
                if drops > groups.len() {
                    return Err(TapError::Internal("canonicalization did not terminate".into()));
                }
            }
            None => break,
        }
    }

    let selected = (0..groups.len())
        .filter(|&t| chosen[t])
        .flat_map(|t| groups[t].iter().copied())
        .collect();
    Solution::evaluate(instance, selected, false)
}

/// Canonicalizes `solution` and returns its 1-based tuple ids, ascending.
pub fn to_matching(meta: &ReductionMeta, instance: &Instance, solution: &Solution) -> Result<Vec<usize>> {
    let canonical = canonicalize_kdm(meta, instance, solution)?;
    let mut tuples: Vec<usize> = canonical
        .selected
        .iter()
        .map(|&j| match meta.exemplar(j) {
            Some(ExemplarOrigin::TupleSlot { tuple, .. }) => *tuple,
            _ => unreachable!("checked by tuple_groups"),
        })
        .collect();
    tuples.dedup();
    Ok(tuples)
}
