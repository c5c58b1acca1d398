//! Margin-preserving simplifications applied before solving.

use crate::error::{Result, TapError};
use crate::model::Instance;

/// Result of stripping pure exemplars from an instance.
///
/// For every selection `s` of residual exemplars,
/// `margin(original, lift(s)) == margin(residual, s) + margin_offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub residual: Instance,
    /// Original exemplars that are always selected.
    pub forced_in: Vec<usize>,
    /// Original exemplars that are never selected.
    pub forced_out: Vec<usize>,
    pub margin_offset: i64,
    /// `feature_map[i]` is the original id of residual feature `i + 1`.
    pub feature_map: Vec<usize>,
    /// `exemplar_map[j]` is the original index of residual exemplar `j`.
    pub exemplar_map: Vec<usize>,
}

impl ReducedInstance {
    /// Maps a residual selection to the original instance, adding `forced_in`.
    pub fn lift(&self, residual_selection: &[usize]) -> Vec<usize> {
        let mut selection: Vec<usize> = residual_selection
            .iter()
            .map(|&j| self.exemplar_map[j])
            .chain(self.forced_in.iter().copied())
            .collect();
        selection.sort_unstable();
        selection.dedup();
        selection
    }
}

/// Removes pure exemplars until none remain.
///
/// Zero-red exemplars are always selected and the blue features they cover are
/// deleted everywhere; zero-blue exemplars are never selected. Deleting blue
/// features can turn purple exemplars pure, so both rules repeat to a fixpoint.
/// Features left in no exemplar are dropped.
pub fn reduce_pure(instance: &Instance) -> ReducedInstance {
    let n = instance.n_features();
    let m = instance.n_exemplars();
    let mut covered = vec![false; n + 1];
    let mut alive = vec![true; m];
    let mut forced_in = Vec::new();
    let mut forced_out = Vec::new();
    let mut margin_offset = 0i64;

    loop {
        let mut changed = false;
        for (j, live) in alive.iter_mut().enumerate() {
            if !*live {
                continue;
            }
            let has_red = instance.exemplar(j).iter().any(|&f| !instance.is_blue(f));
            if !has_red {
                *live = false;
                forced_in.push(j);
                for &f in instance.exemplar(j) {
                    if !covered[f] {
                        covered[f] = true;
                        margin_offset += 1;
                    }
                }
                changed = true;
            }
        }
        for (j, live) in alive.iter_mut().enumerate() {
            if !*live {
                continue;
            }
            let has_live_blue = instance
                .exemplar(j)
                .iter()
                .any(|&f| instance.is_blue(f) && !covered[f]);
            if !has_live_blue {
                *live = false;
                forced_out.push(j);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut new_id = vec![0usize; n + 1];
    let mut feature_map = Vec::new();
    let mut occurs = vec![false; n + 1];
    for j in (0..m).filter(|&j| alive[j]) {
        for &f in instance.exemplar(j) {
            if !covered[f] {
                occurs[f] = true;
            }
        }
    }
    for f in (1..=n).filter(|&f| occurs[f]) {
        feature_map.push(f);
        new_id[f] = feature_map.len();
    }
    let exemplar_map: Vec<usize> = (0..m).filter(|&j| alive[j]).collect();
    let exemplars = exemplar_map
        .iter()
        .map(|&j| {
            instance
                .exemplar(j)
                .iter()
                .filter(|&&f| occurs[f])
                .map(|&f| new_id[f])
                .collect()
        })
        .collect();
    let blue = feature_map
        .iter()
        .enumerate()
        .filter(|&(_, &f)| instance.is_blue(f))
        .map(|(i, _)| i + 1);
    let residual = Instance::new(feature_map.len(), blue, exemplars)
        .expect("residual ids are remapped densely");

    forced_in.sort_unstable();
    forced_out.sort_unstable();
    ReducedInstance {
        residual,
        forced_in,
        forced_out,
        margin_offset,
        feature_map,
        exemplar_map,
    }
}

/// A sub-instance together with its translation back to the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub instance: Instance,
    /// `feature_map[i]` is the parent id of feature `i + 1`.
    pub feature_map: Vec<usize>,
    /// `exemplar_map[j]` is the parent index of exemplar `j`.
    pub exemplar_map: Vec<usize>,
}

impl Component {
    pub fn lift(&self, selection: &[usize]) -> Vec<usize> {
        selection.iter().map(|&j| self.exemplar_map[j]).collect()
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != node {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    fn union(&mut self, left: usize, right: usize) {
        let (mut left, mut right) = (self.find(left), self.find(right));
        if left == right {
            return;
        }
        if self.rank[left] < self.rank[right] {
            std::mem::swap(&mut left, &mut right);
        }
        self.parent[right] = left;
        if self.rank[left] == self.rank[right] {
            self.rank[left] = self.rank[left].saturating_add(1);
        }
    }
}

/// Splits an instance along the connected components of its co-occurrence
/// graph. Components are ordered by their lowest exemplar index.
pub fn split_components(instance: &Instance) -> Vec<Component> {
    let n = instance.n_features();
    let mut sets = DisjointSet::new(n + 1);
    for exemplar in instance.exemplars() {
        if let Some((&first, rest)) = exemplar.split_first() {
            for &f in rest {
                sets.union(first, f);
            }
        }
    }

    // root feature -> component slot
    let mut slot_of_root = vec![usize::MAX; n + 1];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (j, exemplar) in instance.exemplars().iter().enumerate() {
        match exemplar.first() {
            Some(&f) => {
                let root = sets.find(f);
                if slot_of_root[root] == usize::MAX {
                    slot_of_root[root] = groups.len();
                    groups.push(Vec::new());
                }
                groups[slot_of_root[root]].push(j);
            }
            None => groups.push(vec![j]),
        }
    }

    groups
        .into_iter()
        .map(|exemplar_map| {
            let mut features: Vec<usize> = exemplar_map
                .iter()
                .flat_map(|&j| instance.exemplar(j).iter().copied())
                .collect();
            features.sort_unstable();
            features.dedup();
            let mut new_id = vec![0usize; n + 1];
            for (i, &f) in features.iter().enumerate() {
                new_id[f] = i + 1;
            }
            let exemplars = exemplar_map
                .iter()
                .map(|&j| instance.exemplar(j).iter().map(|&f| new_id[f]).collect())
                .collect();
            let blue = features
                .iter()
                .enumerate()
                .filter(|&(_, &f)| instance.is_blue(f))
                .map(|(i, _)| i + 1);
            let sub = Instance::new(features.len(), blue, exemplars)
                .expect("component ids are remapped densely");
            Component {
                instance: sub,
                feature_map: features,
                exemplar_map,
            }
        })
        .collect()
}

/// An instance derived by merging or splitting exemplars; feature ids are
/// unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regrouped {
    pub instance: Instance,
    /// Parent exemplar indices each derived exemplar was built from.
    pub origins: Vec<Vec<usize>>,
}

impl Regrouped {
    pub fn lift(&self, selection: &[usize]) -> Vec<usize> {
        let mut lifted: Vec<usize> = selection
            .iter()
            .flat_map(|&j| self.origins[j].iter().copied())
            .collect();
        lifted.sort_unstable();
        lifted.dedup();
        lifted
    }
}

fn require_one_red(instance: &Instance, operation: &'static str) -> Result<()> {
    match (0..instance.n_exemplars()).find(|&j| instance.red_weight(j) != 1) {
        Some(j) => Err(TapError::precondition(
            operation,
            format!(
                "exemplar {} has {} red features, expected exactly one",
                j + 1,
                instance.red_weight(j)
            ),
        )),
        None => Ok(()),
    }
}

/// Merges all exemplars sharing a red feature into one exemplar, so every red
/// feature occurs exactly once. Merged exemplars appear in order of the first
/// exemplar holding their red feature.
pub fn collate(instance: &Instance) -> Result<Regrouped> {
    require_one_red(instance, "collate")?;
    let mut slot_of_red = vec![usize::MAX; instance.n_features() + 1];
    let mut origins: Vec<Vec<usize>> = Vec::new();
    for j in 0..instance.n_exemplars() {
        let red = instance.sole_red(j).expect("checked one-red");
        if slot_of_red[red] == usize::MAX {
            slot_of_red[red] = origins.len();
            origins.push(Vec::new());
        }
        origins[slot_of_red[red]].push(j);
    }
    let exemplars = origins
        .iter()
        .map(|group| {
            group
                .iter()
                .flat_map(|&j| instance.exemplar(j).iter().copied())
                .collect()
        })
        .collect();
    let merged = Instance::new(instance.n_features(), instance.blue(), exemplars)?;
    Ok(Regrouped {
        instance: merged,
        origins,
    })
}

/// Splits every exemplar `{r, b1..bk}` into `{r, b1}, .., {r, bk}`.
pub fn shatter(instance: &Instance) -> Result<Regrouped> {
    require_one_red(instance, "shatter")?;
    let mut exemplars = Vec::new();
    let mut origins = Vec::new();
    for j in 0..instance.n_exemplars() {
        let red = instance.sole_red(j).expect("checked one-red");
        if instance.blue_weight(j) == 0 {
            return Err(TapError::precondition(
                "shatter",
                format!("exemplar {} has no blue feature; reduce pure exemplars first", j + 1),
            ));
        }
        for &b in instance.exemplar(j).iter().filter(|&&f| f != red) {
            exemplars.push(vec![red, b]);
            origins.push(vec![j]);
        }
    }
    let split = Instance::new(instance.n_features(), instance.blue(), exemplars)?;
    Ok(Regrouped {
        instance: split,
        origins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::greedy_tightness;

    fn all_selections(m: usize) -> impl Iterator<Item = Vec<usize>> {
        (0u32..1 << m).map(move |mask| (0..m).filter(|&j| mask >> j & 1 == 1).collect())
    }

    #[test]
    fn pure_exemplars_are_forced() {
        // b1 = 1, b2 = 2, r1 = 3
        let inst = Instance::new(3, [1, 2], vec![vec![1, 2], vec![3]]).unwrap();
        let red = reduce_pure(&inst);
        assert_eq!(red.residual.n_exemplars(), 0);
        assert_eq!(red.residual.n_features(), 0);
        assert_eq!(red.forced_in, vec![0]);
        assert_eq!(red.forced_out, vec![1]);
        assert_eq!(red.margin_offset, 2);
    }

    #[test]
    fn all_purple_is_a_fixpoint() {
        let inst = Instance::new(4, [1, 2], vec![vec![1, 3], vec![2, 4], vec![1, 4]]).unwrap();
        let red = reduce_pure(&inst);
        assert_eq!(red.residual, inst);
        assert_eq!(red.margin_offset, 0);
        assert!(red.forced_in.is_empty() && red.forced_out.is_empty());
    }

    #[test]
    fn cascade_reaches_fixpoint() {
        // {b1}, {b1, r1}
        let inst = Instance::new(2, [1], vec![vec![1], vec![1, 2]]).unwrap();
        let red = reduce_pure(&inst);
        assert_eq!(red.residual.n_exemplars(), 0);
        assert_eq!(red.margin_offset, 1);
        assert_eq!(red.forced_in, vec![0]);
        assert_eq!(red.forced_out, vec![1]);
        let brute = all_selections(2)
            .map(|s| inst.margin(&s).unwrap())
            .max()
            .unwrap();
        assert_eq!(brute, 1);
    }

    #[test]
    fn lift_respects_offset() {
        // {b1}, {b2, r1}, {b1, r2}
        let inst = Instance::new(4, [1, 2], vec![vec![1], vec![2, 3], vec![1, 4]]).unwrap();
        let red = reduce_pure(&inst);
        assert_eq!(red.exemplar_map, vec![1]);
        assert_eq!(red.forced_out, vec![2]);
        for s in all_selections(red.residual.n_exemplars()) {
            assert_eq!(
                inst.margin(&red.lift(&s)).unwrap(),
                red.residual.margin(&s).unwrap() + red.margin_offset
            );
        }
    }

    #[test]
    fn components_of_disjoint_pairs() {
        let inst = Instance::new(4, [1, 2], vec![vec![1, 3], vec![2, 4]]).unwrap();
        let parts = split_components(&inst);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[1].exemplar_map, vec![1]);
        assert_eq!(parts[1].feature_map, vec![2, 4]);
        assert_eq!(parts[1].instance.exemplar(0), &[1, 2]);
        assert!(parts[1].instance.is_blue(1));
    }

    #[test]
    fn worked_example_is_connected() {
        assert_eq!(split_components(&greedy_tightness()).len(), 1);
        let single = Instance::new(2, [1], vec![vec![1, 2]]).unwrap();
        assert_eq!(split_components(&single).len(), 1);
    }

    #[test]
    fn collate_merges_by_red() {
        // r1 = 3
        let inst = Instance::new(3, [1, 2], vec![vec![3, 1], vec![3, 2]]).unwrap();
        let merged = collate(&inst).unwrap();
        assert_eq!(merged.instance.exemplars(), &[vec![1, 2, 3]]);
        assert_eq!(merged.origins, vec![vec![0, 1]]);
        let again = collate(&merged.instance).unwrap();
        assert_eq!(again.instance, merged.instance);
    }

    #[test]
    fn collate_degree_three_node_has_weight_four() {
        // node u = red 4 with incident edges b1, b2, b3; other endpoints reds 5, 6, 7
        let inst = Instance::new(
            7,
            [1, 2, 3],
            vec![vec![4, 1], vec![5, 1], vec![4, 2], vec![6, 2], vec![4, 3], vec![7, 3]],
        )
        .unwrap();
        let merged = collate(&inst).unwrap();
        assert_eq!(merged.instance.exemplar(0), &[1, 2, 3, 4]);
        assert_eq!(merged.instance.classify().max_weight, 4);
    }

    #[test]
    fn shatter_splits_into_pairs() {
        let inst = greedy_tightness();
        let split = shatter(&inst).unwrap();
        // A = {b1, b5, r1}
        assert_eq!(split.instance.exemplar(0), &[1, 7]);
        assert_eq!(split.instance.exemplar(1), &[5, 7]);
        assert_eq!(split.instance.n_exemplars(), 11);
        assert_eq!(split.instance.classify().max_weight, 2);

        let pairs = Instance::new(3, [1, 2], vec![vec![1, 3], vec![2, 3]]).unwrap();
        assert_eq!(shatter(&pairs).unwrap().instance, pairs);
    }

    #[test]
    fn transforms_reject_non_one_red() {
        let two_red = Instance::new(3, [1], vec![vec![1, 2, 3]]).unwrap();
        assert!(matches!(collate(&two_red), Err(TapError::Precondition { .. })));
        assert!(matches!(shatter(&two_red), Err(TapError::Precondition { .. })));
    }

    #[test]
    fn shatter_rejects_blue_free_exemplar() {
        let inst = Instance::new(2, [1], vec![vec![1, 2], vec![2]]).unwrap();
        assert!(matches!(shatter(&inst), Err(TapError::Precondition { .. })));
    }
}
