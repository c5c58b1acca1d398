//! Naive oracles that share no code with the solvers they check.
#![allow(dead_code)]

use std::collections::BTreeSet;

use tap_core::model::Instance;
use tap_core::reductions::{random_instance, RandomParams};

/// Margin computed from scratch with ordered sets.
pub fn naive_margin(instance: &Instance, selected: &[usize]) -> i64 {
    let union: BTreeSet<usize> = selected
        .iter()
        .flat_map(|&j| instance.exemplar(j).iter().copied())
        .collect();
    union
        .iter()
        .map(|&f| if instance.is_blue(f) { 1 } else { -1 })
        .sum()
}

pub fn subsets(m: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << m).map(move |mask| (0..m).filter(|&j| mask >> j & 1 == 1).collect())
}

/// Optimal margin by walking the include/exclude tree over plain bitsets.
pub fn brute_optimum(instance: &Instance) -> i64 {
    let words = instance.n_features() / 64 + 1;
    let to_bits = |ids: &mut dyn Iterator<Item = usize>| {
        let mut bits = vec![0u64; words];
        for f in ids {
            bits[f / 64] |= 1 << (f % 64);
        }
        bits
    };
    let masks: Vec<Vec<u64>> = instance
        .exemplars()
        .iter()
        .map(|e| to_bits(&mut e.iter().copied()))
        .collect();
    let blue = to_bits(&mut instance.blue());
    assert!(masks.len() <= 26, "exhaustive oracle limited to 26 exemplars");

    fn walk(j: usize, union: &[u64], masks: &[Vec<u64>], blue: &[u64]) -> i64 {
        if j == masks.len() {
            return union
                .iter()
                .zip(blue)
                .map(|(u, b)| (u & b).count_ones() as i64 - (u & !b).count_ones() as i64)
                .sum();
        }
        let with: Vec<u64> = union.iter().zip(&masks[j]).map(|(u, m)| u | m).collect();
        walk(j + 1, union, masks, blue).max(walk(j + 1, &with, masks, blue))
    }
    walk(0, &vec![0u64; words], &masks, &blue)
}

/// Fewest red features whose exemplars jointly hold every blue feature, on a
/// one-red instance.
pub fn min_red_cover(instance: &Instance) -> usize {
    let reds: Vec<usize> = instance.red().collect();
    let blue: BTreeSet<usize> = instance.blue().collect();
    (0u64..1 << reds.len())
        .filter_map(|mask| {
            let chosen: BTreeSet<usize> = (0..reds.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| reds[i])
                .collect();
            let covered: BTreeSet<usize> = instance
                .exemplars()
                .iter()
                .filter(|e| e.iter().any(|f| chosen.contains(f)))
                .flatten()
                .copied()
                .filter(|f| blue.contains(f))
                .collect();
            (covered == blue).then_some(chosen.len())
        })
        .min()
        .expect("all reds cover all blue on a valid one-red instance")
}

pub fn min_set_cover(universe: usize, sets: &[Vec<usize>]) -> usize {
    (0u64..1 << sets.len())
        .filter(|&mask| {
            let mut hit = vec![false; universe + 1];
            for (i, s) in sets.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for &e in s {
                        hit[e] = true;
                    }
                }
            }
            hit[1..].iter().all(|&h| h)
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .expect("the full family covers")
}

pub fn max_sat(n_vars: usize, clauses: &[Vec<i64>]) -> usize {
    (0u64..1 << n_vars)
        .map(|mask| {
            clauses
                .iter()
                .filter(|c| {
                    c.iter().any(|&lit| {
                        let value = mask >> (lit.unsigned_abs() - 1) & 1 == 1;
                        value == (lit > 0)
                    })
                })
                .count()
        })
        .max()
        .unwrap_or(0)
}

pub fn max_matching(tuples: &[Vec<usize>]) -> usize {
    (0u64..1 << tuples.len())
        .filter(|&mask| {
            let mut used = BTreeSet::new();
            (0..tuples.len())
                .filter(|&t| mask >> t & 1 == 1)
                .all(|t| tuples[t].iter().all(|&e| used.insert(e)))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// A feasible random instance with at most 12 features and 12 exemplars.
pub fn small_instance(seed: u64, one_red: bool) -> Instance {
    let n = 4 + (seed % 9) as usize;
    let n_blue = (n as f64 * 0.5).round() as usize;
    let low = if one_red { n - n_blue } else { 2 };
    let m = low + (seed / 9) as usize % (13 - low);
    let w = 2 + (seed / 117 % 3) as usize;
    let k = 2 + (seed / 351 % 2) as usize;
    let params = RandomParams {
        seed,
        n_features: n,
        n_exemplars: m,
        blue_fraction: 0.5,
        max_weight: w.max(n.div_ceil(m)).max(1 + n_blue.div_ceil(m)),
        max_occurrence: k.max(m.div_ceil(n - n_blue)),
        one_red,
    };
    random_instance(&params).expect("parameters are feasible by construction")
}
