//! Greedy covering for one-red instances.
//!
//! With exactly one red feature per exemplar, paying for a red feature unlocks
//! every blue feature that shares an exemplar with it. Greedy repeatedly picks
//! the red feature unlocking the most uncovered blue features until all blue
//! features are covered; its margin is at least half the optimum.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TapError};
use crate::model::{Instance, Solution};

/// How greedy chooses among red features with equal gain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    Lowest,
    Highest,
    /// Uniform among the tied candidates, from a seeded stream.
    Random(u64),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyTrace {
    pub picked_red: Vec<usize>,
    /// Blue features newly covered by each pick; non-increasing.
    pub newly_covered: Vec<usize>,
    /// Margin of the selection after each pick.
    pub prefix_margins: Vec<i64>,
}

impl GreedyTrace {
    pub fn len(&self) -> usize {
        self.picked_red.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picked_red.is_empty()
    }
}

/// Blue features unlocked by each red feature, indexed by red id.
fn blue_by_red(instance: &Instance, operation: &'static str) -> Result<Vec<Vec<usize>>> {
    let mut unlocks = vec![Vec::new(); instance.n_features() + 1];
    for j in 0..instance.n_exemplars() {
        let red = instance.sole_red(j).ok_or_else(|| {
            TapError::precondition(
                operation,
                format!("exemplar {} does not hold exactly one red feature", j + 1),
            )
        })?;
        unlocks[red].extend(instance.exemplar(j).iter().filter(|&&f| f != red));
    }
    for list in &mut unlocks {
        list.sort_unstable();
        list.dedup();
    }
    Ok(unlocks)
}

fn exemplars_of_reds(instance: &Instance, reds: &[usize]) -> Vec<usize> {
    let mut picked = vec![false; instance.n_features() + 1];
    for &r in reds {
        picked[r] = true;
    }
    (0..instance.n_exemplars())
        .filter(|&j| instance.sole_red(j).is_some_and(|r| picked[r]))
        .collect()
}

/// Runs greedy to full blue coverage and returns the selection of every
/// exemplar whose red feature was picked, together with the iteration trace.
pub fn greedy_one_red(instance: &Instance, tie_break: TieBreak) -> Result<(Solution, GreedyTrace)> {
    let unlocks = blue_by_red(instance, "greedy")?;
    let n = instance.n_features();
    let mut reachable = vec![false; n + 1];
    for list in &unlocks {
        for &b in list {
            reachable[b] = true;
        }
    }
    if let Some(b) = instance.blue().find(|&b| !reachable[b]) {
        return Err(TapError::precondition(
            "greedy",
            format!("blue feature {b} appears in no exemplar"),
        ));
    }

    let mut rng = match tie_break {
        TieBreak::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut covered = vec![false; n + 1];
    let mut picked = vec![false; n + 1];
    let mut remaining = instance.n_blue();
    let mut trace = GreedyTrace::default();
    let mut total_covered = 0usize;

    while remaining > 0 {
        let mut best_gain = 0usize;
        let mut tied: Vec<usize> = Vec::new();
        for r in instance.red().filter(|&r| !picked[r]) {
            let gain = unlocks[r].iter().filter(|&&b| !covered[b]).count();
            if gain > best_gain {
                best_gain = gain;
                tied.clear();
            }
            if gain == best_gain && gain > 0 {
                tied.push(r);
            }
        }
        let choice = match (tie_break, rng.as_mut()) {
            (TieBreak::Highest, _) => tied.last().copied(),
            (TieBreak::Random(_), Some(rng)) => tied.choose(rng).copied(),
            _ => tied.first().copied(),
        }
        .ok_or_else(|| TapError::Internal("greedy found no red feature with positive gain".into()))?;

        picked[choice] = true;
        for &b in &unlocks[choice] {
            covered[b] = true;
        }
        remaining -= best_gain;
        total_covered += best_gain;
        trace.picked_red.push(choice);
        trace.newly_covered.push(best_gain);
        trace
            .prefix_margins
            .push(total_covered as i64 - trace.picked_red.len() as i64);
    }

    let solution = Solution::evaluate(instance, exemplars_of_reds(instance, &trace.picked_red), false)?;
    Ok((solution, trace))
}

/// Replays `trace` on `instance` and returns the prefix of picks with the
/// largest margin, preferring the shortest such prefix.
pub fn best_prefix(instance: &Instance, trace: &GreedyTrace) -> Result<Solution> {
    if trace.newly_covered.len() != trace.len() || trace.prefix_margins.len() != trace.len() {
        return Err(TapError::TraceMismatch("trace columns differ in length".into()));
    }
    let unlocks = blue_by_red(instance, "best prefix")?;
    let mut covered = vec![false; instance.n_features() + 1];
    let mut total = 0usize;
    let mut best: Option<(i64, usize)> = None;
    for (i, &red) in trace.picked_red.iter().enumerate() {
        if red == 0 || red > instance.n_features() || instance.is_blue(red) {
            return Err(TapError::TraceMismatch(format!("pick {} is not a red feature", i + 1)));
        }
        let mut gain = 0;
        for &b in &unlocks[red] {
            if !covered[b] {
                covered[b] = true;
                gain += 1;
            }
        }
        total += gain;
        let margin = total as i64 - (i as i64 + 1);
        if gain != trace.newly_covered[i] || margin != trace.prefix_margins[i] {
            return Err(TapError::TraceMismatch(format!(
                "iteration {} does not replay on this instance",
                i + 1
            )));
        }
        if best.is_none_or(|(m, _)| margin > m) {
            best = Some((margin, i + 1));
        }
    }
    let length = best.map_or(0, |(_, len)| len);
    Solution::evaluate(instance, exemplars_of_reds(instance, &trace.picked_red[..length]), false)
}

/// Extends a selection until it covers every blue feature, adding for each
/// uncovered blue feature (ascending) the lowest-index exemplar holding it.
/// On one-red instances each addition gains at least one blue feature and
/// costs at most one red, so the margin never drops.
pub fn augment_full_blue(instance: &Instance, solution: &Solution) -> Result<Solution> {
    if let Some(j) = (0..instance.n_exemplars()).find(|&j| instance.red_weight(j) != 1) {
        return Err(TapError::precondition(
            "augment",
            format!("exemplar {} does not hold exactly one red feature", j + 1),
        ));
    }
    let incidence = instance.incidence();
    let mut selected = solution.selected.clone();
    let mut covered = vec![false; instance.n_features() + 1];
    for &j in &selected {
        let exemplar = instance.exemplars().get(j).ok_or(TapError::ExemplarOutOfRange {
            index: j,
            n_exemplars: instance.n_exemplars(),
        })?;
        for &f in exemplar {
            covered[f] = true;
        }
    }
    for b in instance.blue() {
        if covered[b] {
            continue;
        }
        let &j = incidence[b].first().ok_or_else(|| {
            TapError::precondition("augment", format!("blue feature {b} appears in no exemplar"))
        })?;
        selected.push(j);
        for &f in instance.exemplar(j) {
            covered[f] = true;
        }
    }
    Solution::evaluate(instance, selected, false)
}

/// Checks the Parekh–Slavík lower bound on every greedy iteration:
/// `m_i >= ceil((n_blue - sum_{j<i} m_j) / opt_sc)`.
pub fn check_parekh_slavik(trace: &GreedyTrace, n_blue: usize, opt_sc: usize) -> bool {
    if opt_sc == 0 {
        return n_blue == 0 && trace.is_empty();
    }
    let mut remaining = n_blue;
    for &m in &trace.newly_covered {
        if m * opt_sc < remaining {
            return false;
        }
        remaining = remaining.saturating_sub(m);
    }
    true
}

/// Checks that the first `K = ceil((n_blue - opt_sc) / 2)` picks cover at
/// least `2K` blue features. A run that finishes in fewer than `K` picks has
/// covered everything, which already counts as the `K` prefix.
pub fn check_first_k_coverage(trace: &GreedyTrace, n_blue: usize, opt_sc: usize) -> bool {
    let k = n_blue.saturating_sub(opt_sc).div_ceil(2);
    let head = &trace.newly_covered[..k.min(trace.len())];
    head.iter().sum::<usize>() >= 2 * k
}
