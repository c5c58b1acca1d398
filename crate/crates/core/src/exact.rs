//! Exact solvers for the tractable instance classes, the brute-force oracle,
//! and a dispatcher that combines them.
//!
//! All solvers are deterministic: when several selections reach the same
//! margin, the lexicographically smallest ascending index list wins wherever a
//! solver searches over candidates.

use crate::error::{Result, TapError};
use crate::greedy::{best_prefix, greedy_one_red, TieBreak};
use crate::model::{Instance, Solution};
use crate::preprocess::{reduce_pure, split_components};

pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 20;

// Masks are u64; larger enumerations would never finish anyway.
const BRUTE_FORCE_HARD_LIMIT: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverReport {
    pub solution: Solution,
    pub solver_name: &'static str,
    /// True only when the solver guarantees optimality on this instance.
    pub exact: bool,
    /// Evaluated candidates or graph size, for diagnostics.
    pub work: u64,
}

impl SolverReport {
    fn new(
        instance: &Instance,
        selected: Vec<usize>,
        solver_name: &'static str,
        exact: bool,
        work: u64,
    ) -> Result<Self> {
        Ok(SolverReport {
            solution: Solution::evaluate(instance, selected, exact)?,
            solver_name,
            exact,
            work,
        })
    }
}

/// Takes every exemplar without red features. Optimal when no exemplar mixes
/// colors.
pub fn solve_separable(instance: &Instance) -> Result<SolverReport> {
    if let Some(j) = (0..instance.n_exemplars())
        .find(|&j| instance.blue_weight(j) > 0 && instance.red_weight(j) > 0)
    {
        return Err(TapError::precondition(
            "separable",
            format!("exemplar {} holds both blue and red features", j + 1),
        ));
    }
    let selected = (0..instance.n_exemplars())
        .filter(|&j| instance.red_weight(j) == 0)
        .collect();
    SolverReport::new(instance, selected, "separable", true, instance.n_exemplars() as u64)
}

/// Takes every exemplar with more blue than red. Optimal when no feature is
/// shared between exemplars, since disjoint margins add up.
pub fn solve_one_occurrence(instance: &Instance) -> Result<SolverReport> {
    let occurrences = instance.occurrences();
    if let Some(f) = (1..=instance.n_features()).find(|&f| occurrences[f] > 1) {
        return Err(TapError::precondition(
            "one-occurrence",
            format!("feature {f} occurs in {} exemplars", occurrences[f]),
        ));
    }
    let selected = (0..instance.n_exemplars())
        .filter(|&j| instance.blue_weight(j) > instance.red_weight(j))
        .collect();
    SolverReport::new(instance, selected, "one-occurrence", true, instance.n_exemplars() as u64)
}

/// Checks that every exemplar is a `{blue, red}` pair and no feature occurs
/// more than twice.
fn check_two_two(instance: &Instance) -> Result<()> {
    for j in 0..instance.n_exemplars() {
        if instance.exemplar(j).len() != 2 || instance.blue_weight(j) != 1 {
            return Err(TapError::precondition(
                "two-two",
                format!(
                    "after removing pure exemplars, exemplar {} is not one blue plus one red feature",
                    j + 1
                ),
            ));
        }
    }
    let occurrences = instance.occurrences();
    if let Some(f) = (1..=instance.n_features()).find(|&f| occurrences[f] > 2) {
        return Err(TapError::precondition(
            "two-two",
            format!("feature {f} occurs in {} exemplars", occurrences[f]),
        ));
    }
    Ok(())
}

/// Solves 2-occurrence, 2-weight instances through minimum vertex cover on
/// paths and cycles.
///
/// After pure exemplars are removed, red features are nodes and blue features
/// are edges between the reds they appear with. A blue feature seen once, or
/// twice with the same red, forces that red. What remains has maximum degree
/// two, and every other node along each path or cycle forms a minimum cover.
pub fn solve_two_two(instance: &Instance) -> Result<SolverReport> {
    let reduced = reduce_pure(instance);
    let residual = &reduced.residual;
    check_two_two(residual)?;

    let n = residual.n_features();
    let incidence = residual.incidence();
    let red_of = |j: usize| residual.sole_red(j).expect("checked pair shape");

    let mut in_cover = vec![false; n + 1];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for b in residual.blue() {
        match incidence[b].as_slice() {
            [j] => in_cover[red_of(*j)] = true,
            [j, k] => {
                let (u, v) = (red_of(*j), red_of(*k));
                if u == v {
                    in_cover[u] = true;
                } else {
                    edges.push((u, v));
                }
            }
            _ => unreachable!("occurrence checked to be one or two"),
        }
    }

    // Edges touching a forced node are already covered.
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n + 1];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if !in_cover[u] && !in_cover[v] {
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
    }

    let mut visited = vec![false; n + 1];
    let mut used_edge = vec![false; edges.len()];
    let walk = |start: usize, visited: &mut Vec<bool>, used_edge: &mut Vec<bool>| {
        let mut order = vec![start];
        visited[start] = true;
        let mut current = start;
        while let Some(&(next, e)) = adjacency[current].iter().find(|&&(_, e)| !used_edge[e]) {
            used_edge[e] = true;
            if visited[next] {
                break;
            }
            visited[next] = true;
            order.push(next);
            current = next;
        }
        order
    };

    // Paths first, each walked from its lowest-id endpoint.
    for node in 1..=n {
        if !visited[node] && adjacency[node].len() == 1 {
            let path = walk(node, &mut visited, &mut used_edge);
            for &v in path.iter().skip(1).step_by(2) {
                in_cover[v] = true;
            }
        }
    }
    // Whatever is left with edges lies on a cycle; walk from its lowest id.
    for node in 1..=n {
        if !visited[node] && !adjacency[node].is_empty() {
            let cycle = walk(node, &mut visited, &mut used_edge);
            for &v in cycle.iter().step_by(2) {
                in_cover[v] = true;
            }
        }
    }

    let selection: Vec<usize> = (0..residual.n_exemplars())
        .filter(|&j| in_cover[red_of(j)])
        .collect();
    let work = (n + edges.len()) as u64;
    SolverReport::new(instance, reduced.lift(&selection), "two-two", true, work)
}

/// True when `a` precedes `b` as ascending index lists.
fn lex_less(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let d = (a ^ b).trailing_zeros();
    let rest = |x: u64| x.checked_shr(d + 1).unwrap_or(0);
    if a >> d & 1 == 1 {
        rest(b) != 0
    } else {
        rest(a) == 0
    }
}

fn mask_to_indices(mask: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|&j| mask >> j & 1 == 1).collect()
}

/// Evaluates all `2^m` selections in Gray-code order, keeping per-feature
/// cover counts so each step costs one exemplar's weight.
pub fn solve_brute_force(instance: &Instance, max_exemplars: usize) -> Result<SolverReport> {
    let m = instance.n_exemplars();
    let limit = max_exemplars.min(BRUTE_FORCE_HARD_LIMIT);
    if m > limit {
        return Err(TapError::TooLarge {
            n_exemplars: m,
            limit,
        });
    }
    let sign: Vec<i64> = (0..=instance.n_features())
        .map(|f| match f {
            0 => 0,
            f if instance.is_blue(f) => 1,
            _ => -1,
        })
        .collect();
    let mut count = vec![0u32; instance.n_features() + 1];
    let mut mask = 0u64;
    let mut margin = 0i64;
    let (mut best_mask, mut best_margin) = (0u64, 0i64);

    let total: u64 = 1 << m;
    for step in 1..total {
        let j = step.trailing_zeros() as usize;
        mask ^= 1 << j;
        if mask >> j & 1 == 1 {
            for &f in instance.exemplar(j) {
                count[f] += 1;
                if count[f] == 1 {
                    margin += sign[f];
                }
            }
        } else {
            for &f in instance.exemplar(j) {
                count[f] -= 1;
                if count[f] == 0 {
                    margin -= sign[f];
                }
            }
        }
        if margin > best_margin || (margin == best_margin && lex_less(mask, best_mask)) {
            best_margin = margin;
            best_mask = mask;
        }
    }
    SolverReport::new(instance, mask_to_indices(best_mask, m), "brute", true, total)
}

/// Enumerates red-feature subsets by increasing size up to `budget`, selecting
/// every exemplar whose red feature is chosen. Exact when the budget reaches
/// the number of red features (`None` means unbounded).
pub fn solve_one_red_enumeration(instance: &Instance, budget: Option<usize>) -> Result<SolverReport> {
    if let Some(j) = (0..instance.n_exemplars()).find(|&j| instance.red_weight(j) != 1) {
        return Err(TapError::precondition(
            "one-red-enum",
            format!("exemplar {} does not hold exactly one red feature", j + 1),
        ));
    }
    let reds: Vec<usize> = instance.red().collect();
    let n = instance.n_features();
    let mut position = vec![usize::MAX; n + 1];
    for (i, &r) in reds.iter().enumerate() {
        position[r] = i;
    }
    let words = n / 64 + 1;
    let mut blue_of_red = vec![vec![0u64; words]; reds.len()];
    let mut exemplars_of_red = vec![Vec::new(); reds.len()];
    for j in 0..instance.n_exemplars() {
        let slot = position[instance.sole_red(j).expect("checked one-red")];
        exemplars_of_red[slot].push(j);
        for &f in instance.exemplar(j) {
            if instance.is_blue(f) {
                blue_of_red[slot][f / 64] |= 1 << (f % 64);
            }
        }
    }

    let max_size = budget.map_or(reds.len(), |b| b.min(reds.len()));
    let mut best: (i64, Vec<usize>) = (0, Vec::new());
    let mut work = 0u64;
    let mut union = vec![0u64; words];
    for size in 0..=max_size {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            work += 1;
            union.iter_mut().for_each(|w| *w = 0);
            for &i in &combo {
                for (u, w) in union.iter_mut().zip(&blue_of_red[i]) {
                    *u |= w;
                }
            }
            let covered: u32 = union.iter().map(|w| w.count_ones()).sum();
            let margin = covered as i64 - size as i64;
            if margin > best.0 {
                best = (margin, combo.clone());
            }
            if !next_combination(&mut combo, reds.len()) {
                break;
            }
        }
    }
    let exact = max_size == reds.len();
    let selected = best
        .1
        .iter()
        .flat_map(|&i| exemplars_of_red[i].iter().copied())
        .collect();
    SolverReport::new(instance, selected, "one-red-enum", exact, work)
}

/// Advances `combo` to the next size-`k` subset of `0..n` in lexicographic
/// order; returns false after the last one.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
        return false;
    };
    combo[i] += 1;
    for t in i + 1..k {
        combo[t] = combo[t - 1] + 1;
    }
    true
}

/// Removes pure exemplars, splits the rest into independent components and
/// solves each with the first applicable of: separable, one-occurrence,
/// two-two, brute force (up to `fallback_limit` exemplars), greedy best prefix
/// (one-red components only).
pub fn solve_auto(instance: &Instance, fallback_limit: usize) -> Result<SolverReport> {
    let reduced = reduce_pure(instance);
    let mut residual_selection = Vec::new();
    let mut exact = true;
    let mut work = 0u64;
    for component in split_components(&reduced.residual) {
        let report = solve_component(&component.instance, fallback_limit)?;
        exact &= report.exact;
        work += report.work;
        residual_selection.extend(component.lift(&report.solution.selected));
    }
    SolverReport::new(instance, reduced.lift(&residual_selection), "auto", exact, work)
}

fn solve_component(instance: &Instance, fallback_limit: usize) -> Result<SolverReport> {
    let stats = instance.classify();
    if stats.is_separable {
        return solve_separable(instance);
    }
    if stats.max_occurrence <= 1 {
        return solve_one_occurrence(instance);
    }
    if check_two_two(instance).is_ok() {
        return solve_two_two(instance);
    }
    if instance.n_exemplars() <= fallback_limit.min(BRUTE_FORCE_HARD_LIMIT) {
        return solve_brute_force(instance, fallback_limit);
    }
    if stats.is_one_red {
        let (_, trace) = greedy_one_red(instance, TieBreak::Lowest)?;
        let solution = best_prefix(instance, &trace)?;
        return Ok(SolverReport {
            solution,
            solver_name: "greedy",
            exact: false,
            work: trace.picked_red.len() as u64,
        });
    }
    Err(TapError::NoApplicableSolver {
        n_exemplars: instance.n_exemplars(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{greedy_tightness, A, B, C, D};

    fn pair_instance(n_blue: usize, n_red: usize, pairs: &[(usize, usize)]) -> Instance {
        // blue ids 1..=n_blue, red ids follow
        let exemplars = pairs.iter().map(|&(b, r)| vec![b, n_blue + r]).collect();
        Instance::new(n_blue + n_red, 1..=n_blue, exemplars).unwrap()
    }

    #[test]
    fn lex_order_on_masks() {
        let to_mask = |s: &[usize]| s.iter().fold(0u64, |m, &j| m | 1 << j);
        let ordered: [&[usize]; 6] = [&[], &[0], &[0, 1], &[0, 1, 2], &[0, 2], &[1]];
        for (i, a) in ordered.iter().enumerate() {
            for (k, b) in ordered.iter().enumerate() {
                assert_eq!(lex_less(to_mask(a), to_mask(b)), i < k, "{a:?} vs {b:?}");
            }
        }
        assert!(lex_less(1 << 62, 1 << 63));
    }

    #[test]
    fn separable_takes_blue_only() {
        let inst = Instance::new(3, [1, 2], vec![vec![1], vec![2], vec![3]]).unwrap();
        let report = solve_separable(&inst).unwrap();
        assert_eq!(report.solution.selected, vec![0, 1]);
        assert_eq!(report.solution.margin, 2);
        assert!(report.exact);

        let reds_only = Instance::new(2, [], vec![vec![1], vec![2]]).unwrap();
        assert_eq!(solve_separable(&reds_only).unwrap().solution, Solution {
            selected: vec![],
            margin: 0,
            optimal: true
        });
        assert!(solve_separable(&greedy_tightness()).is_err());
    }

    #[test]
    fn one_occurrence_takes_positive_exemplars() {
        // {b1,b2,r1}, {b3,r2,r3}
        let inst = Instance::new(6, [1, 2, 3], vec![vec![1, 2, 4], vec![3, 5, 6]]).unwrap();
        let report = solve_one_occurrence(&inst).unwrap();
        assert_eq!(report.solution.selected, vec![0]);
        assert_eq!(report.solution.margin, 1);

        let ties = pair_instance(2, 2, &[(1, 1), (2, 2)]);
        assert_eq!(solve_one_occurrence(&ties).unwrap().solution.margin, 0);
        assert!(solve_one_occurrence(&greedy_tightness()).is_err());
    }

    #[test]
    fn two_two_on_three_edge_path() {
        let inst = pair_instance(3, 4, &[(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 4)]);
        let report = solve_two_two(&inst).unwrap();
        assert_eq!(report.solution.margin, 1);
        assert_eq!(solve_brute_force(&inst, 20).unwrap().solution.margin, 1);
        // sweep from r1 covers {r2, r4}
        assert_eq!(report.solution.selected, vec![1, 2, 5]);
    }

    #[test]
    fn two_two_on_four_cycle() {
        let inst = pair_instance(
            4,
            4,
            &[(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 4), (4, 4), (4, 1)],
        );
        assert_eq!(solve_two_two(&inst).unwrap().solution.margin, 2);
        assert_eq!(solve_brute_force(&inst, 20).unwrap().solution.margin, 2);
    }

    #[test]
    fn two_two_self_loop_and_pendant() {
        let self_loop = pair_instance(1, 1, &[(1, 1), (1, 1)]);
        let report = solve_two_two(&self_loop).unwrap();
        assert_eq!(report.solution.margin, 0);
        assert_eq!(report.solution.selected, vec![0, 1]);

        // b1 only with r1; b2 between r1 and r2
        let pendant = pair_instance(2, 2, &[(1, 1), (2, 1), (2, 2)]);
        assert_eq!(solve_two_two(&pendant).unwrap().solution.margin, 1);
    }

    #[test]
    fn two_two_parallel_edges() {
        // b1 and b2 both join r1 and r2: a 2-cycle
        let inst = pair_instance(2, 2, &[(1, 1), (1, 2), (2, 1), (2, 2)]);
        assert_eq!(solve_two_two(&inst).unwrap().solution.margin, 1);
    }

    #[test]
    fn two_two_rejects_heavy_exemplars() {
        assert!(matches!(
            solve_two_two(&greedy_tightness()),
            Err(TapError::Precondition { .. })
        ));
    }

    #[test]
    fn brute_force_on_worked_example() {
        let report = solve_brute_force(&greedy_tightness(), 20).unwrap();
        assert_eq!(report.solution.margin, 2);
        // {A, B} ties with {A, B, C, D} and precedes it
        assert_eq!(report.solution.selected, vec![A, B]);
        assert_eq!(greedy_tightness().margin(&[A, B, C, D]).unwrap(), 2);
        assert_eq!(report.work, 64);
    }

    #[test]
    fn brute_force_prefers_empty_on_ties() {
        let inst = Instance::new(2, [1], vec![vec![1, 2]]).unwrap();
        assert_eq!(solve_brute_force(&inst, 20).unwrap().solution.selected, Vec::<usize>::new());

        let losing = Instance::new(6, [1, 4], vec![vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let report = solve_brute_force(&losing, 20).unwrap();
        assert_eq!(report.solution.margin, 0);
        assert!(report.solution.selected.is_empty());
    }

    #[test]
    fn brute_force_size_limit() {
        assert_eq!(
            solve_brute_force(&greedy_tightness(), 5),
            Err(TapError::TooLarge { n_exemplars: 6, limit: 5 })
        );
    }

    #[test]
    fn one_red_enumeration_budgets() {
        let inst = greedy_tightness();
        let full = solve_one_red_enumeration(&inst, None).unwrap();
        assert_eq!(full.solution.margin, 2);
        assert!(full.exact);

        let none = solve_one_red_enumeration(&inst, Some(0)).unwrap();
        assert_eq!(none.solution.margin, 0);
        assert!(none.solution.selected.is_empty());
        assert!(!none.exact);

        // r1 = 4 co-occurs with all blue
        let hub = Instance::new(5, [1, 2, 3], vec![vec![1, 4], vec![2, 3, 4], vec![3, 5]]).unwrap();
        let one = solve_one_red_enumeration(&hub, Some(1)).unwrap();
        assert_eq!(one.solution.margin, 2);
        assert_eq!(one.solution.selected, vec![0, 1]);

        let two_red = Instance::new(3, [1], vec![vec![1, 2, 3]]).unwrap();
        assert!(solve_one_red_enumeration(&two_red, None).is_err());
    }

    #[test]
    fn combinations_in_order() {
        let mut combo = vec![0, 1];
        let mut seen = vec![combo.clone()];
        while next_combination(&mut combo, 4) {
            seen.push(combo.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen.last().unwrap(), &vec![2, 3]);
        let mut empty: Vec<usize> = vec![];
        assert!(!next_combination(&mut empty, 3));
    }

    #[test]
    fn auto_on_worked_example() {
        let report = solve_auto(&greedy_tightness(), 6).unwrap();
        assert_eq!(report.solution.margin, 2);
        assert!(report.exact);
    }

    #[test]
    fn auto_separable_without_search() {
        let inst = Instance::new(4, [1, 2], vec![vec![1], vec![2], vec![3], vec![4], vec![1, 2]]).unwrap();
        let report = solve_auto(&inst, 0).unwrap();
        assert_eq!(report.solution.margin, 2);
        assert!(report.exact);
        assert_eq!(report.work, 0);
    }

    #[test]
    fn auto_falls_back_to_greedy_on_large_one_red() {
        let report = solve_auto(&greedy_tightness(), 2).unwrap();
        assert!(!report.exact);
        assert!(report.solution.margin >= 1);
        assert!(report.solution.is_consistent(&greedy_tightness()));
    }

    #[test]
    fn auto_reports_no_solver() {
        // two reds in every exemplar, sharing features, over the limit
        let inst = Instance::new(
            5,
            [1, 2],
            vec![vec![1, 3, 4], vec![1, 2, 4, 5], vec![2, 3, 5]],
        )
        .unwrap();
        assert_eq!(
            solve_auto(&inst, 2),
            Err(TapError::NoApplicableSolver { n_exemplars: 3 })
        );
    }
}
