mod common;

use common::{brute_optimum, max_matching, max_sat, min_set_cover};
use proptest::prelude::*;
use tap_core::exact::{solve_brute_force, solve_two_two};
use tap_core::fixtures::three_dm_example;
use tap_core::reductions::{
    canonicalize_kdm, from_cnf, from_graph, from_kdm, from_set_cover, to_assignment, to_matching,
    to_set_cover_solution, CnfSource, KdmSource, ReductionKind, SetCoverSource,
};
use tap_core::Solution;

fn set_system() -> impl Strategy<Value = SetCoverSource> {
    (1usize..=8).prop_flat_map(|u| {
        proptest::collection::vec(proptest::sample::subsequence((1..=u).collect::<Vec<_>>(), 1..=u), 1..=5)
            .prop_map(move |mut sets| {
                // Make sure every element is somewhere.
                for e in 1..=u {
                    if !sets.iter().any(|s| s.contains(&e)) {
                        let i = e % sets.len();
                        sets[i].push(e);
                    }
                }
                SetCoverSource::new(u, sets).unwrap()
            })
            // Each membership is an exemplar; keep exhaustive search cheap.
            .prop_filter("too many memberships", |s| s.sets.iter().map(Vec::len).sum::<usize>() <= 18)
    })
}

fn two_cnf() -> impl Strategy<Value = CnfSource> {
    (1usize..=5).prop_flat_map(|n| {
        let literal = (1..=n as i64, any::<bool>()).prop_map(|(v, pos)| if pos { v } else { -v });
        proptest::collection::vec(proptest::collection::vec(literal, 1..=2), 1..=6)
            .prop_map(move |clauses| CnfSource::new(n, clauses).unwrap())
    })
}

fn three_dm() -> impl Strategy<Value = KdmSource> {
    (1usize..=3, 1usize..=3, 1usize..=3).prop_flat_map(|(a, b, c)| {
        let tuple = (1..=a, a + 1..=a + b, a + b + 1..=a + b + c).prop_map(|(x, y, z)| vec![x, y, z]);
        proptest::collection::vec(tuple, 1..=5).prop_map(move |tuples| KdmSource::new(vec![a, b, c], tuples).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn set_cover_correspondence(source in set_system()) {
        let (inst, meta) = from_set_cover(&source).unwrap();
        meta.check(&inst, &[ReductionKind::SetCover]).unwrap();
        let min_cover = min_set_cover(source.universe_size, &source.sets);
        let opt = brute_optimum(&inst);
        prop_assert_eq!(opt, (source.universe_size - min_cover) as i64);
        let best = solve_brute_force(&inst, 20).unwrap().solution;
        let cover = to_set_cover_solution(&meta, &inst, &best).unwrap();
        prop_assert_eq!(cover.len(), min_cover);
        let from_empty = to_set_cover_solution(&meta, &inst, &Solution::empty()).unwrap();
        let mut hit = vec![false; source.universe_size + 1];
        for s in from_empty {
            for &e in &source.sets[s - 1] {
                hit[e] = true;
            }
        }
        prop_assert!(hit[1..].iter().all(|&h| h));
    }

    #[test]
    fn cnf_correspondence(source in two_cnf()) {
        let maxsat = max_sat(source.n_vars, &source.clauses) as i64;
        let (hard, meta) = from_cnf(&source, source.hardness_params()).unwrap();
        meta.check(&hard, &[ReductionKind::Cnf]).unwrap();
        prop_assert_eq!(brute_optimum(&hard), maxsat + source.n_vars as i64);
        let best = solve_brute_force(&hard, 20).unwrap().solution;
        let recovered = to_assignment(&meta, &hard, &best).unwrap();
        prop_assert_eq!(recovered.satisfied as i64, maxsat);
        prop_assert_eq!(source.satisfied(&recovered.assignment) as i64, maxsat);

        let (tight, meta) = from_cnf(&source, source.tight_params()).unwrap();
        prop_assert_eq!(brute_optimum(&tight), maxsat);
        let a = source.max_var_occurrence();
        prop_assert!(tight.classify().max_weight <= a + 2 * (a / 2));
        let best = solve_brute_force(&tight, 20).unwrap().solution;
        let recovered = to_assignment(&meta, &tight, &best).unwrap();
        prop_assert_eq!(recovered.satisfied as i64, maxsat);
        prop_assert!(recovered.repaired.margin >= best.margin);
    }

    #[test]
    fn kdm_correspondence(source in three_dm()) {
        let (inst, meta) = from_kdm(&source).unwrap();
        meta.check(&inst, &[ReductionKind::Kdm]).unwrap();
        let best_matching = max_matching(&source.tuples) as i64;
        prop_assert_eq!(brute_optimum(&inst), best_matching);
        let best = solve_brute_force(&inst, 20).unwrap().solution;
        let matching = to_matching(&meta, &inst, &best).unwrap();
        prop_assert_eq!(matching.len() as i64, best_matching);
        prop_assert!(source.is_matching(&matching));
    }

    #[test]
    fn canonicalization_never_loses_margin(source in three_dm(), mask in any::<u64>()) {
        let (inst, meta) = from_kdm(&source).unwrap();
        let selected: Vec<usize> = (0..inst.n_exemplars()).filter(|j| mask >> j & 1 == 1).collect();
        let sol = Solution::evaluate(&inst, selected, false).unwrap();
        let canonical = canonicalize_kdm(&meta, &inst, &sol).unwrap();
        prop_assert!(canonical.margin >= sol.margin);
        prop_assert_eq!(canonical.selected.len() as i64, canonical.margin * source.k() as i64);
        prop_assert_eq!(canonicalize_kdm(&meta, &inst, &canonical).unwrap(), canonical);
    }
}

#[test]
fn three_dm_worked_example() {
    let source = three_dm_example();
    let (inst, _) = from_kdm(&source).unwrap();
    assert_eq!(inst.n_blue(), 12);
    assert_eq!(inst.n_red(), 14);
    assert_eq!(inst.n_exemplars(), 21);
    assert_eq!(max_matching(&source.tuples), 3);
    assert_eq!(brute_optimum(&inst), 3);
}

#[test]
fn paths_and_cycles() {
    for len in 1..=10 {
        let edges: Vec<(usize, usize)> = (1..=len).map(|i| (i, i + 1)).collect();
        let (inst, _) = from_graph(len + 1, &edges).unwrap();
        let report = solve_two_two(&inst).unwrap();
        assert_eq!(report.solution.margin, (len / 2) as i64, "path of {len} edges");
        assert_eq!(report.solution.margin, brute_optimum(&inst));
    }
    for len in 3..=10 {
        let edges: Vec<(usize, usize)> = (1..=len).map(|i| (i, i % len + 1)).collect();
        let (inst, _) = from_graph(len, &edges).unwrap();
        let report = solve_two_two(&inst).unwrap();
        assert_eq!(report.solution.margin, (len / 2) as i64, "cycle of {len} nodes");
        assert_eq!(report.solution.margin, brute_optimum(&inst));
    }
}

#[test]
fn tampered_metadata_is_rejected() {
    let (inst, meta) = from_kdm(&three_dm_example()).unwrap();
    let mut huge = meta.clone();
    huge.params.source_objects = usize::MAX;
    assert!(to_matching(&huge, &inst, &Solution::empty()).is_err());

    let source = CnfSource::new(2, vec![vec![1, 2], vec![-1, 2]]).unwrap();
    let (cnf, cnf_meta) = from_cnf(&source, source.hardness_params()).unwrap();
    let mut huge = cnf_meta.clone();
    huge.params.source_objects = usize::MAX;
    assert!(to_assignment(&huge, &cnf, &Solution::empty()).is_err());
    assert!(to_assignment(&meta, &cnf, &Solution::empty()).is_err());
    assert!(to_matching(&cnf_meta, &inst, &Solution::empty()).is_err());
}
