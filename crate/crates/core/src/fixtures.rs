//! Small hand-built instances used throughout the tests, docs and CLI examples.

use crate::model::Instance;
use crate::reductions::KdmSource;

pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;
pub const D: usize = 3;
pub const E: usize = 4;
pub const F: usize = 5;

/// One-red instance on which greedy can end a factor of two from optimal.
///
/// Blue features b1..b6 are ids 1..6 and red features r1..r6 are ids 7..12.
/// Exemplars, in order A..F:
///
/// ```text
/// A = {b1, b5, r1}   B = {b2, b6, r2}   C = {b3, b5, r3}
/// D = {b4, b6, r4}   E = {b5, b6, r5}   F = {b6, r6}
/// ```
pub fn greedy_tightness() -> Instance {
    tightness_with_reds([7, 8, 9, 10, 11, 12])
}

/// [`greedy_tightness`] with the ids of r1 and r5 swapped, so a lowest-id
/// tie-break opens with exemplar E.
pub fn greedy_tightness_relabeled() -> Instance {
    tightness_with_reds([11, 8, 9, 10, 7, 12])
}

fn tightness_with_reds(r: [usize; 6]) -> Instance {
    Instance::new(
        12,
        1..=6,
        vec![
            vec![1, 5, r[0]],
            vec![2, 6, r[1]],
            vec![3, 5, r[2]],
            vec![4, 6, r[3]],
            vec![5, 6, r[4]],
            vec![6, r[5]],
        ],
    )
    .expect("fixture ids are in range")
}

/// Three-dimensional matching source with seven triples A..G over elements
/// 1..4 | 5..8 | 9..12. Its maximum matching has size 3.
pub fn three_dm_example() -> KdmSource {
    KdmSource::new(
        vec![4, 4, 4],
        vec![
            vec![1, 5, 9],
            vec![2, 5, 10],
            vec![2, 7, 11],
            vec![3, 6, 10],
            vec![3, 8, 12],
            vec![4, 7, 9],
            vec![4, 6, 11],
        ],
    )
    .expect("fixture tuples are well formed")
}
