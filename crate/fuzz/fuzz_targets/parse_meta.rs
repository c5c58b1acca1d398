#![no_main]

use libfuzzer_sys::fuzz_target;
use tap_core::fixtures::three_dm_example;
use tap_core::reductions::{from_cnf, from_kdm, from_set_cover, to_assignment, to_matching, to_set_cover_solution};
use tap_core::reductions::{CnfSource, SetCoverSource};
use tap_core::Solution;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Arbitrary sidecars must be rejected or mapped cleanly, never panic.
    let Ok(meta) = tap_cli::parse_meta(text) else {
        return;
    };
    let (kdm, _) = from_kdm(&three_dm_example()).unwrap();
    let _ = to_matching(&meta, &kdm, &Solution::evaluate(&kdm, vec![0, 1, 2], false).unwrap());
    let cnf = CnfSource::new(2, vec![vec![1, 2], vec![-1, 2]]).unwrap();
    let (cnf, _) = from_cnf(&cnf, cnf.hardness_params()).unwrap();
    let _ = to_assignment(&meta, &cnf, &Solution::empty());
    let sc = SetCoverSource::new(2, vec![vec![1], vec![1, 2]]).unwrap();
    let (sc, _) = from_set_cover(&sc).unwrap();
    let _ = to_set_cover_solution(&meta, &sc, &Solution::empty());
});
