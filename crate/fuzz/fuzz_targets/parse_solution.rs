#![no_main]

use libfuzzer_sys::fuzz_target;
use tap_cli::format::{parse_solution, write_solution};
use tap_core::fixtures::greedy_tightness;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let instance = greedy_tightness();
    if let Ok(solution) = parse_solution(text, &instance) {
        assert_eq!(instance.margin(&solution.selected).unwrap(), solution.margin);
        assert_eq!(parse_solution(&write_solution(&solution), &instance).unwrap(), solution);
    }
});
