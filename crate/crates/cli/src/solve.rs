use clap::ValueEnum;
use tap_core::exact::{
    solve_auto, solve_brute_force, solve_one_occurrence, solve_one_red_enumeration, solve_separable, solve_two_two,
    SolverReport, DEFAULT_BRUTE_FORCE_LIMIT,
};
use tap_core::greedy::{best_prefix, greedy_one_red};
use tap_core::{GreedyTrace, Instance, Result, TieBreak};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum SolverChoice {
    Auto,
    Brute,
    Greedy,
    OneOcc,
    TwoTwo,
    Separable,
    OneRedEnum,
}

impl SolverChoice {
    pub fn name(self) -> &'static str {
        match self {
            SolverChoice::Auto => "auto",
            SolverChoice::Brute => "brute",
            SolverChoice::Greedy => "greedy",
            SolverChoice::OneOcc => "one-occ",
            SolverChoice::TwoTwo => "two-two",
            SolverChoice::Separable => "separable",
            SolverChoice::OneRedEnum => "one-red-enum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieBreakChoice {
    Lowest,
    Highest,
    Random,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tie_break: TieBreak,
    pub budget: Option<usize>,
    pub fallback_limit: usize,
    /// Report greedy's best prefix instead of the full run.
    pub best_prefix: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tie_break: TieBreak::Lowest,
            budget: None,
            fallback_limit: DEFAULT_BRUTE_FORCE_LIMIT,
            best_prefix: false,
        }
    }
}

impl SolveOptions {
    pub fn tie_break(choice: TieBreakChoice, seed: u64) -> TieBreak {
        match choice {
            TieBreakChoice::Lowest => TieBreak::Lowest,
            TieBreakChoice::Highest => TieBreak::Highest,
            TieBreakChoice::Random => TieBreak::Random(seed),
        }
    }
}

pub struct Outcome {
    pub report: SolverReport,
    pub trace: Option<GreedyTrace>,
}

pub fn run_solver(instance: &Instance, solver: SolverChoice, options: &SolveOptions) -> Result<Outcome> {
    let plain = |report| Ok(Outcome { report, trace: None });
    match solver {
        SolverChoice::Auto => plain(solve_auto(instance, options.fallback_limit)?),
        SolverChoice::Brute => plain(solve_brute_force(instance, options.fallback_limit)?),
        SolverChoice::OneOcc => plain(solve_one_occurrence(instance)?),
        SolverChoice::TwoTwo => plain(solve_two_two(instance)?),
        SolverChoice::Separable => plain(solve_separable(instance)?),
        SolverChoice::OneRedEnum => plain(solve_one_red_enumeration(instance, options.budget)?),
        SolverChoice::Greedy => {
            let (full, trace) = greedy_one_red(instance, options.tie_break)?;
            let solution = if options.best_prefix {
                best_prefix(instance, &trace)?
            } else {
                full
            };
            Ok(Outcome {
                report: SolverReport {
                    solution,
                    solver_name: "greedy",
                    exact: false,
                    work: trace.len() as u64,
                },
                trace: Some(trace),
            })
        }
    }
}
