use crate::error::{Result, TapError};
use crate::model::{Instance, Solution};

use super::{ExemplarOrigin, FeatureOrigin, ReductionKind, ReductionMeta};

/// A CNF formula over variables `1..=n_vars`. Literals are signed variable ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfSource {
    pub n_vars: usize,
    /// Clauses with duplicate literals removed, in input order.
    pub clauses: Vec<Vec<i64>>,
}

/// Penalty features per exemplar and reward features per variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CnfParams {
    pub penalty: usize,
    pub reward: usize,
}

impl CnfSource {
    pub fn new(n_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        let mut clauses = clauses;
        for (c, clause) in clauses.iter_mut().enumerate() {
            if clause.is_empty() {
                return Err(TapError::InvalidSource(format!("clause {} is empty", c + 1)));
            }
            for &lit in clause.iter() {
                if lit == 0 || lit.unsigned_abs() as usize > n_vars {
                    return Err(TapError::InvalidSource(format!(
                        "clause {} has literal {lit} outside ±1..={n_vars}",
                        c + 1
                    )));
                }
            }
            let mut seen = Vec::with_capacity(clause.len());
            clause.retain(|lit| {
                let fresh = !seen.contains(lit);
                seen.push(*lit);
                fresh
            });
        }
        Ok(CnfSource { n_vars, clauses })
    }

    pub fn max_clause_size(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Largest number of literal occurrences of any variable.
    pub fn max_var_occurrence(&self) -> usize {
        let mut count = vec![0usize; self.n_vars + 1];
        for lit in self.clauses.iter().flatten() {
            count[lit.unsigned_abs() as usize] += 1;
        }
        count.into_iter().max().unwrap_or(0)
    }

    /// Number of clauses made true by `assignment` (index `i` holds variable `i + 1`).
    pub fn satisfied(&self, assignment: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|clause| {
                clause
                    .iter()
                    .any(|&lit| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0))
            })
            .count()
    }

    /// `m + 1` penalties and `m + 2` rewards: every optimum picks exactly one
    /// literal exemplar per variable and has margin `maxsat + n`.
    pub fn hardness_params(&self) -> CnfParams {
        let m = self.clauses.len();
        CnfParams {
            penalty: m + 1,
            reward: m + 2,
        }
    }

    /// `floor(a / 2)` penalties and rewards for maximum variable occurrence
    /// `a`: the two cancel and the optimal margin is `maxsat`.
    pub fn tight_params(&self) -> CnfParams {
        let half = self.max_var_occurrence() / 2;
        CnfParams {
            penalty: half,
            reward: half,
        }
    }
}

/// Builds two exemplars per variable, for `x_i = true` and `x_i = false`.
///
/// Feature ids: clause features `1..=m` (blue, placed in the exemplars of
/// their literals), then per variable its `reward` shared blue features
/// followed by `penalty` private red features for each of its two exemplars.
/// An exemplar left with no features is omitted; it would contribute nothing.
pub fn from_cnf(source: &CnfSource, params: CnfParams) -> Result<(Instance, ReductionMeta)> {
    let source = CnfSource::new(source.n_vars, source.clauses.clone())?;
    let m = source.clauses.len();
    let mut features: Vec<FeatureOrigin> = (1..=m).map(|clause| FeatureOrigin::Clause { clause }).collect();
    let mut blue: Vec<usize> = (1..=m).collect();
    let mut exemplars = Vec::new();
    let mut origins = Vec::new();

    for variable in 1..=source.n_vars {
        let mut shared = Vec::new();
        for index in 1..=params.reward {
            features.push(FeatureOrigin::Reward { variable, index });
            shared.push(features.len());
            blue.push(features.len());
        }
        for value in [true, false] {
            let literal = if value { variable as i64 } else { -(variable as i64) };
            let mut exemplar = shared.clone();
            exemplar.extend(
                source
                    .clauses
                    .iter()
                    .enumerate()
                    .filter(|(_, clause)| clause.contains(&literal))
                    .map(|(c, _)| c + 1),
            );
            for index in 1..=params.penalty {
                features.push(FeatureOrigin::Penalty { variable, value, index });
                exemplar.push(features.len());
            }
            if !exemplar.is_empty() {
                exemplars.push(exemplar);
                origins.push(ExemplarOrigin::Literal { variable, value });
            }
        }
    }
    if blue.is_empty() {
        return Err(TapError::InvalidSource(
            "formula has no clauses and no reward features were requested".into(),
        ));
    }

    let instance = Instance::new(features.len(), blue, exemplars)?;
    let mut meta = ReductionMeta::new(ReductionKind::Cnf, features, origins);
    meta.params.penalty = Some(params.penalty);
    meta.params.reward = Some(params.reward);
    meta.params.source_objects = source.n_vars;
    meta.params.source_items = m;
    meta.record_shape(&instance);
    Ok((instance, meta))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentRecovery {
    /// Truth value of variable `i + 1` at index `i`.
    pub assignment: Vec<bool>,
    pub satisfied: usize,
    /// The selection after repair: at most one literal exemplar per variable.
    pub repaired: Solution,
}

/// Repairs a selection to one literal exemplar per variable and reads off the
/// truth assignment.
///
/// A variable with neither exemplar selected gains its `true` exemplar; a
/// variable with both loses the one carrying fewer clause features (the
/// `false` one on ties). With either parameter preset neither step lowers the
/// margin, and the repaired margin is `satisfied + n * (reward - penalty)`.
pub fn to_assignment(meta: &ReductionMeta, instance: &Instance, solution: &Solution) -> Result<AssignmentRecovery> {
    meta.check(instance, &[ReductionKind::Cnf])?;
    let n_vars = meta.params.source_objects;
    let mut literal_exemplar = vec![[None, None]; n_vars + 1];
    for (&id, origin) in &meta.exemplars {
        if let ExemplarOrigin::Literal { variable, value } = *origin {
            if variable == 0 || variable > n_vars {
                return Err(TapError::MetaMismatch(format!("exemplar {id} names variable {variable}")));
            }
            literal_exemplar[variable][usize::from(!value)] = Some(id - 1);
        }
    }
    let clause_count = |j: usize| {
        instance
            .exemplar(j)
            .iter()
            .filter(|f| matches!(meta.features[f], FeatureOrigin::Clause { .. }))
            .count()
    };

    let mut selected = vec![false; instance.n_exemplars()];
    for &j in &solution.selected {
        *selected.get_mut(j).ok_or(TapError::ExemplarOutOfRange {
            index: j,
            n_exemplars: instance.n_exemplars(),
        })? = true;
    }
    let mut assignment = Vec::with_capacity(n_vars);
    for [t, f] in literal_exemplar.iter().skip(1).copied() {
        let on = |e: Option<usize>, sel: &[bool]| e.is_some_and(|j| sel[j]);
        match (on(t, &selected), on(f, &selected)) {
            (false, false) => {
                if let Some(j) = t {
                    selected[j] = true;
                }
            }
            (true, true) => {
                let (t, f) = (t.expect("selected"), f.expect("selected"));
                if clause_count(t) < clause_count(f) {
                    selected[t] = false;
                } else {
                    selected[f] = false;
                }
            }
            _ => {}
        }
        if on(t, &selected) && on(f, &selected) {
            return Err(TapError::Internal("repair left both literal exemplars selected".into()));
        }
        assignment.push(!on(f, &selected));
    }

    let repaired = Solution::evaluate(
        instance,
        (0..instance.n_exemplars()).filter(|&j| selected[j]).collect(),
        false,
    )?;
    let satisfied = instance
        .covered(&repaired.selected)?
        .blue
        .iter()
        .filter(|f| matches!(meta.features[f], FeatureOrigin::Clause { .. }))
        .count();
    Ok(AssignmentRecovery {
        assignment,
        satisfied,
        repaired,
    })
}
