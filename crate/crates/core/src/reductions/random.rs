use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, TapError};
use crate::model::Instance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomParams {
    pub seed: u64,
    pub n_features: usize,
    pub n_exemplars: usize,
    /// Share of blue features; rounded and clamped so both colors that are
    /// needed exist.
    pub blue_fraction: f64,
    pub max_weight: usize,
    pub max_occurrence: usize,
    pub one_red: bool,
}

impl RandomParams {
    pub fn n_blue(&self) -> usize {
        let upper = if self.one_red {
            self.n_features.saturating_sub(1)
        } else {
            self.n_features
        };
        let wanted = (self.blue_fraction.clamp(0.0, 1.0) * self.n_features as f64).round() as usize;
        wanted.clamp(1, upper.max(1))
    }

    fn check(&self) -> Result<()> {
        let (n, m, w, k) = (self.n_features, self.n_exemplars, self.max_weight, self.max_occurrence);
        let fail = |why: String| Err(TapError::Parameter(why));
        if n == 0 || m == 0 || w == 0 || k == 0 {
            return fail("feature count, exemplar count, weight and occurrence caps must be positive".into());
        }
        if !self.blue_fraction.is_finite() {
            return fail("blue fraction must be finite".into());
        }
        if m * w < n {
            return fail(format!("{m} exemplars of weight {w} cannot hold {n} features"));
        }
        if n * k < m {
            return fail(format!("{n} features occurring {k} times cannot fill {m} exemplars"));
        }
        if self.one_red {
            let n_blue = self.n_blue();
            let n_red = n - n_blue;
            if n_red == 0 || n < 2 {
                return fail("one-red instances need at least one blue and one red feature".into());
            }
            if n_red > m || m > n_red * k {
                return fail(format!("{n_red} red features cannot give each of {m} exemplars exactly one"));
            }
            if n_blue > m * (w - 1) {
                return fail(format!("{n_blue} blue features do not fit beside one red in {m} exemplars"));
            }
        }
        Ok(())
    }
}

/// Samples a valid instance respecting the weight and occurrence caps.
///
/// Every exemplar first receives a seed feature and every still-unused
/// feature is injected into an exemplar with spare capacity; exemplars are
/// then topped up to a random weight. The same parameters always give the
/// same instance.
pub fn random_instance(params: &RandomParams) -> Result<Instance> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n_features;
    let n_blue = params.n_blue();
    let mut ids: Vec<usize> = (1..=n).collect();
    ids.shuffle(&mut rng);
    let (blue, red) = ids.split_at(n_blue);
    let mut blue = blue.to_vec();
    blue.sort_unstable();

    let mut exemplars = vec![Vec::new(); params.n_exemplars];
    let mut occurrence = vec![0usize; n + 1];
    let place = |exemplar: &mut Vec<usize>, f: usize, occurrence: &mut Vec<usize>| {
        exemplar.push(f);
        occurrence[f] += 1;
    };

    if params.one_red {
        let mut order: Vec<usize> = (0..params.n_exemplars).collect();
        order.shuffle(&mut rng);
        for (slot, &j) in order.iter().enumerate() {
            let r = match red.get(slot) {
                Some(&r) => r,
                None => red
                    .iter()
                    .copied()
                    .filter(|&r| occurrence[r] < params.max_occurrence)
                    .collect::<Vec<_>>()
                    .choose(&mut rng)
                    .copied()
                    .ok_or_else(|| TapError::Internal("red capacity exhausted".into()))?,
            };
            place(&mut exemplars[j], r, &mut occurrence);
        }
        let mut shuffled = blue.clone();
        shuffled.shuffle(&mut rng);
        for b in shuffled {
            inject(&mut exemplars, b, params.max_weight, &mut rng)?;
            occurrence[b] += 1;
        }
        for exemplar in &mut exemplars {
            let target = rng.gen_range(exemplar.len()..=params.max_weight);
            top_up(exemplar, &blue, target, params.max_occurrence, &mut occurrence, &mut rng);
        }
    } else {
        for exemplar in &mut exemplars {
            let unused: Vec<usize> = ids.iter().copied().filter(|&f| occurrence[f] == 0).collect();
            let f = match unused.choose(&mut rng) {
                Some(&f) => f,
                None => ids
                    .iter()
                    .copied()
                    .filter(|&f| occurrence[f] < params.max_occurrence)
                    .collect::<Vec<_>>()
                    .choose(&mut rng)
                    .copied()
                    .ok_or_else(|| TapError::Internal("occurrence capacity exhausted".into()))?,
            };
            place(exemplar, f, &mut occurrence);
        }
        let unused: Vec<usize> = ids.iter().copied().filter(|&f| occurrence[f] == 0).collect();
        for f in unused {
            inject(&mut exemplars, f, params.max_weight, &mut rng)?;
            occurrence[f] += 1;
        }
        let mut all: Vec<usize> = (1..=n).collect();
        all.shuffle(&mut rng);
        for exemplar in &mut exemplars {
            let target = rng.gen_range(exemplar.len()..=params.max_weight);
            top_up(exemplar, &all, target, params.max_occurrence, &mut occurrence, &mut rng);
        }
    }

    let instance = Instance::new(n, blue, exemplars)?;
    debug_assert!(instance.is_valid());
    Ok(instance)
}

fn inject(exemplars: &mut [Vec<usize>], f: usize, max_weight: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let open: Vec<usize> = (0..exemplars.len())
        .filter(|&j| exemplars[j].len() < max_weight)
        .collect();
    let &j = open
        .choose(rng)
        .ok_or_else(|| TapError::Internal(format!("no exemplar has room for feature {f}")))?;
    exemplars[j].push(f);
    Ok(())
}

fn top_up(
    exemplar: &mut Vec<usize>,
    pool: &[usize],
    target: usize,
    max_occurrence: usize,
    occurrence: &mut [usize],
    rng: &mut ChaCha8Rng,
) {
    while exemplar.len() < target {
        let candidates: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|&f| occurrence[f] < max_occurrence && !exemplar.contains(&f))
            .collect();
        let Some(&f) = candidates.choose(rng) else {
            return;
        };
        exemplar.push(f);
        occurrence[f] += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::solve_two_two;

    fn params(seed: u64) -> RandomParams {
        RandomParams {
            seed,
            n_features: 10,
            n_exemplars: 8,
            blue_fraction: 0.5,
            max_weight: 3,
            max_occurrence: 3,
            one_red: false,
        }
    }

    #[test]
    fn same_seed_same_instance() {
        assert_eq!(random_instance(&params(5)).unwrap(), random_instance(&params(5)).unwrap());
        assert_ne!(random_instance(&params(5)).unwrap(), random_instance(&params(6)).unwrap());
    }

    #[test]
    fn caps_and_validity_hold() {
        for seed in 0..200 {
            for one_red in [false, true] {
                let p = RandomParams { one_red, ..params(seed) };
                let inst = random_instance(&p).unwrap();
                let stats = inst.classify();
                assert!(inst.is_valid(), "seed {seed}: {:?}", inst.validate());
                assert!(stats.max_weight <= p.max_weight);
                assert!(stats.max_occurrence <= p.max_occurrence);
                assert_eq!(inst.n_exemplars(), p.n_exemplars);
                if one_red {
                    assert!(stats.is_one_red);
                }
            }
        }
    }

    #[test]
    fn two_two_class_is_solvable() {
        for seed in 0..50 {
            let p = RandomParams {
                max_weight: 2,
                max_occurrence: 2,
                ..params(seed)
            };
            let inst = random_instance(&p).unwrap();
            assert!(solve_two_two(&inst).is_ok(), "seed {seed}");
        }
    }

    #[test]
    fn unsatisfiable_parameters() {
        let too_few_slots = RandomParams { n_exemplars: 2, max_weight: 2, ..params(0) };
        assert!(matches!(random_instance(&too_few_slots), Err(TapError::Parameter(_))));
        let too_many_exemplars = RandomParams { max_occurrence: 1, n_exemplars: 11, max_weight: 1, ..params(0) };
        assert!(random_instance(&too_many_exemplars).is_err());
        let one_red_weight_one = RandomParams { one_red: true, max_weight: 1, n_exemplars: 10, ..params(0) };
        assert!(random_instance(&one_red_weight_one).is_err());
    }
}
