//! Seeded random source problems, used by `generate` when no input file is
//! given.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tap_core::reductions::{CnfSource, KdmSource, SetCoverSource};

use crate::error::{CliError, Result};
use crate::sources::Graph;

fn need(ok: bool, why: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(why.to_string()))
    }
}

/// `n_sets` random sets over `1..=universe`, each element placed at least once.
pub fn random_set_system(seed: u64, universe: usize, n_sets: usize) -> Result<SetCoverSource> {
    need(universe > 0 && n_sets > 0, "set systems need at least one element and one set")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = vec![Vec::new(); n_sets];
    for e in 1..=universe {
        sets[rng.gen_range(0..n_sets)].push(e);
    }
    for set in &mut sets {
        let extra = rng.gen_range(0..=universe.min(3));
        for _ in 0..extra {
            set.push(rng.gen_range(1..=universe));
        }
        if set.is_empty() {
            set.push(rng.gen_range(1..=universe));
        }
    }
    Ok(SetCoverSource::new(universe, sets)?)
}

/// `n_clauses` clauses of up to `width` distinct variables with random signs.
pub fn random_cnf(seed: u64, n_vars: usize, n_clauses: usize, width: usize) -> Result<CnfSource> {
    need(n_vars > 0 && n_clauses > 0 && width > 0, "formulas need variables, clauses and a positive width")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<i64> = (1..=n_vars as i64).collect();
    let clauses = (0..n_clauses)
        .map(|_| {
            let len = rng.gen_range(1..=width.min(n_vars));
            vars.choose_multiple(&mut rng, len)
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    Ok(CnfSource::new(n_vars, clauses)?)
}

/// `n_tuples` random k-tuples over `k` dimensions of `size` elements each.
pub fn random_kdm(seed: u64, k: usize, size: usize, n_tuples: usize) -> Result<KdmSource> {
    need(k > 0 && size > 0 && n_tuples > 0, "matchings need dimensions, elements and tuples")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tuples = (0..n_tuples)
        .map(|_| (0..k).map(|d| d * size + rng.gen_range(1..=size)).collect())
        .collect();
    Ok(KdmSource::new(vec![size; k], tuples)?)
}

/// `n_edges` distinct random edges without self-loops.
pub fn random_graph(seed: u64, n_nodes: usize, n_edges: usize) -> Result<Graph> {
    let possible = n_nodes * n_nodes.saturating_sub(1) / 2;
    need(n_edges > 0 && n_edges <= possible, "edge count must be between 1 and the number of node pairs")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (1..=n_nodes)
        .flat_map(|u| (u + 1..=n_nodes).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(&mut rng);
    pairs.truncate(n_edges);
    pairs.sort_unstable();
    Ok(Graph { n_nodes, edges: pairs })
}
