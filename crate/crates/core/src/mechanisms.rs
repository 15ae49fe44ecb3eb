//! Serial dictatorship, random serial dictatorship (exact and sampled) and
//! the probabilistic serial (simultaneous eating) mechanism.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::assignment::{DiscreteAssignment, Permutation, RandomAssignment};
use crate::error::{Error, Result};
use crate::profile::{factorial, next_permutation, AgentId, ObjectId, PreferenceProfile};
use crate::rational;

/// Default cap on `n` for computations that enumerate all `n!` orders.
pub const EXACT_CAP: usize = 8;

/// Serves agents in `order`; each takes its most preferred object still
/// available.
pub fn serial_dictatorship(
    profile: &PreferenceProfile,
    order: &Permutation,
) -> Result<DiscreteAssignment> {
    if order.len() != profile.n() {
        return Err(Error::DimensionMismatch {
            expected: profile.n(),
            found: order.len(),
        });
    }
    let agents: Vec<usize> = order.order().iter().map(|a| a.0).collect();
    Ok(serve(profile, &agents))
}

fn serve(profile: &PreferenceProfile, order: &[usize]) -> DiscreteAssignment {
    let n = profile.n();
    let mut taken = vec![false; n];
    let mut result = vec![ObjectId(0); n];
    for &agent in order {
        let pick = *profile
            .ranking(AgentId(agent))
            .iter()
            .find(|o| !taken[o.0])
            .expect("n agents never exhaust n objects");
        taken[pick.0] = true;
        result[agent] = pick;
    }
    DiscreteAssignment::from_ids_unchecked(result)
}

/// Calls `f` with the serial dictatorship outcome of every order, in
/// lexicographic order of permutations.
pub(crate) fn for_each_outcome(profile: &PreferenceProfile, mut f: impl FnMut(DiscreteAssignment)) {
    let mut order: Vec<usize> = (0..profile.n()).collect();
    loop {
        f(serve(profile, &order));
        if !next_permutation(&mut order) {
            break;
        }
    }
}

pub(crate) fn check_cap(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { what, n, cap })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsdResult {
    pub assignment: RandomAssignment,
    /// `n!`
    pub permutation_count: u64,
    pub distinct_outcomes: usize,
    /// How many orders produce each serial dictatorship outcome.
    pub outcome_counts: BTreeMap<DiscreteAssignment, u64>,
}

/// Exact RSD: the average of serial dictatorship over all `n!` orders.
pub fn rsd_exact(profile: &PreferenceProfile) -> Result<RsdResult> {
    rsd_exact_with_cap(profile, EXACT_CAP)
}

pub fn rsd_exact_with_cap(profile: &PreferenceProfile, cap: usize) -> Result<RsdResult> {
    let n = profile.n();
    check_cap(n, cap, "exact RSD (use Monte Carlo sampling instead)")?;
    let mut counts = vec![vec![0u64; n]; n];
    let mut outcome_counts = BTreeMap::new();
    for_each_outcome(profile, |outcome| {
        for (agent, object) in outcome.objects().iter().enumerate() {
            counts[agent][object.0] += 1;
        }
        *outcome_counts.entry(outcome).or_insert(0) += 1;
    });
    let permutation_count = factorial(n);
    Ok(RsdResult {
        assignment: RandomAssignment::from_counts(&counts, permutation_count)?,
        permutation_count,
        distinct_outcomes: outcome_counts.len(),
        outcome_counts,
    })
}

/// Sampled RSD: frequencies of serial dictatorship outcomes over `samples`
/// uniformly random orders. Orders come from a Fisher–Yates shuffle driven
/// by ChaCha8 seeded with `seed`, so results are reproducible.
pub fn rsd_monte_carlo(
    profile: &PreferenceProfile,
    samples: u64,
    seed: u64,
) -> Result<RandomAssignment> {
    if samples == 0 {
        return Err(Error::InvalidAssignment("samples must be at least 1".into()));
    }
    let n = profile.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut counts = vec![vec![0u64; n]; n];
    for _ in 0..samples {
        order.shuffle(&mut rng);
        let outcome = serve(profile, &order);
        for (agent, object) in outcome.objects().iter().enumerate() {
            counts[agent][object.0] += 1;
        }
    }
    RandomAssignment::from_counts(&counts, samples)
}

/// Probabilistic serial: every agent eats its best remaining object at unit
/// speed. Time advances from one exhaustion event to the next, so every
/// share is an exact rational.
pub fn probabilistic_serial(profile: &PreferenceProfile) -> RandomAssignment {
    let n = profile.n();
    let mut remaining = vec![rational::one(); n];
    let mut shares = vec![vec![rational::zero(); n]; n];
    loop {
        let targets: Vec<Option<ObjectId>> = profile
            .agents()
            .map(|a| {
                profile
                    .ranking(a)
                    .iter()
                    .copied()
                    .find(|o| remaining[o.0].is_positive())
            })
            .collect();
        let mut eaters = vec![0i64; n];
        for t in targets.iter().flatten() {
            eaters[t.0] += 1;
        }
        let step = (0..n)
            .filter(|&o| eaters[o] > 0)
            .map(|o| &remaining[o] / rational::from_int(eaters[o]))
            .min();
        let Some(step) = step else { break };
        for (agent, target) in targets.iter().enumerate() {
            if let Some(o) = target {
                shares[agent][o.0] += &step;
                remaining[o.0] -= &step;
            }
        }
        debug_assert!(remaining.iter().all(|r| !r.is_negative()));
        if remaining.iter().all(Zero::is_zero) {
            break;
        }
    }
    RandomAssignment::new(shares).expect("eating outcome is bistochastic")
}
