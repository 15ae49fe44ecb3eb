use std::collections::BTreeSet;

use crate::assignment::{DiscreteAssignment, RandomAssignment};
use crate::efficiency::cycle::cycle_in_support;
use crate::error::{Error, Result};
use crate::mechanisms::{check_cap, for_each_outcome, EXACT_CAP};
use crate::profile::PreferenceProfile;

/// A discrete assignment is Pareto optimal iff its 0/1 matrix admits no
/// trading cycle: a cycle of agents each preferring the next one's object is
/// exactly a Pareto-improving exchange.
pub fn is_pareto_optimal(d: &DiscreteAssignment, profile: &PreferenceProfile) -> Result<bool> {
    let n = profile.n();
    if d.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: d.n(),
        });
    }
    let mut support = vec![false; n * n];
    for (agent, object) in d.objects().iter().enumerate() {
        support[agent * n + object.0] = true;
    }
    Ok(cycle_in_support(&support, profile).is_none())
}

/// The Pareto optimal discrete assignments, obtained as the distinct serial
/// dictatorship outcomes over all `n!` orders.
pub fn enumerate_pareto_optimal(profile: &PreferenceProfile) -> Result<BTreeSet<DiscreteAssignment>> {
    enumerate_pareto_optimal_with_cap(profile, EXACT_CAP)
}

pub fn enumerate_pareto_optimal_with_cap(
    profile: &PreferenceProfile,
    cap: usize,
) -> Result<BTreeSet<DiscreteAssignment>> {
    check_cap(profile.n(), cap, "Pareto optimal enumeration")?;
    let mut set = BTreeSet::new();
    for_each_outcome(profile, |d| {
        set.insert(d);
    });
    Ok(set)
}

/// Equal-weight average of all Pareto optimal discrete assignments.
pub fn uniform_po_mixture(profile: &PreferenceProfile) -> Result<RandomAssignment> {
    uniform_po_mixture_with_cap(profile, EXACT_CAP)
}

pub fn uniform_po_mixture_with_cap(profile: &PreferenceProfile, cap: usize) -> Result<RandomAssignment> {
    let members: Vec<_> = enumerate_pareto_optimal_with_cap(profile, cap)?
        .into_iter()
        .collect();
    RandomAssignment::uniform_mixture(&members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::Permutation;
    use crate::mechanisms::serial_dictatorship;
    use crate::profile::{AgentId, ObjectId};
    use crate::rational::ratio;
    use num::Zero;

    fn paired_profile() -> PreferenceProfile {
        PreferenceProfile::new(vec![
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![1, 0, 3, 2],
        ])
        .unwrap()
    }

    #[test]
    fn prio_outcome_is_pareto_optimal() {
        let profile = paired_profile();
        let d = serial_dictatorship(&profile, &Permutation::identity(4)).unwrap();
        assert!(is_pareto_optimal(&d, &profile).unwrap());
    }

    #[test]
    fn swap_improvable_assignment() {
        // 1:o2 2:o3 3:o1 4:o4: agents 1 and 3 gain by swapping o2 and o1.
        let profile = paired_profile();
        let d = DiscreteAssignment::new(vec![1, 2, 0, 3]).unwrap();
        assert!(!is_pareto_optimal(&d, &profile).unwrap());
        let swapped = DiscreteAssignment::new(vec![0, 2, 1, 3]).unwrap();
        for agent in profile.agents() {
            assert!(profile.rank(agent, swapped.object_of(agent)) <= profile.rank(agent, d.object_of(agent)));
        }
        assert!(profile.prefers(AgentId(0), ObjectId(0), ObjectId(1)));
    }

    #[test]
    fn trivial_market() {
        let profile = PreferenceProfile::new(vec![vec![0]]).unwrap();
        let d = DiscreteAssignment::new(vec![0]).unwrap();
        assert!(is_pareto_optimal(&d, &profile).unwrap());
        assert_eq!(enumerate_pareto_optimal(&profile).unwrap().len(), 1);
        let m = uniform_po_mixture(&profile).unwrap();
        assert_eq!(m, d.to_random());
        assert!(is_pareto_optimal(&DiscreteAssignment::new(vec![0, 1]).unwrap(), &profile).is_err());
    }

    #[test]
    fn paired_profile_po_set() {
        let profile = paired_profile();
        let po = enumerate_pareto_optimal(&profile).unwrap();
        assert_eq!(po.len(), 12);
        let mixture = uniform_po_mixture(&profile).unwrap();
        for agent in profile.agents() {
            for object in profile.objects() {
                let any = po.iter().any(|d| d.object_of(agent) == object);
                assert_eq!(!mixture.get(agent, object).is_zero(), any);
            }
        }
        // frozen from an independent brute-force enumeration
        let a = [ratio(1, 3), ratio(1, 6), ratio(1, 3), ratio(1, 6)];
        let b = [ratio(1, 6), ratio(1, 3), ratio(1, 6), ratio(1, 3)];
        assert_eq!(mixture.row(AgentId(0)), &a);
        assert_eq!(mixture.row(AgentId(1)), &a);
        assert_eq!(mixture.row(AgentId(2)), &b);
        assert_eq!(mixture.row(AgentId(3)), &b);
    }
}
