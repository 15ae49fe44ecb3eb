use std::collections::BTreeMap;

use num::{One, Signed};

use crate::assignment::{DiscreteAssignment, RandomAssignment};
use crate::efficiency::pareto::{enumerate_pareto_optimal_with_cap, is_pareto_optimal};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};
use crate::mechanisms::EXACT_CAP;
use crate::profile::{AgentId, ObjectId, PreferenceProfile};
use crate::rational::{self, Rational};

/// A representation of a random assignment as a lottery over Pareto optimal
/// discrete assignments. Every weight is strictly positive and the weights
/// sum to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExPostCertificate {
    weights: BTreeMap<DiscreteAssignment, Rational>,
}

impl ExPostCertificate {
    pub fn new(weights: BTreeMap<DiscreteAssignment, Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidAssignment("empty certificate".into()));
        }
        if weights.values().any(|w| !w.is_positive()) {
            return Err(Error::InvalidAssignment("non-positive certificate weight".into()));
        }
        let total: Rational = weights.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidAssignment(format!("weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &BTreeMap<DiscreteAssignment, Rational> {
        &self.weights
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// `Σ w_k D_k`.
    pub fn reconstruct(&self) -> RandomAssignment {
        let n = self.weights.keys().next().expect("non-empty").n();
        let mut rows = vec![vec![rational::zero(); n]; n];
        for (d, w) in &self.weights {
            for (agent, object) in d.objects().iter().enumerate() {
                rows[agent][object.0] += w;
            }
        }
        RandomAssignment::new(rows).expect("convex combination of permutation matrices")
    }

    /// Checks that the certificate reproduces `p` exactly and that every
    /// support member is Pareto optimal under `profile`.
    pub fn validate(&self, p: &RandomAssignment, profile: &PreferenceProfile) -> Result<()> {
        for d in self.weights.keys() {
            if !is_pareto_optimal(d, profile)? {
                return Err(Error::InvalidAssignment(format!(
                    "support member {:?} is not Pareto optimal",
                    d.objects()
                )));
            }
        }
        if &self.reconstruct() != p {
            return Err(Error::InvalidAssignment(
                "certificate does not reconstruct the assignment".into(),
            ));
        }
        Ok(())
    }
}

/// Decides ex post efficiency of `p` by exact LP over the Pareto optimal
/// assignments.
///
/// When feasible, the certificate has maximal support: it averages one
/// solution per Pareto optimal assignment that can carry positive weight in
/// some decomposition, so any member that is used by some decomposition is
/// used by this one.
pub fn decompose_ex_post(
    p: &RandomAssignment,
    profile: &PreferenceProfile,
) -> Result<Option<ExPostCertificate>> {
    decompose_ex_post_with_cap(p, profile, EXACT_CAP)
}

pub fn decompose_ex_post_with_cap(
    p: &RandomAssignment,
    profile: &PreferenceProfile,
    cap: usize,
) -> Result<Option<ExPostCertificate>> {
    p.check_dimension(profile)?;
    let n = profile.n();
    let members: Vec<DiscreteAssignment> = enumerate_pareto_optimal_with_cap(profile, cap)?
        .into_iter()
        .collect();
    let k = members.len();

    let mut lp = LinearProgram::new(k);
    lp.add_equality((0..k).map(|j| (j, rational::one())), rational::one());
    for i in 0..n {
        for o in 0..n {
            let terms = members
                .iter()
                .enumerate()
                .filter(|(_, d)| d.object_of(AgentId(i)) == ObjectId(o))
                .map(|(j, _)| (j, rational::one()));
            lp.add_equality(terms, p.get(AgentId(i), ObjectId(o)).clone());
        }
    }

    let LpOutcome::Optimal { values, .. } = lp.solve() else {
        return Ok(None);
    };
    let mut solutions = vec![values];
    let mut covered: Vec<bool> = solutions[0].iter().map(|w| w.is_positive()).collect();
    for j in 0..k {
        if covered[j] {
            continue;
        }
        lp.set_objective([(j, rational::one())]);
        if let LpOutcome::Optimal { value, values } = lp.solve() {
            if value.is_positive() {
                for (c, w) in covered.iter_mut().zip(&values) {
                    *c |= w.is_positive();
                }
                solutions.push(values);
            }
        }
    }

    let count = rational::from_int(solutions.len() as i64);
    let weights = members
        .into_iter()
        .enumerate()
        .filter_map(|(j, d)| {
            let w: Rational = solutions.iter().map(|s| &s[j]).sum::<Rational>() / &count;
            w.is_positive().then_some((d, w))
        })
        .collect();
    ExPostCertificate::new(weights).map(Some)
}

pub fn is_ex_post_efficient(p: &RandomAssignment, profile: &PreferenceProfile) -> Result<bool> {
    Ok(decompose_ex_post(p, profile)?.is_some())
}
