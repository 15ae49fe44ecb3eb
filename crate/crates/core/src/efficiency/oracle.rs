//! SD-efficiency decided directly from the definition, by linear
//! programming, without reference to trading cycles.

use num::Signed;

use crate::assignment::{cumulative_row, RandomAssignment};
use crate::lp::{LinearProgram, LpOutcome};
use crate::profile::{AgentId, PreferenceProfile};
use crate::rational::{self, Rational};

/// True iff no bistochastic `q` weakly SD-dominates `p` for every agent and
/// strictly for some agent.
pub fn sd_improvement_oracle(p: &RandomAssignment, profile: &PreferenceProfile) -> bool {
    sd_improvement(p, profile).is_none()
}

/// Solves
///
/// ```text
/// maximize   Σ_{i,k} s(i,k)
/// subject to Σ_o q(i,o) = 1,  Σ_i q(i,o) = 1,
///            C_q(i,k) − s(i,k) = C_p(i,k),   q, s ≥ 0
/// ```
///
/// where `C_x(i,k)` is the mass agent `i` gets on its top `k + 1` objects.
/// Returns the optimal `q` when the total surplus is positive; that `q`
/// SD-dominates `p`.
pub fn sd_improvement(p: &RandomAssignment, profile: &PreferenceProfile) -> Option<RandomAssignment> {
    let n = profile.n();
    let q = |i: usize, o: usize| i * n + o;
    let s = |i: usize, k: usize| n * n + i * n + k;
    let mut lp = LinearProgram::new(2 * n * n);
    for i in 0..n {
        lp.add_equality((0..n).map(|o| (q(i, o), rational::one())), rational::one());
    }
    for o in 0..n {
        lp.add_equality((0..n).map(|i| (q(i, o), rational::one())), rational::one());
    }
    for i in 0..n {
        let agent = AgentId(i);
        let ranking = profile.ranking(agent);
        for (k, target) in cumulative_row(p, agent, profile).into_iter().enumerate() {
            let terms = ranking[..=k]
                .iter()
                .map(|o| (q(i, o.0), rational::one()))
                .chain(std::iter::once((s(i, k), -rational::one())));
            lp.add_equality(terms, target);
        }
    }
    lp.set_objective((0..n).flat_map(|i| (0..n).map(move |k| (s(i, k), rational::one()))));

    match lp.solve() {
        LpOutcome::Optimal { value, values } if value.is_positive() => {
            let rows: Vec<Vec<Rational>> = (0..n)
                .map(|i| (0..n).map(|o| values[q(i, o)].clone()).collect())
                .collect();
            Some(RandomAssignment::new(rows).expect("LP solution is bistochastic"))
        }
        LpOutcome::Optimal { .. } => None,
        // q = p is always feasible and the surplus is bounded by n².
        other => unreachable!("SD improvement LP returned {other:?}"),
    }
}
