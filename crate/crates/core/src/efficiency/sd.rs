use std::cmp::Ordering;

use crate::assignment::{cumulative_row, RandomAssignment};
use crate::profile::{AgentId, PreferenceProfile};

/// How agent `i`'s allocation under `p` compares with its allocation under
/// `q` in the stochastic dominance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SdComparison {
    /// Every upper contour sum of `p` is at least that of `q`, one strictly.
    StrictlyDominates,
    /// Identical allocations.
    Equal,
    /// `q` strictly dominates `p`.
    Dominated,
    Incomparable,
}

impl SdComparison {
    /// `p(i)` is weakly SD preferred to `q(i)`: dominant or equal.
    pub fn weakly_dominates(self) -> bool {
        matches!(self, Self::StrictlyDominates | Self::Equal)
    }
}

pub fn sd_compare(
    p: &RandomAssignment,
    q: &RandomAssignment,
    agent: AgentId,
    profile: &PreferenceProfile,
) -> SdComparison {
    let left = cumulative_row(p, agent, profile);
    let right = cumulative_row(q, agent, profile);
    let (mut greater, mut less) = (false, false);
    for (a, b) in left.iter().zip(&right) {
        match a.cmp(b) {
            Ordering::Greater => greater = true,
            Ordering::Less => less = true,
            Ordering::Equal => {}
        }
    }
    match (greater, less) {
        (false, false) => SdComparison::Equal,
        (true, false) => SdComparison::StrictlyDominates,
        (false, true) => SdComparison::Dominated,
        (true, true) => SdComparison::Incomparable,
    }
}
