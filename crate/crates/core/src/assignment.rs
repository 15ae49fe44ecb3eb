//! Permutations of agents, discrete and random assignments, and trading
//! cycles.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::profile::{AgentId, ObjectId, PreferenceProfile};
use crate::rational::{self, Rational};

/// An order in which agents are served.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<AgentId>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &a in &order {
            if a >= n || std::mem::replace(&mut seen[a], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{order:?} is not a permutation of 0..{n}"
                )));
            }
        }
        Ok(Self(order.into_iter().map(AgentId).collect()))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).map(AgentId).collect())
    }

    /// Parses a one-based, comma-separated order such as `"1,2,3,4"`.
    pub fn parse_one_based(text: &str) -> Result<Self> {
        let order = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&k| k >= 1)
                    .map(|k| k - 1)
                    .ok_or_else(|| Error::InvalidPermutation(format!("bad agent label `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(order)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn order(&self) -> &[AgentId] {
        &self.0
    }
}

/// A bijection from agents to objects (a 0/1 permutation matrix).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscreteAssignment(Vec<ObjectId>);

impl DiscreteAssignment {
    /// `objects[i]` is the object held by agent `i`.
    pub fn new(objects: Vec<usize>) -> Result<Self> {
        let n = objects.len();
        let mut taken = vec![false; n];
        for &o in &objects {
            if o >= n || std::mem::replace(&mut taken[o], true) {
                return Err(Error::InvalidAssignment(format!(
                    "{objects:?} is not a bijection onto 0..{n}"
                )));
            }
        }
        Ok(Self(objects.into_iter().map(ObjectId).collect()))
    }

    pub(crate) fn from_ids_unchecked(objects: Vec<ObjectId>) -> Self {
        Self(objects)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn object_of(&self, agent: AgentId) -> ObjectId {
        self.0[agent.0]
    }

    pub fn objects(&self) -> &[ObjectId] {
        &self.0
    }

    pub fn to_random(&self) -> RandomAssignment {
        let n = self.n();
        let mut entries = vec![rational::zero(); n * n];
        for (agent, object) in self.0.iter().enumerate() {
            entries[agent * n + object.0] = rational::one();
        }
        RandomAssignment { n, entries }
    }
}

/// An `n × n` bistochastic matrix of exact rationals; rows are agents,
/// columns are objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RandomAssignment {
    n: usize,
    entries: Vec<Rational>,
}

impl RandomAssignment {
    /// Validates that every entry lies in `[0, 1]` and that every row and
    /// column sums to exactly one.
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidAssignment("empty matrix".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidAssignment(format!(
                "row {} has {} entries, expected {n}",
                bad + 1,
                rows[bad].len()
            )));
        }
        let entries: Vec<Rational> = rows.into_iter().flatten().collect();
        if let Some(e) = entries.iter().find(|e| e.is_negative() || **e > Rational::one()) {
            return Err(Error::InvalidAssignment(format!("entry {e} outside [0, 1]")));
        }
        let out = Self { n, entries };
        for k in 0..n {
            let row: Rational = (0..n).map(|o| &out.entries[k * n + o]).sum();
            if !row.is_one() {
                return Err(Error::InvalidAssignment(format!(
                    "row {} sums to {row}",
                    k + 1
                )));
            }
            let col: Rational = (0..n).map(|i| &out.entries[i * n + k]).sum();
            if !col.is_one() {
                return Err(Error::InvalidAssignment(format!(
                    "column {} sums to {col}",
                    k + 1
                )));
            }
        }
        Ok(out)
    }

    /// `counts[i][o] / total`, where every row and column of `counts` sums to
    /// `total`.
    pub fn from_counts(counts: &[Vec<u64>], total: u64) -> Result<Self> {
        let n = counts.len();
        if n == 0 || total == 0 {
            return Err(Error::InvalidAssignment("empty count matrix".into()));
        }
        for k in 0..n {
            if counts[k].len() != n {
                return Err(Error::InvalidAssignment("ragged count matrix".into()));
            }
            let row: u64 = counts[k].iter().sum();
            let col: u64 = counts.iter().map(|r| r[k]).sum();
            if row != total || col != total {
                return Err(Error::InvalidAssignment(format!(
                    "line {} of the count matrix does not sum to {total}",
                    k + 1
                )));
            }
        }
        let denom = num::BigInt::from(total);
        let entries = counts
            .iter()
            .flatten()
            .map(|&c| Rational::new(num::BigInt::from(c), denom.clone()))
            .collect();
        Ok(Self { n, entries })
    }

    /// Equal-weight average of the given discrete assignments.
    pub fn uniform_mixture(members: &[DiscreteAssignment]) -> Result<Self> {
        let n = members
            .first()
            .ok_or_else(|| Error::InvalidAssignment("empty mixture".into()))?
            .n();
        let mut counts = vec![vec![0u64; n]; n];
        for d in members {
            if d.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: d.n(),
                });
            }
            for (agent, object) in d.objects().iter().enumerate() {
                counts[agent][object.0] += 1;
            }
        }
        Self::from_counts(&counts, members.len() as u64)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, agent: AgentId, object: ObjectId) -> &Rational {
        &self.entries[agent.0 * self.n + object.0]
    }

    pub fn row(&self, agent: AgentId) -> &[Rational] {
        &self.entries[agent.0 * self.n..(agent.0 + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n)
    }

    /// Zero/nonzero pattern, row-major.
    pub fn support(&self) -> Vec<bool> {
        self.entries.iter().map(|e| !e.is_zero()).collect()
    }

    pub fn check_dimension(&self, profile: &PreferenceProfile) -> Result<()> {
        if self.n == profile.n() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: profile.n(),
                found: self.n,
            })
        }
    }
}

impl From<&DiscreteAssignment> for RandomAssignment {
    fn from(d: &DiscreteAssignment) -> Self {
        d.to_random()
    }
}

/// Probability mass `agent` receives on objects it weakly prefers to
/// `object`.
pub fn upper_contour_sum(
    p: &RandomAssignment,
    agent: AgentId,
    object: ObjectId,
    profile: &PreferenceProfile,
) -> Rational {
    let depth = profile.rank(agent, object);
    profile.ranking(agent)[..=depth]
        .iter()
        .map(|&o| p.get(agent, o))
        .sum()
}

/// Cumulative sums of `agent`'s row along its ranking; entry `k` covers the
/// top `k + 1` objects.
pub fn cumulative_row(
    p: &RandomAssignment,
    agent: AgentId,
    profile: &PreferenceProfile,
) -> Vec<Rational> {
    let mut acc = rational::zero();
    profile
        .ranking(agent)
        .iter()
        .map(|&o| {
            acc += p.get(agent, o);
            acc.clone()
        })
        .collect()
}

/// One hop of a trading cycle: `agent` holds `object` with positive
/// probability and strictly prefers the object of the next step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycleStep {
    pub object: ObjectId,
    pub agent: AgentId,
}

/// `o_0, i_0, o_1, i_1, …, o_{k-1}, i_{k-1}`, closing back to `o_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TradingCycle {
    steps: Vec<CycleStep>,
}

impl TradingCycle {
    pub fn new(steps: Vec<CycleStep>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[CycleStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Checks the cycle against the assignment and profile it claims to
    /// certify: at least two steps, distinct objects, positive holdings and a
    /// strict improvement at every hop.
    pub fn validate(&self, p: &RandomAssignment, profile: &PreferenceProfile) -> Result<()> {
        let k = self.steps.len();
        let fail = |msg: String| Err(Error::InvalidAssignment(format!("trading cycle: {msg}")));
        if k < 2 {
            return fail(format!("length {k} < 2"));
        }
        let n = profile.n();
        for (j, step) in self.steps.iter().enumerate() {
            if step.object.0 >= n || step.agent.0 >= n {
                return fail(format!("step {j} out of range"));
            }
            if self.steps[..j].iter().any(|s| s.object == step.object) {
                return fail(format!("object {} repeats", step.object));
            }
            if !p.get(step.agent, step.object).is_positive() {
                return fail(format!(
                    "agent {} holds {} with zero probability",
                    step.agent, step.object
                ));
            }
            let next = self.steps[(j + 1) % k].object;
            if !profile.prefers(step.agent, next, step.object) {
                return fail(format!(
                    "agent {} does not prefer {next} to {}",
                    step.agent, step.object
                ));
            }
        }
        Ok(())
    }
}
