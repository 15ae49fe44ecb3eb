//! Agents, objects and strict preference profiles.
//!
//! Indices are zero-based internally. Everything that leaves the crate
//! (profile files, reports) uses one-based agent labels and the object names
//! carried by the profile, `o1 … on` by default.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on `n` for exhaustive profile sweeps.
pub const SWEEP_CAP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(pub usize);

impl AgentId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl ObjectId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0 + 1)
    }
}

/// `n` agents, each with a strict ranking of the same `n` objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceProfile {
    rankings: Vec<Vec<ObjectId>>,
    // ranks[agent][object] = position in that agent's ranking, 0 = best
    ranks: Vec<Vec<usize>>,
    names: Vec<String>,
}

impl PreferenceProfile {
    /// Builds a profile from zero-based rankings with default object names.
    pub fn new(rankings: Vec<Vec<usize>>) -> Result<Self> {
        let n = rankings.len();
        Self::with_names(rankings, default_names(n))
    }

    pub fn with_names(rankings: Vec<Vec<usize>>, names: Vec<String>) -> Result<Self> {
        let n = rankings.len();
        if n == 0 {
            return Err(Error::EmptyProfile);
        }
        if names.len() != n {
            return Err(Error::NonSquare {
                agents: n,
                objects: names.len(),
            });
        }
        let mut ranks = vec![vec![usize::MAX; n]; n];
        for (agent, ranking) in rankings.iter().enumerate() {
            if ranking.len() != n {
                return Err(Error::NonSquare {
                    agents: n,
                    objects: ranking.len(),
                });
            }
            for (pos, &object) in ranking.iter().enumerate() {
                if object >= n {
                    return Err(Error::InvalidRanking(format!(
                        "agent {} ranks object index {object} outside 0..{n}",
                        agent + 1
                    )));
                }
                if ranks[agent][object] != usize::MAX {
                    return Err(Error::DuplicateObject {
                        agent: agent + 1,
                        object: names[object].clone(),
                    });
                }
                ranks[agent][object] = pos;
            }
        }
        let rankings = rankings
            .into_iter()
            .map(|r| r.into_iter().map(ObjectId).collect())
            .collect();
        Ok(Self {
            rankings,
            ranks,
            names,
        })
    }

    pub fn n(&self) -> usize {
        self.rankings.len()
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> {
        (0..self.n()).map(AgentId)
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.n()).map(ObjectId)
    }

    /// Agent's ranking, most preferred first.
    pub fn ranking(&self, agent: AgentId) -> &[ObjectId] {
        &self.rankings[agent.0]
    }

    /// Position of `object` in `agent`'s ranking (0 = top choice).
    pub fn rank(&self, agent: AgentId, object: ObjectId) -> usize {
        self.ranks[agent.0][object.0]
    }

    /// True iff `agent` strictly prefers `a` to `b`.
    pub fn prefers(&self, agent: AgentId, a: ObjectId, b: ObjectId) -> bool {
        self.rank(agent, a) < self.rank(agent, b)
    }

    pub fn object_name(&self, object: ObjectId) -> &str {
        &self.names[object.0]
    }

    pub fn object_names(&self) -> &[String] {
        &self.names
    }

    /// Returns the profile obtained by renaming agents: agent `i` of the new
    /// profile is agent `relabel[i]` of this one.
    pub fn permute_agents(&self, relabel: &[usize]) -> Result<Self> {
        let rankings = relabel
            .iter()
            .map(|&a| self.rankings[a].iter().map(|o| o.0).collect())
            .collect();
        Self::with_names(rankings, self.names.clone())
    }

    /// Returns the profile obtained by renaming objects: object `o` becomes
    /// object `relabel[o]`. Names keep their default form.
    pub fn permute_objects(&self, relabel: &[usize]) -> Result<Self> {
        let rankings = self
            .rankings
            .iter()
            .map(|r| r.iter().map(|o| relabel[o.0]).collect())
            .collect();
        Self::new(rankings)
    }
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("o{k}")).collect()
}

/// Parses the profile file format: one agent per line, object names in
/// decreasing preference, separated by whitespace and/or commas. Blank lines
/// and lines starting with `#` are skipped.
///
/// If the tokens are exactly `o1 … on`, `ok` maps to object `k`. Otherwise
/// names are numbered in order of first appearance.
pub fn parse_profile(text: &str) -> Result<PreferenceProfile> {
    let rows: Vec<Vec<&str>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .collect()
        })
        .collect();
    let n = rows.len();
    if n == 0 {
        return Err(Error::EmptyProfile);
    }
    let width = rows[0].len();
    for (agent, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::RaggedRows {
                agent: agent + 1,
                expected: width,
                found: row.len(),
            });
        }
    }
    if width != n {
        return Err(Error::NonSquare {
            agents: n,
            objects: width,
        });
    }

    let mut order: Vec<&str> = Vec::new();
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (agent, row) in rows.iter().enumerate() {
        let mut in_row = HashMap::new();
        for &token in row {
            if in_row.insert(token, ()).is_some() {
                return Err(Error::DuplicateObject {
                    agent: agent + 1,
                    object: token.to_string(),
                });
            }
            if !seen.contains_key(token) {
                seen.insert(token, order.len());
                order.push(token);
            }
        }
    }
    if order.len() != n {
        // Some row names an object another row lacks.
        for (agent, row) in rows.iter().enumerate() {
            if let Some(missing) = order.iter().find(|name| !row.contains(name)) {
                return Err(Error::MissingObject {
                    agent: agent + 1,
                    object: missing.to_string(),
                });
            }
        }
    }

    let canonical = order.iter().all(|t| canonical_index(t, n).is_some());
    let index_of = |token: &str| -> usize {
        if canonical {
            canonical_index(token, n).unwrap_or(0)
        } else {
            seen[token]
        }
    };
    let names = if canonical {
        default_names(n)
    } else {
        order.iter().map(|s| s.to_string()).collect()
    };
    let rankings = rows
        .iter()
        .map(|row| row.iter().map(|t| index_of(t)).collect())
        .collect();
    PreferenceProfile::with_names(rankings, names)
}

fn canonical_index(token: &str, n: usize) -> Option<usize> {
    let digits = token.strip_prefix('o')?;
    if digits.starts_with('0') {
        return None;
    }
    let k: usize = digits.parse().ok()?;
    (1..=n).contains(&k).then(|| k - 1)
}

/// Inverse of [`parse_profile`]: one line per agent, names space-separated.
pub fn format_profile(profile: &PreferenceProfile) -> String {
    let mut out = String::new();
    for agent in profile.agents() {
        let line: Vec<&str> = profile
            .ranking(agent)
            .iter()
            .map(|&o| profile.object_name(o))
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Advances `a` to its lexicographic successor; false once `a` is the last
/// permutation (left unchanged).
pub fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let Some(i) = (0..a.len() - 1).rfind(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = a.iter().rposition(|x| x > &a[i]).expect("successor exists");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    while next_permutation(&mut current) {
        out.push(current.clone());
    }
    out
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The space of all `(n!)^n` strict profiles, indexed lexicographically by
/// the tuple of ranking indices (agent 1 most significant, each ranking
/// indexed by its lexicographic rank among the `n!` permutations).
#[derive(Debug, Clone)]
pub struct ProfileSpace {
    n: usize,
    rankings: Vec<Vec<usize>>,
    total: u64,
}

/// `all_profiles` with the default [`SWEEP_CAP`].
pub fn all_profiles(n: usize) -> Result<ProfileSpace> {
    ProfileSpace::new(n, SWEEP_CAP)
}

impl ProfileSpace {
    pub fn new(n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyProfile);
        }
        if n > cap {
            return Err(Error::CapExceeded {
                what: "profile sweep",
                n,
                cap,
            });
        }
        let per_agent = factorial(n);
        let total = (0..n)
            .try_fold(1u64, |acc, _| acc.checked_mul(per_agent))
            .ok_or(Error::SpaceTooLarge(n))?;
        Ok(Self {
            n,
            rankings: permutations(n),
            total,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    fn digits(&self, mut index: u64) -> Vec<usize> {
        let base = self.rankings.len() as u64;
        let mut digits = vec![0; self.n];
        for d in digits.iter_mut().rev() {
            *d = (index % base) as usize;
            index /= base;
        }
        digits
    }

    fn build(&self, digits: &[usize]) -> PreferenceProfile {
        let rankings = digits.iter().map(|&d| self.rankings[d].clone()).collect();
        PreferenceProfile::new(rankings).expect("enumerated rankings are permutations")
    }

    pub fn profile_at(&self, index: u64) -> Option<PreferenceProfile> {
        (index < self.total).then(|| self.build(&self.digits(index)))
    }

    pub fn iter(&self) -> ProfileIter<'_> {
        self.window(0, self.total).expect("full window is valid")
    }

    /// Profiles with indices in `start..end`.
    pub fn window(&self, start: u64, end: u64) -> Result<ProfileIter<'_>> {
        if start > end || end > self.total {
            return Err(Error::InvalidWindow {
                start,
                end,
                total: self.total,
            });
        }
        Ok(ProfileIter {
            space: self,
            digits: self.digits(start.min(self.total.saturating_sub(1))),
            next: start,
            end,
        })
    }
}

pub struct ProfileIter<'a> {
    space: &'a ProfileSpace,
    digits: Vec<usize>,
    next: u64,
    end: u64,
}

impl Iterator for ProfileIter<'_> {
    type Item = (u64, PreferenceProfile);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let item = (self.next, self.space.build(&self.digits));
        self.next += 1;
        let base = self.space.rankings.len();
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < base {
                break;
            }
            *d = 0;
        }
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}
