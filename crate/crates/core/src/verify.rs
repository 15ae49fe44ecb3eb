//! Checks both sides of the RSD characterization per profile, and sweeps
//! whole profile spaces.
//!
//! The left side asks whether the RSD matrix admits a trading cycle. The
//! right side asks whether some ex post efficient assignment is
//! SD-inefficient; that happens exactly when the uniform mixture of all
//! Pareto optimal assignments admits a trading cycle, because every ex post
//! efficient assignment's support is contained in the mixture's support.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::assignment::{RandomAssignment, TradingCycle};
use crate::efficiency::{find_trading_cycle, uniform_po_mixture_with_cap};
use crate::error::Error;
use crate::mechanisms::{rsd_exact_with_cap, EXACT_CAP};
use crate::profile::{PreferenceProfile, ProfileSpace, SWEEP_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremRecord {
    pub profile: PreferenceProfile,
    pub rsd: RandomAssignment,
    pub mixture: RandomAssignment,
    pub lhs_rsd_sd_inefficient: bool,
    pub rhs_expost_sd_inefficient_exists: bool,
    pub agree: bool,
    pub rsd_cycle: Option<TradingCycle>,
    pub mixture_cycle: Option<TradingCycle>,
}

pub fn check_theorem(profile: &PreferenceProfile) -> Result<TheoremRecord, Error> {
    check_theorem_with_cap(profile, EXACT_CAP)
}

pub fn check_theorem_with_cap(profile: &PreferenceProfile, cap: usize) -> Result<TheoremRecord, Error> {
    let rsd = rsd_exact_with_cap(profile, cap)?.assignment;
    let rsd_cycle = find_trading_cycle(&rsd, profile);

    let mixture = uniform_po_mixture_with_cap(profile, cap)?;
    let mixture_cycle = find_trading_cycle(&mixture, profile);

    let lhs = rsd_cycle.is_some();
    let rhs = mixture_cycle.is_some();
    Ok(TheoremRecord {
        profile: profile.clone(),
        rsd,
        mixture,
        lhs_rsd_sd_inefficient: lhs,
        rhs_expost_sd_inefficient_exists: rhs,
        agree: lhs == rhs,
        rsd_cycle,
        mixture_cycle,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub n: usize,
    pub profiles_checked: u64,
    pub disagreements: u64,
    pub rsd_inefficient_count: u64,
    pub elapsed: Duration,
    pub index_range: Range<u64>,
}

impl SweepReport {
    /// One-line summary, e.g. `n=3: 216 profiles, 0 disagreements, ...`.
    pub fn summary(&self) -> String {
        format!(
            "n={}: {} profiles, {} disagreements, {} with SD-inefficient RSD (indices {}..{})",
            self.n,
            self.profiles_checked,
            self.disagreements,
            self.rsd_inefficient_count,
            self.index_range.start,
            self.index_range.end
        )
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Setup(#[from] Error),
    #[error("profile #{index}: {source}")]
    Failed { index: u64, source: Error },
    #[error("theorem disagreement at profile #{index}")]
    Disagreement {
        index: u64,
        record: Box<TheoremRecord>,
    },
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub window: Option<Range<u64>>,
    pub workers: usize,
    /// Largest `n` accepted for the sweep.
    pub cap: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            window: None,
            workers: 1,
            cap: SWEEP_CAP,
        }
    }
}

/// Runs [`check_theorem`] over all profiles of size `n` (or a window of the
/// lexicographic enumeration). Totals do not depend on `workers`. The first
/// disagreement (lowest index) aborts the sweep and is returned in full.
pub fn sweep(n: usize, options: &SweepOptions) -> Result<SweepReport, SweepError> {
    let started = Instant::now();
    let space = ProfileSpace::new(n, options.cap)?;
    let range = options.window.clone().unwrap_or(0..space.len());
    space.window(range.start, range.end)?;

    let workers = options.workers.max(1) as u64;
    let span = range.end - range.start;
    let chunk = span.div_ceil(workers).max(1);
    let first_bad = AtomicU64::new(u64::MAX);

    let partials: Vec<Result<(u64, u64), SweepError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let start = (range.start + w * chunk).min(range.end);
                let end = (start + chunk).min(range.end);
                let space = &space;
                let first_bad = &first_bad;
                scope.spawn(move || sweep_chunk(space, start..end, options.cap.max(EXACT_CAP), first_bad))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });

    let mut checked = 0;
    let mut inefficient = 0;
    let mut failure: Option<SweepError> = None;
    for partial in partials {
        match partial {
            Ok((c, i)) => {
                checked += c;
                inefficient += i;
            }
            // chunks are in index order, so the first error is the lowest
            Err(e) if failure.is_none() => failure = Some(e),
            Err(_) => {}
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(SweepReport {
        n,
        profiles_checked: checked,
        disagreements: 0,
        rsd_inefficient_count: inefficient,
        elapsed: started.elapsed(),
        index_range: range,
    })
}

fn sweep_chunk(
    space: &ProfileSpace,
    range: Range<u64>,
    cap: usize,
    first_bad: &AtomicU64,
) -> Result<(u64, u64), SweepError> {
    let mut checked = 0;
    let mut inefficient = 0;
    for (index, profile) in space.window(range.start, range.end)? {
        if index > first_bad.load(Ordering::Relaxed) {
            break;
        }
        let record =
            check_theorem_with_cap(&profile, cap).map_err(|source| SweepError::Failed { index, source })?;
        if !record.agree {
            first_bad.fetch_min(index, Ordering::Relaxed);
            return Err(SweepError::Disagreement {
                index,
                record: Box::new(record),
            });
        }
        checked += 1;
        inefficient += u64::from(record.lhs_rsd_sd_inefficient);
    }
    Ok((checked, inefficient))
}

/// A profile whose RSD assignment is SD-inefficient, with the witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub profile: PreferenceProfile,
    pub rsd: RandomAssignment,
    pub cycle: TradingCycle,
}

/// A uniformly random strict profile of size `n`.
pub fn random_profile<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PreferenceProfile {
    let rankings = (0..n)
        .map(|_| {
            let mut r: Vec<usize> = (0..n).collect();
            r.shuffle(rng);
            r
        })
        .collect();
    PreferenceProfile::new(rankings).expect("shuffled rankings are permutations")
}

/// Samples `trials` uniform profiles (ChaCha8 seeded with `seed`) and keeps
/// those where exact RSD admits a trading cycle.
pub fn mine_counterexamples(n: usize, trials: u64, seed: u64) -> Result<Vec<Counterexample>, Error> {
    mine_counterexamples_with_cap(n, trials, seed, EXACT_CAP)
}

pub fn mine_counterexamples_with_cap(
    n: usize,
    trials: u64,
    seed: u64,
    cap: usize,
) -> Result<Vec<Counterexample>, Error> {
    if n == 0 {
        return Err(Error::EmptyProfile);
    }
    if n > cap {
        return Err(Error::CapExceeded {
            what: "exact RSD",
            n,
            cap,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::new();
    for _ in 0..trials {
        let profile = random_profile(n, &mut rng);
        let rsd = rsd_exact_with_cap(&profile, cap)?.assignment;
        if let Some(cycle) = find_trading_cycle(&rsd, &profile) {
            found.push(Counterexample { profile, rsd, cycle });
        }
    }
    Ok(found)
}
