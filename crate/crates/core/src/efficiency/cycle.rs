use num::Signed;

use crate::assignment::{CycleStep, RandomAssignment, TradingCycle};
use crate::profile::{AgentId, ObjectId, PreferenceProfile};

/// Searches for a trading cycle in `p`.
///
/// Nodes are objects. There is an edge `o → o'` when some agent holds `o`
/// with positive probability and strictly prefers `o'`; the lowest such
/// agent witnesses the edge. Depth-first search from objects in ascending
/// order returns the first cycle met, so results are deterministic.
pub fn find_trading_cycle(p: &RandomAssignment, profile: &PreferenceProfile) -> Option<TradingCycle> {
    let support: Vec<bool> = p.rows().flatten().map(|e| e.is_positive()).collect();
    cycle_in_support(&support, profile)
}

/// SD-efficient iff no trading cycle exists.
pub fn is_sd_efficient(p: &RandomAssignment, profile: &PreferenceProfile) -> bool {
    find_trading_cycle(p, profile).is_none()
}

/// `support` is row-major: `support[i * n + o]` iff agent `i` holds `o`
/// with positive probability.
pub(crate) fn cycle_in_support(support: &[bool], profile: &PreferenceProfile) -> Option<TradingCycle> {
    let n = profile.n();
    // witness[o][o'] = lowest agent holding o who prefers o'
    let mut witness = vec![vec![None; n]; n];
    for o in 0..n {
        for i in (0..n).rev() {
            if !support[i * n + o] {
                continue;
            }
            let agent = AgentId(i);
            for &better in &profile.ranking(agent)[..profile.rank(agent, ObjectId(o))] {
                witness[o][better.0] = Some(agent);
            }
        }
    }

    let mut search = Search {
        witness: &witness,
        state: vec![State::Fresh; n],
        path: Vec::with_capacity(n),
        path_agents: Vec::with_capacity(n),
    };
    (0..n).find_map(|start| match search.state[start] {
        State::Fresh => search.visit(start),
        _ => None,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    OnPath,
    Done,
}

struct Search<'a> {
    witness: &'a [Vec<Option<AgentId>>],
    state: Vec<State>,
    path: Vec<usize>,
    // path_agents[k] witnesses path[k] → path[k + 1]
    path_agents: Vec<AgentId>,
}

impl Search<'_> {
    fn visit(&mut self, object: usize) -> Option<TradingCycle> {
        self.state[object] = State::OnPath;
        self.path.push(object);
        for next in 0..self.witness.len() {
            let Some(agent) = self.witness[object][next] else {
                continue;
            };
            match self.state[next] {
                State::Done => {}
                State::OnPath => {
                    let from = self.path.iter().position(|&o| o == next).expect("on path");
                    let steps = (from..self.path.len())
                        .map(|k| CycleStep {
                            object: ObjectId(self.path[k]),
                            agent: self.path_agents.get(k).copied().unwrap_or(agent),
                        })
                        .collect();
                    return Some(TradingCycle::new(steps));
                }
                State::Fresh => {
                    self.path_agents.push(agent);
                    if let Some(cycle) = self.visit(next) {
                        return Some(cycle);
                    }
                    self.path_agents.pop();
                }
            }
        }
        self.path.pop();
        self.state[object] = State::Done;
        None
    }
}
