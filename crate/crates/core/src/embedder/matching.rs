//! Rainbow matchings: one edge from each hypergraph, pairwise disjoint.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchingOptions {
    pub node_budget: u64,
    pub greedy_restarts: usize,
    pub seed: u64,
}

impl Default for MatchingOptions {
    fn default() -> Self {
        Self { node_budget: 100_000, greedy_restarts: 50, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowSelection {
    /// Index of the chosen edge in each system.
    pub choice: Vec<usize>,
    /// Found by the exact search rather than the greedy fallback.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingFailure {
    #[error("system {0} has no edges")]
    Empty(usize),
    #[error("no rainbow matching found (exhaustive: {exhaustive}); blocking systems {blocking:?}")]
    Blocked { blocking: Vec<usize>, exhaustive: bool },
}

struct Exact<'a> {
    systems: &'a [Vec<Vec<usize>>],
    used: Vec<bool>,
    choice: Vec<Option<usize>>,
    nodes: u64,
    budget: u64,
    blocking: Option<Vec<usize>>,
}

#[derive(PartialEq)]
enum Step {
    Found,
    Dead,
    Budget,
}

fn free(used: &[bool], e: &[usize]) -> bool {
    e.iter().all(|&x| !used[x])
}

/// The dead system plus every chosen system whose edge blocks one of its edges.
fn blocking_set(systems: &[Vec<Vec<usize>>], choice: &[Option<usize>], dead: usize) -> Vec<usize> {
    let hit: HashSet<usize> = systems[dead].iter().flatten().copied().collect();
    let mut out: Vec<usize> = choice
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.map(|c| (i, c)))
        .filter(|&(i, c)| systems[i][c].iter().any(|x| hit.contains(x)))
        .map(|(i, _)| i)
        .collect();
    out.push(dead);
    out.sort_unstable();
    out
}

impl Exact<'_> {
    /// Picks the open system with the fewest available edges.
    fn go(&mut self) -> Step {
        let mut best: Option<(usize, usize)> = None;
        for (i, sys) in self.systems.iter().enumerate() {
            if self.choice[i].is_some() {
                continue;
            }
            let avail = sys.iter().filter(|e| free(&self.used, e)).count();
            if avail == 0 {
                if self.blocking.is_none() {
                    self.blocking = Some(blocking_set(self.systems, &self.choice, i));
                }
                return Step::Dead;
            }
            if best.is_none_or(|(_, a)| avail < a) {
                best = Some((i, avail));
            }
        }
        let Some((i, _)) = best else { return Step::Found };
        for (c, e) in self.systems[i].iter().enumerate() {
            if !free(&self.used, e) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::Budget;
            }
            e.iter().for_each(|&x| self.used[x] = true);
            self.choice[i] = Some(c);
            let r = self.go();
            if r != Step::Dead {
                return r;
            }
            self.choice[i] = None;
            e.iter().for_each(|&x| self.used[x] = false);
        }
        Step::Dead
    }
}

fn greedy(systems: &[Vec<Vec<usize>>], universe: usize, opts: &MatchingOptions) -> Result<Vec<usize>, Vec<usize>> {
    let mut rng = rng_from_seed(opts.seed);
    let mut last = Vec::new();
    for _ in 0..opts.greedy_restarts {
        let mut used = vec![false; universe];
        let mut choice: Vec<Option<usize>> = vec![None; systems.len()];
        let mut dead = None;
        for _ in 0..systems.len() {
            let mut open: Vec<(usize, Vec<usize>)> = (0..systems.len())
                .filter(|&i| choice[i].is_none())
                .map(|i| (i, (0..systems[i].len()).filter(|&c| free(&used, &systems[i][c])).collect()))
                .collect();
            open.shuffle(&mut rng);
            let (i, avail) = open.into_iter().min_by_key(|(_, a)| a.len()).expect("open system");
            if avail.is_empty() {
                dead = Some(i);
                break;
            }
            let c = avail[rng.gen_range(0..avail.len())];
            systems[i][c].iter().for_each(|&x| used[x] = true);
            choice[i] = Some(c);
        }
        match dead {
            None => return Ok(choice.into_iter().map(|c| c.expect("all chosen")).collect()),
            Some(i) => last = blocking_set(systems, &choice, i),
        }
    }
    Err(last)
}

/// Exact most-constrained-first backtracking under a node budget, then a
/// randomized greedy with restarts. Edges are vertex lists over `0..`.
pub fn rainbow_matching(
    systems: &[Vec<Vec<usize>>],
    opts: &MatchingOptions,
) -> Result<RainbowSelection, MatchingFailure> {
    if let Some(i) = systems.iter().position(Vec::is_empty) {
        return Err(MatchingFailure::Empty(i));
    }
    let universe = systems.iter().flatten().flatten().max().map_or(0, |&m| m + 1);
    let mut ex = Exact {
        systems,
        used: vec![false; universe],
        choice: vec![None; systems.len()],
        nodes: 0,
        budget: opts.node_budget,
        blocking: None,
    };
    match ex.go() {
        Step::Found => Ok(RainbowSelection {
            choice: ex.choice.into_iter().map(|c| c.expect("all chosen")).collect(),
            exact: true,
        }),
        Step::Dead => Err(MatchingFailure::Blocked { blocking: ex.blocking.unwrap_or_default(), exhaustive: true }),
        Step::Budget => match greedy(systems, universe, opts) {
            Ok(choice) => Ok(RainbowSelection { choice, exact: false }),
            Err(blocking) => Err(MatchingFailure::Blocked {
                blocking: if blocking.is_empty() { ex.blocking.unwrap_or_default() } else { blocking },
                exhaustive: false,
            }),
        },
    }
}

/// Structural check: one edge per system, pairwise disjoint.
pub fn is_rainbow(systems: &[Vec<Vec<usize>>], choice: &[usize]) -> bool {
    if choice.len() != systems.len() {
        return false;
    }
    let mut seen = HashSet::new();
    systems.iter().zip(choice).all(|(s, &c)| c < s.len() && s[c].iter().all(|&x| seen.insert(x)))
}

pub const HALL_MAX_SYSTEMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum HallVerdict {
    Pass,
    /// `subset` has a union whose maximum matching is at most `s(|subset| - 1)`.
    Violation {
        subset: Vec<usize>,
        matching_size: usize,
        bound: usize,
        witness: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HallError {
    #[error("{0} systems exceed the cap of {HALL_MAX_SYSTEMS}")]
    TooManySystems(usize),
}

/// Branch and bound for a matching of size `> stop` (or a maximum one).
fn max_matching(edges: &[Vec<usize>], universe: usize, stop: usize) -> Vec<Vec<usize>> {
    fn rec(
        edges: &[Vec<usize>],
        i: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        best: &mut Vec<usize>,
        stop: usize,
    ) -> bool {
        if cur.len() > best.len() {
            *best = cur.clone();
            if best.len() > stop {
                return true;
            }
        }
        if i == edges.len() || cur.len() + (edges.len() - i) <= best.len() {
            return false;
        }
        if free(used, &edges[i]) {
            edges[i].iter().for_each(|&x| used[x] = true);
            cur.push(i);
            let done = rec(edges, i + 1, used, cur, best, stop);
            cur.pop();
            edges[i].iter().for_each(|&x| used[x] = false);
            if done {
                return true;
            }
        }
        rec(edges, i + 1, used, cur, best, stop)
    }
    let mut best = Vec::new();
    rec(edges, 0, &mut vec![false; universe], &mut Vec::new(), &mut best, stop);
    best.into_iter().map(|i| edges[i].clone()).collect()
}

/// Tests the Hall-type condition on every nonempty subset: the union of the
/// chosen systems must contain a matching with more than `s(|I| - 1)` edges.
/// Subsets are scanned by size, then lexicographically.
pub fn hall_condition_check(systems: &[Vec<Vec<usize>>], s: usize) -> Result<HallVerdict, HallError> {
    let t = systems.len();
    if t > HALL_MAX_SYSTEMS {
        return Err(HallError::TooManySystems(t));
    }
    let universe = systems.iter().flatten().flatten().max().map_or(0, |&m| m + 1);
    let mut masks: Vec<u32> = (1..1u32 << t).collect();
    masks.sort_by_key(|m| (m.count_ones(), std::cmp::Reverse(m.reverse_bits())));
    for mask in masks {
        let subset: Vec<usize> = (0..t).filter(|i| mask >> i & 1 == 1).collect();
        let mut union: Vec<Vec<usize>> = Vec::new();
        let mut seen = HashSet::new();
        for &i in &subset {
            for e in &systems[i] {
                let mut e = e.clone();
                e.sort_unstable();
                if seen.insert(e.clone()) {
                    union.push(e);
                }
            }
        }
        let bound = s * (subset.len() - 1);
        let m = max_matching(&union, universe, bound);
        if m.len() <= bound {
            return Ok(HallVerdict::Violation { subset, matching_size: m.len(), bound, witness: m });
        }
    }
    Ok(HallVerdict::Pass)
}
