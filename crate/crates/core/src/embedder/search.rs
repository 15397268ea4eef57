//! Budgeted backtracking that extends a partial embedding.

use crate::graph::{Embedding, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchFailure {
    /// The search space was exhausted: no extension exists.
    Infeasible,
    /// The node budget ran out first.
    Budget,
}

struct State<'a> {
    host: &'a Graph,
    order: Vec<usize>,
    /// Placed target neighbours of `order[i]` at its turn.
    anchors: Vec<Vec<usize>>,
    /// Degree `order[i]` needs among placed and to-be-placed vertices.
    need: Vec<usize>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    /// Unused host neighbours of each host vertex.
    free_deg: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl State<'_> {
    /// Candidates for `order[i]`, hardest-to-cover host vertices first.
    fn candidates(&self, i: usize) -> Vec<usize> {
        let anchors = &self.anchors[i];
        let need = self.need[i] - anchors.len();
        let fits = |c: usize| !self.used[c] && self.free_deg[c] >= need;
        let mut out: Vec<usize> = if anchors.is_empty() {
            (0..self.host.n()).filter(|&c| fits(c)).collect()
        } else {
            let images: Vec<usize> = anchors.iter().map(|&a| self.map[a].expect("anchor placed")).collect();
            let pivot = *images.iter().min_by_key(|&&h| self.host.degree(h)).expect("nonempty");
            self.host
                .neighbors(pivot)
                .iter()
                .copied()
                .filter(|&c| fits(c) && images.iter().all(|&h| h == pivot || self.host.has_edge(c, h)))
                .collect()
        };
        out.sort_by_key(|&c| (self.free_deg[c], c));
        out
    }

    fn mark(&mut self, c: usize, used: bool) {
        self.used[c] = used;
        for &x in self.host.neighbors(c) {
            if used {
                self.free_deg[x] -= 1;
            } else {
                self.free_deg[x] += 1;
            }
        }
    }

    fn go(&mut self, i: usize) -> Result<(), SearchFailure> {
        if i == self.order.len() {
            return Ok(());
        }
        let v = self.order[i];
        let mut out_of_budget = false;
        for c in self.candidates(i) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(SearchFailure::Budget);
            }
            self.map[v] = Some(c);
            self.mark(c, true);
            match self.go(i + 1) {
                Ok(()) => return Ok(()),
                Err(SearchFailure::Budget) => out_of_budget = true,
                Err(SearchFailure::Infeasible) => {}
            }
            self.map[v] = None;
            self.mark(c, false);
            if out_of_budget {
                return Err(SearchFailure::Budget);
            }
        }
        Err(SearchFailure::Infeasible)
    }
}

/// Extends `partial` to the vertices `to_place` inside `host`, avoiding host
/// vertices already used by `partial` and those flagged in `forbidden`.
/// Only target edges among mapped vertices and `to_place` are enforced.
/// Vertices are placed most-constrained first; candidates are scanned in
/// ascending order, so the result is deterministic.
pub fn extend_embedding(
    target: &Graph,
    host: &Graph,
    partial: &Embedding,
    to_place: &[usize],
    forbidden: Option<&[bool]>,
    budget: u64,
) -> Result<Embedding, SearchFailure> {
    let n = target.n();
    let mut used = forbidden.map_or_else(|| vec![false; host.n()], <[bool]>::to_vec);
    for (_, h) in partial.pairs() {
        used[h] = true;
    }
    let mut relevant = vec![false; n];
    let mut placed = vec![false; n];
    for v in partial.domain() {
        relevant[v] = true;
        placed[v] = true;
    }
    for &v in to_place {
        relevant[v] = true;
    }
    let mut pending: Vec<usize> = to_place.iter().copied().filter(|&v| !placed[v]).collect();
    pending.sort_unstable();
    pending.dedup();
    let eff = |v: usize| target.neighbors(v).iter().filter(|&&w| relevant[w]).count();

    let mut score: Vec<usize> = vec![0; n];
    for &v in &pending {
        score[v] = target.neighbors(v).iter().filter(|&&w| placed[w]).count();
    }
    let mut order = Vec::with_capacity(pending.len());
    let mut anchors = Vec::with_capacity(pending.len());
    let mut need = Vec::with_capacity(pending.len());
    let mut left = pending;
    while !left.is_empty() {
        let (idx, _) = left
            .iter()
            .enumerate()
            .max_by(|(_, &a), (_, &b)| (score[a], eff(a)).cmp(&(score[b], eff(b))).then(b.cmp(&a)))
            .expect("nonempty");
        let v = left.swap_remove(idx);
        anchors.push(target.neighbors(v).iter().copied().filter(|&w| placed[w]).collect());
        need.push(eff(v));
        order.push(v);
        placed[v] = true;
        for &w in target.neighbors(v) {
            score[w] += 1;
        }
    }

    let free_deg = (0..host.n()).map(|c| host.neighbors(c).iter().filter(|&&x| !used[x]).count()).collect();
    let mut st =
        State { host, order, anchors, need, map: partial.as_slice().to_vec(), used, free_deg, nodes: 0, budget };
    st.go(0)?;
    Ok(Embedding::from_partial(st.map))
}
