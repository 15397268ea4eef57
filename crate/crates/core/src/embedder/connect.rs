//! Connection hypergraphs: for every site left open by round 1, the sets of
//! reservoir vertices that can host it in the auxiliary instance.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::absorption::AuxiliaryInstance;
use crate::graph::{Embedding, Graph};
use crate::rng::{derive_seed, rng_from_seed, Rng};
use crate::targets::PathFactorPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SiteKind {
    Connector { k: usize, l: usize, j: usize },
    DenseSpot { class: usize },
}

/// Unembedded target vertices filled together, in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Site {
    pub kind: SiteKind,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperEdge {
    /// Reservoir vertices used, as host labels in `[n]`, ascending.
    pub set: Vec<usize>,
    /// Auxiliary image (a shadow `w + n`) of each site vertex, in site order.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionHypergraph {
    pub site: Site,
    pub uniformity: usize,
    pub edges: Vec<HyperEdge>,
    /// Enumeration stopped at the edge cap or the node budget.
    pub truncated: bool,
}

/// What the site vertices must connect to: the copy `partial` (images in
/// `[n]`), the auxiliary instance and the completion round on `[2n]`.
#[derive(Clone, Copy)]
pub struct ConnectionContext<'a> {
    pub target: &'a Graph,
    pub partial: &'a Embedding,
    pub aux: &'a AuxiliaryInstance,
    pub g2: &'a Graph,
}

impl ConnectionContext<'_> {
    fn linked(&self, a: usize, b: usize) -> bool {
        self.aux.g_aux.has_edge(a, b) || self.g2.has_edge(a, b)
    }

    /// Re-checks one edge from scratch: distinct images inside the right
    /// `B` sets and every target edge at the site present in `aux ∪ g2`.
    pub fn check_edge(&self, site: &Site, e: &HyperEdge) -> bool {
        let n = self.aux.n;
        if e.witness.len() != site.vertices.len() {
            return false;
        }
        let mut set: Vec<usize> = e.witness.iter().map(|&c| c.wrapping_sub(n)).collect();
        set.sort_unstable();
        if set != e.set || set.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        let image =
            |y: usize| site.vertices.iter().position(|&x| x == y).map(|i| e.witness[i]).or_else(|| self.partial.get(y));
        site.vertices.iter().zip(&e.witness).all(|(&v, &c)| {
            self.aux.b_set(v).is_some_and(|b| b.binary_search(&c).is_ok())
                && self.target.neighbors(v).iter().all(|&y| image(y).is_some_and(|h| self.linked(c, h)))
        })
    }
}

struct Enumerator<'a> {
    ctx: ConnectionContext<'a>,
    vertices: &'a [usize],
    /// `earlier[i]`: positions `< i` of site neighbours of `vertices[i]`.
    earlier: Vec<Vec<usize>>,
    /// `fixed[i]`: images of copy neighbours of `vertices[i]`.
    fixed: Vec<Vec<usize>>,
    assign: Vec<usize>,
    taken: HashSet<usize>,
    seen: HashSet<Vec<usize>>,
    edges: Vec<HyperEdge>,
    cap: usize,
    nodes: u64,
    budget: u64,
    stopped: bool,
    /// Sampling mode: shuffled candidates, stop at the first completion.
    probe: Option<Rng>,
    hit: bool,
}

impl Enumerator<'_> {
    fn go(&mut self, i: usize) {
        if self.stopped {
            return;
        }
        if i == self.vertices.len() {
            let n = self.ctx.aux.n;
            let mut set: Vec<usize> = self.assign.iter().map(|&c| c - n).collect();
            set.sort_unstable();
            if self.seen.insert(set.clone()) {
                self.edges.push(HyperEdge { set, witness: self.assign.clone() });
                if self.edges.len() >= self.cap {
                    self.stopped = true;
                }
            }
            self.hit = true;
            return;
        }
        let v = self.vertices[i];
        let Some(b) = self.ctx.aux.b_set(v) else { return };
        let mut b = b.to_vec();
        if let Some(rng) = self.probe.as_mut() {
            b.shuffle(rng);
        }
        for c in b {
            self.nodes += 1;
            if self.nodes > self.budget {
                self.stopped = true;
                return;
            }
            if self.taken.contains(&c)
                || !self.fixed[i].iter().all(|&h| self.ctx.linked(c, h))
                || !self.earlier[i].iter().all(|&q| self.ctx.linked(c, self.assign[q]))
            {
                continue;
            }
            self.taken.insert(c);
            self.assign.push(c);
            self.go(i + 1);
            self.assign.pop();
            self.taken.remove(&c);
            if self.stopped || (self.hit && self.probe.is_some()) {
                return;
            }
        }
    }
}

/// Enumerates, for each site, distinct-vertex assignments inside the `B`
/// sets that realise every target edge at the site in `aux ∪ g2`, keeping
/// one witness per vertex set. Sites with at most `cap` sets are listed
/// exactly in ascending order; larger ones are sampled by randomized probes
/// (seeded by `seed` and the site index) so that the kept sets spread over
/// the reservoir instead of sharing a lexicographic prefix. `node_budget`
/// bounds the work per site.
pub fn build_connection_hypergraphs(
    ctx: ConnectionContext<'_>,
    sites: &[Site],
    cap: usize,
    node_budget: u64,
    seed: u64,
) -> Vec<ConnectionHypergraph> {
    sites
        .iter()
        .enumerate()
        .map(|(idx, site)| {
            let vs = &site.vertices;
            let pos = |y: usize| vs.iter().position(|&x| x == y);
            let earlier: Vec<Vec<usize>> = (0..vs.len())
                .map(|i| ctx.target.neighbors(vs[i]).iter().filter_map(|&y| pos(y).filter(|&q| q < i)).collect())
                .collect();
            let fixed: Vec<Vec<usize>> = vs
                .iter()
                .map(|&v| {
                    ctx.target
                        .neighbors(v)
                        .iter()
                        .filter(|&&y| pos(y).is_none())
                        .filter_map(|&y| ctx.partial.get(y))
                        .collect()
                })
                .collect();
            let mut en = Enumerator {
                ctx,
                vertices: vs,
                earlier,
                fixed,
                assign: Vec::with_capacity(vs.len()),
                taken: HashSet::new(),
                seen: HashSet::new(),
                edges: Vec::new(),
                cap: cap.saturating_add(1),
                nodes: 0,
                budget: node_budget,
                stopped: cap == 0,
                probe: None,
                hit: false,
            };
            en.go(0);
            let complete = !en.stopped;
            let budget_left = node_budget.saturating_sub(en.nodes);
            if !complete && cap > 0 {
                // too many sets to list: sample instead
                en.edges.clear();
                en.seen.clear();
                en.cap = cap;
                en.nodes = 0;
                en.budget = budget_left.max(node_budget / 2);
                en.stopped = false;
                en.probe = Some(rng_from_seed(derive_seed(seed, idx as u64)));
                let mut misses = 0;
                while !en.stopped && misses < 4 * cap {
                    let before = en.edges.len();
                    en.hit = false;
                    en.go(0);
                    if !en.hit {
                        break;
                    }
                    misses += usize::from(en.edges.len() == before);
                }
            }
            ConnectionHypergraph { site: site.clone(), uniformity: vs.len(), edges: en.edges, truncated: !complete }
        })
        .collect()
}

/// One site per connector run, ordered `w_1..w_j` then `w_l..w_{j+1}`.
pub fn connector_sites(plan: &PathFactorPlan) -> Vec<Site> {
    plan.runs()
        .into_iter()
        .map(|r| {
            let mut vertices: Vec<usize> = (r.start..r.start + plan.j).collect();
            vertices.extend((r.start + plan.j..r.end).rev());
            Site { kind: SiteKind::Connector { k: plan.k, l: plan.l, j: plan.j }, vertices }
        })
        .collect()
}

/// A dense spot as a site, ordered so each vertex follows as many of its
/// spot neighbours as possible.
pub fn spot_site(target: &Graph, class: usize, members: &[usize]) -> Site {
    let mut left: Vec<usize> = members.to_vec();
    left.sort_unstable();
    let mut vertices = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let score = |v: usize| vertices.iter().filter(|&&x| target.has_edge(v, x)).count();
        let best =
            (0..left.len()).max_by(|&a, &b| score(left[a]).cmp(&score(left[b])).then(b.cmp(&a))).expect("nonempty");
        vertices.push(left.remove(best));
    }
    Site { kind: SiteKind::DenseSpot { class }, vertices }
}
