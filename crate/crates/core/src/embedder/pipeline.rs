//! The end-to-end pipeline: round-1 almost-spanning embedding, reservoirs,
//! completion round, rainbow matching and switching.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::connect::{build_connection_hypergraphs, connector_sites, spot_site, ConnectionContext};
use super::matching::{rainbow_matching, MatchingFailure, MatchingOptions, RainbowSelection};
use super::search::{extend_embedding, SearchFailure};
use super::{EmbedConfig, EmbedError, RoundSchedule};
use crate::absorption::{build_auxiliary, build_reservoirs, resolve_switching, SwitchPlan};
use crate::graph::{gnp_sample, is_embedding, make_host, Embedding, Graph, GraphBuilder, HostSpec};
use crate::rng::{derive_seed, rng_from_seed};
use crate::targets::{suitable_family, two_independent_set, FamilyKind, SuitableFamily, TargetKind, TargetSpec};

const HOST_STREAM: u64 = 0;
const ROUND_STREAM: u64 = 1;
const PERMUTATION_STREAM: u64 = 1 << 20;
const COMPLETION_STREAM: u64 = 1 << 21;
const MATCHING_STREAM: u64 = 1 << 22;
const SITE_STREAM: u64 = 1 << 23;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    /// No member of the family was found in round 1.
    Round1,
    /// No rainbow matching over the connection hypergraphs.
    Hall,
    /// Anything else, e.g. a reservoir too small for the open vertices.
    Other,
}

impl Stage {
    pub fn tag(self) -> &'static str {
        match self {
            Stage::Round1 => "round1",
            Stage::Hall => "hall",
            Stage::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Outcome {
    Success { embedding: Embedding },
    Failure { stage: Stage, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Round1Mode {
    /// Only the random rounds; the copy is then relabelled uniformly.
    Random,
    /// `G_alpha` together with the random rounds.
    HostAssisted,
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub outcome: Outcome,
    pub timings: Vec<(&'static str, Duration)>,
    pub schedule: RoundSchedule,
    pub family: &'static str,
    pub mode: Option<Round1Mode>,
    /// Target vertices left for completion after round 1.
    pub open_vertices: usize,
    pub switch_plan: Option<SwitchPlan>,
    pub matching: Option<RainbowSelection>,
    /// `G_alpha` together with every round sampled so far (the completion
    /// round projected to `[n]`).
    pub union: Graph,
}

/// Deterministic summary of a run (no timings).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    #[serde(flatten)]
    pub outcome: Outcome,
    pub family: String,
    pub mode: Option<Round1Mode>,
    pub open_vertices: usize,
    pub schedule: RoundSchedule,
    pub matching: Option<Vec<usize>>,
    pub union_edges: usize,
}

impl PipelineResult {
    pub fn is_success(&self) -> bool {
        matches!(self.outcome, Outcome::Success { .. })
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        match &self.outcome {
            Outcome::Success { embedding } => Some(embedding),
            Outcome::Failure { .. } => None,
        }
    }

    pub fn failure_stage(&self) -> Option<Stage> {
        match &self.outcome {
            Outcome::Success { .. } => None,
            Outcome::Failure { stage, .. } => Some(*stage),
        }
    }

    pub fn report(&self) -> PipelineReport {
        PipelineReport {
            outcome: self.outcome.clone(),
            family: self.family.into(),
            mode: self.mode,
            open_vertices: self.open_vertices,
            schedule: self.schedule.clone(),
            matching: self.matching.as_ref().map(|m| m.choice.clone()),
            union_edges: self.union.edge_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlmostSpanning {
    pub embedding: Embedding,
    /// Dense spots left for completion, as `(class, members)`.
    pub open_spots: Vec<(usize, Vec<usize>)>,
}

fn search_reason(what: &str, e: SearchFailure) -> String {
    match e {
        SearchFailure::Infeasible => format!("{what}: no copy exists"),
        SearchFailure::Budget => format!("{what}: search budget exhausted"),
    }
}

/// Embeds a member of `family`: the core into `rounds[0]`, then the spots of
/// class `h` into `rounds[h + 1]` together with their edges to everything
/// already placed, leaving at most the class slack unembedded.
pub fn embed_almost_spanning(
    family: &SuitableFamily,
    target: &Graph,
    rounds: &[&Graph],
    budget: u64,
) -> Result<AlmostSpanning, String> {
    let n = target.n();
    let first = rounds.first().ok_or("no round graphs")?;
    let embedding = extend_embedding(target, first, &Embedding::empty(n), &family.core, None, budget)
        .map_err(|e| search_reason("core", e))?;
    let mut out = AlmostSpanning { embedding, open_spots: Vec::new() };
    if let FamilyKind::Decomposed { decomposition, budgets } = &family.kind {
        if rounds.len() < decomposition.classes.len() + 1 {
            return Err(format!("{} classes but {} rounds", decomposition.classes.len(), rounds.len()));
        }
        for (h, class) in decomposition.classes.iter().enumerate() {
            let mut open = 0;
            for m in &class.members {
                match extend_embedding(target, rounds[h + 1], &out.embedding, m, None, budget) {
                    Ok(e) => out.embedding = e,
                    Err(_) => {
                        open += 1;
                        out.open_spots.push((h, m.clone()));
                    }
                }
            }
            if open > budgets[h] {
                return Err(format!("class {h}: {open} spots left open, slack is {}", budgets[h]));
            }
        }
    }
    Ok(out)
}

/// Edges `uw` such that `{u, w+n}`, `{u+n, w}` or `{u+n, w+n}` is an edge of
/// the doubled round.
pub fn project_second_round(g2: &Graph, n: usize) -> Graph {
    let mut b = GraphBuilder::new(n);
    for (a, c) in g2.edges() {
        if a < n && c < n {
            continue;
        }
        let (u, w) = (a % n, c % n);
        if u != w {
            b.insert(u, w).expect("in range");
        }
    }
    b.build()
}

fn union_of<'a>(graphs: impl IntoIterator<Item = &'a Graph>, n: usize) -> Graph {
    let mut b = GraphBuilder::new(n);
    for g in graphs {
        for (u, w) in g.edges() {
            b.insert(u, w).expect("same vertex set");
        }
    }
    b.build()
}

fn choose_family(spec: &TargetSpec, target: &Graph, cfg: &EmbedConfig) -> Result<SuitableFamily, EmbedError> {
    let n = target.n();
    if cfg.delta > 0 && cfg.delta < target.max_degree() {
        return Err(EmbedError::Config(format!(
            "delta = {} is below the target's maximum degree {}",
            cfg.delta,
            target.max_degree()
        )));
    }
    let l = match (cfg.l, &spec.kind) {
        (0, TargetKind::HamPower { k }) => 2 * k + 2,
        (l, _) => l,
    };
    let delta = (cfg.delta > 0).then_some(cfg.delta);
    Ok(suitable_family(spec, target, cfg.epsilon_op, (cfg.m, l), delta)
        .unwrap_or_else(|_| SuitableFamily::whole(n, cfg.epsilon_op)))
}

/// Runs the whole pipeline for one trial. Stage failures are reported in
/// the outcome; an assembled map that fails verification is an error.
pub fn embed_perturbed(
    target: &TargetSpec,
    host: &HostSpec,
    p: f64,
    cfg: &EmbedConfig,
    seed: u64,
) -> Result<PipelineResult, EmbedError> {
    let clock = Instant::now();
    let f = target.realize()?;
    let n = f.n();
    if host.n != n {
        return Err(EmbedError::Config(format!("host has {} vertices, target {n}", host.n)));
    }
    let g_alpha = make_host(host, derive_seed(seed, HOST_STREAM))?;
    let family = choose_family(target, &f, cfg)?;
    let schedule = match &family.kind {
        FamilyKind::Decomposed { decomposition, .. } if !decomposition.classes.is_empty() => {
            RoundSchedule::new(p, n, decomposition.classes.len(), cfg)?
        }
        FamilyKind::PowerPlan(_) => RoundSchedule::new(p, n, 0, cfg)?,
        // nothing is left for completion
        _ => RoundSchedule::single(p, n)?,
    };
    let mut rounds = schedule
        .base_rounds()
        .iter()
        .enumerate()
        .map(|(i, r)| gnp_sample(n, r.prob, derive_seed(seed, ROUND_STREAM + i as u64)))
        .collect::<Result<Vec<Graph>, _>>()?;
    let mut res = PipelineResult {
        outcome: Outcome::Failure { stage: Stage::Other, reason: "not run".into() },
        timings: vec![("setup", clock.elapsed())],
        schedule: schedule.clone(),
        family: family.tag(),
        mode: None,
        open_vertices: 0,
        switch_plan: None,
        matching: None,
        union: Graph::empty(n),
    };
    let fail = |mut res: PipelineResult, stage: Stage, reason: String, union: Graph| {
        res.outcome = Outcome::Failure { stage, reason };
        res.union = union;
        Ok(res)
    };

    // round 1
    let clock = Instant::now();
    let refs: Vec<&Graph> = rounds.iter().collect();
    let almost = match embed_almost_spanning(&family, &f, &refs, cfg.search_budget) {
        Ok(mut a) => {
            // relabel so that every copy of the member is equally likely
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng_from_seed(derive_seed(seed, PERMUTATION_STREAM)));
            a.embedding = Embedding::from_partial(a.embedding.as_slice().iter().map(|h| h.map(|h| perm[h])).collect());
            for r in rounds.iter_mut() {
                *r = r.relabel(&perm);
            }
            res.mode = Some(Round1Mode::Random);
            Ok(a)
        }
        Err(e) if cfg.host_assist => {
            let assisted: Vec<Graph> = rounds.iter().map(|r| union_of([r, &g_alpha], n)).collect();
            let refs: Vec<&Graph> = assisted.iter().collect();
            res.mode = Some(Round1Mode::HostAssisted);
            embed_almost_spanning(&family, &f, &refs, cfg.search_budget)
                .map_err(|e2| format!("random rounds: {e}; with host: {e2}"))
        }
        Err(e) => Err(e),
    };
    res.timings.push(("round1", clock.elapsed()));
    let base_union = union_of(std::iter::once(&g_alpha).chain(&rounds), n);
    let almost = match almost {
        Ok(a) => a,
        Err(reason) => return fail(res, Stage::Round1, reason, base_union),
    };
    let fhat = almost.embedding;
    let z0: Vec<usize> = (0..n).filter(|&v| fhat.get(v).is_none()).collect();
    res.open_vertices = z0.len();
    if z0.is_empty() {
        is_embedding(&f, &base_union, &fhat).map_err(|v| EmbedError::Internal(v.to_string()))?;
        res.outcome = Outcome::Success { embedding: fhat };
        res.union = base_union;
        return Ok(res);
    }

    // reservoirs and the doubled instance
    let clock = Instant::now();
    let eligible: Vec<usize> =
        (0..n).filter(|&v| fhat.get(v).is_some() && f.neighbors(v).iter().all(|&y| fhat.get(y).is_some())).collect();
    let w_star = two_independent_set(&f, &eligible);
    if w_star.len() < z0.len() {
        let reason = format!("reservoir of {} vertices for {} open vertices", w_star.len(), z0.len());
        return fail(res, Stage::Other, reason, base_union);
    }
    let internal = |e: crate::absorption::AbsorptionError| EmbedError::Internal(e.to_string());
    let reservoirs = build_reservoirs(&g_alpha, &f, &fhat, &w_star).map_err(internal)?;
    let aux = build_auxiliary(&g_alpha, &f, &fhat, &reservoirs, &z0).map_err(internal)?;
    let q2 = schedule
        .completion()
        .map(|r| r.prob)
        .ok_or_else(|| EmbedError::Internal("open vertices without a completion round".into()))?;
    let g2 = gnp_sample(2 * n, q2, derive_seed(seed, COMPLETION_STREAM))?;
    let full_union = union_of([&base_union, &project_second_round(&g2, n)], n);
    let sites = match &family.kind {
        FamilyKind::PowerPlan(plan) => connector_sites(plan),
        FamilyKind::Decomposed { .. } => almost.open_spots.iter().map(|(h, m)| spot_site(&f, *h, m)).collect(),
        FamilyKind::Whole => Vec::new(),
    };
    let mut covered: Vec<usize> = sites.iter().flat_map(|s| s.vertices.iter().copied()).collect();
    covered.sort_unstable();
    if covered != z0 {
        return Err(EmbedError::Internal("connection sites do not partition the open vertices".into()));
    }
    let ctx = ConnectionContext { target: &f, partial: &fhat, aux: &aux, g2: &g2 };
    let hypergraphs = build_connection_hypergraphs(
        ctx,
        &sites,
        cfg.max_edges_per_site,
        cfg.site_budget,
        derive_seed(seed, SITE_STREAM),
    );
    res.timings.push(("connect", clock.elapsed()));

    // rainbow matching
    let clock = Instant::now();
    let systems: Vec<Vec<Vec<usize>>> =
        hypergraphs.iter().map(|h| h.edges.iter().map(|e| e.set.clone()).collect()).collect();
    let opts = MatchingOptions {
        node_budget: cfg.matching_budget,
        greedy_restarts: cfg.greedy_restarts,
        seed: derive_seed(seed, MATCHING_STREAM),
    };
    let selection = rainbow_matching(&systems, &opts);
    res.timings.push(("matching", clock.elapsed()));
    let selection = match selection {
        Ok(s) => s,
        Err(e) => {
            let reason = match &e {
                MatchingFailure::Empty(i) => format!("no candidates for site {:?}", sites[*i].vertices),
                MatchingFailure::Blocked { .. } => e.to_string(),
            };
            return fail(res, Stage::Hall, reason, full_union);
        }
    };

    // assemble, switch and verify
    let clock = Instant::now();
    let mut g_prime = fhat.clone();
    for (h, &c) in hypergraphs.iter().zip(&selection.choice) {
        for (&v, &img) in h.site.vertices.iter().zip(&h.edges[c].witness) {
            g_prime.set(v, img);
        }
    }
    let (g, plan) = resolve_switching(&aux, &f, &g_prime, &fhat).map_err(internal)?;
    is_embedding(&f, &full_union, &g).map_err(|v| EmbedError::Internal(format!("assembled map: {v}")))?;
    res.timings.push(("assemble", clock.elapsed()));
    res.outcome = Outcome::Success { embedding: g };
    res.switch_plan = Some(plan);
    res.matching = Some(selection);
    res.union = full_union;
    Ok(res)
}
