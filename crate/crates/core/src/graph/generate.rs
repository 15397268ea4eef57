use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphBuilder, GraphError};
use crate::rng::{rng_from_seed, Rng};

/// Below this edge probability `gnp_sample` jumps between present pairs with
/// geometric skips instead of flipping a coin per pair.
const GEOMETRIC_SKIP_BELOW: f64 = 0.1;

const HOST_RESAMPLE_CAP: usize = 100;

/// Samples the binomial random graph `G(n, p)`.
pub fn gnp_sample(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = rng_from_seed(seed);
    gnp_with(n, p, &mut rng)
}

pub(crate) fn gnp_with(n: usize, p: f64, rng: &mut Rng) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::NoVertices);
    }
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(GraphError::InvalidProbability(p));
    }
    if p == 0.0 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut b = GraphBuilder::new(n);
    if p < GEOMETRIC_SKIP_BELOW {
        // Batagelj-Brandes: walk the lower triangle (v, w), w < v, row by row.
        let log_q = (1.0 - p).ln();
        let mut v: usize = 1;
        let mut w: i64 = -1;
        while v < n {
            let r: f64 = rng.gen::<f64>();
            let skip = ((1.0 - r).ln() / log_q).floor();
            w += 1 + skip as i64;
            while v < n && w >= v as i64 {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                b.insert(v, w as usize).expect("in range");
            }
        }
    } else {
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    b.insert(u, v).expect("in range");
                }
            }
        }
    }
    Ok(b.build())
}

/// Random graph with maximum degree at most `delta`: pairs are visited in a
/// seeded random order and each is kept with probability `p` when both
/// endpoints still have room.
pub fn random_bounded_degree(n: usize, delta: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    use rand::seq::SliceRandom;
    if n == 0 {
        return Err(GraphError::NoVertices);
    }
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(GraphError::InvalidProbability(p));
    }
    let mut rng = rng_from_seed(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let mut deg = vec![0usize; n];
    let mut b = GraphBuilder::new(n);
    for (u, v) in pairs {
        if deg[u] < delta && deg[v] < delta && rng.gen::<f64>() < p {
            b.insert(u, v).expect("in range");
            deg[u] += 1;
            deg[v] += 1;
        }
    }
    Ok(b.build())
}

/// `ceil(alpha * n)` with a small tolerance so that e.g. `0.3 * 60` is 18.
pub fn min_degree_target(alpha: f64, n: usize) -> usize {
    let x = alpha * n as f64;
    (x - 1e-9).ceil().max(0.0) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HostKind {
    /// `K_{a, n-a}` with `a = ceil(alpha n)`: the extremal host with no odd cycles.
    CompleteBipartiteUnbalanced,
    /// `G(n, min(1, 3 alpha))` resampled until the minimum degree is met.
    RandomMinDegree,
    /// Disjoint near-equal cliques; `parts = None` picks the most parts that
    /// still meet the degree requirement.
    CliqueUnion {
        parts: Option<usize>,
    },
    Complete,
    /// No edges: the pure random model.
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HostSpec {
    pub kind: HostKind,
    pub n: usize,
    pub alpha: f64,
}

impl HostSpec {
    pub fn new(kind: HostKind, n: usize, alpha: f64) -> Self {
        Self { kind, n, alpha }
    }

    /// Short tag used in CSV rows, e.g. `bipartite:alpha=0.3`.
    pub fn tag(&self) -> String {
        match self.kind {
            HostKind::Complete => "complete".into(),
            HostKind::Empty => "empty".into(),
            HostKind::CompleteBipartiteUnbalanced => format!("bipartite:alpha={}", self.alpha),
            HostKind::RandomMinDegree => format!("random:alpha={}", self.alpha),
            HostKind::CliqueUnion { parts: None } => format!("cliques:alpha={}", self.alpha),
            HostKind::CliqueUnion { parts: Some(c) } => {
                format!("cliques:alpha={},parts={c}", self.alpha)
            }
        }
    }

    /// Parses `complete`, `empty`, `bipartite:alpha=A`, `random:alpha=A`,
    /// `cliques:alpha=A[,parts=C]`.
    pub fn parse(s: &str, n: usize) -> Result<Self, GraphError> {
        let bad = |m: &str| GraphError::InfeasibleHost(format!("cannot parse host spec {s:?}: {m}"));
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut alpha = None;
        let mut parts = None;
        for kv in rest.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match k.trim() {
                "alpha" => alpha = Some(v.trim().parse::<f64>().map_err(|_| bad("alpha"))?),
                "parts" => parts = Some(v.trim().parse::<usize>().map_err(|_| bad("parts"))?),
                other => return Err(bad(&format!("unknown key {other}"))),
            }
        }
        let kind = match name.trim() {
            "complete" => HostKind::Complete,
            "empty" => HostKind::Empty,
            "bipartite" => HostKind::CompleteBipartiteUnbalanced,
            "random" => HostKind::RandomMinDegree,
            "cliques" => HostKind::CliqueUnion { parts },
            other => return Err(bad(&format!("unknown host kind {other}"))),
        };
        let alpha = match kind {
            HostKind::Complete => alpha.unwrap_or(1.0),
            HostKind::Empty => alpha.unwrap_or(0.0),
            _ => alpha.ok_or_else(|| bad("missing alpha"))?,
        };
        Ok(Self { kind, n, alpha })
    }
}

/// Builds the deterministic host `G_alpha` for `spec`. Only the random
/// min-degree family consumes randomness.
pub fn make_host(spec: &HostSpec, seed: u64) -> Result<Graph, GraphError> {
    let n = spec.n;
    if n == 0 {
        return Err(GraphError::NoVertices);
    }
    let infeasible = |m: String| Err(GraphError::InfeasibleHost(m));
    if spec.kind == HostKind::Empty {
        return Ok(Graph::empty(n));
    }
    if !(spec.alpha > 0.0 && spec.alpha <= 1.0) {
        return infeasible(format!("alpha = {} must lie in (0, 1]", spec.alpha));
    }
    let need = min_degree_target(spec.alpha, n);
    let g = match spec.kind {
        HostKind::Complete => {
            return Ok(Graph::complete(n));
        }
        HostKind::Empty => unreachable!(),
        HostKind::CompleteBipartiteUnbalanced => {
            let a = need;
            if a > n - a {
                return infeasible(format!(
                    "bipartite part ceil(alpha n) = {a} exceeds the other part n - {a} = {}",
                    n - a
                ));
            }
            Graph::complete_bipartite(a, n - a)
        }
        HostKind::CliqueUnion { parts } => {
            let parts = match parts {
                Some(0) => return infeasible("clique union needs at least one part".into()),
                Some(c) => c,
                None => (n / (need + 1)).max(1),
            };
            if parts > n {
                return infeasible(format!("{parts} cliques on {n} vertices"));
            }
            let smallest = n / parts;
            if smallest < need + 1 {
                return infeasible(format!(
                    "clique union min degree {} < ceil(alpha n) = {need}",
                    smallest.saturating_sub(1)
                ));
            }
            let mut b = GraphBuilder::new(n);
            let mut start = 0;
            for i in 0..parts {
                let size = smallest + usize::from(i < n % parts);
                for u in start..start + size {
                    for v in u + 1..start + size {
                        b.insert(u, v).expect("in range");
                    }
                }
                start += size;
            }
            b.build()
        }
        HostKind::RandomMinDegree => {
            if need > n - 1 {
                return infeasible(format!("min degree {need} impossible on {n} vertices"));
            }
            let q = (3.0 * spec.alpha).min(1.0);
            let mut rng = rng_from_seed(seed);
            let mut found = None;
            for _ in 0..HOST_RESAMPLE_CAP {
                let g = gnp_with(n, q, &mut rng)?;
                if g.min_degree() >= need {
                    found = Some(g);
                    break;
                }
            }
            match found {
                Some(g) => g,
                None => {
                    return infeasible(format!(
                        "no sample of G({n}, {q}) reached min degree {need} in {HOST_RESAMPLE_CAP} tries"
                    ))
                }
            }
        }
    };
    debug_assert!(g.min_degree() >= need);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes() {
        assert_eq!(gnp_sample(5, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(gnp_sample(5, 1.0, 1).unwrap().edge_count(), 10);
        assert_eq!(gnp_sample(0, 0.5, 1), Err(GraphError::NoVertices));
        assert_eq!(gnp_sample(4, 1.5, 1), Err(GraphError::InvalidProbability(1.5)));
        assert!(gnp_sample(4, -0.1, 1).is_err());
    }

    #[test]
    fn gnp_reproducible() {
        for seed in 0..20 {
            assert_eq!(gnp_sample(50, 0.05, seed).unwrap(), gnp_sample(50, 0.05, seed).unwrap());
            assert_eq!(gnp_sample(50, 0.4, seed).unwrap(), gnp_sample(50, 0.4, seed).unwrap());
        }
    }

    #[test]
    fn gnp_mean_edge_count_matches_binomial() {
        // Binomial(19900, 0.1): mean 1990, variance 1791.
        let pairs = 200.0 * 199.0 / 2.0;
        let p = 0.1;
        let trials = 500;
        let counts: Vec<f64> = (0..trials).map(|s| gnp_sample(200, p, s).unwrap().edge_count() as f64).collect();
        let mean = counts.iter().sum::<f64>() / trials as f64;
        let se = (pairs * p * (1.0 - p) / trials as f64).sqrt();
        assert!((mean - pairs * p).abs() < 3.0 * se, "mean {mean}");
        // the skip sampler must agree as well
        let p = 0.02;
        let counts: Vec<f64> = (0..trials).map(|s| gnp_sample(200, p, s).unwrap().edge_count() as f64).collect();
        let mean = counts.iter().sum::<f64>() / trials as f64;
        let se = (pairs * p * (1.0 - p) / trials as f64).sqrt();
        assert!((mean - pairs * p).abs() < 3.0 * se, "skip mean {mean}");
    }

    #[test]
    fn bipartite_host() {
        let g = make_host(&HostSpec::new(HostKind::CompleteBipartiteUnbalanced, 10, 0.2), 0).unwrap();
        assert_eq!(g, Graph::complete_bipartite(2, 8));
        assert_eq!(g.min_degree(), 2);
        assert!(make_host(&HostSpec::new(HostKind::CompleteBipartiteUnbalanced, 10, 0.6), 0).is_err());
    }

    #[test]
    fn clique_union_degree_arithmetic() {
        let four = HostKind::CliqueUnion { parts: Some(4) };
        let err = make_host(&HostSpec::new(four, 12, 0.25), 0).unwrap_err();
        assert!(err.to_string().contains("min degree 2"), "{err}");
        let g = make_host(&HostSpec::new(four, 12, 1.0 / 6.0), 0).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.min_degree(), 2);
        assert_eq!(g.components().len(), 4);
        let auto = make_host(&HostSpec::new(HostKind::CliqueUnion { parts: None }, 12, 0.25), 0).unwrap();
        assert!(auto.min_degree() >= 3);
    }

    #[test]
    fn random_min_degree_host() {
        for seed in 0..10 {
            let g = make_host(&HostSpec::new(HostKind::RandomMinDegree, 100, 0.3), seed).unwrap();
            assert!(g.min_degree() >= 30);
        }
    }

    #[test]
    fn host_spec_parsing() {
        let h = HostSpec::parse("bipartite:alpha=0.34", 30).unwrap();
        assert_eq!(h.kind, HostKind::CompleteBipartiteUnbalanced);
        assert_eq!(h.tag(), "bipartite:alpha=0.34");
        assert_eq!(HostSpec::parse("complete", 5).unwrap().kind, HostKind::Complete);
        assert_eq!(
            HostSpec::parse("cliques:alpha=0.25,parts=4", 12).unwrap().kind,
            HostKind::CliqueUnion { parts: Some(4) }
        );
        assert!(HostSpec::parse("random", 10).is_err());
        assert!(HostSpec::parse("weird:alpha=0.1", 10).is_err());
    }
}
