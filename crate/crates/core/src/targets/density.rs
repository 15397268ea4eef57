//! Exact density parameters of small graphs.
//!
//! * 1-density `m1(H) = max e(S) / (v(S) - 1)` over subgraphs with `v(S) >= 2`;
//! * `gamma(H) = max e(S) / (v(S) - 2)` over subgraphs with `v(S) >= 3`.
//!
//! For a fixed vertex set the induced subgraph has the most edges, so both
//! maxima are taken over vertex subsets. Up to [`EXACT_ENUMERATION_CAP`]
//! vertices every subset is enumerated; beyond that only connected subsets up
//! to a size cap are visited and the report is flagged `bounded`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::Density;

pub const EXACT_ENUMERATION_CAP: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DensityError {
    #[error("{v} vertices exceed the exact enumeration cap {cap} and no bounded size was given")]
    TooLarge { v: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityOptions {
    /// Exact enumeration is used when `v(h) <= max_enum` (clamped to the hard cap).
    pub max_enum: usize,
    /// Size cap for the connected-subset fallback; `None` makes oversize input an error.
    pub bounded_size: Option<usize>,
}

impl Default for DensityOptions {
    fn default() -> Self {
        Self { max_enum: EXACT_ENUMERATION_CAP, bounded_size: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    #[serde(with = "opt_ratio")]
    pub m1: Option<Density>,
    #[serde(with = "opt_ratio")]
    pub gamma: Option<Density>,
    pub m1_witness: Vec<usize>,
    pub gamma_witness: Vec<usize>,
    pub strictly_balanced: bool,
    /// True when only connected subsets up to a size cap were searched.
    pub bounded: bool,
}

mod opt_ratio {
    use super::Density;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Density>, s: S) -> Result<S::Ok, S::Error> {
        r.map(|x| format!("{}/{}", x.numer(), x.denom())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Density>, D::Error> {
        let raw: Option<String> = Option::deserialize(d)?;
        raw.map(|t| {
            let (a, b) = t.split_once('/').ok_or_else(|| serde::de::Error::custom("expected a/b"))?;
            let a = a.parse::<i64>().map_err(serde::de::Error::custom)?;
            let b = b.parse::<i64>().map_err(serde::de::Error::custom)?;
            Ok(Density::new(a, b))
        })
        .transpose()
    }
}

/// Running maximum of `e / (v - offset)` with deterministic tie-breaking:
/// fewer vertices first, then the lexicographically smaller vertex list.
struct RatioMax {
    offset: usize,
    best: Option<(usize, usize, Vec<usize>)>, // (edges, vertices, witness)
}

impl RatioMax {
    fn new(offset: usize) -> Self {
        Self { offset, best: None }
    }

    fn offer(&mut self, e: usize, vertices: &[usize]) {
        let v = vertices.len();
        if v <= self.offset {
            return;
        }
        let better = match &self.best {
            None => true,
            Some((be, bv, bw)) => {
                let lhs = e as u128 * (*bv - self.offset) as u128;
                let rhs = *be as u128 * (v - self.offset) as u128;
                lhs > rhs || (lhs == rhs && (v, vertices) < (*bv, bw.as_slice()))
            }
        };
        if better {
            let mut w = vertices.to_vec();
            w.sort_unstable();
            self.best = Some((e, v, w));
        }
    }

    fn value(&self) -> Option<Density> {
        self.best.as_ref().map(|(e, v, _)| Ratio::new(*e as i64, (*v - self.offset) as i64))
    }

    fn witness(&self) -> Vec<usize> {
        self.best.as_ref().map(|b| b.2.clone()).unwrap_or_default()
    }
}

fn vertices_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn density_report(h: &Graph, opts: DensityOptions) -> Result<DensityReport, DensityError> {
    let v = h.n();
    let cap = opts.max_enum.min(EXACT_ENUMERATION_CAP);
    if v <= cap {
        return Ok(exact_report(h));
    }
    match opts.bounded_size {
        Some(size) => Ok(bounded_report(h, size)),
        None => Err(DensityError::TooLarge { v, cap }),
    }
}

fn exact_report(h: &Graph) -> DensityReport {
    let v = h.n();
    let adj: Vec<u32> = (0..v).map(|u| h.neighbors(u).iter().fold(0u32, |acc, &w| acc | 1 << w)).collect();
    let total = 1usize << v;
    // edges[S] = edges[S - low(S)] + |N(low) & S|
    let mut edges = vec![0u16; total];
    let mut m1 = RatioMax::new(1);
    let mut gamma = RatioMax::new(2);
    let mut m1_value_count = 0usize; // number of subsets attaining the running m1 maximum
    let full_mask = (total - 1) as u32;
    for s in 1..total {
        let s32 = s as u32;
        let low = s32.trailing_zeros() as usize;
        let rest = s & (s - 1);
        edges[s] = edges[rest] + (adj[low] & s32).count_ones() as u16;
        let size = s32.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let e = edges[s] as usize;
        // cheap comparisons before materialising vertex lists
        if let Some((be, bv, _)) = &m1.best {
            let lhs = e as u128 * (*bv - 1) as u128;
            let rhs = *be as u128 * (size - 1) as u128;
            if lhs > rhs {
                m1.offer(e, &vertices_of(s32));
                m1_value_count = 1;
            } else if lhs == rhs {
                m1.offer(e, &vertices_of(s32));
                m1_value_count += 1;
            }
        } else {
            m1.offer(e, &vertices_of(s32));
            m1_value_count = 1;
        }
        if size >= 3 {
            let improves = match &gamma.best {
                None => true,
                Some((be, bv, _)) => e as u128 * (*bv - 2) as u128 >= *be as u128 * (size - 2) as u128,
            };
            if improves {
                gamma.offer(e, &vertices_of(s32));
            }
        }
    }
    // Strictly balanced: the whole graph is the unique maximiser of m1.
    let strictly_balanced = match m1.value() {
        Some(best) if v >= 2 => {
            let whole = Ratio::new(edges[full_mask as usize] as i64, v as i64 - 1);
            whole == best && m1_value_count == 1
        }
        _ => false,
    };
    DensityReport {
        m1: m1.value(),
        gamma: gamma.value(),
        m1_witness: m1.witness(),
        gamma_witness: gamma.witness(),
        strictly_balanced,
        bounded: false,
    }
}

/// Calls `visit(subset, edges_inside)` once for every connected vertex subset
/// of size at most `max_size` (ESU enumeration rooted at the subset's smallest
/// vertex). `visit` returns `false` to prune extensions of the current subset.
pub fn for_each_connected_subset<F>(g: &Graph, max_size: usize, mut visit: F)
where
    F: FnMut(&[usize], usize) -> bool,
{
    let n = g.n();
    let mut in_sub = vec![false; n];
    // number of subset vertices adjacent to each vertex
    let mut touch = vec![0u32; n];
    let mut sub = Vec::with_capacity(max_size);
    for root in 0..n {
        sub.push(root);
        in_sub[root] = true;
        for &w in g.neighbors(root) {
            touch[w] += 1;
        }
        let ext: Vec<usize> = g.neighbors(root).iter().copied().filter(|&w| w > root).collect();
        esu_extend(g, root, max_size, &mut sub, &mut in_sub, &mut touch, ext, 0, &mut visit);
        for &w in g.neighbors(root) {
            touch[w] -= 1;
        }
        in_sub[root] = false;
        sub.pop();
    }
}

#[allow(clippy::too_many_arguments)]
fn esu_extend<F>(
    g: &Graph,
    root: usize,
    max_size: usize,
    sub: &mut Vec<usize>,
    in_sub: &mut [bool],
    touch: &mut [u32],
    mut ext: Vec<usize>,
    edges: usize,
    visit: &mut F,
) where
    F: FnMut(&[usize], usize) -> bool,
{
    if !visit(sub, edges) || sub.len() == max_size {
        return;
    }
    while let Some(w) = ext.pop() {
        // exclusive neighbours of w: not in the subset and not adjacent to it
        let mut next = ext.clone();
        for &x in g.neighbors(w) {
            if x > root && !in_sub[x] && touch[x] == 0 && !ext.contains(&x) {
                next.push(x);
            }
        }
        let added = touch[w] as usize;
        sub.push(w);
        in_sub[w] = true;
        for &x in g.neighbors(w) {
            touch[x] += 1;
        }
        esu_extend(g, root, max_size, sub, in_sub, touch, next, edges + added, visit);
        for &x in g.neighbors(w) {
            touch[x] -= 1;
        }
        in_sub[w] = false;
        sub.pop();
    }
}

fn bounded_report(h: &Graph, max_size: usize) -> DensityReport {
    let mut m1 = RatioMax::new(1);
    let mut gamma = RatioMax::new(2);
    let mut any_connected_triple = false;
    for_each_connected_subset(h, max_size.max(2), |s, e| {
        m1.offer(e, s);
        if s.len() >= 3 {
            any_connected_triple = true;
            gamma.offer(e, s);
        }
        true
    });
    // With no connected triple, gamma comes from one edge plus a spare vertex.
    if !any_connected_triple && h.n() >= 3 {
        let mut spare = None;
        if let Some((a, b)) = h.edges().next() {
            spare = (0..h.n()).find(|&x| x != a && x != b).map(|x| (vec![a, b, x], 1));
        }
        let (w, e) = spare.unwrap_or_else(|| (vec![0, 1, 2], 0));
        gamma.offer(e, &w);
    }
    DensityReport {
        m1: m1.value(),
        gamma: gamma.value(),
        m1_witness: m1.witness(),
        gamma_witness: gamma.witness(),
        strictly_balanced: false,
        bounded: true,
    }
}

/// `(delta + 1) / 2`, the dense/sparse cut-off for maximum degree `delta`.
pub fn dense_threshold(delta: usize) -> Density {
    Ratio::new(delta as i64 + 1, 2)
}

/// Is there a vertex subset `S` with `3 <= |S| <= max_size` and
/// `e(S) > t (|S| - 2)`? Searches connected subsets with an edge-count
/// upper bound; exact whenever the maximiser is connected, which holds for
/// any `t >= 1`.
pub fn exists_dense_subset(h: &Graph, t: Density, max_size: usize) -> Option<Vec<usize>> {
    let (tn, td) = (*t.numer() as i128, *t.denom() as i128);
    let max_size = max_size.min(h.n());
    if max_size < 3 {
        return None;
    }
    let max_deg = h.max_degree();
    let mut found: Option<Vec<usize>> = None;
    for_each_connected_subset(h, max_size, |s, e| {
        if found.is_some() {
            return false;
        }
        let k = s.len();
        if k >= 3 && (e as i128) * td > tn * (k as i128 - 2) {
            found = Some(s.to_vec());
            return false;
        }
        // 2 e(S) <= sum over S of min(deg, |S| - 1); unknown members get max_deg.
        (k.max(3)..=max_size).any(|size| {
            let cap = size - 1;
            let known: usize = s.iter().map(|&x| h.degree(x).min(cap)).sum();
            let twice_ub = known + (size - k) * max_deg.min(cap);
            (twice_ub as i128) * td > 2 * tn * (size as i128 - 2)
        })
    });
    found.map(|mut w| {
        w.sort_unstable();
        w
    })
}

/// Lexicographically smallest connected vertex set `S` of size `s` among the
/// `alive` vertices with `e(S) > (delta + 1)(s - 2) / 2`, assuming maximum
/// degree at most `delta`.
///
/// Such a set satisfies `sum_{v in S} (delta - deg_S(v)) <= 2 delta + 1 - s`,
/// so its degree deficit plus its edge boundary is tiny. Partial sets are
/// pruned when their deficit plus the boundary that cannot be absorbed by
/// the remaining `s - |C|` additions already exceeds that budget.
pub fn smallest_dense_set(g: &Graph, alive: &[bool], delta: usize, s: usize) -> Option<Vec<usize>> {
    let budget = (2 * delta + 1).checked_sub(s)?;
    if s < 3 {
        return None;
    }
    let mut keep: Vec<usize> = (0..g.n()).filter(|&v| alive[v]).collect();
    // peel vertices whose own deficit already exceeds the budget
    loop {
        let sub = g.induced(&keep);
        let next: Vec<usize> = (0..keep.len())
            .filter(|&i| delta.saturating_sub(sub.degree(i).min(s - 1)) <= budget)
            .map(|i| keep[i])
            .collect();
        if next.len() == keep.len() {
            break;
        }
        keep = next;
    }
    if keep.len() < s {
        return None;
    }
    let sub = g.induced(&keep);
    let need = (delta + 1) * (s - 2);
    let mut best: Option<Vec<usize>> = None;
    let mut into_c = vec![0usize; sub.n()];
    let mut in_c = vec![false; sub.n()];
    let mut outside: Vec<usize> = Vec::new();
    for_each_connected_subset(&sub, s, |set, e| {
        let k = set.len();
        if k == s {
            if 2 * e > need {
                let mut cand: Vec<usize> = set.iter().map(|&i| keep[i]).collect();
                cand.sort_unstable();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
            return false;
        }
        for &v in set {
            in_c[v] = true;
        }
        let mut deficit = 0;
        let mut boundary = 0;
        for &v in set {
            deficit += delta.saturating_sub(sub.degree(v));
            for &x in sub.neighbors(v) {
                if !in_c[x] {
                    if into_c[x] == 0 {
                        outside.push(x);
                    }
                    into_c[x] += 1;
                    boundary += 1;
                }
            }
        }
        let mut counts: Vec<usize> = outside.iter().map(|&x| into_c[x]).collect();
        counts.sort_unstable_by(|a, b| b.cmp(a));
        let absorbed: usize = counts.iter().take(s - k).sum();
        for &x in &outside {
            into_c[x] = 0;
        }
        outside.clear();
        for &v in set {
            in_c[v] = false;
        }
        deficit + boundary - absorbed <= budget
    });
    best
}

/// `gamma(h) > (delta + 1) / 2`.
pub fn is_dense(h: &Graph, delta: usize) -> bool {
    if h.n() < 3 {
        return false;
    }
    let t = dense_threshold(delta);
    if h.n() <= EXACT_ENUMERATION_CAP {
        return exact_report(h).gamma.is_some_and(|g| g > t);
    }
    if h.max_degree() <= delta {
        // a dense set with degrees <= delta has fewer than 2 delta + 2 vertices
        let alive = vec![true; h.n()];
        return (3..=2 * delta + 1).any(|s| smallest_dense_set(h, &alive, delta, s).is_some());
    }
    exists_dense_subset(h, t, h.n()).is_some()
}

/// Dense, and every proper subset `S'` with `3 <= |S'| < v(h)` is sparse.
pub fn is_minimally_dense(h: &Graph, delta: usize) -> bool {
    if !is_dense(h, delta) {
        return false;
    }
    let v = h.n();
    if v == 3 {
        return true;
    }
    let t = dense_threshold(delta);
    let (tn, td) = (*t.numer() as i128, *t.denom() as i128);
    if v <= EXACT_ENUMERATION_CAP {
        let adj: Vec<u32> = (0..v).map(|u| h.neighbors(u).iter().fold(0u32, |acc, &w| acc | 1 << w)).collect();
        let full = (1u32 << v) - 1;
        let mut edges = vec![0u16; 1 << v];
        for s in 1..(1usize << v) {
            let s32 = s as u32;
            let low = s32.trailing_zeros() as usize;
            edges[s] = edges[s & (s - 1)] + (adj[low] & s32).count_ones() as u16;
            let size = s32.count_ones() as i128;
            if s32 != full && size >= 3 && edges[s] as i128 * td > tn * (size - 2) {
                return false;
            }
        }
        return true;
    }
    exists_dense_subset(h, t, v - 1).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gnp_sample, Graph};
    use crate::targets::powers::path_power;

    fn r(a: i64, b: i64) -> Density {
        Ratio::new(a, b)
    }

    /// Independent oracle: recompute both maxima by a plain scan with f64.
    fn brute(h: &Graph) -> (Option<f64>, Option<f64>) {
        let v = h.n();
        let (mut m1, mut ga): (Option<f64>, Option<f64>) = (None, None);
        for mask in 1u32..(1u32 << v) {
            let vs: Vec<usize> = (0..v).filter(|i| mask >> i & 1 == 1).collect();
            let e = h.edges_within(&vs) as f64;
            let k = vs.len() as f64;
            if vs.len() >= 2 {
                m1 = Some(m1.map_or(e / (k - 1.0), |x| x.max(e / (k - 1.0))));
            }
            if vs.len() >= 3 {
                ga = Some(ga.map_or(e / (k - 2.0), |x| x.max(e / (k - 2.0))));
            }
        }
        (m1, ga)
    }

    fn to_f(x: Option<Density>) -> Option<f64> {
        x.map(|r| *r.numer() as f64 / *r.denom() as f64)
    }

    #[test]
    fn k6_values() {
        let rep = density_report(&Graph::complete(6), DensityOptions::default()).unwrap();
        assert_eq!(rep.m1, Some(r(3, 1)));
        assert_eq!(rep.gamma, Some(r(15, 4)));
        assert!(rep.strictly_balanced);
        assert_eq!(rep.m1_witness, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn square_of_p5() {
        let rep = density_report(&path_power(5, 2), DensityOptions::default()).unwrap();
        assert_eq!(rep.m1, Some(r(7, 4)));
        assert!(rep.m1.unwrap() < r(2, 1));
    }

    #[test]
    fn single_edge() {
        let rep = density_report(&Graph::complete(2), DensityOptions::default()).unwrap();
        assert_eq!(rep.m1, Some(r(1, 1)));
        assert_eq!(rep.gamma, None);
        assert!(rep.gamma_witness.is_empty());
    }

    #[test]
    fn witnesses_attain_reported_values() {
        for seed in 0..30 {
            let g = gnp_sample(9, 0.45, seed).unwrap();
            let rep = density_report(&g, DensityOptions::default()).unwrap();
            if let Some(m1) = rep.m1 {
                let w = &rep.m1_witness;
                assert_eq!(r(g.edges_within(w) as i64, w.len() as i64 - 1), m1);
            }
            if let Some(ga) = rep.gamma {
                let w = &rep.gamma_witness;
                assert_eq!(r(g.edges_within(w) as i64, w.len() as i64 - 2), ga);
            }
            let (bm, bg) = brute(&g);
            assert_eq!(to_f(rep.m1), bm);
            assert_eq!(to_f(rep.gamma), bg);
        }
    }

    #[test]
    fn oversize_needs_bounded_flag() {
        let g = Graph::cycle(30);
        assert_eq!(density_report(&g, DensityOptions::default()), Err(DensityError::TooLarge { v: 30, cap: 22 }));
        let rep = density_report(&g, DensityOptions { max_enum: 22, bounded_size: Some(8) }).unwrap();
        assert!(rep.bounded);
        // girth 30: paths are the densest subsets
        assert_eq!(rep.m1, Some(r(1, 1)));
        assert_eq!(rep.gamma, Some(r(2, 1)));
    }

    #[test]
    fn bounded_gamma_for_a_matching_uses_two_edges() {
        // perfect matching: gamma = 1 from an edge plus a spare vertex (or two edges)
        let g = Graph::disjoint_copies(&Graph::complete(2), 12);
        let rep = density_report(&g, DensityOptions { max_enum: 22, bounded_size: Some(5) }).unwrap();
        assert_eq!(rep.gamma, Some(r(1, 1)));
        let small = Graph::disjoint_copies(&Graph::complete(2), 3);
        let exact = density_report(&small, DensityOptions::default()).unwrap();
        assert_eq!(exact.gamma, Some(r(1, 1)));
    }

    #[test]
    fn dense_examples() {
        assert!(is_dense(&Graph::complete(5), 5));
        assert!(is_minimally_dense(&Graph::complete(5), 5));
        assert!(!is_dense(&Graph::complete(4), 5));
        assert!(is_dense(&Graph::complete(6), 5));
        assert!(!is_minimally_dense(&Graph::complete(6), 5));
        assert!(!is_dense(&Graph::cycle(8), 5));
        // K6 minus two disjoint edges: 13 edges, no K5 inside
        let g = Graph::from_edges(6, Graph::complete(6).edges().filter(|&e| e != (0, 1) && e != (2, 3))).unwrap();
        assert!(is_minimally_dense(&g, 5));
    }

    #[test]
    fn large_graph_density_search_matches_small_cases() {
        // a K5 hidden in a long cycle is found by the connected search
        let mut b = Graph::cycle(40).to_builder();
        for u in 10..15 {
            for v in u + 1..15 {
                b.insert(u, v).unwrap();
            }
        }
        let g = b.build();
        assert!(is_dense(&g, 5));
        assert!(!is_dense(&g, 6));
        assert!(!is_dense(&Graph::cycle(40), 5));
    }

    #[test]
    fn clique_one_density_is_half_order() {
        for k in 3..=8 {
            let rep = density_report(&Graph::complete(k), DensityOptions::default()).unwrap();
            assert_eq!(rep.m1, Some(r(k as i64, 2)));
        }
    }

    #[test]
    fn smallest_dense_set_matches_brute_force() {
        for seed in 0..40 {
            let g = crate::graph::random_bounded_degree(13, 4, 0.6, seed).unwrap();
            let alive = vec![true; 13];
            for s in 3..=9 {
                let need = 5 * (s - 2);
                let brute = (0u32..1 << 13)
                    .filter(|m| m.count_ones() as usize == s)
                    .map(vertices_of)
                    .filter(|w| 2 * g.edges_within(w) > need && g.induced(w).components().len() == 1)
                    .min();
                assert_eq!(smallest_dense_set(&g, &alive, 4, s), brute, "seed {seed} s {s}");
            }
        }
    }
}
