use std::collections::VecDeque;

use super::powers::{cycle_power, PathFactorPlan};
use super::TargetError;
use crate::graph::{read_edge_list, Graph, GraphBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorShape {
    Clique,
    Cycle,
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeShape {
    Path,
    /// Breadth-first complete tree: the root has `d` children, every other
    /// internal vertex `d - 1`.
    Bfs,
    /// A spine whose vertices carry pendant legs up to degree `d`.
    Caterpillar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetKind {
    HamPower { k: usize },
    Factor { shape: FactorShape, r: usize },
    PathFactor { k: usize, m: usize, l: usize },
    Tree { d: usize, shape: TreeShape },
    Explicit { graph: Graph, label: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSpec {
    pub kind: TargetKind,
    pub n: usize,
}

impl TargetSpec {
    pub fn new(kind: TargetKind, n: usize) -> Self {
        Self { kind, n }
    }

    pub fn ham_power(k: usize, n: usize) -> Self {
        Self::new(TargetKind::HamPower { k }, n)
    }

    pub fn factor(shape: FactorShape, r: usize, n: usize) -> Self {
        Self::new(TargetKind::Factor { shape, r }, n)
    }

    pub fn explicit(graph: Graph, label: impl Into<String>) -> Self {
        let n = graph.n();
        Self::new(TargetKind::Explicit { graph, label: label.into() }, n)
    }

    /// Parses `ham-power:k=K`, `factor:K5` / `factor:C4` / `factor:P3`,
    /// `path-factor:k=K,m=M,l=L`, `tree:d=D[,shape=path|bfs|caterpillar]`
    /// and `file:<edge-list path>`.
    pub fn parse(s: &str, n: usize) -> Result<Self, TargetError> {
        let bad = |message: String| TargetError::Parse { spec: s.to_string(), message };
        let (name, rest) = s.split_once(':').ok_or_else(|| bad("expected `kind:params`".into()))?;
        if name == "file" {
            let text = std::fs::read_to_string(rest).map_err(|e| bad(format!("reading {rest}: {e}")))?;
            let graph = read_edge_list(&text).map_err(|e| bad(e.to_string()))?;
            if graph.n() != n {
                return Err(bad(format!("file has {} vertices but n = {n}", graph.n())));
            }
            return Ok(Self::explicit(graph, rest));
        }
        if name == "factor" {
            let mut chars = rest.chars();
            let shape = match chars.next() {
                Some('K') => FactorShape::Clique,
                Some('C') => FactorShape::Cycle,
                Some('P') => FactorShape::Path,
                _ => return Err(bad("factor expects K<r>, C<r> or P<r>".into())),
            };
            let r = chars.as_str().parse::<usize>().map_err(|_| bad("factor size".into()))?;
            return Ok(Self::factor(shape, r, n));
        }
        let mut kv = std::collections::BTreeMap::new();
        for item in rest.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {item:?}")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take = |key: &str| -> Result<usize, TargetError> {
            let v = kv.remove(key).ok_or_else(|| bad(format!("missing `{key}`")))?;
            v.parse::<usize>().map_err(|_| bad(format!("`{key}` must be a non-negative integer")))
        };
        let kind = match name {
            "ham-power" => TargetKind::HamPower { k: take("k")? },
            "path-factor" => TargetKind::PathFactor { k: take("k")?, m: take("m")?, l: take("l")? },
            "tree" => {
                let d = take("d")?;
                let shape = match kv.remove("shape").as_deref() {
                    None | Some("bfs") => TreeShape::Bfs,
                    Some("path") => TreeShape::Path,
                    Some("caterpillar") => TreeShape::Caterpillar,
                    Some(other) => return Err(bad(format!("unknown tree shape {other:?}"))),
                };
                TargetKind::Tree { d, shape }
            }
            other => return Err(bad(format!("unknown target kind {other:?}"))),
        };
        if let Some(extra) = kv.keys().next() {
            return Err(bad(format!("unknown key `{extra}`")));
        }
        Ok(Self::new(kind, n))
    }

    /// Canonical string form; `parse(tag(), n)` round-trips except for `file:`.
    pub fn tag(&self) -> String {
        match &self.kind {
            TargetKind::HamPower { k } => format!("ham-power:k={k}"),
            TargetKind::Factor { shape, r } => {
                let c = match shape {
                    FactorShape::Clique => 'K',
                    FactorShape::Cycle => 'C',
                    FactorShape::Path => 'P',
                };
                format!("factor:{c}{r}")
            }
            TargetKind::PathFactor { k, m, l } => format!("path-factor:k={k},m={m},l={l}"),
            TargetKind::Tree { d, shape } => {
                let s = match shape {
                    TreeShape::Path => "path",
                    TreeShape::Bfs => "bfs",
                    TreeShape::Caterpillar => "caterpillar",
                };
                format!("tree:d={d},shape={s}")
            }
            TargetKind::Explicit { label, .. } => format!("file:{label}"),
        }
    }

    /// The factor component `H`, for factor targets.
    pub fn factor_component(&self) -> Option<Graph> {
        match self.kind {
            TargetKind::Factor { shape, r } => Some(match shape {
                FactorShape::Clique => Graph::complete(r),
                FactorShape::Cycle => Graph::cycle(r),
                FactorShape::Path => Graph::path(r),
            }),
            _ => None,
        }
    }

    /// Builds the target in canonical vertex order: cycle order for powers,
    /// contiguous blocks for factors.
    pub fn realize(&self) -> Result<Graph, TargetError> {
        let n = self.n;
        let un = |m: String| Err(TargetError::Unrealizable(m));
        if n == 0 {
            return un("n must be positive".into());
        }
        match &self.kind {
            TargetKind::HamPower { k } => {
                if *k == 0 || n < 3 {
                    return un(format!("ham-power needs k >= 1 and n >= 3 (k = {k}, n = {n})"));
                }
                Ok(cycle_power(n, *k))
            }
            TargetKind::Factor { shape, r } => {
                let min = if *shape == FactorShape::Cycle { 3 } else { 2 };
                if *r < min {
                    return un(format!("factor component needs at least {min} vertices"));
                }
                if !n.is_multiple_of(*r) {
                    return un(format!("{r} does not divide n = {n}"));
                }
                Ok(Graph::disjoint_copies(&self.factor_component().unwrap(), n / r))
            }
            TargetKind::PathFactor { k, m, l } => {
                if m + l > n {
                    return un(format!("m + l = {} exceeds n = {n}", m + l));
                }
                let plan =
                    PathFactorPlan::arithmetic(n, *k, *m, *l).map_err(|e| TargetError::Unrealizable(e.to_string()))?;
                Ok(plan.spanning_factor())
            }
            TargetKind::Tree { d, shape } => {
                if *d < 2 && n > 2 {
                    return un(format!("a spanning tree on {n} vertices needs max degree >= 2"));
                }
                Ok(spanning_tree(n, *d, *shape))
            }
            TargetKind::Explicit { graph, .. } => {
                if graph.n() != n {
                    return un(format!("graph has {} vertices, spec says {n}", graph.n()));
                }
                Ok(graph.clone())
            }
        }
    }
}

fn spanning_tree(n: usize, d: usize, shape: TreeShape) -> Graph {
    if n <= 2 || d < 2 {
        return Graph::path(n);
    }
    let mut b = GraphBuilder::new(n);
    match shape {
        TreeShape::Path => return Graph::path(n),
        TreeShape::Bfs => {
            let mut queue = VecDeque::from([(0usize, d)]);
            let mut next = 1;
            while next < n {
                let (parent, slots) = queue.pop_front().expect("tree has room");
                for _ in 0..slots {
                    if next == n {
                        break;
                    }
                    b.insert(parent, next).unwrap();
                    queue.push_back((next, d - 1));
                    next += 1;
                }
            }
        }
        TreeShape::Caterpillar => {
            let mut spine = 0;
            let mut deg = vec![0usize; n];
            for v in 1..n {
                // the vertex that fills the current spine vertex continues the spine
                b.insert(spine, v).unwrap();
                deg[spine] += 1;
                deg[v] += 1;
                if deg[spine] == d {
                    spine = v;
                }
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn realize_examples() {
        assert_eq!(TargetSpec::ham_power(2, 5).realize().unwrap(), Graph::complete(5));
        let k3 = TargetSpec::factor(FactorShape::Clique, 3, 9).realize().unwrap();
        assert_eq!(k3.edge_count(), 9);
        assert_eq!(k3.components().len(), 3);
        assert!(TargetSpec::factor(FactorShape::Clique, 5, 12).realize().is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "ham-power:k=2",
            "factor:K5",
            "factor:C4",
            "factor:P3",
            "path-factor:k=2,m=20,l=6",
            "tree:d=3,shape=bfs",
            "tree:d=4,shape=caterpillar",
            "tree:d=2,shape=path",
        ] {
            assert_eq!(TargetSpec::parse(s, 60).unwrap().tag(), s);
        }
        assert!(TargetSpec::parse("ham-power:k=2,x=1", 10).is_err());
        assert!(TargetSpec::parse("factor:Q5", 10).is_err());
        assert!(TargetSpec::parse("ham-power", 10).is_err());
        assert!(TargetSpec::parse("path-factor:k=2,m=20", 10).is_err());
    }

    #[test]
    fn file_targets() {
        let dir = std::env::temp_dir().join(format!("perturbed-spec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c5.txt");
        std::fs::write(&path, crate::graph::write_edge_list(&Graph::cycle(5))).unwrap();
        let spec = TargetSpec::parse(&format!("file:{}", path.display()), 5).unwrap();
        assert_eq!(spec.realize().unwrap(), Graph::cycle(5));
        assert!(TargetSpec::parse(&format!("file:{}", path.display()), 6).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn trees_are_spanning_trees_with_bounded_degree() {
        for shape in [TreeShape::Path, TreeShape::Bfs, TreeShape::Caterpillar] {
            for d in 2..=5 {
                for n in [1, 2, 3, 7, 30, 61] {
                    let t = TargetSpec::new(TargetKind::Tree { d, shape }, n).realize().unwrap();
                    assert_eq!(t.n(), n);
                    assert_eq!(t.edge_count(), n - 1);
                    assert_eq!(t.components().len(), 1);
                    assert!(t.max_degree() <= d, "{shape:?} d={d} n={n}");
                }
            }
        }
        let bfs = TargetSpec::new(TargetKind::Tree { d: 3, shape: TreeShape::Bfs }, 10).realize().unwrap();
        assert_eq!(bfs.degree(0), 3);
        assert_eq!(bfs.max_degree(), 3);
    }

    #[test]
    fn path_factor_is_spanning_and_inside_cycle_power() {
        let t = TargetSpec::parse("path-factor:k=2,m=20,l=6", 104).unwrap().realize().unwrap();
        let cyc = cycle_power(104, 2);
        assert!(t.edges().all(|(u, v)| cyc.has_edge(u, v)));
        assert_eq!(t.components().len(), 8);
    }
}
