use crate::graph::Graph;

/// Greedy maximal 2-independent subset of `eligible`: members are pairwise at
/// distance at least 3 in `f`. Vertices are tried in ascending order.
pub fn two_independent_set(f: &Graph, eligible: &[usize]) -> Vec<usize> {
    let mut order = eligible.to_vec();
    order.sort_unstable();
    order.dedup();
    let mut blocked = vec![false; f.n()];
    let mut out = Vec::new();
    for v in order {
        if blocked[v] {
            continue;
        }
        out.push(v);
        blocked[v] = true;
        for &a in f.neighbors(v) {
            blocked[a] = true;
            for &b in f.neighbors(a) {
                blocked[b] = true;
            }
        }
    }
    out
}

/// No edge inside `set` and no two members with a common neighbour.
pub fn is_two_independent(f: &Graph, set: &[usize]) -> bool {
    let mut owner = vec![usize::MAX; f.n()];
    for &w in set {
        if owner[w] != usize::MAX {
            return false;
        }
        owner[w] = w;
    }
    let mut seen = vec![usize::MAX; f.n()];
    for &w in set {
        for &a in f.neighbors(w) {
            if owner[a] != usize::MAX {
                return false;
            }
            if seen[a] != usize::MAX && seen[a] != w {
                return false;
            }
            seen[a] = w;
        }
    }
    true
}
