//! Canonical forms and isomorphism for small graphs.
//!
//! The canonical form is the lexicographically smallest upper-triangle
//! adjacency code over all labellings that respect a colour refinement of the
//! vertices; refinement is label-invariant, so the code is an invariant.

use crate::graph::{Graph, GraphBuilder};

/// Iterated degree refinement. Returns colour classes as a stable ordered
/// partition: vertices with the same final signature share a cell, and cells
/// are ordered by signature.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut colour: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| colour[w]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
        let before = {
            let mut c = colour.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        colour = next;
        if distinct.len() == before {
            return colour;
        }
    }
}

struct Canon<'a> {
    g: &'a Graph,
    colour: Vec<usize>,
    order: Vec<usize>, // chosen vertex for each position
    used: Vec<bool>,
    code: Vec<bool>,
    best: Option<(Vec<bool>, Vec<usize>)>,
}

impl Canon<'_> {
    fn search(&mut self) {
        let pos = self.order.len();
        let n = self.g.n();
        if pos == n {
            if self.best.as_ref().is_none_or(|(b, _)| self.code < *b) {
                self.best = Some((self.code.clone(), self.order.clone()));
            }
            return;
        }
        // the next position must take a vertex of the smallest remaining colour
        let want = (0..n).filter(|&v| !self.used[v]).map(|v| self.colour[v]).min().unwrap();
        for v in 0..n {
            if self.used[v] || self.colour[v] != want {
                continue;
            }
            let mark = self.code.len();
            for &u in &self.order {
                self.code.push(!self.g.has_edge(u, v));
            }
            // code bits are "non-edge" flags, so smaller codes put edges first
            let prune = match &self.best {
                Some((b, _)) => self.code.as_slice() > &b[..self.code.len()],
                None => false,
            };
            if !prune {
                self.order.push(v);
                self.used[v] = true;
                self.search();
                self.used[v] = false;
                self.order.pop();
            }
            self.code.truncate(mark);
        }
    }
}

/// Canonical relabelling: returns `(canonical graph, order)` where `order[i]`
/// is the original vertex placed at position `i`.
pub fn canonical_form(g: &Graph) -> (Graph, Vec<usize>) {
    let n = g.n();
    let mut c = Canon {
        g,
        colour: refine(g),
        order: Vec::with_capacity(n),
        used: vec![false; n],
        code: Vec::new(),
        best: None,
    };
    c.search();
    let order = c.best.map(|b| b.1).unwrap_or_default();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut b = GraphBuilder::new(n);
    for (u, v) in g.edges() {
        b.insert(pos[u], pos[v]).unwrap();
    }
    (b.build(), order)
}

/// Backtracking isomorphism test, independent of [`canonical_form`]. Returns
/// a bijection `a -> b` if one exists.
pub fn isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    let n = a.n();
    if n != b.n() || a.edge_count() != b.edge_count() {
        return None;
    }
    let mut da: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(a: &Graph, b: &Graph, v: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if v == a.n() {
            return true;
        }
        for x in 0..b.n() {
            if used[x] || a.degree(v) != b.degree(x) {
                continue;
            }
            if (0..v).all(|u| a.has_edge(u, v) == b.has_edge(map[u], x)) {
                map[v] = x;
                used[x] = true;
                if go(a, b, v + 1, map, used) {
                    return true;
                }
                used[x] = false;
            }
        }
        false
    }
    go(a, b, 0, &mut map, &mut used).then_some(map)
}
