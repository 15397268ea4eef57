//! Exhaustive containment oracle. It keeps its own adjacency matrices and
//! plain backtracking, sharing no search code with the pipeline.

use super::HarnessError;
use crate::graph::Graph;
use crate::targets::{TargetKind, TargetSpec};

pub const ORACLE_MAX_N: usize = 10;
pub const ORACLE_MAX_FACTOR_N: usize = 14;

struct Matrix(Vec<Vec<bool>>);

impl Matrix {
    fn of(g: &Graph) -> Self {
        let mut m = vec![vec![false; g.n()]; g.n()];
        for (u, v) in g.edges() {
            m[u][v] = true;
            m[v][u] = true;
        }
        Self(m)
    }

    fn n(&self) -> usize {
        self.0.len()
    }
}

/// Is there an injective map of `h` onto host vertices among `pool` that
/// keeps every edge? Tries every injection, vertex by vertex.
fn injects(h: &Matrix, g: &Matrix, pool: &[usize]) -> bool {
    fn go(h: &Matrix, g: &Matrix, pool: &[usize], img: &mut Vec<usize>, taken: &mut [bool]) -> bool {
        let v = img.len();
        if v == h.n() {
            return true;
        }
        for (i, &c) in pool.iter().enumerate() {
            if taken[i] || (0..v).any(|u| h.0[u][v] && !g.0[img[u]][c]) {
                continue;
            }
            taken[i] = true;
            img.push(c);
            if go(h, g, pool, img, taken) {
                return true;
            }
            img.pop();
            taken[i] = false;
        }
        false
    }
    h.n() <= pool.len() && go(h, g, pool, &mut Vec::new(), &mut vec![false; pool.len()])
}

/// Covers host vertices in ascending order: each is either skipped (at most
/// `skips` times) or put into a copy of `h` together with a subset of the
/// later free vertices.
fn factor_cover(h: &Matrix, g: &Matrix, free: &mut Vec<bool>, copies: usize, skips: usize) -> bool {
    if copies == 0 {
        return true;
    }
    let Some(x) = free.iter().position(|&f| f) else { return false };
    let r = h.n();
    let later: Vec<usize> = (x + 1..g.n()).filter(|&y| free[y]).collect();
    if later.len() + 1 < r * copies {
        return false;
    }
    free[x] = false;
    let mut pick = Vec::with_capacity(r);
    let found = subsets(&later, r - 1, 0, &mut pick, &mut |rest| {
        let mut pool = vec![x];
        pool.extend_from_slice(rest);
        if !injects(h, g, &pool) {
            return false;
        }
        rest.iter().for_each(|&y| free[y] = false);
        let ok = factor_cover(h, g, free, copies - 1, skips);
        rest.iter().for_each(|&y| free[y] = true);
        ok
    });
    let found = found || (skips > 0 && factor_cover(h, g, free, copies, skips - 1));
    free[x] = true;
    found
}

fn subsets(items: &[usize], k: usize, from: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if pick.len() == k {
        return f(pick);
    }
    for i in from..items.len() {
        if items.len() - i < k - pick.len() {
            break;
        }
        pick.push(items[i]);
        if subsets(items, k, i + 1, pick, f) {
            return true;
        }
        pick.pop();
    }
    false
}

/// Does `g` contain the realised target? Factors are searched copy by copy
/// up to 14 vertices; every other target by full injection search up to 10.
pub fn oracle_contains(g: &Graph, target: &TargetSpec) -> Result<bool, HarnessError> {
    let f = target.realize().map_err(|e| HarnessError::Parameter(e.to_string()))?;
    if f.n() > g.n() {
        return Ok(false);
    }
    let gm = Matrix::of(g);
    if let (TargetKind::Factor { r, .. }, Some(h)) = (&target.kind, target.factor_component()) {
        if g.n() > ORACLE_MAX_FACTOR_N {
            return Err(HarnessError::OracleTooLarge { n: g.n(), cap: ORACLE_MAX_FACTOR_N });
        }
        let copies = f.n() / r;
        return Ok(factor_cover(&Matrix::of(&h), &gm, &mut vec![true; g.n()], copies, g.n() - f.n()));
    }
    if g.n() > ORACLE_MAX_N {
        return Err(HarnessError::OracleTooLarge { n: g.n(), cap: ORACLE_MAX_N });
    }
    let pool: Vec<usize> = (0..g.n()).collect();
    Ok(injects(&Matrix::of(&f), &gm, &pool))
}
