//! k-th powers of paths and cycles, the connector gadget, and the
//! path-factor plan that cuts `C_n^(k)` into long path powers separated by
//! short connector runs.

use serde::{Deserialize, Serialize};

use super::TargetError;
use crate::graph::{Graph, GraphBuilder};

/// `P_m^(k)`: vertices `0..m`, edges between vertices at distance `<= k`.
pub fn path_power(m: usize, k: usize) -> Graph {
    let mut b = GraphBuilder::new(m);
    for u in 0..m {
        for v in u + 1..m.min(u + k + 1) {
            b.insert(u, v).expect("in range");
        }
    }
    b.build()
}

/// `C_n^(k)` in cycle order. For `n <= 2k + 1` this is `K_n`.
pub fn cycle_power(n: usize, k: usize) -> Graph {
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for d in 1..=k {
            let v = (u + d) % n;
            if v != u {
                b.insert(u, v).expect("in range");
            }
        }
    }
    b.build()
}

/// `e(P_m^(k)) = k m - C(k+1, 2)` for `m >= k`.
pub fn path_power_edge_count(m: usize, k: usize) -> usize {
    k * m - k * (k + 1) / 2
}

/// The sparse connection gadget `P`: the k-th power of the path
/// `u_1..u_k, w_1..w_l, v_1..v_k` with the edges inside `{u_i}`, inside
/// `{v_i}`, `u_k w_1`, `w_l v_1` and every `w_i w_{i+1}` except `w_j w_{j+1}`
/// (`j = floor(l/2)`) removed. The removed edges are the ones the deterministic
/// host is expected to supply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectorGadget {
    pub graph: Graph,
    pub k: usize,
    pub l: usize,
    /// 1-based index of the kept run edge `w_j w_{j+1}`.
    pub j: usize,
    pub u: Vec<usize>,
    pub w: Vec<usize>,
    pub v: Vec<usize>,
}

impl ConnectorGadget {
    /// Edge count predicted by the construction: `(k - 1) l + k (k + 1) / 2`.
    pub fn predicted_edges(k: usize, l: usize) -> usize {
        (k - 1) * l + k * (k + 1) / 2
    }

    /// Whether `e(P) <= l (k - 1/2)`, compared in integers as `2 e <= l (2k - 1)`.
    pub fn within_claimed_bound(&self) -> bool {
        2 * self.graph.edge_count() <= self.l * (2 * self.k - 1)
    }
}

pub fn connector_gadget(k: usize, l: usize) -> Result<ConnectorGadget, TargetError> {
    if k < 2 {
        return Err(TargetError::Parameters(format!("connector needs k >= 2, got k = {k}")));
    }
    if l < 2 * k + 2 {
        return Err(TargetError::Parameters(format!("connector needs l >= 2k + 2 = {}, got l = {l}", 2 * k + 2)));
    }
    let total = l + 2 * k;
    let u: Vec<usize> = (0..k).collect();
    let w: Vec<usize> = (k..k + l).collect();
    let v: Vec<usize> = (k + l..total).collect();
    let j = l / 2;
    let kept = (w[j - 1], w[j]);
    let is_u = |x: usize| x < k;
    let is_v = |x: usize| x >= k + l;
    let is_w = |x: usize| !is_u(x) && !is_v(x);
    let mut b = GraphBuilder::new(total);
    for a in 0..total {
        for c in a + 1..total.min(a + k + 1) {
            let drop = (is_u(a) && is_u(c))
                || (is_v(a) && is_v(c))
                || (a, c) == (u[k - 1], w[0])
                || (a, c) == (w[l - 1], v[0])
                || (is_w(a) && is_w(c) && c == a + 1 && (a, c) != kept);
            if !drop {
                b.insert(a, c).expect("in range");
            }
        }
    }
    Ok(ConnectorGadget { graph: b.build(), k, l, j, u, w, v })
}

/// Cutting `n = s (m + l) + t` with `0 <= t < m + l`: `t` copies of
/// `P_{m+1}^(k)`, `s - t` copies of `P_m^(k)`, and `s` connector runs of
/// length `l` between consecutive blocks (cyclically).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFactorPlan {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub l: usize,
    pub s: usize,
    pub t: usize,
    /// Kept-edge index `floor(l / 2)` of the connector.
    pub j: usize,
}

impl PathFactorPlan {
    /// Arithmetic only; no coverage constraint.
    pub fn arithmetic(n: usize, k: usize, m: usize, l: usize) -> Result<Self, TargetError> {
        if m == 0 || l == 0 || k == 0 {
            return Err(TargetError::Parameters("k, m and l must be positive".into()));
        }
        let s = n / (m + l);
        let t = n % (m + l);
        if t > s {
            return Err(TargetError::InfeasiblePlan(format!("n = {n} = {s}*({m}+{l}) + {t} needs t <= s")));
        }
        Ok(Self { n, k, m, l, s, t, j: l / 2 })
    }

    pub fn block_len(&self, i: usize) -> usize {
        if i < self.t {
            self.m + 1
        } else {
            self.m
        }
    }

    /// Vertices of `F*`: `s m + t`.
    pub fn fstar_vertex_count(&self) -> usize {
        self.s * self.m + self.t
    }

    /// Vertices left for the connectors: `s l`.
    pub fn uncovered(&self) -> usize {
        self.s * self.l
    }

    /// Start of path block `i` in cycle order.
    pub fn block_start(&self, i: usize) -> usize {
        i * (self.m + self.l) + i.min(self.t)
    }

    /// Cycle-order vertex ranges of the path blocks.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        (0..self.s).map(|i| self.block_start(i)..self.block_start(i) + self.block_len(i)).collect()
    }

    /// Cycle-order vertex ranges of the connector runs; run `i` joins block
    /// `i` to block `i + 1 (mod s)`.
    pub fn runs(&self) -> Vec<std::ops::Range<usize>> {
        self.blocks().into_iter().map(|r| r.end..r.end + self.l).collect()
    }

    /// Vertices of `F*` inside `C_n^(k)` in ascending order.
    pub fn fstar_vertices(&self) -> Vec<usize> {
        self.blocks().into_iter().flatten().collect()
    }

    /// `F*` as a standalone graph with blocks laid out contiguously.
    pub fn fstar_graph(&self) -> Graph {
        let mut b = GraphBuilder::new(self.fstar_vertex_count());
        let mut off = 0;
        for i in 0..self.s {
            let len = self.block_len(i);
            for (u, v) in path_power(len, self.k).edges() {
                b.insert(u + off, v + off).expect("in range");
            }
            off += len;
        }
        b.build()
    }

    /// The spanning power-path factor: every block and every connector run
    /// as its own k-th power of a path, laid out in cycle order.
    pub fn spanning_factor(&self) -> Graph {
        let mut b = GraphBuilder::new(self.n);
        let mut segments: Vec<std::ops::Range<usize>> = Vec::new();
        for (blk, run) in self.blocks().into_iter().zip(self.runs()) {
            segments.push(blk);
            segments.push(run);
        }
        for seg in segments {
            let len = seg.len();
            for (u, v) in path_power(len, self.k).edges() {
                b.insert(seg.start + u, seg.start + v).expect("in range");
            }
        }
        b.build()
    }

    /// The literal gadget-length constraint `l^2 <= eps m`.
    pub fn satisfies_length_constraint(&self, eps: f64) -> bool {
        ((self.l * self.l) as f64) <= eps * self.m as f64
    }
}

/// Plan for `C_n^(k)` whose connector runs cover at most `eps n` vertices,
/// so `F*` keeps at least `(1 - eps) n` vertices.
pub fn path_factor_plan(n: usize, k: usize, m: usize, l: usize, eps: f64) -> Result<PathFactorPlan, TargetError> {
    if m + l > n {
        return Err(TargetError::InfeasiblePlan(format!("m + l = {} exceeds n = {n}", m + l)));
    }
    if m < 2 * k {
        return Err(TargetError::Parameters(format!("blocks need m >= 2k = {}, got {m}", 2 * k)));
    }
    if l <= k {
        return Err(TargetError::Parameters(format!("runs need l > k = {k}, got {l}")));
    }
    let plan = PathFactorPlan::arithmetic(n, k, m, l)?;
    if plan.uncovered() as f64 > eps * n as f64 + 1e-9 {
        return Err(TargetError::InfeasiblePlan(format!(
            "connector runs cover s l = {} > eps n = {}",
            plan.uncovered(),
            eps * n as f64
        )));
    }
    Ok(plan)
}
