//! Reservoir sets, switching, and the doubled auxiliary instance.
//!
//! With `F̂` a copy of `F*` in the host and `W` the image of a 2-independent
//! set `W*`, the reservoir of a host vertex `u` is
//! `R(u) = { w in W : N_F̂(w) ⊆ N_{G_alpha}(u) }`. Any unused `u` can take the
//! place of any `w ∈ R(u)` without breaking the copy, and because `W*` is
//! 2-independent, several such switches never interfere.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Embedding, Graph, GraphBuilder};
use crate::targets::is_two_independent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbsorptionError {
    #[error("W* is not 2-independent in the target")]
    NotTwoIndependent,
    #[error("target vertex {0} (in W* or next to it) is not embedded")]
    Unmapped(usize),
    #[error("host vertex {0} is already used by the copy")]
    VertexUsed(usize),
    #[error("host vertex {w} is not in R({u})")]
    NotInReservoir { u: usize, w: usize },
    #[error("switch pairs must use distinct host vertices")]
    RepeatedSwitch,
    #[error("{unembedded} unembedded target vertices but {free} free host vertices")]
    CountMismatch { unembedded: usize, free: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("structural claim violated: {0}")]
    StructuralClaim(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReservoirFamily {
    /// Target vertices of the 2-independent set, ascending.
    pub w_star: Vec<usize>,
    /// Host images of `w_star`, in the same order.
    pub w: Vec<usize>,
    /// `r[u]`: reservoir of host vertex `u`, ascending.
    pub r: Vec<Vec<usize>>,
}

impl ReservoirFamily {
    pub fn contains(&self, u: usize, w: usize) -> bool {
        self.r[u].binary_search(&w).is_ok()
    }
}

/// Image of the target neighbourhood of `x` under `fhat`.
fn fhat_neighbourhood(target: &Graph, fhat: &Embedding, x: usize) -> Result<Vec<usize>, AbsorptionError> {
    target.neighbors(x).iter().map(|&y| fhat.get(y).ok_or(AbsorptionError::Unmapped(y))).collect()
}

pub fn build_reservoirs(
    host_alpha: &Graph,
    target: &Graph,
    fhat: &Embedding,
    w_star: &[usize],
) -> Result<ReservoirFamily, AbsorptionError> {
    let mut w_star = w_star.to_vec();
    w_star.sort_unstable();
    if !is_two_independent(target, &w_star) {
        return Err(AbsorptionError::NotTwoIndependent);
    }
    let mut w = Vec::with_capacity(w_star.len());
    let mut hoods = Vec::with_capacity(w_star.len());
    for &x in &w_star {
        w.push(fhat.get(x).ok_or(AbsorptionError::Unmapped(x))?);
        hoods.push(fhat_neighbourhood(target, fhat, x)?);
    }
    let r = (0..host_alpha.n())
        .map(|u| {
            let mut ru: Vec<usize> = w
                .iter()
                .zip(&hoods)
                .filter(|(_, hood)| hood.iter().all(|&y| host_alpha.has_edge(u, y)))
                .map(|(&wi, _)| wi)
                .collect();
            ru.sort_unstable();
            ru
        })
        .collect();
    Ok(ReservoirFamily { w_star, w, r })
}

/// Simultaneous switches: each `(u, w)` moves the preimage of `w` to the
/// unused host vertex `u`. A single pair is the basic switch.
pub fn switch_many(
    fhat: &Embedding,
    host_n: usize,
    res: &ReservoirFamily,
    pairs: &[(usize, usize)],
) -> Result<Embedding, AbsorptionError> {
    let inv = fhat.inverse(host_n);
    let mut seen_u = vec![false; host_n];
    let mut seen_w = vec![false; host_n];
    let mut out = fhat.clone();
    for &(u, w) in pairs {
        if inv[u].is_some() {
            return Err(AbsorptionError::VertexUsed(u));
        }
        if seen_u[u] || seen_w[w] {
            return Err(AbsorptionError::RepeatedSwitch);
        }
        seen_u[u] = true;
        seen_w[w] = true;
        if !res.contains(u, w) {
            return Err(AbsorptionError::NotInReservoir { u, w });
        }
        let x = inv[w].expect("reservoir vertices are images");
        out.set(x, u);
    }
    Ok(out)
}

pub fn switch_one(
    fhat: &Embedding,
    host_n: usize,
    res: &ReservoirFamily,
    u: usize,
    w: usize,
) -> Result<Embedding, AbsorptionError> {
    switch_many(fhat, host_n, res, &[(u, w)])
}

/// The doubled instance on `[2n]`: host vertex `u` has a shadow `u + n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryInstance {
    pub n: usize,
    pub g_aux: Graph,
    /// Unembedded target vertices, ascending.
    pub unembedded: Vec<usize>,
    /// `z[i]`: free host vertex labelling `unembedded[i]`.
    pub z: Vec<usize>,
    /// `b[i] = { w + n : w ∈ R(z[i]) }`, ascending.
    pub b: Vec<Vec<usize>>,
    /// Target vertex -> index into `unembedded`.
    slot: Vec<Option<usize>>,
}

impl AuxiliaryInstance {
    pub fn slot(&self, v: usize) -> Option<usize> {
        self.slot.get(v).copied().flatten()
    }

    pub fn b_set(&self, v: usize) -> Option<&[usize]> {
        self.slot(v).map(|i| self.b[i].as_slice())
    }

    pub fn z_of(&self, v: usize) -> Option<usize> {
        self.slot(v).map(|i| self.z[i])
    }
}

pub fn build_auxiliary(
    host_alpha: &Graph,
    target: &Graph,
    fhat: &Embedding,
    res: &ReservoirFamily,
    unembedded: &[usize],
) -> Result<AuxiliaryInstance, AbsorptionError> {
    let n = host_alpha.n();
    let mut unembedded = unembedded.to_vec();
    unembedded.sort_unstable();
    let inv = fhat.inverse(n);
    let free: Vec<usize> = (0..n).filter(|&u| inv[u].is_none()).collect();
    if free.len() != unembedded.len() {
        return Err(AbsorptionError::CountMismatch { unembedded: unembedded.len(), free: free.len() });
    }
    let mut b = GraphBuilder::new(2 * n);
    for (x, y) in target.edges() {
        if let (Some(a), Some(c)) = (fhat.get(x), fhat.get(y)) {
            b.insert(a, c).expect("in range");
        }
    }
    for (u, w) in host_alpha.edges() {
        b.insert(u + n, w).expect("in range");
        b.insert(u, w + n).expect("in range");
        b.insert(u + n, w + n).expect("in range");
    }
    let mut slot = vec![None; target.n()];
    for (i, &v) in unembedded.iter().enumerate() {
        slot[v] = Some(i);
    }
    let bsets = free.iter().map(|&z| res.r[z].iter().map(|&w| w + n).collect()).collect();
    Ok(AuxiliaryInstance { n, g_aux: b.build(), unembedded, z: free, b: bsets, slot })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwitchCase {
    /// `v ∈ Z0`: `g(v) = g'(v) - n`.
    Shifted,
    /// `v ∈ Z1`: displaced from `g'(v)` to the label `z_u` of the vertex taking its place.
    Displaced,
    /// `g(v) = g'(v)`.
    Kept,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchPlan {
    pub z0: Vec<usize>,
    pub z1: Vec<usize>,
    /// Case tag of every target vertex.
    pub cases: Vec<SwitchCase>,
    /// `(v, g'(v), u)`: `v ∈ Z1` displaced by `u ∈ Z0`.
    pub displacements: Vec<(usize, usize, usize)>,
}

/// Turns an embedding `g'` into the auxiliary instance into an embedding into
/// the host: vertices mapped to shadows drop down, and the copy vertices they
/// land on move to the free labels.
pub fn resolve_switching(
    aux: &AuxiliaryInstance,
    target: &Graph,
    g_prime: &Embedding,
    fhat: &Embedding,
) -> Result<(Embedding, SwitchPlan), AbsorptionError> {
    let n = aux.n;
    let pre = |m: String| Err(AbsorptionError::Precondition(m));
    if g_prime.len() != target.n() || !g_prime.is_total() {
        return pre("g' must be total on the target".into());
    }
    for (x, h) in fhat.pairs() {
        if g_prime.get(x) != Some(h) {
            return pre(format!("g' does not extend the copy at target vertex {x}"));
        }
    }
    let mut cases = vec![SwitchCase::Kept; target.n()];
    let mut g = g_prime.clone();
    let inv = g_prime.inverse(2 * n);
    let mut z1 = Vec::new();
    let mut displacements = Vec::new();
    for (i, &v) in aux.unembedded.iter().enumerate() {
        let image = g_prime.get(v).unwrap();
        if image < n || aux.b[i].binary_search(&image).is_err() {
            return pre(format!("unembedded vertex {v} maps to {image}, outside B({v})"));
        }
        g.set(v, image - n);
        cases[v] = SwitchCase::Shifted;
        if let Some(x) = inv[image - n] {
            g.set(x, aux.z[i]);
            cases[x] = SwitchCase::Displaced;
            z1.push(x);
            displacements.push((x, image - n, v));
        }
    }
    for (v, h) in g_prime.pairs() {
        if cases[v] == SwitchCase::Kept && h >= n {
            return pre(format!("vertex {v} outside Z0 maps to shadow {h}"));
        }
    }
    for &x in &z1 {
        if let Some(&y) = target.neighbors(x).iter().find(|&&y| cases[y] != SwitchCase::Kept) {
            return Err(AbsorptionError::StructuralClaim(format!("Z1 vertex {x} is adjacent to switched vertex {y}")));
        }
    }
    z1.sort_unstable();
    displacements.sort_unstable();
    Ok((g, SwitchPlan { z0: aux.unembedded.clone(), z1, cases, displacements }))
}
