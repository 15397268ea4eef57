//! Closed-form probability bounds, generic over the float type.

use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::graph::Graph;

fn cast<T: Float>(x: f64) -> T {
    T::from(x).expect("float conversion")
}

/// `(alpha / (4 delta))^(2 delta)`.
pub fn epsilon_of<T: Float>(alpha: T, delta: usize) -> T {
    (alpha / cast::<T>(4.0 * delta as f64)).powi(2 * delta as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JansonReport<T> {
    /// Expected number of family members present.
    pub mu: T,
    /// Sum over ordered pairs `i != j` sharing an edge.
    pub delta: T,
    pub gamma: T,
    /// Upper bound on `P[X <= (1 - gamma) mu]`.
    pub bound: T,
}

fn sorted_edges(g: &Graph) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = g.edges().collect();
    e.sort_unstable();
    e
}

fn common(a: &[(usize, usize)], b: &[(usize, usize)]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Exact `mu`, `delta` and the tail bound `exp(-gamma^2 mu^2 / (2 (mu + delta)))`
/// for copies of the family members in `G(n, p)`.
pub fn janson_report<T: Float>(family: &[Graph], p: T, gamma: T) -> Result<JansonReport<T>, HarnessError> {
    if !(gamma > T::zero() && gamma < T::one()) {
        return Err(HarnessError::Parameter("gamma must lie in (0, 1)".into()));
    }
    if !(p >= T::zero() && p <= T::one()) {
        return Err(HarnessError::Parameter("p must lie in [0, 1]".into()));
    }
    if family.windows(2).any(|w| w[0].n() != w[1].n()) {
        return Err(HarnessError::Parameter("family members must share a vertex set".into()));
    }
    let edges: Vec<Vec<(usize, usize)>> = family.iter().map(sorted_edges).collect();
    let pw = |e: usize| p.powi(e as i32);
    let mu = edges.iter().fold(T::zero(), |acc, e| acc + pw(e.len()));
    let mut delta = T::zero();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let c = common(&edges[i], &edges[j]);
            if c > 0 {
                delta = delta + cast::<T>(2.0) * pw(edges[i].len() + edges[j].len() - c);
            }
        }
    }
    let bound =
        if mu == T::zero() { T::one() } else { (-(gamma * gamma * mu * mu) / (cast::<T>(2.0) * (mu + delta))).exp() };
    Ok(JansonReport { mu, delta, gamma, bound })
}

/// `exp(-gamma^2 delta m / 3)` for sums of `m` sequentially dependent
/// indicators, each with conditional mean at least `delta`.
pub fn seqdep_bound<T: Float>(delta: T, gamma: T, m: usize) -> Result<T, HarnessError> {
    if !(gamma > T::zero() && gamma < T::one()) {
        return Err(HarnessError::Parameter("gamma must lie in (0, 1)".into()));
    }
    if !(delta >= T::zero() && delta <= T::one()) {
        return Err(HarnessError::Parameter("delta must lie in [0, 1]".into()));
    }
    if m == 0 {
        return Err(HarnessError::Parameter("m must be at least 1".into()));
    }
    Ok((-(gamma * gamma * delta * cast::<T>(m as f64)) / cast::<T>(3.0)).exp())
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
/// An empty sample gives `(0, 1)`.
pub fn wilson_interval<T: Float>(successes: usize, trials: usize, z: T) -> (T, T) {
    if trials == 0 {
        return (T::zero(), T::one());
    }
    let n = cast::<T>(trials as f64);
    let phat = cast::<T>(successes as f64) / n;
    let z2 = z * z;
    let two = cast::<T>(2.0);
    let four = cast::<T>(4.0);
    let denom = T::one() + z2 / n;
    let centre = (phat + z2 / (two * n)) / denom;
    let half = z * (phat * (T::one() - phat) / n + z2 / (four * n * n)).sqrt() / denom;
    ((centre - half).max(T::zero()), (centre + half).min(T::one()))
}
