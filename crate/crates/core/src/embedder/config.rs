//! Pipeline configuration in `key = value` text form.

use serde::{Deserialize, Serialize};

use super::EmbedError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedConfig {
    /// Operational epsilon: slack fraction for plans and decompositions.
    pub epsilon_op: f64,
    /// Minimum block length of the path-factor plan.
    pub m: usize,
    /// Connector length; 0 picks `2k + 2`.
    pub l: usize,
    /// Degree bound for decompositions; 0 uses the target's maximum degree.
    pub delta: usize,
    /// Node budget of each round-1 backtracking search.
    pub search_budget: u64,
    /// Node budget of each connection-site enumeration.
    pub site_budget: u64,
    /// Node budget of the exact rainbow-matching search.
    pub matching_budget: u64,
    pub greedy_restarts: usize,
    pub max_edges_per_site: usize,
    /// Retry round 1 inside `G_alpha ∪ rounds` when the random rounds alone fail.
    pub host_assist: bool,
    /// Fraction of `p` given to round 1 (core plus dense-spot rounds).
    pub round1_share: f64,
    /// Fraction of `p` split evenly over the dense-spot rounds.
    pub spot_share: f64,
    /// Edge probability of the completion round on `2n`, as a fraction of `p`.
    pub completion_share: f64,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        Self {
            epsilon_op: 0.1,
            m: 20,
            l: 0,
            delta: 0,
            search_budget: 200_000,
            site_budget: 50_000,
            matching_budget: 100_000,
            greedy_restarts: 50,
            max_edges_per_site: 200,
            host_assist: true,
            round1_share: 0.5,
            spot_share: 1.0 / 6.0,
            completion_share: 1.0 / 6.0,
        }
    }
}

impl EmbedConfig {
    /// Reads `key = value` lines over the defaults. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, EmbedError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: String| EmbedError::Config(format!("line {}: {m}", i + 1));
            let (k, v) = line.split_once('=').ok_or_else(|| bad("expected key = value".into()))?;
            cfg.set(k.trim(), v.trim()).map_err(bad)?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("bad value {v:?} for {key}"))
        }
        match key {
            "epsilon_op" => self.epsilon_op = num(key, value)?,
            "m" => self.m = num(key, value)?,
            "l" => self.l = num(key, value)?,
            "delta" => self.delta = num(key, value)?,
            "search_budget" => self.search_budget = num(key, value)?,
            "site_budget" => self.site_budget = num(key, value)?,
            "matching_budget" => self.matching_budget = num(key, value)?,
            "greedy_restarts" => self.greedy_restarts = num(key, value)?,
            "max_edges_per_site" => self.max_edges_per_site = num(key, value)?,
            "host_assist" => self.host_assist = num(key, value)?,
            "round1_share" => self.round1_share = num(key, value)?,
            "spot_share" => self.spot_share = num(key, value)?,
            "completion_share" => self.completion_share = num(key, value)?,
            other => return Err(format!("unknown key {other}")),
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        format!(
            "epsilon_op = {}\nm = {}\nl = {}\ndelta = {}\nsearch_budget = {}\nsite_budget = {}\n\
             matching_budget = {}\ngreedy_restarts = {}\nmax_edges_per_site = {}\nhost_assist = {}\n\
             round1_share = {}\nspot_share = {}\ncompletion_share = {}\n",
            self.epsilon_op,
            self.m,
            self.l,
            self.delta,
            self.search_budget,
            self.site_budget,
            self.matching_budget,
            self.greedy_restarts,
            self.max_edges_per_site,
            self.host_assist,
            self.round1_share,
            self.spot_share,
            self.completion_share
        )
    }
}
