//! Multi-round exposure of `G(n, p)` as independent sparser rounds.

use serde::{Deserialize, Serialize};

use super::{EmbedConfig, EmbedError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "purpose")]
pub enum RoundPurpose {
    /// Round 1: the core of the family member (`F*` or `F'`).
    Family,
    /// One round per dense-spot class.
    DenseSpots { class: usize },
    /// The completion round, sampled on the doubled vertex set.
    Completion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub prob: f64,
    pub purpose: RoundPurpose,
    /// Number of vertices the round is sampled on (`n` or `2n`).
    pub vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundSchedule {
    pub p: f64,
    pub n: usize,
    pub rounds: Vec<Round>,
}

impl RoundSchedule {
    /// Round 1 gets `round1_share * p`, of which `spot_share * p` is split
    /// evenly over `classes` dense-spot rounds; the completion round on `2n`
    /// gets `completion_share * p`.
    pub fn new(p: f64, n: usize, classes: usize, cfg: &EmbedConfig) -> Result<Self, EmbedError> {
        Self::check_p(p)?;
        let (r1, spots, c) = (cfg.round1_share, cfg.spot_share, cfg.completion_share);
        if r1 < 0.0 || spots < 0.0 || c < 0.0 || (classes > 0 && spots > r1) {
            return Err(EmbedError::Schedule(format!("invalid shares {r1}, {spots}, {c}")));
        }
        let mut rounds = Vec::with_capacity(classes + 2);
        let core = if classes > 0 { r1 - spots } else { r1 };
        rounds.push(Round { prob: p * core, purpose: RoundPurpose::Family, vertices: n });
        for class in 0..classes {
            rounds.push(Round {
                prob: p * spots / classes as f64,
                purpose: RoundPurpose::DenseSpots { class },
                vertices: n,
            });
        }
        rounds.push(Round { prob: p * c, purpose: RoundPurpose::Completion, vertices: 2 * n });
        let s = Self { p, n, rounds };
        if s.coupled_total() > p * (1.0 + 1e-12) + 1e-15 {
            return Err(EmbedError::Schedule(format!("rounds need {} > p = {p} after projection", s.coupled_total())));
        }
        Ok(s)
    }

    /// A single round with all of `p`, for families that leave nothing to
    /// complete.
    pub fn single(p: f64, n: usize) -> Result<Self, EmbedError> {
        Self::check_p(p)?;
        Ok(Self { p, n, rounds: vec![Round { prob: p, purpose: RoundPurpose::Family, vertices: n }] })
    }

    fn check_p(p: f64) -> Result<(), EmbedError> {
        if (0.0..=1.0).contains(&p) {
            Ok(())
        } else {
            Err(EmbedError::Schedule(format!("p = {p} outside [0, 1]")))
        }
    }

    /// Upper bound on the edge probability of the union of all rounds on
    /// `[n]`: a doubled round contributes three pairs per projected edge.
    pub fn coupled_total(&self) -> f64 {
        self.rounds.iter().map(|r| if r.vertices == self.n { r.prob } else { 3.0 * r.prob }).sum()
    }

    pub fn completion(&self) -> Option<&Round> {
        self.rounds.last().filter(|r| r.purpose == RoundPurpose::Completion)
    }

    /// Rounds sampled on `[n]`, in order.
    pub fn base_rounds(&self) -> &[Round] {
        let k = self.rounds.len() - usize::from(self.completion().is_some());
        &self.rounds[..k]
    }
}
