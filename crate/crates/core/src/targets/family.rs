//! Finite descriptions of the families of partial targets that the first
//! exposure round must hit.

use super::powers::{path_factor_plan, PathFactorPlan};
use super::spec::{TargetKind, TargetSpec};
use super::TargetError;
use crate::decomposition::{decompose, Decomposition};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    /// The single member `F*` of a path-factor plan for a power of a
    /// Hamilton cycle; the connector runs are left for completion.
    PowerPlan(PathFactorPlan),
    /// Graphs covering `F'` and all but `budgets[h]` spots of each class.
    Decomposed { decomposition: Decomposition, budgets: Vec<usize> },
    /// The whole target; nothing is left for completion.
    Whole,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuitableFamily {
    pub kind: FamilyKind,
    /// Target vertices covered by every member: `V(F*)` or `V(F')`.
    pub core: Vec<usize>,
    pub n: usize,
    pub epsilon_op: f64,
}

impl SuitableFamily {
    pub fn whole(n: usize, epsilon_op: f64) -> Self {
        Self { kind: FamilyKind::Whole, core: (0..n).collect(), n, epsilon_op }
    }

    /// Smallest member size: `|core|` plus every spot beyond the slack.
    pub fn min_member_vertices(&self) -> usize {
        match &self.kind {
            FamilyKind::Decomposed { decomposition, budgets } => {
                self.core.len()
                    + decomposition
                        .classes
                        .iter()
                        .zip(budgets)
                        .map(|(c, &b)| c.members.len().saturating_sub(b) * c.s_h)
                        .sum::<usize>()
            }
            _ => self.core.len(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self.kind {
            FamilyKind::PowerPlan(_) => "power-plan",
            FamilyKind::Decomposed { .. } => "decomposed",
            FamilyKind::Whole => "whole",
        }
    }
}

/// Per-class slack `floor(eps n / (s_h^2 k))` with `k` the number of classes.
pub fn slack_budgets(dec: &Decomposition, n: usize, epsilon_op: f64) -> Result<Vec<usize>, TargetError> {
    let k = dec.classes.len();
    dec.classes
        .iter()
        .enumerate()
        .map(|(h, c)| {
            let b = (epsilon_op * n as f64 / (c.s_h * c.s_h * k) as f64 + 1e-9).floor() as usize;
            if b == 0 && !c.members.is_empty() {
                Err(TargetError::ZeroBudget { class: h, s_h: c.s_h, classes: k })
            } else {
                Ok(b)
            }
        })
        .collect()
}

/// Powers of Hamilton cycles get the single-member plan family with gadget
/// parameters `(m, l)`; every other target is decomposed with the given
/// degree bound (default: the target's maximum degree).
pub fn suitable_family(
    spec: &TargetSpec,
    target: &Graph,
    epsilon_op: f64,
    gadget: (usize, usize),
    delta: Option<usize>,
) -> Result<SuitableFamily, TargetError> {
    let n = target.n();
    if let TargetKind::HamPower { k } = spec.kind {
        let plan = path_factor_plan(n, k, gadget.0, gadget.1, epsilon_op)?;
        let core = plan.fstar_vertices();
        return Ok(SuitableFamily { kind: FamilyKind::PowerPlan(plan), core, n, epsilon_op });
    }
    let dec = decompose(target, delta.unwrap_or(target.max_degree()), epsilon_op)
        .map_err(|e| TargetError::Decomposition(e.to_string()))?;
    let budgets = slack_budgets(&dec, n, epsilon_op)?;
    let core = dec.f_prime.clone();
    Ok(SuitableFamily { kind: FamilyKind::Decomposed { decomposition: dec, budgets }, core, n, epsilon_op })
}
