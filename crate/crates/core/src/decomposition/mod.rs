//! Decompositions `(F', S_1, ..., S_k)` of bounded-degree targets into a
//! sparse remainder and classes of isomorphic, pairwise remote, minimally
//! dense spots.

pub mod iso;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::targets::density::smallest_dense_set;
pub use iso::{canonical_form, isomorphism};
pub use verify::{verify, PropertyRecord, VerifyReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecompositionError {
    #[error("target has maximum degree {actual} > delta = {delta}")]
    DegreeTooLarge { actual: usize, delta: usize },
    #[error("spot {spot:?} has {size} vertices, more than eps n = {budget}")]
    SpotOverBudget { spot: Vec<usize>, size: usize, budget: f64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseClass {
    /// Canonical form shared by every member.
    pub iso_type: Graph,
    /// Vertex sets in the target, each sorted ascending.
    pub members: Vec<Vec<usize>>,
    pub s_h: usize,
}

impl DenseClass {
    pub fn vertex_total(&self) -> usize {
        self.members.len() * self.s_h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub target: Graph,
    pub f_prime: Vec<usize>,
    pub classes: Vec<DenseClass>,
    pub delta: usize,
    pub epsilon_op: f64,
}

/// Spots `a`, `b` may share a class: non-adjacent and without common neighbours.
fn remote(f: &Graph, a: &[usize], b: &[usize]) -> bool {
    let mut closed = vec![false; f.n()]; // a and its neighbours
    let mut open = vec![false; f.n()]; // neighbours of a
    for &v in a {
        closed[v] = true;
        for &w in f.neighbors(v) {
            closed[w] = true;
            open[w] = true;
        }
    }
    b.iter().all(|&v| !closed[v] && f.neighbors(v).iter().all(|&w| !open[w]))
}

/// Spots sharing a canonical form: (size, canonical edges, canonical graph, members).
type Group = (usize, Vec<(usize, usize)>, Graph, Vec<Vec<usize>>);

pub fn decompose(f: &Graph, delta: usize, epsilon_op: f64) -> Result<Decomposition, DecompositionError> {
    if f.max_degree() > delta {
        return Err(DecompositionError::DegreeTooLarge { actual: f.max_degree(), delta });
    }
    let n = f.n();
    let budget = epsilon_op * n as f64;
    let mut alive = vec![true; n];
    let mut spots: Vec<Vec<usize>> = Vec::new();
    // Smallest size first; removals never create smaller dense sets, so each
    // extracted set is minimally dense in the remainder.
    for s in 3..=2 * delta + 1 {
        while let Some(spot) = smallest_dense_set(f, &alive, delta, s) {
            if spot.len() as f64 > budget + 1e-9 {
                return Err(DecompositionError::SpotOverBudget { size: spot.len(), spot, budget });
            }
            for &v in &spot {
                alive[v] = false;
            }
            spots.push(spot);
        }
    }
    // group by canonical form, ordered by (size, canonical code)
    let mut groups: Vec<Group> = Vec::new();
    for spot in spots {
        let (canon, _) = canonical_form(&f.induced(&spot));
        let key: Vec<(usize, usize)> = canon.edges().collect();
        match groups.iter_mut().find(|g| g.0 == spot.len() && g.1 == key) {
            Some(g) => g.3.push(spot),
            None => groups.push((spot.len(), key, canon, vec![spot])),
        }
    }
    groups.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mut classes = Vec::new();
    for (s_h, _, iso_type, mut members) in groups {
        members.sort();
        // first-fit split respecting remoteness and the vertex budget
        let mut parts: Vec<Vec<Vec<usize>>> = Vec::new();
        for m in members {
            let slot = parts
                .iter_mut()
                .find(|p| ((p.len() + 1) * s_h) as f64 <= budget + 1e-9 && p.iter().all(|q| remote(f, q, &m)));
            match slot {
                Some(p) => p.push(m),
                None => parts.push(vec![m]),
            }
        }
        for p in parts {
            classes.push(DenseClass { iso_type: iso_type.clone(), members: p, s_h });
        }
    }
    let f_prime = (0..n).filter(|&v| alive[v]).collect();
    Ok(Decomposition { target: f.clone(), f_prime, classes, delta, epsilon_op })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub s_h: usize,
    pub iso_type: Vec<(usize, usize)>,
    pub members: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub n: usize,
    pub delta: usize,
    pub epsilon_op: f64,
    pub f_prime: Vec<usize>,
    pub classes: Vec<ClassDoc>,
    pub verdicts: VerifyReport,
}

impl Decomposition {
    pub fn to_doc(&self) -> DecompositionDoc {
        DecompositionDoc {
            n: self.target.n(),
            delta: self.delta,
            epsilon_op: self.epsilon_op,
            f_prime: self.f_prime.clone(),
            classes: self
                .classes
                .iter()
                .map(|c| ClassDoc { s_h: c.s_h, iso_type: c.iso_type.edges().collect(), members: c.members.clone() })
                .collect(),
            verdicts: verify(self),
        }
    }

    /// Rebuilds a decomposition from its document and the target.
    pub fn from_doc(doc: &DecompositionDoc, target: &Graph) -> Result<Self, crate::graph::GraphError> {
        let classes = doc
            .classes
            .iter()
            .map(|c| {
                Ok(DenseClass {
                    iso_type: Graph::from_edges(c.s_h, c.iso_type.iter().copied())?,
                    members: c.members.clone(),
                    s_h: c.s_h,
                })
            })
            .collect::<Result<_, crate::graph::GraphError>>()?;
        Ok(Self {
            target: target.clone(),
            f_prime: doc.f_prime.clone(),
            classes,
            delta: doc.delta,
            epsilon_op: doc.epsilon_op,
        })
    }

    /// All spot members across classes, in class order.
    pub fn spots(&self) -> impl Iterator<Item = (usize, &Vec<usize>)> {
        self.classes.iter().enumerate().flat_map(|(h, c)| c.members.iter().map(move |m| (h, m)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::density::{dense_threshold, density_report, DensityOptions};

    fn two_adjacent_k5() -> Graph {
        let mut b = Graph::disjoint_copies(&Graph::complete(5), 2).to_builder();
        // one edge between them would push degrees to 5, still within delta 5
        b.insert(4, 5).unwrap();
        b.build()
    }

    #[test]
    fn k5_factor_single_class() {
        let f = Graph::disjoint_copies(&Graph::complete(5), 3);
        let d = decompose(&f, 5, 1.0).unwrap();
        assert!(d.f_prime.is_empty());
        assert_eq!(d.classes.len(), 1);
        assert_eq!(d.classes[0].members.len(), 3);
        assert_eq!(d.classes[0].s_h, 5);
        assert!(verify(&d).pass);
    }

    #[test]
    fn cycle_has_no_spots() {
        let d = decompose(&Graph::cycle(20), 5, 0.1).unwrap();
        assert_eq!(d.f_prime.len(), 20);
        assert!(d.classes.is_empty());
        assert!(verify(&d).pass);
    }

    #[test]
    fn adjacent_spots_are_split() {
        let d = decompose(&two_adjacent_k5(), 5, 1.0).unwrap();
        assert_eq!(d.classes.len(), 2);
        assert!(d.classes.iter().all(|c| c.members.len() == 1));
        assert!(verify(&d).pass);
    }

    #[test]
    fn remainder_is_sparse_on_random_graphs() {
        use crate::rng::rng_from_seed;
        use rand::Rng;
        for seed in 0..25u64 {
            let mut rng = rng_from_seed(seed);
            let n = rng.gen_range(20..=40);
            let f = crate::graph::random_bounded_degree(n, 5, 0.35, rng.gen()).unwrap();
            let d = decompose(&f, 5, 0.5).unwrap();
            let rem = f.induced(&d.f_prime);
            if rem.n() <= 22 {
                let rep = density_report(&rem, DensityOptions::default()).unwrap();
                assert!(rep.gamma.is_none_or(|g| g <= dense_threshold(5)));
            }
            assert!(verify(&d).pass, "{:?}", verify(&d));
            assert_eq!(decompose(&f, 5, 0.5).unwrap(), d);
        }
    }

    #[test]
    fn budget_error_and_degree_error() {
        let f = Graph::disjoint_copies(&Graph::complete(5), 3);
        assert!(matches!(decompose(&f, 5, 0.1), Err(DecompositionError::SpotOverBudget { .. })));
        assert!(matches!(decompose(&Graph::complete(7), 5, 1.0), Err(DecompositionError::DegreeTooLarge { .. })));
    }

    #[test]
    fn json_round_trip() {
        let f = two_adjacent_k5();
        let d = decompose(&f, 5, 1.0).unwrap();
        let doc = d.to_doc();
        let text = serde_json::to_string(&doc).unwrap();
        let back: DecompositionDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(Decomposition::from_doc(&back, &f).unwrap(), d);
    }
}
