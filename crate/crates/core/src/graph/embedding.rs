use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Graph;

/// Vertex map from a target graph into a host graph. Entries may be unset
/// while an embedding is under construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    map: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingViolation {
    #[error("map has {got} entries but the target has {expected} vertices")]
    WrongLength { expected: usize, got: usize },
    #[error("target vertex {0} is unmapped")]
    Unset(usize),
    #[error("target vertex {vertex} maps to {image}, outside the host")]
    OutOfRange { vertex: usize, image: usize },
    #[error("target vertices {first} and {second} both map to host vertex {image}")]
    Collision { first: usize, second: usize, image: usize },
    #[error("target edge {{{a}, {b}}} maps to non-edge {{{image_a}, {image_b}}}")]
    MissingEdge { a: usize, b: usize, image_a: usize, image_b: usize },
}

impl Embedding {
    pub fn empty(target_n: usize) -> Self {
        Self { map: vec![None; target_n] }
    }

    pub fn from_total(map: Vec<usize>) -> Self {
        Self { map: map.into_iter().map(Some).collect() }
    }

    pub fn from_partial(map: Vec<Option<usize>>) -> Self {
        Self { map }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_total((0..n).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn get(&self, v: usize) -> Option<usize> {
        self.map[v]
    }

    #[inline]
    pub fn set(&mut self, v: usize, image: usize) {
        self.map[v] = Some(image);
    }

    #[inline]
    pub fn unset(&mut self, v: usize) {
        self.map[v] = None;
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.map
    }

    pub fn is_total(&self) -> bool {
        self.map.iter().all(Option::is_some)
    }

    /// Mapped target vertices in ascending order.
    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.map.iter().enumerate().filter_map(|(v, m)| m.map(|_| v))
    }

    /// `(target, host)` pairs for every mapped vertex.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().enumerate().filter_map(|(v, m)| m.map(|h| (v, h)))
    }

    /// Total map as a plain vector; `None` if any entry is unset.
    pub fn to_total(&self) -> Option<Vec<usize>> {
        self.map.iter().copied().collect()
    }

    /// Host vertex -> target vertex for a host on `host_n` vertices.
    pub fn inverse(&self, host_n: usize) -> Vec<Option<usize>> {
        let mut inv = vec![None; host_n];
        for (v, h) in self.pairs() {
            inv[h] = Some(v);
        }
        inv
    }

    /// Validity on the defined domain: injective, in range, and every target
    /// edge with both endpoints mapped lands on a host edge.
    pub fn check_partial(&self, target: &Graph, host: &Graph) -> Result<(), EmbeddingViolation> {
        if self.map.len() != target.n() {
            return Err(EmbeddingViolation::WrongLength { expected: target.n(), got: self.map.len() });
        }
        let mut owner: Vec<Option<usize>> = vec![None; host.n()];
        for (v, h) in self.pairs() {
            if h >= host.n() {
                return Err(EmbeddingViolation::OutOfRange { vertex: v, image: h });
            }
            if let Some(first) = owner[h] {
                return Err(EmbeddingViolation::Collision { first, second: v, image: h });
            }
            owner[h] = Some(v);
        }
        for (a, b) in target.edges() {
            if let (Some(x), Some(y)) = (self.map[a], self.map[b]) {
                if !host.has_edge(x, y) {
                    return Err(EmbeddingViolation::MissingEdge { a, b, image_a: x, image_b: y });
                }
            }
        }
        Ok(())
    }
}

/// Full validity check: the map must be total, injective, and edge-preserving.
/// Reports the first violation in vertex / lexicographic edge order.
pub fn is_embedding(target: &Graph, host: &Graph, map: &Embedding) -> Result<(), EmbeddingViolation> {
    if map.len() != target.n() {
        return Err(EmbeddingViolation::WrongLength { expected: target.n(), got: map.len() });
    }
    if let Some(v) = map.as_slice().iter().position(Option::is_none) {
        return Err(EmbeddingViolation::Unset(v));
    }
    map.check_partial(target, host)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cycle_into_complete_and_rotation() {
        let c4 = Graph::cycle(4);
        assert_eq!(is_embedding(&c4, &Graph::complete(4), &Embedding::identity(4)), Ok(()));
        let rot = Embedding::from_total(vec![1, 2, 3, 0]);
        assert_eq!(is_embedding(&c4, &c4, &rot), Ok(()));
    }

    #[test]
    fn triangle_never_fits_in_c4() {
        let k3 = Graph::complete(3);
        let c4 = Graph::cycle(4);
        // every injective map of 3 vertices into 4
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let r = is_embedding(&k3, &c4, &Embedding::from_total(vec![a, b, c]));
                    assert!(matches!(r, Err(EmbeddingViolation::MissingEdge { .. })), "{r:?}");
                }
            }
        }
    }

    #[test]
    fn partial_and_collision_reported() {
        let p3 = Graph::path(3);
        let host = Graph::complete(3);
        let partial = Embedding::from_partial(vec![Some(0), None, Some(2)]);
        assert_eq!(is_embedding(&p3, &host, &partial), Err(EmbeddingViolation::Unset(1)));
        assert_eq!(partial.check_partial(&p3, &host), Ok(()));
        let clash = Embedding::from_total(vec![0, 1, 0]);
        assert_eq!(
            is_embedding(&p3, &host, &clash),
            Err(EmbeddingViolation::Collision { first: 0, second: 2, image: 0 })
        );
    }

    proptest! {
        #[test]
        fn identity_is_always_valid(n in 1usize..15, edges in proptest::collection::vec((0usize..15, 0usize..15), 0..40)) {
            let mut b = crate::graph::GraphBuilder::new(n);
            for (u, v) in edges {
                if u < n && v < n && u != v { b.insert(u, v).unwrap(); }
            }
            let g = b.build();
            prop_assert_eq!(is_embedding(&g, &g, &Embedding::identity(n)), Ok(()));
        }
    }
}
