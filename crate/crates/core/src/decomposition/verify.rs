use serde::{Deserialize, Serialize};

use super::{isomorphism, Decomposition};
use crate::targets::density::{is_dense, is_minimally_dense};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub pass: bool,
    /// First violation found, if any.
    pub detail: Option<String>,
}

impl PropertyRecord {
    fn ok() -> Self {
        Self { pass: true, detail: None }
    }

    fn fail(detail: String) -> Self {
        Self { pass: false, detail: Some(detail) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub partition: PropertyRecord,
    /// The remainder is sparse.
    pub p1: PropertyRecord,
    /// Every spot is minimally dense with fewer than `2 delta + 2` vertices.
    pub p2: PropertyRecord,
    /// Spots within a class are isomorphic to its type.
    pub p3: PropertyRecord,
    /// Each class covers at most `eps n` vertices.
    pub p4: PropertyRecord,
    /// Spots within a class are non-adjacent and share no neighbours.
    pub p5: PropertyRecord,
    pub pass: bool,
}

/// Recomputes every property from scratch.
pub fn verify(dec: &Decomposition) -> VerifyReport {
    let f = &dec.target;
    let n = f.n();
    let delta = dec.delta;

    let partition = {
        let mut count = vec![0usize; n];
        let mut bad = None;
        for &v in dec.f_prime.iter().chain(dec.classes.iter().flat_map(|c| c.members.iter().flatten())) {
            if v >= n {
                bad = Some(format!("vertex {v} out of range"));
                break;
            }
            count[v] += 1;
        }
        match bad
            .or_else(|| count.iter().position(|&c| c != 1).map(|v| format!("vertex {v} covered {} times", count[v])))
        {
            None => PropertyRecord::ok(),
            Some(d) => PropertyRecord::fail(d),
        }
    };

    let p1 = if dec.f_prime.len() >= 3 && is_dense(&f.induced(&dec.f_prime), delta) {
        PropertyRecord::fail("remainder contains a dense subgraph".into())
    } else {
        PropertyRecord::ok()
    };

    let mut p2 = PropertyRecord::ok();
    let mut p3 = PropertyRecord::ok();
    let mut p4 = PropertyRecord::ok();
    let mut p5 = PropertyRecord::ok();
    for (h, class) in dec.classes.iter().enumerate() {
        for m in &class.members {
            let spot = f.induced(m);
            if p2.pass {
                if m.len() != class.s_h || m.len() >= 2 * delta + 2 {
                    p2 = PropertyRecord::fail(format!("class {h} spot {m:?} has {} vertices", m.len()));
                } else if !is_minimally_dense(&spot, delta) {
                    p2 = PropertyRecord::fail(format!("class {h} spot {m:?} is not minimally dense"));
                }
            }
            if p3.pass && isomorphism(&spot, &class.iso_type).is_none() {
                p3 = PropertyRecord::fail(format!("class {h} spot {m:?} is not isomorphic to the class type"));
            }
        }
        let total: usize = class.members.iter().map(Vec::len).sum();
        if p4.pass && total as f64 > dec.epsilon_op * n as f64 + 1e-9 {
            p4 = PropertyRecord::fail(format!("class {h} covers {total} > eps n = {}", dec.epsilon_op * n as f64));
        }
        if p5.pass {
            'pairs: for (i, a) in class.members.iter().enumerate() {
                for b in &class.members[i + 1..] {
                    let adjacent = a.iter().any(|&x| b.iter().any(|&y| f.has_edge(x, y)));
                    let common =
                        (0..n).any(|z| a.iter().any(|&x| f.has_edge(x, z)) && b.iter().any(|&y| f.has_edge(y, z)));
                    if adjacent || common {
                        let why = if adjacent { "adjacent" } else { "share a neighbour" };
                        p5 = PropertyRecord::fail(format!("class {h}: spots {a:?} and {b:?} {why}"));
                        break 'pairs;
                    }
                }
            }
        }
    }
    let pass = partition.pass && p1.pass && p2.pass && p3.pass && p4.pass && p5.pass;
    VerifyReport { partition, p1, p2, p3, p4, p5, pass }
}
