//! Edge-list text format: a header line `n <N>`, then one `u v` pair per
//! line with `u < v`, 0-indexed and whitespace-separated. Blank lines and
//! lines starting with `#` are ignored.

use std::fmt::Write as _;

use super::{Graph, GraphBuilder, GraphError};

pub fn read_edge_list(text: &str) -> Result<Graph, GraphError> {
    let parse_err = |line: usize, message: String| GraphError::Parse { line, message };
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n <N>`".into()))?;
    let mut hparts = header.split_whitespace();
    let n = match (hparts.next(), hparts.next(), hparts.next()) {
        (Some("n"), Some(count), None) => {
            count.parse::<usize>().map_err(|_| parse_err(hline, format!("bad vertex count {count:?}")))?
        }
        _ => return Err(parse_err(hline, format!("expected `n <N>`, got {header:?}"))),
    };
    let mut b = GraphBuilder::new(n);
    for (lineno, line) in lines {
        let mut parts = line.split_whitespace();
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(c), None) => {
                let u = a.parse::<usize>().map_err(|_| parse_err(lineno, format!("bad vertex {a:?}")))?;
                let v = c.parse::<usize>().map_err(|_| parse_err(lineno, format!("bad vertex {c:?}")))?;
                (u, v)
            }
            _ => return Err(parse_err(lineno, format!("expected `u v`, got {line:?}"))),
        };
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if u > v {
            return Err(parse_err(lineno, format!("edge ({u}, {v}) must be written with u < v")));
        }
        if !b.insert(u, v)? {
            return Err(GraphError::DuplicateEdge(u, v));
        }
    }
    Ok(b.build())
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 10 * g.edge_count());
    writeln!(out, "n {}", g.n()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
