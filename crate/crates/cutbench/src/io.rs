//! Instance file formats: weighted edge lists and graph6.
//!
//! The edge-list format is the one used by published Max-Cut instance
//! collections: a `n m` header line, then one `u v w` line per edge with
//! 1-based endpoints `u < v` and an optional decimal weight (default 1).
//! Writing uses single spaces, `\n` endings, edges sorted by `(u, v)` and
//! shortest round-trip weight formatting, so parse∘write is the identity.
//!
//! graph6 support is decode-only: the crate ingests published graph
//! collections but never publishes them.

use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the edge-list format. Indices are 1-based in the file and 0-based
/// in the returned graph.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input, expected `n m` header"))?;
    let mut fields = header.split_whitespace();
    let n: usize = fields
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(1, "header must start with a vertex count"))?;
    let m: usize = fields
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(1, "header must be `n m`"))?;
    if fields.next().is_some() {
        return Err(parse_err(1, "header must be exactly `n m`"));
    }
    if n == 0 {
        return Err(parse_err(1, "vertex count must be positive"));
    }

    let mut triples = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let mut fields = line.split_whitespace();
        let u: usize = fields
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(lineno, "expected `u v [w]`"))?;
        let v: usize = fields
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(lineno, "expected `u v [w]`"))?;
        let w: f64 = match fields.next() {
            Some(t) => t
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad weight {t:?}")))?,
            None => 1.0,
        };
        if fields.next().is_some() {
            return Err(parse_err(lineno, "too many fields, expected `u v [w]`"));
        }
        if u == v {
            return Err(parse_err(lineno, format!("self-loop at vertex {u}")));
        }
        if !(1..=n).contains(&u) || !(1..=n).contains(&v) {
            return Err(parse_err(
                lineno,
                format!("endpoint out of range 1..={n}"),
            ));
        }
        if u > v {
            return Err(parse_err(lineno, "endpoints must satisfy u < v"));
        }
        if !w.is_finite() {
            return Err(parse_err(lineno, "weight must be finite"));
        }
        if !seen.insert((u, v)) {
            return Err(parse_err(lineno, format!("duplicate edge ({u}, {v})")));
        }
        triples.push((u - 1, v - 1, w));
    }
    if triples.len() != m {
        return Err(parse_err(
            triples.len() + 1,
            format!("header promised {m} edges, found {}", triples.len()),
        ));
    }
    Graph::new(n, triples)
}

/// Writes the edge-list format; inverse of [`parse_edge_list`].
///
/// Unit-weight graphs omit the weight column entirely. Other weights use
/// Rust's shortest round-trip decimal form, which preserves every `f64`
/// bit-exactly through a parse.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    let unit = g.is_unit_weight();
    for e in g.edges() {
        if unit {
            out.push_str(&format!("{} {}\n", e.u + 1, e.v + 1));
        } else {
            out.push_str(&format!("{} {} {:?}\n", e.u + 1, e.v + 1, e.w));
        }
    }
    out
}

/// Decodes one graph6 line into a unit-weight graph.
///
/// Accepts the standard encoding: an optional `>>graph6<<` prefix, a size
/// field (single byte below 126, or `126` followed by an 18-bit big-endian
/// size), then the upper adjacency triangle in column-major order packed
/// into 6-bit groups offset by 63.
pub fn parse_graph6(line: &str) -> Result<Graph> {
    let line = line.trim_end_matches(['\r', '\n']);
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if let Some(&bad) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(parse_err(1, format!("byte {bad} outside graph6 range 63..=126")));
    }
    if bytes.is_empty() {
        return Err(parse_err(1, "empty graph6 string"));
    }
    let (n, rest) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(parse_err(1, "graph6 sizes beyond 18 bits are not supported"));
        }
        if bytes.len() < 4 {
            return Err(parse_err(1, "truncated graph6 size field"));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b as usize - 63));
        (n, &bytes[4..])
    } else {
        (bytes[0] as usize - 63, &bytes[1..])
    };
    if n == 0 {
        return Err(parse_err(1, "graph6 vertex count must be positive"));
    }
    let nbits = n * (n - 1) / 2;
    let expected = nbits.div_ceil(6);
    if rest.len() != expected {
        return Err(parse_err(
            1,
            format!(
                "graph6 body has {} groups, expected {expected} for n = {n}",
                rest.len()
            ),
        ));
    }
    let mut edges = Vec::new();
    let mut bit_idx = 0;
    for v in 1..n {
        for u in 0..v {
            let group = rest[bit_idx / 6] as usize - 63;
            if group & (1 << (5 - bit_idx % 6)) != 0 {
                edges.push((u, v, 1.0));
            }
            bit_idx += 1;
        }
    }
    // Padding bits after the triangle must be zero.
    while bit_idx < expected * 6 {
        let group = rest[bit_idx / 6] as usize - 63;
        if group & (1 << (5 - bit_idx % 6)) != 0 {
            return Err(parse_err(1, "nonzero padding bits in graph6 body"));
        }
        bit_idx += 1;
    }
    Graph::new(n, edges)
}

/// Parses a file of graph6 lines, one graph per non-empty line.
pub fn read_graph6_lines(text: &str) -> Result<Vec<Graph>> {
    let mut graphs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_graph6(line) {
            Ok(g) => graphs.push(g),
            Err(Error::Parse { msg, .. }) => return Err(parse_err(idx + 1, msg)),
            Err(e) => return Err(e),
        }
    }
    Ok(graphs)
}
