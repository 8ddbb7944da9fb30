//! Plain-text graph files.
//!
//! ```text
//! #udg v1
//! n=<count> r=<radius>
//! <id> <x> <y> <weight>
//! ```
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! written graph reads back bit-identical.

use std::fmt::Write;

use backbone_core::{Error, Point, UdgGraph};

const MAGIC: &str = "#udg v1";

pub fn write_graph(g: &UdgGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "n={} r={}", g.len(), g.radius());
    for (id, p) in g.points().iter().enumerate() {
        let _ = writeln!(out, "{id} {} {} {}", p.x, p.y, p.weight);
    }
    out
}

fn field<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str, Error> {
    tok.and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=<value>`")))
}

fn float(tok: &str, line: usize) -> Result<f64, Error> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a number, found `{tok}`")))
}

/// Parses a graph file; node lines may come in any order but must cover
/// ids `0..n` exactly once.
pub fn read_graph(text: &str) -> Result<UdgGraph, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, MAGIC)) => {}
        Some((line, _)) => return Err(Error::parse(line, format!("expected `{MAGIC}`"))),
        None => return Err(Error::parse(1, "empty graph file")),
    }
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(2, "missing size line"))?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), "n", line)?
        .parse()
        .map_err(|_| Error::parse(line, "node count must be a non-negative integer"))?;
    let radius = float(field(toks.next(), "r", line)?, line)?;
    if toks.next().is_some() {
        return Err(Error::parse(line, "unexpected text after radius"));
    }

    let mut points: Vec<Option<Point>> = vec![None; n];
    for (line, text) in lines {
        let toks: Vec<&str> = text.split_whitespace().collect();
        let [id, x, y, w] = toks[..] else {
            return Err(Error::parse(line, "expected `<id> <x> <y> <weight>`"));
        };
        let id: usize = id
            .parse()
            .map_err(|_| Error::parse(line, format!("bad node id `{id}`")))?;
        let slot = points
            .get_mut(id)
            .ok_or_else(|| Error::parse(line, format!("node id {id} out of range")))?;
        if slot.is_some() {
            return Err(Error::parse(line, format!("node id {id} repeated")));
        }
        *slot = Some(Point::new(
            float(x, line)?,
            float(y, line)?,
            float(w, line)?,
        ));
    }
    let points = points
        .into_iter()
        .enumerate()
        .map(|(id, p)| p.ok_or_else(|| Error::parse(0, format!("node {id} missing"))))
        .collect::<Result<Vec<_>, _>>()?;
    UdgGraph::new(points, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use backbone_core::graph::{grid_topology, random_topology};

    #[test]
    fn round_trip_is_exact() {
        for seed in 0..20 {
            let g = random_topology(40, 100.0, 100.0, 23.7, seed).unwrap();
            let text = write_graph(&g);
            let back = read_graph(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(write_graph(&back), text);
        }
    }

    #[test]
    fn layout() {
        let g = grid_topology(1, 2, 5.0, 5.0).unwrap();
        assert_eq!(write_graph(&g), "#udg v1\nn=2 r=5\n0 0 0 0\n1 0 5 0\n");
    }

    #[test]
    fn out_of_order_lines() {
        let g = read_graph("#udg v1\nn=2 r=1\n1 0.5 0 0.1\n0 0 0 0\n\n").unwrap();
        assert_eq!(g.point(1).weight, 0.1);
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn rejects_malformed_files() {
        let cases = [
            ("", "parse-error"),
            ("udg\n", "parse-error"),
            ("#udg v1\nn=2\n", "parse-error"),
            ("#udg v1\nn=1 r=1\n0 0 0\n", "parse-error"),
            ("#udg v1\nn=1 r=1\n1 0 0 0\n", "parse-error"),
            ("#udg v1\nn=2 r=1\n0 0 0 0\n0 1 1 0\n", "parse-error"),
            ("#udg v1\nn=2 r=1\n0 0 0 0\n", "parse-error"),
            ("#udg v1\nn=1 r=1\n0 0 0 0.9\n", "invalid-parameter"),
            ("#udg v1\nn=1 r=-1\n0 0 0 0\n", "invalid-parameter"),
        ];
        for (text, name) in cases {
            assert_eq!(read_graph(text).unwrap_err().name(), name, "{text:?}");
        }
    }
}
