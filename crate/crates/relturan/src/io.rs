//! The `.hg` text format.
//!
//! Line 1 is `r n m`; each of the following `m` lines lists the `r` vertex
//! ids of one edge, strictly increasing, separated by single spaces. UTF-8,
//! LF line endings. Duplicate edges are rejected on load.

use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub fn parse_hg(text: &str) -> Result<Hypergraph> {
    let mut lines = text.split('\n');
    let header = lines.next().ok_or_else(|| Error::parse("empty input"))?;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 3 {
        return Err(Error::parse(format!("header must be 'r n m', got {:?}", header)));
    }
    let r: usize = fields[0].parse().map_err(|_| Error::parse("bad uniformity"))?;
    let n: usize = fields[1].parse().map_err(|_| Error::parse("bad vertex count"))?;
    let m: usize = fields[2].parse().map_err(|_| Error::parse("bad edge count"))?;
    if r < 2 {
        return Err(Error::parse("uniformity must be at least 2"));
    }
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let line = lines
            .next()
            .ok_or_else(|| Error::parse(format!("expected {} edges, found {}", m, i)))?;
        let mut edge = Vec::with_capacity(r);
        for tok in line.split(' ') {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::parse(format!("bad vertex id {:?} on edge line {}", tok, i + 1)))?;
            edge.push(v);
        }
        if edge.len() != r {
            return Err(Error::parse(format!("edge line {} has {} ids, expected {}", i + 1, edge.len(), r)));
        }
        if edge.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(format!("edge line {} is not strictly increasing", i + 1)));
        }
        edges.push(edge);
    }
    for extra in lines {
        if !extra.is_empty() {
            return Err(Error::parse("trailing content after edge list"));
        }
    }
    Hypergraph::new(r, n, edges).map_err(|e| Error::parse(e.to_string()))
}

pub fn format_hg(h: &Hypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.uniformity(), h.vertex_count(), h.edge_count());
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_hg(path: impl AsRef<Path>) -> Result<Hypergraph> {
    parse_hg(&std::fs::read_to_string(path)?)
}

pub fn write_hg(path: impl AsRef<Path>, h: &Hypergraph) -> Result<()> {
    std::fs::write(path, format_hg(h))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let h = crate::hosts::complete(5, 3);
        let text = format_hg(&h);
        assert!(text.ends_with('\n'));
        let back = parse_hg(&text).unwrap();
        assert_eq!(h, back);
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(parse_hg("3 4 2\n0 1 2\n0 1 2\n").is_err());
        assert!(parse_hg("3 4 1\n0 2 1\n").is_err());
        assert!(parse_hg("3 4 1\n0 1\n").is_err());
        assert!(parse_hg("1 4 0\n").is_err());
        assert!(parse_hg("").is_err());
    }
}
