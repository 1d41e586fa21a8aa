//! Edge-list text format.
//!
//! ```text
//! p <n> <m>
//! e <u> <v>
//! ...
//! ```
//!
//! Ids are 0-based and must be below `n`. Blank lines and lines starting
//! with `c` are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("missing `p` header")]
    MissingHeader,
    #[error("header declares {declared} edges but {found} were read")]
    EdgeCount { declared: usize, found: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("edge-list output needs vertex ids 0..n; relabel the graph first")]
pub struct NonContiguousIds;

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut graph: Option<Graph> = None;
    let mut declared = 0;
    let mut found = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let syntax = |msg: &str| ParseError::Syntax {
            line,
            msg: msg.to_string(),
        };
        let mut fields = raw.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        let nums: Vec<&str> = fields.collect();
        let parse = |s: &str| s.parse::<usize>().map_err(|_| syntax(&format!("bad integer `{s}`")));
        match tag {
            "c" => {}
            "p" => {
                if graph.is_some() {
                    return Err(syntax("duplicate `p` header"));
                }
                if nums.len() != 2 {
                    return Err(syntax("expected `p <n> <m>`"));
                }
                let n = parse(nums[0])?;
                declared = parse(nums[1])?;
                if n > u32::MAX as usize {
                    return Err(syntax("too many vertices"));
                }
                graph = Some(Graph::with_vertices(n));
            }
            "e" => {
                let g = graph.as_mut().ok_or_else(|| syntax("edge before `p` header"))?;
                if nums.len() != 2 {
                    return Err(syntax("expected `e <u> <v>`"));
                }
                let (u, v) = (parse(nums[0])?, parse(nums[1])?);
                if u >= g.order() || v >= g.order() {
                    return Err(syntax(&format!("vertex out of range in edge {u}-{v}")));
                }
                g.add_edge(u as u32, v as u32)
                    .map_err(|source| ParseError::Graph { line, source })?;
                found += 1;
            }
            other => return Err(syntax(&format!("unknown line type `{other}`"))),
        }
    }
    let g = graph.ok_or(ParseError::MissingHeader)?;
    if found != declared {
        return Err(ParseError::EdgeCount { declared, found });
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> Result<String, NonContiguousIds> {
    if !g.has_contiguous_ids() {
        return Err(NonContiguousIds);
    }
    let mut out = format!("p {} {}\n", g.order(), g.size());
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "p 4 3\ne 0 1\ne 1 2\ne 2 3\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(write_edge_list(&g).unwrap(), text);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edge_list("c hello\n\np 2 1\ne 1 0\n").unwrap();
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn rejects_loops_and_duplicates_with_line() {
        let err = parse_edge_list("p 3 2\ne 0 1\ne 1 1\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Graph {
                line: 3,
                source: GraphError::SelfLoop(1)
            }
        );
        let err = parse_edge_list("p 3 2\ne 0 1\ne 1 0\n").unwrap_err();
        assert!(err.to_string().starts_with("line 3:"), "{err}");
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(
            parse_edge_list("e 0 1\n").unwrap_err().to_string(),
            "line 1: edge before `p` header"
        );
        assert!(parse_edge_list("p 2 1\ne 0 5\n").is_err());
        assert!(parse_edge_list("p 2 2\ne 0 1\n").is_err());
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("p 2 x\n").is_err());
    }

    #[test]
    fn writer_requires_contiguous_ids() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let h = g.delete_vertices(&[0]).unwrap();
        assert!(write_edge_list(&h).is_err());
        assert!(write_edge_list(&h.relabeled().0).is_ok());
    }
}
