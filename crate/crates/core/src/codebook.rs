//! Codebook text format shared by sender and receiver.
//!
//! ```text
//! graphcode v1
//! vertices <N>
//! edge <id> <u> <v>        one per edge, ids 1..m in order
//! tree <id> <id> ...       optional, exactly N-1 ids
//! ```
//!
//! Without a `tree` line the breadth-first tree is used. When present, the
//! order of the listed ids is the parity-check row order, and therefore the
//! bit order of every syndrome.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphicalCode, SpanningTree};

pub const HEADER: &str = "graphcode v1";

/// The K5 code of the worked example: edge labels and tree chosen so the
/// fundamental matrices and syndrome table match the published figures.
pub const WORKED_K5: &str = include_str!("../fixtures/k5_worked_example.graphcode");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    graph: Graph,
    /// 0-based edge indices in row order.
    tree: Option<Vec<usize>>,
}

impl Codebook {
    pub fn new(graph: Graph, tree: Option<Vec<usize>>) -> Result<Self> {
        if let Some(t) = &tree {
            SpanningTree::from_edges(&graph, t)?;
        }
        Ok(Self { graph, tree })
    }

    pub fn worked_k5() -> Self {
        WORKED_K5.parse().expect("bundled codebook is valid")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn tree(&self) -> Option<&[usize]> {
        self.tree.as_deref()
    }

    pub fn spanning_tree(&self) -> SpanningTree {
        match &self.tree {
            Some(t) => SpanningTree::from_edges(&self.graph, t).expect("validated on construction"),
            None => SpanningTree::bfs(&self.graph),
        }
    }

    pub fn to_code(&self) -> Result<GraphicalCode> {
        GraphicalCode::with_tree(self.graph.clone(), self.spanning_tree())
    }
}

impl fmt::Display for Codebook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{HEADER}")?;
        writeln!(f, "vertices {}", self.graph.vertex_count())?;
        for (i, e) in self.graph.edges().iter().enumerate() {
            writeln!(f, "edge {} {} {}", i + 1, e.u, e.v)?;
        }
        if let Some(t) = &self.tree {
            let ids: Vec<String> = t.iter().map(|e| (e + 1).to_string()).collect();
            writeln!(f, "tree {}", ids.join(" "))?;
        }
        Ok(())
    }
}

fn parse_num(tok: Option<&str>, line_no: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse(format!("line {line_no}: missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::Parse(format!("line {line_no}: bad {what} {tok:?}")))
}

impl FromStr for Codebook {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        match lines.next() {
            Some((_, HEADER)) => {}
            Some((n, other)) => {
                return Err(Error::Parse(format!(
                    "line {n}: expected {HEADER:?}, found {other:?}"
                )))
            }
            None => return Err(Error::Parse("empty codebook".into())),
        }

        let mut vertices = None;
        let mut edges = Vec::new();
        let mut tree = None;
        for (n, line) in lines {
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("vertices") if vertices.is_none() && edges.is_empty() => {
                    vertices = Some(parse_num(toks.next(), n, "vertex count")?);
                }
                Some("edge") if vertices.is_some() && tree.is_none() => {
                    let id = parse_num(toks.next(), n, "edge id")?;
                    if id != edges.len() + 1 {
                        return Err(Error::Parse(format!(
                            "line {n}: edge id {id} out of sequence (expected {})",
                            edges.len() + 1
                        )));
                    }
                    let u = parse_num(toks.next(), n, "endpoint")?;
                    let v = parse_num(toks.next(), n, "endpoint")?;
                    edges.push((u, v));
                }
                Some("tree") if tree.is_none() && !edges.is_empty() => {
                    let ids = toks
                        .by_ref()
                        .map(|t| {
                            let id = parse_num(Some(t), n, "tree edge id")?;
                            id.checked_sub(1)
                                .ok_or_else(|| Error::Parse(format!("line {n}: edge id 0")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    tree = Some(ids);
                }
                _ => return Err(Error::Parse(format!("line {n}: unexpected {line:?}"))),
            }
            if toks.next().is_some() {
                return Err(Error::Parse(format!("line {n}: trailing tokens in {line:?}")));
            }
        }
        let vertices = vertices.ok_or_else(|| Error::Parse("missing vertices line".into()))?;
        Codebook::new(Graph::new(vertices, &edges)?, tree)
    }
}

/// Parses a plain edge list: one `u v` pair per line, `#` comments allowed,
/// optional `vertices N` line. Without it the vertex count is the largest id.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut vertices = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["vertices", n] => vertices = Some(parse_num(Some(n), i + 1, "vertex count")?),
            [u, v] => edges.push((
                parse_num(Some(u), i + 1, "endpoint")?,
                parse_num(Some(v), i + 1, "endpoint")?,
            )),
            _ => return Err(Error::Parse(format!("line {}: expected `u v`", i + 1))),
        }
    }
    let n = vertices.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0));
    Graph::new(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;

    #[test]
    fn worked_k5_parses() {
        let cb = Codebook::worked_k5();
        assert_eq!(cb.graph().vertex_count(), 5);
        assert_eq!(cb.graph().edge_count(), 10);
        assert_eq!(cb.tree(), Some(&[0, 4, 9, 6][..]));
    }

    #[test]
    fn text_roundtrip() {
        let cb = Codebook::new(complete_graph(4).unwrap(), Some(vec![5, 0, 3])).unwrap();
        let text = cb.to_string();
        assert!(text.starts_with("graphcode v1\nvertices 4\nedge 1 1 2\n"));
        assert!(text.ends_with("tree 6 1 4\n"));
        assert_eq!(text.parse::<Codebook>().unwrap(), cb);

        let plain = Codebook::new(complete_graph(3).unwrap(), None).unwrap();
        assert_eq!(plain.to_string().parse::<Codebook>().unwrap(), plain);
    }

    #[test]
    fn rejects_malformed() {
        let bad = [
            "",
            "graphcode v2\nvertices 3\n",
            "graphcode v1\nedge 1 1 2\n",
            "graphcode v1\nvertices 3\nedge 2 1 2\n",
            "graphcode v1\nvertices 3\nedge 1 1 2\nedge 2 2 3\nedge 3 1 3\ntree 1\n",
            "graphcode v1\nvertices 3\nedge 1 1 2\nedge 2 2 3\nedge 3 1 3 4\n",
            "graphcode v1\nvertices 3\nedge 1 1 2\nedge 2 2 3\nedge 3 1 2\n",
            "graphcode v1\nvertices 3\nedge 1 1 2\ntree 1 2\nedge 2 2 3\n",
        ];
        for text in bad {
            assert!(text.parse::<Codebook>().is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn edge_list_file() {
        let g = parse_edge_list("# triangle\n1 2\n2 3\n3 1 # closing edge\n").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
        let g = parse_edge_list("vertices 2\n1 2\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert!(parse_edge_list("1 2 3\n").is_err());
        assert!(parse_edge_list("1 2\n3 4\n").is_err());
    }
}
