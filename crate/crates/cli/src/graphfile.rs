//! Text format for bipartite graphs given to `cover`.
//!
//! One line per B-vertex: `b_label: a_label a_label ...`. Blank lines and
//! lines starting with `#` are skipped. Labels are arbitrary tokens; vertex
//! indices follow first appearance.

use std::collections::HashMap;

use prodset_core::coverlemma::Bipartite;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledGraph {
    pub graph: Bipartite,
    pub a_labels: Vec<String>,
    pub b_labels: Vec<String>,
}

pub fn parse_graph(text: &str) -> Result<LabelledGraph, CliError> {
    let mut a_index: HashMap<String, usize> = HashMap::new();
    let mut a_labels = Vec::new();
    let mut b_labels: Vec<String> = Vec::new();
    let mut adjacency = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (b, rest) = line.split_once(':').ok_or_else(|| {
            CliError::Input(format!("line {}: expected `b: a a ...`", lineno + 1))
        })?;
        let b = b.trim();
        if b.is_empty() {
            return Err(CliError::Input(format!("line {}: empty b label", lineno + 1)));
        }
        if b_labels.iter().any(|x| x == b) {
            return Err(CliError::Input(format!("line {}: b label {b:?} repeated", lineno + 1)));
        }
        let mut nbrs = Vec::new();
        for a in rest.split_whitespace() {
            let next = a_labels.len();
            let id = *a_index.entry(a.to_string()).or_insert_with(|| {
                a_labels.push(a.to_string());
                next
            });
            if !nbrs.contains(&id) {
                nbrs.push(id);
            }
        }
        b_labels.push(b.to_string());
        adjacency.push(nbrs);
    }
    if b_labels.is_empty() {
        return Err(CliError::Input("graph has no b-vertices".into()));
    }
    let graph = Bipartite::new(a_labels.len(), adjacency)?;
    Ok(LabelledGraph {
        graph,
        a_labels,
        b_labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_labels_in_order() {
        let g = parse_graph("# path\nb1: p q\n\nb2: q r\nb3: r\n").unwrap();
        assert_eq!(g.a_labels, ["p", "q", "r"]);
        assert_eq!(g.b_labels, ["b1", "b2", "b3"]);
        assert_eq!(g.graph.neighbours(1), [1, 2]);
        assert_eq!(g.graph.degree_bound(), 2);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse_graph("b1 p q").is_err());
        assert!(parse_graph("b1:").is_err());
        assert!(parse_graph("b1: p\nb1: q").is_err());
        assert!(parse_graph("# nothing").is_err());
        assert!(parse_graph(": p").is_err());
    }
}
