use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::{Graph, GraphError};

/// Reads a whitespace-separated edge list. Lines starting with `#` and blank
/// lines are skipped. Tokens may be arbitrary strings; ids are assigned by
/// first appearance.
pub fn load_edge_list(path: impl AsRef<Path>, extract_lcc: bool) -> Result<Graph, GraphError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let g = parse_edge_list(&text, extract_lcc)?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    Ok(match name {
        Some(name) => g.with_name(name),
        None => g,
    })
}

pub fn parse_edge_list(text: &str, extract_lcc: bool) -> Result<Graph, GraphError> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(GraphError::Parse {
                line: idx + 1,
                reason: format!("expected two tokens, found `{line}`"),
            });
        };
        if tokens.next().is_some() {
            return Err(GraphError::Parse {
                line: idx + 1,
                reason: format!("expected two tokens, found `{line}`"),
            });
        }
        let u = intern(&mut ids, &mut labels, a);
        let v = intern(&mut ids, &mut labels, b);
        edges.push((u, v));
    }

    let g = Graph::from_edges(labels.len(), edges)?.with_labels(labels);
    if g.edge_count() == 0 {
        return Err(GraphError::Empty);
    }
    Ok(if extract_lcc { g.largest_component() } else { g })
}

fn intern<'a>(ids: &mut HashMap<&'a str, usize>, labels: &mut Vec<String>, tok: &'a str) -> usize {
    *ids.entry(tok).or_insert_with(|| {
        labels.push(tok.to_string());
        labels.len() - 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_of_three() {
        let g = parse_edge_list("0 1\n1 2", false).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn duplicate_and_loop_dropped() {
        let g = parse_edge_list("0 1\n1 0\n1 1", false).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
    }

    #[test]
    fn lcc_extraction() {
        let text = "0 1\n1 2\n3 4\n";
        let g = parse_edge_list(text, true).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        let full = parse_edge_list(text, false).unwrap();
        assert_eq!(full.node_count(), 5);
    }

    #[test]
    fn string_labels_and_comments() {
        let g = parse_edge_list("# header\nalice bob\n\nbob carol\n", false).unwrap();
        assert_eq!(g.labels(), &["alice", "bob", "carol"]);
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = parse_edge_list("0 1\n2\n", false).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err}");
        let err = parse_edge_list("0 1 2\n", false).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
    }

    #[test]
    fn empty_is_error() {
        assert!(matches!(parse_edge_list("# nothing\n", false), Err(GraphError::Empty)));
        assert!(matches!(parse_edge_list("3 3\n", false), Err(GraphError::Empty)));
    }

    #[test]
    fn loading_twice_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("toy.txt");
        fs::write(&path, "b a\nc a\nd c\n").unwrap();
        let g1 = load_edge_list(&path, true).unwrap();
        let g2 = load_edge_list(&path, true).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(g1.name(), Some("toy"));
    }
}
