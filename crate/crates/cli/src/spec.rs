//! Graph specs: `atom (x atom)*` with atoms `Q<n>`, `P<m>`, `T<size>:<seed>`
//! and `file:<path>`.
//!
//! A `file:` path runs until an `x` that starts another atom, or the end.
//! The file lists parent indices, see [`read_parent_file`].

use std::sync::Arc;

use cnr_core::graphs::{hypercube, path_graph, product, random_tree, FactorGraph, GraphError, ProductGraph};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("graph spec `{spec}` at {pos}: {msg}")]
    Parse { spec: String, pos: usize, msg: String },
    #[error("graph spec `{spec}`: {source}")]
    Graph {
        spec: String,
        #[source]
        source: GraphError,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn starts_atom(rest: &str) -> bool {
    let mut c = rest.chars();
    match c.next() {
        Some('Q' | 'P' | 'T') => c.next().is_some_and(|d| d.is_ascii_digit()),
        _ => rest.starts_with("file:"),
    }
}

fn number(spec: &str, s: &str, pos: usize) -> Result<(usize, usize), SpecError> {
    let len = s.bytes().take_while(u8::is_ascii_digit).count();
    if len == 0 {
        return Err(SpecError::Parse { spec: spec.into(), pos, msg: "expected a number".into() });
    }
    let v =
        s[..len].parse().map_err(|_| SpecError::Parse { spec: spec.into(), pos, msg: "number out of range".into() })?;
    Ok((v, len))
}

/// Reads a tree given as parent indices: line `i` holds the parent of vertex
/// `i`, and the root's parent is `-1`. Blank lines and `#` comments are skipped.
pub fn read_parent_file(path: &str) -> Result<FactorGraph, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io { path: path.into(), source })?;
    let bad = |line: usize, msg: &str| SpecError::Parse { spec: path.into(), pos: line, msg: msg.into() };
    let mut parents: Vec<i64> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        parents.push(line.parse().map_err(|_| bad(no + 1, "expected a parent index or -1"))?);
    }
    let n = parents.len();
    if parents.iter().filter(|&&p| p < 0).count() != 1 {
        return Err(bad(0, "need exactly one root with parent -1"));
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (v, &p) in parents.iter().enumerate() {
        if p < -1 || p >= n as i64 || p == v as i64 {
            return Err(bad(0, &format!("vertex {v} has invalid parent {p}")));
        }
        if p >= 0 {
            edges.push((p as usize, v));
        }
    }
    for start in 0..n {
        let (mut v, mut steps) = (start as i64, 0);
        while v >= 0 {
            v = parents[v as usize];
            steps += 1;
            if steps > n {
                return Err(bad(0, &format!("vertex {start} does not reach the root")));
            }
        }
    }
    FactorGraph::from_edges(path, n, &edges).map_err(|source| SpecError::Graph { spec: path.into(), source })
}

/// Parses a spec into a product graph named after the spec.
pub fn parse_graph_spec(spec: &str) -> Result<ProductGraph, SpecError> {
    let graph_err = |source| SpecError::Graph { spec: spec.into(), source };
    let s = spec.trim();
    if s.is_empty() {
        return Err(SpecError::Parse { spec: spec.into(), pos: 0, msg: "empty spec".into() });
    }
    let mut factors: Vec<Arc<FactorGraph>> = Vec::new();
    let mut pos = 0;
    let mut cubes = 0usize;
    let mut atoms = 0usize;
    loop {
        let rest = &s[pos..];
        atoms += 1;
        if let Some(path_start) = rest.strip_prefix("file:") {
            let mut end = path_start.len();
            for (i, _) in path_start.match_indices('x') {
                if starts_atom(&path_start[i + 1..]) {
                    end = i;
                    break;
                }
            }
            let path = &path_start[..end];
            if path.is_empty() {
                return Err(SpecError::Parse { spec: spec.into(), pos: pos + 5, msg: "empty file path".into() });
            }
            factors.push(Arc::new(read_parent_file(path)?));
            pos += 5 + end;
        } else {
            let head = rest.chars().next().expect("nonempty");
            let body = &rest[1..];
            let (value, len) = number(spec, body, pos + 1)?;
            let mut used = 1 + len;
            match head {
                'Q' => {
                    let q = hypercube(value).map_err(graph_err)?;
                    factors.extend(q.factors().iter().cloned());
                    cubes += 1;
                }
                'P' => factors.push(Arc::new(path_graph(value).map_err(graph_err)?)),
                'T' => {
                    let after = &body[len..];
                    let Some(seed_part) = after.strip_prefix(':') else {
                        return Err(SpecError::Parse {
                            spec: spec.into(),
                            pos: pos + used,
                            msg: "expected `:<seed>`".into(),
                        });
                    };
                    let (seed, slen) = number(spec, seed_part, pos + used + 1)?;
                    used += 1 + slen;
                    factors.push(Arc::new(random_tree(value, seed as u64).map_err(graph_err)?));
                }
                _ => {
                    return Err(SpecError::Parse {
                        spec: spec.into(),
                        pos,
                        msg: format!("unknown atom `{head}`; expected Q, P, T or file:"),
                    })
                }
            }
            pos += used;
        }
        if pos == s.len() {
            break;
        }
        if !s[pos..].starts_with('x') {
            return Err(SpecError::Parse { spec: spec.into(), pos, msg: "expected `x` between atoms".into() });
        }
        pos += 1;
        if pos == s.len() {
            return Err(SpecError::Parse { spec: spec.into(), pos, msg: "dangling `x`".into() });
        }
    }
    if atoms == 1 && cubes == 1 {
        return hypercube(factors.len()).map_err(graph_err);
    }
    Ok(product(factors).map_err(graph_err)?.with_name(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_and_products() {
        let q4 = parse_graph_spec("Q4").unwrap();
        assert!(q4.is_hypercube());
        assert_eq!(q4.dimension(), 4);
        assert_eq!(q4.name(), "Q4");
        let grid = parse_graph_spec("P3xP5").unwrap();
        assert_eq!(grid.vertex_count(), Some(15));
        assert_eq!(grid.name(), "P3xP5");
        let t = parse_graph_spec("T7:42xP2").unwrap();
        assert_eq!(t.vertex_count(), Some(14));
        assert_eq!(parse_graph_spec("Q2xP3").unwrap().dimension(), 3);
    }

    #[test]
    fn errors_carry_positions() {
        for (bad, at) in [("", 0), ("Z3", 0), ("P3x", 3), ("P3yP4", 2), ("T5", 2), ("Q", 1), ("P3xT4:", 6)] {
            match parse_graph_spec(bad) {
                Err(SpecError::Parse { pos, .. }) => assert_eq!(pos, at, "{bad}"),
                other => panic!("{bad}: {other:?}"),
            }
        }
        assert!(matches!(parse_graph_spec("P0"), Err(SpecError::Graph { .. })));
    }

    #[test]
    fn parent_files() {
        let dir = std::env::temp_dir().join(format!("cnr-spec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("star.txt");
        std::fs::write(&path, "# a star\n-1\n0\n0\n0\n").unwrap();
        let spec = format!("file:{}xP2", path.display());
        let g = parse_graph_spec(&spec).unwrap();
        assert_eq!(g.vertex_count(), Some(8));
        assert_eq!(g.factor(0).degree(0), 3);
        std::fs::write(&path, "-1\n2\n1\n").unwrap();
        assert!(parse_graph_spec(&spec).is_err());
        std::fs::remove_dir_all(dir).unwrap();
    }
}
