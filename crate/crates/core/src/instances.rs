//! Instance generators and file formats.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{ordered, Graph, GraphError, Vertex};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("no connected instance after {0} attempts")]
    RetriesExhausted(usize),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn check_dims(r: usize, c: usize) -> Result<(), InstanceError> {
    if r < 2 || c < 2 {
        return Err(InstanceError::Params(format!(
            "grid dimensions must be at least 2x2, got {r}x{c}"
        )));
    }
    Ok(())
}

/// `r x c` grid; cell `(i, j)` is vertex `i * c + j`.
pub fn gen_grid(r: usize, c: usize) -> Result<Graph, InstanceError> {
    check_dims(r, c)?;
    let mut edges = Vec::new();
    for i in 0..r {
        for j in 0..c {
            let v = i * c + j;
            if j + 1 < c {
                edges.push((v, v + 1));
            }
            if i + 1 < r {
                edges.push((v, v + c));
            }
        }
    }
    Ok(Graph::new(r * c, &edges)?)
}

/// `r x c` queen graph: cells sharing a row, column or diagonal.
pub fn gen_queen(r: usize, c: usize) -> Result<Graph, InstanceError> {
    check_dims(r, c)?;
    let n = r * c;
    let mut edges = Vec::new();
    for a in 0..n {
        let (i, j) = ((a / c) as i64, (a % c) as i64);
        for b in a + 1..n {
            let (k, l) = ((b / c) as i64, (b % c) as i64);
            if i == k || j == l || (i - k).abs() == (j - l).abs() {
                edges.push((a, b));
            }
        }
    }
    Ok(Graph::new(n, &edges)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavemanParams {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: f64,
    pub seed: u64,
}

pub const CAVEMAN_MAX_ATTEMPTS: usize = 1000;

/// Relaxed caveman graph.
///
/// Starts from `beta` disjoint cliques `K_alpha` (clique `q` holds vertices
/// `q*alpha .. (q+1)*alpha`). Edges are visited in lexicographic order; with
/// probability `gamma` one endpoint, chosen uniformly, is kept and the other
/// is re-targeted to a uniform vertex of a different clique than the kept
/// endpoint's. A move that would create a duplicate edge is skipped. The
/// whole pass is repeated from the same RNG stream until the result is
/// connected.
pub fn gen_caveman(p: CavemanParams) -> Result<Graph, InstanceError> {
    let CavemanParams {
        alpha,
        beta,
        gamma,
        seed,
    } = p;
    if alpha < 2 || beta < 1 || !(gamma > 0.0 && gamma < 1.0) {
        return Err(InstanceError::Params(format!(
            "need alpha >= 2, beta >= 1, 0 < gamma < 1 (got {alpha}, {beta}, {gamma})"
        )));
    }
    let n = alpha * beta;
    if beta == 1 {
        return Ok(Graph::complete(alpha));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..CAVEMAN_MAX_ATTEMPTS {
        let mut present = std::collections::BTreeSet::new();
        for q in 0..beta {
            for a in 0..alpha {
                for b in a + 1..alpha {
                    present.insert((q * alpha + a, q * alpha + b));
                }
            }
        }
        let original: Vec<(Vertex, Vertex)> = present.iter().copied().collect();
        for (u, v) in original {
            if !rng.gen_bool(gamma) {
                continue;
            }
            let keep = if rng.gen_bool(0.5) { u } else { v };
            let home = keep / alpha;
            let pick = rng.gen_range(0..n - alpha);
            let target = if pick >= home * alpha {
                pick + alpha
            } else {
                pick
            };
            let e = ordered(keep, target);
            if present.contains(&e) {
                continue;
            }
            present.remove(&(u, v));
            present.insert(e);
        }
        let edges: Vec<_> = present.into_iter().collect();
        match Graph::new(n, &edges) {
            Ok(g) => return Ok(g),
            Err(GraphError::Disconnected { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(InstanceError::RetriesExhausted(CAVEMAN_MAX_ATTEMPTS))
}

/// Mycielski graphs: `mycielski(2)` is `K_2`, each step applies the
/// Mycielskian. `mycielski(4)` and `mycielski(5)` have 11 and 23 vertices.
pub fn mycielski(k: usize) -> Result<Graph, InstanceError> {
    if k < 2 {
        return Err(InstanceError::Params(
            "Mycielski order must be at least 2".into(),
        ));
    }
    let mut n = 2;
    let mut edges = vec![(0, 1)];
    for _ in 2..k {
        // Vertices 0..n stay, n..2n are shadows, 2n is the apex.
        let mut next = edges.clone();
        for &(u, v) in &edges {
            next.push((u, n + v));
            next.push((v, n + u));
        }
        for i in 0..n {
            next.push((n + i, 2 * n));
        }
        edges = next;
        n = 2 * n + 1;
    }
    Ok(Graph::new(n, &edges)?)
}

/// Parses DIMACS `.col` text (`c` comments, one `p edge N M` line, `e u v`
/// edges with 1-based vertices). Duplicate edges are dropped with a warning.
pub fn parse_dimacs(text: &str) -> Result<Graph, InstanceError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| InstanceError::Parse { line, msg };
        let mut tok = raw.split_whitespace();
        match tok.next() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(err("second problem line".into()));
                }
                let _format = tok.next().ok_or_else(|| err("missing format".into()))?;
                let n = parse_num(tok.next(), line, "vertex count")?;
                let m = parse_num(tok.next(), line, "edge count")?;
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or_else(|| err("edge before problem line".into()))?;
                let u = parse_num(tok.next(), line, "endpoint")?;
                let v = parse_num(tok.next(), line, "endpoint")?;
                for w in [u, v] {
                    if w == 0 || w > n {
                        return Err(err(format!("vertex {w} outside 1..={n}")));
                    }
                }
                if u == v {
                    return Err(err(format!("self-loop on vertex {u}")));
                }
                edges.push((line, ordered(u - 1, v - 1)));
            }
            Some(other) => return Err(err(format!("unexpected line type '{other}'"))),
        }
    }
    let (n, m) = header.ok_or(InstanceError::Parse {
        line: 0,
        msg: "missing problem line".into(),
    })?;
    let mut seen = std::collections::HashSet::new();
    let mut unique = Vec::new();
    for (line, e) in edges {
        if seen.insert(e) {
            unique.push(e);
        } else {
            log::debug!("line {line}: duplicate edge {} {}", e.0 + 1, e.1 + 1);
        }
    }
    if unique.len() != m {
        log::warn!(
            "problem line declares {m} edges, found {} distinct",
            unique.len()
        );
    }
    Ok(Graph::new(n, &unique)?)
}

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<usize, InstanceError> {
    let t = tok.ok_or_else(|| InstanceError::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    t.parse().map_err(|_| InstanceError::Parse {
        line,
        msg: format!("bad {what} '{t}'"),
    })
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut s = format!("p edge {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        s.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    s
}

/// Edge list: a `n m` header line, then one 0-based `u v` pair per line.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph, InstanceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(InstanceError::Parse {
        line: 0,
        msg: "empty edge list".into(),
    })?;
    let mut tok = header.split_whitespace();
    let n = parse_num(tok.next(), hl, "vertex count")?;
    let m = parse_num(tok.next(), hl, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let mut tok = l.split_whitespace();
        let u = parse_num(tok.next(), line, "endpoint")?;
        let v = parse_num(tok.next(), line, "endpoint")?;
        if u >= n || v >= n {
            return Err(InstanceError::Parse {
                line,
                msg: format!("vertex outside 0..{n}"),
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        log::warn!("header declares {m} edges, found {}", edges.len());
    }
    Ok(Graph::new(n, &edges)?)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Reads a `.col`/`.dimacs` file as DIMACS, anything else as an edge list.
pub fn load(path: &Path) -> Result<Graph, InstanceError> {
    let text = std::fs::read_to_string(path)?;
    if is_dimacs_path(path) {
        parse_dimacs(&text)
    } else {
        parse_edge_list(&text)
    }
}

pub fn is_dimacs_path(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("col") | Some("dimacs")
    )
}
