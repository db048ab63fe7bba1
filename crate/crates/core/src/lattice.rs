//! The chunk lattice and path search over it.
//!
//! Nodes are the word boundaries 0..=n of the sentence; every matrix row is
//! a directed edge from its span's start to its end. A complete path walks
//! 0 to n, i.e. segments the sentence into chunks. Among complete paths the
//! engine wants those with the fewest dummy chunks, ties broken by fewest
//! chunks overall — longer matched chunks carry more reliable word order.

use std::fmt;
use std::fmt::Write as _;
use std::ops::Add;

use crate::error::LatticeError;
use crate::matcher::{ChunkInstance, CorrespondenceMatrix};

/// A DAG over word boundaries. Edges keep matrix row order within each
/// adjacency list, which fixes the enumeration order of paths.
#[derive(Debug, Clone)]
pub struct Lattice {
    n: usize,
    edges: Vec<ChunkInstance>,
    /// `out[node]` lists edge indices leaving that node, in row order.
    out: Vec<Vec<usize>>,
}

/// Build the lattice of a (normally tuned) matrix.
pub fn build_lattice(matrix: &CorrespondenceMatrix) -> Lattice {
    let mut out = vec![Vec::new(); matrix.n + 1];
    for (i, row) in matrix.rows.iter().enumerate() {
        out[row.span.start].push(i);
    }
    Lattice {
        n: matrix.n,
        edges: matrix.rows.clone(),
        out,
    }
}

impl Lattice {
    /// Number of word boundaries, i.e. sentence length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.n + 1
    }

    pub fn edges(&self) -> &[ChunkInstance] {
        &self.edges
    }

    pub fn outgoing(&self, node: usize) -> &[usize] {
        &self.out[node]
    }

    /// Graphviz rendering, flagging dummy edges with a dashed style.
    pub fn to_dot(&self) -> String {
        let mut dot = String::from("digraph lattice {\n  rankdir=LR;\n");
        for node in 0..=self.n {
            let _ = writeln!(dot, "  {node} [shape=circle];");
        }
        for edge in &self.edges {
            let label = match edge.pair_id() {
                Some(id) => format!("#{id}"),
                None => format!("dummy `{}`", edge.surface),
            };
            let style = if edge.is_dummy() {
                ", style=dashed"
            } else {
                ""
            };
            let _ = writeln!(
                dot,
                "  {} -> {} [label=\"{label}\"{style}];",
                edge.span.start, edge.span.end
            );
        }
        dot.push_str("}\n");
        dot
    }
}

/// Path cost, compared lexicographically: dummy count first, then count of
/// matched (non-dummy) chunks. The two components always sum to the path's
/// edge count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PathCost {
    pub dummies: usize,
    pub chunks: usize,
}

impl PathCost {
    pub const ZERO: PathCost = PathCost {
        dummies: 0,
        chunks: 0,
    };

    fn of_edge(edge: &ChunkInstance) -> PathCost {
        if edge.is_dummy() {
            PathCost {
                dummies: 1,
                chunks: 0,
            }
        } else {
            PathCost {
                dummies: 0,
                chunks: 1,
            }
        }
    }
}

impl Add for PathCost {
    type Output = PathCost;

    fn add(self, other: PathCost) -> PathCost {
        PathCost {
            dummies: self.dummies + other.dummies,
            chunks: self.chunks + other.chunks,
        }
    }
}

impl fmt::Display for PathCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} dummies, {} chunks)", self.dummies, self.chunks)
    }
}

/// A complete 0→n path: contiguous chunks covering the whole sentence.
#[derive(Debug, Clone)]
pub struct Path {
    edges: Vec<ChunkInstance>,
}

impl Path {
    /// Validates contiguity and full cover. An empty edge list is a valid
    /// path only for the empty sentence.
    pub fn new(edges: Vec<ChunkInstance>, n: usize) -> Result<Path, LatticeError> {
        let mut at = 0;
        for edge in &edges {
            if edge.span.start != at {
                return Err(LatticeError::BrokenPath { n });
            }
            at = edge.span.end;
        }
        if at != n {
            return Err(LatticeError::BrokenPath { n });
        }
        Ok(Path { edges })
    }

    pub fn edges(&self) -> &[ChunkInstance] {
        &self.edges
    }

    pub fn cost(&self) -> PathCost {
        self.edges
            .iter()
            .fold(PathCost::ZERO, |acc, e| acc + PathCost::of_edge(e))
    }

    /// Identity for comparing paths produced by different searches: the
    /// sequence of (span, pair id) steps.
    pub fn key(&self) -> Vec<(usize, usize, Option<u32>)> {
        self.edges
            .iter()
            .map(|e| (e.span.start, e.span.end, e.pair_id()))
            .collect()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, edge) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match edge.pair_id() {
                Some(id) => write!(f, "#{id}{}", edge.span)?,
                None => write!(f, "dummy{}", edge.span)?,
            }
        }
        Ok(())
    }
}

/// Result of exhaustive path enumeration.
#[derive(Debug)]
pub struct Enumeration {
    pub paths: Vec<Path>,
    /// True when more than `cap` complete paths exist; `paths` then holds
    /// the first `cap` in enumeration order.
    pub truncated: bool,
}

/// Depth-first enumeration of all complete paths, at most `cap` of them.
/// Order is deterministic: at each node, edges in matrix row order.
pub fn enumerate_paths(lattice: &Lattice, cap: usize) -> Enumeration {
    let mut paths = Vec::new();
    let mut truncated = false;
    let mut acc: Vec<usize> = Vec::new();

    fn dfs(
        lattice: &Lattice,
        node: usize,
        acc: &mut Vec<usize>,
        paths: &mut Vec<Path>,
        cap: usize,
        truncated: &mut bool,
    ) {
        if *truncated {
            return;
        }
        if node == lattice.n {
            if paths.len() == cap {
                *truncated = true;
                return;
            }
            let edges = acc.iter().map(|&i| lattice.edges[i].clone()).collect();
            paths.push(Path { edges });
            return;
        }
        for &i in lattice.outgoing(node) {
            acc.push(i);
            dfs(
                lattice,
                lattice.edges[i].span.end,
                acc,
                paths,
                cap,
                truncated,
            );
            acc.pop();
            if *truncated {
                return;
            }
        }
    }

    dfs(lattice, 0, &mut acc, &mut paths, cap, &mut truncated);
    Enumeration { paths, truncated }
}

/// All cost-minimal complete paths, in the same order `enumerate_paths`
/// would produce them, without enumerating non-optimal paths.
///
/// Runs forward and backward dynamic programs over the boundary nodes; an
/// edge lies on some optimal path exactly when the best prefix to its
/// start, its own cost, and the best suffix from its end add up to the
/// optimum. The co-optimal paths are then walked over those edges alone.
pub fn select_optimal(lattice: &Lattice) -> Result<Vec<Path>, LatticeError> {
    let n = lattice.n;
    let mut prefix: Vec<Option<PathCost>> = vec![None; n + 1];
    prefix[0] = Some(PathCost::ZERO);
    for node in 0..n {
        let Some(here) = prefix[node] else { continue };
        for &i in lattice.outgoing(node) {
            let edge = &lattice.edges[i];
            let cand = here + PathCost::of_edge(edge);
            let slot = &mut prefix[edge.span.end];
            if slot.is_none_or(|best| cand < best) {
                *slot = Some(cand);
            }
        }
    }

    let mut suffix: Vec<Option<PathCost>> = vec![None; n + 1];
    suffix[n] = Some(PathCost::ZERO);
    for node in (0..n).rev() {
        for &i in lattice.outgoing(node) {
            let edge = &lattice.edges[i];
            let Some(rest) = suffix[edge.span.end] else {
                continue;
            };
            let cand = PathCost::of_edge(edge) + rest;
            let slot = &mut suffix[node];
            if slot.is_none_or(|best| cand < best) {
                *slot = Some(cand);
            }
        }
    }

    let Some(best) = suffix[0] else {
        return Err(LatticeError::NoPath);
    };
    debug_assert_eq!(prefix[n], Some(best));

    // Walk only edges on some optimal path; adjacency order keeps the
    // result aligned with plain enumeration.
    let mut paths = Vec::new();
    let mut acc: Vec<usize> = Vec::new();
    fn walk(
        lattice: &Lattice,
        node: usize,
        prefix: &[Option<PathCost>],
        suffix: &[Option<PathCost>],
        best: PathCost,
        acc: &mut Vec<usize>,
        paths: &mut Vec<Path>,
    ) {
        if node == lattice.n {
            let edges = acc.iter().map(|&i| lattice.edges[i].clone()).collect();
            paths.push(Path { edges });
            return;
        }
        let Some(pre) = prefix[node] else { return };
        for &i in lattice.outgoing(node) {
            let edge = &lattice.edges[i];
            let Some(post) = suffix[edge.span.end] else {
                continue;
            };
            if pre + PathCost::of_edge(edge) + post == best {
                acc.push(i);
                walk(lattice, edge.span.end, prefix, suffix, best, acc, paths);
                acc.pop();
            }
        }
    }
    walk(lattice, 0, &prefix, &suffix, best, &mut acc, &mut paths);

    debug_assert!(!paths.is_empty());
    Ok(paths)
}
