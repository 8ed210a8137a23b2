//! Undirected graphs on contiguous `0..n` vertex labels, plus the extremal
//! constructions the rest of the crate compares against: `K_{d,d}`, the
//! disjoint union `DK` of `n/2d` copies of it, and the looped target `H_C`
//! that encodes the weighted independent-set model as homomorphisms.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// An immutable undirected graph. Edges are stored as `(u, v)` with `u <= v`,
/// sorted lexicographically; a loop is the pair `(v, v)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    allow_loops: bool,
    neighbors: Vec<Vec<usize>>,
}

/// A two-colouring witness: every edge runs between `class_a` and `class_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub class_a: Vec<usize>,
    pub class_b: Vec<usize>,
}

impl Graph {
    /// Validates and builds a graph. Duplicate edges (in either orientation)
    /// and out-of-range endpoints are rejected; loops only when `allow_loops`.
    pub fn new<I>(vertex_count: usize, edges: I, allow_loops: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(Error::EndpointOutOfRange {
                        vertex: v,
                        vertex_count,
                    });
                }
            }
            if a == b && !allow_loops {
                return Err(Error::LoopNotAllowed(a));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            if u != v {
                neighbors[v].push(u);
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Graph {
            vertex_count,
            edges,
            allow_loops,
            neighbors,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        Graph::new(vertex_count, [], false).expect("edgeless graph is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn allow_loops(&self) -> bool {
        self.allow_loops
    }

    /// Sorted neighbour list; a looped vertex lists itself.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// Number of incident non-loop edges.
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].iter().filter(|&&w| w != v).count()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.neighbors[u].binary_search(&v).is_ok()
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub(crate) fn require_simple(&self) -> Result<()> {
        if self.has_loops() {
            Err(Error::HasLoops)
        } else {
            Ok(())
        }
    }

    /// `Some(d)` when every vertex has degree `d`. The graph on zero vertices
    /// has no degree to report.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.vertex_count == 0 {
            return None;
        }
        let d = self.degree(0);
        (1..self.vertex_count)
            .all(|v| self.degree(v) == d)
            .then_some(d)
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        (0..self.vertex_count).map(|v| self.degree(v)).collect()
    }

    /// Breadth-first two-colouring. Each component's smallest vertex goes to
    /// `class_a`, so an edgeless graph puts everything in `class_a`.
    pub fn bipartition(&self) -> Option<Bipartition> {
        if self.has_loops() {
            return None;
        }
        let mut colour: Vec<Option<bool>> = vec![None; self.vertex_count];
        let mut queue = VecDeque::new();
        for root in 0..self.vertex_count {
            if colour[root].is_some() {
                continue;
            }
            colour[root] = Some(false);
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].unwrap();
                for &w in &self.neighbors[u] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let (mut class_a, mut class_b) = (Vec::new(), Vec::new());
        for (v, c) in colour.into_iter().enumerate() {
            if c == Some(false) {
                class_a.push(v);
            } else {
                class_b.push(v);
            }
        }
        let bp = Bipartition { class_a, class_b };
        debug_assert!(bp.is_valid_for(self));
        Some(bp)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Maximum matching cardinality by augmenting-path search (Gabow's
    /// implementation of Edmonds' algorithm from petgraph).
    pub fn max_matching_size(&self) -> Result<usize> {
        self.require_simple()?;
        let mut pg = petgraph::graph::UnGraph::<(), ()>::with_capacity(
            self.vertex_count,
            self.edges.len(),
        );
        for _ in 0..self.vertex_count {
            pg.add_node(());
        }
        pg.extend_with_edges(self.edges.iter().map(|&(u, v)| (u as u32, v as u32)));
        Ok(petgraph::algo::maximum_matching(&pg).len())
    }

    pub fn has_perfect_matching(&self) -> Result<bool> {
        Ok(self.vertex_count.is_multiple_of(2) && self.max_matching_size()? * 2 == self.vertex_count)
    }

    /// Side-by-side union: the second operand's labels shift by
    /// `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::new(
            self.vertex_count + other.vertex_count,
            edges,
            self.allow_loops || other.allow_loops,
        )
        .expect("union of valid graphs is valid")
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.vertex_count;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Domain("relabelling is not a permutation".into()));
        }
        Graph::new(
            n,
            self.edges.iter().map(|&(u, v)| (perm[u], perm[v])),
            self.allow_loops,
        )
    }

    /// Complement of a simple graph.
    pub fn complement(&self) -> Result<Graph> {
        self.require_simple()?;
        let n = self.vertex_count;
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v));
        Graph::new(n, edges, false)
    }

    /// Neighbour bitmasks, one word per vertex. Only defined for at most 64
    /// vertices; loops set the vertex's own bit.
    pub(crate) fn adjacency_masks(&self) -> Result<Vec<u64>> {
        if self.vertex_count > 64 {
            return Err(Error::TooLarge(format!(
                "{} vertices exceeds the 64-vertex limit of exact counting",
                self.vertex_count
            )));
        }
        let mut rows = vec![0u64; self.vertex_count];
        for &(u, v) in &self.edges {
            rows[u] |= 1 << v;
            rows[v] |= 1 << u;
        }
        Ok(rows)
    }

    /// Serializes to the line-oriented text format: a `N M L` header followed
    /// by one `u v` line per edge, `u <= v`, in sorted order, LF-terminated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {}",
            self.vertex_count,
            self.edges.len(),
            u8::from(self.allow_loops)
        );
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses one graph in the text format.
    pub fn from_text(text: &str) -> Result<Graph> {
        parse_block(text.lines().enumerate())
    }
}

impl Bipartition {
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut side = vec![None; g.vertex_count()];
        for &v in &self.class_a {
            if v >= side.len() || side[v].replace(false).is_some() {
                return false;
            }
        }
        for &v in &self.class_b {
            if v >= side.len() || side[v].replace(true).is_some() {
                return false;
            }
        }
        side.iter().all(Option::is_some) && g.edges().iter().all(|&(u, v)| side[u] != side[v])
    }
}

/// Concatenates graphs in the text format separated by `---` lines.
pub fn write_graphs(graphs: &[Graph]) -> String {
    let mut out = String::new();
    for (i, g) in graphs.iter().enumerate() {
        if i > 0 {
            out.push_str("---\n");
        }
        out.push_str(&g.to_text());
    }
    out
}

/// Parses a file holding one or more graphs separated by `---` lines.
pub fn parse_graphs(text: &str) -> Result<Vec<Graph>> {
    let mut graphs = Vec::new();
    let mut block = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim() == "---" {
            graphs.push(parse_block(block.drain(..))?);
        } else {
            block.push((i, line));
        }
    }
    if block.iter().any(|(_, l)| !l.trim().is_empty()) || graphs.is_empty() {
        graphs.push(parse_block(block.into_iter())?);
    }
    Ok(graphs)
}

fn parse_block<'a, I>(lines: I) -> Result<Graph>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut lines = lines.filter(|(_, l)| !l.trim().is_empty());
    let err = |line: usize, message: &str| Error::Parse {
        line: line + 1,
        message: message.to_string(),
    };
    let (hline, header) = lines.next().ok_or_else(|| err(0, "missing `N M L` header"))?;
    let fields = parse_numbers(header).ok_or_else(|| err(hline, "header must be three integers"))?;
    let [n, m, l] = fields[..] else {
        return Err(err(hline, "header must be three integers"));
    };
    let allow_loops = match l {
        0 => false,
        1 => true,
        _ => return Err(err(hline, "loops flag must be 0 or 1")),
    };
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let pair = parse_numbers(line).ok_or_else(|| err(i, "edge line must be two integers"))?;
        let [u, v] = pair[..] else {
            return Err(err(i, "edge line must be two integers"));
        };
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(err(
            hline,
            &format!("header declares {m} edges but {} were given", edges.len()),
        ));
    }
    Graph::new(n, edges, allow_loops)
}

fn parse_numbers(line: &str) -> Option<Vec<usize>> {
    line.split_whitespace().map(|t| t.parse().ok()).collect()
}

/// `K_{d,d}`: vertices `0..d` on one side, `d..2d` on the other.
pub fn build_kdd(d: usize) -> Result<Graph> {
    if d == 0 {
        return Err(Error::OutOfRange {
            what: "d",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    Graph::new(
        2 * d,
        (0..d).flat_map(|i| (0..d).map(move |j| (i, d + j))),
        false,
    )
}

/// `n / 2d` disjoint copies of `K_{d,d}`.
pub fn build_dk(n: usize, d: usize) -> Result<Graph> {
    if d == 0 || n == 0 || !n.is_multiple_of(2 * d) {
        return Err(Error::Divisibility { n, d });
    }
    let block = build_kdd(d)?;
    Ok((1..n / (2 * d)).fold(block.clone(), |acc, _| acc.disjoint_union(&block)))
}

/// `H_C`: an independent set of `c_lambda` vertices (labels `0..c_lambda`)
/// fully joined to a complete looped graph on `c` vertices (the remaining
/// labels).
pub fn build_hc(c: usize, c_lambda: usize) -> Result<Graph> {
    if c == 0 {
        return Err(Error::OutOfRange {
            what: "C",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let clique = c_lambda..c_lambda + c;
    let mut edges = Vec::new();
    for u in clique.clone() {
        for v in u..clique.end {
            edges.push((u, v));
        }
    }
    for i in 0..c_lambda {
        for u in clique.clone() {
            edges.push((i, u));
        }
    }
    Graph::new(c_lambda + c, edges, true)
}

/// The complete looped graph on `c` vertices, i.e. `H_C` with `C·λ = 0`.
pub fn build_looped_complete(c: usize) -> Result<Graph> {
    build_hc(c, 0)
}

pub fn build_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::OutOfRange {
            what: "cycle length",
            value: n,
            min: 3,
            max: usize::MAX,
        });
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)), false)
}

pub fn build_complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))), false)
        .expect("complete graph is valid")
}

pub fn build_petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::new(10, outer.chain(spokes).chain(inner), false).expect("Petersen graph is valid")
}

/// The triangular prism `C_3 × K_2`, the non-bipartite cubic graph on six
/// vertices.
pub fn build_prism() -> Graph {
    Graph::new(
        6,
        [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
        false,
    )
    .expect("prism is valid")
}
