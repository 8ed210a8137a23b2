//! Canonical labelling by branch-and-bound over vertex orderings.
//!
//! A labelled simple graph on `n <= 16` vertices is encoded column by column
//! over the upper triangle of its adjacency matrix: `(0,1), (0,2), (1,2),
//! (0,3), ...`. Column `p` records which of the first `p` vertices are
//! adjacent to vertex `p`, so the first `p(p+1)/2` bits describe the induced
//! subgraph on the first `p + 1` vertices. The canonical code is the
//! lexicographically largest code over all relabellings.
//!
//! The search places one vertex per position and keeps only the branches
//! whose partial code ties the best one found so far.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_CANON_VERTICES: usize = 16;

/// A permutation-invariant graph label: two simple graphs share a label iff
/// they are isomorphic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalLabel {
    vertex_count: u8,
    code: u128,
}

impl CanonicalLabel {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count as usize
    }

    /// The code, most significant bit first, left-aligned in 128 bits.
    pub fn code(&self) -> u128 {
        self.code
    }

    /// The code as a `0`/`1` string of length `n(n-1)/2`.
    pub fn bits(&self) -> String {
        let n = self.vertex_count();
        let len = n * n.saturating_sub(1) / 2;
        (0..len)
            .map(|i| if self.code >> (127 - i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.vertex_count, self.bits())
    }
}

/// Row `p`'s segment places the bit for row `i` at position `15 - i`, so
/// plain integer order on segments is lexicographic order with row 0 first.
#[inline]
fn seg_bit(i: usize) -> u16 {
    1 << (15 - i)
}

fn code_from_columns(cols: &[u16]) -> u128 {
    let mut code = 0u128;
    for (p, &col) in cols.iter().enumerate() {
        for i in 0..p {
            if col & seg_bit(i) != 0 {
                let idx = p * (p - 1) / 2 + i;
                code |= 1u128 << (127 - idx);
            }
        }
    }
    code
}

fn identity_columns(rows: &[u16]) -> Vec<u16> {
    (0..rows.len())
        .map(|p| {
            (0..p)
                .filter(|&i| rows[p] >> i & 1 == 1)
                .fold(0u16, |acc, i| acc | seg_bit(i))
        })
        .collect()
}

/// The code of the graph exactly as labelled.
#[cfg(test)]
pub(crate) fn code_of(rows: &[u16]) -> CanonicalLabel {
    CanonicalLabel {
        vertex_count: rows.len() as u8,
        code: code_from_columns(&identity_columns(rows)),
    }
}

struct Search<'a> {
    rows: &'a [u16],
    n: usize,
    perm: [u8; MAX_CANON_VERTICES],
    best: [u16; MAX_CANON_VERTICES],
    best_len: usize,
    best_perm: [u8; MAX_CANON_VERTICES],
}

impl Search<'_> {
    fn candidates(&self, used: u16, segs: &[u16; MAX_CANON_VERTICES]) -> ([(u16, u8); MAX_CANON_VERTICES], usize) {
        let mut cands = [(0u16, 0u8); MAX_CANON_VERTICES];
        let mut len = 0;
        for (v, &seg) in segs.iter().enumerate().take(self.n) {
            if used >> v & 1 == 0 {
                cands[len] = (seg, v as u8);
                len += 1;
            }
        }
        cands[..len].sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        (cands, len)
    }

    fn child_segs(&self, p: usize, v: usize, used: u16, segs: &[u16; MAX_CANON_VERTICES]) -> [u16; MAX_CANON_VERTICES] {
        let mut child = *segs;
        let mut nb = self.rows[v] & !used & !(1 << v);
        while nb != 0 {
            let w = nb.trailing_zeros() as usize;
            child[w] |= seg_bit(p);
            nb &= nb - 1;
        }
        child
    }

    fn run(&mut self, p: usize, used: u16, segs: &[u16; MAX_CANON_VERTICES]) {
        if p == self.n {
            self.best_perm = self.perm;
            return;
        }
        let (cands, len) = self.candidates(used, segs);
        for &(seg, v) in &cands[..len] {
            if p < self.best_len {
                if seg < self.best[p] {
                    break;
                }
                if seg > self.best[p] {
                    self.best[p] = seg;
                    self.best_len = p + 1;
                }
            } else {
                self.best[p] = seg;
                self.best_len = p + 1;
            }
            self.perm[p] = v;
            let child = self.child_segs(p, v as usize, used, segs);
            self.run(p + 1, used | 1 << v, &child);
        }
    }

    /// Fails fast on the first ordering whose partial code beats `best`.
    fn beaten(&self, p: usize, used: u16, segs: &[u16; MAX_CANON_VERTICES]) -> bool {
        if p == self.n {
            return false;
        }
        let target = self.best[p];
        for v in 0..self.n {
            if used >> v & 1 == 1 {
                continue;
            }
            let seg = segs[v];
            if seg > target {
                return true;
            }
            if seg == target {
                let child = self.child_segs(p, v, used, segs);
                if self.beaten(p + 1, used | 1 << v, &child) {
                    return true;
                }
            }
        }
        false
    }
}

/// Canonical label plus the ordering achieving it: `order[pos]` is the
/// original vertex placed at position `pos`.
pub(crate) fn canonical_rows(rows: &[u16]) -> (CanonicalLabel, Vec<usize>) {
    let n = rows.len();
    assert!(n <= MAX_CANON_VERTICES);
    let mut search = Search {
        rows,
        n,
        perm: [0; MAX_CANON_VERTICES],
        best: [0; MAX_CANON_VERTICES],
        best_len: 0,
        best_perm: [0; MAX_CANON_VERTICES],
    };
    search.run(0, 0, &[0; MAX_CANON_VERTICES]);
    let label = CanonicalLabel {
        vertex_count: n as u8,
        code: code_from_columns(&search.best[..n]),
    };
    (label, search.best_perm[..n].iter().map(|&v| v as usize).collect())
}

/// True when the labelled code is already the canonical (maximal) one.
pub(crate) fn is_canonical(rows: &[u16]) -> bool {
    let n = rows.len();
    let mut best = [0u16; MAX_CANON_VERTICES];
    best[..n].copy_from_slice(&identity_columns(rows));
    let search = Search {
        rows,
        n,
        perm: [0; MAX_CANON_VERTICES],
        best,
        best_len: n,
        best_perm: [0; MAX_CANON_VERTICES],
    };
    !search.beaten(0, 0, &[0; MAX_CANON_VERTICES])
}

pub(crate) fn rows16(g: &Graph) -> Result<Vec<u16>> {
    g.require_simple()?;
    if g.vertex_count() > MAX_CANON_VERTICES {
        return Err(Error::Scale(format!(
            "canonical labelling supports at most {MAX_CANON_VERTICES} vertices, got {}",
            g.vertex_count()
        )));
    }
    let mut rows = vec![0u16; g.vertex_count()];
    for &(u, v) in g.edges() {
        rows[u] |= 1 << v;
        rows[v] |= 1 << u;
    }
    Ok(rows)
}

pub(crate) fn rows_to_graph(rows: &[u16]) -> Graph {
    let n = rows.len();
    Graph::new(
        n,
        (0..n).flat_map(|u| ((u + 1)..n).filter(move |&v| rows[u] >> v & 1 == 1).map(move |v| (u, v))),
        false,
    )
    .expect("adjacency rows describe a simple graph")
}

/// Permutation-invariant label of a simple graph on at most 16 vertices.
pub fn canonical_form(g: &Graph) -> Result<CanonicalLabel> {
    Ok(canonical_rows(&rows16(g)?).0)
}

/// The graph relabelled into its canonical vertex order, so that
/// `code_of(result) == canonical_form(g)`.
pub fn canonical_relabel(g: &Graph) -> Result<Graph> {
    let (_, order) = canonical_rows(&rows16(g)?);
    let mut perm = vec![0; order.len()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    g.permuted(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_cycle, build_kdd, build_petersen, build_prism};

    fn label(g: &Graph) -> CanonicalLabel {
        canonical_form(g).unwrap()
    }

    /// Oracle: maximum code over every permutation.
    fn brute_canonical(g: &Graph) -> u128 {
        let rows = rows16(g).unwrap();
        let n = rows.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = 0u128;
        permute(&mut perm, 0, &mut |p| {
            let permuted: Vec<u16> = (0..n)
                .map(|pos| {
                    (0..n)
                        .filter(|&q| rows[p[pos]] >> p[q] & 1 == 1)
                        .fold(0u16, |acc, q| acc | 1 << q)
                })
                .collect();
            best = best.max(code_of(&permuted).code);
        });
        best
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn isomorphic_graphs_share_labels() {
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)], false).unwrap();
        assert_eq!(label(&c4), label(&build_kdd(2).unwrap()));
        let c8 = build_cycle(8).unwrap();
        assert_ne!(label(&c8), label(&c4.disjoint_union(&c4)));
        assert_eq!(label(&c4).to_string(), "4:110011");
    }

    #[test]
    fn matches_exhaustive_maximum() {
        let graphs = [
            build_cycle(5).unwrap(),
            build_kdd(3).unwrap(),
            build_prism(),
            Graph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4)], false).unwrap(),
            Graph::empty(4),
            Graph::new(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (0, 3), (2, 5)], false).unwrap(),
        ];
        for g in &graphs {
            assert_eq!(label(g).code(), brute_canonical(g), "{}", g.to_text());
        }
    }

    #[test]
    fn relabel_reaches_canonical_code() {
        for g in [build_petersen(), build_prism(), build_cycle(7).unwrap()] {
            let r = canonical_relabel(&g).unwrap();
            let rows = rows16(&r).unwrap();
            assert_eq!(code_of(&rows), label(&g));
            assert!(is_canonical(&rows));
        }
        let rows = rows16(&build_cycle(7).unwrap()).unwrap();
        assert!(!is_canonical(&rows));
    }

    #[test]
    fn rejects_oversized_and_looped() {
        assert!(matches!(canonical_form(&build_cycle(17).unwrap()), Err(Error::Scale(_))));
        assert_eq!(canonical_form(&crate::graph::build_hc(1, 1).unwrap()), Err(Error::HasLoops));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::seq::SliceRandom;
        use rand::SeedableRng;

        proptest! {
            #[test]
            fn label_invariant_under_relabelling(n in 1usize..10, bits in any::<u64>(), seed in any::<u64>()) {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits >> (k % 64) & 1 == 1 { edges.push((u, v)); }
                        k += 1;
                    }
                }
                let g = Graph::new(n, edges, false).unwrap();
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
                let h = g.permuted(&perm).unwrap();
                prop_assert_eq!(label(&g), label(&h));
            }
        }
    }
}
