//! Exhaustive generation of `d`-regular graphs.
//!
//! With isomorph rejection on, graphs grow one vertex at a time and a
//! partial graph survives only if it is already in canonical form
//! (orderly generation). Canonicity is hereditary under the column-wise
//! code, so every isomorphism class is reached exactly once and no global
//! dedup table is needed. Without rejection, rows of the adjacency matrix
//! are filled in turn and every labelled graph is emitted.

use crate::canon::{is_canonical, rows_to_graph, MAX_CANON_VERTICES};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub use crate::canon::{canonical_form, canonical_relabel, CanonicalLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenSpec {
    pub n: usize,
    pub d: usize,
    pub bipartite_only: bool,
    pub isomorph_reject: bool,
}

impl GenSpec {
    /// One representative per isomorphism class, bipartite or not.
    pub fn new(n: usize, d: usize) -> GenSpec {
        GenSpec { n, d, bipartite_only: false, isomorph_reject: true }
    }

    pub fn bipartite_only(mut self, on: bool) -> GenSpec {
        self.bipartite_only = on;
        self
    }

    pub fn isomorph_reject(mut self, on: bool) -> GenSpec {
        self.isomorph_reject = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n > MAX_CANON_VERTICES {
            return Err(Error::Scale(format!(
                "generation supports at most {MAX_CANON_VERTICES} vertices, got {}",
                self.n
            )));
        }
        if self.d >= self.n {
            return Err(Error::OutOfRange { what: "d", value: self.d, min: 0, max: self.n.saturating_sub(1) });
        }
        if !(self.n * self.d).is_multiple_of(2) {
            return Err(Error::Parity { n: self.n, d: self.d });
        }
        Ok(())
    }
}

/// Calls `f` on every graph matching `spec`, in a fixed order.
pub fn for_each_graph(spec: &GenSpec, mut f: impl FnMut(Graph)) -> Result<()> {
    spec.validate()?;
    let mut state = State {
        n: spec.n,
        d: spec.d as u32,
        bipartite_only: spec.bipartite_only,
        rows: [0; MAX_CANON_VERTICES],
        deg: [0; MAX_CANON_VERTICES],
    };
    if spec.isomorph_reject {
        state.orderly(0, &mut f);
    } else {
        state.labelled(0, &mut f);
    }
    Ok(())
}

pub fn generate(spec: &GenSpec) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for_each_graph(spec, |g| out.push(g))?;
    Ok(out)
}

struct State {
    n: usize,
    d: u32,
    bipartite_only: bool,
    rows: [u16; MAX_CANON_VERTICES],
    deg: [u32; MAX_CANON_VERTICES],
}

/// Row order as integer order: row 0 most significant.
#[inline]
fn seg(mask: u16) -> u16 {
    mask.reverse_bits()
}

impl State {
    fn emit(&self, f: &mut impl FnMut(Graph)) {
        f(rows_to_graph(&self.rows[..self.n]));
    }

    /// With vertices `0..k` placed, can the remaining `n − k` complete every
    /// degree to `d`?
    fn feasible(&self, k: usize) -> bool {
        let m = (self.n - k) as u32;
        let d = self.d;
        let mut residual = 0u32;
        for i in 0..k {
            let r = d - self.deg[i];
            if r > m {
                return false;
            }
            residual += r;
        }
        if m == 0 {
            return residual == 0;
        }
        // edges among the newcomers absorb what does not go back
        let inner2 = match (m * d).checked_sub(residual) {
            Some(x) => x,
            None => return false,
        };
        inner2 % 2 == 0 && inner2 <= m * (m - 1)
    }

    fn add_column(&mut self, k: usize, col: u16) {
        self.rows[k] = col;
        self.deg[k] = col.count_ones();
        let mut c = col;
        while c != 0 {
            let i = c.trailing_zeros() as usize;
            self.rows[i] |= 1 << k;
            self.deg[i] += 1;
            c &= c - 1;
        }
    }

    fn remove_column(&mut self, k: usize, col: u16) {
        let mut c = col;
        while c != 0 {
            let i = c.trailing_zeros() as usize;
            self.rows[i] &= !(1 << k);
            self.deg[i] -= 1;
            c &= c - 1;
        }
        self.rows[k] = 0;
        self.deg[k] = 0;
    }

    fn bipartite_prefix(&self, k: usize) -> bool {
        let mut color = [u8::MAX; MAX_CANON_VERTICES];
        let mut stack = [0usize; MAX_CANON_VERTICES];
        let mask = if k == 16 { u16::MAX } else { (1u16 << k) - 1 };
        for s in 0..k {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut top = 1;
            stack[0] = s;
            while top > 0 {
                top -= 1;
                let u = stack[top];
                let mut nb = self.rows[u] & mask;
                while nb != 0 {
                    let v = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        stack[top] = v;
                        top += 1;
                    } else if color[v] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn orderly(&mut self, k: usize, f: &mut impl FnMut(Graph)) {
        if k == self.n {
            self.emit(f);
            return;
        }
        let eligible: Vec<usize> = (0..k).filter(|&i| self.deg[i] < self.d).collect();
        let forward_room = (self.n - k - 1) as u32;
        let min_back = self.d.saturating_sub(forward_room) as usize;
        let max_back = (self.d as usize).min(eligible.len());
        // rows 0..k−1 of the new column may not exceed those of the previous
        let prev_low = if k >= 2 { seg(self.rows[k - 1] & ((1 << (k - 1)) - 1)) } else { u16::MAX };
        let low_mask: u16 = if k >= 1 { (1 << (k - 1)) - 1 } else { 0 };
        for size in (min_back..=max_back).rev() {
            let mut chosen = Vec::with_capacity(size);
            self.columns(&eligible, 0, size, &mut chosen, 0, &mut |st, col| {
                if seg(col & low_mask) > prev_low {
                    return;
                }
                st.add_column(k, col);
                if st.feasible(k + 1)
                    && (!st.bipartite_only || st.bipartite_prefix(k + 1))
                    && is_canonical(&st.rows[..=k])
                {
                    st.orderly(k + 1, f);
                }
                st.remove_column(k, col);
            });
        }
    }

    /// Every `size`-subset of `eligible`, as a mask, in a fixed order.
    fn columns(
        &mut self,
        eligible: &[usize],
        start: usize,
        size: usize,
        chosen: &mut Vec<usize>,
        mask: u16,
        visit: &mut impl FnMut(&mut State, u16),
    ) {
        if chosen.len() == size {
            visit(self, mask);
            return;
        }
        let need = size - chosen.len();
        for j in start..=eligible.len().saturating_sub(need) {
            if eligible.len() < need {
                break;
            }
            let v = eligible[j];
            chosen.push(v);
            self.columns(eligible, j + 1, size, chosen, mask | 1 << v, visit);
            chosen.pop();
        }
    }

    /// Fills vertex `u`'s edges to later vertices, then moves on to `u + 1`.
    fn labelled(&mut self, u: usize, f: &mut impl FnMut(Graph)) {
        if u == self.n {
            self.emit(f);
            return;
        }
        let need = (self.d - self.deg[u]) as usize;
        let later: Vec<usize> = (u + 1..self.n).filter(|&v| self.deg[v] < self.d).collect();
        if later.len() < need {
            return;
        }
        let mut chosen = Vec::with_capacity(need);
        self.columns(&later, 0, need, &mut chosen, 0, &mut |st, fwd| {
            let mut c = fwd;
            while c != 0 {
                let v = c.trailing_zeros() as usize;
                c &= c - 1;
                st.rows[u] |= 1 << v;
                st.rows[v] |= 1 << u;
                st.deg[u] += 1;
                st.deg[v] += 1;
            }
            // a later vertex must still reach degree d from the rows left
            let ok = (u + 1..st.n).all(|v| st.d - st.deg[v] <= (st.n - u - 2) as u32);
            if ok && (!st.bipartite_only || st.bipartite_prefix(st.n)) {
                st.labelled(u + 1, f);
            }
            let mut c = fwd;
            while c != 0 {
                let v = c.trailing_zeros() as usize;
                c &= c - 1;
                st.rows[u] &= !(1 << v);
                st.rows[v] &= !(1 << u);
                st.deg[u] -= 1;
                st.deg[v] -= 1;
            }
        });
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::canon::rows16;
    use crate::count::for_each_subset;

    fn census(n: usize, d: usize) -> usize {
        generate(&GenSpec::new(n, d)).unwrap().len()
    }

    fn labels(graphs: &[Graph]) -> BTreeSet<CanonicalLabel> {
        graphs.iter().map(|g| canonical_form(g).unwrap()).collect()
    }

    /// Oracle: every edge subset of `K_n` of the right size, filtered by
    /// regularity.
    fn brute_labelled(n: usize, d: usize) -> Vec<Graph> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let mut out = Vec::new();
        for_each_subset(pairs.len(), n * d / 2, |s| {
            let edges: Vec<_> = (0..pairs.len()).filter(|&i| s >> i & 1 == 1).map(|i| pairs[i]).collect();
            let g = Graph::new(n, edges, false).unwrap();
            if g.regular_degree() == Some(d) || (n > 0 && d == 0 && g.edge_count() == 0) {
                out.push(g);
            }
        });
        out
    }

    #[test]
    fn small_censuses() {
        assert_eq!(census(4, 2), 1);
        assert_eq!(census(8, 2), 3);
        assert_eq!(census(6, 3), 2);
        assert_eq!(census(6, 2), 2);
        assert_eq!(census(8, 3), 6);
        assert_eq!(census(10, 3), 21);
        assert_eq!(census(12, 2), 9);
        assert_eq!(census(7, 4), 2);
        assert_eq!(census(5, 0), 1);
        assert_eq!(census(5, 4), 1);
    }

    #[test]
    fn spec_examples() {
        let g = generate(&GenSpec::new(4, 2)).unwrap();
        assert_eq!(labels(&g), labels(&[crate::graph::build_cycle(4).unwrap()]));
        let c4 = crate::graph::build_cycle(4).unwrap();
        let expected = [
            crate::graph::build_cycle(8).unwrap(),
            crate::graph::build_cycle(5).unwrap().disjoint_union(&crate::graph::build_cycle(3).unwrap()),
            c4.disjoint_union(&c4),
        ];
        assert_eq!(labels(&generate(&GenSpec::new(8, 2)).unwrap()), labels(&expected));
        let expected = [crate::graph::build_kdd(3).unwrap(), crate::graph::build_prism()];
        assert_eq!(labels(&generate(&GenSpec::new(6, 3)).unwrap()), labels(&expected));
    }

    #[test]
    fn agrees_with_brute_force_dedup() {
        for (n, d) in [(4, 2), (5, 2), (6, 2), (6, 3), (5, 4), (6, 4), (4, 1), (6, 1)] {
            let brute = brute_labelled(n, d);
            let labelled = generate(&GenSpec::new(n, d).isomorph_reject(false)).unwrap();
            assert_eq!(labelled.len(), brute.len(), "labelled ({n},{d})");
            let orderly = generate(&GenSpec::new(n, d)).unwrap();
            assert_eq!(labels(&orderly), labels(&brute), "classes ({n},{d})");
            assert_eq!(orderly.len(), labels(&orderly).len());
        }
    }

    #[test]
    fn labelled_counts_and_dedup_at_eight() {
        // labelled 2-regular and 3-regular graphs on 8 vertices
        for (d, expected) in [(2, 3507), (3, 19355)] {
            let labelled = generate(&GenSpec::new(8, d).isomorph_reject(false)).unwrap();
            assert_eq!(labelled.len(), expected);
            let distinct: BTreeSet<_> = labelled.iter().map(|g| g.to_text()).collect();
            assert_eq!(distinct.len(), expected);
            assert_eq!(labels(&labelled), labels(&generate(&GenSpec::new(8, d)).unwrap()));
        }
        assert_eq!(generate(&GenSpec::new(6, 2).isomorph_reject(false)).unwrap().len(), 70);
        assert_eq!(generate(&GenSpec::new(7, 2).isomorph_reject(false)).unwrap().len(), 465);
    }

    #[test]
    fn emitted_graphs_are_regular_and_canonical() {
        for (n, d) in [(8, 3), (9, 4), (10, 3), (8, 5)] {
            for g in generate(&GenSpec::new(n, d)).unwrap() {
                assert_eq!(g.regular_degree(), Some(d));
                assert!(is_canonical(&rows16(&g).unwrap()));
            }
        }
    }

    #[test]
    fn bipartite_filter_matches_post_filter() {
        for (n, d) in [(8, 2), (8, 3), (10, 3), (12, 2), (8, 4), (6, 3)] {
            let all: Vec<_> = generate(&GenSpec::new(n, d)).unwrap().into_iter().filter(|g| g.is_bipartite()).collect();
            let only = generate(&GenSpec::new(n, d).bipartite_only(true)).unwrap();
            assert_eq!(labels(&only), labels(&all), "({n},{d})");
            assert!(only.iter().all(|g| g.is_bipartite()));
            let labelled = generate(&GenSpec::new(n.min(8), d).bipartite_only(true).isomorph_reject(false)).unwrap();
            assert!(labelled.iter().all(|g| g.is_bipartite() && g.regular_degree() == Some(d)));
        }
        assert_eq!(generate(&GenSpec::new(6, 3).bipartite_only(true)).unwrap().len(), 1);
    }

    #[test]
    fn deterministic_order() {
        let a: Vec<String> = generate(&GenSpec::new(10, 3)).unwrap().iter().map(Graph::to_text).collect();
        let b: Vec<String> = generate(&GenSpec::new(10, 3)).unwrap().iter().map(Graph::to_text).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(generate(&GenSpec::new(5, 3)), Err(Error::Parity { n: 5, d: 3 }));
        assert!(matches!(generate(&GenSpec::new(4, 4)), Err(Error::OutOfRange { .. })));
        assert!(matches!(generate(&GenSpec::new(18, 3)), Err(Error::Scale(_))));
    }
}
