//! Exact counting: matching and independence polynomials by
//! deletion-contraction with component factorization, partition-function
//! evaluation over the rationals, subset-enumeration oracles, and graph
//! homomorphism counts.
//!
//! Everything here is integer or rational arithmetic; no floating point.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_rows, CanonicalLabel};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub type Rational = num_rational::BigRational;

/// Components with at most this many vertices are memoized under their
/// canonical label.
pub const MEMO_MAX_VERTICES: usize = 10;

/// Subset enumeration in the brute-force oracle stops above this many
/// candidate subsets.
pub const BRUTE_FORCE_SUBSET_CAP: u64 = 1 << 30;

/// Homomorphism backtracking refuses instances whose search space exceeds
/// this many partial assignments.
pub const HOM_SEARCH_CAP: u128 = 1 << 36;

const MEMO_SOFT_LIMIT: usize = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountKind {
    Matching,
    IndependentSet,
}

/// `coefficients[k]` is the number of size-`k` matchings or independent sets.
/// Trailing zeros are trimmed, so the last coefficient is the largest size
/// that occurs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountPolynomial {
    kind: CountKind,
    coefficients: Vec<BigUint>,
}

impl CountPolynomial {
    pub fn new(kind: CountKind, mut coefficients: Vec<BigUint>) -> Self {
        while coefficients.len() > 1 && coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(BigUint::zero());
        }
        CountPolynomial { kind, coefficients }
    }

    pub fn kind(&self) -> CountKind {
        self.kind
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.coefficients
    }

    /// Zero beyond the degree.
    pub fn coefficient(&self, k: usize) -> BigUint {
        self.coefficients.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Sum of all coefficients, i.e. the total number of matchings or
    /// independent sets.
    pub fn total(&self) -> BigUint {
        self.coefficients.iter().sum()
    }

    /// Coefficient convolution; the polynomial of a disjoint union.
    pub fn product(&self, other: &CountPolynomial) -> Result<CountPolynomial> {
        if self.kind != other.kind {
            return Err(Error::Domain("cannot multiply polynomials of different kinds".into()));
        }
        Ok(CountPolynomial::new(self.kind, poly_mul(&self.coefficients, &other.coefficients)))
    }

    pub fn decimal_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(|c| c.to_string()).collect()
    }

    /// JSON array of decimal strings, e.g. `["1","4","2"]`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.decimal_strings()).expect("strings serialize")
    }

    pub fn from_json(kind: CountKind, json: &str) -> Result<CountPolynomial> {
        let strings: Vec<String> =
            serde_json::from_str(json).map_err(|e| Error::Domain(format!("bad polynomial JSON: {e}")))?;
        let coefficients = strings
            .iter()
            .map(|s| {
                s.parse::<BigUint>()
                    .map_err(|_| Error::Domain(format!("bad coefficient {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CountPolynomial::new(kind, coefficients))
    }
}

/// Exact `Σ_k p_k λ^k` for a nonnegative rational `λ`.
pub fn eval_partition(p: &CountPolynomial, lambda: &Rational) -> Result<Rational> {
    if lambda.is_negative() {
        return Err(Error::Domain(format!("lambda = {lambda} must be nonnegative")));
    }
    Ok(p.coefficients
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * lambda + Rational::from_integer(c.clone().into())))
}

pub(crate) fn poly_mul(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `a + x·b`.
fn add_shifted(mut a: Vec<BigUint>, b: &[BigUint]) -> Vec<BigUint> {
    if a.len() < b.len() + 1 {
        a.resize(b.len() + 1, BigUint::zero());
    }
    for (k, c) in b.iter().enumerate() {
        a[k + 1] += c;
    }
    a
}

thread_local! {
    static MEMO: RefCell<HashMap<(CountKind, CanonicalLabel), Vec<BigUint>>> = RefCell::new(HashMap::new());
}

fn memo_get(kind: CountKind, key: &CanonicalLabel) -> Option<Vec<BigUint>> {
    MEMO.with(|m| m.borrow().get(&(kind, *key)).cloned())
}

fn memo_put(kind: CountKind, key: CanonicalLabel, value: &[BigUint]) {
    MEMO.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() >= MEMO_SOFT_LIMIT {
            m.clear();
        }
        m.insert((kind, key), value.to_vec());
    });
}

fn memo_key(rows: &[u64]) -> Option<CanonicalLabel> {
    (rows.len() <= MEMO_MAX_VERTICES).then(|| {
        let small: Vec<u16> = rows.iter().map(|&r| r as u16).collect();
        canonical_rows(&small).0
    })
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Connected components (as vertex masks) of the subgraph induced on `alive`.
fn components(rows: &[u64], alive: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut rest = alive;
    while rest != 0 {
        let mut comp = rest & rest.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                next |= rows[v];
                f &= f - 1;
            }
            next &= alive & !comp;
            comp |= next;
            frontier = next;
        }
        out.push(comp);
        rest &= !comp;
    }
    out
}

/// Induced subgraph on `mask`, relabelled to `0..popcount(mask)`.
fn compact(rows: &[u64], mask: u64) -> Vec<u64> {
    let verts: Vec<usize> = (0..rows.len()).filter(|&v| mask >> v & 1 == 1).collect();
    verts
        .iter()
        .map(|&v| {
            verts
                .iter()
                .enumerate()
                .filter(|&(_, &w)| rows[v] >> w & 1 == 1)
                .fold(0u64, |acc, (j, _)| acc | 1 << j)
        })
        .collect()
}

fn max_degree_vertex(rows: &[u64], among: u64) -> usize {
    let mut best = (0, usize::MAX);
    let mut m = among;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        let deg = rows[v].count_ones();
        if best.1 == usize::MAX || deg > best.0 {
            best = (deg, v);
        }
        m &= m - 1;
    }
    best.1
}

fn matching_of(rows: &[u64]) -> Vec<BigUint> {
    let alive = full_mask(rows.len());
    let mut acc = vec![BigUint::one()];
    for comp in components(rows, alive) {
        if comp.count_ones() < 2 {
            continue;
        }
        let part = matching_connected(&compact(rows, comp));
        acc = poly_mul(&acc, &part);
    }
    acc
}

fn matching_connected(rows: &[u64]) -> Vec<BigUint> {
    if rows.len() == 2 {
        return vec![BigUint::one(), BigUint::one()];
    }
    let key = memo_key(rows);
    if let Some(hit) = key.as_ref().and_then(|k| memo_get(CountKind::Matching, k)) {
        return hit;
    }
    let all = full_mask(rows.len());
    let u = max_degree_vertex(rows, all);
    let v = max_degree_vertex(rows, rows[u]);
    let mut without_edge = rows.to_vec();
    without_edge[u] &= !(1 << v);
    without_edge[v] &= !(1 << u);
    let a = matching_of(&without_edge);
    let b = matching_of(&compact(rows, all & !(1 << u) & !(1 << v)));
    let result = add_shifted(a, &b);
    if let Some(k) = key {
        memo_put(CountKind::Matching, k, &result);
    }
    result
}

fn independence_of(rows: &[u64]) -> Vec<BigUint> {
    let alive = full_mask(rows.len());
    let mut acc = vec![BigUint::one()];
    let mut isolated = 0u32;
    for comp in components(rows, alive) {
        if comp.count_ones() == 1 {
            isolated += 1;
            continue;
        }
        let part = independence_connected(&compact(rows, comp));
        acc = poly_mul(&acc, &part);
    }
    for _ in 0..isolated {
        acc = add_shifted(acc.clone(), &acc);
    }
    acc
}

fn independence_connected(rows: &[u64]) -> Vec<BigUint> {
    if rows.len() == 2 {
        return vec![BigUint::one(), BigUint::from(2u32)];
    }
    let key = memo_key(rows);
    if let Some(hit) = key.as_ref().and_then(|k| memo_get(CountKind::IndependentSet, k)) {
        return hit;
    }
    let all = full_mask(rows.len());
    let v = max_degree_vertex(rows, all);
    let a = independence_of(&compact(rows, all & !(1 << v)));
    let b = independence_of(&compact(rows, all & !(rows[v] | 1 << v)));
    let result = add_shifted(a, &b);
    if let Some(k) = key {
        memo_put(CountKind::IndependentSet, k, &result);
    }
    result
}

/// Matching polynomial: coefficient `k` counts `k`-edge matchings. Recurses
/// on an edge `{u,v}` at a maximum-degree vertex:
/// `M(G) = M(G−e) + x·M(G−u−v)`, factoring over components.
pub fn matching_polynomial(g: &Graph) -> Result<CountPolynomial> {
    g.require_simple()?;
    let rows = g.adjacency_masks()?;
    Ok(CountPolynomial::new(CountKind::Matching, matching_of(&rows)))
}

/// Independence polynomial: coefficient `t` counts independent sets of size
/// `t`. Recurses on a maximum-degree vertex:
/// `I(G) = I(G−v) + x·I(G−N[v])`, factoring over components.
pub fn independence_polynomial(g: &Graph) -> Result<CountPolynomial> {
    g.require_simple()?;
    let rows = g.adjacency_masks()?;
    Ok(CountPolynomial::new(CountKind::IndependentSet, independence_of(&rows)))
}

pub fn count_polynomial(g: &Graph, kind: CountKind) -> Result<CountPolynomial> {
    match kind {
        CountKind::Matching => matching_polynomial(g),
        CountKind::IndependentSet => independence_polynomial(g),
    }
}

pub(crate) fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Visits every `k`-subset of `0..m` (as a bitmask) in increasing order.
pub(crate) fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(u64)) {
    debug_assert!(m < 64);
    if k > m {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let limit = 1u64 << m;
    let mut x = (1u64 << k) - 1;
    while x < limit {
        f(x);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
}

/// Independent oracle: enumerates every `size`-subset of edges (matchings)
/// or vertices (independent sets) and tests the defining property directly.
pub fn brute_force_count(g: &Graph, kind: CountKind, size: usize) -> Result<BigUint> {
    g.require_simple()?;
    let items = match kind {
        CountKind::Matching => g.edge_count(),
        CountKind::IndependentSet => g.vertex_count(),
    };
    if size == 0 {
        return Ok(BigUint::one());
    }
    if size > items {
        return Ok(BigUint::zero());
    }
    let subsets = binomial_u128(items as u64, size as u64).unwrap_or(u128::MAX);
    if items > 63 || subsets > BRUTE_FORCE_SUBSET_CAP as u128 {
        return Err(Error::TooLarge(format!(
            "brute force over C({items}, {size}) subsets exceeds the cap of {BRUTE_FORCE_SUBSET_CAP}"
        )));
    }
    let mut count: u64 = 0;
    match kind {
        CountKind::Matching => {
            // vertices may exceed 64; fall back to explicit marking then
            if g.vertex_count() > 64 {
                let mut used = vec![false; g.vertex_count()];
                for_each_subset(items, size, |s| {
                    used.iter_mut().for_each(|b| *b = false);
                    let mut ok = true;
                    for e in 0..items {
                        if s >> e & 1 == 1 {
                            let (u, v) = g.edges()[e];
                            if used[u] || used[v] {
                                ok = false;
                                break;
                            }
                            used[u] = true;
                            used[v] = true;
                        }
                    }
                    count += u64::from(ok);
                });
            } else {
                let ends: Vec<u64> = g.edges().iter().map(|&(u, v)| (1u64 << u) | (1u64 << v)).collect();
                for_each_subset(items, size, |s| {
                    let mut used = 0u64;
                    let mut rest = s;
                    while rest != 0 {
                        let e = rest.trailing_zeros() as usize;
                        if used & ends[e] != 0 {
                            return;
                        }
                        used |= ends[e];
                        rest &= rest - 1;
                    }
                    count += 1;
                });
            }
        }
        CountKind::IndependentSet => {
            let rows = g.adjacency_masks()?;
            for_each_subset(items, size, |s| {
                let mut rest = s;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    if rows[v] & s != 0 {
                        return;
                    }
                    rest &= rest - 1;
                }
                count += 1;
            });
        }
    }
    Ok(BigUint::from(count))
}

#[derive(Default)]
struct Tally {
    small: u128,
    big: BigUint,
}

impl Tally {
    fn add(&mut self, x: u128) {
        match self.small.checked_add(x) {
            Some(s) => self.small = s,
            None => {
                self.big += BigUint::from(self.small) + BigUint::from(x);
                self.small = 0;
            }
        }
    }

    fn add_big(&mut self, x: BigUint) {
        self.big += x;
    }

    fn finish(self) -> BigUint {
        self.big + BigUint::from(self.small)
    }
}

struct HomSearch<'a> {
    target: &'a [u64],
    target_all: u64,
    head: Vec<usize>,
    /// For each head position, the positions of earlier head neighbours.
    head_back: Vec<Vec<usize>>,
    /// For each tail vertex, the head positions of its neighbours.
    tail_nbrs: Vec<Vec<usize>>,
    image: Vec<usize>,
}

impl HomSearch<'_> {
    fn run(&mut self, i: usize, tally: &mut Tally) {
        if i == self.head.len() {
            let mut prod: u128 = 1;
            let mut overflow: Option<BigUint> = None;
            for nbrs in &self.tail_nbrs {
                let mut mask = self.target_all;
                for &pos in nbrs {
                    mask &= self.target[self.image[pos]];
                }
                let c = mask.count_ones() as u128;
                if c == 0 {
                    return;
                }
                match (&mut overflow, prod.checked_mul(c)) {
                    (None, Some(p)) => prod = p,
                    (None, None) => overflow = Some(BigUint::from(prod) * BigUint::from(c)),
                    (Some(b), _) => *b *= BigUint::from(c),
                }
            }
            match overflow {
                None => tally.add(prod),
                Some(b) => tally.add_big(b),
            }
            return;
        }
        let mut cands = self.target_all;
        for &pos in &self.head_back[i] {
            cands &= self.target[self.image[pos]];
        }
        while cands != 0 {
            let w = cands.trailing_zeros() as usize;
            self.image[i] = w;
            self.run(i + 1, tally);
            cands &= cands - 1;
        }
    }
}

/// Counts maps `f: V(g) → V(h)` sending every edge of `g` to an edge of `h`;
/// a loop at `w` lets adjacent vertices share the image `w`. The empty graph
/// has exactly one homomorphism (the empty map) into any target.
pub fn count_homomorphisms(g: &Graph, h: &Graph) -> Result<BigUint> {
    g.require_simple()?;
    let target = h.adjacency_masks()?;
    let target_all = full_mask(target.len());
    let hn = target.len() as u128;
    let n = g.vertex_count();

    let mut seen = vec![false; n];
    let mut total = BigUint::one();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        // breadth-first order of this component
        let mut order = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            for &w in g.neighbors(order[i]) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
            i += 1;
        }
        if order.len() == 1 {
            total *= BigUint::from(hn);
            continue;
        }
        // a greedy independent set of low-degree vertices is counted in
        // closed form once its neighbours are fixed
        let mut by_degree = order.clone();
        by_degree.sort_by_key(|&v| (g.degree(v), v));
        let mut in_tail = vec![false; n];
        let mut blocked = vec![false; n];
        for &v in &by_degree {
            if !blocked[v] {
                in_tail[v] = true;
                for &w in g.neighbors(v) {
                    blocked[w] = true;
                }
            }
        }
        let head: Vec<usize> = order.iter().copied().filter(|&v| !in_tail[v]).collect();
        let space = (0..head.len()).try_fold(1u128, |acc, _| acc.checked_mul(hn.max(1)));
        if space.is_none_or(|s| s > HOM_SEARCH_CAP) {
            return Err(Error::TooLarge(format!(
                "homomorphism search over {}^{} assignments exceeds the cap",
                hn,
                head.len()
            )));
        }
        let mut pos_of = vec![usize::MAX; n];
        for (p, &v) in head.iter().enumerate() {
            pos_of[v] = p;
        }
        let head_back = head
            .iter()
            .enumerate()
            .map(|(p, &v)| {
                g.neighbors(v)
                    .iter()
                    .map(|&w| pos_of[w])
                    .filter(|&q| q < p)
                    .collect()
            })
            .collect();
        let tail_nbrs = order
            .iter()
            .filter(|&&v| in_tail[v])
            .map(|&v| g.neighbors(v).iter().map(|&w| pos_of[w]).collect())
            .collect();
        let mut search = HomSearch {
            target: &target,
            target_all,
            image: vec![0; head.len()],
            head,
            head_back,
            tail_nbrs,
        };
        let mut tally = Tally::default();
        search.run(0, &mut tally);
        total *= tally.finish();
        if total.is_zero() {
            break;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use crate::graph::{build_cycle, build_hc, build_kdd, build_petersen, build_prism};

    fn nums(p: &CountPolynomial) -> Vec<u64> {
        p.coefficients().iter().map(|c| c.to_u64().unwrap()).collect()
    }

    fn c4() -> Graph {
        build_cycle(4).unwrap()
    }

    fn k2() -> Graph {
        build_kdd(1).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn brute_force_reference_values() {
        // Values frozen from the subset-enumeration oracle.
        let c8 = build_cycle(8).unwrap();
        let m: Vec<u64> = (0..=4)
            .map(|k| brute_force_count(&c8, CountKind::Matching, k).unwrap().to_u64().unwrap())
            .collect();
        assert_eq!(m, [1, 8, 20, 16, 2]);
        assert_eq!(brute_force_count(&c4(), CountKind::Matching, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(brute_force_count(&c4(), CountKind::IndependentSet, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(brute_force_count(&build_petersen(), CountKind::Matching, 0).unwrap(), BigUint::one());
        assert_eq!(brute_force_count(&c4(), CountKind::Matching, 3).unwrap(), BigUint::zero());
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(nums(&matching_polynomial(&c4()).unwrap()), [1, 4, 2]);
        assert_eq!(nums(&matching_polynomial(&k2()).unwrap()), [1, 1]);
        assert_eq!(nums(&matching_polynomial(&build_cycle(8).unwrap()).unwrap()), [1, 8, 20, 16, 2]);
        assert_eq!(nums(&independence_polynomial(&c4()).unwrap()), [1, 4, 2]);
        assert_eq!(nums(&independence_polynomial(&k2()).unwrap()), [1, 2]);
        assert_eq!(nums(&independence_polynomial(&build_cycle(8).unwrap()).unwrap()), [1, 8, 20, 16, 2]);
        assert_eq!(nums(&matching_polynomial(&Graph::empty(3)).unwrap()), [1]);
        assert_eq!(nums(&independence_polynomial(&Graph::empty(3)).unwrap()), [1, 3, 3, 1]);
        assert_eq!(nums(&independence_polynomial(&Graph::empty(0)).unwrap()), [1]);
    }

    #[test]
    fn polynomial_invariants_hold() {
        for g in [build_petersen(), build_prism(), build_kdd(3).unwrap(), build_cycle(9).unwrap()] {
            let m = matching_polynomial(&g).unwrap();
            assert!(m.coefficient(0).is_one());
            assert_eq!(m.degree(), g.max_matching_size().unwrap());
            assert_eq!(m.coefficient(1), BigUint::from(g.edge_count()));
            let i = independence_polynomial(&g).unwrap();
            assert!(i.coefficient(0).is_one());
            assert_eq!(i.coefficient(1), BigUint::from(g.vertex_count()));
        }
    }

    #[test]
    fn loops_rejected() {
        let h = build_hc(1, 1).unwrap();
        assert_eq!(matching_polynomial(&h), Err(Error::HasLoops));
        assert_eq!(independence_polynomial(&h), Err(Error::HasLoops));
    }

    #[test]
    fn evaluation() {
        let p = matching_polynomial(&c4()).unwrap();
        assert_eq!(eval_partition(&p, &rat(1, 1)).unwrap(), rat(7, 1));
        assert_eq!(eval_partition(&p, &rat(0, 1)).unwrap(), rat(1, 1));
        let k2p = matching_polynomial(&k2()).unwrap();
        assert_eq!(eval_partition(&k2p, &rat(1, 2)).unwrap(), rat(3, 2));
        assert!(eval_partition(&p, &rat(-1, 2)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = matching_polynomial(&c4()).unwrap();
        assert_eq!(p.to_json(), r#"["1","4","2"]"#);
        assert_eq!(CountPolynomial::from_json(CountKind::Matching, &p.to_json()).unwrap(), p);
        assert!(CountPolynomial::from_json(CountKind::Matching, r#"["x"]"#).is_err());
    }

    #[test]
    fn brute_force_cap() {
        let k12 = crate::graph::build_complete(12); // 66 edges
        assert!(matches!(brute_force_count(&k12, CountKind::Matching, 3), Err(Error::TooLarge(_))));
    }

    #[test]
    fn homomorphism_examples() {
        assert_eq!(count_homomorphisms(&k2(), &k2()).unwrap(), BigUint::from(2u32));
        assert_eq!(count_homomorphisms(&c4(), &k2()).unwrap(), BigUint::from(2u32));
        assert_eq!(count_homomorphisms(&k2(), &build_hc(1, 1).unwrap()).unwrap(), BigUint::from(3u32));
        assert_eq!(count_homomorphisms(&Graph::empty(0), &k2()).unwrap(), BigUint::one());
        // odd cycle into a bipartite target
        assert_eq!(count_homomorphisms(&build_cycle(5).unwrap(), &k2()).unwrap(), BigUint::zero());
        // proper 3-colourings of C5: (k-1)^n + (-1)^n (k-1) = 32 - 2
        let k3 = crate::graph::build_complete(3);
        assert_eq!(count_homomorphisms(&build_cycle(5).unwrap(), &k3).unwrap(), BigUint::from(30u32));
    }

    /// Oracle: try every map `V(g) → V(h)`.
    fn hom_brute(g: &Graph, h: &Graph) -> u64 {
        let (n, k) = (g.vertex_count(), h.vertex_count());
        let mut count = 0;
        let mut f = vec![0; n];
        loop {
            if g.edges().iter().all(|&(u, v)| h.has_edge(f[u], f[v])) {
                count += 1;
            }
            let mut i = 0;
            while i < n {
                f[i] += 1;
                if f[i] < k {
                    break;
                }
                f[i] = 0;
                i += 1;
            }
            if i == n {
                return count;
            }
        }
    }

    #[test]
    fn homomorphisms_match_exhaustive_maps() {
        let targets = [k2(), build_hc(1, 1).unwrap(), build_hc(2, 2).unwrap(), crate::graph::build_complete(3)];
        let sources = [c4(), build_prism(), build_kdd(3).unwrap(), build_cycle(5).unwrap(), Graph::new(5, [(0, 1), (2, 3)], false).unwrap()];
        for g in &sources {
            for h in &targets {
                assert_eq!(count_homomorphisms(g, h).unwrap(), BigUint::from(hom_brute(g, h)));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
            (1..=max_n, any::<u64>()).prop_map(|(n, bits)| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits.rotate_left(k) & 3 == 0 {
                            edges.push((u, v));
                        }
                        k += 7;
                    }
                }
                Graph::new(n, edges, false).unwrap()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn recursion_matches_enumeration(g in arb_graph(10)) {
                let m = matching_polynomial(&g).unwrap();
                let i = independence_polynomial(&g).unwrap();
                for k in 0..=g.vertex_count() {
                    if let Ok(b) = brute_force_count(&g, CountKind::Matching, k) {
                        prop_assert_eq!(m.coefficient(k), b);
                    }
                    prop_assert_eq!(i.coefficient(k), brute_force_count(&g, CountKind::IndependentSet, k).unwrap());
                }
            }

            #[test]
            fn union_multiplies(a in arb_graph(7), b in arb_graph(7)) {
                let u = a.disjoint_union(&b);
                for kind in [CountKind::Matching, CountKind::IndependentSet] {
                    let lhs = count_polynomial(&u, kind).unwrap();
                    let rhs = count_polynomial(&a, kind).unwrap().product(&count_polynomial(&b, kind).unwrap()).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }
            }

            #[test]
            fn hc_identity(g in arb_graph(6), c in 1usize..3, cl in 0usize..3) {
                // |Hom(G, H_C)| = C^N · Z_λ(G) with λ = cl / c
                let homs = count_homomorphisms(&g, &build_hc(c, cl).unwrap()).unwrap();
                let z = eval_partition(&independence_polynomial(&g).unwrap(), &rat(cl as i64, c as i64)).unwrap();
                let scaled = z * Rational::from_integer(num_bigint::BigInt::from(c).pow(g.vertex_count() as u32));
                prop_assert!(scaled.is_integer());
                prop_assert_eq!(scaled.to_integer(), num_bigint::BigInt::from(homs));
            }
        }
    }
}
