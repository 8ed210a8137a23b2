//! Runs exact counts against reference counts and bounds, one [`Verdict`]
//! per inequality instance. A failing verdict is kept, never raised.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    self, balanced_stirling_bound, block_miss_stats, block_profile, gurvits_holds,
    ind_count_upper, ind_lower_dk, ind_pf_bound, ind_pf_holds, match_count_upper, match_pf_bound, match_pf_holds,
    match_single_term_bound, match_single_term_holds, optimal_lambda, small_t_exact, small_t_product, BoundParams,
    IndLowerVariant, IndUpperVariant, LogBound,
};
use crate::canon::canonical_form;
use crate::count::{count_homomorphisms, eval_partition, independence_polynomial, matching_polynomial, CountPolynomial, Rational};
use crate::error::{Error, Result};
use crate::generator::{generate, GenSpec};
use crate::graph::{build_complete, build_hc, build_kdd, Graph};
use crate::hp::{sig12, Real};
use crate::kdd::{binomial, bregman_log_bound, dk_polynomial, DkParams};
use crate::roots::polynomial_roots;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check_id: String,
    pub graph_label: String,
    pub params: BoundParams,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    /// `log₂` distance to the violating side, positive when passing.
    pub margin: Option<f64>,
    /// Graph text, kept only on failure so the instance can be replayed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_text: Option<String>,
}

impl Verdict {
    fn new(check_id: impl Into<String>, graph_label: &str, params: BoundParams) -> Verdict {
        Verdict {
            check_id: check_id.into(),
            graph_label: graph_label.to_string(),
            params,
            lhs: String::new(),
            rhs: String::new(),
            pass: false,
            margin: None,
            graph_text: None,
        }
    }

    /// `lhs ≤ rhs` between exact integers, no slack.
    fn exact_le(mut self, lhs: &BigUint, rhs: &BigUint) -> Verdict {
        self.pass = lhs <= rhs;
        self.margin = log_gap(lhs, rhs);
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self
    }

    fn exact_eq(mut self, lhs: &BigUint, rhs: &BigUint) -> Verdict {
        self.pass = lhs == rhs;
        self.margin = log_gap(lhs, rhs).map(|m| if self.pass { 0.0 } else { m });
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self
    }

    /// A count against a log-domain bound, with the pass decided by
    /// `exact` when an exact form exists and by slack otherwise.
    fn against(mut self, count_log2: Option<Real>, bound: &LogBound, exact: Option<bool>) -> Verdict {
        let by_slack = match &count_log2 {
            Some(x) => bound.admits_log2(x),
            None => bound.direction == bounds::Direction::Upper,
        };
        self.pass = exact.unwrap_or(by_slack);
        self.margin = count_log2.as_ref().map(|x| sig12(bound.margin_log2(x).to_f64()));
        self.lhs = count_log2.map_or_else(|| "-inf".to_string(), |x| x.to_string());
        self.rhs = bound.value.to_string();
        self
    }

    fn with_graph(mut self, g: &Graph) -> Verdict {
        if !self.pass {
            self.graph_text = Some(g.to_text());
        }
        self
    }

    pub fn sort_key_cmp(&self, other: &Verdict) -> Ordering {
        (&self.graph_label, &self.check_id, &self.params).cmp(&(&other.graph_label, &other.check_id, &other.params))
    }
}

fn log_gap(lhs: &BigUint, rhs: &BigUint) -> Option<f64> {
    if lhs.is_zero() || rhs.is_zero() {
        return None;
    }
    Some(sig12((Real::log2_int(rhs) - Real::log2_int(lhs)).to_f64()))
}

fn log2_ratio_opt(x: &Rational) -> Option<Real> {
    (!x.is_zero()).then(|| Real::log2_ratio(x))
}

/// Sorts by `(graph_label, check_id, params)`, keeping emission order
/// among equal keys.
pub fn sort_verdicts(v: &mut [Verdict]) {
    v.sort_by(Verdict::sort_key_cmp);
}

/// The canonical code for simple graphs that fit, else a size summary.
pub fn graph_label(g: &Graph) -> String {
    match canonical_form(g) {
        Ok(l) => l.to_string(),
        Err(_) => format!("n{}m{}", g.vertex_count(), g.edge_count()),
    }
}

fn regular(g: &Graph) -> Result<usize> {
    g.require_simple()?;
    g.regular_degree().ok_or(Error::NotRegular)
}

/// A total order `≺` on the vertices with `p_≺(v)`, the number of
/// neighbours of `v` placed before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrder {
    order: Vec<usize>,
    back_degrees: Vec<usize>,
}

impl VertexOrder {
    /// `order[i]` is the `i`-th smallest vertex.
    pub fn new(g: &Graph, order: Vec<usize>) -> Result<VertexOrder> {
        let n = g.vertex_count();
        let mut pos = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::Domain(format!("order has {} entries for {n} vertices", order.len())));
        }
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::Domain(format!("order is not a permutation: {order:?}")));
            }
            pos[v] = i;
        }
        let back_degrees: Vec<usize> =
            (0..n).map(|v| g.neighbors(v).iter().filter(|&&w| w != v && pos[w] < pos[v]).count()).collect();
        let loops = g.edges().iter().filter(|(u, v)| u == v).count();
        assert_eq!(back_degrees.iter().sum::<usize>(), g.edge_count() - loops);
        Ok(VertexOrder { order, back_degrees })
    }

    pub fn identity(g: &Graph) -> VertexOrder {
        VertexOrder::new(g, (0..g.vertex_count()).collect()).expect("identity is a permutation")
    }

    pub fn random(g: &Graph, seed: u64) -> VertexOrder {
        let mut order: Vec<usize> = (0..g.vertex_count()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        VertexOrder::new(g, order).expect("shuffle is a permutation")
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn back_degrees(&self) -> &[usize] {
        &self.back_degrees
    }
}

/// `λ = 2^k` for `k = −6..=6`.
pub fn default_lambda_grid() -> Vec<Rational> {
    (-6i32..=6)
        .map(|k| {
            if k >= 0 {
                Rational::from_integer(BigInt::one() << k)
            } else {
                Rational::new(BigInt::one(), BigInt::one() << -k)
            }
        })
        .collect()
}

pub fn default_c_grid() -> Vec<Rational> {
    vec![Rational::from_integer(2.into()), Rational::from_integer(4.into())]
}

fn regular_graphs(n: usize, d: usize, bipartite_only: bool) -> Result<Vec<Graph>> {
    generate(&GenSpec::new(n, d).bipartite_only(bipartite_only))
}

fn compare_with_dk(
    n: usize,
    d: usize,
    check: &str,
    count: fn(&Graph) -> Result<CountPolynomial>,
    reference: &CountPolynomial,
) -> Result<Vec<Verdict>> {
    let graphs = regular_graphs(n, d, false)?;
    let mut out: Vec<Verdict> = graphs
        .par_iter()
        .map(|g| -> Result<Vec<Verdict>> {
            let label = graph_label(g);
            let p = count(g)?;
            (0..=n / 2)
                .map(|k| {
                    let params = BoundParams::new(n, d, k)?;
                    Ok(Verdict::new(check, &label, params).exact_le(&p.coefficient(k), &reference.coefficient(k)).with_graph(g))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    sort_verdicts(&mut out);
    Ok(out)
}

/// `m_ℓ(G) ≤ m_ℓ(DK)` for every generated `G` and every `ℓ`.
pub fn verify_umc(n: usize, d: usize) -> Result<Vec<Verdict>> {
    let dk = DkParams::new(n, d)?;
    compare_with_dk(n, d, "umc", matching_polynomial, &dk_polynomial(&dk, crate::CountKind::Matching))
}

/// `i_t(G) ≤ i_t(DK)` for every generated `G` and every `t`.
pub fn verify_kahn(n: usize, d: usize) -> Result<Vec<Verdict>> {
    let dk = DkParams::new(n, d)?;
    compare_with_dk(n, d, "kahn", independence_polynomial, &dk_polynomial(&dk, crate::CountKind::IndependentSet))
}

/// `|I(G)| ≤ (2^{d+1} − 1)^{n/2d}` for every bipartite generated `G`.
pub fn verify_bipartite_total(n: usize, d: usize) -> Result<Vec<Verdict>> {
    let dk = DkParams::new(n, d)?;
    let rhs = ((BigUint::one() << (d + 1)) - 1u32).pow(dk.copies() as u32);
    let graphs = regular_graphs(n, d, true)?;
    let mut out = graphs
        .par_iter()
        .map(|g| {
            let total = independence_polynomial(g)?.total();
            Ok(Verdict::new("ind-total-bipartite", &graph_label(g), BoundParams::new(n, d, 0)?).exact_le(&total, &rhs).with_graph(g))
        })
        .collect::<Result<Vec<_>>>()?;
    sort_verdicts(&mut out);
    Ok(out)
}

/// Roots of the matching polynomial are real and negative and their
/// negated reciprocals sum to `|E|`.
pub fn verify_real_rooted(g: &Graph, tol: f64) -> Result<Verdict> {
    if g.edge_count() == 0 {
        return Err(Error::Edgeless);
    }
    let p = matching_polynomial(g)?;
    let r = polynomial_roots(&p, tol)?;
    let params = BoundParams::new(g.vertex_count(), g.regular_degree().unwrap_or(0), 0)?;
    let mut v = Verdict::new("real-rooted", &graph_label(g), params);
    v.pass = r.pass();
    v.lhs = format!(
        "max_rel_imag={} max_real={} inverse_sum={}",
        sig12(r.max_rel_imag),
        sig12(r.max_real),
        sig12(r.inverse_sum)
    );
    v.rhs = format!("tol={} edges={}", tol, g.edge_count());
    v.margin = Some(sig12(-r.max_real));
    Ok(v.with_graph(g))
}

/// A compact, loop-aware description of a homomorphism target.
pub fn target_label(h: &Graph) -> String {
    let edges: Vec<String> = h.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("{}[{}]", h.vertex_count(), edges.join(","))
}

/// `|Hom(G,H)|^d ≤ Π_v |Hom(K_{p(v),p(v)}, H)|`, with `|Hom(K_{0,0}, H)| = 1`.
pub fn verify_hom_inequality(g: &Graph, h: &Graph, order: &VertexOrder) -> Result<Verdict> {
    let d = regular(g)?;
    let lhs = count_homomorphisms(g, h)?.pow(d as u32);
    let mut cache: BTreeMap<usize, BigUint> = BTreeMap::new();
    let mut rhs = BigUint::one();
    for &p in order.back_degrees() {
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(p) {
            let kpp = if p == 0 { Graph::empty(0) } else { build_kdd(p)? };
            e.insert(count_homomorphisms(&kpp, h)?);
        }
        rhs *= &cache[&p];
    }
    let order_text: Vec<String> = order.order().iter().map(usize::to_string).collect();
    let check = format!("hom/{}/order={}", target_label(h), order_text.join(","));
    let params = BoundParams::new(g.vertex_count(), d, 0)?;
    Ok(Verdict::new(check, &graph_label(g), params).exact_le(&lhs, &rhs).with_graph(g))
}

/// `|Hom(G, H_C)| = C^N · Z_λ(G)` with `Cλ` integral.
pub fn verify_hc_identity(g: &Graph, c: usize, lambda: &Rational) -> Result<Verdict> {
    let c_lambda = lambda * Rational::from_integer(c.into());
    if !c_lambda.is_integer() || c_lambda < Rational::zero() {
        return Err(Error::Domain(format!("C·λ = {c_lambda} is not a nonnegative integer")));
    }
    let cl: usize = c_lambda
        .to_integer()
        .try_into()
        .map_err(|_| Error::TooLarge(format!("C·λ = {c_lambda}")))?;
    let h = build_hc(c, cl)?;
    let hom = count_homomorphisms(g, &h)?;
    let z = eval_partition(&independence_polynomial(g)?, lambda)?;
    let scaled = z * Rational::from_integer(BigInt::from(c).pow(g.vertex_count() as u32));
    let params = BoundParams::new(g.vertex_count(), g.regular_degree().unwrap_or(0), 0)?.with_lambda(lambda.clone());
    let check = format!("hc-identity/C={c}");
    let v = Verdict::new(check, &graph_label(g), params);
    Ok(if scaled.is_integer() {
        v.exact_eq(&hom, &scaled.to_integer().to_biguint().expect("nonnegative"))
    } else {
        let mut v = v;
        v.lhs = hom.to_string();
        v.rhs = scaled.to_string();
        v
    }
    .with_graph(g))
}

/// `i_t(G) ≤ 2^t·C(N/2, t)` for a graph with a perfect matching.
pub fn verify_perfect_matching_bound(g: &Graph) -> Result<Vec<Verdict>> {
    if !g.has_perfect_matching()? {
        return Err(Error::NoPerfectMatching);
    }
    let n = g.vertex_count();
    let d = g.regular_degree().unwrap_or(0);
    let label = graph_label(g);
    let p = independence_polynomial(g)?;
    (0..=n / 2)
        .map(|t| {
            let rhs = bounds::perfect_matching_ind_bound(n, t);
            Ok(Verdict::new("ind-upper-pm", &label, BoundParams::new(n, d, t)?).exact_le(&p.coefficient(t), &rhs).with_graph(g))
        })
        .collect()
}

/// Every bound that applies to a regular graph, on every size and on
/// every `λ` of the grid.
pub fn verify_bounds_suite(g: &Graph, lambda_grid: &[Rational]) -> Result<Vec<Verdict>> {
    let d = regular(g)?;
    let n = g.vertex_count();
    if d == 0 {
        return Err(Error::Edgeless);
    }
    let label = graph_label(g);
    let m = matching_polynomial(g)?;
    let ind = independence_polynomial(g)?;
    let bipartite = g.bipartition();
    let has_pm = g.has_perfect_matching()?;
    let base = |s: usize| BoundParams::new(n, d, s);
    let mut out = Vec::new();

    for l in lambda_grid {
        let p = base(0)?.with_lambda(l.clone());
        let zm = eval_partition(&m, l)?;
        let zi = eval_partition(&ind, l)?;
        out.push(Verdict::new("match-pf", &label, p.clone()).against(log2_ratio_opt(&zm), &match_pf_bound(&p)?, Some(match_pf_holds(&zm, &p)?)));
        out.push(Verdict::new("gurvits", &label, p.clone()).against(
            log2_ratio_opt(&zm),
            &bounds::gurvits_bound(g, l)?,
            Some(gurvits_holds(g, &zm, l)?),
        ));
        out.push(Verdict::new("ind-pf-general", &label, p.clone()).against(
            log2_ratio_opt(&zi),
            &ind_pf_bound(&p, false)?,
            Some(ind_pf_holds(&zi, &p, false)?),
        ));
        if bipartite.is_some() {
            out.push(Verdict::new("ind-pf-bipartite", &label, p.clone()).against(
                log2_ratio_opt(&zi),
                &ind_pf_bound(&p, true)?,
                Some(ind_pf_holds(&zi, &p, true)?),
            ));
        }
    }

    for ell in 0..=n / 2 {
        let count = m.coefficient(ell);
        let count_log2 = (!count.is_zero()).then(|| Real::log2_int(&count));
        let p = base(ell)?;
        out.push(Verdict::new("match-upper", &label, p.clone()).against(count_log2.clone(), &match_count_upper(&p)?, None));
        let mut lambdas: Vec<Rational> = lambda_grid.iter().filter(|l| ell == 0 || !l.is_zero()).cloned().collect();
        if let Ok(opt) = optimal_lambda(&p) {
            lambdas.push(opt);
        }
        for l in lambdas {
            let pl = p.clone().with_lambda(l);
            out.push(Verdict::new("single-term", &label, pl.clone()).against(
                count_log2.clone(),
                &match_single_term_bound(&pl)?,
                Some(match_single_term_holds(&count, &pl)?),
            ));
        }
    }

    for t in 0..=n / 2 {
        let count = ind.coefficient(t);
        let count_log2 = (!count.is_zero()).then(|| Real::log2_int(&count));
        let p = base(t)?;
        out.push(Verdict::new("ind-upper-general", &label, p.clone()).against(
            count_log2.clone(),
            &ind_count_upper(&p, IndUpperVariant::General)?,
            None,
        ));
        if bipartite.is_some() {
            out.push(Verdict::new("ind-upper-bipartite", &label, p.clone()).against(
                count_log2.clone(),
                &ind_count_upper(&p, IndUpperVariant::Bipartite)?,
                None,
            ));
        }
        if has_pm {
            let rhs = bounds::perfect_matching_ind_bound(n, t);
            out.push(Verdict::new("ind-upper-pm", &label, p.clone()).exact_le(&count, &rhs));
        }
    }

    if let Some(bp) = &bipartite {
        if has_pm && bp.class_a.len() == bp.class_b.len() {
            let degrees: Vec<usize> = bp.class_a.iter().map(|&v| g.degree(v)).collect();
            let count = m.coefficient(n / 2);
            let p = base(n / 2)?;
            out.push(Verdict::new("bregman", &label, p).against(
                Some(Real::log2_int(&count)),
                &bregman_log_bound(&degrees)?,
                None,
            ));
        }
    }

    let out: Vec<Verdict> = out.into_iter().map(|v| v.with_graph(g)).collect();
    Ok(out)
}

/// Lower bounds on `DK` itself: Markov and small-t bounds against
/// `i_t(DK)`, the balanced Stirling witness against `m_ℓ(DK)`, and the
/// block statistics behind them.
pub fn verify_dk_suite(n: usize, d: usize, c_grid: &[Rational]) -> Result<Vec<Verdict>> {
    let dk = DkParams::new(n, d)?;
    let label = format!("DK({n},{d})");
    let ind = dk_polynomial(&dk, crate::CountKind::IndependentSet);
    let mat = dk_polynomial(&dk, crate::CountKind::Matching);
    let mut out = Vec::new();
    for t in 0..=n / 2 {
        let count = ind.coefficient(t);
        let count_log2 = Some(Real::log2_int(&count));
        let p = BoundParams::new(n, d, t)?;
        for c in c_grid {
            let pc = p.clone().with_c(c.clone());
            out.push(Verdict::new("ind-lower-markov", &label, pc.clone()).against(
                count_log2.clone(),
                &ind_lower_dk(&pc, IndLowerVariant::Markov)?,
                None,
            ));
            out.push(block_markov(&label, &pc)?);
        }
        if t <= dk.copies() {
            out.push(Verdict::new("ind-lower-small-t", &label, p.clone()).against(
                count_log2.clone(),
                &ind_lower_dk(&p, IndLowerVariant::SmallT)?,
                None,
            ));
            let exact = small_t_exact(&dk, t)?;
            out.push(Verdict::new("small-t-exact", &label, p.clone()).exact_le(&exact, &count));
            let mut v = Verdict::new("small-t-product", &label, p.clone());
            let product = small_t_product(&dk, t)?;
            v.pass = product <= Rational::from_integer(BigInt::from(exact.clone()));
            v.lhs = product.to_string();
            v.rhs = exact.to_string();
            out.push(v);
        }
        out.extend(block_identities(&label, &p, &count)?);
    }
    for ell in 1..n / 2 {
        let p = BoundParams::new(n, d, ell)?.with_c(Rational::one());
        let count = mat.coefficient(ell);
        out.push(Verdict::new("dk-balanced-stirling", &label, p.clone()).against(
            Some(Real::log2_int(&count)),
            &balanced_stirling_bound(&p)?,
            None,
        ));
    }
    sort_verdicts(&mut out);
    Ok(out)
}

/// `Σ_{k ≤ cμ} b_k ≥ (1 − 1/c)·C(N/2, t)` with brute-force `b_k`.
fn block_markov(label: &str, p: &BoundParams) -> Result<Verdict> {
    let c = p.c.clone().expect("c set by caller");
    let b = block_profile(p)?;
    let mu = block_miss_stats(p)?.mu_exact;
    let limit = &c * &mu;
    let lhs: BigUint = b.iter().enumerate().filter(|(k, _)| Rational::from_integer((*k).into()) <= limit).map(|(_, x)| x).sum();
    let rhs = (Rational::one() - c.recip()) * Rational::from_integer(BigInt::from(binomial(p.n / 2, p.size)));
    let mut v = Verdict::new("block-markov", label, p.clone());
    v.pass = Rational::from_integer(BigInt::from(lhs.clone())) >= rhs;
    v.lhs = lhs.to_string();
    v.rhs = rhs.to_string();
    Ok(v)
}

/// `i_t(DK) = Σ_k 2^{N/2d − k}·b_k`, the enumerated mean of missed blocks
/// equals `μ`, and `μ` is below its analytic bound.
fn block_identities(label: &str, p: &BoundParams, i_t: &BigUint) -> Result<Vec<Verdict>> {
    let b = block_profile(p)?;
    let copies = p.n / (2 * p.d);
    let weighted: BigUint = b.iter().enumerate().map(|(k, bk)| bk << (copies - k)).sum();
    let stats = block_miss_stats(p)?;
    let total: BigUint = b.iter().sum();
    let moment: BigUint = b.iter().enumerate().map(|(k, bk)| bk * k).sum();
    let mean = Rational::new(BigInt::from(moment), BigInt::from(total));
    let mut mu = Verdict::new("block-mu", label, p.clone());
    mu.pass = mean == stats.mu_exact;
    mu.lhs = mean.to_string();
    mu.rhs = stats.mu_exact.to_string();
    let mut bound = Verdict::new("block-mu-bound", label, p.clone());
    bound.pass = stats.mu_exact <= stats.mu_bound;
    bound.lhs = stats.mu_exact.to_string();
    bound.rhs = stats.mu_bound.to_string();
    Ok(vec![Verdict::new("block-identity", label, p.clone()).exact_eq(&weighted, i_t), mu, bound])
}

/// The standard homomorphism targets: `K₂`, `K₃`, the looped vertex and
/// `H_C` for `(C, Cλ) ∈ {(1,1), (2,2)}`.
pub fn hom_targets() -> Vec<(String, Graph)> {
    vec![
        ("K2".into(), build_complete(2)),
        ("K3".into(), build_complete(3)),
        ("looped-K1".into(), build_hc(1, 0).expect("valid")),
        ("H_C(1,1)".into(), build_hc(1, 1).expect("valid")),
        ("H_C(2,2)".into(), build_hc(2, 2).expect("valid")),
    ]
}

/// The homomorphism inequality against every target under `orders`
/// seeded random vertex orders, plus the `H_C` identity.
pub fn verify_hom_suite(g: &Graph, targets: &[(String, Graph)], orders: usize, seed: u64) -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    for (_, h) in targets {
        for k in 0..orders {
            let order = VertexOrder::random(g, seed.wrapping_add(k as u64));
            out.push(verify_hom_inequality(g, h, &order)?);
        }
    }
    for (c, cl) in [(1usize, 0usize), (1, 1), (2, 2)] {
        out.push(verify_hc_identity(g, c, &Rational::new(cl.into(), c.into()))?);
    }
    Ok(out)
}
