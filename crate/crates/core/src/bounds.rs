//! Closed-form bounds on matching and independent-set counts, held in log₂
//! domain with a declared slack direction.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::count::{for_each_subset, Rational};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hp::Real;
use crate::kdd::{binomial, factorial, m_dk, DkParams};

/// Every log-domain comparison is relaxed by `2^-SLACK_BITS` in the
/// direction favourable to the inequality under test.
pub const SLACK_BITS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogBound {
    pub value: Real,
    pub direction: Direction,
    pub slack: Real,
}

impl LogBound {
    pub fn upper(value: Real) -> LogBound {
        LogBound { value, direction: Direction::Upper, slack: Real::pow2_neg(SLACK_BITS) }
    }

    pub fn lower(value: Real) -> LogBound {
        LogBound { value, direction: Direction::Lower, slack: Real::pow2_neg(SLACK_BITS) }
    }

    /// Signed distance from `x` to the bound, positive on the admitted side.
    pub fn margin_log2(&self, x: &Real) -> Real {
        match self.direction {
            Direction::Upper => &self.value - x,
            Direction::Lower => x - &self.value,
        }
    }

    pub fn admits_log2(&self, x: &Real) -> bool {
        let m = self.margin_log2(x);
        !(&m + &self.slack).is_negative()
    }

    /// A zero count has `log₂ = −∞`: below every upper bound, above no
    /// lower bound.
    pub fn admits_ratio(&self, x: &Rational) -> bool {
        if x.is_zero() {
            return self.direction == Direction::Upper;
        }
        self.admits_log2(&Real::log2_ratio(x))
    }

    pub fn admits_count(&self, x: &BigUint) -> bool {
        self.admits_ratio(&Rational::from_integer(BigInt::from(x.clone())))
    }

    /// `None` for a zero count.
    pub fn margin_count(&self, x: &BigUint) -> Option<Real> {
        (!x.is_zero()).then(|| self.margin_log2(&Real::log2_int(x)))
    }
}

impl fmt::Display for LogBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::Upper => "<=",
            Direction::Lower => ">=",
        };
        write!(f, "{dir} 2^{}", self.value)
    }
}

/// Scalar inputs to the bound formulas. `size` is `ℓ` for matchings and `t`
/// for independent sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundParams {
    pub n: usize,
    pub d: usize,
    pub size: usize,
    pub lambda: Option<Rational>,
    pub c: Option<Rational>,
}

impl BoundParams {
    pub fn new(n: usize, d: usize, size: usize) -> Result<BoundParams> {
        if n == 0 {
            return Err(Error::OutOfRange { what: "n", value: n, min: 1, max: usize::MAX });
        }
        if 2 * size > n {
            return Err(Error::OutOfRange { what: "size", value: size, min: 0, max: n / 2 });
        }
        Ok(BoundParams { n, d, size, lambda: None, c: None })
    }

    pub fn with_lambda(mut self, lambda: Rational) -> BoundParams {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_c(mut self, c: Rational) -> BoundParams {
        self.c = Some(c);
        self
    }

    /// `2·size/n`.
    pub fn alpha(&self) -> Rational {
        ratio(2 * self.size, self.n)
    }

    pub fn half_n(&self) -> Rational {
        ratio(self.n, 2)
    }

    fn lambda(&self) -> Result<&Rational> {
        let l = self.lambda.as_ref().ok_or_else(|| Error::Domain("lambda is required".into()))?;
        if l.is_negative() {
            return Err(Error::Domain(format!("lambda must be nonnegative, got {l}")));
        }
        Ok(l)
    }

    fn require_degree(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::OutOfRange { what: "d", value: 0, min: 1, max: usize::MAX });
        }
        Ok(())
    }

    fn dk(&self) -> Result<DkParams> {
        DkParams::new(self.n, self.d)
    }
}

impl fmt::Display for BoundParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} d={} size={}", self.n, self.d, self.size)?;
        if let Some(l) = &self.lambda {
            write!(f, " lambda={l}")?;
        }
        if let Some(c) = &self.c {
            write!(f, " c={c}")?;
        }
        Ok(())
    }
}

impl Serialize for BoundParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BoundParams", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("size", &self.size)?;
        st.serialize_field("lambda", &self.lambda.as_ref().map(|l| l.to_string()))?;
        st.serialize_field("c", &self.c.as_ref().map(|c| c.to_string()))?;
        st.end()
    }
}

pub(crate) fn ratio(a: usize, b: usize) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

fn int(a: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(a.clone()))
}

/// `x^a ≤ y^b`, exactly.
pub fn pow_le(x: &Rational, a: u32, y: &Rational, b: u32) -> bool {
    pow(x, a) <= pow(y, b)
}

pub(crate) fn pow(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

fn exponent(k: usize) -> Result<u32> {
    u32::try_from(k).map_err(|_| Error::TooLarge(format!("exponent {k}")))
}

/// `−x log₂ x − (1−x) log₂(1−x)` with `H(0) = H(1) = 0`.
pub fn binary_entropy(x: &Rational) -> Result<Real> {
    if x.is_negative() || *x > Rational::one() {
        return Err(Error::Domain(format!("entropy argument {x} outside [0, 1]")));
    }
    let term = |p: &Rational| if p.is_zero() { Real::zero() } else { Real::log2_ratio(p).mul_ratio(p) };
    Ok(-(term(x) + term(&(Rational::one() - x))))
}

/// `log₂ Z ≤ (N/2)·log₂(1 + dλ)` for the matching partition function.
pub fn match_pf_bound(p: &BoundParams) -> Result<LogBound> {
    let l = p.lambda()?;
    let base = Rational::one() + ratio(p.d, 1) * l;
    Ok(LogBound::upper(Real::log2_ratio(&base).mul_ratio(&p.half_n())))
}

/// Exact form `Z² ≤ (1 + dλ)^N`.
pub fn match_pf_holds(z: &Rational, p: &BoundParams) -> Result<bool> {
    let l = p.lambda()?;
    let base = Rational::one() + ratio(p.d, 1) * l;
    Ok(pow_le(z, 2, &base, exponent(p.n)?))
}

/// The minimiser `ℓ / (d(N/2 − ℓ))` of the single-term bound.
pub fn optimal_lambda(p: &BoundParams) -> Result<Rational> {
    p.require_degree()?;
    if p.size == 0 || 2 * p.size == p.n {
        return Err(Error::Degenerate(format!("size {} is an endpoint of 0..={}", p.size, p.n / 2)));
    }
    Ok(ratio(2 * p.size, p.d * (p.n - 2 * p.size)))
}

/// `log₂ m_ℓ ≤ (N/2)(α log₂ d + H(α))`.
pub fn match_count_upper(p: &BoundParams) -> Result<LogBound> {
    p.require_degree()?;
    let a = p.alpha();
    let inner = Real::log2_u64(p.d as u64).mul_ratio(&a) + binary_entropy(&a)?;
    Ok(LogBound::upper(inner.mul_ratio(&p.half_n())))
}

/// Single-term extraction `m_ℓ λ^ℓ ≤ (1 + dλ)^{N/2}`, i.e.
/// `log₂ m_ℓ ≤ (N/2)·log₂(1+dλ) − ℓ·log₂ λ`.
pub fn match_single_term_bound(p: &BoundParams) -> Result<LogBound> {
    let l = p.lambda()?;
    let pf = match_pf_bound(p)?;
    if p.size == 0 {
        return Ok(pf);
    }
    if l.is_zero() {
        return Err(Error::Domain("lambda must be positive for size > 0".into()));
    }
    let term = Real::log2_ratio(l).mul_int(p.size as i64);
    Ok(LogBound::upper(pf.value - term))
}

/// Exact form `(m_ℓ λ^ℓ)² ≤ (1 + dλ)^N`.
pub fn match_single_term_holds(m: &BigUint, p: &BoundParams) -> Result<bool> {
    let l = p.lambda()?;
    let lhs = int(m) * pow(l, exponent(p.size)?);
    match_pf_holds(&lhs, p)
}

/// The explicit part of the lower bound on `log₂ m_ℓ(DK)` beside the exact
/// value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DkGap {
    pub explicit: LogBound,
    pub exact_log2: Real,
    n: usize,
}

impl DkGap {
    /// `(2/N)·(log₂ m_ℓ(DK) − explicit)`.
    pub fn gap(&self) -> Real {
        (&self.exact_log2 - &self.explicit.value).mul_ratio(&ratio(2, self.n))
    }

    /// `gap · d / log₂ d`.
    pub fn normalized_gap(&self, d: usize) -> f64 {
        self.gap().to_f64() * d as f64 / (d as f64).log2()
    }
}

/// `(N/2)[α log₂ d + 2H(α) + α log₂(α/e)]` compared with `log₂ m_ℓ(DK)`.
pub fn match_lower_dk_reference(p: &BoundParams) -> Result<DkGap> {
    let dk = p.dk()?;
    let a = p.alpha();
    if a.is_zero() || a == Rational::one() {
        return Err(Error::Degenerate(format!("alpha = {a}")));
    }
    let inner = Real::log2_u64(p.d as u64).mul_ratio(&a)
        + binary_entropy(&a)?.mul_int(2)
        + (Real::log2_ratio(&a) - Real::log2_e()).mul_ratio(&a);
    let explicit = LogBound::lower(inner.mul_ratio(&p.half_n()));
    let exact_log2 = Real::log2_int(&m_dk(&dk, p.size)?);
    Ok(DkGap { explicit, exact_log2, n: p.n })
}

/// `N/2d` block sizes, each `⌊αd⌋` or `⌈αd⌉`, summing to `ℓ`.
pub fn balanced_blocks(p: &BoundParams) -> Result<Vec<usize>> {
    let dk = p.dk()?;
    let k = dk.copies();
    let (q, r) = (p.size / k, p.size % k);
    let mut blocks = vec![q + 1; r];
    blocks.extend(std::iter::repeat_n(q, k - r));
    Ok(blocks)
}

/// `log₂ Π C(d,a_i)²·a_i!` for the balanced block profile: the matchings of
/// `DK` meeting each copy in exactly `a_i` edges.
pub fn balanced_profile_log2(p: &BoundParams) -> Result<Real> {
    let d = p.d;
    Ok(balanced_blocks(p)?
        .into_iter()
        .map(|a| {
            let b = binomial(d, a);
            Real::log2_int(&(&b * &b * factorial(a)))
        })
        .sum())
}

/// Per-block Stirling lower estimate summed over the balanced profile:
/// `ℓ log₂ d − ℓ log₂ e − (N/2d) log₂(cd) + Σ (a_i log₂(a_i/d) + 2d·H(a_i/d))`.
/// Valid as a lower bound on `log₂ m_ℓ(DK)` whenever the Stirling check
/// passes with the same `c`.
pub fn balanced_stirling_bound(p: &BoundParams) -> Result<LogBound> {
    let c = p.c.clone().unwrap_or_else(Rational::one);
    let blocks = balanced_blocks(p)?;
    let d = p.d;
    let ell = p.size as i64;
    let mut v = Real::log2_u64(d as u64).mul_int(ell) - Real::log2_e().mul_int(ell);
    v = v - Real::log2_ratio(&(&c * ratio(d, 1))).mul_int(blocks.len() as i64);
    for a in blocks {
        v = v + stirling_block_terms(d, a)?;
    }
    Ok(LogBound::lower(v))
}

/// `a log₂(a/d) + 2d·H(a/d)`, with the first term 0 at `a = 0`.
fn stirling_block_terms(d: usize, a: usize) -> Result<Real> {
    let x = ratio(a, d);
    let first = if a == 0 { Real::zero() } else { Real::log2_ratio(&x).mul_int(a as i64) };
    Ok(first + binary_entropy(&x)?.mul_int(2 * d as i64))
}

/// `RHS − LHS` of the Stirling estimate with `c = 1`; the check passes for
/// a given `c` iff `log₂ c` is at least this.
fn stirling_deficit(d: usize, a: usize) -> Result<Real> {
    if d == 0 || a > d {
        return Err(Error::OutOfRange { what: "a", value: a, min: 0, max: d });
    }
    let b = binomial(d, a);
    let lhs = Real::log2_int(&(&b * &b * factorial(a)));
    let log_d = Real::log2_u64(d as u64);
    let rhs = log_d.mul_int(a as i64) - Real::log2_e().mul_int(a as i64) + stirling_block_terms(d, a)? - log_d;
    Ok(rhs - lhs)
}

/// `log₂(C(d,a)²·a!) ≥ a log₂ d + a log₂(a/d) − a log₂ e + 2d·H(a/d) − log₂(cd)`.
pub fn stirling_term_check(d: usize, a: usize, c: &Rational) -> Result<bool> {
    if !c.is_positive() {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    let deficit = stirling_deficit(d, a)?;
    let margin = Real::log2_ratio(c) - deficit;
    Ok(!(&margin + &Real::pow2_neg(SLACK_BITS)).is_negative())
}

/// Smallest `log₂ c ≥ 0` for which the Stirling check holds on every
/// `1 ≤ d ≤ max_d`, `0 ≤ a ≤ d`, with the `(d, a)` attaining it.
pub fn stirling_min_log_constant(max_d: usize) -> Result<(Real, usize, usize)> {
    let mut worst = (stirling_deficit(1, 0)?, 1, 0);
    for d in 1..=max_d {
        for a in 0..=d {
            let def = stirling_deficit(d, a)?;
            if def > worst.0 {
                worst = (def, d, a);
            }
        }
    }
    if worst.0.is_negative() {
        worst.0 = Real::zero();
    }
    Ok(worst)
}

/// `Z ≤ (1 + λ|E|/ν)^ν` for the matching partition function.
pub fn gurvits_bound(g: &Graph, lambda: &Rational) -> Result<LogBound> {
    let (nu, base) = gurvits_base(g, lambda)?;
    Ok(LogBound::upper(Real::log2_ratio(&base).mul_int(nu as i64)))
}

pub fn gurvits_holds(g: &Graph, z: &Rational, lambda: &Rational) -> Result<bool> {
    let (nu, base) = gurvits_base(g, lambda)?;
    Ok(pow_le(z, 1, &base, exponent(nu)?))
}

fn gurvits_base(g: &Graph, lambda: &Rational) -> Result<(usize, Rational)> {
    if g.edge_count() == 0 {
        return Err(Error::Edgeless);
    }
    if lambda.is_negative() {
        return Err(Error::Domain(format!("lambda must be nonnegative, got {lambda}")));
    }
    let nu = g.max_matching_size()?;
    Ok((nu, Rational::one() + lambda * ratio(g.edge_count(), nu)))
}

/// Independent-set partition function bound. Bipartite:
/// `(N/2d)·log₂(2(1+λ)^d − 1)`; general: `N/d + (N/2)·log₂(1+λ)`.
pub fn ind_pf_bound(p: &BoundParams, bipartite: bool) -> Result<LogBound> {
    p.require_degree()?;
    let l = p.lambda()?;
    let one_l = Rational::one() + l;
    let v = if bipartite {
        let base = pow(&one_l, exponent(p.d)?) * ratio(2, 1) - Rational::one();
        Real::log2_ratio(&base).mul_ratio(&ratio(p.n, 2 * p.d))
    } else {
        Real::from_ratio(&ratio(p.n, p.d)) + Real::log2_ratio(&one_l).mul_ratio(&p.half_n())
    };
    Ok(LogBound::upper(v))
}

/// Exact forms: bipartite `Z^{2d} ≤ (2(1+λ)^d − 1)^N`; general
/// `Z^{2d} ≤ 4^N (1+λ)^{Nd}`.
pub fn ind_pf_holds(z: &Rational, p: &BoundParams, bipartite: bool) -> Result<bool> {
    p.require_degree()?;
    let l = p.lambda()?;
    let one_l = Rational::one() + l;
    let (d, n) = (exponent(p.d)?, exponent(p.n)?);
    let rhs = if bipartite {
        pow(&(pow(&one_l, d) * ratio(2, 1) - Rational::one()), n)
    } else {
        pow(&ratio(4, 1), n) * pow(&one_l, n * d)
    };
    Ok(pow(z, 2 * d) <= rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndUpperVariant {
    General,
    Bipartite,
    PerfectMatching,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndLowerVariant {
    Markov,
    SmallT,
}

/// The weight with `λN / (2(1+λ)) = t`, namely `2t/(N − 2t)`.
pub fn ind_lambda_for_size(p: &BoundParams) -> Result<Rational> {
    if 2 * p.size == p.n {
        return Err(Error::Degenerate(format!("t = N/2 = {} needs an infinite weight", p.size)));
    }
    Ok(ratio(2 * p.size, p.n - 2 * p.size))
}

/// Upper bounds on `log₂ i_t(G)`. General: `(N/2)(H(α) + 2/d)`; bipartite:
/// `(N/2)(H(α) + 1/d − (log₂e/2d)(1−α)^d)`; with a perfect matching:
/// `log₂(2^t·C(N/2, t))`.
pub fn ind_count_upper(p: &BoundParams, variant: IndUpperVariant) -> Result<LogBound> {
    let a = p.alpha();
    let v = match variant {
        IndUpperVariant::General => {
            p.require_degree()?;
            (binary_entropy(&a)? + Real::from_ratio(&ratio(2, p.d))).mul_ratio(&p.half_n())
        }
        IndUpperVariant::Bipartite => {
            p.require_degree()?;
            let tail = pow(&(Rational::one() - &a), exponent(p.d)?) * ratio(1, 2 * p.d);
            (binary_entropy(&a)? + Real::from_ratio(&ratio(1, p.d)) - Real::log2_e().mul_ratio(&tail))
                .mul_ratio(&p.half_n())
        }
        IndUpperVariant::PerfectMatching => {
            if !p.n.is_multiple_of(2) {
                return Err(Error::NoPerfectMatching);
            }
            Real::log2_int(&(binomial(p.n / 2, p.size) << p.size))
        }
    };
    Ok(LogBound::upper(v))
}

/// `2^t·C(N/2, t)`, the exact integer behind the perfect-matching bound.
pub fn perfect_matching_ind_bound(n: usize, t: usize) -> BigUint {
    binomial(n / 2, t) << t
}

/// Lower bounds on `log₂ i_t(DK)`. Markov:
/// `log₂[(1 − 1/c)·C(N/2,t)] + (N/2)(1/d − (c/d)(1−α)^d)`; small-t:
/// `log₂[2^t·C(N/2,t)·Π_{k<t}(1 − 2kd/N)]` for `t ≤ N/2d`.
pub fn ind_lower_dk(p: &BoundParams, variant: IndLowerVariant) -> Result<LogBound> {
    let dk = p.dk()?;
    let v = match variant {
        IndLowerVariant::Markov => {
            let c = p.c.as_ref().ok_or_else(|| Error::Domain("c is required".into()))?;
            if *c <= Rational::one() {
                return Err(Error::Domain(format!("c must exceed 1, got {c}")));
            }
            let lead = (Rational::one() - c.recip()) * int(&binomial(p.n / 2, p.size));
            let tail = pow(&(Rational::one() - p.alpha()), exponent(p.d)?) * c / ratio(p.d, 1);
            let expo = (ratio(1, p.d) - tail) * p.half_n();
            Real::log2_ratio(&lead) + Real::from_ratio(&expo)
        }
        IndLowerVariant::SmallT => Real::log2_ratio(&small_t_product(&dk, p.size)?),
    };
    Ok(LogBound::lower(v))
}

/// `2^t·C(N/2,t)·Π_{k=1}^{t−1}(1 − 2kd/N)`.
pub fn small_t_product(dk: &DkParams, t: usize) -> Result<Rational> {
    if t > dk.copies() {
        return Err(Error::OutOfRange { what: "t", value: t, min: 0, max: dk.copies() });
    }
    let mut acc = int(&(binomial(dk.n() / 2, t) << t));
    for k in 1..t {
        acc *= Rational::one() - ratio(2 * k * dk.d(), dk.n());
    }
    Ok(acc)
}

/// `(2d)^t·C(N/2d, t)`: independent sets of `DK` meeting every copy in at
/// most one vertex.
pub fn small_t_exact(dk: &DkParams, t: usize) -> Result<BigUint> {
    if t > dk.copies() {
        return Err(Error::OutOfRange { what: "t", value: t, min: 0, max: dk.copies() });
    }
    Ok(BigUint::from(2 * dk.d()).pow(exponent(t)?) * binomial(dk.copies(), t))
}

/// Expected number of missed blocks for a uniform `t`-subset of `N/2`
/// elements split into `N/2d` blocks of size `d`, exactly and via
/// `(N/2d)(1 − 2t/N)^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMissStats {
    pub mu_exact: Rational,
    pub mu_bound: Rational,
}

pub fn block_miss_stats(p: &BoundParams) -> Result<BlockMissStats> {
    let dk = p.dk()?;
    let half = p.n / 2;
    let k = ratio(dk.copies(), 1);
    let miss = if p.size > half - p.d { BigUint::zero() } else { binomial(half - p.d, p.size) };
    let mu_exact = &k * int(&miss) / int(&binomial(half, p.size));
    let mu_bound = k * pow(&(Rational::one() - p.alpha()), exponent(p.d)?);
    Ok(BlockMissStats { mu_exact, mu_bound })
}

/// `b_k`: the number of `t`-subsets missing exactly `k` blocks, by
/// enumeration.
pub fn block_profile(p: &BoundParams) -> Result<Vec<BigUint>> {
    let dk = p.dk()?;
    let half = p.n / 2;
    if half > 63 {
        return Err(Error::TooLarge(format!("{half} elements")));
    }
    let block_mask = (1u64 << p.d) - 1;
    let mut b = vec![0u64; dk.copies() + 1];
    for_each_subset(half, p.size, |s| {
        let missed = (0..dk.copies()).filter(|&i| s & (block_mask << (i * p.d)) == 0).count();
        b[missed] += 1;
    });
    Ok(b.into_iter().map(BigUint::from).collect())
}
