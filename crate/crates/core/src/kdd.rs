//! Closed-form counts for `K_{d,d}` and for `DK`, the disjoint union of
//! `n/2d` copies, plus the Brégman permanent bound.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

use crate::bounds::LogBound;
use crate::count::{poly_mul, CountKind, CountPolynomial, Rational};
use crate::error::{Error, Result};
use crate::hp::Real;

const FACTORIAL_TABLE: usize = 512;

fn factorial_table() -> &'static [BigUint] {
    static TABLE: OnceLock<Vec<BigUint>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(FACTORIAL_TABLE + 1);
        t.push(BigUint::one());
        for i in 1..=FACTORIAL_TABLE {
            let next = &t[i - 1] * BigUint::from(i);
            t.push(next);
        }
        t
    })
}

pub fn factorial(n: usize) -> BigUint {
    match factorial_table().get(n) {
        Some(f) => f.clone(),
        None => (FACTORIAL_TABLE + 1..=n).fold(factorial_table()[FACTORIAL_TABLE].clone(), |acc, i| acc * BigUint::from(i)),
    }
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    if n <= FACTORIAL_TABLE {
        let t = factorial_table();
        return &t[n] / (&t[k] * &t[n - k]);
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// Parameters of `DK`: `n` vertices, degree `d`, `copies = n/2d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DkParams {
    n: usize,
    d: usize,
    copies: usize,
}

impl DkParams {
    pub fn new(n: usize, d: usize) -> Result<DkParams> {
        if d == 0 || n == 0 || !n.is_multiple_of(2 * d) {
            return Err(Error::Divisibility { n, d });
        }
        Ok(DkParams { n, d, copies: n / (2 * d) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn copies(&self) -> usize {
        self.copies
    }
}

fn check_size(what: &'static str, value: usize, max: usize) -> Result<()> {
    if value > max {
        Err(Error::OutOfRange { what, value, min: 0, max })
    } else {
        Ok(())
    }
}

/// `a`-matchings of `K_{d,d}`: choose `a` endpoints on each side, then pair
/// them, `C(d,a)²·a!`.
pub fn m_kdd(d: usize, a: usize) -> Result<BigUint> {
    check_size("a", a, d)?;
    let b = binomial(d, a);
    Ok(&b * &b * factorial(a))
}

/// Size-`t` independent sets of `K_{d,d}`: a nonempty one lies inside a
/// single class, so `2·C(d,t)` for `t ≥ 1`.
pub fn i_kdd(d: usize, t: usize) -> Result<BigUint> {
    check_size("t", t, d)?;
    Ok(if t == 0 { BigUint::one() } else { binomial(d, t) * 2u32 })
}

pub fn kdd_polynomial(d: usize, kind: CountKind) -> CountPolynomial {
    let coeffs = (0..=d)
        .map(|k| match kind {
            CountKind::Matching => m_kdd(d, k),
            CountKind::IndependentSet => i_kdd(d, k),
        })
        .collect::<Result<Vec<_>>>()
        .expect("sizes within 0..=d");
    CountPolynomial::new(kind, coeffs)
}

/// The `copies`-fold convolution power of the single-copy polynomial.
pub fn dk_polynomial(p: &DkParams, kind: CountKind) -> CountPolynomial {
    let base = kdd_polynomial(p.d, kind);
    let mut result = vec![BigUint::one()];
    let mut square = base.coefficients().to_vec();
    let mut e = p.copies;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul(&result, &square);
        }
        e >>= 1;
        if e > 0 {
            square = poly_mul(&square, &square);
        }
    }
    CountPolynomial::new(kind, result)
}

/// `ℓ`-matchings of `DK`: sum over block sizes `a_1 + … + a_k = ℓ` of
/// `Π C(d,a_i)²·a_i!`.
pub fn m_dk(p: &DkParams, ell: usize) -> Result<BigUint> {
    check_size("ell", ell, p.n / 2)?;
    Ok(dk_polynomial(p, CountKind::Matching).coefficient(ell))
}

pub fn i_dk(p: &DkParams, t: usize) -> Result<BigUint> {
    check_size("t", t, p.n / 2)?;
    Ok(dk_polynomial(p, CountKind::IndependentSet).coefficient(t))
}

/// Brégman's bound on perfect matchings for one bipartition class with
/// degrees `r_i`: `log₂ Π (r_i!)^(1/r_i)`, as an upper bound.
pub fn bregman_log_bound(degrees: &[usize]) -> Result<LogBound> {
    if let Some(pos) = degrees.iter().position(|&r| r == 0) {
        return Err(Error::Domain(format!("degree of vertex {pos} is zero")));
    }
    let value = degrees
        .iter()
        .map(|&r| Real::log2_int(&factorial(r)).mul_ratio(&Rational::new(1.into(), r.into())))
        .sum();
    Ok(LogBound::upper(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{brute_force_count, independence_polynomial, matching_polynomial};
    use crate::graph::{build_dk, build_kdd};

    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn single_copy_counts() {
        assert_eq!(m_kdd(2, 1).unwrap(), u(4));
        assert_eq!(m_kdd(2, 2).unwrap(), u(2));
        assert_eq!(m_kdd(5, 0).unwrap(), u(1));
        assert_eq!(i_kdd(2, 1).unwrap(), u(4));
        assert_eq!(i_kdd(2, 2).unwrap(), u(2));
        assert_eq!(i_kdd(5, 0).unwrap(), u(1));
        assert!(m_kdd(2, 3).is_err());
        assert!(i_kdd(2, 3).is_err());
        // brute-force cross-check on C4 = K_{2,2}
        let c4 = build_kdd(2).unwrap();
        assert_eq!(brute_force_count(&c4, CountKind::IndependentSet, 1).unwrap(), u(4));
        assert_eq!(brute_force_count(&c4, CountKind::IndependentSet, 2).unwrap(), u(2));
    }

    #[test]
    fn dk_counts() {
        let p = DkParams::new(8, 2).unwrap();
        assert_eq!(p.copies(), 2);
        assert_eq!(m_dk(&p, 2).unwrap(), u(20));
        assert_eq!(m_dk(&p, 4).unwrap(), u(4));
        assert_eq!(i_dk(&p, 2).unwrap(), u(20));
        assert_eq!(i_dk(&p, 4).unwrap(), u(4));
        assert_eq!(i_dk(&p, 0).unwrap(), u(1));
        assert_eq!(m_dk(&DkParams::new(6, 3).unwrap(), 3).unwrap(), u(6));
        assert!(m_dk(&p, 5).is_err());
        assert_eq!(DkParams::new(6, 2), Err(Error::Divisibility { n: 6, d: 2 }));
        // brute force on two disjoint C4's
        let g = build_dk(8, 2).unwrap();
        assert_eq!(brute_force_count(&g, CountKind::Matching, 2).unwrap(), u(20));
        assert_eq!(brute_force_count(&g, CountKind::IndependentSet, 2).unwrap(), u(20));
    }

    #[test]
    fn dk_agrees_with_recursion() {
        for n in (2..=16).step_by(2) {
            for d in 1..=n / 2 {
                let Ok(p) = DkParams::new(n, d) else { continue };
                let g = build_dk(n, d).unwrap();
                assert_eq!(dk_polynomial(&p, CountKind::Matching), matching_polynomial(&g).unwrap(), "m n={n} d={d}");
                assert_eq!(dk_polynomial(&p, CountKind::IndependentSet), independence_polynomial(&g).unwrap(), "i n={n} d={d}");
            }
        }
    }

    #[test]
    fn kdd_independent_total() {
        for d in 1..12 {
            let total = kdd_polynomial(d, CountKind::IndependentSet).total();
            assert_eq!(total, (BigUint::one() << (d + 1)) - 1u32);
        }
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(100, 49).to_string(), "98913082887808032681188722800");
        assert_eq!(binomial(600, 2), u(179700));
        assert_eq!(binomial(3, 4), u(0));
        assert_eq!(factorial(520) / factorial(519), u(520));
    }

    #[test]
    fn bregman_examples() {
        let b = bregman_log_bound(&[3, 3, 3]).unwrap();
        assert!((b.value.to_f64() - 6f64.log2()).abs() < 1e-12);
        // K_{3,3} has 3! perfect matchings: equality
        let pm = matching_polynomial(&build_kdd(3).unwrap()).unwrap().coefficient(3);
        assert_eq!(pm, u(6));
        assert!(b.admits_count(&pm));
        let b = bregman_log_bound(&[1, 1]).unwrap();
        assert!(b.value.to_f64().abs() < 1e-12);
        let b = bregman_log_bound(&[2, 2]).unwrap();
        assert!((b.value.to_f64() - 1.0).abs() < 1e-12);
        assert!(b.admits_count(&u(2)));
        assert!(!b.admits_count(&u(3)));
        assert!(bregman_log_bound(&[2, 0]).is_err());
    }
}
