//! Numerical roots of count polynomials.
//!
//! The polynomial is first split into square-free factors over `Q` (Yun's
//! algorithm) so that repeated roots, which are common for disjoint unions,
//! become simple roots of some factor. Each factor's roots are the
//! eigenvalues of its companion matrix, refined by Newton steps on the
//! factor itself.

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::count::{CountPolynomial, Rational};
use crate::error::{Error, Result};

/// Default bound on `|Im z| / max(1, |z|)`.
pub const DEFAULT_ROOT_TOL: f64 = 1e-7;
/// Relative tolerance on `Σ −1/z_i = m_1`.
pub const ROOT_SUM_REL_TOL: f64 = 1e-6;

const NEWTON_STEPS: usize = 60;

type Poly = Vec<Rational>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn degree(p: &Poly) -> usize {
    p.len().saturating_sub(1)
}

fn derivative(p: &Poly) -> Poly {
    if p.len() <= 1 {
        return vec![Rational::zero()];
    }
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer(BigInt::from(k))).collect())
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|k| a.get(k).cloned().unwrap_or_else(Rational::zero) - b.get(k).cloned().unwrap_or_else(Rational::zero))
        .collect())
}

fn div_rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let lead = b.last().expect("nonempty divisor").clone();
    assert!(!lead.is_zero(), "division by zero polynomial");
    let mut r = a.clone();
    if a.len() < b.len() {
        return (vec![Rational::zero()], trim(r));
    }
    let mut q = vec![Rational::zero(); a.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let coef = &r[i + b.len() - 1] / &lead;
        if !coef.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] -= &coef * bj;
            }
        }
        q[i] = coef;
    }
    (trim(q), trim(r))
}

fn is_zero(p: &Poly) -> bool {
    p.iter().all(Zero::is_zero)
}

fn monic(p: Poly) -> Poly {
    let lead = p.last().expect("nonempty").clone();
    p.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !is_zero(&y) {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

/// Square-free factors `(f_i, i)` with `p = c·Π f_i^i`.
fn square_free(p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let dp = derivative(p);
    let a0 = gcd(p, &dp);
    let mut b = div_rem(p, &a0).0;
    let mut c = div_rem(&dp, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1;
    while degree(&b) > 0 {
        let a = gcd(&b, &d);
        b = div_rem(&b, &a).0;
        c = div_rem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        if degree(&a) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

fn eval(p: &[Complex<f64>], z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let mut v = Complex::new(0.0, 0.0);
    let mut dv = Complex::new(0.0, 0.0);
    for &c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

fn simple_roots(p: &Poly) -> Vec<Complex<f64>> {
    let p = monic(p.clone());
    let n = degree(&p);
    let coeffs: Vec<Complex<f64>> =
        p.iter().map(|c| Complex::new(c.to_f64().unwrap_or(f64::NAN), 0.0)).collect();
    let companion = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -coeffs[i].re
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion
        .complex_eigenvalues()
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..NEWTON_STEPS {
                let (v, dv) = eval(&coeffs, z);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = v / dv;
                z -= step;
                if step.norm() <= f64::EPSILON * z.norm().max(1.0) {
                    break;
                }
            }
            z
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootReport {
    /// Every root, repeated by multiplicity, sorted by real part.
    pub roots: Vec<(f64, f64)>,
    /// Largest `|Im z| / max(1, |z|)`.
    pub max_rel_imag: f64,
    /// Largest real part.
    pub max_real: f64,
    /// `Σ −1/z_i` over all roots.
    pub inverse_sum: f64,
    /// `m_1`, the exact value of `inverse_sum`.
    pub linear_coefficient: f64,
    pub tol: f64,
}

impl RootReport {
    pub fn real_negative(&self) -> bool {
        self.max_rel_imag <= self.tol && self.max_real < 0.0
    }

    pub fn sum_rel_error(&self) -> f64 {
        (self.inverse_sum - self.linear_coefficient).abs() / self.linear_coefficient.abs().max(1.0)
    }

    pub fn pass(&self) -> bool {
        self.real_negative() && self.sum_rel_error() <= ROOT_SUM_REL_TOL
    }
}

/// All roots of a count polynomial with constant term 1 and degree ≥ 1.
pub fn polynomial_roots(p: &CountPolynomial, tol: f64) -> Result<RootReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if p.degree() == 0 {
        return Err(Error::Degenerate("constant polynomial has no roots".into()));
    }
    let poly: Poly = p.coefficients().iter().map(|c| Rational::from_integer(BigInt::from(c.clone()))).collect();
    if poly[0].is_zero() {
        return Err(Error::Degenerate("zero constant term".into()));
    }
    let mut roots = Vec::with_capacity(p.degree());
    for (factor, mult) in square_free(&poly) {
        for z in simple_roots(&factor) {
            roots.extend(std::iter::repeat_n(z, mult));
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let max_rel_imag = roots.iter().map(|z| z.im.abs() / z.norm().max(1.0)).fold(0.0, f64::max);
    let max_real = roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let inverse_sum: f64 = roots.iter().map(|z| (-Complex::<f64>::one() / z).re).sum();
    let linear_coefficient = (&poly[1] / &poly[0]).to_f64().unwrap_or(f64::NAN);
    Ok(RootReport {
        roots: roots.iter().map(|z| (z.re, z.im)).collect(),
        max_rel_imag,
        max_real,
        inverse_sum,
        linear_coefficient,
        tol,
    })
}
