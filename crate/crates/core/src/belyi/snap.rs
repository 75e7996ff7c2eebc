//! Snapping floating fractions to rational ones and checking the Belyi
//! property exactly.
//!
//! A fraction `P/Q` is a Belyi map when every root of the Wronskian
//! `P′Q − PQ′` lies over `0`, `1` or `∞`, that is when the squarefree part
//! of the Wronskian divides `P(P − Q)Q`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::fraction::{ExactFraction, RationalFraction};

pub const DEFAULT_DENOMINATOR_BOUND: u64 = 1_000_000;

type QPoly = Vec<BigRational>;

/// Best rational approximation with denominator at most `bound`, by
/// continued fractions.
pub fn rational_approximation(x: f64, bound: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e18 {
            break;
        }
        let a = a as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > bound as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    (q1 != 0).then(|| BigRational::new(BigInt::from(p1), BigInt::from(q1)))
}

fn snap_coeff(z: Complex64, bound: u64, tol: f64) -> Option<BigRational> {
    let scale = z.norm().max(1.0);
    if z.im.abs() > tol * scale {
        return None;
    }
    let r = rational_approximation(z.re, bound)?;
    ((r.to_f64()? - z.re).abs() <= tol * scale).then_some(r)
}

/// Rational fraction whose coefficients are within `tol` of the given ones,
/// if every coefficient has a close rational with denominator at most
/// `bound`.
pub fn snap_rational(f: &RationalFraction, bound: u64, tol: f64) -> Option<ExactFraction> {
    let snap = |v: &[Complex64]| -> Option<Vec<BigRational>> {
        let mut out: Vec<BigRational> = v.iter().map(|&z| snap_coeff(z, bound, tol)).collect::<Option<_>>()?;
        while out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        Some(out)
    };
    let den = snap(&f.den)?;
    if den.is_empty() {
        return None;
    }
    Some(ExactFraction {
        num: snap(&f.num)?,
        den,
    })
}

fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn add(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
                x + b.get(i).cloned().unwrap_or_else(BigRational::zero)
            })
            .collect(),
    )
}

fn neg(a: &[BigRational]) -> QPoly {
    a.iter().map(|x| -x).collect()
}

fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn derivative(a: &[BigRational]) -> QPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| x * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn divrem(a: &[BigRational], d: &[BigRational]) -> (QPoly, QPoly) {
    let d = trim(d.to_vec());
    let mut r = trim(a.to_vec());
    let lead = d.last().expect("nonzero divisor").clone();
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let mut quot = vec![BigRational::zero(); r.len() - d.len() + 1];
    while r.len() >= d.len() && !r.is_empty() {
        let k = r.len() - d.len();
        let c = r.last().expect("nonempty") / &lead;
        for (i, x) in d.iter().enumerate() {
            r[i + k] -= &c * x;
        }
        quot[k] = c;
        r.pop();
        r = trim(r);
    }
    (trim(quot), r)
}

fn gcd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Exact check that `f` is a Belyi map: nonconstant, and the squarefree
/// part of `P′Q − PQ′` divides `P(P − Q)Q`.
pub fn is_belyi_exact(f: &ExactFraction) -> bool {
    let (p, q) = (trim(f.num.clone()), trim(f.den.clone()));
    if q.is_empty() {
        return false;
    }
    let w = add(&mul(&derivative(&p), &q), &neg(&mul(&p, &derivative(&q))));
    if w.is_empty() {
        return false;
    }
    let g = gcd(&w, &derivative(&w));
    let (sqfree, _) = divrem(&w, &g);
    let target = mul(&mul(&p, &add(&p, &neg(&q))), &q);
    let (_, r) = divrem(&target, &sqfree);
    r.is_empty()
}
