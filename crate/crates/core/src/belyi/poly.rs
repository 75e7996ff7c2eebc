//! Dense complex polynomials, lowest degree first, and Aberth root finding.

use num_complex::Complex64;

pub type CPoly = Vec<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(coeffs: &[f64]) -> CPoly {
    coeffs.iter().map(|&x| c(x, 0.0)).collect()
}

/// Drops trailing coefficients that are exactly zero.
pub fn trim(mut p: CPoly) -> CPoly {
    while p.last().is_some_and(|x| *x == c(0.0, 0.0)) {
        p.pop();
    }
    p
}

/// Drops trailing coefficients below `tol` times the largest coefficient.
pub fn trim_rel(mut p: CPoly, tol: f64) -> CPoly {
    let scale = p.iter().map(|x| x.norm()).fold(0.0, f64::max);
    while p.last().is_some_and(|x| x.norm() <= tol * scale) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Complex64]) -> Option<usize> {
    p.iter().rposition(|x| *x != c(0.0, 0.0))
}

pub fn eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Value and first derivative at `z`.
pub fn eval_d(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = c(0.0, 0.0);
    let mut d = c(0.0, 0.0);
    for &a in p.iter().rev() {
        d = d * z + v;
        v = v * z + a;
    }
    (v, d)
}

pub fn derivative(p: &[Complex64]) -> CPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &a)| a * k as f64)
        .collect()
}

pub fn add(a: &[Complex64], b: &[Complex64]) -> CPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or_default() + b.get(k).copied().unwrap_or_default())
        .collect()
}

pub fn sub(a: &[Complex64], b: &[Complex64]) -> CPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or_default() - b.get(k).copied().unwrap_or_default())
        .collect()
}

pub fn scale(a: &[Complex64], s: Complex64) -> CPoly {
    a.iter().map(|&x| x * s).collect()
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> CPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![c(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn pow(a: &[Complex64], k: usize) -> CPoly {
    let mut r = vec![c(1.0, 0.0)];
    for _ in 0..k {
        r = mul(&r, a);
    }
    r
}

/// `∏ (z − r)` over the given roots.
pub fn from_roots(roots: &[Complex64]) -> CPoly {
    roots
        .iter()
        .fold(vec![c(1.0, 0.0)], |acc, &r| mul(&acc, &[-r, c(1.0, 0.0)]))
}

pub fn monic(p: &[Complex64]) -> CPoly {
    let p = trim(p.to_vec());
    match p.last() {
        Some(&lead) => p.iter().map(|&x| x / lead).collect(),
        None => p,
    }
}

/// Quotient and remainder.
pub fn divrem(a: &[Complex64], d: &[Complex64]) -> (CPoly, CPoly) {
    let d = trim(d.to_vec());
    let dd = d.len() - 1;
    let lead = d[dd];
    let mut r = trim(a.to_vec());
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut quot = vec![c(0.0, 0.0); r.len() - dd];
    while r.len() > dd {
        let k = r.len() - 1;
        let f = r[k] / lead;
        quot[k - dd] = f;
        for (i, &x) in d.iter().enumerate() {
            r[k - dd + i] -= f * x;
        }
        r.pop();
    }
    (quot, r)
}

/// Roots by the Aberth–Ehrlich iteration from default starting points.
pub fn roots(p: &[Complex64]) -> Vec<Complex64> {
    let p = trim(p.to_vec());
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    // starting points on a circle inside the Cauchy bound, slightly rotated
    let lead = p[n].norm();
    let bound = 1.0 + p[..n].iter().map(|x| x.norm() / lead).fold(0.0, f64::max);
    let radius = p[0].norm().max(1e-300) / lead;
    let r = radius.powf(1.0 / n as f64).clamp(1e-3, bound);
    let start: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    aberth(&p, start, 500).0
}

/// Aberth–Ehrlich iteration from given approximations; returns the roots
/// and whether the iteration converged.
pub fn aberth(p: &[Complex64], mut z: Vec<Complex64>, max_iter: usize) -> (Vec<Complex64>, bool) {
    let n = z.len();
    let dp = derivative(p);
    let scale: f64 = p.iter().map(|x| x.norm()).sum::<f64>().max(1e-300);
    for _ in 0..max_iter {
        let mut max_step: f64 = 0.0;
        let mut max_rel: f64 = 0.0;
        for i in 0..n {
            let v = eval(p, z[i]);
            let zn = z[i].norm().max(1.0);
            let rel = v.norm() / (scale * zn.powi(n as i32));
            max_rel = max_rel.max(rel);
            if v == c(0.0, 0.0) {
                continue;
            }
            let ratio = v / eval(&dp, z[i]);
            let mut s = c(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff != c(0.0, 0.0) {
                        s += c(1.0, 0.0) / diff;
                    }
                }
            }
            let w = ratio / (c(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / zn);
            }
        }
        if max_step < 1e-14 || max_rel < 1e-17 {
            return (z, true);
        }
    }
    (z, false)
}

/// Relative radius within which computed roots are read as one multiple
/// root. A root of multiplicity `k` spreads to about `ε^(1/k)` in double
/// precision, so this must be loose.
pub const MULTIPLE_ROOT_TOL: f64 = 1e-2;

/// Distinct roots with multiplicities. Roots within `tol` (relative) of
/// each other are merged by single linkage; each centre of a cluster of
/// size `k` is then polished by Newton on the `(k−1)`-th derivative, where
/// it is a simple root.
pub fn root_clusters(p: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let r = roots(p);
    let n = r.len();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while c[i] != i {
            c[i] = c[c[i]];
            i = c[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = r[i].norm().max(r[j].norm()).max(1.0);
            if (r[i] - r[j]).norm() < tol * scale {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for (i, &z) in r.iter().enumerate() {
        let k = find(&mut comp, i);
        groups.entry(k).or_default().push(z);
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_values()
        .map(|g| {
            let k = g.len();
            let mut z = g.iter().sum::<Complex64>() / k as f64;
            let mut d = trim(p.to_vec());
            for _ in 1..k {
                d = derivative(&d);
            }
            let start = z;
            for _ in 0..50 {
                let (v, dv) = eval_d(&d, z);
                if dv == c(0.0, 0.0) {
                    break;
                }
                let step = v / dv;
                z -= step;
                if step.norm() <= 1e-16 * z.norm().max(1.0) {
                    break;
                }
            }
            if !z.is_finite() || (z - start).norm() > tol * start.norm().max(1.0) {
                z = start;
            }
            (z, k)
        })
        .collect();
    out.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.im.partial_cmp(&b.0.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    out
}

/// Sorts points by real part, then imaginary part.
pub fn sort_points(z: &mut [Complex64]) {
    z.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Least pairwise distance; infinite for fewer than two points.
pub fn min_separation(z: &[Complex64]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            m = m.min((z[i] - z[j]).norm());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity() {
        let p = real(&[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let r = roots(&p);
        assert_eq!(r.len(), 5);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!(eval(&p, z).norm() < 1e-12);
        }
    }

    #[test]
    fn division() {
        let a = from_roots(&[c(1.0, 0.0), c(2.0, 0.0), c(-3.0, 1.0)]);
        let (qt, r) = divrem(&a, &[c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(r.iter().all(|x| x.norm() < 1e-12));
        let back = mul(&qt, &[c(-1.0, 0.0), c(1.0, 0.0)]);
        for (x, y) in back.iter().zip(&a) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn separated_roots_found() {
        let target = [c(0.0, 0.0), c(2.0, 0.0), c(0.5, 0.5), c(-1.0, -2.0)];
        let mut r = roots(&from_roots(&target));
        sort_points(&mut r);
        let mut t = target.to_vec();
        sort_points(&mut t);
        for (x, y) in r.iter().zip(&t) {
            assert!((x - y).norm() < 1e-10);
        }
        assert!((min_separation(&t) - 0.5f64.hypot(0.5)).abs() < 1e-12);
    }

    #[test]
    fn eval_with_derivative() {
        let p = real(&[1.0, -2.0, 0.0, 3.0]);
        let (v, d) = eval_d(&p, c(2.0, 0.0));
        assert_eq!(v, c(21.0, 0.0));
        assert_eq!(d, c(34.0, 0.0));
    }
}
