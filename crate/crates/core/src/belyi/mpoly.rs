//! Sparse multivariate polynomials over `Q`, univariate polynomials in `z`
//! with such coefficients, and a compiled complex evaluator.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A polynomial in `nvars` unknowns, keyed by exponent vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Q::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Q)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The constant value, when the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u16>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, s: &Q) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut r = MPoly::one(self.nvars);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                r.add_term(e2, c * q(e[var] as i64));
            }
        }
        r
    }

    /// Substitutes a rational value for one variable.
    pub fn substitute(&self, var: usize, value: &Q) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var];
            e2[var] = 0;
            let mut f = c.clone();
            for _ in 0..k {
                f *= value;
            }
            r.add_term(e2, f);
        }
        r
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
                for (xi, &k) in x.iter().zip(e) {
                    if k > 0 {
                        t *= xi.powu(k as u32);
                    }
                }
                t
            })
            .sum()
    }

    pub fn eval_rational(&self, x: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    /// Renders with the given variable names.
    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        names[v].clone()
                    } else {
                        format!("{}^{}", names[v], k)
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display(&names))
    }
}

/// A polynomial in `z` with [`MPoly`] coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoly {
    nvars: usize,
    coeffs: Vec<MPoly>,
}

impl ZPoly {
    pub fn zero(nvars: usize) -> Self {
        ZPoly {
            nvars,
            coeffs: Vec::new(),
        }
    }

    pub fn from_coeffs(nvars: usize, coeffs: Vec<MPoly>) -> Self {
        let mut p = ZPoly { nvars, coeffs };
        p.trim();
        p
    }

    pub fn constant(c: MPoly) -> Self {
        let nvars = c.nvars();
        Self::from_coeffs(nvars, vec![c])
    }

    /// `z − r`.
    pub fn linear(r: MPoly) -> Self {
        let nvars = r.nvars();
        Self::from_coeffs(nvars, vec![r.neg(), MPoly::one(nvars)])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(MPoly::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> MPoly {
        self.coeffs.get(k).cloned().unwrap_or_else(|| MPoly::zero(self.nvars))
    }

    /// Degree in `z`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs(self.nvars, (0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs(self.nvars, (0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    pub fn scale(&self, s: &MPoly) -> ZPoly {
        Self::from_coeffs(self.nvars, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return ZPoly::zero(self.nvars);
        }
        let mut out = vec![MPoly::zero(self.nvars); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(self.nvars, out)
    }

    pub fn pow(&self, k: u32) -> ZPoly {
        let mut r = ZPoly::constant(MPoly::one(self.nvars));
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self) -> ZPoly {
        Self::from_coeffs(
            self.nvars,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&q(k as i64)))
                .collect(),
        )
    }

    /// Remainder on division by a polynomial whose leading coefficient is a
    /// nonzero rational constant.
    pub fn rem(&self, d: &ZPoly) -> ZPoly {
        let dd = d.degree().expect("nonzero divisor");
        let lead = d.coeffs[dd]
            .as_constant()
            .filter(|c| !c.is_zero())
            .expect("divisor needs a constant leading coefficient");
        let inv = lead.recip();
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let k = r.len() - 1;
            let c = r[k].scale(&inv);
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    r[idx] = r[idx].sub(&c.mul(dc));
                }
            }
            r.pop();
        }
        Self::from_coeffs(self.nvars, r)
    }

    /// Evaluates at a rational point `z` to a multivariate polynomial.
    pub fn at(&self, z: &Q) -> MPoly {
        let mut acc = MPoly::zero(self.nvars);
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(z).add(c);
        }
        acc
    }

    /// Numeric coefficients at a point of the unknowns.
    pub fn eval_coeffs(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.eval(x)).collect()
    }
}

/// Division-free determinant (Berkowitz) of a square matrix of polynomials.
pub fn berkowitz_det(m: &[Vec<MPoly>]) -> MPoly {
    let n = m.len();
    let nvars = m.first().map_or(0, |r| r.first().map_or(0, MPoly::nvars));
    if n == 0 {
        return MPoly::one(nvars);
    }
    // characteristic polynomial coefficients, built up over leading minors
    let mut c: Vec<MPoly> = vec![MPoly::one(nvars), m[0][0].neg()];
    for r in 1..n {
        // partition the (r+1)×(r+1) leading block as [[A, R], [S, a_rr]]
        let a_rr = &m[r][r];
        let row: Vec<&MPoly> = (0..r).map(|j| &m[r][j]).collect();
        let col: Vec<&MPoly> = (0..r).map(|i| &m[i][r]).collect();
        // products row · A^k · col for k = 0..r-1
        let mut vecs: Vec<MPoly> = col.iter().map(|&x| x.clone()).collect();
        let mut t = vec![MPoly::one(nvars), a_rr.neg()];
        for _k in 0..r {
            let dot = row
                .iter()
                .zip(&vecs)
                .fold(MPoly::zero(nvars), |acc, (a, b)| acc.add(&a.mul(b)));
            t.push(dot.neg());
            vecs = (0..r)
                .map(|i| {
                    (0..r).fold(MPoly::zero(nvars), |acc, j| acc.add(&m[i][j].mul(&vecs[j])))
                })
                .collect();
        }
        // Toeplitz product: new_c = T · c
        let mut next = vec![MPoly::zero(nvars); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *slot = slot.add(&t[i - j].mul(cj));
                }
            }
        }
        c = next;
    }
    let det = c[n].clone();
    if n % 2 == 1 {
        det.neg()
    } else {
        det
    }
}

/// `Res_z(f, g)` as the Sylvester determinant.
pub fn resultant(f: &ZPoly, g: &ZPoly) -> MPoly {
    let nvars = f.nvars;
    let (m, n) = (f.degree().unwrap_or(0), g.degree().unwrap_or(0));
    let size = m + n;
    if size == 0 {
        return MPoly::one(nvars);
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![MPoly::zero(nvars); size];
        for k in 0..=m {
            row[i + k] = f.coeff(m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![MPoly::zero(nvars); size];
        for k in 0..=n {
            row[i + k] = g.coeff(n - k);
        }
        rows.push(row);
    }
    berkowitz_det(&rows)
}

/// A polynomial ready for fast numeric evaluation.
#[derive(Clone, Debug)]
pub struct Compiled {
    terms: Vec<(Complex64, Vec<(usize, u32)>)>,
}

impl Compiled {
    pub fn new(p: &MPoly) -> Self {
        Compiled {
            terms: p
                .terms()
                .map(|(e, c)| {
                    let vars = e
                        .iter()
                        .enumerate()
                        .filter(|(_, &k)| k > 0)
                        .map(|(v, &k)| (v, k as u32))
                        .collect();
                    (Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0), vars)
                })
                .collect(),
        }
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(v, k) in vars {
                t *= x[v].powu(k);
            }
            acc += t;
        }
        acc
    }

    /// Sum of absolute term values, a scale for relative residuals.
    pub fn magnitude(&self, x: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, vars)| {
                vars.iter()
                    .fold(c.norm(), |acc, &(v, k)| acc * x[v].norm().powi(k as i32))
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.term_count(), 3);
        assert_eq!(p.derivative(0), x.scale(&q(2)).add(&y.scale(&q(2))));
        let v = p.eval(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
        assert!((v - Complex64::new(9.0, 0.0)).norm() < 1e-12);
        assert_eq!(p.substitute(0, &q(1)).eval_rational(&[q(0), q(2)]), q(9));
    }

    #[test]
    fn remainder_and_resultant() {
        let nv = 1;
        let a = MPoly::var(nv, 0);
        // (z - a)^2 mod (z - 1) = (1 - a)^2
        let f = ZPoly::linear(a.clone()).pow(2);
        let r = f.rem(&ZPoly::linear(MPoly::one(nv)));
        assert_eq!(r.degree(), Some(0));
        assert_eq!(r.coeff(0), MPoly::one(nv).sub(&a).pow(2));
        // Res(z - a, z - 1) = a - 1
        let res = resultant(&ZPoly::linear(a.clone()), &ZPoly::linear(MPoly::one(nv)));
        assert_eq!(res.eval_rational(&[q(3)]), q(2));
        // discriminant-style resultant of z^2 + a with its derivative 2z is 4a
        let g = ZPoly::from_coeffs(nv, vec![a.clone(), MPoly::zero(nv), MPoly::one(nv)]);
        let rg = resultant(&g, &g.derivative());
        assert_eq!(rg, a.scale(&q(4)));
    }

    #[test]
    fn berkowitz_matches_numeric() {
        let nv = 1;
        let c = |v: i64| MPoly::constant(nv, q(v));
        let m = vec![
            vec![c(2), c(-1), c(0)],
            vec![c(1), c(3), c(4)],
            vec![c(0), c(5), c(-2)],
        ];
        // 2(3·-2 - 20) + 1(-2 - 0) = -52 - 2 = -54
        assert_eq!(berkowitz_det(&m), c(-54));
        assert_eq!(berkowitz_det(&[vec![c(7)]]), c(7));
    }
}
