//! Rational fractions `F = P/Q`, the associated `A = F′/(F(F−1))`, partial
//! fractions, and the fraction JSON format.
//!
//! JSON: `{"num": [[re, im], ...], "den": [[re, im], ...]}`, lowest degree
//! first. Exact fractions use strings such as `"-3/2"` in place of pairs.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{self, c, CPoly};
use crate::dessin::Passport;
use crate::error::{Error, Result};
use crate::perm::CycleType;

/// Roots closer than this are treated as one repeated root.
pub const CLUSTER_TOL: f64 = 1e-6;

/// `P/Q` with complex coefficients, `Q` monic.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFraction {
    pub num: CPoly,
    pub den: CPoly,
}

impl RationalFraction {
    /// Normalises to a monic denominator. Fails on a zero denominator.
    pub fn new(num: CPoly, den: CPoly) -> Result<Self> {
        let den = poly::trim(den);
        let lead = *den
            .last()
            .ok_or_else(|| Error::Parse("zero denominator".into()))?;
        Ok(RationalFraction {
            num: poly::trim(poly::scale(&num, c(1.0, 0.0) / lead)),
            den: poly::scale(&den, c(1.0, 0.0) / lead),
        })
    }

    pub fn polynomial(coeffs: CPoly) -> Self {
        RationalFraction {
            num: poly::trim(coeffs),
            den: vec![c(1.0, 0.0)],
        }
    }

    /// `max(deg P, deg Q)`.
    pub fn degree(&self) -> usize {
        poly::degree(&self.num)
            .unwrap_or(0)
            .max(poly::degree(&self.den).unwrap_or(0))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly::eval(&self.num, z) / poly::eval(&self.den, z)
    }

    pub fn is_constant(&self) -> bool {
        poly::degree(&self.num).unwrap_or(0) == 0 && poly::degree(&self.den).unwrap_or(0) == 0
    }

    /// Largest coefficient difference after both are normalised.
    pub fn distance(&self, other: &RationalFraction) -> f64 {
        let d = |a: &CPoly, b: &CPoly| {
            poly::sub(a, b).iter().map(|x| x.norm()).fold(0.0, f64::max)
        };
        d(&self.num, &other.num).max(d(&self.den, &other.den))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FractionJson::from(self)).expect("fraction serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: FractionJson = serde_json::from_str(s)?;
        j.to_fraction()
    }
}

/// `P/Q` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactFraction {
    pub num: Vec<BigRational>,
    pub den: Vec<BigRational>,
}

impl ExactFraction {
    pub fn to_float(&self) -> RationalFraction {
        let conv = |v: &[BigRational]| -> CPoly {
            v.iter()
                .map(|x| c(x.to_f64().unwrap_or(f64::NAN), 0.0))
                .collect()
        };
        RationalFraction::new(conv(&self.num), conv(&self.den)).expect("nonzero denominator")
    }

    pub fn to_json(&self) -> String {
        let s = |v: &[BigRational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        serde_json::to_string(&ExactJson {
            num: s(&self.num),
            den: s(&self.den),
        })
        .expect("fraction serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct ExactJson {
    num: Vec<String>,
    den: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FloatJson {
    num: Vec<[f64; 2]>,
    den: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FractionJson {
    Float(FloatJson),
    Exact(ExactJson),
}

impl From<&RationalFraction> for FractionJson {
    fn from(f: &RationalFraction) -> Self {
        let v = |p: &CPoly| p.iter().map(|z| [z.re, z.im]).collect();
        FractionJson::Float(FloatJson {
            num: v(&f.num),
            den: v(&f.den),
        })
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b: num_bigint::BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FractionJson {
    fn to_fraction(&self) -> Result<RationalFraction> {
        match self {
            FractionJson::Float(f) => {
                let v = |p: &[[f64; 2]]| p.iter().map(|&[re, im]| c(re, im)).collect();
                RationalFraction::new(v(&f.num), v(&f.den))
            }
            FractionJson::Exact(e) => Ok(exact_from_json(e)?.to_float()),
        }
    }
}

fn exact_from_json(e: &ExactJson) -> Result<ExactFraction> {
    let p = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
    let den = p(&e.den)?;
    if den.iter().all(Zero::is_zero) {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(ExactFraction {
        num: p(&e.num)?,
        den,
    })
}

/// Reads an exact fraction; fails on the float format.
pub fn exact_from_json_str(s: &str) -> Result<ExactFraction> {
    let e: ExactJson = serde_json::from_str(s)?;
    exact_from_json(&e)
}

/// `A = F′/(F(F−1)) = (P′Q − PQ′) / (P(P − Q))`, reduced by cancelling
/// the common multiple roots of numerator and denominator.
pub fn fraction_to_a(f: &RationalFraction) -> Result<RationalFraction> {
    if f.is_constant() {
        return Err(Error::ConstantFraction);
    }
    let (p, q) = (&f.num, &f.den);
    let num = poly::trim_rel(
        poly::sub(
            &poly::mul(&poly::derivative(p), q),
            &poly::mul(p, &poly::derivative(q)),
        ),
        1e-13,
    );
    let mut den_roots = poly::root_clusters(&poly::trim_rel(p.clone(), 1e-13), poly::MULTIPLE_ROOT_TOL);
    den_roots.extend(poly::root_clusters(
        &poly::trim_rel(poly::sub(p, q), 1e-13),
        poly::MULTIPLE_ROOT_TOL,
    ));
    let lead = *poly::trim_rel(poly::mul(p, &poly::sub(p, q)), 1e-13)
        .last()
        .ok_or(Error::ConstantFraction)?;
    let mut reduced_den = vec![c(1.0, 0.0)];
    let mut common = vec![c(1.0, 0.0)];
    for &(z, k) in &den_roots {
        // the order of vanishing of the numerator at z is at most k − 1
        let cancel = vanishing_order(&num, z, k - 1);
        common = poly::mul(&common, &poly::pow(&[-z, c(1.0, 0.0)], cancel));
        reduced_den = poly::mul(&reduced_den, &poly::pow(&[-z, c(1.0, 0.0)], k - cancel));
    }
    let (quot, _) = poly::divrem(&num, &common);
    RationalFraction::new(poly::scale(&quot, c(1.0, 0.0) / lead), reduced_den)
}

/// Largest `j ≤ max` with the first `j` derivatives of `p` small at `z`,
/// measured against the size of the coefficients.
fn vanishing_order(p: &[Complex64], z: Complex64, max: usize) -> usize {
    let scale = p.iter().map(|x| x.norm()).sum::<f64>().max(1e-300)
        * z.norm().max(1.0).powi(p.len() as i32);
    let mut d = p.to_vec();
    let mut fact = 1.0;
    for j in 0..max {
        if j > 0 {
            fact *= j as f64;
        }
        if poly::eval(&d, z).norm() / fact > 1e-6 * scale {
            return j;
        }
        d = poly::derivative(&d);
    }
    max
}

/// A pole of `A` with its residue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleResidue {
    pub pole: Complex64,
    pub residue: Complex64,
}

/// Poles and residues of a proper fraction with simple poles, sorted by
/// pole position.
pub fn partial_fractions(a: &RationalFraction) -> Result<Vec<PoleResidue>> {
    let den = poly::trim_rel(a.den.clone(), 1e-13);
    let num = poly::trim_rel(a.num.clone(), 1e-13);
    if poly::degree(&num).unwrap_or(0) >= poly::degree(&den).unwrap_or(0) && !num.is_empty() {
        return Err(Error::Parse("fraction is not proper".into()));
    }
    let mut poles = poly::roots(&den);
    poly::sort_points(&mut poles);
    for i in 0..poles.len() {
        for j in i + 1..poles.len() {
            if (poles[i] - poles[j]).norm() < CLUSTER_TOL {
                return Err(Error::NonSimplePole(format!("{}", poles[i])));
            }
        }
    }
    let dd = poly::derivative(&den);
    Ok(poles
        .into_iter()
        .map(|p| PoleResidue {
            pole: p,
            residue: poly::eval(&num, p) / poly::eval(&dd, p),
        })
        .collect())
}

/// Vertex degrees read off the residues of `A`: negative residues are black
/// vertices, positive ones white.
#[derive(Clone, Debug)]
pub struct VertexData {
    pub black: Vec<(Complex64, usize)>,
    pub white: Vec<(Complex64, usize)>,
}

pub fn vertices_from_residues(res: &[PoleResidue], tol: f64) -> Result<VertexData> {
    let mut black = Vec::new();
    let mut white = Vec::new();
    for r in res {
        let k = r.residue.re.round();
        if (r.residue - c(k, 0.0)).norm() > tol || k == 0.0 {
            return Err(Error::NonIntegerResidue(format!("{}", r.residue)));
        }
        if k < 0.0 {
            black.push((r.pole, (-k) as usize));
        } else {
            white.push((r.pole, k as usize));
        }
    }
    Ok(VertexData { black, white })
}

/// Order of the pole of `F` at `∞`, read off `A ~ z^(−r−1)` there.
pub fn infinity_order(a: &RationalFraction) -> usize {
    let den = poly::degree(&poly::trim_rel(a.den.clone(), 1e-13)).unwrap_or(0);
    let num = poly::degree(&poly::trim_rel(a.num.clone(), 1e-13)).unwrap_or(0);
    den.saturating_sub(num + 1)
}

/// Rebuilds `F = B/(B − W)` with `B = ∏(z−b)^n`, `W = ∏(z−w)^m`. The
/// leading terms of `B − W` cancel, so it is truncated to degree
/// `n − infinity_order`.
pub fn reconstruct(v: &VertexData, infinity_order: usize) -> Result<RationalFraction> {
    let prod = |pts: &[(Complex64, usize)]| {
        pts.iter().fold(vec![c(1.0, 0.0)], |acc, &(z, k)| {
            poly::mul(&acc, &poly::pow(&[-z, c(1.0, 0.0)], k))
        })
    };
    let b = prod(&v.black);
    let w = prod(&v.white);
    let mut den = poly::sub(&b, &w);
    den.truncate((b.len() - 1).saturating_sub(infinity_order) + 1);
    RationalFraction::new(b, den)
}

/// Passport of a Belyi fraction with `F(∞) = ∞`, from the residues of `A`
/// and the pole orders of `F`.
pub fn passport_from_fraction(f: &RationalFraction, tol: f64) -> Result<Passport> {
    let a = fraction_to_a(f)?;
    let v = vertices_from_residues(&partial_fractions(&a)?, tol)?;
    let n: usize = v.black.iter().map(|x| x.1).sum();
    let den = poly::trim_rel(f.den.clone(), 1e-13);
    let mut faces: Vec<usize> = poly::root_clusters(&den, poly::MULTIPLE_ROOT_TOL)
        .into_iter()
        .map(|(_, k)| k)
        .collect();
    let finite: usize = faces.iter().sum();
    if finite >= n {
        return Err(Error::Parse("F(∞) must be ∞".into()));
    }
    faces.push(n - finite);
    Passport::from_cycle_types(
        CycleType::new(v.black.iter().map(|x| x.1).collect()),
        CycleType::new(v.white.iter().map(|x| x.1).collect()),
        CycleType::new(faces),
    )
}

/// Numerator coefficients as exact strings, for display.
pub fn exact_to_strings(v: &[BigRational]) -> Vec<String> {
    v.iter()
        .map(|x| {
            if x.denom().is_one() {
                x.numer().to_string()
            } else if x.is_negative() {
                format!("-{}/{}", x.numer().abs(), x.denom())
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belyi::poly::real;

    fn residues_of(f: &RationalFraction) -> Vec<(f64, f64)> {
        let a = fraction_to_a(f).unwrap();
        partial_fractions(&a)
            .unwrap()
            .iter()
            .map(|r| {
                assert!(r.pole.im.abs() < 1e-9 && r.residue.im.abs() < 1e-9);
                (r.pole.re, r.residue.re)
            })
            .collect()
    }

    fn close(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(x, y)| (x.0 - y.0).abs() < 1e-9 && (x.1 - y.1).abs() < 1e-9)
    }

    #[test]
    fn a_of_identity() {
        let f = RationalFraction::polynomial(real(&[0.0, 1.0]));
        assert!(close(&residues_of(&f), &[(0.0, -1.0), (1.0, 1.0)]));
    }

    #[test]
    fn a_of_path() {
        let f = RationalFraction::polynomial(real(&[0.0, 2.0, -1.0]));
        assert!(close(&residues_of(&f), &[(0.0, -1.0), (1.0, 2.0), (2.0, -1.0)]));
    }

    #[test]
    fn a_of_power() {
        let n = 5;
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        let f = RationalFraction::polynomial(real(&coeffs));
        let a = fraction_to_a(&f).unwrap();
        let pr = partial_fractions(&a).unwrap();
        assert_eq!(pr.len(), n + 1);
        for r in &pr {
            if r.pole.norm() < 1e-9 {
                assert!((r.residue - c(-(n as f64), 0.0)).norm() < 1e-9);
            } else {
                assert!((r.pole.norm() - 1.0).abs() < 1e-9);
                assert!((r.residue - c(1.0, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn double_pole_is_rejected() {
        let a = RationalFraction::new(real(&[1.0]), real(&[1.0, -2.0, 1.0])).unwrap();
        assert!(matches!(partial_fractions(&a), Err(Error::NonSimplePole(_))));
        let constant = RationalFraction::polynomial(real(&[3.0]));
        assert_eq!(fraction_to_a(&constant), Err(Error::ConstantFraction));
    }

    #[test]
    fn reconstruction_and_passport() {
        let f = RationalFraction::polynomial(real(&[0.0, 2.0, -1.0]));
        let a = fraction_to_a(&f).unwrap();
        let v = vertices_from_residues(&partial_fractions(&a).unwrap(), 1e-6).unwrap();
        assert_eq!(infinity_order(&a), 2);
        let g = reconstruct(&v, infinity_order(&a)).unwrap();
        assert!(g.distance(&f) < 1e-9);
        let p = passport_from_fraction(&f, 1e-6).unwrap();
        assert_eq!(p.black.lengths(), &[1, 1]);
        assert_eq!(p.white.lengths(), &[2]);
        assert_eq!(p.faces.lengths(), &[2]);
    }

    #[test]
    fn json_round_trips() {
        let f = RationalFraction::new(real(&[0.0, 2.0, -1.0]), real(&[1.0])).unwrap();
        assert_eq!(RationalFraction::from_json(&f.to_json()).unwrap(), f);
        let e = exact_from_json_str(r#"{"num":["0","2","-1"],"den":["1"]}"#).unwrap();
        assert_eq!(e.to_float(), f);
        assert_eq!(exact_from_json_str(&e.to_json()).unwrap(), e);
        assert!(RationalFraction::from_json(r#"{"num":[[1,0]],"den":[]}"#).is_err());
        assert_eq!(parse_rational("-3/6").unwrap().to_string(), "-1/2");
    }
}
