//! The polynomial system whose solutions are the normalized genus-0 Belyi
//! maps with a given passport.
//!
//! Vertices of the same colour and degree are indistinguishable in the
//! equations, so each such group is encoded by the monic polynomial having
//! them as roots. A group with one free point uses the point itself as the
//! unknown. One black and one white vertex are pinned to `0` and `1`, and
//! one face sits at `∞`, so `F = B/(B − W)` with `B = ∏(z−b)^n` and
//! `W = ∏(z−w)^m`.
//!
//! Equations, with `D` the product of all vertex group polynomials:
//! * `D·A = λ ∏ G_f^(r−1)` coefficientwise, where
//!   `D·A = Σ_white m G′ D/G − Σ_black n G′ D/G`;
//! * `W − B ≡ 0 mod G_f` for every finite face group;
//! * optionally `η · ∏ disc · ∏ Res − 1 = 0` for distinctness.

use num_complex::Complex64;
use serde::Serialize;

use super::mpoly::{q, resultant, Compiled, MPoly, ZPoly, Q};
use super::poly::{self, CPoly};
use crate::dessin::Passport;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    Black,
    White,
    Face,
}

impl Colour {
    fn letter(self) -> char {
        match self {
            Colour::Black => 'b',
            Colour::White => 'w',
            Colour::Face => 'f',
        }
    }
}

/// Points of one colour and one degree.
#[derive(Clone, Debug)]
pub struct PointGroup {
    pub colour: Colour,
    pub degree: usize,
    /// Number of points, the pinned one included.
    pub size: usize,
    /// Fixed point in the group, if any (`0` for black, `1` for white).
    pub pinned: Option<i64>,
    /// Unknowns: the point itself when one point is free, otherwise the
    /// coefficients of `z^0, …, z^(k−1)` of the monic free part.
    pub vars: Vec<usize>,
}

impl PointGroup {
    pub fn free(&self) -> usize {
        self.size - usize::from(self.pinned.is_some())
    }

    /// The monic polynomial with the group's points as roots.
    fn polynomial(&self, nvars: usize) -> ZPoly {
        let free = if self.free() == 1 {
            ZPoly::linear(MPoly::var(nvars, self.vars[0]))
        } else {
            let mut c: Vec<MPoly> = self.vars.iter().map(|&v| MPoly::var(nvars, v)).collect();
            c.push(MPoly::one(nvars));
            ZPoly::from_coeffs(nvars, c)
        };
        match self.pinned {
            Some(p) => free.mul(&ZPoly::linear(MPoly::constant(nvars, q(p)))),
            None => free,
        }
    }

    /// Numeric group polynomial at a point of unknown space.
    pub fn eval_polynomial(&self, x: &[Complex64]) -> CPoly {
        let free: CPoly = if self.free() == 1 {
            vec![-x[self.vars[0]], poly::c(1.0, 0.0)]
        } else {
            let mut c: CPoly = self.vars.iter().map(|&v| x[v]).collect();
            c.push(poly::c(1.0, 0.0));
            c
        };
        match self.pinned {
            Some(p) => poly::mul(&free, &[poly::c(-(p as f64), 0.0), poly::c(1.0, 0.0)]),
            None => free,
        }
    }

    /// Starting coefficients built from the given free points.
    pub fn coordinates_from_points(&self, pts: &[Complex64]) -> Vec<Complex64> {
        if self.free() == 1 {
            vec![pts[0]]
        } else {
            let p = poly::from_roots(pts);
            p[..p.len() - 1].to_vec()
        }
    }
}

/// Which vertices are pinned and which face goes to infinity, by degree.
/// `None` picks the largest degree.
#[derive(Clone, Debug, Default)]
pub struct SystemOptions {
    pub pin_black: Option<usize>,
    pub pin_white: Option<usize>,
    pub infinity_face: Option<usize>,
    /// Also emit the distinctness equation with the extra unknown `η`.
    pub with_eta: bool,
}

#[derive(Clone, Debug)]
pub struct PolynomialSystem {
    pub variables: Vec<String>,
    pub equations: Vec<MPoly>,
    pub passport: Passport,
    pub groups: Vec<PointGroup>,
    pub lambda: usize,
    pub eta: Option<usize>,
    /// Degree of the pole of `F` at infinity.
    pub infinity_order: usize,
}

fn group_sizes(
    ct: &crate::perm::CycleType,
    colour: Colour,
    pinned_degree: Option<usize>,
    pin_value: i64,
) -> Result<Vec<(Colour, usize, usize, Option<i64>)>> {
    let grouped = ct.grouped();
    if let Some(d) = pinned_degree {
        if !grouped.iter().any(|&(l, _)| l == d) {
            return Err(Error::InconsistentPassport(format!(
                "no {colour:?} point of degree {d} to pin"
            )));
        }
    }
    let pin = pinned_degree.unwrap_or(grouped[0].0);
    Ok(grouped
        .into_iter()
        .map(|(deg, size)| (colour, deg, size, (deg == pin).then_some(pin_value)))
        .collect())
}

pub fn setup_system(passport: &Passport) -> Result<PolynomialSystem> {
    setup_system_with(passport, &SystemOptions::default())
}

pub fn setup_system_with(passport: &Passport, opts: &SystemOptions) -> Result<PolynomialSystem> {
    passport.validate()?;
    if passport.genus != 0 {
        return Err(Error::NonzeroGenus(passport.genus));
    }
    let n = passport.degree();

    let mut specs = group_sizes(&passport.black, Colour::Black, opts.pin_black, 0)?;
    specs.extend(group_sizes(&passport.white, Colour::White, opts.pin_white, 1)?);
    let faces = passport.faces.grouped();
    let inf = opts.infinity_face.unwrap_or(faces[0].0);
    if !faces.iter().any(|&(l, _)| l == inf) {
        return Err(Error::InconsistentPassport(format!(
            "no face of degree {inf} to send to infinity"
        )));
    }
    for (deg, size) in faces {
        let size = size - usize::from(deg == inf);
        if size > 0 {
            specs.push((Colour::Face, deg, size, None));
        }
    }

    let mut variables = Vec::new();
    let mut groups = Vec::new();
    for (colour, degree, size, pinned) in specs {
        let free = size - usize::from(pinned.is_some());
        let mut vars = Vec::new();
        if free == 1 {
            vars.push(variables.len());
            variables.push(format!("{}{}", colour.letter(), degree));
        } else {
            for i in 0..free {
                vars.push(variables.len());
                variables.push(format!("{}{}_{}", colour.letter(), degree, i));
            }
        }
        groups.push(PointGroup {
            colour,
            degree,
            size,
            pinned,
            vars,
        });
    }
    let lambda = variables.len();
    variables.push("lambda".into());
    let eta = opts.with_eta.then(|| {
        variables.push("eta".into());
        variables.len() - 1
    });
    let nv = variables.len();

    let polys: Vec<ZPoly> = groups.iter().map(|g| g.polynomial(nv)).collect();
    let vertex: Vec<usize> = (0..groups.len())
        .filter(|&i| groups[i].colour != Colour::Face)
        .collect();

    // D·A as Σ ± degree · G′ · ∏_{other} G
    let mut s = ZPoly::zero(nv);
    for &i in &vertex {
        let mut term = polys[i].derivative();
        for &j in &vertex {
            if j != i {
                term = term.mul(&polys[j]);
            }
        }
        let k = q(groups[i].degree as i64);
        let k = if groups[i].colour == Colour::Black { -k } else { k };
        s = s.add(&term.scale(&MPoly::constant(nv, k)));
    }
    let mut rhs = ZPoly::constant(MPoly::var(nv, lambda));
    for (g, p) in groups.iter().zip(&polys) {
        if g.colour == Colour::Face {
            rhs = rhs.mul(&p.pow(g.degree as u32 - 1));
        }
    }
    let star = s.sub(&rhs);
    let vcount: usize = passport.black.count() + passport.white.count();
    if !star.coeff(vcount - 1).is_zero() {
        return Err(Error::Internal("leading coefficient of D·A does not cancel".into()));
    }
    let mut equations: Vec<MPoly> = (0..=n - passport.faces.count()).map(|k| star.coeff(k)).collect();

    // W − B vanishes at every finite pole
    let power_product = |colour: Colour| {
        groups
            .iter()
            .zip(&polys)
            .filter(|(g, _)| g.colour == colour)
            .fold(ZPoly::constant(MPoly::one(nv)), |acc, (g, p)| {
                acc.mul(&p.pow(g.degree as u32))
            })
    };
    let wb = power_product(Colour::White).sub(&power_product(Colour::Black));
    for (g, p) in groups.iter().zip(&polys) {
        if g.colour == Colour::Face {
            let r = wb.rem(p);
            for k in 0..g.size {
                equations.push(r.coeff(k));
            }
        }
    }

    if let Some(e) = eta {
        let mut prod = MPoly::one(nv);
        for (i, p) in polys.iter().enumerate() {
            if groups[i].size > 1 {
                prod = prod.mul(&resultant(p, &p.derivative()));
            }
            for p2 in &polys[i + 1..] {
                prod = prod.mul(&resultant(p, p2));
            }
        }
        equations.push(MPoly::var(nv, e).mul(&prod).sub(&MPoly::one(nv)));
    }

    Ok(PolynomialSystem {
        variables,
        equations,
        passport: passport.clone(),
        groups,
        lambda,
        eta,
        infinity_order: inf,
    })
}

impl PolynomialSystem {
    /// Unknowns solved numerically: everything except `η`.
    pub fn numeric_unknowns(&self) -> usize {
        self.lambda + 1
    }

    /// Equations solved numerically: everything except the `η` equation.
    pub fn numeric_equations(&self) -> &[MPoly] {
        match self.eta {
            Some(_) => &self.equations[..self.equations.len() - 1],
            None => &self.equations,
        }
    }

    /// One equation per line, `name = 0`.
    pub fn display(&self) -> String {
        self.equations
            .iter()
            .map(|e| format!("{} = 0\n", e.display(&self.variables)))
            .collect()
    }

    /// `B` and `W` at a numeric point.
    pub fn vertex_polynomials(&self, x: &[Complex64]) -> (CPoly, CPoly) {
        let mut b = vec![poly::c(1.0, 0.0)];
        let mut w = vec![poly::c(1.0, 0.0)];
        for g in &self.groups {
            let p = poly::pow(&g.eval_polynomial(x), g.degree);
            match g.colour {
                Colour::Black => b = poly::mul(&b, &p),
                Colour::White => w = poly::mul(&w, &p),
                Colour::Face => {}
            }
        }
        (b, w)
    }

    /// `F = B/(B − W)` at a numeric point; the denominator is truncated to
    /// its exact degree `n − r_∞`.
    pub fn fraction_at(&self, x: &[Complex64]) -> Result<super::fraction::RationalFraction> {
        let (b, w) = self.vertex_polynomials(x);
        let mut den = poly::sub(&b, &w);
        den.truncate(self.passport.degree() - self.infinity_order + 1);
        super::fraction::RationalFraction::new(b, den)
    }

    /// Evaluates rational coordinates exactly; used to check snapped
    /// solutions.
    pub fn exact_residuals(&self, x: &[Q]) -> Vec<Q> {
        self.numeric_equations()
            .iter()
            .map(|e| e.eval_rational(x))
            .collect()
    }
}

/// The numeric equations and their Jacobian, compiled.
pub(crate) struct CompiledSystem {
    pub eqs: Vec<Compiled>,
    pub jac: Vec<Vec<Compiled>>,
}

impl CompiledSystem {
    pub fn new(sys: &PolynomialSystem) -> Self {
        let m = sys.numeric_unknowns();
        let eqs = sys.numeric_equations();
        CompiledSystem {
            eqs: eqs.iter().map(Compiled::new).collect(),
            jac: eqs
                .iter()
                .map(|e| (0..m).map(|v| Compiled::new(&e.derivative(v))).collect())
                .collect(),
        }
    }

    pub fn eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.eqs.iter().map(|e| e.eval(x)).collect()
    }

    /// Largest `|E_j(x)| / max(1, Σ|terms of E_j|)`.
    pub fn residual(&self, x: &[Complex64]) -> f64 {
        self.eqs
            .iter()
            .map(|e| e.eval(x).norm() / e.magnitude(x).max(1.0))
            .fold(0.0, f64::max)
    }
}
