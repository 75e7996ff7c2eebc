//! Shabat polynomials of planar trees.
//!
//! For a tree the Belyi map is a polynomial `F = cB` with `B` the monic
//! polynomial of black vertices. Every critical point of `F` outside the
//! black vertices is a white vertex, so `F(F − 1)` is divisible by `F′`;
//! with `F′ = cB′` this reads `rem(cB² − B, B′) = 0`. A white vertex of the
//! largest degree `m` is pinned to `1` by `F(1) = 1` and
//! `B^{(j)}(1) = 0` for `0 < j < m`, and a black vertex of the largest
//! degree to `0`.
//!
//! These equations outnumber the unknowns, so they are solved by
//! Gauss–Newton from random starts. They do not fix the white degrees, so
//! among the solutions the one whose monodromy is the given tree is kept.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fraction::RationalFraction;
use super::monodromy::monodromy;
use super::mpoly::{q, Compiled, MPoly, ZPoly};
use super::poly::{self, c};
use super::solve::{BelyiCandidate, LocatedPoint, SolveOptions};
use super::system::{Colour, PointGroup};
use crate::dessin::Dessin;
use crate::error::{Error, Result};

struct TreeSystem {
    groups: Vec<PointGroup>,
    scale_var: usize,
    nvars: usize,
    eqs: Vec<Compiled>,
    jac: Vec<Vec<Compiled>>,
}

fn tree_system(d: &Dessin) -> Result<TreeSystem> {
    let p = d.passport()?;
    let grouped = p.black.grouped();
    let pin = grouped[0].0;
    let mut nvars = 0;
    let mut groups = Vec::new();
    for (degree, size) in grouped {
        let pinned = (degree == pin).then_some(0);
        let free = size - usize::from(pinned.is_some());
        let vars: Vec<usize> = (nvars..nvars + free).collect();
        nvars += free;
        groups.push(PointGroup {
            colour: Colour::Black,
            degree,
            size,
            pinned,
            vars,
        });
    }
    let scale_var = nvars;
    nvars += 1;

    let group_poly = |g: &PointGroup| -> ZPoly {
        let free = if g.free() == 1 {
            ZPoly::linear(MPoly::var(nvars, g.vars[0]))
        } else {
            let mut cs: Vec<MPoly> = g.vars.iter().map(|&v| MPoly::var(nvars, v)).collect();
            cs.push(MPoly::one(nvars));
            ZPoly::from_coeffs(nvars, cs)
        };
        match g.pinned {
            Some(v) => free.mul(&ZPoly::linear(MPoly::constant(nvars, q(v)))),
            None => free,
        }
    };
    let b = groups.iter().fold(ZPoly::constant(MPoly::one(nvars)), |acc, g| {
        acc.mul(&group_poly(g).pow(g.degree as u32))
    });
    let cvar = ZPoly::constant(MPoly::var(nvars, scale_var));
    let db = b.derivative();
    let r = cvar.mul(&b).mul(&b).sub(&b).rem(&db);
    let n = d.degree();
    let mut eqs: Vec<MPoly> = (0..n.saturating_sub(1)).map(|k| r.coeff(k)).collect();
    let one = q(1);
    eqs.push(cvar.mul(&b).at(&one).sub(&MPoly::one(nvars)));
    let m = p.white.lengths()[0];
    let mut deriv = b.clone();
    for _ in 1..m {
        deriv = deriv.derivative();
        eqs.push(deriv.at(&one));
    }
    let jac = eqs
        .iter()
        .map(|e| (0..nvars).map(|v| Compiled::new(&e.derivative(v))).collect())
        .collect();
    Ok(TreeSystem {
        groups,
        scale_var,
        nvars,
        eqs: eqs.iter().map(Compiled::new).collect(),
        jac,
    })
}

impl TreeSystem {
    fn residual(&self, x: &[Complex64]) -> f64 {
        self.eqs
            .iter()
            .map(|e| e.eval(x).norm() / e.magnitude(x).max(1.0))
            .fold(0.0, f64::max)
    }

    fn black(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.groups
            .iter()
            .flat_map(|g| poly::roots(&g.eval_polynomial(x)))
            .collect()
    }

    fn fraction(&self, x: &[Complex64]) -> RationalFraction {
        let mut b = vec![c(1.0, 0.0)];
        for g in &self.groups {
            b = poly::mul(&b, &poly::pow(&g.eval_polynomial(x), g.degree));
        }
        RationalFraction::polynomial(poly::scale(&b, x[self.scale_var]))
    }

    fn start(&self, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        let mut x = vec![c(0.0, 0.0); self.nvars];
        for g in &self.groups {
            let pts: Vec<Complex64> = (0..g.free())
                .map(|_| c(rng.gen_range(-1.5..2.5), rng.gen_range(-2.0..2.0)))
                .collect();
            for (&v, val) in g.vars.iter().zip(g.coordinates_from_points(&pts)) {
                x[v] = val;
            }
        }
        // choose c so that F(1) = 1
        let f1 = poly::eval(&self.fraction(&{
            let mut y = x.clone();
            y[self.scale_var] = c(1.0, 0.0);
            y
        }).num, c(1.0, 0.0));
        x[self.scale_var] = if f1.norm() > 1e-12 { c(1.0, 0.0) / f1 } else { c(1.0, 0.0) };
        x
    }

    /// Gauss–Newton with step halving on the least-squares residual.
    fn gauss_newton(&self, mut x: Vec<Complex64>, max_iter: usize) -> Option<Vec<Complex64>> {
        let rows = self.eqs.len();
        let eval = |x: &[Complex64]| -> Vec<Complex64> { self.eqs.iter().map(|e| e.eval(x)).collect() };
        let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut fx = eval(&x);
        for _ in 0..max_iter {
            let nf = norm(&fx);
            if !nf.is_finite() {
                return None;
            }
            let j = DMatrix::from_fn(rows, self.nvars, |r, v| self.jac[r][v].eval(&x));
            let rhs = DVector::from_iterator(rows, fx.iter().map(|v| -v));
            let step = j.svd(true, true).solve(&rhs, 1e-14).ok()?;
            let mut t = 1.0;
            let mut moved = false;
            for _ in 0..30 {
                let trial: Vec<Complex64> = x.iter().zip(step.iter()).map(|(a, s)| a + s * t).collect();
                let ft = eval(&trial);
                if norm(&ft) < (1.0 - t / 4.0) * nf {
                    x = trial;
                    fx = ft;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved || step.norm() * t < 1e-15 * (1.0 + norm(&x)) {
                break;
            }
        }
        x.iter().all(|z| z.is_finite()).then_some(x)
    }
}

/// A Shabat polynomial for the planar tree `d`, normalized with a black
/// vertex of largest degree at `0` and a white vertex of largest degree at
/// `1`.
pub fn tree_shabat(d: &Dessin, opts: &SolveOptions) -> Result<BelyiCandidate> {
    if !d.is_planar_tree() {
        return Err(Error::NotATree);
    }
    let sys = tree_system(d)?;
    let mut seen: Vec<Vec<Complex64>> = Vec::new();
    for round in 0..opts.max_rounds {
        let base = round * opts.starts_per_round;
        let results: Vec<Option<Vec<Complex64>>> = (0..opts.starts_per_round)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add((base + i) as u64));
                let x0 = sys.start(&mut rng);
                sys.gauss_newton(x0, opts.max_iter)
            })
            .collect();
        let mut fresh: Vec<Vec<Complex64>> = Vec::new();
        for x in results.into_iter().flatten() {
            if sys.residual(&x) > opts.tol || poly::min_separation(&sys.black(&x)) < opts.separation {
                continue;
            }
            let close = |y: &Vec<Complex64>| {
                y.iter().zip(&x).all(|(a, b)| (a - b).norm() < opts.separation)
            };
            if seen.iter().any(close) || fresh.iter().any(close) {
                continue;
            }
            fresh.push(x);
        }
        fresh.sort_by(|a, b| {
            let key = |v: &Vec<Complex64>| -> Vec<(i64, i64)> {
                v.iter()
                    .map(|z| ((z.re * 1e7).round() as i64, (z.im * 1e7).round() as i64))
                    .collect()
            };
            key(a).cmp(&key(b))
        });
        for x in fresh {
            let f = sys.fraction(&x);
            if let Ok(m) = monodromy(&f) {
                if d.is_isomorphic(&m.dessin()).is_some() {
                    return Ok(candidate(&sys, x, f));
                }
            }
            seen.push(x);
        }
    }
    Err(Error::NoSolution(format!(
        "no Shabat polynomial found for the tree after {} starts",
        opts.max_rounds * opts.starts_per_round
    )))
}

fn candidate(sys: &TreeSystem, x: Vec<Complex64>, fraction: RationalFraction) -> BelyiCandidate {
    let mut points: Vec<LocatedPoint> = Vec::new();
    for g in &sys.groups {
        for z in poly::roots(&g.eval_polynomial(&x)) {
            points.push(LocatedPoint {
                colour: Colour::Black,
                degree: g.degree,
                position: [z.re, z.im],
            });
        }
    }
    for (z, k) in poly::root_clusters(&poly::sub(&fraction.num, &fraction.den), poly::MULTIPLE_ROOT_TOL) {
        points.push(LocatedPoint {
            colour: Colour::White,
            degree: k,
            position: [z.re, z.im],
        });
    }
    points.sort_by(|a, b| {
        (a.colour, a.degree)
            .cmp(&(b.colour, b.degree))
            .then(a.position[0].total_cmp(&b.position[0]))
            .then(a.position[1].total_cmp(&b.position[1]))
    });
    let zs: Vec<Complex64> = points.iter().map(|p| c(p.position[0], p.position[1])).collect();
    BelyiCandidate {
        residual: sys.residual(&x),
        separation: poly::min_separation(&zs),
        fraction,
        unknowns: x,
        points,
    }
}
