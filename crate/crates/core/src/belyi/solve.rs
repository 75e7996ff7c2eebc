//! Numerical solution of a Belyi system by multistart damped Newton.
//!
//! Starts are drawn by sampling random points for every group and building
//! the group coefficients from them, with `λ` fitted by least squares.
//! Starts run in rounds; after the first round half of each round runs
//! Newton on the system deflated by the solutions found so far, so that
//! repeated convergence to a known root is discouraged. Every converged
//! point is polished on the undeflated system and accepted when its
//! residual and point separation pass the thresholds. The search stops
//! once a number of consecutive rounds adds nothing new.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::fraction::RationalFraction;
use super::poly::{self, c};
use super::system::{Colour, CompiledSystem, PolynomialSystem};
use crate::error::Result;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SEPARATION: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub seed: u64,
    pub starts_per_round: usize,
    pub max_rounds: usize,
    /// Stop after this many consecutive rounds without a new solution.
    pub stable_rounds: usize,
    pub max_iter: usize,
    /// Residual threshold (relative to term sizes).
    pub tol: f64,
    /// Least allowed distance between two points of the solution.
    pub separation: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            starts_per_round: 64,
            max_rounds: 40,
            stable_rounds: 4,
            max_iter: 100,
            tol: DEFAULT_TOL,
            separation: DEFAULT_SEPARATION,
        }
    }
}

/// A point on the real line or plane with its colour and degree.
#[derive(Clone, Debug, Serialize)]
pub struct LocatedPoint {
    pub colour: Colour,
    pub degree: usize,
    pub position: [f64; 2],
}

#[derive(Clone, Debug)]
pub struct BelyiCandidate {
    pub fraction: RationalFraction,
    pub residual: f64,
    pub separation: f64,
    /// Values of the system's numeric unknowns.
    pub unknowns: Vec<Complex64>,
    pub points: Vec<LocatedPoint>,
}

#[derive(Clone, Debug, Default)]
pub struct SolveReport {
    pub candidates: Vec<BelyiCandidate>,
    pub starts: usize,
    pub rounds: usize,
    pub converged: usize,
    pub rejected: usize,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Random starting point: random positions per group, `λ` by least squares.
fn random_start(sys: &PolynomialSystem, cs: &CompiledSystem, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let m = sys.numeric_unknowns();
    let mut x = vec![c(0.0, 0.0); m];
    for g in &sys.groups {
        let pts: Vec<Complex64> = (0..g.free())
            .map(|_| c(rng.gen_range(-1.5..2.5), rng.gen_range(-2.0..2.0)))
            .collect();
        for (&v, val) in g.vars.iter().zip(g.coordinates_from_points(&pts)) {
            x[v] = val;
        }
    }
    // the equations are affine in λ
    let l = sys.lambda;
    x[l] = c(0.0, 0.0);
    let e0 = cs.eval(&x);
    let d: Vec<Complex64> = cs.jac.iter().map(|row| row[l].eval(&x)).collect();
    let den: f64 = d.iter().map(|z| z.norm_sqr()).sum();
    if den > 0.0 {
        let num: Complex64 = d.iter().zip(&e0).map(|(di, ei)| di.conj() * ei).sum();
        x[l] = -num / den;
    } else {
        x[l] = c(1.0, 0.0);
    }
    x
}

/// Multiplier `∏ (1 + 1/‖x − r‖)` and its Wirtinger gradient in `x`.
fn deflation(x: &[Complex64], roots: &[Vec<Complex64>]) -> (f64, Vec<Complex64>) {
    let mut m = 1.0;
    let mut grad_log = vec![c(0.0, 0.0); x.len()];
    for r in roots {
        let d: Vec<Complex64> = x.iter().zip(r).map(|(a, b)| a - b).collect();
        let nd = norm(&d).max(1e-300);
        let f = 1.0 + 1.0 / nd;
        m *= f;
        // ∂/∂x_j of 1/‖d‖ is −conj(d_j)/(2‖d‖³)
        for j in 0..x.len() {
            grad_log[j] += -d[j].conj() / (2.0 * nd * nd * nd) / f;
        }
    }
    (m, grad_log.into_iter().map(|g| g * m).collect())
}

/// Damped Newton from `x`; with `deflate`, the system is multiplied by the
/// deflation factor of those roots. Returns the final point if it
/// converged.
fn newton(
    cs: &CompiledSystem,
    mut x: Vec<Complex64>,
    deflate: &[Vec<Complex64>],
    max_iter: usize,
) -> Option<Vec<Complex64>> {
    let m = x.len();
    let value = |x: &[Complex64]| -> Vec<Complex64> {
        let e = cs.eval(x);
        if deflate.is_empty() {
            e
        } else {
            let (k, _) = deflation(x, deflate);
            e.into_iter().map(|v| v * k).collect()
        }
    };
    let mut fx = value(&x);
    for _ in 0..max_iter {
        let nf = norm(&fx);
        if !nf.is_finite() {
            return None;
        }
        let mut j = DMatrix::from_fn(m, m, |r, col| cs.jac[r][col].eval(&x));
        if !deflate.is_empty() {
            let e = cs.eval(&x);
            let (k, g) = deflation(&x, deflate);
            for r in 0..m {
                for col in 0..m {
                    j[(r, col)] = j[(r, col)] * k + e[r] * g[col];
                }
            }
        }
        let rhs = DVector::from_iterator(m, fx.iter().map(|v| -v));
        let step = j.lu().solve(&rhs)?;
        let step: Vec<Complex64> = step.iter().copied().collect();
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<Complex64> = x.iter().zip(&step).map(|(a, s)| a + s * t).collect();
            let ft = value(&trial);
            let nt = norm(&ft);
            if nt.is_finite() && nt < (1.0 - t / 4.0) * nf {
                x = trial;
                fx = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        let size = norm(&step) * t;
        if !accepted {
            // no decrease: converged to roundoff or stuck
            return (nf < 1e-9 * (1.0 + norm(&x))).then_some(x);
        }
        if size < 1e-15 * (1.0 + norm(&x)) {
            return Some(x);
        }
    }
    (norm(&fx) < 1e-9 * (1.0 + norm(&x))).then_some(x)
}

/// All points of a solution: roots of every group polynomial, sorted.
fn located_points(sys: &PolynomialSystem, x: &[Complex64]) -> Vec<(Colour, usize, Complex64)> {
    let mut out = Vec::new();
    for g in &sys.groups {
        for z in poly::roots(&g.eval_polynomial(x)) {
            out.push((g.colour, g.degree, z));
        }
    }
    out
}

fn candidate(sys: &PolynomialSystem, cs: &CompiledSystem, x: Vec<Complex64>) -> Result<BelyiCandidate> {
    let pts = located_points(sys, &x);
    let zs: Vec<Complex64> = pts.iter().map(|p| p.2).collect();
    let mut points: Vec<LocatedPoint> = pts
        .iter()
        .map(|&(colour, degree, z)| LocatedPoint {
            colour,
            degree,
            position: [z.re, z.im],
        })
        .collect();
    points.sort_by(|a, b| {
        (a.colour, a.degree)
            .cmp(&(b.colour, b.degree))
            .then(a.position[0].total_cmp(&b.position[0]))
            .then(a.position[1].total_cmp(&b.position[1]))
    });
    Ok(BelyiCandidate {
        fraction: sys.fraction_at(&x)?,
        residual: cs.residual(&x),
        separation: poly::min_separation(&zs),
        unknowns: x,
        points,
    })
}

/// Grid-rounded key used to order candidates deterministically.
fn sort_key(x: &[Complex64]) -> Vec<(i64, i64)> {
    x.iter()
        .map(|z| ((z.re * 1e7).round() as i64, (z.im * 1e7).round() as i64))
        .collect()
}

pub fn solve_system(sys: &PolynomialSystem, opts: &SolveOptions) -> Result<SolveReport> {
    let cs = CompiledSystem::new(sys);
    let mut found: Vec<Vec<Complex64>> = Vec::new();
    let mut report = SolveReport::default();
    let mut quiet = 0;
    for round in 0..opts.max_rounds {
        let base = round * opts.starts_per_round;
        let known = found.clone();
        let results: Vec<Option<Vec<Complex64>>> = (0..opts.starts_per_round)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add((base + i) as u64));
                let x0 = random_start(sys, &cs, &mut rng);
                let defl: &[Vec<Complex64>] = if i % 2 == 1 { &known } else { &[] };
                let x = newton(&cs, x0, defl, opts.max_iter)?;
                let x = if defl.is_empty() { x } else { newton(&cs, x, &[], 20)? };
                Some(x)
            })
            .collect();
        report.starts += opts.starts_per_round;
        report.rounds = round + 1;
        let before = found.len();
        for x in results.into_iter().flatten() {
            report.converged += 1;
            if found.iter().any(|f| dist(f, &x) < opts.separation) {
                continue;
            }
            let res = cs.residual(&x);
            let pts: Vec<Complex64> = located_points(sys, &x).into_iter().map(|p| p.2).collect();
            if res > opts.tol || poly::min_separation(&pts) < opts.separation || x[sys.lambda].norm() < opts.separation {
                report.rejected += 1;
                continue;
            }
            found.push(x);
        }
        if found.len() == before {
            quiet += 1;
            if quiet >= opts.stable_rounds {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    found.sort_by_key(|x| sort_key(x));
    report.candidates = found
        .into_iter()
        .map(|x| candidate(sys, &cs, x))
        .collect::<Result<_>>()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belyi::system::setup_system;
    use crate::dessin::Passport;
    use crate::perm::CycleType;

    fn passport(b: &[usize], w: &[usize], f: &[usize]) -> Passport {
        Passport::from_cycle_types(
            CycleType::new(b.to_vec()),
            CycleType::new(w.to_vec()),
            CycleType::new(f.to_vec()),
        )
        .unwrap()
    }

    fn solve(p: &Passport) -> SolveReport {
        solve_system(&setup_system(p).unwrap(), &SolveOptions::default()).unwrap()
    }

    #[test]
    fn star_of_degree_three() {
        let r = solve(&passport(&[3], &[1, 1, 1], &[3]));
        assert_eq!(r.candidates.len(), 1);
        let f = &r.candidates[0].fraction;
        let z3 = RationalFraction::polynomial(poly::real(&[0.0, 0.0, 0.0, 1.0]));
        assert!(f.distance(&z3) < 1e-8, "{f:?}");
    }

    #[test]
    fn path_of_two_edges() {
        let r = solve(&passport(&[1, 1], &[2], &[2]));
        assert_eq!(r.candidates.len(), 1);
        let target = RationalFraction::polynomial(poly::real(&[0.0, 2.0, -1.0]));
        assert!(r.candidates[0].fraction.distance(&target) < 1e-8);
    }

    #[test]
    fn one_finite_face() {
        let r = solve(&passport(&[2], &[2], &[1, 1]));
        assert_eq!(r.candidates.len(), 1);
        let f = &r.candidates[0].fraction;
        let target = RationalFraction::new(poly::real(&[0.0, 0.0, 1.0]), poly::real(&[-1.0, 2.0])).unwrap();
        assert!(f.distance(&target) < 1e-8, "{f:?}");
    }

    #[test]
    fn deterministic() {
        let p = passport(&[2, 1], &[2, 1], &[3]);
        let a = solve(&p);
        let b = solve(&p);
        assert_eq!(a.candidates.len(), b.candidates.len());
        for (x, y) in a.candidates.iter().zip(&b.candidates) {
            assert_eq!(x.unknowns, y.unknowns);
        }
    }
}
