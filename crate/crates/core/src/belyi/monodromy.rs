//! Monodromy of a rational fraction by lifting loops around `0` and `1`,
//! and the drawing of `F⁻¹([0, 1])`.
//!
//! The base point is `1/2` and the loops are `t ↦ b·e^{2πit}` and
//! `t ↦ 1 − (1 − b)·e^{2πit}`. The whole fiber, the roots of `P − yQ`, is
//! followed along a loop by warm-started Aberth iterations. A step is kept
//! only when every old point has a unique nearest new point at least ten
//! times closer than the second nearest; otherwise the step is halved.

use num_complex::Complex64;

use super::fraction::RationalFraction;
use super::poly::{self, c, CPoly};
use crate::dessin::Dessin;
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct MonodromyOptions {
    pub base: Complex64,
    /// Steps per loop to start with; also the largest step allowed.
    pub initial_steps: usize,
    /// Smallest step, as a fraction of the loop.
    pub min_step: f64,
    /// Base points tried when the fiber over the previous one is ramified.
    pub base_retries: usize,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        MonodromyOptions {
            base: c(0.5, 0.0),
            initial_steps: 64,
            min_step: 2f64.powi(-20),
            base_retries: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Monodromy {
    pub sigma: Permutation,
    pub alpha: Permutation,
    pub base: Complex64,
    /// Fiber over the base point, sorted; dart `i` is `fiber[i]`.
    pub fiber: Vec<Complex64>,
}

impl Monodromy {
    pub fn dessin(&self) -> Dessin {
        Dessin::new(self.sigma.clone(), self.alpha.clone()).expect("same degree")
    }
}

/// `P − yQ` padded to degree `n`.
fn fiber_poly(f: &RationalFraction, y: Complex64) -> CPoly {
    poly::sub(&f.num, &poly::scale(&f.den, y))
}

fn fiber_scale(z: &[Complex64]) -> f64 {
    z.iter().map(|x| x.norm()).fold(1.0, f64::max)
}

/// Fiber over `y`, sorted, or `None` if it is ramified or degenerate.
fn base_fiber(f: &RationalFraction, y: Complex64, n: usize) -> Option<Vec<Complex64>> {
    let p = poly::trim(fiber_poly(f, y));
    if poly::degree(&p) != Some(n) {
        return None;
    }
    let lead = p[n].norm();
    let rest = p[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    if lead < 1e-10 * rest {
        return None;
    }
    let mut z = poly::roots(&p);
    poly::sort_points(&mut z);
    if n > 1 && poly::min_separation(&z) < 1e-6 * fiber_scale(&z) {
        return None;
    }
    Some(z)
}

/// Index of the nearest point of `new` to each point of `old`, provided
/// every match is unambiguous with margin 10 and the matching is injective.
fn match_fibers(old: &[Complex64], new: &[Complex64]) -> Option<Vec<usize>> {
    let mut used = vec![false; new.len()];
    let mut out = Vec::with_capacity(old.len());
    for &z in old {
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = f64::INFINITY;
        for (j, &w) in new.iter().enumerate() {
            let d = (z - w).norm();
            if d < best.0 {
                second = best.0;
                best = (d, j);
            } else if d < second {
                second = d;
            }
        }
        if best.1 == usize::MAX || used[best.1] || second < 10.0 * best.0 {
            return None;
        }
        used[best.1] = true;
        out.push(best.1);
    }
    Some(out)
}

/// Follows the fiber along `path` on `[0, 1]` and returns its positions at
/// each checkpoint (ascending, in `(0, 1]`), index-aligned with `start`.
fn track<P: Fn(f64) -> Complex64>(
    f: &RationalFraction,
    path: P,
    start: &[Complex64],
    checkpoints: &[f64],
    opts: &MonodromyOptions,
) -> Result<Vec<Vec<Complex64>>> {
    let max_step = 1.0 / opts.initial_steps.max(1) as f64;
    let mut cur = start.to_vec();
    let mut s = 0.0;
    let mut h = max_step;
    let mut out = Vec::with_capacity(checkpoints.len());
    for &target in checkpoints {
        while s < target {
            let next = (s + h).min(target);
            let y = path(next);
            let (roots, converged) = poly::aberth(&fiber_poly(f, y), cur.clone(), 200);
            let matched = if converged && roots.iter().all(|z| z.is_finite()) {
                match_fibers(&cur, &roots)
            } else {
                None
            };
            match matched {
                Some(m) => {
                    cur = m.into_iter().map(|j| roots[j]).collect();
                    s = next;
                    h = (h * 2.0).min(max_step);
                }
                None => {
                    h /= 2.0;
                    if h < opts.min_step {
                        return Err(Error::Continuation(format!(
                            "ambiguous fiber matching near parameter {s:.6} (value {y})"
                        )));
                    }
                }
            }
        }
        out.push(cur.clone());
    }
    Ok(out)
}

/// Permutation `i ↦ j` where the lift starting at `fiber[i]` ends at
/// `fiber[j]`.
fn loop_permutation(
    f: &RationalFraction,
    fiber: &[Complex64],
    path: impl Fn(f64) -> Complex64,
    opts: &MonodromyOptions,
) -> Result<Permutation> {
    let end = track(f, path, fiber, &[1.0], opts)?.pop().expect("one checkpoint");
    let images = match_fibers(&end, fiber).ok_or_else(|| {
        Error::Continuation("lifted loop does not close up on the base fiber".into())
    })?;
    Permutation::from_images(images)
}

fn choose_base(f: &RationalFraction, opts: &MonodromyOptions) -> Result<(Complex64, Vec<Complex64>)> {
    let n = f.degree();
    if f.is_constant() || n == 0 {
        return Err(Error::ConstantFraction);
    }
    for k in 0..=opts.base_retries {
        let b = opts.base + c(0.0, 0.013) * k as f64;
        if let Some(z) = base_fiber(f, b, n) {
            return Ok((b, z));
        }
    }
    Err(Error::Continuation("every tried base fiber is ramified".into()))
}

pub fn monodromy(f: &RationalFraction) -> Result<Monodromy> {
    monodromy_with(f, &MonodromyOptions::default())
}

pub fn monodromy_with(f: &RationalFraction, opts: &MonodromyOptions) -> Result<Monodromy> {
    let (b, fiber) = choose_base(f, opts)?;
    let tau = 2.0 * std::f64::consts::PI;
    let around0 = |t: f64| b * Complex64::from_polar(1.0, tau * t);
    let around1 = |t: f64| c(1.0, 0.0) - (c(1.0, 0.0) - b) * Complex64::from_polar(1.0, tau * t);
    let (sigma, alpha) = rayon::join(
        || loop_permutation(f, &fiber, around0, opts),
        || loop_permutation(f, &fiber, around1, opts),
    );
    Ok(Monodromy {
        sigma: sigma?,
        alpha: alpha?,
        base: b,
        fiber,
    })
}

#[derive(Clone, Debug)]
pub struct Verification {
    pub isomorphic: bool,
    pub monodromy: Dessin,
    /// Dart bijection from `d` to the monodromy dessin when isomorphic.
    pub witness: Option<Permutation>,
}

/// Whether the monodromy of `f` is the dessin `d` up to isomorphism.
pub fn verify(d: &Dessin, f: &RationalFraction) -> Result<Verification> {
    if f.degree() != d.degree() {
        return Err(Error::DegreeMismatch {
            left: d.degree(),
            right: f.degree(),
        });
    }
    let m = monodromy(f)?.dessin();
    let witness = d.is_isomorphic(&m);
    Ok(Verification {
        isomorphic: witness.is_some(),
        monodromy: m,
        witness,
    })
}

/// For every dart, the points of `F⁻¹(t)` on its edge for `samples` values
/// of `t` spread over `(10⁻⁴, 1 − 10⁻⁴)`, from the black end to the white
/// end. Darts are numbered as in [`monodromy`].
pub fn sample_preimage(f: &RationalFraction, samples: usize) -> Result<Vec<Vec<Complex64>>> {
    let opts = MonodromyOptions::default();
    let (b, fiber) = choose_base(f, &opts)?;
    let samples = samples.max(2);
    let (lo, hi) = (1e-4, 1.0 - 1e-4);
    let ts: Vec<f64> = (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect();
    // the base value splits the samples into a part towards 0 and one towards 1
    let split = ts.iter().position(|&t| t > b.re).unwrap_or(ts.len());
    let down: Vec<f64> = ts[..split].iter().rev().copied().collect();
    let up: Vec<f64> = ts[split..].to_vec();
    let path = |target: f64| move |s: f64| b + (c(target, 0.0) - b) * s;
    let params = |v: &[f64], target: f64| -> Vec<f64> {
        v.iter().map(|&t| ((t - b.re) / (target - b.re)).clamp(1e-12, 1.0)).collect()
    };
    let opts = MonodromyOptions {
        initial_steps: 256,
        ..opts
    };
    let (lower, upper) = rayon::join(
        || track(f, path(lo), &fiber, &params(&down, lo), &opts),
        || track(f, path(hi), &fiber, &params(&up, hi), &opts),
    );
    let (lower, upper) = (lower?, upper?);
    let n = fiber.len();
    let mut out = vec![Vec::with_capacity(samples); n];
    for pos in lower.iter().rev().chain(upper.iter()) {
        for (i, z) in pos.iter().enumerate() {
            out[i].push(*z);
        }
    }
    Ok(out)
}

/// SVG drawing of `F⁻¹([0, 1])`: one polyline per dart, black discs at the
/// roots of `P` and white discs at the roots of `P − Q`.
pub fn svg(f: &RationalFraction, samples: usize, size: u32) -> Result<String> {
    let arcs = sample_preimage(f, samples)?;
    let black: Vec<Complex64> = poly::root_clusters(&f.num, poly::MULTIPLE_ROOT_TOL)
        .into_iter()
        .map(|r| r.0)
        .collect();
    let white: Vec<Complex64> = poly::root_clusters(&poly::sub(&f.num, &f.den), poly::MULTIPLE_ROOT_TOL)
        .into_iter()
        .map(|r| r.0)
        .collect();
    let all = arcs.iter().flatten().chain(&black).chain(&white);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in all {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let margin = 0.1 * span;
    let scale = size as f64 / (span + 2.0 * margin);
    let cx = (x0 + x1) / 2.0;
    let cy = (y0 + y1) / 2.0;
    let half = size as f64 / 2.0;
    let map = |z: &Complex64| (half + (z.re - cx) * scale, half - (z.im - cy) * scale);
    let radius = (size as f64 / 80.0).max(2.0);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    );
    for (i, arc) in arcs.iter().enumerate() {
        let pts: Vec<String> = arc
            .iter()
            .map(|z| {
                let (x, y) = map(z);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        s.push_str(&format!(
            "  <polyline data-dart=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            i + 1,
            pts.join(" ")
        ));
    }
    for (pts, fill) in [(&black, "black"), (&white, "white")] {
        for z in pts {
            let (x, y) = map(z);
            s.push_str(&format!(
                "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{radius:.1}\" fill=\"{fill}\" stroke=\"black\"/>\n"
            ));
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belyi::poly::real;

    fn poly_fraction(coeffs: &[f64]) -> RationalFraction {
        RationalFraction::polynomial(real(coeffs))
    }

    #[test]
    fn identity_map() {
        let m = monodromy(&poly_fraction(&[0.0, 1.0])).unwrap();
        assert!(m.sigma.is_identity() && m.alpha.is_identity());
        assert_eq!(m.sigma.degree(), 1);
    }

    #[test]
    fn square_map() {
        let m = monodromy(&poly_fraction(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(m.sigma, Permutation::from_images(vec![1, 0]).unwrap());
        assert!(m.alpha.is_identity());
    }

    #[test]
    fn path_map() {
        let m = monodromy(&poly_fraction(&[0.0, 2.0, -1.0])).unwrap();
        assert!(m.sigma.is_identity());
        assert_eq!(m.alpha, Permutation::from_images(vec![1, 0]).unwrap());
    }

    #[test]
    fn power_map_is_a_star() {
        for n in 1..=6 {
            let mut coeffs = vec![0.0; n + 1];
            coeffs[n] = 1.0;
            let d = monodromy(&poly_fraction(&coeffs)).unwrap().dessin();
            assert_eq!(d.sigma().cycle_type().lengths(), &[n]);
            assert!(d.alpha().is_identity());
            assert_eq!(d.genus().unwrap(), 0);
        }
    }

    #[test]
    fn rational_map_with_a_finite_pole() {
        // z²/(2z − 1): two black darts at 0, white double point at 1
        let f = RationalFraction::new(real(&[0.0, 0.0, 1.0]), real(&[-1.0, 2.0])).unwrap();
        let d = monodromy(&f).unwrap().dessin();
        assert_eq!(d.passport().unwrap().faces.lengths(), &[1, 1]);
        assert_eq!(d.genus().unwrap(), 0);
    }

    #[test]
    fn verify_examples() {
        let one = Dessin::one_dart();
        assert!(verify(&one, &poly_fraction(&[0.0, 1.0])).unwrap().isomorphic);
        let path = Dessin::new(Permutation::identity(2), Permutation::transposition(2, 0, 1)).unwrap();
        let star = Dessin::new(Permutation::transposition(2, 0, 1), Permutation::identity(2)).unwrap();
        let f = poly_fraction(&[0.0, 2.0, -1.0]);
        assert!(verify(&path, &f).unwrap().isomorphic);
        assert!(!verify(&star, &f).unwrap().isomorphic);
        assert!(matches!(verify(&one, &f), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn preimage_of_the_segment() {
        let arcs = sample_preimage(&poly_fraction(&[0.0, 1.0]), 11).unwrap();
        assert_eq!(arcs.len(), 1);
        for z in &arcs[0] {
            assert!(z.im.abs() < 1e-12 && z.re > 0.0 && z.re < 1.0);
        }
        assert!(arcs[0][0].re < 1e-3 && arcs[0][10].re > 1.0 - 1e-3);
        let arcs = sample_preimage(&poly_fraction(&[0.0, 0.0, 1.0]), 21).unwrap();
        assert_eq!(arcs.len(), 2);
        for arc in &arcs {
            assert!(arc[0].norm() < 0.02);
            assert!((arc.last().unwrap().norm() - 1.0).abs() < 1e-3);
            assert!(arc.iter().all(|z| z.im.abs() < 1e-9));
        }
        let arcs = sample_preimage(&poly_fraction(&[0.0, 2.0, -1.0]), 21).unwrap();
        for arc in &arcs {
            assert!((arc.last().unwrap() - c(1.0, 0.0)).norm() < 0.02);
        }
    }

    #[test]
    fn svg_has_one_polyline_per_dart() {
        let s = svg(&poly_fraction(&[0.0, 0.0, 0.0, 1.0]), 30, 200).unwrap();
        assert_eq!(s.matches("<polyline").count(), 3);
        assert_eq!(s.matches("fill=\"black\"").count(), 1);
        assert_eq!(s.matches("fill=\"white\"").count(), 3);
    }
}
