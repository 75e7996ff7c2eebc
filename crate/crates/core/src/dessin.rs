//! Oriented, boundaryless dessins as pairs of permutations on darts, the
//! unoriented triangle model, and structural invariants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{CycleType, Permutation};
use crate::permgroup::{self, PermutationGroup};

/// A dessin on `n` darts: `σ` rotates darts around black vertices, `α`
/// around white vertices. `φ = (σα)⁻¹` is always derived, never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dessin {
    sigma: Permutation,
    alpha: Permutation,
}

impl Dessin {
    pub fn new(sigma: Permutation, alpha: Permutation) -> Result<Self> {
        if sigma.degree() != alpha.degree() {
            return Err(Error::DegreeMismatch {
                left: sigma.degree(),
                right: alpha.degree(),
            });
        }
        Ok(Dessin { sigma, alpha })
    }

    /// The dessin with one dart, one vertex of each colour and one face.
    pub fn one_dart() -> Self {
        Dessin {
            sigma: Permutation::identity(1),
            alpha: Permutation::identity(1),
        }
    }

    pub fn degree(&self) -> usize {
        self.sigma.degree()
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn alpha(&self) -> &Permutation {
        &self.alpha
    }

    pub fn phi(&self) -> Permutation {
        self.sigma.then(&self.alpha).inverse()
    }

    /// The cartographic (monodromy) group `⟨σ, α⟩`.
    pub fn cartographic_group(&self) -> PermutationGroup {
        PermutationGroup::new(vec![self.sigma.clone(), self.alpha.clone()])
            .expect("degrees agree by construction")
    }

    pub fn is_connected(&self) -> bool {
        permgroup::orbit(&[self.sigma.clone(), self.alpha.clone()], 0).len() == self.degree()
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// `χ = #cycles(σ) + #cycles(α) − n + #cycles(φ)`.
    pub fn euler_characteristic(&self) -> i64 {
        self.sigma.cycle_count() as i64 + self.alpha.cycle_count() as i64 - self.degree() as i64
            + self.phi().cycle_count() as i64
    }

    pub fn genus(&self) -> Result<u32> {
        self.require_connected()?;
        let chi = self.euler_characteristic();
        if chi % 2 != 0 || chi > 2 {
            return Err(Error::Internal(format!("impossible Euler characteristic {chi}")));
        }
        Ok(((2 - chi) / 2) as u32)
    }

    pub fn passport(&self) -> Result<Passport> {
        Ok(Passport {
            black: self.sigma.cycle_type(),
            white: self.alpha.cycle_type(),
            faces: self.phi().cycle_type(),
            genus: self.genus()?,
        })
    }

    /// Genus 0 with a single face.
    pub fn is_planar_tree(&self) -> bool {
        self.is_connected() && self.euler_characteristic() == 2 && self.phi().cycle_count() == 1
    }

    /// `(D, φ, α, α⁻¹σα)`: black vertices trade places with face centres.
    pub fn dual(&self) -> Dessin {
        Dessin {
            sigma: self.phi(),
            alpha: self.alpha.clone(),
        }
    }

    /// `(D, α, σ, αφα⁻¹)`: the two vertex colours are exchanged.
    pub fn swap_colors(&self) -> Dessin {
        Dessin {
            sigma: self.alpha.clone(),
            alpha: self.sigma.clone(),
        }
    }

    /// Renames every dart `x` as `x^c`.
    pub fn relabel(&self, c: &Permutation) -> Result<Dessin> {
        if c.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: c.degree(),
            });
        }
        Ok(Dessin {
            sigma: self.sigma.conjugate_by(c),
            alpha: self.alpha.conjugate_by(c),
        })
    }

    /// A dart bijection `c` with `c⁻¹σc = σ'` and `c⁻¹αc = α'`, if any.
    pub fn is_isomorphic(&self, other: &Dessin) -> Option<Permutation> {
        if self.degree() != other.degree() {
            return None;
        }
        permgroup::simultaneous_conjugacy((&self.sigma, &self.alpha), (&other.sigma, &other.alpha))
            .expect("degrees checked")
    }

    /// The relabeling with the least `(σ, α)` image tables among all
    /// breadth-first relabelings from a base dart. Two connected dessins are
    /// isomorphic exactly when their canonical forms are equal.
    pub fn canonical_form(&self) -> Result<Dessin> {
        self.require_connected()?;
        let n = self.degree();
        let mut best: Option<Vec<usize>> = None;
        let mut label = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut key = vec![0usize; 2 * n];
        for base in 0..n {
            label.iter_mut().for_each(|l| *l = usize::MAX);
            order.clear();
            label[base] = 0;
            order.push(base);
            let mut i = 0;
            while i < order.len() {
                let x = order[i];
                for g in [&self.sigma, &self.alpha] {
                    let y = g.apply(x);
                    if label[y] == usize::MAX {
                        label[y] = order.len();
                        order.push(y);
                    }
                }
                i += 1;
            }
            for (x, &lx) in label.iter().enumerate() {
                key[lx] = label[self.sigma.apply(x)];
                key[n + lx] = label[self.alpha.apply(x)];
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key.clone());
            }
        }
        let best = best.expect("n >= 1");
        Ok(Dessin {
            sigma: Permutation::from_images_unchecked(best[..n].to_vec()),
            alpha: Permutation::from_images_unchecked(best[n..].to_vec()),
        })
    }

    /// The triangle model on `T = D × {+1, −1}`: triangle `(x, +1)` has
    /// index `2x`, `(x, −1)` has index `2x + 1`.
    pub fn to_triangles(&self) -> TrianglePresentation {
        let n = self.degree();
        let sigma_inv = self.sigma.inverse();
        let alpha_inv = self.alpha.inverse();
        let mut a = vec![0; 2 * n];
        let mut b = vec![0; 2 * n];
        let mut c = vec![0; 2 * n];
        for x in 0..n {
            b[2 * x] = 2 * x + 1;
            b[2 * x + 1] = 2 * x;
            // a = σ̄ then b
            a[2 * x] = 2 * self.sigma.apply(x) + 1;
            a[2 * x + 1] = 2 * sigma_inv.apply(x);
            // c = b then ᾱ, so that bc restricts to α on black triangles
            c[2 * x] = 2 * alpha_inv.apply(x) + 1;
            c[2 * x + 1] = 2 * self.alpha.apply(x);
        }
        TrianglePresentation {
            a: Permutation::from_images_unchecked(a),
            b: Permutation::from_images_unchecked(b),
            c: Permutation::from_images_unchecked(c),
        }
    }

    /// A connected dessin built by disjoint union.
    pub fn disjoint_union(&self, other: &Dessin) -> Dessin {
        let n = self.degree();
        let join = |p: &Permutation, q: &Permutation| {
            let mut images: Vec<usize> = p.images().to_vec();
            images.extend(q.images().iter().map(|&x| x + n));
            Permutation::from_images_unchecked(images)
        };
        Dessin {
            sigma: join(&self.sigma, &other.sigma),
            alpha: join(&self.alpha, &other.alpha),
        }
    }
}

impl fmt::Debug for Dessin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Dessin(n={}, σ={}, α={})",
            self.degree(),
            self.sigma,
            self.alpha
        )
    }
}

pub fn make_dessin(sigma: Permutation, alpha: Permutation) -> Result<Dessin> {
    Dessin::new(sigma, alpha)
}

/// Cycle types of `σ`, `α`, `φ` and the genus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Passport {
    pub black: CycleType,
    pub white: CycleType,
    pub faces: CycleType,
    pub genus: u32,
}

impl Passport {
    pub fn degree(&self) -> usize {
        self.black.sum()
    }

    /// Checks the sums and recomputes the genus from vertex and face counts.
    pub fn validate(&self) -> Result<()> {
        let n = self.black.sum();
        if n == 0 || self.white.sum() != n || self.faces.sum() != n {
            return Err(Error::InconsistentPassport(format!(
                "cycle types sum to {}, {}, {}",
                n,
                self.white.sum(),
                self.faces.sum()
            )));
        }
        let chi = self.black.count() as i64 + self.white.count() as i64 - n as i64
            + self.faces.count() as i64;
        if chi > 2 || chi % 2 != 0 || (2 - chi) / 2 != self.genus as i64 {
            return Err(Error::InconsistentPassport(format!(
                "Euler characteristic {chi} does not match genus {}",
                self.genus
            )));
        }
        Ok(())
    }

    /// Builds a passport from three cycle types, deriving the genus.
    pub fn from_cycle_types(black: CycleType, white: CycleType, faces: CycleType) -> Result<Self> {
        let n = black.sum() as i64;
        let chi = black.count() as i64 + white.count() as i64 - n + faces.count() as i64;
        if chi > 2 || chi % 2 != 0 {
            return Err(Error::InconsistentPassport(format!(
                "impossible Euler characteristic {chi}"
            )));
        }
        let p = Passport {
            black,
            white,
            faces,
            genus: ((2 - chi) / 2) as u32,
        };
        p.validate()?;
        Ok(p)
    }
}

impl fmt::Display for Passport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "black {} / white {} / faces {} / genus {}",
            self.black, self.white, self.faces, self.genus
        )
    }
}

/// Triangles with the three reflections `a`, `b`, `c` (all fixed-point-free
/// involutions; triangles with a free side are not supported).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrianglePresentation {
    a: Permutation,
    b: Permutation,
    c: Permutation,
}

/// Outcome of orienting a triangle presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orientation {
    Oriented(Dessin),
    /// No black/white colouring exists; `odd_cycle` lists triangles around
    /// a closed path of odd length in the adjacency graph.
    NonOrientable { odd_cycle: Vec<usize> },
}

impl TrianglePresentation {
    pub fn new(a: Permutation, b: Permutation, c: Permutation) -> Result<Self> {
        let t = a.degree();
        if b.degree() != t || c.degree() != t {
            return Err(Error::DegreeMismatch {
                left: t,
                right: if b.degree() != t { b.degree() } else { c.degree() },
            });
        }
        if t % 2 != 0 {
            return Err(Error::InvalidTriangles(format!("odd triangle count {t}")));
        }
        for (name, p) in [("a", &a), ("b", &b), ("c", &c)] {
            if !p.then(p).is_identity() {
                return Err(Error::InvalidTriangles(format!("{name} is not an involution")));
            }
            if let Some(&x) = p.fixed_points().first() {
                let what = if name == "b" {
                    "b has a fixed point (boundary is not supported)".to_string()
                } else {
                    format!("{name} fixes triangle {}", x + 1)
                };
                return Err(Error::InvalidTriangles(what));
            }
        }
        Ok(TrianglePresentation { a, b, c })
    }

    pub fn triangle_count(&self) -> usize {
        self.a.degree()
    }

    pub fn a(&self) -> &Permutation {
        &self.a
    }

    pub fn b(&self) -> &Permutation {
        &self.b
    }

    pub fn c(&self) -> &Permutation {
        &self.c
    }

    /// Two-colours the triangles so that `a`-, `b`- and `c`-neighbours
    /// differ; in each component the least triangle is black. The darts of
    /// the result are the black triangles in increasing order, with
    /// `σ = ab` and `α = bc`.
    pub fn orient(&self) -> Orientation {
        let t = self.triangle_count();
        let gens = [&self.a, &self.b, &self.c];
        let mut colour: Vec<Option<bool>> = vec![None; t];
        let mut parent = vec![usize::MAX; t];
        for start in 0..t {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(true);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let cx = colour[x].unwrap();
                for g in gens {
                    let y = g.apply(x);
                    match colour[y] {
                        None => {
                            colour[y] = Some(!cx);
                            parent[y] = x;
                            queue.push_back(y);
                        }
                        Some(cy) if cy == cx => {
                            return Orientation::NonOrientable {
                                odd_cycle: odd_cycle(&parent, x, y),
                            };
                        }
                        _ => {}
                    }
                }
            }
        }
        let black: Vec<usize> = (0..t).filter(|&x| colour[x] == Some(true)).collect();
        let mut index = vec![usize::MAX; t];
        for (i, &x) in black.iter().enumerate() {
            index[x] = i;
        }
        let sigma: Vec<usize> = black
            .iter()
            .map(|&x| index[self.b.apply(self.a.apply(x))])
            .collect();
        let alpha: Vec<usize> = black
            .iter()
            .map(|&x| index[self.c.apply(self.b.apply(x))])
            .collect();
        Orientation::Oriented(Dessin {
            sigma: Permutation::from_images_unchecked(sigma),
            alpha: Permutation::from_images_unchecked(alpha),
        })
    }
}

/// Closed path through the tree edges from `x` and `y` to their common
/// ancestor, plus the edge `x–y`.
fn odd_cycle(parent: &[usize], x: usize, y: usize) -> Vec<usize> {
    let path_to_root = |mut v: usize| {
        let mut p = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            p.push(v);
        }
        p
    };
    let px = path_to_root(x);
    let py = path_to_root(y);
    let lca = *px.iter().find(|v| py.contains(v)).expect("same component");
    let mut cycle: Vec<usize> = px.iter().take_while(|&&v| v != lca).copied().collect();
    cycle.push(lca);
    let tail: Vec<usize> = py.iter().take_while(|&&v| v != lca).copied().collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}

pub fn to_triangles(d: &Dessin) -> TrianglePresentation {
    d.to_triangles()
}

pub fn from_triangles(tp: &TrianglePresentation) -> Orientation {
    tp.orient()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn d(s: &str, a: &str, n: usize) -> Dessin {
        Dessin::new(p(s, n), p(a, n)).unwrap()
    }

    fn tetra() -> Dessin {
        d(
            "(1 2 3)(4 5 6)(7 8 9)(10 11 12)",
            "(1 4)(2 10)(3 7)(5 9)(6 11)(8 12)",
            12,
        )
    }

    #[test]
    fn product_is_identity() {
        let t = tetra();
        assert!(t.sigma().then(&t.alpha().then(&t.phi())).is_identity());
    }

    #[test]
    fn make_dessin_checks_degree() {
        assert!(Dessin::new(Permutation::identity(2), Permutation::identity(3)).is_err());
        assert_eq!(tetra().degree(), 12);
    }

    #[test]
    fn euler_and_genus() {
        let one = Dessin::one_dart();
        assert_eq!(one.euler_characteristic(), 2);
        assert_eq!(one.genus().unwrap(), 0);
        assert_eq!(tetra().genus().unwrap(), 0);
        let torus = d("(1 2 3 4)", "(1 2 3 4)", 4);
        assert_eq!(torus.phi(), p("(1 3)(2 4)", 4).inverse());
        assert_eq!(torus.euler_characteristic(), 0);
        assert_eq!(torus.genus().unwrap(), 1);
        let two = Dessin::one_dart().disjoint_union(&Dessin::one_dart());
        assert!(!two.is_connected());
        assert_eq!(two.genus(), Err(Error::Disconnected));
    }

    #[test]
    fn passports() {
        let pt = tetra().passport().unwrap();
        assert_eq!(pt.black.lengths(), &[3, 3, 3, 3]);
        assert_eq!(pt.white.lengths(), &[2, 2, 2, 2, 2, 2]);
        assert_eq!(pt.faces.lengths(), &[3, 3, 3, 3]);
        assert_eq!(pt.genus, 0);
        let one = Dessin::one_dart().passport().unwrap();
        assert_eq!(one.black.lengths(), &[1]);
        assert!(Dessin::one_dart()
            .disjoint_union(&Dessin::one_dart())
            .passport()
            .is_err());
    }

    #[test]
    fn triangles_of_one_dart() {
        let tp = Dessin::one_dart().to_triangles();
        let swap = p("(1 2)", 2);
        assert_eq!(tp.a(), &swap);
        assert_eq!(tp.b(), &swap);
        assert_eq!(tp.c(), &swap);
        assert_eq!(tp.orient(), Orientation::Oriented(Dessin::one_dart()));
    }

    #[test]
    fn triangles_of_star() {
        let star = d("(1 2)", "()", 2);
        let tp = star.to_triangles();
        assert_eq!(tp.triangle_count(), 4);
        assert_eq!(tp.a().cycle_type().lengths(), &[2, 2]);
        assert!(TrianglePresentation::new(tp.a().clone(), tp.b().clone(), tp.c().clone()).is_ok());
    }

    #[test]
    fn six_triangle_example_is_orientable() {
        let tp = TrianglePresentation::new(
            p("(1 4)(2 3)(5 6)", 6),
            p("(1 6)(2 5)(3 4)", 6),
            p("(1 2)(3 4)(5 6)", 6),
        )
        .unwrap();
        match tp.orient() {
            Orientation::Oriented(d) => assert_eq!(d.degree(), 3),
            other => panic!("expected orientable, got {other:?}"),
        }
    }

    #[test]
    fn non_orientable_reports_odd_cycle() {
        // the adjacency graph is K4, which contains triangles
        let a = p("(1 2)(3 4)", 4);
        let b = p("(1 3)(2 4)", 4);
        let c = p("(1 4)(2 3)", 4);
        let tp = TrianglePresentation::new(a.clone(), b.clone(), c.clone()).unwrap();
        match tp.orient() {
            Orientation::NonOrientable { odd_cycle } => {
                assert_eq!(odd_cycle.len() % 2, 1);
                for w in 0..odd_cycle.len() {
                    let (x, y) = (odd_cycle[w], odd_cycle[(w + 1) % odd_cycle.len()]);
                    assert!(a.apply(x) == y || b.apply(x) == y || c.apply(x) == y);
                }
            }
            other => panic!("expected non-orientable, got {other:?}"),
        }
    }

    #[test]
    fn boundary_is_rejected() {
        let r = TrianglePresentation::new(p("(1 2)", 2), Permutation::identity(2), p("(1 2)", 2));
        assert!(matches!(r, Err(Error::InvalidTriangles(_))));
        let r = TrianglePresentation::new(p("(1 2)", 3), p("(1 2)", 3), p("(1 2)", 3));
        assert!(r.is_err());
    }

    #[test]
    fn dual_and_swap() {
        let one = Dessin::one_dart();
        assert_eq!(one.dual(), one);
        assert_eq!(one.swap_colors(), one);
        let star = d("(1 2)", "()", 2);
        assert!(star.is_isomorphic(&star.dual()).is_some());
        assert!(star.is_isomorphic(&star.swap_colors()).is_none());
        let t = tetra();
        let pt = t.passport().unwrap();
        let pd = t.dual().passport().unwrap();
        assert_eq!(pd.black, pt.faces);
        assert_eq!(pd.faces, pt.black);
        let ps = t.swap_colors().passport().unwrap();
        assert_eq!(ps.black, pt.white);
        assert_eq!(ps.white, pt.black);
        // the swap triple's third permutation is αφα⁻¹
        let s = t.swap_colors();
        let expected = t.alpha().then(&t.phi()).then(&t.alpha().inverse());
        assert_eq!(s.phi(), expected);
        let du = t.dual();
        let expected = t.alpha().inverse().then(t.sigma()).then(t.alpha());
        assert_eq!(du.phi(), expected);
    }

    #[test]
    fn isomorphism_witnesses() {
        let t = tetra();
        assert!(t.is_isomorphic(&t).unwrap().is_identity() || t.is_isomorphic(&t).is_some());
        let c = p("(2 3 4)(5 12)", 12);
        let r = t.relabel(&c).unwrap();
        let w = t.is_isomorphic(&r).unwrap();
        assert_eq!(t.relabel(&w).unwrap(), r);
        assert_eq!(t.canonical_form().unwrap(), r.canonical_form().unwrap());
    }

    #[test]
    fn canonical_forms_of_degree_two() {
        let forms: std::collections::HashSet<Dessin> = [
            d("(1 2)", "()", 2),
            d("()", "(1 2)", 2),
            d("(1 2)", "(1 2)", 2),
        ]
        .iter()
        .map(|x| x.canonical_form().unwrap())
        .collect();
        assert_eq!(forms.len(), 3);
        let c = tetra().canonical_form().unwrap();
        assert_eq!(c.canonical_form().unwrap(), c);
    }

    #[test]
    fn triangle_round_trip_exhaustive_degree_4() {
        let all: Vec<_> = all_permutations(4).collect();
        for s in &all {
            for a in all.iter().step_by(5) {
                let dd = Dessin::new(s.clone(), a.clone()).unwrap();
                let tp = dd.to_triangles();
                for g in [tp.a(), tp.b(), tp.c()] {
                    assert!(g.then(g).is_identity());
                    assert!(g.fixed_points().is_empty());
                }
                match tp.orient() {
                    Orientation::Oriented(back) => assert!(back.is_isomorphic(&dd).is_some()),
                    _ => panic!("oriented input must orient"),
                }
            }
        }
    }
}
