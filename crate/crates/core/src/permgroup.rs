//! Permutation groups given by generators: a stabilizer chain for order and
//! membership, orbits, equivariant map search (centralizers and
//! simultaneous conjugacy).

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default cap on explicit element listings.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// `transversal[x] = Some(u)` with `base^u = x` for `x` in the orbit.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

/// A stabilizer chain with base points chosen in natural order.
#[derive(Clone, Debug)]
struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
    /// Strong generators, tagged with the deepest level whose stabilizer
    /// contains them.
    strong: Vec<(usize, Permutation)>,
}

impl StabilizerChain {
    fn new(degree: usize, generators: &[Permutation]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
            strong: Vec::new(),
        };
        for g in generators {
            if let Some((residue, level)) = chain.sift(g, 0) {
                chain.add_strong(residue, level);
            }
        }
        chain.complete();
        chain
    }

    fn gens_at(&self, level: usize) -> Vec<&Permutation> {
        self.strong
            .iter()
            .filter(|(l, _)| *l >= level)
            .map(|(_, g)| g)
            .collect()
    }

    fn add_strong(&mut self, g: Permutation, level: usize) {
        if level == self.levels.len() {
            // new base point: the least point moved by g
            let base = (0..self.degree)
                .find(|&x| g.apply(x) != x)
                .expect("sifted residue is not the identity");
            self.levels.push(Level {
                base,
                transversal: Vec::new(),
                orbit: Vec::new(),
            });
        }
        self.strong.push((level, g));
        for l in 0..=level {
            self.rebuild_orbit(l);
        }
    }

    fn rebuild_orbit(&mut self, level: usize) {
        let gens: Vec<Permutation> = self.gens_at(level).into_iter().cloned().collect();
        let lv = &mut self.levels[level];
        let mut transversal: Vec<Option<Permutation>> = vec![None; self.degree];
        transversal[lv.base] = Some(Permutation::identity(self.degree));
        let mut orbit = vec![lv.base];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            let ux = transversal[x].clone().unwrap();
            for g in &gens {
                let y = g.apply(x);
                if transversal[y].is_none() {
                    transversal[y] = Some(ux.then(g));
                    orbit.push(y);
                }
            }
            i += 1;
        }
        lv.transversal = transversal;
        lv.orbit = orbit;
    }

    /// Sifts `g` starting at `level`; returns the non-identity residue and
    /// the level at which it got stuck, or `None` when `g` is a member.
    fn sift(&self, g: &Permutation, level: usize) -> Option<(Permutation, usize)> {
        let mut h = g.clone();
        for (l, lv) in self.levels.iter().enumerate().skip(level) {
            let x = h.apply(lv.base);
            match &lv.transversal[x] {
                Some(u) => h = h.then(&u.inverse()),
                None => return Some((h, l)),
            }
        }
        if h.is_identity() {
            None
        } else {
            Some((h, self.levels.len()))
        }
    }

    /// Deterministic Schreier–Sims: every Schreier generator of every level
    /// must sift through the levels below it.
    fn complete(&mut self) {
        'outer: loop {
            for level in (0..self.levels.len()).rev() {
                let gens: Vec<Permutation> = self.gens_at(level).into_iter().cloned().collect();
                let orbit = self.levels[level].orbit.clone();
                for &x in &orbit {
                    let ux = self.levels[level].transversal[x].clone().unwrap();
                    for s in &gens {
                        let y = s.apply(x);
                        let uy = self.levels[level].transversal[y].clone().unwrap();
                        let schreier = ux.then(s).then(&uy.inverse());
                        if schreier.is_identity() {
                            continue;
                        }
                        if let Some((residue, l)) = self.sift(&schreier, level + 1) {
                            self.add_strong(residue, l);
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
    }

    fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g, 0).is_none()
    }
}

/// The permutation group generated by a list of permutations of equal
/// degree.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabilizerChain,
}

impl PermutationGroup {
    pub fn new(generators: Vec<Permutation>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidPermutation("no generators given".into()))?;
        let degree = first.degree();
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let chain = StabilizerChain::new(degree, &generators);
        Ok(PermutationGroup {
            degree,
            generators,
            chain,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup::new(vec![Permutation::identity(degree)]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    /// Base points of the stabilizer chain, in the order chosen.
    pub fn base(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.base).collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain.contains(g)
    }

    /// Orbit of `x`, in breadth-first discovery order.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        orbit(&self.generators, x)
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !seen[x] {
                let o = self.orbit(x);
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    /// All elements, by breadth-first closure from the identity under right
    /// multiplication by the generators. Fails when the order exceeds `cap`.
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > cap as u128 {
            return Err(Error::CapExceeded {
                what: "group elements",
                needed: order,
                cap: cap as u128,
            });
        }
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            for g in &self.generators {
                let h = out[i].then(g);
                if seen.insert(h.clone()) {
                    out.push(h);
                }
            }
            i += 1;
        }
        debug_assert_eq!(out.len() as u128, order);
        Ok(out)
    }

    /// True when every generator commutes with `c`.
    pub fn centralizes(&self, c: &Permutation) -> bool {
        self.generators.iter().all(|g| g.then(c) == c.then(g))
    }
}

/// Builds the group generated by `gens`.
pub fn group_from_generators(gens: Vec<Permutation>) -> Result<PermutationGroup> {
    PermutationGroup::new(gens)
}

pub fn is_transitive(g: &PermutationGroup) -> bool {
    g.is_transitive()
}

pub(crate) fn orbit(gens: &[Permutation], x: usize) -> Vec<usize> {
    let n = gens.first().map_or(x + 1, Permutation::degree);
    let mut seen = vec![false; n];
    seen[x] = true;
    let mut out = vec![x];
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        for g in gens {
            let z = g.apply(y);
            if !seen[z] {
                seen[z] = true;
                out.push(z);
                queue.push_back(z);
            }
        }
    }
    out
}

/// Backtracking search for bijections `c` with `x^{g_i} c = (x c)^{h_i}`
/// for all `i`, i.e. `c⁻¹ g_i c = h_i`.
struct EquivariantSearch<'a> {
    src: &'a [Permutation],
    dst: &'a [Permutation],
    n: usize,
    map: Vec<usize>,
    used: Vec<bool>,
    /// Source orbit representatives (least points), in increasing order.
    roots: Vec<usize>,
    dst_orbit_len: Vec<usize>,
    src_orbit_len: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl<'a> EquivariantSearch<'a> {
    fn new(src: &'a [Permutation], dst: &'a [Permutation]) -> Self {
        let n = src[0].degree();
        let mut roots = Vec::new();
        let mut src_orbit_len = vec![0; n];
        let mut seen = vec![false; n];
        for x in 0..n {
            if !seen[x] {
                let o = orbit(src, x);
                for &y in &o {
                    seen[y] = true;
                    src_orbit_len[y] = o.len();
                }
                roots.push(x);
            }
        }
        let mut dst_orbit_len = vec![0; n];
        let mut seen = vec![false; n];
        for x in 0..n {
            if !seen[x] {
                let o = orbit(dst, x);
                for &y in &o {
                    seen[y] = true;
                    dst_orbit_len[y] = o.len();
                }
            }
        }
        EquivariantSearch {
            src,
            dst,
            n,
            map: vec![UNSET; n],
            used: vec![false; n],
            roots,
            dst_orbit_len,
            src_orbit_len,
        }
    }

    /// Extends `x ↦ y` along the orbit of `x`; on conflict undoes its own
    /// assignments and returns `None`, else the list of assigned points.
    fn propagate(&mut self, x: usize, y: usize) -> Option<Vec<usize>> {
        if self.used[y] || self.map[x] != UNSET {
            return None;
        }
        let mut assigned = vec![x];
        self.map[x] = y;
        self.used[y] = true;
        let mut i = 0;
        while i < assigned.len() {
            let a = assigned[i];
            let b = self.map[a];
            for (g, h) in self.src.iter().zip(self.dst) {
                let a2 = g.apply(a);
                let b2 = h.apply(b);
                if self.map[a2] == UNSET {
                    if self.used[b2] {
                        self.undo(&assigned);
                        return None;
                    }
                    self.map[a2] = b2;
                    self.used[b2] = true;
                    assigned.push(a2);
                } else if self.map[a2] != b2 {
                    self.undo(&assigned);
                    return None;
                }
            }
            i += 1;
        }
        Some(assigned)
    }

    fn undo(&mut self, assigned: &[usize]) {
        for &a in assigned {
            self.used[self.map[a]] = false;
            self.map[a] = UNSET;
        }
    }

    /// Visits every complete equivariant bijection; the visitor returns
    /// `false` to stop.
    fn search(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.roots.len() {
            return visit(&self.map);
        }
        let x = self.roots[depth];
        for y in 0..self.n {
            if self.used[y] || self.dst_orbit_len[y] != self.src_orbit_len[x] {
                continue;
            }
            if let Some(assigned) = self.propagate(x, y) {
                let keep_going = self.search(depth + 1, visit);
                self.undo(&assigned);
                if !keep_going {
                    return false;
                }
            }
        }
        true
    }
}

fn check_tuples(src: &[Permutation], dst: &[Permutation]) -> Result<usize> {
    if src.is_empty() || src.len() != dst.len() {
        return Err(Error::InvalidPermutation(
            "generator tuples must be nonempty and of equal length".into(),
        ));
    }
    let n = src[0].degree();
    for p in src.iter().chain(dst) {
        if p.degree() != n {
            return Err(Error::DegreeMismatch {
                left: n,
                right: p.degree(),
            });
        }
    }
    Ok(n)
}

/// A `c` with `c⁻¹ src_i c = dst_i` for every `i`, if one exists.
pub fn conjugating_map(src: &[Permutation], dst: &[Permutation]) -> Result<Option<Permutation>> {
    check_tuples(src, dst)?;
    for (a, b) in src.iter().zip(dst) {
        if a.cycle_type() != b.cycle_type() {
            return Ok(None);
        }
    }
    let mut search = EquivariantSearch::new(src, dst);
    let mut found = None;
    search.search(0, &mut |m| {
        found = Some(Permutation::from_images_unchecked(m.to_vec()));
        false
    });
    Ok(found)
}

/// All `c` with `c⁻¹ src_i c = dst_i`, failing once more than `cap` exist.
pub fn all_conjugating_maps(
    src: &[Permutation],
    dst: &[Permutation],
    cap: usize,
) -> Result<Vec<Permutation>> {
    check_tuples(src, dst)?;
    let mut search = EquivariantSearch::new(src, dst);
    let mut out = Vec::new();
    let mut overflow = false;
    search.search(0, &mut |m| {
        if out.len() >= cap {
            overflow = true;
            return false;
        }
        out.push(Permutation::from_images_unchecked(m.to_vec()));
        true
    });
    if overflow {
        return Err(Error::CapExceeded {
            what: "equivariant maps",
            needed: cap as u128 + 1,
            cap: cap as u128,
        });
    }
    Ok(out)
}

/// A witness `c` with `c⁻¹·p·c = p'` componentwise for two generator
/// pairs, or `None` when the pairs are not simultaneously conjugate.
pub fn simultaneous_conjugacy(
    pair1: (&Permutation, &Permutation),
    pair2: (&Permutation, &Permutation),
) -> Result<Option<Permutation>> {
    conjugating_map(
        &[pair1.0.clone(), pair1.1.clone()],
        &[pair2.0.clone(), pair2.1.clone()],
    )
}

/// The centralizer of `g` in the full symmetric group on its points.
pub fn centralizer_in_symmetric(g: &PermutationGroup) -> Result<PermutationGroup> {
    centralizer_with_cap(g, DEFAULT_ELEMENT_CAP)
}

pub fn centralizer_with_cap(g: &PermutationGroup, cap: usize) -> Result<PermutationGroup> {
    let elements = all_conjugating_maps(g.generators(), g.generators(), cap)?;
    let mut gens: Vec<Permutation> = Vec::new();
    let mut current = PermutationGroup::trivial(g.degree());
    for e in elements {
        if !current.contains(&e) {
            gens.push(e);
            current = PermutationGroup::new(gens.clone())?;
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn tetra() -> (Permutation, Permutation) {
        (
            p("(1 2 3)(4 5 6)(7 8 9)(10 11 12)", 12),
            p("(1 4)(2 10)(3 7)(5 9)(6 11)(8 12)", 12),
        )
    }

    fn closure_size(gens: &[Permutation]) -> usize {
        let n = gens[0].degree();
        let mut seen = HashSet::new();
        let mut q = vec![Permutation::identity(n)];
        seen.insert(q[0].clone());
        while let Some(x) = q.pop() {
            for g in gens {
                let y = x.then(g);
                if seen.insert(y.clone()) {
                    q.push(y);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn orders() {
        assert_eq!(group_from_generators(vec![Permutation::identity(1)]).unwrap().order(), 1);
        let (s, a) = tetra();
        assert_eq!(group_from_generators(vec![s, a]).unwrap().order(), 12);
        let g = group_from_generators(vec![p("(1 2)", 3), p("(1 2 3)", 3)]).unwrap();
        assert_eq!(g.order(), 6);
        let s7 = group_from_generators(vec![p("(1 2)", 7), p("(1 2 3 4 5 6 7)", 7)]).unwrap();
        assert_eq!(s7.order(), 5040);
        let mut base = s7.base();
        base.sort_unstable();
        assert_eq!(base, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn order_matches_closure_on_samples() {
        let all: Vec<_> = all_permutations(5).collect();
        for (i, a) in all.iter().enumerate().step_by(7) {
            let b = &all[(i * 31 + 5) % all.len()];
            let g = group_from_generators(vec![a.clone(), b.clone()]).unwrap();
            assert_eq!(g.order() as usize, closure_size(&[a.clone(), b.clone()]));
            assert_eq!(120 % g.order(), 0);
            for e in g.elements(1000).unwrap() {
                assert!(g.contains(&e));
            }
        }
    }

    #[test]
    fn membership_rejects_outsiders() {
        let g = group_from_generators(vec![p("(1 2 3)", 4)]).unwrap();
        assert!(g.contains(&p("(1 3 2)", 4)));
        assert!(!g.contains(&p("(1 2)", 4)));
    }

    #[test]
    fn transitivity() {
        assert!(PermutationGroup::trivial(1).is_transitive());
        let (s, a) = tetra();
        assert!(group_from_generators(vec![s, a]).unwrap().is_transitive());
        let g = group_from_generators(vec![p("(1 2)", 3), Permutation::identity(3)]).unwrap();
        assert!(!g.is_transitive());
    }

    #[test]
    fn element_cap() {
        let s7 = group_from_generators(vec![p("(1 2)", 7), p("(1 2 3 4 5 6 7)", 7)]).unwrap();
        assert!(matches!(s7.elements(100), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn centralizers() {
        assert_eq!(centralizer_in_symmetric(&PermutationGroup::trivial(1)).unwrap().order(), 1);
        let (s, a) = tetra();
        let g = group_from_generators(vec![s, a]).unwrap();
        let c = centralizer_in_symmetric(&g).unwrap();
        assert_eq!(c.order(), 12);
        for e in c.elements(100).unwrap() {
            assert!(g.centralizes(&e));
        }
        // regular C2 x C2
        let v4 = group_from_generators(vec![p("(1 2)(3 4)", 4), p("(1 3)(2 4)", 4)]).unwrap();
        assert_eq!(centralizer_in_symmetric(&v4).unwrap().order(), 4);
        // trivial group on 3 points: all of S3
        assert_eq!(centralizer_in_symmetric(&PermutationGroup::trivial(3)).unwrap().order(), 6);
    }

    #[test]
    fn centralizer_matches_brute_force() {
        let all: Vec<_> = all_permutations(5).collect();
        for (i, a) in all.iter().enumerate().step_by(11) {
            let b = &all[(i * 17 + 3) % all.len()];
            let g = group_from_generators(vec![a.clone(), b.clone()]).unwrap();
            let brute = all.iter().filter(|c| g.centralizes(c)).count();
            assert_eq!(centralizer_in_symmetric(&g).unwrap().order() as usize, brute);
        }
    }

    #[test]
    fn conjugacy_witnesses() {
        let (s, a) = tetra();
        let w = simultaneous_conjugacy((&s, &a), (&s, &a)).unwrap().unwrap();
        assert_eq!(s.conjugate_by(&w), s);
        let x = p("(1 2)", 2);
        assert_eq!(
            simultaneous_conjugacy((&x, &x), (&x, &Permutation::identity(2))).unwrap(),
            None
        );
        let c = p("(2 3 4)", 12);
        let (s2, a2) = (s.conjugate_by(&c), a.conjugate_by(&c));
        let w = simultaneous_conjugacy((&s, &a), (&s2, &a2)).unwrap().unwrap();
        assert_eq!(s.conjugate_by(&w), s2);
        assert_eq!(a.conjugate_by(&w), a2);
    }

    #[test]
    fn conjugacy_matches_brute_force_disconnected() {
        let s = p("(1 2)(3 4)", 5);
        let a = p("(2 3)", 5);
        let all: Vec<_> = all_permutations(5).collect();
        for (i, c) in all.iter().enumerate().step_by(13) {
            let d = &all[(i * 7) % all.len()];
            let target = (s.conjugate_by(d), if i % 2 == 0 { a.conjugate_by(d) } else { a.conjugate_by(c) });
            let brute = all
                .iter()
                .any(|w| s.conjugate_by(w) == target.0 && a.conjugate_by(w) == target.1);
            let found = simultaneous_conjugacy((&s, &a), (&target.0, &target.1)).unwrap();
            assert_eq!(found.is_some(), brute);
            if let Some(w) = found {
                assert_eq!(s.conjugate_by(&w), target.0);
                assert_eq!(a.conjugate_by(&w), target.1);
            }
        }
    }
}
