//! The groups `H_n`, their automorphisms and outer automorphisms, the
//! elements `θ` and `δ`, the subgroup `GT(n)` and its action on dessins.
//!
//! `H_n` is realised as the subgroup of `G_1 × ⋯ × G_N` generated by the
//! diagonal `σ` and `α`, where `(G_i, x_i, y_i)` runs over all regular
//! dessins of order at most `n`. Automorphisms are stored by the images of
//! `σ` and `α`, and composed as functions: `(γ₁ ∘ γ₂)(x) = γ₁(γ₂(x))`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dessin::Dessin;
use crate::enumeration::{enumerate_regular_with_cap, DEFAULT_REGULAR_CAP};
use crate::error::{Error, Result};
use crate::fgroup::{parse_word, FiniteGroupWithGenerators, Letter};
use crate::perm::Permutation;
use crate::regularity::{coset_dessin, RegularDessin};

pub const DEFAULT_LEVEL_CAP: usize = 4;
/// Largest level accepted when the caller opts in.
pub const OVERRIDE_LEVEL_CAP: usize = 5;
pub const DEFAULT_CLOSURE_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug)]
pub struct HnOptions {
    pub level_cap: usize,
    pub closure_cap: usize,
}

impl Default for HnOptions {
    fn default() -> Self {
        HnOptions {
            level_cap: DEFAULT_LEVEL_CAP,
            closure_cap: DEFAULT_CLOSURE_CAP,
        }
    }
}

impl HnOptions {
    pub fn with_override() -> Self {
        HnOptions {
            level_cap: OVERRIDE_LEVEL_CAP,
            ..Self::default()
        }
    }
}

/// Size of the construction before it is attempted.
#[derive(Clone, Debug, Serialize)]
pub struct HnCost {
    pub level: usize,
    pub components: usize,
    /// `|U|` for `U = G_1 × ⋯ × G_N`, saturating.
    pub product_order: u128,
    /// Upper bound on ordered pairs to test once `|H_n|` is known.
    pub pair_bound: u128,
}

#[derive(Clone, Debug)]
pub struct HnGroup {
    level: usize,
    group: FiniteGroupWithGenerators,
    components: Vec<RegularDessin>,
    /// Coordinates of each element in the product of the components.
    tuples: Vec<Vec<u16>>,
}

impl HnGroup {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn group(&self) -> &FiniteGroupWithGenerators {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn components(&self) -> &[RegularDessin] {
        &self.components
    }

    pub fn coordinates(&self, x: usize) -> &[u16] {
        &self.tuples[x]
    }
}

pub fn estimate_hn_cost(n: usize) -> Result<HnCost> {
    let cat = enumerate_regular_with_cap(n, DEFAULT_REGULAR_CAP)?;
    let product_order = cat
        .entries
        .iter()
        .fold(1u128, |acc, r| acc.saturating_mul(r.order() as u128));
    Ok(HnCost {
        level: n,
        components: cat.len(),
        product_order,
        pair_bound: product_order.saturating_mul(product_order),
    })
}

pub fn build_hn(n: usize) -> Result<HnGroup> {
    build_hn_with(n, HnOptions::default())
}

pub fn build_hn_with(n: usize, opts: HnOptions) -> Result<HnGroup> {
    if n == 0 {
        return Err(Error::InvalidPermutation("level must be at least 1".into()));
    }
    if n > opts.level_cap {
        return Err(Error::CapExceeded {
            what: "H_n level",
            needed: n as u128,
            cap: opts.level_cap as u128,
        });
    }
    let cat = enumerate_regular_with_cap(n, n.max(DEFAULT_REGULAR_CAP))?;
    let components = cat.entries;
    let sigma: Vec<u16> = components.iter().map(|r| r.group().sigma() as u16).collect();
    let alpha: Vec<u16> = components.iter().map(|r| r.group().alpha() as u16).collect();
    let identity = vec![0u16; components.len()];
    let (group, tuples) = FiniteGroupWithGenerators::from_closure(
        identity,
        sigma,
        alpha,
        |a, b| {
            a.iter()
                .zip(b)
                .zip(&components)
                .map(|((&x, &y), r)| r.group().mul(x as usize, y as usize) as u16)
                .collect()
        },
        opts.closure_cap,
    )?;
    Ok(HnGroup {
        level: n,
        group,
        components,
        tuples,
    })
}

/// The homomorphism `H_n → G` with `σ ↦ x`, `α ↦ y` for a regular dessin
/// `(G, x, y)`, as a table of images.
pub fn universal_hom(hn: &HnGroup, target: &RegularDessin) -> Option<Vec<usize>> {
    let g = target.group();
    hn.group
        .extend_hom(g.sigma(), g.alpha(), 0, |a, b| g.mul(*a, *b))
}

/// An automorphism determined by the images of `σ` and `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupAutomorphism {
    pub sigma: usize,
    pub alpha: usize,
}

impl GroupAutomorphism {
    /// Checks that the assignment extends to a bijective endomorphism.
    pub fn new(g: &FiniteGroupWithGenerators, sigma: usize, alpha: usize) -> Result<Self> {
        if sigma >= g.order() || alpha >= g.order() {
            return Err(Error::NotInGroup(format!("element index {}", sigma.max(alpha))));
        }
        if !g.generates(sigma, alpha) {
            return Err(Error::NotAutomorphism("images do not generate".into()));
        }
        if g.extend_endo(sigma, alpha).is_none() {
            return Err(Error::NotAutomorphism("assignment is not a homomorphism".into()));
        }
        Ok(GroupAutomorphism { sigma, alpha })
    }

    pub fn identity(g: &FiniteGroupWithGenerators) -> Self {
        GroupAutomorphism {
            sigma: g.sigma(),
            alpha: g.alpha(),
        }
    }

    /// `x ↦ c⁻¹ x c`.
    pub fn inner(g: &FiniteGroupWithGenerators, c: usize) -> Self {
        GroupAutomorphism {
            sigma: g.conj(g.sigma(), c),
            alpha: g.conj(g.alpha(), c),
        }
    }

    pub fn full_map(&self, g: &FiniteGroupWithGenerators) -> Vec<usize> {
        g.extend_endo(self.sigma, self.alpha)
            .expect("validated automorphism")
    }

    pub fn apply(&self, g: &FiniteGroupWithGenerators, x: usize) -> usize {
        g.eval_word_with(&g.word(x), self.sigma, self.alpha)
    }

    /// `self ∘ other`.
    pub fn compose(&self, g: &FiniteGroupWithGenerators, other: &Self) -> Self {
        GroupAutomorphism {
            sigma: self.apply(g, other.sigma),
            alpha: self.apply(g, other.alpha),
        }
    }

    pub fn inverse(&self, g: &FiniteGroupWithGenerators) -> Self {
        let map = self.full_map(g);
        let mut inv = vec![0; g.order()];
        for (x, &y) in map.iter().enumerate() {
            inv[y] = x;
        }
        GroupAutomorphism {
            sigma: inv[g.sigma()],
            alpha: inv[g.alpha()],
        }
    }
}

/// `θ`: `σ ↦ α`, `α ↦ σ`.
pub fn theta(g: &FiniteGroupWithGenerators) -> GroupAutomorphism {
    GroupAutomorphism {
        sigma: g.alpha(),
        alpha: g.sigma(),
    }
}

/// `δ`: `σ ↦ σ⁻¹α⁻¹`, `α ↦ α`.
pub fn delta(g: &FiniteGroupWithGenerators) -> GroupAutomorphism {
    GroupAutomorphism {
        sigma: g.mul(g.inv(g.sigma()), g.inv(g.alpha())),
        alpha: g.alpha(),
    }
}

/// One automorphism per ordered generating pair. For `H_n` every such pair
/// extends to an automorphism; this is verified for each pair.
pub fn generating_pairs(g: &FiniteGroupWithGenerators) -> Result<Vec<GroupAutomorphism>> {
    let n = g.order();
    let rows: Vec<Result<Vec<GroupAutomorphism>>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut row = Vec::new();
            for b in 0..n {
                if g.generates(a, b) {
                    if g.extend_endo(a, b).is_none() {
                        return Err(Error::NotAutomorphism(format!(
                            "generating pair ({a}, {b}) does not extend"
                        )));
                    }
                    row.push(GroupAutomorphism { sigma: a, alpha: b });
                }
            }
            Ok(row)
        })
        .collect();
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

/// A class of automorphisms modulo inner ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OutClass {
    pub id: usize,
    /// Least member in `(σ-image, α-image)` order.
    pub representative: GroupAutomorphism,
}

/// `Out` of a group with a two-generator presentation: every generating
/// pair is assigned the index of its orbit under simultaneous conjugation.
#[derive(Clone, Debug)]
pub struct OuterAutomorphisms {
    order: usize,
    aut_count: usize,
    class_of: Vec<u32>,
    classes: Vec<OutClass>,
}

impl OuterAutomorphisms {
    pub fn classes(&self) -> &[OutClass] {
        &self.classes
    }

    pub fn aut_count(&self) -> usize {
        self.aut_count
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, a: &GroupAutomorphism) -> Option<usize> {
        match self.class_of[a.sigma * self.order + a.alpha] {
            u32::MAX => None,
            c => Some(c as usize),
        }
    }

    pub fn same_class(&self, a: &GroupAutomorphism, b: &GroupAutomorphism) -> bool {
        self.class_of(a).is_some() && self.class_of(a) == self.class_of(b)
    }
}

pub fn out_classes(g: &FiniteGroupWithGenerators) -> Result<OuterAutomorphisms> {
    let pairs = generating_pairs(g)?;
    let n = g.order();
    let mut class_of = vec![u32::MAX; n * n];
    for p in &pairs {
        class_of[p.sigma * n + p.alpha] = u32::MAX - 1;
    }
    let mut classes = Vec::new();
    for p in &pairs {
        if class_of[p.sigma * n + p.alpha] != u32::MAX - 1 {
            continue;
        }
        let id = classes.len() as u32;
        for c in 0..n {
            class_of[g.conj(p.sigma, c) * n + g.conj(p.alpha, c)] = id;
        }
        classes.push(OutClass {
            id: id as usize,
            representative: *p,
        });
    }
    Ok(OuterAutomorphisms {
        order: n,
        aut_count: pairs.len(),
        class_of,
        classes,
    })
}

/// An element of `GT(n)` with its GT0-shaped representative
/// `σ ↦ σ^k`, `α ↦ f⁻¹ α^k f`.
#[derive(Clone, Debug, Serialize)]
pub struct GTElement {
    pub out_class: OutClass,
    pub k: u64,
    pub f: usize,
    pub f_word: Vec<Letter>,
    pub representative: GroupAutomorphism,
    /// Every exponent `k` (up to the group exponent) with a GT0 witness in
    /// this class.
    pub witness_ks: Vec<u64>,
}

/// The GT0 automorphism for `(k, f)`, if the pair generates.
pub fn gt0_candidate(g: &FiniteGroupWithGenerators, k: u64, f: usize) -> Option<GroupAutomorphism> {
    let s = g.pow(g.sigma(), k as i64);
    let a = g.conj(g.pow(g.alpha(), k as i64), f);
    g.generates(s, a).then_some(GroupAutomorphism { sigma: s, alpha: a })
}

/// Keeps the classes with a GT0-shaped member that commute with `θ` and
/// `δ` in `Out`. Witnesses are searched with `k` ascending and `f` in
/// order of shortest-word length, then element index; the first one found
/// is stored.
pub fn gt_filter(g: &FiniteGroupWithGenerators, out: &OuterAutomorphisms) -> Vec<GTElement> {
    let words = g.shortest_words();
    let mut derived: Vec<usize> = g.derived_subgroup().to_vec();
    derived.sort_by_key(|&x| (words[x].len(), x));
    let exp = g.exponent() as u64;
    let ks: Vec<u64> = (1..=exp)
        .filter(|&k| num_integer::gcd(k, exp) == 1)
        .collect();

    let found: Vec<Vec<(usize, u64, usize, GroupAutomorphism)>> = ks
        .par_iter()
        .map(|&k| {
            let mut seen: HashMap<usize, (u64, usize, GroupAutomorphism)> = HashMap::new();
            for &f in &derived {
                if let Some(a) = gt0_candidate(g, k, f) {
                    if let Some(c) = out.class_of(&a) {
                        seen.entry(c).or_insert((k, f, a));
                    }
                }
            }
            let mut v: Vec<_> = seen.into_iter().map(|(c, (k, f, a))| (c, k, f, a)).collect();
            v.sort_unstable_by_key(|x| x.0);
            v
        })
        .collect();

    let th = theta(g);
    let de = delta(g);
    let mut first: Vec<Option<(u64, usize, GroupAutomorphism)>> = vec![None; out.len()];
    let mut all_ks: Vec<Vec<u64>> = vec![Vec::new(); out.len()];
    for per_k in found {
        for (c, k, f, a) in per_k {
            if first[c].is_none() {
                first[c] = Some((k, f, a));
            }
            all_ks[c].push(k);
        }
    }
    let mut result = Vec::new();
    for (c, w) in first.into_iter().enumerate() {
        let Some((k, f, rep)) = w else { continue };
        let gt1 = out.same_class(&rep.compose(g, &th), &th.compose(g, &rep));
        let gt2 = out.same_class(&rep.compose(g, &de), &de.compose(g, &rep));
        if gt1 && gt2 {
            result.push(GTElement {
                out_class: out.classes()[c],
                k,
                f,
                f_word: words[f].clone(),
                representative: rep,
                witness_ks: std::mem::take(&mut all_ks[c]),
            });
        }
    }
    result
}

/// `GT(n)` for a built `H_n`.
#[derive(Clone, Debug)]
pub struct GtGroup {
    pub level: usize,
    pub out: OuterAutomorphisms,
    pub elements: Vec<GTElement>,
}

impl GtGroup {
    pub fn compute(hn: &HnGroup) -> Result<Self> {
        let out = out_classes(hn.group())?;
        let elements = gt_filter(hn.group(), &out);
        Ok(GtGroup {
            level: hn.level(),
            out,
            elements,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The element whose class contains `a`.
    pub fn element_of(&self, a: &GroupAutomorphism) -> Option<&GTElement> {
        let c = self.out.class_of(a)?;
        self.elements.iter().find(|e| e.out_class.id == c)
    }
}

/// `k mod n`, checked against every other witness exponent in the class.
pub fn k_character(e: &GTElement, n: usize) -> Result<u64> {
    let n = n as u64;
    let r = e.k % n;
    if let Some(&bad) = e.witness_ks.iter().find(|&&k| k % n != r) {
        return Err(Error::Internal(format!(
            "k-character is not well defined: {} and {bad} differ mod {n}",
            e.k
        )));
    }
    Ok(r)
}

/// Parses `theta`, `delta`, `id`, or a pair of words `W1,W2` over
/// `s a S A` giving the images of `σ` and `α`.
pub fn parse_automorphism(g: &FiniteGroupWithGenerators, spec: &str) -> Result<GroupAutomorphism> {
    match spec.trim() {
        "theta" | "θ" => Ok(theta(g)),
        "delta" | "δ" => Ok(delta(g)),
        "id" | "identity" => Ok(GroupAutomorphism::identity(g)),
        other => {
            let (w1, w2) = other.split_once(',').ok_or_else(|| {
                Error::Parse(format!("expected theta, delta, id or WORD,WORD; got {other:?}"))
            })?;
            let s = g.eval_word(&parse_word(w1)?);
            let a = g.eval_word(&parse_word(w2)?);
            GroupAutomorphism::new(g, s, a)
        }
    }
}

/// The surjection `H_n → G_d` with `σ ↦ σ_d`, `α ↦ α_d`.
fn projection_to_dessin(hn: &HnGroup, d: &Dessin) -> Result<Vec<Permutation>> {
    d.require_connected()?;
    let order = d.cartographic_group().order();
    let level_error = Error::LevelTooSmall {
        order: order as usize,
        level: hn.level(),
    };
    if order > hn.level() as u128 {
        return Err(level_error);
    }
    let n = d.degree();
    hn.group()
        .extend_hom(
            d.sigma().clone(),
            d.alpha().clone(),
            Permutation::identity(n),
            |a, b| a.then(b),
        )
        .ok_or(level_error)
}

/// The dessin `γ` transforms `d` into: `H_n` acting on the right cosets of
/// `γ(K̄)`, where `K̄` is the preimage of the stabilizer of dart 0.
pub fn act_on_dessin(hn: &HnGroup, gamma: &GroupAutomorphism, d: &Dessin) -> Result<Dessin> {
    let g = hn.group();
    let p = projection_to_dessin(hn, d)?;
    let map = gamma.full_map(g);
    let image: Vec<usize> = (0..g.order())
        .filter(|&h| p[h].apply(0) == 0)
        .map(|h| map[h])
        .collect();
    Ok(coset_dessin(g, &image))
}

/// Same dessin computed as `(p(γ⁻¹σ), p(γ⁻¹α))` on the darts of `d`.
pub fn act_on_dessin_by_generators(
    hn: &HnGroup,
    gamma: &GroupAutomorphism,
    d: &Dessin,
) -> Result<Dessin> {
    let g = hn.group();
    let p = projection_to_dessin(hn, d)?;
    let inv = gamma.inverse(g);
    Dessin::new(p[inv.sigma].clone(), p[inv.alpha].clone())
}

/// The surjection `H_{n+1} → H_n` (or any higher level onto a lower one).
#[derive(Clone, Debug)]
pub struct TowerProjection {
    pub map: Vec<usize>,
    pub kernel_size: usize,
}

impl TowerProjection {
    /// The automorphism of the smaller group induced by one of the bigger.
    pub fn project(&self, a: &GroupAutomorphism) -> GroupAutomorphism {
        GroupAutomorphism {
            sigma: self.map[a.sigma],
            alpha: self.map[a.alpha],
        }
    }
}

pub fn tower_projection(big: &HnGroup, small: &HnGroup) -> Result<TowerProjection> {
    let s = small.group();
    let map = big
        .group()
        .extend_hom(s.sigma(), s.alpha(), 0, |a, b| s.mul(*a, *b))
        .ok_or_else(|| Error::NotAutomorphism("no homomorphism between levels".into()))?;
    let mut hit = vec![false; s.order()];
    for &y in &map {
        hit[y] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(Error::Internal("tower map is not surjective".into()));
    }
    let kernel_size = map.iter().filter(|&&y| y == 0).count();
    Ok(TowerProjection { map, kernel_size })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_levels() {
        assert_eq!(build_hn(1).unwrap().order(), 1);
        let h2 = build_hn(2).unwrap();
        assert_eq!(h2.order(), 4);
        assert_eq!(h2.group().exponent(), 2);
        assert!(h2.group().is_abelian());
        assert_eq!(build_hn(3).unwrap().order(), 36);
        assert!(build_hn(5).unwrap_err().is_resource_limit());
    }

    #[test]
    fn theta_and_delta() {
        let h = build_hn(3).unwrap();
        let g = h.group();
        let th = theta(g);
        assert_eq!(th.compose(g, &th), GroupAutomorphism::identity(g));
        let de = delta(g);
        let de2 = de.compose(g, &de);
        let conj_alpha = GroupAutomorphism::inner(g, g.inv(g.alpha()));
        assert_eq!(de2, conj_alpha);
        let h2 = build_hn(2).unwrap();
        let g2 = h2.group();
        let d2 = delta(g2);
        assert_eq!(d2.sigma, g2.mul(g2.sigma(), g2.alpha()));
        assert_eq!(d2.alpha, g2.alpha());
    }

    #[test]
    fn automorphism_counts() {
        let h1 = build_hn(1).unwrap();
        assert_eq!(out_classes(h1.group()).unwrap().len(), 1);
        let h2 = build_hn(2).unwrap();
        let o2 = out_classes(h2.group()).unwrap();
        assert_eq!((o2.aut_count(), o2.len()), (6, 6));
    }

    #[test]
    fn compose_and_inverse() {
        let h = build_hn(3).unwrap();
        let g = h.group();
        let de = delta(g);
        let inv = de.inverse(g);
        assert_eq!(de.compose(g, &inv), GroupAutomorphism::identity(g));
        assert_eq!(inv.compose(g, &de), GroupAutomorphism::identity(g));
        let map = de.full_map(g);
        for x in [0, 3, 17, 35] {
            assert_eq!(de.apply(g, x), map[x]);
        }
    }

    #[test]
    fn parse_specs() {
        let h = build_hn(2).unwrap();
        let g = h.group();
        assert_eq!(parse_automorphism(g, "theta").unwrap(), theta(g));
        assert_eq!(parse_automorphism(g, "a,s").unwrap(), theta(g));
        assert_eq!(parse_automorphism(g, "SA,a").unwrap(), delta(g));
        assert!(parse_automorphism(g, "s,s").is_err());
        assert!(parse_automorphism(g, "bogus").is_err());
    }

    #[test]
    fn gt_small_levels() {
        let h2 = build_hn(2).unwrap();
        let gt2 = GtGroup::compute(&h2).unwrap();
        assert_eq!(gt2.len(), 1);
        assert_eq!(gt2.elements[0].k, 1);
        let h3 = build_hn(3).unwrap();
        let gt3 = GtGroup::compute(&h3).unwrap();
        assert_eq!(gt3.out.len(), 288);
        assert_eq!(gt3.out.aut_count(), 288);
        let mut chars: Vec<u64> = gt3
            .elements
            .iter()
            .map(|e| k_character(e, 3).unwrap())
            .collect();
        chars.sort_unstable();
        assert_eq!(chars, vec![1, 2]);
        let inversion = gt3.elements.iter().find(|e| e.k != 1).unwrap();
        assert_eq!(inversion.k % 6, 5);
    }

    #[test]
    fn tower_kernel() {
        let h1 = build_hn(1).unwrap();
        let h2 = build_hn(2).unwrap();
        let h3 = build_hn(3).unwrap();
        assert_eq!(tower_projection(&h2, &h1).unwrap().kernel_size, 4);
        let t = tower_projection(&h3, &h2).unwrap();
        assert_eq!(t.kernel_size, 9);
        assert_eq!(t.project(&theta(h3.group())), theta(h2.group()));
        assert_eq!(t.project(&delta(h3.group())), delta(h2.group()));
    }

    #[test]
    fn delta_and_theta_act_as_dual_and_swap() {
        let h = build_hn(3).unwrap();
        let g = h.group();
        let d = Dessin::new(
            Permutation::parse_cycles("(1 2)", 2).unwrap(),
            Permutation::identity(2),
        )
        .unwrap();
        let by_delta = act_on_dessin(&h, &delta(g), &d).unwrap();
        assert!(by_delta.is_isomorphic(&d.dual()).is_some());
        let by_theta = act_on_dessin(&h, &theta(g), &d).unwrap();
        assert!(by_theta.is_isomorphic(&d.swap_colors()).is_some());
        assert_eq!(
            act_on_dessin_by_generators(&h, &theta(g), &d).unwrap(),
            d.swap_colors()
        );
        let big = Dessin::new(
            Permutation::parse_cycles("(1 2)", 3).unwrap(),
            Permutation::parse_cycles("(2 3)", 3).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            act_on_dessin(&h, &theta(g), &big),
            Err(Error::LevelTooSmall { order: 6, level: 3 })
        ));
    }
}
