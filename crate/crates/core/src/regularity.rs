//! Automorphisms, regular dessins, distinguished triples, regular closures
//! and quotient dessins.
//!
//! Automorphisms are dart permutations commuting with `σ` and `α`. They are
//! composed as functions: `ι(gh) = ι(g) ∘ ι(h)`, which in the right-action
//! notation of [`Permutation::then`] reads `ι(h).then(ι(g))`.

use std::collections::VecDeque;

use crate::dessin::Dessin;
use crate::error::{Error, Result};
use crate::fgroup::FiniteGroupWithGenerators;
use crate::perm::Permutation;
use crate::permgroup::{self, PermutationGroup};

/// Largest group for which an explicit multiplication table is built.
pub const DEFAULT_TABLE_CAP: usize = 5040;

/// A finite group with a generating pair, together with the dessin given by
/// right translation of `σ` and `α` on the group elements.
#[derive(Clone, Debug)]
pub struct RegularDessin {
    group: FiniteGroupWithGenerators,
    dessin: Dessin,
}

impl RegularDessin {
    pub fn from_group(group: FiniteGroupWithGenerators) -> Self {
        let n = group.order();
        let sigma = (0..n).map(|x| group.mul(x, group.sigma())).collect();
        let alpha = (0..n).map(|x| group.mul(x, group.alpha())).collect();
        let dessin = Dessin::new(
            Permutation::from_images_unchecked(sigma),
            Permutation::from_images_unchecked(alpha),
        )
        .expect("equal degrees");
        RegularDessin { group, dessin }
    }

    pub fn group(&self) -> &FiniteGroupWithGenerators {
        &self.group
    }

    pub fn dessin(&self) -> &Dessin {
        &self.dessin
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

pub fn automorphism_group(d: &Dessin) -> Result<PermutationGroup> {
    d.require_connected()?;
    permgroup::centralizer_in_symmetric(&d.cartographic_group())
}

/// True when the cartographic group has order `n`. The automorphism count
/// and the freeness of the action are computed as well and must agree.
pub fn is_regular(d: &Dessin) -> Result<bool> {
    d.require_connected()?;
    let n = d.degree();
    let g = d.cartographic_group();
    let by_order = g.order() == n as u128;
    let aut = automorphism_group(d)?;
    let by_aut = aut.order() == n as u128;
    if by_order != by_aut {
        return Err(Error::Internal(format!(
            "|G| = {} and |Aut| = {} disagree on regularity at degree {n}",
            g.order(),
            aut.order()
        )));
    }
    if by_order {
        // a transitive group of order n acts freely; spot-check the
        // stabilizer of dart 0 through the generators
        let free = g
            .elements(n)
            .map(|els| els.iter().all(|e| e.is_identity() || e.apply(0) != 0))
            .unwrap_or(false);
        if !free {
            return Err(Error::Internal("regular group does not act freely".into()));
        }
    }
    Ok(by_order)
}

/// The isomorphism `g ↦ ι(g)` from the cartographic group of a regular
/// dessin onto its automorphism group, for a fixed base dart.
#[derive(Clone, Debug)]
pub struct Iota {
    dessin: Dessin,
    group: PermutationGroup,
    base: usize,
    /// Darts in breadth-first order from the base, with the generator word
    /// reaching each one encoded as `(parent, generator)`.
    tree: Vec<(usize, usize, u8)>,
}

impl Iota {
    /// The automorphism sending the base dart to `base^g`.
    pub fn apply(&self, g: &Permutation) -> Result<Permutation> {
        let n = self.dessin.degree();
        if g.degree() != n {
            return Err(Error::DegreeMismatch {
                left: n,
                right: g.degree(),
            });
        }
        if !self.group.contains(g) {
            return Err(Error::NotInGroup(g.to_cycle_string()));
        }
        let gens = [self.dessin.sigma(), self.dessin.alpha()];
        let mut images = vec![usize::MAX; n];
        images[self.base] = g.apply(self.base);
        for &(x, parent, gen) in &self.tree {
            images[x] = gens[gen as usize].apply(images[parent]);
        }
        let a = Permutation::from_images(images)?;
        debug_assert!(gens.iter().all(|p| a.then(p) == p.then(&a)));
        Ok(a)
    }

    pub fn base(&self) -> usize {
        self.base
    }
}

pub fn iota(d: &Dessin, base_dart: usize) -> Result<Iota> {
    if base_dart >= d.degree() {
        return Err(Error::InvalidPermutation(format!(
            "dart {} out of range",
            base_dart + 1
        )));
    }
    if !is_regular(d)? {
        return Err(Error::NotRegular);
    }
    let gens = [d.sigma(), d.alpha()];
    let mut seen = vec![false; d.degree()];
    seen[base_dart] = true;
    let mut tree = Vec::with_capacity(d.degree());
    let mut queue = VecDeque::from([base_dart]);
    while let Some(x) = queue.pop_front() {
        for (gi, g) in gens.iter().enumerate() {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                tree.push((y, x, gi as u8));
                queue.push_back(y);
            }
        }
    }
    Ok(Iota {
        dessin: d.clone(),
        group: d.cartographic_group(),
        base: base_dart,
        tree,
    })
}

/// `(ι(σ), ι(α), ι(φ))` at a base dart. Their product, taken as function
/// composition `ι(σ) ∘ ι(α) ∘ ι(φ)`, is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishedTriple {
    pub base_dart: usize,
    pub sigma_t: Permutation,
    pub alpha_t: Permutation,
    pub phi_t: Permutation,
}

impl DistinguishedTriple {
    /// `ι(σ) ∘ ι(α) ∘ ι(φ)`.
    pub fn product(&self) -> Permutation {
        self.phi_t.then(&self.alpha_t).then(&self.sigma_t)
    }
}

pub fn distinguished_triple(d: &Dessin, base_dart: usize) -> Result<DistinguishedTriple> {
    let io = iota(d, base_dart)?;
    let t = DistinguishedTriple {
        base_dart,
        sigma_t: io.apply(d.sigma())?,
        alpha_t: io.apply(d.alpha())?,
        phi_t: io.apply(&d.phi())?,
    };
    if !t.product().is_identity() {
        return Err(Error::Internal("distinguished triple product is not 1".into()));
    }
    Ok(t)
}

/// The regular closure of a connected dessin with its covering map.
#[derive(Clone, Debug)]
pub struct RegularClosure {
    pub regular: RegularDessin,
    /// `covering[g]` is `base^g`, the dart of the original dessin under
    /// closure dart `g`.
    pub covering: Vec<usize>,
    pub base_dart: usize,
}

impl RegularClosure {
    /// Group elements fixing the base dart.
    pub fn base_stabilizer(&self) -> Vec<usize> {
        (0..self.covering.len())
            .filter(|&g| self.covering[g] == self.base_dart)
            .collect()
    }
}

pub fn regular_closure(d: &Dessin) -> Result<RegularClosure> {
    regular_closure_with_cap(d, DEFAULT_TABLE_CAP)
}

pub fn regular_closure_with_cap(d: &Dessin, cap: usize) -> Result<RegularClosure> {
    d.require_connected()?;
    let order = d.cartographic_group().order();
    if order > cap as u128 {
        return Err(Error::CapExceeded {
            what: "regular closure",
            needed: order,
            cap: cap as u128,
        });
    }
    let n = d.degree();
    let (group, labels) = FiniteGroupWithGenerators::from_closure(
        Permutation::identity(n),
        d.sigma().clone(),
        d.alpha().clone(),
        |a, b| a.then(b),
        cap,
    )?;
    let base_dart = 0;
    let covering = labels.iter().map(|g| g.apply(base_dart)).collect();
    Ok(RegularClosure {
        regular: RegularDessin::from_group(group),
        covering,
        base_dart,
    })
}

/// The dessin of right cosets `Hg`, with `σ` and `α` acting by right
/// multiplication. The coset `H` is dart 0; the rest are numbered in
/// breadth-first order.
pub fn quotient(r: &RegularDessin, subgroup_generators: &[usize]) -> Result<Dessin> {
    let g = r.group();
    if let Some(&bad) = subgroup_generators.iter().find(|&&x| x >= g.order()) {
        return Err(Error::NotInGroup(format!("element index {bad}")));
    }
    Ok(coset_dessin(g, &g.subgroup(subgroup_generators)))
}

/// The action of `σ` and `α` by right multiplication on the right cosets
/// of the subgroup whose elements are `h`.
pub fn coset_dessin(g: &FiniteGroupWithGenerators, h: &[usize]) -> Dessin {
    let mut coset_of = vec![usize::MAX; g.order()];
    for &x in h {
        coset_of[x] = 0;
    }
    let mut reps = vec![0usize];
    let mut images = [Vec::new(), Vec::new()];
    let mut i = 0;
    while i < reps.len() {
        for (k, gen) in [g.sigma(), g.alpha()].into_iter().enumerate() {
            let y = g.mul(reps[i], gen);
            if coset_of[y] == usize::MAX {
                let id = reps.len();
                for &x in h {
                    coset_of[g.mul(x, y)] = id;
                }
                reps.push(y);
            }
            images[k].push(coset_of[y]);
        }
        i += 1;
    }
    let [sigma, alpha] = images;
    Dessin::new(
        Permutation::from_images(sigma).expect("coset action is a bijection"),
        Permutation::from_images(alpha).expect("coset action is a bijection"),
    )
    .expect("equal degrees")
}
