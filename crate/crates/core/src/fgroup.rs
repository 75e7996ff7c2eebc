//! Explicit finite groups with a distinguished generating pair `(σ, α)`.
//!
//! Elements are indices `0..order`, with `0` the identity. Products use the
//! same left-to-right convention as permutations: `mul(a, b)` is "a then b".
//! Elements are numbered in breadth-first order from the identity under
//! right multiplication by `σ` then `α`, so every element carries a
//! shortest positive word in the generators.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};

/// Generator labels used in words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Sigma,
    Alpha,
    SigmaInv,
    AlphaInv,
}

impl Letter {
    pub fn symbol(self) -> &'static str {
        match self {
            Letter::Sigma => "s",
            Letter::Alpha => "a",
            Letter::SigmaInv => "S",
            Letter::AlphaInv => "A",
        }
    }
}

impl serde::Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// Renders a word as space-separated letters; the empty word is `1`.
pub fn word_to_string(word: &[Letter]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    word.iter().map(|l| l.symbol()).collect::<Vec<_>>().join(" ")
}

/// Parses a word over `s a S A` (also `σ α`); whitespace is ignored.
pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    for ch in s.chars() {
        match ch {
            's' | 'σ' => out.push(Letter::Sigma),
            'a' | 'α' => out.push(Letter::Alpha),
            'S' => out.push(Letter::SigmaInv),
            'A' => out.push(Letter::AlphaInv),
            '1' => {}
            c if c.is_whitespace() || c == '*' || c == '.' => {}
            c => return Err(Error::Parse(format!("unexpected letter {c:?} in word"))),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct FiniteGroupWithGenerators {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    sigma: usize,
    alpha: usize,
    /// For `x != 0`: `x = parent · gen` with gen 0 = σ, 1 = α.
    parent: Vec<(u32, u8)>,
    element_order: Vec<u32>,
    derived: Vec<usize>,
}

impl FiniteGroupWithGenerators {
    /// Builds the group generated by `sigma` and `alpha` inside some ambient
    /// structure given by `mul`, returning the group and the ambient label
    /// of each element index.
    pub fn from_closure<T, F>(
        identity: T,
        sigma: T,
        alpha: T,
        mul: F,
        cap: usize,
    ) -> Result<(Self, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut index: HashMap<T, u32> = HashMap::new();
        let mut labels = vec![identity.clone()];
        index.insert(identity, 0);
        let mut parent = vec![(0u32, 0u8)];
        let mut right: Vec<[u32; 2]> = Vec::new();
        let gens = [sigma, alpha];
        let mut i = 0;
        while i < labels.len() {
            let mut row = [0u32; 2];
            for (gi, g) in gens.iter().enumerate() {
                let y = mul(&labels[i], g);
                let idx = match index.get(&y) {
                    Some(&k) => k,
                    None => {
                        let k = labels.len() as u32;
                        if labels.len() >= cap {
                            return Err(Error::CapExceeded {
                                what: "group closure",
                                needed: cap as u128 + 1,
                                cap: cap as u128,
                            });
                        }
                        index.insert(y.clone(), k);
                        labels.push(y);
                        parent.push((i as u32, gi as u8));
                        k
                    }
                };
                row[gi] = idx;
            }
            right.push(row);
            i += 1;
        }
        let order = labels.len();
        let sigma_idx = right[0][0] as usize;
        let alpha_idx = right[0][1] as usize;

        // a·b = a·w(b), following b's breadth-first word
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            table[a * order] = a as u32;
        }
        for b in 1..order {
            let (p, g) = parent[b];
            for a in 0..order {
                let ap = table[a * order + p as usize] as usize;
                table[a * order + b] = right[ap][g as usize];
            }
        }
        let group = Self::from_table(order, table, sigma_idx, alpha_idx, parent)?;
        Ok((group, labels))
    }

    fn from_table(
        order: usize,
        table: Vec<u32>,
        sigma: usize,
        alpha: usize,
        parent: Vec<(u32, u8)>,
    ) -> Result<Self> {
        let mut inverse = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
            if inverse[a] == u32::MAX {
                return Err(Error::Internal("multiplication table has no inverse".into()));
            }
        }
        let mut g = FiniteGroupWithGenerators {
            order,
            table,
            inverse,
            sigma,
            alpha,
            parent,
            element_order: Vec::new(),
            derived: Vec::new(),
        };
        g.element_order = (0..order).map(|x| g.compute_element_order(x)).collect();
        g.derived = g.compute_derived();
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// `φ = (σα)⁻¹`.
    pub fn phi(&self) -> usize {
        self.inv(self.mul(self.sigma, self.alpha))
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let e = k.unsigned_abs() % self.element_order[a] as u64;
        let mut acc = 0;
        for _ in 0..e {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// `g⁻¹ a g`.
    pub fn conj(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), a), g)
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.element_order[a] as usize
    }

    fn compute_element_order(&self, a: usize) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        self.element_order
            .iter()
            .fold(1usize, |acc, &o| num_integer::lcm(acc, o as usize))
    }

    pub fn is_abelian(&self) -> bool {
        self.mul(self.sigma, self.alpha) == self.mul(self.alpha, self.sigma)
    }

    /// Shortest positive word in `σ, α` reaching `x`.
    pub fn word(&self, x: usize) -> Vec<Letter> {
        let mut out = Vec::new();
        let mut y = x;
        while y != 0 {
            let (p, g) = self.parent[y];
            out.push(if g == 0 { Letter::Sigma } else { Letter::Alpha });
            y = p as usize;
        }
        out.reverse();
        out
    }

    /// Evaluates a word in the letters `s a S A`.
    pub fn eval_word(&self, word: &[Letter]) -> usize {
        self.eval_word_with(word, self.sigma, self.alpha)
    }

    /// Evaluates a word with `σ` and `α` replaced by `s` and `a`.
    pub fn eval_word_with(&self, word: &[Letter], s: usize, a: usize) -> usize {
        word.iter().fold(0, |acc, l| {
            let g = match l {
                Letter::Sigma => s,
                Letter::Alpha => a,
                Letter::SigmaInv => self.inv(s),
                Letter::AlphaInv => self.inv(a),
            };
            self.mul(acc, g)
        })
    }

    /// Shortest words over `σ, α, σ⁻¹, α⁻¹` for every element, by
    /// breadth-first search. Ties are broken by letter order `s a S A`.
    pub fn shortest_words(&self) -> Vec<Vec<Letter>> {
        let letters = [
            (Letter::Sigma, self.sigma),
            (Letter::Alpha, self.alpha),
            (Letter::SigmaInv, self.inv(self.sigma)),
            (Letter::AlphaInv, self.inv(self.alpha)),
        ];
        let mut words: Vec<Option<Vec<Letter>>> = vec![None; self.order];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (l, g) in letters {
                let y = self.mul(x, g);
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(l);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        words.into_iter().map(|w| w.expect("group is generated")).collect()
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            for &g in gens {
                let y = self.mul(out[i], g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Size of the subgroup generated by `a` and `b`.
    pub fn generated_order(&self, a: usize, b: usize) -> usize {
        self.subgroup(&[a, b]).len()
    }

    pub fn generates(&self, a: usize, b: usize) -> bool {
        self.generated_order(a, b) == self.order
    }

    /// The commutator subgroup: normal closure of `[σ, α]`.
    fn compute_derived(&self) -> Vec<usize> {
        let c = self.commutator(self.sigma, self.alpha);
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut members = vec![0usize];
        let mut queue = VecDeque::from([0usize]);
        let add = |x: usize, seen: &mut Vec<bool>, members: &mut Vec<usize>, q: &mut VecDeque<usize>| {
            if !seen[x] {
                seen[x] = true;
                members.push(x);
                q.push_back(x);
            }
        };
        add(c, &mut seen, &mut members, &mut queue);
        while let Some(x) = queue.pop_front() {
            let candidates = [
                self.mul(x, c),
                self.conj(x, self.sigma),
                self.conj(x, self.alpha),
            ];
            for y in candidates {
                add(y, &mut seen, &mut members, &mut queue);
            }
        }
        members.sort_unstable();
        members
    }

    pub fn derived_subgroup(&self) -> &[usize] {
        &self.derived
    }

    pub fn is_conjugate(&self, a: usize, b: usize) -> bool {
        (0..self.order).any(|g| self.conj(a, g) == b)
    }

    /// Extends `σ ↦ img_sigma, α ↦ img_alpha` to a map on all elements and
    /// checks that it is a homomorphism. Returns `None` when it is not.
    pub fn extend_hom<T, F>(&self, img_sigma: T, img_alpha: T, identity: T, mul: F) -> Option<Vec<T>>
    where
        T: Clone + PartialEq,
        F: Fn(&T, &T) -> T,
    {
        let mut img: Vec<Option<T>> = vec![None; self.order];
        img[0] = Some(identity);
        for x in 1..self.order {
            let (p, g) = self.parent[x];
            let base = img[p as usize].clone().expect("parents precede children");
            let gi = if g == 0 { &img_sigma } else { &img_alpha };
            img[x] = Some(mul(&base, gi));
        }
        let img: Vec<T> = img.into_iter().map(Option::unwrap).collect();
        // consistency along every Cayley-graph edge makes the map a homomorphism
        for x in 0..self.order {
            if img[self.mul(x, self.sigma)] != mul(&img[x], &img_sigma)
                || img[self.mul(x, self.alpha)] != mul(&img[x], &img_alpha)
            {
                return None;
            }
        }
        Some(img)
    }

    /// Extends an assignment of generator images in this same group.
    pub fn extend_endo(&self, img_sigma: usize, img_alpha: usize) -> Option<Vec<usize>> {
        self.extend_hom(img_sigma, img_alpha, 0, |a, b| self.mul(*a, *b))
    }

    /// Spot-checks associativity on a deterministic sample of triples.
    pub fn check_associativity(&self, samples: usize) -> bool {
        let n = self.order;
        let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % n as u64) as usize
        };
        (0..samples).all(|_| {
            let (a, b, c) = (next(), next(), next());
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn s3() -> FiniteGroupWithGenerators {
        let s = Permutation::parse_cycles("(1 2)", 3).unwrap();
        let a = Permutation::parse_cycles("(2 3)", 3).unwrap();
        FiniteGroupWithGenerators::from_closure(Permutation::identity(3), s, a, |x, y| x.then(y), 100)
            .unwrap()
            .0
    }

    #[test]
    fn closure_of_s3() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.derived_subgroup().len(), 3);
        assert_eq!(g.exponent(), 6);
        assert!(g.check_associativity(500));
        for x in 0..6 {
            assert_eq!(g.mul(x, g.inv(x)), 0);
            assert_eq!(g.eval_word(&g.word(x)), x);
        }
    }

    #[test]
    fn shortest_words_evaluate() {
        let g = s3();
        for (x, w) in g.shortest_words().iter().enumerate() {
            assert_eq!(g.eval_word(w), x);
        }
        assert_eq!(word_to_string(&[]), "1");
        assert_eq!(parse_word("s a S").unwrap().len(), 3);
    }

    #[test]
    fn homomorphism_detection() {
        let g = s3();
        // swapping the two generating involutions is an automorphism
        assert!(g.extend_endo(g.alpha(), g.sigma()).is_some());
        // sending both generators to the same involution is a homomorphism onto C2
        assert!(g.extend_endo(g.sigma(), g.sigma()).is_some());
        // sending σ to a 3-cycle is not
        let three = g.mul(g.sigma(), g.alpha());
        assert!(g.extend_endo(three, g.alpha()).is_none());
    }

    #[test]
    fn closure_cap() {
        let s = Permutation::parse_cycles("(1 2)", 5).unwrap();
        let a = Permutation::parse_cycles("(1 2 3 4 5)", 5).unwrap();
        let r = FiniteGroupWithGenerators::from_closure(Permutation::identity(5), s, a, |x, y| x.then(y), 50);
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }
}
