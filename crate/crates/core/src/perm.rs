//! Permutations of `{0..n-1}` acting on the right.
//!
//! Composition follows the right-action convention: `p.then(q)` is the
//! permutation `x ↦ q(p(x))`, written `pq`, so that `x^(pq) = (x^p)^q`.
//! Points are 0-based internally. Cycle notation in and out is 1-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{0..n-1}` stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from its image table, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidPermutation("degree must be at least 1".into()));
        }
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {x} out of range for degree {n}"
                )));
            }
            if seen[x] {
                return Err(Error::InvalidPermutation(format!("image {x} repeated")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Unchecked constructor for internal hot paths.
    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation of degree `n` from 0-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPermutation("degree must be at least 1".into()));
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for &x in cycle {
                if x >= n {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} out of range for degree {n}",
                        x + 1
                    )));
                }
                if used[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} appears twice",
                        x + 1
                    )));
                }
                used[x] = true;
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// The transposition swapping `i` and `j` (`i != j`) in degree `n`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Permutation { images }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `x^p`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` followed by `q`. Panics on degree mismatch; see [`compose`]
    /// for the checked version.
    pub fn then(&self, q: &Permutation) -> Permutation {
        assert_eq!(self.degree(), q.degree(), "degree mismatch in composition");
        Permutation {
            images: self.images.iter().map(|&x| q.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// `c⁻¹ · self · c`: relabels every point `x` as `x^c`.
    pub fn conjugate_by(&self, c: &Permutation) -> Permutation {
        assert_eq!(self.degree(), c.degree(), "degree mismatch in conjugation");
        let mut images = vec![0; self.degree()];
        for x in 0..self.degree() {
            images[c.images[x]] = c.images[self.images[x]];
        }
        Permutation { images }
    }

    /// Disjoint cycles including fixed points, each starting at its least
    /// element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::new(self.cycles().iter().map(Vec::len).collect())
    }

    /// Order of the permutation as a group element.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&x| self.images[x] == x).collect()
    }

    /// 1-based cycle notation, fixed points omitted, `()` for the identity.
    pub fn to_cycle_string(&self) -> String {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            s.push_str(&pts.join(" "));
            s.push(')');
        }
        s
    }

    /// 1-based cycles with fixed points omitted; the JSON shape.
    pub fn to_one_based_cycles(&self) -> Vec<Vec<usize>> {
        self.cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.into_iter().map(|x| x + 1).collect())
            .collect()
    }

    /// Builds from 1-based cycles (fixed points optional).
    pub fn from_one_based_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut zero = Vec::with_capacity(cycles.len());
        for c in cycles {
            let mut z = Vec::with_capacity(c.len());
            for &x in c {
                if x == 0 {
                    return Err(Error::Parse("points are 1-based; got 0".into()));
                }
                z.push(x - 1);
            }
            zero.push(z);
        }
        Permutation::from_cycles(n, &zero)
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4, 5)` in degree `n`.
    /// Whitespace or commas separate points; `()` is the identity.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self> {
        let cycles = parse_cycle_list(s)?;
        Permutation::from_one_based_cycles(n, &cycles)
    }
}

/// Parses `(a b c)(d e)` into 1-based cycles without fixing a degree.
pub fn parse_cycle_list(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(Error::Parse(format!("expected '(' in {s:?}")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
        let body = &rest[1..close];
        let mut cycle = Vec::new();
        for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let x: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad point {tok:?}")))?;
            cycle.push(x);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = rest[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// Largest point mentioned in 1-based cycles.
pub fn max_point(cycles: &[Vec<usize>]) -> usize {
    cycles.iter().flatten().copied().max().unwrap_or(0)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[n={}]", self.to_cycle_string(), self.degree())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses cycle notation; the degree is the largest point mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let cycles = parse_cycle_list(s)?;
        let n = max_point(&cycles).max(1);
        Permutation::from_one_based_cycles(n, &cycles)
    }
}

/// Checked composition: the permutation `x ↦ q(p(x))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    Ok(p.then(q))
}

/// Multiset of cycle lengths, sorted in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut lengths: Vec<usize>) -> Self {
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(lengths)
    }

    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn count(&self) -> usize {
        self.0.len()
    }

    /// `(length, multiplicity)` pairs, longest first.
    pub fn grouped(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &l in &self.0 {
            match out.last_mut() {
                Some((len, m)) if *len == l => *m += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    /// A permutation with this cycle type: consecutive points per cycle.
    pub fn representative(&self) -> Permutation {
        let n = self.sum();
        let mut images = vec![0; n];
        let mut start = 0;
        for &l in &self.0 {
            for i in 0..l {
                images[start + i] = start + (i + 1) % l;
            }
            start += l;
        }
        Permutation { images }
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All partitions of `n` in descending order of parts, lexicographically
/// descending.
pub fn partitions(n: usize) -> Vec<CycleType> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<CycleType>) {
        if rest == 0 {
            out.push(CycleType(cur.clone()));
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every permutation of degree `n` in lexicographic order of image tables.
pub fn all_permutations(n: usize) -> AllPermutations {
    AllPermutations {
        next: Some((0..n).collect()),
    }
}

pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        // next lexicographic permutation
        let n = succ.len();
        if n > 1 {
            let mut i = n - 1;
            while i > 0 && succ[i - 1] >= succ[i] {
                i -= 1;
            }
            if i > 0 {
                let mut j = n - 1;
                while succ[j] <= succ[i - 1] {
                    j -= 1;
                }
                succ.swap(i - 1, j);
                succ[i..].reverse();
                self.next = Some(succ);
            }
        }
        Some(Permutation { images: cur })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn compose_right_action() {
        // x ↦ (x^p)^q with p=(1 2), q=(1 2 3): 1→2→3, 2→1→2, 3→3→1
        let r = compose(&p("(1 2)", 3), &p("(1 2 3)", 3)).unwrap();
        assert_eq!(r, p("(1 3)", 3));
        let id = Permutation::identity(3);
        assert_eq!(compose(&id, &p("(1 2 3)", 3)).unwrap(), p("(1 2 3)", 3));
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let e = compose(&Permutation::identity(2), &Permutation::identity(3));
        assert_eq!(e, Err(Error::DegreeMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn inverse_cancels() {
        let s = p("(1 2 3)(4 5 6)(7 8 9)(10 11 12)", 12);
        assert!(s.then(&s.inverse()).is_identity());
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Permutation::identity(4).cycle_type().lengths(), &[1, 1, 1, 1]);
        let s = p("(1 2 3)(4 5 6)(7 8 9)(10 11 12)", 12);
        assert_eq!(s.cycle_type().lengths(), &[3, 3, 3, 3]);
        let q = Permutation::from_cycles(5, &[vec![0, 1], vec![2, 3, 4]]).unwrap();
        assert_eq!(q.cycle_type().lengths(), &[3, 2]);
    }

    #[test]
    fn cycle_notation_round_trip() {
        let s = p("(4, 10, 7)(1 2 3)", 12);
        assert_eq!(s.to_string(), "(1 2 3)(4 10 7)");
        assert_eq!(Permutation::parse_cycles(&s.to_string(), 12).unwrap(), s);
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert_eq!(Permutation::parse_cycles("()", 3).unwrap(), Permutation::identity(3));
        assert_eq!(p("(1)(2 3)", 3), p("(2 3)", 3));
    }

    #[test]
    fn parse_errors() {
        assert!(Permutation::parse_cycles("(1 2", 3).is_err());
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(Permutation::parse_cycles("(0 1)", 3).is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn conjugation_relabels() {
        let s = p("(1 2 3)", 4);
        let c = p("(1 4)", 4);
        // c⁻¹ s c relabels 1 as 4
        assert_eq!(s.conjugate_by(&c), p("(4 2 3)", 4));
        assert_eq!(s.conjugate_by(&c), c.inverse().then(&s).then(&c));
    }

    #[test]
    fn permutations_are_exhaustive() {
        assert_eq!(all_permutations(4).count(), 24);
        assert_eq!(all_permutations(1).count(), 1);
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(7).len(), 15);
    }

    #[test]
    fn group_axioms_exhaustive_degree_4() {
        let all: Vec<_> = all_permutations(4).collect();
        let id = Permutation::identity(4);
        for a in &all {
            assert_eq!(id.then(a), *a);
            assert_eq!(a.then(&id), *a);
            assert!(a.then(&a.inverse()).is_identity());
            assert_eq!(a.pow(a.order() as i64), id);
            assert_eq!(a.pow(-1), a.inverse());
        }
        for a in all.iter().step_by(3) {
            for b in all.iter().step_by(2) {
                for c in &all {
                    assert_eq!(a.then(b).then(c), a.then(&b.then(c)));
                }
            }
        }
    }
}
