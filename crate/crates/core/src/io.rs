//! Dessin JSON and the two-line text form.
//!
//! JSON: `{"n": 12, "sigma": [[1,2,3],...], "alpha": [[1,4],...]}` with
//! 1-based points; cycles of length one may be given but are never printed.
//! Text: `σ` on the first line and `α` on the second, in cycle notation.
//! When the last dart is fixed by both, the text form appends the singleton
//! cycle `(n)` to the first line so the degree survives a round trip.

use serde::{Deserialize, Serialize};

use crate::dessin::Dessin;
use crate::error::{Error, Result};
use crate::perm::{max_point, parse_cycle_list, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DessinJson {
    pub n: usize,
    pub sigma: Vec<Vec<usize>>,
    pub alpha: Vec<Vec<usize>>,
}

impl From<&Dessin> for DessinJson {
    fn from(d: &Dessin) -> Self {
        DessinJson {
            n: d.degree(),
            sigma: d.sigma().to_one_based_cycles(),
            alpha: d.alpha().to_one_based_cycles(),
        }
    }
}

impl TryFrom<DessinJson> for Dessin {
    type Error = Error;

    fn try_from(j: DessinJson) -> Result<Dessin> {
        if j.n == 0 {
            return Err(Error::Parse("dessin must have at least one dart".into()));
        }
        Dessin::new(
            Permutation::from_one_based_cycles(j.n, &j.sigma)?,
            Permutation::from_one_based_cycles(j.n, &j.alpha)?,
        )
    }
}

impl Serialize for Dessin {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DessinJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dessin {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DessinJson::deserialize(d)?;
        Dessin::try_from(j).map_err(serde::de::Error::custom)
    }
}

pub fn dessin_to_json(d: &Dessin) -> String {
    serde_json::to_string(d).expect("dessin serializes")
}

pub fn dessin_from_json(s: &str) -> Result<Dessin> {
    Ok(serde_json::from_str(s)?)
}

pub fn dessin_to_text(d: &Dessin) -> String {
    let n = d.degree();
    let mut first = d.sigma().to_cycle_string();
    let last = n - 1;
    if d.sigma().apply(last) == last && d.alpha().apply(last) == last {
        if first == "()" {
            first.clear();
        }
        first.push_str(&format!("({n})"));
    }
    format!("{first}\n{}\n", d.alpha().to_cycle_string())
}

pub fn dessin_from_text(s: &str) -> Result<Dessin> {
    let lines: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if lines.len() != 2 {
        return Err(Error::Parse(format!(
            "text form needs exactly two non-empty lines, got {}",
            lines.len()
        )));
    }
    let sc = parse_cycle_list(lines[0])?;
    let ac = parse_cycle_list(lines[1])?;
    let n = max_point(&sc).max(max_point(&ac)).max(1);
    Dessin::new(
        Permutation::from_one_based_cycles(n, &sc)?,
        Permutation::from_one_based_cycles(n, &ac)?,
    )
}

/// Reads a dessin from either format, guessing by the first character.
pub fn parse_dessin(s: &str) -> Result<Dessin> {
    if s.trim_start().starts_with('{') {
        dessin_from_json(s)
    } else {
        dessin_from_text(s)
    }
}
