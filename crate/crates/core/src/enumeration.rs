//! Connected dessins of a given degree up to isomorphism, regular dessins up
//! to order `n`, and an on-disk catalog cache.
//!
//! Every isomorphism class has a representative whose `σ` is the standard
//! permutation of its cycle type, so `σ` runs over one permutation per
//! partition of `n` and `α` over all of `S_n`. Transitive pairs are reduced
//! to canonical form and deduplicated.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dessin::{Dessin, Passport};
use crate::error::{Error, Result};
use crate::fgroup::FiniteGroupWithGenerators;
use crate::perm::{all_permutations, partitions, Permutation};
use crate::regularity::RegularDessin;

pub const DEFAULT_DEGREE_CAP: usize = 7;
pub const DEFAULT_REGULAR_CAP: usize = 8;

/// Environment variable naming the catalog cache directory.
pub const CACHE_ENV: &str = "DESSINS_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub algorithm: String,
    pub version: String,
}

impl Default for Provenance {
    fn default() -> Self {
        Provenance {
            algorithm: "cycle-type representatives x S_n, canonical-form dedupe".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DessinCatalog {
    pub degree: usize,
    pub entries: Vec<Dessin>,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct CatalogJson {
    degree: usize,
    entries: Vec<Dessin>,
    hash: String,
}

impl DessinCatalog {
    /// SHA-256 over the code version, the degree and the entry list.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.provenance.version.as_bytes());
        h.update(b"|");
        h.update(self.degree.to_string().as_bytes());
        h.update(b"|");
        h.update(serde_json::to_string(&self.entries).expect("entries serialize"));
        hex::encode(h.finalize())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CatalogJson {
            degree: self.degree,
            entries: self.entries.clone(),
            hash: self.content_hash(),
        })
        .expect("catalog serializes")
    }

    /// Parses and revalidates: the hash must match, and every entry must be
    /// a connected canonical form of the stated degree, in sorted order.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: CatalogJson = serde_json::from_str(s)?;
        let cat = DessinCatalog {
            degree: j.degree,
            entries: j.entries,
            provenance: Provenance::default(),
        };
        if cat.content_hash() != j.hash {
            return Err(Error::Parse("catalog hash mismatch".into()));
        }
        for w in cat.entries.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Parse("catalog entries not strictly sorted".into()));
            }
        }
        for e in &cat.entries {
            if e.degree() != cat.degree || !e.is_connected() || e.canonical_form()? != *e {
                return Err(Error::Parse("catalog entry is not canonical".into()));
            }
        }
        Ok(cat)
    }

    /// One JSON document per line, for streaming.
    pub fn entries_as_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("dessin serializes"));
            out.push('\n');
        }
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct RegularCatalog {
    pub max_order: usize,
    pub entries: Vec<RegularDessin>,
}

impl RegularCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_cap(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidPermutation("degree must be at least 1".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded {
            what,
            needed: n as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}

fn transitive(sigma: &Permutation, alpha: &Permutation) -> bool {
    let n = sigma.degree();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for y in [sigma.apply(x), alpha.apply(x)] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

/// Canonical forms of all transitive pairs in `S_n` accepted by `keep`.
fn canonical_classes<F>(n: usize, keep: F) -> Vec<Dessin>
where
    F: Fn(&Dessin) -> bool + Sync,
{
    let parts = partitions(n);
    let found: Vec<BTreeSet<Dessin>> = parts
        .par_iter()
        .map(|ct| {
            let sigma = ct.representative();
            let mut set = BTreeSet::new();
            for alpha in all_permutations(n) {
                if !transitive(&sigma, &alpha) {
                    continue;
                }
                let d = Dessin::new(sigma.clone(), alpha).expect("same degree");
                if keep(&d) {
                    set.insert(d.canonical_form().expect("transitive"));
                }
            }
            set
        })
        .collect();
    let mut all = BTreeSet::new();
    for s in found {
        all.extend(s);
    }
    all.into_iter().collect()
}

pub fn enumerate_dessins(n: usize) -> Result<DessinCatalog> {
    enumerate_dessins_with_cap(n, DEFAULT_DEGREE_CAP)
}

pub fn enumerate_dessins_with_cap(n: usize, cap: usize) -> Result<DessinCatalog> {
    check_cap(n, cap, "dessin enumeration degree")?;
    Ok(DessinCatalog {
        degree: n,
        entries: canonical_classes(n, |_| true),
        provenance: Provenance::default(),
    })
}

/// Whether `⟨σ, α⟩` has exactly `n` elements, stopping early once the
/// closure grows past `n`.
fn group_has_order(d: &Dessin, n: usize) -> bool {
    let mut seen = std::collections::HashSet::new();
    let id = Permutation::identity(n);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in [d.sigma(), d.alpha()] {
            let h = g.then(s);
            if seen.insert(h.clone()) {
                if seen.len() > n {
                    return false;
                }
                frontier.push(h);
            }
        }
    }
    seen.len() == n
}

/// Regular dessins of degree exactly `n`, as canonical forms.
pub fn regular_of_degree(n: usize) -> Vec<Dessin> {
    canonical_classes(n, |d| group_has_order(d, n))
}

pub fn enumerate_regular(max_order: usize) -> Result<RegularCatalog> {
    enumerate_regular_with_cap(max_order, DEFAULT_REGULAR_CAP)
}

pub fn enumerate_regular_with_cap(max_order: usize, cap: usize) -> Result<RegularCatalog> {
    check_cap(max_order, cap, "regular catalog order")?;
    let mut entries = Vec::new();
    for k in 1..=max_order {
        for d in regular_of_degree(k) {
            let (group, _) = FiniteGroupWithGenerators::from_closure(
                Permutation::identity(k),
                d.sigma().clone(),
                d.alpha().clone(),
                |a, b| a.then(b),
                k,
            )?;
            entries.push(RegularDessin::from_group(group));
        }
    }
    Ok(RegularCatalog { max_order, entries })
}

pub fn count_by_passport(catalog: &DessinCatalog) -> Result<BTreeMap<Passport, usize>> {
    let mut out = BTreeMap::new();
    for d in &catalog.entries {
        *out.entry(d.passport()?).or_insert(0) += 1;
    }
    Ok(out)
}

/// Cache root: `$DESSINS_CACHE`, else `$XDG_CACHE_HOME/dessins`, else
/// `$HOME/.cache/dessins`, else a directory under the system temp dir.
pub fn cache_dir() -> PathBuf {
    if let Some(p) = std::env::var_os(CACHE_ENV) {
        return PathBuf::from(p);
    }
    if let Some(p) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(p).join("dessins");
    }
    if let Some(p) = std::env::var_os("HOME") {
        return PathBuf::from(p).join(".cache").join("dessins");
    }
    std::env::temp_dir().join("dessins-cache")
}

fn cache_file(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("catalog-{n}.json"))
}

/// Loads the degree-`n` catalog from `dir` when a valid copy is there;
/// otherwise enumerates and writes it. A corrupt or stale file is replaced.
pub fn cached_enumerate(n: usize, cap: usize, dir: &Path) -> Result<DessinCatalog> {
    check_cap(n, cap, "dessin enumeration degree")?;
    let path = cache_file(dir, n);
    if let Ok(s) = std::fs::read_to_string(&path) {
        if let Ok(cat) = DessinCatalog::from_json(&s) {
            if cat.degree == n {
                return Ok(cat);
            }
        }
    }
    let cat = enumerate_dessins_with_cap(n, cap)?;
    std::fs::create_dir_all(dir)?;
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, cat.to_json())?;
    std::fs::rename(&tmp, &path)?;
    Ok(cat)
}
