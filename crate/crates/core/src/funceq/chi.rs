//! Tables of Euler characteristics `chi(P1, P2)` along one slope ray.
//!
//! A table is bound to a primitive direction `(a, b)` and a bipartite shape
//! `(l1, l2)`; its keys are dimension vectors whose sink entries sum to `ka`
//! and source entries to `kb` for the level `k >= 1`. Every entry carries a
//! provenance tag: computed by the Harder-Narasimhan recursion, extracted
//! from a factorized wall function, or supplied as a fixture. Inserting a
//! conflicting value for an existing key is an error, never an overwrite, so
//! independently computed pipelines can be merged and any disagreement
//! surfaces immediately.

use super::FunceqError;
use crate::hn;
use crate::quiver::{BipartiteQuiver, DimVector, StabilitySpec};
use crate::quiver::vectors_with_sum;
use num::BigInt;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Computed from the Harder-Narasimhan recursion (coprime vectors only).
    DirectHn,
    /// Extracted from a factorized wall function by the triangular solve.
    Extracted,
    /// Supplied externally (hand-computed or frozen reference value).
    Fixture,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::DirectHn => "direct-HN",
            Provenance::Extracted => "extracted",
            Provenance::Fixture => "fixture",
        };
        write!(f, "{s}")
    }
}

/// Euler characteristics along the ray of a primitive direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiTable {
    l1: usize,
    l2: usize,
    a: u32,
    b: u32,
    entries: BTreeMap<DimVector, (BigInt, Provenance)>,
}

impl ChiTable {
    pub fn new(l1: usize, l2: usize, a: u32, b: u32) -> Self {
        assert!(
            (a > 0 || b > 0) && num::integer::gcd(a, b) == 1,
            "slope direction must be primitive"
        );
        ChiTable {
            l1,
            l2,
            a,
            b,
            entries: BTreeMap::new(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.l1, self.l2)
    }

    pub fn direction(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    /// Level `k` of a vector on this table's ray, or an error if the vector
    /// is off the ray or has the wrong arity.
    pub fn level(&self, d: &DimVector) -> Result<u32, FunceqError> {
        let off = || FunceqError::OffRay(d.to_string(), self.a, self.b);
        if d.sinks.len() != self.l1 || d.sources.len() != self.l2 {
            return Err(off());
        }
        let (p, q) = (d.sink_total(), d.source_total());
        let k = if self.a > 0 {
            if p % self.a != 0 {
                return Err(off());
            }
            p / self.a
        } else {
            q / self.b
        };
        if k >= 1 && p == k * self.a && q == k * self.b {
            Ok(k)
        } else {
            Err(off())
        }
    }

    /// Insert an entry; re-inserting an equal value is a no-op, a different
    /// value is an error.
    pub fn set(
        &mut self,
        d: DimVector,
        chi: BigInt,
        provenance: Provenance,
    ) -> Result<(), FunceqError> {
        self.level(&d)?;
        if let Some((existing, _)) = self.entries.get(&d) {
            if *existing != chi {
                return Err(FunceqError::ConflictingChi(
                    d.to_string(),
                    existing.to_string(),
                    chi.to_string(),
                ));
            }
            return Ok(());
        }
        self.entries.insert(d, (chi, provenance));
        Ok(())
    }

    pub fn get(&self, d: &DimVector) -> Option<&BigInt> {
        self.entries.get(d).map(|(chi, _)| chi)
    }

    pub fn provenance(&self, d: &DimVector) -> Option<Provenance> {
        self.entries.get(d).map(|(_, p)| *p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DimVector, &BigInt, Provenance)> + '_ {
        self.entries.iter().map(|(d, (chi, p))| (d, chi, *p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All vectors on the ray at one level, in lexicographic order.
    pub fn ray_vectors(&self, k: u32) -> Vec<DimVector> {
        let mut out = Vec::new();
        for p1 in vectors_with_sum(self.l1, k * self.a) {
            for p2 in vectors_with_sum(self.l2, k * self.b) {
                out.push(DimVector::new(p1.clone(), p2));
            }
        }
        out
    }

    /// First vector missing from the table among levels `1..=max_level`.
    pub fn first_missing(&self, max_level: u32) -> Option<DimVector> {
        for k in 1..=max_level {
            for d in self.ray_vectors(k) {
                if !self.entries.contains_key(&d) {
                    return Some(d);
                }
            }
        }
        None
    }

    /// The aggregated level sum `sum_{|P1| = ka, |P2| = kb} chi(P1, P2)`;
    /// requires the level to be fully populated.
    pub fn aggregated(&self, k: u32) -> Result<BigInt, FunceqError> {
        let mut total = BigInt::from(0);
        for d in self.ray_vectors(k) {
            let chi = self
                .get(&d)
                .ok_or_else(|| FunceqError::MissingChi(d.to_string(), k))?;
            total += chi;
        }
        Ok(total)
    }

    /// Populate every coprime vector on the ray up to `max_level` from the
    /// Harder-Narasimhan recursion. Non-coprime vectors are left absent;
    /// their values must come from extraction or fixtures.
    pub fn fill_from_recursion(
        &mut self,
        quiver: &BipartiteQuiver,
        stab: &StabilitySpec,
        max_level: u32,
    ) -> Result<(), FunceqError> {
        assert_eq!(quiver.num_sinks(), self.l1);
        assert_eq!(quiver.num_sources(), self.l2);
        for k in 1..=max_level {
            for d in self.ray_vectors(k) {
                if self.entries.contains_key(&d) || !stab.is_coprime(&d) {
                    continue;
                }
                let chi = hn::euler_stable(quiver, stab, &d)?;
                self.set(d, chi, Provenance::DirectHn)?;
            }
        }
        Ok(())
    }

    /// Check invariance under permuting sinks and permuting sources: every
    /// entry must agree with the entry at the sorted representative, when
    /// both are present. Returns the first violating pair.
    pub fn symmetry_violation(&self) -> Option<(DimVector, DimVector)> {
        for (d, (chi, _)) in &self.entries {
            let mut sinks = d.sinks.clone();
            let mut sources = d.sources.clone();
            sinks.sort_unstable_by(|x, y| y.cmp(x));
            sources.sort_unstable_by(|x, y| y.cmp(x));
            let rep = DimVector::new(sinks, sources);
            if let Some((chi_rep, _)) = self.entries.get(&rep) {
                if chi_rep != chi {
                    return Some((d.clone(), rep));
                }
            }
        }
        None
    }

    /// Serialize as an array of `{"p1": [...], "p2": [...], "chi": "...",
    /// "provenance": "..."}` objects in key order, wrapped with the shape and
    /// slope.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(d, (chi, p))| {
                json!({
                    "p1": d.sinks,
                    "p2": d.sources,
                    "chi": chi.to_string(),
                    "provenance": p.to_string(),
                })
            })
            .collect();
        json!({
            "l1": self.l1,
            "l2": self.l2,
            "a": self.a,
            "b": self.b,
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, FunceqError> {
        let bad = |m: &str| FunceqError::BadJson(m.to_string());
        let top = v.as_object().ok_or_else(|| bad("expected object"))?;
        let get_usize = |k: &str| {
            top.get(k)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| bad(&format!("missing {k:?}")))
        };
        let l1 = get_usize("l1")?;
        let l2 = get_usize("l2")?;
        let a = get_usize("a")? as u32;
        let b = get_usize("b")? as u32;
        let mut table = ChiTable::new(l1, l2, a, b);
        let entries = top
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"entries\""))?;
        for e in entries {
            let eo = e.as_object().ok_or_else(|| bad("entry not an object"))?;
            let side = |k: &str| -> Result<Vec<u32>, FunceqError> {
                eo.get(k)
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad(&format!("entry missing {k:?}")))?
                    .iter()
                    .map(|x| x.as_u64().map(|v| v as u32).ok_or_else(|| bad("bad entry")))
                    .collect()
            };
            let d = DimVector::new(side("p1")?, side("p2")?);
            let chi: BigInt = eo
                .get("chi")
                .and_then(Value::as_str)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("entry missing integer \"chi\""))?;
            let provenance = match eo.get("provenance").and_then(Value::as_str) {
                Some("direct-HN") => Provenance::DirectHn,
                Some("extracted") => Provenance::Extracted,
                Some("fixture") => Provenance::Fixture,
                _ => return Err(bad("entry has unknown \"provenance\"")),
            };
            table.set(d, chi, provenance)?;
        }
        Ok(table)
    }
}
