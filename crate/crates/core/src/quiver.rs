//! Complete bipartite quivers, dimension vectors, and stability data.
//!
//! A [`BipartiteQuiver`] has sinks `i_1, ..., i_{l1}` and sources
//! `j_1, ..., j_{l2}`, with `mult[k][l]` arrows from source `j_l` to sink
//! `i_k`. Three constructors cover the cases this library computes with:
//!
//! - [`BipartiteQuiver::complete`]: one arrow between every source/sink pair;
//! - [`BipartiteQuiver::kronecker`]: one source, one sink, `m` parallel
//!   arrows;
//! - [`BipartiteQuiver::levelled`]: every vertex carries a positive level,
//!   and a source of level `s` sends `r * s` arrows to a sink of level `r`.
//!
//! A [`DimVector`] assigns a dimension to every vertex, split into sink and
//! source entries. The Euler form of the quiver is
//!
//! ```text
//! <d, e> = sum_i d_i e_i + sum_j d_j e_j - sum_{arrows j -> i} d_j e_i
//! ```
//!
//! (vertex terms minus one arrow term per arrow, `d` at the arrow's source
//! and `e` at its head).
//!
//! A [`StabilitySpec`] holds integral weights `theta` and positive weights
//! `kappa`; the slope of a nonzero dimension vector is
//! `mu(d) = theta(d) / kappa(d)`. The standard choice (`theta = 0` on sinks
//! and the level on sources, `kappa =` the level everywhere) makes the slope
//! of the vector attached to a monomial equal to
//! `ydeg / (xdeg + ydeg)` of that monomial.

use crate::numerics::BigRational;
use num::BigInt;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuiverError {
    #[error("dimension vector has {got} sink entries, quiver has {want} sinks")]
    SinkArity { got: usize, want: usize },
    #[error("dimension vector has {got} source entries, quiver has {want} sources")]
    SourceArity { got: usize, want: usize },
    #[error("stability data does not match the quiver shape")]
    StabilityArity,
    #[error("vertex levels must be positive")]
    ZeroLevel,
    #[error("cannot parse dimension vector from {0:?}, expected \"p1+p2+...,q1+q2+...\"")]
    BadDimVector(String),
}

/// Dimensions at the sinks and sources of a bipartite quiver.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimVector {
    pub sinks: Vec<u32>,
    pub sources: Vec<u32>,
}

impl DimVector {
    pub fn new(sinks: Vec<u32>, sources: Vec<u32>) -> Self {
        DimVector { sinks, sources }
    }

    /// Sum of the sink entries.
    pub fn sink_total(&self) -> u32 {
        self.sinks.iter().sum()
    }

    /// Sum of the source entries.
    pub fn source_total(&self) -> u32 {
        self.sources.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.sinks.iter().all(|&d| d == 0) && self.sources.iter().all(|&d| d == 0)
    }

    /// Component-wise `<=`.
    pub fn leq(&self, other: &DimVector) -> bool {
        self.sinks.len() == other.sinks.len()
            && self.sources.len() == other.sources.len()
            && self.sinks.iter().zip(&other.sinks).all(|(a, b)| a <= b)
            && self.sources.iter().zip(&other.sources).all(|(a, b)| a <= b)
    }

    /// Component-wise difference; caller must ensure `other.leq(self)`.
    pub fn minus(&self, other: &DimVector) -> DimVector {
        DimVector {
            sinks: self
                .sinks
                .iter()
                .zip(&other.sinks)
                .map(|(a, b)| a - b)
                .collect(),
            sources: self
                .sources
                .iter()
                .zip(&other.sources)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn plus(&self, other: &DimVector) -> DimVector {
        DimVector {
            sinks: self
                .sinks
                .iter()
                .zip(&other.sinks)
                .map(|(a, b)| a + b)
                .collect(),
            sources: self
                .sources
                .iter()
                .zip(&other.sources)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// All entries, sinks first.
    pub fn entries(&self) -> impl Iterator<Item = u32> + '_ {
        self.sinks.iter().chain(self.sources.iter()).copied()
    }
}

impl fmt::Display for DimVector {
    /// Renders as `(2+1+0, 3+1+1)`; a side with no vertices prints as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| {
            if v.is_empty() {
                "-".to_string()
            } else {
                v.iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join("+")
            }
        };
        write!(f, "({}, {})", join(&self.sinks), join(&self.sources))
    }
}

impl FromStr for DimVector {
    type Err = QuiverError;

    /// Accepts `"2+1+0,3+1+1"`, with optional surrounding parentheses and
    /// whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let bad = || QuiverError::BadDimVector(s.to_string());
        let (left, right) = trimmed.split_once(',').ok_or_else(bad)?;
        let parse_side = |side: &str| -> Result<Vec<u32>, QuiverError> {
            let side = side.trim();
            if side == "-" || side.is_empty() {
                return Ok(Vec::new());
            }
            side.split('+')
                .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
                .collect()
        };
        Ok(DimVector {
            sinks: parse_side(left)?,
            sources: parse_side(right)?,
        })
    }
}

/// A bipartite quiver with all arrows oriented from sources to sinks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteQuiver {
    sink_levels: Vec<u32>,
    source_levels: Vec<u32>,
    /// `mult[k][l]` = number of arrows from source `l` to sink `k`.
    mult: Vec<Vec<u32>>,
}

impl BipartiteQuiver {
    /// The complete bipartite quiver: `l1` sinks, `l2` sources, one arrow per
    /// pair, all levels 1.
    pub fn complete(l1: usize, l2: usize) -> Self {
        BipartiteQuiver {
            sink_levels: vec![1; l1],
            source_levels: vec![1; l2],
            mult: vec![vec![1; l2]; l1],
        }
    }

    /// The generalized Kronecker quiver: one source, one sink, `m` arrows.
    pub fn kronecker(m: u32) -> Self {
        BipartiteQuiver {
            sink_levels: vec![1],
            source_levels: vec![1],
            mult: vec![vec![m]],
        }
    }

    /// Levelled bipartite quiver. `sink_counts[r - 1]` sinks carry level `r`
    /// and `source_counts[s - 1]` sources carry level `s`; a level-`s` source
    /// sends `r * s` arrows to a level-`r` sink.
    pub fn levelled(sink_counts: &[u32], source_counts: &[u32]) -> Self {
        let mut sink_levels = Vec::new();
        for (r0, &count) in sink_counts.iter().enumerate() {
            sink_levels.extend(std::iter::repeat(r0 as u32 + 1).take(count as usize));
        }
        let mut source_levels = Vec::new();
        for (s0, &count) in source_counts.iter().enumerate() {
            source_levels.extend(std::iter::repeat(s0 as u32 + 1).take(count as usize));
        }
        let mult = sink_levels
            .iter()
            .map(|&r| source_levels.iter().map(|&s| r * s).collect())
            .collect();
        BipartiteQuiver {
            sink_levels,
            source_levels,
            mult,
        }
    }

    pub fn num_sinks(&self) -> usize {
        self.sink_levels.len()
    }

    pub fn num_sources(&self) -> usize {
        self.source_levels.len()
    }

    pub fn sink_levels(&self) -> &[u32] {
        &self.sink_levels
    }

    pub fn source_levels(&self) -> &[u32] {
        &self.source_levels
    }

    /// Arrows from source `l` to sink `k`.
    pub fn mult(&self, k: usize, l: usize) -> u32 {
        self.mult[k][l]
    }

    pub fn check_dim(&self, d: &DimVector) -> Result<(), QuiverError> {
        if d.sinks.len() != self.num_sinks() {
            return Err(QuiverError::SinkArity {
                got: d.sinks.len(),
                want: self.num_sinks(),
            });
        }
        if d.sources.len() != self.num_sources() {
            return Err(QuiverError::SourceArity {
                got: d.sources.len(),
                want: self.num_sources(),
            });
        }
        Ok(())
    }

    /// The Euler form `<d, e>`.
    pub fn euler_form(&self, d: &DimVector, e: &DimVector) -> i64 {
        let mut total: i64 = 0;
        for (a, b) in d.sinks.iter().zip(&e.sinks) {
            total += *a as i64 * *b as i64;
        }
        for (a, b) in d.sources.iter().zip(&e.sources) {
            total += *a as i64 * *b as i64;
        }
        for (k, row) in self.mult.iter().enumerate() {
            for (l, &m) in row.iter().enumerate() {
                total -= m as i64 * d.sources[l] as i64 * e.sinks[k] as i64;
            }
        }
        total
    }

    /// The antisymmetrized Euler form `{d, e} = <e, d> - <d, e>`.
    pub fn antisym_form(&self, d: &DimVector, e: &DimVector) -> i64 {
        self.euler_form(e, d) - self.euler_form(d, e)
    }
}

/// Linear stability data: slope of `d` is `theta(d) / kappa(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilitySpec {
    pub theta_sinks: Vec<i64>,
    pub theta_sources: Vec<i64>,
    pub kappa_sinks: Vec<u64>,
    pub kappa_sources: Vec<u64>,
}

impl StabilitySpec {
    /// The standard stability for a bipartite quiver: `theta` vanishes on
    /// sinks and equals the level on sources, `kappa` equals the level
    /// everywhere. For level-1 quivers this is the familiar
    /// `mu(d) = (source total) / (total)`.
    pub fn standard(q: &BipartiteQuiver) -> Self {
        StabilitySpec {
            theta_sinks: vec![0; q.num_sinks()],
            theta_sources: q.source_levels().iter().map(|&s| s as i64).collect(),
            kappa_sinks: q.sink_levels().iter().map(|&r| r as u64).collect(),
            kappa_sources: q.source_levels().iter().map(|&s| s as u64).collect(),
        }
    }

    pub fn check_dim(&self, d: &DimVector) -> Result<(), QuiverError> {
        if d.sinks.len() != self.theta_sinks.len()
            || d.sources.len() != self.theta_sources.len()
            || self.kappa_sinks.len() != self.theta_sinks.len()
            || self.kappa_sources.len() != self.theta_sources.len()
        {
            return Err(QuiverError::StabilityArity);
        }
        Ok(())
    }

    /// `theta(d)`.
    pub fn theta(&self, d: &DimVector) -> i64 {
        let s1: i64 = d
            .sinks
            .iter()
            .zip(&self.theta_sinks)
            .map(|(&a, &t)| a as i64 * t)
            .sum();
        let s2: i64 = d
            .sources
            .iter()
            .zip(&self.theta_sources)
            .map(|(&a, &t)| a as i64 * t)
            .sum();
        s1 + s2
    }

    /// `kappa(d)`; positive for nonzero `d`.
    pub fn kappa(&self, d: &DimVector) -> u64 {
        let s1: u64 = d
            .sinks
            .iter()
            .zip(&self.kappa_sinks)
            .map(|(&a, &k)| a as u64 * k)
            .sum();
        let s2: u64 = d
            .sources
            .iter()
            .zip(&self.kappa_sources)
            .map(|(&a, &k)| a as u64 * k)
            .sum();
        s1 + s2
    }

    /// Slope `mu(d) = theta(d) / kappa(d)`; `None` for the zero vector.
    pub fn slope(&self, d: &DimVector) -> Option<BigRational> {
        let k = self.kappa(d);
        if k == 0 {
            return None;
        }
        Some(BigRational::new(
            BigInt::from(self.theta(d)),
            BigInt::from(k),
        ))
    }

    /// Compare `mu(a)` and `mu(b)` without building rationals:
    /// `theta(a) kappa(b) <=> theta(b) kappa(a)`.
    pub fn slope_cmp(&self, a: &DimVector, b: &DimVector) -> std::cmp::Ordering {
        let lhs = self.theta(a) as i128 * self.kappa(b) as i128;
        let rhs = self.theta(b) as i128 * self.kappa(a) as i128;
        lhs.cmp(&rhs)
    }

    /// True if no proper nonzero sub-vector `0 < e < d` (component-wise)
    /// shares the slope of `d`. Checked by exhausting the box below `d`,
    /// which is fast at the dimensions this library handles.
    pub fn is_coprime(&self, d: &DimVector) -> bool {
        if d.is_zero() {
            return false;
        }
        let entries: Vec<u32> = d.entries().collect();
        let n = entries.len();
        let mut cur = vec![0u32; n];
        loop {
            // Advance odometer.
            let mut i = 0;
            loop {
                if i == n {
                    return true;
                }
                if cur[i] < entries[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if cur == entries {
                continue;
            }
            let e = DimVector {
                sinks: cur[..d.sinks.len()].to_vec(),
                sources: cur[d.sinks.len()..].to_vec(),
            };
            if self.slope_cmp(&e, d) == std::cmp::Ordering::Equal {
                return false;
            }
        }
    }
}

/// All vectors in `N^len` with entry sum `total`, in lexicographic order.
pub fn vectors_with_sum(len: usize, total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fn rec(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(cur, i + 1, left - v, out);
        }
    }
    if len == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(&mut cur, 0, total, &mut out);
    out
}
