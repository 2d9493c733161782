//! Exact computer algebra for wall-crossing factorizations and quiver moduli.
//!
//! The library computes, over exact rational arithmetic:
//!
//! - ordered factorizations of commutators in the tropical vertex group
//!   (automorphisms `x -> x f^{-b}`, `y -> y f^{a}` of a formal Laurent/power
//!   series ring), producing one wall function `f_{(a,b)}` per primitive
//!   slope ([`wallcross`]);
//! - Poincare polynomials and Euler characteristics of moduli spaces of
//!   stable quiver representations for complete bipartite (and levelled)
//!   quivers, via the Harder-Narasimhan recursion ([`hn`]);
//! - the coupled functional-equation systems whose solutions reproduce the
//!   wall functions from Euler characteristics, in both directions:
//!   solving for `f` given chi data, and extracting chi data from a computed
//!   wall ([`funceq`]);
//! - Gromov-Witten-type invariants `N_{(a,b)}` read off from `log f_{(a,b)}`,
//!   smooth-model series, and BPS-style integrality transforms ([`gw`],
//!   [`funceq::bps_moebius`]);
//! - torus-localization counts: weighted tree enumerations and Lagrange
//!   inversion coefficients that reproduce the same Euler-characteristic
//!   sums ([`localization`]).
//!
//! Everything is deterministic and exact: coefficients are arbitrary-precision
//! rationals, series are truncated to an explicit order, and equality checks
//! in the verification routines are bit-exact.
//!
//! Module map:
//!
//! - [`numerics`]: big rationals, dense `q`-polynomials, reduced rational
//!   functions in `q`, generalized binomials, Moebius function.
//! - [`series`]: multivariate truncated power series over weighted variables
//!   carrying an (x, y)-bidegree.
//! - [`quiver`]: complete bipartite quivers with multiplicities and levels,
//!   dimension vectors, stability data, Euler forms, slopes.
//! - [`wallcross`]: wall automorphisms, commutator factorization, exact
//!   verification of the ordered product.
//! - [`hn`]: Harder-Narasimhan recursion for Poincare polynomials of stable
//!   moduli, and Euler characteristics at `q = 1`.
//! - [`funceq`]: the coupled `R`-system, chi extraction, one-variable
//!   specializations, closed forms, BPS transform, product factorization.
//! - [`gw`]: invariant tables from wall functions, smooth-model series,
//!   correspondence and divisibility checks.
//! - [`localization`]: Lagrange inversion and weighted tree enumeration.

pub mod funceq;
pub mod gw;
pub mod hn;
pub mod localization;
pub mod numerics;
pub mod quiver;
pub mod series;
pub mod wallcross;

pub use numerics::{BigRational, QPoly, QRationalFunction};
pub use quiver::{BipartiteQuiver, DimVector, StabilitySpec};
pub use series::{Axis, Monomial, SeriesContext, TruncatedSeries, VariableSpec};
pub use wallcross::{InitialData, Scattering, WallAutomorphism};
