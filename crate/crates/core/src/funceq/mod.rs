//! The functional-equation layer connecting wall functions to Euler
//! characteristics of quiver moduli.
//!
//! Four computations live here, all exact:
//!
//! - the coupled system determining a wall function from Euler
//!   characteristics: one unknown series per pair of ordered partitions on
//!   the ray of a slope, equations of the shape
//!   `R = (1 - monomial * prod R'^{-<d,d'> chi'})^{-1}`, assembled into
//!   `f = prod R^{k chi}` ([`solve_R_system`]);
//! - the inverse direction: given a wall function, a triangular solve over
//!   levels recovering every `chi(P1, P2)` with a mandatory round trip
//!   ([`extract_chi`]);
//! - the one-variable specialization collapsing all variables to `t`, with
//!   its single functional equation, closed forms, BPS-type Moebius
//!   transforms and product factorizations ([`special`]);
//! - the central-slope algebraic system whose solution underlies the closed
//!   formula for the degree-`k` invariants of the projective plane
//!   ([`central_system`]).

mod central;
mod chi;
mod rsystem;
pub mod special;

pub use central::central_system;
pub use chi::{ChiTable, Provenance};
pub use rsystem::{extract_chi, solve_R_system, RSystemSolution};
pub use special::{
    bps_moebius, closed_form_N, log_route_N, product_factorization, reassemble_product,
    solve_specialized, ClosedForm, SpecializedContext,
};

use crate::hn::HnError;
use crate::quiver::QuiverError;
use crate::series::SeriesError;
use crate::wallcross::WallcrossError;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FunceqError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Hn(#[from] HnError),
    #[error(transparent)]
    Wallcross(#[from] WallcrossError),
    #[error("dimension vector {0} is not on the ray of slope ({1}, {2})")]
    OffRay(String, u32, u32),
    #[error("chi table has no entry for {0}; populate it up to level {1} first")]
    MissingChi(String, u32),
    #[error("conflicting chi values for {0}: table has {1}, new value {2}")]
    ConflictingChi(String, String, String),
    #[error("non-integral extraction: chi({0}) would be {1}")]
    NonIntegralExtraction(String, String),
    #[error("round-trip check failed: re-solving with the extracted table does not reproduce the wall function")]
    RoundTripFailed,
    #[error("fixed-point iteration stalled at sweep {0} without converging")]
    NoProgress(usize),
    #[error("closed form is invalid at E = 0; compute N[k] from log f instead (log route)")]
    UseLogRoute,
    #[error("exponent {0} does not fit a machine integer")]
    ExponentOverflow(String),
    #[error("malformed chi table JSON: {0}")]
    BadJson(String),
}
