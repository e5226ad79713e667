//! Rate-region toolkit for the 2-user Gaussian MIMO interference channel.
//!
//! The crate computes, for any channel with up to 16 antennas per node:
//!
//! - explicit log-determinant outer bounds on the rate region ([`bounds`]),
//! - achievable regions of superposition-coding schemes whose private
//!   signals hide below the partner's noise floor ([`schemes`]),
//! - sub-rate assignments realizing a target rate pair ([`ratesplit`]),
//! - antenna-count gap constants and certificates that the outer region
//!   shifted by those constants is achievable ([`channel`], [`geometry`]),
//! - reciprocity and side-condition checks, plus a batch certifier over
//!   seeded random channels ([`verify`]).
//!
//! All rates are in bits per channel use and all logarithms are base 2.
//! Powers cross the API in decibels and are linear internally. Everything
//! is deterministic: a fixed seed reproduces every channel, region, and
//! report bit for bit.

pub use nalgebra;
pub use rand_chacha;

pub mod bounds;
pub mod channel;
pub mod fixtures;
pub mod geometry;
pub mod matrix;
pub mod ratesplit;
pub mod schemes;
pub mod verify;

pub use bounds::{outer_bound, outer_region, RateBoundSet};
pub use channel::{
    channel_from_json, gap_constants, make_channel, random_channel, ChannelConfig, ChannelError,
    ChannelSpec, GapConstants, User,
};
pub use geometry::{gap_certified, hull_union, RatePair, RateRegion2D};
pub use matrix::{inv_hpd, logdet2, psd_leq, HermitianMatrix, MatrixError, ToleranceProfile};
pub use ratesplit::{
    solve_subrates, subrate_polytope, RateSplitError, SubRatePolytope, SubRateTuple,
};
pub use schemes::{
    mutual_infos, region_ge, region_r2, region_ra, region_ra_star, select_scheme, simple_split,
    split_no_common, CovarianceSplit, MutualInfoSet, SchemeChoice,
};
pub use verify::{
    certify_theorems, check_cond_entropy_bound, check_order_lemma, sum_rate_comparison, SisoParams,
    SumRateComparison, VerificationReport, VerifyError,
};
