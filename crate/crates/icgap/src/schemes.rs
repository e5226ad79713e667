//! Superposition-coding schemes and their achievable rate regions.
//!
//! Each transmitter splits its signal into a private part, whitened against
//! the cross link so it lands below the noise floor of the other receiver,
//! and a public part both receivers decode. The module computes the
//! covariance splits, the mutual-information values every region constraint
//! is built from, the achievable regions themselves, and the rule choosing
//! which split serves a given target rate pair.

use crate::bounds::outer_bound;
use crate::channel::{ChannelConfig, User};
use crate::geometry::{RatePair, RateRegion2D};
use crate::matrix::{logdet2, sandwich, HermitianMatrix, ToleranceProfile};
use serde::Serialize;
use thiserror::Error;

/// Transmit covariance assignment: a private and a public component per
/// user, each trace-normalized so the pair sums to an average power of one
/// per transmit antenna.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceSplit {
    private: [HermitianMatrix; 2],
    public: [HermitianMatrix; 2],
}

impl CovarianceSplit {
    pub fn private(&self, u: User) -> &HermitianMatrix {
        &self.private[u.index()]
    }

    pub fn public(&self, u: User) -> &HermitianMatrix {
        &self.public[u.index()]
    }
}

/// Baseline split: each user hides `K_u / M_u` below the partner's noise
/// floor and spends the remaining `(I - K_u) / M_u` on the public part.
pub fn simple_split(ch: &ChannelConfig) -> CovarianceSplit {
    let build = |u: User| {
        let m = ch.tx_dim(u) as f64;
        let k = ch.k_matrix(u);
        let private = k.scaled(1.0 / m);
        let public = HermitianMatrix::identity(ch.tx_dim(u))
            .sub(&k)
            .scaled(1.0 / m);
        (private, public)
    };
    let (p1, w1) = build(User::One);
    let (p2, w2) = build(User::Two);
    CovarianceSplit {
        private: [p1, p2],
        public: [w1, w2],
    }
}

/// Degenerate split in which `solo` sends no public part at all and pours
/// full power `I / M` into its private signal; the other user keeps the
/// baseline split.
pub fn split_no_common(ch: &ChannelConfig, solo: User) -> CovarianceSplit {
    let mut split = simple_split(ch);
    let m = ch.tx_dim(solo) as f64;
    split.private[solo.index()] = HermitianMatrix::identity(ch.tx_dim(solo)).scaled(1.0 / m);
    split.public[solo.index()] = HermitianMatrix::zeros(ch.tx_dim(solo));
    split
}

/// Mutual-information values of a split, one set per receiver.
///
/// Arrays are indexed by receiver (`User::index`). Every value is measured
/// against the residual floor `tau` of the partner's private signal, so each
/// one is a decodable rate, not a raw log-determinant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MutualInfoSet {
    /// Own private part, partner's private as extra noise.
    pub i_priv: [f64; 2],
    /// Own public part after the own private part is stripped.
    pub i_ownpub: [f64; 2],
    /// Partner's public part alone.
    pub i_crosspub: [f64; 2],
    /// Own private and public parts jointly.
    pub i_full: [f64; 2],
    /// Own private part jointly with the partner's public part.
    pub i_mix: [f64; 2],
    /// Both public parts jointly.
    pub i_pubs: [f64; 2],
    /// Everything this receiver decodes: own signal plus partner's public.
    pub i_all: [f64; 2],
    /// Residual floor at receiver 2 caused by transmitter 1's private part.
    pub tau_12: f64,
    /// Residual floor at receiver 1 caused by transmitter 2's private part.
    pub tau_21: f64,
}

fn ld(m: &HermitianMatrix) -> f64 {
    logdet2(m, &ToleranceProfile::DEFAULT).expect("I plus a gram matrix is positive definite")
}

struct ReceiverInfos {
    i_priv: f64,
    i_ownpub: f64,
    i_crosspub: f64,
    i_full: f64,
    i_mix: f64,
    i_pubs: f64,
    i_all: f64,
    tau: f64,
}

fn receiver_infos(ch: &ChannelConfig, split: &CovarianceSplit, rx: User) -> ReceiverInfos {
    let other = rx.other();
    let h_own = ch.h(rx, rx);
    let h_cross = ch.h(other, rx);
    let rho_own = ch.rho(rx, rx);
    let rho_cross = ch.rho(other, rx);
    let eye = HermitianMatrix::identity(ch.rx_dim(rx));

    let own = |k: &HermitianMatrix| sandwich(h_own, k).scaled(rho_own);
    let cross = |k: &HermitianMatrix| sandwich(h_cross, k).scaled(rho_cross);

    let own_priv = own(split.private(rx));
    let own_pub = own(split.public(rx));
    let own_both = own(&split.private(rx).add(split.public(rx)));
    let cross_priv = cross(split.private(other));
    let cross_both = cross(&split.private(other).add(split.public(other)));

    let tau = ld(&eye.add(&cross_priv));
    ReceiverInfos {
        i_priv: ld(&eye.add(&own_priv).add(&cross_priv)) - tau,
        i_ownpub: ld(&eye.add(&own_pub).add(&cross_priv)) - tau,
        i_crosspub: ld(&eye.add(&cross_both)) - tau,
        i_full: ld(&eye.add(&own_both).add(&cross_priv)) - tau,
        i_mix: ld(&eye.add(&cross_both).add(&own_priv)) - tau,
        i_pubs: ld(&eye.add(&cross_both).add(&own_pub)) - tau,
        i_all: ld(&eye.add(&cross_both).add(&own_both)) - tau,
        tau,
    }
}

/// Evaluates the full mutual-information set of a split.
pub fn mutual_infos(ch: &ChannelConfig, split: &CovarianceSplit) -> MutualInfoSet {
    let rx1 = receiver_infos(ch, split, User::One);
    let rx2 = receiver_infos(ch, split, User::Two);
    MutualInfoSet {
        i_priv: [rx1.i_priv, rx2.i_priv],
        i_ownpub: [rx1.i_ownpub, rx2.i_ownpub],
        i_crosspub: [rx1.i_crosspub, rx2.i_crosspub],
        i_full: [rx1.i_full, rx2.i_full],
        i_mix: [rx1.i_mix, rx2.i_mix],
        i_pubs: [rx1.i_pubs, rx2.i_pubs],
        i_all: [rx1.i_all, rx2.i_all],
        tau_12: rx2.tau,
        tau_21: rx1.tau,
    }
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Nine-constraint achievable region of a split: per-user caps both with and
/// without the partner decoding the user's public part, three sum caps, and
/// the two weighted caps.
pub fn region_ge(ch: &ChannelConfig, split: &CovarianceSplit) -> RateRegion2D {
    let mi = mutual_infos(ch, split);
    RateRegion2D::new(vec![
        (1, 0, pos(mi.i_full[0])),
        (1, 0, pos(mi.i_priv[0] + mi.i_crosspub[1])),
        (0, 1, pos(mi.i_full[1])),
        (0, 1, pos(mi.i_priv[1] + mi.i_crosspub[0])),
        (1, 1, pos(mi.i_all[1] + mi.i_priv[0])),
        (1, 1, pos(mi.i_all[0] + mi.i_priv[1])),
        (1, 1, pos(mi.i_mix[0] + mi.i_mix[1])),
        (2, 1, pos(mi.i_all[0] + mi.i_priv[0] + mi.i_mix[1])),
        (1, 2, pos(mi.i_all[1] + mi.i_priv[1] + mi.i_mix[0])),
    ])
    .expect("clamped rates are nonnegative")
}

/// Baseline-split region with the two partner-decoding caps dropped; these
/// caps are the ones a per-target change of split can always remove.
pub fn region_r2(ch: &ChannelConfig) -> RateRegion2D {
    let mi = mutual_infos(ch, &simple_split(ch));
    RateRegion2D::new(vec![
        (1, 0, pos(mi.i_full[0])),
        (0, 1, pos(mi.i_full[1])),
        (1, 1, pos(mi.i_all[1] + mi.i_priv[0])),
        (1, 1, pos(mi.i_all[0] + mi.i_priv[1])),
        (1, 1, pos(mi.i_mix[0] + mi.i_mix[1])),
        (2, 1, pos(mi.i_all[0] + mi.i_priv[0] + mi.i_mix[1])),
        (1, 2, pos(mi.i_all[1] + mi.i_priv[1] + mi.i_mix[0])),
    ])
    .expect("clamped rates are nonnegative")
}

fn shifted_outer(ch: &ChannelConfig, g1: f64, g2: f64) -> RateRegion2D {
    let b = outer_bound(ch);
    RateRegion2D::new(vec![
        (1, 0, pos(b.b1 - g1)),
        (0, 1, pos(b.b2 - g2)),
        (1, 1, pos(b.b3 - g1 - g2)),
        (1, 1, pos(b.b4 - g1 - g2)),
        (1, 1, pos(b.b5 - g1 - g2)),
        (2, 1, pos(b.b6 - 2.0 * g1 - g2)),
        (1, 2, pos(b.b7 - g1 - 2.0 * g2)),
    ])
    .expect("clamped rates are nonnegative")
}

/// Outer region pulled in by the coarse antenna-count gaps; guaranteed
/// achievable.
pub fn region_ra(ch: &ChannelConfig) -> RateRegion2D {
    let g = ch.gap_constants();
    shifted_outer(ch, g.n1, g.n2)
}

/// Outer region pulled in by the refined antenna-count gaps; guaranteed
/// achievable and never smaller than [`region_ra`].
pub fn region_ra_star(ch: &ChannelConfig) -> RateRegion2D {
    let g = ch.gap_constants();
    shifted_outer(ch, g.n1_star, g.n2_star)
}

/// Which split serves a target rate pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeChoice {
    /// Baseline split for both users.
    Simple,
    /// User 1 sends no public part.
    NoCommon1,
    /// User 2 sends no public part.
    NoCommon2,
}

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("target ({r1}, {r2}) lies outside the achievable region")]
    NotInR2 { r1: f64, r2: f64 },
}

/// Picks the split for a target inside the baseline region: the baseline
/// split unless the target breaks one of the two partner-decoding caps, in
/// which case the user whose cap broke gives up its public part.
///
/// For targets inside the region at most one cap can break, so the checks
/// are order-independent there.
pub fn select_scheme(ch: &ChannelConfig, target: RatePair) -> Result<SchemeChoice, SchemeError> {
    let tol = ToleranceProfile::DEFAULT.tol_geom;
    if !region_r2(ch).contains(target) {
        return Err(SchemeError::NotInR2 {
            r1: target.r1,
            r2: target.r2,
        });
    }
    let mi = mutual_infos(ch, &simple_split(ch));
    if target.r1 > mi.i_priv[0] + mi.i_crosspub[1] + tol {
        return Ok(SchemeChoice::NoCommon1);
    }
    if target.r2 > mi.i_priv[1] + mi.i_crosspub[0] + tol {
        return Ok(SchemeChoice::NoCommon2);
    }
    Ok(SchemeChoice::Simple)
}

/// The covariance split realizing a [`SchemeChoice`].
pub fn split_for(ch: &ChannelConfig, choice: SchemeChoice) -> CovarianceSplit {
    match choice {
        SchemeChoice::Simple => simple_split(ch),
        SchemeChoice::NoCommon1 => split_no_common(ch, User::One),
        SchemeChoice::NoCommon2 => split_no_common(ch, User::Two),
    }
}
