//! Sub-rate assignment: splitting each user's rate across its private and
//! public message.
//!
//! A target pair (R1, R2) inside the achievable region is served by giving
//! user i a private sub-rate `r_iu` and a public sub-rate `r_iw` with
//! `r_iu + r_iw = R_i`. The split must satisfy fourteen decodability
//! constraints, seven per receiver. Eliminating `r_iw` turns the problem
//! into a two-variable feasibility question this module solves exactly by
//! vertex enumeration.

use crate::channel::{ChannelConfig, User};
use crate::geometry::{line_intersection, RatePair};
use crate::matrix::ToleranceProfile;
use crate::schemes::{
    mutual_infos, select_scheme, split_for, CovarianceSplit, MutualInfoSet, SchemeChoice,
    SchemeError,
};
use serde::Serialize;
use thiserror::Error;

/// Sub-rates in the order (r1u, r1w, r2u, r2w): private then public per user.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubRateTuple {
    pub r1u: f64,
    pub r1w: f64,
    pub r2u: f64,
    pub r2w: f64,
}

impl SubRateTuple {
    fn as_array(&self) -> [f64; 4] {
        [self.r1u, self.r1w, self.r2u, self.r2w]
    }
}

/// One decodability constraint `coeffs . (r1u, r1w, r2u, r2w) <= rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubRateConstraint {
    pub coeffs: [u8; 4],
    pub rhs: f64,
}

/// The fourteen decodability constraints of a covariance split: receiver 1
/// decodes (r1u, r1w, r2w), receiver 2 decodes (r2u, r2w, r1w), and every
/// nonempty decoding subset gets a mutual-information cap.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubRatePolytope {
    constraints: [SubRateConstraint; 14],
}

impl SubRatePolytope {
    pub fn constraints(&self) -> &[SubRateConstraint; 14] {
        &self.constraints
    }

    /// True when the tuple is nonnegative and meets every constraint, all
    /// within the geometric tolerance.
    pub fn satisfied_by(&self, t: &SubRateTuple) -> bool {
        let tol = ToleranceProfile::DEFAULT.tol_geom;
        let r = t.as_array();
        if r.iter().any(|x| *x < -tol) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs: f64 = c
                .coeffs
                .iter()
                .zip(r.iter())
                .map(|(a, x)| *a as f64 * x)
                .sum();
            lhs <= c.rhs + tol
        })
    }
}

fn receiver_constraints(mi: &MutualInfoSet, rx: User) -> [SubRateConstraint; 7] {
    let i = rx.index();
    // decoding-variable masks in (r1u, r1w, r2u, r2w) order
    let (own_priv, own_pub, cross_pub): ([u8; 4], [u8; 4], [u8; 4]) = match rx {
        User::One => ([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]),
        User::Two => ([0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0]),
    };
    let join = |masks: &[[u8; 4]]| {
        let mut out = [0u8; 4];
        for m in masks {
            for k in 0..4 {
                out[k] += m[k];
            }
        }
        out
    };
    [
        SubRateConstraint {
            coeffs: own_priv,
            rhs: mi.i_priv[i],
        },
        SubRateConstraint {
            coeffs: own_pub,
            rhs: mi.i_ownpub[i],
        },
        SubRateConstraint {
            coeffs: cross_pub,
            rhs: mi.i_crosspub[i],
        },
        SubRateConstraint {
            coeffs: join(&[own_priv, own_pub]),
            rhs: mi.i_full[i],
        },
        SubRateConstraint {
            coeffs: join(&[own_priv, cross_pub]),
            rhs: mi.i_mix[i],
        },
        SubRateConstraint {
            coeffs: join(&[own_pub, cross_pub]),
            rhs: mi.i_pubs[i],
        },
        SubRateConstraint {
            coeffs: join(&[own_priv, own_pub, cross_pub]),
            rhs: mi.i_all[i],
        },
    ]
}

/// Builds the fourteen-constraint decodability polytope of a split.
pub fn subrate_polytope(ch: &ChannelConfig, split: &CovarianceSplit) -> SubRatePolytope {
    let mi = mutual_infos(ch, split);
    let rx1 = receiver_constraints(&mi, User::One);
    let rx2 = receiver_constraints(&mi, User::Two);
    let mut constraints = [SubRateConstraint {
        coeffs: [0; 4],
        rhs: 0.0,
    }; 14];
    constraints[..7].copy_from_slice(&rx1);
    constraints[7..].copy_from_slice(&rx2);
    SubRatePolytope { constraints }
}

#[derive(Debug, Error)]
pub enum RateSplitError {
    #[error("target ({r1}, {r2}) lies outside the achievable region")]
    NotInR2 { r1: f64, r2: f64 },
    #[error("no feasible sub-rate split for target ({r1}, {r2})")]
    InfeasibleSplit { r1: f64, r2: f64 },
}

fn snap(x: f64, anchor: f64, tol: f64) -> f64 {
    if (x - anchor).abs() <= tol {
        anchor
    } else {
        x
    }
}

/// Finds a sub-rate split serving the target: picks the covariance split,
/// eliminates the public sub-rates via `r_iw = R_i - r_iu`, and returns the
/// lexicographically smallest feasible `(r1u, r2u)` corner mapped back to a
/// full tuple. Sub-rates are snapped onto the box walls so a user with no
/// public part gets a public sub-rate of exactly zero.
pub fn solve_subrates(
    ch: &ChannelConfig,
    target: RatePair,
) -> Result<(SchemeChoice, SubRateTuple), RateSplitError> {
    let tol = ToleranceProfile::DEFAULT.tol_geom;
    let (big_r1, big_r2) = (target.r1, target.r2);
    let scheme = select_scheme(ch, target).map_err(|e| match e {
        SchemeError::NotInR2 { r1, r2 } => RateSplitError::NotInR2 { r1, r2 },
    })?;
    let split = split_for(ch, scheme);
    let mi = mutual_infos(ch, &split);

    // caps on the full per-user rates carry no free variable after the
    // elimination; they gate feasibility up front
    if big_r1 > mi.i_full[0] + tol || big_r2 > mi.i_full[1] + tol {
        return Err(RateSplitError::InfeasibleSplit {
            r1: big_r1,
            r2: big_r2,
        });
    }

    // a.x + b.y <= c over x = r1u, y = r2u
    let lines: Vec<(f64, f64, f64)> = vec![
        (1.0, 0.0, mi.i_priv[0]),
        (-1.0, 0.0, mi.i_ownpub[0] - big_r1),
        (0.0, -1.0, mi.i_crosspub[0] - big_r2),
        (1.0, -1.0, mi.i_mix[0] - big_r2),
        (-1.0, -1.0, mi.i_pubs[0] - big_r1 - big_r2),
        (0.0, -1.0, mi.i_all[0] - big_r1 - big_r2),
        (0.0, 1.0, mi.i_priv[1]),
        (0.0, -1.0, mi.i_ownpub[1] - big_r2),
        (-1.0, 0.0, mi.i_crosspub[1] - big_r1),
        (-1.0, 1.0, mi.i_mix[1] - big_r1),
        (-1.0, -1.0, mi.i_pubs[1] - big_r1 - big_r2),
        (-1.0, 0.0, mi.i_all[1] - big_r1 - big_r2),
        (1.0, 0.0, big_r1),
        (-1.0, 0.0, 0.0),
        (0.0, 1.0, big_r2),
        (0.0, -1.0, 0.0),
    ];

    let mut best: Option<(f64, f64)> = None;
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let Some((x, y)) = line_intersection(
                (lines[i].0, lines[i].1, lines[i].2),
                (lines[j].0, lines[j].1, lines[j].2),
            ) else {
                continue;
            };
            let feasible = lines.iter().all(|(a, b, c)| a * x + b * y <= c + tol);
            if !feasible {
                continue;
            }
            let better = match best {
                None => true,
                Some((bx, by)) => (x, y) < (bx, by),
            };
            if better {
                best = Some((x, y));
            }
        }
    }
    let Some((x, y)) = best else {
        return Err(RateSplitError::InfeasibleSplit {
            r1: big_r1,
            r2: big_r2,
        });
    };

    let r1u = snap(snap(x, 0.0, tol), big_r1, tol);
    let r2u = snap(snap(y, 0.0, tol), big_r2, tol);
    let tuple = SubRateTuple {
        r1u,
        r1w: big_r1 - r1u,
        r2u,
        r2w: big_r2 - r2u,
    };
    Ok((scheme, tuple))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::schemes::SchemeChoice;

    fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
        assert!((got - want).abs() < tol, "{what}: got {got}, want {want}");
    }

    #[test]
    fn polytope_lists_fourteen_constraints_in_receiver_order() {
        let ch = fixtures::example2();
        let split = crate::schemes::simple_split(&ch);
        let poly = subrate_polytope(&ch, &split);
        let cs = poly.constraints();
        assert_eq!(cs[0].coeffs, [1, 0, 0, 0]);
        assert_eq!(cs[6].coeffs, [1, 1, 0, 1]);
        assert_eq!(cs[7].coeffs, [0, 0, 1, 0]);
        assert_eq!(cs[13].coeffs, [0, 1, 1, 1]);
        let mi = crate::schemes::mutual_infos(&ch, &split);
        assert_eq!(cs[0].rhs, mi.i_priv[0]);
        assert_eq!(cs[13].rhs, mi.i_all[1]);
    }

    #[test]
    fn sum_vertex_splits_into_reference_tuple() {
        // reference split computed independently for the bundled channel
        let ch = fixtures::example2();
        let target = RatePair::new(9.657150130952935, 3.821635151921571);
        let (scheme, t) = solve_subrates(&ch, target).unwrap();
        assert_eq!(scheme, SchemeChoice::Simple);
        assert_close(t.r1u, 5.563695953295008, 1e-8, "r1u");
        assert_close(t.r1w, 4.093454177657927, 1e-8, "r1w");
        assert_close(t.r2u, 0.6759986513596079, 1e-8, "r2u");
        assert_close(t.r2w, 3.145636500561963, 1e-8, "r2w");
        let poly = subrate_polytope(&ch, &split_for(&ch, scheme));
        assert!(poly.satisfied_by(&t));
    }

    #[test]
    fn lopsided_target_forces_solo_scheme_with_zero_public_rate() {
        let ch = fixtures::example2();
        let target = RatePair::new(10.754799699614642, 0.0);
        let (scheme, t) = solve_subrates(&ch, target).unwrap();
        assert_eq!(scheme, SchemeChoice::NoCommon1);
        assert_eq!(t.r1w, 0.0, "solo user must carry zero public rate");
        assert_eq!(t.r1u, target.r1);
        assert_eq!(t.r2u, 0.0);
        assert_eq!(t.r2w, 0.0);
    }

    #[test]
    fn sub_rates_always_recompose_the_target() {
        let ch = fixtures::example2();
        for target in [
            RatePair::new(3.0, 3.0),
            RatePair::new(9.657150130952935, 3.821635151921571),
            RatePair::new(0.5, 8.6),
            RatePair::new(11.0, 1.0),
        ] {
            let (_, t) = solve_subrates(&ch, target).unwrap();
            assert!((t.r1u + t.r1w - target.r1).abs() < 1e-12);
            assert!((t.r2u + t.r2w - target.r2).abs() < 1e-12);
            assert!(t.r1u >= 0.0 && t.r1w >= 0.0 && t.r2u >= 0.0 && t.r2w >= 0.0);
        }
    }

    #[test]
    fn unreachable_target_is_rejected() {
        let ch = fixtures::example2();
        assert!(matches!(
            solve_subrates(&ch, RatePair::new(20.0, 0.0)),
            Err(RateSplitError::NotInR2 { .. })
        ));
    }
}
