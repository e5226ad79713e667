//! Numerical verification harnesses.
//!
//! Three kinds of checks live here: a single-antenna counterexample showing
//! an achievable superposition rate beating a previously claimed weighted
//! sum cap, matrix-analytic side conditions used by the gap argument (a
//! conditional-entropy bound and a matrix-order probe), and a batch
//! certifier that replays the gap, reciprocity, and containment claims over
//! seeded random channels.

use crate::bounds::{outer_bound, outer_region};
use crate::channel::{random_channel, ChannelConfig, User};
use crate::geometry::{gap_certificate_slack, RateRegion2D};
use crate::matrix::{
    gram, inv_hpd, logdet2, psd_leq, sandwich, HermitianMatrix, MatrixError, ToleranceProfile, C64,
};
use crate::schemes::{region_ge, region_r2, region_ra, region_ra_star, simple_split};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("channel is not weak-interference: snr=({snr1:.3e}, {snr2:.3e}), inr=({inr1:.3e}, {inr2:.3e})")]
    NotWeakIc {
        snr1: f64,
        snr2: f64,
        inr1: f64,
        inr2: f64,
    },
    #[error("{what} violates its semidefinite requirement (smallest eigenvalue {min_eig:.3e})")]
    PsdViolation { what: &'static str, min_eig: f64 },
    #[error("precondition violated: {what}")]
    PreconditionViolation { what: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Scalar powers of a single-antenna channel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SisoParams {
    pub snr1: f64,
    pub snr2: f64,
    pub inr1: f64,
    pub inr2: f64,
}

impl SisoParams {
    /// Extracts the four scalar powers from a single-antenna channel.
    /// `inr_i` is the interference power arriving at receiver i.
    pub fn from_channel(ch: &ChannelConfig) -> Result<SisoParams, VerifyError> {
        if ch.dims() != [1, 1, 1, 1] {
            return Err(VerifyError::PreconditionViolation {
                what: format!("channel dims {:?} are not single-antenna", ch.dims()),
            });
        }
        let pow = |tx: User, rx: User| ch.rho(tx, rx) * ch.h(tx, rx)[(0, 0)].norm_sqr();
        Ok(SisoParams {
            snr1: pow(User::One, User::One),
            snr2: pow(User::Two, User::Two),
            inr1: pow(User::Two, User::One),
            inr2: pow(User::One, User::Two),
        })
    }
}

/// The two weighted-sum rates of the counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SumRateComparison {
    /// Previously claimed cap on 2R1 + R2.
    pub claimed_cap: f64,
    /// Superposition rate for 2R1 + R2, already discounted by its
    /// constant analysis slack of three bits.
    pub achievable: f64,
}

impl SumRateComparison {
    /// Positive when the achievable rate beats the claimed cap, which
    /// refutes the cap.
    pub fn margin(&self) -> f64 {
        self.achievable - self.claimed_cap
    }
}

/// Evaluates the claimed weighted-sum cap and the discounted achievable
/// weighted-sum rate for a weak-interference single-antenna channel.
///
/// Requires `inr1 < snr2` and `inr2 < snr1`, with both interference powers
/// bounded away from zero so the achievable expression stays finite.
pub fn sum_rate_comparison(p: &SisoParams) -> Result<SumRateComparison, VerifyError> {
    let weak = p.inr1 < p.snr2 && p.inr2 < p.snr1;
    let nonzero = p.inr1 > 1e-12 && p.inr2 > 1e-12;
    if !weak || !nonzero {
        return Err(VerifyError::NotWeakIc {
            snr1: p.snr1,
            snr2: p.snr2,
            inr1: p.inr1,
            inr2: p.inr2,
        });
    }
    let claimed_cap = (1.0 + p.snr1 + p.inr1).log2()
        + (1.0 + p.snr1 / (1.0 + p.inr2)).log2()
        + (1.0 + p.inr1 + p.snr2 / (1.0 + p.inr2)).log2();
    let achievable = (1.0 + p.snr1 + p.inr1).log2()
        + (2.0 + p.snr1 / p.inr2).log2()
        + (1.0 + p.inr2 + p.snr2 / p.inr1).log2()
        - 3.0;
    Ok(SumRateComparison {
        claimed_cap,
        achievable,
    })
}

fn require_contraction(
    q: &HermitianMatrix,
    what: &'static str,
    tol: &ToleranceProfile,
) -> Result<(), VerifyError> {
    let min_eig = q.min_eigenvalue();
    if min_eig < -tol.tol_psd {
        return Err(VerifyError::PsdViolation { what, min_eig });
    }
    let slack = HermitianMatrix::identity(q.dim()).sub(q).min_eigenvalue();
    if slack < -tol.tol_psd {
        return Err(VerifyError::PsdViolation {
            what,
            min_eig: slack,
        });
    }
    Ok(())
}

/// Margin of the conditional-entropy bound used by the gap argument.
///
/// For transmit covariances `0 <= Q_i <= I`, the joint description of the
/// side information handed to receiver 1 (user 1's signal as seen at
/// receiver 2) together with receiver 1's own observation never carries
/// more conditional entropy than the closed-form cap in which user 1 is
/// whitened against its cross link. Returns `cap - value`; nonnegative
/// margins confirm the bound.
pub fn check_cond_entropy_bound(
    ch: &ChannelConfig,
    q1: &HermitianMatrix,
    q2: &HermitianMatrix,
) -> Result<f64, VerifyError> {
    let tol = ToleranceProfile::DEFAULT;
    let [m1, n1, m2, n2] = [
        ch.tx_dim(User::One),
        ch.rx_dim(User::One),
        ch.tx_dim(User::Two),
        ch.rx_dim(User::Two),
    ];
    if q1.dim() != m1 || q2.dim() != m2 {
        return Err(VerifyError::PreconditionViolation {
            what: format!(
                "covariance dims ({}, {}) do not match transmit dims ({m1}, {m2})",
                q1.dim(),
                q2.dim()
            ),
        });
    }
    require_contraction(q1, "Q1", &tol)?;
    require_contraction(q2, "Q2", &tol)?;

    let h11 = ch.h(User::One, User::One);
    let h12 = ch.h(User::One, User::Two);
    let h21 = ch.h(User::Two, User::One);
    let rho11 = ch.rho(User::One, User::One);
    let rho12 = ch.rho(User::One, User::Two);
    let rho21 = ch.rho(User::Two, User::One);

    // joint covariance of (side information, receiver-1 observation),
    // assembled block-wise so it is Hermitian by construction
    let side = sandwich(h12, q1)
        .scaled(rho12)
        .add(&HermitianMatrix::identity(n2));
    let obs = sandwich(h11, q1)
        .scaled(rho11)
        .add(&sandwich(h21, q2).scaled(rho21))
        .add(&HermitianMatrix::identity(n1));
    let cross = (h12 * q1.as_matrix() * h11.adjoint()) * C64::new((rho12 * rho11).sqrt(), 0.0);

    let dim = n1 + n2;
    let mut joint = DMatrix::<C64>::zeros(dim, dim);
    joint.view_mut((0, 0), (n2, n2)).copy_from(side.as_matrix());
    joint.view_mut((0, n2), (n2, n1)).copy_from(&cross);
    joint
        .view_mut((n2, 0), (n1, n2))
        .copy_from(&cross.adjoint());
    joint
        .view_mut((n2, n2), (n1, n1))
        .copy_from(obs.as_matrix());
    let joint = HermitianMatrix::new(joint, &tol)?;

    let value = logdet2(&joint, &tol)? - logdet2(&side, &tol)?;
    let whitened_own = sandwich(h11, &ch.k_matrix(User::One)).scaled(rho11);
    let cap_matrix = HermitianMatrix::identity(n1)
        .add(&gram(h21).scaled(rho21))
        .add(&whitened_own);
    let cap = logdet2(&cap_matrix, &tol)?;
    Ok(cap - value)
}

/// Margin of the matrix-order claim `f(G1) <= f(G2)` for
/// `f(G) = G (I + pi G A G)^{-1} G` under `0 <= G1 <= G2` and `A >= 0`.
///
/// Returns the smallest eigenvalue of `f(G2) - f(G1)`. The claim is false
/// in general (see the crate tests for a pinned counterexample), so
/// negative margins are informative output, not an error.
pub fn check_order_lemma(
    g1: &HermitianMatrix,
    g2: &HermitianMatrix,
    a: &HermitianMatrix,
    pi: f64,
) -> Result<f64, VerifyError> {
    let tol = ToleranceProfile::DEFAULT;
    if g1.dim() != g2.dim() || g1.dim() != a.dim() {
        return Err(VerifyError::PreconditionViolation {
            what: format!(
                "dims ({}, {}, {}) are not all equal",
                g1.dim(),
                g2.dim(),
                a.dim()
            ),
        });
    }
    if !(pi.is_finite() && pi >= 0.0) {
        return Err(VerifyError::PreconditionViolation {
            what: format!("pi = {pi} must be finite and nonnegative"),
        });
    }
    let min_g1 = g1.min_eigenvalue();
    if min_g1 < -tol.tol_psd {
        return Err(VerifyError::PsdViolation {
            what: "G1",
            min_eig: min_g1,
        });
    }
    if !psd_leq(g1, g2, &tol)? {
        return Err(VerifyError::PsdViolation {
            what: "G2 - G1",
            min_eig: g2.sub(g1).min_eigenvalue(),
        });
    }
    let min_a = a.min_eigenvalue();
    if min_a < -tol.tol_psd {
        return Err(VerifyError::PsdViolation {
            what: "A",
            min_eig: min_a,
        });
    }

    let f = |g: &HermitianMatrix| -> Result<HermitianMatrix, VerifyError> {
        let core = HermitianMatrix::identity(g.dim()).add(&sandwich(g.as_matrix(), a).scaled(pi));
        let inv = inv_hpd(&core, &tol)?;
        Ok(sandwich(g.as_matrix(), &inv))
    };
    Ok(f(g2)?.sub(&f(g1)?).min_eigenvalue())
}

/// Random positive semidefinite matrix (a complex Gaussian gram matrix).
pub fn random_psd(rng: &mut ChaCha12Rng, dim: usize) -> HermitianMatrix {
    let x = crate::channel::random_gaussian_matrix(rng, dim, dim);
    gram(&x)
}

/// Random matrix with `0 <= Q <= I`: a gram matrix shrunk just below its
/// spectral radius.
pub fn random_contraction(rng: &mut ChaCha12Rng, dim: usize) -> HermitianMatrix {
    let s = random_psd(rng, dim);
    let top = s.eigenvalues().last().copied().expect("nonempty spectrum");
    let shrink: f64 = rng.random_range(1.0..=2.0);
    s.scaled(1.0 / (top * shrink))
}

/// Outcome of a batch certification run.
///
/// `failures` holds one `(channel seed, what went wrong)` entry per failing
/// check; the run passed exactly when it is empty. `worst_margin` is the
/// smallest slack seen across all checks (bits) and is diagnostic only:
/// slacks within each check's tolerance still pass.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub trials: u32,
    pub failures: Vec<(u64, String)>,
    pub worst_margin: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn containment_slack(inner: &RateRegion2D, cover: &RateRegion2D) -> f64 {
    gap_certificate_slack(inner, cover, 0.0, 0.0)
}

/// Replays the headline claims over `trials` random channels of the given
/// antenna counts with powers uniform in `rho_db_range` dB: both gap
/// certificates, the reciprocity pairing of the outer bounds, and the
/// containment chain of the achievable regions. Channel seeds are
/// `seed, seed+1, ...`.
pub fn certify_theorems(
    dims: [usize; 4],
    trials: u32,
    seed: u64,
    rho_db_range: (f64, f64),
) -> VerificationReport {
    let tol = ToleranceProfile::DEFAULT;
    let mut failures: Vec<(u64, String)> = Vec::new();
    let mut worst = f64::INFINITY;

    for t in 0..trials {
        let ch_seed = seed.wrapping_add(t as u64);
        let ch = random_channel(dims, rho_db_range, ch_seed);
        let gaps = ch.gap_constants();
        let outer = outer_region(&ch);
        let r2 = region_r2(&ch);

        let slack_coarse = gap_certificate_slack(&outer, &r2, gaps.n1, gaps.n2);
        worst = worst.min(slack_coarse);
        if slack_coarse < -tol.tol_geom {
            failures.push((
                ch_seed,
                format!(
                    "coarse gap certificate failed by {:.3e} bits",
                    -slack_coarse
                ),
            ));
        }

        let slack_refined = gap_certificate_slack(&outer, &r2, gaps.n1_star, gaps.n2_star);
        worst = worst.min(slack_refined);
        if slack_refined < -tol.tol_geom {
            failures.push((
                ch_seed,
                format!(
                    "refined gap certificate failed by {:.3e} bits",
                    -slack_refined
                ),
            ));
        }

        let fwd = outer_bound(&ch);
        let rev = outer_bound(&ch.reciprocal());
        let deltas = [
            (rev.b1 - fwd.b1).abs(),
            (rev.b2 - fwd.b2).abs(),
            (rev.b3 - fwd.b4).abs(),
            (rev.b4 - fwd.b3).abs(),
            (rev.b5 - fwd.b5).abs(),
            (rev.b6 - fwd.b6).abs(),
            (rev.b7 - fwd.b7).abs(),
        ];
        let max_delta = deltas.iter().copied().fold(0.0, f64::max);
        worst = worst.min(-max_delta);
        if max_delta > tol.tol_eq {
            failures.push((
                ch_seed,
                format!("reciprocity pairing off by {max_delta:.3e} bits"),
            ));
        }

        let ra = region_ra(&ch);
        let ra_star = region_ra_star(&ch);
        let ge = region_ge(&ch, &simple_split(&ch));
        let chain: [(&str, &RateRegion2D, &RateRegion2D); 4] = [
            ("coarse region inside refined region", &ra, &ra_star),
            ("refined region inside achievable region", &ra_star, &r2),
            ("achievable region inside outer region", &r2, &outer),
            ("nine-constraint region inside achievable region", &ge, &r2),
        ];
        for (what, inner, cover) in chain {
            let slack = containment_slack(inner, cover);
            worst = worst.min(slack);
            if slack < -tol.tol_geom {
                failures.push((ch_seed, format!("{what} failed by {:.3e} bits", -slack)));
            }
        }
    }

    VerificationReport {
        name: format!(
            "gap, reciprocity, and containment claims at dims {:?}",
            dims
        ),
        trials,
        failures,
        worst_margin: worst,
    }
}
