//! Explicit outer bounds on the rate region.
//!
//! Seven log-determinant expressions cap the single rates, the sum rate
//! (three ways), and the two weighted sums 2R1+R2 and R1+2R2. The sum and
//! weighted-sum caps charge each receiver either the full interfering signal
//! or the interferer whitened by its own cross link, never more than genie
//! arguments justify, which is what keeps the caps within a constant of the
//! achievable region.

use crate::channel::{ChannelConfig, User};
use crate::geometry::RateRegion2D;
use crate::matrix::{gram, logdet2, sandwich, HermitianMatrix, ToleranceProfile};
use serde::Serialize;

/// Values of the seven outer bounds, in bits per channel use.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateBoundSet {
    /// Cap on R1.
    pub b1: f64,
    /// Cap on R2.
    pub b2: f64,
    /// Sum cap charging receiver 2 the full multiple-access load.
    pub b3: f64,
    /// Sum cap charging receiver 1 the full multiple-access load.
    pub b4: f64,
    /// Sum cap with both own signals whitened against their cross links.
    pub b5: f64,
    /// Cap on 2R1 + R2.
    pub b6: f64,
    /// Cap on R1 + 2R2.
    pub b7: f64,
}

impl RateBoundSet {
    pub fn as_array(&self) -> [f64; 7] {
        [
            self.b1, self.b2, self.b3, self.b4, self.b5, self.b6, self.b7,
        ]
    }
}

/// Per-receiver log-determinant building blocks.
struct ReceiverTerms {
    /// Own signal alone.
    own_alone: f64,
    /// Own signal plus the cross signal, both at full power.
    mac_full: f64,
    /// Own signal whitened by its transmitter's cross link, alone.
    white_alone: f64,
    /// Whitened own signal plus the full cross signal.
    white_plus_cross: f64,
}

fn ld(m: &HermitianMatrix) -> f64 {
    logdet2(m, &ToleranceProfile::DEFAULT).expect("I plus a gram matrix is positive definite")
}

fn receiver_terms(ch: &ChannelConfig, rx: User) -> ReceiverTerms {
    let tx_cross = rx.other();
    let h_own = ch.h(rx, rx);
    let h_cross = ch.h(tx_cross, rx);
    let eye = HermitianMatrix::identity(ch.rx_dim(rx));

    let own_full = gram(h_own).scaled(ch.rho(rx, rx));
    let cross_full = gram(h_cross).scaled(ch.rho(tx_cross, rx));
    let own_white = sandwich(h_own, &ch.k_matrix(rx)).scaled(ch.rho(rx, rx));

    ReceiverTerms {
        own_alone: ld(&eye.add(&own_full)),
        mac_full: ld(&eye.add(&cross_full).add(&own_full)),
        white_alone: ld(&eye.add(&own_white)),
        white_plus_cross: ld(&eye.add(&cross_full).add(&own_white)),
    }
}

/// Evaluates all seven outer bounds for a channel.
pub fn outer_bound(ch: &ChannelConfig) -> RateBoundSet {
    let r1 = receiver_terms(ch, User::One);
    let r2 = receiver_terms(ch, User::Two);
    RateBoundSet {
        b1: r1.own_alone,
        b2: r2.own_alone,
        b3: r2.mac_full + r1.white_alone,
        b4: r1.mac_full + r2.white_alone,
        b5: r1.white_plus_cross + r2.white_plus_cross,
        b6: r1.mac_full + r1.white_alone + r2.white_plus_cross,
        b7: r2.mac_full + r2.white_alone + r1.white_plus_cross,
    }
}

/// Outer-bound polytope: the five-constraint region cut out by the bounds,
/// with the sum rate capped by the tightest of the three sum expressions.
pub fn outer_region(ch: &ChannelConfig) -> RateRegion2D {
    let b = outer_bound(ch);
    let sum = b.b3.min(b.b4).min(b.b5);
    RateRegion2D::new(vec![
        (1, 0, b.b1),
        (0, 1, b.b2),
        (1, 1, sum),
        (2, 1, b.b6),
        (1, 2, b.b7),
    ])
    .expect("outer bounds are nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::random_channel;
    use crate::fixtures;

    fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
        assert!((got - want).abs() < tol, "{what}: got {got}, want {want}");
    }

    #[test]
    fn example1_bounds_match_reference() {
        // reference values computed independently for the bundled channel
        let b = outer_bound(&fixtures::example1());
        assert_close(b.b1, 10.984418458801137, 1e-9, "b1");
        assert_close(b.b2, 9.815383296022524, 1e-8, "b2");
        assert_close(b.b3, 12.657841355, 1e-8, "b3");
        assert_close(b.b4, 17.498607719, 1e-8, "b4");
        assert_close(b.b5, 13.210082912, 1e-8, "b5");
        assert_close(b.b6, 22.556930964, 1e-8, "b6");
        assert_close(b.b7, 20.809601022, 1e-8, "b7");
    }

    #[test]
    fn example2_bounds_match_reference() {
        let b = outer_bound(&fixtures::example2());
        assert_close(b.b1, 14.872259244, 1e-8, "b1");
        assert_close(b.b2, 11.471306142, 1e-8, "b2");
        assert_close(b.b3, 20.957768069, 1e-8, "b3");
        assert_close(b.b4, 20.946813885, 1e-8, "b4");
        assert_close(b.b5, 19.681889402, 1e-8, "b5");
        assert_close(b.b6, 33.369818996, 1e-8, "b6");
        assert_close(b.b7, 28.216652360, 1e-8, "b7");
    }

    #[test]
    fn weighted_caps_dominate_the_whitened_sum_cap() {
        for seed in 0..40u64 {
            let ch = random_channel([2, 2, 2, 2], (0.0, 40.0), seed);
            let b = outer_bound(&ch);
            assert!(b.b6 >= b.b5 - 1e-9, "b6 {} < b5 {}", b.b6, b.b5);
            assert!(b.b7 >= b.b5 - 1e-9, "b7 {} < b5 {}", b.b7, b.b5);
        }
    }

    #[test]
    fn outer_region_uses_tightest_sum_cap() {
        let ch = fixtures::example2();
        let b = outer_bound(&ch);
        let region = outer_region(&ch);
        let sum_rhs = region
            .constraints()
            .iter()
            .find(|c| (c.a1, c.a2) == (1, 1))
            .unwrap()
            .rhs;
        assert_eq!(sum_rhs, b.b3.min(b.b4).min(b.b5));
    }
}
