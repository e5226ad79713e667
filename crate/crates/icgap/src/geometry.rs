//! Polyhedral geometry for two-dimensional rate regions.
//!
//! Regions are intersections of half-planes `a1*R1 + a2*R2 <= rhs` with
//! coefficient patterns drawn from {(1,0), (0,1), (1,1), (2,1), (1,2)} plus
//! the implicit nonnegativity of both rates. Dimensions this small allow
//! exact vertex enumeration by pairwise line intersection, which keeps the
//! containment and certification logic free of iterative solvers.

use crate::matrix::ToleranceProfile;
use serde::Serialize;
use thiserror::Error;

/// A rate point (R1, R2) in bits per channel use.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Self {
        RatePair { r1, r2 }
    }
}

/// Half-plane `a1*R1 + a2*R2 <= rhs` with a supported coefficient pattern.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constraint {
    pub a1: u8,
    pub a2: u8,
    pub rhs: f64,
}

/// Coefficient patterns a region may use.
pub const COEFF_PATTERNS: [(u8, u8); 5] = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)];

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("coefficient pattern ({a1},{a2}) is not supported")]
    BadPattern { a1: u8, a2: u8 },
    #[error("right-hand side {rhs} is negative or not finite")]
    BadRhs { rhs: f64 },
}

/// Intersection of validated half-planes together with R1 >= 0, R2 >= 0.
///
/// Duplicate coefficient patterns are allowed; the tightest instance governs.
#[derive(Clone, Debug, PartialEq)]
pub struct RateRegion2D {
    constraints: Vec<Constraint>,
}

fn tol_geom() -> f64 {
    ToleranceProfile::DEFAULT.tol_geom
}

/// Solves the 2x2 system a1*x + b1*y = c1, a2*x + b2*y = c2.
/// Returns None for (near-)parallel lines.
pub fn line_intersection(l1: (f64, f64, f64), l2: (f64, f64, f64)) -> Option<(f64, f64)> {
    let (a1, b1, c1) = l1;
    let (a2, b2, c2) = l2;
    let det = a1 * b2 - a2 * b1;
    if det.abs() <= 1e-9 {
        return None;
    }
    let x = (c1 * b2 - c2 * b1) / det;
    let y = (a1 * c2 - a2 * c1) / det;
    (x.is_finite() && y.is_finite()).then_some((x, y))
}

impl RateRegion2D {
    /// Builds a region from `(a1, a2, rhs)` triples. Every pattern must be
    /// one of [`COEFF_PATTERNS`] and every right-hand side finite and
    /// nonnegative.
    pub fn new(constraints: Vec<(u8, u8, f64)>) -> Result<Self, GeometryError> {
        let mut checked = Vec::with_capacity(constraints.len());
        for (a1, a2, rhs) in constraints {
            if !COEFF_PATTERNS.contains(&(a1, a2)) {
                return Err(GeometryError::BadPattern { a1, a2 });
            }
            if !rhs.is_finite() || rhs < 0.0 {
                return Err(GeometryError::BadRhs { rhs });
            }
            checked.push(Constraint { a1, a2, rhs });
        }
        Ok(RateRegion2D {
            constraints: checked,
        })
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// True when the point satisfies every constraint and both
    /// nonnegativity conditions, each within the geometric tolerance.
    pub fn contains(&self, p: RatePair) -> bool {
        let tol = tol_geom();
        if p.r1 < -tol || p.r2 < -tol {
            return false;
        }
        self.constraints
            .iter()
            .all(|c| c.a1 as f64 * p.r1 + c.a2 as f64 * p.r2 <= c.rhs + tol)
    }

    /// Polygon corners of the region.
    ///
    /// The boundary walk starts at the vertex on the R2 axis, follows the
    /// outer frontier to the R1 axis, and closes with the origin. Points
    /// within the geometric tolerance of each other collapse to the
    /// lexicographically smallest representative.
    pub fn vertices(&self) -> Vec<RatePair> {
        let tol = tol_geom();
        let mut lines: Vec<(f64, f64, f64)> = self
            .constraints
            .iter()
            .map(|c| (c.a1 as f64, c.a2 as f64, c.rhs))
            .collect();
        lines.push((1.0, 0.0, 0.0));
        lines.push((0.0, 1.0, 0.0));

        let mut candidates: Vec<RatePair> = Vec::new();
        for i in 0..lines.len() {
            for j in (i + 1)..lines.len() {
                if let Some((x, y)) = line_intersection(lines[i], lines[j]) {
                    if x < -tol || y < -tol {
                        continue;
                    }
                    let feasible = self
                        .constraints
                        .iter()
                        .all(|c| c.a1 as f64 * x + c.a2 as f64 * y <= c.rhs + tol);
                    if feasible {
                        // snap tolerance-scale negatives onto the axes
                        candidates.push(RatePair::new(x.max(0.0), y.max(0.0)));
                    }
                }
            }
        }

        candidates.sort_by(|p, q| {
            (p.r1, p.r2)
                .partial_cmp(&(q.r1, q.r2))
                .expect("finite coordinates")
        });
        let mut kept: Vec<RatePair> = Vec::new();
        for p in candidates {
            let duplicate = kept
                .iter()
                .any(|q| (q.r1 - p.r1).abs() <= tol && (q.r2 - p.r2).abs() <= tol);
            if !duplicate {
                kept.push(p);
            }
        }

        order_boundary_walk(kept)
    }
}

/// Orders polygon corners as a boundary walk: frontier from the R2 axis down
/// to the R1 axis, then the origin. The origin-only region stays a single
/// point.
fn order_boundary_walk(points: Vec<RatePair>) -> Vec<RatePair> {
    let (origin, mut frontier): (Vec<RatePair>, Vec<RatePair>) =
        points.into_iter().partition(|p| p.r1 == 0.0 && p.r2 == 0.0);
    frontier.sort_by(|p, q| {
        (p.r1, -p.r2)
            .partial_cmp(&(q.r1, -q.r2))
            .expect("finite coordinates")
    });
    frontier.extend(origin);
    frontier
}

/// Smallest slack of the gap certificate: over every corner `v` of the outer
/// region and every constraint of the inner region, the margin by which the
/// shifted corner `(v1 - g1, v2 - g2)` satisfies the constraint.
///
/// Shifted corners may go negative; a negative coordinate only loosens the
/// inequality, matching the per-constraint form the certificate encodes, so
/// no clamping is applied.
pub fn gap_certificate_slack(outer: &RateRegion2D, inner: &RateRegion2D, g1: f64, g2: f64) -> f64 {
    let mut slack = f64::INFINITY;
    for v in outer.vertices() {
        let (x, y) = (v.r1 - g1, v.r2 - g2);
        for c in inner.constraints() {
            slack = slack.min(c.rhs - (c.a1 as f64 * x + c.a2 as f64 * y));
        }
    }
    slack
}

/// True when shifting the outer region down by `(g1, g2)` lands inside the
/// inner region, within the geometric tolerance.
pub fn gap_certified(outer: &RateRegion2D, inner: &RateRegion2D, g1: f64, g2: f64) -> bool {
    gap_certificate_slack(outer, inner, g1, g2) >= -tol_geom()
}

/// Corners of the convex hull of every region's corner set, ordered as a
/// boundary walk. This is the time-sharing envelope of the regions.
pub fn hull_union(regions: &[RateRegion2D]) -> Vec<RatePair> {
    let tol = tol_geom();
    let mut points: Vec<RatePair> = regions.iter().flat_map(|r| r.vertices()).collect();
    points.sort_by(|p, q| {
        (p.r1, p.r2)
            .partial_cmp(&(q.r1, q.r2))
            .expect("finite coordinates")
    });
    let mut unique: Vec<RatePair> = Vec::new();
    for p in points {
        let duplicate = unique
            .iter()
            .any(|q| (q.r1 - p.r1).abs() <= tol && (q.r2 - p.r2).abs() <= tol);
        if !duplicate {
            unique.push(p);
        }
    }
    if unique.len() <= 2 {
        return order_boundary_walk(unique);
    }

    // Andrew monotone chain on the lexicographically sorted points
    let cross = |o: RatePair, a: RatePair, b: RatePair| {
        (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
    };
    let mut lower: Vec<RatePair> = Vec::new();
    for &p in &unique {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 1e-9 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<RatePair> = Vec::new();
    for &p in unique.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 1e-9 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    order_boundary_walk(lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(cs: &[(u8, u8, f64)]) -> RateRegion2D {
        RateRegion2D::new(cs.to_vec()).unwrap()
    }

    fn assert_points(got: &[RatePair], want: &[(f64, f64)]) {
        assert_eq!(got.len(), want.len(), "got {got:?}, want {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert!(
                (g.r1 - w.0).abs() < 1e-9 && (g.r2 - w.1).abs() < 1e-9,
                "got {got:?}, want {want:?}"
            );
        }
    }

    #[test]
    fn unit_square_has_four_corners() {
        let r = region(&[(1, 0, 1.0), (0, 1, 1.0)]);
        assert_points(
            &r.vertices(),
            &[(0.0, 1.0), (1.0, 1.0), (1.0, 0.0), (0.0, 0.0)],
        );
    }

    #[test]
    fn sum_constraint_cuts_square_into_pentagon() {
        let r = region(&[(1, 0, 2.0), (0, 1, 2.0), (1, 1, 3.0)]);
        assert_points(
            &r.vertices(),
            &[(0.0, 2.0), (1.0, 2.0), (2.0, 1.0), (2.0, 0.0), (0.0, 0.0)],
        );
    }

    #[test]
    fn all_zero_region_is_the_origin() {
        let r = region(&[(1, 0, 0.0), (0, 1, 0.0)]);
        assert_points(&r.vertices(), &[(0.0, 0.0)]);
    }

    #[test]
    fn contains_accepts_boundary_within_tolerance() {
        let r = region(&[(1, 0, 1.0), (0, 1, 1.0)]);
        assert!(r.contains(RatePair::new(1.0, 1.0)));
        assert!(r.contains(RatePair::new(1.0 + 5e-7, 0.5)));
        assert!(!r.contains(RatePair::new(1.01, 0.5)));
        assert!(!r.contains(RatePair::new(-0.01, 0.5)));
    }

    #[test]
    fn zero_gap_certificate_holds_for_region_against_itself() {
        let r = region(&[
            (1, 0, 2.0),
            (0, 1, 2.0),
            (1, 1, 3.0),
            (2, 1, 5.0),
            (1, 2, 5.0),
        ]);
        assert!(gap_certified(&r, &r, 0.0, 0.0));
    }

    #[test]
    fn gap_certificate_detects_sufficient_and_insufficient_shifts() {
        let outer = region(&[(1, 0, 2.0), (0, 1, 2.0)]);
        let inner = region(&[(1, 0, 1.0), (0, 1, 1.0)]);
        assert!(gap_certified(&outer, &inner, 1.0, 1.0));
        assert!(!gap_certified(&outer, &inner, 0.5, 0.5));
    }

    #[test]
    fn shifted_corner_may_go_negative_without_spoiling_the_certificate() {
        // outer corner (0, 2) shifts to (-1, 0): negative first coordinate
        // only adds slack in every supported constraint
        let outer = region(&[(1, 0, 2.0), (0, 1, 2.0)]);
        let inner = region(&[(1, 0, 1.0), (0, 1, 0.5), (1, 1, 1.2)]);
        assert!(gap_certified(&outer, &inner, 1.0, 2.0));
    }

    #[test]
    fn hull_of_two_rectangles_is_their_time_sharing_envelope() {
        let a = region(&[(1, 0, 2.0), (0, 1, 1.0)]);
        let b = region(&[(1, 0, 1.0), (0, 1, 2.0)]);
        let hull = hull_union(&[a, b]);
        assert_points(
            &hull,
            &[(0.0, 2.0), (1.0, 2.0), (2.0, 1.0), (2.0, 0.0), (0.0, 0.0)],
        );
    }

    #[test]
    fn unsupported_pattern_is_rejected() {
        assert!(matches!(
            RateRegion2D::new(vec![(2, 2, 1.0)]),
            Err(GeometryError::BadPattern { .. })
        ));
        assert!(matches!(
            RateRegion2D::new(vec![(1, 0, -0.5)]),
            Err(GeometryError::BadRhs { .. })
        ));
    }

    #[test]
    fn duplicate_patterns_keep_the_tightest_cut() {
        let r = region(&[(1, 1, 3.0), (1, 1, 2.0), (1, 0, 5.0), (0, 1, 5.0)]);
        assert!(!r.contains(RatePair::new(1.5, 1.0)));
        assert!(r.contains(RatePair::new(1.0, 1.0)));
    }
}
