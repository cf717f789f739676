//! Rate points and the Pareto / convex-hull geometry of rate regions.
//!
//! Throughout, a point `p` dominates `q` iff `p.r_a ≥ q.r_a` and
//! `p.r_l ≤ q.r_l` with at least one inequality strict: more amplification
//! for the legitimate receiver at no more leakage to the eavesdropper.

use crate::{Error, Result, HULL_COLLINEAR_TOLERANCE, NEGATIVE_CLAMP};
use serde::Serialize;

/// An (amplification, leakage) rate pair in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePoint {
    pub r_a: f64,
    pub r_l: f64,
}

impl RatePoint {
    /// Builds a point, zeroing negative rounding noise within
    /// `NEGATIVE_CLAMP`. Genuinely negative coordinates are rejected.
    pub fn new(r_a: f64, r_l: f64) -> Result<Self> {
        let clamp = |v: f64, name: &str| -> Result<f64> {
            if !v.is_finite() || v < -NEGATIVE_CLAMP {
                return Err(Error::InvalidParameter(format!("{name} = {v} is negative")));
            }
            Ok(if v < 0.0 { 0.0 } else { v })
        };
        Ok(Self {
            r_a: clamp(r_a, "r_a")?,
            r_l: clamp(r_l, "r_l")?,
        })
    }

    /// True iff `self` dominates `other` (see module docs).
    pub fn dominates(&self, other: &RatePoint) -> bool {
        self.r_a >= other.r_a
            && self.r_l <= other.r_l
            && (self.r_a > other.r_a || self.r_l < other.r_l)
    }
}

/// Whether a frontier bounds an achievable (inner) region or a converse
/// (outer) region. Both use the same dominance geometry; the label records
/// which side of the capacity region the points certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrontierKind {
    Inner,
    Outer,
}

impl std::fmt::Display for FrontierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FrontierKind::Inner => write!(f, "inner"),
            FrontierKind::Outer => write!(f, "outer"),
        }
    }
}

/// A mutually non-dominated set of rate points sorted by increasing `r_l`
/// (hence increasing `r_a`).
#[derive(Debug, Clone, Serialize)]
pub struct Frontier {
    pub points: Vec<RatePoint>,
    pub kind: FrontierKind,
    /// True when the points have additionally been reduced to the upper
    /// concave envelope of `r_a` over `r_l` (time-sharing closure).
    pub hull_applied: bool,
}

impl Frontier {
    /// An empty frontier, used when a sweep finds no feasible policy.
    pub fn empty(kind: FrontierKind) -> Self {
        Self {
            points: Vec::new(),
            kind,
            hull_applied: false,
        }
    }

    /// Whether `p` lies inside the region described by this frontier, with
    /// `tol` slack per coordinate. A hulled frontier interpolates along its
    /// segments (time sharing between adjacent operating points); an
    /// un-hulled frontier is read as a union of quadrants, so some single
    /// point must dominate `p` outright.
    pub fn covers(&self, p: &RatePoint, tol: f64) -> bool {
        if self.points.is_empty() {
            return false;
        }
        if !self.hull_applied {
            return self
                .points
                .iter()
                .any(|q| q.r_a + tol >= p.r_a && q.r_l <= p.r_l + tol);
        }
        let rl = p.r_l + tol;
        let first = self.points[0];
        if rl < first.r_l {
            // Leakage below the frontier's minimum cannot be claimed at all.
            return false;
        }
        let mut limit = first.r_a;
        for w in self.points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if rl >= b.r_l {
                limit = limit.max(b.r_a);
                continue;
            }
            let t = if b.r_l > a.r_l {
                (rl - a.r_l) / (b.r_l - a.r_l)
            } else {
                1.0
            };
            limit = limit.max(a.r_a + t * (b.r_a - a.r_a));
            break;
        }
        p.r_a <= limit + tol
    }
}

/// Indices (into `points`) of the non-dominated subset, sorted by increasing
/// `r_l`, exact duplicates reduced to their first occurrence. Split out from
/// [`pareto_frontier`] so sweeps can filter per-point metadata in lockstep.
pub(crate) fn pareto_indices(points: &[RatePoint]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    // Sort by (r_l asc, r_a desc, index asc); with that order a single pass
    // keeping strict increases of r_a removes exactly the dominated points.
    order.sort_by(|&a, &b| {
        points[a]
            .r_l
            .total_cmp(&points[b].r_l)
            .then(points[b].r_a.total_cmp(&points[a].r_a))
            .then(a.cmp(&b))
    });
    let mut kept = Vec::new();
    let mut best_ra = f64::NEG_INFINITY;
    for &i in &order {
        if points[i].r_a > best_ra {
            kept.push(i);
            best_ra = points[i].r_a;
        }
    }
    kept
}

/// Removes dominated points and sorts by increasing `r_l`. Deterministic:
/// exactly equal points are deduplicated, and ties in one coordinate are
/// resolved by the strict dominance rule.
pub fn pareto_frontier(points: &[RatePoint], kind: FrontierKind) -> Result<Frontier> {
    if points.is_empty() {
        return Err(Error::EmptyInput("pareto_frontier of no points".into()));
    }
    let kept = pareto_indices(points);
    Ok(Frontier {
        points: kept.into_iter().map(|i| points[i]).collect(),
        kind,
        hull_applied: false,
    })
}

/// Indices (into the sorted, non-dominated `points`) retained on the upper
/// concave envelope. Collinear middle points within the cross-product
/// tolerance are merged away.
pub(crate) fn envelope_indices(points: &[RatePoint]) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        while stack.len() >= 2 {
            let a = points[stack[stack.len() - 2]];
            let b = points[stack[stack.len() - 1]];
            let c = points[i];
            // b at or below the chord a—c makes no concave contribution.
            let cross = (b.r_l - a.r_l) * (c.r_a - a.r_a) - (b.r_a - a.r_a) * (c.r_l - a.r_l);
            if cross >= -HULL_COLLINEAR_TOLERANCE {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(i);
    }
    stack
}

/// Upper concave envelope of `r_a` as a function of `r_l`: the time-sharing
/// closure of the frontier. Requires at least one point.
pub fn convex_hull_envelope(f: &Frontier) -> Result<Frontier> {
    if f.points.is_empty() {
        return Err(Error::EmptyInput("convex hull of an empty frontier".into()));
    }
    let kept = envelope_indices(&f.points);
    Ok(Frontier {
        points: kept.into_iter().map(|i| f.points[i]).collect(),
        kind: f.kind,
        hull_applied: true,
    })
}
