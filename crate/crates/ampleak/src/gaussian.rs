//! Additive Gaussian model: `Y = X + S + N`, `Z = X + S + N_z` with an input
//! power budget and jointly Gaussian coding `X = ρ(σ_x/σ_s)S + √(1−ρ²)σ_x V`.
//!
//! Everything here is closed form: the uncoded inner region, the converse
//! corner, the two gap formulas, the amplification-minus-leakage ceiling,
//! and the differential amplification capacity for the degraded ordering
//! `σ_n² ≤ σ_{n_z}²`.

use crate::frontier::{envelope_indices, pareto_indices, Frontier, FrontierKind, RatePoint};
use crate::regions::{BoundName, CdMethod, RegionEvalResult};
use crate::{Error, Result};

/// State variance, the two noise variances, and the input power budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    sigma_s2: f64,
    sigma_n2: f64,
    sigma_nz2: f64,
    power: f64,
}

impl GaussianParams {
    pub fn new(sigma_s2: f64, sigma_n2: f64, sigma_nz2: f64, power: f64) -> Result<Self> {
        for (name, v) in [
            ("sigma_s2", sigma_s2),
            ("sigma_n2", sigma_n2),
            ("sigma_nz2", sigma_nz2),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be strictly positive"
                )));
            }
        }
        if !power.is_finite() || power < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "power = {power} must be nonnegative"
            )));
        }
        Ok(Self {
            sigma_s2,
            sigma_n2,
            sigma_nz2,
            power,
        })
    }

    pub fn sigma_s2(&self) -> f64 {
        self.sigma_s2
    }

    pub fn sigma_n2(&self) -> f64 {
        self.sigma_n2
    }

    pub fn sigma_nz2(&self) -> f64 {
        self.sigma_nz2
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    fn sigma_s(&self) -> f64 {
        self.sigma_s2.sqrt()
    }
}

/// One jointly Gaussian input scheme: correlation with the state and the
/// input standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncodedScheme {
    rho: f64,
    sigma_x: f64,
}

impl UncodedScheme {
    pub fn new(rho: f64, sigma_x: f64) -> Result<Self> {
        if !rho.is_finite() || !(-1.0..=1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!(
                "rho = {rho} outside [-1, 1]"
            )));
        }
        if !sigma_x.is_finite() || sigma_x < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma_x = {sigma_x} must be nonnegative"
            )));
        }
        Ok(Self { rho, sigma_x })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }
}

fn check_power(gp: &GaussianParams, sch: &UncodedScheme) -> Result<()> {
    if sch.sigma_x * sch.sigma_x > gp.power + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "sigma_x^2 = {} exceeds the power budget {}",
            sch.sigma_x * sch.sigma_x,
            gp.power
        )));
    }
    Ok(())
}

fn half_log2_1p(ratio: f64) -> f64 {
    0.5 * (1.0 + ratio).log2()
}

/// The uncoded rate pair: both coordinates are
/// `½log₂(1 + (σ_s + ρσ_x)² / (σ_noise² + (1−ρ²)σ_x²))` with Bob's and
/// Eve's noise variance respectively.
pub fn uncoded_point(gp: &GaussianParams, sch: &UncodedScheme) -> Result<RatePoint> {
    check_power(gp, sch)?;
    let num = gp.sigma_s2 + 2.0 * sch.rho * gp.sigma_s() * sch.sigma_x
        + sch.rho * sch.rho * sch.sigma_x * sch.sigma_x;
    let residual = (1.0 - sch.rho * sch.rho) * sch.sigma_x * sch.sigma_x;
    RatePoint::new(
        half_log2_1p(num.max(0.0) / (gp.sigma_n2 + residual)),
        half_log2_1p(num.max(0.0) / (gp.sigma_nz2 + residual)),
    )
}

/// Converse corner for one scheme:
/// `A = ½log₂(1 + (σ_s² + σ_x² + 2ρσ_sσ_x)/σ_n²)` and `L` equal to the
/// uncoded leakage coordinate.
pub fn outer_point(gp: &GaussianParams, sch: &UncodedScheme) -> Result<RegionEvalResult> {
    check_power(gp, sch)?;
    let shared = gp.sigma_s2 + sch.sigma_x * sch.sigma_x
        + 2.0 * sch.rho * gp.sigma_s() * sch.sigma_x;
    let l_num = gp.sigma_s2 + sch.rho * sch.rho * sch.sigma_x * sch.sigma_x
        + 2.0 * sch.rho * gp.sigma_s() * sch.sigma_x;
    let residual = (1.0 - sch.rho * sch.rho) * sch.sigma_x * sch.sigma_x;
    Ok(RegionEvalResult {
        point: RatePoint::new(
            half_log2_1p(shared.max(0.0) / gp.sigma_n2),
            half_log2_1p(l_num.max(0.0) / (gp.sigma_nz2 + residual)),
        )?,
        feasible: true,
        r_u_used: 0.0,
        bound_name: BoundName::Rout1,
    })
}

/// A frontier with the `(ρ, σ_x)` scheme behind each point.
#[derive(Debug, Clone)]
pub struct SchemeFrontier {
    pub frontier: Frontier,
    pub schemes: Vec<UncodedScheme>,
}

fn sweep_schemes(gp: &GaussianParams, grid: usize) -> Result<Vec<UncodedScheme>> {
    if grid < 2 {
        return Err(Error::InvalidParameter(format!(
            "scheme grid {grid} below 2"
        )));
    }
    let mut schemes = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        let rho = -1.0 + 2.0 * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let sigma_x = (gp.power * j as f64 / (grid - 1) as f64).sqrt();
            schemes.push(UncodedScheme::new(rho, sigma_x)?);
        }
    }
    Ok(schemes)
}

/// Sweeps ρ over `[−1, 1]` and σ_x² over `[0, P]` on a `grid × grid` lattice
/// and returns the time-sharing hull of the uncoded points.
pub fn uncoded_region_detailed(gp: &GaussianParams, grid: usize) -> Result<SchemeFrontier> {
    let schemes = sweep_schemes(gp, grid)?;
    let points: Vec<RatePoint> = schemes
        .iter()
        .map(|s| uncoded_point(gp, s))
        .collect::<Result<_>>()?;
    let keep = pareto_indices(&points);
    let pruned: Vec<RatePoint> = keep.iter().map(|&i| points[i]).collect();
    let hull = envelope_indices(&pruned);
    Ok(SchemeFrontier {
        frontier: Frontier {
            points: hull.iter().map(|&i| pruned[i]).collect(),
            kind: FrontierKind::Inner,
            hull_applied: true,
        },
        schemes: hull.iter().map(|&i| schemes[keep[i]]).collect(),
    })
}

/// [`uncoded_region_detailed`] without the scheme labels.
pub fn uncoded_region(gp: &GaussianParams, grid: usize) -> Result<Frontier> {
    uncoded_region_detailed(gp, grid).map(|r| r.frontier)
}

/// Sweeps the converse corners over the same scheme lattice (no hull; the
/// corners describe a union of quadrants).
pub fn outer_region_detailed(gp: &GaussianParams, grid: usize) -> Result<SchemeFrontier> {
    let schemes = sweep_schemes(gp, grid)?;
    let points: Vec<RatePoint> = schemes
        .iter()
        .map(|s| outer_point(gp, s).map(|r| r.point))
        .collect::<Result<_>>()?;
    let keep = pareto_indices(&points);
    Ok(SchemeFrontier {
        frontier: Frontier {
            points: keep.iter().map(|&i| points[i]).collect(),
            kind: FrontierKind::Outer,
            hull_applied: false,
        },
        schemes: keep.iter().map(|&i| schemes[i]).collect(),
    })
}

/// Ceiling on `r_a − r_l` for one scheme under the degraded ordering
/// `σ_n² ≤ σ_{n_z}²`: the two-term difference sharing the numerator
/// `σ_s² + 2ρσ_sσ_x + σ_x²`.
pub fn rarl_difference_bound(gp: &GaussianParams, sch: &UncodedScheme) -> Result<f64> {
    if gp.sigma_n2 > gp.sigma_nz2 {
        return Err(Error::Precondition(format!(
            "requires sigma_n2 <= sigma_nz2, got {} > {}",
            gp.sigma_n2, gp.sigma_nz2
        )));
    }
    check_power(gp, sch)?;
    let num = (gp.sigma_s2 + 2.0 * sch.rho * gp.sigma_s() * sch.sigma_x
        + sch.sigma_x * sch.sigma_x)
        .max(0.0);
    Ok(half_log2_1p(num / gp.sigma_n2) - half_log2_1p(num / gp.sigma_nz2))
}

/// Differential amplification capacity with the attaining scheme.
#[derive(Debug, Clone, Copy)]
pub struct GaussianCd {
    pub c_d: f64,
    pub argmax: UncodedScheme,
    pub method: CdMethod,
}

/// `½log₂(1 + (σ_s+√P)²/σ_n²) − ½log₂(1 + (σ_s+√P)²/σ_{n_z}²)`, attained by
/// full-power pure state forwarding `(ρ = 1, σ_x = √P)`. Only valid under
/// the degraded ordering `σ_n² ≤ σ_{n_z}²`; the reversely ordered case is
/// refused rather than extrapolated.
pub fn cd_gaussian(gp: &GaussianParams) -> Result<GaussianCd> {
    if gp.sigma_n2 > gp.sigma_nz2 {
        return Err(Error::Precondition(format!(
            "requires sigma_n2 <= sigma_nz2, got {} > {}",
            gp.sigma_n2, gp.sigma_nz2
        )));
    }
    let amplified = gp.sigma_s() + gp.power.sqrt();
    let num = amplified * amplified;
    Ok(GaussianCd {
        c_d: half_log2_1p(num / gp.sigma_n2) - half_log2_1p(num / gp.sigma_nz2),
        argmax: UncodedScheme::new(1.0, gp.power.sqrt())?,
        method: CdMethod::ClosedForm,
    })
}

/// Amplification gap between the converse corner and the uncoded point at
/// the same scheme: `½log₂(1 + σ_x²(1−ρ²)/σ_n²)`, an algebraic identity.
pub fn gap_ra(gp: &GaussianParams, sch: &UncodedScheme) -> Result<f64> {
    check_power(gp, sch)?;
    Ok(half_log2_1p(
        sch.sigma_x * sch.sigma_x * (1.0 - sch.rho * sch.rho) / gp.sigma_n2,
    ))
}

/// Leakage-side analogue of [`gap_ra`] with Eve's noise variance; bounds the
/// leakage overshoot of the uncoded scheme.
pub fn gap_rl(gp: &GaussianParams, sch: &UncodedScheme) -> Result<f64> {
    check_power(gp, sch)?;
    Ok(half_log2_1p(
        sch.sigma_x * sch.sigma_x * (1.0 - sch.rho * sch.rho) / gp.sigma_nz2,
    ))
}

/// Result of the amplification-matching construction: the pure-forwarding
/// input deviation, plus a flag when ρ = 0 forced the sign convention.
#[derive(Debug, Clone, Copy)]
pub struct MatchedSigmaX {
    pub sigma_x: f64,
    /// True when ρ = 0 and the sign ρ/|ρ| was taken as +1 by convention.
    pub assumed_positive_rho: bool,
}

/// Solves `σ_x′² + 2(ρ/|ρ|)σ_sσ_x′ = σ_x² + 2ρσ_sσ_x` for the smallest
/// nonnegative root within the power budget: the pure-forwarding scheme
/// `(sign(ρ), σ_x′)` then reproduces the converse corner's amplification
/// exactly.
pub fn matched_sigma_x(gp: &GaussianParams, sch: &UncodedScheme) -> Result<MatchedSigmaX> {
    check_power(gp, sch)?;
    let sigma_s = gp.sigma_s();
    let c = sch.sigma_x * sch.sigma_x + 2.0 * sch.rho * sigma_s * sch.sigma_x;
    let assumed_positive_rho = sch.rho == 0.0;
    let disc = (gp.sigma_s2 + c).max(0.0).sqrt();
    let candidates: [f64; 2] = if sch.rho >= 0.0 {
        // c ≥ 0: the smaller root of t² + 2σ_s t = c is negative, keep the
        // other one.
        [-sigma_s + disc, f64::INFINITY]
    } else {
        // t² − 2σ_s t = c has roots σ_s ∓ √(σ_s² + c).
        [sigma_s - disc, sigma_s + disc]
    };
    let budget = gp.power.sqrt();
    for root in candidates {
        if root >= -1e-12 && root <= budget + 1e-12 {
            return Ok(MatchedSigmaX {
                sigma_x: root.clamp(0.0, budget),
                assumed_positive_rho,
            });
        }
    }
    Err(Error::Internal(format!(
        "no matching input deviation in [0, {budget}] for rho = {}, sigma_x = {}",
        sch.rho, sch.sigma_x
    )))
}
