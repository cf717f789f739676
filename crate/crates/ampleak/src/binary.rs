//! Binary state-dependent channel: `Y = X ⊕ S ⊕ N`, `Z = X ⊕ S ⊕ N_z` with
//! independent Bernoulli noises, plus the state-cancelling scheme whose
//! frontier has a closed form and the channel's differential amplification
//! capacity.

use crate::channel::{Policy, StateDMC};
use crate::dist::FiniteDist;
use crate::frontier::{Frontier, FrontierKind, RatePoint};
use crate::info::{binary_convolution, binary_entropy};
use crate::regions::{CdMethod, CdResult};
use crate::{Error, Result};

/// Parameters of the binary channel: state bias and the two noise levels,
/// all in `[0, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryParams {
    p_s: f64,
    p_n: f64,
    p_nz: f64,
}

impl BinaryParams {
    pub fn new(p_s: f64, p_n: f64, p_nz: f64) -> Result<Self> {
        for (name, v) in [("p_s", p_s), ("p_n", p_n), ("p_nz", p_nz)] {
            if !v.is_finite() || !(0.0..=0.5).contains(&v) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} outside [0, 0.5]"
                )));
            }
        }
        Ok(Self { p_s, p_n, p_nz })
    }

    pub fn p_s(&self) -> f64 {
        self.p_s
    }

    pub fn p_n(&self) -> f64 {
        self.p_n
    }

    pub fn p_nz(&self) -> f64 {
        self.p_nz
    }
}

fn flip(p: f64, differs: bool) -> f64 {
    if differs {
        p
    } else {
        1.0 - p
    }
}

/// Builds the channel `p(y,z|x,s) = P[N = y⊕x⊕s] · P[N_z = z⊕x⊕s]` with
/// `S ~ Bern(p_s)`.
pub fn build_binary_channel(bp: &BinaryParams) -> Result<StateDMC> {
    let law = FiniteDist::new(vec![1.0 - bp.p_s, bp.p_s])?;
    let mut kernel = vec![0.0; 16];
    for s in 0..2usize {
        for x in 0..2usize {
            let base = x ^ s;
            for y in 0..2usize {
                for z in 0..2usize {
                    kernel[((s * 2 + x) * 2 + y) * 2 + z] =
                        flip(bp.p_n, y != base) * flip(bp.p_nz, z != base);
                }
            }
        }
    }
    StateDMC::new(law, 2, 2, 2, kernel)
}

/// Builds the reversely degraded binary channel where the eavesdropper sits
/// upstream: `Z = X ⊕ S ⊕ Bern(p)` and `Y = Z ⊕ Bern(m)`.
pub fn build_reversed_binary_channel(p_s: f64, p: f64, m: f64) -> Result<StateDMC> {
    for (name, v) in [("p_s", p_s), ("p", p), ("m", m)] {
        if !v.is_finite() || !(0.0..=0.5).contains(&v) {
            return Err(Error::InvalidParameter(format!(
                "{name} = {v} outside [0, 0.5]"
            )));
        }
    }
    let law = FiniteDist::new(vec![1.0 - p_s, p_s])?;
    let mut kernel = vec![0.0; 16];
    for s in 0..2usize {
        for x in 0..2usize {
            let base = x ^ s;
            for z in 0..2usize {
                for y in 0..2usize {
                    kernel[((s * 2 + x) * 2 + y) * 2 + z] =
                        flip(p, z != base) * flip(m, y != z);
                }
            }
        }
    }
    StateDMC::new(law, 2, 2, 2, kernel)
}

/// State-cancelling policy: `U ~ Bern(p_u)` independent of `S`, `X = U ⊕ S`.
/// Both receivers then see `U` through their own noise.
pub fn sc_policy(p_u: f64) -> Result<Policy> {
    if !p_u.is_finite() || !(0.0..=1.0).contains(&p_u) {
        return Err(Error::InvalidParameter(format!(
            "p_u = {p_u} outside [0, 1]"
        )));
    }
    let mut table = vec![0.0; 8];
    for s in 0..2usize {
        for u in 0..2usize {
            let pu = if u == 1 { p_u } else { 1.0 - p_u };
            table[(s * 2 + u) * 2 + (u ^ s)] = pu;
        }
    }
    Policy::new(2, 2, 2, table)
}

/// The closed-form rate pair of the state-cancelling scheme at bias `p_u`:
/// `(min{H(p_s), H(p_u ⊛ p_n) − H(p_n)}, H(p_u ⊛ p_nz) − H(p_nz))`.
pub fn sc_point(bp: &BinaryParams, p_u: f64) -> Result<RatePoint> {
    let h_s = binary_entropy(bp.p_s)?;
    let r_a = (binary_entropy(binary_convolution(p_u, bp.p_n)?)? - binary_entropy(bp.p_n)?)
        .min(h_s)
        .max(0.0);
    let r_l =
        (binary_entropy(binary_convolution(p_u, bp.p_nz)?)? - binary_entropy(bp.p_nz)?).max(0.0);
    RatePoint::new(r_a, r_l)
}

/// The state-cancelling frontier with the bias that produced each point.
#[derive(Debug, Clone)]
pub struct ScRegion {
    pub frontier: Frontier,
    /// `p_u` per frontier point, aligned index-for-index.
    pub p_u: Vec<f64>,
}

/// Sweeps `p_u` over `grid` evenly spaced biases in `[0, 1/2]` (clipped to
/// `p_u ⊛ p_s ≤ 1/2`, which the parameter ranges already guarantee) and
/// returns the closed-form points with the time-sharing hull applied, plus
/// their biases.
pub fn sc_region_detailed(bp: &BinaryParams, grid: usize) -> Result<ScRegion> {
    if grid < 2 {
        return Err(Error::InvalidParameter(format!(
            "bias grid {grid} below 2"
        )));
    }
    let mut points = Vec::with_capacity(grid);
    let mut biases = Vec::with_capacity(grid);
    for k in 0..grid {
        let p_u = 0.5 * k as f64 / (grid - 1) as f64;
        if binary_convolution(p_u, bp.p_s)? > 0.5 {
            continue;
        }
        points.push(sc_point(bp, p_u)?);
        biases.push(p_u);
    }
    let keep = crate::frontier::pareto_indices(&points);
    let pruned: Vec<RatePoint> = keep.iter().map(|&i| points[i]).collect();
    let hull = crate::frontier::envelope_indices(&pruned);
    let frontier = Frontier {
        points: hull.iter().map(|&i| pruned[i]).collect(),
        kind: FrontierKind::Inner,
        hull_applied: true,
    };
    let p_u = hull.iter().map(|&i| biases[keep[i]]).collect();
    Ok(ScRegion { frontier, p_u })
}

/// [`sc_region_detailed`] without the bias labels.
pub fn sc_region(bp: &BinaryParams, grid: usize) -> Result<Frontier> {
    sc_region_detailed(bp, grid).map(|r| r.frontier)
}

/// Differential amplification capacity of the binary channel. When the
/// eavesdropper is noisier (`p_n ≤ p_nz`) and the state is rich enough
/// (`H(p_s) ≥ 1 − H(p_n)`), the unbiased state-cancelling scheme is optimal
/// and `c_d = H(p_nz) − H(p_n)` exactly; otherwise the value is obtained by
/// sweeping input policies and is a best-found lower estimate.
pub fn binary_cd(bp: &BinaryParams) -> Result<CdResult> {
    let h_s = binary_entropy(bp.p_s)?;
    let h_n = binary_entropy(bp.p_n)?;
    if bp.p_n <= bp.p_nz && h_s >= 1.0 - h_n {
        return Ok(CdResult {
            c_d: binary_entropy(bp.p_nz)? - h_n,
            argmax_policy: sc_policy(0.5)?,
            method: CdMethod::ClosedForm,
        });
    }
    let ch = build_binary_channel(bp)?;
    let (c_d, argmax_policy) = crate::regions::max_x_policy_difference(&ch, 16)?;
    Ok(CdResult {
        c_d,
        argmax_policy,
        method: CdMethod::Sweep,
    })
}
