//! Memory with defective cells: a three-state channel where a cell is stuck
//! at 0, stuck at 1, or functioning, the reader observes the cell directly,
//! and the eavesdropper reads it through a binary symmetric channel.
//!
//! Closed-form entropies exist for input laws independent of the state; the
//! per-state input mode routes through the generic joint-distribution
//! machinery instead.

use crate::channel::{Policy, StateDMC};
use crate::dist::FiniteDist;
use crate::frontier::{pareto_indices, Frontier, FrontierKind, RatePoint};
use crate::info::{binary_convolution, binary_entropy, ternary_entropy};
use crate::regions::{metrics_for, MetricsWorkspace};
use crate::{Error, Result, MASS_TOLERANCE};

/// Input law parameterization: a single bias for `X` independent of `S`, or
/// one bias per state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaLaw {
    /// `X ~ Bern(α)` regardless of the cell state.
    Single(f64),
    /// `X ~ Bern(α_s)` for stuck-at-0, stuck-at-1, functioning.
    PerState([f64; 3]),
}

impl AlphaLaw {
    fn validate(&self) -> Result<()> {
        let vals: &[f64] = match self {
            AlphaLaw::Single(a) => std::slice::from_ref(a),
            AlphaLaw::PerState(v) => v,
        };
        for &a in vals {
            if !a.is_finite() || !(0.0..=1.0).contains(&a) {
                return Err(Error::InvalidParameter(format!(
                    "input bias {a} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Cell-state probabilities (stuck-at-0, stuck-at-1, functioning), the
/// eavesdropper's crossover, and the input law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemdefParams {
    p: f64,
    q: f64,
    r: f64,
    n: f64,
    alpha: AlphaLaw,
}

impl MemdefParams {
    /// Validates the cell-state law and crossover; the input law defaults to
    /// the unbiased `X ~ Bern(1/2)`.
    pub fn new(p: f64, q: f64, r: f64, n: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q), ("r", r)] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} outside [0, 1]"
                )));
            }
        }
        if (p + q + r - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "cell-state probabilities sum to {} (expected 1)",
                p + q + r
            )));
        }
        if !n.is_finite() || !(0.0..=0.5).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "n = {n} outside [0, 0.5]"
            )));
        }
        Ok(Self {
            p,
            q,
            r,
            n,
            alpha: AlphaLaw::Single(0.5),
        })
    }

    pub fn with_alpha(mut self, alpha: AlphaLaw) -> Result<Self> {
        alpha.validate()?;
        self.alpha = alpha;
        Ok(self)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn alpha(&self) -> AlphaLaw {
        self.alpha
    }
}

/// State indices of the three cell conditions.
const STUCK0: usize = 0;
const STUCK1: usize = 1;
const GOOD: usize = 2;

/// Builds the channel: `Y = 0` for stuck-at-0 cells, `Y = 1` for stuck-at-1
/// cells, `Y = X` for functioning cells, and `Z = Y ⊕ Bern(n)`. The cascade
/// makes the channel forward degraded by construction.
pub fn build_memdef_channel(mp: &MemdefParams) -> Result<StateDMC> {
    let law = FiniteDist::new(vec![mp.p, mp.q, mp.r])?;
    let mut kernel = vec![0.0; 3 * 2 * 2 * 2];
    for s in 0..3usize {
        for x in 0..2usize {
            let y_fixed = match s {
                STUCK0 => 0,
                STUCK1 => 1,
                GOOD => x,
                _ => unreachable!(),
            };
            for z in 0..2usize {
                let pf = if z == y_fixed { 1.0 - mp.n } else { mp.n };
                kernel[((s * 2 + x) * 2 + y_fixed) * 2 + z] = pf;
            }
        }
    }
    StateDMC::new(law, 2, 2, 2, kernel)
}

/// Input policy `p(x|s)` with no auxiliary: `X ~ Bern(α_s)`.
pub fn memdef_input_policy(mp: &MemdefParams) -> Result<Policy> {
    let biases = match mp.alpha {
        AlphaLaw::Single(a) => [a, a, a],
        AlphaLaw::PerState(v) => v,
    };
    let rows: Vec<Vec<f64>> = biases.iter().map(|&a| vec![1.0 - a, a]).collect();
    Policy::from_x_given_s(&rows)
}

/// Policy realizing the read-back auxiliary `U = Y`: the encoder draws
/// `X ~ Bern(α_s)` and sets `u` to the value the cell will return.
pub fn memdef_readback_policy(mp: &MemdefParams) -> Result<Policy> {
    let biases = match mp.alpha {
        AlphaLaw::Single(a) => [a, a, a],
        AlphaLaw::PerState(v) => v,
    };
    let mut table = vec![0.0; 3 * 2 * 2];
    for s in 0..3usize {
        let a = biases[s];
        for x in 0..2usize {
            let u = match s {
                STUCK0 => 0,
                STUCK1 => 1,
                GOOD => x,
                _ => unreachable!(),
            };
            let px = if x == 1 { a } else { 1.0 - a };
            table[(s * 2 + u) * 2 + x] += px;
        }
    }
    Policy::new(3, 2, 2, table)
}

/// The five closed-form entropies of the single-α input law, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemdefEntropies {
    pub h_s: f64,
    pub h_y_given_s: f64,
    pub h_y: f64,
    pub h_z_given_s: f64,
    pub h_z: f64,
}

impl MemdefEntropies {
    pub fn i_sy(&self) -> f64 {
        (self.h_y - self.h_y_given_s).max(0.0)
    }

    pub fn i_sz(&self) -> f64 {
        (self.h_z - self.h_z_given_s).max(0.0)
    }
}

/// Closed forms for `X ~ Bern(α)` independent of the state:
/// `H(Y|S) = r·H(α)`, `H(Y) = H(q + rα)`, `H(Z|S) = (p+q)H(n) + r·H(α ⊛ n)`,
/// `H(Z) = H((q + rα) ⊛ n)`. The per-state mode has no closed form and must
/// go through the generic joint evaluation.
pub fn memdef_entropies(mp: &MemdefParams) -> Result<MemdefEntropies> {
    let a = match mp.alpha {
        AlphaLaw::Single(a) => a,
        AlphaLaw::PerState(_) => {
            return Err(Error::InvalidParameter(
                "per-state input law has no closed-form entropies; evaluate via the generic joint"
                    .into(),
            ))
        }
    };
    let h_n = binary_entropy(mp.n)?;
    // Clamp against rounding in q + rα when p + q + r carries float slack.
    let p_y1 = (mp.q + mp.r * a).clamp(0.0, 1.0);
    Ok(MemdefEntropies {
        h_s: ternary_entropy(mp.p, mp.q, mp.r)?,
        h_y_given_s: mp.r * binary_entropy(a)?,
        h_y: binary_entropy(p_y1)?,
        h_z_given_s: (mp.p + mp.q) * h_n + mp.r * binary_entropy(binary_convolution(a, mp.n)?)?,
        h_z: binary_entropy(binary_convolution(p_y1, mp.n)?)?,
    })
}

/// A frontier with the input bias that produced each point (the
/// functioning-state bias in per-state mode).
#[derive(Debug, Clone)]
pub struct AlphaFrontier {
    pub frontier: Frontier,
    pub alpha: Vec<f64>,
}

/// The three region boundaries: direct storage with no auxiliary, the
/// read-back scheme `U = Y`, and the converse corner sweep.
#[derive(Debug, Clone)]
pub struct MemdefRegions {
    pub uncoded: AlphaFrontier,
    pub coded: AlphaFrontier,
    pub outer: AlphaFrontier,
}

fn assemble(
    mut points: Vec<RatePoint>,
    mut alphas: Vec<f64>,
    kind: FrontierKind,
    h_s: f64,
) -> AlphaFrontier {
    // Leakage beyond H(S) is vacuous: the whole quadrant at such a point
    // lies outside the truncated region, so drop the point.
    let mut k = 0;
    while k < points.len() {
        if points[k].r_l > h_s {
            points.swap_remove(k);
            alphas.swap_remove(k);
        } else {
            k += 1;
        }
    }
    if points.is_empty() {
        return AlphaFrontier {
            frontier: Frontier::empty(kind),
            alpha: Vec::new(),
        };
    }
    let keep = pareto_indices(&points);
    AlphaFrontier {
        frontier: Frontier {
            points: keep.iter().map(|&i| points[i]).collect(),
            kind,
            hull_applied: false,
        },
        alpha: keep.iter().map(|&i| alphas[i]).collect(),
    }
}

/// Sweeps the input bias over `grid` points in `[0, 1]` (or the bias cube in
/// per-state mode, which routes through generic evaluation) and returns the
/// three truncated region boundaries.
pub fn memdef_regions(mp: &MemdefParams, grid: usize) -> Result<MemdefRegions> {
    if grid < 2 {
        return Err(Error::InvalidParameter(format!(
            "bias grid {grid} below 2"
        )));
    }
    let steps: Vec<f64> = (0..grid).map(|k| k as f64 / (grid - 1) as f64).collect();
    let h_s = ternary_entropy(mp.p, mp.q, mp.r)?;

    let mut unc_pts = Vec::new();
    let mut unc_alpha = Vec::new();
    let mut cod_pts = Vec::new();
    let mut cod_alpha = Vec::new();
    let mut out_pts = Vec::new();
    let mut out_alpha = Vec::new();

    match mp.alpha {
        AlphaLaw::Single(_) => {
            let h_n = binary_entropy(mp.n)?;
            for &a in &steps {
                let sub = mp.with_alpha(AlphaLaw::Single(a))?;
                let e = memdef_entropies(&sub)?;
                unc_pts.push(RatePoint::new(e.i_sy(), e.i_sz())?);
                unc_alpha.push(a);
                cod_pts.push(RatePoint::new(
                    e.h_s.min(e.h_y),
                    (e.h_z - h_n).max(0.0),
                )?);
                cod_alpha.push(a);
                out_pts.push(RatePoint::new(e.h_s.min(e.h_y), e.i_sz())?);
                out_alpha.push(a);
            }
        }
        AlphaLaw::PerState(_) => {
            // Per-state biases go through the generic machinery. Only the
            // functioning-state bias reaches Y and Z (stuck cells ignore
            // the input), so that bias labels the points.
            let ch = build_memdef_channel(mp)?;
            let mut ws1 = MetricsWorkspace::new(&ch, 1);
            for &a0 in &steps {
                for &a1 in &steps {
                    for &a2 in &steps {
                        let sub = mp.with_alpha(AlphaLaw::PerState([a0, a1, a2]))?;
                        let input = memdef_input_policy(&sub)?;
                        let m = ws1.compute(&ch, input.table());
                        unc_pts.push(RatePoint::new(m.i_syu, m.i_szu)?);
                        unc_alpha.push(a2);
                        out_pts.push(RatePoint::new(m.h_s.min(m.i_xsy), m.i_szu)?);
                        out_alpha.push(a2);
                        let rb = metrics_for(&ch, &memdef_readback_policy(&sub)?)?;
                        cod_pts.push(RatePoint::new(rb.h_s.min(rb.i_usy), rb.i_usz)?);
                        cod_alpha.push(a2);
                    }
                }
            }
        }
    }

    Ok(MemdefRegions {
        uncoded: assemble(unc_pts, unc_alpha, FrontierKind::Inner, h_s),
        coded: assemble(cod_pts, cod_alpha, FrontierKind::Inner, h_s),
        outer: assemble(out_pts, out_alpha, FrontierKind::Outer, h_s),
    })
}
