//! The state-dependent channel `p(y,z|x,s)`, encoder policies `p(u,x|s)`,
//! joint-distribution assembly, and structural degradedness checks.

use crate::dist::{FiniteDist, JointDist, Var};
use crate::info::mutual_information;
use crate::lp;
use crate::{Error, Result, DEGRADEDNESS_TOLERANCE, MASS_TOLERANCE, NEGATIVE_CLAMP};
use serde::{Deserialize, Serialize};

/// A discrete memoryless channel with two outputs and an i.i.d. state known
/// non-causally at the encoder: `p(y,z|x,s)` together with the state law
/// `p(s)`.
#[derive(Debug, Clone)]
pub struct StateDMC {
    state_law: FiniteDist,
    x_size: usize,
    y_size: usize,
    z_size: usize,
    /// `kernel[((s * x_size + x) * y_size + y) * z_size + z] = p(y,z|x,s)`.
    kernel: Vec<f64>,
}

/// On-disk JSON description of a [`StateDMC`], the format the CLI consumes.
#[derive(Debug, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub s_size: usize,
    pub x_size: usize,
    pub y_size: usize,
    pub z_size: usize,
    pub p_s: Vec<f64>,
    /// `kernel[s][x][y][z] = p(y,z|x,s)`.
    pub kernel: Vec<Vec<Vec<Vec<f64>>>>,
}

impl StateDMC {
    /// Validates that every `(s,x)` slice of the kernel is a distribution
    /// over `(y,z)`; the error message names the offending slice.
    pub fn new(
        state_law: FiniteDist,
        x_size: usize,
        y_size: usize,
        z_size: usize,
        kernel: Vec<f64>,
    ) -> Result<Self> {
        let s_size = state_law.alphabet_size();
        if x_size == 0 || y_size == 0 || z_size == 0 {
            return Err(Error::ShapeMismatch("zero-sized channel alphabet".into()));
        }
        let expect = s_size * x_size * y_size * z_size;
        if kernel.len() != expect {
            return Err(Error::ShapeMismatch(format!(
                "kernel has {} entries, expected {}",
                kernel.len(),
                expect
            )));
        }
        let mut kernel = kernel;
        for s in 0..s_size {
            for x in 0..x_size {
                let base = (s * x_size + x) * y_size * z_size;
                let slice = &mut kernel[base..base + y_size * z_size];
                let mut mass = 0.0;
                for p in slice.iter_mut() {
                    if !p.is_finite() || *p < -NEGATIVE_CLAMP {
                        return Err(Error::InvalidDistribution(format!(
                            "kernel entry {p} at (s={s}, x={x}) is not a probability"
                        )));
                    }
                    if *p < 0.0 {
                        *p = 0.0;
                    }
                    mass += *p;
                }
                if (mass - 1.0).abs() > MASS_TOLERANCE {
                    return Err(Error::InvalidDistribution(format!(
                        "kernel slice at (s={s}, x={x}) has mass {mass}"
                    )));
                }
            }
        }
        Ok(Self {
            state_law,
            x_size,
            y_size,
            z_size,
            kernel,
        })
    }

    pub fn from_spec(spec: &ChannelSpec) -> Result<Self> {
        if spec.p_s.len() != spec.s_size {
            return Err(Error::ShapeMismatch(format!(
                "p_s has {} entries for s_size {}",
                spec.p_s.len(),
                spec.s_size
            )));
        }
        let state_law = FiniteDist::new(spec.p_s.clone())?;
        let mut kernel = Vec::with_capacity(spec.s_size * spec.x_size * spec.y_size * spec.z_size);
        if spec.kernel.len() != spec.s_size {
            return Err(Error::ShapeMismatch("kernel outer length != s_size".into()));
        }
        for (s, per_x) in spec.kernel.iter().enumerate() {
            if per_x.len() != spec.x_size {
                return Err(Error::ShapeMismatch(format!(
                    "kernel[{s}] has {} input rows, expected {}",
                    per_x.len(),
                    spec.x_size
                )));
            }
            for (x, per_y) in per_x.iter().enumerate() {
                if per_y.len() != spec.y_size
                    || per_y.iter().any(|row| row.len() != spec.z_size)
                {
                    return Err(Error::ShapeMismatch(format!(
                        "kernel[{s}][{x}] is not {}×{}",
                        spec.y_size, spec.z_size
                    )));
                }
                for row in per_y {
                    kernel.extend_from_slice(row);
                }
            }
        }
        Self::new(state_law, spec.x_size, spec.y_size, spec.z_size, kernel)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: ChannelSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("channel spec JSON: {e}")))?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> ChannelSpec {
        let mut kernel = vec![
            vec![vec![vec![0.0; self.z_size]; self.y_size]; self.x_size];
            self.s_size()
        ];
        for s in 0..self.s_size() {
            for x in 0..self.x_size {
                for y in 0..self.y_size {
                    for z in 0..self.z_size {
                        kernel[s][x][y][z] = self.prob(s, x, y, z);
                    }
                }
            }
        }
        ChannelSpec {
            s_size: self.s_size(),
            x_size: self.x_size,
            y_size: self.y_size,
            z_size: self.z_size,
            p_s: self.state_law.probs().to_vec(),
            kernel,
        }
    }

    pub fn state_law(&self) -> &FiniteDist {
        &self.state_law
    }

    pub fn s_size(&self) -> usize {
        self.state_law.alphabet_size()
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn z_size(&self) -> usize {
        self.z_size
    }

    /// `p(y,z|x,s)`.
    #[inline]
    pub fn prob(&self, s: usize, x: usize, y: usize, z: usize) -> f64 {
        self.kernel[((s * self.x_size + x) * self.y_size + y) * self.z_size + z]
    }

    /// The contiguous `p(·,·|x,s)` slice, laid out `[y][z]`.
    #[inline]
    pub(crate) fn yz_slice(&self, s: usize, x: usize) -> &[f64] {
        let stride = self.y_size * self.z_size;
        let base = (s * self.x_size + x) * stride;
        &self.kernel[base..base + stride]
    }

    /// Bob's marginal `p(y|x,s)`.
    pub fn y_marginal(&self, s: usize, x: usize, y: usize) -> f64 {
        (0..self.z_size).map(|z| self.prob(s, x, y, z)).sum()
    }

    /// Eve's marginal `p(z|x,s)`.
    pub fn z_marginal(&self, s: usize, x: usize, z: usize) -> f64 {
        (0..self.y_size).map(|y| self.prob(s, x, y, z)).sum()
    }
}

/// An encoder policy `p(u,x|s)`: one distribution over `(u,x)` per state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Policy {
    s_size: usize,
    u_size: usize,
    x_size: usize,
    /// `table[(s * u_size + u) * x_size + x] = p(u,x|s)`.
    table: Vec<f64>,
}

impl Policy {
    pub fn new(s_size: usize, u_size: usize, x_size: usize, table: Vec<f64>) -> Result<Self> {
        if s_size == 0 || u_size == 0 || x_size == 0 {
            return Err(Error::ShapeMismatch("zero-sized policy axis".into()));
        }
        if table.len() != s_size * u_size * x_size {
            return Err(Error::ShapeMismatch(format!(
                "policy table has {} entries, expected {}",
                table.len(),
                s_size * u_size * x_size
            )));
        }
        let mut table = table;
        for s in 0..s_size {
            let slice = &mut table[s * u_size * x_size..(s + 1) * u_size * x_size];
            let mut mass = 0.0;
            for p in slice.iter_mut() {
                if !p.is_finite() || *p < -NEGATIVE_CLAMP {
                    return Err(Error::InvalidDistribution(format!(
                        "policy entry {p} at state {s} is not a probability"
                    )));
                }
                if *p < 0.0 {
                    *p = 0.0;
                }
                mass += *p;
            }
            if (mass - 1.0).abs() > MASS_TOLERANCE {
                return Err(Error::InvalidDistribution(format!(
                    "policy slice at state {s} has mass {mass}"
                )));
            }
        }
        Ok(Self {
            s_size,
            u_size,
            x_size,
            table,
        })
    }

    /// A policy with a degenerate auxiliary (`|U| = 1`) given `p(x|s)` rows.
    pub fn from_x_given_s(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput("policy with no states".into()));
        }
        let x_size = rows[0].len();
        if rows.iter().any(|r| r.len() != x_size) {
            return Err(Error::ShapeMismatch("ragged p(x|s) rows".into()));
        }
        let table: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), 1, x_size, table)
    }

    pub fn s_size(&self) -> usize {
        self.s_size
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    /// `p(u,x|s)`.
    #[inline]
    pub fn prob(&self, s: usize, u: usize, x: usize) -> f64 {
        self.table[(s * self.u_size + u) * self.x_size + x]
    }

    pub(crate) fn table(&self) -> &[f64] {
        &self.table
    }
}

pub(crate) fn check_compatible(ch: &StateDMC, pol: &Policy) -> Result<()> {
    if pol.s_size != ch.s_size() || pol.x_size != ch.x_size() {
        return Err(Error::ShapeMismatch(format!(
            "policy over (s,x) = ({},{}) does not fit channel ({},{})",
            pol.s_size,
            pol.x_size,
            ch.s_size(),
            ch.x_size()
        )));
    }
    Ok(())
}

/// Assembles the joint `p(s)·p(u,x|s)·p(y,z|x,s)` over axes `(S,U,X,Y,Z)`.
pub fn build_joint(ch: &StateDMC, pol: &Policy) -> Result<JointDist> {
    check_compatible(ch, pol)?;
    let (ns, nu, nx, ny, nz) = (
        ch.s_size(),
        pol.u_size,
        ch.x_size(),
        ch.y_size(),
        ch.z_size(),
    );
    let mut probs = Vec::with_capacity(ns * nu * nx * ny * nz);
    for s in 0..ns {
        let ps = ch.state_law.probs()[s];
        for u in 0..nu {
            for x in 0..nx {
                let w = ps * pol.prob(s, u, x);
                for y in 0..ny {
                    for z in 0..nz {
                        probs.push(w * ch.prob(s, x, y, z));
                    }
                }
            }
        }
    }
    JointDist::new(
        vec![Var::S, Var::U, Var::X, Var::Y, Var::Z],
        vec![ns, nu, nx, ny, nz],
        probs,
    )
}

/// Direction of a degradedness hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degradation {
    /// Eve sees a noisier version of Bob: `p(z|x,s) = Σ_y p(y|x,s) q(z|y)`.
    Forward,
    /// Bob sees a noisier version of Eve: `p(y|x,s) = Σ_z p(z|x,s) q(y|z)`.
    Reverse,
}

/// Outcome of a degradedness check. Both direction flags are always
/// populated (the underlying programs are tiny); `residual` reports the best
/// factorization residual of the direction that was requested.
#[derive(Debug, Clone, Serialize)]
pub struct DegradednessReport {
    pub degraded: bool,
    pub reversely_degraded: bool,
    pub residual: f64,
}

/// Best max-norm residual over stochastic matrices `q` of the requested
/// factorization. Zero (up to LP tolerance) iff the direction holds.
fn factorization_residual(ch: &StateDMC, direction: Degradation) -> Result<f64> {
    // Unknowns: q[a][b] (a over the clean output, b over the degraded one)
    // plus the residual bound t. For every (s,x,b):
    //   |Σ_a clean(a|x,s)·q[a][b] − degraded(b|x,s)| ≤ t,
    // each row of q on the simplex, minimize t.
    let (na, nb): (usize, usize) = match direction {
        Degradation::Forward => (ch.y_size(), ch.z_size()),
        Degradation::Reverse => (ch.z_size(), ch.y_size()),
    };
    let clean = |s: usize, x: usize, a: usize| match direction {
        Degradation::Forward => ch.y_marginal(s, x, a),
        Degradation::Reverse => ch.z_marginal(s, x, a),
    };
    let degraded = |s: usize, x: usize, b: usize| match direction {
        Degradation::Forward => ch.z_marginal(s, x, b),
        Degradation::Reverse => ch.y_marginal(s, x, b),
    };

    let nq = na * nb;
    let n_ineq = ch.s_size() * ch.x_size() * nb;
    // Columns: q entries, t, then one slack per inequality (≤ then ≥ pairs).
    let n_cols = nq + 1 + 2 * n_ineq;
    let t_col = nq;
    let mut a_mat: Vec<Vec<f64>> = Vec::with_capacity(2 * n_ineq + na);
    let mut b_vec: Vec<f64> = Vec::with_capacity(2 * n_ineq + na);

    let mut slack = nq + 1;
    for s in 0..ch.s_size() {
        for x in 0..ch.x_size() {
            for b in 0..nb {
                let rhs = degraded(s, x, b);
                let mut upper = vec![0.0; n_cols];
                let mut lower = vec![0.0; n_cols];
                for a in 0..na {
                    let w = clean(s, x, a);
                    upper[a * nb + b] = w;
                    lower[a * nb + b] = w;
                }
                // Σ w·q − t + s⁺ = rhs  and  Σ w·q + t − s⁻ = rhs.
                upper[t_col] = -1.0;
                upper[slack] = 1.0;
                lower[t_col] = 1.0;
                lower[slack + 1] = -1.0;
                slack += 2;
                a_mat.push(upper);
                b_vec.push(rhs);
                a_mat.push(lower);
                b_vec.push(rhs);
            }
        }
    }
    for a in 0..na {
        let mut row = vec![0.0; n_cols];
        for b in 0..nb {
            row[a * nb + b] = 1.0;
        }
        a_mat.push(row);
        b_vec.push(1.0);
    }

    let mut c = vec![0.0; n_cols];
    c[t_col] = 1.0;
    let sol = lp::solve_min(&c, &a_mat, &b_vec)?;
    debug_assert!((sol.objective - sol.x[t_col]).abs() <= 1e-9);
    Ok(sol.objective.max(0.0))
}

/// Tests whether the channel is (stochastically) degraded in the requested
/// direction by solving for the best factorizing matrix; a residual at most
/// `DEGRADEDNESS_TOLERANCE` counts as degraded. Both flags in the report are
/// filled in; `residual` belongs to the requested direction.
pub fn check_degraded(ch: &StateDMC, direction: Degradation) -> Result<DegradednessReport> {
    let forward = factorization_residual(ch, Degradation::Forward)?;
    let reverse = factorization_residual(ch, Degradation::Reverse)?;
    Ok(DegradednessReport {
        degraded: forward <= DEGRADEDNESS_TOLERANCE,
        reversely_degraded: reverse <= DEGRADEDNESS_TOLERANCE,
        residual: match direction {
            Degradation::Forward => forward,
            Degradation::Reverse => reverse,
        },
    })
}

/// The named information measures of the assembled joint that the rate
/// bounds consume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[allow(clippy::upper_case_acronyms)]
pub enum MiTerm {
    /// I(U;Y)
    IUY,
    /// I(U;S)
    IUS,
    /// I(U;Z)
    IUZ,
    /// I(S;{Y,U})
    ISYU,
    /// I(S;{Z,U})
    ISZU,
    /// I(U,S;Z)
    IUSZ,
    /// I(X,S;Y)
    IXSY,
    /// H(S|Y,U)
    HSYU,
    /// H(S)
    HS,
}

/// Evaluates a named information term of `p(s)p(u,x|s)p(y,z|x,s)` in bits.
pub fn marginal_channel_mi(ch: &StateDMC, pol: &Policy, expr: MiTerm) -> Result<f64> {
    use Var::{S, U, X, Y, Z};
    let j = build_joint(ch, pol)?;
    let value = match expr {
        MiTerm::IUY => mutual_information(&j, &[U], &[Y])?,
        MiTerm::IUS => mutual_information(&j, &[U], &[S])?,
        MiTerm::IUZ => mutual_information(&j, &[U], &[Z])?,
        MiTerm::ISYU => mutual_information(&j, &[S], &[Y, U])?,
        MiTerm::ISZU => mutual_information(&j, &[S], &[Z, U])?,
        MiTerm::IUSZ => mutual_information(&j, &[U, S], &[Z])?,
        MiTerm::IXSY => mutual_information(&j, &[X, S], &[Y])?,
        MiTerm::HSYU => {
            crate::info::group_entropy(&j, &[S, Y, U])? - crate::info::group_entropy(&j, &[Y, U])?
        }
        MiTerm::HS => crate::info::group_entropy(&j, &[S])?,
    };
    Ok(value)
}
