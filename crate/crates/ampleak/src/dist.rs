//! Finite distributions and dense joint distributions over named variables.

use crate::{Error, Result, MASS_TOLERANCE, NEGATIVE_CLAMP};

/// The variable roles appearing in the channel model. A joint distribution
/// carries an ordered subset of these as axis labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    /// Channel state.
    S,
    /// Auxiliary (Gel'fand–Pinsker) codeword variable.
    U,
    /// Channel input.
    X,
    /// Legitimate receiver's observation.
    Y,
    /// Eavesdropper's observation.
    Z,
}

impl std::fmt::Display for Var {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self {
            Var::S => 'S',
            Var::U => 'U',
            Var::X => 'X',
            Var::Y => 'Y',
            Var::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// A probability vector over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDist {
    probs: Vec<f64>,
}

impl FiniteDist {
    /// Validates that `probs` is a distribution: nonempty, entries ≥ 0
    /// (negative rounding noise within `NEGATIVE_CLAMP` is zeroed), mass 1
    /// within `MASS_TOLERANCE`.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let mut probs = probs;
        if probs.is_empty() {
            return Err(Error::EmptyInput("distribution with no atoms".into()));
        }
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -NEGATIVE_CLAMP {
                return Err(Error::InvalidDistribution(format!(
                    "entry {i} is {p}, expected a probability"
                )));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let mass: f64 = probs.iter().sum();
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "mass {mass} differs from 1 by more than {MASS_TOLERANCE}"
            )));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }
}

/// A dense joint distribution over an ordered tuple of named variables,
/// stored row-major (last axis fastest).
#[derive(Debug, Clone)]
pub struct JointDist {
    axes: Vec<Var>,
    sizes: Vec<usize>,
    probs: Vec<f64>,
}

impl JointDist {
    /// Validates axis uniqueness, the size/length agreement, nonnegativity,
    /// and unit mass.
    pub fn new(axes: Vec<Var>, sizes: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::EmptyInput("joint distribution with no axes".into()));
        }
        if axes.len() != sizes.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} axis names for {} axis sizes",
                axes.len(),
                sizes.len()
            )));
        }
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].contains(a) {
                return Err(Error::BadAxisGroup(format!("axis {a} appears twice")));
            }
        }
        let expect: usize = sizes.iter().product();
        if sizes.iter().any(|&s| s == 0) || expect == 0 {
            return Err(Error::ShapeMismatch("zero-sized axis".into()));
        }
        if probs.len() != expect {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for shape {:?}",
                probs.len(),
                sizes
            )));
        }
        let mut probs = probs;
        let mut mass = 0.0;
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -NEGATIVE_CLAMP {
                return Err(Error::InvalidDistribution(format!(
                    "joint entry {p} is not a probability"
                )));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
            mass += *p;
        }
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "joint mass {mass} differs from 1 by more than {MASS_TOLERANCE}"
            )));
        }
        Ok(Self { axes, sizes, probs })
    }

    pub fn axes(&self) -> &[Var] {
        &self.axes
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    fn axis_index(&self, v: Var) -> Result<usize> {
        self.axes
            .iter()
            .position(|&a| a == v)
            .ok_or_else(|| Error::BadAxisGroup(format!("axis {v} not present in joint")))
    }

    /// Sums out every axis not in `keep`, preserving the order given by
    /// `keep`. `keep` must be nonempty, duplicate-free, and a subset of the
    /// joint's axes.
    pub fn marginal(&self, keep: &[Var]) -> Result<JointDist> {
        if keep.is_empty() {
            return Err(Error::EmptyInput("marginal over no axes".into()));
        }
        for (i, v) in keep.iter().enumerate() {
            if keep[..i].contains(v) {
                return Err(Error::BadAxisGroup(format!("axis {v} repeated in group")));
            }
        }
        let kept_axes: Vec<usize> = keep
            .iter()
            .map(|&v| self.axis_index(v))
            .collect::<Result<_>>()?;
        let out_sizes: Vec<usize> = kept_axes.iter().map(|&i| self.sizes[i]).collect();
        let out_len: usize = out_sizes.iter().product();
        let mut out = vec![0.0; out_len];

        // Row-major strides of the source array, then the flat output index is
        // a dot product of the kept source coordinates with output strides.
        let n_axes = self.sizes.len();
        let mut strides = vec![1usize; n_axes];
        for i in (0..n_axes - 1).rev() {
            strides[i] = strides[i + 1] * self.sizes[i + 1];
        }
        let mut out_strides = vec![1usize; kept_axes.len()];
        for i in (0..kept_axes.len().saturating_sub(1)).rev() {
            out_strides[i] = out_strides[i + 1] * out_sizes[i + 1];
        }

        for (flat, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut dst = 0usize;
            for (k, &axis) in kept_axes.iter().enumerate() {
                let coord = (flat / strides[axis]) % self.sizes[axis];
                dst += coord * out_strides[k];
            }
            out[dst] += p;
        }

        Ok(JointDist {
            axes: keep.to_vec(),
            sizes: out_sizes,
            probs: out,
        })
    }
}
