//! Entropy and mutual-information primitives, in bits.

use crate::dist::{FiniteDist, JointDist, Var};
use crate::{Error, Result, MASS_TOLERANCE, NEGATIVE_CLAMP, ZERO_PROB};

/// Shannon entropy of a probability slice in bits, with 0·log 0 = 0.
/// Entries below `ZERO_PROB` are treated as exact zeros so that rounding
/// residue cannot inject NaNs or large negative logs.
pub(crate) fn entropy_slice(probs: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in probs {
        if p > ZERO_PROB {
            h -= p * p.log2();
        }
    }
    h
}

/// Shannon entropy H(d) in bits.
pub fn entropy(d: &FiniteDist) -> f64 {
    entropy_slice(d.probs())
}

/// Entropy of the marginal of `j` on the axis group `group`, in bits.
pub fn group_entropy(j: &JointDist, group: &[Var]) -> Result<f64> {
    Ok(entropy_slice(j.marginal(group)?.probs()))
}

fn check_disjoint(groups: &[&[Var]]) -> Result<()> {
    for (i, ga) in groups.iter().enumerate() {
        for gb in &groups[i + 1..] {
            for v in *ga {
                if gb.contains(v) {
                    return Err(Error::BadAxisGroup(format!(
                        "axis {v} appears in two groups"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Mutual information I(A;B) = H(A) + H(B) − H(A,B) between two disjoint axis
/// groups of `j`. Rounding noise within `NEGATIVE_CLAMP` below zero is
/// clamped to 0.
pub fn mutual_information(j: &JointDist, group_a: &[Var], group_b: &[Var]) -> Result<f64> {
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::EmptyInput("mutual information over empty group".into()));
    }
    check_disjoint(&[group_a, group_b])?;
    let mut ab = group_a.to_vec();
    ab.extend_from_slice(group_b);
    let i = group_entropy(j, group_a)? + group_entropy(j, group_b)? - group_entropy(j, &ab)?;
    Ok(clamp_rate(i))
}

/// Conditional mutual information I(A;B|C) = H(A,C) + H(B,C) − H(A,B,C) − H(C).
/// An empty `group_c` reduces to plain mutual information.
pub fn conditional_mutual_information(
    j: &JointDist,
    group_a: &[Var],
    group_b: &[Var],
    group_c: &[Var],
) -> Result<f64> {
    if group_c.is_empty() {
        return mutual_information(j, group_a, group_b);
    }
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::EmptyInput("mutual information over empty group".into()));
    }
    check_disjoint(&[group_a, group_b, group_c])?;
    let mut ac = group_a.to_vec();
    ac.extend_from_slice(group_c);
    let mut bc = group_b.to_vec();
    bc.extend_from_slice(group_c);
    let mut abc = group_a.to_vec();
    abc.extend_from_slice(group_b);
    abc.extend_from_slice(group_c);
    let i = group_entropy(j, &ac)? + group_entropy(j, &bc)?
        - group_entropy(j, &abc)?
        - group_entropy(j, group_c)?;
    Ok(clamp_rate(i))
}

/// Clamps negative rounding noise (within `NEGATIVE_CLAMP`) to exactly zero.
/// Larger negative values are passed through so that genuine bugs stay
/// visible to the caller.
pub(crate) fn clamp_rate(x: f64) -> f64 {
    if x < 0.0 && x >= -NEGATIVE_CLAMP {
        0.0
    } else {
        x
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "{name} = {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Binary convolution p ⊗ q = p(1−q) + q(1−p): the crossover probability of
/// two cascaded binary symmetric channels.
pub fn binary_convolution(p: f64, q: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    Ok(p * (1.0 - q) + q * (1.0 - p))
}

/// Binary entropy H(p) in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_probability("p", p)?;
    Ok(entropy_slice(&[p, 1.0 - p]))
}

/// Ternary entropy H(p, q, r) in bits; requires p + q + r = 1 within the mass
/// tolerance.
pub fn ternary_entropy(p: f64, q: f64, r: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    check_probability("r", r)?;
    if (p + q + r - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "ternary mass {} differs from 1",
            p + q + r
        )));
    }
    Ok(entropy_slice(&[p, q, r]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Var::{S, U, X, Y, Z};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn dist(p: Vec<f64>) -> FiniteDist {
        FiniteDist::new(p).unwrap()
    }

    #[test]
    fn entropy_examples() {
        close(entropy(&dist(vec![1.0])), 0.0, 0.0);
        close(entropy(&dist(vec![0.5, 0.5])), 1.0, 1e-15);
        close(entropy(&dist(vec![0.25, 0.75])), 0.811278124459133, 1e-12);
    }

    #[test]
    fn entropy_bounded_by_log_alphabet() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=6);
            let d = dist(random_simplex(&mut rng, n));
            let h = entropy(&d);
            assert!(h >= 0.0);
            assert!(h <= (n as f64).log2() + 1e-12);
        }
    }

    fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        let mut v: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().ln()).collect();
        let t: f64 = v.iter().sum();
        v.iter_mut().for_each(|x| *x /= t);
        v
    }

    fn random_joint(rng: &mut ChaCha8Rng, axes: Vec<Var>, sizes: Vec<usize>) -> JointDist {
        let n = sizes.iter().product();
        JointDist::new(axes, sizes, random_simplex(rng, n)).unwrap()
    }

    #[test]
    fn mutual_information_examples() {
        // Independent uniform bits.
        let j = JointDist::new(vec![S, Y], vec![2, 2], vec![0.25; 4]).unwrap();
        close(mutual_information(&j, &[S], &[Y]).unwrap(), 0.0, 1e-12);

        // Perfectly correlated uniform bits.
        let j = JointDist::new(vec![S, Y], vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        close(mutual_information(&j, &[S], &[Y]).unwrap(), 1.0, 1e-12);

        // Uniform input through BSC(0.1): I(X;Y) = 1 − H(0.1). The joint is
        // assembled by hand as an independent oracle for the channel builders.
        let j = JointDist::new(
            vec![X, Y],
            vec![2, 2],
            vec![0.45, 0.05, 0.05, 0.45],
        )
        .unwrap();
        close(
            mutual_information(&j, &[X], &[Y]).unwrap(),
            0.5310044064107188,
            1e-12,
        );
    }

    #[test]
    fn mutual_information_rejects_overlap() {
        let j = JointDist::new(vec![S, Y], vec![2, 2], vec![0.25; 4]).unwrap();
        assert!(mutual_information(&j, &[S], &[S]).is_err());
        assert!(mutual_information(&j, &[S], &[]).is_err());
        assert!(mutual_information(&j, &[S], &[Z]).is_err());
    }

    #[test]
    fn mutual_information_nonnegative_and_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let j = random_joint(&mut rng, vec![S, U, Y], vec![2, 3, 2]);
            let ab = mutual_information(&j, &[S], &[U, Y]).unwrap();
            let ba = mutual_information(&j, &[U, Y], &[S]).unwrap();
            assert!(ab >= 0.0);
            close(ab, ba, 1e-10);
        }
    }

    #[test]
    fn chain_identity_links_joint_and_conditional_terms() {
        // I(U,S;Y) = I(S;{Y,U}) + I(U;Y) − I(U;S) on random joints.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..1000 {
            let j = random_joint(&mut rng, vec![S, U, Y], vec![2, 2, 3]);
            let lhs = mutual_information(&j, &[U, S], &[Y]).unwrap();
            let rhs = mutual_information(&j, &[S], &[Y, U]).unwrap()
                + mutual_information(&j, &[U], &[Y]).unwrap()
                - mutual_information(&j, &[U], &[S]).unwrap();
            close(lhs, rhs, 1e-10);
        }
    }

    #[test]
    fn conditional_mi_examples() {
        // C independent of (A,B): I(A;B|C) = I(A;B).
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let base = random_joint(&mut rng, vec![S, Y], vec![2, 2]);
            let pc = [0.3, 0.7];
            let mut probs = Vec::with_capacity(8);
            for &pab in base.probs() {
                for &c in &pc {
                    probs.push(pab * c);
                }
            }
            let j = JointDist::new(vec![S, Y, Z], vec![2, 2, 2], probs).unwrap();
            let with = conditional_mutual_information(&j, &[S], &[Y], &[Z]).unwrap();
            let without = mutual_information(&base, &[S], &[Y]).unwrap();
            close(with, without, 1e-12);
        }

        // A = B = C uniform binary: everything is determined, I(A;B|C) = 0.
        let mut probs = vec![0.0; 8];
        probs[0] = 0.5; // (0,0,0)
        probs[7] = 0.5; // (1,1,1)
        let j = JointDist::new(vec![S, Y, Z], vec![2, 2, 2], probs).unwrap();
        close(
            conditional_mutual_information(&j, &[S], &[Y], &[Z]).unwrap(),
            0.0,
            1e-12,
        );

        // Markov chain A → B → C through BSC(0.1) then BSC(0.2).
        let mut probs = vec![0.0; 8];
        for a in 0..2usize {
            for b in 0..2usize {
                for c in 0..2usize {
                    let p_b = if a == b { 0.9 } else { 0.1 };
                    let p_c = if b == c { 0.8 } else { 0.2 };
                    probs[a * 4 + b * 2 + c] = 0.5 * p_b * p_c;
                }
            }
        }
        let j = JointDist::new(vec![S, Y, Z], vec![2, 2, 2], probs).unwrap();
        close(
            conditional_mutual_information(&j, &[S], &[Z], &[Y]).unwrap(),
            0.0,
            1e-12,
        );
    }

    #[test]
    fn conditional_mi_empty_conditioner_reduces_to_mi() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let j = random_joint(&mut rng, vec![S, Y], vec![3, 2]);
        close(
            conditional_mutual_information(&j, &[S], &[Y], &[]).unwrap(),
            mutual_information(&j, &[S], &[Y]).unwrap(),
            0.0,
        );
    }

    #[test]
    fn binary_convolution_examples() {
        close(binary_convolution(0.3, 0.5).unwrap(), 0.5, 1e-15);
        close(binary_convolution(0.1, 0.0).unwrap(), 0.1, 1e-15);
        close(binary_convolution(0.1, 0.2).unwrap(), 0.26, 1e-15);
        assert!(binary_convolution(1.2, 0.1).is_err());
        assert!(binary_convolution(0.1, -0.2).is_err());
    }

    #[test]
    fn binary_convolution_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let (p, q, r) = (
                rng.gen_range(0.0..=0.5),
                rng.gen_range(0.0..=0.5),
                rng.gen_range(0.0..=0.5),
            );
            let pq = binary_convolution(p, q).unwrap();
            let qp = binary_convolution(q, p).unwrap();
            close(pq, qp, 1e-15);
            // Stays inside [0, 0.5] on [0, 0.5]².
            assert!((0.0..=0.5).contains(&pq));
            // Associativity.
            let left = binary_convolution(pq, r).unwrap();
            let right = binary_convolution(p, binary_convolution(q, r).unwrap()).unwrap();
            close(left, right, 1e-12);
        }
    }

    #[test]
    fn entropy_helpers() {
        close(binary_entropy(0.5).unwrap(), 1.0, 1e-15);
        close(binary_entropy(0.0).unwrap(), 0.0, 0.0);
        close(ternary_entropy(1.0, 0.0, 0.0).unwrap(), 0.0, 0.0);
        close(ternary_entropy(0.25, 0.25, 0.5).unwrap(), 1.5, 1e-15);
        assert!(ternary_entropy(0.5, 0.4, 0.2).is_err());
        assert!(binary_entropy(1.1).is_err());
    }
}
