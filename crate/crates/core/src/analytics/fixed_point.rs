//! Dead-end probabilities and giant-component fractions.
//!
//! All maps here are polynomials with nonnegative coefficients, hence
//! increasing on `[0, 1]`; plain iteration from zero climbs monotonically to the
//! smallest fixed point.

use super::choice::ChoiceProbabilities;
use super::eigen::spectral_abscissa;
use super::paths::offspring_matrix;
use super::DegreeLaw;
use crate::error::{Error, Result};

pub const TOLERANCE: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 1_000_000;
/// Slack for the monotonicity check (rounding in the sums).
const MONOTONE_SLACK: f64 = 1e-14;

/// Plain steps before switching to Newton steps.
const PLAIN_STEPS: usize = 10_000;

/// Solve `(I - J) d = rhs` for `N <= 3` by Gaussian elimination with partial
/// pivoting; `None` when the system is numerically singular.
fn solve_linear<const N: usize>(mut m: [[f64; N]; N], mut rhs: [f64; N]) -> Option<[f64; N]> {
    for col in 0..N {
        let piv = (col..N).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..N {
            let f = m[row][col] / m[col][col];
            for k in col..N {
                m[row][k] -= f * m[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    Some(x)
}

/// Iterate `x <- map(x)` from zero until the sup-norm step is below
/// [`TOLERANCE`]. Near a critical point plain steps crawl, so after
/// [`PLAIN_STEPS`] of them the update becomes a Newton step on `map(x) - x`.
/// For polynomial maps with nonnegative coefficients, Newton steps taken from
/// below the least fixed point stay below it, so the sequence is still
/// nondecreasing and still lands on the least fixed point. Records every
/// iterate when `trace` is given.
fn iterate<const N: usize>(
    what: &'static str,
    mut map: impl FnMut(&[f64; N]) -> [f64; N],
    mut jacobian: impl FnMut(&[f64; N]) -> [[f64; N]; N],
    mut trace: Option<&mut Vec<[f64; N]>>,
) -> Result<[f64; N]> {
    let mut x = [0.0; N];
    for it in 0..MAX_ITERATIONS {
        let image = map(&x);
        let mut next = image;
        if it >= PLAIN_STEPS {
            let j = jacobian(&x);
            let mut a = [[0.0; N]; N];
            let mut rhs = [0.0; N];
            for r in 0..N {
                for c in 0..N {
                    a[r][c] = if r == c { 1.0 } else { 0.0 } - j[r][c];
                }
                rhs[r] = image[r] - x[r];
            }
            if let Some(d) = solve_linear(a, rhs) {
                let cand: [f64; N] = std::array::from_fn(|i| x[i] + d[i]);
                if cand.iter().zip(&image).all(|(c, im)| c.is_finite() && *c >= *im - MONOTONE_SLACK && *c <= 1.0 + MONOTONE_SLACK) {
                    next = cand;
                }
            }
        }
        let mut step = 0.0f64;
        for i in 0..N {
            debug_assert!(
                next[i] >= x[i] - MONOTONE_SLACK && next[i] <= 1.0 + MONOTONE_SLACK,
                "{what}: iterate left the monotone path at component {i}: {} -> {}",
                x[i],
                next[i]
            );
            step = step.max((next[i] - x[i]).abs());
        }
        x = next.map(|v| v.clamp(0.0, 1.0));
        if let Some(t) = trace.as_deref_mut() {
            t.push(x);
        }
        if step < TOLERANCE {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence {
        what,
        iterations: MAX_ITERATIONS,
    })
}

/// `sum_b w_b base(x)^(b-1)` over the neighbor law.
fn neighbor_generating(law: &DegreeLaw, base: f64) -> f64 {
    let mut pw = 1.0;
    let mut sum = 0.0;
    for &w in &law.neighbor[1..] {
        sum += w * pw;
        pw *= base;
    }
    sum
}

/// Derivative of [`neighbor_generating`] in `base`.
fn neighbor_generating_slope(law: &DegreeLaw, base: f64) -> f64 {
    let mut pw = 1.0; // base^(b-2)
    let mut sum = 0.0;
    for (b, &w) in law.neighbor.iter().enumerate().skip(2) {
        sum += w * (b - 1) as f64 * pw;
        pw *= base;
    }
    sum
}

/// Probability that a neighbor is a dead end in `G`: the smallest root of
/// `q = sum_b (b P(b) / Z) q^(b-1)`, or 1 at and below the transition.
pub fn solve_q(law: &DegreeLaw) -> Result<f64> {
    solve_q_traced(law, None)
}

pub fn solve_q_traced(law: &DegreeLaw, trace: Option<&mut Vec<[f64; 1]>>) -> Result<f64> {
    if !(law.excess() > 1.0) {
        return Ok(1.0);
    }
    let [q] = iterate(
        "dead-end probability q",
        |&[x]| [neighbor_generating(law, x)],
        |&[x]| [[neighbor_generating_slope(law, x)]],
        trace,
    )?;
    Ok(q)
}

/// `theta = 1 - sum_a P(a) q^a`, summed as `sum_a P(a) (1 - q^a)` so that
/// `q = 1` gives exactly zero.
pub fn theta_from_q(law: &DegreeLaw, q: f64) -> f64 {
    let mut pw = 1.0;
    let mut sum = 0.0;
    for &p in &law.pmf {
        sum += p * (1.0 - pw);
        pw *= q;
    }
    sum.clamp(0.0, 1.0)
}

/// Dead-end probabilities in `D`, conditioned on how the neighbor relates to
/// the node it was reached from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeadEnds {
    /// Neighbor is in `C_u`.
    pub q_c: f64,
    /// Neighbor is not in `C_u` and made one choice.
    pub q_nc1: f64,
    /// Neighbor is not in `C_u` and made two choices.
    pub q_nc2: f64,
}

impl DeadEnds {
    pub const ALL: DeadEnds = DeadEnds {
        q_c: 1.0,
        q_nc1: 1.0,
        q_nc2: 1.0,
    };

    /// Dead-end probability of a neighbor outside `C_v`, mixed over its choice count.
    pub fn unchosen(&self, alpha: f64) -> f64 {
        (1.0 - alpha) * self.q_nc1 + alpha * self.q_nc2
    }

    /// Probability that a degree-`a` node sees only dead ends in `D` given its own choices.
    pub fn isolated_given_degree(&self, pi: &ChoiceProbabilities, a: usize) -> f64 {
        if a == 0 {
            return 1.0;
        }
        let s = self.unchosen(pi.alpha);
        let one = pi.random_one(a) * self.q_c * s.powi(a as i32 - 1);
        let two = if a >= 2 {
            pi.random_two(a) * self.q_c * self.q_c * s.powi(a as i32 - 2)
        } else {
            0.0
        };
        one + two
    }

    /// `P_D(GCC_D | a)`; zero for isolated nodes.
    pub fn membership(&self, pi: &ChoiceProbabilities, a: usize) -> f64 {
        if a == 0 {
            0.0
        } else {
            (1.0 - self.isolated_given_degree(pi, a)).max(0.0)
        }
    }
}

/// One application of the coupled dead-end maps.
pub fn dead_end_map(law: &DegreeLaw, pi: &ChoiceProbabilities, x: &DeadEnds) -> DeadEnds {
    let alpha = pi.alpha;
    let s = x.unchosen(alpha);
    let (mut c, mut n1, mut n2) = (0.0, 0.0, 0.0);
    // Running powers s^(b-1), s^(b-2), s^(b-3); the latter two only read once
    // their exponent is nonnegative (the multiplying probabilities vanish before that).
    let (mut p1, mut p2, mut p3) = (1.0, 0.0, 0.0);
    for (b, &w) in law.neighbor.iter().enumerate().skip(1) {
        if b == 2 {
            p2 = 1.0;
        } else if b == 3 {
            p3 = 1.0;
        }
        if w > 0.0 {
            let mut tc = pi.chosen(b, 0) * p1;
            if b >= 2 {
                tc += pi.chosen(b, 1) * x.q_c * p2;
            }
            if b >= 3 {
                tc += pi.chosen(b, 2) * x.q_c * x.q_c * p3;
            }
            c += w * tc;

            let f1 = pi.not_chosen_single(b);
            n1 += w * (1.0 - f1 + f1 * p1);

            let (g0, g1) = (pi.not_chosen_double(b, 0), pi.not_chosen_double(b, 1));
            let mut t2 = 1.0 - g0 - g1 + g0 * p1;
            if b >= 2 {
                t2 += g1 * x.q_c * p2;
            }
            n2 += w * t2;
        }
        if b >= 3 {
            p3 *= s;
        }
        if b >= 2 {
            p2 *= s;
        }
        p1 *= s;
    }
    DeadEnds {
        q_c: c,
        q_nc1: n1,
        q_nc2: n2,
    }
}

/// `s^k`, zero for negative `k` (every such term has a vanishing coefficient).
fn pow_or_zero(s: f64, k: i64) -> f64 {
    if k < 0 {
        0.0
    } else {
        s.powi(k as i32)
    }
}

/// Jacobian of [`dead_end_map`], rows `(q_c, q_nc1, q_nc2)`.
pub fn dead_end_jacobian(law: &DegreeLaw, pi: &ChoiceProbabilities, x: &DeadEnds) -> [[f64; 3]; 3] {
    let alpha = pi.alpha;
    let s = x.unchosen(alpha);
    let c = x.q_c;
    // d/dq_c and d/ds of each component.
    let (mut cc, mut cs, mut n1s, mut n2c, mut n2s) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (b, &w) in law.neighbor.iter().enumerate().skip(1) {
        if w == 0.0 {
            continue;
        }
        let bi = b as i64;
        let bf = b as f64;
        let (p0, p1, p2) = (pi.chosen(b, 0), pi.chosen(b, 1), pi.chosen(b, 2));
        cc += w * (p1 * pow_or_zero(s, bi - 2) + 2.0 * p2 * c * pow_or_zero(s, bi - 3));
        cs += w
            * (p0 * (bf - 1.0) * pow_or_zero(s, bi - 2)
                + p1 * c * (bf - 2.0) * pow_or_zero(s, bi - 3)
                + p2 * c * c * (bf - 3.0) * pow_or_zero(s, bi - 4));
        n1s += w * pi.not_chosen_single(b) * (bf - 1.0) * pow_or_zero(s, bi - 2);
        let (g0, g1) = (pi.not_chosen_double(b, 0), pi.not_chosen_double(b, 1));
        n2c += w * g1 * pow_or_zero(s, bi - 2);
        n2s += w * (g0 * (bf - 1.0) * pow_or_zero(s, bi - 2) + g1 * c * (bf - 2.0) * pow_or_zero(s, bi - 3));
    }
    let (a1, a2) = (1.0 - alpha, alpha);
    [
        [cc, a1 * cs, a2 * cs],
        [0.0, a1 * n1s, a2 * n1s],
        [n2c, a1 * n2s, a2 * n2s],
    ]
}

/// Smallest joint fixed point of the three dead-end maps, iterated from zero.
/// When the offspring matrix of `D` has Perron root at most one, `D` has no
/// giant component and the answer is `(1, 1, 1)`.
pub fn solve_dead_end_system(law: &DegreeLaw, alpha: f64) -> Result<DeadEnds> {
    solve_dead_end_system_traced(law, alpha, None)
}

pub fn solve_dead_end_system_traced(
    law: &DegreeLaw,
    alpha: f64,
    trace: Option<&mut Vec<[f64; 3]>>,
) -> Result<DeadEnds> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha={alpha} outside (0, 1]")));
    }
    let pi = ChoiceProbabilities::new(alpha);
    if spectral_abscissa(&offspring_matrix(law, alpha)) <= 1.0 {
        return Ok(DeadEnds::ALL);
    }
    let [q_c, q_nc1, q_nc2] = iterate(
        "dead-end system of D",
        |&[c, n1, n2]| {
            let next = dead_end_map(law, &pi, &DeadEnds { q_c: c, q_nc1: n1, q_nc2: n2 });
            [next.q_c, next.q_nc1, next.q_nc2]
        },
        |&[c, n1, n2]| dead_end_jacobian(law, &pi, &DeadEnds { q_c: c, q_nc1: n1, q_nc2: n2 }),
        trace,
    )?;
    Ok(DeadEnds { q_c, q_nc1, q_nc2 })
}

/// Fraction of nodes in the giant component of `D`.
pub fn theta_d(law: &DegreeLaw, alpha: f64, x: &DeadEnds) -> f64 {
    let pi = ChoiceProbabilities::new(alpha);
    let outside: f64 = law
        .pmf
        .iter()
        .enumerate()
        .skip(1)
        .map(|(a, &p)| p * x.isolated_given_degree(&pi, a))
        .sum();
    (1.0 - law.pmf[0] - outside).clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FailureFixedPoint {
    pub gamma: f64,
    /// Dead-end probability in the graph with each edge kept w.p. `gamma`.
    pub q_prime: f64,
    pub theta_g_prime: f64,
    /// `(theta_G' / theta_G)^2`, the best reach fraction flooding can attain under loss.
    pub bound: f64,
}

/// Dead-end fixed point when every transmission succeeds with probability `gamma`.
pub fn failure_fixed_point(law: &DegreeLaw, gamma: f64) -> Result<FailureFixedPoint> {
    failure_fixed_point_traced(law, gamma, None)
}

pub fn failure_fixed_point_traced(
    law: &DegreeLaw,
    gamma: f64,
    trace: Option<&mut Vec<[f64; 1]>>,
) -> Result<FailureFixedPoint> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1]")));
    }
    let q_prime = if !(gamma * law.excess() > 1.0) {
        1.0
    } else {
        let [q] = iterate(
            "dead-end probability under loss",
            |&[x]| [neighbor_generating(law, 1.0 - gamma + gamma * x)],
            |&[x]| [[gamma * neighbor_generating_slope(law, 1.0 - gamma + gamma * x)]],
            trace,
        )?;
        q
    };
    let theta_g_prime = theta_from_q(law, q_prime);
    let theta_g = theta_from_q(law, solve_q(law)?);
    let bound = if theta_g > 0.0 {
        (theta_g_prime / theta_g).powi(2)
    } else {
        0.0
    };
    Ok(FailureFixedPoint {
        gamma,
        q_prime,
        theta_g_prime,
        bound,
    })
}
