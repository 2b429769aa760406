//! Degree predictions for `D`: reverse-choice probabilities, the conditional
//! degree law `P_D(i | a)`, and mean degrees over the giant components.

use super::choice::ChoiceProbabilities;
use super::fixed_point::DeadEnds;
use super::DegreeLaw;
use crate::error::{Error, Result};

/// `r`: probability that a neighbor `v` not in `C_u` picks `u`.
pub fn compute_r(law: &DegreeLaw, alpha: f64) -> f64 {
    let pi = ChoiceProbabilities::new(alpha);
    law.neighbor_sum(|b| pi.reverse_pick(b))
}

/// `(r_nc1, r_nc2)`: the same probability conditioned on `c_v = 1` and `c_v = 2`.
pub fn reverse_pick_split(law: &DegreeLaw, alpha: f64) -> (f64, f64) {
    let pi = ChoiceProbabilities::new(alpha);
    (
        law.neighbor_sum(|b| pi.not_chosen_single(b)),
        law.neighbor_sum(|b| pi.not_chosen_double(b, 0) + pi.not_chosen_double(b, 1)),
    )
}

/// Binomial(`trials`, `p`) pmf, computed by a log-space recurrence.
fn binomial_pmf(trials: usize, p: f64) -> Vec<f64> {
    let mut out = vec![0.0; trials + 1];
    if p <= 0.0 {
        out[0] = 1.0;
        return out;
    }
    if p >= 1.0 {
        out[trials] = 1.0;
        return out;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut log_c = 0.0;
    for (j, slot) in out.iter_mut().enumerate() {
        if j > 0 {
            log_c += ((trials - j + 1) as f64 / j as f64).ln();
        }
        *slot = (log_c + j as f64 * lp + (trials - j) as f64 * lq).exp();
    }
    out
}

/// `P_D(i | a)` for `i = 0..=a`: the node's own one or two distinct picks,
/// plus each remaining neighbor independently picking it back with prob. `r`.
pub fn degree_pmf_in_d(a: usize, alpha: f64, r: f64) -> Result<Vec<f64>> {
    if a == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!("r={r} outside [0, 1]")));
    }
    let pi = ChoiceProbabilities::new(alpha);
    let mut out = vec![0.0; a + 1];
    for (j, p) in binomial_pmf(a - 1, r).into_iter().enumerate() {
        out[j + 1] += pi.random_one(a) * p;
    }
    if a >= 2 {
        for (j, p) in binomial_pmf(a - 2, r).into_iter().enumerate() {
            out[j + 2] += pi.random_two(a) * p;
        }
    }
    Ok(out)
}

/// Mean of [`degree_pmf_in_d`] in closed form.
pub fn mean_degree_in_d(pi: &ChoiceProbabilities, a: usize, r: f64) -> f64 {
    if a == 0 {
        return 0.0;
    }
    let af = a as f64;
    let two = if a >= 2 {
        pi.random_two(a) * (2.0 + (af - 2.0) * r)
    } else {
        0.0
    };
    pi.random_one(a) * (1.0 + (af - 1.0) * r) + two
}

/// `Z_GCC_D`: mean `D`-degree of the members of `GCC_D`, with the node's
/// `G`-degree law tilted by `P_D(GCC_D | a) / theta_D`.
pub fn z_gcc_d(law: &DegreeLaw, alpha: f64, dead_ends: &DeadEnds, theta_d: f64, r: f64) -> Result<f64> {
    if !(theta_d > 0.0) {
        return Err(Error::InvalidParameter("theta_D is zero".into()));
    }
    let pi = ChoiceProbabilities::new(alpha);
    let sum: f64 = law
        .pmf
        .iter()
        .enumerate()
        .skip(1)
        .map(|(a, &p)| dead_ends.membership(&pi, a) * p * mean_degree_in_d(&pi, a, r))
        .sum();
    Ok(sum / theta_d)
}

/// `Z_{D,GCC_G}`: mean `D`-degree over `GCC_G`. The neighbor-degree law is
/// conditioned on the degree-`a` node being in `GCC_G`:
/// `p(b | a) = (b P(b) / Z) (1 - q^(a+b-2)) / (1 - q^a)`.
///
/// The `b`-sum factorizes as `S0 - q^(a-1) T`, so the whole thing is linear in
/// the support size.
pub fn z_d_gcc_g(law: &DegreeLaw, alpha: f64, q: f64, theta_g: f64) -> Result<f64> {
    if !(q < 1.0) || !(theta_g > 0.0) {
        return Err(Error::BelowPhaseTransition);
    }
    let pi = ChoiceProbabilities::new(alpha);
    let mut s0 = 0.0;
    let mut t = 0.0;
    let mut pw = 1.0; // q^(b-1)
    for (b, &w) in law.neighbor.iter().enumerate().skip(1) {
        let g = pi.reverse_pick(b);
        s0 += w * g;
        t += w * g * pw;
        pw *= q;
    }
    let mut total = 0.0;
    let mut qa1 = 1.0; // q^(a-1)
    for (a, &p) in law.pmf.iter().enumerate().skip(1) {
        let qa = qa1 * q;
        let af = a as f64;
        // (1 - q^a) * mean degree, with (1 - q^a) r_a = S0 - q^(a-1) T.
        let in_gcc = 1.0 - qa;
        let weighted_r = s0 - qa1 * t;
        let two_rest = if a >= 2 { pi.random_two(a) * (af - 2.0) } else { 0.0 };
        let own = pi.random_one(a) + 2.0 * pi.random_two(a);
        total += p * (in_gcc * own + (pi.random_one(a) * (af - 1.0) + two_rest) * weighted_r);
        qa1 = qa;
    }
    Ok(total / theta_g)
}

/// `Z_{D,GCC_G}` without the membership correction: every neighbor of a node
/// in `GCC_G` has the unconditioned neighbor law.
pub fn z_d_gcc_g_uncorrected(law: &DegreeLaw, alpha: f64, q: f64, theta_g: f64) -> f64 {
    let pi = ChoiceProbabilities::new(alpha);
    let r = compute_r(law, alpha);
    let mut pw = 1.0;
    let mut total = 0.0;
    for (a, &p) in law.pmf.iter().enumerate() {
        total += (1.0 - pw) * p * mean_degree_in_d(&pi, a, r);
        pw *= q;
    }
    total / theta_g
}
