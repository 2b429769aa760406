//! Expected path lengths from the originator, in `G` and in `D`.
//!
//! The `ℓ`-neighbor counts of `D` follow `A B^(ℓ-1) [1, r_nc1, r_nc2]`, where
//! `A` and the rows of `B` are the linear coefficients of the t-functions.

use num_complex::Complex64 as C;

use super::choice::ChoiceProbabilities;
use super::eigen::{eigen3, mat_vec, row_vec, Eigen3, Mat3};
use super::fixed_point::DeadEnds;
use super::DegreeLaw;
use crate::error::{Error, Result};

/// Expected number of other neighbors of a neighbor: `sum_b (b P(b) / Z) (b - 1)`.
pub fn rho(law: &DegreeLaw) -> f64 {
    law.neighbor_sum(|b| b as f64 - 1.0)
}

/// Mean `G`-degree of the members of `GCC_G`.
pub fn z_gcc_g(law: &DegreeLaw, q: f64, theta_g: f64) -> Result<f64> {
    if !(theta_g > 0.0) {
        return Err(Error::BelowPhaseTransition);
    }
    let mut pw = 1.0;
    let mut sum = 0.0;
    for (a, &p) in law.pmf.iter().enumerate() {
        sum += a as f64 * (1.0 - pw) * p;
        pw *= q;
    }
    Ok(sum / theta_g)
}

/// `L_G`: the real `L` at which `sum_{l=1}^L Z_GCC_G rho^(l-1)` reaches `n theta_G - 1`.
pub fn l_g(n: usize, theta_g: f64, z_gcc_g: f64, rho: f64) -> Result<f64> {
    if !(rho > 1.0) {
        return Err(Error::InvalidParameter(format!("rho={rho} must exceed 1")));
    }
    let target = n as f64 * theta_g - 1.0;
    Ok(((target / z_gcc_g) * (rho - 1.0) + 1.0).ln() / rho.ln())
}

/// The four t-functions, evaluated literally.
pub struct TFunctions<'a> {
    law: &'a DegreeLaw,
    pi: ChoiceProbabilities,
    dead_ends: DeadEnds,
    theta_d: f64,
}

impl<'a> TFunctions<'a> {
    pub fn new(law: &'a DegreeLaw, alpha: f64, dead_ends: DeadEnds, theta_d: f64) -> Self {
        Self {
            law,
            pi: ChoiceProbabilities::new(alpha),
            dead_ends,
            theta_d,
        }
    }

    fn mix(&self, y: f64, z: f64) -> f64 {
        (1.0 - self.pi.alpha) * y + self.pi.alpha * z
    }

    pub fn t_c(&self, x: f64, y: f64, z: f64) -> f64 {
        let m = self.mix(y, z);
        let pi = &self.pi;
        self.law.neighbor_sum(|b| {
            let bf = b as f64;
            let mut s = pi.chosen(b, 0) * (bf - 1.0) * m;
            if b >= 2 {
                s += pi.chosen(b, 1) * (x + (bf - 2.0) * m);
            }
            if b >= 3 {
                s += pi.chosen(b, 2) * (2.0 * x + (bf - 3.0) * m);
            }
            s
        })
    }

    pub fn t_nc1(&self, y: f64, z: f64) -> f64 {
        let m = self.mix(y, z);
        self.law
            .neighbor_sum(|b| self.pi.not_chosen_single(b) * (b as f64 - 1.0) * m)
    }

    pub fn t_nc2(&self, x: f64, y: f64, z: f64) -> f64 {
        let m = self.mix(y, z);
        let pi = &self.pi;
        self.law.neighbor_sum(|b| {
            let bf = b as f64;
            let mut s = pi.not_chosen_double(b, 0) * (bf - 1.0) * m;
            if b >= 2 {
                s += pi.not_chosen_double(b, 1) * (x + (bf - 2.0) * m);
            }
            s
        })
    }

    pub fn t_r(&self, x: f64, y: f64, z: f64) -> f64 {
        let m = self.mix(y, z);
        let pi = &self.pi;
        let sum: f64 = self
            .law
            .pmf
            .iter()
            .enumerate()
            .skip(1)
            .map(|(a, &p)| {
                let af = a as f64;
                let mut s = pi.random_one(a) * (x + (af - 1.0) * m);
                if a >= 2 {
                    s += pi.random_two(a) * (2.0 * x + (af - 2.0) * m);
                }
                self.dead_ends.membership(pi, a) * p * s
            })
            .sum();
        sum / self.theta_d
    }
}

/// The eleven linear coefficients of the t-functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Beta {
    pub c: [f64; 3],
    /// `t_nc1` has no `x` term; stored as `[0, beta_nc1^nc1, beta_nc1^nc2]`.
    pub nc1: [f64; 3],
    pub nc2: [f64; 3],
    pub r: [f64; 3],
}

impl Beta {
    /// Reads off the coefficients by evaluating at the unit vectors.
    pub fn from_t_functions(t: &TFunctions) -> Self {
        let e = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let c = e.map(|[x, y, z]| t.t_c(x, y, z));
        let nc1 = [0.0, t.t_nc1(1.0, 0.0), t.t_nc1(0.0, 1.0)];
        let nc2 = e.map(|[x, y, z]| t.t_nc2(x, y, z));
        let r = e.map(|[x, y, z]| t.t_r(x, y, z));
        Self { c, nc1, nc2, r }
    }

    pub fn a(&self) -> [f64; 3] {
        self.r
    }

    pub fn b(&self) -> Mat3 {
        [self.c, self.nc1, self.nc2]
    }

    /// The eleven values in the order c^c, c^nc1, c^nc2, nc1^nc1, nc1^nc2,
    /// nc2^c, nc2^nc1, nc2^nc2, r^c, r^nc1, r^nc2.
    pub fn as_array(&self) -> [f64; 11] {
        [
            self.c[0], self.c[1], self.c[2], self.nc1[1], self.nc1[2], self.nc2[0], self.nc2[1],
            self.nc2[2], self.r[0], self.r[1], self.r[2],
        ]
    }
}

/// `B` alone; it does not depend on the dead-end probabilities. It is also
/// the Jacobian of the dead-end maps at `(1, 1, 1)`, so its Perron root
/// decides whether `D` has a giant component.
pub fn offspring_matrix(law: &DegreeLaw, alpha: f64) -> Mat3 {
    let t = TFunctions::new(law, alpha, DeadEnds::ALL, 1.0);
    let e = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    [
        e.map(|[x, y, z]| t.t_c(x, y, z)),
        [0.0, t.t_nc1(1.0, 0.0), t.t_nc1(0.0, 1.0)],
        e.map(|[x, y, z]| t.t_nc2(x, y, z)),
    ]
}

/// `A B^(l-1) v` for `l = 1..=max_l` by repeated multiplication.
pub fn layer_sizes_direct(a: &[f64; 3], b: &Mat3, v: &[f64; 3], max_l: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_l);
    let mut w = *v;
    for _ in 0..max_l {
        out.push(row_vec(a, &w));
        w = mat_vec(b, &w);
    }
    out
}

/// `A V` and `V^-1 v`, so that `A B^k v = sum_j left_j lambda_j^k right_j`.
fn modal_weights(e: &Eigen3, a: &[f64; 3], v: &[f64; 3]) -> [C; 3] {
    [0, 1, 2].map(|k| {
        let left: C = (0..3).map(|i| e.vectors[i][k] * a[i]).sum();
        let right: C = (0..3).map(|j| e.inverse[k][j] * v[j]).sum();
        left * right
    })
}

/// `A B^(l-1) v` through the eigen-decomposition; the real part of a sum
/// whose imaginary part cancels for integer `l`.
pub fn layer_size_eigen(e: &Eigen3, a: &[f64; 3], v: &[f64; 3], l: usize) -> C {
    let w = modal_weights(e, a, v);
    (0..3).map(|k| w[k] * e.values[k].powi(l as i32 - 1)).sum()
}

/// `(lambda^L - 1) / (lambda - 1)`, continued to `L` when `lambda = 1` and to
/// 1 when `lambda = 0`.
fn geometric(lambda: C, l: f64) -> C {
    let one = C::new(1.0, 0.0);
    if lambda.norm() < 1e-300 {
        return if l > 0.0 { one } else { C::new(0.0, 0.0) };
    }
    let d = lambda - one;
    if d.norm() < 1e-12 {
        return C::new(l, 0.0);
    }
    (lambda.powf(l) - one) / d
}

/// Outcome of the `L_D` search.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSolution {
    pub l_d: f64,
    /// Imaginary residue of the cumulative sum at the root.
    pub imaginary_residue: f64,
}

/// Solves `Re sum_k w_k (lambda_k^L - 1)/(lambda_k - 1) = n theta_D - 1` for
/// real `L` by bisection. The bracket starts at `[0, 10 ln n]` and is doubled
/// while the target is out of reach.
pub fn solve_l_d(a: &[f64; 3], b: &Mat3, v: &[f64; 3], n: usize, theta_d: f64) -> Result<PathSolution> {
    let target = n as f64 * theta_d - 1.0;
    if !(target > 0.0) {
        return Err(Error::InvalidParameter("n theta_D - 1 must be positive".into()));
    }
    let e = eigen3(b).ok_or_else(|| {
        Error::InvalidParameter("path-length matrix has repeated eigenvalues".into())
    })?;
    let w = modal_weights(&e, a, v);
    let cumulative = |l: f64| -> C { (0..3).map(|k| w[k] * geometric(e.values[k], l)).sum() };
    let mut hi = 10.0 * (n as f64).ln().max(1.0);
    let mut doublings = 0;
    while cumulative(hi).re < target {
        hi *= 2.0;
        doublings += 1;
        if doublings > 20 {
            return Err(Error::NonConvergence {
                what: "path length in D",
                iterations: doublings,
            });
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cumulative(mid).re < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let l_d = 0.5 * (lo + hi);
    let imaginary_residue = cumulative(l_d).im.abs();
    // A negative real eigenvalue makes lambda^L genuinely complex at fractional L.
    let negative_real = e.values.iter().any(|x| x.im == 0.0 && x.re < 0.0);
    debug_assert!(
        negative_real || imaginary_residue < 1e-8 * target.max(1.0),
        "imaginary residue {imaginary_residue}"
    );
    Ok(PathSolution { l_d, imaginary_residue })
}
