//! Generating-function predictions for the uniform choice rule.

pub mod choice;
pub mod degrees;
pub mod eigen;
pub mod fixed_point;
pub mod paths;

use num_complex::Complex64;

use crate::degree::DegreeModel;
use crate::error::{Error, Result};

pub use choice::ChoiceProbabilities;
pub use fixed_point::{DeadEnds, FailureFixedPoint};

/// A degree law in the dense form the analytic sums run over.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeLaw {
    /// `P(a)` for `a = 0..=K`.
    pub pmf: Vec<f64>,
    /// `b P(b) / Z` for `b = 0..=K`, zero at `b = 0`.
    pub neighbor: Vec<f64>,
    pub mean: f64,
    pub second: f64,
}

impl DegreeLaw {
    pub fn new(model: &DegreeModel) -> Self {
        Self::from_pmf(model.table())
    }

    pub fn from_pmf(pmf: Vec<f64>) -> Self {
        let (mut mean, mut second) = (0.0, 0.0);
        for (a, &p) in pmf.iter().enumerate() {
            mean += a as f64 * p;
            second += (a * a) as f64 * p;
        }
        let neighbor = pmf
            .iter()
            .enumerate()
            .map(|(b, &p)| if mean > 0.0 { b as f64 * p / mean } else { 0.0 })
            .collect();
        Self {
            pmf,
            neighbor,
            mean,
            second,
        }
    }

    /// Mean excess degree `<K^2>/Z - 1`; zero for the empty law.
    pub fn excess(&self) -> f64 {
        if self.mean > 0.0 {
            self.second / self.mean - 1.0
        } else {
            0.0
        }
    }

    /// `sum_{b >= 1} (b P(b) / Z) f(b)`.
    pub fn neighbor_sum(&self, mut f: impl FnMut(usize) -> f64) -> f64 {
        self.neighbor
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &w)| w > 0.0)
            .map(|(b, &w)| w * f(b))
            .sum()
    }
}

/// Predicted path-length ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathRatio {
    Converged(f64),
    /// The layer sums grow with the degree cap (heavy tails).
    NonConvergent,
    /// `D` has no giant component.
    Undefined,
}

impl PathRatio {
    pub fn value(&self) -> Option<f64> {
        match *self {
            PathRatio::Converged(x) => Some(x),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Prediction {
    pub alpha: f64,
    pub n: usize,
    pub q: f64,
    pub dead_ends: DeadEnds,
    pub theta_g: f64,
    pub theta_d: f64,
    pub r: f64,
    pub r_nc1: f64,
    pub r_nc2: f64,
    /// `None` when `theta_D = 0`.
    pub z_gcc_d: Option<f64>,
    pub z_d_gcc_g: f64,
    pub z_gcc_g: f64,
    pub rho: f64,
    pub l_g: f64,
    pub l_d: Option<f64>,
    pub pn: f64,
    pub pm: f64,
    pub pt: PathRatio,
    pub beta: Option<paths::Beta>,
    pub eigenvalues: Option<[Complex64; 3]>,
    pub failure: Option<FailureFixedPoint>,
}

impl Prediction {
    pub fn a(&self) -> Option<[f64; 3]> {
        self.beta.map(|b| b.a())
    }

    pub fn b(&self) -> Option<eigen::Mat3> {
        self.beta.map(|b| b.b())
    }
}

/// Runs the whole pipeline for the uniform rule on `n` nodes.
pub fn predict(model: &DegreeModel, alpha: f64, n: usize, gamma: Option<f64>) -> Result<Prediction> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha={alpha} outside (0, 1]")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n={n} too small")));
    }
    let law = DegreeLaw::new(model);
    if !(law.excess() > 1.0) {
        return Err(Error::BelowPhaseTransition);
    }
    let q = fixed_point::solve_q(&law)?;
    let theta_g = fixed_point::theta_from_q(&law, q);
    if !(theta_g > 0.0) {
        return Err(Error::BelowPhaseTransition);
    }
    let dead_ends = fixed_point::solve_dead_end_system(&law, alpha)?;
    let theta_d = fixed_point::theta_d(&law, alpha, &dead_ends);
    let r = degrees::compute_r(&law, alpha);
    let (r_nc1, r_nc2) = degrees::reverse_pick_split(&law, alpha);
    let z_gcc_d = if theta_d > 0.0 {
        Some(degrees::z_gcc_d(&law, alpha, &dead_ends, theta_d, r)?)
    } else {
        None
    };
    let z_d_gcc_g = degrees::z_d_gcc_g(&law, alpha, q, theta_g)?;
    let z_gcc_g = paths::z_gcc_g(&law, q, theta_g)?;
    let rho = paths::rho(&law);
    let l_g = paths::l_g(n, theta_g, z_gcc_g, rho)?;

    let nf = n as f64;
    let pn = (theta_d / theta_g).powi(2);
    let pm = match z_gcc_d {
        Some(zd) => theta_d * theta_d * nf * zd / (2.0 * theta_g * (nf * theta_g - 1.0)),
        None => 0.0,
    };

    // Heavy tails make the layer sums diverge whatever theta_D is, so that
    // status wins over a missing giant component.
    let heavy = !model.second_moment_converges();
    let (beta, eigenvalues, l_d, pt) = if theta_d > 0.0 && nf * theta_d > 1.0 {
        let beta = paths::Beta::from_t_functions(&paths::TFunctions::new(&law, alpha, dead_ends, theta_d));
        let eig = eigen::eigen3(&beta.b()).map(|e| e.values);
        if heavy {
            (Some(beta), eig, None, PathRatio::NonConvergent)
        } else {
            let sol = paths::solve_l_d(&beta.a(), &beta.b(), &[1.0, r_nc1, r_nc2], n, theta_d)?;
            let pt = theta_d * sol.l_d / (theta_g * l_g);
            (Some(beta), eig, Some(sol.l_d), PathRatio::Converged(pt))
        }
    } else if heavy {
        (None, None, None, PathRatio::NonConvergent)
    } else {
        (None, None, None, PathRatio::Undefined)
    };

    let failure = gamma.map(|g| fixed_point::failure_fixed_point(&law, g)).transpose()?;

    Ok(Prediction {
        alpha,
        n,
        q,
        dead_ends,
        theta_g,
        theta_d,
        r,
        r_nc1,
        r_nc2,
        z_gcc_d,
        z_d_gcc_g,
        z_gcc_g,
        rho,
        l_g,
        l_d,
        pn,
        pm,
        pt,
        beta,
        eigenvalues,
        failure,
    })
}
