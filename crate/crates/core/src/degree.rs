//! Degree distributions and their moments.
//!
//! A [`DegreeModel`] is a law on node degrees truncated at `max_degree` and
//! renormalized, which is what a finite graph on `n` nodes can realize
//! (`max_degree = n - 1` by default). Analytic sums elsewhere in the crate run
//! over `0..=max_degree` with these renormalized probabilities.

use crate::error::{Error, Result};

/// Below this cap the power-law normalization is summed term by term.
const DIRECT_SUM_LIMIT: u64 = 2000;
/// Head length summed directly before the Euler-Maclaurin tail.
const EM_HEAD: u64 = 1000;

#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind {
    /// Poisson with mean `z` (the Erdős–Rényi degree law).
    Poisson { z: f64 },
    /// `P(a) = a^-tau / zeta(tau)` for `a >= 1`.
    PowerLaw { tau: f64 },
    /// Explicit finite-support law, `pmf[a]` for `a = 0..pmf.len()`.
    Custom(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    /// Mean degree `Z_G`.
    pub mean: f64,
    /// `<K^2>`.
    pub second: f64,
}

impl Moments {
    /// `<K^2> / Z_G`; the giant component exists iff this exceeds 2.
    pub fn criterion_ratio(&self) -> f64 {
        self.second / self.mean
    }

    /// Mean number of further neighbors of a node reached along an edge.
    pub fn excess(&self) -> f64 {
        self.criterion_ratio() - 1.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeModel {
    kind: ModelKind,
    max_degree: usize,
    /// Precomputed pmf for Poisson/Custom; empty for power laws.
    table: Vec<f64>,
    /// Truncated normalizer for power laws.
    norm: f64,
}

impl DegreeModel {
    pub fn poisson(z: f64, max_degree: usize) -> Result<Self> {
        if !(z.is_finite() && z >= 0.0) {
            return Err(Error::InvalidParameter(format!("poisson mean z={z}")));
        }
        // pmf(a) = pmf(a-1) * z / a, carried in log space so large z cannot underflow pmf(0).
        let mut table = Vec::new();
        let mut log_p = -z;
        for a in 0..=max_degree {
            if a > 0 {
                log_p += (z / a as f64).ln();
            }
            let p = log_p.exp();
            if p == 0.0 && a as f64 > z {
                break;
            }
            table.push(p);
        }
        let total: f64 = table.iter().sum();
        table.iter_mut().for_each(|p| *p /= total);
        Ok(Self {
            kind: ModelKind::Poisson { z },
            max_degree,
            table,
            norm: total,
        })
    }

    pub fn power_law(tau: f64, max_degree: usize) -> Result<Self> {
        if !(tau.is_finite() && tau > 1.0) {
            return Err(Error::InvalidParameter(format!("power-law exponent tau={tau}")));
        }
        if max_degree < 1 {
            return Err(Error::InvalidParameter("power law needs max_degree >= 1".into()));
        }
        Ok(Self {
            kind: ModelKind::PowerLaw { tau },
            max_degree,
            table: Vec::new(),
            norm: partial_zeta(tau, Some(max_degree as u64)),
        })
    }

    /// Arbitrary finite law; weights are renormalized to sum to one.
    pub fn custom(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter("custom pmf weights".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParameter("custom pmf has zero mass".into()));
        }
        let table: Vec<f64> = weights.iter().map(|w| w / total).collect();
        Ok(Self {
            max_degree: table.len() - 1,
            kind: ModelKind::Custom(table.clone()),
            table,
            norm: 1.0,
        })
    }

    /// Every node has degree `d`.
    pub fn regular(d: usize) -> Self {
        let mut w = vec![0.0; d + 1];
        w[d] = 1.0;
        Self::custom(w).expect("valid point mass")
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Short family name used in CSV output.
    pub fn family(&self) -> &'static str {
        match self.kind {
            ModelKind::Poisson { .. } => "poisson",
            ModelKind::PowerLaw { .. } => "powerlaw",
            ModelKind::Custom(_) => "custom",
        }
    }

    /// The family's scalar parameter (`z` or `tau`); NaN for custom laws.
    pub fn parameter(&self) -> f64 {
        match self.kind {
            ModelKind::Poisson { z } => z,
            ModelKind::PowerLaw { tau } => tau,
            ModelKind::Custom(_) => f64::NAN,
        }
    }

    pub fn pmf(&self, a: usize) -> Result<f64> {
        if a > self.max_degree {
            return Err(Error::DegreeOutOfRange {
                degree: a,
                max: self.max_degree,
            });
        }
        Ok(self.pmf_unchecked(a))
    }

    fn pmf_unchecked(&self, a: usize) -> f64 {
        match self.kind {
            ModelKind::PowerLaw { tau } => {
                if a == 0 {
                    0.0
                } else {
                    (a as f64).powf(-tau) / self.norm
                }
            }
            _ => self.table.get(a).copied().unwrap_or(0.0),
        }
    }

    /// Dense pmf over the effective support `0..=k`, `k <= max_degree`
    /// (trailing entries that underflow to zero are dropped).
    pub fn table(&self) -> Vec<f64> {
        match self.kind {
            ModelKind::PowerLaw { .. } => (0..=self.max_degree).map(|a| self.pmf_unchecked(a)).collect(),
            _ => self.table.clone(),
        }
    }

    pub fn moments(&self) -> Moments {
        match self.kind {
            ModelKind::PowerLaw { tau } => {
                let k = Some(self.max_degree as u64);
                Moments {
                    mean: partial_zeta(tau - 1.0, k) / self.norm,
                    second: partial_zeta(tau - 2.0, k) / self.norm,
                }
            }
            _ => {
                let (mut mean, mut second) = (0.0, 0.0);
                for (a, p) in self.table.iter().enumerate() {
                    let a = a as f64;
                    mean += a * p;
                    second += a * a * p;
                }
                Moments { mean, second }
            }
        }
    }

    /// Moments of the law before truncation; infinite where the series diverges.
    pub fn untruncated_moments(&self) -> Moments {
        match self.kind {
            ModelKind::Poisson { z } => Moments {
                mean: z,
                second: z * z + z,
            },
            ModelKind::PowerLaw { tau } => {
                let zt = zeta(tau);
                Moments {
                    mean: zeta(tau - 1.0) / zt,
                    second: zeta(tau - 2.0) / zt,
                }
            }
            ModelKind::Custom(_) => self.moments(),
        }
    }

    /// `b P(b) / Z_G`: probability that the far end of a random edge has degree `b`.
    pub fn neighbor_degree_pmf(&self, b: usize) -> Result<f64> {
        let p = self.pmf(b)?;
        if b == 0 {
            return Ok(0.0);
        }
        let mean = self.moments().mean;
        if mean <= 0.0 {
            return Err(Error::InvalidParameter("mean degree is zero".into()));
        }
        Ok(b as f64 * p / mean)
    }

    /// `<K^2>/Z_G > 2` under the truncated law.
    pub fn above_phase_transition(&self) -> Result<bool> {
        criterion(self.moments())
    }

    /// Same criterion evaluated on the untruncated law.
    pub fn above_phase_transition_untruncated(&self) -> Result<bool> {
        criterion(self.untruncated_moments())
    }

    /// Whether `sum_b b^2 P(b)` converges for the law behind the truncation.
    /// Power-law summands decay as `b^(2 - tau)`, so the series diverges for
    /// `tau <= 3` and every quantity built on the excess degree grows with the cap.
    pub fn second_moment_converges(&self) -> bool {
        match self.kind {
            ModelKind::PowerLaw { tau } => tau - 2.0 > 1.0,
            _ => true,
        }
    }
}

fn criterion(m: Moments) -> Result<bool> {
    if !(m.mean > 0.0) {
        return Err(Error::InvalidParameter("mean degree is zero".into()));
    }
    Ok(m.criterion_ratio() > 2.0)
}

/// Riemann zeta by direct summation plus an Euler-Maclaurin tail.
/// Returns `+inf` for `s <= 1`.
pub fn zeta(s: f64) -> f64 {
    partial_zeta(s, None)
}

/// `sum_{y=1}^{k} y^-s`, with `k = None` meaning infinity.
pub fn partial_zeta(s: f64, k: Option<u64>) -> f64 {
    match k {
        Some(k) if k <= DIRECT_SUM_LIMIT => (1..=k).rev().map(|y| (y as f64).powf(-s)).sum(),
        None if s <= 1.0 => f64::INFINITY,
        _ => {
            let n = EM_HEAD;
            let head: f64 = (1..=n).rev().map(|y| (y as f64).powf(-s)).sum();
            head + em_tail(s, n as f64, k.map(|k| k as f64))
        }
    }
}

/// `sum_{y=n+1}^{k} y^-s` by Euler-Maclaurin with corrections through the fifth derivative.
fn em_tail(s: f64, n: f64, k: Option<f64>) -> f64 {
    let f = |x: f64| x.powf(-s);
    let d1 = |x: f64| -s * x.powf(-s - 1.0);
    let d3 = |x: f64| -s * (s + 1.0) * (s + 2.0) * x.powf(-s - 3.0);
    let d5 = |x: f64| -s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * x.powf(-s - 5.0);
    let (fk, d1k, d3k, d5k) = match k {
        Some(k) => (f(k), d1(k), d3(k), d5(k)),
        None => (0.0, 0.0, 0.0, 0.0),
    };
    let integral = match k {
        Some(k) if (s - 1.0).abs() < 1e-14 => (k / n).ln(),
        Some(k) => (n.powf(1.0 - s) - k.powf(1.0 - s)) / (s - 1.0),
        None => n.powf(1.0 - s) / (s - 1.0),
    };
    // Sum over [n, k] inclusive, then drop the f(n) term.
    integral + (f(n) + fk) / 2.0 + (d1k - d1(n)) / 12.0 - (d3k - d3(n)) / 720.0
        + (d5k - d5(n)) / 30240.0
        - f(n)
}

/// Exponent at which the untruncated power law crosses `<K^2>/Z_G = 2`,
/// i.e. the root of `zeta(tau - 2) / zeta(tau - 1) = 2` on `(3, 4)`.
pub fn critical_tau() -> f64 {
    let f = |tau: f64| zeta(tau - 2.0) / zeta(tau - 1.0) - 2.0;
    bisect(f, 3.0 + 1e-6, 4.0, 1e-12)
}

/// Mean degree at which a Poisson law crosses the criterion.
pub fn critical_z() -> f64 {
    let f = |z: f64| {
        let m = DegreeModel::poisson(z, 400).expect("valid z").moments();
        m.criterion_ratio() - 2.0
    };
    bisect(f, 0.01, 10.0, 1e-12)
}

/// Root of a function with `f(lo) > 0 > f(hi)` or `f(lo) < 0 < f(hi)`.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let lo_sign = f(lo) > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
