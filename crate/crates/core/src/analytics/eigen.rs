//! Eigen-decomposition of real 3x3 matrices with distinct eigenvalues.
//!
//! Eigenvalues come from the characteristic cubic (Cardano, then Newton
//! polish on each root); eigenvectors are cross products of rows of
//! `M - lambda I`. Complex pairs are carried in complex arithmetic throughout.

use num_complex::Complex64 as C;

pub type Mat3 = [[f64; 3]; 3];
pub type CMat3 = [[C; 3]; 3];

#[derive(Clone, Debug)]
pub struct Eigen3 {
    pub values: [C; 3],
    /// Columns are eigenvectors.
    pub vectors: CMat3,
    pub inverse: CMat3,
}

/// Coefficients `(c2, c1, c0)` of `det(lambda I - M) = lambda^3 + c2 lambda^2 + c1 lambda + c0`.
pub fn characteristic(m: &Mat3) -> (f64, f64, f64) {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    (-tr, minors, -det3(m))
}

pub fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Roots of the monic cubic `x^3 + a x^2 + b x + c`.
pub fn cubic_roots(a: f64, b: f64, c: f64) -> [C; 3] {
    // Depressed cubic t^3 + p t + q with x = t - a/3.
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = C::new(q * q / 4.0 + p * p * p / 27.0, 0.0);
    let sq = disc.sqrt();
    let mut u3 = C::new(-q / 2.0, 0.0) + sq;
    if u3.norm() < 1e-300 {
        u3 = C::new(-q / 2.0, 0.0) - sq;
    }
    let omega = C::new(-0.5, 3f64.sqrt() / 2.0);
    let mut roots = [C::new(0.0, 0.0); 3];
    if u3.norm() < 1e-300 {
        // p = q = 0: triple root.
        roots = [C::new(-shift, 0.0); 3];
    } else {
        let u = u3.cbrt();
        let mut w = C::new(1.0, 0.0);
        for root in roots.iter_mut() {
            let uk = u * w;
            *root = uk - p / (3.0 * uk) - shift;
            w *= omega;
        }
    }
    let f = |x: C| ((x + a) * x + b) * x + c;
    let df = |x: C| (3.0 * x + 2.0 * a) * x + b;
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = df(*r);
            if d.norm() == 0.0 {
                break;
            }
            let step = f(*r) / d;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *r -= step;
        }
        if r.im.abs() < 1e-14 * r.norm().max(1.0) {
            r.im = 0.0;
        }
    }
    roots.sort_by(|x, y| y.norm().total_cmp(&x.norm()).then(y.re.total_cmp(&x.re)));
    roots
}

fn cross(a: [C; 3], b: [C; 3]) -> [C; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm2(v: &[C; 3]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

/// Null vector of `M - lambda I`, normalized.
fn eigenvector(m: &Mat3, lambda: C) -> [C; 3] {
    let rows: Vec<[C; 3]> = (0..3)
        .map(|i| {
            let mut r = [C::new(0.0, 0.0); 3];
            for j in 0..3 {
                r[j] = C::new(m[i][j], 0.0) - if i == j { lambda } else { C::new(0.0, 0.0) };
            }
            r
        })
        .collect();
    let best = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| cross(rows[i], rows[j]))
        .max_by(|x, y| norm2(x).total_cmp(&norm2(y)))
        .expect("three candidates");
    let n = norm2(&best).sqrt();
    best.map(|x| x / n)
}

pub fn cdet3(m: &CMat3) -> C {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse by adjugate; `None` when singular.
pub fn cinv3(m: &CMat3) -> Option<CMat3> {
    let det = cdet3(m);
    if det.norm() < 1e-300 {
        return None;
    }
    let mut inv = [[C::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            inv[i][j] = minor * sign / det;
        }
    }
    Some(inv)
}

/// Diagonalize `m`. Returns `None` if eigenvalues are not distinct (relative
/// gap below `1e-9`) or the eigenvector matrix is singular.
pub fn eigen3(m: &Mat3) -> Option<Eigen3> {
    let (c2, c1, c0) = characteristic(m);
    let values = cubic_roots(c2, c1, c0);
    let scale = values.iter().map(|v| v.norm()).fold(1e-300, f64::max);
    for i in 0..3 {
        for j in i + 1..3 {
            if (values[i] - values[j]).norm() < 1e-9 * scale {
                return None;
            }
        }
    }
    let cols = values.map(|l| eigenvector(m, l));
    let mut vectors = [[C::new(0.0, 0.0); 3]; 3];
    for (k, col) in cols.iter().enumerate() {
        for i in 0..3 {
            vectors[i][k] = col[i];
        }
    }
    let inverse = cinv3(&vectors)?;
    Some(Eigen3 {
        values,
        vectors,
        inverse,
    })
}

/// Largest real part among the eigenvalues, which for a nonnegative matrix is
/// its Perron root.
pub fn spectral_abscissa(m: &Mat3) -> f64 {
    let (c2, c1, c0) = characteristic(m);
    cubic_roots(c2, c1, c0)
        .iter()
        .map(|v| v.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn mat_vec(m: &Mat3, v: &[f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| (0..3).map(|j| m[i][j] * v[j]).sum())
}

pub fn row_vec(a: &[f64; 3], v: &[f64; 3]) -> f64 {
    (0..3).map(|i| a[i] * v[i]).sum()
}
