//! Roots of real polynomials of degree at most six.
//!
//! Degrees one and two use closed forms. Higher degrees are solved as the
//! eigenvalues of the companion matrix
//!
//! ```text
//! ⎡ −a₁/a₀  −a₂/a₀  …  −aₙ₋₁/a₀  −aₙ/a₀ ⎤
//! ⎢   1       0     …     0        0    ⎥
//! ⎢   0       1     …     0        0    ⎥
//! ⎢   ⋮               ⋱            ⋮    ⎥
//! ⎣   0       0     …     1        0    ⎦
//! ```
//!
//! which is already upper Hessenberg, so it is balanced and handed straight
//! to a Francis double-shift QR iteration.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

pub const MAX_DEGREE: usize = 6;
/// Leading coefficients at or below this fraction of the largest coefficient
/// magnitude are stripped.
pub const DEGREE_DROP_TOL: f64 = 1e-12;
/// A root counts as real when `|Im| ≤ REAL_ROOT_TOL · max(1, |root|)`.
pub const REAL_ROOT_TOL: f64 = 1e-8;
/// Slack on the feasible interval before clamping.
pub const INTERVAL_SLACK: f64 = 1e-12;

const MAX_QR_ITERATIONS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("polynomial has no nonzero coefficient")]
    ZeroPolynomial,
    #[error("polynomial coefficients must be finite")]
    NonFinite,
    #[error("degree {0} exceeds the supported maximum of {MAX_DEGREE}")]
    DegreeTooHigh(usize),
    #[error("leading coefficient {0:e} is negligible; strip the degree first")]
    NegligibleLeading(f64),
    #[error("polynomial of degree 0 has no companion matrix")]
    Constant,
    #[error("QR iteration did not converge")]
    NoConvergence,
}

/// Real coefficients, highest degree first: `a₀xⁿ + a₁xⁿ⁻¹ + … + aₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, PolyError> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(PolyError::NonFinite);
        }
        if coeffs.iter().all(|&c| c == 0.0) {
            return Err(PolyError::ZeroPolynomial);
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(PolyError::DegreeTooHigh(coeffs.len() - 1));
        }
        Ok(Self { coeffs })
    }

    /// Monic polynomial with the given roots, returned with real parts of
    /// the expanded coefficients (exact for conjugate-closed root sets).
    pub fn from_roots(roots: &[Complex64]) -> Result<Self, PolyError> {
        Self::new(
            expand_roots(Complex64::new(1.0, 0.0), roots)
                .iter()
                .map(|c| c.re)
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Nominal degree, counting leading zeros.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Drops leading coefficients with magnitude `≤ DEGREE_DROP_TOL · max|aᵢ|`.
    pub fn stripped(&self) -> RealPolynomial {
        let biggest = self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let cut = DEGREE_DROP_TOL * biggest;
        let first = self.coeffs.iter().position(|c| c.abs() > cut).unwrap_or(0);
        RealPolynomial {
            coeffs: self.coeffs[first..].to_vec(),
        }
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    fn eval_derivative(&self, x: Complex64) -> Complex64 {
        let n = self.degree();
        self.coeffs[..n]
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (i, &c)| acc * x + c * (n - i) as f64)
    }

    /// `Σ |aᵢ| |x|^{n−i}`, the natural magnitude against which `p(x)` is small.
    pub fn scale_at(&self, x: Complex64) -> f64 {
        let m = x.norm();
        self.coeffs.iter().fold(0.0, |acc, &c| acc * m + c.abs())
    }

    /// `|p(x)| / scale_at(x)`.
    pub fn relative_residual(&self, x: Complex64) -> f64 {
        let scale = self.scale_at(x);
        if scale == 0.0 {
            0.0
        } else {
            self.eval(x).norm() / scale
        }
    }
}

/// Coefficients (highest first) of `lead · Π (x − ρᵢ)`.
pub fn expand_roots(lead: Complex64, roots: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![lead];
    for &root in roots {
        let mut next = out.clone();
        next.push(Complex64::new(0.0, 0.0));
        for (i, &c) in out.iter().enumerate() {
            next[i + 1] -= c * root;
        }
        out = next;
    }
    out
}

/// All complex roots of a polynomial after degree stripping.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub effective_degree: usize,
}

/// Dense square real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Companion matrix whose characteristic polynomial is `p / a₀`.
///
/// The nominal degree must be the true degree: a negligible leading
/// coefficient is an error.
pub fn companion_matrix(p: &RealPolynomial) -> Result<RealMatrix, PolyError> {
    let n = p.degree();
    if n == 0 {
        return Err(PolyError::Constant);
    }
    let lead = p.coeffs[0];
    let biggest = p.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if lead.abs() <= DEGREE_DROP_TOL * biggest {
        return Err(PolyError::NegligibleLeading(lead));
    }
    let mut g = RealMatrix::zeros(n);
    for j in 0..n {
        g[(0, j)] = -p.coeffs[j + 1] / lead;
    }
    for i in 1..n {
        g[(i, i - 1)] = 1.0;
    }
    Ok(g)
}

/// Eigenvalues of an upper Hessenberg matrix (entries below the first
/// subdiagonal are ignored).
pub fn hessenberg_eigenvalues(h: &RealMatrix) -> Result<Vec<Complex64>, PolyError> {
    let mut a = h.clone();
    balance(&mut a);
    francis_qr(&mut a)
}

/// Diagonal similarity scaling by powers of two so that row and column norms
/// are comparable. Preserves the Hessenberg pattern.
fn balance(a: &mut RealMatrix) {
    const RADIX: f64 = 2.0;
    let n = a.n;
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                col += a[(j, i)].abs();
                row += a[(i, j)].abs();
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut g = row / RADIX;
            while col < g {
                f *= RADIX;
                col *= sqrdx;
            }
            g = row * RADIX;
            while col > g {
                f /= RADIX;
                col /= sqrdx;
            }
            if (col + row) / f < 0.95 * total {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

fn sign_of(magnitude: f64, sign: f64) -> f64 {
    if sign >= 0.0 {
        magnitude.abs()
    } else {
        -magnitude.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix, deflating one or
/// two eigenvalues at a time from the bottom. Destroys `a`.
fn francis_qr(a: &mut RealMatrix) -> Result<Vec<Complex64>, PolyError> {
    let n = a.n;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }

    // Exceptional shifts accumulate into `shift`.
    let mut shift = 0.0;
    let mut nn = n as isize - 1;
    while nn >= 0 {
        let en = nn as usize;
        let mut its = 0;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = en;
            while l >= 1 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() + s == s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }

            let mut x = a[(en, en)];
            if l == en {
                wr[en] = x + shift;
                wi[en] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[(en - 1, en - 1)];
            let mut w = a[(en, en - 1)] * a[(en - 1, en)];
            if l == en - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += shift;
                if q >= 0.0 {
                    let z = p + sign_of(z, p);
                    wr[en - 1] = x + z;
                    wr[en] = if z != 0.0 { x - w / z } else { x + z };
                    wi[en - 1] = 0.0;
                    wi[en] = 0.0;
                } else {
                    wr[en - 1] = x + p;
                    wr[en] = x + p;
                    wi[en - 1] = -z;
                    wi[en] = z;
                }
                nn -= 2;
                break;
            }

            if its == MAX_QR_ITERATIONS {
                return Err(PolyError::NoConvergence);
            }
            if its > 0 && its % 10 == 0 {
                shift += x;
                for i in 0..=en {
                    a[(i, i)] -= x;
                }
                let s = a[(en, en - 1)].abs() + a[(en - 1, en - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Form the double shift and look for two consecutive small
            // subdiagonal elements.
            let mut m = en - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - rr - ss;
                r = a[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=en {
                a[(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[(i, i - 3)] = 0.0;
                }
            }

            // Double QR step on rows l..=en, columns m..=en.
            for k in m..en {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = if k != en - 1 { a[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign_of((p * p + q * q + r * r).sqrt(), p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[(k, k - 1)] = -a[(k, k - 1)];
                    }
                } else {
                    a[(k, k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=en {
                    let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                    if k != en - 1 {
                        pp += r * a[(k + 2, j)];
                        a[(k + 2, j)] -= pp * z;
                    }
                    a[(k + 1, j)] -= pp * y;
                    a[(k, j)] -= pp * x;
                }
                let last = en.min(k + 3);
                for i in l..=last {
                    let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                    if k != en - 1 {
                        pp += z * a[(i, k + 2)];
                        a[(i, k + 2)] -= pp * r;
                    }
                    a[(i, k + 1)] -= pp * q;
                    a[(i, k)] -= pp;
                }
            }
        }
    }

    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex64::new(re, im)).collect())
}

/// Real and complex roots of a quadratic `a x² + b x + c` with `a ≠ 0`.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + sign_of(disc.sqrt(), b));
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a).abs();
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Refines a root with complex Newton steps, keeping only steps that shrink
/// the residual.
fn polish(p: &RealPolynomial, mut root: Complex64) -> Complex64 {
    const TARGET: f64 = 1e-14;
    let mut resid = p.relative_residual(root);
    for _ in 0..3 {
        if resid <= TARGET {
            break;
        }
        let d = p.eval_derivative(root);
        if d.norm() == 0.0 {
            break;
        }
        let next = root - p.eval(root) / d;
        if !(next.re.is_finite() && next.im.is_finite()) {
            break;
        }
        let next_resid = p.relative_residual(next);
        if next_resid >= resid {
            break;
        }
        root = next;
        resid = next_resid;
    }
    root
}

/// All roots of `p` after stripping negligible leading coefficients.
///
/// A constant polynomial has an empty root set.
pub fn roots(p: &RealPolynomial) -> Result<RootSet, PolyError> {
    let q = p.stripped();
    let c = q.coeffs();
    let roots = match q.degree() {
        0 => Vec::new(),
        1 => vec![Complex64::new(-c[1] / c[0], 0.0)],
        2 => quadratic_roots(c[0], c[1], c[2]).to_vec(),
        _ => {
            let g = companion_matrix(&q)?;
            hessenberg_eigenvalues(&g)?
                .into_iter()
                .map(|root| polish(&q, root))
                .collect()
        }
    };
    Ok(RootSet {
        effective_degree: q.degree(),
        roots,
    })
}

/// Real parts of the (numerically) real roots inside `[lo, hi]`, clamped to
/// the interval, in their original order.
pub fn filter_feasible(rs: &RootSet, lo: f64, hi: f64) -> Vec<f64> {
    rs.roots
        .iter()
        .filter(|z| z.im.abs() <= REAL_ROOT_TOL * z.norm().max(1.0))
        .map(|z| z.re)
        .filter(|&x| x >= lo - INTERVAL_SLACK && x <= hi + INTERVAL_SLACK)
        .map(|x| x.clamp(lo, hi))
        .collect()
}
