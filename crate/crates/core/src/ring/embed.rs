//! Floating-point embeddings of `Z[θ]`. Used only to size and prefilter
//! searches whose hits are then checked exactly.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::poly::{count_real_roots, IntPoly, Interval};

/// Roots of `f`: the `r1` real roots first (ascending), then one root of
/// each complex-conjugate pair (positive imaginary part).
#[derive(Debug, Clone)]
pub struct Embeddings {
    pub r1: usize,
    pub r2: usize,
    pub roots: Vec<Complex64>,
    /// `powers[v][i] = σ_v(θ)^i`.
    powers: Vec<Vec<Complex64>>,
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

impl Embeddings {
    pub fn new(f: &IntPoly) -> Option<Embeddings> {
        let n = f.degree()?;
        let r1 = count_real_roots(f, &Interval::real_line()).ok()?;
        let c: Vec<f64> = f.coeffs().iter().map(|x| x.to_f64()).collect::<Option<_>>()?;
        let lead = c[n];
        let mut comp = DMatrix::<f64>::zeros(n, n);
        for i in 0..n - 1 {
            comp[(i, i + 1)] = 1.0;
        }
        for j in 0..n {
            comp[(n - 1, j)] = -c[j] / lead;
        }
        let eig = comp.complex_eigenvalues();
        let mut roots: Vec<Complex64> = eig
            .iter()
            .map(|z| {
                let mut z = Complex64::new(z.re, z.im);
                for _ in 0..50 {
                    let (p, dp) = horner(&c, z);
                    if dp.norm() == 0.0 {
                        break;
                    }
                    let step = p / dp;
                    z -= step;
                    if step.norm() <= 1e-15 * z.norm().max(1.0) {
                        break;
                    }
                }
                z
            })
            .collect();
        roots.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
        let mut real: Vec<Complex64> = roots[..r1].iter().map(|z| Complex64::new(z.re, 0.0)).collect();
        real.sort_by(|a, b| a.re.total_cmp(&b.re));
        let complex: Vec<Complex64> = roots[r1..].iter().filter(|z| z.im > 0.0).copied().collect();
        if (n - r1) % 2 != 0 || complex.len() != (n - r1) / 2 {
            return None;
        }
        // distinct roots are required; a collapsed pair signals a numerical failure
        let all: Vec<Complex64> = real.iter().chain(&complex).copied().collect();
        for i in 0..all.len() {
            for j in 0..i {
                if (all[i] - all[j]).norm() < 1e-9 * all[i].norm().max(1.0) {
                    return None;
                }
            }
        }
        let powers = all
            .iter()
            .map(|&z| {
                let mut p = Vec::with_capacity(n);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..n {
                    p.push(acc);
                    acc *= z;
                }
                p
            })
            .collect();
        Some(Embeddings { r1, r2: complex.len(), roots: all, powers })
    }

    /// Number of archimedean places `r1 + r2`.
    pub fn places(&self) -> usize {
        self.r1 + self.r2
    }

    /// Local degree: 1 for real places, 2 for complex ones.
    pub fn weight(&self, v: usize) -> f64 {
        if v < self.r1 {
            1.0
        } else {
            2.0
        }
    }

    pub fn embed_f64(&self, x: &[f64]) -> Vec<Complex64> {
        self.powers
            .iter()
            .map(|pw| pw.iter().zip(x).map(|(p, &c)| p * c).sum())
            .collect()
    }

    pub fn embed(&self, x: &[BigInt]) -> Vec<Complex64> {
        let xf: Vec<f64> = x.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect();
        self.embed_f64(&xf)
    }

    /// `(log|σ_v(x)|)_v`.
    pub fn log_vector(&self, x: &[BigInt]) -> Vec<f64> {
        self.embed(x).iter().map(|z| z.norm().ln()).collect()
    }

    /// Real coordinates whose squared Euclidean length is the trace form
    /// `T2(x) = Σ |σ(x)|^2` over all n embeddings.
    pub fn t2_vector(&self, x: &[f64]) -> Vec<f64> {
        let e = self.embed_f64(x);
        let mut out = Vec::with_capacity(self.r1 + 2 * self.r2);
        for (v, z) in e.iter().enumerate() {
            if v < self.r1 {
                out.push(z.re);
            } else {
                out.push(std::f64::consts::SQRT_2 * z.re);
                out.push(std::f64::consts::SQRT_2 * z.im);
            }
        }
        out
    }
}
