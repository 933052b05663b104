//! Dense complex Hermitian eigensolver.
//!
//! 1. Householder reflections reduce `H` to a complex Hermitian tridiagonal
//!    matrix `T = Q†HQ`.
//! 2. A diagonal unitary `D` rotates the subdiagonal of `T` onto the
//!    non-negative reals.
//! 3. Implicit-shift QL iteration diagonalizes the real symmetric
//!    tridiagonal `D†TD = ZΛZᵀ`, so the eigenvectors of `H` are `QDZ`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Relative Hermiticity tolerance accepted on input.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Total QL iterations allowed per unit of dimension.
pub const ITERATIONS_PER_DIM: usize = 64;

/// Eigenvalues closer than `DEGENERACY_TOLERANCE · (1 + |λ|)` form one
/// cluster.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the normalized eigenvector of `eigenvalues[j]`.
    pub eigenvectors: Option<CMatrix>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Groups numerically degenerate eigenvalues: `(mean value, multiplicity)`.
    pub fn clusters(&self) -> Vec<(f64, usize)> {
        cluster_values(&self.eigenvalues, DEGENERACY_TOLERANCE)
    }

    /// Largest `‖Hv − λv‖₂` over all eigenpairs.
    pub fn max_residual(&self, h: &CMatrix) -> Option<f64> {
        let vecs = self.eigenvectors.as_ref()?;
        let mut worst: f64 = 0.0;
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = vecs.column(j);
            let hv = h.mul_vec(&v);
            let r: f64 = hv.iter().zip(&v).map(|(a, b)| (a - b * lambda).norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(r);
        }
        Some(worst)
    }

    /// Largest entry of `V†V − 1`.
    pub fn orthonormality_defect(&self) -> Option<f64> {
        let v = self.eigenvectors.as_ref()?;
        let gram = v.adjoint().matmul(v);
        Some(gram.max_abs_diff(&CMatrix::identity(v.cols())))
    }
}

/// Chains sorted values into clusters whose neighbours differ by at most
/// `rel_tol · (1 + |λ|)`.
pub fn cluster_values(sorted: &[f64], rel_tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut sum = 0.0;
    let mut prev: Option<f64> = None;
    for &x in sorted {
        match prev {
            Some(p) if (x - p).abs() <= rel_tol * (1.0 + x.abs().max(p.abs())) => {
                let last = out.last_mut().expect("cluster open");
                last.1 += 1;
                sum += x;
                last.0 = sum / last.1 as f64;
            }
            _ => {
                out.push((x, 1));
                sum = x;
            }
        }
        prev = Some(x);
    }
    out
}

struct Reflector {
    /// First row the reflector acts on.
    offset: usize,
    v: Vec<Complex64>,
    tau: f64,
}

impl Reflector {
    /// `M[offset.., :] ← (1 − τvv†) M[offset.., :]`.
    fn apply_left(&self, m: &mut CMatrix) {
        let cols = m.cols();
        for j in 0..cols {
            let mut dot = Complex64::new(0.0, 0.0);
            for (i, vi) in self.v.iter().enumerate() {
                dot += vi.conj() * m[(self.offset + i, j)];
            }
            let s = dot * self.tau;
            for (i, vi) in self.v.iter().enumerate() {
                m[(self.offset + i, j)] -= vi * s;
            }
        }
    }
}

/// Reduces `a` in place to Hermitian tridiagonal form and returns the
/// reflectors used.
fn tridiagonalize(a: &mut CMatrix) -> Vec<Reflector> {
    let n = a.dim();
    let mut reflectors = Vec::new();
    for k in 0..n.saturating_sub(2) {
        let off = k + 1;
        let x: Vec<Complex64> = (off..n).map(|i| a[(i, k)]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let norm = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // trailing block: A ← A − vw† − wv†, w = p − (τ/2)(v†p)v, p = τAv
        let m = n - off;
        let mut p = vec![Complex64::new(0.0, 0.0); m];
        for (i, pi) in p.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, vj) in v.iter().enumerate() {
                acc += a[(off + i, off + j)] * vj;
            }
            *pi = acc * tau;
        }
        let vp: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let kk = 0.5 * tau * vp.re;
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kk).collect();
        for i in 0..m {
            for j in 0..m {
                a[(off + i, off + j)] -= v[i] * w[j].conj() + w[i] * v[j].conj();
            }
        }
        for i in 0..m {
            a[(off + i, k)] = if i == 0 { alpha } else { Complex64::new(0.0, 0.0) };
            a[(k, off + i)] = a[(off + i, k)].conj();
        }
        reflectors.push(Reflector { offset: off, v, tau });
    }
    reflectors
}

/// Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal
/// matrix (diagonal `d`, subdiagonal `e` with `e[i] = T[i+1][i]`).
/// Accumulates rotations into the real row-major `z` when given.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    let cap = ITERATIONS_PER_DIM * n.max(1);
    let eps = f64::EPSILON;
    let mut total_iter = 0usize;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            loop {
                total_iter += 1;
                if total_iter > cap {
                    return Err(Error::NoConvergence { dim: n, iterations: cap });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zi1 = z[k * n + i + 1];
                            let zi = z[k * n + i];
                            z[k * n + i + 1] = s * zi + c * zi1;
                            z[k * n + i] = c * zi - s * zi1;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Eigenvalues (ascending) and optionally orthonormal eigenvectors of a
/// Hermitian matrix.
pub fn eigendecompose(h: &CMatrix, want_vectors: bool) -> Result<Spectrum> {
    if !h.is_square() {
        return Err(Error::param("H", "matrix must be square"));
    }
    let n = h.dim();
    if h.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::param("H", "matrix has non-finite entries"));
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOLERANCE * h.max_abs() {
        return Err(Error::NotHermitian { dim: n, deviation: defect });
    }
    if n == 0 {
        return Ok(Spectrum { eigenvalues: Vec::new(), eigenvectors: want_vectors.then(|| CMatrix::zeros(0, 0)) });
    }

    let mut a = h.clone();
    let reflectors = tridiagonalize(&mut a);

    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![0.0; n];
    let mut gauge = vec![Complex64::new(1.0, 0.0); n];
    for i in 0..n - 1 {
        let sub = a[(i + 1, i)];
        let mag = sub.norm();
        e[i] = mag;
        gauge[i + 1] = if mag > 0.0 { gauge[i] * (sub / mag) } else { gauge[i] };
    }

    let mut z = want_vectors.then(|| {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    });
    tridiagonal_ql(&mut d, &mut e, z.as_deref_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();

    let eigenvectors = z.map(|z| {
        let mut v = CMatrix::zeros(n, n);
        for row in 0..n {
            for (col, &src) in order.iter().enumerate() {
                v[(row, col)] = gauge[row] * z[row * n + src];
            }
        }
        for r in reflectors.iter().rev() {
            r.apply_left(&mut v);
        }
        v
    });

    Ok(Spectrum { eigenvalues, eigenvectors })
}
