//! Dense square complex matrices and a cyclic Jacobi eigensolver for Hermitian input.
//!
//! Storage is row-major. Dimensions here never exceed a few dozen, so every
//! operation is a plain loop; there is no blocking or SIMD.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major data; `data.len()` must be a perfect square.
    pub fn from_row_major(data: Vec<Complex64>) -> Result<Self> {
        let dim = (math::sqrt(data.len() as f64) + 0.5) as usize;
        if dim * dim != data.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|v><v|`
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (d1, d2) = (self.dim, other.dim);
        Self::from_fn(d1 * d2, |i, j| {
            self[(i / d2, j / d2)] * other[(i % d2, j % d2)]
        })
    }

    pub fn mat_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        let d = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for k in 0..d {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let d = a - b;
                math::hypot(d.re, d.im)
            })
            .fold(0.0, f64::max)
    }

    /// `max |M[i][j] - conj(M[j][i])|`
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let diff = self[(i, j)] - self[(j, i)].conj();
                worst = worst.max(math::hypot(diff.re, diff.im));
            }
        }
        worst
    }

    /// Symmetrized copy `(M + M^dagger)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Eigen-decomposition of a Hermitian matrix: `H = V diag(values) V^dagger`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.column(i)
    }

    /// `V diag(f(values)) V^dagger`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let d = self.vectors.dim();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        CMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * fv[k])
                .sum()
        })
    }
}

/// Eigenvalues and eigenvectors of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `H[p][q]` and then applies
/// the real symmetric Jacobi rotation that zeroes it. Sweeps stop once the
/// off-diagonal Frobenius mass drops below `1e-13 * max(1, ||H||_F)`.
pub fn eig_hermitian(h: &CMatrix) -> Result<HermitianEigen> {
    let deviation = h.hermiticity_defect();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = CMatrix::identity(n);
    let threshold = JACOBI_OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);

    let mut converged = false;
    let mut off = off_diagonal_mass(&a);
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off < threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        off = off_diagonal_mass(&a);
    }
    if !converged && off >= threshold {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off_diagonal: off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending. Closed form for 1x1 and 2x2 input.
pub fn eigvalsh(h: &CMatrix) -> Result<Vec<f64>> {
    match h.dim() {
        1 => Ok(vec![h[(0, 0)].re]),
        2 => {
            let deviation = h.hermiticity_defect();
            if deviation > HERMITIAN_TOL {
                return Err(Error::NotHermitian { deviation });
            }
            let a = h[(0, 0)].re;
            let b = h[(1, 1)].re;
            let z = (h[(0, 1)] + h[(1, 0)].conj()) * 0.5;
            let mean = 0.5 * (a + b);
            let radius = math::hypot(0.5 * (a - b), math::hypot(z.re, z.im));
            Ok(vec![mean - radius, mean + radius])
        }
        _ => eig_hermitian(h).map(|e| e.values),
    }
}

fn off_diagonal_mass(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    math::sqrt(acc)
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let z = a[(p, q)];
    let r = math::hypot(z.re, z.im);
    if r < 1e-300 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // e^{-i phi} where z = r e^{i phi}
    let phase = z.conj() / r;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + math::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + math::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / math::sqrt(t * t + 1.0);
    let s = t * c;

    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    let n = a.dim();
    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A <- G^dagger A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(dim: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = CMatrix::from_fn(dim, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        raw.hermitian_part()
    }

    fn reconstruct(e: &HermitianEigen) -> CMatrix {
        e.map_spectrum(|x| x)
    }

    #[test]
    fn diagonal_input() {
        let h = CMatrix::from_real_diagonal(&[0.9, 0.1]);
        let e = eig_hermitian(&h).unwrap();
        assert!((e.values[0] - 0.1).abs() < 1e-15);
        assert!((e.values[1] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn pauli_x() {
        let x = CMatrix::from_row_major(vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let e = eig_hermitian(&x).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert_eq!(eigvalsh(&x).unwrap().len(), 2);
    }

    #[test]
    fn pauli_y_complex_pivot() {
        let y = CMatrix::from_row_major(vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap();
        let e = eig_hermitian(&y).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!(reconstruct(&e).max_abs_diff(&y) < 1e-14);
    }

    #[test]
    fn random_reconstruction_and_residuals() {
        for (dim, seed) in [(8, 1u64), (16, 2), (5, 3), (64, 4)] {
            let h = random_hermitian(dim, seed);
            let e = eig_hermitian(&h).unwrap();
            assert!(reconstruct(&e).max_abs_diff(&h) < 1e-9, "dim {dim}");
            for i in 0..dim {
                let vi = e.eigenvector(i);
                let hv = h.mat_vec(&vi);
                let res: f64 = hv
                    .iter()
                    .zip(&vi)
                    .map(|(a, b)| (a - b * e.values[i]).norm_sqr())
                    .sum();
                assert!(math::sqrt(res) < 1e-9);
            }
            let vv = &e.vectors.adjoint() * &e.vectors;
            assert!(vv.max_abs_diff(&CMatrix::identity(dim)) < 1e-9);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn closed_form_two_by_two_matches_jacobi() {
        for seed in 0..20 {
            let h = random_hermitian(2, seed);
            let a = eigvalsh(&h).unwrap();
            let b = eig_hermitian(&h).unwrap().values;
            assert!((a[0] - b[0]).abs() < 1e-13 && (a[1] - b[1]).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_major(vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn degenerate_spectrum() {
        let h = CMatrix::identity(6).scale(0.25);
        let e = eig_hermitian(&h).unwrap();
        assert!(e.values.iter().all(|&x| (x - 0.25).abs() < 1e-15));
    }

    #[test]
    fn kron_and_trace_product() {
        let a = random_hermitian(2, 9);
        let b = random_hermitian(3, 10);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 6);
        let tr = k.trace();
        let expect = a.trace() * b.trace();
        assert!((tr - expect).norm() < 1e-14);
        let p = &k * &k;
        assert!((p.trace() - k.trace_product(&k)).norm() < 1e-13);
    }
}
