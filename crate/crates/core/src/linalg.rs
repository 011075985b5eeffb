//! Fixed-size complex matrix arithmetic for the 2- and 3-state cases.
//!
//! Everything lives on the stack in a 3x3 array; 2x2 matrices use the
//! upper-left block and leave the rest zero.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{BuresError, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Relative tolerance used by [`ComplexSquareMatrix::is_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_DIM: usize = 3;

#[derive(Clone, Copy, PartialEq)]
pub struct ComplexSquareMatrix {
    dim: usize,
    entries: [[C64; MAX_DIM]; MAX_DIM],
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(BuresError::UnsupportedDimension(dim))
    }
}

impl ComplexSquareMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: [[ZERO; MAX_DIM]; MAX_DIM],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i][i] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from row slices; every row must have `rows.len()` entries.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(BuresError::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            m.entries[i][..dim].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i][i] = C64::new(d, 0.0);
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i][i] = d;
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major copy of the entries, `dim * dim` long.
    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.dim * self.dim);
        for i in 0..self.dim {
            out.extend_from_slice(&self.entries[i][..self.dim]);
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self.entries[i][j]).collect()
    }

    /// Matrix product; errors when the dimensions differ.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(BuresError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self.mul_same_dim(other))
    }

    #[inline]
    fn mul_same_dim(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = [[ZERO; MAX_DIM]; MAX_DIM];
        for (i, out_row) in out.iter_mut().enumerate().take(n) {
            for (j, out_ij) in out_row.iter_mut().enumerate().take(n) {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.entries[i][k] * other.entries[k][j];
                }
                *out_ij = acc;
            }
        }
        Self {
            dim: n,
            entries: out,
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entries[i][j] = self.entries[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.entries[i][i]).sum()
    }

    pub fn det(&self) -> C64 {
        let a = &self.entries;
        match self.dim {
            2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
            _ => {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            }
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = *self;
        for row in out.entries.iter_mut() {
            for x in row.iter_mut() {
                *x *= factor;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|row| row.iter())
            .map(|x| x.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖a − a†‖_F`.
    pub fn hermiticity_deviation(&self) -> f64 {
        (*self - self.dagger()).frobenius_norm()
    }

    /// Hermitian to `1e-10 · max(1, ‖a‖_F)` in Frobenius norm.
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= HERMITIAN_TOL * self.frobenius_norm().max(1.0)
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(BuresError::NotHermitian {
                deviation: self.hermiticity_deviation(),
            })
        }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.matmul(other)? - other.matmul(self)?)
    }

    /// Frobenius distance, panicking on a dimension mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).frobenius_norm()
    }

    /// Real diagonal entries.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.entries[i][i].re).collect()
    }
}

impl Index<(usize, usize)> for ComplexSquareMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of bounds"
        );
        &self.entries[i][j]
    }
}

impl IndexMut<(usize, usize)> for ComplexSquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.entries[i][j]
    }
}

impl Mul for ComplexSquareMatrix {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        self.mul_same_dim(&rhs)
    }
}

impl Mul for &ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;

    fn mul(self, rhs: Self) -> ComplexSquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        self.mul_same_dim(rhs)
    }
}

impl Add for ComplexSquareMatrix {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.entries[i][j] += rhs.entries[i][j];
            }
        }
        self
    }
}

impl Sub for ComplexSquareMatrix {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.entries[i][j] -= rhs.entries[i][j];
            }
        }
        self
    }
}

impl fmt::Debug for ComplexSquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[C64]> = (0..self.dim)
            .map(|i| &self.entries[i][..self.dim])
            .collect();
        f.debug_struct("ComplexSquareMatrix")
            .field("dim", &self.dim)
            .field("entries", &rows)
            .finish()
    }
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues in descending
/// order, eigenvectors as the matching unit-norm columns.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigenResult {
    pub eigenvalues: [f64; MAX_DIM],
    pub eigenvectors: ComplexSquareMatrix,
}

impl HermitianEigenResult {
    pub fn dim(&self) -> usize {
        self.eigenvectors.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues[..self.dim()]
    }

    /// `V diag(f(λ)) V†`.
    pub fn apply_spectral<F: Fn(f64) -> C64>(&self, f: F) -> ComplexSquareMatrix {
        let v = &self.eigenvectors;
        let n = v.dim;
        let mut out = ComplexSquareMatrix {
            dim: n,
            entries: [[ZERO; MAX_DIM]; MAX_DIM],
        };
        let fx: Vec<C64> = self.eigenvalues().iter().map(|&l| f(l)).collect();
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, fk) in fx.iter().enumerate() {
                    acc += v.entries[i][k] * fk * v.entries[j][k].conj();
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexSquareMatrix {
        self.apply_spectral(|l| C64::new(l, 0.0))
    }
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eig_hermitian(a: &ComplexSquareMatrix) -> Result<HermitianEigenResult> {
    a.ensure_hermitian()?;
    let n = a.dim;
    // Symmetrize so the rotations see an exactly Hermitian matrix.
    let mut m = (*a + a.dagger()).scale(C64::new(0.5, 0.0));
    let mut v = ComplexSquareMatrix::identity(n)?;
    let scale = m.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m.entries[p][q].norm_sqr();
            }
        }
        if off.sqrt() <= f64::EPSILON * 1e-3 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.entries[p][q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = m.entries[p][p].re;
                let aqq = m.entries[q][q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = D·P with D = diag(.., e^{-iφ} at q, ..) and P the real rotation.
                let mut j = ComplexSquareMatrix::identity(n)?;
                j.entries[p][p] = C64::new(c, 0.0);
                j.entries[p][q] = C64::new(s, 0.0);
                j.entries[q][p] = -phase.conj() * s;
                j.entries[q][q] = phase.conj() * c;
                m = j.dagger().mul_same_dim(&m).mul_same_dim(&j);
                m.entries[p][q] = ZERO;
                m.entries[q][p] = ZERO;
                v = v.mul_same_dim(&j);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps index order among ties.
    order.sort_by(|&i, &k| m.entries[k][k].re.total_cmp(&m.entries[i][i].re));

    let mut eigenvalues = [0.0; MAX_DIM];
    let mut vecs = ComplexSquareMatrix::zeros(n)?;
    for (col, &src) in order.iter().enumerate() {
        eigenvalues[col] = m.entries[src][src].re;
        // Fix the phase: first non-negligible component real and positive.
        let pivot = (0..n)
            .map(|i| v.entries[i][src])
            .find(|x| x.norm() > 1e-12)
            .unwrap_or(ONE);
        let phase = pivot.conj() / pivot.norm();
        let mut norm = 0.0;
        for i in 0..n {
            norm += v.entries[i][src].norm_sqr();
        }
        let norm = norm.sqrt();
        for i in 0..n {
            vecs.entries[i][col] = v.entries[i][src] * phase / norm;
        }
    }

    Ok(HermitianEigenResult {
        eigenvalues,
        eigenvectors: vecs,
    })
}

/// A Hermitian generator with its spectral decomposition cached, so that
/// `exp(i·g·t)` costs one diagonal scaling per angle.
#[derive(Clone, Copy, Debug)]
pub struct SpectralGenerator {
    generator: ComplexSquareMatrix,
    eigen: HermitianEigenResult,
}

impl SpectralGenerator {
    pub fn new(generator: ComplexSquareMatrix) -> Result<Self> {
        let eigen = eig_hermitian(&generator)?;
        Ok(Self { generator, eigen })
    }

    pub fn generator(&self) -> &ComplexSquareMatrix {
        &self.generator
    }

    /// `exp(i·g·angle)`.
    pub fn exp_i(&self, angle: f64) -> ComplexSquareMatrix {
        self.eigen
            .apply_spectral(|l| C64::from_polar(1.0, l * angle))
    }
}

/// `exp(i·g·angle)` for Hermitian `g`, via the spectral decomposition of `g`.
pub fn expm_i_generator(g: &ComplexSquareMatrix, angle: f64) -> Result<ComplexSquareMatrix> {
    Ok(SpectralGenerator::new(*g)?.exp_i(angle))
}

pub fn matmul(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix) -> Result<ComplexSquareMatrix> {
    a.matmul(b)
}

pub fn dagger(a: &ComplexSquareMatrix) -> ComplexSquareMatrix {
    a.dagger()
}

pub fn trace(a: &ComplexSquareMatrix) -> C64 {
    a.trace()
}

/// Determinant of a small dense real matrix by Gaussian elimination with
/// partial pivoting. `rows` is consumed as scratch space.
pub fn real_det<const N: usize>(mut rows: [[f64; N]; N]) -> f64 {
    let mut det = 1.0;
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .unwrap_or(col);
        if rows[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            rows.swap(pivot, col);
            det = -det;
        }
        let p = rows[col][col];
        det *= p;
        let (upper, lower) = rows.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower.iter_mut() {
            let factor = row[col] / p;
            if factor != 0.0 {
                for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= factor * y;
                }
            }
        }
    }
    det
}
