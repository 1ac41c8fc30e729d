//! Dense complex linear algebra for small structured operators.
//!
//! Everything in this crate lives on spaces of dimension a few thousand at
//! most (Choi operators of size 4(M+1), truncated Fock propagators of a few
//! hundred), so a plain row-major dense [`ComplexMatrix`] is enough and keeps
//! the call sites free of generic machinery. The Hermitian eigensolver
//! delegates to `nalgebra`; matrix functions (PSD square root, exponential)
//! are built on top of it, with a scaling-and-squaring Taylor fallback for
//! the one caller that may hand us a non-normal matrix.

use crate::{Error, Result};

pub use num_complex::Complex64 as C64;

/// Shorthand for a complex number from its parts.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::ZERO; rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::ONE;
        }
        m
    }

    /// Build a matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Diagonal matrix from real entries.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::from(d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Sum of diagonal entries. Panics on non-square input (programmer error).
    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Multiply by a scalar.
    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from self-adjointness, max |X - X†|.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Replace X by (X + X†)/2, removing roundoff-level asymmetry.
    pub fn hermitize(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "add shape mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "sub shape mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Absolute tolerance for the Hermiticity precondition of eigen-based routines.
const HERMITIAN_TOL: f64 = 1e-10;

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns real eigenvalues in ascending order and the matching unitary of
/// column eigenvectors, so that `h = V · diag(e) · V†`.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows,
            cols: h.cols,
        });
    }
    let dev = h.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = h.rows;
    // Symmetrize before handing to the solver so roundoff-level asymmetry
    // cannot leak into the decomposition.
    let hs = h.hermitize();
    let na = nalgebra::DMatrix::from_row_slice(n, n, &hs.data);
    let eig = na.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let evals: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let evecs = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((evals, evecs))
}

/// Reassemble `V · diag(f(e)) · V†` from an eigendecomposition.
fn assemble_eig(evals: &[f64], evecs: &ComplexMatrix, f: impl Fn(f64) -> C64) -> ComplexMatrix {
    let n = evals.len();
    let mut scaled = evecs.clone();
    for j in 0..n {
        let fe = f(evals[j]);
        for i in 0..n {
            scaled[(i, j)] *= fe;
        }
    }
    &scaled * &evecs.adjoint()
}

/// Eigenvalues this far below zero are treated as roundoff in PSD checks.
const PSD_TOL: f64 = 1e-10;

/// Positive-semidefinite square root of a Hermitian PSD matrix.
///
/// Eigenvalues more negative than the PSD tolerance are rejected; small
/// negative roundoff is clamped to zero before the square root.
pub fn psd_sqrt(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (evals, evecs) = hermitian_eig(p)?;
    if let Some(&min) = evals.first() {
        if min < -PSD_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
    }
    Ok(assemble_eig(&evals, &evecs, |e| C64::from(e.max(0.0).sqrt())).hermitize())
}

/// Matrix exponential.
///
/// Hermitian and anti-Hermitian inputs go through the eigendecomposition,
/// which keeps the result exactly Hermitian-positive resp. unitary up to
/// roundoff. Anything else falls back to scaling-and-squaring with a Taylor
/// core, which is accurate for the moderate norms used here.
pub fn matrix_exp(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::NotSquare {
            rows: x.rows,
            cols: x.cols,
        });
    }
    let scale = x.max_abs().max(1.0);
    if x.hermitian_deviation() <= 1e-12 * scale {
        let (evals, evecs) = hermitian_eig(&x.hermitize())?;
        return Ok(assemble_eig(&evals, &evecs, |e| C64::from(e.exp())));
    }
    // Anti-Hermitian X: -iX is Hermitian with eigenvalues d, and
    // exp(X) = V diag(exp(i d)) V†.
    let minus_i_x = x.scale(c64(0.0, -1.0));
    if minus_i_x.hermitian_deviation() <= 1e-12 * scale {
        let (evals, evecs) = hermitian_eig(&minus_i_x.hermitize())?;
        return Ok(assemble_eig(&evals, &evecs, |e| c64(0.0, e).exp()));
    }
    Ok(exp_scaling_squaring(x))
}

/// Scaling-and-squaring exponential with a truncated Taylor core.
fn exp_scaling_squaring(x: &ComplexMatrix) -> ComplexMatrix {
    let n = x.rows;
    // 1-norm (max column sum) controls the Taylor remainder.
    let mut norm1: f64 = 0.0;
    for j in 0..n {
        let col: f64 = (0..n).map(|i| x[(i, j)].norm()).sum();
        norm1 = norm1.max(col);
    }
    let s = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let y = x.scale(C64::from(0.5f64.powi(s as i32)));
    // Taylor series of exp(y) with ‖y‖₁ ≤ 1/2: 24 terms leave a remainder
    // below 1/25! ≈ 6e-26, far under roundoff.
    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=24 {
        term = &term * &y;
        term = term.scale(C64::from(1.0 / k as f64));
        result = &result + &term;
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// Kronecker (tensor) product: entry ((i·rB + k), (j·cB + l)) = A(i,j)·B(k,l).
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij == C64::ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Which tensor factor `partial_trace` keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Partial trace of an operator on a bipartite space of dimensions
/// `dims = (d1, d2)`, with row index `i·d2 + k` for the pair (i, k).
///
/// `Factor::First` traces out the second factor and returns a d1×d1 matrix;
/// `Factor::Second` the other way around.
pub fn partial_trace(
    x: &ComplexMatrix,
    dims: (usize, usize),
    keep: Factor,
) -> Result<ComplexMatrix> {
    let (d1, d2) = dims;
    if !x.is_square() {
        return Err(Error::NotSquare {
            rows: x.rows,
            cols: x.cols,
        });
    }
    if d1 * d2 != x.rows {
        return Err(Error::DimensionMismatch(format!(
            "partial trace of a {}x{} matrix as {}x{} factors",
            x.rows, x.cols, d1, d2
        )));
    }
    match keep {
        Factor::First => {
            let mut out = ComplexMatrix::zeros(d1, d1);
            for i in 0..d1 {
                for j in 0..d1 {
                    let mut sum = C64::ZERO;
                    for k in 0..d2 {
                        sum += x[(i * d2 + k, j * d2 + k)];
                    }
                    out[(i, j)] = sum;
                }
            }
            Ok(out)
        }
        Factor::Second => {
            let mut out = ComplexMatrix::zeros(d2, d2);
            for k in 0..d2 {
                for l in 0..d2 {
                    let mut sum = C64::ZERO;
                    for i in 0..d1 {
                        sum += x[(i * d2 + k, i * d2 + l)];
                    }
                    out[(k, l)] = sum;
                }
            }
            Ok(out)
        }
    }
}
