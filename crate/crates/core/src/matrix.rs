//! Dense complex-matrix kernel.
//!
//! Everything above this layer (algebra elements, module vectors, operator
//! grids) bottoms out in [`ComplexMatrix`]. The spectral routines here are the
//! only place eigendecompositions happen, so tolerance handling for
//! Hermitian-ness, clamping of tiny negative eigenvalues and the conditioning
//! floor all live in this file.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest row or column count any matrix may have.
pub const MAX_DIM: usize = 64;

/// Default floor on `λ_min / ‖M‖` accepted by [`inv_sqrt_pd`].
pub const DEFAULT_CONDITIONING_FLOOR: f64 = 0.05;

/// Relative/absolute comparison bound. The effective bound at scale `s` is
/// `max(abs, rel * s)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel >= 0.0 && abs >= 0.0) || !rel.is_finite() || !abs.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be finite and nonnegative (rel {rel}, abs {abs})"
            )));
        }
        Ok(Self { rel, abs })
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.abs.max(self.rel * scale)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-9, abs: 1e-12 }
    }
}

/// A finite complex matrix of at most [`MAX_DIM`] rows and columns.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

/// Serialized as rows of `[re, im]` pairs.
impl serde::Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| [self.0[(i, j)].re, self.0[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl ComplexMatrix {
    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        check_dims(m.nrows(), m.ncols())?;
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(m))
    }

    /// Row-major complex entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        check_dims(rows, cols)?;
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, entries))
    }

    /// Row-major real entries.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let entries: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_slice(rows, cols, &entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn scalar(n: usize, c: C64) -> Self {
        Self(DMatrix::from_diagonal_element(n, n, c))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Self(m)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(&self.0 * c)
    }

    pub fn scale_real(&self, r: f64) -> Self {
        self.scale(C64::new(r, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `‖M − M*‖_F`.
    pub fn asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.0 - self.0.adjoint()).norm()
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        if self.rows() == 0 || self.cols() == 0 {
            return 0.0;
        }
        let gram = if self.rows() >= self.cols() {
            &self.adjoint() * self
        } else {
            self * &self.adjoint()
        };
        let gram = hermitize_unchecked(&gram);
        let eig = gram.0.symmetric_eigen();
        eig.eigenvalues.iter().fold(0.0_f64, |m, &l| m.max(l)).max(0.0).sqrt()
    }

    /// Copies `block` into this matrix with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &ComplexMatrix) {
        self.0
            .view_mut((row, col), (block.rows(), block.cols()))
            .copy_from(&block.0);
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> ComplexMatrix {
        Self(self.0.view((row, col), (rows, cols)).into_owned())
    }

    fn ensure_same_dims(&self, other: &Self, what: &str) -> Result<()> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dims(other, "add")?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dims(other, "sub")?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(Self(&self.0 * &other.0))
    }
}

// Operator impls panic on dimension mismatch, as nalgebra does; use the
// `try_*` methods where shapes come from untrusted input.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::DimensionMismatch(format!(
            "empty matrix {rows}x{cols}"
        )));
    }
    if rows > MAX_DIM {
        return Err(Error::DimensionCap(rows));
    }
    if cols > MAX_DIM {
        return Err(Error::DimensionCap(cols));
    }
    Ok(())
}

fn require_square(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

fn hermitize_unchecked(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix((&m.0 + m.0.adjoint()) * C64::new(0.5, 0.0))
}

/// `(M + M*) / 2`, exactly Hermitian.
pub fn hermitize(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_square(m)?;
    let mut r = hermitize_unchecked(m);
    // The averaged diagonal can pick up a rounding-level imaginary part.
    for i in 0..r.rows() {
        r.0[(i, i)].im = 0.0;
    }
    Ok(r)
}

/// Ascending eigenvalues and matching unitary eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `U diag(f(λ)) U*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let u = &self.vectors.0;
        let n = self.values.len();
        let mut scaled = u.clone();
        for (j, &l) in self.values.iter().enumerate() {
            let fl = f(l);
            for i in 0..n {
                scaled[(i, j)] *= fl;
            }
        }
        let r = ComplexMatrix(scaled * u.adjoint());
        hermitize_unchecked(&r)
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `max |λ|`, the operator norm of the decomposed matrix.
    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }
}

pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    eig_hermitian_with(m, &Tolerance::default())
}

pub fn eig_hermitian_with(m: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianEigen> {
    require_square(m)?;
    let asymmetry = m.asymmetry();
    let bound = tol.bound(m.frobenius_norm());
    if asymmetry > bound {
        return Err(Error::NotHermitian { asymmetry, bound });
    }
    let h = hermitize(m)?;
    let eig = h.0.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = m.rows();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix(vectors),
    })
}

/// Positive square root. Eigenvalues in `[-tol·‖M‖, 0)` are clamped to zero.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    sqrt_psd_with(m, &Tolerance::default())
}

pub fn sqrt_psd_with(m: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let eig = eig_hermitian_with(m, tol)?;
    let bound = tol.bound(eig.spectral_radius());
    if eig.min() < -bound {
        return Err(Error::NotPositive {
            eigenvalue: eig.min(),
            bound: -bound,
        });
    }
    Ok(eig.map(|l| l.max(0.0).sqrt()))
}

/// `M^{-1/2}` for a positive-definite `M` with `λ_min ≥ floor·‖M‖`.
pub fn inv_sqrt_pd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    inv_sqrt_pd_with(m, &Tolerance::default(), DEFAULT_CONDITIONING_FLOOR)
}

pub fn inv_sqrt_pd_with(m: &ComplexMatrix, tol: &Tolerance, floor: f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian_with(m, tol)?;
    let limit = floor * eig.spectral_radius();
    if eig.min() <= 0.0 || eig.min() < limit {
        return Err(Error::IllConditioned {
            eigenvalue: eig.min(),
            floor: limit,
        });
    }
    Ok(eig.map(|l| 1.0 / l.sqrt()))
}

/// `λ_min(B − A)`; nonnegative (up to tolerance) iff `A ≤ B` in Loewner order.
pub fn loewner_slack(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    loewner_slack_with(a, b, &Tolerance::default())
}

pub fn loewner_slack_with(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    require_square(a)?;
    require_square(b)?;
    a.ensure_same_dims(b, "loewner_slack")?;
    for m in [a, b] {
        let asymmetry = m.asymmetry();
        let bound = tol.bound(m.frobenius_norm());
        if asymmetry > bound {
            return Err(Error::NotHermitian { asymmetry, bound });
        }
    }
    Ok(eig_hermitian_with(&(b - a), tol)?.min())
}

/// Complex Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary, deterministic for a given seed.
pub fn random_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    random_unitary_with(n, &mut rng)
}

pub fn random_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    check_dims(n, n)?;
    let g = random_gaussian(n, n, rng);
    let qr = g.0.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Q·diag(r_jj/|r_jj|) makes the factorization unique, hence Haar.
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    Ok(ComplexMatrix(q))
}

/// `M` with orthonormal columns (`M*M = I`), `rows ≥ cols`.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if rows < cols {
        return Err(Error::DimensionMismatch(format!(
            "isometry needs rows >= cols, got {rows}x{cols}"
        )));
    }
    let u = random_unitary_with(rows, rng)?;
    Ok(u.block(0, 0, rows, cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn rng(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    fn random_psd(n: usize, seed: u64) -> ComplexMatrix {
        let g = random_gaussian(n, n, &mut rng(seed));
        &g.adjoint() * &g
    }

    // Plain Cholesky; succeeds iff every pivot is positive.
    fn is_positive_definite(a: &DMatrix<C64>) -> bool {
        let n = a.nrows();
        let mut l = DMatrix::<C64>::zeros(n, n);
        for j in 0..n {
            let d = a[(j, j)].re - (0..j).map(|k| l[(j, k)].norm_sqr()).sum::<f64>();
            if d <= 0.0 {
                return false;
            }
            let d = d.sqrt();
            l[(j, j)] = c(d);
            for i in j + 1..n {
                let s: C64 = (0..j).map(|k| l[(i, k)] * l[(j, k)].conj()).sum();
                l[(i, j)] = (a[(i, j)] - s) / d;
            }
        }
        true
    }

    // Independent λ_min oracle: bisection on the Cholesky-feasibility of P − sI.
    fn lambda_min_by_cholesky(p: &ComplexMatrix) -> f64 {
        let n = p.rows();
        let bound = p.frobenius_norm() + 1.0;
        let (mut lo, mut hi) = (-bound, bound);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let shifted = p.as_dmatrix() - DMatrix::<C64>::identity(n, n) * c(mid);
            if is_positive_definite(&shifted) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn hermitize_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(hermitize(&i2).unwrap(), i2);

        let n = ComplexMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let expected = ComplexMatrix::from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.0]).unwrap();
        assert_eq!(hermitize(&n).unwrap(), expected);

        let m = random_gaussian(5, 5, &mut rng(3));
        let r = hermitize(&m).unwrap();
        assert_eq!(r, r.adjoint());
        assert!((&r - &m).frobenius_norm() <= m.asymmetry() / 2.0 + 1e-15);

        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitize(&rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn eig_examples() {
        let d = ComplexMatrix::from_real_diagonal(&[3.0, 1.0]);
        let e = eig_hermitian(&d).unwrap();
        assert_eq!(e.values, vec![1.0, 3.0]);
        // permutation matrix up to phases
        for i in 0..2 {
            for j in 0..2 {
                let v = e.vectors.get(i, j).norm();
                assert!(v < 1e-15 || (v - 1.0).abs() < 1e-15);
            }
        }
        assert!(e.vectors.get(1, 0).norm() > 0.5);

        let e = eig_hermitian(&ComplexMatrix::identity(4)).unwrap();
        assert!(e.values.iter().all(|&l| (l - 1.0).abs() < 1e-15));

        // characteristic polynomial (2-λ)² − 1 = 0 → λ ∈ {1, 3}
        let m = ComplexMatrix::from_real_rows(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let e = eig_hermitian(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_examples() {
        let m = ComplexMatrix::from_real_diagonal(&[4.0, 9.0]);
        let r = sqrt_psd(&m).unwrap();
        assert!((&r - &ComplexMatrix::from_real_diagonal(&[2.0, 3.0])).frobenius_norm() < 1e-14);

        let i = ComplexMatrix::identity(3);
        assert!((&sqrt_psd(&i).unwrap() - &i).frobenius_norm() < 1e-14);

        let m = ComplexMatrix::from_real_rows(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let s3 = 3f64.sqrt();
        let expected = ComplexMatrix::from_real_rows(
            2,
            2,
            &[(s3 + 1.0) / 2.0, (s3 - 1.0) / 2.0, (s3 - 1.0) / 2.0, (s3 + 1.0) / 2.0],
        )
        .unwrap();
        let r = sqrt_psd(&m).unwrap();
        assert!((&r - &expected).frobenius_norm() < 1e-14);
        assert!((&(&r * &r) - &m).frobenius_norm() < 1e-14);
    }

    #[test]
    fn sqrt_clamps_rounding_but_rejects_negative() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-13]);
        let r = sqrt_psd(&m).unwrap();
        assert_eq!(r.get(1, 1), c(0.0));

        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-3]);
        assert!(matches!(sqrt_psd(&m), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn inv_sqrt_examples() {
        let i = ComplexMatrix::identity(3);
        assert!((&inv_sqrt_pd(&i).unwrap() - &i).frobenius_norm() < 1e-14);

        let m = ComplexMatrix::from_real_diagonal(&[4.0, 0.25]);
        let r = inv_sqrt_pd(&m).unwrap();
        assert!((&r - &ComplexMatrix::from_real_diagonal(&[0.5, 2.0])).frobenius_norm() < 1e-14);

        let p = random_psd(5, 11);
        let p = &p + &ComplexMatrix::scalar(5, c(p.operator_norm()));
        let r = inv_sqrt_pd(&p).unwrap();
        let rpr = &(&r * &p) * &r;
        assert!((&rpr - &ComplexMatrix::identity(5)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn inv_sqrt_rejects_ill_conditioned() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, 0.01]);
        assert!(matches!(inv_sqrt_pd(&m), Err(Error::IllConditioned { .. })));
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!(matches!(inv_sqrt_pd(&m), Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn loewner_examples() {
        let i = ComplexMatrix::identity(3);
        let two = ComplexMatrix::scalar(3, c(2.0));
        assert!((loewner_slack(&i, &two).unwrap() - 1.0).abs() < 1e-15);

        let a = ComplexMatrix::from_real_diagonal(&[1.0, 3.0]);
        let b = ComplexMatrix::from_real_diagonal(&[2.0, 2.0]);
        assert!((loewner_slack(&a, &b).unwrap() + 1.0).abs() < 1e-15);

        let p = random_psd(6, 5);
        let slack = loewner_slack(&ComplexMatrix::zeros(6, 6), &p).unwrap();
        assert!(slack >= 0.0);
        let oracle = lambda_min_by_cholesky(&p);
        assert!((slack - oracle).abs() < 1e-10 * p.operator_norm(), "{slack} {oracle}");

        let wrong = ComplexMatrix::identity(2);
        assert!(matches!(loewner_slack(&i, &wrong), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn unitary_examples() {
        let u = random_unitary(1, 9).unwrap();
        assert!((u.get(0, 0).norm() - 1.0).abs() < 1e-15);

        assert_eq!(random_unitary(5, 42).unwrap(), random_unitary(5, 42).unwrap());
        assert_ne!(random_unitary(5, 42).unwrap(), random_unitary(5, 43).unwrap());

        let u = random_unitary(4, 1).unwrap();
        assert!((&(&u.adjoint() * &u) - &ComplexMatrix::identity(4)).frobenius_norm() <= 1e-12);

        assert!(matches!(random_unitary(0, 1), Err(Error::DimensionMismatch(_))));
        assert!(matches!(random_unitary(65, 1), Err(Error::DimensionCap(65))));
    }

    #[test]
    fn haar_first_moment_is_small() {
        // E[U] = 0 and E|U_ij|² = 1/n for Haar measure.
        let n = 3;
        let trials = 2000;
        let mut mean = C64::new(0.0, 0.0);
        let mut second = 0.0;
        let mut r = rng(77);
        for _ in 0..trials {
            let u = random_unitary_with(n, &mut r).unwrap();
            mean += u.get(0, 0);
            second += u.get(0, 0).norm_sqr();
        }
        mean /= trials as f64;
        second /= trials as f64;
        assert!(mean.norm() < 0.05);
        assert!((second - 1.0 / n as f64).abs() < 0.03);
    }

    #[test]
    fn operator_norm_matches_hermitian_spectral_radius() {
        for seed in 0..20 {
            let g = random_gaussian(5, 5, &mut rng(seed));
            let h = hermitize(&g).unwrap();
            let e = eig_hermitian(&h).unwrap();
            assert!((h.operator_norm() - e.spectral_radius()).abs() < 1e-12 * (1.0 + e.spectral_radius()));
        }
    }

    #[test]
    fn sqrt_reconstructs_psd_up_to_dim_8() {
        let tol = Tolerance::default();
        for trial in 0..200u64 {
            let n = 1 + (trial % 8) as usize;
            let p = random_psd(n, 1000 + trial);
            let r = sqrt_psd(&p).unwrap();
            let err = (&(&r * &r) - &p).frobenius_norm();
            assert!(err <= tol.bound(p.frobenius_norm()), "n={n} err={err:e}");
            assert!(eig_hermitian(&r).unwrap().min() >= -1e-12);
        }
    }

    proptest! {
        #[test]
        fn eig_reconstruction(seed in any::<u64>(), n in 1usize..8) {
            let h = hermitize(&random_gaussian(n, n, &mut rng(seed))).unwrap();
            let e = eig_hermitian(&h).unwrap();
            let recon = e.map(|l| l);
            prop_assert!((&recon - &h).frobenius_norm() <= 1e-9 * h.frobenius_norm().max(1e-3));
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let u = &e.vectors;
            prop_assert!((&(&u.adjoint() * u) - &ComplexMatrix::identity(n)).frobenius_norm() < 1e-12);
        }

        #[test]
        fn loewner_slack_antisymmetry(seed in any::<u64>(), n in 1usize..6) {
            let mut r = rng(seed);
            let a = hermitize(&random_gaussian(n, n, &mut r)).unwrap();
            let b = hermitize(&random_gaussian(n, n, &mut r)).unwrap();
            let s1 = loewner_slack(&a, &b).unwrap();
            let s2 = loewner_slack(&(-&b), &(-&a)).unwrap();
            prop_assert!((s1 - s2).abs() < 1e-12 * (1.0 + a.frobenius_norm() + b.frobenius_norm()));
        }

        #[test]
        fn inv_sqrt_inverts(seed in any::<u64>(), n in 1usize..7) {
            let p = random_psd(n, seed);
            let p = &p + &ComplexMatrix::scalar(n, c(0.1 * p.operator_norm() + 0.1));
            let r = inv_sqrt_pd(&p).unwrap();
            let rpr = &(&r * &p) * &r;
            prop_assert!((&rpr - &ComplexMatrix::identity(n)).frobenius_norm() < 1e-10);
        }
    }
}
