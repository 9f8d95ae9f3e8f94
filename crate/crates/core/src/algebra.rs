//! Finite-dimensional C*-algebras `A = M_{n₁}(ℂ) ⊕ ⋯ ⊕ M_{n_k}(ℂ)`.
//!
//! Every finite-dimensional C*-algebra is of this form. Elements are stored
//! as one square matrix per summand; the C*-norm is the largest operator norm
//! over the blocks and the center consists of blockwise scalar multiples of
//! the identity.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix, Tolerance, C64, MAX_DIM};

/// Cap on `Σ nᵢ²`, the complex dimension of the algebra.
pub const ALGEBRA_DIM_CAP: usize = MAX_DIM * MAX_DIM;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct AlgebraShape(Vec<usize>);

impl AlgebraShape {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidShape("no blocks".into()));
        }
        if let Some(&n) = block_dims.iter().find(|&&n| n == 0 || n > MAX_DIM) {
            return Err(Error::InvalidShape(format!("block dimension {n}")));
        }
        let dim: usize = block_dims.iter().map(|n| n * n).sum();
        if dim > ALGEBRA_DIM_CAP {
            return Err(Error::InvalidShape(format!(
                "algebra dimension {dim} exceeds cap {ALGEBRA_DIM_CAP}"
            )));
        }
        Ok(Self(block_dims))
    }

    /// The scalars, `ℂ = M₁(ℂ)`.
    pub fn scalars() -> Self {
        Self(vec![1])
    }

    /// `M_n(ℂ)`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.0
    }

    pub fn block_count(&self) -> usize {
        self.0.len()
    }

    /// `Σ nᵢ`, the size of the block-diagonal representation.
    pub fn representation_dim(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn dimension(&self) -> usize {
        self.0.iter().map(|n| n * n).sum()
    }

    /// Shape of `M_k(A)`: every block dimension multiplied by `k`.
    pub fn amplified(&self, k: usize) -> Result<Self> {
        Self::new(self.0.iter().map(|n| n * k).collect())
    }
}

impl TryFrom<Vec<usize>> for AlgebraShape {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<AlgebraShape> for Vec<usize> {
    fn from(s: AlgebraShape) -> Self {
        s.0
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join("+"))
    }
}

/// Parses `"2"` or `"2+3"`.
impl FromStr for AlgebraShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .split('+')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidShape(format!("cannot parse {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dims)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraElement {
    shape: AlgebraShape,
    blocks: Vec<ComplexMatrix>,
}

impl AlgebraElement {
    pub fn new(shape: AlgebraShape, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.len() != shape.block_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks for shape {shape}",
                blocks.len()
            )));
        }
        for (b, &n) in blocks.iter().zip(shape.block_dims()) {
            if b.rows() != n || b.cols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "block {}x{} where {n}x{n} expected",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(Self { shape, blocks })
    }

    fn from_blocks_unchecked(shape: AlgebraShape, blocks: Vec<ComplexMatrix>) -> Self {
        debug_assert_eq!(shape.block_count(), blocks.len());
        Self { shape, blocks }
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        let blocks = shape.block_dims().iter().map(|&n| ComplexMatrix::zeros(n, n)).collect();
        Self::from_blocks_unchecked(shape.clone(), blocks)
    }

    pub fn unit(shape: &AlgebraShape) -> Self {
        let blocks = shape.block_dims().iter().map(|&n| ComplexMatrix::identity(n)).collect();
        Self::from_blocks_unchecked(shape.clone(), blocks)
    }

    /// `c·e`.
    pub fn scalar(shape: &AlgebraShape, c: C64) -> Self {
        Self::unit(shape).scale(c)
    }

    /// The central element with value `values[i]·I` on block `i`.
    pub fn central(shape: &AlgebraShape, values: &[C64]) -> Result<Self> {
        if values.len() != shape.block_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} central values for {} blocks",
                values.len(),
                shape.block_count()
            )));
        }
        let blocks = shape
            .block_dims()
            .iter()
            .zip(values)
            .map(|(&n, &c)| ComplexMatrix::scalar(n, c))
            .collect();
        Ok(Self::from_blocks_unchecked(shape.clone(), blocks))
    }

    /// A complex number viewed in the one-block algebra `ℂ`.
    pub fn from_complex(c: C64) -> Self {
        Self::scalar(&AlgebraShape::scalars(), c)
    }

    pub fn from_real(r: f64) -> Self {
        Self::from_complex(C64::new(r, 0.0))
    }

    /// Single-block element of `M_n`.
    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        let shape = AlgebraShape::full(m.rows())?;
        Self::new(shape, vec![m])
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &ComplexMatrix {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<ComplexMatrix> {
        self.blocks
    }

    pub fn map_blocks(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        Self::from_blocks_unchecked(self.shape.clone(), self.blocks.iter().map(f).collect())
    }

    pub fn try_map_blocks(&self, f: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>) -> Result<Self> {
        let blocks = self.blocks.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_blocks_unchecked(self.shape.clone(), blocks))
    }

    fn zip_blocks(
        &self,
        other: &Self,
        what: &str,
        f: impl Fn(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix,
    ) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!(
                "{what}: {} vs {}",
                self.shape, other.shape
            )));
        }
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect();
        Ok(Self::from_blocks_unchecked(self.shape.clone(), blocks))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, "product", |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, "sum", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, "difference", |a, b| a - b)
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map_blocks(|b| b.scale(c))
    }

    pub fn scale_real(&self, r: f64) -> Self {
        self.map_blocks(|b| b.scale_real(r))
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(|b| b.adjoint())
    }

    /// `a* a`.
    pub fn abs_sq(&self) -> Self {
        self.map_blocks(|b| &b.adjoint() * b)
    }

    /// `|a| = (a* a)^{1/2}`.
    pub fn abs(&self) -> Result<Self> {
        self.abs_sq().sqrt_psd()
    }

    /// Positive square root of a positive element, blockwise.
    pub fn sqrt_psd(&self) -> Result<Self> {
        self.try_map_blocks(matrix::sqrt_psd)
    }

    pub fn inv_sqrt_pd(&self, floor: f64) -> Result<Self> {
        self.try_map_blocks(|b| matrix::inv_sqrt_pd_with(b, &Tolerance::default(), floor))
    }

    /// Blockwise `(a + a*)/2`.
    pub fn hermitian_part(&self) -> Self {
        self.map_blocks(|b| matrix::hermitize(b).expect("algebra blocks are square"))
    }

    /// C*-norm: the largest operator norm over the blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(ComplexMatrix::operator_norm).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of `self − other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_self_adjoint_with(&Tolerance::default())
    }

    pub fn is_self_adjoint_with(&self, tol: &Tolerance) -> bool {
        self.self_adjoint_defect() <= tol.bound(self.frobenius_norm())
    }

    /// `‖a − a*‖_F`.
    pub fn self_adjoint_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.asymmetry().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_central(&self) -> bool {
        self.is_central_with(&Tolerance::default())
    }

    pub fn is_central_with(&self, tol: &Tolerance) -> bool {
        self.central_defect() <= tol.bound(self.frobenius_norm())
    }

    /// Frobenius distance to the center: each block against its own trace part.
    pub fn central_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let n = b.rows();
                let mean = b.trace() / n as f64;
                (b - &ComplexMatrix::scalar(n, mean)).frobenius_norm().powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Per-block scalar values of a central element (trace averages).
    pub fn central_values(&self) -> Vec<C64> {
        self.blocks.iter().map(|b| b.trace() / b.rows() as f64).collect()
    }

    /// Smallest eigenvalue over all blocks of a self-adjoint element.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let mut min = f64::INFINITY;
        for b in &self.blocks {
            min = min.min(matrix::eig_hermitian(b)?.min());
        }
        Ok(min)
    }

    /// Smallest singular value over all blocks; zero iff `a` is not invertible.
    pub fn min_singular_value(&self) -> Result<f64> {
        Ok(self.abs_sq().min_eigenvalue()?.max(0.0).sqrt())
    }

    /// Blockwise `[a, b] = ab − ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Block-diagonal matrix of size `Σ nᵢ`.
    pub fn to_block_diagonal(&self) -> ComplexMatrix {
        let n = self.shape.representation_dim();
        let mut m = ComplexMatrix::zeros(n, n);
        let mut offset = 0;
        for b in &self.blocks {
            m.set_block(offset, offset, b);
            offset += b.rows();
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&n| matrix::random_gaussian(n, n, rng))
            .collect();
        Self::from_blocks_unchecked(shape.clone(), blocks)
    }

    pub fn random_self_adjoint<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Self {
        Self::random(shape, rng).hermitian_part()
    }

    /// Blockwise Haar unitary.
    pub fn random_unitary<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&n| matrix::random_unitary_with(n, rng).expect("shape dims are within cap"))
            .collect();
        Self::from_blocks_unchecked(shape.clone(), blocks)
    }
}

/// `λ_min(b − a)` over all blocks.
pub fn loewner_slack(a: &AlgebraElement, b: &AlgebraElement) -> Result<f64> {
    if a.shape != b.shape {
        return Err(Error::ShapeMismatch(format!(
            "loewner_slack: {} vs {}",
            a.shape, b.shape
        )));
    }
    let mut min = f64::INFINITY;
    for (x, y) in a.blocks.iter().zip(&b.blocks) {
        min = min.min(matrix::loewner_slack(x, y)?);
    }
    Ok(min)
}
