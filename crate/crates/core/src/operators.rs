//! Adjointable A-linear maps between the concrete modules.
//!
//! On a tuple module `Aᵏ` the adjointable maps are exactly the `k×k` grids
//! over `A` acting by left multiplication, `L(Aᵏ) ≅ M_k(A)`. A grid flattens
//! to a single element of the amplified algebra `M_k(A)`, which has blocks of
//! size `k·nᵢ`; functional calculus (`|T|`, `T^{-1/2}`) is done there and
//! re-blocked.
//!
//! `Ket(z)`, `a ↦ za`, and `Bra(z)`, `v ↦ ⟨z, v⟩`, map between `A` and an
//! arbitrary module. They are adjoint to each other and only support
//! composition and adjoints, except that `Bra(z)∘Ket(w)` collapses to left
//! multiplication by `⟨z, w⟩` on `A`.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Tolerance};
use crate::module::{self, ModuleElement, ModuleSpace};

/// Default number of random probes for probe-based operator checks.
pub const DEFAULT_PROBES: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub enum OpForm {
    /// `(Tx)ᵣ = Σ_c grid[r][c]·x_c` on a tuple module.
    MatrixOverA(Vec<Vec<AlgebraElement>>),
    /// `x ↦ xc` for central `c`.
    RightMult(AlgebraElement),
    /// `a ↦ za`, from `A` into the module of `z`.
    Ket(ModuleElement),
    /// `v ↦ ⟨z, v⟩`, from the module of `z` into `A`.
    Bra(ModuleElement),
    /// `ops[0] ∘ ops[1] ∘ ⋯`; the last operator is applied first.
    Compose(Vec<AdjointableOp>),
    Scale(f64, Box<AdjointableOp>),
    Sum(Vec<AdjointableOp>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjointableOp {
    domain: ModuleSpace,
    codomain: ModuleSpace,
    form: OpForm,
}

fn tuple_len(space: &ModuleSpace) -> Result<usize> {
    space.tuple_len().ok_or_else(|| {
        Error::UnsupportedForm(format!("{} is not a tuple module", space.label()))
    })
}

impl AdjointableOp {
    pub fn matrix_over_a(space: ModuleSpace, grid: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        let k = tuple_len(&space)?;
        if grid.len() != k || grid.iter().any(|row| row.len() != k) {
            return Err(Error::SpaceMismatch(format!(
                "grid is not {k}x{k} for {}",
                space.label()
            )));
        }
        if grid.iter().flatten().any(|a| a.shape() != space.algebra()) {
            return Err(Error::ShapeMismatch("grid entry from another algebra".into()));
        }
        Ok(Self {
            domain: space.clone(),
            codomain: space,
            form: OpForm::MatrixOverA(grid),
        })
    }

    pub fn identity(space: &ModuleSpace) -> Self {
        let e = AlgebraElement::unit(space.algebra());
        match space.tuple_len() {
            Some(k) => {
                let zero = AlgebraElement::zero(space.algebra());
                let grid = (0..k)
                    .map(|r| (0..k).map(|c| if r == c { e.clone() } else { zero.clone() }).collect())
                    .collect();
                Self {
                    domain: space.clone(),
                    codomain: space.clone(),
                    form: OpForm::MatrixOverA(grid),
                }
            }
            None => Self {
                domain: space.clone(),
                codomain: space.clone(),
                form: OpForm::RightMult(e),
            },
        }
    }

    /// `T_c(x) = xc`; `c` must be central for `T_c` to be A-linear.
    pub fn right_mult(space: &ModuleSpace, c: AlgebraElement) -> Result<Self> {
        if c.shape() != space.algebra() {
            return Err(Error::ShapeMismatch(format!(
                "right multiplier from {} on {}",
                c.shape(),
                space.label()
            )));
        }
        if !c.is_central() {
            return Err(Error::NonCentral);
        }
        Ok(Self {
            domain: space.clone(),
            codomain: space.clone(),
            form: OpForm::RightMult(c),
        })
    }

    pub fn ket(z: ModuleElement) -> Self {
        Self {
            domain: ModuleSpace::self_module(z.space().algebra().clone()),
            codomain: z.space().clone(),
            form: OpForm::Ket(z),
        }
    }

    pub fn bra(z: ModuleElement) -> Self {
        Self {
            domain: z.space().clone(),
            codomain: ModuleSpace::self_module(z.space().algebra().clone()),
            form: OpForm::Bra(z),
        }
    }

    pub fn compose(ops: Vec<AdjointableOp>) -> Result<Self> {
        let (first, last) = match (ops.first(), ops.last()) {
            (Some(f), Some(l)) => (f.codomain.clone(), l.domain.clone()),
            _ => return Err(Error::InvalidParameter("empty composition".into())),
        };
        for pair in ops.windows(2) {
            if pair[0].domain != pair[1].codomain {
                return Err(Error::SpaceMismatch(format!(
                    "composition chain breaks: {} after {}",
                    pair[0].domain.label(),
                    pair[1].codomain.label()
                )));
            }
        }
        Ok(Self {
            domain: last,
            codomain: first,
            form: OpForm::Compose(ops),
        })
    }

    pub fn scale(r: f64, op: AdjointableOp) -> Self {
        Self {
            domain: op.domain.clone(),
            codomain: op.codomain.clone(),
            form: OpForm::Scale(r, Box::new(op)),
        }
    }

    pub fn sum(ops: Vec<AdjointableOp>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty sum".into()))?;
        if ops
            .iter()
            .any(|op| op.domain != first.domain || op.codomain != first.codomain)
        {
            return Err(Error::SpaceMismatch("summands act between different spaces".into()));
        }
        Ok(Self {
            domain: first.domain.clone(),
            codomain: first.codomain.clone(),
            form: OpForm::Sum(ops),
        })
    }

    pub fn domain(&self) -> &ModuleSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &ModuleSpace {
        &self.codomain
    }

    pub fn form(&self) -> &OpForm {
        &self.form
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn apply(&self, x: &ModuleElement) -> Result<ModuleElement> {
        if x.space() != &self.domain {
            return Err(Error::SpaceMismatch(format!(
                "operator on {} applied to element of {}",
                self.domain.label(),
                x.space().label()
            )));
        }
        match &self.form {
            OpForm::MatrixOverA(grid) => {
                let xs = x.components().expect("tuple module");
                let mut out = Vec::with_capacity(grid.len());
                for row in grid {
                    let mut acc = AlgebraElement::zero(self.domain.algebra());
                    for (g, xc) in row.iter().zip(xs) {
                        acc = acc.add(&g.mul(xc)?)?;
                    }
                    out.push(acc);
                }
                ModuleElement::tuple(self.codomain.clone(), out)
            }
            OpForm::RightMult(c) => module::act(x, c),
            OpForm::Ket(z) => {
                let a = &x.components().expect("self module")[0];
                module::act(z, a)
            }
            OpForm::Bra(z) => Ok(ModuleElement::from_algebra(module::inner(z, x)?)),
            OpForm::Compose(ops) => {
                let mut v = x.clone();
                for op in ops.iter().rev() {
                    v = op.apply(&v)?;
                }
                Ok(v)
            }
            OpForm::Scale(r, op) => Ok(op.apply(x)?.scale_real(*r)),
            OpForm::Sum(ops) => {
                let mut acc = ModuleElement::zero(&self.codomain);
                for op in ops {
                    acc = acc.add(&op.apply(x)?)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn adjoint(&self) -> Self {
        let form = match &self.form {
            OpForm::MatrixOverA(grid) => {
                let k = grid.len();
                OpForm::MatrixOverA(
                    (0..k)
                        .map(|r| (0..k).map(|c| grid[c][r].adjoint()).collect())
                        .collect(),
                )
            }
            OpForm::RightMult(c) => OpForm::RightMult(c.adjoint()),
            OpForm::Ket(z) => OpForm::Bra(z.clone()),
            OpForm::Bra(z) => OpForm::Ket(z.clone()),
            OpForm::Compose(ops) => OpForm::Compose(ops.iter().rev().map(Self::adjoint).collect()),
            OpForm::Scale(r, op) => OpForm::Scale(*r, Box::new(op.adjoint())),
            OpForm::Sum(ops) => OpForm::Sum(ops.iter().map(Self::adjoint).collect()),
        };
        Self {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            form,
        }
    }

    /// The element of `M_k(A)` realizing this endomorphism of a tuple module.
    pub fn flatten(&self) -> Result<AlgebraElement> {
        if !self.is_endomorphism() {
            return Err(Error::UnsupportedForm("only endomorphisms flatten".into()));
        }
        let k = tuple_len(&self.domain)?;
        let shape = self.domain.algebra();
        match &self.form {
            OpForm::MatrixOverA(grid) => flatten_grid(grid, shape),
            OpForm::RightMult(c) => {
                let zero = AlgebraElement::zero(shape);
                let grid: Vec<Vec<AlgebraElement>> = (0..k)
                    .map(|r| (0..k).map(|col| if r == col { c.clone() } else { zero.clone() }).collect())
                    .collect();
                flatten_grid(&grid, shape)
            }
            OpForm::Compose(ops) => {
                let ops = collapse_bra_kets(ops)?;
                let mut iter = ops.iter();
                let mut acc = iter.next().expect("nonempty").flatten()?;
                for op in iter {
                    acc = acc.mul(&op.flatten()?)?;
                }
                Ok(acc)
            }
            OpForm::Scale(r, op) => Ok(op.flatten()?.scale_real(*r)),
            OpForm::Sum(ops) => {
                let mut acc = AlgebraElement::zero(&shape.amplified(k)?);
                for op in ops {
                    acc = acc.add(&op.flatten()?)?;
                }
                Ok(acc)
            }
            OpForm::Ket(_) | OpForm::Bra(_) => Err(Error::UnsupportedForm(
                "ket/bra maps are not endomorphisms".into(),
            )),
        }
    }

    /// Inverse of [`flatten`](Self::flatten).
    pub fn from_flat(space: &ModuleSpace, flat: &AlgebraElement) -> Result<Self> {
        let k = tuple_len(space)?;
        let shape = space.algebra();
        if flat.shape() != &shape.amplified(k)? {
            return Err(Error::ShapeMismatch(format!(
                "flat operator of shape {} on {}",
                flat.shape(),
                space.label()
            )));
        }
        let grid = (0..k)
            .map(|r| {
                (0..k)
                    .map(|c| {
                        let blocks = shape
                            .block_dims()
                            .iter()
                            .zip(flat.blocks())
                            .map(|(&n, b)| b.block(r * n, c * n, n, n))
                            .collect();
                        AlgebraElement::new(shape.clone(), blocks)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::matrix_over_a(space.clone(), grid)
    }

    /// Self-adjointness by `probes` random probes, cross-checked against the
    /// structural test whenever the operator flattens.
    pub fn is_self_adjoint(&self, probes: usize, seed: u64) -> Result<bool> {
        if !self.is_endomorphism() {
            return Err(Error::SpaceMismatch(format!(
                "self-adjointness of a map {} -> {}",
                self.domain.label(),
                self.codomain.label()
            )));
        }
        let tol = Tolerance::default();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut by_probes = true;
        for _ in 0..probes {
            let x = ModuleElement::random(&self.domain, &mut rng);
            let y = ModuleElement::random(&self.domain, &mut rng);
            let lhs = module::inner(&self.apply(&x)?, &y)?;
            let rhs = module::inner(&x, &self.apply(&y)?)?;
            let scale = lhs.frobenius_norm() + rhs.frobenius_norm();
            if lhs.distance(&rhs)? > tol.bound(scale) {
                by_probes = false;
            }
        }
        match self.flatten() {
            Ok(flat) => {
                let structural = flat.self_adjoint_defect() <= tol.bound(flat.frobenius_norm());
                if probes > 0 && structural != by_probes {
                    return Err(Error::SelfAdjointDisagreement {
                        structural,
                        probes: by_probes,
                    });
                }
                Ok(structural)
            }
            Err(Error::UnsupportedForm(_)) => Ok(by_probes),
            Err(e) => Err(e),
        }
    }

    /// `|T|² = T*T`.
    pub fn abs_squared(&self) -> Result<Self> {
        if !self.is_endomorphism() {
            return Err(Error::SpaceMismatch("|T|² of a non-endomorphism".into()));
        }
        match &self.form {
            OpForm::RightMult(c) => Self::right_mult(&self.domain, c.abs_sq()),
            OpForm::Scale(r, op) => Ok(Self::scale(r * r, op.abs_squared()?)),
            _ => match self.flatten() {
                Ok(flat) => Self::from_flat(&self.domain, &flat.abs_sq()),
                Err(Error::UnsupportedForm(_)) => Self::compose(vec![self.adjoint(), self.clone()]),
                Err(e) => Err(e),
            },
        }
    }

    /// `|T| = (T*T)^{1/2}`.
    pub fn abs(&self) -> Result<Self> {
        if !self.is_endomorphism() {
            return Err(Error::SpaceMismatch("|T| of a non-endomorphism".into()));
        }
        match &self.form {
            OpForm::RightMult(c) => Self::right_mult(&self.domain, c.abs()?),
            OpForm::Scale(r, op) => Ok(Self::scale(r.abs(), op.abs()?)),
            _ => Self::from_flat(&self.domain, &self.flatten()?.abs()?),
        }
    }
}

fn flatten_grid(grid: &[Vec<AlgebraElement>], shape: &AlgebraShape) -> Result<AlgebraElement> {
    let k = grid.len();
    let blocks = shape
        .block_dims()
        .iter()
        .enumerate()
        .map(|(b, &n)| {
            let mut m = ComplexMatrix::zeros(k * n, k * n);
            for (r, row) in grid.iter().enumerate() {
                for (c, entry) in row.iter().enumerate() {
                    m.set_block(r * n, c * n, entry.block(b));
                }
            }
            m
        })
        .collect();
    AlgebraElement::new(shape.amplified(k)?, blocks)
}

/// Replaces each adjacent `Bra(z), Ket(w)` pair by left multiplication by
/// `⟨z, w⟩` on `A`.
fn collapse_bra_kets(ops: &[AdjointableOp]) -> Result<Vec<AdjointableOp>> {
    let mut out: Vec<AdjointableOp> = Vec::with_capacity(ops.len());
    let mut i = 0;
    while i < ops.len() {
        if let (OpForm::Bra(z), Some(next)) = (&ops[i].form, ops.get(i + 1)) {
            if let OpForm::Ket(w) = &next.form {
                let space = ops[i].codomain.clone();
                out.push(AdjointableOp::matrix_over_a(space, vec![vec![module::inner(z, w)?]])?);
                i += 2;
                continue;
            }
        }
        out.push(ops[i].clone());
        i += 1;
    }
    Ok(out)
}

/// Relative distance between two maps with the same domain and codomain:
/// structural when both flatten, otherwise the largest relative difference
/// over `probes` random probes (plus the unit, on `A` itself).
pub fn op_distance(a: &AdjointableOp, b: &AdjointableOp, probes: usize, seed: u64) -> Result<f64> {
    if a.domain != b.domain || a.codomain != b.codomain {
        return Err(Error::SpaceMismatch("comparing maps between different spaces".into()));
    }
    if let (Ok(fa), Ok(fb)) = (a.flatten(), b.flatten()) {
        let scale = fa.frobenius_norm().max(fb.frobenius_norm()).max(1.0);
        return Ok(fa.distance(&fb)? / scale);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut probe = |x: &ModuleElement| -> Result<()> {
        let ax = a.apply(x)?;
        let bx = b.apply(x)?;
        let scale = ax
            .max_component_norm()
            .max(bx.max_component_norm())
            .max(1.0);
        worst = worst.max(ax.distance(&bx)? / scale);
        Ok(())
    };
    if a.domain.tuple_len() == Some(1) {
        let e = AlgebraElement::unit(a.domain.algebra());
        probe(&ModuleElement::tuple(a.domain.clone(), vec![e])?)?;
    }
    for _ in 0..probes {
        let x = ModuleElement::random(&a.domain, &mut rng);
        probe(&x)?;
    }
    Ok(worst)
}
