//! Concrete Hilbert A-modules.
//!
//! Five families are modelled:
//!
//! * `SelfModule`: `A` over itself with `⟨a, b⟩ = a*b`;
//! * `DirectSum(k)`: `Aᵏ` with `⟨x, y⟩ = Σ xᵢ* yᵢ`;
//! * `SeqModule(L)`: the length-`L` truncation of `ℓ₂(A)`, same inner product;
//! * `RectTuple(n, m, d)`: `n`-tuples of `m×d` matrices over `A = M_d` with
//!   `⟨(Tᵢ), (Sᵢ)⟩ = Σ Tᵢ* Sᵢ`;
//! * `Bundle`: sections of a Hilbert bundle over a finite set `K` of `κ`
//!   points, a module over `C(K) ≅ ℂ^κ` with
//!   `⟨φ, ψ⟩(t) = ⟨ψ(t) | φ(t)⟩_t`.
//!
//! The fiber inner product `⟨u | v⟩_t = Σ uⱼ conj(vⱼ)` is linear in its first
//! slot, which makes the module inner product linear in its second argument.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix, C64, MAX_DIM};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleKind {
    SelfModule,
    DirectSum { k: usize },
    RectTuple { n: usize, m: usize, d: usize },
    SeqModule { len: usize },
    Bundle { fiber_dims: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleSpace {
    kind: ModuleKind,
    algebra: AlgebraShape,
}

impl ModuleSpace {
    pub fn new(kind: ModuleKind, algebra: AlgebraShape) -> Result<Self> {
        match &kind {
            ModuleKind::SelfModule => {}
            ModuleKind::DirectSum { k } | ModuleKind::SeqModule { len: k } => {
                if *k == 0 || *k > MAX_DIM {
                    return Err(Error::InvalidParameter(format!("module rank {k}")));
                }
                algebra.amplified(*k)?;
            }
            ModuleKind::RectTuple { n, m, d } => {
                if *n == 0 || *m == 0 || *d == 0 || *n > MAX_DIM || *m > MAX_DIM {
                    return Err(Error::InvalidParameter(format!("rect tuple ({n}, {m}, {d})")));
                }
                if algebra.block_dims() != [*d] {
                    return Err(Error::SpaceMismatch(format!(
                        "rect tuple with fiber cols {d} needs algebra M_{d}, got {algebra}"
                    )));
                }
            }
            ModuleKind::Bundle { fiber_dims } => {
                if fiber_dims.is_empty() || fiber_dims.iter().any(|&d| d == 0 || d > MAX_DIM) {
                    return Err(Error::InvalidParameter(format!("fiber dims {fiber_dims:?}")));
                }
                if algebra.block_dims().len() != fiber_dims.len()
                    || algebra.block_dims().iter().any(|&n| n != 1)
                {
                    return Err(Error::SpaceMismatch(format!(
                        "bundle over {} points needs algebra of {} one-dimensional blocks, got {algebra}",
                        fiber_dims.len(),
                        fiber_dims.len()
                    )));
                }
            }
        }
        Ok(Self { kind, algebra })
    }

    pub fn self_module(algebra: AlgebraShape) -> Self {
        Self {
            kind: ModuleKind::SelfModule,
            algebra,
        }
    }

    pub fn direct_sum(k: usize, algebra: AlgebraShape) -> Result<Self> {
        Self::new(ModuleKind::DirectSum { k }, algebra)
    }

    pub fn seq(len: usize, algebra: AlgebraShape) -> Result<Self> {
        Self::new(ModuleKind::SeqModule { len }, algebra)
    }

    pub fn rect_tuple(n: usize, m: usize, d: usize) -> Result<Self> {
        Self::new(ModuleKind::RectTuple { n, m, d }, AlgebraShape::full(d)?)
    }

    pub fn bundle(fiber_dims: Vec<usize>) -> Result<Self> {
        let algebra = AlgebraShape::new(vec![1; fiber_dims.len()])?;
        Self::new(ModuleKind::Bundle { fiber_dims }, algebra)
    }

    pub fn kind(&self) -> &ModuleKind {
        &self.kind
    }

    pub fn algebra(&self) -> &AlgebraShape {
        &self.algebra
    }

    /// Number of algebra components for the families whose elements are
    /// tuples of algebra elements (`SelfModule`, `DirectSum`, `SeqModule`).
    pub fn tuple_len(&self) -> Option<usize> {
        match self.kind {
            ModuleKind::SelfModule => Some(1),
            ModuleKind::DirectSum { k } => Some(k),
            ModuleKind::SeqModule { len } => Some(len),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            ModuleKind::SelfModule => format!("self[{}]", self.algebra),
            ModuleKind::DirectSum { k } => format!("sum{k}[{}]", self.algebra),
            ModuleKind::SeqModule { len } => format!("seq{len}[{}]", self.algebra),
            ModuleKind::RectTuple { n, m, d } => format!("rect{n}x({m}x{d})"),
            ModuleKind::Bundle { fiber_dims } => format!("bundle{fiber_dims:?}"),
        }
    }

    fn ensure_same(&self, other: &Self, what: &str) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch(format!(
                "{what}: {} vs {}",
                self.label(),
                other.label()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Algebra(Vec<AlgebraElement>),
    Rect(Vec<ComplexMatrix>),
    Bundle(Vec<Vec<C64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuleElement {
    space: ModuleSpace,
    payload: Payload,
}

impl ModuleElement {
    pub fn new(space: ModuleSpace, payload: Payload) -> Result<Self> {
        let ok = match (&space.kind, &payload) {
            (ModuleKind::Bundle { fiber_dims }, Payload::Bundle(sections)) => {
                sections.len() == fiber_dims.len()
                    && sections.iter().zip(fiber_dims).all(|(s, &d)| s.len() == d)
                    && sections.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
            }
            (ModuleKind::RectTuple { n, m, d }, Payload::Rect(mats)) => {
                mats.len() == *n && mats.iter().all(|t| t.rows() == *m && t.cols() == *d)
            }
            (_, Payload::Algebra(parts)) => {
                space.tuple_len() == Some(parts.len())
                    && parts.iter().all(|a| a.shape() == &space.algebra)
            }
            _ => false,
        };
        if !ok {
            return Err(Error::SpaceMismatch(format!(
                "payload does not fit {}",
                space.label()
            )));
        }
        Ok(Self { space, payload })
    }

    /// `a` as an element of `A` viewed as a module over itself.
    pub fn from_algebra(a: AlgebraElement) -> Self {
        Self {
            space: ModuleSpace::self_module(a.shape().clone()),
            payload: Payload::Algebra(vec![a]),
        }
    }

    pub fn tuple(space: ModuleSpace, parts: Vec<AlgebraElement>) -> Result<Self> {
        Self::new(space, Payload::Algebra(parts))
    }

    pub fn zero(space: &ModuleSpace) -> Self {
        let payload = match &space.kind {
            ModuleKind::RectTuple { n, m, d } => Payload::Rect(vec![ComplexMatrix::zeros(*m, *d); *n]),
            ModuleKind::Bundle { fiber_dims } => {
                Payload::Bundle(fiber_dims.iter().map(|&d| vec![C64::new(0.0, 0.0); d]).collect())
            }
            _ => Payload::Algebra(vec![
                AlgebraElement::zero(&space.algebra);
                space.tuple_len().expect("tuple family")
            ]),
        };
        Self {
            space: space.clone(),
            payload,
        }
    }

    /// Standard complex Gaussian entries in every component.
    pub fn random<R: Rng + ?Sized>(space: &ModuleSpace, rng: &mut R) -> Self {
        let payload = match &space.kind {
            ModuleKind::RectTuple { n, m, d } => {
                Payload::Rect((0..*n).map(|_| matrix::random_gaussian(*m, *d, rng)).collect())
            }
            ModuleKind::Bundle { fiber_dims } => Payload::Bundle(
                fiber_dims
                    .iter()
                    .map(|&d| (0..d).map(|_| gaussian(rng)).collect())
                    .collect(),
            ),
            _ => Payload::Algebra(
                (0..space.tuple_len().expect("tuple family"))
                    .map(|_| AlgebraElement::random(&space.algebra, rng))
                    .collect(),
            ),
        };
        Self {
            space: space.clone(),
            payload,
        }
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    /// The algebra components of a tuple-family element.
    pub fn components(&self) -> Option<&[AlgebraElement]> {
        match &self.payload {
            Payload::Algebra(parts) => Some(parts),
            _ => None,
        }
    }

    fn combine(&self, other: &Self, a: C64, b: C64) -> Result<Self> {
        self.space.ensure_same(&other.space, "linear combination")?;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Algebra(x), Payload::Algebra(y)) => Payload::Algebra(
                x.iter()
                    .zip(y)
                    .map(|(u, v)| u.scale(a).add(&v.scale(b)))
                    .collect::<Result<_>>()?,
            ),
            (Payload::Rect(x), Payload::Rect(y)) => Payload::Rect(
                x.iter().zip(y).map(|(u, v)| &u.scale(a) + &v.scale(b)).collect(),
            ),
            (Payload::Bundle(x), Payload::Bundle(y)) => Payload::Bundle(
                x.iter()
                    .zip(y)
                    .map(|(u, v)| u.iter().zip(v).map(|(p, q)| a * p + b * q).collect())
                    .collect(),
            ),
            _ => unreachable!("payload matches space"),
        };
        Ok(Self {
            space: self.space.clone(),
            payload,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, C64::new(1.0, 0.0), C64::new(-1.0, 0.0))
    }

    /// `a·self + b·other` for real `a, b`.
    pub fn lincomb(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.combine(other, C64::new(a, 0.0), C64::new(b, 0.0))
    }

    pub fn scale(&self, c: C64) -> Self {
        let payload = match &self.payload {
            Payload::Algebra(x) => Payload::Algebra(x.iter().map(|u| u.scale(c)).collect()),
            Payload::Rect(x) => Payload::Rect(x.iter().map(|u| u.scale(c)).collect()),
            Payload::Bundle(x) => {
                Payload::Bundle(x.iter().map(|u| u.iter().map(|p| c * p).collect()).collect())
            }
        };
        Self {
            space: self.space.clone(),
            payload,
        }
    }

    pub fn scale_real(&self, r: f64) -> Self {
        self.scale(C64::new(r, 0.0))
    }

    /// Largest component norm of `self − other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_component_norm())
    }

    pub fn max_component_norm(&self) -> f64 {
        match &self.payload {
            Payload::Algebra(x) => x.iter().map(AlgebraElement::frobenius_norm).fold(0.0, f64::max),
            Payload::Rect(x) => x.iter().map(ComplexMatrix::frobenius_norm).fold(0.0, f64::max),
            Payload::Bundle(x) => x
                .iter()
                .map(|u| u.iter().map(|p| p.norm_sqr()).sum::<f64>().sqrt())
                .fold(0.0, f64::max),
        }
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * s, im * s)
}

/// The A-valued inner product, conjugate-linear in `x` and linear in `y`.
pub fn inner(x: &ModuleElement, y: &ModuleElement) -> Result<AlgebraElement> {
    x.space.ensure_same(&y.space, "inner product")?;
    let shape = &x.space.algebra;
    match (&x.payload, &y.payload) {
        (Payload::Algebra(xs), Payload::Algebra(ys)) => {
            let mut acc = AlgebraElement::zero(shape);
            for (a, b) in xs.iter().zip(ys) {
                acc = acc.add(&a.adjoint().mul(b)?)?;
            }
            Ok(acc)
        }
        (Payload::Rect(ts), Payload::Rect(ss)) => {
            let d = shape.block_dims()[0];
            let mut acc = ComplexMatrix::zeros(d, d);
            for (t, s) in ts.iter().zip(ss) {
                acc = &acc + &(&t.adjoint() * s);
            }
            AlgebraElement::new(shape.clone(), vec![acc])
        }
        (Payload::Bundle(phi), Payload::Bundle(psi)) => {
            // ⟨φ, ψ⟩(t) = ⟨ψ(t) | φ(t)⟩_t = Σ ψ(t)ⱼ conj(φ(t)ⱼ)
            let values: Vec<C64> = phi
                .iter()
                .zip(psi)
                .map(|(u, v)| v.iter().zip(u).map(|(p, q)| p * q.conj()).sum())
                .collect();
            AlgebraElement::central(shape, &values)
        }
        _ => unreachable!("payload matches space"),
    }
}

/// `⟨x, x⟩ = |x|²`.
pub fn abs_sq(x: &ModuleElement) -> AlgebraElement {
    inner(x, x).expect("same space")
}

/// Right module action `x·a`.
pub fn act(x: &ModuleElement, a: &AlgebraElement) -> Result<ModuleElement> {
    if a.shape() != &x.space.algebra {
        return Err(Error::ShapeMismatch(format!(
            "acting on {} with an element of {}",
            x.space.label(),
            a.shape()
        )));
    }
    let payload = match &x.payload {
        Payload::Algebra(xs) => Payload::Algebra(xs.iter().map(|u| u.mul(a)).collect::<Result<_>>()?),
        Payload::Rect(ts) => Payload::Rect(ts.iter().map(|t| t * a.block(0)).collect()),
        Payload::Bundle(phi) => {
            let f = a.central_values();
            Payload::Bundle(
                phi.iter()
                    .zip(f)
                    .map(|(u, ft)| u.iter().map(|p| p * ft).collect())
                    .collect(),
            )
        }
    };
    Ok(ModuleElement {
        space: x.space.clone(),
        payload,
    })
}

/// `|x| = ⟨x, x⟩^{1/2}`.
pub fn mod_abs(x: &ModuleElement) -> Result<AlgebraElement> {
    abs_sq(x).sqrt_psd()
}

/// `‖x‖ = ‖⟨x, x⟩‖^{1/2}`.
pub fn mod_norm(x: &ModuleElement) -> f64 {
    abs_sq(x).norm().sqrt()
}

/// Largest relative residual observed for each inner-product axiom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub space: String,
    pub trials: usize,
    /// `max(0, −λ_min⟨x,x⟩) / ‖⟨x,x⟩‖`.
    pub positivity: f64,
    /// `‖⟨0,0⟩‖`, or 1 if some nonzero `x` had `⟨x,x⟩ = 0`.
    pub definiteness: f64,
    /// `⟨x, y + λz⟩ = ⟨x,y⟩ + λ⟨x,z⟩`.
    pub linearity: f64,
    /// `⟨x, ya⟩ = ⟨x,y⟩a`.
    pub module_compatibility: f64,
    /// `⟨x,y⟩* = ⟨y,x⟩`.
    pub adjoint_symmetry: f64,
}

impl AxiomReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.positivity,
            self.definiteness,
            self.linearity,
            self.module_compatibility,
            self.adjoint_symmetry,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

pub fn check_module_axioms(space: &ModuleSpace, trials: usize, seed: u64) -> Result<AxiomReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let zero = ModuleElement::zero(space);
    let mut report = AxiomReport {
        space: space.label(),
        trials,
        positivity: 0.0,
        definiteness: abs_sq(&zero).frobenius_norm(),
        linearity: 0.0,
        module_compatibility: 0.0,
        adjoint_symmetry: 0.0,
    };
    for _ in 0..trials {
        let x = ModuleElement::random(space, &mut rng);
        let y = ModuleElement::random(space, &mut rng);
        let z = ModuleElement::random(space, &mut rng);
        let lambda = gaussian(&mut rng);
        let a = AlgebraElement::random(space.algebra(), &mut rng);

        let xx = abs_sq(&x);
        let scale = xx.norm();
        report.positivity = report
            .positivity
            .max(rel((-xx.min_eigenvalue()?).max(0.0), scale));
        if x.max_component_norm() > 0.0 && scale == 0.0 {
            report.definiteness = 1.0;
        }

        let xy = inner(&x, &y)?;
        let xz = inner(&x, &z)?;
        let lhs = inner(&x, &y.add(&z.scale(lambda))?)?;
        let rhs = xy.add(&xz.scale(lambda))?;
        report.linearity = report.linearity.max(rel(
            lhs.distance(&rhs)?,
            xy.frobenius_norm() + lambda.norm() * xz.frobenius_norm(),
        ));

        let lhs = inner(&x, &act(&y, &a)?)?;
        let rhs = xy.mul(&a)?;
        report.module_compatibility = report
            .module_compatibility
            .max(rel(lhs.distance(&rhs)?, rhs.frobenius_norm()));

        let yx = inner(&y, &x)?;
        report.adjoint_symmetry = report
            .adjoint_symmetry
            .max(rel(xy.adjoint().distance(&yx)?, xy.frobenius_norm()));
    }
    Ok(report)
}
