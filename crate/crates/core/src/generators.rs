//! Seeded construction of hypothesis-satisfying instances.
//!
//! Every constrained family is a function of one spectral frame: per algebra
//! block a Haar unitary `U` and per eigen-index values chosen on the relevant
//! conic or ellipsoid, so `f(H) = U diag(f) U*`. The hypotheses then hold by
//! spectral calculus up to rounding, and each generator re-validates its
//! output before returning it.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::instance::{self, HypothesisReport};
use crate::matrix::{self, ComplexMatrix, C64};
use crate::module::{ModuleElement, ModuleKind, ModuleSpace, Payload};
use crate::operators::AdjointableOp;

/// Generator outputs must meet this before they are returned.
pub const GENERATOR_TOLERANCE: f64 = 1e-12;

/// Numerical guards on the parameter regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Guards {
    /// `p ≥ 1 + eps_p`.
    pub eps_p: f64,
    /// Smallest admissible weight.
    pub w_min: f64,
    /// `λ_min(I − tₙ|Tₙ|²) ≥ delta`.
    pub delta: f64,
    /// `|f₁| ≥ phi_min` on the spectrum, so `T₁` is invertible.
    pub phi_min: f64,
    /// Rejection-sampling budget per draw.
    pub retries: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Self {
            eps_p: 0.05,
            w_min: 0.02,
            delta: 0.05,
            phi_min: 0.1,
            retries: 32,
        }
    }
}

impl Guards {
    pub fn validate(&self) -> Result<()> {
        let in_range = |v: f64, lo: f64, hi: f64| v.is_finite() && v > lo && v <= hi;
        if !in_range(self.eps_p, 0.0, 1.0) {
            return Err(Error::InvalidParameter(format!("eps_p {} outside (0, 1]", self.eps_p)));
        }
        if !in_range(self.w_min, 0.0, 0.2) {
            return Err(Error::InvalidParameter(format!("w_min {} outside (0, 0.2]", self.w_min)));
        }
        if !in_range(self.delta, 0.0, 0.5) {
            return Err(Error::InvalidParameter(format!("delta {} outside (0, 0.5]", self.delta)));
        }
        if !in_range(self.phi_min, 0.0, 0.5) {
            return Err(Error::InvalidParameter(format!("phi_min {} outside (0, 0.5]", self.phi_min)));
        }
        if self.retries == 0 {
            return Err(Error::InvalidParameter("retries must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl RealTriple {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(Error::InvalidParameter("non-finite triple".into()));
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// Random signs and magnitudes in `[0.3, 3]`, with `γ` placed so that
    /// the conic passes through a Gaussian point.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut coeff = || {
            let m = rng.random_range(0.3..3.0);
            if rng.random_bool(0.5) {
                m
            } else {
                -m
            }
        };
        let (alpha, beta) = (coeff(), coeff());
        let u: f64 = rng.sample(StandardNormal);
        let v: f64 = rng.sample(StandardNormal);
        Self {
            alpha,
            beta,
            gamma: alpha * u * u + beta * v * v,
        }
    }

    /// Whether `αu² + βv² = γ` has a real point.
    pub fn is_feasible(&self) -> bool {
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        if g == 0.0 {
            return true;
        }
        a * g > 0.0 || b * g > 0.0
    }

    fn infeasible(&self) -> Error {
        Error::InfeasibleConic {
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
        }
    }

    /// A random real point on `αu² + βv² = γ`.
    pub fn conic_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(f64, f64)> {
        if !self.is_feasible() {
            return Err(self.infeasible());
        }
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        let sign = |rng: &mut R| if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let free = |rng: &mut R| rng.random_range(-2.0..2.0);
        let point = match (a == 0.0, b == 0.0) {
            (true, true) => (free(rng), free(rng)),
            (true, false) => (free(rng), sign(rng) * (g / b).sqrt()),
            (false, true) => (sign(rng) * (g / a).sqrt(), free(rng)),
            (false, false) if a.signum() == b.signum() => {
                // ellipse (g has the common sign, or g = 0 and only the origin)
                let theta = rng.random_range(0.0..std::f64::consts::TAU);
                ((g / a).sqrt() * theta.cos(), (g / b).sqrt() * theta.sin())
            }
            (false, false) => {
                let s = rng.random_range(-1.5..1.5);
                if g == 0.0 {
                    let r = rng.random_range(-1.5..1.5);
                    (r / a.abs().sqrt(), sign(rng) * r / b.abs().sqrt())
                } else if a * g > 0.0 {
                    (sign(rng) * (g / a).sqrt() * f64::cosh(s), (-g / b).sqrt() * f64::sinh(s))
                } else {
                    ((-g / a).sqrt() * f64::sinh(s), sign(rng) * (g / b).sqrt() * f64::cosh(s))
                }
            }
        };
        Ok(point)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugatePair {
    pub p: f64,
    pub q: f64,
}

impl ConjugatePair {
    pub fn new(p: f64, guards: &Guards) -> Result<Self> {
        if !p.is_finite() || p < 1.0 + guards.eps_p {
            return Err(Error::InvalidParameter(format!(
                "exponent p = {p} below the guard 1 + {}",
                guards.eps_p
            )));
        }
        Ok(Self { p, q: p / (p - 1.0) })
    }

    pub fn conjugacy_defect(&self) -> f64 {
        (1.0 / self.p + 1.0 / self.q - 1.0).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    t: Vec<f64>,
}

impl WeightVector {
    pub fn new(t: Vec<f64>, w_min: f64) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::InvalidParameter("empty weight vector".into()));
        }
        if t.iter().any(|&w| !w.is_finite() || w < w_min) {
            return Err(Error::InvalidParameter(format!("weight below {w_min}")));
        }
        let sum: f64 = t.iter().sum();
        if (sum - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidParameter(format!("weights sum to {sum}")));
        }
        Ok(Self { t })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("empty weight vector".into()));
        }
        Ok(Self { t: vec![1.0 / n as f64; n] })
    }

    /// `tᵢ = w_min + (1 − n·w_min)·eᵢ/Σe` with exponential `eᵢ`.
    pub fn random<R: Rng + ?Sized>(n: usize, w_min: f64, rng: &mut R) -> Result<Self> {
        if n == 0 || n as f64 * w_min >= 1.0 {
            return Err(Error::InvalidParameter(format!("{n} weights with floor {w_min}")));
        }
        let e: Vec<f64> = (0..n).map(|_| -rng.random_range(f64::EPSILON..1.0).ln()).collect();
        let total: f64 = e.iter().sum();
        let spare = 1.0 - n as f64 * w_min;
        let mut t: Vec<f64> = e.iter().map(|x| w_min + spare * x / total).collect();
        let sum: f64 = t.iter().sum();
        let last = t.len() - 1;
        t[last] += 1.0 - sum;
        Self::new(t, w_min)
    }

    /// Bypasses validation; used to build deliberately broken instances.
    pub fn unchecked(t: Vec<f64>) -> Self {
        Self { t }
    }

    pub fn weights(&self) -> &[f64] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// `U diag(values) U*`.
pub(crate) fn spectral(u: &ComplexMatrix, values: &[C64]) -> ComplexMatrix {
    let n = values.len();
    let d = ComplexMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { C64::new(0.0, 0.0) });
    &(u * &d) * &u.adjoint()
}

fn real(values: &[f64]) -> Vec<C64> {
    values.iter().map(|&v| C64::new(v, 0.0)).collect()
}

fn unit_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return w.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

fn ensure(report: HypothesisReport, what: &str) -> Result<()> {
    match report.worst_violation(GENERATOR_TOLERANCE) {
        None => Ok(()),
        Some(v) => Err(Error::Validation(format!("{what}: {v}"))),
    }
}

/// `(T, S)` on a tuple module with `T*S` self-adjoint and
/// `αT*T + βS*S = γI`: `T = W f(H)`, `S = W g(H)` blockwise in `M_k(A)`.
pub fn gen_constrained_pair<R: Rng + ?Sized>(
    space: &ModuleSpace,
    triple: &RealTriple,
    rng: &mut R,
) -> Result<(AdjointableOp, AdjointableOp)> {
    if !triple.is_feasible() {
        return Err(triple.infeasible());
    }
    let k = space
        .tuple_len()
        .ok_or_else(|| Error::UnsupportedForm(format!("operator pair on {}", space.label())))?;
    let flat_shape = space.algebra().amplified(k)?;
    let mut t_blocks = Vec::new();
    let mut s_blocks = Vec::new();
    for &n in flat_shape.block_dims() {
        let u = matrix::random_unitary_with(n, rng)?;
        let w = matrix::random_unitary_with(n, rng)?;
        let (fu, gv): (Vec<f64>, Vec<f64>) =
            (0..n).map(|_| triple.conic_point(rng)).collect::<Result<Vec<_>>>()?.into_iter().unzip();
        t_blocks.push(&w * &spectral(&u, &real(&fu)));
        s_blocks.push(&w * &spectral(&u, &real(&gv)));
    }
    let t = AdjointableOp::from_flat(space, &AlgebraElement::new(flat_shape.clone(), t_blocks)?)?;
    let s = AdjointableOp::from_flat(space, &AlgebraElement::new(flat_shape, s_blocks)?)?;
    ensure(instance::operator_pair_hypotheses(triple, &t, &s), "constrained pair")?;
    Ok((t, s))
}

/// Central `a, b` with `a*b` self-adjoint and `αa*a + βb*b = γe`; each block
/// value carries a shared random phase.
pub fn gen_central_pair<R: Rng + ?Sized>(
    shape: &AlgebraShape,
    triple: &RealTriple,
    rng: &mut R,
) -> Result<(AlgebraElement, AlgebraElement)> {
    let mut av = Vec::new();
    let mut bv = Vec::new();
    for _ in 0..shape.block_count() {
        let (u, v) = triple.conic_point(rng)?;
        let z = phase(rng);
        av.push(z * u);
        bv.push(z * v);
    }
    let a = AlgebraElement::central(shape, &av)?;
    let b = AlgebraElement::central(shape, &bv)?;
    ensure(instance::central_pair_hypotheses(triple, &a, &b), "central pair")?;
    Ok((a, b))
}

/// `x, y ∈ X` with `⟨x, y⟩` self-adjoint and `α⟨x,x⟩ + β⟨y,y⟩ = γe`.
///
/// Tuple modules get `xᵢ = Vᵢ fᵢ(H)`, `yᵢ = Vᵢ gᵢ(H)` with per-component
/// unitaries `Vᵢ`, the conic point of each eigen-index spread over the
/// components by random unit vectors. Rectangular tuples stack as
/// `V f(H)` for an isometry `V`; bundles take a conic point per base point.
pub fn gen_module_pair<R: Rng + ?Sized>(
    space: &ModuleSpace,
    triple: &RealTriple,
    rng: &mut R,
) -> Result<(ModuleElement, ModuleElement)> {
    if !triple.is_feasible() {
        return Err(triple.infeasible());
    }
    let (x, y) = match space.kind() {
        ModuleKind::RectTuple { n, m, d } => {
            let (n, m, d) = (*n, *m, *d);
            if n * m < d {
                return Err(Error::InvalidParameter(format!(
                    "rect tuple ({n}, {m}, {d}) has no isometry into its stack"
                )));
            }
            let v = matrix::random_isometry(n * m, d, rng)?;
            let u = matrix::random_unitary_with(d, rng)?;
            let (fu, gv): (Vec<f64>, Vec<f64>) =
                (0..d).map(|_| triple.conic_point(rng)).collect::<Result<Vec<_>>>()?.into_iter().unzip();
            let ts = &v * &spectral(&u, &real(&fu));
            let ss = &v * &spectral(&u, &real(&gv));
            let split = |stack: &ComplexMatrix| (0..n).map(|i| stack.block(i * m, 0, m, d)).collect();
            (
                ModuleElement::new(space.clone(), Payload::Rect(split(&ts)))?,
                ModuleElement::new(space.clone(), Payload::Rect(split(&ss)))?,
            )
        }
        ModuleKind::Bundle { fiber_dims } => {
            let mut phi = Vec::new();
            let mut psi = Vec::new();
            for &d in fiber_dims {
                let (u, v) = triple.conic_point(rng)?;
                let w: Vec<C64> = {
                    let re = unit_vector(2 * d, rng);
                    (0..d).map(|j| C64::new(re[2 * j], re[2 * j + 1])).collect()
                };
                phi.push(w.iter().map(|z| z * u).collect());
                psi.push(w.iter().map(|z| z * v).collect());
            }
            (
                ModuleElement::new(space.clone(), Payload::Bundle(phi))?,
                ModuleElement::new(space.clone(), Payload::Bundle(psi))?,
            )
        }
        _ => {
            let len = space.tuple_len().expect("tuple family");
            let shape = space.algebra();
            let mut xs: Vec<Vec<ComplexMatrix>> = vec![Vec::new(); len];
            let mut ys: Vec<Vec<ComplexMatrix>> = vec![Vec::new(); len];
            for &n in shape.block_dims() {
                let u = matrix::random_unitary_with(n, rng)?;
                let twists = (0..len)
                    .map(|_| matrix::random_unitary_with(n, rng))
                    .collect::<Result<Vec<_>>>()?;
                let mut f = vec![vec![C64::new(0.0, 0.0); n]; len];
                let mut g = f.clone();
                for j in 0..n {
                    let (uj, vj) = triple.conic_point(rng)?;
                    let omega = unit_vector(len, rng);
                    let nu = unit_vector(len, rng);
                    for i in 0..len {
                        f[i][j] = C64::new(uj * omega[i], 0.0);
                        g[i][j] = C64::new(vj * nu[i], 0.0);
                    }
                }
                for i in 0..len {
                    xs[i].push(&twists[i] * &spectral(&u, &f[i]));
                    ys[i].push(&twists[i] * &spectral(&u, &g[i]));
                }
            }
            let build = |parts: Vec<Vec<ComplexMatrix>>| -> Result<ModuleElement> {
                let parts = parts
                    .into_iter()
                    .map(|blocks| AlgebraElement::new(shape.clone(), blocks))
                    .collect::<Result<Vec<_>>>()?;
                ModuleElement::tuple(space.clone(), parts)
            };
            (build(xs)?, build(ys)?)
        }
    };
    ensure(instance::module_pair_hypotheses(triple, &x, &y)?, "module pair")?;
    Ok((x, y))
}

/// `gen_module_pair` on `ℓ₂(A)` truncated to length `L`.
pub fn gen_l2_pair<R: Rng + ?Sized>(
    space: &ModuleSpace,
    triple: &RealTriple,
    rng: &mut R,
) -> Result<(ModuleElement, ModuleElement)> {
    if !matches!(space.kind(), ModuleKind::SeqModule { .. }) {
        return Err(Error::SpaceMismatch(format!("{} is not a sequence module", space.label())));
    }
    gen_module_pair(space, triple, rng)
}

/// Real `f, g` on the base with `αf(t)² + βg(t)² = γ` pointwise.
pub fn gen_bundle_instance<R: Rng + ?Sized>(
    space: &ModuleSpace,
    triple: &RealTriple,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let ModuleKind::Bundle { fiber_dims } = space.kind() else {
        return Err(Error::SpaceMismatch(format!("{} is not a bundle module", space.label())));
    };
    let points = fiber_dims
        .iter()
        .map(|_| triple.conic_point(rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(points.into_iter().unzip())
}

/// Rows `f ∈ ℝⁿ` with `Σ tᵢfᵢ² = 1`, `|f₁| ≥ φ_min` and `1 − tₙfₙ² ≥ δ`.
fn ellipsoid_point<R: Rng + ?Sized>(weights: &[f64], guards: &Guards, rng: &mut R) -> Result<Vec<f64>> {
    let n = weights.len();
    for _ in 0..guards.retries {
        let w = unit_vector(n, rng);
        let f: Vec<f64> = w.iter().zip(weights).map(|(wi, ti)| wi / ti.sqrt()).collect();
        if n == 2 || (f[0].abs() >= guards.phi_min && 1.0 - weights[n - 1] * f[n - 1] * f[n - 1] >= guards.delta) {
            return Ok(f);
        }
    }
    Err(Error::SamplingExhausted(guards.retries))
}

/// `T₁, …, Tₙ` on a tuple module with `T₁*T₂` self-adjoint and
/// `Σ tᵢ|Tᵢ|² = I`; for `n ≥ 3` also `T₃, …, Tₙ` self-adjoint, all
/// `Tᵢ|Tⱼ| = |Tⱼ|Tᵢ`, `T₁` invertible and `I − tₙ|Tₙ|² ≥ δ`.
///
/// `n = 2` uses the left-twisted pair of [`gen_constrained_pair`]; larger
/// families are `fᵢ(H)` with `T₁, T₂` sharing a unitary phase function.
pub fn gen_bohrn_family<R: Rng + ?Sized>(
    space: &ModuleSpace,
    weights: &WeightVector,
    guards: &Guards,
    rng: &mut R,
) -> Result<Vec<AdjointableOp>> {
    let t = weights.weights();
    let n = t.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("family of {n} operators")));
    }
    if n == 2 {
        let triple = RealTriple::new(t[0], t[1], 1.0)?;
        let (a, b) = gen_constrained_pair(space, &triple, rng)?;
        return Ok(vec![a, b]);
    }
    let k = space
        .tuple_len()
        .ok_or_else(|| Error::UnsupportedForm(format!("operator family on {}", space.label())))?;
    let flat_shape = space.algebra().amplified(k)?;
    let mut blocks: Vec<Vec<ComplexMatrix>> = vec![Vec::new(); n];
    for &dim in flat_shape.block_dims() {
        let u = matrix::random_unitary_with(dim, rng)?;
        let mut values = vec![vec![C64::new(0.0, 0.0); dim]; n];
        for j in 0..dim {
            let f = ellipsoid_point(t, guards, rng)?;
            let z = phase(rng);
            for i in 0..n {
                values[i][j] = if i < 2 { z * f[i] } else { C64::new(f[i], 0.0) };
            }
        }
        for i in 0..n {
            blocks[i].push(spectral(&u, &values[i]));
        }
    }
    let ops = blocks
        .into_iter()
        .map(|b| AdjointableOp::from_flat(space, &AlgebraElement::new(flat_shape.clone(), b)?))
        .collect::<Result<Vec<_>>>()?;
    ensure(instance::bohrn_hypotheses(weights, &ops, guards)?, "bohrn family")?;
    Ok(ops)
}

/// Central analogue of [`gen_bohrn_family`].
pub fn gen_bohrncor_family<R: Rng + ?Sized>(
    shape: &AlgebraShape,
    weights: &WeightVector,
    guards: &Guards,
    rng: &mut R,
) -> Result<Vec<AlgebraElement>> {
    let t = weights.weights();
    let n = t.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("family of {n} elements")));
    }
    let mut values = vec![Vec::new(); n];
    for _ in 0..shape.block_count() {
        let f = ellipsoid_point(t, guards, rng)?;
        let z = phase(rng);
        for i in 0..n {
            values[i].push(if i < 2 { z * f[i] } else { C64::new(f[i], 0.0) });
        }
    }
    let elems = values
        .iter()
        .map(|v| AlgebraElement::central(shape, v))
        .collect::<Result<Vec<_>>>()?;
    ensure(instance::bohrncor_hypotheses(weights, &elems, guards), "bohrncor family")?;
    Ok(elems)
}
