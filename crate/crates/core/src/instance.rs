//! Theorem instances and the from-scratch hypothesis validator.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::error::Result;
use crate::generators::{ConjugatePair, Guards, RealTriple, WeightVector};
use crate::matrix::ComplexMatrix;
use crate::module::{self, ModuleElement, ModuleKind, ModuleSpace};
use crate::operators::AdjointableOp;
use crate::theorem::TheoremId;

/// An instance is admissible iff every hypothesis residual is at most this.
pub const ADMISSIBILITY_TOLERANCE: f64 = 1e-10;

/// Singular values below this fraction of the norm count as non-invertible.
const INVERTIBILITY_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceData {
    /// `T, S` with `T*S` self-adjoint and `αT*T + βS*S = γI`.
    OperatorPair {
        triple: RealTriple,
        t: AdjointableOp,
        s: AdjointableOp,
    },
    /// `x, y` with `⟨x,y⟩` self-adjoint and `α|x|² + β|y|² = γe`.
    ModulePair {
        triple: RealTriple,
        x: ModuleElement,
        y: ModuleElement,
    },
    /// Central `a, b` with `a*b` self-adjoint and `αa*a + βb*b = γe`.
    CentralPair {
        triple: RealTriple,
        a: AlgebraElement,
        b: AlgebraElement,
    },
    /// Real `f, g` on the base of a bundle with `αf² + βg² = γ`.
    BundlePair {
        triple: RealTriple,
        space: ModuleSpace,
        f: Vec<f64>,
        g: Vec<f64>,
    },
    Conjugate {
        pair: ConjugatePair,
    },
    OperatorFamily {
        weights: WeightVector,
        ops: Vec<AdjointableOp>,
    },
    CentralFamily {
        weights: WeightVector,
        elems: Vec<AlgebraElement>,
    },
    MatrixFamily {
        weights: WeightVector,
        mats: Vec<ComplexMatrix>,
    },
}

/// Hypothesis data plus the vectors the statement is evaluated at: `x, y`
/// for the two-vector statements, `a, b ∈ A` (as elements of `A` over
/// itself) for the coefficient forms, `x₁, …, xₙ` for the families.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremInstance {
    pub theorem: TheoremId,
    pub seed: u64,
    pub guards: Guards,
    pub data: InstanceData,
    pub vectors: Vec<ModuleElement>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct HypothesisReport {
    /// Relative residuals; admissible when all are small.
    pub residuals: BTreeMap<String, f64>,
    /// Qualitative requirements (sign constraints, invertibility, shapes).
    pub conditions: BTreeMap<String, bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Residual(String, f64),
    Condition(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Residual(name, r) => write!(f, "{name} residual {r:.3e}"),
            Violation::Condition(name) => write!(f, "{name} fails"),
        }
    }
}

impl HypothesisReport {
    fn residual(&mut self, name: &str, value: f64) {
        let value = if value.is_nan() { f64::INFINITY } else { value };
        self.residuals.insert(name.to_owned(), value);
    }

    fn condition(&mut self, name: &str, ok: bool) {
        self.conditions.insert(name.to_owned(), ok);
    }

    fn merge(&mut self, other: HypothesisReport) {
        self.residuals.extend(other.residuals);
        self.conditions.extend(other.conditions);
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }

    pub fn violations(&self, tol: f64) -> Vec<Violation> {
        let mut out: Vec<Violation> = self
            .conditions
            .iter()
            .filter(|(_, ok)| !**ok)
            .map(|(name, _)| Violation::Condition(name.clone()))
            .collect();
        out.extend(
            self.residuals
                .iter()
                .filter(|(_, r)| **r > tol)
                .map(|(name, r)| Violation::Residual(name.clone(), *r)),
        );
        out
    }

    pub fn worst_violation(&self, tol: f64) -> Option<Violation> {
        self.violations(tol).into_iter().next()
    }

    pub fn is_admissible(&self) -> bool {
        self.violations(ADMISSIBILITY_TOLERANCE).is_empty()
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// `‖m − m*‖` relative to `scale`.
fn sa_residual(m: &AlgebraElement, scale: f64) -> f64 {
    rel(m.self_adjoint_defect(), scale.max(m.frobenius_norm()))
}

/// `‖α·aa + β·bb − γe‖` relative to the size of its terms.
fn constraint_residual(triple: &RealTriple, aa: &AlgebraElement, bb: &AlgebraElement) -> Result<f64> {
    let e = AlgebraElement::unit(aa.shape());
    let lhs = aa.scale_real(triple.alpha).add(&bb.scale_real(triple.beta))?;
    let rhs = e.scale_real(triple.gamma);
    let scale = triple.alpha.abs() * aa.frobenius_norm()
        + triple.beta.abs() * bb.frobenius_norm()
        + rhs.frobenius_norm();
    Ok(rel(lhs.distance(&rhs)?, scale))
}

fn weights_report(report: &mut HypothesisReport, weights: &WeightVector) {
    report.residual("weights_sum", (weights.weights().iter().sum::<f64>() - 1.0).abs());
    report.condition("weights_positive", weights.weights().iter().all(|&t| t > 0.0));
}

fn is_invertible(a: &AlgebraElement) -> Result<bool> {
    Ok(a.min_singular_value()? > INVERTIBILITY_FLOOR * a.norm().max(1.0))
}

pub fn operator_pair_hypotheses(triple: &RealTriple, t: &AdjointableOp, s: &AdjointableOp) -> HypothesisReport {
    let mut report = HypothesisReport::default();
    let same = t.domain() == s.domain() && t.codomain() == s.codomain();
    report.condition("same_spaces", same);
    if !same {
        return report;
    }
    let flat = |a: &AdjointableOp, b: &AdjointableOp| {
        AdjointableOp::compose(vec![a.adjoint(), b.clone()]).and_then(|op| op.flatten())
    };
    match (flat(t, s), flat(t, t), flat(s, s)) {
        (Ok(ts), Ok(tt), Ok(ss)) => {
            report.condition("representable", true);
            let scale = (tt.frobenius_norm() * ss.frobenius_norm()).sqrt();
            report.residual("t_star_s_self_adjoint", sa_residual(&ts, scale));
            match constraint_residual(triple, &tt, &ss) {
                Ok(r) => report.residual("constraint", r),
                Err(_) => report.condition("constraint_shapes", false),
            }
        }
        _ => report.condition("representable", false),
    }
    report
}

pub fn module_pair_hypotheses(triple: &RealTriple, x: &ModuleElement, y: &ModuleElement) -> Result<HypothesisReport> {
    let mut report = HypothesisReport::default();
    let xy = module::inner(x, y)?;
    let xx = module::abs_sq(x);
    let yy = module::abs_sq(y);
    let scale = (xx.frobenius_norm() * yy.frobenius_norm()).sqrt();
    report.residual("inner_self_adjoint", sa_residual(&xy, scale));
    report.residual("constraint", constraint_residual(triple, &xx, &yy)?);
    Ok(report)
}

pub fn central_pair_hypotheses(triple: &RealTriple, a: &AlgebraElement, b: &AlgebraElement) -> HypothesisReport {
    let mut report = HypothesisReport::default();
    if a.shape() != b.shape() {
        report.condition("same_algebra", false);
        return report;
    }
    report.residual("a_central", rel(a.central_defect(), a.frobenius_norm()));
    report.residual("b_central", rel(b.central_defect(), b.frobenius_norm()));
    let ab = a.adjoint().mul(b).expect("same shape");
    let scale = a.frobenius_norm() * b.frobenius_norm();
    report.residual("a_star_b_self_adjoint", sa_residual(&ab, scale));
    let r = constraint_residual(triple, &a.abs_sq(), &b.abs_sq()).expect("same shape");
    report.residual("constraint", r);
    report
}

pub fn bundle_hypotheses(triple: &RealTriple, space: &ModuleSpace, f: &[f64], g: &[f64]) -> HypothesisReport {
    let mut report = HypothesisReport::default();
    let ModuleKind::Bundle { fiber_dims } = space.kind() else {
        report.condition("bundle_space", false);
        return report;
    };
    let fits = f.len() == fiber_dims.len() && g.len() == fiber_dims.len();
    report.condition("functions_on_base", fits);
    if !fits {
        return report;
    }
    let worst = f
        .iter()
        .zip(g)
        .map(|(fi, gi)| {
            let (a, b, c) = (triple.alpha * fi * fi, triple.beta * gi * gi, triple.gamma);
            rel((a + b - c).abs(), a.abs() + b.abs() + c.abs())
        })
        .fold(0.0, f64::max);
    report.residual("pointwise_constraint", worst);
    report
}

pub fn bohrn_hypotheses(weights: &WeightVector, ops: &[AdjointableOp], guards: &Guards) -> Result<HypothesisReport> {
    let mut report = HypothesisReport::default();
    weights_report(&mut report, weights);
    let n = ops.len();
    let shape_ok = n >= 2
        && n == weights.len()
        && ops.iter().all(|t| t.is_endomorphism() && t.domain() == ops[0].domain());
    report.condition("family_shape", shape_ok);
    if !shape_ok {
        return Ok(report);
    }
    let flats = match ops.iter().map(AdjointableOp::flatten).collect::<Result<Vec<_>>>() {
        Ok(f) => f,
        Err(_) => {
            report.condition("representable", false);
            return Ok(report);
        }
    };
    let t = weights.weights();
    let shape = flats[0].shape().clone();
    let e = AlgebraElement::unit(&shape);

    let mut sum = AlgebraElement::zero(&shape);
    let mut scale = 0.0;
    for (f, ti) in flats.iter().zip(t) {
        let term = f.abs_sq().scale_real(*ti);
        scale += term.frobenius_norm();
        sum = sum.add(&term)?;
    }
    report.residual("normalization", rel(sum.distance(&e)?, scale + e.frobenius_norm()));

    let t12 = flats[0].adjoint().mul(&flats[1])?;
    let s12 = flats[0].frobenius_norm() * flats[1].frobenius_norm();
    report.residual("t1_star_t2_self_adjoint", sa_residual(&t12, s12));

    if n >= 3 {
        let tail = flats[2..]
            .iter()
            .map(|f| rel(f.self_adjoint_defect(), f.frobenius_norm()))
            .fold(0.0, f64::max);
        report.residual("self_adjoint_tail", tail);

        let abs: Vec<AlgebraElement> = flats.iter().map(AlgebraElement::abs).collect::<Result<_>>()?;
        let mut commutation: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let c = flats[i].commutator(&abs[j])?;
                let scale = 2.0 * flats[i].frobenius_norm() * abs[j].norm();
                commutation = commutation.max(rel(c.frobenius_norm(), scale));
            }
        }
        report.residual("commutation", commutation);
        report.condition(
            "t1_or_t2_invertible",
            is_invertible(&flats[0])? || is_invertible(&flats[1])?,
        );
        let p = e.sub(&flats[n - 1].abs_sq().scale_real(t[n - 1]))?;
        report.condition("conditioning", p.hermitian_part().min_eigenvalue()? >= guards.delta);
    }
    Ok(report)
}

pub fn bohrncor_hypotheses(weights: &WeightVector, elems: &[AlgebraElement], _guards: &Guards) -> HypothesisReport {
    let mut report = HypothesisReport::default();
    weights_report(&mut report, weights);
    let n = elems.len();
    let shape_ok = n >= 2 && n == weights.len() && elems.iter().all(|a| a.shape() == elems[0].shape());
    report.condition("family_shape", shape_ok);
    if !shape_ok {
        return report;
    }
    let shape = elems[0].shape();
    let e = AlgebraElement::unit(shape);
    let central = elems
        .iter()
        .map(|a| rel(a.central_defect(), a.frobenius_norm()))
        .fold(0.0, f64::max);
    report.residual("central", central);

    let mut sum = AlgebraElement::zero(shape);
    let mut scale = 0.0;
    for (a, ti) in elems.iter().zip(weights.weights()) {
        let term = a.abs_sq().scale_real(*ti);
        scale += term.frobenius_norm();
        sum = sum.add(&term).expect("same shape");
    }
    report.residual("normalization", rel(sum.distance(&e).expect("same shape"), scale + e.frobenius_norm()));

    let a12 = elems[0].adjoint().mul(&elems[1]).expect("same shape");
    let s12 = elems[0].frobenius_norm() * elems[1].frobenius_norm();
    report.residual("a1_star_a2_self_adjoint", sa_residual(&a12, s12));
    if n >= 3 {
        let tail = elems[2..]
            .iter()
            .map(|a| rel(a.self_adjoint_defect(), a.frobenius_norm()))
            .fold(0.0, f64::max);
        report.residual("self_adjoint_tail", tail);
        let inv = |a: &AlgebraElement| is_invertible(a).unwrap_or(false);
        report.condition("a1_or_a2_invertible", inv(&elems[0]) || inv(&elems[1]));
    }
    report
}

fn vectors_in(report: &mut HypothesisReport, vectors: &[ModuleElement], count: usize, space: &ModuleSpace) {
    report.condition(
        "inputs",
        vectors.len() == count && vectors.iter().all(|v| v.space() == space),
    );
}

/// Recomputes every hypothesis of `inst` from its data alone.
pub fn check_hypotheses(inst: &TheoremInstance) -> HypothesisReport {
    let mut report = HypothesisReport::default();
    let v = &inst.vectors;
    match (inst.theorem, &inst.data) {
        (TheoremId::Prvi | TheoremId::Bohr2, InstanceData::OperatorPair { triple, t, s }) => {
            vectors_in(&mut report, v, 2, t.domain());
            report.merge(operator_pair_hypotheses(triple, t, s));
            if inst.theorem == TheoremId::Bohr2 {
                report.condition("alpha_beta_positive", triple.alpha > 0.0 && triple.beta > 0.0);
                report.residual("alpha_plus_beta", (triple.alpha + triple.beta - 1.0).abs());
                report.residual("gamma_is_one", (triple.gamma - 1.0).abs());
            }
        }
        (TheoremId::Cprvi | TheoremId::L2 | TheoremId::Bhk, InstanceData::ModulePair { triple, x, y }) => {
            let family_ok = match inst.theorem {
                TheoremId::L2 => matches!(x.space().kind(), ModuleKind::SeqModule { .. }),
                TheoremId::Bhk => matches!(x.space().kind(), ModuleKind::RectTuple { .. }),
                _ => true,
            };
            report.condition("module_family", family_ok && x.space() == y.space());
            let coeffs = ModuleSpace::self_module(x.space().algebra().clone());
            vectors_in(&mut report, v, 2, &coeffs);
            match module_pair_hypotheses(triple, x, y) {
                Ok(r) => report.merge(r),
                Err(_) => report.condition("same_spaces", false),
            }
        }
        (TheoremId::EulLagr, InstanceData::CentralPair { triple, a, b }) => {
            let space_ok = v.len() == 2 && v[0].space() == v[1].space() && v[0].space().algebra() == a.shape();
            report.condition("inputs", space_ok);
            report.merge(central_pair_hypotheses(triple, a, b));
        }
        (TheoremId::Bundle, InstanceData::BundlePair { triple, space, f, g }) => {
            vectors_in(&mut report, v, 2, space);
            report.merge(bundle_hypotheses(triple, space, f, g));
        }
        (TheoremId::BohrPq, InstanceData::Conjugate { pair }) => {
            report.condition("inputs", v.len() == 2 && v[0].space() == v[1].space());
            report.condition("p_guard", pair.p.is_finite() && pair.p >= 1.0 + inst.guards.eps_p);
            report.residual("conjugacy", pair.conjugacy_defect());
        }
        (TheoremId::Bohrn, InstanceData::OperatorFamily { weights, ops }) => {
            if let Some(first) = ops.first() {
                vectors_in(&mut report, v, ops.len(), first.domain());
            }
            match bohrn_hypotheses(weights, ops, &inst.guards) {
                Ok(r) => report.merge(r),
                Err(_) => report.condition("representable", false),
            }
        }
        (TheoremId::Bohrncor, InstanceData::CentralFamily { weights, elems }) => {
            let space_ok = v.len() == elems.len()
                && v.iter().all(|x| x.space() == v[0].space())
                && elems.first().is_some_and(|a| v.first().is_some_and(|x| x.space().algebra() == a.shape()));
            report.condition("inputs", space_ok);
            report.merge(bohrncor_hypotheses(weights, elems, &inst.guards));
        }
        (TheoremId::Amqm, InstanceData::MatrixFamily { weights, mats }) => {
            report.residual("weights_sum", (weights.weights().iter().sum::<f64>() - 1.0).abs());
            report.condition("weights_nonnegative", weights.weights().iter().all(|&t| t >= 0.0));
            let n = mats.first().map_or(0, ComplexMatrix::rows);
            report.condition(
                "square_same_size",
                !mats.is_empty()
                    && mats.len() == weights.len()
                    && mats.iter().all(|m| m.rows() == n && m.cols() == n),
            );
        }
        _ => report.condition("data_matches_theorem", false),
    }
    report
}
