//! Per-theorem checkers.
//!
//! Identities report the relative Frobenius residual
//! `‖LHS − RHS‖ / max(‖LHS‖, ‖RHS‖, 1)`; order relations report the Loewner
//! slack `λ_min(RHS − LHS)` together with `‖RHS‖` as its scale. Inadmissible
//! instances are refused rather than evaluated.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::algebra::{self, AlgebraElement};
use crate::error::{Error, Result};
use crate::generators::{ConjugatePair, Guards, RealTriple, WeightVector};
use crate::instance::{self, check_hypotheses, InstanceData, TheoremInstance};
use crate::matrix::{ComplexMatrix, C64};
use crate::module::{self, abs_sq, act, ModuleElement, ModuleSpace, Payload};
use crate::operators::{op_distance, AdjointableOp};
use crate::theorem::{TheoremId, WitnessTarget};

/// Direct and proof-path evaluations must agree to this.
pub const CROSS_ORACLE_TOLERANCE: f64 = 1e-10;

/// Threshold for classifying a conjugate-exponent pair as an equality case.
pub const EQUALITY_TOLERANCE: f64 = 1e-10;

/// Probes used when a proof-path operator does not flatten.
const PROOF_PROBES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub theorem: TheoremId,
    pub seed: u64,
    pub hypothesis_ok: bool,
    /// Present iff the theorem asserts an equality.
    pub identity_residual: Option<f64>,
    /// `λ_min(RHS − LHS)`; present iff the theorem asserts an order relation.
    pub loewner_slack: Option<f64>,
    /// `‖RHS‖`, the scale of `loewner_slack`.
    pub slack_scale: f64,
    /// Auxiliary relative residuals, each expected to vanish.
    pub residuals: BTreeMap<String, f64>,
    /// Auxiliary relative slacks, each expected to be nonnegative.
    pub slacks: BTreeMap<String, f64>,
    /// Auxiliary consistency checks.
    pub flags: BTreeMap<String, bool>,
    /// Diagnostics with no pass/fail meaning.
    pub info: BTreeMap<String, f64>,
    pub witness: Option<(ModuleElement, ModuleElement)>,
    pub notes: String,
}

impl TrialResult {
    fn new(theorem: TheoremId, seed: u64) -> Self {
        Self {
            theorem,
            seed,
            hypothesis_ok: false,
            identity_residual: None,
            loewner_slack: None,
            slack_scale: 0.0,
            residuals: BTreeMap::new(),
            slacks: BTreeMap::new(),
            flags: BTreeMap::new(),
            info: BTreeMap::new(),
            witness: None,
            notes: String::new(),
        }
    }

    /// `loewner_slack / ‖RHS‖` (the raw slack when `RHS = 0`).
    pub fn relative_slack(&self) -> Option<f64> {
        self.loewner_slack.map(|s| relative(s, self.slack_scale))
    }

    /// Every residual `≤ tol`, every slack `≥ −tol`, every flag set.
    pub fn passes(&self, tol: f64) -> bool {
        self.hypothesis_ok
            && self.identity_residual.is_none_or(|r| r <= tol)
            && self.relative_slack().is_none_or(|s| s >= -tol)
            && self.residuals.values().all(|&r| r <= tol)
            && self.slacks.values().all(|&s| s >= -tol)
            && self.flags.values().all(|&f| f)
    }

    fn residual(&mut self, name: &str, value: f64) {
        self.residuals.insert(name.to_owned(), nan_to_inf(value));
    }

    fn slack(&mut self, name: &str, value: f64) {
        self.slacks.insert(name.to_owned(), if value.is_nan() { f64::NEG_INFINITY } else { value });
    }

    fn set_slack(&mut self, lhs: &AlgebraElement, rhs: &AlgebraElement) -> Result<()> {
        let (s, scale) = slack(lhs, rhs)?;
        self.loewner_slack = Some(s);
        self.slack_scale = scale;
        Ok(())
    }
}

fn nan_to_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn relative(value: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        value / scale
    } else {
        value
    }
}

/// `‖lhs − rhs‖_F / max(‖lhs‖_F, ‖rhs‖_F, 1)`.
pub fn identity_residual(lhs: &AlgebraElement, rhs: &AlgebraElement) -> Result<f64> {
    let scale = lhs.frobenius_norm().max(rhs.frobenius_norm()).max(1.0);
    Ok(lhs.distance(rhs)? / scale)
}

/// `(λ_min(rhs − lhs), ‖rhs‖)`.
pub fn slack(lhs: &AlgebraElement, rhs: &AlgebraElement) -> Result<(f64, f64)> {
    let (lhs, rhs) = (lhs.hermitian_part(), rhs.hermitian_part());
    Ok((algebra::loewner_slack(&lhs, &rhs)?, rhs.norm()))
}

/// `λ_min(rhs − lhs) / ‖rhs‖`.
pub fn relative_slack(lhs: &AlgebraElement, rhs: &AlgebraElement) -> Result<f64> {
    let (s, scale) = slack(lhs, rhs)?;
    Ok(relative(s, scale))
}

fn max_eigenvalue(a: &AlgebraElement) -> Result<f64> {
    Ok(-a.hermitian_part().scale_real(-1.0).min_eigenvalue()?)
}

fn module_residual(a: &ModuleElement, b: &ModuleElement) -> Result<f64> {
    let scale = a.max_component_norm().max(b.max_component_norm()).max(1.0);
    Ok(a.distance(b)? / scale)
}

fn pair_of(v: &[ModuleElement]) -> (&ModuleElement, &ModuleElement) {
    (&v[0], &v[1])
}

fn coefficient(v: &ModuleElement) -> &AlgebraElement {
    &v.components().expect("coefficients live in A")[0]
}

/// Both sides of `αβ|Tx+Sy|² + |βSx − αTy|² = βγ|x|² + αγ|y|²`.
pub fn prvi_sides(
    triple: &RealTriple,
    t: &AdjointableOp,
    s: &AdjointableOp,
    x: &ModuleElement,
    y: &ModuleElement,
) -> Result<(AlgebraElement, AlgebraElement)> {
    let RealTriple { alpha, beta, gamma } = *triple;
    let (tx, ty, sx, sy) = (t.apply(x)?, t.apply(y)?, s.apply(x)?, s.apply(y)?);
    let sum = tx.add(&sy)?;
    let diff = sx.lincomb(beta, &ty, -alpha)?;
    let lhs = abs_sq(&sum).scale_real(alpha * beta).add(&abs_sq(&diff))?;
    let rhs = abs_sq(x).scale_real(beta * gamma).add(&abs_sq(y).scale_real(alpha * gamma))?;
    Ok((lhs, rhs))
}

/// Both sides of `αβ|xa+yb|² + |βya − αxb|² = βγ|a|² + αγ|b|²`.
pub fn cprvi_sides(
    triple: &RealTriple,
    x: &ModuleElement,
    y: &ModuleElement,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<(AlgebraElement, AlgebraElement)> {
    let RealTriple { alpha, beta, gamma } = *triple;
    let (xa, xb, ya, yb) = (act(x, a)?, act(x, b)?, act(y, a)?, act(y, b)?);
    let lhs = abs_sq(&xa.add(&yb)?)
        .scale_real(alpha * beta)
        .add(&abs_sq(&ya.lincomb(beta, &xb, -alpha)?))?;
    let rhs = a.abs_sq().scale_real(beta * gamma).add(&b.abs_sq().scale_real(alpha * gamma))?;
    Ok((lhs, rhs))
}

/// Both sides of `αβ|xa+yb|² + |βxb − αya|² = βγ|x|² + αγ|y|²`.
pub fn eul_lagr_sides(
    triple: &RealTriple,
    a: &AlgebraElement,
    b: &AlgebraElement,
    x: &ModuleElement,
    y: &ModuleElement,
) -> Result<(AlgebraElement, AlgebraElement)> {
    let RealTriple { alpha, beta, gamma } = *triple;
    let (xa, xb, ya, yb) = (act(x, a)?, act(x, b)?, act(y, a)?, act(y, b)?);
    let lhs = abs_sq(&xa.add(&yb)?)
        .scale_real(alpha * beta)
        .add(&abs_sq(&xb.lincomb(beta, &ya, -alpha)?))?;
    let rhs = abs_sq(x).scale_real(beta * gamma).add(&abs_sq(y).scale_real(alpha * gamma))?;
    Ok((lhs, rhs))
}

/// Dispatches on the theorem after validating the hypotheses.
pub fn verify(inst: &TheoremInstance) -> Result<TrialResult> {
    let mut res = TrialResult::new(inst.theorem, inst.seed);
    let report = check_hypotheses(inst);
    if !report.is_admissible() {
        let why: Vec<String> = report
            .violations(instance::ADMISSIBILITY_TOLERANCE)
            .iter()
            .map(ToString::to_string)
            .collect();
        res.notes = format!("refused: {}", why.join("; "));
        return Ok(res);
    }
    res.hypothesis_ok = true;
    res.info.insert("hypothesis_max_residual".into(), report.max_residual());
    let v = &inst.vectors;
    match &inst.data {
        InstanceData::OperatorPair { triple, t, s } if inst.theorem == TheoremId::Prvi => {
            verify_prvi(&mut res, triple, t, s, &v[0], &v[1])?
        }
        InstanceData::OperatorPair { triple, t, s } => verify_bohr2(&mut res, triple, t, s, &v[0], &v[1])?,
        InstanceData::ModulePair { triple, x, y } => {
            let (a, b) = (coefficient(&v[0]), coefficient(&v[1]));
            match inst.theorem {
                TheoremId::L2 => verify_l2(&mut res, triple, x, y, a, b)?,
                TheoremId::Bhk => verify_bhk(&mut res, triple, x, y, a, b)?,
                _ => verify_cprvi(&mut res, triple, x, y, a, b)?,
            }
        }
        InstanceData::CentralPair { triple, a, b } => verify_eul_lagr(&mut res, triple, a, b, &v[0], &v[1])?,
        InstanceData::BundlePair { triple, f, g, .. } => verify_bundle(&mut res, triple, f, g, &v[0], &v[1])?,
        InstanceData::Conjugate { pair } => {
            let (x, y) = pair_of(v);
            verify_bohr_pq(&mut res, pair, x, y)?
        }
        InstanceData::OperatorFamily { weights, ops } => verify_bohrn(&mut res, weights, ops, v, &inst.guards)?,
        InstanceData::CentralFamily { weights, elems } => verify_bohrncor(&mut res, weights, elems, v)?,
        InstanceData::MatrixFamily { weights, mats } => verify_amqm(&mut res, weights, mats)?,
    }
    Ok(res)
}

fn verify_prvi(
    res: &mut TrialResult,
    triple: &RealTriple,
    t: &AdjointableOp,
    s: &AdjointableOp,
    x: &ModuleElement,
    y: &ModuleElement,
) -> Result<()> {
    let (lhs, rhs) = prvi_sides(triple, t, s, x, y)?;
    res.identity_residual = Some(identity_residual(&lhs, &rhs)?);
    Ok(())
}

/// Direct evaluation, then the reduction through `T_x(a) = xa`,
/// `T_y(a) = ya` and the operator identity on `A` over itself.
fn verify_cprvi(
    res: &mut TrialResult,
    triple: &RealTriple,
    x: &ModuleElement,
    y: &ModuleElement,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<()> {
    let (lhs, rhs) = cprvi_sides(triple, x, y, a, b)?;
    res.identity_residual = Some(identity_residual(&lhs, &rhs)?);

    let tx = AdjointableOp::ket(x.clone());
    let ty = AdjointableOp::ket(y.clone());
    let proof = instance::operator_pair_hypotheses(triple, &tx, &ty);
    res.flags.insert("proof_hypotheses_representable".into(), proof.conditions.values().all(|&c| c));
    for (name, r) in &proof.residuals {
        res.residual(&format!("proof_{name}"), *r);
    }
    let am = ModuleElement::from_algebra(a.clone());
    let bm = ModuleElement::from_algebra(b.clone());
    let (plhs, prhs) = prvi_sides(triple, &tx, &ty, &am, &bm)?;
    let proof_residual = identity_residual(&plhs, &prhs)?;
    res.residual("proof_identity", proof_residual);
    let cross = identity_residual(&lhs, &plhs)?;
    res.residual("cross_oracle", cross);
    res.flags.insert("cross_oracle_agrees".into(), cross <= CROSS_ORACLE_TOLERANCE);
    Ok(())
}

/// Explicit sums over the sequence components.
fn verify_l2(
    res: &mut TrialResult,
    triple: &RealTriple,
    x: &ModuleElement,
    y: &ModuleElement,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<()> {
    let RealTriple { alpha, beta, gamma } = *triple;
    let (xs, ys) = (x.components().expect("sequence"), y.components().expect("sequence"));
    let shape = a.shape();
    let mut lhs = AlgebraElement::zero(shape);
    for (ai, bi) in xs.iter().zip(ys) {
        let plus = ai.mul(a)?.add(&bi.mul(b)?)?;
        let minus = bi.mul(a)?.scale_real(beta).sub(&ai.mul(b)?.scale_real(alpha))?;
        lhs = lhs.add(&plus.abs_sq().scale_real(alpha * beta))?.add(&minus.abs_sq())?;
    }
    let rhs = a.abs_sq().scale_real(beta * gamma).add(&b.abs_sq().scale_real(alpha * gamma))?;
    res.identity_residual = Some(identity_residual(&lhs, &rhs)?);
    res.info.insert("length".into(), xs.len() as f64);
    Ok(())
}

/// Explicit `d×d` matrix sums over the rectangular components.
fn verify_bhk(
    res: &mut TrialResult,
    triple: &RealTriple,
    x: &ModuleElement,
    y: &ModuleElement,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<()> {
    let RealTriple { alpha, beta, gamma } = *triple;
    let (Payload::Rect(ts), Payload::Rect(ss)) = (x.payload(), y.payload()) else {
        return Err(Error::SpaceMismatch("rectangular tuples expected".into()));
    };
    let (am, bm) = (a.block(0), b.block(0));
    let d = am.rows();
    let mut lhs = ComplexMatrix::zeros(d, d);
    for (ti, si) in ts.iter().zip(ss) {
        let plus = &(ti * am) + &(si * bm);
        let minus = &(si * am).scale_real(beta) - &(ti * bm).scale_real(alpha);
        lhs = &lhs + &(&(&plus.adjoint() * &plus).scale_real(alpha * beta) + &(&minus.adjoint() * &minus));
    }
    let rhs = &(&am.adjoint() * am).scale_real(beta * gamma) + &(&bm.adjoint() * bm).scale_real(alpha * gamma);
    let lhs = AlgebraElement::from_matrix(lhs)?;
    let rhs = AlgebraElement::from_matrix(rhs)?;
    res.identity_residual = Some(identity_residual(&lhs, &rhs)?);
    Ok(())
}

/// Direct evaluation plus the route through `T_a(x) = xa`, `T_b(x) = xb`.
fn verify_eul_lagr(
    res: &mut TrialResult,
    triple: &RealTriple,
    a: &AlgebraElement,
    b: &AlgebraElement,
    x: &ModuleElement,
    y: &ModuleElement,
) -> Result<()> {
    let (lhs, rhs) = eul_lagr_sides(triple, a, b, x, y)?;
    res.identity_residual = Some(identity_residual(&lhs, &rhs)?);

    let space = x.space();
    let ta = AdjointableOp::right_mult(space, a.clone())?;
    let tb = AdjointableOp::right_mult(space, b.clone())?;
    let probe_seed = res.seed ^ 0x5eed;
    let ta_tb = AdjointableOp::compose(vec![ta.adjoint(), tb.clone()])?;
    let tb_ta = AdjointableOp::compose(vec![tb.adjoint(), ta.clone()])?;
    res.residual("proof_t_star_s_self_adjoint", op_distance(&ta_tb, &tb_ta, PROOF_PROBES, probe_seed)?);
    let combo = AdjointableOp::sum(vec![
        AdjointableOp::scale(triple.alpha, AdjointableOp::compose(vec![ta.adjoint(), ta.clone()])?),
        AdjointableOp::scale(triple.beta, AdjointableOp::compose(vec![tb.adjoint(), tb.clone()])?),
    ])?;
    let target = AdjointableOp::scale(triple.gamma, AdjointableOp::identity(space));
    res.residual("proof_constraint", op_distance(&combo, &target, PROOF_PROBES, probe_seed)?);
    // Tx + Sy with T = T_a, S = T_b is xa + yb; the second term is βxb − αya.
    let (plhs, prhs) = prvi_sides(triple, &ta, &tb, x, y)?;
    res.residual("proof_identity", identity_residual(&plhs, &prhs)?);
    res.residual("cross_oracle", identity_residual(&lhs, &plhs)?);
    Ok(())
}

fn fiber_norm_sq(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum()
}

/// Pointwise fiber computation; the supremum over the finite base is a max.
fn verify_bundle(
    res: &mut TrialResult,
    triple: &RealTriple,
    f: &[f64],
    g: &[f64],
    phi: &ModuleElement,
    psi: &ModuleElement,
) -> Result<()> {
    let RealTriple { alpha, beta, gamma } = *triple;
    let (Payload::Bundle(ph), Payload::Bundle(ps)) = (phi.payload(), psi.payload()) else {
        return Err(Error::SpaceMismatch("bundle sections expected".into()));
    };
    let mut pointwise: f64 = 0.0;
    let mut sup_lhs = f64::NEG_INFINITY;
    let mut sup_rhs = f64::NEG_INFINITY;
    let mut lhs_values = Vec::with_capacity(f.len());
    for (t, (u, v)) in ph.iter().zip(ps).enumerate() {
        let plus: Vec<C64> = u.iter().zip(v).map(|(p, q)| p * f[t] + q * g[t]).collect();
        let minus: Vec<C64> = u.iter().zip(v).map(|(p, q)| p * (beta * g[t]) - q * (alpha * f[t])).collect();
        let lhs = alpha * beta * fiber_norm_sq(&plus) + fiber_norm_sq(&minus);
        let rhs = beta * gamma * fiber_norm_sq(u) + alpha * gamma * fiber_norm_sq(v);
        pointwise = pointwise.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0));
        sup_lhs = sup_lhs.max(lhs);
        sup_rhs = sup_rhs.max(rhs);
        lhs_values.push(lhs);
    }
    res.identity_residual = Some((sup_lhs - sup_rhs).abs() / sup_lhs.abs().max(sup_rhs.abs()).max(1.0));
    res.residual("pointwise", pointwise);

    // The same identity through the module operations with a = f, b = g.
    let shape = phi.space().algebra();
    let a = AlgebraElement::central(shape, &f.iter().map(|&r| C64::new(r, 0.0)).collect::<Vec<_>>())?;
    let b = AlgebraElement::central(shape, &g.iter().map(|&r| C64::new(r, 0.0)).collect::<Vec<_>>())?;
    let (mlhs, _) = eul_lagr_sides(triple, &a, &b, phi, psi)?;
    let direct = AlgebraElement::central(shape, &lhs_values.iter().map(|&r| C64::new(r, 0.0)).collect::<Vec<_>>())?;
    res.residual("module_path", identity_residual(&mlhs, &direct)?);
    if f.len() == 1 {
        res.notes = "classical Euler–Lagrange (singleton base)".into();
    }
    Ok(())
}

/// Sides of the conjugate-exponent statements for one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PqSides {
    pub rhs: AlgebraElement,
    /// `|x−y|² + |(1−p)x−y|²`.
    pub lhs_i: AlgebraElement,
    /// `|x−y|² + (1/(p−1))|(1−p)x−y|²`.
    pub lhs_xyp: AlgebraElement,
    /// `|x−y|² + (1/(q−1))|(1−q)y−x|²`.
    pub lhs_q: AlgebraElement,
    /// `|(1−p)x−y|²`.
    pub z_sq: AlgebraElement,
    pub z_norm: f64,
}

pub fn pq_sides(pair: &ConjugatePair, x: &ModuleElement, y: &ModuleElement) -> Result<PqSides> {
    let ConjugatePair { p, q } = *pair;
    let d = abs_sq(&x.sub(y)?);
    let z = x.lincomb(1.0 - p, y, -1.0)?;
    let z_sq = abs_sq(&z);
    let zq_sq = abs_sq(&y.lincomb(1.0 - q, x, -1.0)?);
    let rhs = abs_sq(x).scale_real(p).add(&abs_sq(y).scale_real(q))?;
    Ok(PqSides {
        lhs_i: d.add(&z_sq)?,
        lhs_xyp: d.add(&z_sq.scale_real(1.0 / (p - 1.0)))?,
        lhs_q: d.add(&zq_sq.scale_real(1.0 / (q - 1.0)))?,
        rhs,
        z_norm: module::mod_norm(&z),
        z_sq,
    })
}

/// Whether `(1−p)x = y` or `p = 2`, the predicted equality cases.
fn predicts_equality(pair: &ConjugatePair, x: &ModuleElement, y: &ModuleElement, z_norm: f64) -> bool {
    let scale = ((pair.p - 1.0) * module::mod_norm(x) + module::mod_norm(y)).max(1.0);
    (pair.p - 2.0).abs() <= 1e-12 || z_norm <= EQUALITY_TOLERANCE * scale
}

fn verify_bohr_pq(res: &mut TrialResult, pair: &ConjugatePair, x: &ModuleElement, y: &ModuleElement) -> Result<()> {
    let p = pair.p;
    let sides = pq_sides(pair, x, y)?;
    res.identity_residual = Some(identity_residual(&sides.lhs_xyp, &sides.rhs)?);
    res.residual("q_form", identity_residual(&sides.lhs_q, &sides.rhs)?);

    let gap = sides.rhs.sub(&sides.lhs_i)?;
    let predicted_gap = sides.z_sq.scale_real(1.0 / (p - 1.0) - 1.0);
    let scale = sides.rhs.frobenius_norm().max(sides.lhs_i.frobenius_norm()).max(1.0);
    res.residual("decomposition", gap.distance(&predicted_gap)? / scale);

    let (slack_i, rhs_norm) = slack(&sides.lhs_i, &sides.rhs)?;
    let (slack_ii, _) = slack(&sides.rhs, &sides.lhs_i)?;
    res.info.insert("slack_i".into(), relative(slack_i, rhs_norm));
    res.info.insert("slack_ii".into(), relative(slack_ii, rhs_norm));
    // p ≤ 2 asserts (i); p ≥ 2 asserts (ii).
    res.loewner_slack = Some(if p <= 2.0 { slack_i } else { slack_ii });
    res.slack_scale = rhs_norm;

    let observed = gap.frobenius_norm() <= EQUALITY_TOLERANCE * scale;
    let predicted = predicts_equality(pair, x, y, sides.z_norm);
    res.info.insert("equality".into(), if observed { 1.0 } else { 0.0 });
    res.flags.insert("equality_classification".into(), observed == predicted);

    let margin = EQUALITY_TOLERANCE * rhs_norm.max(1.0);
    if (p > 2.0 && slack_i < -margin) || (p < 2.0 && slack_ii < -margin) {
        res.witness = Some((x.clone(), y.clone()));
    }
    Ok(())
}

fn verify_bohr2(
    res: &mut TrialResult,
    triple: &RealTriple,
    t: &AdjointableOp,
    s: &AdjointableOp,
    x: &ModuleElement,
    y: &ModuleElement,
) -> Result<()> {
    let RealTriple { alpha, beta, .. } = *triple;
    let lhs = abs_sq(&s.apply(x)?.lincomb(beta, &t.apply(y)?, alpha)?);
    let rhs = abs_sq(x).scale_real(beta).add(&abs_sq(y).scale_real(alpha))?;
    res.set_slack(&lhs, &rhs)?;
    // With y ↦ −y the operator identity reads
    // αβ|Tx − Sy|² + |βSx + αTy|² = β|x|² + α|y|².
    let gap = rhs.sub(&lhs)?;
    let predicted = abs_sq(&t.apply(x)?.sub(&s.apply(y)?)?).scale_real(alpha * beta);
    let scale = rhs.frobenius_norm().max(lhs.frobenius_norm()).max(1.0);
    res.residual("gap_identity", gap.distance(&predicted)? / scale);
    Ok(())
}

fn weighted_image(weights: &[f64], ops: &[AdjointableOp], xs: &[ModuleElement]) -> Result<ModuleElement> {
    let mut acc = ModuleElement::zero(ops[0].codomain());
    for ((t, op), x) in weights.iter().zip(ops).zip(xs) {
        acc = acc.add(&op.apply(x)?.scale_real(*t))?;
    }
    Ok(acc)
}

fn weighted_abs_sq(weights: &[f64], xs: &[ModuleElement]) -> Result<AlgebraElement> {
    let mut acc = AlgebraElement::zero(xs[0].space().algebra());
    for (t, x) in weights.iter().zip(xs) {
        acc = acc.add(&abs_sq(x).scale_real(*t))?;
    }
    Ok(acc)
}

fn verify_bohrn(
    res: &mut TrialResult,
    weights: &WeightVector,
    ops: &[AdjointableOp],
    xs: &[ModuleElement],
    guards: &Guards,
) -> Result<()> {
    let t = weights.weights();
    let lhs = abs_sq(&weighted_image(t, ops, xs)?);
    let rhs = weighted_abs_sq(t, xs)?;
    res.set_slack(&lhs, &rhs)?;
    res.info.insert("n".into(), ops.len() as f64);
    if ops.len() >= 3 {
        let replay = replay_induction_step(weights, ops, xs, guards)?;
        replay.record(res);
    }
    Ok(())
}

/// Residuals of one induction step from `n` to `n − 1` operators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayReport {
    /// `|Σ sᵢ − 1|`.
    pub weights_sum: f64,
    /// `Σ sᵢ|Sᵢ|² = I`.
    pub normalization: f64,
    /// `Sᵢ|Sⱼ| = |Sⱼ|Sᵢ` for `i < j ≤ n−1`, worst pair.
    pub commutation: f64,
    /// `S₁*S₂` self-adjoint.
    pub s1_star_s2_self_adjoint: f64,
    /// `(1−tₙ)|W|² + tₙ|Tₙ|² = I`.
    pub uv: f64,
    /// `(1−tₙ)Wy = Σ_{i<n} tᵢTᵢxᵢ`.
    pub pom: f64,
    /// `λ_min(Σ sᵢ|xᵢ|² − |y|²)`, relative.
    pub y_slack: f64,
    /// `λ_min((1−tₙ)|y|² + tₙ|xₙ|² − |(1−tₙ)Wy + tₙTₙxₙ|²)`, relative.
    pub two_term_slack: f64,
}

impl ReplayReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.weights_sum,
            self.normalization,
            self.commutation,
            self.s1_star_s2_self_adjoint,
            self.uv,
            self.pom,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn min_slack(&self) -> f64 {
        self.y_slack.min(self.two_term_slack)
    }

    fn record(&self, res: &mut TrialResult) {
        res.residual("replay_weights_sum", self.weights_sum);
        res.residual("replay_normalization", self.normalization);
        res.residual("replay_commutation", self.commutation);
        res.residual("replay_s1_star_s2_self_adjoint", self.s1_star_s2_self_adjoint);
        res.residual("replay_uv", self.uv);
        res.residual("replay_pom", self.pom);
        res.slack("replay_y", self.y_slack);
        res.slack("replay_two_term", self.two_term_slack);
    }
}

/// Builds `sᵢ = tᵢ/(1−tₙ)`, `Sᵢ = √(1−tₙ)·Tᵢ(I − tₙ|Tₙ|²)^{−1/2}`,
/// `W = (I − tₙ|Tₙ|²)^{1/2}/√(1−tₙ)` and `y = Σ sᵢSᵢxᵢ` on the flattened
/// operators and measures every identity the step relies on.
pub fn replay_induction_step(
    weights: &WeightVector,
    ops: &[AdjointableOp],
    xs: &[ModuleElement],
    guards: &Guards,
) -> Result<ReplayReport> {
    let n = ops.len();
    if n < 3 || xs.len() != n || weights.len() != n {
        return Err(Error::InvalidParameter(format!("induction replay needs n ≥ 3, got {n}")));
    }
    let space = ops[0].domain();
    let t = weights.weights();
    let tn = t[n - 1];
    let c = 1.0 - tn;
    let flats: Vec<AlgebraElement> = ops.iter().map(AdjointableOp::flatten).collect::<Result<_>>()?;
    let shape = flats[0].shape().clone();
    let e = AlgebraElement::unit(&shape);

    let p = e.sub(&flats[n - 1].abs_sq().scale_real(tn))?.hermitian_part();
    let r = p.inv_sqrt_pd(guards.delta)?;
    let s: Vec<f64> = t[..n - 1].iter().map(|ti| ti / c).collect();
    let big_s: Vec<AlgebraElement> = flats[..n - 1]
        .iter()
        .map(|f| f.mul(&r).map(|m| m.scale_real(c.sqrt())))
        .collect::<Result<_>>()?;

    let weights_sum = (s.iter().sum::<f64>() - 1.0).abs();

    let mut norm_sum = AlgebraElement::zero(&shape);
    for (si, op) in s.iter().zip(&big_s) {
        norm_sum = norm_sum.add(&op.abs_sq().scale_real(*si))?;
    }
    let normalization = identity_residual(&norm_sum, &e)?;

    let abs: Vec<AlgebraElement> = big_s.iter().map(AlgebraElement::abs).collect::<Result<_>>()?;
    let mut commutation: f64 = 0.0;
    for i in 0..n - 1 {
        for j in (i + 1)..n - 1 {
            let left = big_s[i].mul(&abs[j])?;
            let right = abs[j].mul(&big_s[i])?;
            commutation = commutation.max(identity_residual(&left, &right)?);
        }
    }

    let s12 = big_s[0].adjoint().mul(&big_s[1])?;
    let s1_star_s2_self_adjoint = identity_residual(&s12, &s12.adjoint())?;

    let w = p.sqrt_psd()?.scale_real(1.0 / c.sqrt());
    let uv_lhs = w.abs_sq().scale_real(c).add(&flats[n - 1].abs_sq().scale_real(tn))?;
    let uv = identity_residual(&uv_lhs, &e)?;

    let s_ops: Vec<AdjointableOp> = big_s
        .iter()
        .map(|m| AdjointableOp::from_flat(space, m))
        .collect::<Result<_>>()?;
    let y = weighted_image(&s, &s_ops, &xs[..n - 1])?;
    let w_op = AdjointableOp::from_flat(space, &w)?;
    let wy = w_op.apply(&y)?.scale_real(c);
    let head = weighted_image(&t[..n - 1], &ops[..n - 1], &xs[..n - 1])?;
    let pom = module_residual(&wy, &head)?;

    let y_slack = relative_slack(&abs_sq(&y), &weighted_abs_sq(&s, &xs[..n - 1])?)?;

    let combined = wy.add(&ops[n - 1].apply(&xs[n - 1])?.scale_real(tn))?;
    let bound = abs_sq(&y).scale_real(c).add(&abs_sq(&xs[n - 1]).scale_real(tn))?;
    let two_term_slack = relative_slack(&abs_sq(&combined), &bound)?;

    Ok(ReplayReport {
        weights_sum,
        normalization,
        commutation,
        s1_star_s2_self_adjoint,
        uv,
        pom,
        y_slack,
        two_term_slack,
    })
}

/// Direct evaluation plus the lift `Tᵢ(x) = xaᵢ`.
fn verify_bohrncor(
    res: &mut TrialResult,
    weights: &WeightVector,
    elems: &[AlgebraElement],
    xs: &[ModuleElement],
) -> Result<()> {
    let t = weights.weights();
    let mut direct = ModuleElement::zero(xs[0].space());
    for ((ti, a), x) in t.iter().zip(elems).zip(xs) {
        direct = direct.add(&act(x, a)?.scale_real(*ti))?;
    }
    let lhs = abs_sq(&direct);
    let rhs = weighted_abs_sq(t, xs)?;
    res.set_slack(&lhs, &rhs)?;

    let space = xs[0].space();
    let lifted: Vec<AdjointableOp> = elems
        .iter()
        .map(|a| AdjointableOp::right_mult(space, a.clone()))
        .collect::<Result<_>>()?;
    let lifted_lhs = abs_sq(&weighted_image(t, &lifted, xs)?);
    let cross = identity_residual(&lhs, &lifted_lhs)?;
    res.residual("lift_cross_oracle", cross);
    res.flags.insert("lift_cross_oracle_agrees".into(), cross <= CROSS_ORACLE_TOLERANCE);
    let lifted_slack = relative_slack(&lifted_lhs, &rhs)?;
    res.info.insert("lift_slack".into(), lifted_slack);

    // ⟨xa, y⟩ = ⟨x, ya*⟩ on the sample vectors
    let mut adjointness: f64 = 0.0;
    for (i, a) in elems.iter().enumerate() {
        let (u, v) = (&xs[i], &xs[(i + 1) % xs.len()]);
        let left = module::inner(&act(u, a)?, v)?;
        let right = module::inner(u, &act(v, &a.adjoint())?)?;
        adjointness = adjointness.max(identity_residual(&left, &right)?);
    }
    res.residual("lift_adjoint", adjointness);
    Ok(())
}

fn verify_amqm(res: &mut TrialResult, weights: &WeightVector, mats: &[ComplexMatrix]) -> Result<()> {
    let n = mats[0].rows();
    let mut mean = ComplexMatrix::zeros(n, n);
    let mut rhs = ComplexMatrix::zeros(n, n);
    for (t, m) in weights.weights().iter().zip(mats) {
        mean = &mean + &m.scale_real(*t);
        rhs = &rhs + &(&m.adjoint() * m).scale_real(*t);
    }
    let lhs = AlgebraElement::from_matrix(&mean.adjoint() * &mean)?;
    let rhs = AlgebraElement::from_matrix(rhs)?;
    res.set_slack(&lhs, &rhs)?;
    Ok(())
}

/// A pair violating one of the one-sided conjugate-exponent inequalities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub target: WitnessTarget,
    pub p: f64,
    pub q: f64,
    pub x: ModuleElement,
    pub y: ModuleElement,
    /// Number of pairs drawn, including this one.
    pub attempts: usize,
    /// `−λ_min` of the side that should be positive.
    pub violation: f64,
    /// The same quantity from `RHS − LHS = (1/(p−1) − 1)|(1−p)x−y|²`.
    pub predicted: f64,
    pub lhs: AlgebraElement,
    pub rhs: AlgebraElement,
}

/// `(violation, predicted)` of `target` at `(x, y)`; a positive violation
/// means the inequality fails.
pub fn witness_violation(
    target: WitnessTarget,
    pair: &ConjugatePair,
    x: &ModuleElement,
    y: &ModuleElement,
) -> Result<(f64, f64)> {
    let sides = pq_sides(pair, x, y)?;
    let violation = match target {
        WitnessTarget::BohrI => -slack(&sides.lhs_i, &sides.rhs)?.0,
        WitnessTarget::BohrII => -slack(&sides.rhs, &sides.lhs_i)?.0,
    };
    let c = 1.0 / (pair.p - 1.0) - 1.0;
    let lo = sides.z_sq.hermitian_part().min_eigenvalue()?;
    let hi = max_eigenvalue(&sides.z_sq)?;
    let (g_lo, g_hi) = ((c * lo).min(c * hi), (c * lo).max(c * hi));
    let predicted = match target {
        WitnessTarget::BohrI => -g_lo,
        WitnessTarget::BohrII => g_hi,
    };
    Ok((violation, predicted))
}

/// Draws up to `budget` random pairs in `space` and returns the first one
/// violating `target` by more than `1e−10·‖RHS‖`.
pub fn witness_search(
    target: WitnessTarget,
    pair: &ConjugatePair,
    space: &ModuleSpace,
    budget: usize,
    seed: u64,
) -> Result<Option<Witness>> {
    if budget == 0 {
        return Err(Error::InvalidParameter("witness budget must be positive".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for attempt in 1..=budget {
        let x = ModuleElement::random(space, &mut rng);
        let y = ModuleElement::random(space, &mut rng);
        let sides = pq_sides(pair, &x, &y)?;
        let (violation, predicted) = witness_violation(target, pair, &x, &y)?;
        let margin = EQUALITY_TOLERANCE * sides.rhs.norm().max(sides.lhs_i.norm()).max(1.0);
        if violation > margin {
            return Ok(Some(Witness {
                target,
                p: pair.p,
                q: pair.q,
                x,
                y,
                attempts: attempt,
                violation,
                predicted,
                lhs: sides.lhs_i,
                rhs: sides.rhs,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraShape;
    use crate::matrix;
    use crate::generators::{gen_bohrn_family, gen_constrained_pair};

    fn scalar(v: f64) -> ModuleElement {
        ModuleElement::from_algebra(AlgebraElement::from_real(v))
    }

    fn scalar_op(v: f64) -> AdjointableOp {
        let space = ModuleSpace::self_module(AlgebraShape::scalars());
        AdjointableOp::matrix_over_a(space, vec![vec![AlgebraElement::from_real(v)]]).unwrap()
    }

    fn value(a: &AlgebraElement) -> f64 {
        a.block(0).get(0, 0).re
    }

    fn instance(theorem: TheoremId, data: InstanceData, vectors: Vec<ModuleElement>) -> TheoremInstance {
        TheoremInstance {
            theorem,
            seed: 0,
            guards: Guards::default(),
            data,
            vectors,
        }
    }

    #[test]
    fn prvi_scalar_example() {
        let tr = RealTriple::new(1.0, 1.0, 25.0).unwrap();
        let (lhs, rhs) = prvi_sides(&tr, &scalar_op(3.0), &scalar_op(4.0), &scalar(1.0), &scalar(0.0)).unwrap();
        assert_eq!(value(&lhs), 25.0);
        assert_eq!(value(&rhs), 25.0);
        let (lhs, rhs) = prvi_sides(&tr, &scalar_op(3.0), &scalar_op(4.0), &scalar(0.0), &scalar(0.0)).unwrap();
        assert_eq!((value(&lhs), value(&rhs)), (0.0, 0.0));
    }

    #[test]
    fn cprvi_scalar_example() {
        let tr = RealTriple::new(1.0, 1.0, 25.0).unwrap();
        let one = AlgebraElement::from_real(1.0);
        let zero = AlgebraElement::from_real(0.0);
        let (lhs, rhs) = cprvi_sides(&tr, &scalar(3.0), &scalar(4.0), &one, &zero).unwrap();
        assert_eq!(value(&lhs), 25.0);
        assert_eq!(value(&rhs), 25.0);
        let inst = instance(
            TheoremId::Cprvi,
            InstanceData::ModulePair { triple: tr, x: scalar(3.0), y: scalar(4.0) },
            vec![ModuleElement::from_algebra(one), ModuleElement::from_algebra(zero)],
        );
        let res = verify(&inst).unwrap();
        assert!(res.passes(1e-12), "{res:?}");
        assert_eq!(res.identity_residual, Some(0.0));
    }

    #[test]
    fn l2_scalar_example() {
        let space = ModuleSpace::seq(2, AlgebraShape::scalars()).unwrap();
        let seq = |a: f64| {
            ModuleElement::tuple(space.clone(), vec![AlgebraElement::from_real(a), AlgebraElement::from_real(0.0)]).unwrap()
        };
        let tr = RealTriple::new(1.0, 1.0, 1.0).unwrap();
        let inst = instance(
            TheoremId::L2,
            InstanceData::ModulePair { triple: tr, x: seq(0.6), y: seq(0.8) },
            vec![scalar(1.0), scalar(1.0)],
        );
        let res = verify(&inst).unwrap();
        assert!(res.identity_residual.unwrap() < 1e-15, "{res:?}");
    }

    #[test]
    fn eul_lagr_scalar_example() {
        // a = 3e, b = 4e, x = (1, 0), y = (0, 1) in M₁²: 25 + 25 = 50
        let space = ModuleSpace::direct_sum(2, AlgebraShape::scalars()).unwrap();
        let pair = |u: f64, v: f64| {
            ModuleElement::tuple(space.clone(), vec![AlgebraElement::from_real(u), AlgebraElement::from_real(v)]).unwrap()
        };
        let tr = RealTriple::new(1.0, 1.0, 25.0).unwrap();
        let (a, b) = (AlgebraElement::from_real(3.0), AlgebraElement::from_real(4.0));
        let (lhs, rhs) = eul_lagr_sides(&tr, &a, &b, &pair(1.0, 0.0), &pair(0.0, 1.0)).unwrap();
        assert_eq!(value(&lhs), 50.0);
        assert_eq!(value(&rhs), 50.0);
        let inst = instance(
            TheoremId::EulLagr,
            InstanceData::CentralPair { triple: tr, a, b },
            vec![pair(1.0, 0.0), pair(0.0, 1.0)],
        );
        let res = verify(&inst).unwrap();
        assert!(res.passes(1e-12), "{res:?}");
    }

    #[test]
    fn bundle_scalar_example() {
        let space = ModuleSpace::bundle(vec![1, 1]).unwrap();
        let section = |a: f64, b: f64| {
            ModuleElement::new(space.clone(), Payload::Bundle(vec![vec![C64::new(a, 0.0)], vec![C64::new(b, 0.0)]])).unwrap()
        };
        let tr = RealTriple::new(1.0, 1.0, 25.0).unwrap();
        let inst = instance(
            TheoremId::Bundle,
            InstanceData::BundlePair { triple: tr, space: space.clone(), f: vec![3.0, 3.0], g: vec![4.0, 4.0] },
            vec![section(1.0, 0.0), section(0.0, 1.0)],
        );
        let res = verify(&inst).unwrap();
        assert_eq!(res.identity_residual, Some(0.0));
        assert_eq!(res.residuals["pointwise"], 0.0);

        let single = ModuleSpace::bundle(vec![2]).unwrap();
        let zero = ModuleElement::zero(&single);
        let inst = instance(
            TheoremId::Bundle,
            InstanceData::BundlePair { triple: tr, space: single, f: vec![3.0], g: vec![4.0] },
            vec![zero.clone(), zero],
        );
        let res = verify(&inst).unwrap();
        assert_eq!(res.identity_residual, Some(0.0));
        assert!(res.notes.contains("classical"));
    }

    #[test]
    fn bohr_pq_scalar_examples() {
        let g = Guards::default();
        let p3 = ConjugatePair::new(3.0, &g).unwrap();
        let sides = pq_sides(&p3, &scalar(1.0), &scalar(0.0)).unwrap();
        // 1 + ½·4 = 3·1 + 1.5·0
        assert_eq!(value(&sides.lhs_xyp), 3.0);
        assert_eq!(value(&sides.rhs), 3.0);
        assert_eq!(value(&sides.lhs_i), 5.0);

        let mut res = TrialResult::new(TheoremId::BohrPq, 0);
        res.hypothesis_ok = true;
        verify_bohr_pq(&mut res, &p3, &scalar(1.0), &scalar(0.0)).unwrap();
        assert_eq!(res.info["slack_i"], -2.0 / 3.0);
        assert!(res.witness.is_some());
        assert!(res.passes(1e-12), "{res:?}");

        // p = 2 is the parallelogram law: 0 + 4 = 4
        let p2 = ConjugatePair::new(2.0, &g).unwrap();
        let sides = pq_sides(&p2, &scalar(1.0), &scalar(1.0)).unwrap();
        assert_eq!(value(&sides.lhs_xyp), 4.0);
        assert_eq!(value(&sides.rhs), 4.0);
    }

    #[test]
    fn bohr2_scalar_example() {
        // α = β = ½, T = S = 1, x = 1, y = −1: LHS 0, RHS 1, gap αβ|Tx − Sy|² = 1
        let tr = RealTriple::new(0.5, 0.5, 1.0).unwrap();
        let mut res = TrialResult::new(TheoremId::Bohr2, 0);
        verify_bohr2(&mut res, &tr, &scalar_op(1.0), &scalar_op(1.0), &scalar(1.0), &scalar(-1.0)).unwrap();
        assert_eq!(res.loewner_slack, Some(1.0));
        assert_eq!(res.residuals["gap_identity"], 0.0);
    }

    #[test]
    fn bohrn_scalar_family_and_replay() {
        let r2 = std::f64::consts::SQRT_2;
        let ops = vec![scalar_op(r2), scalar_op(r2), scalar_op(0.0)];
        let w = WeightVector::new(vec![0.25, 0.25, 0.5], 0.02).unwrap();
        let xs = vec![scalar(1.0), scalar(1.0), scalar(1.0)];
        let inst = instance(
            TheoremId::Bohrn,
            InstanceData::OperatorFamily { weights: w.clone(), ops: ops.clone() },
            xs.clone(),
        );
        let res = verify(&inst).unwrap();
        // |√2/2|² = ½ ≤ 1
        assert!((res.loewner_slack.unwrap() - 0.5).abs() < 1e-15);
        assert!(res.passes(1e-12), "{res:?}");

        let replay = replay_induction_step(&w, &ops, &xs, &Guards::default()).unwrap();
        assert!(replay.max_residual() < 1e-15, "{replay:?}");
        assert!(replay.y_slack.abs() < 1e-15);
    }

    #[test]
    fn bohrn_random_replay() {
        let guards = Guards::default();
        let space = ModuleSpace::direct_sum(2, AlgebraShape::new(vec![1, 2]).unwrap()).unwrap();
        for seed in 0..10 {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let w = WeightVector::random(4, guards.w_min, &mut rng).unwrap();
            let ops = gen_bohrn_family(&space, &w, &guards, &mut rng).unwrap();
            let xs: Vec<_> = (0..4).map(|_| ModuleElement::random(&space, &mut rng)).collect();
            let replay = replay_induction_step(&w, &ops, &xs, &guards).unwrap();
            assert!(replay.max_residual() <= 1e-9, "{replay:?}");
            assert!(replay.min_slack() >= -1e-9, "{replay:?}");
        }
    }

    #[test]
    fn amqm_examples() {
        let w = WeightVector::uniform(2).unwrap();
        let mats = vec![
            ComplexMatrix::from_real_rows(1, 1, &[1.0]).unwrap(),
            ComplexMatrix::from_real_rows(1, 1, &[-1.0]).unwrap(),
        ];
        let inst = instance(TheoremId::Amqm, InstanceData::MatrixFamily { weights: w, mats }, vec![]);
        let res = verify(&inst).unwrap();
        assert_eq!(res.loewner_slack, Some(1.0));

        let single = WeightVector::uniform(1).unwrap();
        let m = matrix::random_gaussian(3, 3, &mut ChaCha20Rng::seed_from_u64(1));
        let inst = instance(TheoremId::Amqm, InstanceData::MatrixFamily { weights: single, mats: vec![m] }, vec![]);
        assert!(verify(&inst).unwrap().loewner_slack.unwrap().abs() < 1e-12);
    }

    #[test]
    fn inadmissible_instances_are_refused() {
        let space = ModuleSpace::direct_sum(2, AlgebraShape::full(2).unwrap()).unwrap();
        let tr = RealTriple::new(1.0, 2.0, 3.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (t, s) = gen_constrained_pair(&space, &tr, &mut rng).unwrap();
        let s = AdjointableOp::sum(vec![s, AdjointableOp::scale(0.1, AdjointableOp::identity(&space))]).unwrap();
        let x = ModuleElement::random(&space, &mut rng);
        let y = ModuleElement::random(&space, &mut rng);
        let inst = instance(TheoremId::Prvi, InstanceData::OperatorPair { triple: tr, t, s }, vec![x, y]);
        let res = verify(&inst).unwrap();
        assert!(!res.hypothesis_ok);
        assert!(res.identity_residual.is_none());
        assert!(res.notes.starts_with("refused"));
    }

    #[test]
    fn witness_examples() {
        let g = Guards::default();
        let p3 = ConjugatePair::new(3.0, &g).unwrap();
        let (violation, predicted) = witness_violation(WitnessTarget::BohrI, &p3, &scalar(1.0), &scalar(0.0)).unwrap();
        assert_eq!(violation, 2.0);
        assert_eq!(predicted, 2.0);

        let p2 = ConjugatePair::new(2.0, &g).unwrap();
        let space = ModuleSpace::direct_sum(2, AlgebraShape::full(2).unwrap()).unwrap();
        assert!(witness_search(WitnessTarget::BohrI, &p2, &space, 50, 1).unwrap().is_none());
        assert!(witness_search(WitnessTarget::BohrII, &p2, &space, 50, 1).unwrap().is_none());

        let p4 = ConjugatePair::new(4.0, &g).unwrap();
        let w = witness_search(WitnessTarget::BohrI, &p4, &space, 1, 9).unwrap().unwrap();
        assert_eq!(w.attempts, 1);
        assert!((w.violation - w.predicted).abs() <= 1e-10 * w.predicted.max(1.0));

        let p15 = ConjugatePair::new(1.5, &g).unwrap();
        assert!(witness_search(WitnessTarget::BohrI, &p15, &space, 50, 2).unwrap().is_none());
        let w = witness_search(WitnessTarget::BohrII, &p15, &space, 1, 2).unwrap().unwrap();
        assert!((w.violation - w.predicted).abs() <= 1e-10 * w.predicted.max(1.0));
    }
}
