//! Seeded verification runs over theorem × module family × shape grids.
//!
//! A trial is a pure function of `(config, theorem, index)`: its seed is a
//! hash of the master seed, the theorem id and the index, and every
//! parameter choice (shape, family, rank, exponent, family size) is a fixed
//! function of the index. Trials can therefore run in any order and on any
//! number of threads and still produce the same report.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::generators::{
    gen_bohrn_family, gen_bohrncor_family, gen_bundle_instance, gen_central_pair, gen_constrained_pair,
    gen_l2_pair, gen_module_pair, ConjugatePair, Guards, RealTriple, WeightVector,
};
use crate::instance::{InstanceData, TheoremInstance};
use crate::matrix::{self, MAX_DIM};
use crate::module::{self, check_module_axioms, AxiomReport, ModuleElement, ModuleSpace};
use crate::theorem::TheoremId;
use crate::verifier::{self, eul_lagr_sides, identity_residual, pq_sides, TrialResult};

/// Exponents cycled through by the conjugate-exponent trials.
pub const PQ_EXPONENTS: [f64; 5] = [1.1, 1.5, 2.0, 3.0, 10.0];

/// Sequence length for the `ℓ₂(A)` trials.
pub const L2_LENGTH: usize = 8;

/// `(n, m, d)` for the rectangular-tuple trials.
pub const BHK_SHAPE: (usize, usize, usize) = (3, 4, 3);

/// Base size for the bundle trials.
pub const BUNDLE_POINTS: usize = 5;

/// Largest fiber dimension in bundle trials.
pub const MAX_FIBER_DIM: usize = 3;

/// Largest module rank used by the family grid.
pub const MAX_RANK: usize = 4;

/// Re-draws after a generator exhausts its rejection budget.
const RESEEDS: usize = 4;

/// Inclusive range of matrix sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimRange {
    pub min: usize,
    pub max: usize,
}

impl DimRange {
    pub fn new(min: usize, max: usize) -> Result<Self> {
        if min == 0 || min > max || max > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "dimension range {min}..{max} must satisfy 1 ≤ min ≤ max ≤ {MAX_DIM}"
            )));
        }
        Ok(Self { min, max })
    }

    fn pick(&self, i: usize) -> usize {
        self.min + i % (self.max - self.min + 1)
    }
}

impl Default for DimRange {
    fn default() -> Self {
        Self { min: 1, max: 4 }
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.min, self.max)
    }
}

/// Parses `A..B`, `A..=B` (both inclusive) or a single `A`.
impl FromStr for DimRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse dimension range {s:?}")))
        };
        match s.split_once("..") {
            Some((a, b)) => Self::new(parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let n = parse(s)?;
                Self::new(n, n)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub theorems: Vec<TheoremId>,
    pub trials: usize,
    pub dims: DimRange,
    pub block_shapes: Vec<AlgebraShape>,
    pub seed: u64,
    pub tol: f64,
    pub guards: Guards,
    /// Worker threads; not part of the report since it cannot change it.
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            theorems: TheoremId::ALL.to_vec(),
            trials: 200,
            dims: DimRange::default(),
            block_shapes: default_block_shapes(),
            seed: 0,
            tol: 1e-8,
            guards: Guards::default(),
            jobs: None,
        }
    }
}

/// `(1)`, `(2)`, `(1,1)`, `(2,3)`.
pub fn default_block_shapes() -> Vec<AlgebraShape> {
    [vec![1], vec![2], vec![1, 1], vec![2, 3]]
        .into_iter()
        .map(|d| AlgebraShape::new(d).expect("valid shape"))
        .collect()
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.theorems.is_empty() {
            return Err(Error::InvalidParameter("no theorem selected".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        DimRange::new(self.dims.min, self.dims.max)?;
        if self.block_shapes.is_empty() {
            return Err(Error::InvalidParameter("no block shape given".into()));
        }
        for shape in &self.block_shapes {
            // operators on rank-MAX_RANK tuples live in M_k(A)
            shape.amplified(MAX_RANK).map_err(|_| {
                Error::InvalidParameter(format!("block shape {shape} too large for rank-{MAX_RANK} modules"))
            })?;
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance {} must be positive", self.tol)));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidParameter("jobs must be at least 1".into()));
        }
        self.guards.validate()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

pub fn trial_seed(master: u64, theorem: TheoremId, index: usize) -> u64 {
    let base = splitmix64(master ^ fnv1a(theorem.as_str().as_bytes()));
    splitmix64(base.wrapping_add(index as u64))
}

/// The five module families at rank `k` over `shape`.
///
/// `0` self, `1` direct sum, `2` sequence, `3` rectangular tuples over
/// `M_d`, `4` bundle over `k + 1` points.
pub fn module_family(which: usize, k: usize, shape: &AlgebraShape, d: usize, offset: usize) -> Result<ModuleSpace> {
    match which % 5 {
        0 => Ok(ModuleSpace::self_module(shape.clone())),
        1 => ModuleSpace::direct_sum(k, shape.clone()),
        2 => ModuleSpace::seq(k, shape.clone()),
        // n·m ≥ d keeps an isometry available to the generator
        3 => ModuleSpace::rect_tuple(k, 2, d.min(2 * k)),
        _ => ModuleSpace::bundle((0..=k).map(|j| 1 + (j + offset) % MAX_FIBER_DIM).collect()),
    }
}

/// The families on which `T, S` are matrices over `A`.
fn tuple_family(which: usize, k: usize, shape: &AlgebraShape) -> Result<ModuleSpace> {
    match which % 3 {
        0 => Ok(ModuleSpace::self_module(shape.clone())),
        1 => ModuleSpace::direct_sum(k, shape.clone()),
        _ => ModuleSpace::seq(k, shape.clone()),
    }
}

struct Grid<'a> {
    shape: &'a AlgebraShape,
    /// Varies slowest, so every shape meets every family.
    slow: usize,
    rank: usize,
}

impl<'a> Grid<'a> {
    fn new(config: &'a RunConfig, index: usize) -> Self {
        let shapes = &config.block_shapes;
        let slow = index / shapes.len();
        Self {
            shape: &shapes[index % shapes.len()],
            slow,
            rank: 1 + (slow / 5) % MAX_RANK,
        }
    }
}

fn draw(rng: &mut ChaCha20Rng, space: &ModuleSpace) -> ModuleElement {
    ModuleElement::random(space, rng)
}

fn as_module(a: AlgebraElement) -> ModuleElement {
    ModuleElement::from_algebra(a)
}

fn generate(config: &RunConfig, theorem: TheoremId, index: usize, rng: &mut ChaCha20Rng) -> Result<(InstanceData, Vec<ModuleElement>)> {
    let guards = &config.guards;
    let g = Grid::new(config, index);
    let shape = g.shape;
    Ok(match theorem {
        TheoremId::Prvi => {
            let space = tuple_family(g.slow, g.rank, shape)?;
            let triple = RealTriple::random(rng);
            let (t, s) = gen_constrained_pair(&space, &triple, rng)?;
            let v = vec![draw(rng, &space), draw(rng, &space)];
            (InstanceData::OperatorPair { triple, t, s }, v)
        }
        TheoremId::Cprvi => {
            let space = module_family(g.slow, g.rank, shape, config.dims.pick(g.slow / 5), index)?;
            let triple = RealTriple::random(rng);
            let (x, y) = gen_module_pair(&space, &triple, rng)?;
            let a = AlgebraElement::random(space.algebra(), rng);
            let b = AlgebraElement::random(space.algebra(), rng);
            (InstanceData::ModulePair { triple, x, y }, vec![as_module(a), as_module(b)])
        }
        TheoremId::L2 => {
            let space = ModuleSpace::seq(L2_LENGTH, shape.clone())?;
            let triple = RealTriple::random(rng);
            let (x, y) = gen_l2_pair(&space, &triple, rng)?;
            let a = AlgebraElement::random(shape, rng);
            let b = AlgebraElement::random(shape, rng);
            (InstanceData::ModulePair { triple, x, y }, vec![as_module(a), as_module(b)])
        }
        TheoremId::Bhk => {
            let (n, m, d) = BHK_SHAPE;
            let space = ModuleSpace::rect_tuple(n, m, d)?;
            let triple = RealTriple::random(rng);
            let (x, y) = gen_module_pair(&space, &triple, rng)?;
            let a = AlgebraElement::random(space.algebra(), rng);
            let b = AlgebraElement::random(space.algebra(), rng);
            (InstanceData::ModulePair { triple, x, y }, vec![as_module(a), as_module(b)])
        }
        TheoremId::EulLagr => {
            let space = module_family(g.slow, g.rank, shape, config.dims.pick(g.slow / 5), index)?;
            let triple = RealTriple::random(rng);
            let (a, b) = gen_central_pair(space.algebra(), &triple, rng)?;
            let v = vec![draw(rng, &space), draw(rng, &space)];
            (InstanceData::CentralPair { triple, a, b }, v)
        }
        TheoremId::Bundle => {
            let fibers = (0..BUNDLE_POINTS).map(|_| rng.random_range(1..=MAX_FIBER_DIM)).collect();
            let space = ModuleSpace::bundle(fibers)?;
            let triple = RealTriple::random(rng);
            let (f, gv) = gen_bundle_instance(&space, &triple, rng)?;
            let v = vec![draw(rng, &space), draw(rng, &space)];
            (InstanceData::BundlePair { triple, space, f, g: gv }, v)
        }
        TheoremId::BohrPq => {
            let p = PQ_EXPONENTS[index % PQ_EXPONENTS.len()];
            let pair = ConjugatePair::new(p, guards)?;
            let slow = index / PQ_EXPONENTS.len();
            let space = module_family(slow, 1 + (slow / 5) % MAX_RANK, &config.block_shapes[slow % config.block_shapes.len()], config.dims.pick(slow), index)?;
            let x = draw(rng, &space);
            // every fourth block of 25 sits on the equality locus y = (1−p)x
            let y = if (index / 25) % 4 == 3 {
                x.scale_real(1.0 - p)
            } else {
                draw(rng, &space)
            };
            (InstanceData::Conjugate { pair }, vec![x, y])
        }
        TheoremId::Bohr2 => {
            let space = tuple_family(g.slow, g.rank, shape)?;
            let alpha = rng.random_range(0.05..0.95);
            let triple = RealTriple::new(alpha, 1.0 - alpha, 1.0)?;
            let (t, s) = gen_constrained_pair(&space, &triple, rng)?;
            let v = vec![draw(rng, &space), draw(rng, &space)];
            (InstanceData::OperatorPair { triple, t, s }, v)
        }
        TheoremId::Bohrn => {
            let n = 2 + index % 4;
            let slow = index / 4;
            let shape = &config.block_shapes[slow % config.block_shapes.len()];
            let space = tuple_family(slow / config.block_shapes.len(), 1 + (slow / 3) % MAX_RANK, shape)?;
            let weights = WeightVector::random(n, guards.w_min, rng)?;
            let ops = gen_bohrn_family(&space, &weights, guards, rng)?;
            let v = (0..n).map(|_| draw(rng, &space)).collect();
            (InstanceData::OperatorFamily { weights, ops }, v)
        }
        TheoremId::Bohrncor => {
            let n = 2 + index % 4;
            let slow = index / 4;
            let shape = &config.block_shapes[slow % config.block_shapes.len()];
            let which = slow / config.block_shapes.len();
            let space = module_family(which, 1 + (which / 5) % MAX_RANK, shape, config.dims.pick(which), index)?;
            let weights = WeightVector::random(n, guards.w_min, rng)?;
            let elems = gen_bohrncor_family(space.algebra(), &weights, guards, rng)?;
            let v = (0..n).map(|_| draw(rng, &space)).collect();
            (InstanceData::CentralFamily { weights, elems }, v)
        }
        TheoremId::Amqm => {
            let n = 1 + index % 5;
            let size = config.dims.pick(index / 5);
            let weights = WeightVector::random(n, guards.w_min, rng)?;
            let mats = (0..n).map(|_| matrix::random_gaussian(size, size, rng)).collect();
            (InstanceData::MatrixFamily { weights, mats }, vec![])
        }
    })
}

/// Builds trial `index` of `theorem` under `config`.
pub fn build_instance(config: &RunConfig, theorem: TheoremId, index: usize) -> Result<TheoremInstance> {
    let seed = trial_seed(config.seed, theorem, index);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut attempt = 0;
    loop {
        match generate(config, theorem, index, &mut rng) {
            Ok((data, vectors)) => {
                return Ok(TheoremInstance {
                    theorem,
                    seed,
                    guards: config.guards,
                    data,
                    vectors,
                })
            }
            Err(Error::SamplingExhausted(_)) if attempt < RESEEDS => attempt += 1,
            Err(e) => return Err(e),
        }
    }
}

/// Outcome of one seeded trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub theorem: TheoremId,
    pub index: usize,
    pub seed: u64,
    pub passed: bool,
    pub result: std::result::Result<TrialResult, String>,
}

pub fn run_trial(config: &RunConfig, theorem: TheoremId, index: usize) -> TrialOutcome {
    let seed = trial_seed(config.seed, theorem, index);
    let result = build_instance(config, theorem, index)
        .and_then(|inst| verifier::verify(&inst))
        .map_err(|e| e.to_string());
    let passed = matches!(&result, Ok(r) if r.passes(config.tol));
    TrialOutcome {
        theorem,
        index,
        seed,
        passed,
        result,
    }
}

/// Re-runs the trial of `theorem` whose seed is `seed`, if there is one
/// among the configured trial indices.
pub fn replay(config: &RunConfig, theorem: TheoremId, seed: u64) -> Option<TrialOutcome> {
    (0..config.trials)
        .find(|&i| trial_seed(config.seed, theorem, i) == seed)
        .map(|i| run_trial(config, theorem, i))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Runs every configured trial, in index order per theorem.
pub fn run_trials(config: &RunConfig, exec: Execution) -> Result<Vec<TrialOutcome>> {
    config.validate()?;
    let tasks: Vec<(TheoremId, usize)> = config
        .theorems
        .iter()
        .flat_map(|&t| (0..config.trials).map(move |i| (t, i)))
        .collect();
    let one = |&(t, i): &(TheoremId, usize)| run_trial(config, t, i);
    match exec {
        Execution::Sequential => Ok(tasks.iter().map(one).collect()),
        Execution::Parallel => parallel_map(&tasks, config.jobs, one),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, U, F>(items: &[T], jobs: Option<usize>, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    match jobs {
        None => Ok(items.par_iter().map(f).collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(|| items.par_iter().map(f).collect()))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, U, F>(items: &[T], _jobs: Option<usize>, f: F) -> Result<Vec<U>>
where
    F: Fn(&T) -> U,
{
    Ok(items.iter().map(f).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremSummary {
    pub id: TheoremId,
    pub trials: usize,
    /// Largest of all identity and auxiliary residuals.
    pub max_identity_residual: Option<f64>,
    /// Smallest of all relative Loewner slacks.
    pub min_loewner_slack: Option<f64>,
    /// Seeds of trials that failed, errored or were refused.
    pub failures: Vec<u64>,
}

impl TheoremSummary {
    fn empty(id: TheoremId) -> Self {
        Self {
            id,
            trials: 0,
            max_identity_residual: None,
            min_loewner_slack: None,
            failures: Vec::new(),
        }
    }

    fn absorb(&mut self, outcome: &TrialOutcome) {
        self.trials += 1;
        if !outcome.passed {
            self.failures.push(outcome.seed);
        }
        let Ok(r) = &outcome.result else { return };
        for v in r.identity_residual.iter().chain(r.residuals.values()) {
            self.max_identity_residual = Some(self.max_identity_residual.map_or(*v, |m| m.max(*v)));
        }
        for v in r.relative_slack().iter().chain(r.slacks.values()) {
            self.min_loewner_slack = Some(self.min_loewner_slack.map_or(*v, |m| m.min(*v)));
        }
    }

    /// Associative merge of two partial summaries of one theorem.
    pub fn merge(mut self, other: &Self) -> Self {
        self.trials += other.trials;
        self.max_identity_residual = match (self.max_identity_residual, other.max_identity_residual) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.min_loewner_slack = match (self.min_loewner_slack, other.min_loewner_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.failures.extend(&other.failures);
        self.failures.sort_unstable();
        self
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.failures.is_empty()
            && self.max_identity_residual.is_none_or(|r| r <= tol)
            && self.min_loewner_slack.is_none_or(|s| s >= -tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    pub per_theorem: Vec<TheoremSummary>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn from_outcomes(config: &RunConfig, outcomes: &[TrialOutcome]) -> Self {
        let per_theorem: Vec<TheoremSummary> = config
            .theorems
            .iter()
            .map(|&id| {
                let mut s = TheoremSummary::empty(id);
                outcomes.iter().filter(|o| o.theorem == id).for_each(|o| s.absorb(o));
                s.failures.sort_unstable();
                s
            })
            .collect();
        let pass = per_theorem.iter().all(|s| s.passes(config.tol));
        Self {
            config: config.clone(),
            per_theorem,
            pass,
        }
    }

    pub fn summary(&self, id: TheoremId) -> Option<&TheoremSummary> {
        self.per_theorem.iter().find(|s| s.id == id)
    }
}

pub fn run(config: &RunConfig, exec: Execution) -> Result<VerificationReport> {
    let outcomes = run_trials(config, exec)?;
    Ok(VerificationReport::from_outcomes(config, &outcomes))
}

/// The five module families used by the axiom suite.
pub fn axiom_families(shape: &AlgebraShape) -> Result<Vec<ModuleSpace>> {
    Ok(vec![
        ModuleSpace::self_module(shape.clone()),
        ModuleSpace::direct_sum(3, shape.clone())?,
        ModuleSpace::seq(4, shape.clone())?,
        ModuleSpace::rect_tuple(2, 3, 2)?,
        ModuleSpace::bundle(vec![1, 2, 3])?,
    ])
}

/// Axiom reports for every family over every shape.
pub fn axiom_suite(shapes: &[AlgebraShape], trials: usize, seed: u64) -> Result<Vec<AxiomReport>> {
    let mut out = Vec::new();
    let mut seen = Vec::new();
    for shape in shapes {
        for space in axiom_families(shape)? {
            // the rectangular and bundle families ignore the shape
            if seen.contains(&space) {
                continue;
            }
            let s = splitmix64(seed ^ fnv1a(space.label().as_bytes()));
            out.push(check_module_axioms(&space, trials, s)?);
            seen.push(space);
        }
    }
    Ok(out)
}

/// A scalar instance of a classical identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoCase {
    pub name: &'static str,
    pub statement: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

fn scalar(v: f64) -> ModuleElement {
    ModuleElement::from_algebra(AlgebraElement::from_real(v))
}

fn value(a: &AlgebraElement) -> f64 {
    a.block(0).get(0, 0).re
}

/// Bohr's inequality at `r = s = 2` in its equality case, the 3-4-5
/// Euler–Lagrange identity and the parallelogram law, evaluated through
/// the module operations on `ℂ` over itself.
pub fn classical_demo() -> Result<Vec<DemoCase>> {
    let mut cases = Vec::new();
    let case = |name, statement, lhs: AlgebraElement, rhs: AlgebraElement| -> Result<DemoCase> {
        Ok(DemoCase {
            name,
            statement,
            lhs: value(&lhs),
            rhs: value(&rhs),
            residual: identity_residual(&lhs, &rhs)?,
        })
    };

    let (z, w) = (scalar(1.0), scalar(1.0));
    let lhs = module::abs_sq(&z.add(&w)?);
    let rhs = module::abs_sq(&z).scale_real(2.0).add(&module::abs_sq(&w).scale_real(2.0))?;
    cases.push(case("bohr", "|1 + 1|² = 2·|1|² + 2·|1|²", lhs, rhs)?);

    let triple = RealTriple::new(1.0, 1.0, 25.0)?;
    let (a, b) = (AlgebraElement::from_real(3.0), AlgebraElement::from_real(4.0));
    let (lhs, rhs) = eul_lagr_sides(&triple, &a, &b, &scalar(1.0), &scalar(0.0))?;
    cases.push(case("euler-lagrange", "|3x + 4y|² + |4x − 3y|² = 25(|x|² + |y|²) at (1, 0)", lhs, rhs)?);

    let pair = ConjugatePair::new(2.0, &Guards::default())?;
    let sides = pq_sides(&pair, &scalar(2.0), &scalar(1.0))?;
    cases.push(case("parallelogram", "|x − y|² + |x + y|² = 2|x|² + 2|y|² at (2, 1)", sides.lhs_xyp, sides.rhs)?);
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(theorems: &[TheoremId], trials: usize) -> RunConfig {
        RunConfig {
            theorems: theorems.to_vec(),
            trials,
            seed: 11,
            ..RunConfig::default()
        }
    }

    #[test]
    fn dim_ranges_parse() {
        assert_eq!("1..4".parse::<DimRange>().unwrap(), DimRange { min: 1, max: 4 });
        assert_eq!("2..=3".parse::<DimRange>().unwrap(), DimRange { min: 2, max: 3 });
        assert_eq!("5".parse::<DimRange>().unwrap(), DimRange { min: 5, max: 5 });
        assert!("4..1".parse::<DimRange>().is_err());
        assert!("0..2".parse::<DimRange>().is_err());
        assert!("1..65".parse::<DimRange>().is_err());
        assert!("a..b".parse::<DimRange>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        assert!(RunConfig { trials: 0, ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { tol: -1.0, ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { block_shapes: vec![], ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { jobs: Some(0), ..RunConfig::default() }.validate().is_err());
        let big = AlgebraShape::new(vec![20]).unwrap();
        assert!(RunConfig { block_shapes: vec![big], ..RunConfig::default() }.validate().is_err());
        let mut g = RunConfig::default();
        g.guards.delta = 0.9;
        assert!(g.validate().is_err());
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let mut seeds: Vec<u64> = TheoremId::ALL
            .iter()
            .flat_map(|&t| (0..200).map(move |i| trial_seed(42, t, i)))
            .collect();
        let n = seeds.len();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), n);
        assert_ne!(trial_seed(1, TheoremId::Prvi, 0), trial_seed(2, TheoremId::Prvi, 0));
    }

    #[test]
    fn every_theorem_builds_and_passes() {
        let config = small(&TheoremId::ALL, 30);
        let outcomes = run_trials(&config, Execution::Sequential).unwrap();
        for o in &outcomes {
            assert!(o.passed, "{} #{}: {:?}", o.theorem, o.index, o.result);
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let config = small(&[TheoremId::Cprvi, TheoremId::Bohrn, TheoremId::Amqm], 12);
        let a = run(&config, Execution::Sequential).unwrap();
        let b = run(&config, Execution::Parallel).unwrap();
        let c = run(&RunConfig { jobs: Some(2), ..config.clone() }, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let json = |r: &VerificationReport| serde_json::to_string(r).unwrap();
        assert_eq!(json(&a), json(&c));
        assert!(a.pass);
    }

    #[test]
    fn replay_reproduces_trial() {
        let config = small(&[TheoremId::Bohrncor], 8);
        let outcomes = run_trials(&config, Execution::Sequential).unwrap();
        let o = &outcomes[5];
        assert_eq!(replay(&config, TheoremId::Bohrncor, o.seed).as_ref(), Some(o));
        assert!(replay(&config, TheoremId::Bohrncor, 12345).is_none());
    }

    #[test]
    fn summaries_merge_associatively() {
        let config = small(&[TheoremId::BohrPq], 30);
        let outcomes = run_trials(&config, Execution::Sequential).unwrap();
        let part = |r: std::ops::Range<usize>| {
            let mut s = TheoremSummary::empty(TheoremId::BohrPq);
            outcomes[r].iter().for_each(|o| s.absorb(o));
            s
        };
        let (a, b, c) = (part(0..7), part(7..19), part(19..30));
        let left = a.clone().merge(&b).merge(&c);
        let right = a.merge(&b.merge(&c));
        assert_eq!(left, right);
        assert_eq!(left.trials, 30);
        assert_eq!(left.max_identity_residual, VerificationReport::from_outcomes(&config, &outcomes).per_theorem[0].max_identity_residual);
    }

    #[test]
    fn axiom_suite_covers_five_families() {
        let reports = axiom_suite(&[AlgebraShape::new(vec![1, 2]).unwrap()], 10, 3).unwrap();
        assert_eq!(reports.len(), 5);
        assert!(reports.iter().all(|r| r.passes(1e-10)), "{reports:?}");
    }

    #[test]
    fn demo_cases_are_exact() {
        let cases = classical_demo().unwrap();
        assert_eq!(cases.len(), 3);
        assert_eq!((cases[0].lhs, cases[0].rhs), (4.0, 4.0));
        assert_eq!((cases[1].lhs, cases[1].rhs), (25.0, 25.0));
        assert_eq!((cases[2].lhs, cases[2].rhs), (10.0, 10.0));
        assert!(cases.iter().all(|c| c.residual <= 1e-14));
    }
}
