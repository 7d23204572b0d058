//! Algorithm 1 end to end, from a parsed system to the resultant.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::algred::{
    alg_variables, find_minimal_essential, p_offset_reduce, prolong, strong_essential_transform, variable_essential_reduce, AlgError,
    AlgPolynomial, LatticeMap, ZPolynomial,
};
use crate::diffpoly::{all_vars_of, symbolic_support_matrix, CoeffRef, DiffPolynomial, Order, SupportMatrix, VarRef};
use crate::essanalysis::{
    all_columns, find_super_essential, is_transformally_essential, modified_jacobi_bounds, select_and_specialize, variable_count, EssError,
    JacobiBounds,
};
use crate::multipoly::MultiPoly;
use crate::parse::{ParseError, SystemSource};
use crate::resultant::{compute_resultant, NewtonMatrixPair, ResultantError, ResultantPoly};
use crate::seed;

/// Last stage to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Check,
    Super,
    Bounds,
    /// Through the strong essential z-system.
    Reduce,
    Resultant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub seed: u64,
    pub paranoid: bool,
    pub max_retries: usize,
    pub stop: Stage,
    /// Variables kept in the specialization step instead of the automatic
    /// choice.
    pub kept_vars: Option<Vec<u32>>,
    /// Random consistent specializations used to confirm the resultant.
    pub vanishing_trials: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { seed: 0, paranoid: false, max_retries: 5, stop: Stage::Resultant, kept_vars: None, vanishing_trials: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("input: {0}")]
    Input(#[from] ParseError),
    #[error("{stage}: {source}")]
    Analysis { stage: &'static str, source: EssError },
    #[error("{stage}: {source}")]
    Reduction { stage: &'static str, source: AlgError },
    #[error("resultant: {0}")]
    Resultant(#[from] ResultantError),
}

impl PipelineError {
    /// Input errors exit with 1, everything else with 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Input(_) => 1,
            PipelineError::Analysis { source: EssError::DimensionMismatch { .. }, .. } => 1,
            _ => 2,
        }
    }
}

fn ess(stage: &'static str) -> impl Fn(EssError) -> PipelineError {
    move |source| PipelineError::Analysis { stage, source }
}

fn alg(stage: &'static str) -> impl Fn(AlgError) -> PipelineError {
    move |source| PipelineError::Reduction { stage, source }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultantSection {
    pub resultant: ResultantPoly,
    pub matrices: NewtonMatrixPair,
    pub attempts: usize,
    /// `(poly, ord(SR, u_poly))` for the super-essential polynomials.
    pub orders: Vec<(u32, Order)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionSection {
    pub prolonged: Vec<AlgPolynomial>,
    pub p_offset: usize,
    pub essential: Vec<AlgPolynomial>,
    pub alg_kept: Vec<VarRef>,
    pub zsystem: Vec<ZPolynomial>,
    pub lattice: LatticeMap,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineReport {
    pub seed: u64,
    pub system: Vec<DiffPolynomial>,
    pub support_matrix: SupportMatrix,
    pub rank: usize,
    pub essential: bool,
    pub super_essential: Option<Vec<usize>>,
    pub kept_vars: Option<Vec<u32>>,
    pub specialized: Option<Vec<DiffPolynomial>>,
    pub bounds: Option<JacobiBounds>,
    pub reduction: Option<ReductionSection>,
    pub result: Option<ResultantSection>,
    /// Named postcondition checks and whether they held.
    pub checks: BTreeMap<String, bool>,
    pub timings: Vec<(&'static str, Duration)>,
}

pub fn run_source(src: &SystemSource, opts: &PipelineOptions) -> Result<PipelineReport, PipelineError> {
    run_pipeline(&src.to_system()?, opts)
}

pub fn run_pipeline(system: &[DiffPolynomial], opts: &PipelineOptions) -> Result<PipelineReport, PipelineError> {
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, timings: &mut Vec<(&'static str, Duration)>| {
        timings.push((name, clock.elapsed()));
        clock = Instant::now();
    };
    let s = opts.seed;
    let n = variable_count(system);
    let (essential, rank) = is_transformally_essential(system, s, opts.paranoid).map_err(ess("check"))?;
    let mut report = PipelineReport {
        seed: s,
        system: system.to_vec(),
        support_matrix: symbolic_support_matrix(system, &all_columns(n)),
        rank: rank.rank,
        essential,
        super_essential: None,
        kept_vars: None,
        specialized: None,
        bounds: None,
        reduction: None,
        result: None,
        checks: BTreeMap::new(),
        timings: Vec::new(),
    };
    lap("check", &mut timings);
    if !essential || opts.stop == Stage::Check {
        report.timings = timings;
        return Ok(report);
    }

    let t = find_super_essential(system, s, opts.paranoid).map_err(ess("super-essential"))?;
    let sub: Vec<DiffPolynomial> = t.iter().map(|&i| system[i].clone()).collect();
    report.super_essential = Some(t.clone());
    lap("super-essential", &mut timings);
    if opts.stop == Stage::Super {
        report.timings = timings;
        return Ok(report);
    }

    let spec = select_and_specialize(&sub, s, opts.kept_vars.as_deref(), opts.paranoid).map_err(ess("specialize"))?;
    let bounds = modified_jacobi_bounds(&spec.system, &spec.kept).map_err(ess("bounds"))?;
    report.kept_vars = Some(spec.kept.clone());
    report.specialized = Some(spec.system.clone());
    report.bounds = Some(bounds.clone());
    lap("bounds", &mut timings);
    if opts.stop == Stage::Bounds {
        report.timings = timings;
        return Ok(report);
    }

    let prolonged = prolong(&spec.system, &bounds.modified);
    let tagged: Vec<(u32, i64)> = t.iter().zip(&bounds.modified).map(|(&i, &b)| (i as u32, b)).collect();
    let (reduced, p_offset) = p_offset_reduce(&prolonged, &tagged, seed::derive(s, seed::TAG_PROLONG)).map_err(alg("p-offset"))?;
    let essential_alg = find_minimal_essential(&reduced, seed::derive(s, seed::TAG_MINIMAL)).map_err(alg("minimal essential"))?;
    let (vsys, alg_kept) =
        variable_essential_reduce(&essential_alg, seed::derive(s, seed::TAG_VARIABLE)).map_err(alg("variable essential"))?;
    let (zsystem, lattice) = strong_essential_transform(&vsys, &alg_kept).map_err(alg("lattice transform"))?;
    report.checks.insert("alg_variables_cover_kept".into(), alg_kept.iter().all(|v| alg_variables(&essential_alg).contains(v)));
    lap("reduction", &mut timings);
    if opts.stop == Stage::Reduce {
        report.reduction = Some(ReductionSection { prolonged, p_offset, essential: essential_alg, alg_kept, zsystem, lattice });
        report.timings = timings;
        return Ok(report);
    }

    let out = compute_resultant(&zsystem, alg_kept.len(), seed::derive(s, seed::TAG_LIFT), opts.max_retries)?;
    let orders: Vec<(u32, Order)> = t.iter().map(|&i| (i as u32, out.resultant.order_in(i as u32))).collect();
    let bound_ok = orders.iter().zip(&bounds.modified).all(|((_, o), &b)| *o <= Order::Finite(b));
    report.checks.insert("order_bounds".into(), bound_ok);
    report.checks.insert("block_homogeneous".into(), block_homogeneous(&zsystem, &out.resultant));
    if opts.vanishing_trials > 0 {
        let ok = vanishes(system, &out.resultant.poly, opts.vanishing_trials, seed::derive(s, 99));
        report.checks.insert("vanishing".into(), ok);
    }
    report.reduction = Some(ReductionSection { prolonged, p_offset, essential: essential_alg, alg_kept, zsystem, lattice });
    report.result = Some(ResultantSection { resultant: out.resultant, matrices: out.matrices, attempts: out.attempts, orders });
    lap("resultant", &mut timings);
    report.timings = timings;
    Ok(report)
}

/// Every term of SR has degree `block_degrees[b]` in the coefficients of
/// z-polynomial `b`.
fn block_homogeneous(z: &[ZPolynomial], r: &ResultantPoly) -> bool {
    z.iter().zip(&r.block_degrees).all(|(p, &d)| {
        let own = |s: crate::multipoly::Symbol| p.terms.iter().any(|t| t.coeffs.iter().any(|c| c.symbol() == s));
        r.poly.degree_in(own) == Some(d) && r.poly.min_degree_in(own) == Some(d)
    }) && z.len() == r.block_degrees.len()
}

fn small_nonzero<R: Rng>(rng: &mut R) -> BigRational {
    let v = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
    BigRational::from_integer(BigInt::from(v))
}

/// Evaluates `sr` at `trials` random points of the variety of the
/// prolonged system: all transformed variables and non-distinguished
/// coefficients random, each distinguished coefficient solved for. Returns
/// whether every value is exactly zero.
pub fn vanishes(system: &[DiffPolynomial], sr: &MultiPoly, trials: usize, seed: u64) -> bool {
    let coeffs: Vec<CoeffRef> = sr.symbols().into_iter().map(CoeffRef::from_symbol).collect();
    let mut blocks: Vec<(u32, u32)> = coeffs.iter().map(|c| (c.poly, c.shift)).collect();
    blocks.sort_unstable();
    blocks.dedup();
    for trial in 0..trials {
        let mut rng = seed::rng(seed::derive(seed, trial as u64));
        let mut ys: HashMap<VarRef, BigRational> = HashMap::new();
        let mut vals: HashMap<u32, BigRational> = HashMap::new();
        for &(i, l) in &blocks {
            let Some(f) = system.get(i as usize) else { return false };
            let g = f.shift(l);
            for v in all_vars_of(&g) {
                ys.entry(v).or_insert_with(|| small_nonzero(&mut rng));
            }
            let base = &g.terms()[0].monomial;
            let mut acc = BigRational::zero();
            for t in &g.terms()[1..] {
                let c = BigRational::from_integer(BigInt::from(rng.gen_range(-9..=9)));
                let mut m = BigRational::one();
                for (v, e) in t.monomial.div(base).iter() {
                    m *= num_traits::pow::Pow::pow(&ys[&v], e as i32);
                }
                acc += &c * m;
                vals.insert(t.coeff.symbol(), c);
            }
            vals.insert(g.terms()[0].coeff.symbol(), -acc);
        }
        match sr.evaluate_rational(|s| vals.get(&s).cloned()) {
            Ok(v) if v.is_zero() => {}
            _ => return false,
        }
    }
    true
}
