//! Sparse resultant of the strong essential system: Canny–Emiris Newton
//! matrices from a mixed subdivision and the determinant quotient.

mod simplex;
mod subdivision;

pub use simplex::{minimize, LpOutcome, LpSolution};
pub use subdivision::{lattice_points, mixed_subdivision, Lifting, RowContent, Subdivision, SupportSet};

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use rand::Rng;
use thiserror::Error;

use crate::algred::ZPolynomial;
use crate::diffpoly::{CoeffRef, Order};
use crate::multipoly::{determinant, MultiPoly, PolyError, Symbol};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResultantError {
    #[error("degenerate lifting: {0}")]
    DegenerateLifting(String),
    #[error("row shift leaves the lattice point set")]
    MissingColumn,
    #[error("denominator determinant vanishes")]
    ZeroDenominator,
    #[error("numerator is not divisible by the denominator")]
    NotDivisible,
    #[error("coefficient degrees do not match the mixed row counts")]
    DegreeMismatch,
    #[error("no usable lifting after {0} attempts")]
    RetriesExhausted(usize),
}

/// Row of the Newton matrix: `x^{point - a}·f_poly` where `a` is support
/// point `support_point` of `f_poly`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowTag {
    pub poly: usize,
    pub point: Vec<i64>,
    pub support_point: usize,
    pub mixed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonMatrixPair {
    pub rows: Vec<RowTag>,
    pub m1: Vec<Vec<MultiPoly>>,
    /// Rows (and columns) of `m1` forming the denominator minor.
    pub m2_rows: Vec<usize>,
}

impl NewtonMatrixPair {
    pub fn m2(&self) -> Vec<Vec<MultiPoly>> {
        self.m2_rows.iter().map(|&r| self.m2_rows.iter().map(|&c| self.m1[r][c].clone()).collect()).collect()
    }

    pub fn m1_dim(&self) -> usize {
        self.m1.len()
    }

    pub fn m2_dim(&self) -> usize {
        self.m2_rows.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultantPoly {
    pub poly: MultiPoly,
    /// Degree in the coefficients of each polynomial of the z-system.
    pub block_degrees: Vec<u32>,
}

impl ResultantPoly {
    /// `ord(SR, u_i)`: highest shift of a coefficient of polynomial `i`.
    pub fn order_in(&self, poly: u32) -> Order {
        self.poly
            .symbols()
            .into_iter()
            .map(CoeffRef::from_symbol)
            .filter(|c| c.poly == poly)
            .map(|c| Order::Finite(c.shift as i64))
            .max()
            .unwrap_or(Order::NegInf)
    }
}

/// Supports of the z-system, constant term at the origin.
pub fn extract_supports(z: &[ZPolynomial]) -> Vec<SupportSet> {
    z.iter().enumerate().map(|(index, p)| SupportSet { index, points: p.terms.iter().map(|t| t.exps.clone()).collect() }).collect()
}

fn coefficient(coeffs: &[CoeffRef]) -> MultiPoly {
    coeffs.iter().fold(MultiPoly::zero(), |acc, c| acc.add(&MultiPoly::var(c.symbol())))
}

/// Entry `(row (i,p,a), column q)` is the coefficient of `q - (p - a)` in
/// `f_i`; the denominator uses the rows whose cell is not mixed.
pub fn build_matrices(sub: &Subdivision, z: &[ZPolynomial]) -> Result<NewtonMatrixPair, ResultantError> {
    let index: HashMap<&Vec<i64>, usize> = sub.points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = sub.points.len();
    let mut m1 = vec![vec![MultiPoly::zero(); n]; n];
    let mut rows = Vec::with_capacity(n);
    for (r, (p, c)) in sub.points.iter().zip(&sub.content).enumerate() {
        let f = &z[c.poly];
        let a = &f.terms[c.support_point].exps;
        for t in &f.terms {
            let col: Vec<i64> = p.iter().zip(a).zip(&t.exps).map(|((x, y), b)| x - y + b).collect();
            let &j = index.get(&col).ok_or(ResultantError::MissingColumn)?;
            m1[r][j] = coefficient(&t.coeffs);
        }
        rows.push(RowTag { poly: c.poly, point: p.clone(), support_point: c.support_point, mixed: c.mixed });
    }
    let m2_rows = (0..n).filter(|&r| !rows[r].mixed).collect();
    Ok(NewtonMatrixPair { rows, m1, m2_rows })
}

fn block_symbols(z: &[ZPolynomial]) -> Vec<BTreeSet<Symbol>> {
    z.iter().map(|p| p.terms.iter().flat_map(|t| t.coeffs.iter().map(|c| c.symbol())).collect()).collect()
}

/// Checks `det(M2) ≠ 0` at a random point, then returns
/// `det(M1)/det(M2)` made primitive with positive leading coefficient.
pub fn quotient_resultant(pair: &NewtonMatrixPair, z: &[ZPolynomial], seed: u64) -> Result<ResultantPoly, ResultantError> {
    let m2 = pair.m2();
    let mut rng = seed::rng(seed);
    let mut values: HashMap<Symbol, BigInt> = HashMap::new();
    for s in pair.m1.iter().flatten().flat_map(|e| e.symbols()) {
        values.entry(s).or_insert_with(|| BigInt::from(rng.gen_range(-(1i64 << 31)..=(1i64 << 31))));
    }
    let numeric: Vec<Vec<BigInt>> =
        m2.iter().map(|row| row.iter().map(|e| e.evaluate(|s| values.get(&s).cloned()).expect("all symbols valued")).collect()).collect();
    if determinant(&numeric) == BigInt::from(0) {
        return Err(ResultantError::ZeroDenominator);
    }
    let d1 = determinant(&pair.m1);
    let d2 = determinant(&m2);
    let quotient = d1.exact_divide(&d2).map_err(|e| match e {
        PolyError::DivisionByZero => ResultantError::ZeroDenominator,
        _ => ResultantError::NotDivisible,
    })?;
    let blocks = block_symbols(z);
    let mut block_degrees = Vec::with_capacity(z.len());
    for (i, b) in blocks.iter().enumerate() {
        let hi = quotient.degree_in(|s| b.contains(&s)).unwrap_or(0);
        let lo = quotient.min_degree_in(|s| b.contains(&s)).unwrap_or(0);
        let mixed = pair.rows.iter().filter(|r| r.mixed && r.poly == i).count() as u32;
        if hi != lo || hi != mixed {
            return Err(ResultantError::DegreeMismatch);
        }
        block_degrees.push(hi);
    }
    Ok(ResultantPoly { poly: quotient.normalized(), block_degrees })
}

/// Sylvester matrix of two polynomials in one variable.
pub fn sylvester_matrix(z: &[ZPolynomial]) -> NewtonMatrixPair {
    let dense = |p: &ZPolynomial| -> Vec<MultiPoly> {
        let lo = p.terms.iter().map(|t| t.exps[0]).min().unwrap_or(0);
        let hi = p.terms.iter().map(|t| t.exps[0]).max().unwrap_or(0);
        let mut v = vec![MultiPoly::zero(); (hi - lo + 1) as usize];
        for t in &p.terms {
            let slot = &mut v[(t.exps[0] - lo) as usize];
            *slot = slot.add(&coefficient(&t.coeffs));
        }
        v
    };
    let (f, g) = (dense(&z[0]), dense(&z[1]));
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut m1 = vec![vec![MultiPoly::zero(); size]; size];
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        for (j, c) in f.iter().enumerate() {
            m1[r][r + j] = c.clone();
        }
        rows.push(RowTag { poly: 0, point: vec![r as i64], support_point: 0, mixed: true });
    }
    for r in 0..m {
        for (j, c) in g.iter().enumerate() {
            m1[n + r][r + j] = c.clone();
        }
        rows.push(RowTag { poly: 1, point: vec![r as i64], support_point: 0, mixed: true });
    }
    NewtonMatrixPair { rows, m1, m2_rows: Vec::new() }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultantOutcome {
    pub resultant: ResultantPoly,
    pub matrices: NewtonMatrixPair,
    pub subdivision: Option<Subdivision>,
    pub attempts: usize,
}

/// Sparse resultant of `k+1` polynomials in `k` variables with supports
/// spanning `Z^k`. Liftings are redrawn up to `max_retries` times.
pub fn compute_resultant(z: &[ZPolynomial], k: usize, seed: u64, max_retries: usize) -> Result<ResultantOutcome, ResultantError> {
    if k == 0 && z.len() == 1 {
        let coeffs: Vec<CoeffRef> = z[0].terms.iter().flat_map(|t| t.coeffs.iter().copied()).collect();
        let pair = NewtonMatrixPair {
            rows: vec![RowTag { poly: 0, point: vec![], support_point: 0, mixed: true }],
            m1: vec![vec![coefficient(&coeffs)]],
            m2_rows: vec![],
        };
        let resultant = quotient_resultant(&pair, z, seed)?;
        return Ok(ResultantOutcome { resultant, matrices: pair, subdivision: None, attempts: 1 });
    }
    if k == 1 && z.len() == 2 {
        let pair = sylvester_matrix(z);
        let resultant = quotient_resultant(&pair, z, seed)?;
        return Ok(ResultantOutcome { resultant, matrices: pair, subdivision: None, attempts: 1 });
    }
    let supports = extract_supports(z);
    let lattice = lattice_points(&supports, k);
    for attempt in 0..=max_retries {
        let s = seed::derive(seed, attempt as u64);
        let result = mixed_subdivision(&supports, &lattice, k, s).and_then(|sub| {
            let pair = build_matrices(&sub, z)?;
            let r = quotient_resultant(&pair, z, seed::derive(s, seed::TAG_DENOM))?;
            Ok((r, pair, sub))
        });
        match result {
            Ok((resultant, matrices, sub)) => {
                return Ok(ResultantOutcome { resultant, matrices, subdivision: Some(sub), attempts: attempt + 1 })
            }
            Err(_) => continue,
        }
    }
    Err(ResultantError::RetriesExhausted(max_retries + 1))
}
