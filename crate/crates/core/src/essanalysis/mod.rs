//! Rank tests on symbolic support matrices, the super-essential subsystem,
//! specialization to pivot variables, and (modified) Jacobi order bounds.

mod jacobi;

pub use jacobi::{jacobi_brute_force, jacobi_number};

use std::collections::HashMap;

use num_bigint::BigInt;
use rand::Rng;
use thiserror::Error;

use crate::diffpoly::{order_matrix, symbolic_support_matrix, CoeffRef, DiffPolynomial, Order, OrderMatrix, SupportMatrix};
use crate::multipoly::{echelon, Echelon, ExactDomain, Monomial, MultiPoly, Symbol, UniPoly};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EssError {
    #[error("system has {polys} polynomials in {vars} variables; expected {vars}+1 polynomials")]
    DimensionMismatch { polys: usize, vars: usize },
    #[error("system is not transformally essential")]
    NotEssential,
    #[error("specialized support matrix lost rank ({got} < {want})")]
    RankDrop { got: usize, want: usize },
    #[error("Jacobi number of the order matrix without row {0} is -inf")]
    InfiniteJacobi(usize),
    #[error("modified Jacobi bound for row {0} is negative")]
    NegativeBound(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub seed: u64,
    pub trials: usize,
}

/// Independent random specializations per rank estimate.
pub const RANK_TRIALS: usize = 3;

/// Uniform integer in `[-2^31, 2^31]`.
pub fn random_coefficient<R: Rng>(rng: &mut R) -> BigInt {
    BigInt::from(rng.gen_range(-(1i64 << 31)..=(1i64 << 31)))
}

/// Rank estimate of a matrix whose entries depend linearly on generic
/// coefficients. `build` receives a consistent coefficient valuation and
/// returns the specialized matrix; the maximum rank over the trials is
/// reported along with the pivots of the first trial that reached it.
pub fn randomized_rank<T, F>(seed: u64, build: F) -> RankReport
where
    T: ExactDomain,
    F: Fn(&mut dyn FnMut(CoeffRef) -> BigInt) -> Vec<Vec<T>>,
{
    let mut best: Option<Echelon> = None;
    for trial in 0..RANK_TRIALS {
        let mut rng = seed::rng(seed::derive(seed, trial as u64));
        let mut cache: HashMap<CoeffRef, BigInt> = HashMap::new();
        let mut value = |c: CoeffRef| cache.entry(c).or_insert_with(|| random_coefficient(&mut rng)).clone();
        let e = echelon(build(&mut value));
        if best.as_ref().is_none_or(|b| e.rank > b.rank) {
            best = Some(e);
        }
    }
    let e = best.expect("at least one trial");
    RankReport { rank: e.rank, pivots: e.pivots, seed, trials: RANK_TRIALS }
}

/// Randomized rank of a symbolic support matrix over `Q(x)`.
pub fn symbolic_rank(m: &SupportMatrix, seed: u64) -> RankReport {
    randomized_rank(seed, |value| {
        m.rows.iter().map(|row| row.iter().map(|e| e.specialize(&mut *value)).collect::<Vec<UniPoly>>()).collect()
    })
}

/// Symbol standing for `x` in the exact rank computation.
const X_SYMBOL: Symbol = Symbol::MAX;

/// Deterministic rank with the coefficients kept symbolic. Slow.
pub fn exact_rank(m: &SupportMatrix) -> RankReport {
    let rows: Vec<Vec<MultiPoly>> = m
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    let mut p = MultiPoly::zero();
                    for (c, g) in e.iter() {
                        for (s, a) in g.coeffs().iter().enumerate() {
                            let mono = Monomial::from_pairs([(c.symbol(), 1), (X_SYMBOL, s as u32)]);
                            p = p.add(&MultiPoly::term(a.clone(), mono));
                        }
                    }
                    p
                })
                .collect()
        })
        .collect();
    let e = echelon(rows);
    RankReport { rank: e.rank, pivots: e.pivots, seed: 0, trials: 0 }
}

/// Rank by the randomized method, optionally confirmed exactly.
pub fn rank(m: &SupportMatrix, seed: u64, paranoid: bool) -> RankReport {
    let r = symbolic_rank(m, seed);
    if paranoid {
        let x = exact_rank(m);
        if x.rank != r.rank {
            return RankReport { seed, ..x };
        }
    }
    r
}

/// Highest variable index in the system.
pub fn variable_count(system: &[DiffPolynomial]) -> usize {
    system.iter().flat_map(|f| f.vars()).max().unwrap_or(0) as usize
}

pub fn all_columns(n: usize) -> Vec<u32> {
    (1..=n as u32).collect()
}

/// Checks the dimension and returns whether the support matrix has rank n,
/// together with the rank report.
pub fn is_transformally_essential(system: &[DiffPolynomial], seed: u64, paranoid: bool) -> Result<(bool, RankReport), EssError> {
    let n = variable_count(system);
    if system.len() != n + 1 {
        return Err(EssError::DimensionMismatch { polys: system.len(), vars: n });
    }
    let m = symbolic_support_matrix(system, &all_columns(n));
    let r = rank(&m, seed::derive(seed, seed::TAG_RANK), paranoid);
    Ok((r.rank == n, r))
}

/// The unique subset `T` with `|T| - rank = 1` whose proper subsets have
/// full rank. Indices are removed greedily in increasing order.
pub fn find_super_essential(system: &[DiffPolynomial], seed: u64, paranoid: bool) -> Result<Vec<usize>, EssError> {
    let (ok, _) = is_transformally_essential(system, seed, paranoid)?;
    if !ok {
        return Err(EssError::NotEssential);
    }
    let n = variable_count(system);
    let m = symbolic_support_matrix(system, &all_columns(n));
    let base = seed::derive(seed, seed::TAG_SUPER);
    let mut t: Vec<usize> = (0..system.len()).collect();
    for i in 0..system.len() {
        let rest: Vec<usize> = t.iter().copied().filter(|&k| k != i).collect();
        if rest.len() == t.len() {
            continue;
        }
        let r = rank(&m.select_rows(&rest), seed::derive(base, i as u64), paranoid);
        if r.rank < rest.len() {
            t = rest;
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub system: Vec<DiffPolynomial>,
    pub kept: Vec<u32>,
    pub rank: RankReport,
}

/// Upper limit on column subsets examined when choosing the kept variables.
const MAX_COLUMN_SUBSETS: usize = 5000;

/// Keeps `m` variables of `system_t` (or the caller's choice) and sets
/// every other variable to 1. Among the column sets of full rank `m`, the
/// one with the smallest sum of modified Jacobi bounds wins, ties going to
/// the lexicographically first; with too many subsets the echelon pivots
/// are used instead.
pub fn select_and_specialize(
    system_t: &[DiffPolynomial],
    seed: u64,
    kept_override: Option<&[u32]>,
    paranoid: bool,
) -> Result<Specialization, EssError> {
    let n = variable_count(system_t);
    let want = system_t.len().saturating_sub(1);
    let m = symbolic_support_matrix(system_t, &all_columns(n));
    let s = seed::derive(seed, seed::TAG_PIVOT);
    if let Some(k) = kept_override {
        return specialize_to(system_t, k, seed::derive(s, 1), paranoid);
    }
    let r = rank(&m, s, paranoid);
    if r.rank != want {
        return Err(EssError::RankDrop { got: r.rank, want });
    }
    let pivots: Vec<u32> = r.pivots.iter().map(|&c| m.columns[c]).collect();
    let subsets = column_subsets(n, want);
    if subsets.len() > MAX_COLUMN_SUBSETS {
        return specialize_to(system_t, &pivots, seed::derive(s, 1), paranoid);
    }
    let mut best: Option<(i64, Specialization)> = None;
    for (k, cols) in subsets.iter().enumerate() {
        let Ok(spec) = specialize_to(system_t, cols, seed::derive(s, 2 + k as u64), paranoid) else {
            continue;
        };
        let Ok(b) = modified_jacobi_bounds(&spec.system, &spec.kept) else {
            continue;
        };
        let total: i64 = b.modified.iter().sum();
        if best.as_ref().is_none_or(|(t, _)| total < *t) {
            best = Some((total, spec));
        }
    }
    match best {
        Some((_, spec)) => Ok(spec),
        None => specialize_to(system_t, &pivots, seed::derive(s, 1), paranoid),
    }
}

/// All `k`-subsets of `1..=n` in lexicographic order.
fn column_subsets(n: usize, k: usize) -> Vec<Vec<u32>> {
    fn go(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>, cap: usize) {
        if out.len() > cap {
            return;
        }
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            if (n - v + 1) as usize + cur.len() < k {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, out, cap);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n as u32, k, &mut Vec::new(), &mut out, MAX_COLUMN_SUBSETS);
    out
}

/// Sets every variable outside `kept` to 1 and checks the rank is kept.
pub fn specialize_to(system_t: &[DiffPolynomial], kept: &[u32], seed: u64, paranoid: bool) -> Result<Specialization, EssError> {
    let want = system_t.len().saturating_sub(1);
    let system: Vec<DiffPolynomial> = system_t.iter().map(|f| f.specialize(|v| kept.contains(&v))).collect();
    let r = rank(&symbolic_support_matrix(&system, kept), seed, paranoid);
    if r.rank != want || kept.len() != want {
        return Err(EssError::RankDrop { got: r.rank.min(kept.len()), want });
    }
    Ok(Specialization { system, kept: kept.to_vec(), rank: r })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiBounds {
    pub order_matrix: OrderMatrix,
    /// `J_i`: Jacobi number of the order matrix with row `i` deleted.
    pub jacobi: Vec<Order>,
    /// Column gcds of the support matrix.
    pub column_gcds: Vec<UniPoly>,
    pub gcd_degree_sum: i64,
    pub modified: Vec<i64>,
}

/// `J̃_i = Jac(A without row i) - Σ deg(f_j)`, with `f_j` the gcd of every
/// `x`-polynomial in column `j` of the support matrix.
pub fn modified_jacobi_bounds(system: &[DiffPolynomial], kept: &[u32]) -> Result<JacobiBounds, EssError> {
    let a = order_matrix(system, kept);
    let jacobi: Vec<Order> = (0..system.len()).map(|i| jacobi_number(&a.without_row(i))).collect();
    let m = symbolic_support_matrix(system, kept);
    let column_gcds: Vec<UniPoly> = (0..kept.len())
        .map(|j| m.rows.iter().flat_map(|row| row[j].iter().map(|(_, g)| g.clone())).fold(UniPoly::zero(), |acc, g| acc.gcd(&g)))
        .collect();
    let gcd_degree_sum: i64 = column_gcds.iter().map(|g| g.degree().unwrap_or(0) as i64).sum();
    let mut modified = Vec::with_capacity(jacobi.len());
    for (i, j) in jacobi.iter().enumerate() {
        let Order::Finite(j) = j else {
            return Err(EssError::InfiniteJacobi(i));
        };
        let b = j - gcd_degree_sum;
        if b < 0 {
            return Err(EssError::NegativeBound(i));
        }
        modified.push(b);
    }
    Ok(JacobiBounds { order_matrix: a, jacobi, column_gcds, gcd_degree_sum, modified })
}
