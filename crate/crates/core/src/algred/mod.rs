//! From the specialized difference system to a strong essential algebraic
//! system: prolongation, p-offset, minimal essential subsystem, variable
//! specialization and the monomial change of variables.

mod lattice;

pub use lattice::hermite_basis;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::diffpoly::{CoeffRef, DiffPolynomial, VarRef};
use crate::essanalysis::{randomized_rank, RankReport};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("prolonged system has full rank; no algebraic essential subsystem")]
    FullRank,
    #[error("p-offset reduction lost the rank deficiency")]
    CorankLost,
    #[error("no essential subsystem found")]
    NoEssentialSubset,
    #[error("variable specialization lost rank ({got} < {want})")]
    RankDrop { got: usize, want: usize },
    #[error("exponent lattice has rank {got} < {want}")]
    DegenerateLattice { got: usize, want: usize },
}

/// One monomial of an algebraic polynomial. After variables are set to 1
/// several generic terms may share a monomial, so the coefficient is a sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgTerm {
    pub coeffs: Vec<CoeffRef>,
    pub exps: BTreeMap<VarRef, i64>,
}

/// `δ^shift P_poly` divided by its distinguished monomial, in the flattened
/// variables `y_j^{(k)}`. The first term is the constant one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgPolynomial {
    pub poly: u32,
    pub shift: u32,
    pub terms: Vec<AlgTerm>,
}

impl AlgPolynomial {
    pub fn label(&self) -> (u32, u32) {
        (self.poly, self.shift)
    }

    fn set_to_one(&self, keep: &[VarRef]) -> AlgPolynomial {
        let mut terms: Vec<AlgTerm> = Vec::new();
        for t in &self.terms {
            let exps: BTreeMap<VarRef, i64> = t.exps.iter().filter(|(v, _)| keep.contains(v)).map(|(&v, &e)| (v, e)).collect();
            match terms.iter_mut().find(|s| s.exps == exps) {
                Some(s) => s.coeffs.extend(t.coeffs.iter().copied()),
                None => terms.push(AlgTerm { coeffs: t.coeffs.clone(), exps }),
            }
        }
        AlgPolynomial { terms, ..*self }
    }
}

impl fmt::Display for AlgPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let c: Vec<String> = t.coeffs.iter().map(|c| c.to_string()).collect();
            if c.len() > 1 {
                write!(f, "({})", c.join(" + "))?;
            } else {
                write!(f, "{}", c[0])?;
            }
            for (v, e) in &t.exps {
                if *e == 1 {
                    write!(f, "*{v}")?;
                } else {
                    write!(f, "*{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// `{δ^l P_i : 0 ≤ l ≤ bounds[i]}` in algebraic form.
pub fn prolong(system: &[DiffPolynomial], bounds: &[i64]) -> Vec<AlgPolynomial> {
    let mut out = Vec::new();
    for (f, &b) in system.iter().zip(bounds) {
        if b < 0 {
            continue;
        }
        for l in 0..=b as u32 {
            let g = f.shift(l);
            let base = g.terms()[0].monomial.clone();
            let terms = g.terms().iter().map(|t| AlgTerm { coeffs: vec![t.coeff], exps: t.monomial.div(&base).iter().collect() }).collect();
            out.push(AlgPolynomial { poly: g.terms()[0].coeff.poly, shift: l, terms });
        }
    }
    out
}

/// Sorted union of the variables occurring in `alg`.
pub fn alg_variables(alg: &[AlgPolynomial]) -> Vec<VarRef> {
    let mut v: Vec<VarRef> = alg.iter().flat_map(|p| p.terms.iter().flat_map(|t| t.exps.keys().copied())).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Row `i` is `ω_i = Σ_α c_α·α`, stored per column as coefficient weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgSupportMatrix {
    pub columns: Vec<VarRef>,
    pub rows: Vec<Vec<BTreeMap<CoeffRef, i64>>>,
}

pub fn alg_support_matrix(alg: &[AlgPolynomial], columns: &[VarRef]) -> AlgSupportMatrix {
    let rows = alg
        .iter()
        .map(|p| {
            let mut row = vec![BTreeMap::new(); columns.len()];
            for t in &p.terms {
                for (j, v) in columns.iter().enumerate() {
                    let e = t.exps.get(v).copied().unwrap_or(0);
                    if e == 0 {
                        continue;
                    }
                    for c in &t.coeffs {
                        let slot: &mut BTreeMap<CoeffRef, i64> = &mut row[j];
                        *slot.entry(*c).or_insert(0) += e;
                    }
                }
            }
            for entry in row.iter_mut() {
                entry.retain(|_, w| *w != 0);
            }
            row
        })
        .collect();
    AlgSupportMatrix { columns: columns.to_vec(), rows }
}

impl AlgSupportMatrix {
    pub fn rank(&self, rows: &[usize], seed: u64) -> RankReport {
        randomized_rank(seed, |value| {
            rows.iter()
                .map(|&r| {
                    self.rows[r]
                        .iter()
                        .map(|e| e.iter().fold(BigInt::zero(), |acc, (c, w)| acc + value(*c) * BigInt::from(*w)))
                        .collect::<Vec<BigInt>>()
                })
                .collect()
        })
    }
}

fn alg_rank(alg: &[AlgPolynomial], seed: u64) -> RankReport {
    let m = alg_support_matrix(alg, &alg_variables(alg));
    m.rank(&(0..alg.len()).collect::<Vec<_>>(), seed)
}

/// Drops the top `p = |alg| - rank - 1` prolongation levels of every
/// polynomial. Returns the reduced system, `p` and the rank report.
pub fn p_offset_reduce(alg: &[AlgPolynomial], bounds: &[(u32, i64)], seed: u64) -> Result<(Vec<AlgPolynomial>, usize), AlgError> {
    let r = alg_rank(alg, seed::derive(seed, 0));
    if r.rank >= alg.len() {
        return Err(AlgError::FullRank);
    }
    let p = alg.len() - r.rank - 1;
    if p == 0 {
        return Ok((alg.to_vec(), 0));
    }
    let limit = |poly: u32| bounds.iter().find(|(q, _)| *q == poly).map_or(-1, |(_, b)| *b) - p as i64;
    let reduced: Vec<AlgPolynomial> = alg.iter().filter(|a| (a.shift as i64) <= limit(a.poly)).cloned().collect();
    let r2 = alg_rank(&reduced, seed::derive(seed, 1));
    if r2.rank >= reduced.len() {
        return Err(AlgError::CorankLost);
    }
    Ok((reduced, p))
}

/// Largest subset size searched exhaustively when greedy search fails.
const EXHAUSTIVE_LIMIT: usize = 12;

fn is_deficient(m: &AlgSupportMatrix, rows: &[usize], seed: u64) -> bool {
    m.rank(rows, seed).rank < rows.len()
}

/// Rank is size minus one and removing any element gives full rank.
fn is_essential(m: &AlgSupportMatrix, rows: &[usize], seed: u64) -> bool {
    if m.rank(rows, seed).rank + 1 != rows.len() {
        return false;
    }
    rows.iter().enumerate().all(|(k, _)| {
        let rest: Vec<usize> = rows.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &r)| r).collect();
        !is_deficient(m, &rest, seed::derive(seed, 1 + k as u64))
    })
}

/// The essential subsystem of lowest ranking, ranking prolonged polynomials
/// by `(poly, shift)`. Greedy removal tries the highest-ranked first.
pub fn find_minimal_essential(alg: &[AlgPolynomial], seed: u64) -> Result<Vec<AlgPolynomial>, AlgError> {
    let m = alg_support_matrix(alg, &alg_variables(alg));
    let mut order: Vec<usize> = (0..alg.len()).collect();
    order.sort_by_key(|&i| alg[i].label());
    if !is_deficient(&m, &order, seed::derive(seed, 0)) {
        return Err(AlgError::NoEssentialSubset);
    }
    let mut keep = order.clone();
    for &i in order.iter().rev() {
        let rest: Vec<usize> = keep.iter().copied().filter(|&k| k != i).collect();
        if is_deficient(&m, &rest, seed::derive(seed, 1 + i as u64)) {
            keep = rest;
        }
    }
    if !is_essential(&m, &keep, seed::derive(seed, 1000)) {
        keep = exhaustive_essential(&m, &order, seed).ok_or(AlgError::NoEssentialSubset)?;
    }
    Ok(keep.iter().map(|&i| alg[i].clone()).collect())
}

/// Essential subsets compared by their elements in decreasing rank order.
fn exhaustive_essential(m: &AlgSupportMatrix, order: &[usize], seed: u64) -> Option<Vec<usize>> {
    if order.len() > EXHAUSTIVE_LIMIT {
        return None;
    }
    let mut best: Option<Vec<usize>> = None;
    for mask in 1u32..(1 << order.len()) {
        let rows: Vec<usize> = (0..order.len()).filter(|b| mask & (1 << b) != 0).map(|b| order[b]).collect();
        if !is_essential(m, &rows, seed::derive(seed, 5000 + mask as u64)) {
            continue;
        }
        let key: Vec<usize> = rows.iter().rev().copied().collect();
        if best.as_ref().is_none_or(|b| key < b.iter().rev().copied().collect::<Vec<_>>()) {
            best = Some(rows);
        }
    }
    best
}

/// Keeps `|sub| - 1` pivot variables of the support matrix and sets the
/// others to 1. Returns the new system and the kept variables.
pub fn variable_essential_reduce(sub: &[AlgPolynomial], seed: u64) -> Result<(Vec<AlgPolynomial>, Vec<VarRef>), AlgError> {
    let want = sub.len().saturating_sub(1);
    let vars = alg_variables(sub);
    let m = alg_support_matrix(sub, &vars);
    let all: Vec<usize> = (0..sub.len()).collect();
    let r = m.rank(&all, seed::derive(seed, 0));
    if r.rank != want {
        return Err(AlgError::RankDrop { got: r.rank, want });
    }
    let kept: Vec<VarRef> = r.pivots.iter().map(|&c| vars[c]).collect();
    let reduced: Vec<AlgPolynomial> = sub.iter().map(|p| p.set_to_one(&kept)).collect();
    let r2 = alg_support_matrix(&reduced, &kept).rank(&all, seed::derive(seed, 1));
    if r2.rank != want {
        return Err(AlgError::RankDrop { got: r2.rank, want });
    }
    Ok((reduced, kept))
}

/// `z_i = Π_j vars[j]^{basis[i][j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub vars: Vec<VarRef>,
    pub basis: Vec<Vec<BigInt>>,
    inverse: Vec<Vec<BigRational>>,
}

impl LatticeMap {
    /// Exponent vector over `vars` of `z^c`.
    pub fn to_original(&self, c: &[i64]) -> Vec<BigInt> {
        (0..self.vars.len())
            .map(|j| c.iter().zip(&self.basis).fold(BigInt::zero(), |acc, (ci, row)| acc + BigInt::from(*ci) * &row[j]))
            .collect()
    }

    /// z-coordinates of an exponent vector in the lattice, `None` otherwise.
    pub fn to_z(&self, v: &[i64]) -> Option<Vec<i64>> {
        let k = self.basis.len();
        (0..k)
            .map(|i| {
                let s = v
                    .iter()
                    .zip(&self.inverse)
                    .fold(BigRational::zero(), |acc, (x, row)| acc + BigRational::from_integer(BigInt::from(*x)) * &row[i]);
                if s.is_integer() {
                    i64::try_from(s.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }

    /// The z-variable as a monomial in the original variables.
    pub fn z_monomial(&self, i: usize) -> BTreeMap<VarRef, i64> {
        self.vars
            .iter()
            .zip(&self.basis[i])
            .filter(|(_, e)| !e.is_zero())
            .map(|(v, e)| (*v, i64::try_from(e).expect("exponent fits i64")))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZTerm {
    pub coeffs: Vec<CoeffRef>,
    pub exps: Vec<i64>,
}

/// A polynomial of the strong essential system; the first term has
/// exponent 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPolynomial {
    pub poly: u32,
    pub shift: u32,
    pub terms: Vec<ZTerm>,
}

impl fmt::Display for ZPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let c: Vec<String> = t.coeffs.iter().map(|c| c.to_string()).collect();
            if c.len() > 1 {
                write!(f, "({})", c.join(" + "))?;
            } else {
                write!(f, "{}", c[0])?;
            }
            for (i, e) in t.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*z{}", i + 1)?,
                    e => write!(f, "*z{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Rewrites `sub` in coordinates of a basis of the lattice spanned by its
/// exponent vectors. Generators are preferred as basis vectors when they
/// already form one; otherwise the Hermite basis is used.
pub fn strong_essential_transform(sub: &[AlgPolynomial], vars: &[VarRef]) -> Result<(Vec<ZPolynomial>, LatticeMap), AlgError> {
    let k = vars.len();
    let vec_of = |t: &AlgTerm| -> Vec<i64> { vars.iter().map(|v| t.exps.get(v).copied().unwrap_or(0)).collect() };
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for p in sub {
        for t in &p.terms {
            let v = vec_of(t);
            if v.iter().any(|&x| x != 0) && !gens.contains(&v) {
                gens.push(v);
            }
        }
    }
    let hnf = hermite_basis(&gens);
    if hnf.len() < k {
        return Err(AlgError::DegenerateLattice { got: hnf.len(), want: k });
    }
    let lattice_det = lattice::integer_determinant(&hnf).abs();
    let mut chosen: Vec<Vec<BigInt>> = Vec::new();
    for g in &gens {
        let mut trial = chosen.clone();
        trial.push(g.iter().map(|&x| BigInt::from(x)).collect());
        if lattice::integer_rank(&trial) == trial.len() {
            chosen = trial;
        }
        if chosen.len() == k {
            break;
        }
    }
    let basis = if chosen.len() == k && lattice::integer_determinant(&chosen).abs() == lattice_det { chosen } else { hnf };
    let inverse = lattice::rational_inverse(&basis).ok_or(AlgError::DegenerateLattice { got: k - 1, want: k })?;
    let map = LatticeMap { vars: vars.to_vec(), basis, inverse };
    let z = sub
        .iter()
        .map(|p| ZPolynomial {
            poly: p.poly,
            shift: p.shift,
            terms: p
                .terms
                .iter()
                .map(|t| ZTerm { coeffs: t.coeffs.clone(), exps: map.to_z(&vec_of(t)).expect("generator lies in its own lattice") })
                .collect(),
        })
        .collect();
    Ok((z, map))
}

#[cfg(test)]
mod tests;
