//! Lattice points of the perturbed Minkowski sum and their cells in the
//! mixed subdivision induced by a lifting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::simplex::{minimize, LpOutcome};
use super::ResultantError;
use crate::seed;

/// Lattice points of one polynomial's support; `points[0]` is the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    pub index: usize,
    pub points: Vec<Vec<i64>>,
}

/// Per-point lift values and the perturbation vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Lifting {
    pub values: Vec<Vec<BigRational>>,
    pub delta: Vec<BigRational>,
}

/// Which polynomial and support point fill the row of a lattice point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowContent {
    pub poly: usize,
    pub support_point: usize,
    /// One summand of the cell is a vertex and all others are edges.
    pub mixed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Subdivision {
    /// Lattice points of `Q + δ` in increasing order.
    pub points: Vec<Vec<i64>>,
    pub content: Vec<RowContent>,
    pub lifting: Lifting,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Constraint matrix `[points; block indicators]` of the decomposition LP.
fn constraint_matrix(supports: &[SupportSet], k: usize) -> Vec<Vec<BigRational>> {
    let mut a = Vec::with_capacity(k + supports.len());
    for d in 0..k {
        a.push(supports.iter().flat_map(|s| s.points.iter().map(move |p| q(p[d]))).collect());
    }
    for (i, _) in supports.iter().enumerate() {
        a.push(
            supports.iter().enumerate().flat_map(|(j, s)| std::iter::repeat_n(if i == j { q(1) } else { q(0) }, s.points.len())).collect(),
        );
    }
    a
}

fn rhs(p: &[i64], delta: Option<&[BigRational]>, n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = match delta {
        Some(d) => p.iter().zip(d).map(|(&x, e)| q(x) - e).collect(),
        None => p.iter().map(|&x| q(x)).collect(),
    };
    b.extend(std::iter::repeat_n(BigRational::one(), n));
    b
}

/// A linear functional with its range over the Minkowski sum.
struct Slab {
    w: Vec<i64>,
    lo: i64,
    hi: i64,
    /// Last coordinate with a nonzero weight.
    last: usize,
}

/// Slabs for the directions `e_a` and `e_a ± e_b`.
fn slabs(supports: &[SupportSet], k: usize) -> Vec<Slab> {
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    for a in 0..k {
        let mut w = vec![0; k];
        w[a] = 1;
        dirs.push(w);
        for b in 0..a {
            for s in [1, -1] {
                let mut w = vec![0; k];
                w[a] = 1;
                w[b] = s;
                dirs.push(w);
            }
        }
    }
    dirs.into_iter()
        .map(|w| {
            let (lo, hi) = supports.iter().fold((0, 0), |(lo, hi), s| {
                let vals: Vec<i64> = s.points.iter().map(|p| dot(p, &w)).collect();
                (lo + vals.iter().min().unwrap(), hi + vals.iter().max().unwrap())
            });
            let last = w.iter().rposition(|&x| x != 0).unwrap();
            Slab { w, lo, hi, last }
        })
        .collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Points of `B_0 + ... + B_n`, all of which lie in the Minkowski sum.
fn sum_set(supports: &[SupportSet], k: usize) -> std::collections::HashSet<Vec<i64>> {
    let mut acc: std::collections::HashSet<Vec<i64>> = [vec![0; k]].into_iter().collect();
    for s in supports {
        acc = acc.iter().flat_map(|a| s.points.iter().map(move |p| a.iter().zip(p).map(|(x, y)| x + y).collect())).collect();
    }
    acc
}

/// All lattice points of the Minkowski sum of the support hulls, in
/// increasing order.
pub fn lattice_points(supports: &[SupportSet], k: usize) -> Vec<Vec<i64>> {
    let slabs = slabs(supports, k);
    let known = sum_set(supports, k);
    let a = constraint_matrix(supports, k);
    let n = supports.len();
    let mut out = Vec::new();
    let mut cur = vec![0i64; k];
    let mut stack: Vec<(usize, i64)> = Vec::new();
    // iterative depth-first walk over the pruned box
    let range =
        |d: usize| slabs.iter().find(|s| s.last == d && s.w.iter().filter(|&&x| x != 0).count() == 1).map(|s| (s.lo, s.hi)).unwrap();
    if k == 0 {
        return vec![vec![]];
    }
    stack.push((0, range(0).0));
    while let Some((d, v)) = stack.pop() {
        if v > range(d).1 {
            continue;
        }
        stack.push((d, v + 1));
        cur[d] = v;
        let ok = slabs.iter().filter(|s| s.last == d).all(|s| {
            let x = dot(&cur[..=d], &s.w[..=d]);
            s.lo <= x && x <= s.hi
        });
        if !ok {
            continue;
        }
        if d + 1 < k {
            stack.push((d + 1, range(d + 1).0));
        } else if known.contains(&cur) || minimize(&a, &rhs(&cur, None, n), None) != LpOutcome::Infeasible {
            out.push(cur.clone());
        }
    }
    out.sort();
    out
}

/// Scale separating the lift levels of consecutive polynomials.
const LIFT_SCALE: i64 = 10_000;
const LIFT_MAX: i64 = 1000;
const DELTA_DEN_BITS: u32 = 40;
const DELTA_NUM_BITS: u32 = 20;
const DELTA_CANDIDATES: usize = 4;

/// Numerators of `δ` over the denominator `2^DELTA_DEN_BITS`.
fn random_delta<R: Rng>(rng: &mut R, k: usize, sign: Option<i64>) -> Vec<i64> {
    (0..k)
        .map(|_| {
            let mag = rng.gen_range((1i64 << (DELTA_NUM_BITS - 1))..(1i64 << DELTA_NUM_BITS));
            sign.unwrap_or(if rng.gen_bool(0.5) { 1 } else { -1 }) * mag
        })
        .collect()
}

fn delta_rational(num: &[i64]) -> Vec<BigRational> {
    let den = BigInt::from(1u64) << DELTA_DEN_BITS;
    num.iter().map(|&d| BigRational::new(BigInt::from(d), den.clone())).collect()
}

/// Necessary condition for `p - δ ∈ Q` from the slabs alone.
fn slab_admits(slabs: &[Slab], p: &[i64], delta: &[i64]) -> bool {
    let den = 1i128 << DELTA_DEN_BITS;
    slabs.iter().all(|s| {
        let x = dot(p, &s.w) as i128 * den - s.w.iter().zip(delta).map(|(w, d)| (*w as i128) * (*d as i128)).sum::<i128>();
        s.lo as i128 * den <= x && x <= s.hi as i128 * den
    })
}

/// Lifting in which each polynomial dominates all later ones.
fn random_lifting<R: Rng>(rng: &mut R, supports: &[SupportSet]) -> Vec<Vec<BigRational>> {
    let n = supports.len();
    supports
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let scale = num_traits::pow(BigInt::from(LIFT_SCALE), n - 1 - i);
            s.points.iter().map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(1..=LIFT_MAX)) * &scale)).collect()
        })
        .collect()
}

/// Chooses a perturbation giving few lattice points, lifts the supports and
/// locates the cell of every lattice point of `Q + δ`.
pub fn mixed_subdivision(supports: &[SupportSet], lattice: &[Vec<i64>], k: usize, seed: u64) -> Result<Subdivision, ResultantError> {
    let n = supports.len();
    let mut rng = seed::rng(seed);
    let a = constraint_matrix(supports, k);
    let slabs = slabs(supports, k);
    let mut best: Option<(Vec<BigRational>, Vec<Vec<i64>>)> = None;
    for c in 0..DELTA_CANDIDATES {
        let sign = match c {
            0 => Some(1),
            1 => Some(-1),
            _ => None,
        };
        let num = random_delta(&mut rng, k, sign);
        let delta = delta_rational(&num);
        let pts: Vec<Vec<i64>> = lattice
            .iter()
            .filter(|p| slab_admits(&slabs, p, &num))
            .filter(|p| minimize(&a, &rhs(p, Some(&delta), n), None) != LpOutcome::Infeasible)
            .cloned()
            .collect();
        if best.as_ref().is_none_or(|(_, b)| pts.len() < b.len()) {
            best = Some((delta, pts));
        }
    }
    let (delta, points) = best.expect("at least one candidate");
    let values = random_lifting(&mut rng, supports);
    let cost: Vec<BigRational> = values.iter().flatten().cloned().collect();
    let mut content = Vec::with_capacity(points.len());
    for p in &points {
        let LpOutcome::Optimal(sol) = minimize(&a, &rhs(p, Some(&delta), n), Some(&cost)) else {
            return Err(ResultantError::DegenerateLifting("lattice point left the sum".into()));
        };
        if !sol.unique {
            return Err(ResultantError::DegenerateLifting("lifting is not generic".into()));
        }
        let mut faces: Vec<Vec<usize>> = Vec::with_capacity(n);
        let mut off = 0;
        for s in supports {
            faces.push((0..s.points.len()).filter(|&j| !sol.x[off + j].is_zero()).collect());
            off += s.points.len();
        }
        let dim: usize = faces.iter().map(|f| f.len() - 1).sum();
        if dim != k {
            return Err(ResultantError::DegenerateLifting("cell is not fine".into()));
        }
        let verts: Vec<usize> = (0..n).filter(|&i| faces[i].len() == 1).collect();
        let &poly = verts.last().expect("a fine cell has a vertex summand");
        let mixed = verts.len() == 1 && faces.iter().enumerate().all(|(i, f)| i == poly || f.len() == 2);
        content.push(RowContent { poly, support_point: faces[poly][0], mixed });
    }
    Ok(Subdivision { points, content, lifting: Lifting { values, delta } })
}
