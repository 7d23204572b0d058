//! Dense two-phase simplex over the rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Optimal(LpSolution),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub x: Vec<BigRational>,
    pub value: BigRational,
    /// Every nonbasic reduced cost is strictly positive.
    pub unique: bool,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [BigRational]) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (x, p) in obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes with reduced costs held in `obj` (last entry is minus the
    /// objective value). Columns `>= limit` never enter.
    fn run(&mut self, obj: &mut [BigRational], limit: usize) {
        loop {
            let Some(c) = (0..limit).find(|&j| obj[j].is_negative()) else {
                return;
            };
            let rhs = self.ncols;
            let mut best: Option<(BigRational, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((q, _, b)) => ratio < *q || (ratio == *q && self.basis[i] < *b),
                };
                if better {
                    best = Some((ratio, i, self.basis[i]));
                }
            }
            let (_, r, _) = best.expect("bounded problem");
            self.pivot(r, c, obj);
        }
    }
}

/// Minimizes `c·x` subject to `a x = b`, `x ≥ 0`; with `c = None` only
/// feasibility is decided. The feasible region must be bounded.
pub fn minimize(a: &[Vec<BigRational>], b: &[BigRational], c: Option<&[BigRational]>) -> LpOutcome {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let ncols = n + m;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        let neg = bi.is_negative();
        let mut row: Vec<BigRational> = ai.iter().map(|x| if neg { -x } else { x.clone() }).collect();
        row.extend((0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
        row.push(if neg { -bi } else { bi.clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..n + m).collect(), ncols };
    // phase 1: reduced costs of the artificial objective
    let mut obj = vec![BigRational::zero(); ncols + 1];
    for row in &t.rows {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[ncols] -= &row[ncols];
    }
    t.run(&mut obj, n);
    if !obj[ncols].is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive zero-level artificials out of the basis
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => t.pivot(r, j, &mut obj),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    let cost: Vec<BigRational> = match c {
        Some(c) => c.to_vec(),
        None => vec![BigRational::zero(); n],
    };
    let mut obj = vec![BigRational::zero(); ncols + 1];
    obj[..n].clone_from_slice(&cost);
    for (i, &bj) in t.basis.iter().enumerate() {
        if obj[bj].is_zero() {
            continue;
        }
        let f = obj[bj].clone();
        for (x, p) in obj.iter_mut().zip(&t.rows[i]) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
    t.run(&mut obj, n);
    let mut x = vec![BigRational::zero(); n];
    for (i, &bj) in t.basis.iter().enumerate() {
        x[bj] = t.rows[i][ncols].clone();
    }
    let unique = (0..n).filter(|j| !t.basis.contains(j)).all(|j| obj[j].is_positive());
    LpOutcome::Optimal(LpSolution { x, value: -obj[ncols].clone(), unique })
}
