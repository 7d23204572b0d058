use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{MultiPoly, UniPoly};

/// Integral domain with exact division, as needed by fraction-free
/// elimination.
pub trait ExactDomain: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / other`, `None` when the quotient is not exact.
    fn div_exact(&self, other: &Self) -> Option<Self>;
    /// Rough size used to prefer cheap pivots.
    fn size_hint(&self) -> usize {
        1
    }
}

impl ExactDomain for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        let (q, r) = self.div_rem(other);
        Zero::is_zero(&r).then_some(q)
    }
    fn size_hint(&self) -> usize {
        self.bits() as usize
    }
}

impl ExactDomain for UniPoly {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::constant(<BigInt as One>::one())
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        UniPoly::mul(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        UniPoly::sub(self, other)
    }
    fn neg(&self) -> Self {
        UniPoly::neg(self)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        UniPoly::div_exact(self, other)
    }
    fn size_hint(&self) -> usize {
        self.coeffs().len()
    }
}

impl ExactDomain for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        MultiPoly::mul(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        MultiPoly::sub(self, other)
    }
    fn neg(&self) -> Self {
        MultiPoly::neg(self)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.exact_divide(other).ok()
    }
    fn size_hint(&self) -> usize {
        self.num_terms()
    }
}

/// Rank and pivot columns of a row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub rank: usize,
    /// Pivot columns in increasing order; the lexicographically smallest
    /// maximal independent column set.
    pub pivots: Vec<usize>,
}

/// Fraction-free Gaussian elimination to row echelon form over the fraction
/// field of `T`. Columns are scanned left to right.
pub fn echelon<T: ExactDomain>(mut m: Vec<Vec<T>>) -> Echelon {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = T::one();
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].size_hint()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let prow = &top[r];
        let piv = &prow[c];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                let v = if lead.is_zero() {
                    if row[j].is_zero() {
                        continue;
                    }
                    piv.mul(&row[j])
                } else {
                    piv.mul(&row[j]).sub(&lead.mul(&prow[j]))
                };
                row[j] = v.div_exact(&prev).expect("fraction-free step must divide exactly");
            }
            row[c] = T::zero();
        }
        prev = piv.clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rank: r, pivots }
}

/// Determinant by fraction-free (Bareiss) elimination with full pivoting.
/// Pivots are chosen by a Markowitz-style sparsity score, then by entry size.
pub fn determinant<T: ExactDomain>(matrix: &[Vec<T>]) -> T {
    let n = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        return T::one();
    }
    let mut m: Vec<Vec<T>> = matrix.to_vec();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        let row_nnz: Vec<usize> = (0..n).map(|i| if i < k { 0 } else { (k..n).filter(|&j| !m[i][j].is_zero()).count() }).collect();
        let col_nnz: Vec<usize> = (0..n).map(|j| if j < k { 0 } else { (k..n).filter(|&i| !m[i][j].is_zero()).count() }).collect();
        let mut best: Option<((usize, usize, usize, usize), usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if m[i][j].is_zero() {
                    continue;
                }
                let key = ((row_nnz[i] - 1) * (col_nnz[j] - 1), m[i][j].size_hint(), i, j);
                if best.as_ref().is_none_or(|b| key < b.0) {
                    best = Some((key, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else {
            return T::zero();
        };
        if pi != k {
            m.swap(pi, k);
            negate = !negate;
        }
        if pj != k {
            for row in m.iter_mut() {
                row.swap(pj, k);
            }
            negate = !negate;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let prow = &top[k];
        let piv = &prow[k];
        for row in rest.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = if lead.is_zero() {
                    if row[j].is_zero() {
                        continue;
                    }
                    piv.mul(&row[j])
                } else if prow[j].is_zero() {
                    piv.mul(&row[j])
                } else {
                    piv.mul(&row[j]).sub(&lead.mul(&prow[j]))
                };
                row[j] = v.div_exact(&prev).expect("Bareiss step must divide exactly");
            }
            row[k] = T::zero();
        }
        prev = piv.clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Determinant by cofactor expansion along the sparsest row. Exponential;
/// meant for small matrices and as an independent check.
pub fn determinant_by_minors<T: ExactDomain>(matrix: &[Vec<T>]) -> T {
    let n = matrix.len();
    if n == 0 {
        return T::one();
    }
    if n == 1 {
        return matrix[0][0].clone();
    }
    let r = (0..n).min_by_key(|&i| matrix[i].iter().filter(|e| !e.is_zero()).count()).unwrap();
    let mut acc = T::zero();
    for c in 0..n {
        if matrix[r][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<T>> =
            (0..n).filter(|&i| i != r).map(|i| (0..n).filter(|&j| j != c).map(|j| matrix[i][j].clone()).collect()).collect();
        let term = matrix[r][c].mul(&determinant_by_minors(&minor));
        acc = if (r + c) % 2 == 0 { acc.sub(&term.neg()) } else { acc.sub(&term) };
    }
    acc
}
