use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-style Hermite normal form of an integer matrix; returns the nonzero
/// rows, which form a basis of the row lattice.
pub fn hermite_basis(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            // smallest nonzero entry in column c at or below row r becomes the pivot
            let Some(p) = (r..m.len()).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].abs()) else {
                break;
            };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                for j in c..ncols {
                    let t = &q * &m[r][j];
                    m[i][j] -= t;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if q.is_zero() {
                continue;
            }
            for j in c..ncols {
                let t = &q * &m[r][j];
                m[i][j] -= t;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Inverse of a square integer matrix over the rationals.
pub fn rational_inverse(b: &[Vec<BigInt>]) -> Option<Vec<Vec<BigRational>>> {
    let n = b.len();
    let mut a: Vec<Vec<BigRational>> = b
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..2 * n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn integer_determinant(b: &[Vec<BigInt>]) -> BigInt {
    crate::multipoly::determinant(b)
}

/// Rank over the rationals.
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    crate::multipoly::echelon(rows.to_vec()).rank
}
