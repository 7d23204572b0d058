use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::multipoly::UniPoly;

use super::{CoeffRef, DiffPolynomial, Order};

/// `Σ_k u_k·g_k(x)`; zero polynomials are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolicEntry(BTreeMap<CoeffRef, UniPoly>);

impl SymbolicEntry {
    pub fn zero() -> Self {
        SymbolicEntry(BTreeMap::new())
    }

    pub fn add_term(&mut self, c: CoeffRef, g: &UniPoly) {
        let sum = match self.0.get(&c) {
            Some(old) => old.add(g),
            None => g.clone(),
        };
        if sum.is_zero() {
            self.0.remove(&c);
        } else {
            self.0.insert(c, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CoeffRef, &UniPoly)> {
        self.0.iter()
    }

    /// Value in `Z[x]` after substituting integers for the coefficients.
    pub fn specialize<F: FnMut(CoeffRef) -> BigInt>(&self, mut value: F) -> UniPoly {
        self.0.iter().fold(UniPoly::zero(), |acc, (c, g)| acc.add(&g.scale(&value(*c))))
    }
}

impl fmt::Display for SymbolicEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (c, g)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if g.degree() == Some(0) {
                if g.leading().is_some_and(|l| *l == BigInt::from(1)) {
                    write!(f, "{c}")?;
                } else {
                    write!(f, "{g}*{c}")?;
                }
            } else {
                write!(f, "({g})*{c}")?;
            }
        }
        Ok(())
    }
}

/// Rows are symbolic support vectors; `columns[j]` is the variable index of
/// column `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportMatrix {
    pub columns: Vec<u32>,
    pub rows: Vec<Vec<SymbolicEntry>>,
}

impl SupportMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn select_rows(&self, rows: &[usize]) -> SupportMatrix {
        SupportMatrix { columns: self.columns.clone(), rows: rows.iter().map(|&r| self.rows[r].clone()).collect() }
    }

    pub fn select_columns(&self, cols: &[usize]) -> SupportMatrix {
        SupportMatrix {
            columns: cols.iter().map(|&c| self.columns[c]).collect(),
            rows: self.rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect(),
        }
    }
}

/// Component `j` is `Σ_k u_k·d_kj(x)` where `d_kj` encodes the exponents of
/// `y_j^{(s)}` in `M_k/M_0` as coefficients of `x^s`.
pub fn symbolic_support_vector(f: &DiffPolynomial, columns: &[u32]) -> Vec<SymbolicEntry> {
    let mut out = vec![SymbolicEntry::zero(); columns.len()];
    let Some(base) = f.distinguished() else {
        return out;
    };
    for t in &f.terms()[1..] {
        let ratio = t.monomial.div(&base.monomial);
        let mut per_col: BTreeMap<u32, Vec<(usize, i64)>> = BTreeMap::new();
        for (v, e) in ratio.iter() {
            per_col.entry(v.var).or_default().push((v.shift as usize, e));
        }
        for (j, &var) in columns.iter().enumerate() {
            let Some(list) = per_col.get(&var) else { continue };
            let mut coeffs = vec![BigInt::from(0); list.iter().map(|p| p.0).max().unwrap_or(0) + 1];
            for &(s, e) in list {
                coeffs[s] += e;
            }
            out[j].add_term(t.coeff, &UniPoly::from_coeffs(coeffs));
        }
    }
    out
}

pub fn symbolic_support_matrix(system: &[DiffPolynomial], columns: &[u32]) -> SupportMatrix {
    SupportMatrix { columns: columns.to_vec(), rows: system.iter().map(|f| symbolic_support_vector(f, columns)).collect() }
}

/// `entries[i][j] = ord(N(P_i), y_{columns[j]})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderMatrix {
    pub columns: Vec<u32>,
    pub entries: Vec<Vec<Order>>,
}

impl OrderMatrix {
    pub fn without_row(&self, i: usize) -> OrderMatrix {
        let entries = self.entries.iter().enumerate().filter(|(r, _)| *r != i).map(|(_, row)| row.clone()).collect();
        OrderMatrix { columns: self.columns.clone(), entries }
    }
}

pub fn order_matrix(system: &[DiffPolynomial], columns: &[u32]) -> OrderMatrix {
    let entries = system.iter().map(|f| columns.iter().map(|&v| f.order_of(Some(v))).collect()).collect();
    OrderMatrix { columns: columns.to_vec(), entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::{LaurentMonomial, VarRef};

    fn mono(p: &[(u32, u32, i64)]) -> LaurentMonomial {
        LaurentMonomial::from_pairs(p.iter().map(|&(v, s, e)| (VarRef::new(v, s), e)))
    }

    fn p0() -> DiffPolynomial {
        DiffPolynomial::generic(
            0,
            vec![
                LaurentMonomial::one(),
                mono(&[(1, 1, 2), (2, 1, 2), (3, 1, 1)]),
                mono(&[(1, 0, 2), (2, 0, 1), (3, 0, 1), (4, 0, 1), (4, 1, 1)]),
            ],
        )
    }

    #[test]
    fn support_vector_of_first_polynomial() {
        let w = symbolic_support_vector(&p0(), &[1, 2, 3, 4]);
        let u01 = CoeffRef::new(0, 1, 0);
        let u02 = CoeffRef::new(0, 2, 0);
        let get = |j: usize, c: CoeffRef| w[j].iter().find(|(k, _)| **k == c).map(|(_, g)| g.clone());
        assert_eq!(get(0, u01), Some(UniPoly::from_i64(&[0, 2])));
        assert_eq!(get(0, u02), Some(UniPoly::from_i64(&[2])));
        assert_eq!(get(1, u01), Some(UniPoly::from_i64(&[0, 2])));
        assert_eq!(get(1, u02), Some(UniPoly::from_i64(&[1])));
        assert_eq!(get(2, u01), Some(UniPoly::from_i64(&[0, 1])));
        assert_eq!(get(3, u01), None);
        assert_eq!(get(3, u02), Some(UniPoly::from_i64(&[1, 1])));
    }

    #[test]
    fn constant_polynomial_has_zero_vector() {
        let f = DiffPolynomial::generic(0, vec![LaurentMonomial::one(), LaurentMonomial::one()]);
        assert!(symbolic_support_vector(&f, &[1, 2]).iter().all(SymbolicEntry::is_zero));
    }

    #[test]
    fn shifting_multiplies_by_x() {
        let f = p0();
        let w = symbolic_support_vector(&f, &[1, 2, 3, 4]);
        let ws = symbolic_support_vector(&f.shift(1), &[1, 2, 3, 4]);
        for (a, b) in w.iter().zip(&ws) {
            let shifted: Vec<_> = a.iter().map(|(c, g)| (c.shifted(1), g.shift_up(1))).collect();
            let got: Vec<_> = b.iter().map(|(c, g)| (*c, g.clone())).collect();
            assert_eq!(shifted, got);
        }
    }

    #[test]
    fn order_matrix_absent_column() {
        let f = DiffPolynomial::generic(0, vec![LaurentMonomial::one(), mono(&[(1, 1, 1)])]);
        let a = order_matrix(&[f], &[1, 2]);
        assert_eq!(a.entries, vec![vec![Order::Finite(1), Order::NegInf]]);
    }
}
