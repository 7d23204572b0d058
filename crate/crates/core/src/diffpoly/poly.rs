use std::collections::BTreeMap;
use std::fmt;

use crate::multipoly::Symbol;

use super::DiffError;

/// The variable `y_var` transformed `shift` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarRef {
    pub var: u32,
    pub shift: u32,
}

impl VarRef {
    pub fn new(var: u32, shift: u32) -> Self {
        assert!(var >= 1, "variables are numbered from 1");
        VarRef { var, shift }
    }
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y[{},{}]", self.var, self.shift)
    }
}

const SHIFT_BITS: u32 = 10;
const INDEX_BITS: u32 = 10;
const POLY_BITS: u32 = 12;

/// The coefficient `δ^shift u[poly,index]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffRef {
    pub poly: u32,
    pub index: u32,
    pub shift: u32,
}

impl CoeffRef {
    pub fn new(poly: u32, index: u32, shift: u32) -> Self {
        CoeffRef { poly, index, shift }
    }

    pub fn fits(&self) -> bool {
        self.poly < (1 << POLY_BITS) && self.index < (1 << INDEX_BITS) && self.shift < (1 << SHIFT_BITS)
    }

    /// Polynomial symbol id. The packing keeps the (poly, index, shift)
    /// order, so term orders on resultants are stable.
    pub fn symbol(&self) -> Symbol {
        debug_assert!(self.fits());
        (self.poly << (INDEX_BITS + SHIFT_BITS)) | (self.index << SHIFT_BITS) | self.shift
    }

    pub fn from_symbol(s: Symbol) -> Self {
        CoeffRef {
            poly: s >> (INDEX_BITS + SHIFT_BITS),
            index: (s >> SHIFT_BITS) & ((1 << INDEX_BITS) - 1),
            shift: s & ((1 << SHIFT_BITS) - 1),
        }
    }

    pub fn shifted(&self, l: u32) -> Self {
        CoeffRef { shift: self.shift + l, ..*self }
    }
}

impl fmt::Display for CoeffRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shift {
            0 => {}
            1 => write!(f, "δ")?,
            l => write!(f, "δ^{l}")?,
        }
        write!(f, "u{}{}", self.poly, self.index)
    }
}

/// Ord of a polynomial in a variable; `NegInf` when the variable is absent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    NegInf,
    Finite(i64),
}

impl Order {
    pub fn finite(self) -> Option<i64> {
        match self {
            Order::Finite(v) => Some(v),
            Order::NegInf => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::NegInf => write!(f, "-inf"),
            Order::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// Product of transformed variables with signed exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentMonomial(BTreeMap<VarRef, i64>);

impl LaurentMonomial {
    pub fn one() -> Self {
        LaurentMonomial(BTreeMap::new())
    }

    pub fn from_pairs<I: IntoIterator<Item = (VarRef, i64)>>(pairs: I) -> Self {
        let mut m = LaurentMonomial::one();
        for (v, e) in pairs {
            m.add_exponent(v, e);
        }
        m
    }

    fn add_exponent(&mut self, v: VarRef, e: i64) {
        let slot = self.0.entry(v).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.0.remove(&v);
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: VarRef) -> i64 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarRef, i64)> + '_ {
        self.0.iter().map(|(&v, &e)| (v, e))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (v, e) in other.iter() {
            m.add_exponent(v, e);
        }
        m
    }

    pub fn inverse(&self) -> Self {
        LaurentMonomial(self.0.iter().map(|(&v, &e)| (v, -e)).collect())
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inverse())
    }

    pub fn shift(&self, l: u32) -> Self {
        LaurentMonomial(self.0.iter().map(|(v, &e)| (VarRef { shift: v.shift + l, ..*v }, e)).collect())
    }

    /// Drops every factor whose variable fails `keep` (sets it to 1).
    pub fn retain_vars<F: Fn(u32) -> bool>(&self, keep: F) -> Self {
        LaurentMonomial(self.0.iter().filter(|(v, _)| keep(v.var)).map(|(&v, &e)| (v, e)).collect())
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.values().all(|&e| e >= 0)
    }
}

impl fmt::Display for LaurentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{v}")?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffTerm {
    pub coeff: CoeffRef,
    pub monomial: LaurentMonomial,
}

/// `Σ_k u_{ik} M_{ik}` with one generic coefficient per term. The first term
/// carries the distinguished coefficient `u_{i0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffPolynomial {
    terms: Vec<DiffTerm>,
}

impl DiffPolynomial {
    pub fn new(terms: Vec<DiffTerm>) -> Self {
        DiffPolynomial { terms }
    }

    /// Generic polynomial numbered `poly` with coefficients `u[poly,j]`.
    pub fn generic(poly: u32, monomials: Vec<LaurentMonomial>) -> Self {
        let terms =
            monomials.into_iter().enumerate().map(|(j, monomial)| DiffTerm { coeff: CoeffRef::new(poly, j as u32, 0), monomial }).collect();
        DiffPolynomial { terms }
    }

    pub fn terms(&self) -> &[DiffTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn distinguished(&self) -> Option<&DiffTerm> {
        self.terms.first()
    }

    /// Variable indices occurring in some term.
    pub fn vars(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.iter().flat_map(|t| t.monomial.iter().map(|(r, _)| r.var)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Returns `(N(f), M)` with `M·f = N(f)`, where every variable of `N(f)`
    /// has minimum exponent 0 over the terms.
    pub fn norm_form(&self) -> Result<(DiffPolynomial, LaurentMonomial), DiffError> {
        if self.is_zero() {
            return Err(DiffError::ZeroPolynomial);
        }
        let mut mins: BTreeMap<VarRef, i64> = BTreeMap::new();
        for t in &self.terms {
            for (v, _) in t.monomial.iter() {
                mins.insert(v, 0);
            }
        }
        for t in &self.terms {
            for (v, m) in mins.iter_mut() {
                *m = (*m).min(t.monomial.exponent(*v));
            }
        }
        let mult = LaurentMonomial::from_pairs(mins.into_iter().map(|(v, m)| (v, -m)));
        let terms = self.terms.iter().map(|t| DiffTerm { coeff: t.coeff, monomial: t.monomial.mul(&mult) }).collect();
        Ok((DiffPolynomial { terms }, mult))
    }

    /// The `l`-th transform: every variable and coefficient shifted by `l`.
    pub fn shift(&self, l: u32) -> DiffPolynomial {
        let terms = self.terms.iter().map(|t| DiffTerm { coeff: t.coeff.shifted(l), monomial: t.monomial.shift(l) }).collect();
        DiffPolynomial { terms }
    }

    /// Greatest effective shift of `y_var` (of any variable when `var` is
    /// `None`). Computed on the norm form.
    pub fn order_of(&self, var: Option<u32>) -> Order {
        let Ok((n, _)) = self.norm_form() else {
            return Order::NegInf;
        };
        n.terms
            .iter()
            .flat_map(|t| t.monomial.iter())
            .filter(|(v, _)| var.is_none_or(|x| v.var == x))
            .map(|(v, _)| Order::Finite(v.shift as i64))
            .max()
            .unwrap_or(Order::NegInf)
    }

    /// Sets every variable outside `keep` (and all its transforms) to 1.
    pub fn specialize<F: Fn(u32) -> bool>(&self, keep: F) -> DiffPolynomial {
        let terms = self.terms.iter().map(|t| DiffTerm { coeff: t.coeff, monomial: t.monomial.retain_vars(&keep) }).collect();
        DiffPolynomial { terms }
    }
}

impl fmt::Display for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.coeff)?;
            if !t.monomial.is_one() {
                write!(f, "*{}", t.monomial)?;
            }
        }
        Ok(())
    }
}

/// Every transformed variable occurring in `f`, sorted.
pub fn all_vars_of(f: &DiffPolynomial) -> Vec<VarRef> {
    let mut v: Vec<VarRef> = f.terms.iter().flat_map(|t| t.monomial.iter().map(|(r, _)| r)).collect();
    v.sort_unstable();
    v.dedup();
    v
}
