use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Symbol};
use super::PolyError;

/// Sparse multivariate polynomial with arbitrary-precision integer
/// coefficients. Terms are kept in graded-lex order; zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(s: Symbol) -> Self {
        Self::term(BigInt::one(), Monomial::var(s))
    }

    pub fn term(c: BigInt, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().map(|(m, c)| m.is_one() && c.is_one()) == Some(true)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Highest total degree in the symbols accepted by `pred`.
    pub fn degree_in<F: Fn(Symbol) -> bool>(&self, pred: F) -> Option<u32> {
        self.terms.keys().map(|m| m.pairs().iter().filter(|(s, _)| pred(*s)).map(|(_, e)| *e).sum()).max()
    }

    /// Lowest total degree in the symbols accepted by `pred`.
    pub fn min_degree_in<F: Fn(Symbol) -> bool>(&self, pred: F) -> Option<u32> {
        self.terms.keys().map(|m| m.pairs().iter().filter(|(s, _)| pred(*s)).map(|(_, e)| *e).sum()).min()
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.terms.keys().flat_map(|m| m.pairs().iter().map(|&(s, _)| s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let (small, big) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut out = MultiPoly::zero();
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Exact quotient `self / divisor`; fails unless the division leaves no
    /// remainder.
    pub fn exact_divide(&self, divisor: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let (lm_b, lc_b) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let (lm_b, lc_b) = (lm_b.clone(), lc_b.clone());
        if divisor.terms.len() == 1 {
            // monomial divisor: divide termwise
            let mut q = MultiPoly::zero();
            for (m, c) in &self.terms {
                let qm = m.div(&lm_b).ok_or(PolyError::NotDivisible)?;
                let (qc, r) = c.div_rem(&lc_b);
                if !r.is_zero() {
                    return Err(PolyError::NotDivisible);
                }
                q.terms.insert(qm, qc);
            }
            return Ok(q);
        }
        let mut rem = self.clone();
        let mut q = MultiPoly::zero();
        while let Some((lm_r, lc_r)) = rem.terms.iter().next_back() {
            let qm = lm_r.div(&lm_b).ok_or(PolyError::NotDivisible)?;
            let (qc, r) = lc_r.div_rem(&lc_b);
            if !r.is_zero() {
                return Err(PolyError::NotDivisible);
            }
            for (m, c) in &divisor.terms {
                rem.add_term(m.mul(&qm), -(c * &qc));
            }
            q.add_term(qm, qc);
        }
        Ok(q)
    }

    /// Integer value at a full assignment of the symbols.
    pub fn evaluate<F>(&self, assignment: F) -> Result<BigInt, PolyError>
    where
        F: Fn(Symbol) -> Option<BigInt>,
    {
        let mut cache: BTreeMap<Symbol, BigInt> = BTreeMap::new();
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(s, e) in m.pairs() {
                let v = match cache.get(&s) {
                    Some(v) => v.clone(),
                    None => {
                        let v = assignment(s).ok_or(PolyError::MissingSymbol(s))?;
                        cache.insert(s, v.clone());
                        v
                    }
                };
                t *= num_traits::pow(v, e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Rational value at a full assignment of the symbols.
    pub fn evaluate_rational<F>(&self, assignment: F) -> Result<BigRational, PolyError>
    where
        F: Fn(Symbol) -> Option<BigRational>,
    {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for &(s, e) in m.pairs() {
                let v = assignment(s).ok_or(PolyError::MissingSymbol(s))?;
                t *= num_traits::pow(v, e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the integer content and makes the leading coefficient
    /// positive.
    pub fn normalized(&self) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let mut g = self.content();
        if self.leading_term().map(|(_, c)| c.is_negative()) == Some(true) {
            g = -g;
        }
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c / &g)).collect() }
    }

    /// Renders with caller-supplied symbol names, highest term first.
    pub fn display_with<F: Fn(Symbol) -> String>(&self, name: F) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> =
                m.pairs().iter().map(|&(v, e)| if e == 1 { name(v) } else { format!("{}^{}", name(v), e) }).collect();
            if factors.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|s| format!("s{}", s)))
    }
}

/// Reads the `Display` form back: `[-]c*s0^2*s3 + ... - s1`.
impl FromStr for MultiPoly {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let src: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let number = |pos: &mut usize| -> Option<String> {
            let start = *pos;
            while *pos < src.len() && src[*pos].is_ascii_digit() {
                *pos += 1;
            }
            (*pos > start).then(|| src[start..*pos].iter().collect())
        };
        let mut terms = Vec::new();
        while pos < src.len() {
            let mut sign = BigInt::one();
            match src[pos] {
                '-' => {
                    sign = -sign;
                    pos += 1;
                }
                '+' if pos > 0 => pos += 1,
                _ if pos > 0 => return Err(format!("expected sign at {pos}")),
                _ => {}
            }
            let mut coeff = sign;
            let mut pairs = Vec::new();
            loop {
                if pos < src.len() && src[pos] == 's' {
                    pos += 1;
                    let sym = number(&mut pos).ok_or(format!("missing symbol index at {pos}"))?;
                    let mut e = 1u32;
                    if pos < src.len() && src[pos] == '^' {
                        pos += 1;
                        e = number(&mut pos).ok_or(format!("missing exponent at {pos}"))?.parse().map_err(|e| format!("{e}"))?;
                    }
                    pairs.push((sym.parse::<Symbol>().map_err(|e| format!("{e}"))?, e));
                } else {
                    let c = number(&mut pos).ok_or(format!("expected factor at {pos}"))?;
                    coeff *= c.parse::<BigInt>().map_err(|e| format!("{e}"))?;
                }
                if pos < src.len() && src[pos] == '*' {
                    pos += 1;
                } else {
                    break;
                }
            }
            terms.push((Monomial::from_pairs(pairs), coeff));
        }
        if terms.len() == 1 && terms[0].0.is_one() && terms[0].1.is_zero() {
            return Ok(MultiPoly::zero());
        }
        Ok(MultiPoly::from_terms(terms))
    }
}
