#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sdres::diffpoly::{CoeffRef, DiffPolynomial};
use sdres::essanalysis::is_transformally_essential;
use sdres::multipoly::{Monomial, MultiPoly};
use sdres::parse::parse_system;
use sdres::pipeline::{run_pipeline, PipelineOptions, Stage};

pub const GOLDEN: &str = include_str!("../../data/golden.sys");
pub const TOY: &str = include_str!("../../data/toy.sys");
pub const DEGENERATE: &str = include_str!("../../data/degenerate.sys");

pub fn load(text: &str) -> Vec<DiffPolynomial> {
    parse_system(text).unwrap().to_system().unwrap()
}

pub fn u(poly: u32, index: u32, shift: u32) -> MultiPoly {
    MultiPoly::var(CoeffRef::new(poly, index, shift).symbol())
}

/// Reads lines like `- δu00 δ^2u01 u02`.
pub fn parse_terms(text: &str) -> MultiPoly {
    let mut terms = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let mut it = line.split_whitespace();
        let sign: i64 = if it.next() == Some("-") { -1 } else { 1 };
        let mut pairs = Vec::new();
        for tok in it {
            let (shift, rest) = if let Some(r) = tok.strip_prefix("δ^") {
                let (d, r) = r.split_once('u').unwrap();
                (d.parse().unwrap(), r)
            } else if let Some(r) = tok.strip_prefix("δu") {
                (1, r)
            } else {
                (0, tok.strip_prefix('u').unwrap())
            };
            let b = rest.as_bytes();
            let c = CoeffRef::new((b[0] - b'0') as u32, (b[1] - b'0') as u32, shift);
            pairs.push((c.symbol(), 1));
        }
        terms.push((Monomial::from_pairs(pairs), sign.into()));
    }
    MultiPoly::from_terms(terms)
}

pub fn golden_sr() -> MultiPoly {
    parse_terms(include_str!("../data/golden_sr.txt"))
}

/// A random system text: `n` variables, `n + 1` polynomials of 2 to 4
/// terms with distinct monomials, shifts up to 2, exponents in {-1, 1, 2}.
pub fn random_system_text<R: Rng>(rng: &mut R, n: u32) -> String {
    let mut s = String::new();
    for i in 0..=n {
        s.push_str(&format!("P{i} = u"));
        let mut seen = vec![String::new()];
        for _ in 1..rng.gen_range(2..=4) {
            let mut m = String::new();
            let mut used = Vec::new();
            for _ in 0..rng.gen_range(1..=2) {
                let v = (rng.gen_range(1..=n), rng.gen_range(0..=2));
                if used.contains(&v) {
                    continue;
                }
                used.push(v);
                let e = [-1, 1, 2][rng.gen_range(0..3)];
                m.push_str(&format!("*y[{},{}]^{e}", v.0, v.1));
            }
            if !seen.contains(&m) {
                s.push_str(&format!(" + u{m}"));
                seen.push(m);
            }
        }
        s.push('\n');
    }
    s
}

/// Random transformally essential systems with every variable `y1..yn`
/// present, in generation order.
pub fn random_essential_systems(seed: u64) -> impl Iterator<Item = String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::from_fn(move || loop {
        let n = rng.gen_range(1..=3);
        let text = random_system_text(&mut rng, n);
        let Ok(src) = parse_system(&text) else { continue };
        if src.n != n as usize {
            continue;
        }
        let Ok(sys) = src.to_system() else { continue };
        if let Ok((true, _)) = is_transformally_essential(&sys, 0, false) {
            return Some(text);
        }
    })
}

/// Random essential systems whose strong essential z-system has at most
/// `max_k` variables and `max_terms` terms in total, which keeps the
/// symbolic determinants small.
pub fn small_random_systems(count: usize, seed: u64, max_k: usize, max_terms: usize) -> Vec<String> {
    random_essential_systems(seed)
        .filter(|text| {
            let opts = PipelineOptions { stop: Stage::Reduce, ..PipelineOptions::default() };
            match run_pipeline(&load(text), &opts) {
                Ok(r) => r.reduction.is_some_and(|red| {
                    red.alg_kept.len() <= max_k && red.zsystem.iter().map(|z| z.terms.len()).sum::<usize>() <= max_terms
                }),
                Err(_) => false,
            }
        })
        .take(count)
        .collect()
}

/// Evaluates `sr` at a random point of the variety: every `y_j^{(s)}` and
/// every non-leading coefficient random, each leading coefficient
/// `δ^l u_i0` solved from `δ^l P_i = 0`. True when all trials give zero.
pub fn vanishes_at_random_points(system: &[DiffPolynomial], sr: &MultiPoly, trials: u64, seed: u64) -> bool {
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use std::collections::HashMap;
    let max_shift = sr.symbols().into_iter().map(|s| CoeffRef::from_symbol(s).shift).max().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = |v: i64| BigRational::from_integer(v.into());
    (0..trials).all(|_| {
        let mut y: HashMap<(u32, u32), BigRational> = HashMap::new();
        let mut val: HashMap<u32, BigRational> = HashMap::new();
        for (i, f) in system.iter().enumerate() {
            for l in 0..=max_shift {
                let mut rest = BigRational::zero();
                let mut lead = BigRational::zero();
                for (k, t) in f.terms().iter().enumerate() {
                    let mut m = BigRational::one();
                    for (v, e) in t.monomial.iter() {
                        let yv = y
                            .entry((v.var, v.shift + l))
                            .or_insert_with(|| q(rng.gen_range(1..=7) * if rng.gen_bool(0.5) { 1 } else { -1 }));
                        let p = num_traits::pow(yv.clone(), e.unsigned_abs() as usize);
                        m *= if e < 0 { p.recip() } else { p };
                    }
                    if k == 0 {
                        lead = m;
                    } else {
                        let c = q(rng.gen_range(-9..=9));
                        rest += &c * m;
                        val.insert(CoeffRef::new(i as u32, k as u32, l).symbol(), c);
                    }
                }
                val.insert(CoeffRef::new(i as u32, 0, l).symbol(), -rest / lead);
            }
        }
        sr.evaluate_rational(|s| val.get(&s).cloned()).is_ok_and(|v| v.is_zero())
    })
}
