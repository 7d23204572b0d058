//! Text and structured renderings of a pipeline report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::diffpoly::{CoeffRef, Order};
use crate::multipoly::{MultiPoly, Symbol};
use crate::pipeline::PipelineReport;

/// Order matrix cell: an integer or the string `"-inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderCell(pub Order);

impl Serialize for OrderCell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Order::Finite(v) => s.serialize_i64(v),
            Order::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for OrderCell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(OrderCell(Order::Finite(v))),
            Raw::Str(s) if s == "-inf" => Ok(OrderCell(Order::NegInf)),
            Raw::Str(s) => Err(de::Error::custom(format!("bad order entry {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgLabel {
    pub poly: u32,
    pub shift: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub u: [u32; 2],
    pub shift: u32,
    pub exp: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: String,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultantTerms {
    pub terms: Vec<Term>,
}

/// The stable structured form. Absent sections are omitted, never null.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredReport {
    pub essential: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub super_essential: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kept_vars: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_matrix: Option<Vec<Vec<OrderCell>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobi: Option<Vec<OrderCell>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modified_jacobi: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alg_essential: Option<Vec<AlgLabel>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m1_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m2_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resultant: Option<ResultantTerms>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<BTreeMap<String, bool>>,
}

/// Terms of `sr`, highest first, with coefficients as decimal strings.
pub fn resultant_terms(sr: &MultiPoly) -> ResultantTerms {
    let terms = sr
        .terms()
        .rev()
        .map(|(m, c)| Term {
            coeff: c.to_string(),
            factors: m
                .pairs()
                .iter()
                .map(|&(s, e)| {
                    let r = CoeffRef::from_symbol(s);
                    Factor { u: [r.poly, r.index], shift: r.shift, exp: e }
                })
                .collect(),
        })
        .collect();
    ResultantTerms { terms }
}

impl ResultantTerms {
    /// Rebuilds the polynomial.
    pub fn to_poly(&self) -> Option<MultiPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let c: num_bigint::BigInt = t.coeff.parse().ok()?;
            let m =
                crate::multipoly::Monomial::from_pairs(t.factors.iter().map(|f| (CoeffRef::new(f.u[0], f.u[1], f.shift).symbol(), f.exp)));
            terms.push((m, c));
        }
        Some(MultiPoly::from_terms(terms))
    }
}

pub fn structured(report: &PipelineReport) -> StructuredReport {
    let bounds = report.bounds.as_ref();
    StructuredReport {
        essential: report.essential,
        super_essential: report.super_essential.clone(),
        kept_vars: report.kept_vars.clone(),
        order_matrix: bounds.map(|b| b.order_matrix.entries.iter().map(|row| row.iter().map(|&o| OrderCell(o)).collect()).collect()),
        jacobi: bounds.map(|b| b.jacobi.iter().map(|&o| OrderCell(o)).collect()),
        modified_jacobi: bounds.map(|b| b.modified.clone()),
        alg_essential: report.reduction.as_ref().map(|r| r.essential.iter().map(|p| AlgLabel { poly: p.poly, shift: p.shift }).collect()),
        m1_dim: report.result.as_ref().map(|r| r.matrices.m1_dim()),
        m2_dim: report.result.as_ref().map(|r| r.matrices.m2_dim()),
        resultant: report.result.as_ref().map(|r| resultant_terms(&r.resultant.poly)),
        seed: report.seed,
        checks: if report.checks.is_empty() { None } else { Some(report.checks.clone()) },
    }
}

pub fn to_json(report: &PipelineReport) -> String {
    let mut s = serde_json::to_string_pretty(&structured(report)).expect("report serializes");
    s.push('\n');
    s
}

pub fn coeff_name(s: Symbol) -> String {
    CoeffRef::from_symbol(s).to_string()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn matrix_lines<T: ToString>(out: &mut String, rows: &[Vec<T>]) {
    for row in rows {
        let _ = writeln!(out, "  [{}]", join(row));
    }
}

/// Human-readable report in the order the algorithm runs.
pub fn to_text(report: &PipelineReport, verbose: bool) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "seed: {}", report.seed);
    let _ = writeln!(o, "system:");
    for (i, p) in report.system.iter().enumerate() {
        let _ = writeln!(o, "  P{i} = {p}");
    }
    let _ = writeln!(o, "symbolic support matrix (columns y{}):", join(&report.support_matrix.columns).replace(", ", ", y"));
    matrix_lines(&mut o, &report.support_matrix.rows);
    let _ = writeln!(o, "rank: {}", report.rank);
    if !report.essential {
        let _ = writeln!(o, "No SDResultant for P");
        return o;
    }
    let _ = writeln!(o, "transformally essential: yes");
    if let Some(t) = &report.super_essential {
        let _ = writeln!(o, "super-essential: {{{}}}", join(t));
    }
    if let (Some(kept), Some(spec)) = (&report.kept_vars, &report.specialized) {
        let names: Vec<String> = kept.iter().map(|v| format!("y{v}")).collect();
        let _ = writeln!(o, "kept variables: {}", names.join(", "));
        let _ = writeln!(o, "specialized system:");
        for (p, i) in spec.iter().zip(report.super_essential.iter().flatten()) {
            let _ = writeln!(o, "  P{i} = {p}");
        }
    }
    if let Some(b) = &report.bounds {
        let _ = writeln!(o, "order matrix:");
        matrix_lines(&mut o, &b.order_matrix.entries);
        let _ = writeln!(o, "jacobi numbers: ({})", join(&b.jacobi));
        let gcds: Vec<String> = b.column_gcds.iter().map(|g| g.to_string()).collect();
        let _ = writeln!(o, "column gcds: ({})", gcds.join(", "));
        let _ = writeln!(o, "modified bounds: ({})", join(&b.modified));
    }
    if let Some(r) = &report.reduction {
        let _ = writeln!(o, "prolonged polynomials: {}", r.prolonged.len());
        let _ = writeln!(o, "p: {}", r.p_offset);
        let _ = writeln!(o, "essential algebraic system:");
        for p in &r.essential {
            let label = match p.shift {
                0 => format!("P{}", p.poly),
                1 => format!("δP{}", p.poly),
                l => format!("δ^{l}P{}", p.poly),
            };
            if verbose {
                let _ = writeln!(o, "  {label} = {p}");
            } else {
                let _ = writeln!(o, "  {label}");
            }
        }
        let _ = writeln!(o, "substitution:");
        for i in 0..r.lattice.basis.len() {
            let m: Vec<String> =
                r.lattice.z_monomial(i).iter().map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") }).collect();
            let _ = writeln!(o, "  z{} = {}", i + 1, m.join("*"));
        }
        let _ = writeln!(o, "z-system:");
        for z in &r.zsystem {
            let _ = writeln!(o, "  {z}");
        }
    }
    if let Some(res) = &report.result {
        let m = &res.matrices;
        let _ = writeln!(o, "M1: {0}x{0}", m.m1_dim());
        let _ = writeln!(o, "M2: {0}x{0}", m.m2_dim());
        if verbose {
            let render = |rows: Vec<Vec<MultiPoly>>| -> Vec<Vec<String>> {
                rows.iter().map(|r| r.iter().map(|e| e.display_with(coeff_name)).collect()).collect()
            };
            let _ = writeln!(o, "M1 =");
            matrix_lines(&mut o, &render(m.m1.clone()));
            let _ = writeln!(o, "M2 = rows/columns {{{}}} of M1", join(&m.m2_rows));
        }
        let sr = &res.resultant.poly;
        let _ = writeln!(o, "SR ({} terms, total degree {}):", sr.num_terms(), sr.total_degree().unwrap_or(0));
        let _ = writeln!(o, "  {}", sr.display_with(coeff_name));
        let _ = writeln!(o, "block degrees: ({})", join(&res.resultant.block_degrees));
        if let Some(b) = &report.bounds {
            for ((i, ord), bound) in res.orders.iter().zip(&b.modified) {
                let _ = writeln!(o, "ord(SR, u{i}) = {ord} <= {bound}");
            }
        }
    }
    if !report.checks.is_empty() {
        let _ = writeln!(o, "checks:");
        for (k, v) in &report.checks {
            let _ = writeln!(o, "  {k}: {}", if *v { "ok" } else { "FAILED" });
        }
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_system;
    use crate::pipeline::{run_source, PipelineOptions, Stage};

    fn report(text: &str, stop: Stage) -> PipelineReport {
        let opts = PipelineOptions { stop, ..PipelineOptions::default() };
        run_source(&parse_system(text).unwrap(), &opts).unwrap()
    }

    #[test]
    fn toy_json_round_trip() {
        let r = report(include_str!("../data/toy.sys"), Stage::Resultant);
        let s = to_json(&r);
        let back: StructuredReport = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string_pretty(&back).unwrap() + "\n", s);
        let sr = back.resultant.unwrap().to_poly().unwrap();
        assert_eq!(sr, r.result.unwrap().resultant.poly);
    }

    #[test]
    fn empty_sections_are_omitted() {
        let r = report(include_str!("../data/golden.sys"), Stage::Super);
        let s = to_json(&r);
        assert!(!s.contains("null"));
        assert!(!s.contains("m1_dim"));
        assert!(s.contains("\"super_essential\""));
    }

    #[test]
    fn negative_path_text() {
        let r = report(include_str!("../data/degenerate.sys"), Stage::Resultant);
        assert!(to_text(&r, false).contains("No SDResultant for P"));
        let v: serde_json::Value = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(v["essential"], serde_json::Value::Bool(false));
    }

    #[test]
    fn order_cells() {
        let cells = vec![OrderCell(Order::Finite(2)), OrderCell(Order::NegInf)];
        let s = serde_json::to_string(&cells).unwrap();
        assert_eq!(s, r#"[2,"-inf"]"#);
        assert_eq!(serde_json::from_str::<Vec<OrderCell>>(&s).unwrap(), cells);
        assert!(serde_json::from_str::<OrderCell>(r#""inf""#).is_err());
    }

    #[test]
    fn term_factors() {
        let sr = MultiPoly::var(CoeffRef::new(0, 0, 1).symbol()).mul(&MultiPoly::var(CoeffRef::new(0, 1, 2).symbol())).neg();
        let t = resultant_terms(&sr);
        assert_eq!(t.terms[0].coeff, "-1");
        assert_eq!(t.terms[0].factors[0], Factor { u: [0, 0], shift: 1, exp: 1 });
    }
}
