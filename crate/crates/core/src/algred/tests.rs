use super::*;
use crate::essanalysis::{modified_jacobi_bounds, select_and_specialize};
use crate::parse::parse_system;

fn specialized_golden() -> (Vec<DiffPolynomial>, Vec<i64>) {
    let sys = parse_system(include_str!("../../data/golden.sys")).unwrap().to_system().unwrap();
    let spec = select_and_specialize(&sys[..3], 0, None, false).unwrap();
    let b = modified_jacobi_bounds(&spec.system, &spec.kept).unwrap();
    (spec.system, b.modified)
}

fn labels(alg: &[AlgPolynomial]) -> Vec<(u32, u32)> {
    alg.iter().map(AlgPolynomial::label).collect()
}

fn y(var: u32, shift: u32) -> VarRef {
    VarRef::new(var, shift)
}

#[test]
fn golden_reduction_chain() {
    let (sys, bounds) = specialized_golden();
    let alg = prolong(&sys, &bounds);
    assert_eq!(alg.len(), 10);
    for a in &alg {
        assert!(a.terms.iter().all(|t| t.coeffs.iter().all(|c| c.shift == a.shift && c.poly == a.poly)));
        assert!(a.terms[0].exps.is_empty());
    }
    let tagged: Vec<(u32, i64)> = (0..3).map(|i| (i as u32, bounds[i])).collect();
    let (reduced, p) = p_offset_reduce(&alg, &tagged, 11).unwrap();
    assert_eq!(p, 1);
    assert_eq!(reduced.len(), 7);
    let ess = find_minimal_essential(&reduced, 12).unwrap();
    assert_eq!(labels(&ess), vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0), (2, 1)]);
    assert_eq!(alg_variables(&ess).len(), 8);

    let (vsys, kept) = variable_essential_reduce(&ess, 13).unwrap();
    assert_eq!(kept, vec![y(1, 0), y(1, 1), y(1, 2), y(1, 3), y(4, 1), y(4, 2)]);
    let (z, map) = strong_essential_transform(&vsys, &kept).unwrap();
    assert_eq!(z.len(), 7);
    assert_eq!(map.basis.len(), 6);
    for p in &z {
        for t in &p.terms[1..] {
            assert_eq!(t.exps.iter().filter(|&&e| e == 1).count(), 1);
            assert_eq!(t.exps.iter().filter(|&&e| e != 0).count(), 1);
        }
    }
    let mut zs: Vec<BTreeMap<VarRef, i64>> = (0..6).map(|i| map.z_monomial(i)).collect();
    zs.sort();
    let mono = |p: &[(u32, u32, i64)]| -> BTreeMap<VarRef, i64> { p.iter().map(|&(v, s, e)| (y(v, s), e)).collect() };
    let mut want = vec![
        mono(&[(1, 0, 2), (4, 1, 1)]),
        mono(&[(1, 1, 2), (4, 1, 1), (4, 2, 1)]),
        mono(&[(1, 2, 2), (4, 2, 1)]),
        mono(&[(1, 1, 2)]),
        mono(&[(1, 2, 2)]),
        mono(&[(1, 3, 2)]),
    ];
    want.sort();
    assert_eq!(zs, want);
}

#[test]
fn zero_bounds_prolong_to_the_system() {
    let (sys, _) = specialized_golden();
    let alg = prolong(&sys, &[0, 0, 0]);
    assert_eq!(labels(&alg), vec![(0, 0), (1, 0), (2, 0)]);
}

#[test]
fn proportional_pair_is_the_essential_subset() {
    let sys = parse_system("P0 = u + u*y[1,0]*y[2,0]\nP1 = u + u*y[1,0]^2*y[2,0]^2\nP2 = u + u*y[2,0]").unwrap().to_system().unwrap();
    let alg = prolong(&sys, &[0, 0, 0]);
    let ess = find_minimal_essential(&alg, 1).unwrap();
    assert_eq!(labels(&ess), vec![(0, 0), (1, 0)]);
}

#[test]
fn duplicated_polynomial_raises_p() {
    let sys = parse_system("P0 = u + u*y[1,0]\nP1 = u + u*y[1,1]").unwrap().to_system().unwrap();
    let alg = prolong(&sys, &[1, 0]);
    let (_, p0) = p_offset_reduce(&alg, &[(0, 1), (1, 0)], 3).unwrap();
    assert_eq!(p0, 0);
    let alg2 = prolong(&sys, &[2, 1]);
    let (red, p1) = p_offset_reduce(&alg2, &[(0, 2), (1, 1)], 3).unwrap();
    assert_eq!(p1, 1);
    assert_eq!(labels(&red), vec![(0, 0), (0, 1), (1, 0)]);
}

#[test]
fn unit_supports_give_identity_map() {
    let sys = parse_system("P0 = u + u*y[1,0]\nP1 = u + u*y[1,0]^-1").unwrap().to_system().unwrap();
    let alg = prolong(&sys, &[0, 0]);
    let vars = alg_variables(&alg);
    let (z, map) = strong_essential_transform(&alg, &vars).unwrap();
    assert_eq!(map.basis, vec![vec![BigInt::from(1)]]);
    assert_eq!(z[1].terms[1].exps, vec![-1]);
    assert_eq!(map.to_original(&[-1]), vec![BigInt::from(-1)]);
}

#[test]
fn non_primitive_lattice_is_rescaled() {
    let sys = parse_system("P0 = u + u*y[1,0]^2\nP1 = u + u*y[1,0]^4").unwrap().to_system().unwrap();
    let alg = prolong(&sys, &[0, 0]);
    let (z, map) = strong_essential_transform(&alg, &alg_variables(&alg)).unwrap();
    assert_eq!(map.basis, vec![vec![BigInt::from(2)]]);
    assert_eq!(z[1].terms[1].exps, vec![2]);
    assert_eq!(map.to_z(&[3]), None);
}
