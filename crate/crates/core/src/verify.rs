//! Cross-checks assembled into a single report per setup.

use rayon::prelude::*;

use crate::finite::{
    finite_bracket_formal, finite_bracket_oracle, finite_bracket_oracle_z, finite_table, jacobiator, slice_shift_formal,
    sparse,
};
use crate::lambda::{LambdaPoly, ZPoly};
use crate::lie::SparseVec;
use crate::miura::miura_hom_check;
use crate::poly::DiffPoly;
use crate::pva::{jacobi_defect, skew_defect, GenTable};
use crate::rational::{frac, q, Q, Vector};
use crate::report::Report;
use crate::setup::GradedSetup;
use crate::walg::{
    e_degree, lambda_bracket_closed, virasoro, w_name, w_of, weight_defects, zeta_twist, Route, Twist, WAlgebra, WPoly,
};
use crate::zhu::zhu_iso_check;
use crate::Result;

fn wsharp(setup: &GradedSetup, u: &SparseVec) -> WPoly {
    DiffPoly::linear(&setup.sharp(u))
}

fn adapted(setup: &GradedSetup, v: &[Q]) -> SparseVec {
    sparse(&setup.to_adapted(v))
}

/// `(∂ + cλ) p`
fn d_plus(p: &WPoly, c: &Q) -> LambdaPoly {
    let mut out = LambdaPoly::from_poly(p.derivative());
    out.add_coeff(1, 0, &p.scale(c));
    out
}

fn show(p: &LambdaPoly) -> String {
    p.render(w_name)
}

/// `{w(a)_λ w(b)}` when `a` or `b` has conformal weight 1.
pub fn weight_one_formula(setup: &GradedSetup, i: usize, j: usize) -> LambdaPoly {
    let (a, b) = (setup.e_elem(i, 0), setup.e_elem(j, 0));
    let br = setup.abracket(&a, &b);
    let mut out = LambdaPoly::from_poly(wsharp(setup, &br));
    out.add_coeff(1, 0, &DiffPoly::constant(setup.aform(&a, &b)));
    out.add_coeff(0, 1, &DiffPoly::constant(setup.pair_s(&br)));
    out
}

/// `{w(a)_λ w(b)}` for `a, b` of conformal weight 3/2.
pub fn weight_three_halves_formula(setup: &GradedSetup, i: usize, j: usize) -> LambdaPoly {
    let (a, b) = (setup.e_elem(i, 0), setup.e_elem(j, 0));
    let e = adapted(setup, &setup.triple().e);
    let ab = setup.abracket(&a, &b);
    let mut out = LambdaPoly::from_poly(wsharp(setup, &ab));
    let aeb = setup.abracket(&a, &setup.abracket(&e, &b));
    out.add_assign(&d_plus(&wsharp(setup, &aeb), &q(2)));
    out.add_coeff(2, 0, &DiffPoly::constant(-setup.pair_e(&ab)));
    for (jj, n) in setup.j_minus_k(1) {
        let left = wsharp(setup, &setup.abracket(&a, setup.f_elem(jj, n)));
        let right = wsharp(setup, &setup.abracket(&setup.e_elem(jj, n + 1), &b));
        out.add_assign(&LambdaPoly::from_poly(left.mul_poly(&right)));
    }
    out.add_coeff(0, 1, &DiffPoly::constant(setup.pair_s(&ab)));
    out
}

/// `{w(f)_λ w(b)}`
pub fn wf_formula(setup: &GradedSetup, j: usize) -> LambdaPoly {
    let b = setup.e_elem(j, 0);
    let s = adapted(setup, setup.s());
    let delta = frac(setup.weight2(j), 2);
    let mut out = LambdaPoly::zero();
    for i in 0..setup.jf_len() {
        if setup.delta2(i) >= 1 {
            let w = wsharp(setup, &setup.abracket(setup.f_elem(i, 0), &b));
            out.add_assign(&LambdaPoly::from_poly(DiffPoly::var(i).mul_poly(&w)));
        }
    }
    if setup.weight2(j) != 2 {
        out.add_assign(&d_plus(&DiffPoly::var(j), &delta));
    }
    out.add_coeff(3, 0, &DiffPoly::constant(-setup.pair_e(&b) * frac(1, 2)));
    out.add_coeff(0, 1, &wsharp(setup, &setup.abracket(&s, &b)));
    out.add_coeff(1, 1, &DiffPoly::constant(delta * setup.pair_s(&b)));
    out
}

/// Weight-1, weight-3/2 and `w(f)` special cases against a bracket table.
pub fn special_case_checks(setup: &GradedSetup, table: &GenTable) -> Report {
    let n = setup.jf_len();
    let mut rep = Report::new();
    let mut one = Vec::new();
    let mut three_halves = Vec::new();
    let mut wf = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let got = table.get(i, j);
            if setup.delta2(i) == 0 || setup.delta2(j) == 0 {
                let want = weight_one_formula(setup, i, j);
                if got != &want {
                    one.push(format!("({},{}): {} vs {}", i + 1, j + 1, show(got), show(&want)));
                }
            }
            if setup.delta2(i) == 1 && setup.delta2(j) == 1 {
                let want = weight_three_halves_formula(setup, i, j);
                if got != &want {
                    three_halves.push(format!("({},{}): {} vs {}", i + 1, j + 1, show(got), show(&want)));
                }
            }
        }
    }
    let wfp = w_of(setup, &setup.triple().f);
    if !setup.triple().is_zero() {
        for j in 0..n {
            let got = table.bracket(&wfp, &DiffPoly::var(j));
            let want = wf_formula(setup, j);
            if got != want {
                wf.push(format!("w{}: {} vs {}", j + 1, show(&got), show(&want)));
            }
        }
    }
    rep.expect_none("weight-1 brackets collapse to w([a,b])+(a|b)λ+z(s|[a,b])", one);
    rep.expect_none("weight-3/2 bracket formula", three_halves);
    rep.expect_none("w(f) bracket formula", wf);
    rep
}

/// Setting `∂ = 0`, `λ = 0`, `z = 0` in the closed bracket gives the finite bracket at `z = 0`.
pub fn closed_reduces_to_finite(setup: &GradedSetup, table: &GenTable) -> Vec<String> {
    let finite = finite_table(setup);
    let n = setup.jf_len();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = table.get(i, j).coeff(0, 0).filter(|m| m.factors().iter().all(|(v, _)| v.deriv == 0));
            if c != finite[i][j].coeff(0) {
                bad.push(format!("({},{})", i + 1, j + 1));
            }
        }
    }
    bad
}

/// `{·_λ·}^ζ = ψ({·_λ·}^0)` with `ψ(w_j) = w_j + (ζ|q_j)`.
pub fn zeta_check(setup: &GradedSetup, zeta: &[Q]) -> Result<Report> {
    let tw = zeta_twist(setup, zeta)?;
    let Twist::Zeta(vals) = &tw else { unreachable!() };
    let shift: Vec<Q> = (0..setup.jf_len()).map(|j| vals[setup.adapted_index(j, 0).unwrap()].clone()).collect();
    let n = setup.jf_len();
    let bad: Vec<String> = (0..n * n)
        .into_par_iter()
        .filter_map(|c| {
            let (i, j) = (c / n, c % n);
            let got = lambda_bracket_closed(setup, i, j, &tw);
            let want = lambda_bracket_closed(setup, i, j, &Twist::Zs)
                .z0()
                .map_coeffs(|p| p.substitute(|k| Some(DiffPoly::var(k) + DiffPoly::constant(shift[k].clone()))));
            (got != want).then(|| format!("({},{}): {} vs {}", i + 1, j + 1, show(&got), show(&want)))
        })
        .collect();
    let mut rep = Report::new();
    rep.expect_none("ζ-deformed bracket is the shifted z=0 bracket", bad);
    Ok(rep)
}

/// A default element of g^e: `Σ (j+1) q^j`.
pub fn default_zeta(setup: &GradedSetup) -> Vector {
    let mut z = vec![q(0); setup.dim()];
    for j in 0..setup.jf_len() {
        crate::rational::axpy(&mut z, &q(j as i64 + 1), setup.qjup(j));
    }
    z
}

/// Skewsymmetry and Jacobi of a W-coordinate table with z specialized to `z`.
pub fn pva_axioms(setup: &GradedSetup, table: &GenTable, z: &Q) -> Report {
    let t = table.eval_z(z);
    let n = setup.jf_len();
    let g = DiffPoly::var;
    let skew: Vec<String> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !skew_defect(&t, &g(i), &g(j)).is_zero())
        .map(|(i, j)| format!("({},{})", i + 1, j + 1))
        .collect();
    let triples: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))).collect();
    let jac: Vec<String> = triples
        .par_iter()
        .filter(|&&(a, b, c)| !jacobi_defect(&t, &g(a), &g(b), &g(c)).is_empty())
        .map(|(a, b, c)| format!("({},{},{})", a + 1, b + 1, c + 1))
        .collect();
    let mut rep = Report::new();
    rep.expect_none(format!("λ-bracket skewsymmetry at z={z}"), skew);
    rep.expect_none(format!("λ-bracket Jacobi at z={z}"), jac);
    rep
}

/// Finite W-algebra checks: oracle agreement, Kostant vanishing, the slice
/// shift, skewsymmetry and Jacobi.
pub fn finite_checks(setup: &GradedSetup) -> Report {
    let n = setup.jf_len();
    let table = finite_table(setup);
    let cells: Vec<(usize, usize, bool, bool)> = (0..n * n)
        .into_par_iter()
        .map(|c| {
            let (i, j) = (c / n, c % n);
            let (p, qv) = (setup.qj(i), setup.qj(j));
            let untwisted = finite_bracket_oracle(setup, p, qv) == table[i][j].coeff(0);
            let twisted = finite_bracket_oracle_z(setup, p, qv, true) == finite_bracket_formal(setup, p, qv);
            (i, j, untwisted, twisted)
        })
        .collect();
    let label = |i: usize, j: usize| format!("({},{})", i + 1, j + 1);
    let mut rep = Report::new();
    rep.expect_none(
        "closed finite bracket equals the Φ-route oracle at z=0",
        cells.iter().filter(|c| !c.2).map(|c| label(c.0, c.1)).collect(),
    );
    rep.expect_none(
        "twisted closed finite bracket equals the Φ-route oracle",
        cells.iter().filter(|c| !c.3).map(|c| label(c.0, c.1)).collect(),
    );
    if setup.is_principal() {
        let mut nz = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !table[i][j].is_zero() {
                    nz.push(label(i, j));
                }
            }
        }
        rep.expect_none("principal nilpotent: finite bracket vanishes identically", nz);
    }
    let mut shift = Vec::new();
    let mut skew = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if slice_shift_formal(setup, &ZPoly::from_poly(table[i][j].coeff(0))) != table[i][j] {
                shift.push(label(i, j));
            }
            if !table[i][j].add(&table[j][i]).is_zero() {
                skew.push(label(i, j));
            }
        }
    }
    rep.expect_none("shift by (z^2/4)(q|e) is a Poisson isomorphism", shift);
    rep.expect_none("finite bracket is skewsymmetric", skew);
    let mut jac = Vec::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                if !jacobiator(&table, a, b, c).is_zero() {
                    jac.push(format!("({},{},{})", a + 1, b + 1, c + 1));
                }
            }
        }
    }
    rep.expect_none("finite bracket satisfies Jacobi", jac);
    rep
}

/// Agreement of the three λ-bracket routes, z-linearity and weight homogeneity.
pub fn route_checks(wa: &WAlgebra, closed: &GenTable) -> Report {
    let setup = wa.setup();
    let n = setup.jf_len();
    let direct = wa.table(Route::Direct);
    let skew = wa.table(Route::Skew);
    let mut rep = Report::new();
    let mut dc = Vec::new();
    let mut sc = Vec::new();
    let mut zdeg = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = closed.get(i, j);
            if direct.get(i, j) != c {
                dc.push(format!("({},{}): direct {} vs closed {}", i + 1, j + 1, show(direct.get(i, j)), show(c)));
            }
            if skew.get(i, j) != c {
                sc.push(format!("({},{}): skew {} vs closed {}", i + 1, j + 1, show(skew.get(i, j)), show(c)));
            }
            for t in [direct.get(i, j), c, skew.get(i, j)] {
                if t.z_degree().unwrap_or(0) > 1 {
                    zdeg.push(format!("({},{})", i + 1, j + 1));
                }
            }
        }
    }
    rep.expect_none("direct route equals closed formula", dc);
    rep.expect_none("skew-form route equals closed formula", sc);
    rep.expect_none("every λ-bracket is at most linear in z", zdeg);
    rep.expect_none("λ^k coefficient has weight Δ(a)+Δ(b)-1-k", weight_defects(setup, closed));
    rep
}

/// Generator membership, uniqueness and linear terms.
pub fn generator_checks(wa: &WAlgebra) -> Report {
    let setup = wa.setup();
    let mut rep = Report::new();
    let mut member = Vec::new();
    let mut lin = Vec::new();
    for g in wa.generators() {
        if !wa.is_in_w(&g.w) {
            member.push(w_name(g.j));
        }
        let q_part = DiffPoly::linear(&setup.e_elem(g.j, 0));
        let rest = &(&g.w - &q_part) - &g.linear_term;
        if rest.terms().any(|(m, _)| e_degree(setup, m) < 2) {
            lin.push(w_name(g.j));
        }
    }
    rep.pass("generators are unique solutions of the membership system");
    rep.expect_none("generators lie in W", member);
    rep.expect_none("w(q) - q - r(q) is at least quadratic in [e,g] variables", lin);
    rep
}

/// Options for [`verify_setup`].
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// ζ for the deformation check; [`default_zeta`] when absent.
    pub zeta: Option<Vector>,
    /// Values of z at which the λ-bracket axioms are checked; `{0, 1, -1}`
    /// when empty. Jacobi defects are quadratic in z, so three values decide
    /// the identity for formal z.
    pub z_values: Vec<Q>,
}

/// Runs every check on one setup.
pub fn verify_setup(setup: GradedSetup, opts: &VerifyOptions) -> Result<Report> {
    let mut rep = Report::new();
    rep.extend("setup", setup.validate());
    rep.extend("finite", finite_checks(&setup));
    let wa = WAlgebra::new(setup)?;
    let setup = wa.setup();
    rep.extend("generators", generator_checks(&wa));
    let closed = wa.table(Route::Closed);
    rep.extend("routes", route_checks(&wa, &closed));
    let mut special = special_case_checks(setup, &closed);
    special.expect_none("∂=λ=z=0 in the closed bracket gives the finite bracket", closed_reduces_to_finite(setup, &closed));
    rep.extend("special", special);
    if setup.jf_len() > 0 && !setup.triple().is_zero() {
        rep.extend("virasoro", virasoro(setup, &closed).checks);
    }
    let zs = if opts.z_values.is_empty() { vec![q(0), q(1), q(-1)] } else { opts.z_values.clone() };
    for z in &zs {
        rep.extend("pva", pva_axioms(setup, &closed, z));
    }
    let zeta = opts.zeta.clone().unwrap_or_else(|| default_zeta(setup));
    rep.extend("zeta", zeta_check(setup, &zeta)?);
    rep.extend("zhu", zhu_iso_check(&wa));
    rep.extend("miura", miura_hom_check(&wa));
    Ok(rep)
}

/// The standard test algebras: sl2 principal, sl3 minimal and principal,
/// sl4 rectangular (with `s = e`) and principal.
pub fn standard_setups() -> Result<Vec<(String, GradedSetup)>> {
    let mut out = Vec::new();
    for (n, part) in [(2, vec![2]), (3, vec![2, 1]), (3, vec![3]), (4, vec![2, 2]), (4, vec![4])] {
        let alg = crate::lie::build_sl(n)?;
        let t = crate::lie::sl2_triple_from_partition(&alg, &part)?;
        // g_d is 4-dimensional for [2,2], so s must be chosen
        let s = (part == [2, 2]).then(|| t.e.clone());
        let label = format!("sl{n} {part:?}");
        out.push((label, crate::setup::graded_setup(alg, t, s)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_sl, sl2_triple_from_partition};
    use crate::setup::graded_setup;

    fn setup(n: usize, part: &[usize]) -> GradedSetup {
        let alg = build_sl(n).unwrap();
        let t = sl2_triple_from_partition(&alg, part).unwrap();
        graded_setup(alg, t, None).unwrap()
    }

    #[test]
    fn special_cases_sl3_minimal() {
        let wa = WAlgebra::new(setup(3, &[2, 1])).unwrap();
        let s = wa.setup();
        let has = |d: u32| (0..s.jf_len()).filter(|&j| s.delta2(j) == d).count();
        assert_eq!((has(0), has(1), has(2)), (1, 2, 1));
        for route in [Route::Direct, Route::Closed] {
            let rep = special_case_checks(s, &wa.table(route));
            assert!(rep.all_passed(), "{}", rep.render());
        }
    }

    #[test]
    fn closed_reduction_sl3() {
        for part in [[2, 1].as_slice(), &[3]] {
            let wa = WAlgebra::new(setup(3, part)).unwrap();
            assert!(closed_reduces_to_finite(wa.setup(), &wa.table(Route::Closed)).is_empty());
        }
    }

    #[test]
    fn zeta_deformation_sl3_minimal() {
        let s = setup(3, &[2, 1]);
        let rep = zeta_check(&s, &default_zeta(&s)).unwrap();
        assert!(rep.all_passed(), "{}", rep.render());
        assert!(zeta_check(&s, &s.triple().f).is_err());
    }

    #[test]
    fn full_suite_sl2() {
        let rep = verify_setup(setup(2, &[2]), &VerifyOptions::default()).unwrap();
        assert!(rep.all_passed(), "{}", rep.render());
    }

    #[test]
    fn zero_nilpotent_gives_the_affine_algebra() {
        let alg = build_sl(2).unwrap();
        let t = sl2_triple_from_partition(&alg, &[1, 1]).unwrap();
        let s = graded_setup(alg, t, Some(vec![q(0); 3])).unwrap();
        let rep = verify_setup(s, &VerifyOptions::default()).unwrap();
        assert!(rep.all_passed(), "{}", rep.render());
    }
}
