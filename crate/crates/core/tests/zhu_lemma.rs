//! Checks the ε-identity behind the Zhu bracket on random test expressions,
//! using an explicit ε-power calculus that is independent of the library's
//! falling-factorial substitution.

use proptest::prelude::*;
use walgebra::rational::{frac, q};
use walgebra::zhu::zhu_reduce_z;
use walgebra::{build_sl, graded_setup, sl2_triple_from_partition, DiffPoly, GradedSetup, ZPoly, Q};

/// Sum of terms `P ε^β`.
#[derive(Clone)]
struct EpsExpr(Vec<(ZPoly, Q)>);

impl EpsExpr {
    /// `∂ + z∂_ε`
    fn d(&self) -> EpsExpr {
        let mut out = Vec::new();
        for (p, b) in &self.0 {
            out.push((p.map_coeffs(|c| c.derivative()), b.clone()));
            out.push((p.mul(&ZPoly::z_power(1, b.clone())), b - q(1)));
        }
        EpsExpr(out)
    }

    fn at_one(&self) -> ZPoly {
        self.0.iter().fold(ZPoly::zero(), |acc, (p, _)| acc.add(p))
    }
}

fn setup(n: usize, part: &[usize]) -> GradedSetup {
    let alg = build_sl(n).unwrap();
    let t = sl2_triple_from_partition(&alg, part).unwrap();
    graded_setup(alg, t, None).unwrap()
}

/// `(w([E_a,E_b]^♯) - (E_a|E_b)(∂+z∂_ε)) X`, together with `Δ([E_a,E_b])`.
fn apply_factor(s: &GradedSetup, a: usize, b: usize, x: &EpsExpr) -> (EpsExpr, Q) {
    let ea = vec![(a, q(1))];
    let eb = vec![(b, q(1))];
    let br = s.abracket(&ea, &eb);
    let w = DiffPoly::linear(&s.sharp(&br));
    let form = s.aform(&ea, &eb);
    let mut out: Vec<(ZPoly, Q)> = x.0.iter().map(|(p, e)| (p.mul_poly(&w), e.clone())).collect();
    for (p, e) in x.d().0 {
        out.push((p.scale(&-form.clone()), e));
    }
    let delta = q(1) - frac((s.grade2(a) + s.grade2(b)) as i64, 2);
    (EpsExpr(out), delta)
}

fn check(s: &GradedSetup, pairs: &[(usize, usize)], c: &[(usize, u32)], alpha2: i64) {
    let mut cpoly = DiffPoly::one();
    let mut delta_c = q(0);
    for &(j, m) in c {
        let j = j % s.jf_len();
        cpoly = cpoly.mul_poly(&DiffPoly::var_d(j, m));
        delta_c += frac(s.weight2(j), 2) + q(m as i64);
    }
    let alpha = frac(alpha2, 2);
    let mut expr = EpsExpr(vec![(ZPoly::from_poly(cpoly), alpha.clone())]);
    let mut total = delta_c;
    for &(a, b) in pairs {
        let (e, d) = apply_factor(s, a % s.dim(), b % s.dim(), &expr);
        expr = e;
        total += d;
    }
    let lhs = zhu_reduce_z(s, &expr.d().at_one());
    let rhs = zhu_reduce_z(s, &expr.at_one()).mul(&ZPoly::z_power(1, alpha - total));
    assert_eq!(lhs, rhs);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn epsilon_identity_sl3_minimal(
        pairs in proptest::collection::vec((0usize..8, 0usize..8), 0..3),
        c in proptest::collection::vec((0usize..4, 0u32..3), 1..3),
        alpha2 in -4i64..6,
    ) {
        check(&setup(3, &[2, 1]), &pairs, &c, alpha2);
    }

    #[test]
    fn epsilon_identity_sl3_principal(
        pairs in proptest::collection::vec((0usize..8, 0usize..8), 0..3),
        c in proptest::collection::vec((0usize..2, 0u32..3), 1..3),
        alpha2 in -4i64..6,
    ) {
        check(&setup(3, &[3]), &pairs, &c, alpha2);
    }
}

#[test]
fn epsilon_identity_bare_generator() {
    let s = setup(2, &[2]);
    check(&s, &[], &[(0, 0)], 3);
    check(&s, &[(0, 2), (1, 1)], &[(0, 1)], 0);
}
