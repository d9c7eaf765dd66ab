use proptest::prelude::*;

use walgebra::finite::finite_bracket;
use walgebra::lie::{build_sl, sl2_triple_from_partition};
use walgebra::miura::miura;
use walgebra::pva::{affine_table, jacobi_defect, skew_defect};
use walgebra::rational::{axpy, frac, q};
use walgebra::setup::graded_setup;
use walgebra::verify::zeta_check;
use walgebra::{DiffPoly, GenTable, GradedSetup, Monomial, Var, WAlgebra};

fn setup(n: usize, part: &[usize]) -> GradedSetup {
    let alg = build_sl(n).unwrap();
    let t = sl2_triple_from_partition(&alg, part).unwrap();
    let s = (part == [2, 2]).then(|| t.e.clone());
    graded_setup(alg, t, s).unwrap()
}

fn arb_poly(nvars: usize, max_deriv: u32) -> impl Strategy<Value = DiffPoly> {
    proptest::collection::vec(
        (proptest::collection::vec((0..nvars, 0..=max_deriv, 1u32..=2), 0..3), -3i64..=3),
        1..4,
    )
    .prop_map(|terms| {
        DiffPoly::from_terms(terms.into_iter().map(|(fs, c)| {
            (Monomial::from_factors(fs.into_iter().map(|(i, d, e)| (Var::new(i, d), e))), q(c))
        }))
    })
}

fn small_poly(nvars: usize) -> impl Strategy<Value = DiffPoly> {
    proptest::collection::vec(((0..nvars, 0u32..=1), (0..nvars, 0u32..=1), -2i64..=2, any::<bool>()), 1..3).prop_map(
        |terms| {
            DiffPoly::from_terms(terms.into_iter().map(|((a, da), (b, db), c, quad)| {
                let mut f = vec![(Var::new(a, da), 1)];
                if quad {
                    f.push((Var::new(b, db), 1));
                }
                (Monomial::from_factors(f), q(c))
            }))
        },
    )
}

fn sl3_affine() -> (GradedSetup, GenTable) {
    let s = setup(3, &[2, 1]);
    let t = affine_table(&s);
    (s, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn master_formula_is_sesquilinear(g in arb_poly(8, 2), h in arb_poly(8, 2)) {
        let (_, t) = sl3_affine();
        let b = t.bracket(&g, &h);
        prop_assert_eq!(t.bracket(&g.derivative(), &h), b.shift_lambda(1).neg());
        let right = b.shift_lambda(1).add(&b.derivative());
        prop_assert_eq!(t.bracket(&g, &h.derivative()), right);
    }

    #[test]
    fn master_formula_obeys_leibniz(g in arb_poly(8, 1), h in arb_poly(8, 1), k in arb_poly(8, 1)) {
        let (_, t) = sl3_affine();
        let lhs = t.bracket(&g, &(&h * &k));
        let rhs = t.bracket(&g, &h).mul_poly(&k).add(&t.bracket(&g, &k).mul_poly(&h));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn master_formula_is_skewsymmetric(g in arb_poly(8, 2), h in arb_poly(8, 2)) {
        let (_, t) = sl3_affine();
        prop_assert!(skew_defect(&t, &g, &h).is_zero());
    }

    #[test]
    fn miura_is_a_differential_algebra_map(p in arb_poly(4, 2), r in arb_poly(4, 2)) {
        let wa = WAlgebra::new(setup(3, &[2, 1])).unwrap();
        prop_assert_eq!(miura(&wa, &p.derivative()), miura(&wa, &p).derivative());
        prop_assert_eq!(miura(&wa, &(&p * &r)), &miura(&wa, &p) * &miura(&wa, &r));
    }

    #[test]
    fn expansion_round_trips(p in arb_poly(4, 2)) {
        let wa = WAlgebra::new(setup(3, &[2, 1])).unwrap();
        let g = wa.expand(&p);
        prop_assert!(wa.is_in_w(&g));
        prop_assert_eq!(wa.pi_to_w(&g, true).unwrap(), p);
    }

    #[test]
    fn finite_bracket_is_antisymmetric(i in 0usize..7, j in 0usize..7, num in -5i64..=5, den in 1i64..=4) {
        let s = setup(4, &[2, 2]);
        let z = frac(num, den);
        let a = finite_bracket(&s, s.qj(i), s.qj(j), &z);
        let b = finite_bracket(&s, s.qj(j), s.qj(i), &z);
        prop_assert!((&a + &b).is_zero());
    }

    #[test]
    fn zeta_deformation_is_a_shift(coeffs in proptest::collection::vec(-4i64..=4, 4)) {
        let s = setup(3, &[2, 1]);
        let mut zeta = vec![q(0); s.dim()];
        for (j, c) in coeffs.iter().enumerate() {
            axpy(&mut zeta, &q(*c), s.qjup(j));
        }
        prop_assert!(zeta_check(&s, &zeta).unwrap().all_passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn master_formula_satisfies_jacobi(g in small_poly(8), h in small_poly(8), k in small_poly(8)) {
        let (_, t) = sl3_affine();
        for z in [q(0), q(1)] {
            prop_assert!(jacobi_defect(&t.eval_z(&z), &g, &h, &k).is_empty());
        }
    }
}
