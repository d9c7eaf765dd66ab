//! H-twisted Zhu algebras of W(g,f) and their comparison with the finite
//! W-algebra.
//!
//! Zhu polynomials are [`ZPoly`]s whose coefficients are derivative-free
//! polynomials in the `w_j`.

use num_traits::Zero;
use rayon::prelude::*;

use crate::finite::{finite_table, jacobiator, slice_shift_formal};
use crate::lambda::{LambdaPoly, ZPoly};
use crate::lie::SparseVec;
use crate::poly::DiffPoly;
use crate::rational::{frac, one, Q};
use crate::report::Report;
use crate::setup::GradedSetup;
use crate::walg::{w_name, WAlgebra, WPoly};

/// Rewrites `w_j^{(m)} ↦ (-z)^m Δ_j(Δ_j+1)⋯(Δ_j+m-1) w_j`, the consequence of
/// `∂A = -zΔ(A)A` on generators.
pub fn zhu_reduce(setup: &GradedSetup, p: &WPoly) -> ZPoly {
    let mut out = ZPoly::zero();
    for (m, c) in p.terms() {
        let mut coeff = c.clone();
        let mut zpow = 0u32;
        let mut factors = Vec::new();
        for (v, e) in m.factors() {
            let delta = frac(setup.weight2(v.index), 2);
            let mut f = one();
            for i in 0..v.deriv {
                f *= -(&delta + Q::from_integer(i.into()));
            }
            for _ in 0..*e {
                coeff *= &f;
            }
            zpow += v.deriv * e;
            factors.push((crate::poly::Var::new(v.index, 0), *e));
        }
        let mono = crate::poly::Monomial::from_factors(factors);
        out.add_coeff(zpow, &DiffPoly::from_terms([(mono, coeff)]));
    }
    out
}

/// [`zhu_reduce`] applied to every z-coefficient.
pub fn zhu_reduce_z(setup: &GradedSetup, p: &ZPoly) -> ZPoly {
    let mut out = ZPoly::zero();
    for (k, c) in p.terms() {
        out.add_assign(&zhu_reduce(setup, c).mul(&ZPoly::z_power(*k, one())));
    }
    out
}

/// `α(α-1)⋯(α-k+1)`
fn falling(alpha: &Q, k: u32) -> Q {
    (0..k).fold(one(), |acc, i| acc * (alpha - Q::from_integer(i.into())))
}

/// The Zhu bracket from a PVA bracket `{w(a)_λ w(b)}` computed with the PVA
/// twist switched off: `λ^k ↦ z^k α(α-1)⋯(α-k+1)` with `α = Δ(a)-1`, then
/// reduction.
pub fn zhu_from_lambda(setup: &GradedSetup, a: usize, bracket: &LambdaPoly) -> ZPoly {
    assert!(bracket.z_degree().is_none_or(|d| d == 0), "pass the z = 0 slice of the PVA bracket");
    let alpha = frac(setup.weight2(a), 2) - one();
    let mut out = ZPoly::zero();
    for ((k, _), c) in bracket.terms() {
        let f = falling(&alpha, *k);
        if f.is_zero() {
            continue;
        }
        out.add_assign(&zhu_reduce(setup, c).mul(&ZPoly::z_power(*k, f)));
    }
    out
}

/// Generic ε-route Zhu bracket of generators.
pub fn zhu_bracket_generic(wa: &WAlgebra, i: usize, j: usize) -> ZPoly {
    let b = wa.bracket_direct(i, j).z0();
    zhu_from_lambda(wa.setup(), i, &b)
}

/// `w([u,v]^♯) - z(x|[u,v])`
fn zhu_factor(setup: &GradedSetup, u: &SparseVec, v: &SparseVec) -> ZPoly {
    let br = setup.abracket(u, v);
    let mut out = ZPoly::from_poly(DiffPoly::linear(&setup.sharp(&br)));
    out.add_coeff(1, &DiffPoly::constant(-setup.pair_x(&br)));
    out
}

/// The closed Zhu formula for homogeneous `a`, `b` in adapted coordinates.
pub fn zhu_closed_vec(setup: &GradedSetup, a: &SparseVec, h2: i32, b: &SparseVec, k2: i32) -> ZPoly {
    let mut states: Vec<(usize, usize)> = Vec::new();
    for j in 0..setup.jf_len() {
        for n in 0..setup.delta2(j) as usize {
            let g = setup.f_grade2(j, n);
            if g >= 2 - h2 && g <= k2 {
                states.push((j, n));
            }
        }
    }
    states.sort_by_key(|&(j, n)| (setup.f_grade2(j, n), j, n));
    let mut t_val: Vec<ZPoly> = Vec::with_capacity(states.len());
    for (idx, &(j, n)) in states.iter().enumerate() {
        let e_next = setup.e_elem(j, n + 1);
        let g = setup.f_grade2(j, n);
        let mut acc = zhu_factor(setup, &e_next, a);
        for (idx2, &(j2, n2)) in states[..idx].iter().enumerate() {
            if setup.f_grade2(j2, n2) > g - 2 || t_val[idx2].is_zero() {
                continue;
            }
            acc.add_assign(&zhu_factor(setup, &e_next, setup.f_elem(j2, n2)).mul(&t_val[idx2]));
        }
        t_val.push(acc);
    }
    let mut out = zhu_factor(setup, a, b);
    for (idx, &(j, n)) in states.iter().enumerate() {
        if t_val[idx].is_zero() {
            continue;
        }
        out = out.sub(&zhu_factor(setup, b, setup.f_elem(j, n)).mul(&t_val[idx]));
    }
    out
}

/// Closed-formula Zhu bracket of generators.
pub fn zhu_bracket_closed(setup: &GradedSetup, i: usize, j: usize) -> ZPoly {
    zhu_closed_vec(
        setup,
        &setup.e_elem(i, 0),
        setup.delta2(i) as i32,
        &setup.e_elem(j, 0),
        setup.delta2(j) as i32,
    )
}

/// Which Zhu route to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZhuRoute {
    Generic,
    Closed,
}

pub fn zhu_table(wa: &WAlgebra, route: ZhuRoute) -> Vec<Vec<ZPoly>> {
    let n = wa.setup().jf_len();
    let cells: Vec<ZPoly> = (0..n * n)
        .into_par_iter()
        .map(|c| match route {
            ZhuRoute::Generic => zhu_bracket_generic(wa, c / n, c % n),
            ZhuRoute::Closed => zhu_bracket_closed(wa.setup(), c / n, c % n),
        })
        .collect();
    (0..n).map(|i| cells[i * n..(i + 1) * n].to_vec()).collect()
}

/// `z ↦ -z`
pub fn negate_z(p: &ZPoly) -> ZPoly {
    let mut out = ZPoly::zero();
    for (k, c) in p.terms() {
        out.add_coeff(*k, &if k % 2 == 1 { -c } else { c.clone() });
    }
    out
}

/// Route equality, the comparison with the finite W-algebra, the shift
/// isomorphism, skewsymmetry and Jacobi, on all generator pairs.
pub fn zhu_iso_check(wa: &WAlgebra) -> Report {
    let setup = wa.setup();
    let n = setup.jf_len();
    let generic = zhu_table(wa, ZhuRoute::Generic);
    let closed = zhu_table(wa, ZhuRoute::Closed);
    let finite = finite_table(setup);
    let show = |p: &ZPoly| p.render(w_name);
    let mut rep = Report::new();
    let mut routes = Vec::new();
    let mut at_zero = Vec::new();
    let mut twisted = Vec::new();
    let mut shift = Vec::new();
    let mut skew = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = &closed[i][j];
            if &generic[i][j] != c {
                routes.push(format!("({},{}): generic {} vs closed {}", i + 1, j + 1, show(&generic[i][j]), show(c)));
            }
            if c.coeff(0) != finite[i][j].coeff(0) {
                at_zero.push(format!("({},{})", i + 1, j + 1));
            }
            if negate_z(c) != finite[i][j] {
                twisted.push(format!("({},{})", i + 1, j + 1));
            }
            let shifted = slice_shift_formal(setup, &ZPoly::from_poly(c.coeff(0)));
            if &shifted != c {
                shift.push(format!("({},{}): {} vs {}", i + 1, j + 1, show(&shifted), show(c)));
            }
            if !c.add(&closed[j][i]).is_zero() {
                skew.push(format!("({},{})", i + 1, j + 1));
            }
        }
    }
    rep.expect_none("zhu generic route equals closed formula", routes);
    rep.expect_none("zhu bracket at z=0 equals finite bracket", at_zero);
    rep.expect_none("zhu bracket equals twisted finite bracket with z -> -z", twisted);
    rep.expect_none("shift by (z^2/4)(q|e) is a bracket isomorphism", shift);
    rep.expect_none("zhu bracket is skewsymmetric", skew);
    let mut jac = Vec::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                if !jacobiator(&closed, a, b, c).is_zero() {
                    jac.push(format!("({},{},{})", a + 1, b + 1, c + 1));
                }
            }
        }
    }
    rep.expect_none("zhu bracket satisfies Jacobi", jac);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_sl, sl2_triple_from_partition};
    use crate::rational::q;
    use crate::setup::graded_setup;

    fn walg(n: usize, part: &[usize]) -> WAlgebra {
        let alg = build_sl(n).unwrap();
        let t = sl2_triple_from_partition(&alg, part).unwrap();
        WAlgebra::new(graded_setup(alg, t, None).unwrap()).unwrap()
    }

    #[test]
    fn reduction_of_derivatives() {
        let wa = walg(2, &[2]);
        let s = wa.setup();
        // Δ = 2 for w(f) on sl2
        let r = zhu_reduce(s, &DiffPoly::var_d(0, 1));
        assert_eq!(r, ZPoly::from_poly(DiffPoly::var(0)).mul(&ZPoly::z_power(1, q(-2))));
        let r2 = zhu_reduce(s, &DiffPoly::var_d(0, 2));
        assert_eq!(r2.coeff(2), DiffPoly::var(0).scale(&q(6)));
        assert_eq!(zhu_reduce(s, &DiffPoly::var(0)), ZPoly::from_poly(DiffPoly::var(0)));
        // idempotent on derivative-free input
        let once = zhu_reduce(s, &DiffPoly::var(0).pow(2));
        assert_eq!(zhu_reduce_z(s, &once), once);
    }

    #[test]
    fn sl2_zhu_bracket_vanishes() {
        let wa = walg(2, &[2]);
        assert!(zhu_bracket_generic(&wa, 0, 0).is_zero());
        assert!(zhu_bracket_closed(wa.setup(), 0, 0).is_zero());
    }

    #[test]
    fn minimal_sl3_report_passes() {
        let wa = walg(3, &[2, 1]);
        let rep = zhu_iso_check(&wa);
        assert!(rep.all_passed(), "{}", rep.render());
    }
}
