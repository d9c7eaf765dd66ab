//! λ-brackets of differential polynomials: generator tables, the Master
//! Formula, the map ρ and the PVA axiom checks.
//!
//! Variables of V(g) are adapted-basis indices (see [`crate::setup`]).

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::lambda::LambdaPoly;
use crate::lie::SparseVec;
use crate::poly::{DiffPoly, Var};
use crate::rational::{binomial, Q};
use crate::setup::GradedSetup;

/// Dense table of generator λ-brackets `{u_i λ u_j}`.
#[derive(Clone, Debug)]
pub struct GenTable {
    table: Vec<Vec<LambdaPoly>>,
}

impl GenTable {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> LambdaPoly) -> Self {
        GenTable { table: (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect() }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> &LambdaPoly {
        &self.table[i][j]
    }

    /// Sets z to a rational value in every entry.
    pub fn eval_z(&self, z: &Q) -> GenTable {
        GenTable { table: self.table.iter().map(|row| row.iter().map(|p| p.eval_z(z)).collect()).collect() }
    }

    pub fn bracket(&self, g: &DiffPoly, h: &DiffPoly) -> LambdaPoly {
        master_bracket(&|i, j| self.get(i, j).clone(), g, h)
    }
}

fn linear_poly(u: &SparseVec) -> DiffPoly {
    DiffPoly::linear(u)
}

/// `{E_i λ E_j}_z = [E_i,E_j] + (E_i|E_j)λ + z(s|[E_i,E_j])` on adapted basis indices.
pub fn affine_bracket_gen(setup: &GradedSetup, i: usize, j: usize) -> LambdaPoly {
    let br = setup.adapted_bracket_basis(i, j);
    let mut out = LambdaPoly::from_poly(linear_poly(br));
    out.add_coeff(1, 0, &DiffPoly::constant(setup.adapted_form(i, j).clone()));
    out.add_coeff(0, 1, &DiffPoly::constant(setup.pair_s(br)));
    out
}

/// ρ of a linear element given in adapted coordinates.
pub fn rho_linear(setup: &GradedSetup, u: &SparseVec) -> DiffPoly {
    let mut out = DiffPoly::zero();
    let mut c = Q::zero();
    for (k, v) in u {
        if setup.grade2(*k) <= 1 {
            out.add_term(crate::poly::Monomial::from_var(Var::new(*k, 0)), v.clone());
        } else {
            c += v * setup.pair_f(&vec![(*k, Q::from_integer(1.into()))]);
        }
    }
    out.add_term(crate::poly::Monomial::one(), c);
    out
}

/// `ρ{E_i λ E_j}_z`, defined on all adapted indices.
pub fn rho_gen(setup: &GradedSetup, i: usize, j: usize) -> LambdaPoly {
    affine_bracket_gen(setup, i, j).map_coeffs(|p| rho(setup, p))
}

pub fn affine_table(setup: &GradedSetup) -> GenTable {
    GenTable::from_fn(setup.dim(), |i, j| affine_bracket_gen(setup, i, j))
}

pub fn rho_table(setup: &GradedSetup) -> GenTable {
    GenTable::from_fn(setup.dim(), |i, j| rho_gen(setup, i, j))
}

/// The differential algebra homomorphism `a ↦ π_{≤1/2}(a) + (f|a)`.
pub fn rho(setup: &GradedSetup, p: &DiffPoly) -> DiffPoly {
    p.substitute(|k| {
        if setup.grade2(k) <= 1 {
            None
        } else {
            Some(DiffPoly::constant(setup.pair_f(&vec![(k, Q::from_integer(1.into()))])))
        }
    })
}

/// `a^ρ_λ g = ρ{E_a λ g}_z` for `E_a ∈ g_{≥1/2}`; the result never involves z.
pub fn rho_action(table: &GenTable, a: usize, g: &DiffPoly) -> LambdaPoly {
    let out = table.bracket(&DiffPoly::var(a), g);
    assert!(out.z_degree().is_none_or(|d| d == 0), "ρ-action depends on z");
    out
}

/// The Master Formula
/// `{g_λ h} = Σ ∂h/∂u_j^(n) (λ+∂)^n {u_i_{λ+∂} u_j}_→ (-λ-∂)^m ∂g/∂u_i^(m)`.
pub fn master_bracket(gen: &dyn Fn(usize, usize) -> LambdaPoly, g: &DiffPoly, h: &DiffPoly) -> LambdaPoly {
    let mut ys: BTreeMap<usize, LambdaPoly> = BTreeMap::new();
    for v in g.variables() {
        let d = LambdaPoly::from_poly(g.partial(v)).neg_lambda_minus_d_pow(v.deriv);
        ys.entry(v.index).or_default().add_assign(&d);
    }
    ys.retain(|_, y| !y.is_zero());
    if ys.is_empty() {
        return LambdaPoly::zero();
    }
    let mut hvars: BTreeMap<usize, Vec<Var>> = BTreeMap::new();
    for v in h.variables() {
        hvars.entry(v.index).or_default().push(v);
    }
    // (λ+∂)^l Y_i, cached per (i, l)
    let mut shifted: BTreeMap<(usize, u32), LambdaPoly> = BTreeMap::new();
    let mut out = LambdaPoly::zero();
    for (j, vars) in &hvars {
        let mut inner = LambdaPoly::zero();
        for (i, y) in &ys {
            let b = gen(*i, *j);
            for ((l, k), c) in b.terms() {
                let sy = shifted.entry((*i, *l)).or_insert_with(|| y.lambda_plus_d_pow(*l));
                let mut t = sy.mul_poly(c);
                for _ in 0..*k {
                    t = t.mul_z();
                }
                inner.add_assign(&t);
            }
        }
        if inner.is_zero() {
            continue;
        }
        for v in vars {
            let hp = h.partial(*v);
            out.add_assign(&inner.lambda_plus_d_pow(v.deriv).mul_poly(&hp));
        }
    }
    out
}

/// `-{g_{-λ-∂} h}` given `b = {g_λ h}`; equals `{h_λ g}` by skewsymmetry.
pub fn skew_partner(b: &LambdaPoly) -> LambdaPoly {
    b.substitute_neg_lambda_minus_d().neg()
}

/// Polynomial in two spectral variables `λ^a μ^b` (z already specialized).
pub type TwoVar = BTreeMap<(u32, u32), DiffPoly>;

fn two_add(acc: &mut TwoVar, key: (u32, u32), p: &DiffPoly) {
    if p.is_zero() {
        return;
    }
    let e = acc.entry(key).or_default();
    e.add_assign(p);
    if e.is_zero() {
        acc.remove(&key);
    }
}

fn assert_z_free(p: &LambdaPoly) {
    assert!(p.z_degree().is_none_or(|d| d == 0), "two-variable calculus requires z specialized");
}

/// `{g_λ{h_μ k}} - {h_μ{g_λ k}} - {{g_λ h}_{λ+μ} k}`; zero iff Jacobi holds on this triple.
///
/// The table must be z-free (use [`GenTable::eval_z`]).
pub fn jacobi_defect(table: &GenTable, g: &DiffPoly, h: &DiffPoly, k: &DiffPoly) -> TwoVar {
    let mut out = TwoVar::new();
    // {g_λ {h_μ k}}
    let hk = table.bracket(h, k);
    assert_z_free(&hk);
    for ((m, _), c) in hk.terms() {
        let r = table.bracket(g, c);
        for ((l, _), d) in r.terms() {
            two_add(&mut out, (*l, *m), d);
        }
    }
    // - {h_μ {g_λ k}}
    let gk = table.bracket(g, k);
    for ((l, _), c) in gk.terms() {
        let r = table.bracket(h, c);
        for ((m, _), d) in r.terms() {
            two_add(&mut out, (*l, *m), &-d);
        }
    }
    // - {{g_λ h}_{λ+μ} k}
    let gh = table.bracket(g, h);
    for ((l, _), c) in gh.terms() {
        let r = table.bracket(c, k);
        for ((n, _), d) in r.terms() {
            // λ^l (λ+μ)^n
            for i in 0..=*n {
                let bc = binomial(*n as i64, i as i64);
                two_add(&mut out, (l + i, n - i), &d.scale(&-bc));
            }
        }
    }
    out
}

/// `{g_λ h} + {h_{-λ-∂} g}`, zero iff skewsymmetry holds on the pair.
pub fn skew_defect(table: &GenTable, g: &DiffPoly, h: &DiffPoly) -> LambdaPoly {
    let gh = table.bracket(g, h);
    let hg = table.bracket(h, g);
    gh.sub(&skew_partner(&hg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_sl, sl2_triple_from_partition};
    use crate::rational::{frac, q};
    use crate::setup::graded_setup;

    fn sl2() -> GradedSetup {
        let alg = build_sl(2).unwrap();
        let t = sl2_triple_from_partition(&alg, &[2]).unwrap();
        graded_setup(alg, t, None).unwrap()
    }

    // sl2 adapted basis: 0 = f, 1 = -x, 2 = -e/2
    #[test]
    fn sl2_generator_brackets() {
        let s = sl2();
        // {x_λ x} = (x|x) λ = λ/2
        let xx = affine_bracket_gen(&s, 1, 1);
        assert_eq!(xx, LambdaPoly::monomial(1, 0, frac(1, 2)));
        // {e_λ f} = h + λ + z(s|h); with E2 = -e/2, {E2_λ E0} = -1/2 (h + λ) and s = e gives (e|h) = 0
        let ef = affine_bracket_gen(&s, 2, 0);
        assert_eq!(ef.coeff(1, 0), DiffPoly::constant(frac(-1, 2)));
        assert_eq!(ef.coeff(0, 1), DiffPoly::zero());
        // h = -2 E1, so -h/2 = E1
        assert_eq!(ef.coeff(0, 0), DiffPoly::var(1));
    }

    #[test]
    fn rho_sends_e_to_one() {
        let s = sl2();
        // ρ(E2) = (f|-e/2) = -1/2, so ρ(e) = 1
        let e = DiffPoly::var(2).scale(&q(-2));
        assert_eq!(rho(&s, &e), DiffPoly::one());
        assert_eq!(rho(&s, &DiffPoly::var(1)), DiffPoly::var(1));
        let p = DiffPoly::var(2).mul_poly(&DiffPoly::var(0));
        assert_eq!(rho(&s, &p.derivative()), rho(&s, &p).derivative());
    }

    #[test]
    fn sl2_w_generator_is_annihilated() {
        let s = sl2();
        let t = rho_table(&s);
        // w = f + x' + x^2 with x = -E1
        let w = DiffPoly::var(0) + DiffPoly::var_d(1, 1).scale(&q(-1)) + DiffPoly::var(1).pow(2);
        assert!(rho_action(&t, 2, &w).is_zero());
        assert!(!rho_action(&t, 2, &DiffPoly::var(0)).is_zero());
        assert!(rho_action(&t, 2, &DiffPoly::one()).is_zero());
    }

    #[test]
    fn sesquilinearity_and_skewsymmetry_on_sl2() {
        let s = sl2();
        let t = affine_table(&s).eval_z(&q(1));
        let g = DiffPoly::var(0).mul_poly(&DiffPoly::var_d(1, 1));
        let h = DiffPoly::var(2).pow(2) + DiffPoly::var(1);
        let b = t.bracket(&g, &h);
        let db = t.bracket(&g.derivative(), &h);
        assert_eq!(db, b.shift_lambda(1).neg());
        let bd = t.bracket(&g, &h.derivative());
        assert_eq!(bd, b.shift_lambda(1).add(&b.derivative()));
        assert!(skew_defect(&t, &g, &h).is_zero());
    }

    #[test]
    fn jacobi_on_sl2_samples() {
        let s = sl2();
        let t = affine_table(&s).eval_z(&frac(3, 7));
        let a = DiffPoly::var(0).mul_poly(&DiffPoly::var(1));
        let b = DiffPoly::var_d(2, 1);
        let c = DiffPoly::var(1).pow(2) + DiffPoly::var(0);
        assert!(jacobi_defect(&t, &a, &b, &c).is_empty());
    }
}
