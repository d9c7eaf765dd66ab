//! The tensor PVA `V(g_{≤0}) ⊗ F(g_{1/2})` and the generalized Miura map
//! `μ: W(g,f) → V(g_0) ⊗ F(g_{1/2})`.
//!
//! Tensor elements live in the adapted variable space. Which factor a variable
//! belongs to is read off its grade: see [`tensor_factor`].

use rayon::prelude::*;

use crate::lambda::LambdaPoly;
use crate::linalg::Matrix;
use crate::poly::DiffPoly;
use crate::pva::GenTable;
use crate::rational::{frac, q, Q};
use crate::report::Report;
use crate::setup::GradedSetup;
use crate::walg::{virasoro, Route, WAlgebra, WPoly};

/// A differential polynomial in adapted variables of grade `0` and `1/2`.
pub type TensorElem = DiffPoly;

/// The factor of the tensor product a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorFactor {
    /// `g_{<0}`, present only in the intermediate algebra.
    Negative,
    /// `g_0`, the affine factor.
    Affine,
    /// `g_{1/2}`, the neutral free factor.
    Neutral,
    /// `g_{≥1}`, not a tensor variable.
    Outside,
}

pub fn tensor_factor(setup: &GradedSetup, k: usize) -> TensorFactor {
    match setup.grade2(k) {
        g if g < 0 => TensorFactor::Negative,
        0 => TensorFactor::Affine,
        1 => TensorFactor::Neutral,
        _ => TensorFactor::Outside,
    }
}

/// `⟨u|v⟩ = -(f|[u,v])` on adapted basis indices.
pub fn neutral_pairing(setup: &GradedSetup, i: usize, j: usize) -> Q {
    -setup.pair_f(setup.adapted_bracket_basis(i, j))
}

/// Tensor bracket on generators: `[a,b] + (a|b)λ` on `g_{≤0}`, `⟨a|b⟩` on
/// `g_{1/2}`, zero otherwise.
pub fn tensor_bracket_gen(setup: &GradedSetup, i: usize, j: usize) -> LambdaPoly {
    use TensorFactor::*;
    match (tensor_factor(setup, i), tensor_factor(setup, j)) {
        (Negative | Affine, Negative | Affine) => {
            let mut out = LambdaPoly::from_poly(DiffPoly::linear(setup.adapted_bracket_basis(i, j)));
            out.add_coeff(1, 0, &DiffPoly::constant(setup.adapted_form(i, j).clone()));
            out
        }
        (Neutral, Neutral) => LambdaPoly::constant(neutral_pairing(setup, i, j)),
        _ => LambdaPoly::zero(),
    }
}

pub fn tensor_table(setup: &GradedSetup) -> GenTable {
    GenTable::from_fn(setup.dim(), |i, j| tensor_bracket_gen(setup, i, j))
}

/// Drops every monomial containing a variable of negative grade.
pub fn project_to_g0(setup: &GradedSetup, p: &DiffPoly) -> TensorElem {
    p.filter(|m| m.factors().iter().all(|(v, _)| setup.grade2(v.index) >= 0))
}

/// `μ(p)`: expand `w_j ↦ w(q_j)` and project to `V(g_0) ⊗ F(g_{1/2})`.
pub fn miura(wa: &WAlgebra, p: &WPoly) -> TensorElem {
    project_to_g0(wa.setup(), &wa.expand(p))
}

/// `n = ⌊δ(j) + 1/2⌋` and the expected linear part `(-∂)^n E(j,n)` of `μ(w_j)`.
pub fn leading_term(setup: &GradedSetup, j: usize) -> (usize, DiffPoly) {
    let n = (setup.delta2(j) as usize).div_ceil(2);
    let k = setup.adapted_index(j, n).expect("E(j,n) exists for n ≤ 2δ(j)");
    let sign = if n.is_multiple_of(2) { q(1) } else { q(-1) };
    (n, DiffPoly::var_d(k, n as u32).scale(&sign))
}

fn linear_part(p: &DiffPoly) -> DiffPoly {
    p.filter(|m| m.degree() == 1)
}

/// Dual bases `{a_i},{a^i}` of `g_0` under the form and `{v_k},{v^k}` of
/// `g_{1/2}` under `⟨·|·⟩`, as original-coordinate vectors.
pub struct DualBases {
    pub g0: Vec<(Vec<Q>, Vec<Q>)>,
    pub g_half: Vec<(Vec<Q>, Vec<Q>)>,
}

fn dual_pairs(basis: &[Vec<Q>], pairing: impl Fn(&[Q], &[Q]) -> Q) -> Vec<(Vec<Q>, Vec<Q>)> {
    let n = basis.len();
    if n == 0 {
        return Vec::new();
    }
    let mut gram = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            gram.set(i, j, pairing(&basis[i], &basis[j]));
        }
    }
    // ⟨Σ_m C_hm u_m | u_k⟩ = δ_hk  ⇔  C·G = 1
    let c = gram.inverse().expect("pairing is nondegenerate on the graded piece");
    (0..n)
        .map(|h| {
            let mut up = vec![q(0); basis[h].len()];
            for m in 0..n {
                crate::rational::axpy(&mut up, c.get(h, m), &basis[m]);
            }
            (basis[h].clone(), up)
        })
        .collect()
}

pub fn dual_bases(setup: &GradedSetup) -> DualBases {
    let alg = setup.alg();
    let f = &setup.triple().f;
    DualBases {
        g0: dual_pairs(setup.eigenspace(0), |a, b| alg.form_value(a, b)),
        g_half: dual_pairs(setup.eigenspace(1), |a, b| -alg.form_value(f, &alg.bracket(a, b))),
    }
}

fn elem_poly(setup: &GradedSetup, v: &[Q]) -> DiffPoly {
    DiffPoly::linear(&crate::finite::sparse(&setup.to_adapted(v)))
}

/// `x' + ½Σ a^i a_i + ½Σ v^k ∂v_k`
pub fn miura_virasoro_formula(setup: &GradedSetup) -> TensorElem {
    let db = dual_bases(setup);
    let mut out = elem_poly(setup, &setup.triple().x).derivative();
    let half = frac(1, 2);
    for (a, up) in &db.g0 {
        out.add_scaled(&elem_poly(setup, up).mul_poly(&elem_poly(setup, a)), &half);
    }
    for (v, up) in &db.g_half {
        out.add_scaled(&elem_poly(setup, up).mul_poly(&elem_poly(setup, v).derivative()), &half);
    }
    out
}

/// Checks the PVA homomorphism identity for all generator pairs (into the
/// intermediate algebra and into `V(g_0) ⊗ F(g_{1/2})`), the leading terms
/// of `μ(w_j)` and the image of the Virasoro element.
pub fn miura_hom_check(wa: &WAlgebra) -> Report {
    let setup = wa.setup();
    let n = setup.jf_len();
    let tensor = tensor_table(setup);
    let name = |k: usize| setup.var_name(k);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let results: Vec<(Option<String>, Option<String>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let wi = &wa.generator(i).w;
            let wj = &wa.generator(j).w;
            let raw = wa.bracket_direct_raw(i, j).z0();
            let inter = tensor.bracket(wi, wj);
            let bad_inter = (raw != inter).then(|| {
                format!("({},{}): ρ-bracket {} vs tensor {}", i + 1, j + 1, raw.render(name), inter.render(name))
            });
            let lhs = wa.bracket_direct(i, j).z0().map_coeffs(|c| miura(wa, c));
            let rhs = tensor.bracket(&miura(wa, &DiffPoly::var(i)), &miura(wa, &DiffPoly::var(j)));
            let bad_final = (lhs != rhs).then(|| {
                format!("({},{}): μ of bracket {} vs tensor {}", i + 1, j + 1, lhs.render(name), rhs.render(name))
            });
            (bad_inter, bad_final)
        })
        .collect();
    let mut rep = Report::new();
    rep.expect_none(
        "W -> V(g_<=0) ⊗ F(g_1/2) is a PVA homomorphism",
        results.iter().filter_map(|r| r.0.clone()).collect(),
    );
    rep.expect_none(
        "Miura map is a PVA homomorphism",
        results.iter().filter_map(|r| r.1.clone()).collect(),
    );
    let mut lead = Vec::new();
    for j in 0..n {
        let (_, want) = leading_term(setup, j);
        let got = linear_part(&miura(wa, &DiffPoly::var(j)));
        if got != want || got.is_zero() {
            lead.push(format!("w{}: linear part {} expected {}", j + 1, got.render(name), want.render(name)));
        }
    }
    rep.expect_none("mu(w_j) has leading term (-d)^n E(j,n)", lead);
    let l = virasoro(setup, &wa.table(Route::Closed).eval_z(&q(0))).l;
    let got = miura(wa, &l);
    let want = miura_virasoro_formula(setup);
    rep.record(
        "mu(L) = x' + 1/2 sum a^i a_i + 1/2 sum v^k dv_k",
        got == want,
        if got == want { String::new() } else { format!("got {} expected {}", got.render(name), want.render(name)) },
    );
    rep
}
