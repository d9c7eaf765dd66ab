//! The classical affine W-algebra: generators `w(q)`, membership, the
//! projection to W-coordinates, and λ-brackets by three routes.
//!
//! Polynomials over V(g_{≤1/2}) use adapted-basis indices as variables.
//! W-coordinates ([`WPoly`]) use the g^f index `j` for `w_j = w(q_j)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finite::sparse;
use crate::lambda::LambdaPoly;
use crate::lie::SparseVec;
use crate::linalg::{SparseSystem, Solution};
use crate::poly::{DiffPoly, Monomial, Var, WeightClass};
use crate::pva::{rho_action, rho_table, GenTable};
use crate::rational::{frac, one, q, Vector, Q};
use crate::report::Report;
use crate::setup::GradedSetup;

/// A differential polynomial in the W-coordinates `w_j`.
pub type WPoly = DiffPoly;

pub fn w_name(j: usize) -> String {
    format!("w{}", j + 1)
}

/// The generator `w(q_j) = q_j + r(q_j) + r^{≥2}(q_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WGenerator {
    pub j: usize,
    pub w: DiffPoly,
    pub linear_term: DiffPoly,
    pub weight2: i64,
}

fn is_e_bracket_var(setup: &GradedSetup, v: &Var) -> bool {
    setup.adapted_basis()[v.index].1 >= 1
}

/// Number of `[e,g]`-variable factors in a monomial, with multiplicity.
pub fn e_degree(setup: &GradedSetup, m: &Monomial) -> u32 {
    m.factors().iter().filter(|(v, _)| is_e_bracket_var(setup, v)).map(|(_, e)| *e).sum()
}

fn adapted_weight2(setup: &GradedSetup, k: usize) -> i64 {
    2 - setup.grade2(k) as i64
}

/// `w(u^♯)` as a linear W-polynomial.
fn wsharp(setup: &GradedSetup, u: &SparseVec) -> WPoly {
    DiffPoly::linear(&setup.sharp(u))
}

/// `u^♯` as a linear polynomial in the adapted g^f variables.
fn qsharp(setup: &GradedSetup, u: &SparseVec) -> DiffPoly {
    let lin: Vec<(usize, Q)> = setup
        .sharp(u)
        .into_iter()
        .map(|(j, c)| (setup.adapted_index(j, 0).expect("n = 0 exists"), c))
        .collect();
    DiffPoly::linear(&lin)
}

/// The linear term `r(q_{j0})`, linear in the `[e,g_{≤-1/2}]` variables.
///
/// Chains `1/2 ≤ k_s ≺ ⋯ ≺ k_1 ≤ δ(j0)` are summed by dynamic programming:
/// `T(j,n)` collects every chain tail starting at `(j,n)`.
pub fn linear_term(setup: &GradedSetup, j0: usize) -> DiffPoly {
    let top = setup.delta2(j0) as i32;
    let mut states: Vec<(usize, usize)> = Vec::new();
    for j in 0..setup.jf_len() {
        for n in 0..setup.delta2(j) as usize {
            let k2 = setup.f_grade2(j, n);
            if k2 >= 1 && k2 <= top {
                states.push((j, n));
            }
        }
    }
    states.sort_by_key(|&(j, n)| (setup.f_grade2(j, n), j, n));
    let op = |u: &SparseVec, v: &SparseVec, x: &DiffPoly| -> DiffPoly {
        let br = setup.abracket(u, v);
        let mut out = qsharp(setup, &br).mul_poly(x);
        out.add_scaled(&x.derivative(), &-setup.aform(u, v));
        out
    };
    let mut t_val: Vec<DiffPoly> = Vec::new();
    for (idx, &(j, n)) in states.iter().enumerate() {
        let e_next = setup.e_elem(j, n + 1);
        let k2 = setup.f_grade2(j, n);
        let mut acc = DiffPoly::linear(&e_next);
        for (idx2, &(j2, n2)) in states[..idx].iter().enumerate() {
            if setup.f_grade2(j2, n2) <= k2 - 2 {
                acc.add_assign(&op(&e_next, setup.f_elem(j2, n2), &t_val[idx2]));
            }
        }
        t_val.push(acc);
    }
    let q = setup.e_elem(j0, 0);
    let mut out = DiffPoly::zero();
    for (idx, &(j, n)) in states.iter().enumerate() {
        out.add_assign(&op(&q, setup.f_elem(j, n), &t_val[idx]));
    }
    out
}

/// All monomials of doubled weight `target` in the V(g_{≤1/2}) variables
/// containing at least one `[e,g]` variable, in canonical order.
fn ansatz(setup: &GradedSetup, target: i64) -> Vec<Monomial> {
    let mut cands: Vec<(Var, i64)> = Vec::new();
    for k in 0..setup.dim() {
        if setup.grade2(k) > 1 {
            continue;
        }
        let w = adapted_weight2(setup, k);
        let mut m = 0u32;
        while w + 2 * m as i64 <= target {
            cands.push((Var::new(k, m), w + 2 * m as i64));
            m += 1;
        }
    }
    cands.sort();
    let mut out = Vec::new();
    let mut cur: Vec<(Var, u32)> = Vec::new();
    fn rec(
        cands: &[(Var, i64)],
        start: usize,
        left: i64,
        cur: &mut Vec<(Var, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if left == 0 {
            out.push(Monomial::from_factors(cur.iter().cloned()));
            return;
        }
        for i in start..cands.len() {
            let (v, w) = cands[i];
            if w > left {
                continue;
            }
            match cur.last_mut() {
                Some((lv, e)) if *lv == v => *e += 1,
                _ => cur.push((v, 1)),
            }
            rec(cands, i, left - w, cur, out);
            match cur.last_mut() {
                Some((_, e)) if *e > 1 => *e -= 1,
                _ => {
                    cur.pop();
                }
            }
        }
    }
    rec(&cands, 0, target, &mut cur, &mut out);
    out.retain(|m| e_degree(setup, m) >= 1);
    out.sort();
    out
}

/// Adapted indices of g_{≥1/2}.
pub fn positive_indices(setup: &GradedSetup) -> Vec<usize> {
    (0..setup.dim()).filter(|&k| setup.grade2(k) >= 1).collect()
}

/// Solves for the unique `w(q_{j0})` and cross-checks its linear part.
pub fn generator_with(setup: &GradedSetup, table: &GenTable, j0: usize) -> Result<WGenerator> {
    let qk = setup.adapted_index(j0, 0).expect("n = 0 exists");
    let target = setup.weight2(j0);
    let monos = ansatz(setup, target);
    let acting = positive_indices(setup);
    let q_poly = DiffPoly::var(qk);

    type Key = (usize, u32, Monomial);
    let collect = |p: &DiffPoly| -> Vec<(Key, Q)> {
        let mut rows = Vec::new();
        for &a in &acting {
            let r = rho_action(table, a, p);
            for ((l, _), c) in r.terms() {
                for (m, v) in c.terms() {
                    rows.push(((a, *l, m.clone()), v.clone()));
                }
            }
        }
        rows
    };
    let base = collect(&q_poly);
    let cols: Vec<Vec<(Key, Q)>> =
        monos.par_iter().map(|m| collect(&DiffPoly::from_terms([(m.clone(), one())]))).collect();

    let mut rows: BTreeMap<Key, (BTreeMap<usize, Q>, Q)> = BTreeMap::new();
    for (key, v) in base {
        rows.entry(key).or_default().1 -= v;
    }
    for (c, entries) in cols.into_iter().enumerate() {
        for (key, v) in entries {
            *rows.entry(key).or_default().0.entry(c).or_insert_with(Q::zero) += v;
        }
    }
    let mut sys = SparseSystem::new(monos.len());
    for (_, (row, rhs)) in rows {
        sys.push(row, rhs);
    }
    let coeffs = match sys.solve() {
        Solution::Unique(x) => x,
        Solution::Inconsistent => {
            return Err(Error::Internal(format!("no W generator for q{} in the weight ansatz", j0 + 1)))
        }
        Solution::Underdetermined(free) => {
            return Err(Error::Internal(format!(
                "W generator for q{} is not unique ({} free parameters)",
                j0 + 1,
                free.len()
            )))
        }
    };
    let rest = DiffPoly::from_terms(monos.into_iter().zip(coeffs));
    for (m, _) in rest.terms() {
        if let [(v, 1)] = m.factors() {
            if v.deriv == 0 {
                return Err(Error::Internal(format!(
                    "W generator for q{} needs the bare variable {}",
                    j0 + 1,
                    setup.var_name(v.index)
                )));
            }
        }
    }
    let lin = rest.filter(|m| e_degree(setup, m) == 1);
    let formula = linear_term(setup, j0);
    if lin != formula {
        return Err(Error::Internal(format!(
            "linear part of w(q{}) disagrees with the chain formula: {} vs {}",
            j0 + 1,
            lin.render(|k| setup.var_name(k)),
            formula.render(|k| setup.var_name(k))
        )));
    }
    let mut w = q_poly;
    w.add_assign(&rest);
    Ok(WGenerator { j: j0, w, linear_term: lin, weight2: target })
}

/// `w(q_{j0})`, building the ρ-table on the fly.
pub fn generator(setup: &GradedSetup, j0: usize) -> Result<WGenerator> {
    generator_with(setup, &rho_table(setup), j0)
}

/// True iff `ρ{a_λ g}_z = 0` for every basis `a ∈ g_{≥1/2}`.
pub fn is_in_w_with(setup: &GradedSetup, table: &GenTable, g: &DiffPoly) -> bool {
    positive_indices(setup).into_iter().all(|a| rho_action(table, a, g).is_zero())
}

pub fn is_in_w(setup: &GradedSetup, g: &DiffPoly) -> bool {
    is_in_w_with(setup, &rho_table(setup), g)
}

/// Deletes monomials containing `[e,g_{≤-1/2}]` variables and renames `q_j ↦ w_j`.
pub fn project_to_w(setup: &GradedSetup, g: &DiffPoly) -> WPoly {
    g.filter(|m| e_degree(setup, m) == 0).rename(|k| setup.adapted_basis()[k].0)
}

/// [`project_to_w`] guarded by a membership check.
pub fn pi_to_w(setup: &GradedSetup, table: &GenTable, g: &DiffPoly, require_member: bool) -> Result<WPoly> {
    if require_member && !is_in_w_with(setup, table, g) {
        return Err(Error::NotAMember(g.render(|k| setup.var_name(k))));
    }
    Ok(project_to_w(setup, g))
}

/// How the `z(s|·)` insertions are realized in the closed formula.
#[derive(Clone, Debug)]
pub enum Twist {
    /// `z(s|·)` with z formal
    Zs,
    /// `(ζ|·)` for a fixed `ζ ∈ g^e`, given as the values `(ζ|E_k)`
    Zeta(Vector),
}

impl Twist {
    fn value(&self, setup: &GradedSetup, u: &SparseVec) -> LambdaPoly {
        match self {
            Twist::Zs => LambdaPoly::monomial(0, 1, setup.pair_s(u)),
            Twist::Zeta(vals) => {
                LambdaPoly::constant(u.iter().fold(Q::zero(), |acc, (k, c)| acc + c * &vals[*k]))
            }
        }
    }
}

/// `ζ ↦ Twist::Zeta`, after checking `ζ ∈ g^e`.
pub fn zeta_twist(setup: &GradedSetup, zeta: &[Q]) -> Result<Twist> {
    if zeta.len() != setup.dim() {
        return Err(Error::InvalidInput(format!("ζ has length {}, expected {}", zeta.len(), setup.dim())));
    }
    if !crate::rational::is_zero_vec(&setup.alg().bracket(&setup.triple().e, zeta)) {
        return Err(Error::InvalidInput("ζ is not in the centralizer of e".into()));
    }
    Ok(Twist::Zeta(setup.functional_of(zeta)))
}

/// `X ↦ (P + τ)X - c(λX + ∂X)` for `P = w(u^♯)` etc.
fn apply_factor(mult: &LambdaPoly, c: &Q, x: &LambdaPoly) -> LambdaPoly {
    let mut out = mult.mul(x);
    if !c.is_zero() {
        let d = x.lambda_plus_d_pow(1);
        out.sub_assign(&d.scale(c));
    }
    out
}

fn closed_mult(setup: &GradedSetup, tw: &Twist, u: &SparseVec, v: &SparseVec) -> (LambdaPoly, Q) {
    let br = setup.abracket(u, v);
    let mut m = LambdaPoly::from_poly(wsharp(setup, &br));
    m.add_assign(&tw.value(setup, &br));
    (m, setup.aform(u, v))
}

/// The closed λ-bracket `{w(a)_λ w(b)}` for homogeneous `a ∈ g^f_{-h}`,
/// `b ∈ g^f_{-k}` given in adapted coordinates with doubled grades `h2`, `k2`.
pub fn closed_bracket_vec(
    setup: &GradedSetup,
    a: &SparseVec,
    h2: i32,
    b: &SparseVec,
    k2: i32,
    tw: &Twist,
) -> LambdaPoly {
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
    let mut t_val: Vec<LambdaPoly> = Vec::with_capacity(states.len());
    for (idx, &(j, n)) in states.iter().enumerate() {
        let e_next = setup.e_elem(j, n + 1);
        let g = setup.f_grade2(j, n);
        // V(E, a) = w([E,a]^♯) - (E|a)λ + τ([E,a])
        let (m, c) = closed_mult(setup, tw, &e_next, a);
        let mut acc = m;
        acc.add_coeff(1, 0, &DiffPoly::constant(-c));
        for (idx2, &(j2, n2)) in states[..idx].iter().enumerate() {
            if setup.f_grade2(j2, n2) > g - 2 || t_val[idx2].is_zero() {
                continue;
            }
            let (m, c) = closed_mult(setup, tw, &e_next, setup.f_elem(j2, n2));
            acc.add_assign(&apply_factor(&m, &c, &t_val[idx2]));
        }
        t_val.push(acc);
    }
    let (m, c) = closed_mult(setup, tw, a, b);
    let mut out = m;
    out.add_coeff(1, 0, &DiffPoly::constant(c));
    for (idx, &(j, n)) in states.iter().enumerate() {
        if t_val[idx].is_zero() {
            continue;
        }
        let (m, c) = closed_mult(setup, tw, b, setup.f_elem(j, n));
        out.sub_assign(&apply_factor(&m, &c, &t_val[idx]));
    }
    out
}

/// Closed-formula bracket of generators `w_i`, `w_j`.
pub fn lambda_bracket_closed(setup: &GradedSetup, i: usize, j: usize, tw: &Twist) -> LambdaPoly {
    closed_bracket_vec(
        setup,
        &setup.e_elem(i, 0),
        setup.delta2(i) as i32,
        &setup.e_elem(j, 0),
        setup.delta2(j) as i32,
        tw,
    )
}

/// The manifestly skewsymmetric double-chain formula for `{w_i λ w_j}`.
pub fn lambda_bracket_skewform(setup: &GradedSetup, i: usize, j: usize) -> LambdaPoly {
    let a = setup.e_elem(i, 0);
    let b = setup.e_elem(j, 0);
    let h2 = setup.delta2(i) as i32;
    let k2 = setup.delta2(j) as i32;
    let chain_states = |top: i32| {
        let mut st: Vec<(usize, usize)> = Vec::new();
        for j in 0..setup.jf_len() {
            for n in 0..setup.delta2(j) as usize {
                let g = setup.f_grade2(j, n);
                if g >= 1 && g <= top {
                    st.push((j, n));
                }
            }
        }
        st.sort_by_key(|&(j, n)| (setup.f_grade2(j, n), j, n));
        st
    };
    let plain = |u: &SparseVec, v: &SparseVec| -> (LambdaPoly, Q) {
        let br = setup.abracket(u, v);
        (LambdaPoly::from_poly(wsharp(setup, &br)), setup.aform(u, v))
    };

    // a-side, highest grade first
    let sa = chain_states(h2);
    let mut r_val: Vec<LambdaPoly> = vec![LambdaPoly::zero(); sa.len()];
    for idx in (0..sa.len()).rev() {
        let (ii, mm) = sa[idx];
        let f_s = setup.f_elem(ii, mm);
        let g = setup.f_grade2(ii, mm);
        let (m, c) = plain(f_s, &a);
        let mut acc = apply_factor(&m, &c, &LambdaPoly::constant(one())).neg();
        for idx2 in idx + 1..sa.len() {
            let (i2, m2) = sa[idx2];
            if setup.f_grade2(i2, m2) < g + 2 || r_val[idx2].is_zero() {
                continue;
            }
            let (m, c) = plain(f_s, &setup.e_elem(i2, m2 + 1));
            acc.sub_assign(&apply_factor(&m, &c, &r_val[idx2]));
        }
        r_val[idx] = acc;
    }
    let mut a_side: Vec<(SparseVec, LambdaPoly)> = vec![(a.clone(), LambdaPoly::constant(one()))];
    for (idx, &(ii, mm)) in sa.iter().enumerate() {
        if !r_val[idx].is_zero() {
            a_side.push((setup.e_elem(ii, mm + 1), r_val[idx].clone()));
        }
    }
    let middle = |v: &SparseVec| -> LambdaPoly {
        let mut y = LambdaPoly::zero();
        for (u, r) in &a_side {
            let br = setup.abracket(u, v);
            let mut m = LambdaPoly::from_poly(wsharp(setup, &br));
            m.add_coeff(0, 0, &DiffPoly::constant(setup.pair_f(&br)));
            m.add_coeff(0, 1, &DiffPoly::constant(setup.pair_s(&br)));
            let c = setup.aform(u, v);
            // (u|v)(λ+∂) enters with a plus sign here
            y.add_assign(&apply_factor(&m, &-c, r));
        }
        y
    };

    // b-side, lowest grade first
    let sb = chain_states(k2);
    let mut u_val: Vec<LambdaPoly> = Vec::with_capacity(sb.len());
    for (idx, &(jj, nn)) in sb.iter().enumerate() {
        let e_t = setup.e_elem(jj, nn + 1);
        let g = setup.f_grade2(jj, nn);
        let mut acc = middle(&e_t);
        for (idx2, &(j2, n2)) in sb[..idx].iter().enumerate() {
            if setup.f_grade2(j2, n2) > g - 2 || u_val[idx2].is_zero() {
                continue;
            }
            let (m, c) = plain(&e_t, setup.f_elem(j2, n2));
            acc.add_assign(&apply_factor(&m, &c, &u_val[idx2]));
        }
        u_val.push(acc);
    }
    let mut total = middle(&b);
    for (idx, &(jj, nn)) in sb.iter().enumerate() {
        if u_val[idx].is_zero() {
            continue;
        }
        let (m, c) = plain(&b, setup.f_elem(jj, nn));
        total.add_assign(&apply_factor(&m, &c, &u_val[idx]));
    }
    total
}

/// Which λ-bracket route to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Direct,
    Closed,
    Skew,
}

/// Cached data for computations in W(g,f): the ρ-table and all generators.
#[derive(Clone, Debug)]
pub struct WAlgebra {
    setup: GradedSetup,
    rho: GenTable,
    gens: Vec<WGenerator>,
}

impl WAlgebra {
    pub fn new(setup: GradedSetup) -> Result<Self> {
        let rho = rho_table(&setup);
        let gens = (0..setup.jf_len())
            .into_par_iter()
            .map(|j| generator_with(&setup, &rho, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(WAlgebra { setup, rho, gens })
    }

    pub fn setup(&self) -> &GradedSetup {
        &self.setup
    }

    pub fn rho_table(&self) -> &GenTable {
        &self.rho
    }

    pub fn generators(&self) -> &[WGenerator] {
        &self.gens
    }

    pub fn generator(&self, j: usize) -> &WGenerator {
        &self.gens[j]
    }

    pub fn is_in_w(&self, g: &DiffPoly) -> bool {
        is_in_w_with(&self.setup, &self.rho, g)
    }

    pub fn pi_to_w(&self, g: &DiffPoly, require_member: bool) -> Result<WPoly> {
        pi_to_w(&self.setup, &self.rho, g, require_member)
    }

    /// Expands `w_j ↦ w(q_j)` into V(g_{≤1/2}).
    pub fn expand(&self, p: &WPoly) -> DiffPoly {
        p.substitute(|j| Some(self.gens[j].w.clone()))
    }

    /// `{w_i λ w_j}` via ρ of the Master Formula, projected to W-coordinates.
    pub fn bracket_direct(&self, i: usize, j: usize) -> LambdaPoly {
        let b = self.rho.bracket(&self.gens[i].w, &self.gens[j].w);
        b.map_coeffs(|c| project_to_w(&self.setup, c))
    }

    /// Same as [`Self::bracket_direct`] but keeping the V(g_{≤1/2}) coefficients.
    pub fn bracket_direct_raw(&self, i: usize, j: usize) -> LambdaPoly {
        self.rho.bracket(&self.gens[i].w, &self.gens[j].w)
    }

    pub fn bracket(&self, i: usize, j: usize, route: Route) -> LambdaPoly {
        match route {
            Route::Direct => self.bracket_direct(i, j),
            Route::Closed => lambda_bracket_closed(&self.setup, i, j, &Twist::Zs),
            Route::Skew => lambda_bracket_skewform(&self.setup, i, j),
        }
    }

    /// Generator table in W-coordinates, computed in parallel.
    pub fn table(&self, route: Route) -> GenTable {
        let n = self.setup.jf_len();
        let cells: Vec<LambdaPoly> =
            (0..n * n).into_par_iter().map(|c| self.bracket(c / n, c % n, route)).collect();
        GenTable::from_fn(n, |i, j| cells[i * n + j].clone())
    }
}

/// `w(u)` for an element of g^f in original coordinates.
pub fn w_of(setup: &GradedSetup, u: &[Q]) -> WPoly {
    wsharp(setup, &sparse(&setup.to_adapted(u)))
}

/// `L0 = ½ Σ_{j∈J^f_0} w(q_j) w(q^j)`.
pub fn l0(setup: &GradedSetup) -> WPoly {
    let mut out = DiffPoly::zero();
    for j in 0..setup.jf_len() {
        if setup.delta2(j) == 0 {
            let partner = w_of(setup, setup.qjup(j));
            out.add_assign(&DiffPoly::var(j).mul_poly(&partner));
        }
    }
    out.scale(&frac(1, 2))
}

/// The Virasoro data and its checks.
#[derive(Clone, Debug)]
pub struct Virasoro {
    pub l0: WPoly,
    pub wf: WPoly,
    pub l: WPoly,
    pub checks: Report,
}

/// `(∂ + cλ) p`
fn d_plus_c_lambda(p: &WPoly, c: &Q) -> LambdaPoly {
    let mut out = LambdaPoly::from_poly(p.derivative());
    out.add_coeff(1, 0, &p.scale(c));
    out
}

/// Builds `L0`, `w(f)`, `L` and checks the Virasoro relations through the
/// Master Formula over the W-coordinate generator table `table`.
pub fn virasoro(setup: &GradedSetup, table: &GenTable) -> Virasoro {
    let l0p = l0(setup);
    let wf = w_of(setup, &setup.triple().f);
    let l = &wf + &l0p;
    let mut rep = Report::new();
    let fa = sparse(&setup.to_adapted(&setup.triple().f));
    let xx = setup.alg().form_value(&setup.triple().x, &setup.triple().x);
    let sf = setup.pair_s(&fa);
    let show = |p: &LambdaPoly| p.render(w_name);
    let mut cmp = |name: &str, got: LambdaPoly, want: LambdaPoly| {
        if got == want {
            rep.pass(name);
        } else {
            rep.fail(name, format!("got {} expected {}", show(&got), show(&want)));
        }
    };
    cmp("L0 is Virasoro with zero central charge", table.bracket(&l0p, &l0p), d_plus_c_lambda(&l0p, &q(2)));
    let mut vir = d_plus_c_lambda(&wf, &q(2));
    vir.add_coeff(3, 0, &DiffPoly::constant(-xx.clone()));
    vir.add_coeff(1, 1, &DiffPoly::constant(sf.clone() * q(2)));
    cmp("w(f) is Virasoro with central charge -(x|x)", table.bracket(&wf, &wf), vir.clone());
    cmp("{w(f) λ L0} = 0", table.bracket(&wf, &l0p), LambdaPoly::zero());
    cmp("{L0 λ w(f)} = 0", table.bracket(&l0p, &wf), LambdaPoly::zero());
    let mut vir_l = d_plus_c_lambda(&l, &q(2));
    vir_l.add_coeff(3, 0, &DiffPoly::constant(-xx));
    vir_l.add_coeff(1, 1, &DiffPoly::constant(sf * q(2)));
    cmp("L is Virasoro", table.bracket(&l, &l), vir_l);
    for j in 0..setup.jf_len() {
        let delta = frac(setup.weight2(j), 2);
        let aj = setup.e_elem(j, 0);
        let mut want = d_plus_c_lambda(&DiffPoly::var(j), &delta);
        want.add_coeff(3, 0, &DiffPoly::constant(-setup.pair_e(&aj) * frac(1, 2)));
        want.add_coeff(1, 1, &DiffPoly::constant(&delta * setup.pair_s(&aj)));
        cmp(&format!("{{L λ w{}}} has weight Δ", j + 1), table.bracket(&l, &DiffPoly::var(j)), want);
    }
    Virasoro { l0: l0p, wf, l, checks: rep }
}

/// Checks that each λ^k coefficient of `{w_i λ w_j}` has weight `Δ_i+Δ_j-1-k`,
/// with z of weight `d+1`.
pub fn weight_defects(setup: &GradedSetup, table: &GenTable) -> Vec<String> {
    let mut bad = Vec::new();
    let n = setup.jf_len();
    for i in 0..n {
        for j in 0..n {
            for ((l, zk), c) in table.get(i, j).terms() {
                // z(s|·) pairs with g_{-d}, so z carries weight d+1
                let zw2 = setup.depth2() as i64 + 2;
                let want = setup.weight2(i) + setup.weight2(j) - 2 - 2 * (*l as i64) - zw2 * (*zk as i64);
                match c.weight_class(|k| setup.weight2(k)) {
                    WeightClass::Homogeneous(w) if w == want => {}
                    WeightClass::Zero => {}
                    other => bad.push(format!("({},{}) λ^{l} z^{zk}: {:?}, expected {want}", i + 1, j + 1, other)),
                }
            }
        }
    }
    bad
}
