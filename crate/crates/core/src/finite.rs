//! The classical finite W-algebra S(g^f): the closed bracket formula, the
//! slice-geometry oracle through Φ^(r), the z-twisted bracket and the
//! slice shift.
//!
//! Polynomials in S(g^f) are derivative-free [`DiffPoly`]s whose variable `j`
//! stands for the g^f basis element `q_j`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lambda::ZPoly;
use crate::lie::SparseVec;
use crate::linalg::Matrix;
use crate::poly::{DiffPoly, Monomial, Var};
use crate::rational::{frac, is_zero_vec, Q};
use crate::setup::GradedSetup;

/// A polynomial in the g^f symbols `q_j`.
pub type GfPoly = DiffPoly;

pub fn gf_name(j: usize) -> String {
    format!("q{}", j + 1)
}

/// A vector of g (original coordinates) whose entries are polynomials in
/// indeterminates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicVector {
    coords: Vec<DiffPoly>,
}

impl SymbolicVector {
    pub fn zero(dim: usize) -> Self {
        SymbolicVector { coords: vec![DiffPoly::zero(); dim] }
    }

    pub fn constant(v: &[Q]) -> Self {
        SymbolicVector { coords: v.iter().map(|c| DiffPoly::constant(c.clone())).collect() }
    }

    pub fn coords(&self) -> &[DiffPoly] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(DiffPoly::is_zero)
    }

    /// `self += c * v` for a constant vector `v` and polynomial `c`.
    pub fn add_poly_times(&mut self, c: &DiffPoly, v: &[Q]) {
        for (x, vi) in self.coords.iter_mut().zip(v) {
            if !vi.is_zero() {
                x.add_assign(&c.scale(vi));
            }
        }
    }

    pub fn add(&self, other: &SymbolicVector) -> SymbolicVector {
        SymbolicVector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &SymbolicVector) -> SymbolicVector {
        SymbolicVector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> SymbolicVector {
        SymbolicVector { coords: self.coords.iter().map(|a| -a).collect() }
    }

    /// Applies a constant matrix.
    pub fn apply(&self, m: &Matrix) -> SymbolicVector {
        let mut out = SymbolicVector::zero(m.rows());
        for (c, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for r in 0..m.rows() {
                let a = m.get(r, c);
                if !a.is_zero() {
                    out.coords[r].add_scaled(x, a);
                }
            }
        }
        out
    }

    /// The Lie bracket of two symbolic vectors.
    pub fn bracket(&self, setup: &GradedSetup, other: &SymbolicVector) -> SymbolicVector {
        let alg = setup.alg();
        let mut out = SymbolicVector::zero(alg.dim());
        for (i, a) in self.coords.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (k, b) in other.coords.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let sc = alg.structure_constants(i, k);
                if sc.is_empty() {
                    continue;
                }
                let ab = a.mul_poly(b);
                for (l, c) in sc {
                    out.coords[*l].add_scaled(&ab, c);
                }
            }
        }
        out
    }

    /// `(v|self)` for a constant vector `v`.
    pub fn pair(&self, setup: &GradedSetup, v: &[Q]) -> DiffPoly {
        let low = setup.alg().lower(v);
        let mut out = DiffPoly::zero();
        for (x, c) in self.coords.iter().zip(&low) {
            out.add_scaled(x, c);
        }
        out
    }
}

/// The symbolic element `r = Σ_j r_j q^j` of g^e, plus `z·x` when `with_z`,
/// where indeterminate `j` is `r_j` and indeterminate `jf_len` is `z`.
pub fn generic_r(setup: &GradedSetup, with_z: bool) -> SymbolicVector {
    let mut r = SymbolicVector::zero(setup.dim());
    for j in 0..setup.jf_len() {
        r.add_poly_times(&DiffPoly::var(j), setup.qjup(j));
    }
    if with_z {
        r.add_poly_times(&DiffPoly::var(setup.jf_len()), &setup.triple().x);
    }
    r
}

fn check_r_support(setup: &GradedSetup, r: &SymbolicVector) -> Result<()> {
    // coordinates of r in the adapted basis must vanish on negative grades
    for k in 0..setup.dim() {
        if setup.grade2(k) >= 0 {
            continue;
        }
        // (r|F_k) gives the E_k coefficient; F_k = q^j_n
        let (j, n) = setup.adapted_basis()[k];
        if !r.pair(setup, setup.qjn(j, n)).is_zero() {
            return Err(Error::InvalidInput("r has support in negative grades".into()));
        }
    }
    Ok(())
}

/// `Φ^(r)(a) = π_{g^e} Σ_{t=0}^{2d} (-(ad r)∘(ad f)^{-1}∘π_{[f,g]})^t a`.
///
/// Panics if the `t = 2d+1` term does not vanish, which would contradict the
/// nilpotency of the operator.
pub fn phi_r(setup: &GradedSetup, a: &SymbolicVector, r: &SymbolicVector) -> Result<SymbolicVector> {
    check_r_support(setup, r)?;
    let (sum, tail) = phi_series(setup, a, r);
    assert!(tail.is_zero(), "Φ^(r) series did not terminate at t = 2d");
    let pge = projection_ge(setup);
    Ok(sum.apply(&pge))
}

/// Returns `Σ_{t ≤ 2d} X^t a` and `X^{2d+1} a` for `X = -(ad r) T`.
fn phi_series(setup: &GradedSetup, a: &SymbolicVector, r: &SymbolicVector) -> (SymbolicVector, SymbolicVector) {
    let t_mat = setup.ad_f_inverse_matrix();
    let mut term = a.clone();
    let mut sum = a.clone();
    for _ in 0..setup.depth2() {
        term = r.bracket(setup, &term.apply(&t_mat)).neg();
        sum = sum.add(&term);
    }
    let tail = r.bracket(setup, &term.apply(&t_mat)).neg();
    (sum, tail)
}

fn projection_ge(setup: &GradedSetup) -> Matrix {
    let n = setup.dim();
    let cols: Vec<_> = (0..n)
        .map(|i| setup.project(&setup.alg().basis_vector(i), crate::setup::Projection::Ge).expect("length"))
        .collect();
    Matrix::from_cols(&cols)
}

/// Checks `a - Φ^(r)(a) = [f+r, T Σ_t (-(ad r) T)^t a]` identically in the indeterminates.
pub fn phi_lemma_c(setup: &GradedSetup, a: &SymbolicVector, r: &SymbolicVector) -> Result<bool> {
    let phi = phi_r(setup, a, r)?;
    let (sum, _) = phi_series(setup, a, r);
    let inner = sum.apply(&setup.ad_f_inverse_matrix());
    let fr = r.add(&SymbolicVector::constant(&setup.triple().f));
    Ok(a.sub(&phi) == fr.bracket(setup, &inner))
}

/// `(p|Φ^(r)([q,r]))` with symbolic `r ∈ g^e` (plus `zx` when `twisted`),
/// rewritten in the symbols `q_j`.
pub fn finite_bracket_oracle_z(setup: &GradedSetup, p: &[Q], q: &[Q], twisted: bool) -> ZPoly {
    let r = generic_r(setup, twisted);
    let qv = SymbolicVector::constant(q);
    let a = qv.bracket(setup, &r);
    let phi = phi_r(setup, &a, &r).expect("generic r lies in non-negative grades");
    let val = phi.pair(setup, p);
    split_z(&val, setup.jf_len())
}

/// Untwisted oracle as a polynomial in the `q_j`.
pub fn finite_bracket_oracle(setup: &GradedSetup, p: &[Q], q: &[Q]) -> GfPoly {
    finite_bracket_oracle_z(setup, p, q, false).coeff(0)
}

fn split_z(p: &DiffPoly, zvar: usize) -> ZPoly {
    let mut out = ZPoly::zero();
    let zv = Var::new(zvar, 0);
    for (m, c) in p.terms() {
        let k = m.exponent(zv);
        let rest = Monomial::from_factors(m.factors().iter().filter(|(v, _)| *v != zv).cloned());
        out.add_coeff(k, &DiffPoly::from_terms([(rest, c.clone())]));
    }
    out
}

fn sharp_poly(setup: &GradedSetup, u: &SparseVec) -> DiffPoly {
    DiffPoly::linear(&setup.sharp(u))
}

/// `[u,v]^♯ + z(x|[u,v])` as a polynomial in z.
fn twisted_factor(setup: &GradedSetup, u: &SparseVec, v: &SparseVec) -> ZPoly {
    let br = setup.abracket(u, v);
    let mut out = ZPoly::from_poly(sharp_poly(setup, &br));
    out.add_coeff(1, &DiffPoly::constant(setup.pair_x(&br)));
    out
}

/// The closed-formula bracket `{p,q}_{S_z}` with z formal.
///
/// Inputs are in adapted coordinates. The chain sum is evaluated by dynamic
/// programming over states `(j,n)` with `n < 2δ(j)`, ordered by grade.
pub fn finite_bracket_formal_adapted(setup: &GradedSetup, p: &SparseVec, q: &SparseVec) -> ZPoly {
    let mut states: Vec<(usize, usize)> = Vec::new();
    for j in 0..setup.jf_len() {
        for n in 0..setup.delta2(j) as usize {
            states.push((j, n));
        }
    }
    // process in increasing grade of F(j,n)
    states.sort_by_key(|&(j, n)| (setup.f_grade2(j, n), j, n));
    let mut t_val: Vec<ZPoly> = Vec::with_capacity(states.len());
    for (idx, &(j, n)) in states.iter().enumerate() {
        let e_next = setup.e_elem(j, n + 1);
        let k2 = setup.f_grade2(j, n);
        let mut acc = twisted_factor(setup, &e_next, q);
        for (idx2, &(j2, n2)) in states[..idx].iter().enumerate() {
            if setup.f_grade2(j2, n2) > k2 - 2 {
                continue;
            }
            let fac = twisted_factor(setup, &e_next, setup.f_elem(j2, n2));
            if fac.is_zero() || t_val[idx2].is_zero() {
                continue;
            }
            acc.add_assign(&fac.mul(&t_val[idx2]));
        }
        t_val.push(acc);
    }
    let mut out = twisted_factor(setup, p, q);
    for (idx, &(j, n)) in states.iter().enumerate() {
        let fac = twisted_factor(setup, p, setup.f_elem(j, n));
        if !fac.is_zero() && !t_val[idx].is_zero() {
            out.add_assign(&fac.mul(&t_val[idx]));
        }
    }
    out
}

/// Closed-formula bracket of g^f vectors (original coordinates), z formal.
pub fn finite_bracket_formal(setup: &GradedSetup, p: &[Q], q: &[Q]) -> ZPoly {
    let pa = sparse(&setup.to_adapted(p));
    let qa = sparse(&setup.to_adapted(q));
    finite_bracket_formal_adapted(setup, &pa, &qa)
}

/// Closed-formula bracket at a rational value of z.
pub fn finite_bracket(setup: &GradedSetup, p: &[Q], q: &[Q], z: &Q) -> GfPoly {
    finite_bracket_formal(setup, p, q).eval(z)
}

pub(crate) fn sparse(v: &[Q]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// Generator table `{q_i, q_j}` with z formal.
pub fn finite_table(setup: &GradedSetup) -> Vec<Vec<ZPoly>> {
    let n = setup.jf_len();
    (0..n)
        .map(|i| (0..n).map(|j| finite_bracket_formal(setup, setup.qj(i), setup.qj(j))).collect())
        .collect()
}

/// `(q_j|e)` for every j.
pub fn e_pairings(setup: &GradedSetup) -> Vec<Q> {
    (0..setup.jf_len()).map(|j| setup.alg().form_value(setup.qj(j), &setup.triple().e)).collect()
}

/// `q_j ↦ q_j + (z²/4)(q_j|e)` with z formal.
pub fn slice_shift_formal(setup: &GradedSetup, p: &ZPoly) -> ZPoly {
    let ep = e_pairings(setup);
    p.substitute(|j| {
        let mut img = ZPoly::from_poly(DiffPoly::var(j));
        img.add_coeff(2, &DiffPoly::constant(&ep[j] * frac(1, 4)));
        img
    })
}

/// The slice shift at a rational value of z.
pub fn slice_shift(setup: &GradedSetup, p: &GfPoly, z: &Q) -> GfPoly {
    let ep = e_pairings(setup);
    let c = z * z * frac(1, 4);
    p.substitute(|j| Some(DiffPoly::var(j) + DiffPoly::constant(&ep[j] * &c)))
}

/// Leibniz extension of a generator table: `{P,Q} = Σ ∂P/∂q_i ∂Q/∂q_j {q_i,q_j}`.
pub fn poisson_bracket(table: &[Vec<ZPoly>], p: &ZPoly, q: &ZPoly) -> ZPoly {
    let mut out = ZPoly::zero();
    let vars = |x: &ZPoly| {
        let mut s = std::collections::BTreeSet::new();
        for (_, c) in x.terms() {
            s.extend(c.variables());
        }
        s
    };
    let pv = vars(p);
    let qv = vars(q);
    for vi in &pv {
        let dp = p.map_coeffs(|c| c.partial(*vi));
        for vj in &qv {
            let b = &table[vi.index][vj.index];
            if b.is_zero() {
                continue;
            }
            let dq = q.map_coeffs(|c| c.partial(*vj));
            out.add_assign(&dp.mul(&dq).mul(b));
        }
    }
    out
}

/// `{a,{b,c}} + {b,{c,a}} + {c,{a,b}}` on generators.
pub fn jacobiator(table: &[Vec<ZPoly>], a: usize, b: usize, c: usize) -> ZPoly {
    let g = |i: usize| ZPoly::from_poly(DiffPoly::var(i));
    let t1 = poisson_bracket(table, &g(a), &table[b][c]);
    let t2 = poisson_bracket(table, &g(b), &table[c][a]);
    let t3 = poisson_bracket(table, &g(c), &table[a][b]);
    t1.add(&t2).add(&t3)
}

/// True when the vector lies in g^f.
pub fn in_gf(setup: &GradedSetup, v: &[Q]) -> bool {
    is_zero_vec(&setup.alg().bracket(&setup.triple().f, v))
}
