//! The ad x grading, the dual bases `q_j^n` / `q^j_n`, and the projections.
//!
//! Everything downstream works in the adapted basis `E(j,n) = q_j^n`
//! (`n = 0..=2δ(j)`), whose dual basis under the form is `F(j,n) = q^j_n`.
//! Coordinates of `a` in the adapted basis are therefore `(a|F(j,n))`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, SparseVec, Sl2Triple};
use crate::linalg::{rank_of, span_basis, Matrix};
use crate::rational::{axpy, binomial, dot, factorial, frac, is_zero_vec, q, scale_vec, sub_vec, zero, zeros, Vector, Q};
use crate::report::Report;

/// Target subspace for [`GradedSetup::project`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// onto g^f along [e,g]
    Gf,
    /// onto [e,g] along g^f
    EBracket,
    /// onto g^e along [f,g]
    Ge,
    /// onto [f,g] along g^e
    FBracket,
}

/// An sl2-triple together with the grading and all dual bases.
#[derive(Clone, Debug)]
pub struct GradedSetup {
    alg: LieAlgebra,
    triple: Sl2Triple,
    depth2: i32,
    delta2: Vec<u32>,
    qj: Vec<Vector>,
    qjup: Vec<Vector>,
    qjn: Vec<Vec<Vector>>,
    qjn_dual: Vec<Vec<Vector>>,
    s: Vector,
    eigenspaces: BTreeMap<i32, Vec<Vector>>,
    basis: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    grade2: Vec<i32>,
    f_low: Vec<Vector>,
    adapted_brackets: Vec<Vec<SparseVec>>,
    adapted_form: Vec<Vec<Q>>,
    f_in_adapted: Vec<SparseVec>,
    functionals: Functionals,
}

/// Values `(y|E_k)` for the distinguished elements `y`.
#[derive(Clone, Debug)]
struct Functionals {
    e: Vector,
    f: Vector,
    x: Vector,
    s: Vector,
}

fn dense_to_sparse(v: &[Q]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// Builds the graded setup. `s` defaults to the normalized basis vector of
/// `g_d` when that space is one-dimensional.
pub fn graded_setup(alg: LieAlgebra, triple: Sl2Triple, s: Option<Vector>) -> Result<GradedSetup> {
    let n = alg.dim();
    let adh = alg.ad(&triple.h);
    let mut eigenspaces = BTreeMap::new();
    let mut found = 0;
    let bound = 2 * n as i32;
    for k2 in -bound..=bound {
        let shifted = adh.sub(&Matrix::identity(n).scale(&q(k2 as i64)));
        let ker = shifted.kernel();
        if !ker.is_empty() {
            found += ker.len();
            eigenspaces.insert(k2, span_basis(&ker, n));
        }
    }
    if found != n {
        return Err(Error::Internal(format!("ad x eigenspaces have total dimension {found}, expected {n}")));
    }
    let depth2 = *eigenspaces.keys().next_back().expect("nonempty");

    let adf = alg.ad(&triple.f);
    let ade = alg.ad(&triple.e);
    // g^f and g^e, graded, canonical RREF bases.
    let graded_kernel = |op: &Matrix, k2: i32| -> Vec<Vector> {
        let Some(basis) = eigenspaces.get(&k2) else { return Vec::new() };
        let images: Vec<Vector> = basis.iter().map(|b| op.mul_vec(b)).collect();
        let combos = Matrix::from_cols(&images).kernel();
        let vecs: Vec<Vector> = combos
            .iter()
            .map(|c| {
                let mut v = zeros(n);
                for (ci, b) in c.iter().zip(basis) {
                    axpy(&mut v, ci, b);
                }
                v
            })
            .collect();
        span_basis(&vecs, n)
    };

    let mut delta2 = Vec::new();
    let mut qj = Vec::new();
    let mut qjup = Vec::new();
    for k2 in (-depth2..=0).rev() {
        let fs = graded_kernel(&adf, k2);
        if fs.is_empty() {
            continue;
        }
        let es = graded_kernel(&ade, -k2);
        if es.len() != fs.len() {
            return Err(Error::Internal(format!(
                "dim g^f_{k2} = {} but dim g^e_{} = {}",
                fs.len(),
                -k2,
                es.len()
            )));
        }
        // q^j = Σ_b C_{jb} e_b with C = (G^T)^{-1}, G_{ab} = (q_a|e_b).
        let mut gram = Matrix::zeros(fs.len(), es.len());
        for (a, fa) in fs.iter().enumerate() {
            for (b, eb) in es.iter().enumerate() {
                gram.set(a, b, alg.form_value(fa, eb));
            }
        }
        let c = gram
            .transpose()
            .inverse()
            .ok_or_else(|| Error::FormPairing(format!("pairing between g^f and g^e is singular in grade {k2}/2")))?;
        for (j, fj) in fs.iter().enumerate() {
            let mut up = zeros(n);
            for (b, eb) in es.iter().enumerate() {
                axpy(&mut up, c.get(j, b), eb);
            }
            delta2.push((-k2) as u32);
            qj.push(fj.clone());
            qjup.push(up);
        }
    }
    let positive_f: usize = (1..=depth2).map(|k2| graded_kernel(&adf, k2).len()).sum();
    if positive_f != 0 {
        return Err(Error::Internal("g^f has positive-grade components".into()));
    }

    let mut qjn = Vec::new();
    let mut qjn_dual = Vec::new();
    for (j, d2) in delta2.iter().enumerate() {
        let d2 = *d2 as usize;
        let mut up = vec![qjup[j].clone()];
        for m in 1..=d2 + 1 {
            up.push(adf.mul_vec(&up[m - 1]));
        }
        if !is_zero_vec(&up[d2 + 1]) {
            return Err(Error::Internal(format!("(ad f)^{} q^{j} does not vanish", d2 + 1)));
        }
        up.pop();
        let mut powers = vec![qj[j].clone()];
        for m in 1..=d2 {
            powers.push(ade.mul_vec(&powers[m - 1]));
        }
        let dual: Vec<Vector> = powers
            .iter()
            .enumerate()
            .map(|(m, v)| {
                let sign = if m % 2 == 0 { Q::one() } else { -Q::one() };
                let fm = factorial(m as u32);
                let c = sign / (&fm * &fm * binomial(d2 as i64, m as i64));
                scale_vec(&c, v)
            })
            .collect();
        qjn.push(up);
        qjn_dual.push(dual);
    }

    let mut basis = Vec::new();
    let mut offsets = Vec::new();
    let mut grade2 = Vec::new();
    for (j, d2) in delta2.iter().enumerate() {
        offsets.push(basis.len());
        for m in 0..=*d2 as usize {
            basis.push((j, m));
            grade2.push(2 * m as i32 - *d2 as i32);
        }
    }
    if basis.len() != n {
        return Err(Error::Internal(format!("adapted basis has {} elements, expected {n}", basis.len())));
    }
    let e_vecs: Vec<&Vector> = basis.iter().map(|&(j, m)| &qjn_dual[j][m]).collect();
    let f_vecs: Vec<&Vector> = basis.iter().map(|&(j, m)| &qjn[j][m]).collect();
    let f_low: Vec<Vector> = f_vecs.iter().map(|v| alg.lower(v)).collect();
    for a in 0..n {
        for b in 0..n {
            let want = if a == b { Q::one() } else { zero() };
            if dot(e_vecs[a], &f_low[b]) != want {
                return Err(Error::Internal(format!("adapted bases are not dual at ({a}, {b})")));
            }
        }
    }
    let to_adapted = |v: &[Q]| -> Vector { f_low.iter().map(|fl| dot(v, fl)).collect() };
    let mut adapted_brackets = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            adapted_brackets[a][b] = dense_to_sparse(&to_adapted(&alg.bracket(e_vecs[a], e_vecs[b])));
        }
    }
    let adapted_form: Vec<Vec<Q>> =
        (0..n).map(|a| (0..n).map(|b| alg.form_value(e_vecs[a], e_vecs[b])).collect()).collect();
    let f_in_adapted: Vec<SparseVec> = f_vecs.iter().map(|v| dense_to_sparse(&to_adapted(v))).collect();

    let s = match s {
        Some(s) => {
            if s.len() != n {
                return Err(Error::InvalidInput(format!("s has length {}, expected {n}", s.len())));
            }
            s
        }
        None => match eigenspaces.get(&depth2) {
            Some(top) if top.len() == 1 => top[0].clone(),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "dim g_d = {} > 1, so s must be given explicitly",
                    eigenspaces.get(&depth2).map_or(0, Vec::len)
                )))
            }
        },
    };
    if alg.bracket(&triple.h, &s) != scale_vec(&q(depth2 as i64), &s) {
        return Err(Error::InvalidInput("s does not lie in g_d".into()));
    }
    if depth2 >= 2 {
        for (&k2, vecs) in eigenspaces.range(1..) {
            if vecs.iter().any(|v| !is_zero_vec(&alg.bracket(&s, v))) {
                return Err(Error::InvalidInput(format!("s does not commute with g_{k2}/2")));
            }
        }
    }

    let functional = |y: &[Q]| -> Vector {
        let low = alg.lower(y);
        e_vecs.iter().map(|v| dot(v, &low)).collect()
    };
    let functionals =
        Functionals { e: functional(&triple.e), f: functional(&triple.f), x: functional(&triple.x), s: functional(&s) };

    Ok(GradedSetup {
        alg,
        triple,
        depth2,
        delta2,
        qj,
        qjup,
        qjn,
        qjn_dual,
        s,
        eigenspaces,
        basis,
        offsets,
        grade2,
        f_low,
        adapted_brackets,
        adapted_form,
        f_in_adapted,
        functionals,
    })
}

impl GradedSetup {
    pub fn alg(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn triple(&self) -> &Sl2Triple {
        &self.triple
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Twice the depth `d`.
    pub fn depth2(&self) -> i32 {
        self.depth2
    }

    /// Number of elements of the g^f basis.
    pub fn jf_len(&self) -> usize {
        self.delta2.len()
    }

    /// Doubled `δ(j)`, where `q_j ∈ g^f_{-δ(j)}`.
    pub fn delta2(&self, j: usize) -> u32 {
        self.delta2[j]
    }

    /// Doubled conformal weight `Δ(q_j) = 1 + δ(j)`.
    pub fn weight2(&self, j: usize) -> i64 {
        2 + self.delta2[j] as i64
    }

    pub fn qj(&self, j: usize) -> &Vector {
        &self.qj[j]
    }

    pub fn qjup(&self, j: usize) -> &Vector {
        &self.qjup[j]
    }

    /// `q^j_n = (ad f)^n q^j`.
    pub fn qjn(&self, j: usize, n: usize) -> &Vector {
        &self.qjn[j][n]
    }

    /// `q_j^n`, proportional to `(ad e)^n q_j`.
    pub fn qjn_dual(&self, j: usize, n: usize) -> &Vector {
        &self.qjn_dual[j][n]
    }

    pub fn s(&self) -> &Vector {
        &self.s
    }

    /// Canonical basis of the eigenspace `g_{k2/2}`.
    pub fn eigenspace(&self, k2: i32) -> &[Vector] {
        self.eigenspaces.get(&k2).map_or(&[], Vec::as_slice)
    }

    pub fn eigenspace_dims(&self) -> BTreeMap<i32, usize> {
        self.eigenspaces.iter().map(|(k, v)| (*k, v.len())).collect()
    }

    // ---- adapted basis ----

    /// `(j, n)` labels of the adapted basis `E(j,n) = q_j^n`.
    pub fn adapted_basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn adapted_index(&self, j: usize, n: usize) -> Option<usize> {
        (n <= self.delta2[j] as usize).then(|| self.offsets[j] + n)
    }

    /// Doubled ad x eigenvalue of `E_k`.
    pub fn grade2(&self, k: usize) -> i32 {
        self.grade2[k]
    }

    /// `E_k` in the original coordinates.
    pub fn adapted_vector(&self, k: usize) -> &Vector {
        let (j, n) = self.basis[k];
        &self.qjn_dual[j][n]
    }

    /// Display name of the adapted variable `E(j,n)`.
    pub fn var_name(&self, k: usize) -> String {
        let (j, n) = self.basis[k];
        if n == 0 {
            format!("q{}", j + 1)
        } else {
            format!("q{}_{}", j + 1, n)
        }
    }

    pub fn to_adapted(&self, v: &[Q]) -> Vector {
        self.f_low.iter().map(|fl| dot(v, fl)).collect()
    }

    pub fn from_adapted(&self, c: &[Q]) -> Vector {
        let mut v = zeros(self.dim());
        for (k, ck) in c.iter().enumerate() {
            axpy(&mut v, ck, self.adapted_vector(k));
        }
        v
    }

    /// `[E_a, E_b]` in adapted coordinates.
    pub fn adapted_bracket_basis(&self, a: usize, b: usize) -> &SparseVec {
        &self.adapted_brackets[a][b]
    }

    /// `(E_a|E_b)`.
    pub fn adapted_form(&self, a: usize, b: usize) -> &Q {
        &self.adapted_form[a][b]
    }

    /// `F(j,n) = q^j_n` in adapted coordinates.
    pub fn f_elem(&self, j: usize, n: usize) -> &SparseVec {
        &self.f_in_adapted[self.offsets[j] + n]
    }

    /// `E(j,n)` in adapted coordinates (zero when `n > 2δ(j)`).
    pub fn e_elem(&self, j: usize, n: usize) -> SparseVec {
        match self.adapted_index(j, n) {
            Some(k) => vec![(k, Q::one())],
            None => Vec::new(),
        }
    }

    /// Bracket of two sparse adapted-coordinate elements.
    pub fn abracket(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (a, ua) in u {
            for (b, vb) in v {
                let c = ua * vb;
                for (k, ck) in &self.adapted_brackets[*a][*b] {
                    *acc.entry(*k).or_insert_with(zero) += &c * ck;
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Form of two sparse adapted-coordinate elements.
    pub fn aform(&self, u: &SparseVec, v: &SparseVec) -> Q {
        let mut acc = zero();
        for (a, ua) in u {
            for (b, vb) in v {
                let g = &self.adapted_form[*a][*b];
                if !g.is_zero() {
                    acc += ua * vb * g;
                }
            }
        }
        acc
    }

    /// Sharp projection onto g^f: coefficients on `q_j`, indexed by `j`.
    pub fn sharp(&self, u: &SparseVec) -> Vec<(usize, Q)> {
        u.iter()
            .filter(|(k, _)| self.basis[*k].1 == 0)
            .map(|(k, c)| (self.basis[*k].0, c.clone()))
            .collect()
    }

    fn functional(vals: &[Q], u: &SparseVec) -> Q {
        u.iter().fold(zero(), |acc, (k, c)| acc + c * &vals[*k])
    }

    pub fn pair_e(&self, u: &SparseVec) -> Q {
        Self::functional(&self.functionals.e, u)
    }

    pub fn pair_f(&self, u: &SparseVec) -> Q {
        Self::functional(&self.functionals.f, u)
    }

    pub fn pair_x(&self, u: &SparseVec) -> Q {
        Self::functional(&self.functionals.x, u)
    }

    pub fn pair_s(&self, u: &SparseVec) -> Q {
        Self::functional(&self.functionals.s, u)
    }

    /// `(y|E_k)` for all `k`, for an arbitrary vector `y` in original coordinates.
    pub fn functional_of(&self, y: &[Q]) -> Vector {
        let low = self.alg.lower(y);
        (0..self.dim()).map(|k| dot(self.adapted_vector(k), &low)).collect()
    }

    /// Index set `J_{-k}` for `k = k2/2`: the `(j,n)` with `q^j_n ∈ g_k`.
    pub fn j_minus_k(&self, k2: i32) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j, &d2) in self.delta2.iter().enumerate() {
            let d2 = d2 as i32;
            if d2 >= k2.abs() && (d2 - k2.abs()) % 2 == 0 {
                out.push((j, ((d2 - k2) / 2) as usize));
            }
        }
        out
    }

    /// Doubled grade of `q^j_n`.
    pub fn f_grade2(&self, j: usize, n: usize) -> i32 {
        self.delta2[j] as i32 - 2 * n as i32
    }

    /// True when g_0 is abelian and g_{1/2} = 0 (the principal case for semisimple g).
    pub fn is_principal(&self) -> bool {
        if !self.eigenspace(1).is_empty() {
            return false;
        }
        let g0 = self.eigenspace(0);
        g0.iter().all(|a| g0.iter().all(|b| is_zero_vec(&self.alg.bracket(a, b))))
    }

    /// Projection of `a` (original coordinates) onto one of the four subspaces.
    pub fn project(&self, a: &[Q], target: Projection) -> Result<Vector> {
        self.check_len(a)?;
        let mut out = zeros(self.dim());
        let low = self.alg.lower(a);
        for (j, d2) in self.delta2.iter().enumerate() {
            for m in 0..=*d2 as usize {
                match target {
                    Projection::Gf if m == 0 => axpy(&mut out, &dot(&self.qjup[j], &low), &self.qj[j]),
                    Projection::EBracket if m > 0 => {
                        axpy(&mut out, &dot(&self.qjn[j][m], &low), &self.qjn_dual[j][m])
                    }
                    Projection::Ge if m == 0 => axpy(&mut out, &dot(&self.qj[j], &low), &self.qjup[j]),
                    Projection::FBracket if m > 0 => {
                        axpy(&mut out, &dot(&self.qjn_dual[j][m], &low), &self.qjn[j][m])
                    }
                    _ => {}
                }
            }
        }
        Ok(out)
    }

    /// `(ad f)^{-1} ∘ π_{[f,g]}`, the inverse of `ad f` on [f,g] extended by zero on g^e.
    pub fn ad_f_inverse_pi(&self, a: &[Q]) -> Result<Vector> {
        self.check_len(a)?;
        Ok(self.ad_f_inverse_matrix().mul_vec(a))
    }

    /// Matrix of [`Self::ad_f_inverse_pi`].
    pub fn ad_f_inverse_matrix(&self) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (j, d2) in self.delta2.iter().enumerate() {
            for k in 0..*d2 as usize {
                let row = self.alg.lower(&self.qjn_dual[j][k + 1]);
                let col = &self.qjn[j][k];
                for (r, cr) in col.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    for (c, rc) in row.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        let v = m.get(r, c) + cr * rc;
                        m.set(r, c, v);
                    }
                }
            }
        }
        m
    }

    fn check_len(&self, a: &[Q]) -> Result<()> {
        if a.len() != self.dim() {
            return Err(Error::InvalidInput(format!("vector has length {}, expected {}", a.len(), self.dim())));
        }
        Ok(())
    }

    fn projection_matrix(&self, target: Projection) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> =
            (0..n).map(|i| self.project(&self.alg.basis_vector(i), target).expect("length checked")).collect();
        Matrix::from_cols(&cols)
    }

    /// Structural checks on the setup.
    pub fn validate(&self) -> Report {
        validate_setup(self)
    }
}

type Tensor = BTreeMap<(usize, usize), Q>;

fn add_outer(t: &mut Tensor, c: &Q, a: &[Q], b: &[Q]) {
    for (i, ai) in a.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (j, bj) in b.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            let e = t.entry((i, j)).or_insert_with(zero);
            *e += c * ai * bj;
        }
    }
    t.retain(|_, v| !v.is_zero());
}

/// Runs every structural check on a setup.
pub fn validate_setup(setup: &GradedSetup) -> Report {
    let mut report = Report::new();
    let alg = &setup.alg;
    let t = &setup.triple;
    let n = alg.dim();
    let nf = setup.jf_len();

    let (adx, ade, adf) = (alg.ad(&t.x), alg.ad(&t.e), alg.ad(&t.f));
    let comm = |a: &Matrix, b: &Matrix| a.mul(b).sub(&b.mul(a));
    let sl2_ok = comm(&adx, &ade) == ade
        && comm(&adx, &adf) == adf.scale(&-Q::one())
        && comm(&ade, &adf) == adx.scale(&q(2));
    report.record("sl2 relations of ad x, ad e, ad f", sl2_ok, "");

    let mut bad = Vec::new();
    for j in 0..nf {
        let d = frac(setup.delta2[j] as i64, 2);
        if alg.bracket(&t.x, &setup.qj[j]) != scale_vec(&-d.clone(), &setup.qj[j]) {
            bad.push(format!("[x,q_{j}]"));
        }
        if alg.bracket(&t.x, &setup.qjup[j]) != scale_vec(&d, &setup.qjup[j]) {
            bad.push(format!("[x,q^{j}]"));
        }
    }
    report.expect_none("grades of q_j and q^j", bad);

    let mut bad = Vec::new();
    for j in 0..nf {
        let dj = setup.delta2[j] as usize;
        let mut en = setup.qj[j].clone();
        for nn in 0..=dj {
            if nn > 0 {
                en = ade.mul_vec(&en);
            }
            let fm = factorial(nn as u32);
            let sign = if nn % 2 == 0 { Q::one() } else { -Q::one() };
            let norm = sign * &fm * &fm * binomial(dj as i64, nn as i64);
            for i in 0..nf {
                for m in 0..=setup.delta2[i] as usize {
                    let want = if i == j && m == nn { norm.clone() } else { zero() };
                    if alg.form_value(&en, &setup.qjn[i][m]) != want {
                        bad.push(format!("((ad e)^{nn} q_{j} | (ad f)^{m} q^{i})"));
                    }
                }
            }
        }
    }
    report.expect_none("duality of (ad e)^n q_j and (ad f)^m q^i", bad);

    let mut bad = Vec::new();
    for j in 0..nf {
        let d2 = setup.delta2[j] as i64;
        for m in 0..=d2 as usize {
            let e_m = &setup.qjn_dual[j][m];
            let lower = if m == 0 { zeros(n) } else { scale_vec(&-Q::one(), &setup.qjn_dual[j][m - 1]) };
            if alg.bracket(&t.f, e_m) != lower {
                bad.push(format!("[f,q_{j}^{m}]"));
            }
            let upper = if m as i64 == d2 {
                zeros(n)
            } else {
                scale_vec(&q(-(m as i64 + 1) * (d2 - m as i64)), &setup.qjn_dual[j][m + 1])
            };
            if alg.bracket(&t.e, e_m) != upper {
                bad.push(format!("[e,q_{j}^{m}]"));
            }
            let f_m = &setup.qjn[j][m];
            let next = if m as i64 == d2 { zeros(n) } else { setup.qjn[j][m + 1].clone() };
            if alg.bracket(&t.f, f_m) != next {
                bad.push(format!("[f,q^{j}_{m}]"));
            }
            let prev = if m == 0 {
                zeros(n)
            } else {
                scale_vec(&q(m as i64 * (d2 - m as i64 + 1)), &setup.qjn[j][m - 1])
            };
            if alg.bracket(&t.e, f_m) != prev {
                bad.push(format!("[e,q^{j}_{m}]"));
            }
        }
    }
    report.expect_none("sl2-action identities", bad);

    let id = Matrix::identity(n);
    let pgf = setup.projection_matrix(Projection::Gf);
    let peg = setup.projection_matrix(Projection::EBracket);
    let pge = setup.projection_matrix(Projection::Ge);
    let pfg = setup.projection_matrix(Projection::FBracket);
    report.record("completeness g = g^f + [e,g]", pgf.add(&peg) == id, "");
    report.record("completeness g = g^e + [f,g]", pge.add(&pfg) == id, "");
    let idempotent = [&pgf, &peg, &pge, &pfg].iter().all(|p| p.mul(p) == **p);
    report.record("projections are idempotent", idempotent, "");

    let mut span_f: Vec<Vector> = setup.qj.clone();
    let mut span_e: Vec<Vector> = setup.qjup.clone();
    for j in 0..nf {
        for m in 1..=setup.delta2[j] as usize {
            span_f.push(setup.qjn_dual[j][m].clone());
            span_e.push(setup.qjn[j][m].clone());
        }
    }
    report.record("direct sums have full rank", rank_of(&span_f) == n && rank_of(&span_e) == n, "");

    let mut bad = Vec::new();
    for j in 0..nf {
        for i in 0..nf {
            for m in 1..=setup.delta2[i] as usize {
                if !alg.form_value(&setup.qj[j], &setup.qjn[i][m]).is_zero() {
                    bad.push(format!("(q_{j}|q^{i}_{m})"));
                }
                if !alg.form_value(&setup.qjup[j], &setup.qjn_dual[i][m]).is_zero() {
                    bad.push(format!("(q^{j}|q_{i}^{m})"));
                }
            }
        }
    }
    report.expect_none("g^f ⊥ [f,g] and [e,g] ⊥ g^e", bad);

    let mut bad = Vec::new();
    for k2 in -setup.depth2..=setup.depth2 {
        let mut lhs = Tensor::new();
        for (i, m) in setup.j_minus_k(2 - k2) {
            if m < setup.delta2[i] as usize {
                add_outer(&mut lhs, &Q::one(), &setup.qjn_dual[i][m + 1], &setup.qjn[i][m]);
            }
        }
        let mut rhs = Tensor::new();
        for (j, m) in setup.j_minus_k(k2) {
            if m < setup.delta2[j] as usize {
                add_outer(&mut rhs, &-Q::one(), &setup.qjn[j][m], &setup.qjn_dual[j][m + 1]);
            }
        }
        if lhs != rhs {
            bad.push(format!("k = {k2}/2"));
        }
    }
    report.expect_none("tensor identity for all admissible k", bad);

    let s_ok = alg.bracket(&t.h, &setup.s) == scale_vec(&q(setup.depth2 as i64), &setup.s);
    let commutes = setup.depth2 < 2
        || setup.eigenspaces.range(1..).all(|(_, vs)| vs.iter().all(|v| is_zero_vec(&alg.bracket(&setup.s, v))));
    report.record("s ∈ g_d commutes with g_{≥1/2}", s_ok && commutes, "");

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let nonneg: Vec<&Vector> = setup.eigenspaces.range(0..).flat_map(|(_, v)| v.iter()).collect();
    let mut transversal = true;
    let mut direct = true;
    for _ in 0..3 {
        let mut r = setup.triple.f.clone();
        for v in &nonneg {
            let c = frac(rng.gen_range(-5..=5), rng.gen_range(1..=4));
            axpy(&mut r, &c, v);
        }
        let image: Vec<Vector> = (0..n).map(|i| alg.bracket(&r, &alg.basis_vector(i))).collect();
        let mut all = image.clone();
        all.extend(setup.qjup.iter().cloned());
        transversal &= rank_of(&all) == n;
        direct &= rank_of(&image) + nf == n;
    }
    report.record("transversality [f+r,g] + g^e = g at sampled r", transversal, "");
    if setup.is_principal() {
        report.record("direct sum [f+r,g] ⊕ g^e = g at sampled r (principal)", direct, "");
    }

    let adfi = setup.ad_f_inverse_matrix();
    let inv_ok = adf.mul(&adfi) == pfg;
    let kernel_ok = setup.qjup.iter().all(|v| is_zero_vec(&adfi.mul_vec(v)));
    let mut image_ok = true;
    for j in 0..nf {
        for m in 1..=setup.delta2[j] as usize {
            let back = adfi.mul_vec(&setup.qjn[j][m]);
            image_ok &= sub_vec(&back, &setup.qjn[j][m - 1]).iter().all(Zero::is_zero);
        }
    }
    report.record("(ad f)^{-1} π_[f,g] inverts ad f on [f,g] with kernel g^e", inv_ok && kernel_ok && image_ok, "");

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_sl, sl2_triple_from_partition};

    fn setup(n: usize, part: &[usize]) -> GradedSetup {
        let g = build_sl(n).unwrap();
        let t = sl2_triple_from_partition(&g, part).unwrap();
        graded_setup(g, t, None).unwrap()
    }

    #[test]
    fn sl2_grades() {
        let s = setup(2, &[2]);
        let dims = s.eigenspace_dims();
        assert_eq!(dims, [(-2, 1), (0, 1), (2, 1)].into_iter().collect());
        assert_eq!(s.jf_len(), 1);
        assert_eq!(s.delta2(0), 2);
    }

    #[test]
    fn sl3_principal_grades() {
        let s = setup(3, &[3]);
        let dims: Vec<usize> = s.eigenspace_dims().values().cloned().collect();
        assert_eq!(dims, vec![1, 2, 2, 2, 1]);
        let mut deltas: Vec<u32> = (0..s.jf_len()).map(|j| s.delta2(j)).collect();
        deltas.sort();
        assert_eq!(deltas, vec![2, 4]);
    }

    #[test]
    fn sl3_minimal_deltas() {
        let s = setup(3, &[2, 1]);
        let mut deltas: Vec<u32> = (0..s.jf_len()).map(|j| s.delta2(j)).collect();
        deltas.sort();
        assert_eq!(deltas, vec![0, 1, 1, 2]);
    }

    #[test]
    fn projections_of_e_in_sl2() {
        let s = setup(2, &[2]);
        let e = s.triple().e.clone();
        assert!(is_zero_vec(&s.project(&e, Projection::Gf).unwrap()));
        assert_eq!(s.project(&e, Projection::EBracket).unwrap(), e);
        assert!(s.project(&[q(1)], Projection::Gf).is_err());
    }

    #[test]
    fn gf_elements_are_fixed() {
        let s = setup(3, &[2, 1]);
        for j in 0..s.jf_len() {
            assert_eq!(&s.project(s.qj(j), Projection::Gf).unwrap(), s.qj(j));
            assert!(is_zero_vec(&s.ad_f_inverse_pi(s.qjup(j)).unwrap()));
        }
    }

    #[test]
    fn all_checks_pass() {
        for (n, part) in [(2, vec![2]), (3, vec![2, 1]), (3, vec![3]), (4, vec![4])] {
            let r = setup(n, &part).validate();
            assert!(r.all_passed(), "sl{n} {part:?}:\n{}", r.render());
        }
    }

    #[test]
    fn principal_direct_sum_is_checked() {
        let r = setup(3, &[3]).validate();
        assert!(r.checks.iter().any(|c| c.name.contains("direct sum") && c.passed));
    }

    #[test]
    fn s_is_required_when_top_space_is_large() {
        let g = build_sl(4).unwrap();
        let t = sl2_triple_from_partition(&g, &[2, 2]).unwrap();
        assert!(matches!(graded_setup(g.clone(), t.clone(), None), Err(Error::InvalidInput(_))));
        let e = t.e.clone();
        assert!(graded_setup(g, t, Some(e)).is_ok());
    }
}
