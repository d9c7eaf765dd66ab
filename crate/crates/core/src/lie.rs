//! Lie algebras given by structure constants, and sl2-triples.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{is_zero_vec, q, scale_vec, unit, zero, zeros, Vector, Q};

/// Sparse coordinate vector: sorted `(index, coefficient)` pairs, no zeros.
pub type SparseVec = Vec<(usize, Q)>;

fn to_sparse(v: &[Q]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// A finite-dimensional Lie algebra with an invariant symmetric form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    brackets: Vec<Vec<SparseVec>>,
    form: Matrix,
}

impl LieAlgebra {
    /// Builds and validates an algebra. `brackets[i][j]` is `[b_i, b_j]`.
    pub fn new(labels: Vec<String>, brackets: Vec<Vec<Vector>>, form: Matrix) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if brackets.len() != dim || brackets.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim)) {
            return Err(Error::InvalidInput(format!("bracket table must be {dim}x{dim} with vectors of length {dim}")));
        }
        if form.rows() != dim || form.cols() != dim {
            return Err(Error::InvalidInput(format!("form must be {dim}x{dim}")));
        }
        let alg = LieAlgebra {
            labels,
            brackets: brackets.iter().map(|r| r.iter().map(|v| to_sparse(v)).collect()).collect(),
            form,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let a = self.bracket_basis(i, j);
                let b = self.bracket_basis(j, i);
                if a.iter().zip(&b).any(|(x, y)| x + y != zero()) {
                    return Err(Error::Validation(format!(
                        "antisymmetry fails for ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let bi = unit(n, i);
                    let bj = unit(n, j);
                    let bk = unit(n, k);
                    let t1 = self.bracket(&bi, &self.bracket(&bj, &bk));
                    let t2 = self.bracket(&bj, &self.bracket(&bk, &bi));
                    let t3 = self.bracket(&bk, &self.bracket(&bi, &bj));
                    if t1.iter().zip(&t2).zip(&t3).any(|((a, b), c)| !(a + b + c).is_zero()) {
                        return Err(Error::Validation(format!(
                            "Jacobi identity fails for ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.form.get(i, j) != self.form.get(j, i) {
                    return Err(Error::Validation(format!(
                        "form is not symmetric at ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.bracket_basis(a, b);
                for c in 0..n {
                    let ac = self.bracket_basis(a, c);
                    let lhs = self.form_value(&ab, &unit(n, c)) + self.form_value(&unit(n, b), &ac);
                    if !lhs.is_zero() {
                        return Err(Error::Validation(format!(
                            "form is not invariant on ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        )));
                    }
                }
            }
        }
        if self.form.determinant().is_zero() {
            return Err(Error::Validation("form is degenerate (zero determinant)".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn form_matrix(&self) -> &Matrix {
        &self.form
    }

    /// `[b_i, b_j]` in sparse coordinates.
    pub fn structure_constants(&self, i: usize, j: usize) -> &SparseVec {
        &self.brackets[i][j]
    }

    fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let mut v = zeros(self.dim());
        for (k, c) in &self.brackets[i][j] {
            v[*k] = c.clone();
        }
        v
    }

    pub fn bracket(&self, a: &[Q], b: &[Q]) -> Vector {
        let mut out = zeros(self.dim());
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let ab = ai * bj;
                for (k, c) in &self.brackets[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    pub fn form_value(&self, a: &[Q], b: &[Q]) -> Q {
        let mut acc = zero();
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let g = self.form.get(i, j);
                if !g.is_zero() {
                    acc += ai * bj * g;
                }
            }
        }
        acc
    }

    /// Matrix of `ad a` acting on coordinate columns.
    pub fn ad(&self, a: &[Q]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|j| self.bracket(a, &unit(n, j))).collect();
        Matrix::from_cols(&cols)
    }

    /// `G·v`, so that `(a|v) = a · (G v)`.
    pub fn lower(&self, v: &[Q]) -> Vector {
        self.form.mul_vec(v)
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        unit(self.dim(), i)
    }
}

/// The special linear algebra sl_n with the trace form.
///
/// Basis: `E_ij` for `i != j` in lexicographic order, then `H_i = E_ii - E_{i+1,i+1}`.
pub fn build_sl(n: usize) -> Result<LieAlgebra> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("sl_n needs n >= 2, got {n}")));
    }
    let basis = sl_basis_matrices(n);
    let labels = sl_labels(n);
    let dim = basis.len();
    let coords = |m: &Vec<Vec<Q>>| sl_coords(n, m);
    let mut brackets = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let c = mat_sub(&mat_mul(&basis[i], &basis[j]), &mat_mul(&basis[j], &basis[i]));
            brackets[i][j] = coords(&c);
        }
    }
    let mut form = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            form.set(i, j, trace(&mat_mul(&basis[i], &basis[j])));
        }
    }
    LieAlgebra::new(labels, brackets, form)
}

fn sl_labels(n: usize) -> Vec<String> {
    let pair = |i: usize, j: usize| if n <= 9 { format!("{i}{j}") } else { format!("{i}_{j}") };
    let mut labels = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                labels.push(format!("E{}", pair(i, j)));
            }
        }
    }
    labels.extend((1..n).map(|i| format!("H{i}")));
    labels
}

type Mat = Vec<Vec<Q>>;

fn sl_basis_matrices(n: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    let zero_mat = || vec![vec![zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = zero_mat();
                m[i][j] = Q::one();
                out.push(m);
            }
        }
    }
    for i in 0..n - 1 {
        let mut m = zero_mat();
        m[i][i] = Q::one();
        m[i + 1][i + 1] = -Q::one();
        out.push(m);
    }
    out
}

/// Coordinates of a traceless matrix in the sl_n basis.
fn sl_coords(n: usize, m: &Mat) -> Vector {
    let mut v = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                v.push(m[i][j].clone());
            }
        }
    }
    let mut acc = zero();
    for i in 0..n - 1 {
        acc += &m[i][i];
        v.push(acc.clone());
    }
    v
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = vec![vec![zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    c[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    c
}

fn mat_sub(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

fn trace(a: &Mat) -> Q {
    (0..a.len()).fold(zero(), |acc, i| acc + &a[i][i])
}

/// An sl2-triple `{e, h = 2x, f}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    pub e: Vector,
    pub h: Vector,
    pub f: Vector,
    pub x: Vector,
}

impl Sl2Triple {
    /// Checks the sl2 relations and nilpotency of `ad f`.
    pub fn new(alg: &LieAlgebra, e: Vector, h: Vector, f: Vector) -> Result<Self> {
        let n = alg.dim();
        for (name, v) in [("e", &e), ("h", &h), ("f", &f)] {
            if v.len() != n {
                return Err(Error::InvalidInput(format!("triple element `{name}` has length {}, expected {n}", v.len())));
            }
        }
        let two = q(2);
        if alg.bracket(&h, &e) != scale_vec(&two, &e) {
            return Err(Error::Validation("[h,e] != 2e".into()));
        }
        if alg.bracket(&h, &f) != scale_vec(&-two, &f) {
            return Err(Error::Validation("[h,f] != -2f".into()));
        }
        if alg.bracket(&e, &f) != h {
            return Err(Error::Validation("[e,f] != h".into()));
        }
        let adf = alg.ad(&f);
        let mut p = adf.clone();
        for _ in 0..n {
            p = p.mul(&adf);
        }
        if !p.is_zero() {
            return Err(Error::Validation("ad f is not nilpotent".into()));
        }
        let x = scale_vec(&crate::rational::frac(1, 2), &h);
        Ok(Sl2Triple { e, h, f, x })
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.f)
    }
}

/// The triple attached to a partition of `n`, for `alg = build_sl(n)`.
///
/// Each Jordan block of size `p` contributes `f = Σ E_{i+1,i}`,
/// `h = diag(p-1, p-3, ..., 1-p)` and `e = Σ i(p-i) E_{i,i+1}`.
pub fn sl2_triple_from_partition(alg: &LieAlgebra, partition: &[usize]) -> Result<Sl2Triple> {
    let n = (1..).find(|k: &usize| k * k > alg.dim()).unwrap_or(0);
    if n * n - 1 != alg.dim() || n < 2 {
        return Err(Error::InvalidInput("algebra is not sl_n".into()));
    }
    if partition.contains(&0) {
        return Err(Error::InvalidInput("partition parts must be positive".into()));
    }
    let total: usize = partition.iter().sum();
    if total != n {
        return Err(Error::InvalidInput(format!("partition sums to {total}, expected {n}")));
    }
    let zero_mat = || vec![vec![zero(); n]; n];
    let (mut e, mut h, mut f) = (zero_mat(), zero_mat(), zero_mat());
    let mut start = 0;
    for &p in partition {
        for i in 0..p {
            h[start + i][start + i] = q(p as i64 - 1 - 2 * i as i64);
        }
        for i in 1..p {
            f[start + i][start + i - 1] = Q::one();
            e[start + i - 1][start + i] = q((i * (p - i)) as i64);
        }
        start += p;
    }
    Sl2Triple::new(alg, sl_coords(n, &e), sl_coords(n, &h), sl_coords(n, &f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn idx(alg: &LieAlgebra, label: &str) -> usize {
        alg.labels().iter().position(|l| l == label).unwrap()
    }

    #[test]
    fn sl2_trace_form_values() {
        let g = build_sl(2).unwrap();
        assert_eq!(g.dim(), 3);
        let (e, f, h) = (idx(&g, "E12"), idx(&g, "E21"), idx(&g, "H1"));
        assert_eq!(g.form_value(&g.basis_vector(e), &g.basis_vector(f)), q(1));
        assert_eq!(g.form_value(&g.basis_vector(h), &g.basis_vector(h)), q(2));
        assert_eq!(g.bracket(&g.basis_vector(e), &g.basis_vector(f)), g.basis_vector(h));
    }

    #[test]
    fn sl3_form_is_nondegenerate() {
        let g = build_sl(3).unwrap();
        assert_eq!(g.dim(), 8);
        assert!(!g.form_matrix().determinant().is_zero());
    }

    #[test]
    fn small_n_rejected() {
        assert!(matches!(build_sl(1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn principal_sl2_triple() {
        let g = build_sl(2).unwrap();
        let t = sl2_triple_from_partition(&g, &[2]).unwrap();
        assert_eq!(t.e, g.basis_vector(idx(&g, "E12")));
        assert_eq!(t.f, g.basis_vector(idx(&g, "E21")));
        assert_eq!(t.h, g.basis_vector(idx(&g, "H1")));
        assert_eq!(t.x, scale_vec(&frac(1, 2), &t.h));
    }

    #[test]
    fn sl3_triples_satisfy_relations() {
        let g = build_sl(3).unwrap();
        for part in [vec![3], vec![2, 1]] {
            let t = sl2_triple_from_partition(&g, &part).unwrap();
            assert_eq!(g.bracket(&t.h, &t.e), scale_vec(&q(2), &t.e));
            assert_eq!(g.bracket(&t.e, &t.f), t.h);
        }
        // minimal nilpotent: (ad f)^2 != 0, (ad f)^3 = 0
        let t = sl2_triple_from_partition(&g, &[2, 1]).unwrap();
        let adf = g.ad(&t.f);
        assert!(!adf.mul(&adf).is_zero());
        assert!(adf.mul(&adf).mul(&adf).is_zero());
    }

    #[test]
    fn bad_partition_rejected() {
        let g = build_sl(3).unwrap();
        assert!(matches!(sl2_triple_from_partition(&g, &[2, 2]), Err(Error::InvalidInput(_))));
    }
}
