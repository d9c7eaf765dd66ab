//! Sparse differential polynomials.
//!
//! A variable is a pair (base index, derivative order). Monomials are sorted
//! lists of (variable, exponent); polynomials map monomials to nonzero
//! rationals. The same type serves for commutative polynomials (all
//! derivative orders zero), e.g. elements of S(g^f).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub index: usize,
    pub deriv: u32,
}

impl Var {
    pub fn new(index: usize, deriv: u32) -> Self {
        Var { index, deriv }
    }
}

/// A monomial: sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from factors in any order.
    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *map.entry(v).or_default() += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (&self.0[i], &other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(*a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(*b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    /// Removes one factor `v` (which must be present).
    fn without_one(&self, v: Var) -> Monomial {
        let mut out = self.0.clone();
        let pos = out.iter().position(|(w, _)| *w == v).expect("factor present");
        if out[pos].1 == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Monomial(out)
    }
}

/// Weight classification of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightClass {
    Zero,
    /// All monomials have this doubled weight.
    Homogeneous(i64),
    Inhomogeneous,
}

/// A sparse differential polynomial with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Q>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn var(index: usize) -> Self {
        Self::var_d(index, 0)
    }

    pub fn var_d(index: usize, deriv: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::from_var(Var::new(index, deriv)), Q::one());
        p
    }

    /// `Σ c_i v_i` for sparse `(index, coefficient)` pairs.
    pub fn linear(coeffs: &[(usize, Q)]) -> Self {
        let mut p = Self::zero();
        for (i, c) in coeffs {
            p.add_term(Monomial::from_var(Var::new(*i, 0)), c.clone());
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        DiffPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &DiffPoly, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &DiffPoly) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &DiffPoly) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), -v.clone());
        }
    }

    pub fn mul_poly(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        (0..e).fold(DiffPoly::one(), |acc, _| acc.mul_poly(self))
    }

    /// The total derivative ∂ (Leibniz, `v^{(m)} ↦ v^{(m+1)}`).
    pub fn derivative(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (v, e) in m.factors() {
                let rest = m.without_one(*v);
                let shifted = rest.mul(&Monomial::from_var(Var::new(v.index, v.deriv + 1)));
                out.add_term(shifted, c * q(*e as i64));
            }
        }
        out
    }

    pub fn derivative_n(&self, n: u32) -> DiffPoly {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Partial derivative with respect to a single variable.
    pub fn partial(&self, v: Var) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(m.without_one(v), c * q(e as i64));
            }
        }
        out
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.factors().iter().map(|(v, _)| *v)).collect()
    }

    pub fn max_deriv(&self) -> u32 {
        self.variables().iter().map(|v| v.deriv).max().unwrap_or(0)
    }

    /// Keeps only the monomials satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> DiffPoly {
        DiffPoly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Renames base indices; `map` must be injective on the indices present.
    pub fn rename(&self, map: impl Fn(usize) -> usize) -> DiffPoly {
        DiffPoly::from_terms(self.terms.iter().map(|(m, c)| {
            (Monomial::from_factors(m.factors().iter().map(|(v, e)| (Var::new(map(v.index), v.deriv), *e))), c.clone())
        }))
    }

    /// Differential substitution: base variable `i` goes to `image(i)` (or stays
    /// when `None`), and `v_i^{(m)}` goes to `∂^m image(i)`.
    pub fn substitute(&self, image: impl Fn(usize) -> Option<DiffPoly>) -> DiffPoly {
        let mut cache: HashMap<Var, Option<DiffPoly>> = HashMap::new();
        let mut base: HashMap<usize, Option<DiffPoly>> = HashMap::new();
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(c.clone());
            let mut kept = Vec::new();
            for (v, e) in m.factors() {
                let img = cache
                    .entry(*v)
                    .or_insert_with(|| {
                        base.entry(v.index).or_insert_with(|| image(v.index)).as_ref().map(|p| p.derivative_n(v.deriv))
                    })
                    .clone();
                match img {
                    Some(p) => acc = acc.mul_poly(&p.pow(*e)),
                    None => kept.push((*v, *e)),
                }
                if acc.is_zero() {
                    break;
                }
            }
            if !kept.is_empty() {
                let mono = DiffPoly::from_terms([(Monomial::from_factors(kept), Q::one())]);
                acc = acc.mul_poly(&mono);
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Conformal weight classification given doubled weights of base variables.
    /// Each derivative adds 2 (one unit of weight).
    pub fn weight_class(&self, weight2: impl Fn(usize) -> i64) -> WeightClass {
        let mut found: Option<i64> = None;
        for m in self.terms.keys() {
            let w: i64 = m.factors().iter().map(|(v, e)| (weight2(v.index) + 2 * v.deriv as i64) * *e as i64).sum();
            match found {
                None => found = Some(w),
                Some(f) if f != w => return WeightClass::Inhomogeneous,
                _ => {}
            }
        }
        found.map_or(WeightClass::Zero, WeightClass::Homogeneous)
    }

    /// Canonical text, e.g. `3/2*x'*x + f''`.
    pub fn render(&self, name: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .factors()
                .iter()
                .map(|(v, e)| {
                    let mut s = name(v.index);
                    if v.deriv <= 3 {
                        s.push_str(&"'".repeat(v.deriv as usize));
                    } else {
                        let _ = write!(s, "^({})", v.deriv);
                    }
                    if *e > 1 {
                        let _ = write!(s, "^{e}");
                    }
                    s
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    let _ = write!(out, "{a}*");
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

/// The total derivative ∂.
pub fn total_derivative(p: &DiffPoly) -> DiffPoly {
    p.derivative()
}

/// Common doubled conformal weight of `p`, given the doubled weights of its base variables.
pub fn conformal_weight(p: &DiffPoly, weight2: impl Fn(usize) -> i64) -> WeightClass {
    p.weight_class(weight2)
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        self.mul_poly(rhs)
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&-Q::one())
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: DiffPoly) -> DiffPoly {
        &self + &rhs
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: DiffPoly) -> DiffPoly {
        &self - &rhs
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: DiffPoly) -> DiffPoly {
        self.mul_poly(&rhs)
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}
