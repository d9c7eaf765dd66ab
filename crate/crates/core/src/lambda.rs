//! Polynomials in λ and in the formal parameter z with differential
//! polynomial coefficients.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::poly::DiffPoly;
use crate::rational::{binomial, Q};

/// Largest z-power a λ-bracket value may carry.
pub const MAX_Z_DEGREE: u32 = 1;

/// `Σ λ^l z^k C_{l,k}` with `k ≤ MAX_Z_DEGREE`.
///
/// The cap is enforced on every insertion: a nonzero coefficient of a higher
/// z-power is an internal error, since λ-brackets of the twisted family are
/// linear in z.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaPoly {
    terms: BTreeMap<(u32, u32), DiffPoly>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_poly(p: DiffPoly) -> Self {
        let mut out = Self::zero();
        out.add_coeff(0, 0, &p);
        out
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(DiffPoly::constant(c))
    }

    /// `c λ^l z^k`
    pub fn monomial(l: u32, k: u32, c: Q) -> Self {
        let mut out = Self::zero();
        out.add_coeff(l, k, &DiffPoly::constant(c));
        out
    }

    /// Adds `p λ^l z^k`.
    pub fn add_coeff(&mut self, l: u32, k: u32, p: &DiffPoly) {
        if p.is_zero() {
            return;
        }
        assert!(k <= MAX_Z_DEGREE, "z-degree cap exceeded: z^{k} term with nonzero coefficient");
        let e = self.terms.entry((l, k)).or_default();
        e.add_assign(p);
        if e.is_zero() {
            self.terms.remove(&(l, k));
        }
    }

    pub fn add_scaled_coeff(&mut self, l: u32, k: u32, p: &DiffPoly, c: &Q) {
        if c.is_zero() {
            return;
        }
        self.add_coeff(l, k, &p.scale(c));
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &DiffPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, l: u32, k: u32) -> DiffPoly {
        self.terms.get(&(l, k)).cloned().unwrap_or_default()
    }

    pub fn lambda_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(l, _)| *l).max()
    }

    pub fn z_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(_, k)| *k).max()
    }

    pub fn add_assign(&mut self, other: &LambdaPoly) {
        for ((l, k), p) in &other.terms {
            self.add_coeff(*l, *k, p);
        }
    }

    pub fn sub_assign(&mut self, other: &LambdaPoly) {
        for ((l, k), p) in &other.terms {
            self.add_coeff(*l, *k, &-p);
        }
    }

    pub fn add(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn scale(&self, c: &Q) -> LambdaPoly {
        let mut out = Self::zero();
        for ((l, k), p) in &self.terms {
            out.add_coeff(*l, *k, &p.scale(c));
        }
        out
    }

    pub fn neg(&self) -> LambdaPoly {
        self.scale(&-Q::from_integer(1.into()))
    }

    pub fn mul_poly(&self, p: &DiffPoly) -> LambdaPoly {
        let mut out = Self::zero();
        for ((l, k), c) in &self.terms {
            out.add_coeff(*l, *k, &c.mul_poly(p));
        }
        out
    }

    pub fn mul(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut out = Self::zero();
        for ((l1, k1), c1) in &self.terms {
            for ((l2, k2), c2) in &other.terms {
                out.add_coeff(l1 + l2, k1 + k2, &c1.mul_poly(c2));
            }
        }
        out
    }

    /// Multiplies by `λ^e`.
    pub fn shift_lambda(&self, e: u32) -> LambdaPoly {
        LambdaPoly { terms: self.terms.iter().map(|((l, k), p)| ((l + e, *k), p.clone())).collect() }
    }

    /// Multiplies by `z`.
    pub fn mul_z(&self) -> LambdaPoly {
        let mut out = Self::zero();
        for ((l, k), p) in &self.terms {
            out.add_coeff(*l, k + 1, p);
        }
        out
    }

    /// ∂ applied to every coefficient (λ and z are constants).
    pub fn derivative(&self) -> LambdaPoly {
        let mut out = Self::zero();
        for ((l, k), p) in &self.terms {
            out.add_coeff(*l, *k, &p.derivative());
        }
        out
    }

    /// `(λ+∂)^n` applied to `self`.
    pub fn lambda_plus_d_pow(&self, n: u32) -> LambdaPoly {
        let mut out = Self::zero();
        let mut d = self.clone();
        for i in 0..=n {
            if i > 0 {
                d = d.derivative();
            }
            if d.is_zero() {
                break;
            }
            let c = binomial(n as i64, i as i64);
            out.add_assign(&d.shift_lambda(n - i).scale(&c));
        }
        out
    }

    /// `(-λ-∂)^n` applied to `self`.
    pub fn neg_lambda_minus_d_pow(&self, n: u32) -> LambdaPoly {
        let r = self.lambda_plus_d_pow(n);
        if n % 2 == 1 {
            r.neg()
        } else {
            r
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> LambdaPoly {
        let mut out = Self::zero();
        for ((l, k), p) in &self.terms {
            out.add_coeff(*l, *k, &f(p));
        }
        out
    }

    /// Sets z to a rational value.
    pub fn eval_z(&self, z: &Q) -> LambdaPoly {
        let mut out = Self::zero();
        for ((l, k), p) in &self.terms {
            let c = (0..*k).fold(Q::from_integer(1.into()), |acc, _| acc * z);
            out.add_coeff(*l, 0, &p.scale(&c));
        }
        out
    }

    /// The z-free part.
    pub fn z0(&self) -> LambdaPoly {
        LambdaPoly { terms: self.terms.iter().filter(|((_, k), _)| *k == 0).map(|(a, b)| (*a, b.clone())).collect() }
    }

    /// `Σ_l λ^l C_l ↦ Σ_l (-λ-∂)^l C_l`, the substitution used in skewsymmetry.
    pub fn substitute_neg_lambda_minus_d(&self) -> LambdaPoly {
        let mut out = Self::zero();
        for ((l, k), p) in &self.terms {
            let mut single = Self::zero();
            single.add_coeff(0, *k, p);
            out.add_assign(&single.neg_lambda_minus_d_pow(*l));
        }
        out
    }

    /// Canonical text, highest λ-power first.
    pub fn render(&self, name: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for ((l, k), p) in self.terms.iter().rev() {
            let mut tag = String::new();
            if *k > 0 {
                tag.push('z');
                if *k > 1 {
                    tag.push_str(&format!("^{k}"));
                }
            }
            if *l > 0 {
                if !tag.is_empty() {
                    tag.push('*');
                }
                tag.push('λ');
                if *l > 1 {
                    tag.push_str(&format!("^{l}"));
                }
            }
            let body = p.render(&name);
            if tag.is_empty() {
                parts.push(body);
            } else {
                parts.push(format!("({body})*{tag}"));
            }
        }
        join_terms(parts)
    }
}

/// Joins rendered summands, writing `a - b` rather than `a + -b`.
fn join_terms(parts: Vec<String>) -> String {
    let mut out = String::new();
    for (i, p) in parts.into_iter().enumerate() {
        match (i, p.strip_prefix('-')) {
            (0, _) => out.push_str(&p),
            (_, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            (_, None) => {
                out.push_str(" + ");
                out.push_str(&p);
            }
        }
    }
    out
}

/// A polynomial in the formal parameter z with polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZPoly {
    terms: BTreeMap<u32, DiffPoly>,
}

impl ZPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_poly(p: DiffPoly) -> Self {
        let mut out = Self::zero();
        out.add_coeff(0, &p);
        out
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(DiffPoly::constant(c))
    }

    /// `c z^k`
    pub fn z_power(k: u32, c: Q) -> Self {
        let mut out = Self::zero();
        out.add_coeff(k, &DiffPoly::constant(c));
        out
    }

    pub fn add_coeff(&mut self, k: u32, p: &DiffPoly) {
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_default();
        e.add_assign(p);
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &DiffPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: u32) -> DiffPoly {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn z_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_assign(&mut self, other: &ZPoly) {
        for (k, p) in &other.terms {
            self.add_coeff(*k, p);
        }
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_coeff(*k, &-p);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> ZPoly {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            out.add_coeff(*k, &p.scale(c));
        }
        out
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        let mut out = Self::zero();
        for (k1, p1) in &self.terms {
            for (k2, p2) in &other.terms {
                out.add_coeff(k1 + k2, &p1.mul_poly(p2));
            }
        }
        out
    }

    pub fn mul_poly(&self, p: &DiffPoly) -> ZPoly {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_coeff(*k, &c.mul_poly(p));
        }
        out
    }

    pub fn eval(&self, z: &Q) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (k, p) in &self.terms {
            let c = (0..*k).fold(Q::from_integer(1.into()), |acc, _| acc * z);
            out.add_scaled(p, &c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> ZPoly {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            out.add_coeff(*k, &f(p));
        }
        out
    }

    /// Substitutes each base variable by a polynomial in z (derivative-free input).
    pub fn substitute(&self, image: impl Fn(usize) -> ZPoly) -> ZPoly {
        let mut out = ZPoly::zero();
        for (k, p) in &self.terms {
            for (m, c) in p.terms() {
                let mut acc = ZPoly::z_power(*k, c.clone());
                for (v, e) in m.factors() {
                    assert_eq!(v.deriv, 0, "substitution in z expects derivative-free input");
                    let img = image(v.index);
                    for _ in 0..*e {
                        acc = acc.mul(&img);
                    }
                }
                out.add_assign(&acc);
            }
        }
        out
    }

    /// Coefficient strings, index = power of z.
    pub fn render_coeffs(&self, name: impl Fn(usize) -> String) -> Vec<String> {
        let top = self.z_degree().map_or(0, |d| d + 1);
        (0..top).map(|k| self.coeff(k).render(&name)).collect()
    }

    pub fn render(&self, name: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts = self
            .terms
            .iter()
            .map(|(k, p)| match k {
                0 => p.render(&name),
                1 => format!("({})*z", p.render(&name)),
                _ => format!("({})*z^{k}", p.render(&name)),
            })
            .collect::<Vec<_>>();
        join_terms(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn negative_constant_terms_render_with_minus() {
        let mut p = LambdaPoly::monomial(1, 0, q(1));
        p.add_coeff(0, 0, &DiffPoly::var(2).scale(&q(-1)));
        assert_eq!(p.render(|k| format!("w{}", k + 1)), "(1)*λ - w3");
    }

    #[test]
    fn lambda_plus_d_expands_binomially() {
        let x = LambdaPoly::from_poly(DiffPoly::var(0));
        let r = x.lambda_plus_d_pow(2);
        assert_eq!(r.coeff(2, 0), DiffPoly::var(0));
        assert_eq!(r.coeff(1, 0), DiffPoly::var_d(0, 1).scale(&q(2)));
        assert_eq!(r.coeff(0, 0), DiffPoly::var_d(0, 2));
    }

    #[test]
    #[should_panic(expected = "z-degree cap exceeded")]
    fn z_cap_is_enforced() {
        let a = LambdaPoly::monomial(0, 1, q(1));
        let _ = a.mul(&a);
    }

    #[test]
    fn eval_z_collapses_slots() {
        let mut a = LambdaPoly::monomial(1, 1, q(3));
        a.add_coeff(1, 0, &DiffPoly::constant(q(1)));
        assert_eq!(a.eval_z(&q(2)), LambdaPoly::monomial(1, 0, q(7)));
    }

    #[test]
    fn zpoly_substitution() {
        let p = ZPoly::from_poly(DiffPoly::var(0).pow(2));
        let img = |_| ZPoly::from_poly(DiffPoly::var(0)).add(&ZPoly::z_power(2, q(1)));
        let r = p.substitute(img);
        assert_eq!(r.coeff(4), DiffPoly::one());
        assert_eq!(r.coeff(2), DiffPoly::var(0).scale(&q(2)));
    }
}
