//! Exact rational scalars and a few combinatorial helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The scalar field.
pub type Q = BigRational;

/// Dense coordinate vector.
pub type Vector = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

pub fn factorial(n: u32) -> Q {
    (1..=n as i64).fold(one(), |acc, k| acc * q(k))
}

pub fn binomial(n: i64, k: i64) -> Q {
    if k < 0 || k > n || n < 0 {
        return zero();
    }
    let mut acc = one();
    for i in 0..k {
        acc = acc * q(n - i) / q(i + 1);
    }
    acc
}

/// Parse `"p/q"`, `"p"`, or a JSON integer into a rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    t.parse::<Q>()
        .map_err(|_| Error::InvalidInput(format!("`{t}` is not a rational number")))
}

/// Canonical string form: `p` or `p/q`.
pub fn fmt_q(v: &Q) -> String {
    v.to_string()
}

pub fn zeros(n: usize) -> Vector {
    vec![zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = one();
    v
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_vec(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Q, a: &[Q]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

/// `acc += c * a`
pub fn axpy(acc: &mut [Q], c: &Q, a: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in acc.iter_mut().zip(a) {
        if !y.is_zero() {
            *x += c * y;
        }
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(zero(), |acc, (x, y)| acc + x * y)
}

pub fn abs_q(v: &Q) -> Q {
    v.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(4, 2), q(6));
        assert_eq!(binomial(3, 5), zero());
        assert_eq!(factorial(5), q(120));
        assert_eq!(factorial(0), one());
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["3/2", "-7", "0", "-1/3"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(parse_q("4/8").unwrap(), frac(1, 2));
        assert!(parse_q("x").is_err());
        assert!(parse_q("1/0").is_err());
    }
}
