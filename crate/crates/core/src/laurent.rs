//! Integer Laurent polynomials in one variable.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// A Laurent polynomial with `i64` coefficients, kept in normal form
/// (no zero coefficients stored).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::term(1, 0)
    }

    /// The monomial `coeff * x^exp`.
    pub fn term(coeff: i64, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exp, coeff);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (exp, coeff) in pairs {
            p.add_term(exp, coeff);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(exp).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0) == 1
    }

    /// Exponent/coefficient pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Substitutes `x -> x^-1`.
    pub fn invert_variable(&self) -> Self {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = LaurentPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Renders with the given variable name: terms in decreasing exponent
    /// order, unit coefficients suppressed, `x^-1` style negative exponents,
    /// `0` for the zero polynomial.
    pub fn render(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (&exp, &coeff)) in self.terms.iter().rev().enumerate() {
            if coeff < 0 {
                out.push('-');
            } else if i > 0 {
                out.push('+');
            }
            let mag = coeff.unsigned_abs();
            if mag != 1 || exp == 0 {
                out.push_str(itoa(mag).as_str());
            }
            if exp != 0 {
                out.push_str(var);
                if exp != 1 {
                    out.push('^');
                    if exp < 0 {
                        out.push('-');
                    }
                    out.push_str(itoa(exp.unsigned_abs()).as_str());
                }
            }
        }
        out
    }
}

fn itoa(mut v: u64) -> String {
    if v == 0 {
        return String::from("0");
    }
    let mut buf = Vec::new();
    while v > 0 {
        buf.push(b'0' + (v % 10) as u8);
        v /= 10;
    }
    buf.reverse();
    String::from_utf8(buf).unwrap()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e, -c)))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_in_decreasing_exponent_order() {
        let p = LaurentPoly::from_terms([(2, 1), (1, -2), (-1, 2), (-2, -1)]);
        assert_eq!(p.render("t"), "t^2-2t+2t^-1-t^-2");
    }

    #[test]
    fn renders_edge_cases() {
        assert_eq!(LaurentPoly::zero().render("t"), "0");
        assert_eq!(LaurentPoly::one().render("t"), "1");
        assert_eq!(LaurentPoly::term(-1, 0).render("t"), "-1");
        assert_eq!(LaurentPoly::term(1, 1).render("t"), "t");
        assert_eq!(LaurentPoly::term(-1, -1).render("A"), "-A^-1");
        assert_eq!(LaurentPoly::from_terms([(0, 2), (1, 1)]).render("t"), "t+2");
    }

    #[test]
    fn arithmetic_normalizes() {
        let p = LaurentPoly::from_terms([(1, 1), (0, 1)]);
        let q = LaurentPoly::from_terms([(1, -1), (0, 1)]);
        assert_eq!((&p + &q).render("t"), "2");
        let prod = &p * &q;
        assert_eq!(prod.render("t"), "-t^2+1");
        assert!((&prod - &prod).is_zero());
    }

    #[test]
    fn pow_and_inversion() {
        let loop_factor = LaurentPoly::from_terms([(2, -1), (-2, -1)]);
        assert_eq!(loop_factor.pow(2).render("A"), "A^4+2+A^-4");
        assert_eq!(loop_factor.invert_variable(), loop_factor);
    }
}
