//! Sparse multivariate polynomials with rational coefficients over the fixed
//! parameter list `q, r₁₁, r₁₂, r₂₁, r₂₂, s₁₁, s₁₂, s₂₁, s₂₂, m₁₁, m₂₂, t`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::Rational;

/// A parameter of the circular `ℂ²` model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Q,
    R11,
    R12,
    R21,
    R22,
    S11,
    S12,
    S21,
    S22,
    M11,
    M22,
    /// Rescaling factor.
    T,
}

pub const NVARS: usize = 12;

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::Q,
        Var::R11,
        Var::R12,
        Var::R21,
        Var::R22,
        Var::S11,
        Var::S12,
        Var::S21,
        Var::S22,
        Var::M11,
        Var::M22,
        Var::T,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::R11 => "r11",
            Var::R12 => "r12",
            Var::R21 => "r21",
            Var::R22 => "r22",
            Var::S11 => "s11",
            Var::S12 => "s12",
            Var::S21 => "s21",
            Var::S22 => "s22",
            Var::M11 => "m11",
            Var::M22 => "m22",
            Var::T => "t",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }

    fn shift(self) -> u32 {
        8 * (NVARS as u32 - 1 - self as u32)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector packed one byte per variable, `q` in the most significant used byte.
///
/// Comparing the packed integers is the lexicographic monomial order in
/// [`Var::ALL`] order, `q` largest.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u128);

const HIGH_BITS: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(v: Var, exp: u8) -> Self {
        Monomial((exp as u128) << v.shift())
    }

    pub fn from_exponents(exps: &[(Var, u8)]) -> Self {
        exps.iter()
            .fold(Monomial::ONE, |m, &(v, e)| m * Monomial::var(v, e))
    }

    pub fn exponent(self, v: Var) -> u8 {
        (self.0 >> v.shift()) as u8
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn degree(self) -> u32 {
        Var::ALL.iter().map(|&v| self.exponent(v) as u32).sum()
    }

    pub fn divides(self, other: Monomial) -> bool {
        Var::ALL
            .iter()
            .all(|&v| self.exponent(v) <= other.exponent(v))
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(self, other: Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(other.0 - self.0)
    }

    pub fn without(self, v: Var) -> Monomial {
        Monomial(self.0 & !(0xffu128 << v.shift()))
    }

    pub fn exponents(self) -> impl Iterator<Item = (Var, u8)> {
        Var::ALL
            .into_iter()
            .map(move |v| (v, self.exponent(v)))
            .filter(|&(_, e)| e > 0)
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        if (self.0 | rhs.0) & HIGH_BITS == 0 {
            return Monomial(self.0 + rhs.0);
        }
        for v in Var::ALL {
            let e = self.exponent(v) as u32 + rhs.exponent(v) as u32;
            assert!(e < 256, "exponent overflow in variable {v}");
        }
        Monomial(self.0 + rhs.0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.exponents() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in canonical expanded form: no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::ONE, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(Monomial::var(v, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in iter {
            add_term(&mut terms, m, c);
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term in the lexicographic order.
    pub fn leading(&self) -> Option<(Monomial, &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, a)| (*k * m, a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn variables(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|&v| self.contains(v)).collect()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(v) as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coeff_in(&self, v: Var, k: u8) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(v) == k)
                .map(|(m, c)| (m.without(v), c.clone()))
                .collect(),
        }
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::ONE;
        };
        let mut exps: Vec<(Var, u8)> = Var::ALL.iter().map(|&v| (v, first.exponent(v))).collect();
        for m in it {
            for (v, e) in exps.iter_mut() {
                *e = (*e).min(m.exponent(*v));
            }
        }
        Monomial::from_exponents(&exps)
    }

    pub fn div_monomial(&self, m: Monomial) -> Option<Poly> {
        if !self.terms.keys().all(|k| m.divides(*k)) {
            return None;
        }
        Some(Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (m.quotient_of(*k), c.clone()))
                .collect(),
        })
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        if divisor.terms.len() == 1 {
            let inv = lc.recip();
            return self.div_monomial(lm).map(|p| p.scale(&inv));
        }
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading() {
            if !lm.divides(rm) {
                return None;
            }
            let qm = lm.quotient_of(rm);
            let qc = rc * &lc_inv;
            rem = &rem - &divisor.mul_monomial(qm, &qc);
            quot.insert(qm, qc);
        }
        Some(Poly { terms: quot })
    }

    /// Split into `(content, primitive part)`: the primitive part has integer
    /// coefficients with gcd 1 and a positive leading coefficient.
    pub fn primitive(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::zero(), Poly::zero());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Substitute a rational value for `v`.
    pub fn eval_var(&self, v: Var, value: &Rational) -> Poly {
        let mut powers: Vec<Rational> = alloc::vec![Rational::one()];
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            add_term(&mut terms, m.without(v), c * &powers[e]);
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }

    /// Evaluate with the given assignment; `None` if a variable is left unassigned.
    pub fn eval(&self, point: &[(Var, Rational)]) -> Option<Rational> {
        let mut p = self.clone();
        for (v, x) in point {
            if p.contains(*v) {
                p = p.eval_var(*v, x);
            }
        }
        p.as_constant()
    }

    /// Substitute a polynomial for `v`.
    pub fn compose_var(&self, v: Var, value: &Poly) -> Poly {
        let deg = self.degree_in(v);
        let mut acc = Poly::zero();
        let mut power = Poly::one();
        for k in 0..=deg {
            let c = self.coeff_in(v, k as u8);
            if !c.is_zero() {
                acc = &acc + &(&c * &power);
            }
            if k < deg {
                power = &power * value;
            }
        }
        acc
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        alloc::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        alloc::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
        }
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rational::one())
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            add_term(&mut terms, *m, c.clone());
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            add_term(&mut terms, *m, -c.clone());
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                add_term(&mut terms, *ma * *mb, ca * cb);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_by_value {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_by_value!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, rat};
    use alloc::format;
    use proptest::prelude::*;

    fn q() -> Poly {
        Poly::var(Var::Q)
    }
    fn r22() -> Poly {
        Poly::var(Var::R22)
    }

    #[test]
    fn display_is_canonical() {
        let p = &(&q() * &q()) - &r22().scale(&rat(1, 2)) + Poly::constant(int(3));
        assert_eq!(format!("{p}"), "q^2 - 1/2*r22 + 3");
        assert_eq!(format!("{}", Poly::zero()), "0");
    }

    #[test]
    fn exact_division_detects_remainders() {
        let a = &q() - &Poly::one();
        let b = &q() + &r22();
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!((&prod + &Poly::one()).exact_div(&a), None);
    }

    #[test]
    fn primitive_part_normalizes_sign_and_content() {
        let p = &q().scale(&rat(-2, 3)) + &Poly::constant(rat(4, 9));
        let (c, prim) = p.primitive();
        assert_eq!(&prim.scale(&c), &p);
        assert_eq!(format!("{prim}"), "3*q - 2");
    }

    #[test]
    fn evaluation_and_composition() {
        let p = &(&q() * &r22()) + &q();
        assert_eq!(p.eval(&[(Var::Q, rat(1, 2)), (Var::R22, int(3))]), Some(int(2)));
        assert_eq!(p.eval(&[(Var::Q, rat(1, 2))]), None);
        let composed = p.compose_var(Var::Q, &(&r22() + &Poly::one()));
        assert_eq!(composed, &(&r22() + &Poly::one()) * &(&r22() + &Poly::one()));
    }

    prop_compose! {
        fn arb_poly()(terms in proptest::collection::vec((0u8..3, 0u8..3, 0u8..2, -5i64..5), 0..6)) -> Poly {
            Poly::from_terms(terms.into_iter().map(|(a, b, c, k)| {
                (Monomial::from_exponents(&[(Var::Q, a), (Var::R12, b), (Var::M11, c)]), int(k))
            }))
        }
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn product_divides_exactly(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b), Some(a));
        }
    }
}
