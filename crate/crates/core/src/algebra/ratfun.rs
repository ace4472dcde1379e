//! Rational functions in the parameter variables.
//!
//! A value is `num / Π atomᵢ^eᵢ` where every atom is a primitive, non-constant
//! polynomial with positive leading coefficient. There is no multivariate gcd:
//! cancellation is done by trial division of the numerator by the atoms, which
//! is enough because every denominator arising here is built from a small set
//! of atoms introduced by explicit inversions.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{Poly, Var};
use super::scalar::{Rational, Scalar};

#[derive(Clone, Default)]
pub struct RatFun {
    num: Poly,
    den: Vec<(Poly, u32)>,
}

impl RatFun {
    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn var(v: Var) -> Self {
        RatFun::from_poly(Poly::var(v))
    }

    pub fn constant(c: Rational) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    /// `num / den`, or `None` if `den` is the zero polynomial.
    pub fn quotient(num: Poly, den: &Poly) -> Option<Self> {
        RatFun::from_poly(num).try_div(&RatFun::from_poly(den.clone()))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Denominator atoms with multiplicities.
    pub fn denominator_atoms(&self) -> &[(Poly, u32)] {
        &self.den
    }

    pub fn denominator(&self) -> Poly {
        self.den
            .iter()
            .fold(Poly::one(), |acc, (a, e)| &acc * &a.pow(*e))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|&v| self.num.contains(v) || self.den.iter().any(|(a, _)| a.contains(v)))
            .collect()
    }

    /// Split a nonzero polynomial into a rational constant and atoms.
    fn atomize(p: &Poly) -> (Rational, Vec<(Poly, u32)>) {
        let mono = p.monomial_content();
        let rest = p.div_monomial(mono).expect("monomial content divides");
        let (c, prim) = rest.primitive();
        let mut atoms: Vec<(Poly, u32)> = mono
            .exponents()
            .map(|(v, e)| (Poly::var(v), e as u32))
            .collect();
        if prim.as_constant().is_none() {
            atoms.push((prim, 1));
        }
        (c, atoms)
    }

    fn push_atom(den: &mut Vec<(Poly, u32)>, atom: Poly, e: u32) {
        if e == 0 {
            return;
        }
        if let Some(slot) = den.iter_mut().find(|(a, _)| *a == atom) {
            slot.1 += e;
        } else {
            den.push((atom, e));
        }
    }

    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        for (atom, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.exact_div(atom) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
        self.den.sort();
        self
    }

    fn mul_ref(&self, rhs: &RatFun) -> RatFun {
        if self.num.is_zero() || rhs.num.is_zero() {
            return RatFun::zero();
        }
        let mut den = self.den.clone();
        for (a, e) in &rhs.den {
            RatFun::push_atom(&mut den, a.clone(), *e);
        }
        RatFun {
            num: &self.num * &rhs.num,
            den,
        }
        .normalize()
    }

    fn add_ref(&self, rhs: &RatFun, negate_rhs: bool) -> RatFun {
        let mut den = self.den.clone();
        for (a, e) in &rhs.den {
            match den.iter_mut().find(|(b, _)| b == a) {
                Some(slot) => slot.1 = slot.1.max(*e),
                None => den.push((a.clone(), *e)),
            }
        }
        let lift = |x: &RatFun| -> Poly {
            den.iter().fold(x.num.clone(), |acc, (a, e)| {
                let have = x.den.iter().find(|(b, _)| b == a).map_or(0, |(_, k)| *k);
                if *e > have {
                    &acc * &a.pow(*e - have)
                } else {
                    acc
                }
            })
        };
        let left = lift(self);
        let right = lift(rhs);
        let num = if negate_rhs {
            &left - &right
        } else {
            &left + &right
        };
        RatFun { num, den }.normalize()
    }

    pub fn pow(&self, e: i32) -> Option<RatFun> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFun::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul_ref(&base);
        }
        Some(acc)
    }

    /// Substitute `value` for `v`. `None` when a denominator atom vanishes.
    pub fn subst(&self, v: Var, value: &RatFun) -> Option<RatFun> {
        let mut out = subst_poly(&self.num, v, value);
        for (a, e) in &self.den {
            if !a.contains(v) {
                out = out.mul_ref(&RatFun {
                    num: Poly::one(),
                    den: alloc::vec![(a.clone(), *e)],
                });
                continue;
            }
            let sa = subst_poly(a, v, value);
            out = out.mul_ref(&sa.pow(-(*e as i32))?);
        }
        Some(out)
    }

    pub fn eval_var(&self, v: Var, value: &Rational) -> Option<RatFun> {
        self.subst(v, &RatFun::constant(value.clone()))
    }

    /// Full evaluation; `None` if a variable is unassigned or a denominator vanishes.
    pub fn eval(&self, point: &[(Var, Rational)]) -> Option<Rational> {
        let n = self.num.eval(point)?;
        let mut d = Rational::one();
        for (a, e) in &self.den {
            let x = a.eval(point)?;
            for _ in 0..*e {
                d *= &x;
            }
        }
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }
}

fn subst_poly(p: &Poly, v: Var, value: &RatFun) -> RatFun {
    let deg = p.degree_in(v);
    let mut acc = RatFun::zero();
    for k in (0..=deg).rev() {
        acc = acc.mul_ref(value);
        let c = p.coeff_in(v, k as u8);
        if !c.is_zero() {
            acc = acc.add_ref(&RatFun::from_poly(c), false);
        }
    }
    acc
}

impl Zero for RatFun {
    fn zero() -> Self {
        RatFun::from_poly(Poly::zero())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFun {
    fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        (self.num == other.num && self.den == other.den) || self.add_ref(other, true).is_zero()
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}

impl From<Var> for RatFun {
    fn from(v: Var) -> Self {
        RatFun::var(v)
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, rhs: RatFun) -> RatFun {
        self.add_ref(&rhs, false)
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, rhs: RatFun) -> RatFun {
        self.add_ref(&rhs, true)
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, rhs: RatFun) -> RatFun {
        self.mul_ref(&rhs)
    }
}

impl<'a> Add<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        self.add_ref(rhs, false)
    }
}

impl<'a> Sub<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self.add_ref(rhs, true)
    }
}

impl<'a> Mul<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        self.mul_ref(rhs)
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Scalar for RatFun {
    fn from_rational(r: &Rational) -> Self {
        RatFun::constant(r.clone())
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let (c, atoms) = RatFun::atomize(&self.num);
        let mut num = Poly::constant(c.recip());
        for (a, e) in &self.den {
            num = &num * &a.pow(*e);
        }
        let mut den = Vec::new();
        for (a, e) in atoms {
            RatFun::push_atom(&mut den, a, e);
        }
        Some(RatFun { num, den }.normalize())
    }

    fn sign(&self) -> Option<Ordering> {
        self.as_rational().and_then(|r| r.sign())
    }

    fn as_rational(&self) -> Option<Rational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})/", self.num)?;
        } else {
            write!(f, "{}/", self.num)?;
        }
        let single = self.den.len() == 1 && self.den[0].1 == 1 && self.den[0].0.len() == 1;
        if !single {
            f.write_str("(")?;
        }
        for (i, (a, e)) in self.den.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            let paren = a.len() > 1;
            match (paren, *e) {
                (true, 1) => write!(f, "({a})")?,
                (true, e) => write!(f, "({a})^{e}")?,
                (false, 1) => write!(f, "{a}")?,
                (false, e) => write!(f, "{a}^{e}")?,
            }
        }
        if !single {
            f.write_str(")")?;
        }
        Ok(())
    }
}
