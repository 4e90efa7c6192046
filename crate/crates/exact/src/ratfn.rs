//! Rational functions `num / den` kept in lowest terms with a monic denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::field::{Conjugate, Field};
use crate::poly::{gcd, MultiPoly};

#[derive(Clone, PartialEq, Debug)]
pub struct RatFn<C> {
    num: MultiPoly<C>,
    den: MultiPoly<C>,
}

impl<C: Field> RatFn<C> {
    pub fn new(num: MultiPoly<C>, den: MultiPoly<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MultiPoly<C>, den: MultiPoly<C>) -> Self {
        if num.is_zero() {
            return RatFn::zero();
        }
        if let Some(c) = den.constant_value() {
            return RatFn { num: num.scale(&(C::one() / c)), den: MultiPoly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() { (num, den) } else { (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap()) };
        let lc = den.leading_coefficient();
        if lc.is_one() {
            RatFn { num, den }
        } else {
            let inv = C::one() / lc;
            RatFn { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: MultiPoly<C>) -> Self {
        RatFn { num: p, den: MultiPoly::one() }
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(C::from_int(n))
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(MultiPoly::var(i))
    }

    pub fn numer(&self) -> &MultiPoly<C> {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly<C> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<C> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn support_len(&self) -> usize {
        self.num.support_len().max(self.den.support_len())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self * &rhs.recip_unchecked())
    }

    fn recip_unchecked(&self) -> Self {
        Self::reduce(self.den.clone(), self.num.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            Err(AlgebraError::DivisionByZero)
        } else {
            Ok(self.recip_unchecked())
        }
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(RatFn { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn partial(&self, var: usize) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.partial(var));
        }
        let dn = self.num.partial(var);
        let dd = self.den.partial(var);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::reduce(top, self.den.pow(2))
    }

    /// Composition: variable `i` is replaced by `values[i]`.
    pub fn substitute(&self, values: &[RatFn<C>]) -> Result<Self> {
        let embed = |c: &C| RatFn::constant(c.clone());
        let n = self.num.substitute_with(values, embed)?;
        let d = self.den.substitute_with(values, embed)?;
        n.checked_div(&d)
    }

    pub fn eval(&self, point: &[C]) -> Result<C> {
        let need = self.support_len();
        if need > point.len() {
            return Err(AlgebraError::ArityMismatch { expected: need, got: point.len() });
        }
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(AlgebraError::PoleAtPoint);
        }
        Ok(self.num.eval(point)? / d)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> RatFnDisplay<'a, C> {
        RatFnDisplay { f: self, names }
    }
}

impl<C: Field + Conjugate> RatFn<C> {
    pub fn conj(&self) -> Self {
        // conjugating a monic denominator keeps it monic
        RatFn { num: self.num.conj(), den: self.den.conj() }
    }
}

impl<C: Field + Conjugate> Conjugate for RatFn<C> {
    fn conj(&self) -> Self {
        RatFn::conj(self)
    }
}

impl<C: Field> Zero for RatFn<C> {
    fn zero() -> Self {
        RatFn { num: MultiPoly::zero(), den: MultiPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<C: Field> One for RatFn<C> {
    fn one() -> Self {
        RatFn { num: MultiPoly::one(), den: MultiPoly::one() }
    }
}

impl<'a, C: Field> Add<&'a RatFn<C>> for &'a RatFn<C> {
    type Output = RatFn<C>;
    fn add(self, rhs: &'a RatFn<C>) -> RatFn<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RatFn::from_poly(num);
            }
            return RatFn::reduce(num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let a = self.den.div_exact(&g).unwrap();
        let b = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        RatFn::reduce(num, &self.den * &b)
    }
}

impl<'a, C: Field> Sub<&'a RatFn<C>> for &'a RatFn<C> {
    type Output = RatFn<C>;
    fn sub(self, rhs: &'a RatFn<C>) -> RatFn<C> {
        self + &(-rhs.clone())
    }
}

impl<'a, C: Field> Mul<&'a RatFn<C>> for &'a RatFn<C> {
    type Output = RatFn<C>;
    fn mul(self, rhs: &'a RatFn<C>) -> RatFn<C> {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFn::from_poly(&self.num * &rhs.num);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading_coefficient();
        if lc.is_one() {
            RatFn { num, den }
        } else {
            let inv = C::one() / lc;
            RatFn { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

/// Panics on division by zero; use [`RatFn::checked_div`] for a fallible version.
impl<'a, C: Field> Div<&'a RatFn<C>> for &'a RatFn<C> {
    type Output = RatFn<C>;
    fn div(self, rhs: &'a RatFn<C>) -> RatFn<C> {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl<C: Field> $tr for RatFn<C> {
            type Output = RatFn<C>;
            fn $method(self, rhs: RatFn<C>) -> RatFn<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl<C: Field> Neg for RatFn<C> {
    type Output = RatFn<C>;
    fn neg(self) -> RatFn<C> {
        RatFn { num: -self.num, den: self.den }
    }
}

impl<C: Field> Field for RatFn<C> {
    fn from_int(n: i64) -> Self {
        RatFn::from_int(n)
    }

    fn prints_negative(&self) -> bool {
        self.den.is_one() && self.num.num_terms() == 1 && self.num.leading_coefficient().prints_negative()
    }
}

pub struct RatFnDisplay<'a, C> {
    f: &'a RatFn<C>,
    names: &'a [String],
}

impl<C: Field> fmt::Display for RatFnDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.f.num.display_with(self.names);
        if self.f.den.is_one() {
            return write!(f, "{}", num);
        }
        if self.f.num.num_terms() > 1 {
            write!(f, "({})", num)?;
        } else {
            write!(f, "{}", num)?;
        }
        let den = &self.f.den;
        let bare = den.num_terms() == 1
            && den.leading_coefficient().is_one()
            && den.leading_monomial().is_some_and(|m| m.exponents().iter().filter(|&&e| e > 0).count() == 1);
        if bare {
            write!(f, "/{}", den.display_with(self.names))
        } else {
            write!(f, "/({})", den.display_with(self.names))
        }
    }
}

impl<C: Field> fmt::Display for RatFn<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}
