use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::laurent::LaurentPoly;
use super::poly;
use crate::error::{Error, Result};

/// An element of `Q(v)`, kept in canonical reduced form.
///
/// Canonical means: `num` and `den` have integer coefficients and no common
/// factor in `Z[v]` (integer content included), every power of `v` lives in
/// `num`, `den` has a nonzero constant term and a positive leading
/// coefficient. Structural equality is therefore semantic equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFn {
    /// Reduces `num / den` to canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn zero() -> Self {
        Self {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from(LaurentPoly::one())
    }

    pub fn v_pow(e: i64) -> Self {
        Self::from(LaurentPoly::v_pow(e))
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1, i.e. the value lies in `Z[v, v^-1]`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.is_laurent().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Multiplication by the unit `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            num: self.num.shift(k),
            den: self.den.clone(),
        }
    }

    pub fn mul_laurent(&self, p: &LaurentPoly) -> Self {
        if p.is_zero() || self.is_zero() {
            return Self::zero();
        }
        if p.is_monomial() && p.leading_coeff().is_some_and(|c| c.abs().is_one()) {
            let mut out = self.shift(p.low_exp());
            if p.leading_coeff().unwrap().is_negative() {
                out.num = -out.num;
            }
            return out;
        }
        if self.den.is_one() {
            return Self::from(&self.num * p);
        }
        Self::normalized(&self.num * p, self.den.clone())
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let shift = num.low_exp() - den.low_exp();
        let (n, d) = (num.stripped(), den.stripped());
        let (mut n, mut d) = if poly::is_one(d) {
            (n.to_vec(), d.to_vec())
        } else {
            let g = poly::gcd(n, d);
            if poly::is_one(&g) {
                (n.to_vec(), d.to_vec())
            } else {
                (
                    poly::div_exact(n, &g).expect("gcd divides numerator"),
                    poly::div_exact(d, &g).expect("gcd divides denominator"),
                )
            }
        };
        if d.last().is_some_and(Signed::is_negative) {
            n.iter_mut().for_each(|c| *c = -std::mem::take(c));
            d.iter_mut().for_each(|c| *c = -std::mem::take(c));
        }
        Self {
            num: LaurentPoly::from_coeffs(shift, n),
            den: LaurentPoly::from_coeffs(0, d),
        }
    }
}

impl Default for RationalFn {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<LaurentPoly> for RationalFn {
    fn from(num: LaurentPoly) -> Self {
        Self {
            num,
            den: LaurentPoly::one(),
        }
    }
}

impl From<i64> for RationalFn {
    fn from(c: i64) -> Self {
        Self::from(LaurentPoly::constant(c))
    }
}

impl From<BigInt> for RationalFn {
    fn from(c: BigInt) -> Self {
        Self::from(LaurentPoly::constant(c))
    }
}

impl Add<&RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RationalFn::from(&self.num + &rhs.num);
            }
            return RationalFn::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let g = LaurentPoly::from_coeffs(0, poly::gcd(self.den.stripped(), rhs.den.stripped()));
        let a = rhs.den.div_exact(&g).expect("gcd divides");
        let b = self.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &a) + &(&rhs.num * &b);
        RationalFn::normalized(num, &self.den * &a)
    }
}

impl Sub<&RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Mul<&RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() || rhs.is_zero() {
            return RationalFn::zero();
        }
        if self.den.is_one() {
            return rhs.mul_laurent(&self.num);
        }
        if rhs.den.is_one() {
            return self.mul_laurent(&rhs.num);
        }
        RationalFn::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div<&RationalFn> for &RationalFn {
    type Output = RationalFn;
    /// Panics on division by zero; use [`RationalFn::checked_div`] otherwise.
    fn div(self, rhs: &RationalFn) -> RationalFn {
        self.checked_div(rhs)
            .expect("division by zero rational function")
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -self.num,
            den: self.den,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFn> for RationalFn {
            type Output = RationalFn;
            fn $m(self, rhs: RationalFn) -> RationalFn {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFn> for RationalFn {
            type Output = RationalFn;
            fn $m(self, rhs: &RationalFn) -> RationalFn {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl std::ops::AddAssign<&RationalFn> for RationalFn {
    fn add_assign(&mut self, rhs: &RationalFn) {
        *self = &*self + rhs;
    }
}

impl std::ops::SubAssign<&RationalFn> for RationalFn {
    fn sub_assign(&mut self, rhs: &RationalFn) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({self})")
    }
}
