use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::point::ProjPoint;
use crate::arith::{PadicContext, Rat};
use crate::error::{Error, Result};

/// An element of PGL_2(Q) given by an integer matrix `[[a, b], [c, d]]`,
/// acting as `x -> (a x + b) / (c x + d)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mobius {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mobius {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let m = Mobius { a, b, c, d };
        if m.det().is_zero() {
            return Err(Error::SingularMobius);
        }
        Ok(m)
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mobius { a: BigInt::one(), b: BigInt::zero(), c: BigInt::zero(), d: BigInt::one() }
    }

    /// `x -> s x` for rational `s != 0`.
    pub fn scaling(s: &Rat) -> Result<Self> {
        Self::new(s.numer().clone(), BigInt::zero(), BigInt::zero(), s.denom().clone())
    }

    /// `x -> x + t`
    pub fn translation(t: &Rat) -> Self {
        Mobius {
            a: t.denom().clone(),
            b: t.numer().clone(),
            c: BigInt::zero(),
            d: t.denom().clone(),
        }
    }

    /// `x -> s x + t`
    pub fn affine(s: &Rat, t: &Rat) -> Result<Self> {
        Ok(Self::translation(t).compose(&Self::scaling(s)?))
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Inverse via the adjugate (equal to the inverse in PGL_2).
    pub fn inverse(&self) -> Mobius {
        Mobius { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    /// Integral entries with `p ∤ det`: an element of PGL_2 of the p-adic integers.
    pub fn is_integral_unit(&self, ctx: &PadicContext) -> bool {
        !ctx.divides(&self.det())
    }

    pub fn apply(&self, pt: &ProjPoint) -> ProjPoint {
        let x = &self.a * pt.x() + &self.b * pt.y();
        let y = &self.c * pt.x() + &self.d * pt.y();
        ProjPoint::new(x, y).expect("invertible matrix maps points to points")
    }

    pub fn entries(&self) -> [BigInt; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mobius{self}")
    }
}
