use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rat;
use crate::error::{Error, Result};

/// A point of P^1(Q) as a coprime integer pair, normalized so that `y > 0`
/// or the point is `(1 : 0)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    x: BigInt,
    y: BigInt,
}

impl ProjPoint {
    pub fn new(x: BigInt, y: BigInt) -> Result<Self> {
        if x.is_zero() && y.is_zero() {
            return Err(Error::ZeroInput("projective point (0:0)"));
        }
        let g = x.gcd(&y);
        let (mut x, mut y) = (x / &g, y / &g);
        if y.is_negative() || (y.is_zero() && x.is_negative()) {
            x = -x;
            y = -y;
        }
        Ok(ProjPoint { x, y })
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        Self::new(BigInt::from(x), BigInt::from(y)).expect("nonzero point")
    }

    pub fn infinity() -> Self {
        ProjPoint { x: BigInt::one(), y: BigInt::zero() }
    }

    pub fn from_rat(q: &Rat) -> Self {
        ProjPoint { x: q.numer().clone(), y: q.denom().clone() }
    }

    pub fn from_int(n: i64) -> Self {
        ProjPoint { x: BigInt::from(n), y: BigInt::one() }
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    /// Affine value, `None` at infinity.
    pub fn to_rat(&self) -> Option<Rat> {
        if self.is_infinity() {
            None
        } else {
            Some(Rat::new(self.x.clone(), self.y.clone()))
        }
    }

    /// Naive multiplicative height `max(|x|, |y|)`.
    pub fn height(&self) -> BigInt {
        self.x.abs().max(self.y.abs())
    }

    /// Naive logarithmic height.
    pub fn log_height(&self) -> f64 {
        big_log(&self.height())
    }

    /// Reduction to P^1(F_p) as `(x, 1)` or `(1, 0)`.
    pub fn reduce(&self, p: u64) -> (u64, u64) {
        let pb = BigInt::from(p);
        let xr: u64 = self.x.mod_floor(&pb).try_into().unwrap();
        let yr: u64 = self.y.mod_floor(&pb).try_into().unwrap();
        normalize_mod_point(xr, yr, p)
    }
}

/// Natural logarithm of a positive big integer.
pub fn big_log(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        let f: f64 = num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY);
        return f.abs().ln();
    }
    let shift = bits - 64;
    let top: f64 = num_traits::ToPrimitive::to_f64(&(n.abs() >> shift)).unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Normalizes a point of P^1(F_p) to `(a, 1)` or `(1, 0)`.
pub fn normalize_mod_point(x: u64, y: u64, p: u64) -> (u64, u64) {
    let (x, y) = (x % p, y % p);
    assert!(x != 0 || y != 0, "(0:0) is not a point");
    if y == 0 {
        (1, 0)
    } else {
        let inv = crate::arith::modp::inv_mod(y, p);
        (((x as u128 * inv as u128) % p as u128) as u64, 1)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else if self.y.is_one() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{}/{}", self.x, self.y)
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.x, self.y)
    }
}
