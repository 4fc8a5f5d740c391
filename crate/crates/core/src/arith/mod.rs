//! Exact arithmetic kernel: rationals, p-adic valuations, integer polynomials,
//! binary forms and their reductions modulo a prime.

pub mod form;
pub mod modp;
pub mod poly;
pub mod primes;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub use form::BinForm;
pub use modp::{ModForm, ModPoly};
pub use poly::IntPoly;

use crate::error::{Error, Result};

/// Rational numbers in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Value of a valuation: an integer or `+inf` (for zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_unit(self) -> bool {
        self == Valuation::Finite(0)
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// A rational prime together with its residue field `Z/pZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PadicContext {
    p: u64,
}

impl PadicContext {
    pub fn new(p: u64) -> Result<Self> {
        if primes::is_prime(p) {
            Ok(PadicContext { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// `v_p(n)` for an integer.
    pub fn valuation_int(&self, n: &BigInt) -> Valuation {
        if n.is_zero() {
            return Valuation::Infinite;
        }
        let p = self.p_big();
        let mut n = n.abs();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return Valuation::Finite(v);
            }
            n = q;
            v += 1;
        }
    }

    pub fn valuation(&self, q: &Rat) -> Valuation {
        padic_valuation(q, self)
    }

    pub fn divides(&self, n: &BigInt) -> bool {
        (n % self.p_big()).is_zero()
    }

    /// Gauss valuation of an integer polynomial: the minimum coefficient valuation.
    pub fn gauss_valuation(&self, f: &IntPoly) -> Valuation {
        f.coeffs().iter().map(|c| self.valuation_int(c)).min().unwrap_or(Valuation::Infinite)
    }
}

impl fmt::Display for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}", self.p)
    }
}

/// `v_p(q)`, with `+inf` exactly for `q = 0`.
pub fn padic_valuation(q: &Rat, ctx: &PadicContext) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    let num = ctx.valuation_int(q.numer()).finite().expect("nonzero numerator");
    let den = ctx.valuation_int(q.denom()).finite().expect("nonzero denominator");
    Valuation::Finite(num - den)
}

/// Reduction of a binary form modulo `p`, keeping its formal degree.
pub fn reduce_mod_p(f: &BinForm, ctx: &PadicContext) -> ModForm {
    ModForm::reduce(f, ctx.p())
}

/// Reduction of an integer polynomial modulo `p`.
pub fn reduce_poly_mod_p(f: &IntPoly, ctx: &PadicContext) -> ModPoly {
    ModPoly::reduce(f, ctx.p())
}
