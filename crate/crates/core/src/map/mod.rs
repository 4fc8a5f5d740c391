//! Rational self-maps of P^1 over Q stored as coprime pairs of binary forms.

pub mod mobius;
pub mod parse;
pub mod point;
pub mod reduce;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub use mobius::Mobius;
pub use point::ProjPoint;
pub use reduce::ReducedMap;

use crate::arith::{BinForm, IntPoly, PadicContext, Valuation};
use crate::error::{Error, Result};

/// Default cap on the degree produced by composition and iteration.
pub const DEFAULT_DEGREE_CAP: usize = 512;

/// A degree `n >= 1` endomorphism `(F : G)` of P^1.
///
/// `F` and `G` are binary forms of degree `n` with no common projective root and
/// joint content 1, so the same pair is the normalized model at every prime.
/// The sign is fixed by making the highest nonzero coefficient of `G` positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMap {
    num: BinForm,
    den: BinForm,
}

impl RationalMap {
    /// Builds a map from two forms of equal degree. A common factor is divided
    /// out; the result must still be nonconstant.
    pub fn from_forms(num: BinForm, den: BinForm) -> Result<Self> {
        if num.degree() != den.degree() {
            return Err(Error::DegreeMismatch(num.degree(), den.degree()));
        }
        if num.is_zero() && den.is_zero() {
            return Err(Error::ZeroInput("map with zero numerator and denominator"));
        }
        let g = num.gcd(&den)?;
        let (num, den) = if g.degree() > 0 {
            let q = |f: &BinForm| {
                if f.is_zero() {
                    BinForm::zero(f.degree() - g.degree())
                } else {
                    f.div_exact(&g).expect("gcd divides")
                }
            };
            (q(&num), q(&den))
        } else {
            (num, den)
        };
        if num.degree() == 0 {
            return Err(Error::ConstantMap);
        }
        let map = Self::normalize(num, den);
        if map.resultant().is_zero() {
            return Err(Error::NotCoprime);
        }
        Ok(map)
    }

    /// Joint content removal and sign normalization; coprimality is the caller's concern.
    fn normalize(num: BinForm, den: BinForm) -> Self {
        let mut c = num.content().gcd(&den.content());
        if den.leading_nonzero().is_negative()
            || (den.is_zero() && num.leading_nonzero().is_negative())
        {
            c = -c;
        }
        RationalMap { num: num.div_scalar(&c), den: den.div_scalar(&c) }
    }

    /// `num(x) / den(x)` homogenized to degree `max(deg num, deg den)`.
    pub fn from_polys(num: &IntPoly, den: &IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroInput("zero denominator"));
        }
        let n = num.deg().max(den.deg());
        if n == 0 {
            return Err(Error::ConstantMap);
        }
        Self::from_forms(BinForm::from_poly(num, n), BinForm::from_poly(den, n))
    }

    /// Parses an expression such as `"(2*x^2+1)/x"` or `"x^2 - x"`.
    pub fn parse(text: &str) -> Result<Self> {
        let f = parse::parse_rational_function(text)?;
        if f.is_constant() {
            return Err(Error::ConstantMap);
        }
        Self::from_polys(&f.num, &f.den)
    }

    pub fn identity() -> Self {
        RationalMap { num: BinForm::from_i64(&[0, 1]), den: BinForm::from_i64(&[1, 0]) }
    }

    pub fn from_mobius(m: &Mobius) -> Self {
        Self::normalize(
            BinForm::linear(m.a.clone(), m.b.clone()),
            BinForm::linear(m.c.clone(), m.d.clone()),
        )
    }

    pub fn degree(&self) -> usize {
        self.num.degree()
    }

    pub fn num(&self) -> &BinForm {
        &self.num
    }

    pub fn den(&self) -> &BinForm {
        &self.den
    }

    /// Homogeneous resultant `Res(F, G)`.
    pub fn resultant(&self) -> BigInt {
        self.num.resultant(&self.den).expect("forms are nonzero")
    }

    /// The finitely many primes where simple good reduction fails.
    pub fn bad_sgr_primes(&self) -> Vec<u64> {
        crate::arith::primes::small_prime_divisors(&self.resultant())
    }

    /// `(F(P) : G(P))`
    pub fn evaluate(&self, pt: &ProjPoint) -> ProjPoint {
        let x = self.num.eval(pt.x(), pt.y());
        let y = self.den.eval(pt.x(), pt.y());
        ProjPoint::new(x, y).expect("coprime forms have no common zero")
    }

    /// `self ∘ other`, with a degree cap.
    pub fn compose_capped(&self, other: &RationalMap, cap: usize) -> Result<Self> {
        let degree = self.degree() * other.degree();
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        let num = self.num.substitute(&other.num, &other.den);
        let den = self.den.substitute(&other.num, &other.den);
        let out = Self::normalize(num, den);
        assert!(
            !out.resultant().is_zero(),
            "composition of coprime pairs lost coprimality"
        );
        Ok(out)
    }

    pub fn compose(&self, other: &RationalMap) -> Result<Self> {
        self.compose_capped(other, DEFAULT_DEGREE_CAP)
    }

    /// `k`-fold iterate, `k >= 1`.
    pub fn iterate_capped(&self, k: usize, cap: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("iterate count must be at least 1".into()));
        }
        let degree = (self.degree() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if degree > cap as u128 {
            return Err(Error::DegreeCap { degree: degree.min(usize::MAX as u128) as usize, cap });
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = self.compose_capped(&acc, cap)?;
        }
        Ok(acc)
    }

    pub fn iterate(&self, k: usize) -> Result<Self> {
        self.iterate_capped(k, DEFAULT_DEGREE_CAP)
    }

    /// `Φ ∘ A`: an equivalent model of the same map.
    pub fn conjugate_source(&self, m: &Mobius) -> Self {
        let num = self.num.transform(&m.a, &m.b, &m.c, &m.d);
        let den = self.den.transform(&m.a, &m.b, &m.c, &m.d);
        Self::normalize(num, den)
    }

    /// `A ∘ Φ`
    pub fn postcompose(&self, m: &Mobius) -> Self {
        let num = self.num.scale(&m.a).add(&self.den.scale(&m.b)).expect("same degree");
        let den = self.num.scale(&m.c).add(&self.den.scale(&m.d)).expect("same degree");
        Self::normalize(num, den)
    }

    /// `f^-1 ∘ Φ ∘ f`
    pub fn conjugate(&self, f: &Mobius) -> Self {
        self.conjugate_source(f).postcompose(&f.inverse())
    }

    /// Simple good reduction at `p`: the homogeneous resultant is a p-unit.
    /// Cross-checked against the degree of the reduced map.
    pub fn sgr_test(&self, ctx: &PadicContext) -> bool {
        let by_resultant = ctx.valuation_int(&self.resultant()) == Valuation::Finite(0);
        let by_degree = self.reduce(ctx).reduced_degree() == self.degree();
        assert_eq!(
            by_resultant, by_degree,
            "resultant valuation and reduced degree disagree for {self} at {ctx}"
        );
        by_resultant
    }

    /// Reduction modulo `p` with common factors over the residue field removed.
    pub fn reduce(&self, ctx: &PadicContext) -> ReducedMap {
        ReducedMap::from_map(self, ctx.p())
    }

    /// Largest coefficient size in bits.
    pub fn max_bits(&self) -> u64 {
        self.num.max_bits().max(self.den.max_bits())
    }

    /// Whether the map is a polynomial (fixes infinity totally ramified).
    pub fn is_polynomial(&self) -> bool {
        let n = self.degree();
        self.den.coeffs()[1..].iter().all(|c| c.is_zero()) && !self.num.coeff(n).is_zero()
    }

    /// Affine rendering such as `(2*x^2 + 1)/x`.
    pub fn to_expression(&self) -> String {
        let f = self.num.dehomogenize();
        let g = self.den.dehomogenize();
        if g.is_constant() && !g.is_zero() && g.leading() == BigInt::from(1) {
            return f.to_string();
        }
        let wrap = |p: &IntPoly| {
            let s = p.to_string();
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&f), wrap(&g))
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expression())
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMap(F = {}, G = {})", self.num, self.den)
    }
}
