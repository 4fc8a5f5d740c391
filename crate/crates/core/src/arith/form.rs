//! Binary forms `sum a_i x^i y^(d-i)` over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::IntPoly;
use super::primes::is_prime;
use crate::error::{Error, Result};

/// Homogeneous binary form of a fixed degree. `coeffs[i]` multiplies `x^i y^(degree-i)`.
///
/// The degree is part of the value: `x*y` as a form of degree 2 and `x` as a form of
/// degree 1 are different objects. A form of degree `d` whose `x^d` coefficient
/// vanishes has the projective root `(1:0)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinForm {
    degree: usize,
    coeffs: Vec<BigInt>,
}

impl BinForm {
    /// Builds a form from `degree + 1` coefficients; rejects the zero form.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroInput("binary form with all coefficients zero"));
        }
        Ok(Self::raw(coeffs))
    }

    pub(crate) fn raw(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty());
        BinForm { degree: coeffs.len() - 1, coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::raw(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub(crate) fn zero(degree: usize) -> Self {
        BinForm { degree, coeffs: vec![BigInt::zero(); degree + 1] }
    }

    pub fn one() -> Self {
        Self::raw(vec![BigInt::one()])
    }

    /// The linear form `a*x + b*y`.
    pub fn linear(a: BigInt, b: BigInt) -> Self {
        Self::raw(vec![b, a])
    }

    /// The form vanishing exactly at `(x0 : y0)`, namely `y0*x - x0*y`.
    pub fn vanishing_at(x0: &BigInt, y0: &BigInt) -> Self {
        Self::linear(y0.clone(), -x0)
    }

    /// Homogenizes `p` to the given degree (which must be at least `deg p`).
    pub fn from_poly(p: &IntPoly, degree: usize) -> Self {
        assert!(p.deg() <= degree, "homogenizing to a degree below the polynomial degree");
        let mut coeffs = p.coeffs().to_vec();
        coeffs.resize(degree + 1, BigInt::zero());
        BinForm { degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `F(x, 1)`
    pub fn dehomogenize(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    /// Multiplicity of the root `(1:0)`.
    pub fn infinity_multiplicity(&self) -> usize {
        self.degree - self.dehomogenize().deg()
    }

    /// `F(y, x)`
    pub fn swap(&self) -> BinForm {
        let mut c = self.coeffs.clone();
        c.reverse();
        BinForm { degree: self.degree, coeffs: c }
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let mut ypows = vec![BigInt::one()];
        for k in 1..=self.degree {
            ypows.push(&ypows[k - 1] * y);
        }
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * x + c * &ypows[self.degree - i];
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> BinForm {
        BinForm { degree: self.degree, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn div_scalar(&self, c: &BigInt) -> BinForm {
        BinForm { degree: self.degree, coeffs: self.coeffs.iter().map(|a| a / c).collect() }
    }

    pub fn add(&self, other: &BinForm) -> Result<BinForm> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(BinForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &BinForm) -> Result<BinForm> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn mul(&self, other: &BinForm) -> BinForm {
        let mut out = vec![BigInt::zero(); self.degree + other.degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinForm { degree: self.degree + other.degree, coeffs: out }
    }

    pub fn pow(&self, e: usize) -> BinForm {
        let mut acc = BinForm::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `dF/dx`, a form of degree `d - 1` (degree 0 forms map to the zero constant).
    pub fn partial_x(&self) -> BinForm {
        if self.degree == 0 {
            return BinForm::zero(0);
        }
        let coeffs = (1..=self.degree).map(|i| &self.coeffs[i] * BigInt::from(i)).collect();
        BinForm { degree: self.degree - 1, coeffs }
    }

    /// `dF/dy`
    pub fn partial_y(&self) -> BinForm {
        if self.degree == 0 {
            return BinForm::zero(0);
        }
        let coeffs = (0..self.degree)
            .map(|i| &self.coeffs[i] * BigInt::from(self.degree - i))
            .collect();
        BinForm { degree: self.degree - 1, coeffs }
    }

    /// `F(P(x,y), Q(x,y))` for forms `P`, `Q` of equal degree `e`; result has degree `d*e`.
    pub fn substitute(&self, p: &BinForm, q: &BinForm) -> BinForm {
        assert_eq!(p.degree, q.degree, "substituted forms must share a degree");
        let d = self.degree;
        let e = p.degree;
        let mut ppows = vec![BinForm::one()];
        let mut qpows = vec![BinForm::one()];
        for k in 1..=d {
            ppows.push(ppows[k - 1].mul(p));
            qpows.push(qpows[k - 1].mul(q));
        }
        let mut acc = BinForm::zero(d * e);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = ppows[i].mul(&qpows[d - i]).scale(a);
            for (dst, src) in acc.coeffs.iter_mut().zip(term.coeffs) {
                *dst += src;
            }
        }
        acc
    }

    /// `F(a x + b y, c x + d y)`
    pub fn transform(&self, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> BinForm {
        let p = BinForm::linear(a.clone(), b.clone());
        let q = BinForm::linear(c.clone(), d.clone());
        self.substitute(&p, &q)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Highest-index nonzero coefficient, used for sign normalization.
    pub fn leading_nonzero(&self) -> BigInt {
        self.coeffs.iter().rev().find(|c| !c.is_zero()).cloned().unwrap_or_default()
    }

    /// Content removed, highest-index nonzero coefficient positive.
    pub fn primitive(&self) -> BinForm {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_nonzero().is_negative() {
            c = -c;
        }
        self.div_scalar(&c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Greatest common divisor as a primitive form.
    pub fn gcd(&self, other: &BinForm) -> Result<BinForm> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroInput("gcd of two zero forms"));
        }
        if self.is_zero() {
            return Ok(other.primitive());
        }
        if other.is_zero() {
            return Ok(self.primitive());
        }
        let g = self.dehomogenize().gcd(&other.dehomogenize())?;
        let inf = self.infinity_multiplicity().min(other.infinity_multiplicity());
        Ok(BinForm::from_poly(&g, g.deg() + inf))
    }

    /// Primitive squarefree form with the same projective roots.
    pub fn squarefree_part(&self) -> Result<BinForm> {
        if self.is_zero() {
            return Err(Error::ZeroInput("squarefree part of the zero form"));
        }
        let f = self.dehomogenize().squarefree_part()?;
        let inf = self.infinity_multiplicity().min(1);
        Ok(BinForm::from_poly(&f, f.deg() + inf))
    }

    /// Root multiplicities (largest first), including the root at infinity.
    pub fn root_multiplicities(&self) -> Result<Vec<usize>> {
        if self.is_zero() {
            return Err(Error::ZeroInput("root multiplicities of the zero form"));
        }
        let mut m = self.dehomogenize().root_multiplicities()?;
        let inf = self.infinity_multiplicity();
        if inf > 0 {
            m.push(inf);
        }
        m.sort_unstable_by(|a, b| b.cmp(a));
        Ok(m)
    }

    /// Whether `self` divides `other` over Q.
    pub fn divides(&self, other: &BinForm) -> bool {
        if other.is_zero() {
            return true;
        }
        if self.is_zero() || self.degree > other.degree {
            return false;
        }
        if self.infinity_multiplicity() > other.infinity_multiplicity() {
            return false;
        }
        other.dehomogenize().pseudo_rem(&self.dehomogenize()).is_zero()
    }

    /// Exact quotient over Q, returned primitive; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &BinForm) -> Option<BinForm> {
        if !d.divides(self) {
            return None;
        }
        let q = self
            .primitive()
            .dehomogenize()
            .primitive_part()
            .div_exact(&d.dehomogenize().primitive_part())?;
        Some(BinForm::from_poly(&q, self.degree - d.degree).primitive())
    }

    /// Resultant of two forms with respect to their formal degrees.
    ///
    /// Zero exactly when the forms share a projective root.
    pub fn resultant(&self, other: &BinForm) -> Result<BigInt> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroInput("resultant with the zero form"));
        }
        let (n, m) = (self.degree, other.degree);
        let f = self.dehomogenize();
        let g = other.dehomogenize();
        let k = n - f.deg();
        let l = m - g.deg();
        if k > 0 && l > 0 {
            return Ok(BigInt::zero());
        }
        let core = f.resultant(&g)?;
        if l > 0 {
            Ok(num_traits::pow(self.coeffs[n].clone(), l) * core)
        } else if k > 0 {
            let sign = if (m * k) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
            Ok(sign * num_traits::pow(other.coeffs[m].clone(), k) * core)
        } else {
            Ok(core)
        }
    }

    /// Discriminant of the form. Degree 0 and 1 forms get the unit 1.
    pub fn discriminant(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::ZeroInput("discriminant of the zero form"));
        }
        let d = self.degree;
        if d <= 1 {
            return Ok(BigInt::one());
        }
        // Move the root at infinity away with a unimodular shear y -> y + k x.
        let mut form = self.clone();
        if form.coeffs[d].is_zero() {
            let (one, zero) = (BigInt::one(), BigInt::zero());
            let mut k = 1i64;
            loop {
                let kb = BigInt::from(k);
                if !self.eval(&one, &kb).is_zero() {
                    form = self.transform(&one, &zero, &kb, &one);
                    break;
                }
                k = if k > 0 { -k } else { -k + 1 };
            }
        }
        let f = form.dehomogenize();
        let lead = f.leading();
        let r = f.resultant(&f.derivative())?;
        let (q, rem) = r.div_rem(&lead);
        debug_assert!(rem.is_zero());
        let sign = if (d * (d - 1) / 2) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        Ok(sign * q)
    }

    /// Rational projective roots `(x : y)` with coprime coordinates, sign-normalized
    /// so that `y > 0`, or `(1 : 0)`. Exact and complete.
    pub fn rational_roots(&self) -> Result<Vec<(BigInt, BigInt)>> {
        let sq = self.squarefree_part()?;
        let mut out = Vec::new();
        if sq.infinity_multiplicity() > 0 {
            out.push((BigInt::one(), BigInt::zero()));
        }
        let mut f = sq.dehomogenize();
        if f.coeff(0).is_zero() && !f.is_zero() {
            out.push((BigInt::zero(), BigInt::one()));
            f = f.div_exact(&IntPoly::from_i64(&[0, 1])).expect("x divides f");
        }
        if f.deg() >= 1 {
            for (a, b) in rational_roots_nonzero(&f)? {
                out.push((a, b));
            }
        }
        out.sort_by(|p, q| {
            // finite roots by value, infinity last
            match (p.1.is_zero(), q.1.is_zero()) {
                (true, true) => std::cmp::Ordering::Equal,
                (true, false) => std::cmp::Ordering::Greater,
                (false, true) => std::cmp::Ordering::Less,
                _ => (&p.0 * &q.1).cmp(&(&q.0 * &p.1)),
            }
        });
        Ok(out)
    }

    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

/// Rational roots of a squarefree integer polynomial with nonzero constant term,
/// by Hensel lifting roots modulo a good prime and rational reconstruction.
fn rational_roots_nonzero(f: &IntPoly) -> Result<Vec<(BigInt, BigInt)>> {
    let f = f.primitive_part();
    let lead = f.leading();
    let c0 = f.coeff(0);
    let disc = f.resultant(&f.derivative())?;
    debug_assert!(!disc.is_zero());
    let bad = &lead * &disc;
    let q = (3u64..)
        .filter(|&q| is_prime(q))
        .find(|&q| !(&bad % BigInt::from(q)).is_zero())
        .expect("some prime avoids a nonzero integer");
    let qb = BigInt::from(q);
    // Any root a/b has |a| <= |c0| and |b| <= |lead|.
    let bound = lead.abs().max(c0.abs());
    let target = &bound * &bound * BigInt::from(2);
    let fprime = f.derivative();
    let mut out = Vec::new();
    for r0 in 0..q {
        let r0b = BigInt::from(r0);
        if !f.eval(&r0b).mod_floor(&qb).is_zero() {
            continue;
        }
        let mut r = r0b;
        let mut modulus = qb.clone();
        while modulus <= target {
            modulus = &modulus * &modulus;
            let fr = f.eval(&r).mod_floor(&modulus);
            let dr = fprime.eval(&r).mod_floor(&modulus);
            let inv = mod_inverse(&dr, &modulus).expect("simple root mod a good prime");
            r = (&r - fr * inv).mod_floor(&modulus);
        }
        if let Some((a, b)) = rational_reconstruct(&r, &modulus) {
            // exact check: b^d f(a/b) = 0
            let hom = BinForm::from_poly(&f, f.deg());
            if hom.eval(&a, &b).is_zero() {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Finds `a/b` with `a = b*r mod m`, `|a|, b <= sqrt(m/2)`, `b > 0`.
fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let half = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > half {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > half {
        return None;
    }
    let (mut a, mut b) = (r1, t1);
    if b.is_negative() {
        a = -a;
        b = -b;
    }
    let g = a.gcd(&b);
    if !g.is_one() {
        return None;
    }
    Some((a, b))
}

impl fmt::Display for BinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut parts = Vec::new();
            if !mag.is_one() || d == 0 {
                parts.push(mag.to_string());
            }
            match i {
                0 => {}
                1 => parts.push("x".into()),
                _ => parts.push(format!("x^{i}")),
            }
            match d - i {
                0 => {}
                1 => parts.push("y".into()),
                e => parts.push(format!("y^{e}")),
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinForm[{}]({self})", self.degree)
    }
}

/// Converts a small integer coefficient list to `i64`s (for tests and display).
pub fn to_i64s(form: &BinForm) -> Option<Vec<i64>> {
    form.coeffs.iter().map(|c| c.to_i64()).collect()
}
