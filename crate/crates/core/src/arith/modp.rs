//! Polynomials and binary forms over the prime field `Z/pZ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::form::BinForm;
use super::poly::IntPoly;

fn reduce_int(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn addm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    addm(a, p - b % p, p)
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverting zero mod {p}");
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    acc
}

/// Univariate polynomial over `Z/pZ`, trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn reduce(f: &IntPoly, p: u64) -> Self {
        Self::new(p, f.coeffs().iter().map(|c| reduce_int(c, p)).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| addm(mulm(acc, x, self.p), c, self.p))
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.p;
        ModPoly::new(
            p,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| mulm(c, i as u64 % p, p)).collect(),
        )
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return ModPoly::new(self.p, vec![]);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = addm(out[i + j], mulm(a, b, p), p);
            }
        }
        ModPoly::new(p, out)
    }

    pub fn monic(&self) -> ModPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = inv_mod(lc, self.p);
                ModPoly::new(self.p, self.coeffs.iter().map(|&c| mulm(c, inv, self.p)).collect())
            }
        }
    }

    pub fn div_rem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!d.is_zero(), "division by zero polynomial mod p");
        let p = self.p;
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (ModPoly::new(p, vec![]), self.clone());
        }
        let inv = inv_mod(*d.coeffs.last().unwrap(), p);
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mulm(r[k + dd], inv, p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (i, &dc) in d.coeffs.iter().enumerate() {
                r[k + i] = subm(r[k + i], mulm(c, dc, p), p);
            }
        }
        (ModPoly::new(p, q), ModPoly::new(p, r))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree over the (perfect) residue field: `gcd(f, f') = 1`.
    pub fn is_squarefree(&self) -> bool {
        if self.deg() == 0 {
            return true;
        }
        self.gcd(&self.derivative()).deg() == 0
    }
}

/// Binary form over `Z/pZ` with an explicit degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModForm {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModForm {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        assert!(!coeffs.is_empty());
        ModForm { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() }
    }

    /// Coefficientwise reduction; the degree is kept even when the `x^d` coefficient dies.
    pub fn reduce(f: &BinForm, p: u64) -> Self {
        Self::new(p, f.coeffs().iter().map(|c| reduce_int(c, p)).collect())
    }

    pub fn from_poly(f: &ModPoly, degree: usize) -> Self {
        assert!(f.deg() <= degree);
        let mut c = f.coeffs.clone();
        c.resize(degree + 1, 0);
        Self::new(f.p, c)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn dehomogenize(&self) -> ModPoly {
        ModPoly::new(self.p, self.coeffs.clone())
    }

    pub fn infinity_multiplicity(&self) -> usize {
        self.degree() - self.dehomogenize().deg()
    }

    pub fn eval(&self, x: u64, y: u64) -> u64 {
        let p = self.p;
        let d = self.degree();
        let mut ypows = vec![1u64];
        for k in 1..=d {
            ypows.push(mulm(ypows[k - 1], y, p));
        }
        let mut acc = 0;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            acc = addm(mulm(acc, x, p), mulm(c, ypows[d - i], p), p);
        }
        acc
    }

    pub fn mul(&self, other: &ModForm) -> ModForm {
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = addm(out[i + j], mulm(a, b, p), p);
            }
        }
        ModForm::new(p, out)
    }

    pub fn scale(&self, c: u64) -> ModForm {
        ModForm::new(self.p, self.coeffs.iter().map(|&a| mulm(a, c, self.p)).collect())
    }

    pub fn add(&self, other: &ModForm) -> ModForm {
        assert_eq!(self.degree(), other.degree());
        ModForm::new(
            self.p,
            self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| addm(a, b, self.p)).collect(),
        )
    }

    pub fn sub(&self, other: &ModForm) -> ModForm {
        self.add(&other.scale(self.p - 1))
    }

    pub fn partial_x(&self) -> ModForm {
        let d = self.degree();
        if d == 0 {
            return ModForm::new(self.p, vec![0]);
        }
        let p = self.p;
        ModForm::new(p, (1..=d).map(|i| mulm(self.coeffs[i], i as u64 % p, p)).collect())
    }

    pub fn partial_y(&self) -> ModForm {
        let d = self.degree();
        if d == 0 {
            return ModForm::new(self.p, vec![0]);
        }
        let p = self.p;
        ModForm::new(p, (0..d).map(|i| mulm(self.coeffs[i], (d - i) as u64 % p, p)).collect())
    }

    /// `F(P, Q)` for forms of equal degree.
    pub fn substitute(&self, pf: &ModForm, qf: &ModForm) -> ModForm {
        assert_eq!(pf.degree(), qf.degree());
        let d = self.degree();
        let e = pf.degree();
        let one = ModForm::new(self.p, vec![1]);
        let mut ppows = vec![one.clone()];
        let mut qpows = vec![one];
        for k in 1..=d {
            ppows.push(ppows[k - 1].mul(pf));
            qpows.push(qpows[k - 1].mul(qf));
        }
        let mut acc = ModForm::new(self.p, vec![0; d * e + 1]);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            acc = acc.add(&ppows[i].mul(&qpows[d - i]).scale(a));
        }
        acc
    }

    /// Monic gcd form (monic in the highest nonzero coefficient).
    pub fn gcd(&self, other: &ModForm) -> ModForm {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let g = self.dehomogenize().gcd(&other.dehomogenize());
        let inf = self.infinity_multiplicity().min(other.infinity_multiplicity());
        ModForm::from_poly(&g, g.deg() + inf)
    }

    /// Scaled so that the highest nonzero coefficient is 1.
    pub fn normalized(&self) -> ModForm {
        match self.coeffs.iter().rev().find(|&&c| c != 0) {
            None => self.clone(),
            Some(&lc) => self.scale(inv_mod(lc, self.p)),
        }
    }

    /// Exact quotient by a divisor form.
    pub fn div_exact(&self, d: &ModForm) -> Option<ModForm> {
        if d.degree() > self.degree() || d.is_zero() {
            return None;
        }
        if d.infinity_multiplicity() > self.infinity_multiplicity() && !self.is_zero() {
            return None;
        }
        let (q, r) = self.dehomogenize().div_rem(&d.dehomogenize());
        if !r.is_zero() {
            return None;
        }
        Some(ModForm::from_poly(&q, self.degree() - d.degree()))
    }

    /// True when the projective roots over the algebraic closure are pairwise distinct.
    pub fn has_distinct_roots(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.infinity_multiplicity() <= 1 && self.dehomogenize().is_squarefree()
    }

    /// Equality as projective objects: same degree and proportional coefficients.
    pub fn proportional(&self, other: &ModForm) -> bool {
        self.degree() == other.degree() && self.normalized() == other.normalized()
    }
}
