use std::fmt;

use super::point::normalize_mod_point;
use super::RationalMap;
use crate::arith::ModForm;

/// The reduction `Φ_v` of a map modulo a prime: a coprime pair of forms over
/// `Z/pZ` after the common factor of the coefficientwise reduction is removed.
#[derive(Clone, PartialEq, Eq)]
pub struct ReducedMap {
    p: u64,
    num: ModForm,
    den: ModForm,
}

impl ReducedMap {
    pub fn from_map(map: &RationalMap, p: u64) -> Self {
        let f = ModForm::reduce(map.num(), p);
        let g = ModForm::reduce(map.den(), p);
        Self::from_pair(f, g)
    }

    /// Removes the gcd of two forms of equal degree over the residue field.
    pub fn from_pair(f: ModForm, g: ModForm) -> Self {
        assert_eq!(f.degree(), g.degree());
        assert!(!(f.is_zero() && g.is_zero()), "normalized model reduces to (0 : 0)");
        let p = f.modulus();
        let common = f.gcd(&g);
        let num = f.div_exact(&common).expect("gcd divides");
        let den = g.div_exact(&common).expect("gcd divides");
        ReducedMap { p, num, den }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn num(&self) -> &ModForm {
        &self.num
    }

    pub fn den(&self) -> &ModForm {
        &self.den
    }

    pub fn reduced_degree(&self) -> usize {
        self.num.degree()
    }

    /// Wronskian `f'g - fg'` of the dehomogenized pair, as a form of degree `2e - 2`.
    /// Computed as `(F_x G - F G_x) / y`; the Jacobian `F_x G_y - F_y G_x` is `e`
    /// times this and would vanish whenever `p` divides `e`.
    pub fn wronskian(&self) -> ModForm {
        let a = self.num.partial_x().mul(&self.den);
        let b = self.num.mul(&self.den.partial_x());
        let w = a.sub(&b);
        let mut c = w.coeffs().to_vec();
        if c.len() == 1 {
            return w;
        }
        debug_assert_eq!(c.last(), Some(&0));
        c.pop();
        ModForm::new(self.modulus(), c)
    }

    /// Separable iff the Wronskian is not identically zero, i.e. `Φ_v` is
    /// nonconstant and not a function of `x^p`.
    pub fn separable_test(&self) -> bool {
        self.reduced_degree() > 0 && !self.wronskian().is_zero()
    }

    /// Evaluates at a point of P^1(F_p) given as `(x, y)`.
    pub fn evaluate(&self, x: u64, y: u64) -> (u64, u64) {
        let a = self.num.eval(x, y);
        let b = self.den.eval(x, y);
        normalize_mod_point(a, b, self.p)
    }

    /// `self ∘ other` over the residue field.
    pub fn compose(&self, other: &ReducedMap) -> ReducedMap {
        assert_eq!(self.p, other.p);
        let f = self.num.substitute(&other.num, &other.den);
        let g = self.den.substitute(&other.num, &other.den);
        Self::from_pair(f, g)
    }

    /// Equality as maps: same degree and `F1 G2 = F2 G1`.
    pub fn same_map(&self, other: &ReducedMap) -> bool {
        self.p == other.p
            && self.reduced_degree() == other.reduced_degree()
            && self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Debug for ReducedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducedMap(p={}, F={:?}, G={:?})", self.p, self.num.coeffs(), self.den.coeffs())
    }
}

/// `separable_test` as a free function on a reduced map.
pub fn separable_test(r: &ReducedMap) -> bool {
    r.separable_test()
}
