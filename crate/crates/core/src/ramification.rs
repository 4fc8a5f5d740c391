//! Critical points, branch values and fibers, and the collision tests behind
//! critically good reduction.
//!
//! Finite Galois-stable point sets are carried as squarefree primitive binary
//! forms whose projective roots are the points. Whether two points of such a
//! set collide modulo `p` is then a question about `p` dividing the form's
//! discriminant, so every verdict here is exact.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{BinForm, IntPoly, ModForm, PadicContext};
use crate::error::{Error, Result};
use crate::map::{ProjPoint, RationalMap};

/// Which copy of P^1 a point set lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    /// Source coordinates `(x : y)`.
    Source,
    /// Target values `(t : u)`.
    Target,
}

/// A finite subset of P^1(Qbar) stable under Galois, as a squarefree primitive form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSetForm {
    form: BinForm,
    role: Role,
}

impl PointSetForm {
    /// Normalizes `form` to its squarefree primitive part.
    pub fn new(form: &BinForm, role: Role) -> Result<Self> {
        Ok(PointSetForm { form: form.squarefree_part()?.primitive(), role })
    }

    pub fn form(&self) -> &BinForm {
        &self.form
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// Number of points in the set.
    pub fn len(&self) -> usize {
        self.form.degree()
    }

    pub fn is_empty(&self) -> bool {
        self.form.degree() == 0
    }

    pub fn discriminant(&self) -> BigInt {
        self.form.discriminant().expect("nonzero form")
    }

    /// The rational points of the set.
    pub fn rational_points(&self) -> Vec<ProjPoint> {
        self.form
            .rational_roots()
            .expect("nonzero form")
            .into_iter()
            .map(|(a, b)| ProjPoint::new(a, b).expect("root is a point"))
            .collect()
    }

    pub fn contains(&self, pt: &ProjPoint) -> bool {
        self.form.eval(pt.x(), pt.y()).is_zero()
    }

    /// Union of two sets in the same role.
    pub fn union(&self, other: &PointSetForm) -> Result<PointSetForm> {
        let common = self.form.gcd(&other.form)?;
        let fresh = other.form.div_exact(&common).expect("gcd divides");
        Ok(PointSetForm { form: self.form.mul(&fresh).primitive(), role: self.role })
    }

    /// `other ⊆ self`
    pub fn contains_set(&self, other: &PointSetForm) -> bool {
        other.form.divides(&self.form)
    }
}

impl fmt::Display for PointSetForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form)
    }
}

impl fmt::Debug for PointSetForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSetForm({:?}, {})", self.role, self.form)
    }
}

/// A branch value either known exactly or identified by its index among
/// the roots of the branch form (as ordered by the monodromy computation).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BranchValue {
    Rational(ProjPoint),
    Root(usize),
}

impl fmt::Display for BranchValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchValue::Rational(p) => write!(f, "{p}"),
            BranchValue::Root(i) => write!(f, "root#{i}"),
        }
    }
}

/// Ramification indices of the points in one fiber, largest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiberProfile {
    pub branch_value: BranchValue,
    pub multiplicities: Vec<usize>,
}

impl FiberProfile {
    pub fn new(branch_value: BranchValue, mut multiplicities: Vec<usize>) -> Self {
        multiplicities.sort_unstable_by(|a, b| b.cmp(a));
        FiberProfile { branch_value, multiplicities }
    }

    pub fn degree(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Contribution `Σ (e - 1)` to the Riemann–Hurwitz count.
    pub fn ramification(&self) -> usize {
        self.multiplicities.iter().map(|e| e - 1).sum()
    }

    pub fn is_branched(&self) -> bool {
        self.multiplicities.iter().any(|&e| e >= 2)
    }
}

fn require_dynamical(map: &RationalMap) -> Result<()> {
    if map.degree() < 2 {
        Err(Error::DegreeTooSmall(map.degree()))
    } else {
        Ok(())
    }
}

/// `W = F_x G_y - F_y G_x`, a nonzero form of degree `2n - 2` whose roots are
/// the critical points.
pub fn wronskian_form(map: &RationalMap) -> Result<BinForm> {
    require_dynamical(map)?;
    let (f, g) = (map.num(), map.den());
    let w = f.partial_x().mul(&g.partial_y()).sub(&f.partial_y().mul(&g.partial_x()))?;
    debug_assert_eq!(w.degree(), 2 * map.degree() - 2);
    debug_assert!(!w.is_zero());
    Ok(w)
}

/// The set of critical points.
pub fn critical_form(map: &RationalMap) -> Result<PointSetForm> {
    PointSetForm::new(&wronskian_form(map)?, Role::Source)
}

/// Integer polynomial of degree at most `values.len() - 1` through
/// `(0, v0), (1, v1), ...`. Panics if the interpolant is not integral.
pub(crate) fn interpolate_integer(values: &[BigInt]) -> IntPoly {
    // Newton divided differences on nodes 0..k, then expansion.
    let k = values.len();
    let mut dd: Vec<BigRational> = values.iter().map(|v| BigRational::from(v.clone())).collect();
    for level in 1..k {
        for i in (level..k).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / BigRational::from(BigInt::from(level));
        }
    }
    // p(t) = dd[0] + dd[1] t + dd[2] t (t-1) + ...
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); k];
    let mut basis: Vec<BigRational> = vec![BigRational::one()];
    for (level, coef) in dd.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            acc[i] += coef * b;
        }
        // basis *= (t - level)
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] += b;
            next[i] -= b * BigRational::from(BigInt::from(level));
        }
        basis = next;
    }
    IntPoly::new(
        acc.into_iter()
            .map(|c| {
                assert!(c.is_integer(), "interpolant of an integer form is integral");
                c.to_integer()
            })
            .collect(),
    )
}

/// Builds the form `D(t, u)` of the given degree from its values `D(t, 1)` at
/// `t = 0, 1, ..., degree`.
pub(crate) fn form_from_samples(degree: usize, sample: impl Fn(&BigInt) -> BigInt) -> BinForm {
    let values: Vec<BigInt> = (0..=degree).map(|t| sample(&BigInt::from(t))).collect();
    BinForm::from_poly(&interpolate_integer(&values), degree)
}

/// Member `u F - t G` of the pencil at `u = 1`.
fn pencil_member(map: &RationalMap, t: &BigInt) -> BinForm {
    map.num().sub(&map.den().scale(t)).expect("equal degrees")
}

/// Discriminant of the pencil `u F - t G` with respect to `(x, y)`, as a form
/// of degree `2n - 2` in `(t, u)`.
pub fn pencil_discriminant(map: &RationalMap) -> Result<BinForm> {
    require_dynamical(map)?;
    let n = map.degree();
    let d = form_from_samples(2 * n - 2, |t| {
        pencil_member(map, t).discriminant().expect("pencil member is nonzero")
    });
    debug_assert!(!d.is_zero());
    Ok(d)
}

/// The set of branch values `Φ(R_Φ)`, in target coordinates `(t : u)`.
pub fn branch_form(map: &RationalMap) -> Result<PointSetForm> {
    PointSetForm::new(&pencil_discriminant(map)?, Role::Target)
}

/// True iff the points of the set stay pairwise distinct modulo `p`.
pub fn collision_test(set: &PointSetForm, ctx: &PadicContext) -> bool {
    if set.len() <= 1 {
        return true;
    }
    !ctx.divides(&set.discriminant())
}

/// Brute-force version of [`collision_test`]: squarefreeness of the reduced
/// form over the residue field.
pub fn collision_test_residue(set: &PointSetForm, ctx: &PadicContext) -> bool {
    ModForm::reduce(set.form(), ctx.p()).has_distinct_roots()
}

/// Branch values remain pairwise distinct modulo `p`.
pub fn crv_test(map: &RationalMap, ctx: &PadicContext) -> Result<bool> {
    Ok(collision_test(&branch_form(map)?, ctx))
}

/// Critically good reduction: neither branch values nor critical points collide.
pub fn cgr_test(map: &RationalMap, ctx: &PadicContext) -> Result<bool> {
    Ok(crv_test(map, ctx)? && collision_test(&critical_form(map)?, ctx))
}

/// Ramification indices over a rational value `λ = (a : b)`, read from the
/// root multiplicities of `b F - a G`.
pub fn rational_fiber_profile(map: &RationalMap, value: &ProjPoint) -> FiberProfile {
    let fiber = map
        .num()
        .scale(value.y())
        .sub(&map.den().scale(value.x()))
        .expect("equal degrees");
    let mult = fiber.root_multiplicities().expect("fiber form is nonzero for coprime F, G");
    FiberProfile::new(BranchValue::Rational(value.clone()), mult)
}

/// Verdicts of the comparison between critically good reduction and simple
/// good reduction plus condition on branch values, at a prime of separable reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CptCheck {
    pub cgr: bool,
    pub sgr: bool,
    pub crv: bool,
}

/// At a prime where the reduction is separable, `cgr ⟺ (sgr ∧ crv)`.
/// Returns the shared verdict, or a consistency error naming the failing side.
pub fn cpt_crosscheck(map: &RationalMap, ctx: &PadicContext) -> Result<bool> {
    let check = cpt_sides(map, ctx)?;
    if check.cgr != (check.sgr && check.crv) {
        return Err(Error::Consistency(format!(
            "cgr={} but sgr={} crv={} for {map} at {ctx}",
            check.cgr, check.sgr, check.crv
        )));
    }
    Ok(check.cgr)
}

/// Both sides of the equivalence, without asserting it.
pub fn cpt_sides(map: &RationalMap, ctx: &PadicContext) -> Result<CptCheck> {
    if !map.reduce(ctx).separable_test() {
        return Err(Error::Precondition(format!("reduction of {map} at {ctx} is inseparable")));
    }
    let crv = crv_test(map, ctx)?;
    let cgr = crv && collision_test(&critical_form(map)?, ctx);
    Ok(CptCheck { cgr, sgr: map.sgr_test(ctx), crv })
}
