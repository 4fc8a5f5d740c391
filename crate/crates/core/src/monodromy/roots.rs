//! Floating-point root isolation for integer binary forms.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::arith::BinForm;
use crate::error::{Error, Result};

/// A point of the Riemann sphere in floating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(*z),
            SpherePoint::Infinity => None,
        }
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Finite(z) if z.im == 0.0 => write!(f, "{}", z.re),
            SpherePoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            SpherePoint::Infinity => write!(f, "inf"),
        }
    }
}

/// An approximate root with a radius guaranteed to contain exactly one root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootBall {
    pub center: SpherePoint,
    pub radius: f64,
}

/// Converts integer coefficients to floats after a common power-of-two
/// scaling that keeps the largest one near `2^60`.
pub(crate) fn scaled_floats(coeffs: &[BigInt]) -> Vec<f64> {
    let max_bits = coeffs.iter().map(|c| c.bits()).max().unwrap_or(0) as i64;
    let shift = max_bits - 60;
    coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                return 0.0;
            }
            let bits = c.bits() as i64;
            let cut = (bits - 64).max(0);
            let top = (c >> cut as usize).to_f64().expect("64-bit value fits");
            top * 2f64.powi((cut - shift) as i32)
        })
        .collect()
}

/// Horner evaluation of `p` and `p'` (coefficients low to high).
pub(crate) fn eval_with_derivative(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::zero();
    let mut dv = Complex64::zero();
    for c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Newton correction `p(z) / p'(z)` and a bound on its rounding error.
/// Outside the unit disk the reversed polynomial is evaluated at `1/z` so
/// that large roots do not overflow.
pub(crate) fn newton_ratio(p: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let d = p.len() - 1;
    let slack = f64::EPSILON * (2 * d + 2) as f64;
    let r = z.norm();
    if r <= 1.0 {
        let (v, dv) = eval_with_derivative(p, z);
        let mag = p.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
        (v / dv, slack * mag / dv.norm())
    } else {
        let w = z.inv();
        let rev: Vec<Complex64> = p.iter().rev().copied().collect();
        let (q, dq) = eval_with_derivative(&rev, w);
        let den = q * d as f64 - w * dq;
        let mag = rev.iter().rev().fold(0.0, |acc, c| acc * w.norm() + c.norm());
        (z * q / den, slack * r * mag / den.norm())
    }
}

/// Simultaneous Aberth–Ehrlich iteration; `p` must have a nonzero leading
/// coefficient. Returns `deg p` approximations.
pub(crate) fn aberth(p: &[Complex64]) -> Vec<Complex64> {
    let d = p.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = p[d];
    let monic: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    if d == 1 {
        return vec![-monic[0]];
    }
    // Fujiwara's bound for the initial circle
    let bound = (0..d)
        .map(|i| {
            let a = monic[i].norm();
            let a = if i == 0 { a / 2.0 } else { a };
            a.powf(1.0 / (d - i) as f64)
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = if bound > 0.0 { bound / 2.0 } else { 1.0 };
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / d as f64))
        .collect();
    for _ in 0..2000 {
        let mut done = true;
        for k in 0..d {
            let (ratio, _) = newton_ratio(&monic, z[k]);
            if ratio.is_zero() || !ratio.is_finite() {
                continue;
            }
            let repulsion: Complex64 =
                (0..d).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() > 1e-15 * (1.0 + z[k].norm()) {
                done = false;
            }
        }
        if done {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (ratio, _) = newton_ratio(&monic, *zk);
            let next = *zk - ratio;
            if next.is_finite() {
                *zk = next;
            }
        }
    }
    z
}

/// Gaussian integer `re + i im`.
#[derive(Clone)]
struct Gauss {
    re: BigInt,
    im: BigInt,
}

impl Gauss {
    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn add_real(&self, c: &BigInt) -> Gauss {
        Gauss { re: &self.re + c, im: self.im.clone() }
    }
}

/// `a / b` as a float for integers of any size.
fn big_quotient(a: &BigInt, b: &BigInt) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let shift = a.bits() as i64 - b.bits() as i64;
    // scale the numerator so the integer quotient carries about 64 bits
    let scale = 64 - shift;
    let q = if scale >= 0 { (a << scale as usize) / b } else { a / (b << (-scale) as usize) };
    q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-scale as i32)
}

/// Exact Newton correction `p(z) / p'(z)` for an integer polynomial at the
/// dyadic point `z`, rounded once at the end.
fn exact_newton_ratio(p: &[BigInt], z: Complex64) -> Option<Complex64> {
    use num_rational::BigRational;
    let re = BigRational::from_float(z.re)?;
    let im = BigRational::from_float(z.im)?;
    let den = num_integer::Integer::lcm(re.denom(), im.denom());
    let w = Gauss { re: (re * &den).to_integer(), im: (im * &den).to_integer() };
    // Horner on D^d p(z) and D^(d-1) p'(z) with z = w / D
    let d = p.len() - 1;
    let mut value = Gauss { re: p[d].clone(), im: BigInt::zero() };
    let mut deriv = Gauss { re: BigInt::zero(), im: BigInt::zero() };
    let mut dpow = BigInt::from(1);
    for c in p[..d].iter().rev() {
        let shifted = deriv.mul(&w);
        deriv = Gauss { re: &shifted.re + &value.re, im: &shifted.im + &value.im };
        dpow *= &den;
        value = value.mul(&w).add_real(&(c * &dpow));
    }
    // p / p' = (value / D^d) / (deriv / D^(d-1)) = value / (deriv * D)
    let deriv = Gauss { re: &deriv.re * &den, im: &deriv.im * &den };
    let norm = &deriv.re * &deriv.re + &deriv.im * &deriv.im;
    if norm.is_zero() {
        return None;
    }
    let num_re = &value.re * &deriv.re + &value.im * &deriv.im;
    let num_im = &value.im * &deriv.re - &value.re * &deriv.im;
    Some(Complex64::new(big_quotient(&num_re, &norm), big_quotient(&num_im, &norm)))
}

/// Inclusion radius `d |p(z)| / |p'(z)|`, inflated by a bound on the
/// rounding error of the evaluation.
pub(crate) fn inclusion_radius(p: &[Complex64], z: Complex64) -> f64 {
    let d = (p.len() - 1) as f64;
    let (ratio, err) = newton_ratio(p, z);
    d * (ratio.norm() + err)
}

/// Approximate roots of a squarefree form with pairwise disjoint inclusion
/// disks; a root at `(1:0)` is reported as [`SpherePoint::Infinity`].
pub fn complex_roots(form: &BinForm, digits: u32) -> Result<Vec<RootBall>> {
    let inf = form.infinity_multiplicity();
    if inf > 1 {
        return Err(Error::Precondition("form is not squarefree at infinity".into()));
    }
    let finite_coeffs = &form.coeffs()[..=form.degree() - inf];
    let p: Vec<Complex64> =
        scaled_floats(finite_coeffs).into_iter().map(|c| Complex64::new(c, 0.0)).collect();
    let d = finite_coeffs.len() - 1;
    let mut out: Vec<RootBall> = Vec::with_capacity(d);
    for mut z in aberth(&p) {
        let mut radius = inclusion_radius(&p, z);
        for _ in 0..4 {
            let Some(ratio) = exact_newton_ratio(finite_coeffs, z) else { break };
            radius = radius.min(d as f64 * ratio.norm() * (1.0 + 1e-12));
            let next = z - ratio;
            if next == z || !next.is_finite() {
                break;
            }
            if let Some(r) = exact_newton_ratio(finite_coeffs, next) {
                if r.norm() < ratio.norm() {
                    z = next;
                    radius = d as f64 * r.norm() * (1.0 + 1e-12);
                    continue;
                }
            }
            break;
        }
        out.push(RootBall { center: SpherePoint::Finite(z), radius });
    }
    let disjoint = |balls: &[RootBall], i: usize| {
        let zi = balls[i].center.finite().unwrap();
        balls.iter().enumerate().all(|(j, b)| {
            j == i || (zi - b.center.finite().unwrap()).norm() > balls[i].radius + b.radius
        })
    };
    for i in 0..out.len() {
        if !disjoint(&out, i) {
            return Err(Error::PrecisionExhausted(format!(
                "inclusion disk around {} overlaps another at {digits} digits",
                out[i].center
            )));
        }
    }
    // an isolating disk of a real polynomial that meets the real axis holds a real root
    for i in 0..out.len() {
        let z = out[i].center.finite().unwrap();
        if z.im != 0.0 && z.im.abs() <= out[i].radius {
            let saved = out[i];
            out[i] = RootBall {
                center: SpherePoint::Finite(Complex64::new(z.re, 0.0)),
                radius: saved.radius + z.im.abs(),
            };
            if !disjoint(&out, i) {
                out[i] = saved;
            }
        }
    }
    out.sort_by(|a, b| {
        let (za, zb) = (a.center.finite().unwrap(), b.center.finite().unwrap());
        za.re.total_cmp(&zb.re).then(za.im.total_cmp(&zb.im))
    });
    if inf == 1 {
        out.push(RootBall { center: SpherePoint::Infinity, radius: 0.0 });
    }
    Ok(out)
}
