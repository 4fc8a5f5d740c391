//! Monodromy of a rational map viewed as a branched cover of the sphere.
//!
//! The fiber over a base point is continued numerically around one loop per
//! finite branch value; the loop around infinity follows from the product
//! relation. Every numerical result is cross-checked against exact data
//! (fiber profiles at rational branch values, Riemann–Hurwitz, transitivity)
//! and the computation is repeated at a finer step budget if a check fails.

mod perm;
mod roots;
mod track;

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;

pub use perm::{group_order, is_transitive, orbit, Permutation};
pub use roots::{complex_roots, RootBall, SpherePoint};
pub use track::{track_loop, LoopPath, PathPiece, TrackConfig, CHART_SWITCH};

use crate::error::{Error, Result};
use crate::map::{ProjPoint, RationalMap};
use crate::ramification::{branch_form, rational_fiber_profile, BranchValue, FiberProfile};
use track::{track_with, Pencil};

/// Largest degree accepted by [`monodromy`] by default.
pub const DEFAULT_MONODROMY_CAP: usize = 12;

/// Working precision used when none is given.
pub const DEFAULT_DIGITS: u32 = 50;

/// Precision ceiling for automatic refinement.
pub const MAX_DIGITS: u32 = 800;

/// A branch value with its approximation and, when rational, its exact value.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchPoint {
    pub value: SpherePoint,
    pub radius: f64,
    pub exact: Option<ProjPoint>,
}

/// Generators of the monodromy group, one per branch value, in loop order.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyData {
    pub degree: usize,
    pub digits: u32,
    pub base_point: Complex64,
    pub base_fiber: Vec<Complex64>,
    pub branch_points: Vec<BranchPoint>,
    pub generators: Vec<Permutation>,
    pub order: BigInt,
    pub cycle_types: Vec<Vec<usize>>,
}

impl MonodromyData {
    /// `σ_1 σ_2 ... σ_k` applied left to right.
    pub fn ordered_product(&self) -> Permutation {
        self.generators
            .iter()
            .fold(Permutation::identity(self.degree), |acc, g| acc.then(g))
    }

    pub fn is_transitive(&self) -> bool {
        is_transitive(&self.generators, self.degree)
    }

    /// `Σ (e - 1)` over all branch values.
    pub fn total_ramification(&self) -> usize {
        self.cycle_types.iter().flatten().map(|e| e - 1).sum()
    }

    /// Ramification profile per branch value; irrational ones are labelled
    /// by their index in `branch_points`.
    pub fn fiber_profiles(&self) -> Vec<FiberProfile> {
        self.branch_points
            .iter()
            .zip(&self.cycle_types)
            .enumerate()
            .map(|(i, (b, c))| {
                let label = match &b.exact {
                    Some(p) => BranchValue::Rational(p.clone()),
                    None => BranchValue::Root(i),
                };
                FiberProfile::new(label, c.clone())
            })
            .collect()
    }
}

impl fmt::Display for MonodromyData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "monodromy group of order {} on {} sheets", self.order, self.degree)?;
        for (b, g) in self.branch_points.iter().zip(&self.generators) {
            let label = match &b.exact {
                Some(p) => p.to_string(),
                None => b.value.to_string(),
            };
            writeln!(f, "  {label}: {g}")?;
        }
        Ok(())
    }
}

fn sphere_distance(a: SpherePoint, b: SpherePoint) -> f64 {
    match (a, b) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
        (SpherePoint::Finite(z), SpherePoint::Infinity)
        | (SpherePoint::Infinity, SpherePoint::Finite(z)) => 1.0 / (1.0 + z.norm_sqr()).sqrt(),
        (SpherePoint::Finite(z), SpherePoint::Finite(w)) => {
            (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
        }
    }
}

fn rational_as_sphere(p: &ProjPoint) -> SpherePoint {
    use num_traits::ToPrimitive;
    match p.to_rat() {
        None => SpherePoint::Infinity,
        Some(q) => SpherePoint::Finite(Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)),
    }
}

/// Distance from `c` to the segment `[a, b]`.
fn segment_distance(c: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let s = ((c - a) * ab.conj()).re / ab.norm_sqr();
    (c - (a + ab * s.clamp(0.0, 1.0))).norm()
}

struct LoopSystem {
    base: Complex64,
    /// Circle radius per branch value: a third of the distance to its nearest neighbour.
    radii: Vec<f64>,
    /// Finite branch values sorted by direction as seen from the base point.
    order: Vec<usize>,
}

/// Picks a base point on the circle `|t| = 1 + 2 max |c|` whose straight
/// segments to the branch values keep clear of the other branch values.
/// A segment may cut another loop's circle; that does not change the loop's
/// homotopy class, so the clearance only serves the step control.
fn loop_system(points: &[Complex64], pencil: &Pencil) -> Result<LoopSystem> {
    let max = points.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let big = 1.0 + 2.0 * max;
    let radii: Vec<f64> = points
        .iter()
        .enumerate()
        .map(|(i, c)| {
            points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, d)| (c - d).norm() / 3.0)
                .fold(big / 3.0, f64::min)
        })
        .collect();
    let mut best: Option<(f64, Complex64)> = None;
    for k in 0..256 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let theta = sign * 0.0123 * ((k + 1) / 2) as f64;
        let base = Complex64::from_polar(big, theta);
        // the point at infinity must not lie over the base point
        let (a, b) = pencil.value_at_infinity();
        if (a - base * b).norm() <= 1e-9 * (a.norm() + base.norm() * b.norm()) {
            continue;
        }
        let mut clearance = f64::INFINITY;
        for (i, &c) in points.iter().enumerate() {
            for (j, &other) in points.iter().enumerate() {
                if i != j {
                    clearance = clearance.min(segment_distance(other, base, c) / radii[j]);
                }
            }
        }
        if best.is_none_or(|(c, _)| clearance > c) {
            best = Some((clearance, base));
        }
        if clearance >= 1.0 {
            break;
        }
    }
    let base = match best {
        Some((c, b)) if c >= 0.02 => b,
        _ => return Err(Error::Precondition("no admissible base point".into())),
    };
    let mut order: Vec<usize> = (0..points.len()).collect();
    // arg((c - b) / -b) = arg(1 - c/b), written to stay accurate when |c| << |b|
    let angle = |c: Complex64| {
        let w = c / base;
        Complex64::new(1.0 - w.re, -w.im).arg()
    };
    order.sort_by(|&a, &b| angle(points[a]).total_cmp(&angle(points[b])));
    Ok(LoopSystem { base, radii, order })
}

fn attempt(map: &RationalMap, digits: u32) -> Result<MonodromyData> {
    let n = map.degree();
    let branch = branch_form(map)?;
    let balls = complex_roots(branch.form(), digits)?;
    let exact: Vec<ProjPoint> = branch.rational_points();
    let pencil = Pencil::new(map);

    let finite: Vec<(Complex64, f64)> = balls
        .iter()
        .filter_map(|b| b.center.finite().map(|z| (z, b.radius)))
        .collect();
    let has_infinity = balls.iter().any(|b| b.center == SpherePoint::Infinity);
    let centers: Vec<Complex64> = finite.iter().map(|p| p.0).collect();
    let system = loop_system(&centers, &pencil)?;

    let approx = roots::aberth(&pencil.fiber_poly(system.base));
    let fiber = pencil.polish(&approx, system.base).ok_or_else(|| Error::TrackingLost {
        digits,
        reason: "base fiber did not converge".into(),
    })?;
    if fiber.len() != n {
        return Err(Error::TrackingLost { digits, reason: "base fiber is incomplete".into() });
    }

    let cfg = TrackConfig::from_digits(digits);
    let loops: Vec<LoopPath> = system
        .order
        .iter()
        .map(|&i| LoopPath::lollipop(system.base, centers[i], system.radii[i]))
        .collect();
    let tracked: Vec<Result<Permutation>> = std::thread::scope(|s| {
        let handles: Vec<_> = loops
            .iter()
            .map(|path| {
                let (pencil, fiber, cfg) = (&pencil, &fiber, &cfg);
                s.spawn(move || track_with(pencil, path, fiber, cfg))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("tracking thread panicked")).collect()
    });
    let mut generators = tracked.into_iter().collect::<Result<Vec<_>>>()?;

    let mut branch_points: Vec<BranchPoint> = system
        .order
        .iter()
        .map(|&i| BranchPoint {
            value: SpherePoint::Finite(finite[i].0),
            radius: finite[i].1,
            exact: None,
        })
        .collect();
    let product = generators.iter().fold(Permutation::identity(n), |acc, g| acc.then(g));
    let at_infinity = product.inverse();
    if has_infinity {
        generators.push(at_infinity);
        branch_points.push(BranchPoint { value: SpherePoint::Infinity, radius: 0.0, exact: None });
    } else if !at_infinity.is_identity() {
        return Err(Error::TrackingLost {
            digits,
            reason: "loop product is not trivial around an unbranched infinity".into(),
        });
    }

    for p in &exact {
        let target = rational_as_sphere(p);
        let (idx, _) = branch_points
            .iter()
            .enumerate()
            .map(|(i, b)| (i, sphere_distance(b.value, target)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::Consistency("rational branch value without approximation".into()))?;
        branch_points[idx].exact = Some(p.clone());
    }

    let cycle_types: Vec<Vec<usize>> = generators.iter().map(|g| g.cycle_type()).collect();
    let order = group_order(&generators);
    let data = MonodromyData {
        degree: n,
        digits,
        base_point: system.base,
        base_fiber: fiber,
        branch_points,
        generators,
        order,
        cycle_types,
    };
    verify(map, &data)?;
    Ok(data)
}

/// Exact consistency checks; failures are reported as lost tracking so the
/// caller retries with a finer step budget.
fn verify(map: &RationalMap, data: &MonodromyData) -> Result<()> {
    let lost = |reason: String| Error::TrackingLost { digits: data.digits, reason };
    let n = data.degree;
    if !data.ordered_product().is_identity() {
        return Err(lost("product of generators is not the identity".into()));
    }
    if !data.is_transitive() {
        return Err(lost("generated group is not transitive".into()));
    }
    if data.total_ramification() != 2 * n - 2 {
        return Err(lost(format!(
            "total ramification {} differs from {}",
            data.total_ramification(),
            2 * n - 2
        )));
    }
    for (b, cycles) in data.branch_points.iter().zip(&data.cycle_types) {
        if cycles.len() == n {
            return Err(lost(format!("trivial generator at branch value {}", b.value)));
        }
        if let Some(p) = &b.exact {
            let profile = rational_fiber_profile(map, p);
            if &profile.multiplicities != cycles {
                return Err(lost(format!(
                    "cycle type {cycles:?} at {p} disagrees with fiber profile {:?}",
                    profile.multiplicities
                )));
            }
        }
    }
    Ok(())
}

/// Monodromy group of `map` with the default degree cap.
pub fn monodromy(map: &RationalMap, digits: u32) -> Result<MonodromyData> {
    monodromy_capped(map, digits, DEFAULT_MONODROMY_CAP)
}

/// Monodromy group, doubling the precision after a failed attempt until
/// [`MAX_DIGITS`] is exceeded.
pub fn monodromy_capped(map: &RationalMap, digits: u32, cap: usize) -> Result<MonodromyData> {
    let n = map.degree();
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    if n > cap {
        return Err(Error::DegreeCap { degree: n, cap });
    }
    let mut digits = digits.max(1);
    loop {
        match attempt(map, digits) {
            Err(Error::TrackingLost { .. }) if digits * 2 <= MAX_DIGITS => digits *= 2,
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(s: &str) -> MonodromyData {
        monodromy(&RationalMap::parse(s).unwrap(), DEFAULT_DIGITS).unwrap()
    }

    #[test]
    fn power_maps_are_cyclic() {
        for n in 2..=7 {
            let m = mono(&format!("x^{n}"));
            assert_eq!(m.order, BigInt::from(n));
            assert_eq!(m.generators.len(), 2);
            assert_eq!(m.cycle_types, vec![vec![n], vec![n]]);
            assert_eq!(m.generators[1], m.generators[0].inverse());
            assert_eq!(m.branch_points[0].exact, Some(ProjPoint::from_int(0)));
            assert_eq!(m.branch_points[1].exact, Some(ProjPoint::infinity()));
        }
    }

    #[test]
    fn chebyshev_cubic() {
        let m = mono("x^3 - 3*x");
        assert_eq!(m.order, BigInt::from(6));
        let by_value: Vec<(ProjPoint, Vec<usize>)> = m
            .branch_points
            .iter()
            .zip(&m.cycle_types)
            .map(|(b, c)| (b.exact.clone().unwrap(), c.clone()))
            .collect();
        assert_eq!(by_value.len(), 3);
        assert!(by_value.contains(&(ProjPoint::from_int(2), vec![2, 1])));
        assert!(by_value.contains(&(ProjPoint::from_int(-2), vec![2, 1])));
        assert!(by_value.contains(&(ProjPoint::infinity(), vec![3])));
        assert_eq!(m.total_ramification(), 4);
        assert!(m.ordered_product().is_identity());
    }

    #[test]
    fn quadratics_have_order_two() {
        for s in ["x^2 + 1", "(x^2 - 3)/(2*x + 1)", "(2*x^2+1)/x", "x^2 - 2"] {
            assert_eq!(mono(s).order, BigInt::from(2), "{s}");
        }
    }

    #[test]
    fn irrational_branch_values() {
        // branch values are irrational; generic quartic has full symmetric group
        let m = mono("x^4 + x + 1");
        assert_eq!(m.order, BigInt::from(24));
        assert_eq!(m.total_ramification(), 6);
        let m = mono("(x^3 + 2)/(x^2 - 5*x + 1)");
        assert_eq!(m.order, BigInt::from(6));
    }

    #[test]
    fn degree_cap() {
        let m = RationalMap::parse("x^13").unwrap();
        assert!(matches!(monodromy(&m, 50), Err(Error::DegreeCap { degree: 13, cap: 12 })));
        assert!(monodromy_capped(&m, 50, 13).is_ok());
        assert!(matches!(
            monodromy(&RationalMap::parse("3*x - 1").unwrap(), 50),
            Err(Error::DegreeTooSmall(1))
        ));
    }

    #[test]
    fn deterministic() {
        let m = RationalMap::parse("(x^3 - x + 1)/(x^2 + 3)").unwrap();
        assert_eq!(monodromy(&m, 50).unwrap(), monodromy(&m, 50).unwrap());
    }
}
