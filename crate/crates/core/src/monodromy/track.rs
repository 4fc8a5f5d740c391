//! Continuation of the fiber `Φ^{-1}(t)` along a closed path in the target.

use num_complex::Complex64;
use num_traits::Zero;

use super::perm::Permutation;
use super::roots::{eval_with_derivative, scaled_floats};
use crate::error::{Error, Result};
use crate::map::RationalMap;

/// Magnitude beyond which a tracked point moves to the reciprocal chart.
pub const CHART_SWITCH: f64 = 1e6;

const NEWTON_TOL: f64 = 1e-12;

/// One piece of a path in the target plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathPiece {
    Segment { from: Complex64, to: Complex64 },
    /// A full counterclockwise turn around `center` starting at angle `start`.
    Circle { center: Complex64, radius: f64, start: f64 },
}

impl PathPiece {
    fn at(&self, s: f64) -> Complex64 {
        match *self {
            // anchored at the nearer endpoint to keep small targets accurate
            PathPiece::Segment { from, to } if s <= 0.5 => from + (to - from) * s,
            PathPiece::Segment { from, to } => to + (from - to) * (1.0 - s),
            PathPiece::Circle { center, radius, start } => {
                center + Complex64::from_polar(radius, start + std::f64::consts::TAU * s)
            }
        }
    }
}

/// A closed path given as consecutive pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopPath {
    pub pieces: Vec<PathPiece>,
}

impl LoopPath {
    /// Segment to the circle of radius `radius` around `center`, one turn, and back.
    /// The segments are split at distances `radius * 2^k` from the center so
    /// that every piece is at most twice as long as its distance to the center.
    pub fn lollipop(base: Complex64, center: Complex64, radius: f64) -> Self {
        let dist = (base - center).norm();
        let dir = (base - center) / dist;
        let mut stops = vec![center + dir * radius];
        let mut k = 2.0 * radius;
        while 2.0 * k < dist {
            stops.push(center + dir * k);
            k *= 2.0;
        }
        stops.push(base);
        let mut pieces: Vec<PathPiece> =
            stops.windows(2).rev().map(|w| PathPiece::Segment { from: w[1], to: w[0] }).collect();
        pieces.push(PathPiece::Circle { center, radius, start: dir.arg() });
        pieces.extend(stops.windows(2).map(|w| PathPiece::Segment { from: w[0], to: w[1] }));
        LoopPath { pieces }
    }

    pub fn start(&self) -> Complex64 {
        self.pieces[0].at(0.0)
    }
}

/// Step-control limits derived from the requested precision.
#[derive(Clone, Copy, Debug)]
pub struct TrackConfig {
    pub digits: u32,
    pub min_step: f64,
    pub max_steps: usize,
}

impl TrackConfig {
    pub fn from_digits(digits: u32) -> Self {
        let min_step = 2f64.powf(-(12.0 + digits as f64 / 4.0)).max(1e-15);
        TrackConfig { digits, min_step, max_steps: 4000 + 200 * digits as usize }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Chart {
    Affine,
    Reciprocal,
}

#[derive(Clone, Copy, Debug)]
struct Tracked {
    chart: Chart,
    z: Complex64,
}

impl Tracked {
    fn from_affine(z: Complex64) -> Self {
        Tracked { chart: Chart::Affine, z }.normalized()
    }

    fn normalized(self) -> Self {
        if self.z.norm() > CHART_SWITCH {
            let other = match self.chart {
                Chart::Affine => Chart::Reciprocal,
                Chart::Reciprocal => Chart::Affine,
            };
            Tracked { chart: other, z: self.z.inv() }
        } else {
            self
        }
    }

    /// Homogeneous coordinates `(x, y)`.
    fn homogeneous(&self) -> (Complex64, Complex64) {
        match self.chart {
            Chart::Affine => (self.z, Complex64::new(1.0, 0.0)),
            Chart::Reciprocal => (Complex64::new(1.0, 0.0), self.z),
        }
    }
}

/// Chordal distance on the Riemann sphere.
fn chordal(a: &Tracked, b: &Tracked) -> f64 {
    let (x1, y1) = a.homogeneous();
    let (x2, y2) = b.homogeneous();
    let num = (x1 * y2 - x2 * y1).norm();
    let den = ((x1.norm_sqr() + y1.norm_sqr()) * (x2.norm_sqr() + y2.norm_sqr())).sqrt();
    num / den
}

fn min_pairwise(points: &[Tracked]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in 0..i {
            best = best.min(chordal(&points[i], &points[j]));
        }
    }
    best
}

/// The pencil `F - t G` in both affine charts, with float coefficients.
#[derive(Clone, Debug)]
pub(crate) struct Pencil {
    f: [Vec<Complex64>; 2],
    g: [Vec<Complex64>; 2],
}

impl Pencil {
    pub(crate) fn new(map: &RationalMap) -> Self {
        let mut all: Vec<_> = map.num().coeffs().to_vec();
        all.extend_from_slice(map.den().coeffs());
        let floats: Vec<Complex64> =
            scaled_floats(&all).into_iter().map(|c| Complex64::new(c, 0.0)).collect();
        let (f, g) = floats.split_at(floats.len() / 2);
        let rev = |v: &[Complex64]| v.iter().rev().copied().collect::<Vec<_>>();
        Pencil { f: [f.to_vec(), rev(f)], g: [g.to_vec(), rev(g)] }
    }

    fn idx(chart: Chart) -> usize {
        match chart {
            Chart::Affine => 0,
            Chart::Reciprocal => 1,
        }
    }

    /// `(H, dH/dz, dz/dt)` for `H = f - t g` in the point's chart.
    fn local(&self, p: &Tracked, t: Complex64) -> (Complex64, Complex64, Complex64) {
        let i = Self::idx(p.chart);
        let (fv, fd) = eval_with_derivative(&self.f[i], p.z);
        let (gv, gd) = eval_with_derivative(&self.g[i], p.z);
        let h = fv - t * gv;
        let hd = fd - t * gd;
        (h, hd, gv / hd)
    }

    /// Bound on the rounding error in evaluating `H` at `p`.
    fn rounding_level(&self, p: &Tracked, t: Complex64) -> f64 {
        let i = Self::idx(p.chart);
        let r = p.z.norm();
        let mag = |c: &[Complex64]| c.iter().rev().fold(0.0, |acc, a| acc * r + a.norm());
        let d = self.f[i].len() as f64;
        4.0 * d * f64::EPSILON * (mag(&self.f[i]) + t.norm() * mag(&self.g[i]))
    }

    fn newton(&self, mut p: Tracked, t: Complex64) -> Option<Tracked> {
        for _ in 0..8 {
            let (h, hd, _) = self.local(&p, t);
            if h.norm() <= self.rounding_level(&p, t) {
                return Some(p.normalized());
            }
            if hd.is_zero() {
                return None;
            }
            let delta = h / hd;
            if !delta.is_finite() {
                return None;
            }
            p.z -= delta;
            if delta.norm() <= NEWTON_TOL * (1.0 + p.z.norm()) {
                return Some(p.normalized());
            }
        }
        None
    }

    /// `Φ(∞)` as homogeneous coordinates `(F_n : G_n)`.
    pub(crate) fn value_at_infinity(&self) -> (Complex64, Complex64) {
        (*self.f[0].last().expect("nonempty"), *self.g[0].last().expect("nonempty"))
    }

    /// Coefficients of `F(x, 1) - t G(x, 1)`.
    pub(crate) fn fiber_poly(&self, t: Complex64) -> Vec<Complex64> {
        self.f[0].iter().zip(&self.g[0]).map(|(a, b)| a - t * b).collect()
    }

    /// Polishes approximate fiber points over `t` (affine coordinates).
    pub(crate) fn polish(&self, points: &[Complex64], t: Complex64) -> Option<Vec<Complex64>> {
        points
            .iter()
            .map(|&z| {
                let p = self.newton(Tracked::from_affine(z), t)?;
                let (x, y) = p.homogeneous();
                Some(x / y)
            })
            .collect()
    }
}

/// One continuation step from `t0` to `t1`; `None` rejects the step.
fn step(pencil: &Pencil, fiber: &[Tracked], t0: Complex64, t1: Complex64) -> Option<Vec<Tracked>> {
    let dt = t1 - t0;
    let mut predicted = Vec::with_capacity(fiber.len());
    let mut corrected = Vec::with_capacity(fiber.len());
    for p in fiber {
        let (_, _, dzdt) = pencil.local(p, t0);
        let guess = Tracked { chart: p.chart, z: p.z + dzdt * dt };
        if !guess.z.is_finite() {
            return None;
        }
        corrected.push(pencil.newton(guess, t1)?);
        predicted.push(guess);
    }
    let spacing = min_pairwise(&corrected);
    let before = min_pairwise(fiber);
    for i in 0..fiber.len() {
        if chordal(&predicted[i], &corrected[i]) >= spacing / 4.0 {
            return None;
        }
        if chordal(&fiber[i], &corrected[i]) >= spacing.min(before) / 2.0 {
            return None;
        }
    }
    Some(corrected)
}

/// Continues the fiber over the loop's base point around the loop and reads
/// off the induced permutation: point `i` ends at point `σ(i)`.
pub fn track_loop(
    map: &RationalMap,
    path: &LoopPath,
    start_fiber: &[Complex64],
    cfg: &TrackConfig,
) -> Result<Permutation> {
    let pencil = Pencil::new(map);
    track_with(&pencil, path, start_fiber, cfg)
}

pub(crate) fn track_with(
    pencil: &Pencil,
    path: &LoopPath,
    start_fiber: &[Complex64],
    cfg: &TrackConfig,
) -> Result<Permutation> {
    let lost = |reason: String| Error::TrackingLost { digits: cfg.digits, reason };
    let start: Vec<Tracked> = start_fiber.iter().map(|&z| Tracked::from_affine(z)).collect();
    let mut fiber = start.clone();
    let mut steps = 0usize;
    for piece in &path.pieces {
        let mut s = 0.0f64;
        let mut h = 1.0 / 64.0;
        let mut streak = 0;
        while s < 1.0 {
            let next = (s + h).min(1.0);
            match step(pencil, &fiber, piece.at(s), piece.at(next)) {
                Some(f) => {
                    fiber = f;
                    s = next;
                    streak += 1;
                    if streak >= 3 {
                        h = (h * 2.0).min(0.125);
                        streak = 0;
                    }
                }
                None => {
                    h /= 2.0;
                    streak = 0;
                    if h < cfg.min_step {
                        return Err(lost(format!("step size underflow near t = {}", piece.at(s))));
                    }
                }
            }
            steps += 1;
            if steps > cfg.max_steps {
                return Err(lost("step budget exhausted".into()));
            }
        }
    }
    let spacing = min_pairwise(&start);
    let mut images = Vec::with_capacity(start.len());
    for p in &fiber {
        let (j, d) = start
            .iter()
            .enumerate()
            .map(|(j, q)| (j, chordal(p, q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty fiber");
        if d >= spacing / 4.0 {
            return Err(lost("endpoint does not match the base fiber".into()));
        }
        images.push(j);
    }
    Permutation::new(images).ok_or_else(|| lost("endpoints are not a permutation of the base fiber".into()))
}
