//! Orbits, postcritical sets, the PCF decision and the finitely critical
//! bad-prime set.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{primes, BinForm, PadicContext, Rat};
use crate::error::{Error, Result};
use crate::map::{ProjPoint, RationalMap, DEFAULT_DEGREE_CAP};
use crate::ramification::{
    branch_form, cgr_test, critical_form, form_from_samples, PointSetForm, Role,
};

pub const DEFAULT_MAXDEPTH: usize = 64;
pub const DEFAULT_MAXITER: usize = 2000;
/// Coefficient size beyond which form stabilization gives up with `Unknown`.
pub const DEFAULT_MAX_FORM_BITS: u64 = 1 << 14;
pub const MAX_REGRESSION_ITERATES: usize = 5;
/// Points kept past the certified escape point in an orbit record.
pub const ESCAPE_TAIL: usize = 2;

/// Height bound certifying escape: with `H` the naive height of `P`,
/// `H(Φ(P)) ≥ H(P)^n / c`, so `H(P)^(n-1) > c` forces strictly increasing heights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeBound {
    pub degree: usize,
    pub constant: BigInt,
}

impl EscapeBound {
    /// `log(c) / (n - 1)`: points of larger log-height escape.
    pub fn log_threshold(&self) -> f64 {
        crate::map::point::big_log(&self.constant) / (self.degree - 1) as f64
    }

    /// Exact form of `log H > log_threshold`.
    pub fn certifies(&self, height: &BigInt) -> bool {
        num_traits::pow(height.clone(), self.degree - 1) > self.constant
    }
}

/// Solves `M v = rhs` over the rationals; `M` is square and invertible.
fn solve(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Vec<BigRational> {
    let k = rhs.len();
    for col in 0..k {
        let piv = (col..k).find(|&r| !m[r][col].is_zero()).expect("invertible system");
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].recip();
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] * &inv;
                for c in col..k {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
                let t = &f * &rhs[col];
                rhs[r] -= t;
            }
        }
    }
    (0..k).map(|i| &rhs[i] / &m[i][i]).collect()
}

/// Escape bound from the Bézout identities `A_k F + B_k G = R x^(2n-1)` and
/// `... = R y^(2n-1)` with `A_k, B_k` of degree `n - 1`; `c` is the larger
/// coefficient 1-norm of `(A_k, B_k)`.
pub fn escape_bound(map: &RationalMap) -> Result<EscapeBound> {
    let n = map.degree();
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    let (f, g) = (map.num(), map.den());
    let res = map.resultant().abs();
    let size = 2 * n;
    let mut m = vec![vec![BigRational::zero(); size]; size];
    for j in 0..n {
        for i in 0..=n {
            m[i + j][j] = BigRational::from(f.coeff(i).clone());
            m[i + j][n + j] = BigRational::from(g.coeff(i).clone());
        }
    }
    let mut constant = BigInt::zero();
    for target in [size - 1, 0] {
        let mut rhs = vec![BigRational::zero(); size];
        rhs[target] = BigRational::from(res.clone());
        let v = solve(m.clone(), rhs);
        let norm: BigInt = v
            .iter()
            .map(|c| {
                assert!(c.is_integer(), "adjugate solution is integral");
                c.to_integer().abs()
            })
            .sum();
        constant = constant.max(norm);
    }
    Ok(EscapeBound { degree: n, constant })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitOutcome {
    /// `points[tail + period] == points[tail]`.
    Periodic { tail: usize, period: usize },
    /// `points[index]` has height past the escape bound.
    Escaped { index: usize, height: BigInt, bound: BigInt },
    Truncated { maxiter: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub start: ProjPoint,
    pub points: Vec<ProjPoint>,
    pub outcome: OrbitOutcome,
}

impl OrbitRecord {
    pub fn escaped(&self) -> bool {
        matches!(self.outcome, OrbitOutcome::Escaped { .. })
    }
}

/// Exact forward orbit of `start`, stopped at the first repeat, at certified
/// escape (plus [`ESCAPE_TAIL`] further points), or after `maxiter` steps.
pub fn orbit(map: &RationalMap, start: &ProjPoint, maxiter: usize) -> Result<OrbitRecord> {
    let bound = escape_bound(map)?;
    Ok(orbit_with(map, start, maxiter, &bound))
}

fn orbit_with(map: &RationalMap, start: &ProjPoint, maxiter: usize, bound: &EscapeBound) -> OrbitRecord {
    let mut seen: HashMap<ProjPoint, usize> = HashMap::new();
    let mut points = vec![start.clone()];
    let mut current = start.clone();
    loop {
        let index = points.len() - 1;
        if let Some(&tail) = seen.get(&current) {
            points.pop();
            return OrbitRecord {
                start: start.clone(),
                points,
                outcome: OrbitOutcome::Periodic { tail, period: index - tail },
            };
        }
        seen.insert(current.clone(), index);
        let height = current.height();
        if bound.certifies(&height) {
            for _ in 0..ESCAPE_TAIL {
                current = map.evaluate(&current);
                points.push(current.clone());
            }
            return OrbitRecord {
                start: start.clone(),
                points,
                outcome: OrbitOutcome::Escaped { index, height, bound: bound.constant.clone() },
            };
        }
        if index >= maxiter {
            return OrbitRecord { start: start.clone(), points, outcome: OrbitOutcome::Truncated { maxiter } };
        }
        current = map.evaluate(&current);
        points.push(current.clone());
    }
}

/// The image set `Φ(S)`, from `Res_(x,y)(S, u F - t G)` as a form in `(t : u)`.
pub fn pushforward_form(map: &RationalMap, set: &PointSetForm) -> Result<PointSetForm> {
    let s = set.form();
    let image = form_from_samples(s.degree(), |t| {
        let member = map.num().sub(&map.den().scale(t)).expect("equal degrees");
        s.resultant(&member).expect("nonzero forms")
    });
    PointSetForm::new(&image, Role::Target)
}

fn as_source(set: &PointSetForm) -> Result<PointSetForm> {
    PointSetForm::new(set.form(), Role::Source)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PcfVerdict {
    /// The postcritical set `∪_{i≥1} Φ^i(R_Φ)`, stable after `depth` pushforwards.
    Pcf { postcritical: PointSetForm, depth: usize },
    NotPcf { witness: OrbitRecord },
    Unknown { depth: usize },
}

impl PcfVerdict {
    pub fn is_pcf(&self) -> bool {
        matches!(self, PcfVerdict::Pcf { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            PcfVerdict::Pcf { .. } => "pcf",
            PcfVerdict::NotPcf { .. } => "not-pcf",
            PcfVerdict::Unknown { .. } => "unknown",
        }
    }
}

impl fmt::Display for PcfVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PcfVerdict::Pcf { postcritical, depth } => {
                write!(f, "PCF, postcritical form {postcritical} (stable at depth {depth})")
            }
            PcfVerdict::NotPcf { witness } => {
                write!(f, "not PCF, orbit of {} escapes", witness.start)
            }
            PcfVerdict::Unknown { depth } => write!(f, "unknown after depth {depth}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcfOptions {
    pub maxdepth: usize,
    pub maxiter: usize,
    pub max_form_bits: u64,
}

impl Default for PcfOptions {
    fn default() -> Self {
        PcfOptions { maxdepth: DEFAULT_MAXDEPTH, maxiter: DEFAULT_MAXITER, max_form_bits: DEFAULT_MAX_FORM_BITS }
    }
}

pub fn pcf_decide(map: &RationalMap, maxdepth: usize) -> Result<PcfVerdict> {
    pcf_decide_with(map, &PcfOptions { maxdepth, ..PcfOptions::default() })
}

/// Escape of a rational critical point or branch value gives `NotPcf`;
/// otherwise layers `Φ^k(R_Φ)` are added to the postcritical form until a new
/// layer is already contained in it.
pub fn pcf_decide_with(map: &RationalMap, opts: &PcfOptions) -> Result<PcfVerdict> {
    let bound = escape_bound(map)?;
    let critical = critical_form(map)?;
    let branch = branch_form(map)?;
    for seed in critical.rational_points().iter().chain(branch.rational_points().iter()) {
        let record = orbit_with(map, seed, opts.maxiter, &bound);
        if record.escaped() {
            return Ok(PcfVerdict::NotPcf { witness: record });
        }
    }
    let mut post = as_source(&branch)?;
    let mut layer = post.clone();
    for depth in 1..=opts.maxdepth {
        let next = as_source(&pushforward_form(map, &layer)?)?;
        if post.contains_set(&next) {
            return Ok(PcfVerdict::Pcf { postcritical: post, depth });
        }
        if next.form().max_bits() > opts.max_form_bits {
            return Ok(PcfVerdict::Unknown { depth });
        }
        post = post.union(&next)?;
        layer = next;
    }
    Ok(PcfVerdict::Unknown { depth: opts.maxdepth })
}

/// `x^2 + c` as a map.
pub fn quadratic_map(c: &Rat) -> RationalMap {
    let (a, b) = (c.numer().clone(), c.denom().clone());
    let num = BinForm::new(vec![a, BigInt::zero(), b.clone()]).expect("nonzero");
    let den = BinForm::new(vec![b, BigInt::zero(), BigInt::zero()]).expect("nonzero");
    RationalMap::from_forms(num, den).expect("x^2 + c has degree 2")
}

/// PCF decision for `x^2 + c`: only `c ∈ {0, -1, -2}` is PCF, and any other `c`
/// comes with the escaping orbit of `0` as witness.
pub fn classify_quadratic(c: &Rat) -> Result<PcfVerdict> {
    let map = quadratic_map(c);
    let special = c.is_integer() && (-2..=0).contains(&c.to_integer().to_i64().unwrap_or(1));
    if special {
        return pcf_decide(&map, DEFAULT_MAXDEPTH);
    }
    let record = orbit(&map, &ProjPoint::from_int(0), DEFAULT_MAXITER)?;
    if record.escaped() {
        Ok(PcfVerdict::NotPcf { witness: record })
    } else {
        Err(Error::Consistency(format!("orbit of 0 under x^2 + {c} did not escape")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitelyCriticalReport {
    pub pcf: PcfVerdict,
    pub bad_primes: Vec<u64>,
    /// Number of iterates checked by [`iterates_cgr_regression`], 0 if not run.
    pub checked_iterates: usize,
}

fn push_primes(out: &mut BTreeSet<u64>, n: &BigInt) -> Result<()> {
    for q in primes::prime_divisors(n) {
        out.insert(q.to_u64().ok_or_else(|| Error::Precondition(format!("prime {q} exceeds 64 bits")))?);
    }
    Ok(())
}

/// Primes dividing the resultant, primes up to the degree, and primes where two
/// points of the postcritical set together with the critical points collide.
pub fn bad_prime_set(map: &RationalMap, verdict: &PcfVerdict) -> Result<FinitelyCriticalReport> {
    let PcfVerdict::Pcf { postcritical, .. } = verdict else {
        return Err(Error::Precondition(format!("bad prime set needs a PCF map, got {}", verdict.label())));
    };
    let mut s = BTreeSet::new();
    push_primes(&mut s, &map.resultant())?;
    s.extend(primes::primes_up_to(map.degree() as u64));
    let all = postcritical.union(&critical_form(map)?)?;
    push_primes(&mut s, &all.discriminant())?;
    Ok(FinitelyCriticalReport { pcf: verdict.clone(), bad_primes: s.into_iter().collect(), checked_iterates: 0 })
}

/// Checks critically good reduction of `Φ^k` for `k ≤ iterates` at each prime
/// outside the report's bad set.
pub fn iterates_cgr_regression(
    map: &RationalMap,
    report: &mut FinitelyCriticalReport,
    iterates: usize,
    primes: &[u64],
) -> Result<bool> {
    if iterates > MAX_REGRESSION_ITERATES {
        return Err(Error::Precondition(format!(
            "at most {MAX_REGRESSION_ITERATES} iterates, got {iterates}"
        )));
    }
    if let Some(p) = primes.iter().find(|p| report.bad_primes.contains(p)) {
        return Err(Error::Precondition(format!("prime {p} is in the bad set")));
    }
    let ctxs: Vec<PadicContext> = primes.iter().map(|&p| PadicContext::new(p)).collect::<Result<_>>()?;
    let mut ok = true;
    for k in 1..=iterates {
        let it = map.iterate_capped(k, DEFAULT_DEGREE_CAP)?;
        for ctx in &ctxs {
            ok &= cgr_test(&it, ctx)?;
        }
    }
    report.checked_iterates = iterates;
    Ok(ok)
}
