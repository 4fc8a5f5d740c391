//! Per-prime reduction verdicts: the monodromy criterion for potential good
//! reduction, a search for good models, and the combined report.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{primes, BinForm, PadicContext, Rat, Valuation};
use crate::error::{Error, Result};
use crate::map::{Mobius, RationalMap};
use crate::monodromy::{monodromy, MonodromyData, DEFAULT_DIGITS, DEFAULT_MONODROMY_CAP};
use crate::ramification::{
    branch_form, cpt_crosscheck, critical_form, crv_test, BranchValue, FiberProfile,
};

/// Sums of ramification indices over all subsets of a fiber, `0` and `n` included.
pub fn subset_sums(profile: &FiberProfile) -> BTreeSet<usize> {
    let n = profile.degree();
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    for &e in &profile.multiplicities {
        for s in (e..=n).rev() {
            if reachable[s - e] {
                reachable[s] = true;
            }
        }
    }
    (0..=n).filter(|&s| reachable[s]).collect()
}

/// Nonzero values of `Σ_A e(P) - Σ_B e(P)` for `A` in the first fiber and `B` in the second.
pub fn difference_integers(lambda: &FiberProfile, mu: &FiberProfile) -> BTreeSet<i64> {
    let a = subset_sums(lambda);
    let b = subset_sums(mu);
    let mut out = BTreeSet::new();
    for &x in &a {
        for &y in &b {
            let d = x as i64 - y as i64;
            if d != 0 {
                out.insert(d);
            }
        }
    }
    out
}

/// Outcome of the monodromy criterion at one prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    CertifiedPotentialGoodReduction,
    Inconclusive,
    /// The branch values collide modulo `p`, so the criterion does not apply.
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedPotentialGoodReduction => "certified",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

/// Difference integers for one unordered pair of branch values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairResult {
    pub lambda: BranchValue,
    pub mu: BranchValue,
    pub differences: Vec<i64>,
    pub divisible: bool,
}

/// The criterion rule as implemented, kept with every report.
pub const CRITERION_RULE: &str = "certified iff the branch values stay distinct mod p and \
(p does not divide the monodromy order, or some pair of branch values has no nonzero \
difference divisible by p)";

/// The alternative reading of the criterion's conclusion, kept for comparison.
pub const ALTERNATIVE_RULE: &str = "certified iff the branch values stay distinct mod p and \
(p does not divide the monodromy order, or no single nonzero multiple of p is a difference \
for every pair)";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub p: u64,
    pub crv: bool,
    pub group_order: BigInt,
    pub divides_group_order: bool,
    pub pair_results: Vec<PairResult>,
    pub verdict: Verdict,
    /// Verdict under [`ALTERNATIVE_RULE`].
    pub alternative_verdict: Verdict,
}

impl CriterionReport {
    pub fn readings_disagree(&self) -> bool {
        self.verdict != self.alternative_verdict
    }
}

/// Unordered pairs of distinct branch values with their difference sets.
fn pair_results(mono: &MonodromyData, p: u64) -> Vec<PairResult> {
    let profiles = mono.fiber_profiles();
    let mut out = Vec::new();
    for i in 0..profiles.len() {
        for j in i + 1..profiles.len() {
            let diffs: Vec<i64> = difference_integers(&profiles[i], &profiles[j]).into_iter().collect();
            let divisible = diffs.iter().any(|d| d.unsigned_abs() % p == 0);
            out.push(PairResult {
                lambda: profiles[i].branch_value.clone(),
                mu: profiles[j].branch_value.clone(),
                differences: diffs,
                divisible,
            });
        }
    }
    out
}

/// Some nonzero multiple of `p` is a difference for every pair.
fn uniform_multiple(pairs: &[PairResult], p: u64) -> bool {
    let Some(first) = pairs.first() else { return false };
    first
        .differences
        .iter()
        .filter(|d| d.unsigned_abs() % p == 0)
        .any(|d| pairs.iter().all(|pr| pr.differences.contains(d)))
}

/// Evaluates the criterion at `p` from precomputed monodromy data.
pub fn theorem1_verdict(map: &RationalMap, ctx: &PadicContext, mono: &MonodromyData) -> Result<CriterionReport> {
    let p = ctx.p();
    let crv = crv_test(map, ctx)?;
    let divides_group_order = ctx.divides(&mono.order);
    let pairs = pair_results(mono, p);
    let some_pair_free = pairs.iter().any(|pr| !pr.divisible);
    let decide = |escape: bool| {
        if !crv {
            Verdict::NotApplicable
        } else if !divides_group_order || escape {
            Verdict::CertifiedPotentialGoodReduction
        } else {
            Verdict::Inconclusive
        }
    };
    let verdict = decide(some_pair_free);
    let alternative_verdict = decide(!uniform_multiple(&pairs, p));
    Ok(CriterionReport {
        p,
        crv,
        group_order: mono.order.clone(),
        divides_group_order,
        pair_results: pairs,
        verdict,
        alternative_verdict,
    })
}

/// Primes at which the criterion fails to certify: divisors of the branch
/// discriminant, and primes `p ≤ n` dividing the group order for which every
/// pair has a difference divisible by `p`. Larger primes cannot divide any
/// nonzero difference, which lies in `[-n, n]`.
pub fn candidate_bad_primes(map: &RationalMap, mono: &MonodromyData) -> Result<Vec<u64>> {
    let branch = branch_form(map)?;
    let mut out: BTreeSet<u64> = BTreeSet::new();
    if branch.len() > 1 {
        for q in primes::prime_divisors(&branch.discriminant()) {
            out.insert(q.to_u64().ok_or_else(|| {
                Error::Precondition(format!("prime {q} of the branch discriminant exceeds 64 bits"))
            })?);
        }
    }
    for p in primes::primes_up_to(map.degree() as u64) {
        let pairs = pair_results(mono, p);
        if mono.order.is_multiple_of(&BigInt::from(p)) && pairs.iter().all(|pr| pr.divisible) {
            out.insert(p);
        }
    }
    Ok(out.into_iter().collect())
}

/// Limits for [`good_reduction_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Scalings `x -> p^k x` with `|k|` up to this bound.
    pub max_scaling: u32,
    /// Number of translation centers tried.
    pub max_translations: usize,
    /// Translation centers tried before the automatic ones.
    pub extra_translations: Vec<Rat>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_scaling: 4, max_translations: 64, extra_translations: Vec::new() }
    }
}

/// An equivalent model `Φ ∘ A` whose reduction has full degree and is separable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodReductionWitness {
    pub p: u64,
    pub mobius: Mobius,
    pub model: RationalMap,
}

/// `min v(β)` over the finite roots of the form, from its Newton polygon.
fn min_root_valuation(form: &BinForm, ctx: &PadicContext) -> Option<BigRational> {
    let poly = form.dehomogenize();
    let d = poly.degree()?;
    let low = (0..=d).find(|&i| !poly.coeff(i).is_zero())?;
    if low == d {
        return None;
    }
    let vd = ctx.valuation_int(&poly.coeff(d)).finite()?;
    (low..d)
        .filter_map(|i| match ctx.valuation_int(&poly.coeff(i)) {
            Valuation::Finite(vi) => Some(BigRational::new((vi - vd).into(), ((d - i) as i64).into())),
            Valuation::Infinite => None,
        })
        .min()
}

/// The scaling `x -> p^m x` that makes every finite zero and pole of the map
/// integral at `p`, when one is needed.
pub fn integralizing_scaling(map: &RationalMap, ctx: &PadicContext) -> Option<i64> {
    let m = [map.num(), map.den()]
        .into_iter()
        .filter_map(|f| min_root_valuation(f, ctx))
        .min()?;
    if m.is_negative() {
        Some(m.floor().to_integer().to_i64().expect("valuation fits"))
    } else {
        None
    }
}

fn power_of(p: u64, k: i64) -> Rat {
    let base = BigRational::from_integer(BigInt::from(p));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

fn translation_centers(map: &RationalMap, p: u64, bounds: &SearchBounds) -> Result<Vec<Rat>> {
    let mut out: Vec<Rat> = bounds.extra_translations.clone();
    out.push(Rat::zero());
    let forms = [critical_form(map)?, branch_form(map)?];
    for set in &forms {
        for pt in set.rational_points() {
            if let Some(q) = pt.to_rat() {
                out.push(q);
            }
        }
    }
    let small = (p as i64).min(4);
    out.extend((1..small).flat_map(|k| [Rat::from_integer(k.into()), Rat::from_integer((-k).into())]));
    let mut seen = BTreeSet::new();
    out.retain(|q| seen.insert(q.clone()));
    out.truncate(bounds.max_translations.max(1));
    Ok(out)
}

fn has_good_model(map: &RationalMap, ctx: &PadicContext) -> bool {
    map.sgr_test(ctx) && map.reduce(ctx).separable_test()
}

/// Searches `x -> p^k x + β` for a model with good reduction at `p`; `None`
/// means no witness was found within the bounds, not that none exists.
pub fn good_reduction_search(
    map: &RationalMap,
    ctx: &PadicContext,
    bounds: &SearchBounds,
) -> Result<Option<GoodReductionWitness>> {
    let p = ctx.p();
    let k = bounds.max_scaling as i64;
    let mut scalings: Vec<i64> = vec![0];
    if let Some(m) = integralizing_scaling(map, ctx) {
        scalings.push(m);
    }
    for j in 1..=k {
        scalings.extend([j, -j]);
    }
    let mut seen = BTreeSet::new();
    scalings.retain(|s| seen.insert(*s));
    let centers = translation_centers(map, p, bounds)?;
    for beta in &centers {
        for &s in &scalings {
            let a = Mobius::affine(&power_of(p, s), beta)?;
            let model = map.conjugate_source(&a);
            if has_good_model(&model, ctx) {
                return Ok(Some(GoodReductionWitness { p, mobius: a, model }));
            }
        }
    }
    Ok(None)
}

/// Combined conclusion about potential good reduction at one prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PotentialVerdict {
    /// A model over the rationals with good reduction was found.
    GoodReduction,
    /// The criterion certifies potential good reduction; no rational model found.
    PotentialGoodReduction,
    Unknown,
}

impl fmt::Display for PotentialVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PotentialVerdict::GoodReduction => "good-reduction",
            PotentialVerdict::PotentialGoodReduction => "potential-good-reduction",
            PotentialVerdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub p: u64,
    pub sgr: bool,
    pub separable: bool,
    pub crv: bool,
    pub cgr: bool,
    /// Whether the equivalence `cgr ⟺ (sgr ∧ crv)` was checked (it needs a separable reduction).
    pub cpt_checked: bool,
    /// `None` when the degree exceeds the monodromy cap.
    pub criterion: Option<CriterionReport>,
    pub witness: Option<GoodReductionWitness>,
    pub potential: PotentialVerdict,
}

/// Options for [`analyze_with`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub digits: u32,
    pub monodromy_cap: usize,
    pub bounds: SearchBounds,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            digits: DEFAULT_DIGITS,
            monodromy_cap: DEFAULT_MONODROMY_CAP,
            bounds: SearchBounds::default(),
        }
    }
}

/// Reports for each prime in `primes` with default options.
pub fn analyze(map: &RationalMap, primes: &[u64]) -> Result<Vec<ReductionReport>> {
    analyze_with(map, primes, &AnalysisOptions::default())
}

/// Reports for each prime; the monodromy group is computed once and shared.
pub fn analyze_with(map: &RationalMap, primes: &[u64], opts: &AnalysisOptions) -> Result<Vec<ReductionReport>> {
    if map.degree() < 2 {
        return Err(Error::DegreeTooSmall(map.degree()));
    }
    let mono = if map.degree() <= opts.monodromy_cap {
        Some(crate::monodromy::monodromy_capped(map, opts.digits, opts.monodromy_cap)?)
    } else {
        None
    };
    primes
        .iter()
        .map(|&p| report_for_prime(map, &PadicContext::new(p)?, mono.as_ref(), &opts.bounds))
        .collect()
}

/// Report at a single prime given optional monodromy data.
pub fn report_for_prime(
    map: &RationalMap,
    ctx: &PadicContext,
    mono: Option<&MonodromyData>,
    bounds: &SearchBounds,
) -> Result<ReductionReport> {
    let sgr = map.sgr_test(ctx);
    let separable = map.reduce(ctx).separable_test();
    let crv = crv_test(map, ctx)?;
    let cgr = crv && crate::ramification::collision_test(&critical_form(map)?, ctx);
    let cpt_checked = separable;
    if separable {
        let shared = cpt_crosscheck(map, ctx)?;
        if shared != cgr {
            return Err(Error::Consistency(format!("cgr verdicts differ for {map} at {ctx}")));
        }
    }
    let criterion = mono.map(|m| theorem1_verdict(map, ctx, m)).transpose()?;
    let witness = good_reduction_search(map, ctx, bounds)?;
    if sgr && separable && witness.is_none() {
        return Err(Error::Consistency(format!("identity model of {map} not recognized at {ctx}")));
    }
    let potential = if witness.is_some() {
        PotentialVerdict::GoodReduction
    } else if criterion.as_ref().map(|c| c.verdict) == Some(Verdict::CertifiedPotentialGoodReduction) {
        PotentialVerdict::PotentialGoodReduction
    } else {
        PotentialVerdict::Unknown
    };
    Ok(ReductionReport { p: ctx.p(), sgr, separable, crv, cgr, cpt_checked, criterion, witness, potential })
}

/// Convenience: monodromy at the default precision followed by [`candidate_bad_primes`].
pub fn candidate_bad_primes_default(map: &RationalMap) -> Result<Vec<u64>> {
    let mono = monodromy(map, DEFAULT_DIGITS)?;
    candidate_bad_primes(map, &mono)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(m: &[usize]) -> FiberProfile {
        FiberProfile::new(BranchValue::Root(0), m.to_vec())
    }

    fn map(s: &str) -> RationalMap {
        RationalMap::parse(s).unwrap()
    }

    fn ctx(p: u64) -> PadicContext {
        PadicContext::new(p).unwrap()
    }

    fn set<T: Ord + Clone>(v: &[T]) -> BTreeSet<T> {
        v.iter().cloned().collect()
    }

    #[test]
    fn subset_sum_examples() {
        assert_eq!(subset_sums(&profile(&[2, 1])), set(&[0, 1, 2, 3]));
        assert_eq!(subset_sums(&profile(&[3])), set(&[0, 3]));
        assert_eq!(subset_sums(&profile(&[1, 1, 1])), set(&[0, 1, 2, 3]));
        assert_eq!(subset_sums(&profile(&[4, 2])), set(&[0, 2, 4, 6]));
    }

    #[test]
    fn difference_examples() {
        assert_eq!(difference_integers(&profile(&[2, 1]), &profile(&[3])), set(&[-3, -2, -1, 1, 2, 3]));
        assert_eq!(difference_integers(&profile(&[5]), &profile(&[5])), set(&[-5, 5]));
        assert_eq!(difference_integers(&profile(&[1, 1]), &profile(&[2])), set(&[-2, -1, 1, 2]));
    }

    #[test]
    fn chebyshev_cubic_verdicts() {
        let m = map("x^3 - 3*x");
        let mono = monodromy(&m, DEFAULT_DIGITS).unwrap();
        let v = |p| theorem1_verdict(&m, &ctx(p), &mono).unwrap().verdict;
        assert_eq!(v(5), Verdict::CertifiedPotentialGoodReduction);
        assert_eq!(v(3), Verdict::Inconclusive);
        assert_eq!(v(2), Verdict::NotApplicable);
        assert_eq!(candidate_bad_primes(&m, &mono).unwrap(), vec![2, 3]);
    }

    #[test]
    fn power_map_verdicts() {
        for n in 2..=6u64 {
            let m = map(&format!("x^{n}"));
            let mono = monodromy(&m, DEFAULT_DIGITS).unwrap();
            for p in [2u64, 3, 5, 7] {
                let v = theorem1_verdict(&m, &ctx(p), &mono).unwrap().verdict;
                let expected = if n % p == 0 {
                    Verdict::Inconclusive
                } else {
                    Verdict::CertifiedPotentialGoodReduction
                };
                assert_eq!(v, expected, "x^{n} at {p}");
            }
            let bad: Vec<u64> = primes::primes_up_to(n).into_iter().filter(|p| n % p == 0).collect();
            assert_eq!(candidate_bad_primes(&m, &mono).unwrap(), bad);
        }
        let m = map("x^2 - 1");
        assert_eq!(candidate_bad_primes_default(&m).unwrap(), vec![2]);
    }

    fn pair(a: &[usize], b: &[usize], p: u64) -> PairResult {
        let differences: Vec<i64> = difference_integers(&profile(a), &profile(b)).into_iter().collect();
        let divisible = differences.iter().any(|d| d.unsigned_abs() % p == 0);
        PairResult { lambda: BranchValue::Root(0), mu: BranchValue::Root(1), differences, divisible }
    }

    #[test]
    fn uniform_multiple_reading() {
        // {5} vs {4,1} reaches 4 but not 2; {5} vs {3,2} reaches 2 but not 4
        let pairs = [pair(&[5], &[4, 1], 2), pair(&[5], &[3, 2], 2)];
        assert!(pairs.iter().all(|pr| pr.divisible));
        assert!(!uniform_multiple(&pairs, 2));
        let pairs = [pair(&[2, 1, 1], &[2, 2], 2), pair(&[4], &[2, 2], 2)];
        assert!(uniform_multiple(&pairs, 2));
        assert!(!uniform_multiple(&[], 2));
    }

    #[test]
    fn chebyshev_quartic_readings_agree() {
        let m = map("8*x^4 - 8*x^2 + 1");
        let mono = monodromy(&m, DEFAULT_DIGITS).unwrap();
        let r = theorem1_verdict(&m, &ctx(3), &mono).unwrap();
        assert!(!r.readings_disagree());
    }

    #[test]
    fn search_examples() {
        let w = good_reduction_search(&map("x^3"), &ctx(2), &SearchBounds::default()).unwrap().unwrap();
        assert_eq!(w.mobius, Mobius::identity());
        assert!(good_reduction_search(&map("x^3"), &ctx(3), &SearchBounds::default()).unwrap().is_none());
        // x/2 + 2/x needs the scaling x -> 2x
        let m = map("(x^2 + 4)/(2*x)");
        let w = good_reduction_search(&m, &ctx(2), &SearchBounds::default()).unwrap().unwrap();
        assert!(w.model.sgr_test(&ctx(2)));
    }

    #[test]
    fn integralizing_scale() {
        // zeros of 4x^2 - 1 are ±1/2
        let m = map("(4*x^2 - 1)/(x + 3)");
        assert_eq!(integralizing_scaling(&m, &ctx(2)), Some(-1));
        assert_eq!(integralizing_scaling(&m, &ctx(3)), None);
        let m = map("(x^2 - 3)/(9*x)");
        assert_eq!(integralizing_scaling(&m, &ctx(3)), None);
    }

    #[test]
    fn report_examples() {
        let r = analyze(&map("(2*x^2+1)/x"), &[2]).unwrap();
        assert!(!r[0].sgr);
        for r in analyze(&map("x^2 - 1"), &[2, 3, 5]).unwrap() {
            assert!(r.cgr, "p = {}", r.p);
        }
        let r = &analyze(&map("x^3 - 3*x"), &[5]).unwrap()[0];
        assert!(r.sgr && r.separable && r.crv && r.cgr && r.cpt_checked);
        assert_eq!(r.criterion.as_ref().unwrap().verdict, Verdict::CertifiedPotentialGoodReduction);
        assert_eq!(r.potential, PotentialVerdict::GoodReduction);
        let r = &analyze(&map("x^3"), &[3]).unwrap()[0];
        assert_eq!(r.potential, PotentialVerdict::Unknown);
    }
}
