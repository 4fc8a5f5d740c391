//! Machine-readable report documents.
//!
//! Big integers (group orders, Möbius entries) are written as decimal strings so
//! that the document is exact regardless of size.

use serde::{Deserialize, Serialize};

use p1red::dynamics::{FinitelyCriticalReport, OrbitOutcome, OrbitRecord, PcfVerdict};
use p1red::monodromy::MonodromyData;
use p1red::reduction::{CriterionReport, ReductionReport, ALTERNATIVE_RULE, CRITERION_RULE};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub map: String,
    pub degree: usize,
    pub command: String,
    pub results: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Entry {
    Reduction(PrimeEntry),
    Criterion(CriterionEntry),
    Monodromy(MonodromyEntry),
    Pcf(PcfEntry),
    BadPrimes(BadPrimesEntry),
    Quadratic(QuadraticEntry),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeEntry {
    pub prime: u64,
    pub sgr: bool,
    pub separable: bool,
    pub crv: bool,
    pub cgr: bool,
    pub cpt_checked: bool,
    pub criterion: Option<CriterionEntry>,
    pub witness: Option<WitnessEntry>,
    pub potential_good_reduction: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionEntry {
    pub prime: u64,
    pub crv: bool,
    pub group_order: String,
    pub divides_group_order: bool,
    pub verdict: String,
    pub alternative_verdict: String,
    pub readings_disagree: bool,
    pub rule: String,
    pub alternative_rule: String,
    pub pairs: Vec<PairEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub lambda: String,
    pub mu: String,
    pub differences: Vec<i64>,
    pub divisible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    /// `[a, b, c, d]` for `x -> (a x + b) / (c x + d)`.
    pub mobius: [String; 4],
    pub model: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub branch_value: String,
    pub exact: Option<String>,
    pub radius: f64,
    pub permutation: String,
    pub cycle_type: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyEntry {
    pub order: String,
    pub digits: u32,
    pub base_point: [f64; 2],
    pub transitive: bool,
    pub product_is_identity: bool,
    pub total_ramification: usize,
    pub generators: Vec<GeneratorEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub start: String,
    pub points: Vec<String>,
    pub outcome: String,
    pub index: Option<usize>,
    pub period: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcfEntry {
    pub verdict: String,
    pub postcritical_form: Option<String>,
    pub postcritical_size: Option<usize>,
    pub rational_postcritical_points: Vec<String>,
    pub depth: Option<usize>,
    pub witness: Option<OrbitEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadPrimesEntry {
    /// Primes where the monodromy criterion does not certify potential good reduction.
    pub criterion_candidates: Option<Vec<u64>>,
    pub pcf: PcfEntry,
    /// Finitely critical bad set; present only for PCF maps.
    pub finitely_critical: Option<Vec<u64>>,
    pub checked_iterates: usize,
    pub regression_primes: Vec<u64>,
    pub regression_passed: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticEntry {
    pub c: String,
    pub verdict: String,
}

impl From<&CriterionReport> for CriterionEntry {
    fn from(r: &CriterionReport) -> Self {
        CriterionEntry {
            prime: r.p,
            crv: r.crv,
            group_order: r.group_order.to_string(),
            divides_group_order: r.divides_group_order,
            verdict: r.verdict.to_string(),
            alternative_verdict: r.alternative_verdict.to_string(),
            readings_disagree: r.readings_disagree(),
            rule: CRITERION_RULE.to_string(),
            alternative_rule: ALTERNATIVE_RULE.to_string(),
            pairs: r
                .pair_results
                .iter()
                .map(|p| PairEntry {
                    lambda: p.lambda.to_string(),
                    mu: p.mu.to_string(),
                    differences: p.differences.clone(),
                    divisible: p.divisible,
                })
                .collect(),
        }
    }
}

impl From<&ReductionReport> for PrimeEntry {
    fn from(r: &ReductionReport) -> Self {
        PrimeEntry {
            prime: r.p,
            sgr: r.sgr,
            separable: r.separable,
            crv: r.crv,
            cgr: r.cgr,
            cpt_checked: r.cpt_checked,
            criterion: r.criterion.as_ref().map(CriterionEntry::from),
            witness: r.witness.as_ref().map(|w| WitnessEntry {
                mobius: w.mobius.entries().map(|e| e.to_string()),
                model: w.model.to_string(),
            }),
            potential_good_reduction: r.potential.to_string(),
        }
    }
}

impl From<&MonodromyData> for MonodromyEntry {
    fn from(m: &MonodromyData) -> Self {
        MonodromyEntry {
            order: m.order.to_string(),
            digits: m.digits,
            base_point: [m.base_point.re, m.base_point.im],
            transitive: m.is_transitive(),
            product_is_identity: m.ordered_product().is_identity(),
            total_ramification: m.total_ramification(),
            generators: m
                .branch_points
                .iter()
                .zip(&m.generators)
                .zip(&m.cycle_types)
                .map(|((b, g), c)| GeneratorEntry {
                    branch_value: b.value.to_string(),
                    exact: b.exact.as_ref().map(|p| p.to_string()),
                    radius: b.radius,
                    permutation: g.to_string(),
                    cycle_type: c.clone(),
                })
                .collect(),
        }
    }
}

impl From<&OrbitRecord> for OrbitEntry {
    fn from(o: &OrbitRecord) -> Self {
        let (outcome, index, period) = match &o.outcome {
            OrbitOutcome::Periodic { tail, period } => ("periodic", Some(*tail), Some(*period)),
            OrbitOutcome::Escaped { index, .. } => ("escaped", Some(*index), None),
            OrbitOutcome::Truncated { maxiter } => ("truncated", Some(*maxiter), None),
        };
        OrbitEntry {
            start: o.start.to_string(),
            points: o.points.iter().map(|p| p.to_string()).collect(),
            outcome: outcome.to_string(),
            index,
            period,
        }
    }
}

impl From<&PcfVerdict> for PcfEntry {
    fn from(v: &PcfVerdict) -> Self {
        let mut e = PcfEntry {
            verdict: v.label().to_string(),
            postcritical_form: None,
            postcritical_size: None,
            rational_postcritical_points: Vec::new(),
            depth: None,
            witness: None,
        };
        match v {
            PcfVerdict::Pcf { postcritical, depth } => {
                e.postcritical_form = Some(postcritical.to_string());
                e.postcritical_size = Some(postcritical.len());
                e.rational_postcritical_points =
                    postcritical.rational_points().iter().map(|p| p.to_string()).collect();
                e.depth = Some(*depth);
            }
            PcfVerdict::NotPcf { witness } => e.witness = Some(witness.into()),
            PcfVerdict::Unknown { depth } => e.depth = Some(*depth),
        }
        e
    }
}

impl BadPrimesEntry {
    pub fn new(
        candidates: Option<Vec<u64>>,
        pcf: &PcfVerdict,
        fc: Option<&FinitelyCriticalReport>,
        regression_primes: Vec<u64>,
        regression_passed: Option<bool>,
    ) -> Self {
        BadPrimesEntry {
            criterion_candidates: candidates,
            pcf: pcf.into(),
            finitely_critical: fc.map(|r| r.bad_primes.clone()),
            checked_iterates: fc.map_or(0, |r| r.checked_iterates),
            regression_primes,
            regression_passed,
        }
    }
}

/// `base_point` rounded for text output.
pub fn fmt_complex(z: [f64; 2]) -> String {
    let r = |x: f64| (x * 1e6).round() / 1e6;
    if z[1] == 0.0 {
        format!("{}", r(z[0]))
    } else {
        format!("{}{:+}i", r(z[0]), r(z[1]))
    }
}
