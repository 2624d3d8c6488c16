//! The JSON analysis document.
//!
//! Sections that hit a configured cap carry `{"error": "..."}` in place of
//! their value; the rest of the report is still filled in. Keys are sorted,
//! so identical input gives byte-identical output.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::abelext::{decompose_canonical, Obstruction};
use crate::commutator::{
    classical_solvable, congruence_derived_series, congruence_solvable, is_abelian_in, is_central,
    nilpotent, SeriesWitness, DEFAULT_ORDER_CAP,
};
use crate::divisibility::{
    cauchy, divisibility, elementwise_lagrange, is_prime, right_power_alternative, CauchyOutcome,
    DivisibilityReport,
};
use crate::error::{LoopError, Result};
use crate::loops::{FiniteLoop, IdentityScheme};
use crate::mappings::{inner_mapping_group, triality_condition, TrialityReport, DEFAULT_INN_CAP};
use crate::subloops::{all_normal_subloops, distinguished_subloop, is_simple, Distinguished, Subloop};

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_NORMAL_LATTICE_CAP: usize = 64;

/// Breadth-first enumeration of `Inn(Q)` composes every element with every
/// generator, so it is only attempted up to this order.
pub const INN_ENUMERATION_MAX_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub max_order: usize,
    pub max_inn: usize,
    pub max_normal_lattice: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            max_order: DEFAULT_ORDER_CAP,
            max_inn: DEFAULT_INN_CAP,
            max_normal_lattice: DEFAULT_NORMAL_LATTICE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Section<T> {
    Value(T),
    Error { error: String },
}

impl<T> Section<T> {
    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(v) => Section::Value(v),
            Err(e) => Section::Error {
                error: e.to_string(),
            },
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Section::Value(v) => Some(v),
            Section::Error { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityResult {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<SeriesWitness>,
}

impl From<Option<SeriesWitness>> for Verdict {
    fn from(w: Option<SeriesWitness>) -> Self {
        Verdict {
            holds: w.is_some(),
            witness: w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianNormalEntry {
    pub elements: Subloop,
    pub abelian_in_q: bool,
    pub central: bool,
    pub decomposes: bool,
    pub obstruction: Option<Obstruction>,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub source: String,
    pub order: usize,
    pub identities: BTreeMap<&'static str, IdentityResult>,
    pub is_group: bool,
    pub power_associative: bool,
    pub diassociative: bool,
    pub distinguished: BTreeMap<&'static str, Vec<usize>>,
    pub simple: bool,
    pub normal_subloops: Section<Vec<Subloop>>,
    pub abelian_normal_subloops: Section<Vec<AbelianNormalEntry>>,
    pub inner_mapping_group_order: Section<usize>,
    pub triality: Section<TrialityReport>,
    pub nilpotent: Verdict,
    pub nilpotency_class: Option<usize>,
    pub classically_solvable: Verdict,
    pub congruence_solvable: Section<Verdict>,
    pub congruence_derived_series: Vec<Subloop>,
    pub divisibility: Section<Vec<DivisibilityReport>>,
    pub cauchy: Section<BTreeMap<u64, CauchyOutcome>>,
    pub elementwise_lagrange: Section<bool>,
    pub right_power_alternative: bool,
}

fn distinguished_name(kind: Distinguished) -> &'static str {
    match kind {
        Distinguished::LeftNucleus => "left-nucleus",
        Distinguished::MiddleNucleus => "middle-nucleus",
        Distinguished::RightNucleus => "right-nucleus",
        Distinguished::Nucleus => "nucleus",
        Distinguished::Center => "center",
        Distinguished::Commutant => "commutant",
    }
}

fn abelian_entries(q: &FiniteLoop, lattice: &[Subloop]) -> Result<Vec<AbelianNormalEntry>> {
    let mut out = Vec::new();
    for x in lattice.iter().filter(|x| !x.is_trivial()) {
        if !x.to_loop(q).0.is_commutative_group() {
            continue;
        }
        let abelian_in_q = is_abelian_in(q, x)?;
        let d = decompose_canonical(q, x)?;
        out.push(AbelianNormalEntry {
            elements: x.clone(),
            abelian_in_q,
            central: is_central(q, x)?,
            decomposes: d.is_extension(),
            obstruction: d.obstruction(),
            note: if abelian_in_q {
                "abelian normal, abelian in Q"
            } else {
                "abelian normal, NOT abelian in Q"
            },
        });
    }
    Ok(out)
}

pub fn analyze(q: &FiniteLoop, source: &str, opts: &ReportOptions) -> AnalysisReport {
    let identities = IdentityScheme::ALL
        .iter()
        .map(|&s| {
            let c = q.satisfies_identity(s);
            (
                s.name(),
                IdentityResult {
                    holds: c.holds,
                    witness: c.witness,
                },
            )
        })
        .collect();
    let distinguished = Distinguished::ALL
        .iter()
        .map(|&k| (distinguished_name(k), distinguished_subloop(q, k)))
        .collect();

    let lattice = all_normal_subloops(q, opts.max_normal_lattice);
    let abelian_normal_subloops = Section::from_result(
        lattice
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|l| abelian_entries(q, l)),
    );

    let inner_mapping_group_order = Section::from_result(if q.order() > INN_ENUMERATION_MAX_ORDER {
        Err(LoopError::OrderCapExceeded {
            order: q.order(),
            cap: INN_ENUMERATION_MAX_ORDER,
        })
    } else {
        inner_mapping_group(q, opts.max_inn).map(|g| g.len())
    });

    let power_associative = q.is_power_associative();
    let divisibility_section = Section::from_result(
        [2u64, 3, 6]
            .iter()
            .map(|&d| divisibility(q, d))
            .collect::<Result<Vec<_>>>(),
    );
    let primes: Vec<u64> = (2..=q.order() as u64)
        .filter(|&p| is_prime(p) && (q.order() as u64).is_multiple_of(p))
        .collect();
    let cauchy_section = Section::from_result(
        primes
            .iter()
            .map(|&p| cauchy(q, p).map(|c| (p, c)))
            .collect::<Result<BTreeMap<_, _>>>(),
    );

    let nil = nilpotent(q);
    AnalysisReport {
        schema: SCHEMA_VERSION,
        source: source.to_string(),
        order: q.order(),
        identities,
        is_group: q.is_associative(),
        power_associative,
        diassociative: q.is_diassociative(),
        distinguished,
        simple: is_simple(q),
        normal_subloops: Section::from_result(lattice),
        abelian_normal_subloops,
        inner_mapping_group_order,
        triality: Section::from_result(triality_condition(q)),
        nilpotency_class: nil.as_ref().map(|w| w.length()),
        nilpotent: nil.into(),
        classically_solvable: classical_solvable(q).into(),
        congruence_solvable: Section::from_result(
            congruence_solvable(q, opts.max_order).map(Verdict::from),
        ),
        congruence_derived_series: congruence_derived_series(q),
        divisibility: divisibility_section,
        cauchy: cauchy_section,
        elementwise_lagrange: Section::from_result(elementwise_lagrange(q)),
        right_power_alternative: power_associative && right_power_alternative(q),
    }
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn to_json(report: &AnalysisReport) -> String {
    let value = serde_json::to_value(report).expect("report serializes");
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteLoop {
        FiniteLoop::from_fn(n, |a, b| (a + b) % n).unwrap()
    }

    #[test]
    fn c6_report() {
        let r = analyze(&cyclic(6), "c6", &ReportOptions::default());
        assert!(r.is_group);
        assert!(r.nilpotent.holds);
        assert_eq!(r.nilpotency_class, Some(1));
        assert!(r.classically_solvable.holds);
        assert!(r.congruence_solvable.value().unwrap().holds);
        assert_eq!(r.inner_mapping_group_order.value(), Some(&1));
        let entries = r.abelian_normal_subloops.value().unwrap();
        assert!(entries.iter().all(|e| e.abelian_in_q && e.central && e.decomposes));
        let s = to_json(&r);
        assert!(s.starts_with("{\n  \"abelian_normal_subloops\""));
        assert!(s.contains("\"schema\": 1"));
    }

    #[test]
    fn caps_fail_per_section() {
        let opts = ReportOptions {
            max_order: 4,
            max_inn: 1 << 20,
            max_normal_lattice: 4,
        };
        let r = analyze(&cyclic(6), "c6", &opts);
        assert!(matches!(r.normal_subloops, Section::Error { .. }));
        assert!(matches!(r.congruence_solvable, Section::Error { .. }));
        assert!(r.nilpotent.holds);
    }

    #[test]
    fn deterministic_output() {
        let q = cyclic(8);
        let a = to_json(&analyze(&q, "x", &ReportOptions::default()));
        let b = to_json(&analyze(&q, "x", &ReportOptions::default()));
        assert_eq!(a, b);
    }
}
