//! Structured verdicts of theorem/lemma checks.
//!
//! A report separates hypothesis checking from conclusion checking: a
//! conclusion is only evaluated (and only meaningful) when every hypothesis
//! holds, so a hypothesis-violating instance is "not applicable", never a
//! failure. Reports are plain data and serialize deterministically: the
//! cost block counts work (convolutions, atom counts, weight bit-sizes)
//! instead of wall-clock time, so identical `(config, seed)` runs produce
//! byte-identical JSON.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::cone::{ConeSupportValue, RadicalSum};
use crate::measure::{AtomicMeasure, WeightBits};
use crate::scalar::{format_rational, rational_to_f64, Rational, Scalar};

/// Identifier of the claim a report is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimId {
    /// Hull additivity of supports under convolution.
    HullAdditivity,
    /// Additivity of the cone-support functional under convolution.
    SupportAdditivity,
    /// Support bound on a convolution factor.
    FactorSupport,
    /// Support of mixed power sums.
    MixedPowerSupport,
    /// Search for pairs with equal powers outside the cone.
    UniquenessSearch,
    /// Exact algebraic identity (telescoping factorization and friends).
    Identity,
    /// Half-plane counterexample reproduction.
    HalfPlaneCounterexample,
}

impl ClaimId {
    /// Wire name used in report JSON and CLI vocabulary.
    pub fn wire_name(&self) -> &'static str {
        match self {
            ClaimId::HullAdditivity => "thm1",
            ClaimId::SupportAdditivity => "thm2",
            ClaimId::FactorSupport => "lemma1",
            ClaimId::MixedPowerSupport => "lemma2",
            ClaimId::UniquenessSearch => "uniqueness",
            ClaimId::Identity => "identity",
            ClaimId::HalfPlaneCounterexample => "fejer",
        }
    }
}

impl Serialize for ClaimId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.wire_name())
    }
}

/// One named hypothesis with its verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub satisfied: bool,
    pub detail: String,
}

/// A named computed quantity carried by a report. Exact values serialize as
/// strings, radical values as `{exact, approx}` objects.
#[derive(Debug, Clone)]
pub enum Quantity {
    Rational(Rational),
    Support(ConeSupportValue),
    Radical(RadicalSum),
    Count(u64),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Quantity::Rational(r) => s.serialize_str(&format_rational(r)),
            Quantity::Support(v) => {
                let mut st = s.serialize_struct("Support", 2)?;
                st.serialize_field("exact", &alloc::format!("{v}"))?;
                st.serialize_field("approx", &v.approx())?;
                st.end()
            }
            Quantity::Radical(v) => {
                let sign = match v.sign() {
                    Ok(Ordering::Less) => -1i8,
                    Ok(Ordering::Equal) => 0,
                    Ok(Ordering::Greater) => 1,
                    Err(_) => {
                        // No checker stores a sum it could not sign; keep
                        // serialization total anyway.
                        if v.approx() < 0.0 {
                            -1
                        } else {
                            1
                        }
                    }
                };
                let mut st = s.serialize_struct("Radical", 3)?;
                st.serialize_field("exact", &alloc::format!("{v}"))?;
                st.serialize_field("approx", &v.approx())?;
                st.serialize_field("sign", &sign)?;
                st.end()
            }
            Quantity::Count(v) => s.serialize_u64(*v),
            Quantity::Real(v) => s.serialize_f64(*v),
            Quantity::Text(v) => s.serialize_str(v),
            Quantity::Bool(v) => s.serialize_bool(*v),
        }
    }
}

impl From<Rational> for Quantity {
    fn from(r: Rational) -> Self {
        Quantity::Rational(r)
    }
}

impl From<ConeSupportValue> for Quantity {
    fn from(v: ConeSupportValue) -> Self {
        Quantity::Support(v)
    }
}

/// Serialized falsifying (or threatening) instance: the measures involved
/// plus the quantities that exhibit the violation.
#[derive(Debug, Clone)]
pub struct Witness {
    pub label: String,
    /// Named exact measures, serialized in insertion order in the measure
    /// file schema, so a witness can be fed back to the CLI.
    pub measures: Vec<(String, AtomicMeasure<Rational>)>,
    pub quantities: BTreeMap<String, Quantity>,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct MeasureMap<'a>(&'a [(String, AtomicMeasure<Rational>)]);
        impl Serialize for MeasureMap<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (name, m) in self.0 {
                    map.serialize_entry(name, m)?;
                }
                map.end()
            }
        }
        let mut st = s.serialize_struct("Witness", 3)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("measures", &MeasureMap(&self.measures))?;
        st.serialize_field("quantities", &self.quantities)?;
        st.end()
    }
}

/// Deterministic work counters standing in for timings; wall-clock time is
/// never serialized so that reruns with one seed stay byte-identical.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Cost {
    pub convolutions: u64,
    pub max_atom_count: u64,
    pub max_weight_bits: u64,
    pub trials: u64,
}

impl Cost {
    pub fn observe_measure<S: Scalar + WeightBits>(&mut self, m: &AtomicMeasure<S>)
    where
        S: WeightBits,
    {
        self.max_atom_count = self.max_atom_count.max(m.atom_count() as u64);
        self.max_weight_bits = self.max_weight_bits.max(m.max_weight_bits());
    }

    pub fn count_convolution(&mut self) {
        self.convolutions += 1;
    }

    pub fn merge(&mut self, other: &Cost) {
        self.convolutions += other.convolutions;
        self.max_atom_count = self.max_atom_count.max(other.max_atom_count);
        self.max_weight_bits = self.max_weight_bits.max(other.max_weight_bits);
        self.trials += other.trials;
    }
}

/// Structured verdict of a theorem/lemma check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub claim: ClaimId,
    pub hypotheses: Vec<Hypothesis>,
    pub hypotheses_satisfied: bool,
    /// `None` when hypotheses failed (not applicable).
    pub conclusion_holds: Option<bool>,
    pub computed: BTreeMap<String, Quantity>,
    pub witnesses: Vec<Witness>,
    pub seed: Option<u64>,
    pub cost: Cost,
}

/// Version tag of the report JSON schema.
pub const REPORT_SCHEMA_VERSION: &str = "1";

impl CheckReport {
    pub fn new(claim: ClaimId) -> Self {
        CheckReport {
            claim,
            hypotheses: Vec::new(),
            hypotheses_satisfied: true,
            conclusion_holds: None,
            computed: BTreeMap::new(),
            witnesses: Vec::new(),
            seed: None,
            cost: Cost::default(),
        }
    }

    pub fn hypothesis(&mut self, name: &str, satisfied: bool, detail: String) -> bool {
        self.hypotheses.push(Hypothesis {
            name: String::from(name),
            satisfied,
            detail,
        });
        self.hypotheses_satisfied &= satisfied;
        satisfied
    }

    pub fn computed(&mut self, name: &str, value: Quantity) {
        self.computed.insert(String::from(name), value);
    }

    /// Records the conclusion verdict; only call when hypotheses held.
    pub fn conclude(&mut self, holds: bool) {
        debug_assert!(self.hypotheses_satisfied);
        self.conclusion_holds = Some(holds);
    }

    /// Not applicable: hypotheses failed, conclusion not evaluated.
    pub fn is_applicable(&self) -> bool {
        self.hypotheses_satisfied
    }

    /// A report counts as failed only when the hypotheses held and the
    /// conclusion did not.
    pub fn failed(&self) -> bool {
        self.conclusion_holds == Some(false)
    }
}

impl Serialize for CheckReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CheckReport", 9)?;
        st.serialize_field("schema_version", REPORT_SCHEMA_VERSION)?;
        st.serialize_field("claim", &self.claim)?;
        st.serialize_field("hypotheses", &self.hypotheses)?;
        st.serialize_field("hypotheses_satisfied", &self.hypotheses_satisfied)?;
        st.serialize_field("conclusion_holds", &self.conclusion_holds)?;
        st.serialize_field("computed", &self.computed)?;
        st.serialize_field("witnesses", &self.witnesses)?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("cost", &self.cost)?;
        st.end()
    }
}

/// Helper for report quantities: approximate value of a support quantity.
pub fn support_approx(v: &ConeSupportValue) -> f64 {
    v.approx()
}

/// Helper: rational quantity as `f64` for logging.
pub fn rational_approx(r: &Rational) -> f64 {
    rational_to_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::exact_measure_1d;

    #[test]
    fn report_json_shape() {
        let mut r = CheckReport::new(ClaimId::SupportAdditivity);
        r.hypothesis(
            "non_degenerate",
            true,
            String::from("both measures non-zero"),
        );
        r.conclude(false);
        r.witnesses.push(Witness {
            label: String::from("gap"),
            measures: alloc::vec![(String::from("a"), exact_measure_1d(&[(0, 1)]))],
            quantities: BTreeMap::new(),
        });
        r.seed = Some(7);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["schema_version"], "1");
        assert_eq!(json["claim"], "thm2");
        assert_eq!(json["hypotheses_satisfied"], true);
        assert_eq!(json["conclusion_holds"], false);
        assert_eq!(json["witnesses"][0]["measures"]["a"]["mode"], "exact");
        assert_eq!(json["seed"], 7);
    }

    #[test]
    fn not_applicable_serializes_null_conclusion() {
        let mut r = CheckReport::new(ClaimId::FactorSupport);
        r.hypothesis("h", false, String::from("violated"));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["conclusion_holds"], serde_json::Value::Null);
        assert!(!r.failed());
        assert!(!r.is_applicable());
    }

    #[test]
    fn quantity_serialization() {
        let q = Quantity::Rational(Rational::new(1.into(), 3.into()));
        assert_eq!(serde_json::to_value(&q).unwrap(), "1/3");
        let q = Quantity::Support(ConeSupportValue::from_i64(2));
        let v = serde_json::to_value(&q).unwrap();
        assert_eq!(v["exact"], "2");
        assert_eq!(v["approx"], 2.0);
    }
}
