//! Checkers, falsifiers, and seeded searches for the support claims.
//!
//! Every checker separates hypotheses from conclusions: conclusions are
//! evaluated only on instances whose hypotheses verify exactly, so a
//! violated hypothesis yields a not-applicable report, never a failure.
//! The falsification searches treat cone-support additivity as an
//! experimental claim: the unconditional truths are subadditivity and the
//! one-dimensional case, while single-atom pairs with opposed perpendicular
//! components witness strict gaps in dimension two and above; the searches
//! catalog such witnesses, smallest first.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Zero};
use rand::Rng;

use crate::cone::{hull_support_function, Cone, ConeSupportValue, RadicalSum};
use crate::convolve::{convolve, mixed_power_sum, telescoping_difference, PowerCache};
use crate::measure::{AtomicMeasure, MeasureError, RegionSpec};
use crate::report::{CheckReport, ClaimId, Cost, Quantity, Witness};
use crate::sampler::{SamplerConfig, SamplerConstraint};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabError {
    Measure(MeasureError),
    /// A parameter the claim requires to be positive was not.
    NonPositive(&'static str),
}

impl From<MeasureError> for LabError {
    fn from(e: MeasureError) -> Self {
        LabError::Measure(e)
    }
}

impl core::fmt::Display for LabError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LabError::Measure(e) => write!(f, "{e}"),
            LabError::NonPositive(name) => write!(f, "parameter `{name}` must be positive"),
        }
    }
}

type ExactMeasure = AtomicMeasure<Rational>;

fn inner(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b.iter())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

// ---------------------------------------------------------------------------
// Hull additivity (convex hulls of supports add under convolution)
// ---------------------------------------------------------------------------

/// Exact 2d convex hull (Andrew monotone chain), counter-clockwise, no
/// repeated endpoint. Collinear inputs yield the two extreme points.
pub fn convex_hull_2d(points: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut pts: Vec<(Rational, Rational)> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    fn cross(
        o: &(Rational, Rational),
        a: &(Rational, Rational),
        b: &(Rational, Rational),
    ) -> Rational {
        (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
    }
    let mut lower: Vec<(Rational, Rational)> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Rational::zero()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<(Rational, Rational)> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Rational::zero()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Scales a rational vector to a primitive integer direction, preserving
/// orientation.
fn primitive_direction(v: &[Rational]) -> Vec<Rational> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let mut gcd = BigInt::zero();
    for i in &ints {
        gcd = gcd.gcd(i);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|i| Rational::from_integer(i / &gcd))
        .collect()
}

/// Outward edge normals of the convex hull of a 2d support.
fn hull_edge_normals(m: &ExactMeasure) -> Vec<Vec<Rational>> {
    let pts: Vec<(Rational, Rational)> = m
        .atoms()
        .iter()
        .map(|a| (a.location[0].clone(), a.location[1].clone()))
        .collect();
    let hull = convex_hull_2d(&pts);
    let mut normals = Vec::new();
    match hull.len() {
        0 | 1 => {}
        2 => {
            let d = (&hull[1].0 - &hull[0].0, &hull[1].1 - &hull[0].1);
            normals.push(vec![d.1.clone(), -d.0.clone()]);
            normals.push(vec![-d.1.clone(), d.0.clone()]);
            normals.push(vec![d.0.clone(), d.1.clone()]);
            normals.push(vec![-d.0, -d.1]);
        }
        n => {
            for i in 0..n {
                let p = &hull[i];
                let q = &hull[(i + 1) % n];
                let (dx, dy) = (&q.0 - &p.0, &q.1 - &p.1);
                // ccw polygon: outward normal of edge (dx, dy).
                normals.push(vec![dy, -dx]);
            }
        }
    }
    normals
}

/// Probe directions for hull-additivity checks: in 2d, the edge normals of
/// the Minkowski sum of the two support hulls (the union of each hull's
/// edge normals) plus the axis directions; in 1d, both ray directions.
pub fn minkowski_probe_directions(a: &ExactMeasure, b: &ExactMeasure) -> Vec<Vec<Rational>> {
    let one = Rational::one;
    let mut dirs: Vec<Vec<Rational>> = match a.dim() {
        1 => vec![vec![one()], vec![-one()]],
        2 => {
            let mut d = vec![
                vec![one(), Rational::zero()],
                vec![-one(), Rational::zero()],
                vec![Rational::zero(), one()],
                vec![Rational::zero(), -one()],
            ];
            d.extend(hull_edge_normals(a));
            d.extend(hull_edge_normals(b));
            d
        }
        dim => {
            let mut d = Vec::new();
            for axis in 0..dim {
                for sign in [1i64, -1] {
                    let mut v = vec![Rational::zero(); dim];
                    v[axis] = Rational::from_i64(sign);
                    d.push(v);
                }
            }
            d
        }
    };
    for d in &mut dirs {
        *d = primitive_direction(d);
    }
    dirs.sort_by(|x, y| {
        x.iter()
            .zip(y.iter())
            .map(|(a, b)| a.cmp(b))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    dirs.dedup();
    dirs
}

/// Rational Gram–Schmidt completion: a basis of the orthogonal complement
/// of `u`, used to refine tie faces direction by direction.
fn orthogonal_completion(u: &[Rational]) -> Vec<Vec<Rational>> {
    let dim = u.len();
    let mut basis: Vec<Vec<Rational>> = vec![u.to_vec()];
    let mut completion = Vec::new();
    for axis in 0..dim {
        let mut v = vec![Rational::zero(); dim];
        v[axis] = Rational::one();
        for b in &basis {
            let coef = inner(&v, b) / inner(b, b);
            for (vj, bj) in v.iter_mut().zip(b.iter()) {
                *vj = &*vj - &coef * bj;
            }
        }
        if v.iter().any(|c| !c.is_zero()) {
            basis.push(v.clone());
            completion.push(v);
        }
    }
    completion
}

/// Unique extreme atom under the refined linear order `(⟨u,·⟩, ⟨v₁,·⟩, …)`;
/// the chain spans the space, so distinct atoms never tie on all of it.
fn refined_extreme(m: &ExactMeasure, chain: &[Vec<Rational>]) -> usize {
    let mut candidates: Vec<usize> = (0..m.atom_count()).collect();
    for u in chain {
        if candidates.len() <= 1 {
            break;
        }
        let mut best: Option<Rational> = None;
        let mut keep: Vec<usize> = Vec::new();
        for &i in &candidates {
            let v = inner(&m.atoms()[i].location, u);
            match &best {
                None => {
                    best = Some(v);
                    keep.push(i);
                }
                Some(b) => match v.cmp(b) {
                    Ordering::Greater => {
                        best = Some(v);
                        keep.clear();
                        keep.push(i);
                    }
                    Ordering::Equal => keep.push(i),
                    Ordering::Less => {}
                },
            }
        }
        candidates = keep;
    }
    debug_assert_eq!(
        candidates.len(),
        1,
        "refined order must single out one atom"
    );
    candidates[0]
}

/// Checks, for every probe direction, that the support function of the
/// convolution is subadditive and — via unique maximizers, with face
/// recursion in perpendicular directions on ties — exactly additive, with
/// the extreme product atom carrying the product of the extreme weights.
pub fn check_hull_additivity(
    a: &ExactMeasure,
    b: &ExactMeasure,
    directions: &[Vec<Rational>],
) -> Result<CheckReport, LabError> {
    if a.is_zero() || b.is_zero() {
        return Err(LabError::Measure(MeasureError::DegenerateMeasure));
    }
    let mut report = CheckReport::new(ClaimId::HullAdditivity);
    report.computed("check", Quantity::Text("hull-additivity".to_string()));
    report.hypothesis(
        "non_degenerate",
        true,
        format!("atom counts {} and {}", a.atom_count(), b.atom_count()),
    );
    let ab = convolve(a, b)?;
    report.cost.count_convolution();
    report.cost.observe_measure(a);
    report.cost.observe_measure(b);
    report.cost.observe_measure(&ab);
    debug_assert!(!ab.is_zero(), "extreme atoms cannot fully cancel over ℚ");

    let mut ties = 0u64;
    let mut failures: Vec<(Vec<Rational>, &'static str)> = Vec::new();
    for u in directions {
        let (ha, arg_a) = hull_support_function(a, u)?;
        let (hb, arg_b) = hull_support_function(b, u)?;
        let (hab, _) = hull_support_function(&ab, u)?;
        let sum = &ha + &hb;
        if hab > sum {
            failures.push((u.clone(), "subadditivity"));
            continue;
        }
        if arg_a.len() > 1 || arg_b.len() > 1 {
            ties += 1;
        }
        let mut chain = vec![u.clone()];
        chain.extend(orthogonal_completion(u));
        let ia = refined_extreme(a, &chain);
        let ib = refined_extreme(b, &chain);
        let xa = &a.atoms()[ia];
        let xb = &b.atoms()[ib];
        let vertex: Vec<Rational> = xa
            .location
            .iter()
            .zip(xb.location.iter())
            .map(|(p, q)| p + q)
            .collect();
        let expected = &xa.weight * &xb.weight;
        match ab.weight_at(&vertex) {
            Some(w) if *w == expected => {}
            _ => {
                failures.push((u.clone(), "extreme-vertex-weight"));
                continue;
            }
        }
        if hab != sum {
            failures.push((u.clone(), "support-value-equality"));
        }
    }

    report.computed(
        "directions_probed",
        Quantity::Count(directions.len() as u64),
    );
    report.computed("tie_directions", Quantity::Count(ties));
    report.computed("violations", Quantity::Count(failures.len() as u64));
    report.conclude(failures.is_empty());
    if !failures.is_empty() {
        let mut quantities = BTreeMap::new();
        for (i, (u, kind)) in failures.iter().enumerate() {
            let dir = u
                .iter()
                .map(crate::scalar::format_rational)
                .collect::<Vec<_>>()
                .join(",");
            quantities.insert(
                format!("violation_{i}"),
                Quantity::Text(format!("{kind} at direction ({dir})")),
            );
        }
        report.witnesses.push(Witness {
            label: "hull-additivity-violation".to_string(),
            measures: vec![("a".to_string(), a.clone()), ("b".to_string(), b.clone())],
            quantities,
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Cone-support subadditivity / additivity
// ---------------------------------------------------------------------------

struct PairSupport {
    suppc_a: ConeSupportValue,
    suppc_b: ConeSupportValue,
    /// `None` when the product cancelled to the zero measure.
    suppc_ab: Option<ConeSupportValue>,
    /// `supp_C a + supp_C b − supp_C(a*b)`, when applicable.
    gap: Option<RadicalSum>,
    cost: Cost,
}

fn pair_support(cone: &Cone, a: &ExactMeasure, b: &ExactMeasure) -> Result<PairSupport, LabError> {
    if a.is_zero() || b.is_zero() {
        return Err(LabError::Measure(MeasureError::DegenerateMeasure));
    }
    let suppc_a = cone.supp_c(a)?;
    let suppc_b = cone.supp_c(b)?;
    let ab = convolve(a, b)?;
    let mut cost = Cost::default();
    cost.count_convolution();
    cost.observe_measure(a);
    cost.observe_measure(b);
    cost.observe_measure(&ab);
    let suppc_ab = if ab.is_zero() {
        None
    } else {
        Some(cone.supp_c(&ab)?)
    };
    // gap = supp_C a + supp_C b − supp_C(a*b), carrying ≤ 3 radicals.
    let gap = suppc_ab.as_ref().map(|s| {
        let mut sum = RadicalSum::zero();
        for v in [&suppc_a, &suppc_b] {
            sum.push_rational(v.base().clone());
            sum.push_term(
                v.coefficient().clone(),
                Rational::from_integer(v.radicand().clone()),
            );
        }
        sum.push_rational(-s.base().clone());
        sum.push_term(
            -s.coefficient().clone(),
            Rational::from_integer(s.radicand().clone()),
        );
        sum
    });
    Ok(PairSupport {
        suppc_a,
        suppc_b,
        suppc_ab,
        gap,
        cost,
    })
}

fn support_report(
    cone: &Cone,
    a: &ExactMeasure,
    b: &ExactMeasure,
    require_equality: bool,
) -> Result<CheckReport, LabError> {
    let mut report = CheckReport::new(ClaimId::SupportAdditivity);
    report.computed(
        "check",
        Quantity::Text(
            if require_equality {
                "additivity"
            } else {
                "subadditivity"
            }
            .to_string(),
        ),
    );
    let ps = pair_support(cone, a, b)?;
    report.cost.merge(&ps.cost);
    report.computed("suppc_a", Quantity::Support(ps.suppc_a.clone()));
    report.computed("suppc_b", Quantity::Support(ps.suppc_b.clone()));
    let applicable = report.hypothesis(
        "product_nonzero",
        ps.suppc_ab.is_some(),
        if ps.suppc_ab.is_some() {
            "a*b is a non-zero measure".to_string()
        } else {
            "a*b cancelled to the zero measure".to_string()
        },
    );
    if !applicable {
        return Ok(report);
    }
    let suppc_ab = ps.suppc_ab.expect("checked above");
    let gap = ps.gap.expect("present with product");
    report.computed("suppc_product", Quantity::Support(suppc_ab));
    report.computed("gap", Quantity::Radical(gap.clone()));
    let sign = gap.sign().expect("gap carries at most three radicals");
    let holds = if require_equality {
        sign == Ordering::Equal
    } else {
        sign != Ordering::Less
    };
    report.conclude(holds);
    if !holds {
        let mut quantities = BTreeMap::new();
        quantities.insert("suppc_a".to_string(), Quantity::Support(ps.suppc_a));
        quantities.insert("suppc_b".to_string(), Quantity::Support(ps.suppc_b));
        quantities.insert("gap".to_string(), Quantity::Radical(gap));
        report.witnesses.push(Witness {
            label: if require_equality {
                "additivity-gap".to_string()
            } else {
                "negative-gap".to_string()
            },
            measures: vec![("a".to_string(), a.clone()), ("b".to_string(), b.clone())],
            quantities,
        });
    }
    Ok(report)
}

/// Unconditional direction: `supp_C(a*b) ≤ supp_C a + supp_C b`.
pub fn check_suppc_subadditivity(
    a: &ExactMeasure,
    b: &ExactMeasure,
    cone: &Cone,
) -> Result<CheckReport, LabError> {
    support_report(cone, a, b, false)
}

/// Exact additivity `supp_C(a*b) = supp_C a + supp_C b`, reported with the
/// gap; a strict gap is a falsifying instance, not a library error.
pub fn check_suppc_additivity(
    a: &ExactMeasure,
    b: &ExactMeasure,
    cone: &Cone,
) -> Result<CheckReport, LabError> {
    support_report(cone, a, b, true)
}

// ---------------------------------------------------------------------------
// Additivity falsification search
// ---------------------------------------------------------------------------

/// Outcome of one falsification trial, mergeable deterministically.
#[derive(Debug, Clone)]
pub struct Thm2Outcome {
    pub index: u64,
    pub not_applicable: bool,
    /// Present iff the pair exhibits a strict gap.
    pub witness: Option<Witness>,
    /// Sort key: total atom count of the pair.
    pub atoms: usize,
    pub cost: Cost,
}

/// Deterministic probe pairs checked before the random trials; the
/// single-atom pair with opposed perpendicular components is the canonical
/// gap witness in dimension ≥ 2.
pub fn thm2_probe_pairs(cone: &Cone) -> Vec<(ExactMeasure, ExactMeasure)> {
    if cone.dim() < 2 {
        return Vec::new();
    }
    let dim = cone.dim();
    let mut xa = vec![Rational::zero(); dim];
    xa[0] = Rational::one();
    xa[1] = Rational::one();
    let mut xb = vec![Rational::zero(); dim];
    xb[0] = Rational::one();
    xb[1] = -Rational::one();
    vec![(
        AtomicMeasure::dirac(xa, Rational::one()).expect("valid"),
        AtomicMeasure::dirac(xb, Rational::one()).expect("valid"),
    )]
}

fn thm2_outcome_for_pair(
    cone: &Cone,
    a: &ExactMeasure,
    b: &ExactMeasure,
    index: u64,
    label: String,
) -> Result<Thm2Outcome, LabError> {
    let ps = pair_support(cone, a, b)?;
    let atoms = a.atom_count() + b.atom_count();
    let witness = match (&ps.suppc_ab, &ps.gap) {
        (Some(sab), Some(gap)) if gap.sign().expect("≤3 radicals") == Ordering::Greater => {
            let mut quantities = BTreeMap::new();
            quantities.insert("k".to_string(), Quantity::Support(ps.suppc_a.clone()));
            quantities.insert("l".to_string(), Quantity::Support(ps.suppc_b.clone()));
            quantities.insert("suppc_product".to_string(), Quantity::Support(sab.clone()));
            quantities.insert("gap".to_string(), Quantity::Radical(gap.clone()));
            Some(Witness {
                label,
                measures: vec![("a".to_string(), a.clone()), ("b".to_string(), b.clone())],
                quantities,
            })
        }
        _ => None,
    };
    Ok(Thm2Outcome {
        index,
        not_applicable: ps.suppc_ab.is_none(),
        witness,
        atoms,
        cost: ps.cost,
    })
}

/// One random falsification trial; random trials use sampler stream `index`.
pub fn thm2_trial(cfg: &SamplerConfig, index: u64) -> Result<Thm2Outcome, LabError> {
    let mut rng = cfg.rng_for_trial(index);
    let a = cfg.sample_measure(&mut rng);
    let b = cfg.sample_measure(&mut rng);
    thm2_outcome_for_pair(&cfg.cone, &a, &b, index, format!("trial-{index}"))
}

/// Outcome for one deterministic probe pair; feed these to
/// [`aggregate_thm2`] before the random trial outcomes.
pub fn thm2_outcome_for_probe(
    cone: &Cone,
    a: &ExactMeasure,
    b: &ExactMeasure,
    probe_index: usize,
) -> Result<Thm2Outcome, LabError> {
    thm2_outcome_for_pair(
        cone,
        a,
        b,
        probe_index as u64,
        format!("probe-{probe_index}"),
    )
}

/// Merges probe and trial outcomes into the aggregated falsification
/// report, minimal-atom-count witnesses first.
pub fn aggregate_thm2(cfg: &SamplerConfig, outcomes: Vec<Thm2Outcome>) -> CheckReport {
    let mut report = CheckReport::new(ClaimId::SupportAdditivity);
    report.seed = Some(cfg.seed);
    report.computed(
        "check",
        Quantity::Text("additivity-falsification".to_string()),
    );
    report.hypothesis(
        "sampled_instances_non_degenerate",
        true,
        "sampler yields non-zero measures with defined supp_C".to_string(),
    );
    let mut not_applicable = 0u64;
    let mut witnesses: Vec<(usize, Witness)> = Vec::new();
    for o in outcomes {
        report.cost.merge(&o.cost);
        report.cost.trials += 1;
        if o.not_applicable {
            not_applicable += 1;
        }
        if let Some(w) = o.witness {
            witnesses.push((o.atoms, w));
        }
    }
    // Stable: atom-count ties keep input order, so probes stay in front.
    witnesses.sort_by_key(|(atoms, _)| *atoms);
    report.computed("trials", Quantity::Count(report.cost.trials));
    report.computed("not_applicable", Quantity::Count(not_applicable));
    report.computed("witnesses_found", Quantity::Count(witnesses.len() as u64));
    report.conclude(witnesses.is_empty());
    report.witnesses = witnesses.into_iter().map(|(_, w)| w).collect();
    report
}

/// Seeded falsification search for cone-support additivity: deterministic
/// canonical probes first, then `cfg.trials` sampled pairs.
pub fn falsify_theorem2(cfg: &SamplerConfig) -> Result<CheckReport, LabError> {
    let mut outcomes = Vec::new();
    for (i, (a, b)) in thm2_probe_pairs(&cfg.cone).into_iter().enumerate() {
        outcomes.push(thm2_outcome_for_probe(&cfg.cone, &a, &b, i)?);
    }
    for index in 0..cfg.trials {
        outcomes.push(thm2_trial(cfg, index)?);
    }
    Ok(aggregate_thm2(cfg, outcomes))
}

// ---------------------------------------------------------------------------
// Factor-support bound (lemma1)
// ---------------------------------------------------------------------------

/// Verifies one instance of the factor-support bound: if both supports lie
/// in `C(h)`, `supp_C(b*a) ≤ 0` and `supp_C a = −p` with `p ≥ 0`, then
/// `supp_C b ≤ p`.
pub fn verify_lemma1_instance(
    a: &ExactMeasure,
    b: &ExactMeasure,
    cone: &Cone,
    h: &Rational,
) -> Result<CheckReport, LabError> {
    if a.is_zero() || b.is_zero() {
        return Err(LabError::Measure(MeasureError::DegenerateMeasure));
    }
    let mut report = CheckReport::new(ClaimId::FactorSupport);
    report.hypothesis(
        "h_positive",
        h > &Rational::zero(),
        format!("h = {}", crate::scalar::format_rational(h)),
    );
    let a_in = cone.contains_support(a, h)?;
    report.hypothesis("supp_a_in_cone_h", a_in, format!("supp a ⊂ C({})", h));
    let b_in = cone.contains_support(b, h)?;
    report.hypothesis("supp_b_in_cone_h", b_in, format!("supp b ⊂ C({})", h));

    let ba = convolve(b, a)?;
    report.cost.count_convolution();
    report.cost.observe_measure(a);
    report.cost.observe_measure(b);
    report.cost.observe_measure(&ba);
    let product_nonzero = !ba.is_zero();
    report.hypothesis(
        "product_nonzero",
        product_nonzero,
        if product_nonzero {
            "b*a is a non-zero measure".to_string()
        } else {
            "b*a cancelled to the zero measure".to_string()
        },
    );

    let suppc_a = cone.supp_c(a)?;
    report.computed("suppc_a", Quantity::Support(suppc_a.clone()));
    let zero = ConeSupportValue::from_rational(Rational::zero());
    report.hypothesis(
        "suppc_a_nonpositive",
        suppc_a <= zero,
        format!("supp_C a = {suppc_a}"),
    );

    if product_nonzero {
        let suppc_ba = cone.supp_c(&ba)?;
        report.computed("suppc_product", Quantity::Support(suppc_ba.clone()));
        report.hypothesis(
            "suppc_product_nonpositive",
            suppc_ba <= zero,
            format!("supp_C (b*a) = {suppc_ba}"),
        );
    }

    let suppc_b = cone.supp_c(b)?;
    report.computed("suppc_b", Quantity::Support(suppc_b.clone()));

    if !report.is_applicable() {
        return Ok(report);
    }

    // Conclusion: supp_C b ≤ p where p = −supp_C a, i.e. supp_C b + supp_C a ≤ 0.
    let mut sum = RadicalSum::zero();
    for v in [&suppc_a, &suppc_b] {
        sum.push_rational(v.base().clone());
        sum.push_term(
            v.coefficient().clone(),
            Rational::from_integer(v.radicand().clone()),
        );
    }
    let holds = sum.sign().expect("≤2 radicals") != Ordering::Greater;
    report.conclude(holds);
    if !holds {
        let mut quantities = BTreeMap::new();
        quantities.insert("suppc_a".to_string(), Quantity::Support(suppc_a));
        quantities.insert("suppc_b".to_string(), Quantity::Support(suppc_b));
        quantities.insert("excess".to_string(), Quantity::Radical(sum));
        report.witnesses.push(Witness {
            label: "factor-support-violation".to_string(),
            measures: vec![("a".to_string(), a.clone()), ("b".to_string(), b.clone())],
            quantities,
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Mixed-power-sum support (lemma2)
// ---------------------------------------------------------------------------

/// Verifies one instance of the mixed-power-sum claim: under equal supports
/// `supp_C a = supp_C b = r > 0`, non-zero restrictions outside `C`, and
/// equality of the powers outside `C` up to `k_max`, each mixed power sum
/// `Σ_j a^{*(k−j)} * b^{*j}` has `supp_C = k·r`.
pub fn verify_lemma2_instance(
    a: &ExactMeasure,
    b: &ExactMeasure,
    cone: &Cone,
    r: &Rational,
    k_max: usize,
) -> Result<CheckReport, LabError> {
    if r <= &Rational::zero() {
        return Err(LabError::NonPositive("r"));
    }
    if k_max == 0 {
        return Err(LabError::NonPositive("k_max"));
    }
    if a.is_zero() || b.is_zero() {
        return Err(LabError::Measure(MeasureError::DegenerateMeasure));
    }
    let mut report = CheckReport::new(ClaimId::MixedPowerSupport);
    let target = ConeSupportValue::from_rational(r.clone());
    let suppc_a = cone.supp_c(a)?;
    let suppc_b = cone.supp_c(b)?;
    report.computed("suppc_a", Quantity::Support(suppc_a.clone()));
    report.computed("suppc_b", Quantity::Support(suppc_b.clone()));
    report.computed("r", Quantity::Rational(r.clone()));
    report.hypothesis(
        "suppc_a_equals_r",
        suppc_a == target,
        format!("supp_C a = {suppc_a}"),
    );
    report.hypothesis(
        "suppc_b_equals_r",
        suppc_b == target,
        format!("supp_C b = {suppc_b}"),
    );

    let complement = RegionSpec::cone_complement(cone.clone());
    let a_outside = !a.restrict(&complement)?.is_zero();
    let b_outside = !b.restrict(&complement)?.is_zero();
    report.hypothesis(
        "a_nonzero_outside_cone",
        a_outside,
        "restriction of a to the cone complement is non-zero".to_string(),
    );
    report.hypothesis(
        "b_nonzero_outside_cone",
        b_outside,
        "restriction of b to the cone complement is non-zero".to_string(),
    );

    let mut ca = PowerCache::new(a.clone());
    let mut cb = PowerCache::new(b.clone());
    let mut first_diverging_k = None;
    for k in 1..=k_max {
        let pa = ca.power(k)?.clone();
        let pb = cb.power(k)?;
        if !pa.equal_on(pb, &complement, &Rational::zero())? {
            first_diverging_k = Some(k);
            break;
        }
    }
    report.hypothesis(
        "powers_equal_outside_cone",
        first_diverging_k.is_none(),
        match first_diverging_k {
            None => format!("a^k = b^k outside C for every k ≤ {k_max}"),
            Some(k) => format!("powers diverge outside C at k = {k}"),
        },
    );

    if !report.is_applicable() {
        return Ok(report);
    }

    let mut failed_k = None;
    for k in 1..=k_max {
        let sum = mixed_power_sum(&mut ca, &mut cb, k)?;
        report.cost.convolutions += k as u64;
        report.cost.observe_measure(&sum);
        let expected = ConeSupportValue::from_rational(Rational::from_i64(k as i64) * r);
        let ok = match cone.supp_c(&sum) {
            Ok(v) => {
                report.computed(&format!("suppc_mixed_k{k}"), Quantity::Support(v.clone()));
                v == expected
            }
            Err(MeasureError::DegenerateMeasure) => {
                report.computed(
                    &format!("suppc_mixed_k{k}"),
                    Quantity::Text("mixed power sum vanished".to_string()),
                );
                false
            }
            Err(e) => return Err(e.into()),
        };
        if !ok {
            failed_k = Some(k);
            break;
        }
    }
    report.conclude(failed_k.is_none());
    if let Some(k) = failed_k {
        let mut quantities = BTreeMap::new();
        quantities.insert("failing_k".to_string(), Quantity::Count(k as u64));
        quantities.insert("r".to_string(), Quantity::Rational(r.clone()));
        report.witnesses.push(Witness {
            label: "mixed-power-support-violation".to_string(),
            measures: vec![("a".to_string(), a.clone()), ("b".to_string(), b.clone())],
            quantities,
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Telescoping identity
// ---------------------------------------------------------------------------

/// Exact identity `a^{*k} − b^{*k} = (a−b) * Σ_j a^{*(k−1−j)} b^{*j}`.
pub fn check_telescoping(
    a: &ExactMeasure,
    b: &ExactMeasure,
    k: usize,
) -> Result<CheckReport, LabError> {
    let mut report = CheckReport::new(ClaimId::Identity);
    report.computed("check", Quantity::Text("telescoping".to_string()));
    report.computed("k", Quantity::Count(k as u64));
    let (lhs, rhs) = telescoping_difference(a, b, k)?;
    report.cost.convolutions += k as u64 * 2;
    report.cost.observe_measure(&lhs);
    let holds = lhs == rhs;
    report.conclude(holds);
    if !holds {
        report.witnesses.push(Witness {
            label: "telescoping-violation".to_string(),
            measures: vec![
                ("a".to_string(), a.clone()),
                ("b".to_string(), b.clone()),
                ("lhs".to_string(), lhs),
                ("rhs".to_string(), rhs),
            ],
            quantities: BTreeMap::new(),
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Uniqueness search
// ---------------------------------------------------------------------------

/// Outcome of one rejection-mode uniqueness trial.
#[derive(Debug, Clone)]
pub struct UniquenessOutcome {
    pub index: u64,
    pub skipped_identical: bool,
    pub candidate: Option<Witness>,
    /// The pair passed every check, but its difference sits so deep in the
    /// cone that the powers up to `k_max` could not have reached outside
    /// `C` anyway; agreement is then vacuous and threatens nothing.
    pub deep_agreement: bool,
    pub cost: Cost,
}

/// Classifies a pair that passed all power-equality checks: threatening
/// (`Greater`) when the telescoping depth bound
/// `supp_C(μ−ν) + (k_max−1)·max(supp_C μ, supp_C ν)` is positive — a real
/// difference would then have surfaced at some `k ≤ k_max` — and vacuous
/// otherwise.
fn agreement_depth_sign(
    cone: &Cone,
    mu: &ExactMeasure,
    nu: &ExactMeasure,
    k_max: usize,
) -> Result<Ordering, LabError> {
    let diff = mu.sub(nu)?;
    debug_assert!(!diff.is_zero(), "identical pairs are filtered earlier");
    let d = cone.supp_c(&diff)?;
    let r_mu = cone.supp_c(mu)?;
    let r_nu = cone.supp_c(nu)?;
    let r = if r_mu >= r_nu { r_mu } else { r_nu };
    let factor = Rational::from_i64(k_max as i64 - 1);
    let mut sum = RadicalSum::zero();
    sum.push_rational(d.base().clone());
    sum.push_term(
        d.coefficient().clone(),
        Rational::from_integer(d.radicand().clone()),
    );
    sum.push_rational(&factor * r.base());
    sum.push_term(
        &factor * r.coefficient(),
        Rational::from_integer(r.radicand().clone()),
    );
    Ok(sum.sign().expect("≤2 radicals"))
}

fn uniqueness_trial_cfg(cfg: &SamplerConfig, h: &Rational) -> SamplerConfig {
    let mut tcfg = cfg.clone();
    tcfg.constraints = vec![
        SamplerConstraint::SupportInCone { shift: h.clone() },
        SamplerConstraint::NonzeroOutsideCone,
    ];
    tcfg
}

/// One rejection trial: sample a pair supported in `C(h)` with non-zero
/// restrictions outside `C`, and test whether all powers up to `k_max`
/// agree outside `C` despite the measures differing.
pub fn uniqueness_trial(
    cfg: &SamplerConfig,
    h: &Rational,
    k_max: usize,
    index: u64,
) -> Result<UniquenessOutcome, LabError> {
    let tcfg = uniqueness_trial_cfg(cfg, h);
    let mut rng = tcfg.rng_for_trial(index);
    let mu = tcfg.sample_measure(&mut rng);
    let nu = tcfg.sample_measure(&mut rng);
    let mut cost = Cost::default();
    cost.observe_measure(&mu);
    cost.observe_measure(&nu);
    if mu == nu {
        return Ok(UniquenessOutcome {
            index,
            skipped_identical: true,
            candidate: None,
            deep_agreement: false,
            cost,
        });
    }
    let complement = RegionSpec::cone_complement(cfg.cone.clone());
    let mut ca = PowerCache::new(mu.clone());
    let mut cb = PowerCache::new(nu.clone());
    let mut all_equal = true;
    for k in 1..=k_max {
        let pa = ca.power(k)?.clone();
        let pb = cb.power(k)?;
        cost.convolutions += 2;
        if !pa.equal_on(pb, &complement, &Rational::zero())? {
            all_equal = false;
            break;
        }
    }
    let mut candidate = None;
    let mut deep_agreement = false;
    if all_equal {
        if agreement_depth_sign(&cfg.cone, &mu, &nu, k_max)? == Ordering::Greater {
            let mut quantities = BTreeMap::new();
            quantities.insert("k_checked".to_string(), Quantity::Count(k_max as u64));
            quantities.insert(
                "caveat".to_string(),
                Quantity::Text(format!(
                    "powers agree outside C only up to k = {k_max}; not a refutation"
                )),
            );
            candidate = Some(Witness {
                label: format!("candidate-trial-{index}"),
                measures: vec![
                    ("mu".to_string(), mu.clone()),
                    ("nu".to_string(), nu.clone()),
                ],
                quantities,
            });
        } else {
            deep_agreement = true;
        }
    }
    Ok(UniquenessOutcome {
        index,
        skipped_identical: false,
        candidate,
        deep_agreement,
        cost,
    })
}

/// Statistics of the constructive search mode.
#[derive(Debug, Clone, Default)]
pub struct ConstructiveStats {
    pub attempts: u64,
    pub descents: u64,
    pub exact_checks: u64,
    pub deep_agreements: u64,
    pub candidates: Vec<Witness>,
    pub cost: Cost,
}

/// Stream offset separating constructive-mode draws from rejection trials.
pub const CONSTRUCTIVE_STREAM_BASE: u64 = 1 << 32;

fn float_measure(m: &ExactMeasure) -> AtomicMeasure<f64> {
    let raw = m
        .atoms()
        .iter()
        .map(|a| {
            (
                a.location.iter().map(|c| c.to_f64_lossy()).collect(),
                a.weight.to_f64_lossy(),
            )
        })
        .collect();
    AtomicMeasure::new(m.dim(), raw).expect("finite conversion")
}

/// Best rational approximation with bounded denominator (continued
/// fractions), used to round descent results before exact checking.
pub fn rationalize(x: f64, max_denominator: u64) -> Rational {
    if !x.is_finite() {
        return Rational::zero();
    }
    let negative = x < 0.0;
    let mut x = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..40 {
        let a = libm::floor(x) as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_denominator as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = x - libm::floor(x);
        if frac < 1e-12 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1 == 0 {
        return Rational::zero();
    }
    let mut r = Rational::new(p1.into(), q1.into());
    if negative {
        r = -r;
    }
    r
}

fn constructive_objective(
    outside: &AtomicMeasure<f64>,
    support: &[Vec<f64>],
    weights: &[f64],
    mu_powers: &[AtomicMeasure<f64>],
    complement: &RegionSpec,
    k_max: usize,
) -> f64 {
    let dim = outside.dim();
    let mut raw: Vec<(Vec<f64>, f64)> = outside
        .atoms()
        .iter()
        .map(|a| (a.location.clone(), a.weight))
        .collect();
    for (loc, w) in support.iter().zip(weights.iter()) {
        raw.push((loc.clone(), *w));
    }
    let nu = match AtomicMeasure::new(dim, raw) {
        Ok(m) => m,
        Err(_) => return f64::INFINITY,
    };
    let mut cache = PowerCache::new(nu);
    let mut obj = 0.0;
    for (k, mu_k) in mu_powers.iter().enumerate().take(k_max).skip(1) {
        let nu_k = match cache.power(k + 1) {
            Ok(m) => m,
            Err(_) => return f64::INFINITY,
        };
        let diff = match nu_k.sub(mu_k).and_then(|d| d.restrict(complement)) {
            Ok(d) => d,
            Err(_) => return f64::INFINITY,
        };
        obj += diff
            .atoms()
            .iter()
            .map(|a| a.weight * a.weight)
            .sum::<f64>();
    }
    obj
}

/// Constructive uniqueness probe: fixes the part of a sampled `μ` outside
/// `C`, perturbs the weights on a candidate support inside `C` by seeded
/// random descent on the float residual of the power constraints for
/// `k = 2..k_max` (`k = 1` holds by construction), rounds the result to
/// bounded-denominator rationals, and re-checks exactly.
pub fn uniqueness_constructive(
    cfg: &SamplerConfig,
    h: &Rational,
    k_max: usize,
) -> Result<ConstructiveStats, LabError> {
    let mut stats = ConstructiveStats::default();
    let tcfg = uniqueness_trial_cfg(cfg, h);
    let complement = RegionSpec::cone_complement(cfg.cone.clone());
    let attempts = (cfg.trials / 10).clamp(2, 24);
    let zero_shift = Rational::zero();
    for attempt in 0..attempts {
        stats.attempts += 1;
        let mut rng = tcfg.rng_for_trial(CONSTRUCTIVE_STREAM_BASE + attempt);
        let mu = tcfg.sample_measure(&mut rng);
        stats.cost.observe_measure(&mu);

        // Candidate inside support: μ's atoms in C plus fresh axis points in
        // the observable band (−(k_max−1)·r, 0], so the power constraints
        // for k ≤ k_max genuinely constrain the weights instead of being
        // vacuously satisfied by hiding deep in the cone.
        let r_mu = cfg.cone.supp_c(&mu)?;
        let band = Rational::from_i64(k_max as i64 - 1) * r_mu.base()
            + Rational::from_i64(k_max as i64 - 1) * r_mu.coefficient();
        let band = if band > Rational::zero() {
            band
        } else {
            Rational::one()
        };
        let mut support: Vec<Vec<Rational>> = mu
            .atoms()
            .iter()
            .filter(|a| {
                cfg.cone
                    .member(&zero_shift, &a.location)
                    .expect("dims match")
            })
            .map(|a| a.location.clone())
            .collect();
        for _ in 0..3 {
            let mut p = vec![Rational::zero(); cfg.cone.dim()];
            let num = rng.random_range(0..=16i64);
            p[0] = -(&band * Rational::new(num.into(), 17.into()));
            support.push(p);
        }
        support.sort_by(|a, b| crate::measure::lex_cmp(a, b));
        support.dedup();

        let outside_exact = mu.restrict(&complement)?;
        if outside_exact.is_zero() {
            continue;
        }
        let outside = float_measure(&outside_exact);
        let mu_f = float_measure(&mu);
        let mut mu_cache = PowerCache::new(mu_f);
        let mut mu_powers = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            mu_powers.push(mu_cache.power(k)?.clone());
        }

        let support_f: Vec<Vec<f64>> = support
            .iter()
            .map(|p| p.iter().map(|c| c.to_f64_lossy()).collect())
            .collect();
        let base_weights: Vec<f64> = support
            .iter()
            .map(|p| mu.weight_at(p).map(|w| w.to_f64_lossy()).unwrap_or(0.0))
            .collect();

        for restart in 0..6 {
            stats.descents += 1;
            let mut w: Vec<f64> = base_weights
                .iter()
                .map(|b| b + rng.random_range(-2.0..2.0))
                .collect();
            let _ = restart;
            let mut obj =
                constructive_objective(&outside, &support_f, &w, &mu_powers, &complement, k_max);
            let mut step = 1.0f64;
            for _ in 0..80 {
                let j = rng.random_range(0..w.len());
                let delta = step * rng.random_range(-1.0..1.0f64);
                let old = w[j];
                w[j] += delta;
                let cand = constructive_objective(
                    &outside,
                    &support_f,
                    &w,
                    &mu_powers,
                    &complement,
                    k_max,
                );
                if cand < obj {
                    obj = cand;
                } else {
                    w[j] = old;
                    step *= 0.97;
                }
            }

            // Exact re-check of the rounded candidate.
            stats.exact_checks += 1;
            let mut raw: Vec<(Vec<Rational>, Rational)> = outside_exact
                .atoms()
                .iter()
                .map(|a| (a.location.clone(), a.weight.clone()))
                .collect();
            for (loc, wf) in support.iter().zip(w.iter()) {
                let wr = rationalize(*wf, cfg.denominator_bound as u64 * 4);
                if !wr.is_zero() {
                    raw.push((loc.clone(), wr));
                }
            }
            let nu = AtomicMeasure::new(cfg.cone.dim(), raw)?;
            if nu == mu || nu.is_zero() {
                continue;
            }
            let mut ca = PowerCache::new(mu.clone());
            let mut cb = PowerCache::new(nu.clone());
            let mut all_equal = true;
            for k in 1..=k_max {
                let pa = ca.power(k)?.clone();
                let pb = cb.power(k)?;
                stats.cost.convolutions += 2;
                if !pa.equal_on(pb, &complement, &Rational::zero())? {
                    all_equal = false;
                    break;
                }
            }
            if all_equal {
                if agreement_depth_sign(&cfg.cone, &mu, &nu, k_max)? == Ordering::Greater {
                    let mut quantities = BTreeMap::new();
                    quantities.insert("k_checked".to_string(), Quantity::Count(k_max as u64));
                    quantities.insert(
                        "caveat".to_string(),
                        Quantity::Text(format!(
                            "powers agree outside C only up to k = {k_max}; not a refutation"
                        )),
                    );
                    stats.candidates.push(Witness {
                        label: format!("candidate-constructive-{attempt}"),
                        measures: vec![("mu".to_string(), mu.clone()), ("nu".to_string(), nu)],
                        quantities,
                    });
                } else {
                    stats.deep_agreements += 1;
                }
            }
        }
    }
    Ok(stats)
}

/// Merges rejection-trial outcomes and constructive statistics into the
/// aggregated uniqueness-search report.
pub fn aggregate_uniqueness(
    cfg: &SamplerConfig,
    h: &Rational,
    k_max: usize,
    outcomes: Vec<UniquenessOutcome>,
    constructive: ConstructiveStats,
) -> CheckReport {
    let mut report = CheckReport::new(ClaimId::UniquenessSearch);
    report.seed = Some(cfg.seed);
    report.computed("h", Quantity::Rational(h.clone()));
    report.computed("k_max", Quantity::Count(k_max as u64));
    report.hypothesis(
        "sampled_pairs_satisfy_hypotheses",
        true,
        "supports in C(h), non-zero restrictions outside C, pairs distinct".to_string(),
    );
    let mut skipped = 0u64;
    let mut deep = constructive.deep_agreements;
    let mut candidates: Vec<(u64, Witness)> = Vec::new();
    for o in outcomes {
        report.cost.merge(&o.cost);
        report.cost.trials += 1;
        if o.skipped_identical {
            skipped += 1;
        }
        if o.deep_agreement {
            deep += 1;
        }
        if let Some(c) = o.candidate {
            candidates.push((o.index, c));
        }
    }
    candidates.sort_by_key(|(i, _)| *i);
    report.computed("rejection_trials", Quantity::Count(report.cost.trials));
    report.computed("identical_pairs_skipped", Quantity::Count(skipped));
    report.computed("vacuous_deep_agreements", Quantity::Count(deep));
    report.computed(
        "constructive_attempts",
        Quantity::Count(constructive.attempts),
    );
    report.computed(
        "constructive_descents",
        Quantity::Count(constructive.descents),
    );
    report.computed(
        "constructive_exact_checks",
        Quantity::Count(constructive.exact_checks),
    );
    report.cost.merge(&constructive.cost);
    let mut witnesses: Vec<Witness> = candidates.into_iter().map(|(_, w)| w).collect();
    witnesses.extend(constructive.candidates);
    report.computed("candidates_found", Quantity::Count(witnesses.len() as u64));
    report.conclude(witnesses.is_empty());
    report.witnesses = witnesses;
    report
}

/// Seeded uniqueness search: rejection sampling of hypothesis-satisfying
/// pairs plus the constructive perturbation mode. A candidate pair passes
/// every power-equality check up to `k_max`; finding one threatens the
/// uniqueness claim only up to that finite depth.
pub fn uniqueness_search(
    cfg: &SamplerConfig,
    h: &Rational,
    k_max: usize,
) -> Result<CheckReport, LabError> {
    if h <= &Rational::zero() {
        return Err(LabError::NonPositive("h"));
    }
    if k_max == 0 {
        return Err(LabError::NonPositive("k_max"));
    }
    let mut outcomes = Vec::new();
    for index in 0..cfg.trials {
        outcomes.push(uniqueness_trial(cfg, h, k_max, index)?);
    }
    let constructive = uniqueness_constructive(cfg, h, k_max)?;
    Ok(aggregate_uniqueness(cfg, h, k_max, outcomes, constructive))
}
