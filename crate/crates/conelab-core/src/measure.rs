//! Finite signed atomic Borel measures on `ℝⁿ`.
//!
//! A measure is a canonical finite list of weighted points: atoms are sorted
//! lexicographically by coordinates, locations are pairwise distinct, and no
//! atom carries a pruned weight. In exact mode equality of measures is
//! equality of representations; the empty list is the zero measure.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cone::Cone;
use crate::scalar::{format_rational, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureError {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    DegenerateMeasure,
    ZeroDirection,
    NonFiniteValue,
    /// `equal_on` in exact mode requires a zero tolerance.
    InvalidTolerance,
    /// Shell regions require `inner < outer`.
    InvalidShell,
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            MeasureError::DegenerateMeasure => write!(f, "operation requires a non-zero measure"),
            MeasureError::ZeroDirection => write!(f, "direction vector must be non-zero"),
            MeasureError::NonFiniteValue => write!(f, "non-finite scalar in float-mode measure"),
            MeasureError::InvalidTolerance => {
                write!(f, "exact-mode comparison requires zero tolerance")
            }
            MeasureError::InvalidShell => write!(f, "cone shell requires inner < outer"),
        }
    }
}

/// A weighted point. Canonical atoms always carry a non-pruned weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom<S> {
    pub location: Vec<S>,
    pub weight: S,
}

/// Region of `ℝⁿ` a measure can be restricted to.
///
/// Shifts are exact rationals regardless of measure mode; float-mode
/// membership converts them once per test. Cone-complement membership means
/// "not in the shifted cone".
#[derive(Debug, Clone, PartialEq)]
pub enum RegionSpec {
    All,
    LeftHalfSpace {
        shift: Rational,
    },
    ConeComplement {
        cone: Cone,
        shift: Rational,
    },
    ConeShell {
        cone: Cone,
        inner: Rational,
        outer: Rational,
    },
}

impl RegionSpec {
    pub fn cone_shell(cone: Cone, inner: Rational, outer: Rational) -> Result<Self, MeasureError> {
        if inner >= outer {
            return Err(MeasureError::InvalidShell);
        }
        Ok(RegionSpec::ConeShell { cone, inner, outer })
    }

    /// Complement of the unshifted cone, the region the uniqueness claims
    /// quantify over.
    pub fn cone_complement(cone: Cone) -> Self {
        RegionSpec::ConeComplement {
            cone,
            shift: Rational::from_integer(0.into()),
        }
    }

    fn check_dim(&self, dim: usize) -> Result<(), MeasureError> {
        let region_dim = match self {
            RegionSpec::All | RegionSpec::LeftHalfSpace { .. } => return Ok(()),
            RegionSpec::ConeComplement { cone, .. } => cone.dim(),
            RegionSpec::ConeShell { cone, .. } => cone.dim(),
        };
        if region_dim != dim {
            return Err(MeasureError::DimensionMismatch {
                expected: region_dim,
                found: dim,
            });
        }
        Ok(())
    }

    /// Exact membership in exact mode; float mode uses the same sign-safe
    /// squared comparison, so no square root is ever taken.
    pub fn contains<S: Scalar>(&self, x: &[S]) -> Result<bool, MeasureError> {
        self.check_dim(x.len())?;
        Ok(match self {
            RegionSpec::All => true,
            RegionSpec::LeftHalfSpace { shift } => {
                let p = S::from_rational(shift);
                x[0].total_cmp(&p) != Ordering::Greater
            }
            RegionSpec::ConeComplement { cone, shift } => !cone.member(shift, x)?,
            RegionSpec::ConeShell { cone, inner, outer } => {
                cone.member(outer, x)? && !cone.member(inner, x)?
            }
        })
    }
}

/// Finite signed atomic measure in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure<S: Scalar> {
    dim: usize,
    atoms: Vec<Atom<S>>,
}

impl Eq for AtomicMeasure<Rational> {}

pub(crate) fn lex_cmp<S: Scalar>(a: &[S], b: &[S]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn coords_eq<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x.coord_eq(y))
}

impl<S: Scalar> AtomicMeasure<S> {
    /// Builds a canonical measure: duplicate locations merged with weights
    /// summed, pruned weights dropped, atoms sorted lexicographically.
    pub fn new(dim: usize, atoms: Vec<(Vec<S>, S)>) -> Result<Self, MeasureError> {
        if dim == 0 {
            return Err(MeasureError::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for (location, weight) in &atoms {
            if location.len() != dim {
                return Err(MeasureError::DimensionMismatch {
                    expected: dim,
                    found: location.len(),
                });
            }
            if !weight.is_admissible() || location.iter().any(|c| !c.is_admissible()) {
                return Err(MeasureError::NonFiniteValue);
            }
        }
        Ok(Self::canonicalize(dim, atoms))
    }

    /// The zero measure of the given dimension.
    pub fn zero(dim: usize) -> Self {
        AtomicMeasure {
            dim,
            atoms: Vec::new(),
        }
    }

    /// Point mass `w·δ_location`.
    pub fn dirac(location: Vec<S>, weight: S) -> Result<Self, MeasureError> {
        let dim = location.len();
        Self::new(dim, alloc::vec![(location, weight)])
    }

    fn canonicalize(dim: usize, mut raw: Vec<(Vec<S>, S)>) -> Self {
        raw.sort_by(|a, b| lex_cmp(&a.0, &b.0));
        let mut merged: Vec<Atom<S>> = Vec::with_capacity(raw.len());
        for (location, weight) in raw {
            match merged.last_mut() {
                Some(last) if coords_eq(&last.location, &location) => {
                    last.weight = last.weight.clone() + weight;
                }
                _ => merged.push(Atom { location, weight }),
            }
        }
        let max_abs = merged
            .iter()
            .map(|a| a.weight.abs())
            .fold(S::zero(), |acc, w| if w > acc { w } else { acc });
        merged.retain(|a| !a.weight.negligible_against(&max_abs));
        AtomicMeasure { dim, atoms: merged }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom<S>] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Weight at an exact location, if an atom sits there.
    pub fn weight_at(&self, location: &[S]) -> Option<&S> {
        self.atoms
            .binary_search_by(|a| lex_cmp(&a.location, location))
            .ok()
            .map(|i| &self.atoms[i].weight)
    }

    fn check_same_dim(&self, other: &Self) -> Result<(), MeasureError> {
        if self.dim != other.dim {
            return Err(MeasureError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MeasureError> {
        self.check_same_dim(other)?;
        let mut raw: Vec<(Vec<S>, S)> = Vec::with_capacity(self.atoms.len() + other.atoms.len());
        for a in self.atoms.iter().chain(other.atoms.iter()) {
            raw.push((a.location.clone(), a.weight.clone()));
        }
        Ok(Self::canonicalize(self.dim, raw))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MeasureError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_weights(|w| -w.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        let scaled = self.map_weights(|w| w.clone() * c.clone());
        // Scaling by zero (or a float tiny enough to underflow the pruning
        // threshold) must still yield a canonical measure.
        Self::canonicalize(
            self.dim,
            scaled
                .atoms
                .into_iter()
                .map(|a| (a.location, a.weight))
                .collect(),
        )
    }

    fn map_weights(&self, f: impl Fn(&S) -> S) -> Self {
        AtomicMeasure {
            dim: self.dim,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    location: a.location.clone(),
                    weight: f(&a.weight),
                })
                .collect(),
        }
    }

    /// Keeps exactly the atoms whose locations lie in the region.
    pub fn restrict(&self, region: &RegionSpec) -> Result<Self, MeasureError> {
        region.check_dim(self.dim)?;
        let mut atoms = Vec::new();
        for a in &self.atoms {
            if region.contains(&a.location)? {
                atoms.push(a.clone());
            }
        }
        Ok(AtomicMeasure {
            dim: self.dim,
            atoms,
        })
    }

    /// True iff the restrictions of both measures to the region agree.
    ///
    /// Exact mode demands `tol = 0` and representation equality; float mode
    /// matches atom locations under the coordinate threshold and allows
    /// weight deviations up to `tol` (unmatched atoms must carry weight
    /// `<= tol` in absolute value).
    pub fn equal_on(
        &self,
        other: &Self,
        region: &RegionSpec,
        tol: &S,
    ) -> Result<bool, MeasureError> {
        self.check_same_dim(other)?;
        if S::EXACT && !tol.is_zero() {
            return Err(MeasureError::InvalidTolerance);
        }
        if tol < &S::zero() {
            return Err(MeasureError::InvalidTolerance);
        }
        let lhs = self.restrict(region)?;
        let rhs = other.restrict(region)?;
        let (mut i, mut j) = (0, 0);
        let within = |d: &S| d.abs() <= *tol || (S::EXACT && d.is_zero());
        while i < lhs.atoms.len() && j < rhs.atoms.len() {
            let (a, b) = (&lhs.atoms[i], &rhs.atoms[j]);
            if coords_eq(&a.location, &b.location) {
                if !within(&(a.weight.clone() - b.weight.clone())) {
                    return Ok(false);
                }
                i += 1;
                j += 1;
            } else if lex_cmp(&a.location, &b.location) == Ordering::Less {
                if !within(&a.weight) {
                    return Ok(false);
                }
                i += 1;
            } else {
                if !within(&b.weight) {
                    return Ok(false);
                }
                j += 1;
            }
        }
        Ok(lhs.atoms[i..].iter().all(|a| within(&a.weight))
            && rhs.atoms[j..].iter().all(|b| within(&b.weight)))
    }

    /// Sum of absolute atom weights.
    pub fn total_variation(&self) -> S {
        self.atoms
            .iter()
            .fold(S::zero(), |acc, a| acc + a.weight.abs())
    }

    /// Largest bit size over numerators and denominators of exact weights;
    /// a deterministic proxy for arithmetic cost in reports.
    pub fn max_weight_bits(&self) -> u64
    where
        S: WeightBits,
    {
        self.atoms
            .iter()
            .map(|a| a.weight.bits())
            .max()
            .unwrap_or(0)
    }
}

/// Bit-size probe used by the cost counters.
pub trait WeightBits {
    fn bits(&self) -> u64;
}

impl WeightBits for Rational {
    fn bits(&self) -> u64 {
        self.numer().bits().max(self.denom().bits())
    }
}

impl WeightBits for f64 {
    fn bits(&self) -> u64 {
        64
    }
}

impl fmt::Display for AtomicMeasure<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (dim {})", self.dim);
        }
        write!(f, "{{")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, c) in a.location.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", format_rational(c))?;
            }
            write!(f, "): {}", format_rational(&a.weight))?;
        }
        write!(f, "}}")
    }
}

fn serialize_measure<Sr, S, FX, FW>(
    measure: &AtomicMeasure<S>,
    mode: &str,
    fx: FX,
    fw: FW,
    serializer: Sr,
) -> Result<Sr::Ok, Sr::Error>
where
    Sr: Serializer,
    S: Scalar,
    FX: Fn(&S) -> serde_json_value::CoordRepr,
    FW: Fn(&S) -> serde_json_value::CoordRepr,
{
    #[derive(Serialize)]
    struct AtomRepr {
        x: Vec<serde_json_value::CoordRepr>,
        w: serde_json_value::CoordRepr,
    }
    let atoms: Vec<AtomRepr> = measure
        .atoms
        .iter()
        .map(|a| AtomRepr {
            x: a.location.iter().map(&fx).collect(),
            w: fw(&a.weight),
        })
        .collect();
    let mut st = serializer.serialize_struct("Measure", 3)?;
    st.serialize_field("dim", &measure.dim)?;
    st.serialize_field("mode", mode)?;
    st.serialize_field("atoms", &atoms)?;
    st.end()
}

mod serde_json_value {
    use alloc::string::String;
    use serde::{Serialize, Serializer};

    /// Exact scalars serialize as `"p/q"` strings, float scalars as numbers.
    pub enum CoordRepr {
        Exact(String),
        Float(f64),
    }

    impl Serialize for CoordRepr {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            match self {
                CoordRepr::Exact(v) => s.serialize_str(v),
                CoordRepr::Float(v) => s.serialize_f64(*v),
            }
        }
    }
}

impl Serialize for AtomicMeasure<Rational> {
    fn serialize<Sr: Serializer>(&self, serializer: Sr) -> Result<Sr::Ok, Sr::Error> {
        serialize_measure(
            self,
            "exact",
            |c| serde_json_value::CoordRepr::Exact(format_rational(c)),
            |w| serde_json_value::CoordRepr::Exact(format_rational(w)),
            serializer,
        )
    }
}

impl Serialize for AtomicMeasure<f64> {
    fn serialize<Sr: Serializer>(&self, serializer: Sr) -> Result<Sr::Ok, Sr::Error> {
        serialize_measure(
            self,
            "float",
            |c| serde_json_value::CoordRepr::Float(*c),
            |w| serde_json_value::CoordRepr::Float(*w),
            serializer,
        )
    }
}

/// Convenience constructors used across tests and samplers.
pub fn exact_measure_1d(atoms: &[(i64, i64)]) -> AtomicMeasure<Rational> {
    let raw = atoms
        .iter()
        .map(|(x, w)| (alloc::vec![Rational::from_i64(*x)], Rational::from_i64(*w)))
        .collect();
    AtomicMeasure::new(1, raw).expect("valid 1d measure")
}

pub fn exact_measure_2d(atoms: &[((i64, i64), (i64, i64))]) -> AtomicMeasure<Rational> {
    let raw = atoms
        .iter()
        .map(|((x, y), (num, den))| {
            (
                alloc::vec![Rational::from_i64(*x), Rational::from_i64(*y)],
                Rational::new((*num).into(), (*den).into()),
            )
        })
        .collect();
    AtomicMeasure::new(2, raw).expect("valid 2d measure")
}
