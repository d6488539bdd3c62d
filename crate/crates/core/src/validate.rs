//! Code-level validity: CAC and SCAC membership with violation witnesses,
//! solitary-gap detection, the gap-count feasibility inequality, and leaves.
//!
//! A code C = {I_1, …, I_M} ⊆ Z_L is conflict-avoiding (CAC) when the d* sets
//! are pairwise disjoint, and strongly conflict-avoiding (SCAC) when
//! additionally no d* meets {1, L−1} and the d⁺ sets are pairwise disjoint.
//! The second pair of conditions forces ∪ d⁺ ⊆ {2, …, L−1}, which is what
//! makes the tube/gap decomposition of [`crate::ring`] applicable.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{
    decompose, Codeword, DifferenceProfile, Interval, ResidueSet, RingError, Roughness,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidateError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("code must contain at least one codeword")]
    EmptyCode,
    #[error("codeword {index} has length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("codeword {index} has weight {found}, expected {expected}")]
    WeightMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("codeword {0} appears more than once")]
    DuplicateCodeword(String),
    #[error("codeword index {index} out of range for a code of {size} codewords")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("operation is defined for strongly conflict-avoiding codes only")]
    NotStronglyConflictAvoiding,
}

/// A set of codewords with common length and weight, in caller order.
///
/// JSON form: `{"L": 28, "w": 3, "codewords": [[0,2,4],[0,7,14],[0,9,18]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CodeRepr", into = "CodeRepr")]
pub struct Code {
    length: usize,
    weight: usize,
    codewords: Vec<Codeword>,
}

impl Code {
    pub fn new(length: usize, codewords: Vec<Codeword>) -> Result<Self, ValidateError> {
        let Some(first) = codewords.first() else {
            return Err(ValidateError::EmptyCode);
        };
        let weight = first.weight();
        let mut seen = BTreeSet::new();
        for (index, codeword) in codewords.iter().enumerate() {
            if codeword.length() != length {
                return Err(ValidateError::LengthMismatch {
                    index,
                    expected: length,
                    found: codeword.length(),
                });
            }
            if codeword.weight() != weight {
                return Err(ValidateError::WeightMismatch {
                    index,
                    expected: weight,
                    found: codeword.weight(),
                });
            }
            if !seen.insert(codeword.elements().to_vec()) {
                return Err(ValidateError::DuplicateCodeword(codeword.to_string()));
            }
        }
        Ok(Code {
            length,
            weight,
            codewords,
        })
    }

    /// Builds a code from plain element lists.
    pub fn from_rows(length: usize, rows: Vec<Vec<usize>>) -> Result<Self, ValidateError> {
        let codewords = rows
            .into_iter()
            .map(|row| Codeword::new(length, row))
            .collect::<Result<Vec<_>, _>>()?;
        Code::new(length, codewords)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    /// M: the number of codewords.
    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    pub fn profiles(&self) -> Vec<DifferenceProfile> {
        self.codewords.iter().map(Codeword::profile).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct CodeRepr {
    #[serde(rename = "L")]
    length: usize,
    #[serde(rename = "w")]
    weight: usize,
    codewords: Vec<Vec<usize>>,
}

impl TryFrom<CodeRepr> for Code {
    type Error = ValidateError;

    fn try_from(repr: CodeRepr) -> Result<Self, ValidateError> {
        let code = Code::from_rows(repr.length, repr.codewords)?;
        if code.weight() != repr.weight {
            return Err(ValidateError::WeightMismatch {
                index: 0,
                expected: repr.weight,
                found: code.weight(),
            });
        }
        Ok(code)
    }
}

impl From<Code> for CodeRepr {
    fn from(code: Code) -> CodeRepr {
        CodeRepr {
            length: code.length,
            weight: code.weight,
            codewords: code
                .codewords
                .iter()
                .map(|c| c.elements().to_vec())
                .collect(),
        }
    }
}

/// Which disjointness condition a violation breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    /// {1, L−1} ∩ d*(I_j) ≠ ∅ — the codeword contains circularly adjacent
    /// elements, ruling it out of any SCAC.
    #[serde(rename = "self-adjacent")]
    SelfAdjacent,
    /// d*(I_j) ∩ d*(I_k) ≠ ∅ — breaks the CAC condition.
    #[serde(rename = "shared-difference")]
    SharedDifference,
    /// d⁺(I_j) ∩ d⁺(I_k) ≠ ∅ — breaks the SCAC condition.
    #[serde(rename = "shared-shifted-difference")]
    SharedShiftedDifference,
}

/// One broken condition, with the smallest residue witnessing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Index of the (first) codeword involved.
    pub codeword: usize,
    /// Second codeword of a pairwise violation; absent for per-codeword ones.
    pub other: Option<usize>,
    pub residue: usize,
}

/// Everything [`validate`] learns about a code in one pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub length: usize,
    pub weight: usize,
    /// Number of codewords.
    pub size: usize,
    pub is_cac: bool,
    pub is_scac: bool,
    /// Violations in scan order: self-adjacency per codeword, then shared
    /// differences per pair, then shared shifted differences per pair.
    pub violations: Vec<Violation>,
    /// λ_j, the number of solitary gaps of each codeword; present only for
    /// SCACs, where the tube/gap decomposition is defined.
    pub solitary_gap_counts: Option<Vec<usize>>,
}

fn first_common(a: &ResidueSet, b: &ResidueSet) -> Option<usize> {
    a.iter().find(|&r| b.contains(r))
}

/// Checks both membership conditions and collects every violation.
pub fn validate(code: &Code) -> ValidationReport {
    let length = code.length();
    let profiles = code.profiles();
    let mut violations = Vec::new();

    for (j, profile) in profiles.iter().enumerate() {
        if !profile.scac_admissible() {
            let residue = if profile.d_star().contains(1) {
                1
            } else {
                length - 1
            };
            violations.push(Violation {
                kind: ViolationKind::SelfAdjacent,
                codeword: j,
                other: None,
                residue,
            });
        }
    }
    for kind in [
        ViolationKind::SharedDifference,
        ViolationKind::SharedShiftedDifference,
    ] {
        for j in 0..profiles.len() {
            for k in j + 1..profiles.len() {
                let (a, b) = match kind {
                    ViolationKind::SharedDifference => {
                        (profiles[j].d_star(), profiles[k].d_star())
                    }
                    _ => (profiles[j].d_plus(), profiles[k].d_plus()),
                };
                if let Some(residue) = first_common(a, b) {
                    violations.push(Violation {
                        kind,
                        codeword: j,
                        other: Some(k),
                        residue,
                    });
                }
            }
        }
    }

    let is_cac = !violations
        .iter()
        .any(|v| v.kind == ViolationKind::SharedDifference);
    let is_scac = violations.is_empty();
    let solitary_gap_counts = is_scac.then(|| {
        (0..profiles.len())
            .map(|j| solitary_gaps_of_profiles(&profiles, j).len())
            .collect()
    });

    ValidationReport {
        length,
        weight: code.weight(),
        size: code.size(),
        is_cac,
        is_scac,
        violations,
        solitary_gap_counts,
    }
}

/// CAC membership: pairwise disjoint d* sets.
pub fn is_cac(code: &Code) -> bool {
    validate(code).is_cac
}

/// SCAC membership: no d* meets {1, L−1} and the d⁺ sets are pairwise
/// disjoint. Implies [`is_cac`].
pub fn is_scac(code: &Code) -> bool {
    validate(code).is_scac
}

/// Gaps of d⁺(I_j), assuming every profile is admissible (SCAC checked by
/// callers), that are E-rough (O-rough) and contain no E-rough (O-rough) tube
/// of the whole code's ∪ d⁺. Flat gaps are never solitary.
fn solitary_gaps_of_profiles(profiles: &[DifferenceProfile], j: usize) -> Vec<Interval> {
    let length = profiles[j].length();
    let mut union = ResidueSet::new(length);
    for profile in profiles {
        union.union_in_place(profile.d_plus());
    }
    let all_tubes = decompose(&union)
        .expect("admissible profiles keep d⁺ inside {2, …, L−1}")
        .tubes;
    decompose(profiles[j].d_plus())
        .expect("admissible profiles keep d⁺ inside {2, …, L−1}")
        .gaps
        .into_iter()
        .filter(|gap| {
            gap.roughness != Roughness::Flat
                && !all_tubes
                    .iter()
                    .any(|tube| tube.roughness == gap.roughness && tube.within(gap))
        })
        .collect()
}

/// The solitary gaps of codeword `j` (0-based index into the code).
///
/// Defined for SCACs; errs on anything else or on an out-of-range index.
pub fn solitary_gaps(code: &Code, j: usize) -> Result<Vec<Interval>, ValidateError> {
    if j >= code.size() {
        return Err(ValidateError::IndexOutOfRange {
            index: j,
            size: code.size(),
        });
    }
    if !is_scac(code) {
        return Err(ValidateError::NotStronglyConflictAvoiding);
    }
    Ok(solitary_gaps_of_profiles(&code.profiles(), j))
}

/// Necessary condition on SCAC sizes: L ≥ 2 + λ_j + Σ_{I∈C} |d⁺(I)| for every
/// codeword j. A well-formed SCAC can never return false; false indicates a
/// bug in the caller's construction (or this crate).
pub fn gap_bound_check(code: &Code) -> Result<bool, ValidateError> {
    let profiles = code.profiles();
    if !is_scac(code) {
        return Err(ValidateError::NotStronglyConflictAvoiding);
    }
    let total: usize = profiles.iter().map(|p| p.d_plus().len()).sum();
    Ok((0..profiles.len()).all(|j| {
        let lambda = solitary_gaps_of_profiles(&profiles, j).len();
        code.length() >= 2 + lambda + total
    }))
}

/// The leave Λ = Z_L \ ∪ d(I) and the optimality conditions read off it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leave {
    pub residues: Vec<usize>,
    /// Λ = ∅: every residue is covered by some difference set.
    pub tight: bool,
    /// |Λ| < 4 and {L/3, 2L/3} ⊄ Λ. When an optimal equi-difference code has
    /// a leave of this shape, no general code can beat it.
    pub equi_optimality_condition: bool,
}

/// Computes the leave of a code. Defined for any length; the optimality
/// reading targets odd lengths.
pub fn leave(code: &Code) -> Leave {
    let length = code.length();
    let mut covered = ResidueSet::new(length);
    for profile in code.profiles() {
        covered.union_in_place(profile.d());
    }
    let residues: Vec<usize> = (0..length).filter(|&r| !covered.contains(r)).collect();
    let thirds_inside = length % 3 == 0
        && residues.binary_search(&(length / 3)).is_ok()
        && residues.binary_search(&(2 * length / 3)).is_ok();
    Leave {
        tight: residues.is_empty(),
        equi_optimality_condition: residues.len() < 4 && !thirds_inside,
        residues,
    }
}
