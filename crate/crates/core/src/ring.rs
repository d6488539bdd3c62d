//! Residue arithmetic over Z_L: codewords, difference profiles, and the
//! tube/gap decomposition of subsets of the linear domain {2, …, L−1}.
//!
//! For a codeword I ⊆ Z_L the three difference sets are
//!
//! - d(I)  = { a − b mod L : a, b ∈ I },
//! - d*(I) = d(I) \ {0}            (nonzero differences, symmetric),
//! - d⁺(I) = d*(I) + {0, 1} mod L  (shifted nonzero differences).
//!
//! Disjointness of d* across codewords is the CAC condition; disjointness of
//! d⁺ plus per-codeword avoidance of {1, L−1} is the SCAC condition. All of
//! them are translation- and reflection-invariant, which the search oracle
//! exploits through [`Codeword::canonical`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from codeword construction, parsing, and classification.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("ring length must be at least 2, got {0}")]
    LengthTooSmall(usize),
    #[error("element {element} out of range for Z_{length}")]
    ElementOutOfRange { element: usize, length: usize },
    #[error("repeated element {0} in codeword")]
    RepeatedElement(usize),
    #[error("codeword must contain at least one element")]
    EmptyCodeword,
    #[error("residue {residue} lies outside the linear domain {{2, …, {length}−1}}")]
    OutsideLinearDomain { residue: usize, length: usize },
    #[error("classification is defined for weight 3 only, got weight {0}")]
    UnsupportedWeight(usize),
    #[error("classification requires length ≥ 6, got {0}")]
    LengthTooShortToClassify(usize),
    #[error("generator {generator} violates the convention 1 ≤ g ≤ {length}/2")]
    GeneratorOutOfRange { generator: usize, length: usize },
    #[error("generator {generator} yields repeated elements modulo {length}")]
    DegenerateGenerator { generator: usize, length: usize },
    #[error("malformed codeword literal: {0}")]
    Parse(String),
}

const WORD_BITS: usize = 64;

/// A set of residues of Z_L backed by a fixed-width bitmap.
///
/// Disjointness tests — the hot operation of the search oracle — are a
/// handful of bitwise ANDs.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueSet {
    length: usize,
    words: Vec<u64>,
}

impl ResidueSet {
    /// The empty subset of Z_L.
    pub fn new(length: usize) -> Self {
        assert!(length >= 1, "ring length must be positive");
        ResidueSet {
            length,
            words: vec![0; length.div_ceil(WORD_BITS)],
        }
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(length: usize, members: I) -> Self {
        let mut set = ResidueSet::new(length);
        for r in members {
            set.insert(r);
        }
        set
    }

    /// Modulus L of the underlying ring.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn insert(&mut self, residue: usize) {
        assert!(residue < self.length, "residue {residue} out of range");
        self.words[residue / WORD_BITS] |= 1 << (residue % WORD_BITS);
    }

    pub fn contains(&self, residue: usize) -> bool {
        residue < self.length
            && self.words[residue / WORD_BITS] & (1 << (residue % WORD_BITS)) != 0
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_disjoint(&self, other: &ResidueSet) -> bool {
        debug_assert_eq!(self.length, other.length);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & b == 0)
    }

    pub fn union_in_place(&mut self, other: &ResidueSet) {
        debug_assert_eq!(self.length, other.length);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn union(&self, other: &ResidueSet) -> ResidueSet {
        let mut out = self.clone();
        out.union_in_place(other);
        out
    }

    /// The set { (x + shift) mod L : x ∈ self }.
    pub fn rotated(&self, shift: usize) -> ResidueSet {
        let mut out = ResidueSet::new(self.length);
        for r in self.iter() {
            out.insert((r + shift) % self.length);
        }
        out
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            std::iter::successors(Some(word), |&w| (w > 0).then(|| w & (w - 1)))
                .take_while(|&w| w != 0)
                .map(move |w| i * WORD_BITS + w.trailing_zeros() as usize)
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}@{}", self.length)
    }
}

/// A sorted ω-subset of Z_L — one user's transmission pattern per period.
///
/// Text form: `{0,4,7}@26`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    length: usize,
    elements: Vec<usize>,
}

impl Codeword {
    pub fn new(length: usize, mut elements: Vec<usize>) -> Result<Self, RingError> {
        if length < 2 {
            return Err(RingError::LengthTooSmall(length));
        }
        if elements.is_empty() {
            return Err(RingError::EmptyCodeword);
        }
        elements.sort_unstable();
        for pair in elements.windows(2) {
            if pair[0] == pair[1] {
                return Err(RingError::RepeatedElement(pair[0]));
            }
        }
        if let Some(&max) = elements.last() {
            if max >= length {
                return Err(RingError::ElementOutOfRange {
                    element: max,
                    length,
                });
            }
        }
        Ok(Codeword { length, elements })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Weight ω: the number of elements.
    pub fn weight(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// The translate I + {shift}.
    pub fn translate(&self, shift: usize) -> Codeword {
        let elements = self
            .elements
            .iter()
            .map(|&e| (e + shift) % self.length)
            .collect();
        Codeword::new(self.length, elements).expect("translate preserves validity")
    }

    /// The reflection −I.
    pub fn reflected(&self) -> Codeword {
        let elements = self
            .elements
            .iter()
            .map(|&e| (self.length - e) % self.length)
            .collect();
        Codeword::new(self.length, elements).expect("reflection preserves validity")
    }

    /// Lexicographically least codeword among all translates of I and of −I.
    ///
    /// Difference profiles are invariant under translation and reflection, so
    /// this is a canonical representative of the orbit sharing d, d*, d⁺.
    pub fn canonical(&self) -> Codeword {
        let mut best: Option<Vec<usize>> = None;
        for base in [self.clone(), self.reflected()] {
            for &a in &base.elements {
                let mut shifted: Vec<usize> = base
                    .elements
                    .iter()
                    .map(|&e| (e + self.length - a) % self.length)
                    .collect();
                shifted.sort_unstable();
                if best.as_ref().is_none_or(|b| shifted < *b) {
                    best = Some(shifted);
                }
            }
        }
        Codeword::new(self.length, best.expect("nonempty codeword"))
            .expect("canonicalization preserves validity")
    }

    /// The difference profile (d, d*, d⁺) of this codeword.
    pub fn profile(&self) -> DifferenceProfile {
        DifferenceProfile::of(self)
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}@{}", self.length)
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Codeword {
    type Err = RingError;

    /// Parses the text form `{0,4,7}@26`.
    fn from_str(s: &str) -> Result<Self, RingError> {
        let s = s.trim();
        let malformed = || RingError::Parse(s.to_string());
        let rest = s.strip_prefix('{').ok_or_else(malformed)?;
        let (body, length) = rest.split_once("}@").ok_or_else(malformed)?;
        let length: usize = length.trim().parse().map_err(|_| malformed())?;
        let mut elements = Vec::new();
        for part in body.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(malformed());
            }
            elements.push(part.parse().map_err(|_| malformed())?);
        }
        Codeword::new(length, elements)
    }
}

/// The difference sets d(I), d*(I), d⁺(I) of one codeword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceProfile {
    length: usize,
    d: ResidueSet,
    d_star: ResidueSet,
    d_plus: ResidueSet,
}

impl DifferenceProfile {
    pub fn of(codeword: &Codeword) -> Self {
        let length = codeword.length();
        let mut d_star = ResidueSet::new(length);
        for &a in codeword.elements() {
            for &b in codeword.elements() {
                if a != b {
                    d_star.insert((a + length - b) % length);
                }
            }
        }
        let mut d = d_star.clone();
        d.insert(0);
        let d_plus = d_star.union(&d_star.rotated(1));
        DifferenceProfile {
            length,
            d,
            d_star,
            d_plus,
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// d(I): all differences, including 0.
    pub fn d(&self) -> &ResidueSet {
        &self.d
    }

    /// d*(I): nonzero differences; symmetric (x ∈ d* ⇔ L−x ∈ d*).
    pub fn d_star(&self) -> &ResidueSet {
        &self.d_star
    }

    /// d⁺(I) = d*(I) + {0,1} mod L.
    pub fn d_plus(&self) -> &ResidueSet {
        &self.d_plus
    }

    /// Per-codeword SCAC condition: {1, L−1} ∩ d* = ∅.
    pub fn scac_admissible(&self) -> bool {
        !self.d_star.contains(1) && !self.d_star.contains(self.length - 1)
    }

    /// True when no two distinct members of d(I) are circularly consecutive.
    ///
    /// Dispersive codewords have |d⁺| = 2·|d*|: every shift lands outside d*.
    pub fn is_dispersive(&self) -> bool {
        self.d
            .iter()
            .all(|x| !self.d.contains((x + 1) % self.length) || self.length == 1)
    }
}

/// Parity class of a tube or gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Roughness {
    /// Both endpoints even.
    #[serde(rename = "E-rough")]
    EvenRough,
    /// Both endpoints odd.
    #[serde(rename = "O-rough")]
    OddRough,
    /// Mixed-parity endpoints.
    #[serde(rename = "flat")]
    Flat,
}

impl Roughness {
    fn of(lo: usize, hi: usize) -> Roughness {
        match (lo % 2, hi % 2) {
            (0, 0) => Roughness::EvenRough,
            (1, 1) => Roughness::OddRough,
            _ => Roughness::Flat,
        }
    }
}

/// A maximal run of consecutive residues, with its parity class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
    pub roughness: Roughness,
}

impl Interval {
    fn new(lo: usize, hi: usize) -> Interval {
        Interval {
            lo,
            hi,
            roughness: Roughness::of(lo, hi),
        }
    }

    /// Inclusion used by the solitary-gap test: self fits inside `outer`.
    pub fn within(&self, outer: &Interval) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }
}

/// Maximal runs inside the set (tubes) and inside its complement (gaps),
/// both restricted to the linear domain {2, …, L−1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubeGapDecomposition {
    pub length: usize,
    pub tubes: Vec<Interval>,
    pub gaps: Vec<Interval>,
}

/// Splits a subset of {2, …, L−1} into tubes and gaps.
///
/// The domain is linear, not circular: positions 2 and L−1 are not adjacent.
/// Sets containing 0 or 1 are rejected — shifted difference sets of
/// admissible codewords never meet {0, 1}.
pub fn decompose(set: &ResidueSet) -> Result<TubeGapDecomposition, RingError> {
    let length = set.length();
    for r in [0, 1] {
        if set.contains(r) {
            return Err(RingError::OutsideLinearDomain {
                residue: r,
                length,
            });
        }
    }
    let mut tubes = Vec::new();
    let mut gaps = Vec::new();
    let mut run_start: Option<(usize, bool)> = None;
    for pos in 2..=length {
        let inside = pos < length && set.contains(pos);
        match run_start {
            Some((start, was_inside)) if pos == length || inside != was_inside => {
                let interval = Interval::new(start, pos - 1);
                if was_inside {
                    tubes.push(interval);
                } else {
                    gaps.push(interval);
                }
                run_start = if pos < length {
                    Some((pos, inside))
                } else {
                    None
                };
            }
            None if pos < length => run_start = Some((pos, inside)),
            _ => {}
        }
    }
    Ok(TubeGapDecomposition {
        length,
        tubes,
        gaps,
    })
}

/// Shape of a weight-3 codeword, determined by its circular gap sequence.
///
/// An equi-difference codeword is a translate of {0, g, 2g}; its generator is
/// stored in the normal form min(g, L−g) ≤ L/2, which makes the four small
/// shifted-difference families a direct equality test on g:
/// E2 (g = L/3, |d⁺| = 4), E1 (g = L/4, |d⁺| = 6), N1 (g = (L−1)/3) and
/// N2 (g = (L+1)/3), both with |d⁺| = 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodewordKind {
    /// Equi-difference, generator exactly L/4.
    E1 { generator: usize },
    /// Equi-difference, generator exactly L/3.
    E2 { generator: usize },
    /// Equi-difference, generator exactly (L−1)/3.
    N1 { generator: usize },
    /// Equi-difference, generator exactly (L+1)/3.
    N2 { generator: usize },
    /// Equi-difference with any other generator.
    EquiGeneric { generator: usize },
    /// Not equi-difference; circular gaps q_lo < q_mid < q_hi sum to L.
    NonEqui {
        q_lo: usize,
        q_mid: usize,
        q_hi: usize,
    },
}

impl CodewordKind {
    pub fn generator(&self) -> Option<usize> {
        match *self {
            CodewordKind::E1 { generator }
            | CodewordKind::E2 { generator }
            | CodewordKind::N1 { generator }
            | CodewordKind::N2 { generator }
            | CodewordKind::EquiGeneric { generator } => Some(generator),
            CodewordKind::NonEqui { .. } => None,
        }
    }

    pub fn is_equi(&self) -> bool {
        self.generator().is_some()
    }
}

/// Classification record for a weight-3 codeword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodewordClass {
    pub kind: CodewordKind,
    /// |d*(I)| computed from the profile.
    pub d_star_size: usize,
    /// |d⁺(I)| computed from the profile.
    pub d_plus_size: usize,
    /// No two distinct members of d(I) circularly consecutive.
    pub dispersive: bool,
    /// |d*| < 4 (exactly the generators L/3 and L/4).
    pub exceptional: bool,
    /// {1, L−1} ∩ d* = ∅.
    pub admissible: bool,
}

/// What the closed-form size analysis promises for |d⁺|.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizePrediction {
    Exactly(usize),
    AtLeast(usize),
}

/// Classifies a weight-3 codeword by its circular gap sequence.
pub fn classify(codeword: &Codeword) -> Result<CodewordClass, RingError> {
    if codeword.weight() != 3 {
        return Err(RingError::UnsupportedWeight(codeword.weight()));
    }
    let length = codeword.length();
    if length < 6 {
        return Err(RingError::LengthTooShortToClassify(length));
    }
    let e = codeword.elements();
    let q = [e[1] - e[0], e[2] - e[1], length - e[2] + e[0]];

    // In a circular sequence of three gaps every two positions are adjacent,
    // so the codeword is equi-difference iff some two gaps are equal; the
    // repeated gap is the generator and is < L/2 automatically (2g < L).
    let generator = if q[0] == q[1] || q[0] == q[2] {
        Some(q[0])
    } else if q[1] == q[2] {
        Some(q[1])
    } else {
        None
    };

    let kind = match generator {
        Some(g) => {
            if 3 * g == length {
                CodewordKind::E2 { generator: g }
            } else if 4 * g == length {
                CodewordKind::E1 { generator: g }
            } else if 3 * g == length - 1 {
                CodewordKind::N1 { generator: g }
            } else if 3 * g == length + 1 {
                CodewordKind::N2 { generator: g }
            } else {
                CodewordKind::EquiGeneric { generator: g }
            }
        }
        None => {
            let mut sorted = q;
            sorted.sort_unstable();
            CodewordKind::NonEqui {
                q_lo: sorted[0],
                q_mid: sorted[1],
                q_hi: sorted[2],
            }
        }
    };

    let profile = codeword.profile();
    let d_star_size = profile.d_star().len();
    Ok(CodewordClass {
        kind,
        d_star_size,
        d_plus_size: profile.d_plus().len(),
        dispersive: profile.is_dispersive(),
        exceptional: d_star_size < 4,
        admissible: profile.scac_admissible(),
    })
}

/// |d*| forced by the kind alone: 2 for generator L/3, 3 for L/4, 4 for any
/// other equi-difference codeword; 5 for non-equi with q_hi = L/2, else 6.
pub fn predicted_d_star_size(kind: &CodewordKind, length: usize) -> usize {
    match *kind {
        CodewordKind::E2 { .. } => 2,
        CodewordKind::E1 { .. } => 3,
        CodewordKind::N1 { .. } | CodewordKind::N2 { .. } | CodewordKind::EquiGeneric { .. } => 4,
        CodewordKind::NonEqui { q_hi, .. } => {
            if 2 * q_hi == length {
                5
            } else {
                6
            }
        }
    }
}

/// |d⁺| predicted in closed form. Defined only where the prediction holds:
/// even length and an admissible codeword ({1, L−1} ∩ d* = ∅); returns `None`
/// outside that domain.
///
/// Equi-difference: 4 for E2, 6 for E1/N1/N2, 8 for every other generator.
/// Non-equi: exactly 8 for the two sporadic gap patterns
/// (q_lo+1 = q_mid = q_hi−1 = L/3 with q_hi < L/2, or
/// q_mid = q_lo+1 = (L+2)/4 with q_hi = L/2), at least 10 otherwise.
pub fn predicted_d_plus_size(class: &CodewordClass, length: usize) -> Option<SizePrediction> {
    if length % 2 != 0 || !class.admissible {
        return None;
    }
    let p = match class.kind {
        CodewordKind::E2 { .. } => SizePrediction::Exactly(4),
        CodewordKind::E1 { .. } | CodewordKind::N1 { .. } | CodewordKind::N2 { .. } => {
            SizePrediction::Exactly(6)
        }
        CodewordKind::EquiGeneric { .. } => SizePrediction::Exactly(8),
        CodewordKind::NonEqui { q_lo, q_mid, q_hi } => {
            let straddle = q_lo + 1 == q_mid && q_mid + 1 == q_hi && 3 * q_mid == length
                && 2 * q_hi < length;
            let half = q_mid == q_lo + 1 && 4 * q_mid == length + 2 && 2 * q_hi == length;
            if straddle || half {
                SizePrediction::Exactly(8)
            } else {
                SizePrediction::AtLeast(10)
            }
        }
    };
    Some(p)
}

/// The equi-difference codeword {0, g, 2g, …, (ω−1)g} mod L.
///
/// Follows the generator convention 1 ≤ g ≤ L/2 and rejects generators that
/// repeat an element (e.g. g = L/2 with ω = 3).
pub fn equi_codeword(generator: usize, weight: usize, length: usize) -> Result<Codeword, RingError> {
    if length < 2 {
        return Err(RingError::LengthTooSmall(length));
    }
    if generator == 0 || 2 * generator > length {
        return Err(RingError::GeneratorOutOfRange { generator, length });
    }
    let elements: BTreeSet<usize> = (0..weight).map(|j| (j * generator) % length).collect();
    if elements.len() != weight {
        return Err(RingError::DegenerateGenerator { generator, length });
    }
    Codeword::new(length, elements.into_iter().collect())
}
