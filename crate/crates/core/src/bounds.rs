//! Closed-form exact values, upper bounds, and lower bounds for the maximum
//! code sizes M(L,3) (CAC) and M_S(L,3) (SCAC), plus dispatchers that return
//! the sharpest applicable statement or bracket for a given length.
//!
//! Every formula is implemented verbatim, hypotheses included. Statements
//! whose hypotheses fail — including formulas that come out non-integral —
//! report [`BoundKind::Inapplicable`] rather than a floored guess; the
//! dispatchers then fall back to weaker but valid brackets.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numth::{factorize, is_safe_prime};

/// Which maximum a bound talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// M(L,3): maximum size of a conflict-avoiding code.
    #[serde(rename = "M")]
    CacMax,
    /// M_S(L,3): maximum size of a strongly conflict-avoiding code.
    #[serde(rename = "MS")]
    ScacMax,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::CacMax => "M",
            Quantity::ScacMax => "MS",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Exact,
    Upper,
    Lower,
    Bracket,
    Inapplicable,
}

/// The closed-form statement that produced a number. One variant per
/// statement, so agreement between overlapping statements can be audited.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// M_S(L,3) = 1 for every even length 6 ≤ L < 18.
    SmallEven,
    /// The five-branch residue upper bound on M_S(L,3) for even L ≥ 18.
    EvenUpper,
    /// The older ⌊·/6⌋ upper bound on M_S(L,3), kept for comparison.
    LegacyUpper,
    /// M(L,3) = (L−2)/4 for L ≡ 2 (mod 4).
    Mod4Exact,
    /// The twelve-branch 7L/64 table for L ≡ 0 (mod 4).
    QuadTable,
    /// M(L,3) = (L−1)/4 for L = 2^(2t) + 1.
    PowerFormA,
    /// M(L,3) = (L+1)/4 for L = 2^(2^t) − 1.
    PowerFormB,
    /// M(L,3) = (L−1)/4 for L = 2^(2t−1) − 2^t + 1.
    PowerFormC,
    /// M(L,3) = (L−1)/4 for L = 2^(2t−1) + 2^t + 1.
    PowerFormD,
    /// Odd L, every prime factor ≡ 5 (mod 8): M = (L−1)/4.
    OddClassI,
    /// Odd L, 3 ∤ L, one safe non-conforming factor: M = (L−3)/4.
    OddClassII,
    /// Odd L, 3 ∥ L, every other factor ≡ 5 (mod 8): M = (L+1)/4.
    OddClassIII,
    /// Odd L, 3 ∥ L, one safe factor ≡ 7 (mod 8): M = (L−1)/4.
    OddClassIV,
    /// Odd L, 9 ∥ L, every factor > 3 ≡ 5 (mod 8): M = (L−1)/4.
    OddClassV,
    /// M_S(L,3) ≥ M(L/2,3) via the doubling construction.
    DoublingLower,
    /// M_S(L,3) ≥ 1 for even L ≥ 6 ({0,2,4} alone is an SCAC).
    TrivialLower,
    /// M_S(L,3) = (L−4)/8 for L ≡ 4 (mod 8), L ≥ 18.
    ScacMod8Exact,
    /// M_S(L,3) = (L−2)/8 for L = 2^(2t+1) + 2.
    ScacPowerA,
    /// M_S(L,3) = (L+2)/8 for L = 2^(2^t + 1) − 2.
    ScacPowerB,
    /// M_S(L,3) = (L−2)/8 for L = 2^(2t) − 2^(t+1) + 2.
    ScacPowerC,
    /// M_S(L,3) = (L−2)/8 for L = 2^(2t) + 2^(t+1) + 2.
    ScacPowerD,
    /// L ≡ 2 (mod 4) with L/2 in odd class (i): M_S = (L−2)/8.
    ScacOddHalfI,
    /// L ≡ 2 (mod 4) with L/2 in odd class (ii): M_S = (L−6)/8.
    ScacOddHalfII,
    /// L ≡ 2 (mod 4) with L/2 in odd class (iii): M_S = (L+2)/8.
    ScacOddHalfIII,
    /// L ≡ 2 (mod 4) with L/2 in odd class (iv): M_S = (L−2)/8.
    ScacOddHalfIV,
    /// L ≡ 2 (mod 4) with L/2 in odd class (v): M_S = (L−2)/8.
    ScacOddHalfV,
}

impl Provenance {
    pub const ALL: [Provenance; 26] = [
        Provenance::SmallEven,
        Provenance::EvenUpper,
        Provenance::LegacyUpper,
        Provenance::Mod4Exact,
        Provenance::QuadTable,
        Provenance::PowerFormA,
        Provenance::PowerFormB,
        Provenance::PowerFormC,
        Provenance::PowerFormD,
        Provenance::OddClassI,
        Provenance::OddClassII,
        Provenance::OddClassIII,
        Provenance::OddClassIV,
        Provenance::OddClassV,
        Provenance::DoublingLower,
        Provenance::TrivialLower,
        Provenance::ScacMod8Exact,
        Provenance::ScacPowerA,
        Provenance::ScacPowerB,
        Provenance::ScacPowerC,
        Provenance::ScacPowerD,
        Provenance::ScacOddHalfI,
        Provenance::ScacOddHalfII,
        Provenance::ScacOddHalfIII,
        Provenance::ScacOddHalfIV,
        Provenance::ScacOddHalfV,
    ];

    /// Stable identifier used in TSV and JSON output.
    pub fn id(self) -> &'static str {
        match self {
            Provenance::SmallEven => "small-even",
            Provenance::EvenUpper => "even-upper",
            Provenance::LegacyUpper => "legacy-upper",
            Provenance::Mod4Exact => "mod4-exact",
            Provenance::QuadTable => "quad-table",
            Provenance::PowerFormA => "power-form-a",
            Provenance::PowerFormB => "power-form-b",
            Provenance::PowerFormC => "power-form-c",
            Provenance::PowerFormD => "power-form-d",
            Provenance::OddClassI => "odd-class-i",
            Provenance::OddClassII => "odd-class-ii",
            Provenance::OddClassIII => "odd-class-iii",
            Provenance::OddClassIV => "odd-class-iv",
            Provenance::OddClassV => "odd-class-v",
            Provenance::DoublingLower => "doubling-lower",
            Provenance::TrivialLower => "trivial-lower",
            Provenance::ScacMod8Exact => "scac-mod8-exact",
            Provenance::ScacPowerA => "scac-power-a",
            Provenance::ScacPowerB => "scac-power-b",
            Provenance::ScacPowerC => "scac-power-c",
            Provenance::ScacPowerD => "scac-power-d",
            Provenance::ScacOddHalfI => "scac-odd-half-i",
            Provenance::ScacOddHalfII => "scac-odd-half-ii",
            Provenance::ScacOddHalfIII => "scac-odd-half-iii",
            Provenance::ScacOddHalfIV => "scac-odd-half-iv",
            Provenance::ScacOddHalfV => "scac-odd-half-v",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for Provenance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Provenance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Provenance::ALL
            .into_iter()
            .find(|p| p.id() == text)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown provenance `{text}`")))
    }
}

/// A numeric statement about M(L,3) or M_S(L,3).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub length: u64,
    pub quantity: Quantity,
    pub kind: BoundKind,
    pub lo: Option<u64>,
    pub hi: Option<u64>,
    /// Every statement that contributed; exact results list all agreeing
    /// statements, brackets list the lower then the upper source.
    pub provenance: Vec<Provenance>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl BoundResult {
    fn exact(length: u64, quantity: Quantity, value: u64, provenance: Provenance) -> Self {
        BoundResult {
            length,
            quantity,
            kind: BoundKind::Exact,
            lo: Some(value),
            hi: Some(value),
            provenance: vec![provenance],
            note: None,
        }
    }

    fn upper(length: u64, quantity: Quantity, value: u64, provenance: Provenance) -> Self {
        BoundResult {
            length,
            quantity,
            kind: BoundKind::Upper,
            lo: None,
            hi: Some(value),
            provenance: vec![provenance],
            note: None,
        }
    }

    fn inapplicable(length: u64, quantity: Quantity, note: impl Into<String>) -> Self {
        BoundResult {
            length,
            quantity,
            kind: BoundKind::Inapplicable,
            lo: None,
            hi: None,
            provenance: Vec::new(),
            note: Some(note.into()),
        }
    }

    /// The value of an exact result.
    pub fn value(&self) -> Option<u64> {
        (self.kind == BoundKind::Exact).then(|| self.lo.expect("exact bound stores lo"))
    }

    pub fn is_applicable(&self) -> bool {
        self.kind != BoundKind::Inapplicable
    }
}

fn exact_div(numerator: u64, denominator: u64) -> Option<u64> {
    (numerator % denominator == 0).then(|| numerator / denominator)
}

/// Residue-based upper bound on M_S(L,3) for even L ≥ 18.
pub fn ms_upper(length: u64) -> BoundResult {
    let q = Quantity::ScacMax;
    if length % 2 != 0 {
        return BoundResult::inapplicable(length, q, "defined for even lengths");
    }
    if length < 18 {
        return BoundResult::inapplicable(length, q, "defined for lengths of at least 18");
    }
    let value = match (length % 8, length % 24) {
        (0, _) => length / 8,
        (4, _) => (length - 4) / 8,
        (_, 6) => (length + 2) / 8,
        (_, 2) | (_, 10) | (_, 18) => (length - 2) / 8,
        (_, 14) | (_, 22) => (length - 6) / 8,
        _ => unreachable!("even residues are covered above"),
    };
    BoundResult::upper(length, q, value, Provenance::EvenUpper)
}

/// The older ⌊·/6⌋ upper bound on M_S(L,3), driven by the exponents of 3 and
/// 7 in L. Weaker than [`ms_upper`] everywhere; kept so the improvement can
/// be demonstrated.
pub fn ms_upper_legacy(length: u64) -> BoundResult {
    let q = Quantity::ScacMax;
    if length % 2 != 0 {
        return BoundResult::inapplicable(length, q, "defined for even lengths");
    }
    if length < 18 {
        return BoundResult::inapplicable(length, q, "defined for lengths of at least 18");
    }
    let mut rest = length;
    let mut threes = 0;
    while rest % 3 == 0 {
        threes += 1;
        rest /= 3;
    }
    let mut sevens = 0;
    while rest % 7 == 0 {
        sevens += 1;
        rest /= 7;
    }
    let value = match (threes > 0, sevens > 0) {
        (false, false) => (length - 2) / 6,
        (true, false) => length / 6,
        (false, true) => (length - 1) / 6,
        (true, true) => (length + 1) / 6,
    };
    BoundResult::upper(length, q, value, Provenance::LegacyUpper)
}

/// M(L,3) = (L−2)/4 for L ≡ 2 (mod 4), L ≥ 6.
pub fn mod4_exact(length: u64) -> BoundResult {
    let q = Quantity::CacMax;
    if length % 4 != 2 || length < 6 {
        return BoundResult::inapplicable(length, q, "defined for L ≡ 2 (mod 4), L ≥ 6");
    }
    BoundResult::exact(length, q, (length - 2) / 4, Provenance::Mod4Exact)
}

/// The numerator 7L + c of the L = 4t table, chosen by residue of t.
fn quad_table_numerator(length: u64, t: u64) -> u64 {
    let offset: i64 = match t % 24 {
        0 | 8 | 16 => 0,
        1 | 9 | 17 => 8,
        2 | 10 => -48,
        3 => 24,
        4 | 20 => -32,
        5 | 13 => -24,
        6 | 14 | 22 => -16,
        7 | 15 | 23 => -8,
        11 | 19 => -40,
        12 => 32,
        18 => 16,
        21 => 40,
        _ => unreachable!("all residues mod 24 are covered"),
    };
    // 7L ≥ 56 wherever a negative offset can apply (t ≥ 2 ⇒ L ≥ 8).
    (7 * length as i64 + offset) as u64
}

/// The twelve-branch table for M(L,3) with L = 4t, implemented verbatim.
///
/// For many small t the stated value is not an integer (e.g. t = 3 gives
/// 108/64); those lengths are reported inapplicable with the offending
/// fraction in the note, and left to the search oracle.
pub fn quad_table(length: u64) -> BoundResult {
    let q = Quantity::CacMax;
    if length % 4 != 0 || length == 0 {
        return BoundResult::inapplicable(length, q, "defined for multiples of 4");
    }
    let numerator = quad_table_numerator(length, length / 4);
    match exact_div(numerator, 64) {
        Some(value) => BoundResult::exact(length, q, value, Provenance::QuadTable),
        None => BoundResult::inapplicable(
            length,
            q,
            format!("table value {numerator}/64 is not an integer"),
        ),
    }
}

/// Exact M(L,3) statements for the four special power-of-two length forms.
/// A length can match several forms at once (L = 5 matches three); each match
/// is returned separately so agreement can be checked.
pub fn power_form_exact(length: u64) -> Vec<BoundResult> {
    let q = Quantity::CacMax;
    let mut out = Vec::new();
    if (1..=30u32).any(|t| length == (1u64 << (2 * t)) + 1) {
        out.push(BoundResult::exact(
            length,
            q,
            (length - 1) / 4,
            Provenance::PowerFormA,
        ));
    }
    if length == u64::MAX || (2..=5u32).any(|t| length == (1u64 << (1u64 << t)) - 1) {
        out.push(BoundResult::exact(
            length,
            q,
            (length + 1) / 4,
            Provenance::PowerFormB,
        ));
    }
    if (2..=30u32).any(|t| length == (1u64 << (2 * t - 1)) - (1u64 << t) + 1) {
        out.push(BoundResult::exact(
            length,
            q,
            (length - 1) / 4,
            Provenance::PowerFormC,
        ));
    }
    if (1..=30u32).any(|t| length == (1u64 << (2 * t - 1)) + (1u64 << t) + 1) {
        out.push(BoundResult::exact(
            length,
            q,
            (length - 1) / 4,
            Provenance::PowerFormD,
        ));
    }
    out
}

/// The prime-factor shape of an odd length, as used by the five-case
/// classification: the exponent of 3 and the factors ≢ 5 (mod 8) besides 3.
struct OddShape {
    three_exponent: u32,
    /// Prime factors p > 3 with p ≢ 5 (mod 8), with exponents.
    nonconforming: Vec<(u64, u32)>,
}

fn odd_shape(length: u64) -> OddShape {
    let factors = factorize(length);
    OddShape {
        three_exponent: factors
            .iter()
            .find(|(p, _)| *p == 3)
            .map_or(0, |&(_, e)| e),
        nonconforming: factors
            .into_iter()
            .filter(|&(p, _)| p != 3 && p % 8 != 5)
            .collect(),
    }
}

/// Exact M(L,3) for odd L > 3 via the five-case prime-shape classification:
///
/// - (i)   3 ∤ L, every factor ≡ 5 (mod 8): (L−1)/4
/// - (ii)  3 ∤ L, one safe factor ≢ 5 (mod 8), square-free in L, rest ≡ 5:
///   (L−3)/4
/// - (iii) 3 ∥ L, every factor > 3 ≡ 5 (mod 8): (L+1)/4
/// - (iv)  3 ∥ L, one safe factor ≡ 7 (mod 8), square-free in L, rest ≡ 5:
///   (L−1)/4
/// - (v)   9 ∥ L, every factor > 3 ≡ 5 (mod 8): (L−1)/4
///
/// For every matching case the value is exactly M(L,3) = M^e(L,3). Note that
/// 5 itself is a safe prime but conforms to ≡ 5 (mod 8), so it can never play
/// the exceptional-factor role in (ii) or (iv).
pub fn classify_odd_length(length: u64) -> BoundResult {
    let q = Quantity::CacMax;
    if length <= 3 || length % 2 == 0 {
        return BoundResult::inapplicable(length, q, "defined for odd lengths above 3");
    }
    let shape = odd_shape(length);
    let case = match (shape.three_exponent, shape.nonconforming.as_slice()) {
        (0, []) => Some((exact_div(length - 1, 4), Provenance::OddClassI)),
        (0, [(p, 1)]) if is_safe_prime(*p) => {
            Some((exact_div(length - 3, 4), Provenance::OddClassII))
        }
        (1, []) => Some((exact_div(length + 1, 4), Provenance::OddClassIII)),
        (1, [(p, 1)]) if p % 8 == 7 && is_safe_prime(*p) => {
            Some((exact_div(length - 1, 4), Provenance::OddClassIV))
        }
        (2, []) => Some((exact_div(length - 1, 4), Provenance::OddClassV)),
        _ => None,
    };
    match case {
        Some((Some(value), provenance)) => BoundResult::exact(length, q, value, provenance),
        // The matched cases always divide exactly; this arm is defensive.
        Some((None, provenance)) => BoundResult::inapplicable(
            length,
            q,
            format!("case {} yields a non-integer", provenance.id()),
        ),
        None => BoundResult::inapplicable(length, q, "prime-factor shape matches no case"),
    }
}

/// Every exact statement about M(L,3) that applies to this length, in fixed
/// dispatch order: mod-4 residue, the 4t table, power forms, odd
/// classification.
pub fn m_cac_statements(length: u64) -> Vec<BoundResult> {
    let mut statements = Vec::new();
    for candidate in [mod4_exact(length), quad_table(length)] {
        if candidate.is_applicable() {
            statements.push(candidate);
        }
    }
    statements.extend(power_form_exact(length));
    let odd = classify_odd_length(length);
    if odd.is_applicable() {
        statements.push(odd);
    }
    statements
}

/// Exact M(L,3) when any closed form applies, with every matching statement
/// recorded in the provenance. Statements that overlap must agree; an
/// inapplicable result carries the table diagnostic when the only candidate
/// was a non-integral table entry.
pub fn m_cac_exact(length: u64) -> BoundResult {
    let q = Quantity::CacMax;
    let statements = m_cac_statements(length);
    let Some(first) = statements.first() else {
        let table = quad_table(length);
        return match table.note {
            Some(note) if length % 4 == 0 => BoundResult::inapplicable(length, q, note),
            _ => BoundResult::inapplicable(length, q, "no exact statement applies"),
        };
    };
    let value = first.value().expect("statements are exact");
    debug_assert!(
        statements.iter().all(|s| s.value() == Some(value)),
        "overlapping statements disagree at L = {length}: {statements:?}"
    );
    BoundResult {
        length,
        quantity: q,
        kind: BoundKind::Exact,
        lo: Some(value),
        hi: Some(value),
        provenance: statements
            .iter()
            .flat_map(|s| s.provenance.iter().copied())
            .collect(),
        note: None,
    }
}

/// M_S(L,3) ≥ M(L/2,3): doubling a CAC of half the length. Available only
/// when M(L/2,3) has a closed form.
pub fn doubling_lower(length: u64) -> Option<BoundResult> {
    if length % 2 != 0 {
        return None;
    }
    let half = m_cac_exact(length / 2);
    let value = half.value()?;
    Some(BoundResult {
        length,
        quantity: Quantity::ScacMax,
        kind: BoundKind::Lower,
        lo: Some(value),
        hi: None,
        provenance: vec![Provenance::DoublingLower],
        note: Some(format!("doubles M({},3) = {value}", length / 2)),
    })
}

/// Every exact statement about M_S(L,3) for even L ≥ 18: the mod-8 residue
/// case, the four doubled power forms, and the odd-half classification.
pub fn scac_exact_statements(length: u64) -> Vec<BoundResult> {
    let q = Quantity::ScacMax;
    let mut out = Vec::new();
    if length % 2 != 0 || length < 18 {
        return out;
    }
    if length % 8 == 4 {
        out.push(BoundResult::exact(
            length,
            q,
            (length - 4) / 8,
            Provenance::ScacMod8Exact,
        ));
    }
    if (1..=30u32).any(|t| length == (1u64 << (2 * t + 1)) + 2) {
        out.push(BoundResult::exact(
            length,
            q,
            (length - 2) / 8,
            Provenance::ScacPowerA,
        ));
    }
    if (2..=5u32).any(|t| length == (1u64 << ((1u64 << t) + 1)) - 2) {
        out.push(BoundResult::exact(
            length,
            q,
            (length + 2) / 8,
            Provenance::ScacPowerB,
        ));
    }
    if (2..=30u32).any(|t| length == (1u64 << (2 * t)) - (1u64 << (t + 1)) + 2) {
        out.push(BoundResult::exact(
            length,
            q,
            (length - 2) / 8,
            Provenance::ScacPowerC,
        ));
    }
    if (1..=30u32).any(|t| length == (1u64 << (2 * t)) + (1u64 << (t + 1)) + 2) {
        out.push(BoundResult::exact(
            length,
            q,
            (length - 2) / 8,
            Provenance::ScacPowerD,
        ));
    }
    if length % 4 == 2 {
        // L/2 is odd; its five-case classification doubles into five exact
        // M_S statements. The divisibility framing (6 ∤ L, 18 ∤ L, 54 ∤ L)
        // is equivalent to the 3-exponent conditions already checked there.
        let half = classify_odd_length(length / 2);
        if let Some(half_value) = half.value() {
            let (value, provenance) = match half.provenance[0] {
                Provenance::OddClassI => ((length - 2) / 8, Provenance::ScacOddHalfI),
                Provenance::OddClassII => ((length - 6) / 8, Provenance::ScacOddHalfII),
                Provenance::OddClassIII => ((length + 2) / 8, Provenance::ScacOddHalfIII),
                Provenance::OddClassIV => ((length - 2) / 8, Provenance::ScacOddHalfIV),
                Provenance::OddClassV => ((length - 2) / 8, Provenance::ScacOddHalfV),
                other => unreachable!("odd classification yields odd-class provenance, got {other:?}"),
            };
            debug_assert_eq!(value, half_value, "odd-half value mismatch at L = {length}");
            out.push(BoundResult::exact(length, q, value, provenance));
        }
    }
    out
}

/// The sharpest statement about M_S(L,3) for an even length: an exact value
/// where some closed form applies, otherwise the bracket
/// [doubling lower (or the trivial 1), residue upper].
pub fn ms_exact(length: u64) -> BoundResult {
    let q = Quantity::ScacMax;
    if length % 2 != 0 {
        return BoundResult::inapplicable(length, q, "defined for even lengths");
    }
    if length < 6 {
        return BoundResult::inapplicable(
            length,
            q,
            "no admissible weight-3 codeword exists below length 6",
        );
    }
    if length < 18 {
        return BoundResult::exact(length, q, 1, Provenance::SmallEven);
    }

    let statements = scac_exact_statements(length);
    if let Some(first) = statements.first() {
        let value = first.value().expect("statements are exact");
        debug_assert!(
            statements.iter().all(|s| s.value() == Some(value)),
            "overlapping statements disagree at L = {length}: {statements:?}"
        );
        return BoundResult {
            length,
            quantity: q,
            kind: BoundKind::Exact,
            lo: Some(value),
            hi: Some(value),
            provenance: statements
                .iter()
                .flat_map(|s| s.provenance.iter().copied())
                .collect(),
            note: None,
        };
    }

    let upper = ms_upper(length);
    let hi = upper.hi.expect("even L ≥ 18 always has a residue upper bound");
    let (lo, lower_provenance, note) = match doubling_lower(length) {
        Some(lower) => (
            lower.lo.expect("lower bound stores lo"),
            Provenance::DoublingLower,
            lower.note,
        ),
        None => (1, Provenance::TrivialLower, None),
    };
    BoundResult {
        length,
        quantity: q,
        kind: if lo == hi {
            BoundKind::Exact
        } else {
            BoundKind::Bracket
        },
        lo: Some(lo),
        hi: Some(hi),
        provenance: vec![lower_provenance, Provenance::EvenUpper],
        note,
    }
}

/// Catalog rows over a length range: one result per length, using
/// [`m_cac_exact`] or [`ms_exact`]. SCAC rows cover even lengths only.
pub fn catalog_rows(quantity: Quantity, from: u64, to: u64) -> Vec<BoundResult> {
    match quantity {
        Quantity::CacMax => (from..=to).map(m_cac_exact).collect(),
        Quantity::ScacMax => (from..=to)
            .filter(|length| length % 2 == 0)
            .map(ms_exact)
            .collect(),
    }
}
