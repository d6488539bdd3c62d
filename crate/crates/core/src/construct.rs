//! Constructions and existence predicates: the CAC→SCAC doubling map, the
//! doubling-fold cycle graph on odd lengths, matching-based optimal
//! equi-difference codes, and the prime-shape conditions for tight and
//! leave-2 codes.
//!
//! For odd L the equi-difference codewords {0, g, 2g} correspond to edges of
//! the graph G(L) on vertices {1, …, (L−1)/2} with v adjacent to fold(2v),
//! where fold reflects into the lower half of Z_L. G(L) is a disjoint union
//! of cycles, and optimal equi-difference codes are maximum matchings: each
//! cycle of length n yields ⌊n/2⌋ codewords, and the loop at L/3 (present
//! exactly when 3 | L) yields the codeword {0, L/3, 2L/3}.

use thiserror::Error;

use crate::numth::{factorize, is_prime};
pub use crate::numth::{is_safe_prime, orders, NumthError, OrderPair};
use crate::ring::Codeword;
use crate::validate::{is_cac, is_scac, leave, Code, Leave, ValidateError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("doubling is defined for conflict-avoiding codes only")]
    NotConflictAvoiding,
    #[error("operation is defined for odd lengths ≥ 3, got {0}")]
    NotOddLength(usize),
    #[error(transparent)]
    Validate(#[from] ValidateError),
}

/// Maps a CAC of length L to an SCAC of length 2L by doubling every element.
///
/// Doubling turns each difference x into 2x, so doubled difference sets are
/// even-only and pairwise disjoint; their shifts land on odd residues, which
/// collide with nothing. Size and weight are preserved.
pub fn double_code(code: &Code) -> Result<Code, ConstructError> {
    if !is_cac(code) {
        return Err(ConstructError::NotConflictAvoiding);
    }
    let length = code.length() * 2;
    let codewords = code
        .codewords()
        .iter()
        .map(|codeword| {
            let elements = codeword.elements().iter().map(|&e| 2 * e).collect();
            Codeword::new(length, elements).expect("doubling preserves element validity")
        })
        .collect();
    let doubled = Code::new(length, codewords)?;
    debug_assert!(is_scac(&doubled));
    Ok(doubled)
}

/// Reflects x into the lower half of Z_L: min(x mod L, L − x mod L).
pub fn fold(x: usize, length: usize) -> usize {
    let r = x % length;
    r.min(length - r)
}

/// The graph G(L) on {1, …, (L−1)/2} under v ↦ fold(2v), decomposed into its
/// cycles. Loops count as cycles of length 1, parallel-edge pairs as cycles
/// of length 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleGraph {
    pub length: usize,
    /// Each cycle starts at its minimum vertex and follows the doubling-fold
    /// map; cycles are ordered by minimum vertex.
    pub cycles: Vec<Vec<usize>>,
}

impl CycleGraph {
    /// Number of odd-length cycles, the loop included.
    pub fn n_odd(&self) -> usize {
        self.cycles.iter().filter(|c| c.len() % 2 == 1).count()
    }
}

/// Builds G(L) for odd L ≥ 3 by walking the doubling-fold permutation.
pub fn build_graph(length: usize) -> Result<CycleGraph, ConstructError> {
    if length < 3 || length % 2 == 0 {
        return Err(ConstructError::NotOddLength(length));
    }
    let half = (length - 1) / 2;
    let mut seen = vec![false; half + 1];
    let mut cycles = Vec::new();
    for start in 1..=half {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cycle.push(v);
            v = fold(2 * v, length);
        }
        cycles.push(cycle);
    }
    Ok(CycleGraph { length, cycles })
}

/// The closed-form count of odd cycles for an odd prime p, decided by
/// p mod 8 and the order e of 2 mod p.
pub fn n_odd_prime_formula(p: usize) -> Result<usize, ConstructError> {
    if p < 3 || p % 2 == 0 {
        return Err(ConstructError::NotOddLength(p));
    }
    assert!(is_prime(p as u64), "formula is defined for primes, got {p}");
    let e = orders(p as u64).expect("odd p ≥ 3").order as usize;
    Ok(if p % 8 == 7 || (p % 8 == 1 && e % 2 == 1) {
        (p - 1) / (2 * e)
    } else if p % 8 == 3 || (p % 8 == 1 && e % 4 == 2) {
        (p - 1) / e
    } else {
        0
    })
}

/// Counts odd cycles of G(L). For prime L the count is cross-checked against
/// the closed-form formula on every call.
pub fn n_odd(length: usize) -> Result<usize, ConstructError> {
    let count = build_graph(length)?.n_odd();
    if is_prime(length as u64) {
        let formula = n_odd_prime_formula(length)?;
        assert_eq!(
            count, formula,
            "odd-cycle count and prime formula disagree at L = {length}"
        );
    }
    Ok(count)
}

/// An optimal equi-difference CAC for odd L, with the leave read off it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquiOptimum {
    /// M^e(L,3) = ((L−1)/2 − N_odd)/2 + [3 | L].
    pub value: usize,
    pub witness: Code,
    pub leave: Leave,
}

/// Builds an optimal equi-difference CAC by matching each cycle of G(L).
///
/// Even cycles are matched perfectly. Odd cycles must leave one vertex
/// unmatched; skipping the minimum vertex of each makes the overall leave
/// lexicographically least, since the skipped vertex v contributes exactly
/// {v, L−v} to the leave. The loop, when present, contributes {0, L/3, 2L/3}
/// and covers its own vertex.
pub fn m_e_with_witness(length: usize) -> Result<EquiOptimum, ConstructError> {
    let graph = build_graph(length)?;
    let mut codewords = Vec::new();
    for cycle in &graph.cycles {
        if cycle.len() == 1 {
            debug_assert_eq!(cycle[0] * 3, length, "loops occur only at L/3");
            codewords.push(
                Codeword::new(length, vec![0, cycle[0], 2 * cycle[0]])
                    .expect("loop codeword is valid"),
            );
            continue;
        }
        let mut i = cycle.len() % 2;
        while i + 1 < cycle.len() {
            let a = cycle[i];
            codewords.push(
                Codeword::new(length, vec![0, a, 2 * a % length])
                    .expect("edge codeword is valid"),
            );
            i += 2;
        }
    }
    let witness = Code::new(length, codewords)?;
    let value = witness.size();
    let expected = ((length - 1) / 2 - graph.n_odd()) / 2 + usize::from(length % 3 == 0);
    assert_eq!(
        value, expected,
        "matching size and closed form disagree at L = {length}"
    );
    debug_assert!(is_cac(&witness));
    let leave = leave(&witness);
    Ok(EquiOptimum {
        value,
        witness,
        leave,
    })
}

/// The order-theoretic condition under which a prime contributes no odd
/// cycles: p ≡ 5 (mod 8), or p ≡ 1 (mod 8) with 4 dividing the order of 2.
pub fn third_condition(p: usize) -> bool {
    p % 8 == 5
        || (p % 8 == 1
            && orders(p as u64)
                .map(|pair| pair.order % 4 == 0)
                .unwrap_or(false))
}

fn prime_shape(length: usize) -> (u32, Vec<(usize, u32)>) {
    let factors = factorize(length as u64);
    let three_exponent = factors
        .iter()
        .find(|(p, _)| *p == 3)
        .map_or(0, |&(_, e)| e);
    let others = factors
        .into_iter()
        .filter(|&(p, _)| p != 3)
        .map(|(p, e)| (p as usize, e))
        .collect();
    (three_exponent, others)
}

/// Whether a tight (empty-leave) equi-difference CAC of weight 3 exists:
/// either 3 ∤ L and every prime factor satisfies [`third_condition`], or
/// 3 ∥ L and every other prime factor does.
pub fn tight_exists(length: usize) -> Result<bool, ConstructError> {
    if length < 3 || length % 2 == 0 {
        return Err(ConstructError::NotOddLength(length));
    }
    let (three_exponent, others) = prime_shape(length);
    let rest_conform = others.iter().all(|&(p, _)| third_condition(p));
    Ok(three_exponent <= 1 && rest_conform)
}

/// Whether an optimal equi-difference CAC with leave of size 2 (and distinct
/// from {L/3, 2L/3}) exists. Three sufficient prime shapes:
///
/// - (a) 3 ∤ L and exactly one factor p fails [`third_condition`], with
///   suborder c_p = (p−1)/2 and p square-free in L;
/// - (b) 3 ∥ L and exactly one factor p > 3 fails it, with
///   c_p = e_p = (p−1)/2 and p square-free in L;
/// - (c) 9 ∥ L and every factor p > 3 satisfies it.
pub fn leave2_exists(length: usize) -> Result<bool, ConstructError> {
    if length < 3 || length % 2 == 0 {
        return Err(ConstructError::NotOddLength(length));
    }
    let (three_exponent, others) = prime_shape(length);
    let exceptions: Vec<(usize, u32)> = others
        .iter()
        .copied()
        .filter(|&(p, _)| !third_condition(p))
        .collect();
    Ok(match (three_exponent, exceptions.as_slice()) {
        (0, [(p, 1)]) => {
            let pair = orders(*p as u64).expect("odd prime");
            pair.suborder as usize == (p - 1) / 2
        }
        (1, [(p, 1)]) => {
            let pair = orders(*p as u64).expect("odd prime");
            pair.suborder == pair.order && pair.order as usize == (p - 1) / 2
        }
        (2, []) => true,
        _ => false,
    })
}
