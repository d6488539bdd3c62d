//! Slot-asynchronous collision channel: replay a code under concrete user
//! offsets, or drive the offsets adversarially to find a victim's worst-case
//! packet survival count σ.
//!
//! Time is quantized to half slots. Each user i transmits one packet per
//! element of its codeword, repeating with period L; a packet starting at
//! real time x collides with one starting at y iff |x − y| < 1 slot on the
//! circle of circumference L (difference exactly 1 means the packets abut
//! and is no collision; exactly 0 is a total overlap, anything strictly
//! between is partial).
//!
//! Half-slot granularity is exact, not an approximation: the set of victim
//! packets an interferer destroys depends on the pairwise offset difference
//! Δ only through ⌊Δ⌋ and whether Δ is an integer, and every such pair is
//! realized by a half-integer Δ. Minimizing over the half-slot grid with the
//! victim pinned at 0 therefore equals the true infimum over real offsets.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::validate::Code;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("code has {expected} users but {found} offsets were given")]
    OffsetCountMismatch { expected: usize, found: usize },
    #[error("offsets are on a ring of length {found}, code has length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("victim index {victim} out of range for {size} users")]
    VictimOutOfRange { victim: usize, size: usize },
    #[error(
        "exact search over {size} users exceeds the guard of {max_users}; \
         raise max_users or request sampling"
    )]
    TooManyUsers { size: usize, max_users: usize },
    #[error("sample count must be positive")]
    BadSampleCount,
    #[error("cannot parse offset {0:?}: expected a half-slot decimal like 3 or 1.5")]
    ParseOffset(String),
}

/// Per-user time offsets in half-slot units: stored value t means a real
/// offset of t/2 slots, normalized into [0, 2L).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffsetAssignment {
    length: usize,
    half_slots: Vec<usize>,
}

impl OffsetAssignment {
    /// Builds an assignment from half-slot counts, reducing mod 2L.
    pub fn from_half_slots(length: usize, half_slots: Vec<usize>) -> Self {
        let m = 2 * length;
        OffsetAssignment {
            length,
            half_slots: half_slots.into_iter().map(|t| t % m).collect(),
        }
    }

    /// The all-zero (slot-synchronous) assignment for `users` users.
    pub fn zeros(length: usize, users: usize) -> Self {
        OffsetAssignment {
            length,
            half_slots: vec![0; users],
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn users(&self) -> usize {
        self.half_slots.len()
    }

    pub fn half_slots(&self) -> &[usize] {
        &self.half_slots
    }

    /// Parses comma-separated slot offsets with optional ".5"/".0" halves,
    /// e.g. `"1,1.5,3"`.
    pub fn parse_decimals(length: usize, text: &str) -> Result<Self, SimError> {
        let mut half_slots = Vec::new();
        for token in text.split(',') {
            let token = token.trim();
            let bad = || SimError::ParseOffset(token.to_string());
            let (whole, half) = match token.split_once('.') {
                None => (token, 0),
                Some((w, "5")) => (w, 1),
                Some((w, "0")) => (w, 0),
                Some(_) => return Err(bad()),
            };
            let whole: usize = whole.parse().map_err(|_| bad())?;
            half_slots.push(2 * whole + half);
        }
        Ok(OffsetAssignment::from_half_slots(length, half_slots))
    }
}

impl fmt::Display for OffsetAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.half_slots.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if t % 2 == 0 {
                write!(f, "{}", t / 2)?;
            } else {
                write!(f, "{}.5", t / 2)?;
            }
        }
        Ok(())
    }
}

/// How much of the victim's packet the interferer's packet covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapKind {
    Total,
    Partial,
}

/// One destroyed packet: user `victim`'s packet for codeword slot
/// `victim_slot` was hit by some packet of user `interferer`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CollisionEvent {
    pub victim: usize,
    pub victim_slot: usize,
    pub interferer: usize,
    pub kind: OverlapKind,
}

/// Outcome of replaying one period of the channel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub length: usize,
    /// Packets of user i that suffered no collision; σ_i ≤ ω.
    pub sigma: Vec<usize>,
    /// Sorted and deduplicated; a packet succeeds iff it appears in no
    /// entry as victim.
    pub collisions: Vec<CollisionEvent>,
}

/// Circular distance in half-slot units; < 2 means the packets overlap.
fn half_slot_distance(a: usize, b: usize, modulus: usize) -> usize {
    let d = (a + modulus - b) % modulus;
    d.min(modulus - d)
}

/// Replays one period of the channel with every user active.
pub fn simulate(code: &Code, offsets: &OffsetAssignment) -> Result<SimulationReport, SimError> {
    if offsets.length != code.length() {
        return Err(SimError::LengthMismatch {
            expected: code.length(),
            found: offsets.length,
        });
    }
    if offsets.users() != code.size() {
        return Err(SimError::OffsetCountMismatch {
            expected: code.size(),
            found: offsets.users(),
        });
    }
    let modulus = 2 * code.length();
    let mut events = BTreeSet::new();
    for (i, victim_word) in code.codewords().iter().enumerate() {
        for (j, interferer_word) in code.codewords().iter().enumerate() {
            if i == j {
                continue;
            }
            for &s in victim_word.elements() {
                let p = (offsets.half_slots[i] + 2 * s) % modulus;
                for &q in interferer_word.elements() {
                    let r = (offsets.half_slots[j] + 2 * q) % modulus;
                    let kind = match half_slot_distance(p, r, modulus) {
                        0 => OverlapKind::Total,
                        1 => OverlapKind::Partial,
                        _ => continue,
                    };
                    events.insert(CollisionEvent {
                        victim: i,
                        victim_slot: s,
                        interferer: j,
                        kind,
                    });
                }
            }
        }
    }
    let mut sigma: Vec<usize> = code.codewords().iter().map(|w| w.weight()).collect();
    let mut lost = BTreeSet::new();
    for event in &events {
        lost.insert((event.victim, event.victim_slot));
    }
    for &(victim, _) in &lost {
        sigma[victim] -= 1;
    }
    Ok(SimulationReport {
        length: code.length(),
        sigma,
        collisions: events.into_iter().collect(),
    })
}

/// Uniform random sampling of interferer offsets in place of the exact
/// product search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub count: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorstCaseOptions {
    /// Refuse exact search above this many users (the adversarial grid is
    /// exponential in users); sampling has no such guard.
    pub max_users: usize,
    pub sample: Option<SampleSpec>,
}

impl Default for WorstCaseOptions {
    fn default() -> Self {
        WorstCaseOptions {
            max_users: 4,
            sample: None,
        }
    }
}

/// An adversarial (or sampled) minimum of the victim's packet survival.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorstCaseOutcome {
    pub victim: usize,
    /// Minimum σ_victim found; the true minimum when `exact`.
    pub sigma: usize,
    pub exact: bool,
    /// Offsets attaining `sigma`, victim pinned to 0. In exact mode this is
    /// the lexicographically least minimizing assignment.
    pub witness: OffsetAssignment,
    pub points_evaluated: u64,
}

/// For each interferer offset t, which victim packets does it destroy?
/// Answered as a bitmask over the victim codeword's slot indices.
fn destruction_masks(code: &Code, victim: usize, interferer: usize) -> Vec<u32> {
    let modulus = 2 * code.length();
    let victim_positions: Vec<usize> = code.codewords()[victim]
        .elements()
        .iter()
        .map(|&s| 2 * s)
        .collect();
    let interferer_slots = code.codewords()[interferer].elements();
    (0..modulus)
        .map(|t| {
            let mut mask = 0u32;
            for (k, &p) in victim_positions.iter().enumerate() {
                if interferer_slots
                    .iter()
                    .any(|&q| half_slot_distance(p, (t + 2 * q) % modulus, modulus) < 2)
                {
                    mask |= 1 << k;
                }
            }
            mask
        })
        .collect()
}

/// Minimizes σ_victim over all offset assignments with the victim pinned at
/// offset 0 and each interferer anywhere on the half-slot grid. Exact by the
/// argument in the module docs; per interferer only the distinct destruction
/// masks are branched on (keeping the smallest offset realizing each), which
/// caps the search at 2^ω branches per interferer and makes the returned
/// witness the lexicographically least minimizer.
///
/// With `options.sample` set, random assignments are tried instead and the
/// outcome is marked inexact. To model fewer active users, restrict the code
/// to the active codewords first.
pub fn worst_case_sigma(
    code: &Code,
    victim: usize,
    options: &WorstCaseOptions,
) -> Result<WorstCaseOutcome, SimError> {
    if victim >= code.size() {
        return Err(SimError::VictimOutOfRange {
            victim,
            size: code.size(),
        });
    }
    let interferers: Vec<usize> = (0..code.size()).filter(|&j| j != victim).collect();
    let weight = code.weight();
    assert!(weight <= 32, "destruction masks are 32-bit");
    let assemble = |interferer_offsets: &[usize]| {
        let mut half_slots = vec![0; code.size()];
        for (&j, &t) in interferers.iter().zip(interferer_offsets) {
            half_slots[j] = t;
        }
        OffsetAssignment::from_half_slots(code.length(), half_slots)
    };

    if let Some(spec) = options.sample {
        return sampled_minimum(code, victim, &interferers, spec, assemble);
    }
    if code.size() > options.max_users {
        return Err(SimError::TooManyUsers {
            size: code.size(),
            max_users: options.max_users,
        });
    }

    // One (offset, mask) representative per distinct mask, offsets ascending.
    let reps: Vec<Vec<(usize, u32)>> = interferers
        .iter()
        .map(|&j| {
            let masks = destruction_masks(code, victim, j);
            let mut seen = BTreeSet::new();
            masks
                .into_iter()
                .enumerate()
                .filter(|&(_, m)| seen.insert(m))
                .collect()
        })
        .collect();

    // Depth-first product walk in lexicographic offset order; first strict
    // improvement wins, so ties keep the earlier (smaller) assignment.
    struct Walk<'a> {
        reps: &'a [Vec<(usize, u32)>],
        weight: usize,
        stack: Vec<usize>,
        best_sigma: usize,
        best_offsets: Vec<usize>,
        points: u64,
    }

    impl Walk<'_> {
        fn run(&mut self, depth: usize, union: u32) {
            if depth == self.reps.len() {
                self.points += 1;
                let sigma = self.weight - (union.count_ones() as usize);
                if sigma < self.best_sigma {
                    self.best_sigma = sigma;
                    self.best_offsets = self.stack.clone();
                }
                return;
            }
            let reps = self.reps;
            for &(t, mask) in &reps[depth] {
                if self.best_sigma == 0 {
                    return;
                }
                self.stack.push(t);
                self.run(depth + 1, union | mask);
                self.stack.pop();
            }
        }
    }

    let mut walk = Walk {
        reps: &reps,
        weight,
        stack: Vec::with_capacity(reps.len()),
        best_sigma: weight + 1,
        best_offsets: Vec::new(),
        points: 0,
    };
    walk.run(0, 0);

    let witness = assemble(&walk.best_offsets);
    debug_assert_eq!(
        simulate(code, &witness)?.sigma[victim],
        walk.best_sigma,
        "mask search and replay disagree"
    );
    Ok(WorstCaseOutcome {
        victim,
        sigma: walk.best_sigma,
        exact: true,
        witness,
        points_evaluated: walk.points,
    })
}

fn sampled_minimum(
    code: &Code,
    victim: usize,
    interferers: &[usize],
    spec: SampleSpec,
    assemble: impl Fn(&[usize]) -> OffsetAssignment,
) -> Result<WorstCaseOutcome, SimError> {
    if spec.count == 0 {
        return Err(SimError::BadSampleCount);
    }
    let modulus = 2 * code.length();
    let weight = code.weight();
    let mask_tables: Vec<Vec<u32>> = interferers
        .iter()
        .map(|&j| destruction_masks(code, victim, j))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut remaining = spec.count;
    // Sequential generation keeps the sample stream a pure function of the
    // seed; evaluation is parallel, and the (σ, offsets) key makes the
    // minimum independent of reduction order.
    const CHUNK: u64 = 1 << 16;
    while remaining > 0 {
        let take = remaining.min(CHUNK);
        let samples: Vec<Vec<usize>> = (0..take)
            .map(|_| {
                (0..interferers.len())
                    .map(|_| rng.random_range(0..modulus))
                    .collect()
            })
            .collect();
        let chunk_best = samples
            .into_par_iter()
            .map(|offsets| {
                let union = offsets
                    .iter()
                    .zip(&mask_tables)
                    .fold(0u32, |acc, (&t, table)| acc | table[t]);
                (weight - union.count_ones() as usize, offsets)
            })
            .min()
            .expect("chunk is nonempty");
        if best.as_ref().is_none_or(|b| chunk_best < *b) {
            best = Some(chunk_best);
        }
        remaining -= take;
    }
    let (sigma, offsets) = best.expect("count is positive");
    Ok(WorstCaseOutcome {
        victim,
        sigma,
        exact: false,
        witness: assemble(&offsets),
        points_evaluated: spec.count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::{is_scac, Code};
    use proptest::prelude::*;

    fn code(length: usize, rows: &[&[usize]]) -> Code {
        Code::from_rows(length, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn starving_example() -> Code {
        code(12, &[&[0, 1, 2], &[0, 3, 6], &[0, 4, 8]])
    }

    #[test]
    fn offsets_parse_and_display() {
        let offsets = OffsetAssignment::parse_decimals(12, "1,1.5,3").unwrap();
        assert_eq!(offsets.half_slots(), &[2, 3, 6]);
        assert_eq!(offsets.to_string(), "1,1.5,3");
        assert_eq!(
            OffsetAssignment::parse_decimals(12, "2.0, 11.5").unwrap().half_slots(),
            &[4, 23]
        );
        // Normalization wraps at 2L.
        assert_eq!(
            OffsetAssignment::from_half_slots(12, vec![24, 25]).half_slots(),
            &[0, 1]
        );
        for bad in ["1.25", "x", "-1", ""] {
            assert!(OffsetAssignment::parse_decimals(12, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn offset_misuse_is_rejected() {
        let c = starving_example();
        let wrong_count = OffsetAssignment::zeros(12, 2);
        assert_eq!(
            simulate(&c, &wrong_count).unwrap_err(),
            SimError::OffsetCountMismatch {
                expected: 3,
                found: 2
            }
        );
        let wrong_length = OffsetAssignment::zeros(13, 3);
        assert_eq!(
            simulate(&c, &wrong_length).unwrap_err(),
            SimError::LengthMismatch {
                expected: 12,
                found: 13
            }
        );
    }

    #[test]
    fn first_user_loses_everything_under_the_known_offsets() {
        let c = starving_example();
        let offsets = OffsetAssignment::parse_decimals(12, "1,1.5,3").unwrap();
        let report = simulate(&c, &offsets).unwrap();
        assert_eq!(report.sigma, vec![0, 1, 1]);
        use OverlapKind::*;
        let expected = vec![
            CollisionEvent { victim: 0, victim_slot: 0, interferer: 1, kind: Partial },
            CollisionEvent { victim: 0, victim_slot: 1, interferer: 1, kind: Partial },
            CollisionEvent { victim: 0, victim_slot: 2, interferer: 2, kind: Total },
            CollisionEvent { victim: 1, victim_slot: 0, interferer: 0, kind: Partial },
            CollisionEvent { victim: 1, victim_slot: 6, interferer: 2, kind: Partial },
            CollisionEvent { victim: 2, victim_slot: 0, interferer: 0, kind: Total },
            CollisionEvent { victim: 2, victim_slot: 4, interferer: 1, kind: Partial },
        ];
        assert_eq!(report.collisions, expected);
    }

    #[test]
    fn single_user_never_collides() {
        let c = code(26, &[&[0, 4, 7]]);
        for t in [0, 5, 31] {
            let report = simulate(&c, &OffsetAssignment::from_half_slots(26, vec![t])).unwrap();
            assert_eq!(report.sigma, vec![3]);
            assert!(report.collisions.is_empty());
        }
        let worst = worst_case_sigma(&c, 0, &WorstCaseOptions::default()).unwrap();
        assert_eq!(worst.sigma, 3);
        assert!(worst.exact);
        assert_eq!(worst.points_evaluated, 1);
    }

    #[test]
    fn synchronous_strong_code_keeps_everyone_alive() {
        let c = code(28, &[&[0, 2, 4], &[0, 7, 14], &[0, 9, 18]]);
        let report = simulate(&c, &OffsetAssignment::zeros(28, 3)).unwrap();
        assert!(report.sigma.iter().all(|&s| s >= 1), "{:?}", report.sigma);
    }

    #[test]
    fn integer_offsets_make_only_total_overlaps() {
        let c = starving_example();
        for offsets in [vec![0, 2, 10], vec![6, 8, 2], vec![0, 0, 0]] {
            let half = offsets.iter().map(|&s| 2 * s).collect();
            let report =
                simulate(&c, &OffsetAssignment::from_half_slots(12, half)).unwrap();
            assert!(report
                .collisions
                .iter()
                .all(|e| e.kind == OverlapKind::Total));
            // Slot-synchronized users of a plain conflict-avoiding code all
            // get at least one packet through.
            assert!(report.sigma.iter().all(|&s| s >= 1), "{offsets:?}");
        }
    }

    #[test]
    fn worst_case_finds_the_starved_victim() {
        let worst = worst_case_sigma(&starving_example(), 0, &WorstCaseOptions::default()).unwrap();
        assert_eq!(worst.sigma, 0);
        assert!(worst.exact);
        // The witness must replay to the claimed σ with the victim pinned.
        assert_eq!(worst.witness.half_slots()[0], 0);
        let replay = simulate(&starving_example(), &worst.witness).unwrap();
        assert_eq!(replay.sigma[0], 0);
    }

    #[test]
    fn strong_codes_guarantee_a_survivor() {
        for c in [
            code(28, &[&[0, 2, 4], &[0, 7, 14], &[0, 9, 18]]),
            code(24, &[&[0, 2, 4], &[0, 6, 12], &[0, 8, 16]]),
        ] {
            assert!(is_scac(&c));
            for victim in 0..c.size() {
                let worst = worst_case_sigma(&c, victim, &WorstCaseOptions::default()).unwrap();
                assert!(worst.sigma >= 1, "victim {victim}");
                assert!(worst.exact);
            }
        }
    }

    #[test]
    fn user_guard_and_sampling() {
        let c = starving_example();
        let tight = WorstCaseOptions {
            max_users: 2,
            sample: None,
        };
        assert_eq!(
            worst_case_sigma(&c, 0, &tight).unwrap_err(),
            SimError::TooManyUsers {
                size: 3,
                max_users: 2
            }
        );

        let sampled_options = WorstCaseOptions {
            max_users: 2,
            sample: Some(SampleSpec {
                count: 2_000,
                seed: 7,
            }),
        };
        let sampled = worst_case_sigma(&c, 0, &sampled_options).unwrap();
        assert!(!sampled.exact);
        assert_eq!(sampled.points_evaluated, 2_000);
        let exact = worst_case_sigma(&c, 0, &WorstCaseOptions::default()).unwrap();
        assert!(sampled.sigma >= exact.sigma);
        // Same seed, same answer, bit for bit.
        assert_eq!(worst_case_sigma(&c, 0, &sampled_options).unwrap(), sampled);
        // The sampled witness replays to the sampled σ.
        let replay = simulate(&c, &sampled.witness).unwrap();
        assert_eq!(replay.sigma[0], sampled.sigma);
    }

    #[test]
    fn bad_requests_are_rejected() {
        let c = starving_example();
        assert_eq!(
            worst_case_sigma(&c, 3, &WorstCaseOptions::default()).unwrap_err(),
            SimError::VictimOutOfRange { victim: 3, size: 3 }
        );
        let zero_samples = WorstCaseOptions {
            max_users: 4,
            sample: Some(SampleSpec { count: 0, seed: 0 }),
        };
        assert_eq!(
            worst_case_sigma(&c, 0, &zero_samples).unwrap_err(),
            SimError::BadSampleCount
        );
    }

    #[test]
    fn report_serializes_round_trip() {
        let c = starving_example();
        let offsets = OffsetAssignment::parse_decimals(12, "1,1.5,3").unwrap();
        let report = simulate(&c, &offsets).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"kind\":\"partial\""));
        let back: SimulationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }

    proptest! {
        #[test]
        fn common_shift_leaves_sigma_unchanged(
            t0 in 0usize..24, t1 in 0usize..24, t2 in 0usize..24, shift in 0usize..24
        ) {
            let c = starving_example();
            let base = OffsetAssignment::from_half_slots(12, vec![t0, t1, t2]);
            let shifted = OffsetAssignment::from_half_slots(
                12,
                vec![t0 + shift, t1 + shift, t2 + shift],
            );
            prop_assert_eq!(
                simulate(&c, &base).unwrap().sigma,
                simulate(&c, &shifted).unwrap().sigma
            );
        }

        #[test]
        fn sigma_never_exceeds_weight(
            t0 in 0usize..56, t1 in 0usize..56, t2 in 0usize..56
        ) {
            let c = code(28, &[&[0, 2, 4], &[0, 7, 14], &[0, 9, 18]]);
            let report = simulate(
                &c,
                &OffsetAssignment::from_half_slots(28, vec![t0, t1, t2]),
            ).unwrap();
            for &s in &report.sigma {
                prop_assert!(s <= 3);
            }
            // Strong code: one packet always survives, whatever the offsets.
            for &s in &report.sigma {
                prop_assert!(s >= 1);
            }
        }
    }
}
