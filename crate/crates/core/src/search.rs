//! Backtracking enumeration of admissible sign matrices.
//!
//! Under normalization (first row and column all `+1`) the admissibility
//! condition splits into two row constraints, written over row masks `r`
//! with `r(w) = 1` meaning a `-1` entry:
//!
//! * every row `y != 0` satisfies `r_y(w) != r_y(w ^ y)` for all `w`;
//! * every pair of rows `x != y` has `s = r_x ^ r_y` with
//!   `s(w) != s(w ^ (x ^ y))` for all `w`.
//!
//! The first constraint is the pair constraint against the all-`+1` row 0,
//! so searching rows `1..n` under both constraints is exhaustive.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::signs::{full_mask, Group2, SignError, SignMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumerationMode {
    /// First row and first column all `+1`.
    Normalized,
    /// Every admissible matrix.
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub order: usize,
    pub nodes: u64,
    pub solutions: u64,
    /// The search ran to completion rather than stopping early.
    pub exhaustive: bool,
    /// Order 1, where the condition is vacuous.
    pub degenerate: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

const BLOCK_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// Permutes bit positions `w -> w ^ u`.
fn translate_bits(mut s: u64, u: usize) -> u64 {
    for (k, &mask) in BLOCK_MASKS.iter().enumerate() {
        if u >> k & 1 == 1 {
            let shift = 1 << k;
            s = ((s >> shift) & mask) | ((s & mask) << shift);
        }
    }
    s
}

/// `s(w) != s(w ^ u)` for every `w` in `0..order`.
fn is_antisymmetric(s: u64, u: usize, full: u64) -> bool {
    (s ^ translate_bits(s, u)) & full == full
}

/// Normalized row candidates for row `y`: `r(0) = +1` forces `r(y) = -1`;
/// one free bit per remaining coset `{w, w ^ y}` at its smaller element.
fn row_candidates(order: usize, y: usize) -> Vec<u64> {
    let reps: Vec<usize> = (1..order).filter(|&w| w < (w ^ y) && w != y).collect();
    let mut out = Vec::with_capacity(1 << reps.len());
    for choice in 0u64..(1u64 << reps.len()) {
        let mut mask = 1u64 << y;
        for (bit, &w) in reps.iter().enumerate() {
            if choice >> bit & 1 == 1 {
                mask |= 1 << w;
            } else {
                mask |= 1 << (w ^ y);
            }
        }
        out.push(mask);
    }
    out
}

struct Search {
    order: usize,
    full: u64,
    candidates: Vec<Vec<u64>>,
}

impl Search {
    fn new(order: usize) -> Self {
        let candidates = (0..order)
            .map(|y| if y == 0 { vec![0] } else { row_candidates(order, y) })
            .collect();
        Search {
            order,
            full: full_mask(order),
            candidates,
        }
    }

    fn compatible(&self, rows: &[u64], y: usize, mask: u64) -> bool {
        (1..y).all(|x| is_antisymmetric(rows[x] ^ mask, x ^ y, self.full))
    }

    /// Depth-first search below a partial assignment of rows `0..rows.len()`.
    fn run(&self, rows: &mut Vec<u64>, nodes: &mut u64, emit: &mut dyn FnMut(&[u64])) {
        *nodes += 1;
        let y = rows.len();
        if y == self.order {
            emit(rows);
            return;
        }
        for &mask in &self.candidates[y] {
            if self.compatible(rows, y, mask) {
                rows.push(mask);
                self.run(rows, nodes, emit);
                rows.pop();
            }
        }
    }
}

/// Exhaustive search over normalized matrices; returns every solution in
/// canonical order together with the search report.
///
/// The subtrees below each candidate for row 1 are searched independently
/// on the rayon pool and merged, so the output does not depend on the
/// number of worker threads.
pub fn search_normalized(rank: u32) -> Result<(Vec<SignMatrix>, SearchReport), SignError> {
    let group = Group2::new(rank)?;
    let order = group.order();
    let start = Instant::now();
    let search = Search::new(order);

    let (mut solutions, nodes) = if order <= 2 {
        let mut found = Vec::new();
        let mut nodes = 0;
        let mut rows = vec![0u64];
        search.run(&mut rows, &mut nodes, &mut |r| found.push(r.to_vec()));
        (found, nodes)
    } else {
        let parts: Vec<(Vec<Vec<u64>>, u64)> = search.candidates[1]
            .par_iter()
            .map(|&first| {
                let mut found = Vec::new();
                let mut nodes = 0;
                let mut rows = vec![0u64, first];
                search.run(&mut rows, &mut nodes, &mut |r| found.push(r.to_vec()));
                (found, nodes)
            })
            .collect();
        let nodes = 1 + parts.iter().map(|(_, n)| n).sum::<u64>();
        (parts.into_iter().flat_map(|(f, _)| f).collect(), nodes)
    };
    solutions.sort();

    let matrices: Vec<SignMatrix> = solutions
        .into_iter()
        .map(|rows| SignMatrix::from_masks(group, rows))
        .collect();
    let report = SearchReport {
        order,
        nodes,
        solutions: matrices.len() as u64,
        exhaustive: true,
        degenerate: order == 1,
        elapsed: start.elapsed(),
    };
    Ok((matrices, report))
}

/// All admissible matrices of order `2^rank` in the given mode, sorted.
///
/// Mode `All` applies the `2^(2|G| - 1)` sign switchings that fix the sign
/// of row 0 to every normalized representative. For `|G| <= 4` the result
/// is additionally deduplicated through a set.
pub fn enumerate_admissible(rank: u32, mode: EnumerationMode) -> Result<Vec<SignMatrix>, SignError> {
    let (normalized, _) = search_normalized(rank)?;
    match mode {
        EnumerationMode::Normalized => Ok(normalized),
        EnumerationMode::All => {
            let order = 1usize << rank;
            let row_choices = 1u64 << (order - 1);
            let col_choices = 1u64 << order;
            let mut out: Vec<SignMatrix> = Vec::new();
            for m in &normalized {
                for r in 0..row_choices {
                    // bit 0 of the row mask stays clear
                    let row_signs = r << 1;
                    for c in 0..col_choices {
                        out.push(m.switched(row_signs, c));
                    }
                }
            }
            if order <= 4 {
                let set: BTreeSet<SignMatrix> = out.into_iter().collect();
                Ok(set.into_iter().collect())
            } else {
                out.sort();
                Ok(out)
            }
        }
    }
}

/// Number of admissible matrices in a sign-switching orbit: `2^(2|G| - 1)`.
pub fn switching_orbit_size(rank: u32) -> u128 {
    1u128 << (2 * (1u32 << rank) - 1)
}

/// Runs the normalized search to exhaustion and reports how many solutions
/// exist. At order 16 no admissible matrix exists.
pub fn hurwitz_nonexistence_search(rank: u32) -> Result<SearchReport, SignError> {
    search_normalized(rank).map(|(_, report)| report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::{admissible, examples, normalize_signs};

    /// Every `{+1,-1}` matrix of order `2^rank`, by brute force.
    fn brute_force(rank: u32) -> Vec<SignMatrix> {
        let group = Group2::new(rank).unwrap();
        let n = group.order();
        let mut out = Vec::new();
        for bits in 0u64..(1u64 << (n * n)) {
            let rows = (0..n).map(|x| (bits >> (x * n)) & full_mask(n)).collect();
            let m = SignMatrix::from_masks(group, rows);
            if admissible(&m) {
                out.push(m);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn translate_bits_matches_definition() {
        let s = 0b1011_0010_1100_0101u64;
        for u in 0..16 {
            let t = translate_bits(s, u);
            for w in 0..16 {
                assert_eq!(t >> w & 1, s >> (w ^ u) & 1);
            }
        }
    }

    #[test]
    fn order_two_matches_brute_force() {
        let brute = brute_force(1);
        assert_eq!(brute.len(), 8);
        assert_eq!(enumerate_admissible(1, EnumerationMode::All).unwrap(), brute);
        let normalized = enumerate_admissible(1, EnumerationMode::Normalized).unwrap();
        assert_eq!(normalized, vec![examples::order2()]);
    }

    #[test]
    fn order_four_matches_brute_force() {
        let brute = brute_force(2);
        let all = enumerate_admissible(2, EnumerationMode::All).unwrap();
        assert_eq!(all, brute);
        let normalized = enumerate_admissible(2, EnumerationMode::Normalized).unwrap();
        let expected: Vec<SignMatrix> = brute.iter().filter(|m| m.is_normalized()).cloned().collect();
        assert_eq!(normalized, expected);
        assert_eq!(normalized.len(), 2);
        assert_eq!(all.len() as u128, normalized.len() as u128 * switching_orbit_size(2));
    }

    #[test]
    fn every_admissible_matrix_normalizes_into_the_list() {
        let normalized: BTreeSet<SignMatrix> =
            enumerate_admissible(2, EnumerationMode::Normalized).unwrap().into_iter().collect();
        for m in brute_force(2) {
            assert!(normalized.contains(&normalize_signs(&m)));
        }
    }

    #[test]
    fn order_eight_solutions_are_admissible_and_distinct() {
        let (sols, report) = search_normalized(3).unwrap();
        assert!(report.exhaustive);
        assert_eq!(report.solutions as usize, sols.len());
        assert!(sols.contains(&examples::order8()));
        let set: BTreeSet<_> = sols.iter().collect();
        assert_eq!(set.len(), sols.len());
        assert!(sols.iter().all(|m| admissible(m) && m.is_normalized()));
    }

    #[test]
    fn small_ranks() {
        let r0 = hurwitz_nonexistence_search(0).unwrap();
        assert!(r0.degenerate);
        assert_eq!(r0.solutions, 1);
        let r1 = hurwitz_nonexistence_search(1).unwrap();
        assert_eq!(r1.solutions, 1);
        assert!(!r1.degenerate);
    }
}
