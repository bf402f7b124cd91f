// Copyright 2026 The wkerr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Search for admissible coefficient sets.
//!
//! With `d_k = c_k - c_{k-1}` (cyclic) and `s = sum(c)`, the total phase of
//! an input whose V photons form the set `U` is `s + sum_{k in U} d_k`. A W
//! component `{j}` therefore collides with another input `U` either when
//! `sum_U d = d_j` or when `s + sum_U d = -(s + d_j)`.
//!
//! The first kind depends only on the differences and is hereditary: once a
//! partial difference list contains an element equal to a subset sum of the
//! others, or a nonempty zero-sum subset, no completion can repair it. The
//! depth-first enumeration assigns coefficients one at a time and cuts those
//! branches; full admissibility is decided at the leaves. Rotating the
//! coefficients cyclically or negating them all preserves admissibility, so
//! each magnitude level only enumerates sets that start at `+bound` and
//! reports the least canonical rotation of what it finds.

use alloc::vec::Vec;

use crate::distinguish::admissible_by_routing;
use crate::error::{Error, Result};
use crate::phase::{gcd, CoefficientSet};
use crate::state::check_photon_count;

/// Largest photon count accepted by the search.
pub const MAX_SEARCH_PHOTONS: usize = 20;

/// Default ceiling on `max |c|`.
pub const DEFAULT_BOUND_CEILING: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    /// Minimize `max |c_k|`.
    #[default]
    MinMaxAbs,
    /// Minimize `max |total|` over all inputs, the phase span the probe has
    /// to resolve.
    MinRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    /// Only sets with `max |c_k| <= magnitude_bound` are considered.
    pub magnitude_bound: u32,
    pub objective: Objective,
}

impl SearchConfig {
    pub fn new(n: usize, magnitude_bound: u32) -> Self {
        SearchConfig {
            n,
            magnitude_bound,
            objective: Objective::MinMaxAbs,
        }
    }

    pub fn with_objective(self, objective: Objective) -> Self {
        SearchConfig { objective, ..self }
    }
}

/// Reported once per completed magnitude level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchProgress {
    pub bound: u32,
    pub candidates_tested: u64,
    pub best: Option<CoefficientSet>,
}

/// Admissible canonical set that is optimal under `config.objective` among
/// all sets with `max |c| <= magnitude_bound`. Ties go to the
/// lexicographically smallest set. `None` if no admissible set exists.
pub fn find_coefficients(config: &SearchConfig) -> Result<Option<CoefficientSet>> {
    find_coefficients_with_progress(config, |_| {})
}

pub fn find_coefficients_with_progress<F>(
    config: &SearchConfig,
    mut progress: F,
) -> Result<Option<CoefficientSet>>
where
    F: FnMut(&SearchProgress),
{
    check_photon_count(config.n, MAX_SEARCH_PHOTONS)?;
    if config.magnitude_bound == 0 {
        return Err(Error::InvalidSearch("magnitude bound must be at least 1"));
    }

    let mut search = Dfs::new(config.n, config.objective);
    for bound in 1..=config.magnitude_bound {
        if let (Objective::MinRange, Some((range, _))) = (config.objective, &search.best) {
            // every set with max |c| = b has max |total| > b / 2
            if (bound / 2) as u64 >= *range {
                break;
            }
        }
        search.run_level(bound);
        progress(&SearchProgress {
            bound,
            candidates_tested: search.candidates,
            best: search
                .best
                .as_ref()
                .map(|(_, c)| CoefficientSet::new(c.clone())),
        });
        if config.objective == Objective::MinMaxAbs && search.best.is_some() {
            break;
        }
    }

    match search.best {
        Some((_, c)) => {
            let c = CoefficientSet::new(c);
            assert!(
                admissible_by_routing(&c)?,
                "search returned an inadmissible set {c:?}"
            );
            Ok(Some(c))
        }
        None => Ok(None),
    }
}

/// The optimal admissible set, found by raising the magnitude bound from 1
/// up to `ceiling`.
pub fn minimal_coefficients(
    n: usize,
    objective: Objective,
    ceiling: u32,
) -> Result<CoefficientSet> {
    let config = SearchConfig {
        n,
        magnitude_bound: ceiling,
        objective,
    };
    find_coefficients(&config)?.ok_or(Error::SearchCeiling { n, bound: ceiling })
}

/// Fast admissibility test on a coefficient slice. Returns `max |total|`
/// when admissible.
pub fn admissible_span(c: &[i64]) -> Option<u64> {
    let n = c.len();
    let s: i64 = c.iter().sum();
    let mut totals = Vec::with_capacity(1 << n);
    totals.push(s);
    for k in 0..n {
        let d = c[k] - c[(k + n - 1) % n];
        for i in 0..totals.len() {
            totals.push(totals[i] + d);
        }
    }
    let w_abs: Vec<u64> = (0..n).map(|j| totals[1 << j].unsigned_abs()).collect();
    for (i, a) in w_abs.iter().enumerate() {
        if w_abs[i + 1..].contains(a) {
            return None;
        }
    }
    let mut span = 0;
    for (mask, t) in totals.iter().enumerate() {
        let a = t.unsigned_abs();
        span = span.max(a);
        if !mask.is_power_of_two() && w_abs.contains(&a) {
            return None;
        }
    }
    Some(span)
}

/// Fixed-width set of integers in `[-offset, offset]`.
#[derive(Clone)]
struct ValueSet {
    words: Vec<u64>,
    offset: i64,
}

impl ValueSet {
    fn empty(offset: i64) -> Self {
        let bits = (2 * offset + 1) as usize;
        ValueSet {
            words: alloc::vec![0; bits.div_ceil(64)],
            offset,
        }
    }

    fn insert(&mut self, v: i64) {
        let i = (v + self.offset) as usize;
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, v: i64) -> bool {
        let i = v + self.offset;
        if i < 0 || i > 2 * self.offset {
            return false;
        }
        let i = i as usize;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// `self |= src + shift`, dropping values that leave the window.
    fn or_shifted(&mut self, src: &ValueSet, shift: i64) {
        let n = self.words.len() as i64;
        let (word_shift, bit_shift) = (shift.div_euclid(64), shift.rem_euclid(64) as u32);
        for (i, &w) in src.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let lo = i as i64 + word_shift;
            if (0..n).contains(&lo) {
                self.words[lo as usize] |= w << bit_shift;
            }
            if bit_shift != 0 && (0..n).contains(&(lo + 1)) {
                self.words[(lo + 1) as usize] |= w >> (64 - bit_shift);
            }
        }
        // clear bits above the window
        let top = (2 * self.offset + 1) as usize;
        if !top.is_multiple_of(64) {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << (top % 64)) - 1;
        }
    }
}

/// Sets describing an assigned difference prefix `D`.
#[derive(Clone)]
struct Level {
    /// Subset sums of `D`.
    sums: ValueSet,
    /// Negated subset sums of `D`.
    neg_sums: ValueSet,
    /// `d_j - sigma_T` for `j` in `D` and `T` a subset of `D` without `j`.
    offsets: ValueSet,
    lo: i64,
    hi: i64,
}

struct Dfs {
    n: usize,
    objective: Objective,
    coeffs: Vec<i64>,
    /// `levels[m]` describes the first `m` differences.
    levels: Vec<Level>,
    candidates: u64,
    best: Option<(u64, Vec<i64>)>,
}

impl Dfs {
    fn new(n: usize, objective: Objective) -> Self {
        Dfs {
            n,
            objective,
            coeffs: Vec::with_capacity(n),
            levels: Vec::new(),
            candidates: 0,
            best: None,
        }
    }

    fn run_level(&mut self, bound: u32) {
        // every sum of a subset of differences is at most 2 * bound * n in size
        let offset = 2 * bound as i64 * self.n as i64;
        let mut base = Level {
            sums: ValueSet::empty(offset),
            neg_sums: ValueSet::empty(offset),
            offsets: ValueSet::empty(offset),
            lo: 0,
            hi: 0,
        };
        base.sums.insert(0);
        base.neg_sums.insert(0);
        self.levels = alloc::vec![base; self.n];
        // Admissibility is invariant under cyclic rotation and negation, so
        // only sets rotated to start at +bound are enumerated; the leaves map
        // each one back to the least canonical member of its orbit.
        self.coeffs.clear();
        self.coeffs.push(bound as i64);
        self.descend(bound as i64);
    }

    fn descend(&mut self, bound: i64) {
        let depth = self.coeffs.len();
        let prev_c = self.coeffs[depth - 1];
        if depth + 1 == self.n {
            let first = self.coeffs[0];
            for x in -bound..=bound {
                if self.closing_pair_ok(x - prev_c, first - x) {
                    self.coeffs.push(x);
                    self.leaf();
                    self.coeffs.pop();
                }
            }
            return;
        }
        for x in -bound..=bound {
            if self.push_diff(depth, x - prev_c) {
                self.coeffs.push(x);
                self.descend(bound);
                self.coeffs.pop();
            }
        }
    }

    /// Computes `levels[depth]` from `levels[depth - 1]` by adding
    /// difference `d`, unless that creates a hereditary collision.
    fn push_diff(&mut self, depth: usize, d: i64) -> bool {
        let (done, rest) = self.levels.split_at_mut(depth);
        let prev = &done[depth - 1];
        // d is a subset sum, closes a zero-sum subset, or completes d_j = sigma_T
        if prev.sums.contains(d) || prev.neg_sums.contains(d) || prev.offsets.contains(d) {
            return false;
        }
        let (lo, hi) = (prev.lo + d.min(0), prev.hi + d.max(0));
        if let (Objective::MinRange, Some((best, _))) = (self.objective, &self.best) {
            // half the subset-sum spread bounds max |total| from below
            if ((hi - lo) as u64).div_ceil(2) > *best {
                return false;
            }
        }
        let next = &mut rest[0];
        next.sums.words.copy_from_slice(&prev.sums.words);
        next.sums.or_shifted(&prev.sums, d);
        next.neg_sums.words.copy_from_slice(&prev.neg_sums.words);
        next.neg_sums.or_shifted(&prev.neg_sums, -d);
        next.offsets.words.copy_from_slice(&prev.offsets.words);
        next.offsets.or_shifted(&prev.offsets, -d);
        next.offsets.or_shifted(&prev.neg_sums, d);
        next.lo = lo;
        next.hi = hi;
        true
    }

    /// Checks the last two differences together: `a = d_{n-1}` and the
    /// wrap-around `e = d_0`, which closes the cycle. The full difference
    /// set always sums to zero, so that subset is exempt.
    fn closing_pair_ok(&self, a: i64, e: i64) -> bool {
        let level = &self.levels[self.n - 2];
        let (sums, neg_sums, offsets) = (&level.sums, &level.neg_sums, &level.offsets);
        if sums.contains(a) || neg_sums.contains(a) || offsets.contains(a) {
            return false;
        }
        // e against the prefix extended by a
        !(sums.contains(e)
            || sums.contains(e - a)
            || offsets.contains(e)
            || offsets.contains(e + a)
            || neg_sums.contains(e - a))
    }

    fn leaf(&mut self) {
        self.candidates += 1;
        let g = self
            .coeffs
            .iter()
            .fold(0u64, |g, c| gcd(g, c.unsigned_abs()));
        if g != 1 {
            return;
        }
        let Some(span) = admissible_span(&self.coeffs) else {
            return;
        };
        let key = match self.objective {
            Objective::MinMaxAbs => 0,
            Objective::MinRange => span,
        };
        let rep = least_orbit_member(&self.coeffs);
        let better = match &self.best {
            None => true,
            Some((best_key, best)) => key < *best_key || (key == *best_key && rep < *best),
        };
        if better {
            self.best = Some((key, rep));
        }
    }
}

/// Lexicographically least canonical set among the rotations of `c` and
/// their negations.
fn least_orbit_member(c: &[i64]) -> Vec<i64> {
    let n = c.len();
    (0..n)
        .map(|r| {
            let mut rotated: Vec<i64> = c[r..].iter().chain(&c[..r]).copied().collect();
            if rotated.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                rotated.iter_mut().for_each(|x| *x = -*x);
            }
            rotated
        })
        .min()
        .expect("nonempty coefficient list")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::reference_coefficients;

    #[test]
    fn span_agrees_on_reference_sets() {
        assert_eq!(
            admissible_span(reference_coefficients(3).unwrap().as_slice()),
            Some(7)
        );
        assert_eq!(
            admissible_span(reference_coefficients(4).unwrap().as_slice()),
            Some(20)
        );
        assert_eq!(admissible_span(&[1, -1, 3]), None);
        assert_eq!(admissible_span(&[0, 0]), None);
    }

    #[test]
    fn bound_zero_is_rejected() {
        assert!(matches!(
            find_coefficients(&SearchConfig::new(3, 0)),
            Err(Error::InvalidSearch(_))
        ));
        assert!(matches!(
            find_coefficients(&SearchConfig::new(1, 3)),
            Err(Error::PhotonCount { .. })
        ));
    }

    #[test]
    fn three_photons_within_three() {
        let c = find_coefficients(&SearchConfig::new(3, 3))
            .unwrap()
            .unwrap();
        assert!(c.max_abs() <= 3);
        assert!(c.is_canonical());
    }

    #[test]
    fn ceiling_is_reported() {
        // two photons: every total is s or s +- d, so some bound is needed
        let r = minimal_coefficients(2, Objective::MinMaxAbs, 64).unwrap();
        assert!(admissible_span(r.as_slice()).is_some());
    }

    #[test]
    fn progress_reports_each_level() {
        let mut levels = Vec::new();
        let found =
            find_coefficients_with_progress(&SearchConfig::new(4, 8), |p| levels.push(p.bound))
                .unwrap()
                .unwrap();
        assert_eq!(levels.last().copied(), Some(found.max_abs() as u32));
        assert_eq!(levels, (1..=found.max_abs() as u32).collect::<Vec<_>>());
    }
}
