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

//! The coefficient search checked against plain exhaustive enumeration.

use wkerr_core::search::admissible_span;
use wkerr_core::*;

/// Admissibility straight from the definition: route every input, total
/// it, and compare magnitudes pairwise.
fn brute_admissible(c: &[i64]) -> bool {
    let n = c.len();
    let t = build_chain(n).unwrap();
    let totals: Vec<(BasisState, i64)> = BasisState::enumerate(n)
        .unwrap()
        .map(|v| {
            let occ = t.route_basis(&v).unwrap();
            (
                v,
                c.iter()
                    .zip(occ.counts())
                    .map(|(&ck, &nk)| ck * nk as i64)
                    .sum(),
            )
        })
        .collect();
    totals
        .iter()
        .filter(|(v, _)| v.weight() == 1)
        .all(|(w, tw)| totals.iter().all(|(u, tu)| u == w || tu.abs() != tw.abs()))
}

fn all_sets(n: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    let width = (2 * bound + 1) as u64;
    (0..width.pow(n as u32)).map(move |mut i| {
        (0..n)
            .map(|_| {
                let x = (i % width) as i64 - bound;
                i /= width;
                x
            })
            .collect()
    })
}

/// Lexicographically least canonical admissible set with the smallest
/// `max |c|`, by enumerating every set with `max |c| <= bound`.
fn brute_min_max_abs(n: usize, bound: i64) -> Option<Vec<i64>> {
    all_sets(n, bound)
        .filter(|c| CoefficientSet::new(c.clone()).is_canonical() && c.iter().any(|&x| x != 0))
        .filter(|c| brute_admissible(c))
        .min_by_key(|c| (c.iter().map(|x| x.abs()).max(), c.clone()))
}

#[test]
fn fast_check_matches_definition() {
    for n in 2..=4 {
        for c in all_sets(n, 3) {
            assert_eq!(admissible_span(&c).is_some(), brute_admissible(&c), "{c:?}");
        }
    }
}

#[test]
fn min_max_abs_matches_exhaustion() {
    for (n, bound) in [(2, 3), (3, 3), (4, 5), (5, 6)] {
        let expected = brute_min_max_abs(n, bound).expect("oracle finds a set");
        let found = minimal_coefficients(n, Objective::MinMaxAbs, 64).unwrap();
        assert_eq!(found.as_slice(), &expected[..], "n = {n}");
    }
}

#[test]
fn three_photons_need_magnitude_three() {
    // no admissible set in {-2..2}^3
    assert!(all_sets(3, 2).all(|c| !brute_admissible(&c)));
    let found = find_coefficients(&SearchConfig::new(3, 3))
        .unwrap()
        .unwrap();
    assert_eq!(found.max_abs(), 3);
    assert!(find_coefficients(&SearchConfig::new(3, 2))
        .unwrap()
        .is_none());
}

#[test]
fn four_photons_beat_the_published_set() {
    let found = minimal_coefficients(4, Objective::MinMaxAbs, 64).unwrap();
    assert!(found.max_abs() <= reference_coefficients(4).unwrap().max_abs());
    assert!(brute_admissible(found.as_slice()));
}

#[test]
fn five_photons_within_sixteen() {
    let found = find_coefficients(&SearchConfig::new(5, 16))
        .unwrap()
        .unwrap();
    assert!(found.max_abs() <= 16);
    assert!(brute_admissible(found.as_slice()));
}

#[test]
fn min_range_matches_exhaustion() {
    for n in 2..=4 {
        let found = minimal_coefficients(n, Objective::MinRange, 64).unwrap();
        let span = admissible_span(found.as_slice()).unwrap();
        // |c_k| < 2 max|total|, so this window holds every competitor
        let window = 2 * span as i64;
        let best = all_sets(n, window)
            .filter(|c| CoefficientSet::new(c.clone()).is_canonical())
            .filter_map(|c| admissible_span(&c).map(|s| (s, c)))
            .min()
            .unwrap();
        assert_eq!((span, found.as_slice().to_vec()), best, "n = {n}");
    }
}

#[test]
fn search_is_deterministic_and_monotone() {
    let config = SearchConfig::new(5, 10);
    let first = find_coefficients(&config).unwrap();
    assert_eq!(first, find_coefficients(&config).unwrap());
    let first = first.unwrap();
    for bound in first.max_abs() as u32..=first.max_abs() as u32 + 3 {
        let again = find_coefficients(&SearchConfig::new(5, bound)).unwrap();
        assert_eq!(again.as_ref(), Some(&first));
    }
}

#[test]
fn zero_set_never_admissible() {
    assert!(!brute_admissible(&[0, 0]));
    assert_eq!(admissible_span(&[0, 0]), None);
}

#[test]
fn ceiling_error() {
    assert_eq!(
        minimal_coefficients(4, Objective::MinMaxAbs, 2),
        Err(Error::SearchCeiling { n: 4, bound: 2 })
    );
}
