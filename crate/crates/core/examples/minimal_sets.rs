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

//! Prints the minimal coefficient sets for small photon counts.

use std::time::Instant;

use wkerr_core::search::{find_coefficients_with_progress, SearchConfig, DEFAULT_BOUND_CEILING};
use wkerr_core::Objective;

fn main() {
    let max_n: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(8);
    let objective = match std::env::args().nth(2).as_deref() {
        Some("range") => Objective::MinRange,
        _ => Objective::MinMaxAbs,
    };
    for n in 2..=max_n {
        let start = Instant::now();
        let mut tested = 0;
        let config = SearchConfig::new(n, DEFAULT_BOUND_CEILING).with_objective(objective);
        let found =
            find_coefficients_with_progress(&config, |p| tested = p.candidates_tested).unwrap();
        println!(
            "n={n} {:?} candidates={tested} in {:.2?}",
            found.map(|c| c.as_slice().to_vec()),
            start.elapsed()
        );
    }
}
