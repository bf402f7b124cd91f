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

//! Whether the W components can be told apart by the magnitude of the
//! total probe phase.
//!
//! X-quadrature readout is blind to the sign of the phase, so a W component
//! is identifiable only if its `|total|` differs from that of every other
//! input basis state. Non-W inputs are allowed to collide with each other.

use alloc::vec::Vec;

use crate::error::Result;
use crate::network::build_chain;
use crate::phase::{total_phase, CoefficientSet, PhaseTable};
use crate::state::{BasisState, WComponentSet};

/// A W component whose `|total|` is shared by another input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub w_component: BasisState,
    pub other: BasisState,
    pub abs_total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishabilityReport {
    pub n: usize,
    pub coefficients: CoefficientSet,
    /// Total phase of each W component, in [`WComponentSet`] order.
    pub w_totals: Vec<(BasisState, i64)>,
    pub pass: bool,
    pub collisions: Vec<Collision>,
    /// Smallest gap between the `|total|` of a W component and that of any
    /// other input. Zero exactly when there is a collision.
    pub integer_margin: u64,
}

impl DistinguishabilityReport {
    pub fn w_total(&self, v: &BasisState) -> Option<i64> {
        self.w_totals.iter().find(|(w, _)| w == v).map(|&(_, t)| t)
    }
}

pub fn check_distinguishability(table: &PhaseTable) -> DistinguishabilityReport {
    let n = table.n();
    let components = WComponentSet::new(n).expect("phase tables have n >= 2");
    let mut w_totals = Vec::with_capacity(n);
    let mut collisions = Vec::new();
    let mut integer_margin = u64::MAX;

    for &w in components.members() {
        let total = table.row(&w).expect("table covers every basis state").total;
        w_totals.push((w, total));
        let abs = total.unsigned_abs();
        for row in table.rows().iter().filter(|r| r.basis != w) {
            let other = row.total.unsigned_abs();
            let gap = abs.abs_diff(other);
            integer_margin = integer_margin.min(gap);
            if gap == 0 {
                collisions.push(Collision {
                    w_component: w,
                    other: row.basis,
                    abs_total: abs,
                });
            }
        }
    }

    DistinguishabilityReport {
        n,
        coefficients: table.coefficients().clone(),
        w_totals,
        pass: collisions.is_empty(),
        collisions,
        integer_margin,
    }
}

/// Admissibility decided by simulating the PBS chain for every input,
/// without the closed-form occupation law or a prebuilt table.
pub fn admissible_by_routing(c: &CoefficientSet) -> Result<bool> {
    let n = c.len();
    let topology = build_chain(n)?;
    let mut totals = Vec::with_capacity(1 << n);
    for v in BasisState::enumerate(n)? {
        let occ = topology.route_basis(&v)?;
        totals.push((v, total_phase(c, &occ)?));
    }
    let components = WComponentSet::new(n)?;
    Ok(components.members().iter().all(|w| {
        let abs = totals[w.table_index() as usize].1.unsigned_abs();
        totals
            .iter()
            .all(|(u, t)| u == w || t.unsigned_abs() != abs)
    }))
}
