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

//! Integer phase bookkeeping in units of the per-photon Kerr phase.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::network::{occupations_closed_form, OccupationVector};
use crate::state::{check_photon_count, BasisState};

/// Largest photon count for which full phase tables are built.
pub const MAX_TABLE_PHOTONS: usize = 24;

/// Per-mode phase multipliers: a photon in mode `k` shifts the probe by
/// `coefficients[k] * theta`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoefficientSet(Vec<i64>);

impl CoefficientSet {
    pub fn new(coefficients: Vec<i64>) -> Self {
        CoefficientSet(coefficients)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn max_abs(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn negated(&self) -> Self {
        CoefficientSet(self.0.iter().map(|c| -c).collect())
    }

    /// Divides out the gcd of the nonzero entries and flips the sign so
    /// the first nonzero entry is positive. The zero set is returned as is.
    pub fn canonical(&self) -> Self {
        let g = self.0.iter().fold(0u64, |g, c| gcd(g, c.unsigned_abs()));
        if g == 0 {
            return self.clone();
        }
        let sign = match self.0.iter().find(|&&c| c != 0) {
            Some(&c) if c < 0 => -1,
            _ => 1,
        };
        CoefficientSet(self.0.iter().map(|c| sign * c / g as i64).collect())
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }
}

impl From<&[i64]> for CoefficientSet {
    fn from(c: &[i64]) -> Self {
        CoefficientSet(c.to_vec())
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact total probe phase, in units of theta, for a given occupation.
pub fn total_phase(c: &CoefficientSet, occ: &OccupationVector) -> Result<i64> {
    if c.len() != occ.len() {
        return Err(Error::LengthMismatch {
            expected: c.len(),
            found: occ.len(),
        });
    }
    Ok(c.0
        .iter()
        .zip(occ.counts())
        .map(|(&ck, &nk)| ck * nk as i64)
        .sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseRow {
    pub basis: BasisState,
    pub occupation: OccupationVector,
    pub total: i64,
}

/// Occupations and total phases for every input basis state, in table order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseTable {
    n: usize,
    coefficients: CoefficientSet,
    rows: Vec<PhaseRow>,
}

impl PhaseTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coefficients
    }

    pub fn rows(&self) -> &[PhaseRow] {
        &self.rows
    }

    pub fn row(&self, v: &BasisState) -> Option<&PhaseRow> {
        if v.len() != self.n {
            return None;
        }
        self.rows.get(v.table_index() as usize)
    }

    pub fn totals(&self) -> impl Iterator<Item = i64> + '_ {
        self.rows.iter().map(|r| r.total)
    }

    pub fn max_abs_total(&self) -> u64 {
        self.totals().map(i64::unsigned_abs).max().unwrap_or(0)
    }
}

pub fn build_phase_table(n: usize, c: &CoefficientSet) -> Result<PhaseTable> {
    check_photon_count(n, MAX_TABLE_PHOTONS)?;
    if c.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: c.len(),
        });
    }
    let rows = BasisState::enumerate(n)?
        .map(|basis| {
            let occupation = occupations_closed_form(n, &basis)?;
            let total = total_phase(c, &occupation)?;
            Ok(PhaseRow {
                basis,
                occupation,
                total,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseTable {
        n,
        coefficients: c.clone(),
        rows,
    })
}

/// The published coefficient sets: `(1, -2, 3)` for three photons and
/// `(1, -2, 5, -8)` for four.
///
/// For three photons the figure caption gives `-1` for the second mode,
/// but only `-2` reproduces every total in the three-photon table, so the
/// table wins.
pub fn reference_coefficients(n: usize) -> Result<CoefficientSet> {
    match n {
        3 => Ok(CoefficientSet(alloc::vec![1, -2, 3])),
        4 => Ok(CoefficientSet(alloc::vec![1, -2, 5, -8])),
        _ => Err(Error::NoReferenceCoefficients { n }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(c: &[i64]) -> CoefficientSet {
        CoefficientSet::from(c)
    }

    #[test]
    fn total_phase_examples() {
        assert_eq!(
            total_phase(&cs(&[1, -2, 3]), &OccupationVector::from(&[1u8, 0, 2][..])),
            Ok(7)
        );
        assert_eq!(
            total_phase(
                &cs(&[1, -2, 5, -8]),
                &OccupationVector::from(&[0u8, 2, 0, 2][..])
            ),
            Ok(-20)
        );
        let c = cs(&[4, -9, 2, 17, -3]);
        assert_eq!(
            total_phase(&c, &OccupationVector::from(&[1u8; 5][..])),
            Ok(c.sum())
        );
        assert!(matches!(
            total_phase(&c, &OccupationVector::from(&[1u8; 4][..])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn two_photon_table() {
        // HV puts both photons in mode 2, VH both in mode 1
        let t = build_phase_table(2, &cs(&[1, -1])).unwrap();
        assert_eq!(t.totals().collect::<Vec<_>>(), [0, -2, 2, 0]);
    }

    #[test]
    fn table_guards() {
        assert!(matches!(
            build_phase_table(25, &cs(&[1; 25])),
            Err(Error::PhotonCount { .. })
        ));
        assert!(matches!(
            build_phase_table(1, &cs(&[1])),
            Err(Error::PhotonCount { .. })
        ));
        assert!(matches!(
            build_phase_table(3, &cs(&[1, 2])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn reference_sets() {
        assert_eq!(reference_coefficients(3).unwrap(), cs(&[1, -2, 3]));
        assert_eq!(reference_coefficients(4).unwrap(), cs(&[1, -2, 5, -8]));
        assert_eq!(
            reference_coefficients(5),
            Err(Error::NoReferenceCoefficients { n: 5 })
        );
    }

    #[test]
    fn canonical_form() {
        assert_eq!(cs(&[0, -4, 6]).canonical(), cs(&[0, 2, -3]));
        assert_eq!(cs(&[3, 6]).canonical(), cs(&[1, 2]));
        assert_eq!(cs(&[0, 0]).canonical(), cs(&[0, 0]));
        assert!(cs(&[1, -2, 5, -8]).is_canonical());
        assert!(!cs(&[-1, 2]).is_canonical());
    }

    #[test]
    fn row_lookup_by_basis() {
        let t = build_phase_table(3, &reference_coefficients(3).unwrap()).unwrap();
        let row = t.row(&"VVH".parse().unwrap()).unwrap();
        assert_eq!(row.occupation.counts(), [1, 2, 0]);
        assert_eq!(row.total, -3);
        assert_eq!(t.max_abs_total(), 7);
    }
}
