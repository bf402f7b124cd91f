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

//! Polarization basis states and sparse photonic superpositions.
//!
//! Photons are indexed `0..n` from the leftmost ket. A [`BasisState`] stores
//! its polarizations as a bit mask where bit `i` is set iff photon `i` is
//! vertically polarized. The derived ordering is lexicographic with `H < V`,
//! which is the row order of the phase tables (`HH..H` first, `VV..V` last).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest photon count a [`BasisState`] can hold.
pub const MAX_PHOTONS: usize = 63;

/// Smallest photon count the scheme supports.
pub const MIN_PHOTONS: usize = 2;

/// Amplitudes with magnitude below this are dropped from sparse states.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Allowed deviation of the squared norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-9;

pub(crate) fn check_photon_count(n: usize, max: usize) -> Result<()> {
    if (MIN_PHOTONS..=max).contains(&n) {
        Ok(())
    } else {
        Err(Error::PhotonCount {
            n,
            min: MIN_PHOTONS,
            max,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn flipped(self) -> Self {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Polarization::H => 'H',
            Polarization::V => 'V',
        }
    }
}

/// An ordered tuple of photon polarizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    n: u8,
    bits: u64,
}

impl BasisState {
    /// Builds a state from its V-encoding: bit `i` set iff photon `i` is V.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > MAX_PHOTONS {
            return Err(Error::PhotonCount {
                n,
                min: 1,
                max: MAX_PHOTONS,
            });
        }
        Ok(BasisState {
            n: n as u8,
            bits: bits & mask(n),
        })
    }

    pub fn all_h(n: usize) -> Result<Self> {
        Self::from_bits(n, 0)
    }

    pub fn all_v(n: usize) -> Result<Self> {
        Self::from_bits(n, u64::MAX)
    }

    pub fn from_polarizations(pols: &[Polarization]) -> Result<Self> {
        let bits = pols
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == Polarization::V)
            .fold(0u64, |acc, (i, _)| acc | (1 << i));
        Self::from_bits(pols.len(), bits)
    }

    /// The state at position `index` of the table order, where photon 0 is
    /// the most significant digit.
    pub fn from_table_index(n: usize, index: u64) -> Result<Self> {
        let s = Self::from_bits(n, 0)?;
        Ok(BasisState {
            bits: reverse_low_bits(index & mask(n), n),
            ..s
        })
    }

    pub fn table_index(&self) -> u64 {
        reverse_low_bits(self.bits, self.len())
    }

    /// The single-V state with the V photon at `photon`.
    pub fn single_v(n: usize, photon: usize) -> Result<Self> {
        if photon >= n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: photon + 1,
            });
        }
        Self::from_bits(n, 1 << photon)
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, photon: usize) -> Polarization {
        assert!(photon < self.len(), "photon index {photon} out of range");
        if self.is_v(photon) {
            Polarization::V
        } else {
            Polarization::H
        }
    }

    pub fn is_v(&self, photon: usize) -> bool {
        (self.bits >> photon) & 1 == 1
    }

    /// Number of V-polarized photons.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Swaps every H and V.
    pub fn complement(&self) -> Self {
        BasisState {
            n: self.n,
            bits: !self.bits & mask(self.len()),
        }
    }

    pub fn polarizations(&self) -> impl Iterator<Item = Polarization> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// All `2^n` states in table order.
    pub fn enumerate(n: usize) -> Result<impl Iterator<Item = BasisState>> {
        check_photon_count(n, MAX_PHOTONS)?;
        Ok((0..1u64 << n).map(move |i| BasisState::from_table_index(n, i).unwrap()))
    }
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn reverse_low_bits(bits: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        bits.reverse_bits() >> (64 - n)
    }
}

impl Ord for BasisState {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.table_index().cmp(&other.table_index()))
    }
}

impl PartialOrd for BasisState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.polarizations() {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for BasisState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pols = s
            .chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                'H' | 'h' => Ok(Polarization::H),
                'V' | 'v' => Ok(Polarization::V),
                other => Err(Error::Parse {
                    position: i,
                    found: other,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_polarizations(&pols)
    }
}

/// The `n` single-V basis states that make up a W state.
///
/// Members are ordered with the V photon moving from the last position to
/// the first: `HH..HV, HH..VH, ..., VH..HH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WComponentSet {
    n: usize,
    members: Vec<BasisState>,
}

impl WComponentSet {
    pub fn new(n: usize) -> Result<Self> {
        check_photon_count(n, MAX_PHOTONS)?;
        let members = (0..n)
            .rev()
            .map(|photon| BasisState::single_v(n, photon))
            .collect::<Result<Vec<_>>>()?;
        Ok(WComponentSet { n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[BasisState] {
        &self.members
    }

    pub fn contains(&self, v: &BasisState) -> bool {
        v.len() == self.n && v.weight() == 1
    }
}

/// A normalized superposition of basis states, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonicState {
    n: usize,
    amplitudes: BTreeMap<BasisState, Complex64>,
}

impl PhotonicState {
    /// Builds a state from explicit basis amplitudes. Repeated keys are
    /// summed; the result must be normalized.
    pub fn from_amplitudes<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisState, Complex64)>,
    {
        check_photon_count(n, MAX_PHOTONS)?;
        let mut amplitudes = BTreeMap::new();
        for (v, a) in entries {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            *amplitudes.entry(v).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        amplitudes.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        let state = PhotonicState { n, amplitudes };
        check_norm(state.norm_sqr())?;
        Ok(state)
    }

    /// A pure basis state with amplitude 1.
    pub fn basis(v: BasisState) -> Result<Self> {
        Self::from_amplitudes(v.len(), [(v, Complex64::new(1.0, 0.0))])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitude(&self, v: &BasisState) -> Complex64 {
        self.amplitudes.get(v).copied().unwrap_or_default()
    }

    pub fn probability(&self, v: &BasisState) -> f64 {
        self.amplitude(v).norm_sqr()
    }

    /// Nonzero entries in table order.
    pub fn iter(&self) -> impl Iterator<Item = (&BasisState, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisState> {
        self.amplitudes.keys()
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Total probability carried by the states accepted by `keep`.
    pub fn weight_where<F: Fn(&BasisState) -> bool>(&self, keep: F) -> f64 {
        self.amplitudes
            .iter()
            .filter(|(v, _)| keep(v))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects onto the states accepted by `keep` and renormalizes.
    /// Returns `None` when the projection has no weight.
    pub fn project<F: Fn(&BasisState) -> bool>(&self, keep: F) -> Option<Self> {
        let kept: BTreeMap<_, _> = self
            .amplitudes
            .iter()
            .filter(|(v, _)| keep(v))
            .map(|(v, a)| (*v, *a))
            .collect();
        let norm_sqr: f64 = kept.values().map(|a| a.norm_sqr()).sum();
        if norm_sqr < PRUNE_THRESHOLD * PRUNE_THRESHOLD {
            return None;
        }
        let scale = 1.0 / libm::sqrt(norm_sqr);
        let amplitudes = kept
            .into_iter()
            .map(|(v, a)| (v, a * scale))
            .filter(|(_, a)| a.norm() >= PRUNE_THRESHOLD)
            .collect();
        Some(PhotonicState {
            n: self.n,
            amplitudes,
        })
    }

    /// Largest amplitude difference to `other` over the union of supports.
    pub fn max_abs_diff(&self, other: &PhotonicState) -> f64 {
        self.amplitudes
            .keys()
            .chain(other.amplitudes.keys())
            .map(|v| (self.amplitude(v) - other.amplitude(v)).norm())
            .fold(0.0, f64::max)
    }
}

fn check_norm(norm_sqr: f64) -> Result<()> {
    if (norm_sqr - 1.0).abs() <= NORM_TOLERANCE {
        Ok(())
    } else {
        Err(Error::NotNormalized { norm_sqr })
    }
}

/// Expands a tensor product of single-photon states `amp_H |H> + amp_V |V>`.
pub fn make_product_state(per_photon: &[(Complex64, Complex64)]) -> Result<PhotonicState> {
    let n = per_photon.len();
    check_photon_count(n, MAX_PHOTONS)?;
    for (h, v) in per_photon {
        check_norm(h.norm_sqr() + v.norm_sqr())?;
    }

    let mut partial: Vec<(u64, Complex64)> = alloc::vec![(0, Complex64::new(1.0, 0.0))];
    for (photon, (amp_h, amp_v)) in per_photon.iter().enumerate() {
        let mut next = Vec::with_capacity(partial.len() * 2);
        for &(bits, a) in &partial {
            if amp_h.norm() >= PRUNE_THRESHOLD {
                next.push((bits, a * amp_h));
            }
            if amp_v.norm() >= PRUNE_THRESHOLD {
                next.push((bits | 1 << photon, a * amp_v));
            }
        }
        partial = next;
    }

    let amplitudes = partial
        .into_iter()
        .filter(|(_, a)| a.norm() >= PRUNE_THRESHOLD)
        .map(|(bits, a)| (BasisState::from_bits(n, bits).unwrap(), a))
        .collect();
    let state = PhotonicState { n, amplitudes };
    check_norm(state.norm_sqr())?;
    Ok(state)
}

/// A W state over `n` photons.
///
/// `amplitudes`, when given, are matched to [`WComponentSet`] members in
/// order, so the first amplitude belongs to `HH..HV`. The default is the
/// uniform `1/sqrt(n)` superposition.
pub fn make_w_state(n: usize, amplitudes: Option<&[Complex64]>) -> Result<PhotonicState> {
    let components = WComponentSet::new(n)?;
    let uniform;
    let amps = match amplitudes {
        Some(a) => {
            if a.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: a.len(),
                });
            }
            a
        }
        None => {
            uniform = alloc::vec![Complex64::new(1.0 / libm::sqrt(n as f64), 0.0); n];
            &uniform[..]
        }
    };
    PhotonicState::from_amplitudes(
        n,
        components
            .members()
            .iter()
            .copied()
            .zip(amps.iter().copied()),
    )
}

/// Swaps every H and V in `v`.
pub fn complement(v: &BasisState) -> BasisState {
    v.complement()
}
