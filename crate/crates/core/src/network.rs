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

//! The polarizing beam splitter chain and its mirror image.
//!
//! The left chain takes the `n` input photons and spreads them over `n`
//! Kerr-coupled rails. `PBS_1` joins photons 1 and 2; each later `PBS_k`
//! joins the pass-through beam of `PBS_{k-1}` with photon `k+1`. Every PBS
//! sends its reflected-side output into Kerr mode `k` and its other output
//! onward; the last one sends both outputs into modes `n-1` and `n`. The
//! right chain is the same network traversed in reverse, which puts each
//! photon back on its own rail with its input polarization.
//!
//! Routing is rail bookkeeping: a PBS transmits H and reflects V and never
//! changes a photon's polarization.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::state::{check_photon_count, BasisState, Polarization, MAX_PHOTONS};

/// An optical rail in the network. Indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rail {
    /// Input rail of photon `i`.
    Input(usize),
    /// Pass-through beam leaving left `PBS_{k+1}`.
    LeftLink(usize),
    /// Kerr-coupled mode `k`.
    Kerr(usize),
    /// Beam leaving right `PBS'_{k+1}` toward `PBS'_k`.
    RightLink(usize),
    /// Output rail of photon `i`.
    Output(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A PBS with its port wiring.
///
/// Light on `inputs[0]` leaves on `outputs[0]` if H and `outputs[1]` if V;
/// light on `inputs[1]` leaves on `outputs[1]` if H and `outputs[0]` if V.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pbs {
    pub label: String,
    pub side: Side,
    pub inputs: [Rail; 2],
    pub outputs: [Rail; 2],
}

impl Pbs {
    fn output_for(&self, port: usize, pol: Polarization) -> Rail {
        match (port, pol) {
            (0, Polarization::H) | (1, Polarization::V) => self.outputs[0],
            _ => self.outputs[1],
        }
    }
}

/// The photons co-propagating on one rail, as (photon index, polarization).
pub type PortBeam = BTreeSet<(usize, Polarization)>;

/// Occupation numbers of the Kerr-coupled modes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupationVector(Vec<u8>);

impl OccupationVector {
    pub fn new(counts: Vec<u8>) -> Self {
        OccupationVector(counts)
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_photons(&self) -> u32 {
        self.0.iter().map(|&c| c as u32).sum()
    }
}

impl From<&[u8]> for OccupationVector {
    fn from(counts: &[u8]) -> Self {
        OccupationVector(counts.to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkTopology {
    n: usize,
    left: Vec<Pbs>,
    right: Vec<Pbs>,
    mode_labels: Vec<String>,
}

/// Label of Kerr mode `k` (zero-based): `a_c`, `b_c`, ... then `m27_c`, ...
pub fn mode_label(k: usize) -> String {
    if k < 26 {
        format!("{}_c", (b'a' + k as u8) as char)
    } else {
        format!("m{}_c", k + 1)
    }
}

/// Builds the left chain for `n` photons and its mirror.
pub fn build_chain(n: usize) -> Result<NetworkTopology> {
    check_photon_count(n, MAX_PHOTONS)?;
    let last = n - 2;
    let left = (0..n - 1)
        .map(|k| Pbs {
            label: format!("PBS{}", k + 1),
            side: Side::Left,
            inputs: [
                if k == 0 {
                    Rail::Input(0)
                } else {
                    Rail::LeftLink(k - 1)
                },
                Rail::Input(k + 1),
            ],
            outputs: [
                if k == last {
                    Rail::Kerr(n - 1)
                } else {
                    Rail::LeftLink(k)
                },
                Rail::Kerr(k),
            ],
        })
        .collect();
    let right = (0..n - 1)
        .rev()
        .map(|k| Pbs {
            label: format!("PBS{}'", k + 1),
            side: Side::Right,
            inputs: [
                if k == last {
                    Rail::Kerr(n - 1)
                } else {
                    Rail::RightLink(k)
                },
                Rail::Kerr(k),
            ],
            outputs: [
                if k == 0 {
                    Rail::Output(0)
                } else {
                    Rail::RightLink(k - 1)
                },
                Rail::Output(k + 1),
            ],
        })
        .collect();
    Ok(NetworkTopology {
        n,
        left,
        right,
        mode_labels: (0..n).map(mode_label).collect(),
    })
}

impl NetworkTopology {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn left(&self) -> &[Pbs] {
        &self.left
    }

    /// Right-side PBSs in traversal order (`PBS_{n-1}'` first).
    pub fn right(&self) -> &[Pbs] {
        &self.right
    }

    pub fn left_pbs_count(&self) -> usize {
        self.left.len()
    }

    pub fn right_pbs_count(&self) -> usize {
        self.right.len()
    }

    pub fn total_pbs_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn mode_labels(&self) -> &[String] {
        &self.mode_labels
    }

    fn check_len(&self, v: &BasisState) -> Result<()> {
        if v.len() == self.n {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.n,
                found: v.len(),
            })
        }
    }

    /// Pushes the photons of `v` through `stages`, starting from `rails`.
    fn propagate<'a, I>(rails: &mut BTreeMap<Rail, PortBeam>, stages: I)
    where
        I: IntoIterator<Item = &'a Pbs>,
    {
        for pbs in stages {
            for (port, input) in pbs.inputs.iter().enumerate() {
                let beam = rails.remove(input).unwrap_or_default();
                for (photon, pol) in beam {
                    rails
                        .entry(pbs.output_for(port, pol))
                        .or_default()
                        .insert((photon, pol));
                }
            }
        }
    }

    fn inputs_for(&self, v: &BasisState) -> BTreeMap<Rail, PortBeam> {
        (0..self.n)
            .map(|i| (Rail::Input(i), PortBeam::from([(i, v.get(i))])))
            .collect()
    }

    /// The beams on each Kerr mode after the left chain.
    pub fn kerr_beams(&self, v: &BasisState) -> Result<Vec<PortBeam>> {
        self.check_len(v)?;
        let mut rails = self.inputs_for(v);
        Self::propagate(&mut rails, &self.left);
        Ok((0..self.n)
            .map(|k| rails.remove(&Rail::Kerr(k)).unwrap_or_default())
            .collect())
    }

    /// Photon counts in each Kerr mode, obtained by simulating the left chain.
    pub fn route_basis(&self, v: &BasisState) -> Result<OccupationVector> {
        let beams = self.kerr_beams(v)?;
        Ok(OccupationVector(
            beams.iter().map(|b| b.len() as u8).collect(),
        ))
    }

    /// Routes `v` through the left chain and then the mirrored right chain,
    /// returning the polarizations found on the output rails.
    pub fn roundtrip_identity(&self, v: &BasisState) -> Result<BasisState> {
        self.check_len(v)?;
        let mut rails = self.inputs_for(v);
        Self::propagate(&mut rails, self.left.iter().chain(&self.right));
        let mut pols = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let beam = rails.remove(&Rail::Output(i)).unwrap_or_default();
            match beam.iter().next() {
                Some(&(photon, pol)) if beam.len() == 1 && photon == i => pols.push(pol),
                _ => return Err(Error::Routing { output: i }),
            }
        }
        BasisState::from_polarizations(&pols)
    }
}

/// Kerr-mode occupations from the cyclic difference law
/// `n_k = 1 + v_k - v_{k+1}` (indices mod `n`, `v_i = 1` iff photon `i` is V).
pub fn occupations_closed_form(n: usize, v: &BasisState) -> Result<OccupationVector> {
    check_photon_count(n, MAX_PHOTONS)?;
    if v.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let bit = |i: usize| v.is_v(i) as u8;
    Ok(OccupationVector(
        (0..n).map(|k| 1 + bit(k) - bit((k + 1) % n)).collect(),
    ))
}
