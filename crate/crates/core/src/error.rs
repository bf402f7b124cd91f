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

use core::fmt;

/// Errors produced by the measurement model.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Photon count outside the supported range.
    PhotonCount { n: usize, min: usize, max: usize },
    /// Two objects that must agree on the photon count do not.
    LengthMismatch { expected: usize, found: usize },
    /// Amplitudes whose squared norm is not 1.
    NotNormalized { norm_sqr: f64 },
    /// A string that is not a valid basis state, e.g. a letter other than H or V.
    Parse { position: usize, found: char },
    /// No built-in coefficient set exists for this photon count.
    NoReferenceCoefficients { n: usize },
    /// Probe parameters outside their domain.
    InvalidProbe { alpha: f64, theta: f64 },
    /// `max |total| * theta` exceeds pi, so distinct |total| values may share a quadrature mean.
    PhaseBudget { max_abs_total: u64, theta: f64 },
    /// Classification over an empty branch list.
    NoBranches,
    /// The coefficient search hit its magnitude ceiling without finding an admissible set.
    SearchCeiling { n: usize, bound: u32 },
    /// Invalid search parameters.
    InvalidSearch(&'static str),
    /// An output rail of the mirrored network does not carry exactly its own photon.
    Routing { output: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PhotonCount { n, min, max } => {
                write!(f, "photon count {n} outside supported range {min}..={max}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::NotNormalized { norm_sqr } => {
                write!(f, "amplitudes not normalized: sum of |a|^2 = {norm_sqr}")
            }
            Error::Parse { position, found } => {
                write!(f, "invalid polarization {found:?} at position {position}, expected H or V")
            }
            Error::NoReferenceCoefficients { n } => write!(
                f,
                "no reference coefficient set for n = {n} (only n = 3, 4); use the coefficient search"
            ),
            Error::InvalidProbe { alpha, theta } => write!(
                f,
                "invalid probe: alpha = {alpha} must be >= 0 and theta = {theta} must lie in (0, pi]"
            ),
            Error::PhaseBudget { max_abs_total, theta } => write!(
                f,
                "phase budget exceeded: max |total| * theta = {max_abs_total} * {theta} > pi"
            ),
            Error::NoBranches => write!(f, "cannot classify against an empty branch list"),
            Error::SearchCeiling { n, bound } => write!(
                f,
                "no admissible coefficient set for n = {n} with max |c| <= {bound}"
            ),
            Error::InvalidSearch(msg) => write!(f, "invalid search configuration: {msg}"),
            Error::Routing { output } => {
                write!(f, "output rail {output} does not carry exactly its own photon")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
