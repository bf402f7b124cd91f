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

//! Model of one-step W-state identification with cross-Kerr phase shifts.
//!
//! `n` polarization-encoded photons pass a chain of polarizing beam
//! splitters that spreads them over `n` rails, each coupled to one coherent
//! probe through a cross-Kerr medium. A photon on rail `k` shifts the probe
//! phase by `c_k * theta`. With well chosen integer coefficients `c_k`, each
//! single-V ("W component") input produces a total probe phase whose
//! magnitude no other input shares, so one X-quadrature homodyne reading
//! identifies it. A mirrored chain restores the photons to their input rails.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod distinguish;
pub mod error;
pub mod homodyne;
pub mod network;
pub mod phase;
pub mod search;
pub mod state;

pub use distinguish::{
    admissible_by_routing, check_distinguishability, Collision, DistinguishabilityReport,
};
pub use error::{Error, Result};
pub use homodyne::{
    branch_partition, classify, confusion_matrix, error_probability, expected_x, measure_collapse,
    sample_x, worst_pair, worst_w_pair, Branch, BranchPartition, ConfusionMatrix, GuardPolicy,
    MeasurementOutcome, Measurer, ProbeModel,
};
pub use network::{
    build_chain, occupations_closed_form, NetworkTopology, OccupationVector, Pbs, PortBeam, Rail,
    Side,
};
pub use phase::{
    build_phase_table, reference_coefficients, total_phase, CoefficientSet, PhaseRow, PhaseTable,
};
pub use search::{
    find_coefficients, minimal_coefficients, Objective, SearchConfig, SearchProgress,
};
pub use state::{
    complement, make_product_state, make_w_state, BasisState, PhotonicState, Polarization,
    WComponentSet,
};

pub use num_complex::Complex64;
