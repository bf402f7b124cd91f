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

//! Coherent probe readout by X-quadrature homodyne detection.
//!
//! Convention: `x = a + a^dagger`, so a coherent probe of real amplitude
//! `alpha` carrying phase `phi` gives outcomes distributed as a unit-variance
//! Gaussian around `2 alpha cos(phi)`. The readout is blind to the sign of
//! `phi`; inputs whose totals share a cosine form one [`Branch`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::phase::{build_phase_table, CoefficientSet, PhaseTable};
use crate::state::{BasisState, PhotonicState};

/// Cosines closer than this fall into the same branch.
pub const COSINE_TOLERANCE: f64 = 1e-12;

/// Default per-unit Kerr phase in radians.
pub const DEFAULT_THETA: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeModel {
    alpha: f64,
    theta: f64,
}

impl ProbeModel {
    /// `alpha` must be finite and non-negative, `theta` in `(0, pi]`.
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        let alpha_ok = alpha.is_finite() && alpha >= 0.0;
        let theta_ok = theta.is_finite() && theta > 0.0 && theta <= PI;
        if alpha_ok && theta_ok {
            Ok(ProbeModel { alpha, theta })
        } else {
            Err(Error::InvalidProbe { alpha, theta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cosine(&self, total: i64) -> f64 {
        libm::cos(total as f64 * self.theta)
    }

    /// Whether every total up to `max_abs_total` maps to a distinct cosine.
    pub fn within_budget(&self, max_abs_total: u64) -> bool {
        max_abs_total as f64 * self.theta <= PI
    }
}

/// Mean X-quadrature outcome for a probe carrying phase `total * theta`.
pub fn expected_x(probe: &ProbeModel, total: i64) -> f64 {
    2.0 * probe.alpha * probe.cosine(total)
}

/// One homodyne outcome: the branch mean plus unit-variance Gaussian noise.
pub fn sample_x<R: Rng + ?Sized>(probe: &ProbeModel, total: i64, rng: &mut R) -> f64 {
    let noise: f64 = rng.sample(StandardNormal);
    expected_x(probe, total) + noise
}

/// Error of the maximum-likelihood decision between two totals.
pub fn error_probability(probe: &ProbeModel, total1: i64, total2: i64) -> f64 {
    let separation = probe.alpha * (probe.cosine(total1) - probe.cosine(total2));
    0.5 * libm::erfc(libm::fabs(separation) / SQRT_2)
}

/// Inputs that the homodyne readout cannot tell apart.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub id: usize,
    pub mean_x: f64,
    /// Distinct `|total|` values in this branch, ascending.
    pub abs_totals: Vec<u64>,
    /// Members in table order.
    pub members: Vec<BasisState>,
}

impl Branch {
    /// A representative total, the smallest `|total|` of the branch.
    pub fn total(&self) -> i64 {
        self.abs_totals[0] as i64
    }
}

/// What to do when `max |total| * theta > pi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GuardPolicy {
    /// Build the partition anyway and flag it.
    #[default]
    Warn,
    /// Fail with [`Error::PhaseBudget`].
    Refuse,
}

/// Branches of a phase table under a given probe, with branch ids ordered
/// by ascending `|total|`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPartition {
    branches: Vec<Branch>,
    branch_of: BTreeMap<BasisState, usize>,
    /// `max |total| * theta` exceeds pi.
    pub budget_exceeded: bool,
    /// Some branch joins distinct `|total|` values through an accidental
    /// cosine coincidence.
    pub merged: bool,
}

impl BranchPartition {
    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn branch_of(&self, v: &BasisState) -> Option<usize> {
        self.branch_of.get(v).copied()
    }

    /// Branch weights `sum |a_v|^2` of `state`, indexed by branch id.
    pub fn weights(&self, state: &PhotonicState) -> Vec<f64> {
        let mut w = alloc::vec![0.0; self.branches.len()];
        for (v, a) in state.iter() {
            if let Some(b) = self.branch_of(v) {
                w[b] += a.norm_sqr();
            }
        }
        w
    }

    pub fn classify(&self, x: f64) -> usize {
        nearest(&self.branches, x).expect("partitions are nonempty")
    }
}

pub fn branch_partition(
    table: &PhaseTable,
    probe: &ProbeModel,
    policy: GuardPolicy,
) -> Result<BranchPartition> {
    let max_abs_total = table.max_abs_total();
    let budget_exceeded = !probe.within_budget(max_abs_total);
    if budget_exceeded && policy == GuardPolicy::Refuse {
        return Err(Error::PhaseBudget {
            max_abs_total,
            theta: probe.theta,
        });
    }

    let mut by_abs: BTreeMap<u64, Vec<BasisState>> = BTreeMap::new();
    for row in table.rows() {
        by_abs
            .entry(row.total.unsigned_abs())
            .or_default()
            .push(row.basis);
    }

    let mut branches: Vec<Branch> = Vec::new();
    let mut cosines: Vec<f64> = Vec::new();
    for (abs, members) in by_abs {
        let cos = probe.cosine(abs as i64);
        match cosines
            .iter()
            .position(|c| libm::fabs(c - cos) <= COSINE_TOLERANCE)
        {
            Some(b) => {
                branches[b].abs_totals.push(abs);
                branches[b].members.extend(members);
            }
            None => {
                cosines.push(cos);
                branches.push(Branch {
                    id: branches.len(),
                    mean_x: 2.0 * probe.alpha * cos,
                    abs_totals: alloc::vec![abs],
                    members,
                });
            }
        }
    }

    let mut merged = false;
    let mut branch_of = BTreeMap::new();
    for b in &mut branches {
        merged |= b.abs_totals.len() > 1;
        b.members.sort();
        for v in &b.members {
            branch_of.insert(*v, b.id);
        }
    }
    Ok(BranchPartition {
        branches,
        branch_of,
        budget_exceeded,
        merged,
    })
}

fn nearest(branches: &[Branch], x: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, b) in branches.iter().enumerate() {
        let dist = libm::fabs(x - b.mean_x);
        // strict comparison keeps the lower id on exact ties
        if best.is_none_or(|(_, d)| dist < d) {
            best = Some((i, dist));
        }
    }
    best.map(|(i, _)| i)
}

/// Maximum-likelihood branch for outcome `x`: the nearest mean, with exact
/// ties going to the lower id.
pub fn classify(branches: &[Branch], x: f64) -> Result<&Branch> {
    nearest(branches, x)
        .map(|i| &branches[i])
        .ok_or(Error::NoBranches)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub x: f64,
    pub true_branch: usize,
    pub branch: usize,
    /// The input restricted to the classified branch and renormalized;
    /// `None` when the classified branch carries no amplitude.
    pub posterior: Option<PhotonicState>,
}

impl MeasurementOutcome {
    pub fn misclassified(&self) -> bool {
        self.true_branch != self.branch
    }
}

/// A probe and coefficient set prepared for repeated measurements.
#[derive(Debug, Clone)]
pub struct Measurer {
    probe: ProbeModel,
    table: PhaseTable,
    partition: BranchPartition,
}

impl Measurer {
    pub fn new(probe: ProbeModel, c: &CoefficientSet, policy: GuardPolicy) -> Result<Self> {
        let table = build_phase_table(c.len(), c)?;
        let partition = branch_partition(&table, &probe, policy)?;
        Ok(Measurer {
            probe,
            table,
            partition,
        })
    }

    pub fn probe(&self) -> &ProbeModel {
        &self.probe
    }

    pub fn table(&self) -> &PhaseTable {
        &self.table
    }

    pub fn partition(&self) -> &BranchPartition {
        &self.partition
    }

    /// Measures `state` once.
    ///
    /// The true branch is drawn from the Born weights. In ideal mode it is
    /// also the reported branch and `x` is its mean; otherwise `x` is
    /// sampled around the true branch mean and classified.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        state: &PhotonicState,
        rng: &mut R,
        ideal: bool,
    ) -> Result<MeasurementOutcome> {
        if state.n() != self.table.n() {
            return Err(Error::LengthMismatch {
                expected: self.table.n(),
                found: state.n(),
            });
        }
        let weights = self.partition.weights(state);
        let true_branch = sample_index(&weights, rng);
        let mean = self.partition.branches[true_branch].mean_x;
        let (x, branch) = if ideal {
            (mean, true_branch)
        } else {
            let noise: f64 = rng.sample(StandardNormal);
            let x = mean + noise;
            (x, self.partition.classify(x))
        };
        let posterior = state.project(|v| self.partition.branch_of(v) == Some(branch));
        Ok(MeasurementOutcome {
            x,
            true_branch,
            branch,
            posterior,
        })
    }

    pub fn confusion_matrix<R: Rng + ?Sized>(&self, trials: u64, rng: &mut R) -> ConfusionMatrix {
        let k = self.partition.len();
        let mut counts = alloc::vec![alloc::vec![0u64; k]; k];
        for (b, row) in self.partition.branches.iter().zip(counts.iter_mut()) {
            for _ in 0..trials {
                let x = b.mean_x + rng.sample::<f64, _>(StandardNormal);
                row[self.partition.classify(x)] += 1;
            }
        }
        ConfusionMatrix { counts, trials }
    }
}

/// Index drawn with probability proportional to `weights`.
fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut last_nonzero = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last_nonzero = i;
            if u < w {
                return i;
            }
            u -= w;
        }
    }
    last_nonzero
}

/// One measurement of `state`; see [`Measurer::measure`].
pub fn measure_collapse<R: Rng + ?Sized>(
    state: &PhotonicState,
    probe: &ProbeModel,
    c: &CoefficientSet,
    rng: &mut R,
    ideal: bool,
) -> Result<MeasurementOutcome> {
    if state.n() != c.len() {
        return Err(Error::LengthMismatch {
            expected: c.len(),
            found: state.n(),
        });
    }
    Measurer::new(*probe, c, GuardPolicy::Warn)?.measure(state, rng, ideal)
}

/// Classification counts, `counts[true][classified]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
    /// Trials per true branch.
    pub trials: u64,
}

impl ConfusionMatrix {
    pub fn size(&self) -> usize {
        self.counts.len()
    }

    pub fn rate(&self, true_branch: usize, classified: usize) -> f64 {
        self.counts[true_branch][classified] as f64 / self.trials as f64
    }

    pub fn diagonal_fraction(&self, branch: usize) -> f64 {
        self.rate(branch, branch)
    }
}

/// Runs `trials` noisy measurements of a state pinned to each branch.
pub fn confusion_matrix<R: Rng + ?Sized>(
    probe: &ProbeModel,
    c: &CoefficientSet,
    trials: u64,
    rng: &mut R,
) -> Result<ConfusionMatrix> {
    if trials == 0 {
        return Err(Error::InvalidSearch("trials must be at least 1"));
    }
    Ok(Measurer::new(*probe, c, GuardPolicy::Warn)?.confusion_matrix(trials, rng))
}

/// Smallest gap between the means of two distinct branches, and the error
/// of discriminating that pair.
pub fn worst_pair(partition: &BranchPartition) -> Option<(f64, f64)> {
    let mut means: Vec<f64> = partition.branches.iter().map(|b| b.mean_x).collect();
    means.sort_by(f64::total_cmp);
    means
        .windows(2)
        .map(|w| w[1] - w[0])
        .min_by(f64::total_cmp)
        .map(|gap| (gap, pair_error(gap)))
}

/// Like [`worst_pair`], restricted to pairs where at least one branch
/// holds a single-V input.
pub fn worst_w_pair(partition: &BranchPartition) -> Option<(f64, f64)> {
    let is_w = |b: &Branch| b.members.iter().any(|v| v.weight() == 1);
    let mut gap: Option<f64> = None;
    for a in partition.branches.iter().filter(|b| is_w(b)) {
        for b in partition.branches.iter().filter(|b| b.id != a.id) {
            let g = libm::fabs(a.mean_x - b.mean_x);
            gap = Some(gap.map_or(g, |best| best.min(g)));
        }
    }
    gap.map(|g| (g, pair_error(g)))
}

/// Error of telling apart two unit-variance Gaussians whose means differ by `gap`.
pub fn pair_error(gap: f64) -> f64 {
    0.5 * libm::erfc(libm::fabs(gap) / (2.0 * SQRT_2))
}
