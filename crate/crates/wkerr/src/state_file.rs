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

//! Input-state files.
//!
//! Two JSON layouts are accepted, both with complex numbers as `[re, im]`:
//!
//! ```json
//! {"amplitudes": {"HHV": [1.0, 0.0]}}
//! {"product": [[[1.0, 0.0], [0.0, 0.0]], [[0.6, 0.0], [0.0, 0.8]]]}
//! ```
//!
//! The first lists basis amplitudes directly; the second gives one
//! `[amp_H, amp_V]` pair per photon.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context};
use serde::Deserialize;
use wkerr_core::{make_product_state, BasisState, Complex64, PhotonicState};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    #[serde(default)]
    amplitudes: Option<BTreeMap<String, [f64; 2]>>,
    #[serde(default)]
    product: Option<Vec<[[f64; 2]; 2]>>,
}

fn complex([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

pub fn parse_state(text: &str) -> anyhow::Result<PhotonicState> {
    let file: StateFile = serde_json::from_str(text).context("malformed state file")?;
    match (file.amplitudes, file.product) {
        (Some(amps), None) => {
            let entries = amps
                .into_iter()
                .map(|(k, a)| Ok((k.parse::<BasisState>()?, complex(a))))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let n = match entries.first() {
                Some((v, _)) => v.len(),
                None => bail!("state file lists no amplitudes"),
            };
            Ok(PhotonicState::from_amplitudes(n, entries)?)
        }
        (None, Some(pairs)) => {
            let pairs: Vec<_> = pairs
                .into_iter()
                .map(|[h, v]| (complex(h), complex(v)))
                .collect();
            Ok(make_product_state(&pairs)?)
        }
        _ => bail!("state file needs exactly one of \"amplitudes\" or \"product\""),
    }
}

pub fn read_state(path: &Path) -> anyhow::Result<PhotonicState> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_state(&text).with_context(|| format!("in {}", path.display()))
}
