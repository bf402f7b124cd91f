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

//! Acceptance criteria. One line per criterion is printed; run with
//! `cargo test -p wkerr-core --test acceptance -- --nocapture` to see them.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wkerr_core::homodyne::{GuardPolicy, Measurer};
use wkerr_core::*;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn bs(s: &str) -> BasisState {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> std::result::Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

/// Three-photon table, transcribed: input, occupations, total.
const TABLE_1: [(&str, [u8; 3], i64); 8] = [
    ("HHH", [1, 1, 1], 2),
    ("HHV", [1, 0, 2], 7),
    ("HVH", [0, 2, 1], -1),
    ("HVV", [0, 1, 2], 4),
    ("VHH", [2, 1, 0], 0),
    ("VHV", [2, 0, 1], 5),
    ("VVH", [1, 2, 0], -3),
    ("VVV", [1, 1, 1], 2),
];

/// Four-photon table, transcribed.
const TABLE_2: [(&str, [u8; 4], i64); 16] = [
    ("HHHH", [1, 1, 1, 1], -4),
    ("HHHV", [1, 1, 0, 2], -17),
    ("HHVH", [1, 0, 2, 1], 3),
    ("HHVV", [1, 0, 1, 2], -10),
    ("HVHH", [0, 2, 1, 1], -7),
    ("HVHV", [0, 2, 0, 2], -20),
    ("HVVH", [0, 1, 2, 1], 0),
    ("HVVV", [0, 1, 1, 2], -13),
    ("VHHH", [2, 1, 1, 0], 5),
    ("VHHV", [2, 1, 0, 1], -8),
    ("VHVH", [2, 0, 2, 0], 12),
    ("VHVV", [2, 0, 1, 1], -1),
    ("VVHH", [1, 2, 1, 0], 2),
    ("VVHV", [1, 2, 0, 1], -11),
    ("VVVH", [1, 1, 2, 0], 9),
    ("VVVV", [1, 1, 1, 1], -4),
];

fn compare_table<const N: usize>(coeffs: &[i64], expected: &[(&str, [u8; N], i64)]) -> Outcome {
    let start = Instant::now();
    let table = build_phase_table(N, &CoefficientSet::from(coeffs)).map_err(|e| e.to_string())?;
    ensure(table.rows().len() == expected.len(), || {
        format!("{} rows", table.rows().len())
    })?;
    for (row, (name, occ, total)) in table.rows().iter().zip(expected) {
        ensure(row.basis.to_string() == *name, || {
            format!("row order: {} vs {name}", row.basis)
        })?;
        ensure(row.occupation.counts() == occ, || {
            format!(
                "{name}: occupation {:?} vs {occ:?}",
                row.occupation.counts()
            )
        })?;
        ensure(row.total == *total, || {
            format!("{name}: total {} vs {total}", row.total)
        })?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{} rows exact", expected.len()))
}

fn criterion_1() -> Outcome {
    compare_table(&[1, -2, 3], &TABLE_1)
}

fn criterion_2() -> Outcome {
    compare_table(&[1, -2, 5, -8], &TABLE_2)
}

fn criterion_3() -> Outcome {
    for (n, expected) in [(3, vec![7, -1, 0]), (4, vec![-17, 3, -7, 5])] {
        let table = build_phase_table(n, &reference_coefficients(n).unwrap()).unwrap();
        let report = check_distinguishability(&table);
        let totals: Vec<i64> = report.w_totals.iter().map(|&(_, t)| t).collect();
        ensure(totals == expected, || format!("n={n}: W totals {totals:?}"))?;
        ensure(report.pass && report.integer_margin >= 1, || {
            format!("n={n}: verifier failed")
        })?;
        for &(w, t) in &report.w_totals {
            let shared = table
                .rows()
                .iter()
                .filter(|r| r.basis != w && r.total.abs() == t.abs())
                .count();
            ensure(shared == 0, || format!("n={n}: |{t}| of {w} shared"))?;
        }
    }
    Ok("{7,-1,0} and {-17,3,-7,5} unique in |total|".into())
}

fn criterion_4() -> Outcome {
    let table = build_phase_table(3, &CoefficientSet::from(&[1i64, -1, 3][..])).unwrap();
    let report = check_distinguishability(&table);
    ensure(!report.pass, || "(1,-1,3) passed".into())?;
    let ones: Vec<String> = table
        .rows()
        .iter()
        .filter(|r| r.total.abs() == 1)
        .map(|r| r.basis.to_string())
        .collect();
    ensure(ones == ["HVH", "VHH", "VVH"], || {
        format!("|total| = 1 rows {ones:?}")
    })?;
    for (w, o) in [
        ("HVH", "VHH"),
        ("HVH", "VVH"),
        ("VHH", "HVH"),
        ("VHH", "VVH"),
    ] {
        ensure(
            report
                .collisions
                .iter()
                .any(|c| c.w_component == bs(w) && c.other == bs(o) && c.abs_total == 1),
            || format!("missing collision {w}/{o}"),
        )?;
    }
    Ok("(1,-1,3) fails: HVH, VHH, VVH share |total| = 1".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 2..=12 {
        let topology = build_chain(n).unwrap();
        for v in BasisState::enumerate(n).unwrap() {
            let routed = topology.route_basis(&v).unwrap();
            let bit = |i: usize| v.is_v(i % n) as i32;
            let law: Vec<u8> = (0..n).map(|k| (1 + bit(k) - bit(k + 1)) as u8).collect();
            ensure(routed.counts() == &law[..], || {
                format!("{v}: {:?} vs {law:?}", routed.counts())
            })?;
            ensure(occupations_closed_form(n, &v).unwrap() == routed, || {
                format!("{v}: closed form")
            })?;
            checked += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!(
        "{checked} states, n = 2..12, {:.2?}",
        start.elapsed()
    ))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for n in 2..=10 {
        let topology = build_chain(n).unwrap();
        ensure(topology.total_pbs_count() == 2 * (n - 1), || {
            format!("n={n}: PBS count")
        })?;
        for v in BasisState::enumerate(n).unwrap() {
            let out = topology.roundtrip_identity(&v).map_err(|e| e.to_string())?;
            ensure(out == v, || format!("{v} came back as {out}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} states, n = 2..10"))
}

fn criterion_7() -> Outcome {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(0x00c0_ffee);
    for _ in 0..10_000 {
        let n = rng.random_range(2..=16);
        let c = CoefficientSet::new((0..n).map(|_| rng.random_range(-100..=100)).collect());
        let v = BasisState::from_bits(n, rng.random()).unwrap();
        let t = total_phase(&c, &occupations_closed_form(n, &v).unwrap()).unwrap();
        let t_bar = total_phase(&c, &occupations_closed_form(n, &complement(&v)).unwrap()).unwrap();
        ensure(t_bar == 2 * c.sum() - t, || format!("{c:?} {v}"))?;
    }
    let t1 = build_phase_table(3, &reference_coefficients(3).unwrap()).unwrap();
    let (hhv, vvh) = (
        t1.row(&bs("HHV")).unwrap().total,
        t1.row(&bs("VVH")).unwrap().total,
    );
    ensure(hhv == 7 && vvh == -3 && 2 * 2 - hhv == vvh, || {
        "three-photon instance".into()
    })?;
    let t2 = build_phase_table(4, &reference_coefficients(4).unwrap()).unwrap();
    let (hhhv, vvvh) = (
        t2.row(&bs("HHHV")).unwrap().total,
        t2.row(&bs("VVVH")).unwrap().total,
    );
    ensure(hhhv == -17 && vvvh == 9 && 2 * -4 - hhhv == vvvh, || {
        "four-photon instance".into()
    })?;
    Ok("10^4 random pairs plus 2*2-7 = -3 and 2*(-4)+17 = 9".into())
}

/// Independent certificate: routed occupations, explicit totals, pairwise
/// magnitude comparison of each single-V input against every input.
fn certify(c: &CoefficientSet) -> bool {
    let n = c.len();
    let topology = build_chain(n).unwrap();
    let totals: Vec<(BasisState, i64)> = BasisState::enumerate(n)
        .unwrap()
        .map(|v| {
            let occ = topology.route_basis(&v).unwrap();
            (
                v,
                c.as_slice()
                    .iter()
                    .zip(occ.counts())
                    .map(|(&a, &k)| a * k as i64)
                    .sum(),
            )
        })
        .collect();
    totals
        .iter()
        .filter(|(v, _)| v.weight() == 1)
        .all(|(w, tw)| {
            totals
                .iter()
                .all(|(u, tu)| u == w || tu.unsigned_abs() != tw.unsigned_abs())
        })
}

fn criterion_8() -> Outcome {
    let mut found = Vec::new();
    let mut n8 = Duration::ZERO;
    for n in 2..=8 {
        let start = Instant::now();
        let c = minimal_coefficients(n, Objective::MinMaxAbs, 64).map_err(|e| e.to_string())?;
        if n == 8 {
            n8 = start.elapsed();
        }
        ensure(c.is_canonical(), || format!("n={n}: {c:?} not canonical"))?;
        ensure(certify(&c), || {
            format!("n={n}: {c:?} rejected by certificate")
        })?;
        found.push(format!("{}:{}", n, c.max_abs()));
    }
    for n in [3, 4] {
        ensure(certify(&reference_coefficients(n).unwrap()), || {
            format!("reference n={n}")
        })?;
    }
    within(n8, Duration::from_secs(60))?;
    Ok(format!(
        "max|c| by n = [{}], n=8 in {n8:.2?}",
        found.join(" ")
    ))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let c = reference_coefficients(3).unwrap();
    let trials = 100_000u64;
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for (i, alpha) in [50.0, 200.0, 800.0].into_iter().enumerate() {
        let probe = ProbeModel::new(alpha, 0.01).unwrap();
        let m = Measurer::new(probe, &c, GuardPolicy::Refuse).map_err(|e| e.to_string())?;
        let mut branches = m.partition().branches().to_vec();
        branches.sort_by(|a, b| a.mean_x.total_cmp(&b.mean_x));
        for (j, pair) in branches.windows(2).enumerate() {
            for (from, to) in [(&pair[0], &pair[1]), (&pair[1], &pair[0])] {
                let mut rng = ChaCha8Rng::seed_from_u64(9);
                rng.set_stream((i * 64 + j * 2 + (from.id > to.id) as usize) as u64);
                let two = [from.clone(), to.clone()];
                let wrong = (0..trials)
                    .filter(|_| {
                        let x = sample_x(&probe, from.total(), &mut rng);
                        classify(&two, x).unwrap().id != from.id
                    })
                    .count();
                let p = error_probability(&probe, from.total(), to.total());
                let sigma = (p * (1.0 - p) / trials as f64).sqrt();
                let z = (wrong as f64 / trials as f64 - p).abs() / sigma;
                worst = worst.max(z);
                ensure(z <= 3.0, || {
                    format!(
                        "alpha={alpha} |S| {}->{}: rate {} vs {p} ({z:.2} sigma)",
                        from.total(),
                        to.total(),
                        wrong as f64 / trials as f64
                    )
                })?;
                pairs += 1;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{pairs} directed pairs, worst deviation {worst:.2} sigma"
    ))
}

fn criterion_10() -> Outcome {
    let c = reference_coefficients(3).unwrap();
    let probe = ProbeModel::new(100.0, 0.01).unwrap();
    let m = Measurer::new(probe, &c, GuardPolicy::Refuse).unwrap();
    let w3 = make_w_state(3, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let trials = 100_000;
    let mut counts = std::collections::BTreeMap::<u64, u64>::new();
    for _ in 0..trials {
        let out = m.measure(&w3, &mut rng, true).unwrap();
        let branch = &m.partition().branches()[out.branch];
        ensure(
            branch.members.iter().filter(|v| v.weight() == 1).count() == 1,
            || "W branch not unique".into(),
        )?;
        let w = *branch
            .members
            .iter()
            .find(|v| v.weight() == 1)
            .ok_or("non-W branch")?;
        let post = out.posterior.ok_or("empty posterior")?;
        let expected = PhotonicState::basis(w).unwrap();
        ensure(post.max_abs_diff(&expected) <= 1e-9, || {
            format!("posterior for {w}")
        })?;
        *counts.entry(branch.abs_totals[0]).or_default() += 1;
    }
    ensure(
        counts.keys().copied().collect::<Vec<_>>() == [0, 1, 7],
        || format!("branches {counts:?}"),
    )?;
    let sigma = (1.0 / 3.0 * (2.0 / 3.0) / trials as f64).sqrt();
    for (&s, &k) in &counts {
        let f = k as f64 / trials as f64;
        ensure((f - 1.0 / 3.0).abs() <= 3.0 * sigma, || {
            format!("|S|={s}: frequency {f}")
        })?;
    }

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ghz = PhotonicState::from_amplitudes(
        3,
        [
            (bs("HHH"), Complex64::new(h, 0.0)),
            (bs("VVV"), Complex64::new(h, 0.0)),
        ],
    )
    .unwrap();
    for _ in 0..1_000 {
        let out = m.measure(&ghz, &mut rng, true).unwrap();
        ensure(
            m.partition().branches()[out.branch].abs_totals == [2],
            || "GHZ branch".into(),
        )?;
        let post = out.posterior.ok_or("empty posterior")?;
        ensure(post.max_abs_diff(&ghz) <= 1e-9, || {
            "GHZ posterior changed".into()
        })?;
    }
    let freqs: Vec<String> = counts
        .iter()
        .map(|(s, k)| format!("|S|={s}:{:.4}", *k as f64 / trials as f64))
        .collect();
    Ok(format!("{}; GHZ stays in |S|=2", freqs.join(" ")))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("three-photon table reproduction", criterion_1),
        ("four-photon table reproduction", criterion_2),
        ("W-distinguishability of reference sets", criterion_3),
        ("(1,-1,3) falsification", criterion_4),
        ("routing equals cyclic law", criterion_5),
        ("roundtrip identity", criterion_6),
        ("complement symmetry", criterion_7),
        ("search soundness", criterion_8),
        ("homodyne error statistics", criterion_9),
        ("Born-rule collapse", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("[FAIL] {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
