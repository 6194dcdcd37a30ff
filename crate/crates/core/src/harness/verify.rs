//! Acceptance suites. Each prints one summary line; notes carry per-term
//! comparisons against published expressions that the enumeration overrides.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::reference::{self, second_retry_table, THIRD_RETRY_PATHS};
use crate::analytic::{increment, linspace, p_success, Concurrence, MIN_CHI};
use crate::bases::{vnm_basis, VnmKind};
use crate::error::Result;
use crate::maf::{quadrature_maf, DEFAULT_PHI_NODES, DEFAULT_THETA_NODES};
use crate::measure::{apply_pauli, fidelity, measure_single};
use crate::pauli::PauliCorrection;
use crate::probe::ProbeMap;
use crate::protocol::{
    attempt_pair, decision_chi, plan, run_enumeration, run_sampled, select_basis, BranchStatus,
    ProtocolConfig, ProtocolPlan, ProtocolTrace, Termination,
};
use crate::state::{Amplitude, GhzResource, InfoQubit, PureState};

pub const MONTE_CARLO_SEED: u64 = 20_240_601;

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {}: {} ({:.3} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

struct Outcome {
    passed: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: String) -> Self {
        Self {
            passed,
            detail,
            notes: Vec::new(),
        }
    }
}

pub const SUITES: [(u8, &str); 9] = [
    (1, "original measurement"),
    (2, "first repetition"),
    (3, "second repetition table"),
    (4, "closed forms"),
    (5, "conservation and unit fidelity"),
    (6, "monte carlo"),
    (7, "curve shapes"),
    (8, "basis selection"),
    (9, "correction table"),
];

pub fn run_suite(id: u8) -> Option<SuiteResult> {
    let (_, name) = *SUITES.iter().find(|s| s.0 == id)?;
    let start = Instant::now();
    let run = match id {
        1 => original_measurement(),
        2 => first_repetition(),
        3 => second_repetition_table(),
        4 => closed_forms(),
        5 => conservation(),
        6 => monte_carlo(),
        7 => curve_shapes(),
        8 => basis_selection(),
        _ => correction_table(),
    };
    let elapsed = start.elapsed();
    let mut out = run.unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
    let limit = match id {
        1 => Some(1.0),
        3 => Some(5.0),
        _ => None,
    };
    if let Some(limit) = limit {
        if elapsed.as_secs_f64() >= limit {
            out.passed = false;
            out.detail += &format!("; runtime over {limit} s");
        }
    }
    Some(SuiteResult {
        id,
        name,
        passed: out.passed,
        detail: out.detail,
        notes: out.notes,
        elapsed,
    })
}

pub fn run_all() -> Vec<SuiteResult> {
    SUITES.iter().filter_map(|s| run_suite(s.0)).collect()
}

fn inputs() -> Vec<InfoQubit> {
    vec![
        InfoQubit::real(1.0, 0.0).unwrap(),
        InfoQubit::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap(),
        InfoQubit::real(0.6, 0.8).unwrap(),
    ]
}

const ANGLES: [f64; 3] = [PI / 12.0, PI / 6.0, FRAC_PI_4];

fn weights(info: &InfoQubit) -> (f64, f64) {
    (info.a.norm_sqr(), info.b.norm_sqr())
}

fn outcome_probability(trace: &ProtocolTrace, path: &[usize]) -> f64 {
    trace
        .outcomes
        .iter()
        .find(|o| o.path == path)
        .map(|o| o.probability)
        .unwrap_or(f64::NAN)
}

fn concurrence(chi: f64) -> Result<Concurrence> {
    Concurrence::from_chi(chi)
}

fn enumerate(info: &InfoQubit, chi: f64, depth: usize, s: Termination) -> Result<ProtocolTrace> {
    run_enumeration(
        info,
        &GhzResource::new(chi)?,
        &ProtocolConfig::new(depth, s),
    )
}

fn original_measurement() -> Result<Outcome> {
    let (mut dp, mut ds) = (0.0f64, 0.0f64);
    for info in inputs() {
        for chi in ANGLES {
            let t = enumerate(&info, chi, 0, Termination::Continue)?;
            let (a2, b2) = weights(&info);
            for (k, want) in reference::first_attempt(a2, b2, chi)
                .into_iter()
                .enumerate()
            {
                dp = dp.max((outcome_probability(&t, &[k]) - want).abs());
            }
            let c = concurrence(chi)?.value();
            ds = ds.max((t.gbsm_success() - c * c / 2.0).abs());
        }
    }
    Ok(Outcome::new(
        dp <= 1e-12 && ds <= 1e-12,
        format!("max |dP_k| = {dp:.1e}, max |dP_success - C^2/2| = {ds:.1e} over 9 inputs"),
    ))
}

fn first_repetition() -> Result<Outcome> {
    let (mut dp, mut ds, mut dinc, mut spread, mut printed) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for chi in ANGLES {
        let mut incs = Vec::new();
        for info in inputs() {
            let t = enumerate(&info, chi, 1, Termination::Continue)?;
            let (a2, b2) = weights(&info);
            let after0 = reference::retry_after_0(a2, b2, chi);
            let after3 = reference::retry_after_3(a2, b2, chi);
            let after3_printed = reference::retry_after_3_printed(a2, b2, chi);
            for k in 0..4 {
                dp = dp.max((outcome_probability(&t, &[0, k]) - after0[k]).abs());
                let p3 = outcome_probability(&t, &[3, k]);
                dp = dp.max((p3 - after3[k]).abs());
                printed = printed.max((p3 - after3_printed[k]).abs());
            }
            ds = ds.max((t.per_attempt_success[1] - p_success(1, concurrence(chi)?)?).abs());
            let inc0 = outcome_probability(&t, &[0, 1]) + outcome_probability(&t, &[0, 2]);
            let inc3 = outcome_probability(&t, &[3, 1]) + outcome_probability(&t, &[3, 2]);
            dinc = dinc
                .max((inc0 - inc3).abs())
                .max((inc0 - reference::retry_increment_after_0(chi)).abs());
            incs.push(inc0);
        }
        let lo = incs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = incs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        spread = spread.max(hi - lo);
    }
    let mut out = Outcome::new(
        dp <= 1e-12 && ds <= 1e-12 && dinc <= 1e-12 && spread <= 1e-12,
        format!(
            "max |dP_jk| = {dp:.1e}, max |dP_success| = {ds:.1e}, increments equal to {dinc:.1e}, input spread {spread:.1e}"
        ),
    );
    out.notes.push(format!(
        "published P_33 has |a|^2 and |b|^2 swapped: deviates by up to {printed:.3e}; corrected form used"
    ));
    Ok(out)
}

fn second_repetition_table() -> Result<Outcome> {
    let infos = [
        InfoQubit::real(0.6, 0.8)?,
        InfoQubit::new(Amplitude::new(0.6, 0.0), Amplitude::new(0.0, 0.8))?,
        InfoQubit::from_bloch(1.1, 2.5),
    ];
    let (mut dp, mut worst_overlap, mut flags, mut bases, mut rows) = (0.0f64, 1.0f64, 0, 0, 0);
    for chi in ANGLES {
        let p = plan(
            &GhzResource::new(chi)?,
            &ProtocolConfig::new(2, Termination::Continue),
        )?;
        for info in &infos {
            let (a2, b2) = weights(info);
            for row in second_retry_table() {
                let path = [row.input[0], row.input[1], row.outcome];
                let node = p
                    .nodes
                    .iter()
                    .find(|n| n.path == path)
                    .expect("node exists");
                rows += 1;
                dp = dp
                    .max((node.residual.probability(info) - (row.probability)(a2, b2, chi)).abs());
                flags += (node.success == row.unit) as usize;
                bases += (node.exponents == row.exponents) as usize;
                let want = (row.state)(info.a, info.b, chi);
                if let (Some(got), Some(want)) = (
                    node.residual.state_for(info)?,
                    PureState::from_unnormalized(vec![2, 3], want.to_vec())?,
                ) {
                    worst_overlap = worst_overlap.min(got.reorder(&[2, 3])?.overlap(&want)?);
                }
            }
        }
    }
    Ok(Outcome::new(
        dp <= 1e-12 && worst_overlap >= 1.0 - 1e-10 && flags == rows && bases == rows,
        format!(
            "{}/16 rows matched on {} inputs: max |dP| = {dp:.1e}, min overlap = 1 - {:.1e}, flags {flags}/{rows}, bases {bases}/{rows}",
            if flags == rows && bases == rows { 16 } else { 0 },
            rows / 16,
            1.0 - worst_overlap
        ),
    ))
}

fn closed_forms() -> Result<Outcome> {
    let grid = linspace(MIN_CHI, FRAC_PI_4, 200);
    let probes = [InfoQubit::real(0.6, 0.8)?, InfoQubit::from_bloch(2.0, 0.7)];
    let dev = grid
        .par_iter()
        .map(|&chi| -> Result<f64> {
            let p = plan(
                &GhzResource::new(chi)?,
                &ProtocolConfig::new(3, Termination::Continue),
            )?;
            let c = concurrence(chi)?;
            let mut d = 0.0f64;
            for info in &probes {
                let t = p.evaluate(info)?;
                for n in [2, 3] {
                    d = d.max((t.per_attempt_success[n] - p_success(n, c)?).abs());
                }
            }
            Ok(d)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let one = Concurrence::new(1.0)?;
    let d2 = (p_success(2, one)? - 0.875).abs();
    let d3 = (p_success(3, one)? - 0.9375).abs();
    let p = plan(
        &GhzResource::new(FRAC_PI_4)?,
        &ProtocolConfig::new(3, Termination::Continue),
    )?;
    let e = p.gbsm_success_by_attempt();
    let e2 = (e[2] - 0.875).abs();
    let e3 = (e[3] - 0.9375).abs();
    let mut out = Outcome::new(
        dev <= 1e-10 && d2.max(d3).max(e2).max(e3) <= 1e-12,
        format!(
            "max |enum - closed| = {dev:.1e} on 200 angles; at C=1 distance from 7/8, 15/16: closed {d2:.1e}, {d3:.1e}, enumeration {e2:.1e}, {e3:.1e}"
        ),
    );
    for chi in [0.5, FRAC_PI_4] {
        out.notes.extend(third_retry_log(chi)?);
    }
    Ok(out)
}

/// Compares each published third-repetition term with the enumeration.
pub fn third_retry_log(chi: f64) -> Result<Vec<String>> {
    let p = plan(
        &GhzResource::new(chi)?,
        &ProtocolConfig::new(3, Termination::Continue),
    )?;
    let c = concurrence(chi)?.value();
    let corrected = reference::third_retry_terms(c);
    let printed = reference::third_retry_terms_printed(c);
    let node_mass = |path: &[usize; 4]| -> f64 {
        p.nodes
            .iter()
            .find(|n| n.path == path)
            .map(|n| n.residual.mean_probability())
            .unwrap_or(f64::NAN)
    };
    Ok(THIRD_RETRY_PATHS
        .iter()
        .enumerate()
        .map(|(i, paths)| {
            let enumerated: f64 = paths.iter().map(node_mass).sum();
            let dp = (printed[i] - enumerated).abs() / enumerated.abs().max(f64::MIN_POSITIVE);
            format!(
                "C={c:.6} term {}: enumeration {enumerated:.16e}, published {:.16e} ({}), corrected |d| = {:.1e}",
                i + 1,
                printed[i],
                if dp <= 1e-9 { "agrees".to_string() } else { format!("DIFFERS, relative {dp:.3e}") },
                (corrected[i] - enumerated).abs()
            )
        })
        .collect())
}

fn conservation() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let triples: Vec<(InfoQubit, f64)> = (0..50)
        .map(|_| {
            let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
            let phi = 2.0 * PI * rng.gen::<f64>();
            (
                InfoQubit::from_bloch(theta, phi),
                FRAC_PI_4 * rng.gen::<f64>(),
            )
        })
        .collect();
    let results = triples
        .par_iter()
        .map(|(info, chi)| -> Result<(f64, f64, usize)> {
            let (mut dsum, mut dfid, mut checked) = (0.0f64, 0.0f64, 0);
            for depth in 0..=5 {
                for s in Termination::ALL {
                    let t = enumerate(info, *chi, depth, s)?;
                    dsum = dsum.max((t.total_probability() - 1.0).abs());
                    for b in t
                        .branches
                        .iter()
                        .filter(|b| b.status == BranchStatus::Success)
                    {
                        if let (Some(state), Some(fix)) = (&b.collapsed, b.correction) {
                            dfid = dfid.max(1.0 - fidelity(&apply_pauli(state, fix)?, info)?);
                            checked += 1;
                        }
                    }
                }
            }
            Ok((dsum, dfid, checked))
        })
        .collect::<Result<Vec<_>>>()?;
    let dsum = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let dfid = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let checked: usize = results.iter().map(|r| r.2).sum();
    Ok(Outcome::new(
        dsum <= 1e-10 && dfid <= 1e-10,
        format!("50 inputs x depths 0-5 x 3 strategies: max |sum P - 1| = {dsum:.1e}, max 1 - F over {checked} success leaves = {dfid:.1e}"),
    ))
}

fn monte_carlo() -> Result<Outcome> {
    let trials = 100_000;
    let info = InfoQubit::real(0.6, 0.8)?;
    let config = ProtocolConfig::new(1, Termination::Continue).with_seed(MONTE_CARLO_SEED);
    let s = run_sampled(&info, &GhzResource::new(FRAC_PI_4)?, &config, trials)?;
    let sigma = (0.75f64 * 0.25 / trials as f64).sqrt();
    let z = (s.success_frequency - 0.75) / sigma;
    Ok(Outcome::new(
        z.abs() <= 4.0,
        format!(
            "{} trials, seed {}: frequency {:.5} vs 0.75 ({z:+.2} sigma)",
            trials, MONTE_CARLO_SEED, s.success_frequency
        ),
    ))
}

fn curve_shapes() -> Result<Outcome> {
    let grid = linspace(0.0, 1.0, 101);
    let per_c = grid
        .par_iter()
        .map(|&c| -> Result<[bool; 4]> {
            let r = GhzResource::from_concurrence(c)?;
            let build = |d, s| plan(&r, &ProtocolConfig::new(d, s));
            let cont: Vec<ProtocolPlan> = (0..=5)
                .map(|d| build(d, Termination::Continue))
                .collect::<Result<_>>()?;
            let succ: Vec<f64> = cont.iter().map(ProtocolPlan::success_probability).collect();
            let ordered = succ.windows(2).take(3).all(|w| w[1] >= w[0] - 1e-15);
            let mut matched_ok = true;
            let mut maf_ok = true;
            let mut mafs = [Vec::new(), Vec::new()];
            for d in 0..=3 {
                let plain = build(d, Termination::PlainVnm)?;
                let matched = build(d, Termination::MatchedVnm)?;
                matched_ok &= matched.success_probability() >= plain.success_probability() - 1e-15;
                for (i, p) in [plain, matched].iter().enumerate() {
                    let q = quadrature_maf(p, DEFAULT_THETA_NODES, DEFAULT_PHI_NODES);
                    maf_ok &= (q - p.mean_average_fidelity()).abs() <= 1e-12;
                    mafs[i].push(q);
                }
            }
            for m in &mafs {
                if c < 1.0 {
                    maf_ok &= m.windows(2).all(|w| w[1] <= w[0] + 1e-12);
                } else {
                    maf_ok &= m.iter().all(|x| (x - 1.0).abs() <= 1e-10);
                }
            }
            let cc = Concurrence::new(c)?;
            let mut diminishing = increment(2, cc)? <= increment(1, cc)? + 1e-15
                && increment(3, cc)? <= increment(2, cc)? + 1e-15;
            let inc: Vec<f64> = succ.windows(2).map(|w| w[1] - w[0]).collect();
            diminishing &= inc.windows(2).all(|w| w[1] <= w[0] + 1e-15);
            Ok([ordered, matched_ok, maf_ok, diminishing])
        })
        .collect::<Result<Vec<_>>>()?;
    let count = |i: usize| per_c.iter().filter(|r| r[i]).count();
    let (a, b, c, d) = (count(0), count(1), count(2), count(3));
    let n = grid.len();
    Ok(Outcome::new(
        a == n && b == n && c == n && d == n,
        format!(
            "on {n} points: ordering {a}, matched >= plain {b}, MAF trend {c}, diminishing increments {d}"
        ),
    ))
}

fn basis_selection() -> Result<Outcome> {
    let limit = ProtocolConfig::default().exponent_limit();
    let cases: [&[usize]; 7] = [&[], &[0], &[3], &[0, 0], &[0, 3], &[3, 0], &[3, 3]];
    let (mut ok, mut total) = (0, 0);
    let mut seen = Vec::new();
    for chi in [0.3, PI / 6.0, 0.6, decision_chi()] {
        for path in cases {
            let (pair, _) = attempt_pair(path.len());
            let (branch, want) = match reference::failure_state(path) {
                None => (ProbeMap::initial(&GhzResource::new(chi)?), (1, 1)),
                Some((state, want)) => {
                    let zero = state(Amplitude::new(1.0, 0.0), Amplitude::new(0.0, 0.0), chi);
                    let one = state(Amplitude::new(0.0, 0.0), Amplitude::new(1.0, 0.0), chi);
                    (
                        ProbeMap::from_vectors(vec![0, 1, 2, 3], zero.to_vec(), one.to_vec())?,
                        want,
                    )
                }
            };
            let got = select_basis(&branch, pair, chi, limit)?.exponents();
            total += 1;
            ok += (got == want) as usize;
            if chi == 0.3 {
                seen.push(format!("{path:?}->{got:?}"));
            }
        }
    }
    Ok(Outcome::new(
        ok == total,
        format!("{ok}/{total} selections matched; {}", seen.join(" ")),
    ))
}

fn correction_table() -> Result<Outcome> {
    let info = InfoQubit::new(Amplitude::new(0.6, 0.0), Amplitude::new(0.48, 0.64))?;
    let plain = vnm_basis(VnmKind::Plain, 0.0)?;
    let mut out = Outcome::new(true, String::new());
    let mut exact = 0;
    for (i, row) in reference::correction_table().iter().enumerate() {
        let state = PureState::new(vec![2, 3], (row.state)(info.a, info.b).to_vec())?;
        let mut derived = [None; 2];
        for o in measure_single(&state, 2, &plain)? {
            if let Some(bob) = &o.collapsed {
                derived[o.outcome_index] = crate::protocol::derive_correction(bob, &info)?;
            }
        }
        let printed = [row.plus, row.minus];
        if derived == printed.map(Some) {
            exact += 1;
        } else if i == 7 && derived == [Some(PauliCorrection::Z), Some(PauliCorrection::I)] {
            out.notes.push(format!(
                "{}: spare result - gives -|I>, derived correction I; published {}",
                row.label, row.minus
            ));
        } else {
            out.passed = false;
            out.notes.push(format!(
                "{}: derived {derived:?}, published {printed:?}",
                row.label
            ));
        }
    }
    let flagged = out.notes.len();
    out.detail = format!("{exact}/7 rows reproduced exactly, last row flagged: {flagged} discrepancy (derived I where Z is printed)");
    out.passed &= exact == 7 && flagged == 1;
    Ok(out)
}
