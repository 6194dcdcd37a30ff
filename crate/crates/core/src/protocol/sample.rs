use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{apply_pauli, fidelity, measure_pair, measure_single, MeasurementOutcome};
use crate::state::{make_ghz, tensor, GhzResource, InfoQubit, PureState};

use super::plan::{plan, Action, ProtocolPlan};
use super::ProtocolConfig;

const BLOCK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSummary {
    pub trials: u64,
    pub successes: u64,
    pub success_frequency: f64,
    pub mean_fidelity: f64,
    pub seed: u64,
}

/// Monte Carlo run of the protocol on the full state vector. Results depend
/// only on the seed, not on the thread count.
pub fn run_sampled(
    info: &InfoQubit,
    resource: &GhzResource,
    config: &ProtocolConfig,
    trials: u64,
) -> Result<SampleSummary> {
    let p = plan(resource, config)?;
    sample_plan(&p, info, config.rng_seed, trials)
}

pub fn sample_plan(
    plan: &ProtocolPlan,
    info: &InfoQubit,
    seed: u64,
    trials: u64,
) -> Result<SampleSummary> {
    if trials == 0 {
        return Err(Error::OutOfRange {
            what: "trials",
            value: 0.0,
            range: ">= 1",
        });
    }
    let initial = tensor(&info.state(), &make_ghz(GhzResource::new(plan.chi)?))?;
    let blocks = trials.div_ceil(BLOCK);
    let partial: Vec<(u64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let count = BLOCK.min(trials - block * BLOCK);
            let mut successes = 0;
            let mut fid = 0.0;
            for _ in 0..count {
                let (ok, f) = trial(plan, info, &initial, &mut rng)?;
                successes += ok as u64;
                fid += f;
            }
            Ok((successes, fid))
        })
        .collect::<Result<_>>()?;
    let successes = partial.iter().map(|p| p.0).sum();
    let fid: f64 = partial.iter().map(|p| p.1).sum();
    Ok(SampleSummary {
        trials,
        successes,
        success_frequency: successes as f64 / trials as f64,
        mean_fidelity: fid / trials as f64,
        seed,
    })
}

fn pick(outcomes: Vec<MeasurementOutcome>, rng: &mut ChaCha8Rng) -> (usize, PureState) {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = None;
    for o in outcomes {
        if let Some(state) = o.collapsed {
            acc += o.probability;
            if u < acc {
                return (o.outcome_index, state);
            }
            last = Some((o.outcome_index, state));
        }
    }
    last.expect("a measurement has at least one possible outcome")
}

fn trial(
    plan: &ProtocolPlan,
    info: &InfoQubit,
    initial: &PureState,
    rng: &mut ChaCha8Rng,
) -> Result<(bool, f64)> {
    let mut state = initial.clone();
    let mut path = Vec::new();
    loop {
        let d = &plan.decisions[&path];
        let (k, residual) = pick(measure_pair(&state, d.pair, &d.basis)?, rng);
        path.push(k);
        match &d.actions[k] {
            Action::Next => {
                let ket = PureState::new(vec![d.pair.0, d.pair.1], d.basis.vector(k).to_vec())?;
                state = tensor(&ket, &residual)?;
            }
            Action::Measure {
                vnm,
                corrections,
                unit,
                gbsm_success,
            } => {
                let (s, bob) = pick(measure_single(&residual, d.spare, vnm)?, rng);
                let f = fidelity(&apply_pauli(&bob, corrections[s])?, info)?;
                return Ok((*gbsm_success || unit[s], f));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::Termination;

    #[test]
    fn same_seed_same_result() {
        let r = GhzResource::from_concurrence(0.7).unwrap();
        let info = InfoQubit::from_bloch(0.9, 0.2);
        let cfg = ProtocolConfig::new(2, Termination::PlainVnm).with_seed(7);
        let a = run_sampled(&info, &r, &cfg, 5000).unwrap();
        let b = run_sampled(&info, &r, &cfg, 5000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn frequency_tracks_enumeration() {
        let r = GhzResource::from_concurrence(0.6).unwrap();
        let info = InfoQubit::from_bloch(1.3, 0.0);
        let cfg = ProtocolConfig::new(1, Termination::Continue).with_seed(1);
        let p = plan(&r, &cfg).unwrap();
        let s = sample_plan(&p, &info, 1, 20_000).unwrap();
        let want = p.success_probability();
        let sigma = (want * (1.0 - want) / 20_000.0).sqrt();
        assert!((s.success_frequency - want).abs() < 5.0 * sigma);
    }

    #[test]
    fn zero_trials_rejected() {
        let r = GhzResource::from_concurrence(0.6).unwrap();
        let info = InfoQubit::from_bloch(0.0, 0.0);
        assert!(run_sampled(&info, &r, &ProtocolConfig::default(), 0).is_err());
    }
}
