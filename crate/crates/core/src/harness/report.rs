use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocol::{plan, sample_plan, ProtocolConfig, SampleSummary, Termination};
use crate::state::{Amplitude, GhzResource, InfoQubit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Enumerate,
    Sample,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "enumerate" => Ok(Self::Enumerate),
            "sample" => Ok(Self::Sample),
            other => Err(Error::InvalidSpec(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRequest {
    pub a: Amplitude,
    pub b: Amplitude,
    pub chi: f64,
    pub depth: usize,
    pub strategy: Termination,
    pub seed: u64,
    pub trials: u64,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchRow {
    pub path: String,
    pub attempts: usize,
    pub probability: f64,
    pub status: &'static str,
    pub correction: Option<String>,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub a: Amplitude,
    pub b: Amplitude,
    pub chi: f64,
    pub concurrence: f64,
    pub depth: usize,
    pub strategy: Termination,
    pub mode: Mode,
    pub per_attempt_success: Vec<f64>,
    pub total_success: f64,
    pub mean_fidelity: f64,
    /// GBSM outcomes of the last attempt.
    pub final_attempt_outcomes: usize,
    pub branches: Vec<BranchRow>,
    pub sample: Option<SampleSummary>,
}

fn path_label(path: &[usize]) -> String {
    path.iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

pub fn cmd_run(req: &RunRequest) -> Result<RunReport> {
    let info = InfoQubit::new(req.a, req.b)?;
    let resource = GhzResource::new(req.chi)?;
    let config = ProtocolConfig::new(req.depth, req.strategy).with_seed(req.seed);
    let p = plan(&resource, &config)?;
    let trace = p.evaluate(&info)?;
    let sample = match req.mode {
        Mode::Enumerate => None,
        Mode::Sample => Some(sample_plan(&p, &info, req.seed, req.trials)?),
    };
    Ok(RunReport {
        a: info.a,
        b: info.b,
        chi: resource.chi(),
        concurrence: resource.concurrence(),
        depth: req.depth,
        strategy: req.strategy,
        mode: req.mode,
        total_success: trace.total_success(),
        mean_fidelity: trace.mean_fidelity(),
        final_attempt_outcomes: trace.outcomes_at(req.depth).count(),
        per_attempt_success: trace.per_attempt_success,
        branches: trace
            .branches
            .iter()
            .map(|b| BranchRow {
                path: path_label(&b.path),
                attempts: b.attempt_count,
                probability: b.probability,
                status: b.status.name(),
                correction: b.correction.map(|c| c.label().to_string()),
                fidelity: b.bob_fidelity,
            })
            .collect(),
        sample,
    })
}

impl RunReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "input a={} b={}  chi={:.6} C={:.6}  depth={} strategy={}",
            self.a, self.b, self.chi, self.concurrence, self.depth, self.strategy
        );
        let _ = writeln!(
            s,
            "{:<14} {:>8} {:>22} {:>11} {:>4} {:>10}",
            "path", "attempts", "probability", "status", "fix", "fidelity"
        );
        for b in &self.branches {
            let _ = writeln!(
                s,
                "{:<14} {:>8} {:>22.16e} {:>11} {:>4} {:>10.8}",
                b.path,
                b.attempts,
                b.probability,
                b.status,
                b.correction.as_deref().unwrap_or("-"),
                b.fidelity
            );
        }
        for (t, p) in self.per_attempt_success.iter().enumerate() {
            let _ = writeln!(s, "success after attempt {t}: {p:.16}");
        }
        let _ = writeln!(s, "total success: {:.16}", self.total_success);
        let _ = writeln!(s, "mean fidelity: {:.16}", self.mean_fidelity);
        if let Some(m) = &self.sample {
            let _ = writeln!(
                s,
                "sampled: {} trials, seed {}, success {:.6}, fidelity {:.6}",
                m.trials, m.seed, m.success_frequency, m.mean_fidelity
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(depth: usize, mode: Mode) -> RunRequest {
        RunRequest {
            a: Amplitude::new(1.0, 0.0),
            b: Amplitude::new(0.0, 0.0),
            chi: std::f64::consts::FRAC_PI_4,
            depth,
            strategy: Termination::Continue,
            seed: 3,
            trials: 2000,
            mode,
        }
    }

    #[test]
    fn maximal_channel_single_attempt() {
        let r = cmd_run(&req(0, Mode::Enumerate)).unwrap();
        assert!((r.total_success - 0.5).abs() < 1e-12);
        assert!(r.to_text().contains("total success: 0.5"));
    }

    #[test]
    fn second_repetition_has_sixteen_outcomes() {
        assert_eq!(
            cmd_run(&req(2, Mode::Enumerate))
                .unwrap()
                .final_attempt_outcomes,
            16
        );
    }

    #[test]
    fn sampled_json_is_reproducible() {
        let a = serde_json::to_string(&cmd_run(&req(1, Mode::Sample)).unwrap()).unwrap();
        let b = serde_json::to_string(&cmd_run(&req(1, Mode::Sample)).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unnormalized_input_rejected() {
        let mut r = req(0, Mode::Enumerate);
        r.b = Amplitude::new(0.5, 0.0);
        assert!(matches!(cmd_run(&r), Err(Error::NotNormalized { .. })));
    }
}
