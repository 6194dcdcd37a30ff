//! Sampled runs of the state-vector simulation against the exact success
//! probability.

use pqt::protocol::{plan, sample_plan, ProtocolConfig, Termination};
use pqt::state::{GhzResource, InfoQubit};

fn main() -> pqt::Result<()> {
    let info = InfoQubit::from_bloch(0.8, 2.0);
    let resource = GhzResource::from_concurrence(0.6)?;
    for s in Termination::ALL {
        let p = plan(&resource, &ProtocolConfig::new(2, s))?;
        let run = sample_plan(&p, &info, 42, 50_000)?;
        let exact = p.success_probability();
        let sigma = (exact * (1.0 - exact) / run.trials as f64).sqrt();
        println!(
            "{:<12} sampled {:.5}  exact {:.5}  ({:+.2} sigma)  mean fidelity {:.5}",
            s.name(),
            run.success_frequency,
            exact,
            (run.success_frequency - exact) / sigma,
            run.mean_fidelity
        );
    }
    Ok(())
}
