//! The first generalized Bell measurement on the sender's pair, simulated on
//! the full four-qubit register.

use pqt::bases::mixed_basis;
use pqt::measure::measure_pair;
use pqt::state::{make_ghz, tensor, GhzResource, InfoQubit};

fn main() -> pqt::Result<()> {
    let info = InfoQubit::real(0.6, 0.8)?;
    let resource = GhzResource::from_concurrence(0.7)?;
    let register = tensor(&info.state(), &make_ghz(resource))?;
    let basis = mixed_basis(1, 1, resource.chi())?;

    println!(
        "C = {:.3}, chi = {:.6}",
        resource.concurrence(),
        resource.chi()
    );
    for o in measure_pair(&register, (0, 1), &basis)? {
        println!("outcome {}: P = {:.6}", o.outcome_index, o.probability);
        if let Some(state) = o.collapsed {
            let amps: Vec<String> = state
                .amplitudes()
                .iter()
                .map(|a| format!("{a:.4}"))
                .collect();
            println!("  qubits {:?}: [{}]", state.labels(), amps.join(", "));
        }
    }
    println!(
        "success (outcomes 1, 2) = C^2/2 = {:.6}",
        resource.concurrence().powi(2) / 2.0
    );
    Ok(())
}
