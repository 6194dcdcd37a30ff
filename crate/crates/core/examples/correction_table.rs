//! Pauli corrections after a plain spare-qubit measurement, derived from the
//! collapsed state and compared with the published table.

use pqt::analytic::reference::correction_table;
use pqt::bases::{vnm_basis, VnmKind};
use pqt::measure::{apply_pauli, fidelity, measure_single};
use pqt::pauli::PauliCorrection;
use pqt::state::{Amplitude, InfoQubit, PureState};

fn main() -> pqt::Result<()> {
    let info = InfoQubit::new(Amplitude::new(0.6, 0.0), Amplitude::new(0.48, 0.64))?;
    let plain = vnm_basis(VnmKind::Plain, 0.0)?;
    let all = [
        PauliCorrection::I,
        PauliCorrection::Z,
        PauliCorrection::X,
        PauliCorrection::ZX,
    ];
    for row in correction_table() {
        let state = PureState::new(vec![2, 3], (row.state)(info.a, info.b).to_vec())?;
        let mut derived = Vec::new();
        for o in measure_single(&state, 2, &plain)? {
            let bob = o.collapsed.expect("both spare results occur");
            let best = all
                .into_iter()
                .find(|p| fidelity(&apply_pauli(&bob, *p).unwrap(), &info).unwrap() > 1.0 - 1e-12);
            derived.push(best.map_or("-".into(), |p| p.to_string()));
        }
        println!(
            "{:<12} published +:{} -:{}   derived +:{} -:{}",
            row.label, row.plus, row.minus, derived[0], derived[1]
        );
    }
    Ok(())
}
