//! Path probabilities after one failed measurement, compared with the
//! published expressions.

use pqt::analytic::reference::{retry_after_0, retry_after_3, retry_after_3_printed};
use pqt::protocol::{run_enumeration, ProtocolConfig, Termination};
use pqt::state::{GhzResource, InfoQubit};

fn main() -> pqt::Result<()> {
    let info = InfoQubit::real(0.6, 0.8)?;
    let chi = 0.5;
    let trace = run_enumeration(
        &info,
        &GhzResource::new(chi)?,
        &ProtocolConfig::new(1, Termination::Continue),
    )?;
    let (a2, b2) = (info.a.norm_sqr(), info.b.norm_sqr());

    let closed = [
        (0, retry_after_0(a2, b2, chi)),
        (3, retry_after_3(a2, b2, chi)),
    ];
    for (first, row) in closed {
        for (k, want) in row.iter().enumerate() {
            let got = trace
                .outcomes_at(1)
                .find(|o| o.path == [first, k])
                .map_or(0.0, |o| o.probability);
            println!("P_{first}{k}: enumeration {got:.12}  closed form {want:.12}");
        }
    }
    let printed = retry_after_3_printed(a2, b2, chi)[3];
    println!("printed P_33 = {printed:.12} (|a|^2 and |b|^2 swapped)");
    println!("success after one retry: {:.12}", trace.gbsm_success());
    Ok(())
}
