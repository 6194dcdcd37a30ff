//! The sixteen outcomes of the third measurement, with the basis exponents
//! and whether each outcome teleports exactly.

use pqt::analytic::reference::second_retry_table;
use pqt::protocol::{run_enumeration, ProtocolConfig, Termination};
use pqt::state::{GhzResource, InfoQubit};

fn main() -> pqt::Result<()> {
    let info = InfoQubit::from_bloch(1.1, 0.4);
    let chi = 0.55;
    let trace = run_enumeration(
        &info,
        &GhzResource::new(chi)?,
        &ProtocolConfig::new(2, Termination::Continue),
    )?;
    let (a2, b2) = (info.a.norm_sqr(), info.b.norm_sqr());

    println!("path     r        P (enum)        P (table)      unit");
    for row in second_retry_table() {
        let path = [row.input[0], row.input[1], row.outcome];
        let got = trace.outcomes_at(2).find(|o| o.path == path);
        let (p, success) = got.map_or((0.0, false), |o| (o.probability, o.success));
        println!(
            "{path:?} {:>8} {p:.12e} {:.12e} {success:>5}",
            format!("{:?}", row.exponents),
            (row.probability)(a2, b2, chi),
        );
    }
    Ok(())
}
