//! Maximal average fidelity for the three termination strategies.

use pqt::analytic::linspace;
use pqt::maf::maf_row;
use pqt::protocol::Termination;

fn main() -> pqt::Result<()> {
    let depth = 2;
    println!("depth {depth}");
    println!("C      continue  plain-vnm  matched-vnm");
    for c in linspace(0.0, 1.0, 11) {
        let mut line = format!("{c:.2}");
        for s in Termination::ALL {
            line += &format!("  {:.6}", maf_row(c, depth, s)?.maf);
        }
        println!("{line}");
    }
    Ok(())
}
