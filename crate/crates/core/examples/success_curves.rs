//! Success probability against concurrence for each repetition depth.

use pqt::analytic::{linspace, p_success, Concurrence};
use pqt::protocol::{plan, ProtocolConfig, Termination};
use pqt::state::GhzResource;

fn main() -> pqt::Result<()> {
    println!("C      n=0      n=1      n=2      n=3      n=5 (enum)");
    for c in linspace(0.0, 1.0, 11) {
        let mut line = format!("{c:.2}");
        for n in 0..=3 {
            line += &format!("  {:.5}", p_success(n, Concurrence::new(c)?)?);
        }
        let deep = plan(
            &GhzResource::from_concurrence(c)?,
            &ProtocolConfig::new(5, Termination::Continue),
        )?;
        line += &format!("  {:.5}", deep.success_probability());
        println!("{line}");
    }
    Ok(())
}
