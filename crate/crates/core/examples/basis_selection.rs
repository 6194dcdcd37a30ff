//! Basis exponents chosen along a chain of failures, and the error returned
//! when no exponent gives a correctable outcome.

use pqt::probe::ProbeMap;
use pqt::protocol::{plan, select_basis, ProtocolConfig, Termination};
use pqt::state::GhzResource;

fn main() -> pqt::Result<()> {
    let resource = GhzResource::from_concurrence(0.6)?;
    let p = plan(&resource, &ProtocolConfig::new(4, Termination::Continue))?;
    for node in p
        .nodes
        .iter()
        .filter(|n| n.path.iter().all(|&k| k == 0 || k == 3))
    {
        if node.path.last() == Some(&0) {
            let history = &node.path[..node.path.len() - 1];
            println!(
                "after {history:?}: pair {:?}, exponents {:?}",
                node.pair, node.exponents
            );
        }
    }

    let product = GhzResource::new(0.0)?;
    match select_basis(&ProbeMap::initial(&product), (0, 1), 0.0, 27) {
        Ok(b) => println!("unexpected basis {:?}", b.exponents()),
        Err(e) => println!("product channel: {e}"),
    }
    Ok(())
}
