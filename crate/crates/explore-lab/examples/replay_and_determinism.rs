//! Traces replay against the final graph, reruns are identical and a
//! tampered trace is caught.

use anyhow::{ensure, Result};
use explore_lab::{replay_validate, run, AdversaryWorld, NearestNeighbor, Params, StepBudget, Trace, World};

fn once(p: Params) -> Result<(Trace, explore_lab::WeightedGraph)> {
    let mut w = AdversaryWorld::new(p)?;
    let (t, _) = run(&mut NearestNeighbor::default(), &mut w, StepBudget::default())?;
    Ok((t, w.finalize()?))
}

fn main() -> Result<()> {
    let p = Params::chain(4, 1);
    let (a, g) = once(p)?;
    let (b, _) = once(p)?;
    println!("{} moves, cost {}", a.len(), a.total_cost());
    println!("digest {}", a.digest());
    ensure!(a.to_json() == b.to_json(), "reruns differ");

    let r = replay_validate(&a, &g, a.origin());
    println!("replay valid: {}", r.valid);

    // claim a cheaper first move than the graph has
    let mut forged = Trace::new(a.origin());
    for (i, m) in a.moves().enumerate() {
        forged.push(m.from, m.to, if i == 0 { m.weight + 1 } else { m.weight });
    }
    let r = replay_validate(&forged, &g, forged.origin());
    println!("forged valid: {} ({})", r.valid, r.violation.unwrap_or_default());
    Ok(())
}
