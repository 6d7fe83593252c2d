//! The exact recursions for one parameter set, as JSON.
//!
//! ```text
//! cargo run --example formula_table -- chain 12 6 2
//! ```

use anyhow::{bail, Result};
use explore_lab::analysis::FormulaTable;
use explore_lab::{Params, Topology};

fn main() -> Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let p = match args.as_slice() {
        [] => Params::rec(10, 0, 2),
        [t, x, y, n] => Params {
            topology: t.parse::<Topology>()?,
            x: x.parse()?,
            y: y.parse()?,
            levels: n.parse()?,
        },
        _ => bail!("usage: formula_table [TOPOLOGY X Y N]"),
    };
    p.validate()?;
    let t = FormulaTable::new(&p)?;
    println!("{}", serde_json::to_string_pretty(&t)?);
    Ok(())
}
