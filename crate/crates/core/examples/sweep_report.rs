//! Runs a small sweep through the library entry point and prints the table.

use kitepea::cli::{cmd_sweep, CheckKind, Pairs, RunConfig, SweepConfig};
use kitepea::GroupDescriptor;

fn main() -> kitepea::Result<()> {
    let cfg = SweepConfig {
        groups: vec![GroupDescriptor::Integers],
        n: vec![1, 2],
        pairs: Pairs::All,
        heights: vec![2],
        cell_budget: 100,
        run: RunConfig { checks: vec![CheckKind::Symmetric, CheckKind::Commutative, CheckKind::Ideals], ..RunConfig::default() },
    };
    print!("{}", cmd_sweep(&cfg)?.to_text());
    Ok(())
}
