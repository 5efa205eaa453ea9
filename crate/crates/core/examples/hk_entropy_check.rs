//! The HK closed forms against exact entropies of the joint law of
//! (Q, G, X1c, X1p, X2c, X2p, X1, X2, S, Y1, Y2).

use bfic::entropy::verify_hk_closed_forms;
use bfic::{ChannelParams, SplitParams};

fn main() -> bfic::Result<()> {
    let p = ChannelParams::new(0.9, 0.6)?;
    let report = verify_hk_closed_forms(&p, &SplitParams::new(0.4, 0.8, 0.3)?)?;
    for c in &report.checks {
        println!("{:<40} {:>12.9} {:>12.9} {:.1e}", c.identity, c.lhs, c.rhs, c.deviation);
    }
    println!("all pass: {}", report.all_pass());
    Ok(())
}
