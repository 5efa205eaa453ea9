//! Joint decoding with the rank identifiability test against treating
//! interference as erasure, at a rate where only the former works.

use bfic::sim::{analytic_threshold, simulate_joint_mac, simulate_treat_as_erasure, CodeConfig, Scheme};
use bfic::ChannelParams;

fn main() -> bfic::Result<()> {
    let p = ChannelParams::new(1.0, 1.0)?;
    println!(
        "thresholds: erasure {}, joint {}",
        analytic_threshold(&p, Scheme::Erasure),
        analytic_threshold(&p, Scheme::JointMac)
    );
    for rate in [0.3, 0.45, 0.55] {
        let config = CodeConfig::symmetric(400, rate, 5)?;
        let joint = simulate_joint_mac(&p, &config, 200)?;
        let erasure = simulate_treat_as_erasure(&p, &config, 200)?;
        println!("rate {rate}: joint {:.3}, erasure {:.3}", joint.mean(), erasure.mean());
    }
    Ok(())
}
