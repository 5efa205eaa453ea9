//! Brute-force check of the conditional entropy leakage inequality for small
//! block lengths, in both link models.

use bfic::entropy::{leakage_campaign, verify_leakage, LeakageMode, LeakageSetup};

fn main() -> bfic::Result<()> {
    let one = verify_leakage(&LeakageSetup {
        p1: 0.7,
        p2: 0.3,
        p3: 0.0,
        n: 2,
        input: vec![0.1, 0.2, 0.3, 0.4],
        mode: LeakageMode::Exclusive,
    })?;
    println!("single case: H(Y2|Z,S) = {:.6} >= {:.6}", one.lhs, one.rhs);

    for mode in [LeakageMode::Exclusive, LeakageMode::IndependentLinks] {
        for n in 1..=3 {
            let s = leakage_campaign(n, mode, 500, 42)?;
            println!(
                "{mode:?} n = {n}: {} cases, {} failures, min slack {:.3e}",
                s.cases, s.failures, s.min_slack
            );
        }
    }
    Ok(())
}
