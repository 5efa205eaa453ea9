//! Optimal split for the modified Han-Kobayashi scheme, checked against a
//! coarse grid search over (delta1, delta2).

use bfic::hk::{delta_from_c, evaluate, hk_sum_rate, optimal_sum_rate};
use bfic::{ChannelParams, SplitParams};

fn main() -> bfic::Result<()> {
    let p = ChannelParams::new(1.0, 0.6)?;
    let opt = optimal_sum_rate(&p)?;
    let delta = delta_from_c(opt.c_star)?;
    println!(
        "C* = {:.6}, delta* = {:.6}, R_sum = {:.6}",
        opt.c_star, delta, opt.r_sum
    );

    let e = evaluate(&p, &SplitParams::symmetric(delta, 1.0)?)?;
    println!(
        "at (delta*, 1): M_c1 = {:.6}  M_c2 = {:.6}  M_p = {:.6}  gamma = {:.6}",
        e.m_c1, e.m_c2, e.m_p, e.gamma
    );

    let mut best = (0.0, 0.0, f64::MIN);
    for i in 0..=200 {
        for j in 0..=200 {
            let (d1, d2) = (i as f64 / 200.0, j as f64 / 200.0);
            let r = hk_sum_rate(&p, &SplitParams::symmetric(d1, d2)?)?;
            if r > best.2 {
                best = (d1, d2, r);
            }
        }
    }
    println!("grid best: R_sum = {:.6} at ({}, {})", best.2, best.0, best.1);
    Ok(())
}
