//! Success rate of treat-interference-as-erasure decoding around the
//! threshold p_d q_c.

use bfic::sim::{rate_sweep, Scheme};
use bfic::ChannelParams;

fn main() -> bfic::Result<()> {
    let p = ChannelParams::new(1.0, 0.5)?;
    let grid: Vec<f64> = (0..=10).map(|i| 0.40 + 0.02 * i as f64).collect();
    let table = rate_sweep(&p, Scheme::Erasure, 500, 200, &grid, 1)?;
    for row in &table.rows {
        println!("rate {:.2}  success {:.3}", row.rate, row.success_rate);
    }
    println!("crossing {:?}, threshold {}", table.crossing, table.threshold);
    Ok(())
}
