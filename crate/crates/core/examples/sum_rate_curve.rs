//! Symmetric sum-rate of the inner bound against the outer bound as p_c
//! sweeps [0, 1] with p_d = 1.

use bfic::hk::sum_rate_curve;

fn main() -> bfic::Result<()> {
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    println!("{:>6} {:>9} {:>8} {:>8}", "p_c", "regime", "inner", "outer");
    for row in sum_rate_curve(1.0, &grid)? {
        println!(
            "{:>6.2} {:>9} {:>8.4} {:>8.4}",
            row.p_c,
            row.regime.as_str(),
            row.inner_sum,
            row.outer_sum
        );
    }
    Ok(())
}
