//! Inner and outer regions for a few channels, with the vertices and the gap.

use bfic::regions::{classify_regime, inner_region, outer_region, region_gap};
use bfic::ChannelParams;

fn main() -> bfic::Result<()> {
    for (pd, pc) in [(1.0, 0.4), (0.5, 0.1), (1.0, 0.6), (0.5, 0.7)] {
        let p = ChannelParams::new(pd, pc)?;
        let inner = inner_region(&p)?;
        let outer = outer_region(&p)?;
        println!("p_d = {pd}, p_c = {pc}: {} regime", classify_regime(&p)?);
        for (name, r) in [("inner", &inner), ("outer", &outer)] {
            let pts: Vec<String> = r
                .vertices
                .iter()
                .map(|v| format!("({:.4}, {:.4})", v.r1, v.r2))
                .collect();
            println!("  {name}: {}", pts.join(" "));
        }
        println!("  gap: {:.4}", region_gap(&inner, &outer)?);
    }
    Ok(())
}
