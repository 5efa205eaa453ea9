//! The 5-state contracted law and a sampling check of its receiver marginals.

use bfic::channel::{contracted_law, sample_contracted};
use bfic::rng::seeded;
use bfic::{ChannelParams, ContractedLaw};

fn main() -> bfic::Result<()> {
    let p = ChannelParams::new(0.8, 0.4)?;
    let law = contracted_law(&p, ContractedLaw::natural_tag(&p))?;
    println!("tag {:?}, marginal deviation {:.1e}", law.tag, law.marginal_deviation());
    for atom in &law.atoms {
        println!("  {:?}: {:.4}  {:?}", atom.id, atom.prob, atom.state);
    }

    let draws = 200_000;
    let mut rng = seeded(3);
    let mut rx1 = [0usize; 4];
    for _ in 0..draws {
        let s = sample_contracted(&law, &mut rng).state;
        rx1[s.g11 as usize * 2 + s.g21 as usize] += 1;
    }
    let exact = [
        p.q_d() * p.q_c(),
        p.q_d() * p.p_c(),
        p.p_d() * p.q_c(),
        p.p_d() * p.p_c(),
    ];
    for (i, (c, e)) in rx1.iter().zip(exact).enumerate() {
        println!(
            "  Rx1 (g11, g21) = ({}, {}): {:.4} vs {:.4}",
            i >> 1,
            i & 1,
            *c as f64 / draws as f64,
            e
        );
    }
    Ok(())
}
