//! Codewords from independent messages stay independent given the gains;
//! a shared message shows up as positive mutual information.

use bfic::entropy::{claim_mutual_information, verify_claim_independence, EncoderCoupling, EncoderPair};
use bfic::ChannelParams;

fn main() -> bfic::Result<()> {
    let p = ChannelParams::new(0.7, 0.4)?;
    let worst = (0..50)
        .map(|seed| verify_claim_independence(&p, 2, seed).map(|r| r.mutual_information))
        .collect::<bfic::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("independent messages, 50 encoder pairs: max I(X1;X2|G) = {worst:.2e}");

    let id: Vec<u32> = (0..4).collect();
    let shared = EncoderPair::new(2, id.clone(), id, EncoderCoupling::SharedMessage)?;
    println!(
        "shared message: I(X1;X2|G) = {:.4}",
        claim_mutual_information(&p, &shared)?
    );
    Ok(())
}
